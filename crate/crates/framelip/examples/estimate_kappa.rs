//! Empirical lower-Lipschitz search across all four operators, checked
//! against the theoretical sandwiches where they exist.
//!
//! Run with: cargo run --example estimate_kappa

use framelip::{
    estimate_kappa, make_doubled, make_mercedes_benz, make_standard_basis, AnalysisConfig,
    GateOperator, Measurement, ReluLayer, SatOperator,
};

fn report(name: &str, rep: &framelip::LipschitzReport) {
    print!("{name}: kappa_hat = {:.6}", rep.kappa_hat);
    if let (Some(lo), Some(hi)) = (rep.theoretical_lower, rep.theoretical_upper) {
        print!("  theory [{lo:.6}, {hi:.6}]");
    }
    println!("  ({} samples, {} refinement passes)", rep.samples_used, rep.refinement_steps);
}

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();

    let layer = ReluLayer::zero_bias(make_doubled(&make_standard_basis(2)?)?);
    let op = Measurement::Relu(&layer);
    report("relu (doubled basis)", &estimate_kappa(&op, op.default_domain(), &cfg)?);

    let sat = SatOperator::new(make_standard_basis(2)?, 1.0)?;
    let op = Measurement::Sat(&sat);
    report("sat (basis, lambda=1)", &estimate_kappa(&op, op.default_domain(), &cfg)?);

    let mb = make_mercedes_benz();
    let op = Measurement::Intensity(&mb);
    report("pr (mercedes-benz)", &estimate_kappa(&op, op.default_domain(), &cfg)?);

    let gate = GateOperator::new(make_doubled(&mb)?, 0.1)?;
    let op = Measurement::Gate(&gate);
    report("gate (doubled mb, exploratory)", &estimate_kappa(&op, op.default_domain(), &cfg)?);
    Ok(())
}
