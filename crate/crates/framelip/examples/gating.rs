//! Gated measurements off the unit ball: small coefficients are zeroed.
//! The domain is nonconvex, so the decision is three-valued; cells that
//! cannot be certified either way degrade the verdict instead of being
//! silently resolved.
//!
//! Run with: cargo run --example gating

use framelip::{
    gate_injectivity, make_doubled, make_mercedes_benz, make_standard_basis, AnalysisConfig,
    GateOperator,
};

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();

    // hiding one coordinate below the threshold breaks the basis
    let op = GateOperator::new(make_standard_basis(2)?, 0.1)?;
    let rep = gate_injectivity(&op, &cfg)?;
    println!("standard basis, mu = 0.1: {:?}", rep.verdict);
    if let (Some(p), Some(w)) = (&rep.failing_pattern, &rep.witness) {
        println!("  failing pattern {} at witness {:?}", p.state_string(), w);
        // nudging x along an off direction leaves the output unchanged
        let off = p.state_string().find('o').expect("failing pattern has an off index");
        let mut w2 = w.clone();
        for (i, v) in op.frame().vector(off).iter().enumerate() {
            w2[i] += 0.4 * op.threshold() * v;
        }
        let (a, b) = (op.apply(w)?, op.apply(&w2)?);
        assert_eq!(a, b);
        println!("  collision: G({w:?}) = G({w2:?}) = {a:?}");
    }

    // six directions leave a spanning pair gated everywhere outside the ball
    let op = GateOperator::new(make_doubled(&make_mercedes_benz())?, 0.1)?;
    let rep = gate_injectivity(&op, &cfg)?;
    println!("doubled mercedes-benz, mu = 0.1: {:?}", rep.verdict);

    // a cell whose farthest vertex sits exactly on the unit sphere
    let op = GateOperator::new(
        make_doubled(&make_mercedes_benz())?,
        0.5 + cfg.strict_margin,
    )?;
    let rep = gate_injectivity(&op, &cfg)?;
    println!(
        "doubled mercedes-benz, mu = 0.5 + margin: {:?} ({} cells uncertified)",
        rep.verdict, rep.inconclusive_count
    );
    Ok(())
}
