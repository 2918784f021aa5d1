//! Bisection for the critical saturation level: the smallest lambda at
//! which clipping is injective on the unit ball. Injectivity at that level
//! already implies bi-Lipschitz stability.
//!
//! Run with: cargo run --example critical_level

use framelip::{
    critical_lambda, estimate_kappa, make_mercedes_benz, make_standard_basis, sat_injectivity,
    sat_lipschitz_bounds, AnalysisConfig, Domain, Measurement, SatOperator,
};

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();

    for (name, frame) in [
        ("standard basis R^2", make_standard_basis(2)?),
        ("mercedes-benz", make_mercedes_benz()),
    ] {
        let rep = critical_lambda(&frame, &cfg)?;
        println!(
            "{name}: lambda_c = {:.7} after {} bisections (bracket width {:.1e})",
            rep.lambda_c,
            rep.iterations,
            rep.bracket.1 - rep.bracket.0
        );
        println!(
            "  probes: injective above = {}, non-injective below = {}",
            rep.injective_above, rep.non_injective_below
        );

        // stability at the critical level: the sandwich is nondegenerate
        let op = SatOperator::new(frame.clone(), rep.lambda_c)?;
        let inj = sat_injectivity(&op, &cfg)?;
        let (lo, hi) = sat_lipschitz_bounds(&inj)?;
        let est = estimate_kappa(&Measurement::Sat(&op), Domain::UnitBall, &cfg)?;
        println!(
            "  at lambda_c: A_lambda = {:.6}, sandwich [{lo:.6}, {hi:.6}], kappa_hat = {:.6}",
            inj.a_lambda, est.kappa_hat
        );
    }
    Ok(())
}
