//! Saturated measurements on the unit ball: injectivity across levels, the
//! pair-specific Delta bound, and the Lipschitz sandwiches.
//!
//! Run with: cargo run --example saturation

use framelip::{
    make_simplex_funtf, make_standard_basis, sat_injectivity, sat_lipschitz_bounds,
    sat_lipschitz_bounds_nplus1, sat_pointwise_lower, AnalysisConfig, SatOperator,
};

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();

    let basis = make_standard_basis(2)?;
    for lambda in [0.5, 1.0] {
        let op = SatOperator::new(basis.clone(), lambda)?;
        let rep = sat_injectivity(&op, &cfg)?;
        print!("basis at lambda = {lambda}: injective = {}", rep.injective);
        match rep.failing_pattern.as_ref() {
            Some(p) => println!(" (failing pattern {})", p.state_string()),
            None => {
                let (lo, hi) = sat_lipschitz_bounds(&rep)?;
                println!(", A_lambda = {:.4}, sandwich [{lo:.4}, {hi:.4}]", rep.a_lambda);
            }
        }
    }

    // a pair with opposite saturation: the bound is met with equality
    let line = framelip::Frame::new(vec![vec![1.0]], None, &cfg)?;
    let op = SatOperator::new(line, 0.5)?;
    let bound = sat_pointwise_lower(&op, &[1.0], &[-1.0], &cfg)?;
    let gap: f64 = op
        .apply(&[1.0])?
        .iter()
        .zip(&op.apply(&[-1.0])?)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    println!("\nopposite saturation in R^1: bound {bound:.4} <= gap {gap:.4}");

    // n+1 unit-norm tight frames drop lambda from the lower bound
    for n in [2usize, 3, 4] {
        let f = make_simplex_funtf(n)?;
        let op = SatOperator::new(f.clone(), 0.9)?;
        let rep = sat_injectivity(&op, &cfg)?;
        let (lo, hi) = sat_lipschitz_bounds_nplus1(&rep, &f)?;
        println!(
            "funtf n={n}, lambda=0.9: A_lambda = {:.6} = 1/{n}, sandwich [{lo:.6}, {hi:.6}]",
            rep.a_lambda
        );
    }
    Ok(())
}
