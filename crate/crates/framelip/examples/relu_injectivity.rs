//! ReLU-layer injectivity: activation patterns, the constant A_alpha, and
//! the Lipschitz sandwich.
//!
//! Run with: cargo run --example relu_injectivity

use framelip::{
    enum_relu_patterns, make_doubled, make_standard_basis, relu_injectivity,
    relu_lipschitz_bounds, AnalysisConfig, ReluLayer,
};

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();

    // the standard basis fails: a quadrant with nothing active exists
    let basis = make_standard_basis(2)?;
    let patterns = enum_relu_patterns(&basis, &[0.0, 0.0], &cfg)?;
    println!("standard basis, zero bias: {} activation patterns", patterns.patterns.len());
    for p in &patterns.patterns {
        println!("  active = {}  witness = {:?}", p.active.bitstring(), p.witness);
    }
    let layer = ReluLayer::zero_bias(basis);
    let rep = relu_injectivity(&layer, &cfg)?;
    println!(
        "injective: {} (failing pattern: {})",
        rep.injective,
        rep.failing_pattern.as_ref().map(|p| p.active.bitstring()).unwrap_or_default()
    );

    // appending the negated vectors always repairs injectivity
    let doubled = ReluLayer::zero_bias(make_doubled(layer.frame())?);
    let rep = relu_injectivity(&doubled, &cfg)?;
    let (lo, hi) = relu_lipschitz_bounds(&rep)?;
    println!("\ndoubled basis: injective = {}, A_alpha = {:.6}", rep.injective, rep.a_alpha);
    println!("sandwich: {lo:.6} <= kappa_L <= {hi:.6}");
    Ok(())
}
