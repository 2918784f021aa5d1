//! The doubled-frame construction: appending -phi_i to a frame makes the
//! zero-bias ReLU layer injective with A_alpha = A, and its optimal lower
//! Lipschitz bound is exactly sqrt(A/2), attained by an antipodal pair.
//!
//! Run with: cargo run --example doubled_frame

use framelip::{
    doubled_frame_kappa, estimate_kappa, frame_bounds, make_doubled, make_random,
    relu_injectivity, AnalysisConfig, Measurement, ReluLayer,
};

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();

    for seed in [7u64, 21, 99] {
        let base = make_random(3, 4, seed)?;
        let a = frame_bounds(&base, &cfg)?.lower;
        let layer = ReluLayer::zero_bias(make_doubled(&base)?);

        let rep = relu_injectivity(&layer, &cfg)?;
        let exact = doubled_frame_kappa(&base, &cfg)?;
        let op = Measurement::Relu(&layer);
        let est = estimate_kappa(&op, op.default_domain(), &cfg)?;

        println!("seed {seed}: A = {a:.6}");
        println!("  A_alpha from enumeration  = {:.6}", rep.a_alpha);
        println!("  exact kappa  sqrt(A/2)    = {:.6}", exact.kappa);
        println!("  empirical kappa_hat       = {:.6}", est.kappa_hat);
        println!("  antipodal witness         = {:?}", exact.witness.0);
    }
    Ok(())
}
