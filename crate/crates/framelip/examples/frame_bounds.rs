//! Frames, optimal frame bounds, and sub-collection bounds.
//!
//! Run with: cargo run --example frame_bounds

use framelip::{
    frame_bounds, frame_to_json, make_mercedes_benz, make_random, make_simplex_funtf,
    sub_frame_lower_bound, AnalysisConfig, IndexSet,
};

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();

    let mb = make_mercedes_benz();
    let b = frame_bounds(&mb, &cfg)?;
    println!("mercedes-benz: A = {:.6}, B = {:.6}", b.lower, b.upper);

    for drop in 0..mb.m() {
        let keep: Vec<usize> = (0..mb.m()).filter(|&i| i != drop).collect();
        let j = IndexSet::from_indices(&keep, mb.m());
        println!(
            "  without element {drop}: lower bound {:.6}",
            sub_frame_lower_bound(&mb, &j, &cfg)?
        );
    }

    for n in 2..=4 {
        let f = make_simplex_funtf(n)?;
        let b = frame_bounds(&f, &cfg)?;
        println!("simplex funtf n={n}: A = B = {:.6} (expected {:.6})", b.lower, (n as f64 + 1.0) / n as f64);
    }

    let f = make_random(3, 7, 42)?;
    let b = frame_bounds(&f, &cfg)?;
    println!("random 7x3 (seed 42): A = {:.6}, B = {:.6}", b.lower, b.upper);

    println!("\nframe file format:\n{}", frame_to_json(&mb));
    Ok(())
}
