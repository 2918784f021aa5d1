//! Real phase retrieval: the complement property, its quantitative
//! constant sigma^2, the sign-split constant A_abs, and the improved
//! sandwich for the intensity map on the sign quotient.
//!
//! Run with: cargo run --example phase_retrieval

use framelip::{
    make_mercedes_benz, make_random, make_standard_basis, pr_analysis, AnalysisConfig, Frame,
};

fn show(name: &str, frame: &Frame, cfg: &AnalysisConfig) -> framelip::Result<()> {
    let analysis = pr_analysis(frame, cfg)?;
    println!("{name}:");
    println!(
        "  complement property: {} (sigma^2 = {:.6})",
        analysis.complement.holds, analysis.complement.sigma_sq
    );
    println!(
        "  A_abs = {:.6} over {} chambers (worst product {})",
        analysis.a_abs.a_abs,
        analysis.a_abs.chamber_count,
        analysis
            .a_abs
            .worst_product_pattern
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect::<String>()
    );
    match analysis.bounds {
        Some(b) => {
            println!("  sigma sandwich    [{:.6}, {:.6}]", b.bandeira.0, b.bandeira.1);
            println!("  A_abs sandwich    [{:.6}, {:.6}]", b.a_form.0, b.a_form.1);
            println!("  improved sandwich [{:.6}, {:.6}]", b.improved.0, b.improved.1);
        }
        None => println!("  not phase-retrievable: no Lipschitz bounds"),
    }
    Ok(())
}

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig::default();
    show("mercedes-benz (A_abs = sigma^2)", &make_mercedes_benz(), &cfg)?;
    let two_copies = Frame::new(vec![vec![1.0], vec![1.0]], None, &cfg)?;
    show("two copies of 1 in R^1 (A_abs = 2 sigma^2)", &two_copies, &cfg)?;
    show("standard basis R^2 (fails)", &make_standard_basis(2)?, &cfg)?;
    show("random 5x3", &make_random(3, 5, 11)?, &cfg)?;
    Ok(())
}
