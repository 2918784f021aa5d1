//! Open-problem sweeps: empirical tables of estimate-to-bound ratios across
//! random instances. Exploratory only; nothing is asserted.
//!
//! Run with: cargo run --example sweeps

use framelip::{sweep_open_problem, AnalysisConfig, SweepKind};

fn main() -> framelip::Result<()> {
    let cfg = AnalysisConfig { kappa_budget: 4_000, ..AnalysisConfig::default() };

    // doubled frames: the known extremal family pins kappa/sqrt(A) at 1/sqrt(2)
    let table = sweep_open_problem(SweepKind::ReluK { generic: false }, 6, &cfg)?;
    println!("relu-K over doubled frames ({} rows):", table.rows.len());
    print!("{}", table.to_csv());

    // generic layers explore the [1/2, 1] window of kappa/sqrt(A_alpha)
    let table = sweep_open_problem(SweepKind::ReluK { generic: true }, 6, &cfg)?;
    println!(
        "\nrelu-K over generic layers ({} rows, {} non-injective draws skipped):",
        table.rows.len(),
        table.skipped_non_injective
    );
    print!("{}", table.to_csv());

    let table = sweep_open_problem(SweepKind::SatF, 6, &cfg)?;
    println!(
        "\nsat-f ({} rows, {} skipped): each row satisfies kappa_hat >= min(sqrt(A)/2, lambda)",
        table.rows.len(),
        table.skipped_non_injective
    );
    print!("{}", table.to_csv());
    Ok(())
}
