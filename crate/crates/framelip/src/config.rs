use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances, margins, caps, and seeds shared by every analysis.
///
/// Each report echoes the configuration it was produced with, so two runs can
/// be compared field by field. All decisions that are sensitive to floating
/// point (boundary merging, feasibility margins, bisection width) are
/// controlled from here rather than by constants buried in the algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Maximum tolerated asymmetry (relative to the largest entry) before
    /// `sym_eig` rejects its input.
    pub sym_tol: f64,
    /// Residual tolerance for the eigendecomposition invariants
    /// |Q^T Q - I| and |S Q - Q L|.
    pub eig_tol: f64,
    /// Off-diagonal threshold at which Jacobi sweeps stop.
    pub jacobi_off_tol: f64,
    /// Sweep cap for the Jacobi eigensolver.
    pub jacobi_max_sweeps: usize,
    /// Target accuracy of the min-norm-in-polytope solver.
    pub qp_tol: f64,
    /// Cycle cap for the Dykstra projection loop.
    pub qp_max_cycles: usize,
    /// Pivot cap for the phase-1 simplex.
    pub lp_max_pivots: usize,
    /// Margin used to represent strict inequalities; patterns realizable only
    /// within this margin of a boundary are merged into their closed
    /// neighbors.
    pub strict_margin: f64,
    /// A collection with lower frame bound at or below this is treated as
    /// "not a frame".
    pub frame_tol: f64,
    /// Slack allowed on unit-ball domain membership checks.
    pub ball_tol: f64,
    /// Bracket width at which the critical-level bisection stops.
    pub lambda_tol: f64,
    /// Iteration cap for the critical-level bisection.
    pub lambda_max_bisections: usize,
    /// Largest m for which 2^m pattern enumeration runs exhaustively.
    pub pattern_cap: usize,
    /// Largest m for which 3^m saturation/gating enumeration runs.
    pub sat_pattern_cap: usize,
    /// Whether enumeration may fall back to seeded sampling above the caps.
    pub sampling_fallback: bool,
    /// Sample budget for the pattern-sampling fallback and oracles.
    pub sample_budget: usize,
    /// Random-pair budget for the Lipschitz-ratio search.
    pub kappa_budget: usize,
    /// Outer-iteration cap for coordinate-descent refinement.
    pub refine_cap: usize,
    /// Refinement stops once the coordinate step falls below this.
    pub refine_min_step: f64,
    /// Slack allowed when checking empirical estimates against theoretical
    /// bounds.
    pub cert_tol: f64,
    /// Seed for every randomized routine.
    pub seed: u64,
    /// Worker cap for the sampling phase. `None` reads FRAMELIP_THREADS or
    /// the machine parallelism at run time; results never depend on it.
    pub threads: Option<usize>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            sym_tol: 1e-9,
            eig_tol: 1e-9,
            jacobi_off_tol: 1e-12,
            jacobi_max_sweeps: 100,
            qp_tol: 1e-8,
            qp_max_cycles: 10_000,
            lp_max_pivots: 10_000,
            strict_margin: 1e-7,
            frame_tol: 1e-10,
            ball_tol: 1e-9,
            lambda_tol: 1e-6,
            lambda_max_bisections: 40,
            pattern_cap: 22,
            sat_pattern_cap: 14,
            sampling_fallback: true,
            sample_budget: 1_000_000,
            kappa_budget: 20_000,
            refine_cap: 300,
            refine_min_step: 1e-8,
            cert_tol: 1e-6,
            seed: 0,
            threads: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sym_tol", self.sym_tol),
            ("eig_tol", self.eig_tol),
            ("jacobi_off_tol", self.jacobi_off_tol),
            ("qp_tol", self.qp_tol),
            ("strict_margin", self.strict_margin),
            ("frame_tol", self.frame_tol),
            ("ball_tol", self.ball_tol),
            ("lambda_tol", self.lambda_tol),
            ("refine_min_step", self.refine_min_step),
            ("cert_tol", self.cert_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Invalid(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if self.kappa_budget < 1_000 {
            return Err(Error::Invalid(format!(
                "kappa_budget must be at least 1000, got {}",
                self.kappa_budget
            )));
        }
        Ok(())
    }

    /// Number of sampling workers to use, honoring FRAMELIP_THREADS.
    /// Results are required to be independent of this value.
    pub fn resolve_threads(&self) -> usize {
        let cap = self
            .threads
            .or_else(|| {
                std::env::var("FRAMELIP_THREADS")
                    .ok()
                    .and_then(|s| s.trim().parse::<usize>().ok())
            })
            .unwrap_or_else(|| {
                std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
            });
        cap.clamp(1, 64)
    }
}
