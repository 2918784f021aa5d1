//! Injectivity and lower Lipschitz bounds for non-linear measurements over
//! finite frames in R^n.
//!
//! Four component-wise activations sit behind one linear measurement map:
//! ReLU layers on R^n, saturation (clipping) on the unit ball, gating on the
//! complement of the unit ball, and the intensity (magnitude) map on the
//! sign quotient. In each case injectivity reduces to "every realizable
//! activation pattern leaves a spanning sub-collection", and the optimal
//! lower Lipschitz bound is sandwiched by explicit constants built from
//! sub-collection frame bounds. This crate decides the injectivity
//! questions exactly at desk scale, computes the structural constants
//! (A_alpha, A_lambda, sigma^2, A_abs, lambda_c), evaluates the sandwiches,
//! and certifies them against a seeded empirical search for the minimal
//! Lipschitz ratio.
//!
//! ## Examples
//!
//! The `examples/` directory is the front door; each file is a runnable tour
//! of one capability:
//!
//! ```text
//! cargo run --example frame_bounds        # frames, bounds, sub-collections
//! cargo run --example relu_injectivity    # activation patterns and A_alpha
//! cargo run --example doubled_frame       # the exact sqrt(A/2) construction
//! cargo run --example saturation          # clipping, the Delta bound, sandwiches
//! cargo run --example critical_level      # bisection for lambda_c
//! cargo run --example phase_retrieval     # complement property, sigma^2, A_abs
//! cargo run --example gating              # three-valued verdict off the ball
//! cargo run --example estimate_kappa      # empirical kappa search
//! cargo run --example sweeps              # open-problem tables as CSV
//! ```
//!
//! A thin CLI (`framelip`) exposes the same analyses as subcommands with
//! JSON reports; see the repository README.
//!
//! ## Quick start
//!
//! ```
//! use framelip::{AnalysisConfig, make_mercedes_benz, frame_bounds};
//!
//! let cfg = AnalysisConfig::default();
//! let frame = make_mercedes_benz();
//! let bounds = frame_bounds(&frame, &cfg).unwrap();
//! assert!((bounds.lower - 1.5).abs() < 1e-9);
//! ```

pub mod config;
pub mod error;
pub mod frame;
pub mod gating;
pub mod jsonfmt;
pub mod linalg;
pub mod lipschitz;
pub mod patterns;
pub mod phase_retrieval;
pub mod polytope;
pub mod relu;
pub mod report;
pub mod saturation;

pub use config::AnalysisConfig;
pub use error::{Error, Result};
pub use frame::{
    frame_bounds, frame_from_csv, frame_from_json, frame_to_csv, frame_to_json, make_doubled,
    make_mercedes_benz, make_random, make_simplex_funtf, make_standard_basis, read_frame_file,
    sub_frame_lower_bound, write_frame_file, Frame, FrameBounds, IndexSet,
};
pub use gating::{gate_injectivity, GateOperator, GateReport, GateVerdict};
pub use lipschitz::{
    estimate_kappa, estimate_kappa_traced, ratio, sweep_open_problem, Domain, LipschitzReport,
    Measurement, SweepKind, SweepTable,
};
pub use patterns::{
    enum_relu_patterns, enum_sat_patterns, enum_sign_chambers, EnumMethod, PatternSet,
    ReluPattern, SatPattern, SatState, SignChamber,
};
pub use phase_retrieval::{
    a_abs, complement_property, intensity_apply, pr_analysis, pr_lipschitz_bounds,
    quotient_distance, AAbsReport, ComplementReport, PrAnalysis, PrBounds,
};
pub use relu::{
    doubled_frame_kappa, relu_injectivity, relu_lipschitz_bounds, DoubledKappa, ReluInjectivityReport,
    ReluLayer,
};
pub use report::{sha256_hex, Report};
pub use saturation::{
    critical_lambda, delta_data, sat_injectivity, sat_lipschitz_bounds,
    sat_lipschitz_bounds_nplus1, sat_pointwise_lower, CriticalLambdaReport, DeltaData,
    SatInjectivityReport, SatOperator,
};
