//! Gated measurements on the complement of the unit ball: coefficients below
//! the threshold are zeroed. The domain is not convex, so the injectivity
//! decision is three-valued: cells whose intersection with the domain cannot
//! be certified either way are reported honestly as inconclusive.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::frame::{sub_frame_lower_bound, Frame, IndexSet};
use crate::linalg::norm;
use crate::patterns::ternary_digits;
use crate::polytope::{feasible_point, lp_feasible, max_norm_vertex, Halfspace, LinearConstraint};

/// Gating: t passes through when |t| >= mu (closed), else becomes 0.
pub fn gate(t: f64, mu: f64) -> f64 {
    if t.abs() >= mu {
        t
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GateState {
    Pos,
    Off,
    Neg,
}

impl GateState {
    fn as_char(self) -> char {
        match self {
            GateState::Pos => '+',
            GateState::Off => 'o',
            GateState::Neg => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GatePattern {
    pub states: Vec<GateState>,
}

impl GatePattern {
    pub fn state_string(&self) -> String {
        self.states.iter().map(|s| s.as_char()).collect()
    }

    pub fn gated_set(&self) -> IndexSet {
        let idx: Vec<usize> = self
            .states
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != GateState::Off)
            .map(|(i, _)| i)
            .collect();
        IndexSet::from_indices(&idx, self.states.len())
    }
}

#[derive(Debug, Clone)]
pub struct GateOperator {
    frame: Frame,
    threshold: f64,
}

impl GateOperator {
    pub fn new(frame: Frame, threshold: f64) -> Result<Self> {
        if !(threshold.is_finite() && threshold > 0.0) {
            return Err(Error::Invalid(format!("gating threshold must be positive, got {threshold}")));
        }
        Ok(Self { frame, threshold })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let coeffs = self.frame.measure(x)?;
        Ok(coeffs.into_iter().map(|c| gate(c, self.threshold)).collect())
    }

    /// How far x sits inside the open unit ball; <= 0 on the domain.
    pub fn ball_deficit(&self, x: &[f64]) -> f64 {
        1.0 - norm(x)
    }

    /// Indices with |<x, phi_i>| >= mu (closed).
    pub fn gated_set(&self, x: &[f64]) -> Result<IndexSet> {
        let coeffs = self.frame.measure(x)?;
        let mut s = IndexSet::empty(self.frame.m());
        for (i, c) in coeffs.iter().enumerate() {
            if c.abs() >= self.threshold {
                s.insert(i);
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateVerdict {
    Injective,
    NotInjective,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct GateReport {
    pub verdict: GateVerdict,
    pub failing_pattern: Option<GatePattern>,
    /// A point of norm >= 1 realizing the failing pattern.
    pub witness: Option<Vec<f64>>,
    /// Number of non-spanning cells whose domain intersection could not be
    /// certified either way.
    pub inconclusive_count: usize,
    pub pattern_count: usize,
    pub sampled: bool,
    pub config: AnalysisConfig,
}

fn states_from_code(code: u64, m: usize) -> Vec<GateState> {
    ternary_digits(code, m)
        .into_iter()
        .map(|d| match d {
            0 => GateState::Pos,
            1 => GateState::Off,
            _ => GateState::Neg,
        })
        .collect()
}

fn cell_halfspaces(f: &Frame, mu: f64, states: &[GateState], margin: f64) -> Vec<Halfspace> {
    let mut hs = Vec::new();
    for (i, s) in states.iter().enumerate() {
        let phi = f.vector(i).to_vec();
        match s {
            GateState::Pos => hs.push(Halfspace::ge(phi, mu + margin)),
            GateState::Neg => hs.push(Halfspace::le(phi, -mu - margin)),
            GateState::Off => {
                hs.push(Halfspace::le(phi.clone(), mu - margin));
                hs.push(Halfspace::ge(phi, -(mu - margin)));
            }
        }
    }
    hs
}

enum CellDomain {
    /// Cell meets {||x|| >= 1}; witness supplied.
    Meets(Vec<f64>),
    /// Cell lies strictly inside the open ball.
    Avoids,
    Empty,
    Inconclusive,
}

/// Decides whether a convex cell intersects the ball complement. Unbounded
/// nonempty cells always do (walk along a recession direction); bounded
/// cells are settled exactly by their max-norm vertex unless it sits on the
/// unit sphere within tolerance.
fn cell_vs_domain(hs: &[Halfspace], dim: usize, cfg: &AnalysisConfig) -> Result<CellDomain> {
    let Some(p) = feasible_point(hs, dim, cfg)? else {
        return Ok(CellDomain::Empty);
    };
    if norm(&p) >= 1.0 {
        return Ok(CellDomain::Meets(p));
    }

    // recession cone probe: a nonzero direction must have some coordinate of
    // magnitude >= its infinity norm, so 2n homogeneous LPs are exhaustive
    let homogeneous: Vec<Halfspace> = hs
        .iter()
        .map(|h| Halfspace { normal: h.normal.clone(), offset: 0.0, sense: h.sense })
        .collect();
    for j in 0..dim {
        for sgn in [1.0_f64, -1.0] {
            let mut probe: Vec<LinearConstraint> =
                homogeneous.iter().cloned().map(LinearConstraint::closed).collect();
            let mut e = vec![0.0; dim];
            e[j] = sgn;
            probe.push(LinearConstraint::closed(Halfspace::ge(e, 1.0)));
            if let Some(d) = lp_feasible(&probe, dim, 0.0, cfg)? {
                let t = (2.0 + 2.0 * norm(&p)) / norm(&d);
                let far: Vec<f64> = p.iter().zip(&d).map(|(pi, di)| pi + t * di).collect();
                debug_assert!(norm(&far) >= 1.0);
                return Ok(CellDomain::Meets(far));
            }
        }
    }

    // bounded cell: exact max-norm vertex
    match max_norm_vertex(hs, dim) {
        Some((v, nv)) => {
            if nv >= 1.0 + cfg.ball_tol {
                Ok(CellDomain::Meets(v))
            } else if nv <= 1.0 - cfg.ball_tol {
                Ok(CellDomain::Avoids)
            } else {
                Ok(CellDomain::Inconclusive)
            }
        }
        None => Ok(CellDomain::Inconclusive),
    }
}

/// Three-valued injectivity decision for the gated operator on the ball
/// complement. Only cells whose gated collection fails to span can break
/// injectivity, so the domain question is settled for exactly those.
pub fn gate_injectivity(op: &GateOperator, cfg: &AnalysisConfig) -> Result<GateReport> {
    let f = op.frame();
    let m = f.m();
    if m > cfg.sat_pattern_cap {
        if !cfg.sampling_fallback {
            return Err(Error::TooManyIndices {
                context: "gating pattern enumeration".into(),
                m,
                cap: cfg.sat_pattern_cap,
            });
        }
        return Ok(gate_injectivity_sampled(op, cfg));
    }

    let margin = cfg.strict_margin;
    let mut inconclusive_count = 0;
    let mut pattern_count = 0;
    let mut failing: Option<(GatePattern, Vec<f64>)> = None;
    for code in 0..3u64.pow(m as u32) {
        let states = states_from_code(code, m);
        let pattern = GatePattern { states };
        let spanning =
            sub_frame_lower_bound(f, &pattern.gated_set(), cfg)? > cfg.frame_tol;
        let hs = cell_halfspaces(f, op.threshold(), &pattern.states, margin);
        if spanning {
            // cells that keep a frame cannot break injectivity; counting
            // them only needs nonemptiness
            if feasible_point(&hs, f.n(), cfg)?.is_some() {
                pattern_count += 1;
            }
            continue;
        }
        match cell_vs_domain(&hs, f.n(), cfg)? {
            CellDomain::Meets(witness) => {
                pattern_count += 1;
                if failing.is_none() {
                    failing = Some((pattern, witness));
                }
            }
            CellDomain::Avoids => {
                pattern_count += 1;
            }
            CellDomain::Empty => {}
            CellDomain::Inconclusive => {
                pattern_count += 1;
                inconclusive_count += 1;
            }
        }
        if failing.is_some() {
            break;
        }
    }

    let verdict = if failing.is_some() {
        GateVerdict::NotInjective
    } else if inconclusive_count > 0 {
        GateVerdict::Inconclusive
    } else {
        GateVerdict::Injective
    };
    let (failing_pattern, witness) = match failing {
        Some((p, w)) => (Some(p), Some(w)),
        None => (None, None),
    };
    Ok(GateReport {
        verdict,
        failing_pattern,
        witness,
        inconclusive_count,
        pattern_count,
        sampled: false,
        config: cfg.clone(),
    })
}

/// Sampling fallback above the cap: only a non-injectivity witness can be
/// certified; otherwise the verdict stays inconclusive.
fn gate_injectivity_sampled(op: &GateOperator, cfg: &AnalysisConfig) -> GateReport {
    let f = op.frame();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let band = 2.0 * cfg.strict_margin;
    let mut seen = std::collections::BTreeSet::new();
    let mut failing: Option<(GatePattern, Vec<f64>)> = None;
    for _ in 0..cfg.sample_budget {
        let dir: Vec<f64> = (0..f.n()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let len = norm(&dir);
        if len < 1e-9 {
            continue;
        }
        let r = 1.0 + 2.0 * rng.random_range(0.0..1.0f64);
        let x: Vec<f64> = dir.iter().map(|v| v * r / len).collect();
        let coeffs = f.measure(&x).expect("dimension fixed");
        if coeffs.iter().any(|c| (c.abs() - op.threshold()).abs() < band) {
            continue;
        }
        let states: Vec<GateState> = coeffs
            .iter()
            .map(|&c| {
                if c >= op.threshold() {
                    GateState::Pos
                } else if c <= -op.threshold() {
                    GateState::Neg
                } else {
                    GateState::Off
                }
            })
            .collect();
        let pattern = GatePattern { states };
        let code: String = pattern.state_string();
        if seen.insert(code) && failing.is_none() {
            let ok = sub_frame_lower_bound(f, &pattern.gated_set(), cfg)
                .map(|b| b > cfg.frame_tol)
                .unwrap_or(false);
            if !ok {
                failing = Some((pattern, x));
                break;
            }
        }
    }
    let verdict = if failing.is_some() { GateVerdict::NotInjective } else { GateVerdict::Inconclusive };
    let pattern_count = seen.len();
    let (failing_pattern, witness) = match failing {
        Some((p, w)) => (Some(p), Some(w)),
        None => (None, None),
    };
    GateReport {
        verdict,
        failing_pattern,
        witness,
        inconclusive_count: 0,
        pattern_count,
        sampled: true,
        config: cfg.clone(),
    }
}
