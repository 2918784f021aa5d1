//! Empirical estimation of optimal lower Lipschitz bounds: seeded
//! random-pair search plus analytically seeded witness pairs, followed by
//! coordinate-descent refinement of the best pair. Results are deterministic
//! for a fixed seed regardless of the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::frame::{frame_bounds, Frame, IndexSet};
use crate::gating::GateOperator;
use crate::jsonfmt::fmt_f64;
use crate::linalg::{add, norm, norm_sq, scale, sub, sym_eig};
use crate::patterns::SatState;
use crate::phase_retrieval::{intensity_apply, pr_analysis, quotient_distance};
use crate::relu::{relu_injectivity, relu_lipschitz_bounds, ReluLayer};
use crate::saturation::{sat_injectivity, sat_lipschitz_bounds, SatOperator};

/// Any of the four measurement operators, borrowed for estimation.
pub enum Measurement<'a> {
    Relu(&'a ReluLayer),
    Sat(&'a SatOperator),
    Intensity(&'a Frame),
    Gate(&'a GateOperator),
}

impl Measurement<'_> {
    pub fn frame(&self) -> &Frame {
        match self {
            Measurement::Relu(l) => l.frame(),
            Measurement::Sat(s) => s.frame(),
            Measurement::Intensity(f) => f,
            Measurement::Gate(g) => g.frame(),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.frame().n()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            Measurement::Relu(l) => l.apply(x),
            Measurement::Sat(s) => s.apply(x),
            Measurement::Intensity(f) => intensity_apply(f, x),
            Measurement::Gate(g) => g.apply(x),
        }
    }

    /// Domain metric: Euclidean, except the sign quotient for intensities.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Measurement::Intensity(_) => quotient_distance(x, y),
            _ => norm(&sub(x, y)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Measurement::Relu(_) => "relu",
            Measurement::Sat(_) => "sat",
            Measurement::Intensity(_) => "pr",
            Measurement::Gate(_) => "gate",
        }
    }

    pub fn default_domain(&self) -> Domain {
        match self {
            Measurement::Relu(_) => Domain::BoxRn { radius: 3.0 },
            Measurement::Sat(_) => Domain::UnitBall,
            Measurement::Intensity(_) => Domain::Quotient { radius: 3.0 },
            Measurement::Gate(_) => Domain::BallComplement { outer: 3.0 },
        }
    }
}

/// Sampling domain for the random phase and the projection target for
/// refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    BoxRn { radius: f64 },
    UnitBall,
    BallComplement { outer: f64 },
    Quotient { radius: f64 },
}

impl Domain {
    pub fn describe(&self) -> String {
        match self {
            Domain::BoxRn { radius } => format!("box-rn(R={radius})"),
            Domain::UnitBall => "unit-ball".into(),
            Domain::BallComplement { outer } => format!("ball-complement(R={outer})"),
            Domain::Quotient { radius } => format!("quotient(R={radius})"),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        match self {
            Domain::BoxRn { radius } => {
                let raw: Vec<f64> =
                    (0..n).map(|_| 0.5 * radius * rng.sample::<f64, _>(StandardNormal)).collect();
                raw.into_iter().map(|v| v.clamp(-*radius, *radius)).collect()
            }
            Domain::UnitBall => {
                let g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let len = norm(&g);
                if len < 1e-12 {
                    return vec![0.0; n];
                }
                let u: f64 = rng.random_range(0.0..1.0);
                let r = u.powf(1.0 / n as f64);
                g.iter().map(|v| v * r / len).collect()
            }
            Domain::BallComplement { outer } => {
                let g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let len = norm(&g).max(1e-12);
                let r = 1.0 + (outer - 1.0) * rng.random_range(0.0..1.0f64);
                g.iter().map(|v| v * r / len).collect()
            }
            Domain::Quotient { radius } => {
                let raw: Vec<f64> =
                    (0..n).map(|_| 0.5 * radius * rng.sample::<f64, _>(StandardNormal)).collect();
                canonicalize_sign(raw)
            }
        }
    }

    fn project(&self, x: Vec<f64>) -> Vec<f64> {
        match self {
            Domain::BoxRn { radius } => x.into_iter().map(|v| v.clamp(-*radius, *radius)).collect(),
            Domain::UnitBall => {
                let len = norm(&x);
                if len > 1.0 {
                    scale(&x, 1.0 / len)
                } else {
                    x
                }
            }
            Domain::BallComplement { outer } => {
                let len = norm(&x);
                if len < 1e-12 {
                    let mut e = vec![0.0; x.len()];
                    e[0] = 1.0;
                    e
                } else if len < 1.0 {
                    scale(&x, 1.0 / len)
                } else if len > *outer {
                    scale(&x, outer / len)
                } else {
                    x
                }
            }
            Domain::Quotient { radius } => {
                let clamped: Vec<f64> = x.into_iter().map(|v| v.clamp(-*radius, *radius)).collect();
                canonicalize_sign(clamped)
            }
        }
    }

    /// Refinement must not evict an analytically injected pair, so the
    /// projection target grows to contain the incumbent.
    fn expand_to_cover(&self, points: &[&[f64]]) -> Domain {
        match self {
            Domain::BoxRn { radius } => {
                let mx = points
                    .iter()
                    .flat_map(|p| p.iter())
                    .fold(*radius, |a, v| a.max(v.abs()));
                Domain::BoxRn { radius: mx }
            }
            Domain::BallComplement { outer } => {
                let mx = points.iter().fold(*outer, |a, p| a.max(norm(p)));
                Domain::BallComplement { outer: mx }
            }
            Domain::Quotient { radius } => {
                let mx = points
                    .iter()
                    .flat_map(|p| p.iter())
                    .fold(*radius, |a, v| a.max(v.abs()));
                Domain::Quotient { radius: mx }
            }
            Domain::UnitBall => Domain::UnitBall,
        }
    }
}

fn canonicalize_sign(mut x: Vec<f64>) -> Vec<f64> {
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            for v in &mut x {
                *v = -*v;
            }
        }
    }
    x
}

/// ||Phi(x) - Phi(y)|| / d(x, y) with the operator's domain metric.
pub fn ratio(op: &Measurement, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = op.distance(x, y);
    if d <= 1e-12 {
        return Err(Error::ZeroDistance);
    }
    let fx = op.apply(x)?;
    let fy = op.apply(y)?;
    Ok(norm(&sub(&fx, &fy)) / d)
}

#[derive(Debug, Clone)]
pub struct LipschitzReport {
    /// Minimal witnessed ratio after refinement; an upper bound on the true
    /// optimal lower Lipschitz bound.
    pub kappa_hat: f64,
    pub witness_pair: (Vec<f64>, Vec<f64>),
    pub theoretical_lower: Option<f64>,
    pub theoretical_upper: Option<f64>,
    pub injective: Option<bool>,
    pub samples_used: usize,
    pub refinement_steps: usize,
    pub domain: String,
    pub warnings: Vec<String>,
    pub config: AnalysisConfig,
}

struct TheoryInfo {
    lower: Option<f64>,
    upper: Option<f64>,
    injective: Option<bool>,
    injections: Vec<(Vec<f64>, Vec<f64>)>,
    warnings: Vec<String>,
}

fn bottom_of(f: &Frame, j: &IndexSet, cfg: &AnalysisConfig) -> Result<Vec<f64>> {
    Ok(sym_eig(&f.sub_frame_operator(j), cfg)?.bottom_vector())
}

/// Pairs (w + t d, w - t d) with t small enough that both points keep the
/// witness's pattern; the ratio of such a pair equals the square root of the
/// restricted quadratic form at d.
fn straddle_pairs(w: &[f64], d: &[f64], t_max: f64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = Vec::new();
    if !(t_max.is_finite() && t_max > 0.0) {
        return out;
    }
    for div in [1.0, 8.0, 64.0] {
        let t = 0.45 * t_max / div;
        if t <= 0.0 {
            continue;
        }
        let step = scale(d, t);
        out.push((add(w, &step), sub(w, &step)));
    }
    out
}

fn relu_theory(layer: &ReluLayer, cfg: &AnalysisConfig) -> Result<TheoryInfo> {
    let rep = relu_injectivity(layer, cfg)?;
    let f = layer.frame();
    let mut injections = Vec::new();
    let mut warnings = Vec::new();

    let u = bottom_of(f, &IndexSet::full(f.m()), cfg)?;
    injections.push((u.clone(), scale(&u, -1.0)));

    let w = &rep.worst_pattern.witness;
    let d = bottom_of(f, &rep.worst_pattern.active, cfg)?;
    let coeffs = f.measure(w)?;
    let dcoeffs = f.measure(&d)?;
    let mut t_max = f64::INFINITY;
    for i in 0..f.m() {
        let slack = (coeffs[i] - layer.bias()[i]).abs();
        if dcoeffs[i].abs() > 1e-14 {
            t_max = t_max.min(slack / dcoeffs[i].abs());
        }
    }
    injections.extend(straddle_pairs(w, &d, t_max));

    for i in 0..f.m() {
        let phi = f.vector(i);
        let nsq = norm_sq(phi);
        let c = coeffs[i] - layer.bias()[i];
        let reflected: Vec<f64> =
            w.iter().zip(phi).map(|(wi, pi)| wi - 2.0 * c / nsq * pi).collect();
        injections.push((w.clone(), reflected));
    }

    let (lower, upper) = if rep.injective {
        let (lo, hi) = relu_lipschitz_bounds(&rep)?;
        (Some(lo), Some(hi))
    } else {
        warnings.push("operator is not injective; theoretical bounds unavailable".into());
        (None, None)
    };
    if rep.method == crate::patterns::EnumMethod::Sampled {
        warnings.push("lower-confidence: sampling fallback above the enumeration cap".into());
    }
    Ok(TheoryInfo { lower, upper, injective: Some(rep.injective), injections, warnings })
}

fn sat_theory(op: &SatOperator, cfg: &AnalysisConfig) -> Result<TheoryInfo> {
    let rep = sat_injectivity(op, cfg)?;
    let f = op.frame();
    let lambda = op.level();
    let mut injections = Vec::new();
    let mut warnings = Vec::new();

    let u = bottom_of(f, &IndexSet::full(f.m()), cfg)?;
    injections.push((u.clone(), scale(&u, -1.0)));

    // shrink the worst witness toward the interior so every constraint has
    // slack, then straddle along the unsaturated collection's bottom vector
    let w0 = &rep.worst_pattern.witness;
    let states = &rep.worst_pattern.states;
    let coeffs0 = f.measure(w0)?;
    let mut delta = f64::INFINITY;
    for (i, s) in states.iter().enumerate() {
        if *s != SatState::Lin {
            let c = coeffs0[i].abs();
            delta = delta.min(0.45 * (c - lambda) / c);
        }
    }
    let delta = if delta.is_finite() { delta.clamp(0.0, 0.02) } else { 0.0 };
    let w = scale(w0, 1.0 - delta);
    let d = bottom_of(f, &rep.worst_pattern.lin_set(), cfg)?;
    let coeffs = f.measure(&w)?;
    let dcoeffs = f.measure(&d)?;
    let mut t_max = 1.0 - norm(&w);
    for (i, s) in states.iter().enumerate() {
        let dc = dcoeffs[i].abs();
        if dc <= 1e-14 {
            continue;
        }
        let room = match s {
            SatState::Lin => lambda - coeffs[i].abs(),
            _ => coeffs[i].abs() - lambda,
        };
        t_max = t_max.min(room / dc);
    }
    injections.extend(straddle_pairs(&w, &d, t_max));

    for i in 0..f.m() {
        let phi = f.vector(i);
        let nsq = norm_sq(phi);
        for target in [lambda, -lambda] {
            let c = coeffs[i] - target;
            let reflected: Vec<f64> =
                w.iter().zip(phi).map(|(wi, pi)| wi - 2.0 * c / nsq * pi).collect();
            injections.push((w.clone(), Domain::UnitBall.project(reflected)));
        }
    }

    let (lower, upper) = if rep.injective {
        let (lo, hi) = sat_lipschitz_bounds(&rep)?;
        (Some(lo), Some(hi))
    } else {
        warnings.push("operator is not injective; theoretical bounds unavailable".into());
        (None, None)
    };
    if rep.method == crate::patterns::EnumMethod::Sampled {
        warnings.push("lower-confidence: sampling fallback above the enumeration cap".into());
    }
    Ok(TheoryInfo { lower, upper, injective: Some(rep.injective), injections, warnings })
}

fn intensity_theory(f: &Frame, cfg: &AnalysisConfig) -> Result<TheoryInfo> {
    let analysis = pr_analysis(f, cfg)?;
    let mut injections = Vec::new();
    let mut warnings = Vec::new();

    // the sigma-partition pair (u + v, u - v) has ratio at most sqrt(2) sigma
    let j = analysis.complement.worst_subset;
    let u = bottom_of(f, &j, cfg)?;
    let v = bottom_of(f, &j.complement(), cfg)?;
    injections.push((add(&u, &v), sub(&u, &v)));
    injections.push((u.clone(), v.clone()));

    let negs: Vec<usize> = analysis
        .a_abs
        .worst_product_pattern
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < 0)
        .map(|(i, _)| i)
        .collect();
    let neg_set = IndexSet::from_indices(&negs, f.m());
    let up = bottom_of(f, &neg_set.complement(), cfg)?;
    let un = bottom_of(f, &neg_set, cfg)?;
    injections.push((add(&up, &un), sub(&up, &un)));

    let x0 = add(&u, &v);
    let coeffs = f.measure(&x0)?;
    for i in 0..f.m() {
        let phi = f.vector(i);
        let nsq = norm_sq(phi);
        let reflected: Vec<f64> =
            x0.iter().zip(phi).map(|(xi, pi)| xi - 2.0 * coeffs[i] / nsq * pi).collect();
        injections.push((x0.clone(), reflected));
    }

    let (lower, upper) = match analysis.bounds {
        Some(b) => (Some(b.improved.0), Some(b.improved.1)),
        None => {
            warnings.push("frame lacks the complement property; bounds unavailable".into());
            (None, None)
        }
    };
    if analysis.a_abs.method == crate::patterns::EnumMethod::Sampled {
        warnings.push("lower-confidence: sampling fallback above the enumeration cap".into());
    }
    Ok(TheoryInfo {
        lower,
        upper,
        injective: Some(analysis.complement.holds),
        injections,
        warnings,
    })
}

fn gate_theory(g: &GateOperator, cfg: &AnalysisConfig) -> Result<TheoryInfo> {
    let f = g.frame();
    let u = bottom_of(f, &IndexSet::full(f.m()), cfg)?;
    let far = scale(&u, 1.5);
    Ok(TheoryInfo {
        lower: None,
        upper: None,
        injective: None,
        injections: vec![(far.clone(), scale(&far, -1.0))],
        warnings: vec!["no Lipschitz theory for gating; estimate is exploratory".into()],
    })
}

fn theory_for(op: &Measurement, cfg: &AnalysisConfig) -> Result<TheoryInfo> {
    match op {
        Measurement::Relu(l) => relu_theory(l, cfg),
        Measurement::Sat(s) => sat_theory(s, cfg),
        Measurement::Intensity(f) => intensity_theory(f, cfg),
        Measurement::Gate(g) => gate_theory(g, cfg),
    }
}

struct Best {
    ratio: f64,
    x: Vec<f64>,
    y: Vec<f64>,
}

const SUBSTREAMS: usize = 64;

struct ChunkOut {
    best: Option<(f64, usize, Vec<f64>, Vec<f64>)>,
    trace: Vec<(f64, f64)>,
}

/// Two-phase search for the minimal Lipschitz ratio, deterministically
/// reduced over a fixed set of seeded substreams so the result does not
/// depend on the worker count.
pub fn estimate_kappa(op: &Measurement, domain: Domain, cfg: &AnalysisConfig) -> Result<LipschitzReport> {
    estimate_kappa_traced(op, domain, cfg, None)
}

pub fn estimate_kappa_traced(
    op: &Measurement,
    domain: Domain,
    cfg: &AnalysisConfig,
    mut trace: Option<&mut Vec<(f64, f64)>>,
) -> Result<LipschitzReport> {
    cfg.validate()?;
    let n = op.input_dim();
    if n < 1 {
        return Err(Error::DegenerateDomain { dim: n });
    }

    let theory = theory_for(op, cfg)?;
    let mut best: Option<Best> = None;
    let mut samples_used = 0usize;

    for (x, y) in &theory.injections {
        samples_used += 1;
        let Ok(r) = ratio(op, x, y) else { continue };
        if let Some(t) = trace.as_deref_mut() {
            t.push((r, op.distance(x, y)));
        }
        if best.as_ref().map(|b| r < b.ratio).unwrap_or(true) {
            best = Some(Best { ratio: r, x: x.clone(), y: y.clone() });
        }
    }

    // random phase over fixed substreams
    let budget = cfg.kappa_budget;
    let per = budget / SUBSTREAMS;
    let rem = budget % SUBSTREAMS;
    let tracing = trace.is_some();
    let workers = cfg.resolve_threads().min(SUBSTREAMS).max(1);
    let next = AtomicUsize::new(0);
    let outs: Mutex<Vec<(usize, ChunkOut)>> = Mutex::new(Vec::new());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::Relaxed);
                if c >= SUBSTREAMS {
                    break;
                }
                let count = per + usize::from(c < rem);
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(c as u64 + 1);
                let mut chunk_best: Option<(f64, usize, Vec<f64>, Vec<f64>)> = None;
                let mut chunk_trace = Vec::new();
                for i in 0..count {
                    let x = domain.sample(&mut rng, n);
                    let y = domain.sample(&mut rng, n);
                    let Ok(r) = ratio(op, &x, &y) else { continue };
                    if tracing {
                        chunk_trace.push((r, op.distance(&x, &y)));
                    }
                    if chunk_best.as_ref().map(|b| r < b.0).unwrap_or(true) {
                        chunk_best = Some((r, i, x, y));
                    }
                }
                outs.lock().unwrap().push((c, ChunkOut { best: chunk_best, trace: chunk_trace }));
            });
        }
    });

    let mut ordered = outs.into_inner().expect("no poisoned workers");
    ordered.sort_by_key(|(c, _)| *c);
    samples_used += budget; // attempted pairs, not retained ones
    for (_, out) in ordered {
        if let Some((r, _, x, y)) = out.best {
            if best.as_ref().map(|b| r < b.ratio).unwrap_or(true) {
                best = Some(Best { ratio: r, x, y });
            }
        }
        if let Some(t) = trace.as_deref_mut() {
            t.extend(out.trace);
        }
    }

    let Some(mut incumbent) = best else {
        return Err(Error::Invalid("no valid sample pair found (all distances were zero)".into()));
    };

    // refinement: coordinate descent with step halving
    let dom_eff = domain.expand_to_cover(&[&incumbent.x, &incumbent.y]);
    let mut step = 0.5 * op.distance(&incumbent.x, &incumbent.y).max(1.0);
    let mut refinement_steps = 0usize;
    while step >= cfg.refine_min_step && refinement_steps < cfg.refine_cap {
        let mut improved = false;
        for which in 0..2 {
            for coord in 0..n {
                for sgn in [1.0_f64, -1.0] {
                    let mut cx = incumbent.x.clone();
                    let mut cy = incumbent.y.clone();
                    if which == 0 {
                        cx[coord] += sgn * step;
                    } else {
                        cy[coord] += sgn * step;
                    }
                    let cx = dom_eff.project(cx);
                    let cy = dom_eff.project(cy);
                    if op.distance(&cx, &cy) < 1e-7 {
                        continue;
                    }
                    if let Ok(r) = ratio(op, &cx, &cy) {
                        if r < incumbent.ratio {
                            incumbent = Best { ratio: r, x: cx, y: cy };
                            improved = true;
                        }
                    }
                }
            }
        }
        refinement_steps += 1;
        if !improved {
            step *= 0.5;
        }
    }

    let mut warnings = theory.warnings;
    if let (Some(lo), true) = (theory.lower, theory.injective.unwrap_or(false)) {
        if incumbent.ratio < lo - cfg.cert_tol {
            warnings.push(format!(
                "estimate {:.6e} fell below the theoretical lower bound {:.6e}",
                incumbent.ratio, lo
            ));
        }
    }
    if let (Some(hi), true) = (theory.upper, theory.injective.unwrap_or(false)) {
        if incumbent.ratio > hi + cfg.cert_tol {
            warnings.push(format!(
                "estimate {:.6e} exceeds the theoretical upper bound {:.6e}; search under-resolved",
                incumbent.ratio, hi
            ));
        }
    }

    Ok(LipschitzReport {
        kappa_hat: incumbent.ratio,
        witness_pair: (incumbent.x, incumbent.y),
        theoretical_lower: theory.lower,
        theoretical_upper: theory.upper,
        injective: theory.injective,
        samples_used,
        refinement_steps,
        domain: domain.describe(),
        warnings,
        config: cfg.clone(),
    })
}

/// Sampled-ratio rows as CSV, header "ratio,dist".
pub fn trace_to_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("ratio,dist\n");
    for (r, d) in rows {
        out.push_str(&fmt_f64(*r));
        out.push(',');
        out.push_str(&fmt_f64(*d));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// open-problem sweeps: empirical tables, no conclusions asserted.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Ratio of the estimate to sqrt(A_alpha) across ReLU layers; doubled
    /// frames pin the known extremal family, generic layers explore.
    ReluK { generic: bool },
    /// (A_lambda, lambda, estimate) triples across saturation instances.
    SatF,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub a_const: f64,
    pub lambda: Option<f64>,
    pub kappa_hat: f64,
    pub ratio_to_bound: f64,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub problem: String,
    pub rows: Vec<SweepRow>,
    pub skipped_non_injective: usize,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a_const,lambda,kappa_hat,ratio_to_bound\n");
        for r in &self.rows {
            out.push_str(&fmt_f64(r.a_const));
            out.push(',');
            if let Some(l) = r.lambda {
                out.push_str(&fmt_f64(l));
            }
            out.push(',');
            out.push_str(&fmt_f64(r.kappa_hat));
            out.push(',');
            out.push_str(&fmt_f64(r.ratio_to_bound));
            out.push('\n');
        }
        out
    }
}

fn mix_seed(seed: u64, t: u64) -> u64 {
    // splitmix64 round
    let mut z = seed ^ t.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sweep_open_problem(kind: SweepKind, trials: usize, cfg: &AnalysisConfig) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(trials);
    let mut skipped = 0usize;
    let mut attempt = 0u64;
    let max_attempts = (trials as u64) * 50 + 50;

    while rows.len() < trials && attempt < max_attempts {
        let s = mix_seed(cfg.seed, attempt);
        attempt += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = 2 + (rng.random_range(0..2u32) as usize);
        let m = match kind {
            // richer frames keep saturation injective at moderate levels
            SweepKind::SatF => 2 * n + rng.random_range(0..2u32) as usize,
            SweepKind::ReluK { .. } => n + rng.random_range(0..2u32) as usize,
        };
        let Ok(base) = crate::frame::make_random(n, m, s) else { continue };
        let trial_cfg = AnalysisConfig { seed: mix_seed(s, 1), ..cfg.clone() };

        match kind {
            SweepKind::ReluK { generic } => {
                let layer = if generic {
                    // nonpositive biases on a doubled frame only enlarge the
                    // active sets, so injectivity survives while A_alpha moves
                    let doubled = crate::frame::make_doubled(&base)?;
                    let bias: Vec<f64> =
                        (0..doubled.m()).map(|_| -rng.random_range(0.0..0.6f64)).collect();
                    ReluLayer::new(doubled, bias)?
                } else {
                    ReluLayer::zero_bias(crate::frame::make_doubled(&base)?)
                };
                let rep = relu_injectivity(&layer, &trial_cfg)?;
                if !rep.injective {
                    skipped += 1;
                    continue;
                }
                let est = estimate_kappa(
                    &Measurement::Relu(&layer),
                    Measurement::Relu(&layer).default_domain(),
                    &trial_cfg,
                )?;
                rows.push(SweepRow {
                    a_const: rep.a_alpha,
                    lambda: None,
                    kappa_hat: est.kappa_hat,
                    ratio_to_bound: est.kappa_hat / rep.a_alpha.sqrt(),
                });
            }
            SweepKind::SatF => {
                let b = frame_bounds(&base, &trial_cfg)?.upper;
                let lambda = rng.random_range(0.25..0.9) * b.sqrt();
                let op = SatOperator::new(base, lambda)?;
                let rep = sat_injectivity(&op, &trial_cfg)?;
                if !rep.injective {
                    skipped += 1;
                    continue;
                }
                let est = estimate_kappa(
                    &Measurement::Sat(&op),
                    Domain::UnitBall,
                    &trial_cfg,
                )?;
                let bound = (0.5 * rep.a_lambda.sqrt()).min(lambda);
                rows.push(SweepRow {
                    a_const: rep.a_lambda,
                    lambda: Some(lambda),
                    kappa_hat: est.kappa_hat,
                    ratio_to_bound: est.kappa_hat / bound,
                });
            }
        }
    }

    Ok(SweepTable {
        problem: match kind {
            SweepKind::ReluK { generic: false } => "relu-K".into(),
            SweepKind::ReluK { generic: true } => "relu-K-generic".into(),
            SweepKind::SatF => "sat-f".into(),
        },
        rows,
        skipped_non_injective: skipped,
    })
}
