//! Enumeration of the realizable patterns that carry the "for all x"
//! quantifiers: ReLU activation sets over R^n, saturation states over the
//! unit ball, and sign chambers of the central hyperplane arrangement.
//!
//! Candidates are brute-forced (2^m or 3^m) with a per-candidate feasibility
//! check that also produces a witness. Boundary patterns, realizable only
//! within the strictness margin of a tie, are merged into their closed
//! neighbors; the minima of lower frame bounds over patterns are unaffected
//! because closed patterns dominate. Above the caps a seeded sampling
//! fallback runs instead and the result is marked accordingly.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::frame::{Frame, IndexSet};
use crate::linalg::{norm, norm_sq};
use crate::polytope::{lp_feasible, min_norm_in_polytope, Halfspace, LinearConstraint, PolytopeMinNorm};

/// An activation pattern with a point realizing it away from boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct ReluPattern {
    pub active: IndexSet,
    pub witness: Vec<f64>,
}

/// Per-index saturation state. The ordering Pos < Lin < Neg fixes the
/// canonical pattern encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SatState {
    Pos,
    Lin,
    Neg,
}

impl SatState {
    fn as_char(self) -> char {
        match self {
            SatState::Pos => '+',
            SatState::Lin => 'l',
            SatState::Neg => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatPattern {
    pub states: Vec<SatState>,
    pub witness: Vec<f64>,
}

impl SatPattern {
    /// State string like "+l-".
    pub fn state_string(&self) -> String {
        self.states.iter().map(|s| s.as_char()).collect()
    }

    /// Indices left untouched by saturation.
    pub fn lin_set(&self) -> IndexSet {
        let idx: Vec<usize> = self
            .states
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == SatState::Lin)
            .map(|(i, _)| i)
            .collect();
        IndexSet::from_indices(&idx, self.states.len())
    }

    pub fn saturated_count(&self) -> usize {
        self.states.iter().filter(|s| **s != SatState::Lin).count()
    }
}

/// A full-dimensional sign chamber of the central arrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct SignChamber {
    pub signs: Vec<i8>,
    pub witness: Vec<f64>,
}

impl SignChamber {
    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }

    pub fn code(&self) -> u64 {
        self.signs
            .iter()
            .enumerate()
            .fold(0u64, |c, (i, &s)| if s < 0 { c | 1 << i } else { c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumMethod {
    Exhaustive,
    /// Seeded sampling fallback above the enumeration caps; reports carry a
    /// lower-confidence warning.
    Sampled,
}

#[derive(Debug, Clone)]
pub struct PatternSet<P> {
    pub patterns: Vec<P>,
    pub method: EnumMethod,
}

/// Saturation cells are decided by a Dykstra projection, so their effective
/// strictness margin carries the projector tolerance on top of the
/// configured margin.
pub fn effective_sat_margin(cfg: &AnalysisConfig) -> f64 {
    cfg.strict_margin + 10.0 * cfg.qp_tol
}

pub(crate) fn ternary_digits(code: u64, m: usize) -> Vec<u8> {
    let mut digits = vec![0u8; m];
    let mut c = code;
    for i in (0..m).rev() {
        digits[i] = (c % 3) as u8;
        c /= 3;
    }
    digits
}

fn sat_states_from_code(code: u64, m: usize) -> Vec<SatState> {
    ternary_digits(code, m)
        .into_iter()
        .map(|d| match d {
            0 => SatState::Pos,
            1 => SatState::Lin,
            _ => SatState::Neg,
        })
        .collect()
}

pub(crate) fn sat_code(states: &[SatState]) -> u64 {
    states.iter().fold(0u64, |c, s| {
        c * 3
            + match s {
                SatState::Pos => 0,
                SatState::Lin => 1,
                SatState::Neg => 2,
            }
    })
}

/// All activation patterns realizable with margin `strict_margin`.
pub fn enum_relu_patterns(
    f: &Frame,
    bias: &[f64],
    cfg: &AnalysisConfig,
) -> Result<PatternSet<ReluPattern>> {
    let m = f.m();
    if bias.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: bias.len() });
    }
    if m > cfg.pattern_cap {
        if !cfg.sampling_fallback {
            return Err(Error::TooManyIndices {
                context: "relu pattern enumeration".into(),
                m,
                cap: cfg.pattern_cap,
            });
        }
        return Ok(PatternSet {
            patterns: sample_relu_patterns(f, bias, cfg),
            method: EnumMethod::Sampled,
        });
    }

    let mut patterns = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let active = IndexSet::from_bits(mask, m);
        let cons: Vec<LinearConstraint> = (0..m)
            .map(|i| {
                let phi = f.vector(i).to_vec();
                if active.contains(i) {
                    LinearConstraint::strict(Halfspace::ge(phi, bias[i]))
                } else {
                    LinearConstraint::strict(Halfspace::le(phi, bias[i]))
                }
            })
            .collect();
        if let Some(witness) = lp_feasible(&cons, f.n(), cfg.strict_margin, cfg)? {
            patterns.push(ReluPattern { active, witness });
        }
    }
    Ok(PatternSet { patterns, method: EnumMethod::Exhaustive })
}

/// All saturation patterns whose cell meets the closed unit ball.
pub fn enum_sat_patterns(
    f: &Frame,
    lambda: f64,
    cfg: &AnalysisConfig,
) -> Result<PatternSet<SatPattern>> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Invalid(format!("saturation level must be positive, got {lambda}")));
    }
    let m = f.m();
    if m > cfg.sat_pattern_cap {
        if !cfg.sampling_fallback {
            return Err(Error::TooManyIndices {
                context: "saturation pattern enumeration".into(),
                m,
                cap: cfg.sat_pattern_cap,
            });
        }
        return Ok(PatternSet {
            patterns: sample_sat_patterns(f, lambda, cfg),
            method: EnumMethod::Sampled,
        });
    }

    let margin = effective_sat_margin(cfg);
    let total = 3u64.pow(m as u32);
    let mut found: Vec<SatPattern> = Vec::new();
    for code in 0..total {
        let states = sat_states_from_code(code, m);
        let mut hs = Vec::with_capacity(2 * m);
        for (i, s) in states.iter().enumerate() {
            let phi = f.vector(i).to_vec();
            match s {
                SatState::Pos => hs.push(Halfspace::ge(phi, lambda + margin)),
                SatState::Neg => hs.push(Halfspace::le(phi, -lambda - margin)),
                SatState::Lin => {
                    hs.push(Halfspace::le(phi.clone(), lambda));
                    hs.push(Halfspace::ge(phi, -lambda));
                }
            }
        }
        match min_norm_in_polytope(&hs, f.n(), cfg)? {
            PolytopeMinNorm::Minimum { point, norm } if norm <= 1.0 => {
                found.push(SatPattern { states, witness: point });
            }
            _ => {}
        }
    }
    found.sort_by_key(|p| (p.saturated_count(), sat_code(&p.states)));
    Ok(PatternSet { patterns: found, method: EnumMethod::Exhaustive })
}

/// All sign chambers, closed under global negation by construction: only
/// vectors with a positive first sign are solved for, and each witness x is
/// emitted alongside its mirror -x.
pub fn enum_sign_chambers(f: &Frame, cfg: &AnalysisConfig) -> Result<PatternSet<SignChamber>> {
    let m = f.m();
    for i in 0..m {
        if norm_sq(f.vector(i)) == 0.0 {
            return Err(Error::ZeroVectorInFrame { index: i });
        }
    }
    if m > cfg.pattern_cap {
        if !cfg.sampling_fallback {
            return Err(Error::TooManyIndices {
                context: "sign chamber enumeration".into(),
                m,
                cap: cfg.pattern_cap,
            });
        }
        return Ok(PatternSet {
            patterns: sample_sign_chambers(f, cfg),
            method: EnumMethod::Sampled,
        });
    }

    let mut chambers = Vec::new();
    for half in 0u64..(1u64 << (m - 1)) {
        // sign_0 = +1; bit i of `half` flips sign_{i+1}
        let signs: Vec<i8> =
            std::iter::once(1i8).chain((0..m - 1).map(|i| if half >> i & 1 == 1 { -1 } else { 1 })).collect();
        let cons: Vec<LinearConstraint> = (0..m)
            .map(|i| {
                let phi = f.vector(i).to_vec();
                if signs[i] > 0 {
                    LinearConstraint::strict(Halfspace::ge(phi, 0.0))
                } else {
                    LinearConstraint::strict(Halfspace::le(phi, 0.0))
                }
            })
            .collect();
        if let Some(witness) = lp_feasible(&cons, f.n(), cfg.strict_margin, cfg)? {
            let mirror = SignChamber {
                signs: signs.iter().map(|s| -s).collect(),
                witness: witness.iter().map(|x| -x).collect(),
            };
            chambers.push(SignChamber { signs, witness });
            chambers.push(mirror);
        }
    }
    chambers.sort_by_key(SignChamber::code);
    Ok(PatternSet { patterns: chambers, method: EnumMethod::Exhaustive })
}

// ---------------------------------------------------------------------------
// seeded sampling: the fallback above the caps, and the oracle used by tests.
// Samples inside the margin band of any boundary are skipped, so every
// retained sample realizes its pattern with the same margin the enumerations
// require; discovered pattern sets are therefore subsets of the enumerated
// ones.
// ---------------------------------------------------------------------------

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

fn uniform_in_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let g = gaussian_vec(rng, n, 1.0);
    let len = norm(&g);
    if len < 1e-12 {
        return vec![0.0; n];
    }
    let u: f64 = rng.random_range(0.0..1.0f64);
    let r = u.powf(1.0 / n as f64);
    g.iter().map(|x| x * r / len).collect()
}

/// Activation masks hit by seeded sampling, skipping the margin band.
pub fn sample_relu_masks(
    f: &Frame,
    bias: &[f64],
    budget: usize,
    seed: u64,
    skip_band: f64,
) -> BTreeMap<u64, Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bias_scale = bias.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    let scale = 2.0 * (1.0 + bias_scale);
    let mut seen = BTreeMap::new();
    for _ in 0..budget {
        let x = gaussian_vec(&mut rng, f.n(), scale);
        let coeffs = f.measure(&x).expect("dimension fixed");
        if coeffs.iter().zip(bias).any(|(c, a)| (c - a).abs() < skip_band) {
            continue;
        }
        let mask = coeffs
            .iter()
            .zip(bias)
            .enumerate()
            .fold(0u64, |m, (i, (c, a))| if c >= a { m | 1 << i } else { m });
        seen.entry(mask).or_insert(x);
    }
    seen
}

/// Saturation codes hit by uniform ball sampling, skipping both the margin
/// band around +-lambda and the outermost shell of the ball.
pub fn sample_sat_codes(
    f: &Frame,
    lambda: f64,
    budget: usize,
    seed: u64,
    skip_band: f64,
    shell: f64,
) -> BTreeMap<u64, Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeMap::new();
    for _ in 0..budget {
        let x = uniform_in_ball(&mut rng, f.n());
        if norm(&x) > 1.0 - shell {
            continue;
        }
        let coeffs = f.measure(&x).expect("dimension fixed");
        if coeffs.iter().any(|c| (c.abs() - lambda).abs() < skip_band) {
            continue;
        }
        let states: Vec<SatState> = coeffs
            .iter()
            .map(|&c| {
                if c > lambda {
                    SatState::Pos
                } else if c < -lambda {
                    SatState::Neg
                } else {
                    SatState::Lin
                }
            })
            .collect();
        seen.entry(sat_code(&states)).or_insert(x);
    }
    seen
}

/// Chamber codes hit by sampling, skipping the margin band around each
/// hyperplane.
pub fn sample_chamber_codes(
    f: &Frame,
    budget: usize,
    seed: u64,
    skip_band: f64,
) -> BTreeMap<u64, Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeMap::new();
    for _ in 0..budget {
        let x = gaussian_vec(&mut rng, f.n(), 1.0);
        let coeffs = f.measure(&x).expect("dimension fixed");
        if coeffs.iter().any(|c| c.abs() < skip_band) {
            continue;
        }
        let code = coeffs
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, c)| if *c < 0.0 { m | 1 << i } else { m });
        seen.entry(code).or_insert(x);
    }
    seen
}

fn sample_relu_patterns(f: &Frame, bias: &[f64], cfg: &AnalysisConfig) -> Vec<ReluPattern> {
    sample_relu_masks(f, bias, cfg.sample_budget, cfg.seed, 2.0 * cfg.strict_margin)
        .into_iter()
        .map(|(mask, witness)| ReluPattern { active: IndexSet::from_bits(mask, f.m()), witness })
        .collect()
}

fn sample_sat_patterns(f: &Frame, lambda: f64, cfg: &AnalysisConfig) -> Vec<SatPattern> {
    let band = 2.0 * effective_sat_margin(cfg);
    let mut out: Vec<SatPattern> = sample_sat_codes(f, lambda, cfg.sample_budget, cfg.seed, band, cfg.strict_margin)
        .into_iter()
        .map(|(code, witness)| SatPattern { states: sat_states_from_code(code, f.m()), witness })
        .collect();
    out.sort_by_key(|p| (p.saturated_count(), sat_code(&p.states)));
    out
}

fn sample_sign_chambers(f: &Frame, cfg: &AnalysisConfig) -> Vec<SignChamber> {
    let mut by_code: BTreeMap<u64, Vec<f64>> =
        sample_chamber_codes(f, cfg.sample_budget, cfg.seed, 2.0 * cfg.strict_margin);
    // enforce negation closure exactly even under sampling
    let codes: Vec<u64> = by_code.keys().copied().collect();
    let full = IndexSet::full(f.m()).bits();
    for code in codes {
        let mirror = !code & full;
        if !by_code.contains_key(&mirror) {
            let w = by_code[&code].iter().map(|x| -x).collect();
            by_code.insert(mirror, w);
        }
    }
    by_code
        .into_iter()
        .map(|(code, witness)| SignChamber {
            signs: (0..f.m()).map(|i| if code >> i & 1 == 1 { -1 } else { 1 }).collect(),
            witness,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{
        frame_bounds, make_doubled, make_mercedes_benz, make_random, make_standard_basis,
    };

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    #[test]
    fn basis_activation_patterns_are_the_quadrants() {
        let f = make_standard_basis(2).unwrap();
        let ps = enum_relu_patterns(&f, &[0.0, 0.0], &cfg()).unwrap();
        assert_eq!(ps.method, EnumMethod::Exhaustive);
        let masks: Vec<u64> = ps.patterns.iter().map(|p| p.active.bits()).collect();
        assert_eq!(masks, vec![0b00, 0b01, 0b10, 0b11]);
    }

    /// In a doubled frame with zero bias, either phi_i or -phi_i is activated
    /// in every realizable pattern, never both and never neither.
    #[test]
    fn doubled_frames_activate_one_of_each_pair() {
        for seed in [1u64, 2, 3] {
            let base = make_random(2, 3, seed).unwrap();
            let d = make_doubled(&base).unwrap();
            let ps = enum_relu_patterns(&d, &vec![0.0; d.m()], &cfg()).unwrap();
            assert!(!ps.patterns.is_empty());
            for p in &ps.patterns {
                assert_eq!(p.active.count(), base.m());
                for i in 0..base.m() {
                    assert!(p.active.contains(i) ^ p.active.contains(i + base.m()));
                }
            }
        }
    }

    #[test]
    fn relu_witnesses_satisfy_their_pattern() {
        let f = make_random(2, 4, 7).unwrap();
        let bias = vec![0.3, -0.2, 0.0, 0.5];
        let c = cfg();
        let ps = enum_relu_patterns(&f, &bias, &c).unwrap();
        for p in &ps.patterns {
            let coeffs = f.measure(&p.witness).unwrap();
            for i in 0..f.m() {
                if p.active.contains(i) {
                    assert!(coeffs[i] >= bias[i]);
                } else {
                    assert!(coeffs[i] <= bias[i] - c.strict_margin);
                }
            }
        }
    }

    /// Sampling oracle: every pattern hit by seeded samples away from the
    /// margin band must appear in the enumerated list.
    #[test]
    fn sampled_relu_patterns_are_enumerated() {
        let f = make_random(2, 4, 13).unwrap();
        let bias = vec![0.1, -0.4, 0.25, 0.0];
        let c = cfg();
        let ps = enum_relu_patterns(&f, &bias, &c).unwrap();
        let enumerated: Vec<u64> = ps.patterns.iter().map(|p| p.active.bits()).collect();
        let sampled = sample_relu_masks(&f, &bias, 200_000, 99, 2.0 * c.strict_margin);
        for mask in sampled.keys() {
            assert!(enumerated.contains(mask), "sampled mask {mask:b} missing");
        }
    }

    #[test]
    fn high_level_saturation_sees_only_the_lin_pattern() {
        let f = make_standard_basis(2).unwrap();
        let ps = enum_sat_patterns(&f, 2.0, &cfg()).unwrap();
        assert_eq!(ps.patterns.len(), 1);
        assert_eq!(ps.patterns[0].state_string(), "ll");
    }

    #[test]
    fn saturation_level_above_sqrt_b_is_all_lin() {
        let f = make_random(2, 5, 21).unwrap();
        let b = frame_bounds(&f, &cfg()).unwrap();
        let ps = enum_sat_patterns(&f, b.upper.sqrt() + 1e-6, &cfg()).unwrap();
        assert_eq!(ps.patterns.len(), 1);
        assert_eq!(ps.patterns[0].saturated_count(), 0);
    }

    #[test]
    fn low_level_saturation_includes_pos_lin() {
        let f = make_standard_basis(2).unwrap();
        let c = cfg();
        let ps = enum_sat_patterns(&f, 0.5, &c).unwrap();
        let pl = ps
            .patterns
            .iter()
            .find(|p| p.state_string() == "+l")
            .expect("(pos, lin) should be realizable");
        assert!(pl.witness[0] > 0.5);
        assert!(pl.witness[1].abs() <= 0.5);

        // sampling oracle agrees that the pattern occurs on the ball
        let sampled = sample_sat_codes(&f, 0.5, 200_000, 5, 2.0 * effective_sat_margin(&c), c.strict_margin);
        assert!(sampled.keys().any(|&code| code == sat_code(&[SatState::Pos, SatState::Lin])));
        for code in sampled.keys() {
            assert!(ps.patterns.iter().any(|p| sat_code(&p.states) == *code));
        }
    }

    #[test]
    fn sat_witnesses_stay_in_the_ball_and_match_states() {
        let f = make_random(2, 3, 31).unwrap();
        let c = cfg();
        let lambda = 0.6;
        let ps = enum_sat_patterns(&f, lambda, &c).unwrap();
        for p in &ps.patterns {
            assert!(norm(&p.witness) <= 1.0 + c.ball_tol);
            let coeffs = f.measure(&p.witness).unwrap();
            for (i, s) in p.states.iter().enumerate() {
                match s {
                    SatState::Pos => assert!(coeffs[i] >= lambda + c.strict_margin),
                    SatState::Neg => assert!(coeffs[i] <= -lambda - c.strict_margin),
                    SatState::Lin => assert!(coeffs[i].abs() <= lambda),
                }
            }
        }
    }

    #[test]
    fn two_copies_in_r1_have_two_chambers() {
        let f = Frame::new(vec![vec![1.0], vec![1.0]], None, &cfg()).unwrap();
        let ps = enum_sign_chambers(&f, &cfg()).unwrap();
        let strings: Vec<String> = ps.patterns.iter().map(|c| c.sign_string()).collect();
        assert_eq!(strings, vec!["++", "--"]);
    }

    #[test]
    fn basis_has_four_chambers() {
        let f = make_standard_basis(2).unwrap();
        let ps = enum_sign_chambers(&f, &cfg()).unwrap();
        assert_eq!(ps.patterns.len(), 4);
    }

    #[test]
    fn mercedes_benz_has_six_chambers_without_all_plus() {
        let f = make_mercedes_benz();
        let ps = enum_sign_chambers(&f, &cfg()).unwrap();
        assert_eq!(ps.patterns.len(), 6);
        assert!(ps.patterns.iter().all(|c| c.sign_string() != "+++"));
        assert!(ps.patterns.iter().all(|c| c.sign_string() != "---"));

        let sampled = sample_chamber_codes(&f, 200_000, 17, 2.0 * cfg().strict_margin);
        for code in sampled.keys() {
            assert!(ps.patterns.iter().any(|c| c.code() == *code));
        }
    }

    #[test]
    fn chambers_are_negation_closed_with_exact_witnesses() {
        let f = make_random(3, 5, 23).unwrap();
        let c = cfg();
        let ps = enum_sign_chambers(&f, &c).unwrap();
        let full = IndexSet::full(f.m()).bits();
        for ch in &ps.patterns {
            let mirror = !ch.code() & full;
            assert!(ps.patterns.iter().any(|other| other.code() == mirror));
            let coeffs = f.measure(&ch.witness).unwrap();
            for (i, &s) in ch.signs.iter().enumerate() {
                assert!(s as f64 * coeffs[i] >= c.strict_margin);
            }
        }
    }

    #[test]
    fn cap_without_fallback_errors() {
        let f = make_random(2, 5, 3).unwrap();
        let c = AnalysisConfig { pattern_cap: 4, sampling_fallback: false, ..cfg() };
        assert!(matches!(
            enum_relu_patterns(&f, &[0.0; 5], &c),
            Err(Error::TooManyIndices { .. })
        ));
    }

    #[test]
    fn fallback_is_marked_sampled() {
        let f = make_random(2, 5, 3).unwrap();
        let c = AnalysisConfig { pattern_cap: 4, sample_budget: 20_000, ..cfg() };
        let ps = enum_relu_patterns(&f, &[0.0; 5], &c).unwrap();
        assert_eq!(ps.method, EnumMethod::Sampled);
        assert!(!ps.patterns.is_empty());
    }

    #[test]
    fn zero_vector_is_rejected_for_chambers() {
        let f = Frame::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]], None, &cfg()).unwrap();
        assert!(matches!(
            enum_sign_chambers(&f, &cfg()),
            Err(Error::ZeroVectorInFrame { index: 2 })
        ));
    }

    #[test]
    fn sat_pattern_ordering_puts_fewer_saturations_first() {
        let f = make_standard_basis(2).unwrap();
        let ps = enum_sat_patterns(&f, 0.5, &cfg()).unwrap();
        assert_eq!(ps.patterns[0].state_string(), "ll");
        let counts: Vec<usize> = ps.patterns.iter().map(|p| p.saturated_count()).collect();
        let mut sorted = counts.clone();
        sorted.sort();
        assert_eq!(counts, sorted);
    }

    /// Enumeration equals sampling up to margin-boundary patterns on a
    /// random instance with random bias.
    #[test]
    fn random_relu_instance_sampling_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let f = make_random(2, 4, 41).unwrap();
        let bias: Vec<f64> = (0..4).map(|_| rng.random_range(-0.5..0.5)).collect();
        let c = cfg();
        let enumerated = enum_relu_patterns(&f, &bias, &c).unwrap();
        let masks: Vec<u64> = enumerated.patterns.iter().map(|p| p.active.bits()).collect();
        let sampled = sample_relu_masks(&f, &bias, 1_000_000, 123, 2.0 * c.strict_margin);
        for mask in sampled.keys() {
            assert!(masks.contains(mask));
        }
    }
}
