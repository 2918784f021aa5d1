//! Saturated (clipped) measurements on the unit ball: the operator, the
//! injectivity decision over enumerated saturation patterns, the
//! opposite-saturation Delta bound, the Lipschitz sandwich with its
//! (n+1)-element strengthening, and the critical saturation level.

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::frame::{frame_bounds, sub_frame_lower_bound, Frame, IndexSet};
use crate::linalg::{midpoint, norm};
use crate::patterns::{enum_sat_patterns, EnumMethod, SatPattern};

/// Entrywise clipping at +-lambda.
pub fn saturate(t: f64, lambda: f64) -> f64 {
    t.signum() * t.abs().min(lambda)
}

/// A frame with a saturation level: x -> (sigma_lambda(<x, phi_i>))_i on the
/// closed unit ball.
#[derive(Debug, Clone)]
pub struct SatOperator {
    frame: Frame,
    level: f64,
}

impl SatOperator {
    pub fn new(frame: Frame, level: f64) -> Result<Self> {
        if !(level.is_finite() && level > 0.0) {
            return Err(Error::Invalid(format!("saturation level must be positive, got {level}")));
        }
        Ok(Self { frame, level })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Clipped measurements. Inputs outside the closed unit ball are
    /// accepted (the theory only speaks on the ball; callers surface a
    /// warning instead of rejecting).
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let coeffs = self.frame.measure(x)?;
        Ok(coeffs.into_iter().map(|c| saturate(c, self.level)).collect())
    }

    /// How far x sits outside the closed unit ball; <= 0 on the ball.
    pub fn ball_excess(&self, x: &[f64]) -> f64 {
        norm(x) - 1.0
    }

    /// Unsaturated indices |<x, phi_i>| <= lambda (closed).
    pub fn unsaturated_set(&self, x: &[f64]) -> Result<IndexSet> {
        let coeffs = self.frame.measure(x)?;
        let mut s = IndexSet::empty(self.frame.m());
        for (i, c) in coeffs.iter().enumerate() {
            if c.abs() <= self.level {
                s.insert(i);
            }
        }
        Ok(s)
    }

    /// Strictly positively saturated indices <x, phi_i> > lambda.
    pub fn pos_saturated(&self, x: &[f64]) -> Result<IndexSet> {
        let coeffs = self.frame.measure(x)?;
        let mut s = IndexSet::empty(self.frame.m());
        for (i, c) in coeffs.iter().enumerate() {
            if *c > self.level {
                s.insert(i);
            }
        }
        Ok(s)
    }

    /// Strictly negatively saturated indices <x, phi_i> < -lambda.
    pub fn neg_saturated(&self, x: &[f64]) -> Result<IndexSet> {
        let coeffs = self.frame.measure(x)?;
        let mut s = IndexSet::empty(self.frame.m());
        for (i, c) in coeffs.iter().enumerate() {
            if *c < -self.level {
                s.insert(i);
            }
        }
        Ok(s)
    }
}

/// The oppositely-saturated index set of a pair, and the lower frame bound
/// of the midpoint's unsaturated collection with that set removed.
#[derive(Debug, Clone)]
pub struct DeltaData {
    pub delta_set: IndexSet,
    pub a_delta: f64,
}

pub fn delta_data(op: &SatOperator, x: &[f64], y: &[f64], cfg: &AnalysisConfig) -> Result<DeltaData> {
    let px = op.pos_saturated(x)?;
    let nx = op.neg_saturated(x)?;
    let py = op.pos_saturated(y)?;
    let ny = op.neg_saturated(y)?;
    let delta_set = px.intersect(&ny).union(&nx.intersect(&py));
    let mid_lin = op.unsaturated_set(&midpoint(x, y))?;
    let a_delta = sub_frame_lower_bound(op.frame(), &mid_lin.difference(&delta_set), cfg)?;
    Ok(DeltaData { delta_set, a_delta })
}

/// The pair-specific lower bound
/// ((1/4) A_Delta + |Delta| lambda^2) ||x - y||^2 <= ||S(x) - S(y)||^2,
/// valid on the closed unit ball.
pub fn sat_pointwise_lower(
    op: &SatOperator,
    x: &[f64],
    y: &[f64],
    cfg: &AnalysisConfig,
) -> Result<f64> {
    for (name, v) in [("x", x), ("y", y)] {
        let excess = op.ball_excess(v);
        if excess > cfg.ball_tol {
            return Err(Error::OutsideDomain {
                detail: format!("{name} lies {excess:.3e} outside the closed unit ball"),
            });
        }
    }
    let dd = delta_data(op, x, y, cfg)?;
    let diff_sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((0.25 * dd.a_delta + dd.delta_set.count() as f64 * op.level() * op.level()) * diff_sq)
}

#[derive(Debug, Clone)]
pub struct SatInjectivityReport {
    pub injective: bool,
    /// Minimum over realizable patterns of the unsaturated collection's
    /// lower frame bound.
    pub a_lambda: f64,
    pub lambda: f64,
    pub worst_pattern: SatPattern,
    pub failing_pattern: Option<SatPattern>,
    pub pattern_count: usize,
    pub method: EnumMethod,
    pub config: AnalysisConfig,
}

/// Decides injectivity on the unit ball: one-to-one iff every realizable
/// saturation pattern keeps a spanning unsaturated collection.
pub fn sat_injectivity(op: &SatOperator, cfg: &AnalysisConfig) -> Result<SatInjectivityReport> {
    let set = enum_sat_patterns(op.frame(), op.level(), cfg)?;
    if set.patterns.is_empty() {
        return Err(Error::Invalid("no realizable saturation pattern found".into()));
    }
    let mut a_lambda = f64::INFINITY;
    let mut worst: Option<&SatPattern> = None;
    let mut failing: Option<&SatPattern> = None;
    for p in &set.patterns {
        let bound = sub_frame_lower_bound(op.frame(), &p.lin_set(), cfg)?;
        if bound < a_lambda {
            a_lambda = bound;
            worst = Some(p);
        }
        if bound <= cfg.frame_tol && failing.is_none() {
            failing = Some(p);
        }
    }
    Ok(SatInjectivityReport {
        injective: failing.is_none(),
        a_lambda,
        lambda: op.level(),
        worst_pattern: worst.expect("nonempty pattern list").clone(),
        failing_pattern: failing.cloned(),
        pattern_count: set.patterns.len(),
        method: set.method,
        config: cfg.clone(),
    })
}

/// The sandwich min{(1/2) sqrt(A_lambda), lambda} <= kappa_L <= sqrt(A_lambda).
pub fn sat_lipschitz_bounds(report: &SatInjectivityReport) -> Result<(f64, f64)> {
    if !report.injective {
        return Err(Error::NotInjective);
    }
    let s = report.a_lambda.sqrt();
    Ok(((0.5 * s).min(report.lambda), s))
}

/// For frames with exactly n + 1 elements the level drops out of the lower
/// bound: (1/2) sqrt(A_lambda) <= kappa_L <= sqrt(A_lambda).
pub fn sat_lipschitz_bounds_nplus1(
    report: &SatInjectivityReport,
    f: &Frame,
) -> Result<(f64, f64)> {
    if f.m() != f.n() + 1 {
        return Err(Error::WrongElementCount { m: f.m(), expected: f.n() + 1 });
    }
    if !report.injective {
        return Err(Error::NotInjective);
    }
    let s = report.a_lambda.sqrt();
    Ok((0.5 * s, s))
}

/// Result of the critical-level search: the smallest lambda at which the
/// saturated operator is injective on the ball, to within `lambda_tol`.
#[derive(Debug, Clone)]
pub struct CriticalLambdaReport {
    pub lambda_c: f64,
    pub bracket: (f64, f64),
    pub bracket_history: Vec<(f64, f64)>,
    pub iterations: usize,
    /// Injectivity verified at lambda_c + 10 * lambda_tol.
    pub injective_above: bool,
    /// Non-injectivity verified at lambda_c - 10 * lambda_tol (vacuously
    /// true when that probe would be nonpositive).
    pub non_injective_below: bool,
    pub config: AnalysisConfig,
}

/// Bisection for the critical saturation level. The bracket keeps the lower
/// end non-injective and the upper end injective; injectivity is monotone in
/// lambda (a larger level saturates fewer coordinates) and this is asserted
/// as the sweep proceeds. The initial upper end sqrt(B) saturates nothing on
/// the ball.
pub fn critical_lambda(f: &Frame, cfg: &AnalysisConfig) -> Result<CriticalLambdaReport> {
    let b = frame_bounds(f, cfg)?.upper;
    let mut hi = b.sqrt();
    let mut lo = 0.0_f64;

    let is_injective = |lambda: f64| -> Result<bool> {
        let op = SatOperator::new(f.clone(), lambda)?;
        Ok(sat_injectivity(&op, cfg)?.injective)
    };

    if !is_injective(hi)? {
        return Err(Error::NoUpperBound);
    }

    let mut history = vec![(lo, hi)];
    let mut max_noninjective = 0.0_f64;
    let mut min_injective = hi;
    let mut iterations = 0;
    while hi - lo > cfg.lambda_tol && iterations < cfg.lambda_max_bisections {
        let mid = 0.5 * (lo + hi);
        if is_injective(mid)? {
            min_injective = min_injective.min(mid);
            hi = mid;
        } else {
            max_noninjective = max_noninjective.max(mid);
            lo = mid;
        }
        // monotonicity of injectivity in lambda
        assert!(
            max_noninjective < min_injective,
            "injectivity is not monotone in lambda: non-injective at {max_noninjective}, injective at {min_injective}"
        );
        history.push((lo, hi));
        iterations += 1;
    }

    let lambda_c = hi;
    let injective_above = is_injective(lambda_c + 10.0 * cfg.lambda_tol)?;
    let below = lambda_c - 10.0 * cfg.lambda_tol;
    let non_injective_below = if below > 0.0 { !is_injective(below)? } else { true };

    Ok(CriticalLambdaReport {
        lambda_c,
        bracket: (lo, hi),
        bracket_history: history,
        iterations,
        injective_above,
        non_injective_below,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{make_mercedes_benz, make_random, make_simplex_funtf, make_standard_basis};
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    fn r1_frame(entries: &[f64]) -> Frame {
        Frame::new(entries.iter().map(|&e| vec![e]).collect(), None, &cfg()).unwrap()
    }

    #[test]
    fn apply_clips_at_the_level() {
        let op = SatOperator::new(make_standard_basis(2).unwrap(), 0.5).unwrap();
        assert_eq!(op.apply(&[0.9, 0.1]).unwrap(), vec![0.5, 0.1]);
        assert_eq!(op.apply(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn high_level_equals_plain_measurement() {
        let op = SatOperator::new(make_mercedes_benz(), 1.5).unwrap();
        let x = [0.3, -0.8];
        assert_eq!(op.apply(&x).unwrap(), op.frame().measure(&x).unwrap());
    }

    #[test]
    fn basis_injective_at_level_one() {
        let op = SatOperator::new(make_standard_basis(2).unwrap(), 1.0).unwrap();
        let rep = sat_injectivity(&op, &cfg()).unwrap();
        assert!(rep.injective);
        assert_abs_diff_eq!(rep.a_lambda, 1.0, epsilon = 1e-12);
        assert_eq!(rep.pattern_count, 1);
        let (lo, hi) = sat_lipschitz_bounds(&rep).unwrap();
        assert_abs_diff_eq!(lo, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn basis_fails_at_level_half() {
        let op = SatOperator::new(make_standard_basis(2).unwrap(), 0.5).unwrap();
        let rep = sat_injectivity(&op, &cfg()).unwrap();
        assert!(!rep.injective);
        let failing = rep.failing_pattern.as_ref().unwrap();
        assert_eq!(failing.state_string(), "+l");
        assert!(matches!(sat_lipschitz_bounds(&rep), Err(Error::NotInjective)));
    }

    /// Unit-norm tight frame with n + 1 elements: saturating one element
    /// leaves the (1/n)-bound collection.
    #[test]
    fn simplex_funtf_a_lambda_is_one_over_n() {
        for n in [2usize, 3] {
            let f = make_simplex_funtf(n).unwrap();
            let op = SatOperator::new(f.clone(), 0.9).unwrap();
            let rep = sat_injectivity(&op, &cfg()).unwrap();
            assert!(rep.injective);
            assert_abs_diff_eq!(rep.a_lambda, 1.0 / n as f64, epsilon = 1e-9);

            let (lo, hi) = sat_lipschitz_bounds_nplus1(&rep, &f).unwrap();
            assert_abs_diff_eq!(lo, 0.5 / (n as f64).sqrt(), epsilon = 1e-9);
            assert_abs_diff_eq!(hi, 1.0 / (n as f64).sqrt(), epsilon = 1e-9);
        }
    }

    #[test]
    fn nplus1_rejects_other_element_counts() {
        let f = make_random(2, 4, 3).unwrap();
        let op = SatOperator::new(f.clone(), 2.5).unwrap();
        let rep = sat_injectivity(&op, &cfg()).unwrap();
        assert!(matches!(
            sat_lipschitz_bounds_nplus1(&rep, &f),
            Err(Error::WrongElementCount { .. })
        ));
    }

    #[test]
    fn delta_set_is_empty_for_equal_inputs() {
        let op = SatOperator::new(make_standard_basis(2).unwrap(), 0.5).unwrap();
        let dd = delta_data(&op, &[0.9, 0.0], &[0.9, 0.0], &cfg()).unwrap();
        assert!(dd.delta_set.is_empty());
    }

    #[test]
    fn delta_hand_checked_r1_case() {
        let op = SatOperator::new(r1_frame(&[1.0]), 0.5).unwrap();
        let dd = delta_data(&op, &[1.0], &[-1.0], &cfg()).unwrap();
        assert_eq!(dd.delta_set.bitstring(), "1");
        assert_eq!(dd.a_delta, 0.0);

        let bound = sat_pointwise_lower(&op, &[1.0], &[-1.0], &cfg()).unwrap();
        assert_abs_diff_eq!(bound, 1.0, epsilon = 1e-12);
        let fx = op.apply(&[1.0]).unwrap();
        let fy = op.apply(&[-1.0]).unwrap();
        let gap: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
        assert_abs_diff_eq!(gap, 1.0, epsilon = 1e-15);
    }

    /// a_delta re-derived by an independent route: Rayleigh sampling of the
    /// remaining collection's quadratic form.
    #[test]
    fn a_delta_matches_rayleigh_sampling() {
        let f = make_random(2, 4, 17).unwrap();
        let op = SatOperator::new(f.clone(), 0.8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x: Vec<f64> = {
            let raw: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = norm(&raw).max(1.0);
            raw.iter().map(|v| v / n).collect()
        };
        let y: Vec<f64> = {
            let raw: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = norm(&raw).max(1.0);
            raw.iter().map(|v| v / n).collect()
        };
        let dd = delta_data(&op, &x, &y, &cfg()).unwrap();
        let keep = op.unsaturated_set(&midpoint(&x, &y)).unwrap().difference(&dd.delta_set);
        let mut lo = f64::INFINITY;
        if keep.count() == 0 {
            lo = 0.0;
        } else {
            for _ in 0..200_000 {
                let v: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
                let nsq: f64 = v.iter().map(|a| a * a).sum();
                if nsq < 1e-6 {
                    continue;
                }
                let q: f64 = keep
                    .iter()
                    .map(|i| {
                        let c: f64 = f.vector(i).iter().zip(&v).map(|(a, b)| a * b).sum();
                        c * c
                    })
                    .sum();
                lo = lo.min(q / nsq);
            }
            if keep.count() < f.n() {
                lo = 0.0; // cannot span; sampling only approaches 0
            }
        }
        assert_abs_diff_eq!(dd.a_delta, lo, epsilon = 1e-3);
    }

    /// Pair bound and the exact 2-lambda gap on opposite saturations,
    /// swept over random pairs on injective and non-injective instances.
    #[test]
    fn delta_bound_holds_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (seed, lambda) in [(1u64, 0.4), (2, 0.8), (3, 1.2)] {
            let f = make_random(2, 4, seed).unwrap();
            let op = SatOperator::new(f, lambda).unwrap();
            for _ in 0..2_000 {
                let x = sample_ball(&mut rng);
                let y = sample_ball(&mut rng);
                let bound = sat_pointwise_lower(&op, &x, &y, &cfg()).unwrap();
                let fx = op.apply(&x).unwrap();
                let fy = op.apply(&y).unwrap();
                let gap: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
                assert!(bound <= gap + 1e-9, "bound {bound} > gap {gap}");

                let dd = delta_data(&op, &x, &y, &cfg()).unwrap();
                for i in dd.delta_set.iter() {
                    assert_eq!((fx[i] - fy[i]).abs(), 2.0 * lambda);
                }

                // midpoint inclusions
                let ix = op.unsaturated_set(&x).unwrap();
                let iy = op.unsaturated_set(&y).unwrap();
                let imid = op.unsaturated_set(&midpoint(&x, &y)).unwrap();
                assert!(ix.intersect(&iy).is_subset_of(&imid));
                assert!(imid.difference(&dd.delta_set).is_subset_of(&ix.union(&iy)));
            }
        }
    }

    fn sample_ball(rng: &mut ChaCha8Rng) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            if norm(&v) <= 1.0 {
                return v;
            }
        }
    }

    #[test]
    fn pointwise_lower_rejects_points_outside_the_ball() {
        let op = SatOperator::new(make_standard_basis(2).unwrap(), 1.0).unwrap();
        assert!(matches!(
            sat_pointwise_lower(&op, &[2.0, 0.0], &[0.0, 0.0], &cfg()),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn critical_level_of_the_standard_basis_is_one() {
        let rep = critical_lambda(&make_standard_basis(2).unwrap(), &cfg()).unwrap();
        assert_abs_diff_eq!(rep.lambda_c, 1.0, epsilon = 1e-6);
        assert!(rep.injective_above);
        assert!(rep.non_injective_below);
        for w in rep.bracket_history.windows(2) {
            assert!(w[1].0 >= w[0].0 && w[1].1 <= w[0].1);
        }
    }

    #[test]
    fn critical_level_of_r1_singleton_is_one() {
        let rep = critical_lambda(&r1_frame(&[1.0]), &cfg()).unwrap();
        assert_abs_diff_eq!(rep.lambda_c, 1.0, epsilon = 1e-6);
    }

    /// The 3-element tight frame stays injective after losing one element,
    /// so its critical level sits strictly below 1 (at sqrt(3)/2).
    #[test]
    fn simplex_funtf_critical_level_is_below_one() {
        let rep = critical_lambda(&make_simplex_funtf(2).unwrap(), &cfg()).unwrap();
        assert!(rep.lambda_c < 1.0);
        assert_abs_diff_eq!(rep.lambda_c, 3.0_f64.sqrt() / 2.0, epsilon = 1e-5);
    }

    /// Monotonicity: if injective at lambda, injective at any larger level.
    #[test]
    fn injectivity_is_monotone_in_lambda() {
        let f = make_simplex_funtf(2).unwrap();
        let mut last_injective = false;
        for k in 0..12 {
            let lambda = 0.2 + k as f64 * 0.1;
            let op = SatOperator::new(f.clone(), lambda).unwrap();
            let inj = sat_injectivity(&op, &cfg()).unwrap().injective;
            assert!(!last_injective || inj, "injectivity lost when lambda grew to {lambda}");
            last_injective = inj;
        }
    }
}
