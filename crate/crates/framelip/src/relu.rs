//! ReLU layers over a frame: the measurement operator, the injectivity
//! decision over enumerated activation patterns, the midpoint lower bound,
//! the Lipschitz sandwich, and the doubled-frame construction with its exact
//! optimal lower Lipschitz bound.

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::frame::{frame_bounds, sub_frame_lower_bound, Frame, IndexSet};
use crate::linalg::{midpoint, sym_eig};
use crate::patterns::{enum_relu_patterns, EnumMethod, ReluPattern};

/// A frame together with a bias vector: x -> (ReLU(<x, phi_i> - alpha_i))_i.
#[derive(Debug, Clone)]
pub struct ReluLayer {
    frame: Frame,
    bias: Vec<f64>,
}

impl ReluLayer {
    pub fn new(frame: Frame, bias: Vec<f64>) -> Result<Self> {
        if bias.len() != frame.m() {
            return Err(Error::DimensionMismatch { expected: frame.m(), got: bias.len() });
        }
        if !bias.iter().all(|b| b.is_finite()) {
            return Err(Error::Invalid("bias entries must be finite".into()));
        }
        Ok(Self { frame, bias })
    }

    pub fn zero_bias(frame: Frame) -> Self {
        let bias = vec![0.0; frame.m()];
        Self { frame, bias }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let coeffs = self.frame.measure(x)?;
        Ok(coeffs.iter().zip(&self.bias).map(|(c, a)| (c - a).max(0.0)).collect())
    }

    /// Activated indices at x; ties count as active (closed inequality).
    pub fn active_set(&self, x: &[f64]) -> Result<IndexSet> {
        let coeffs = self.frame.measure(x)?;
        let mut s = IndexSet::empty(self.frame.m());
        for (i, (c, a)) in coeffs.iter().zip(&self.bias).enumerate() {
            if c >= a {
                s.insert(i);
            }
        }
        Ok(s)
    }

    /// The midpoint lower bound: (1/4) A(mid) ||x - y||^2 with A(mid) the
    /// lower frame bound of the collection activated at (x + y) / 2. Always
    /// at most ||C(x) - C(y)||^2, whether or not the layer is injective.
    pub fn pointwise_lower(&self, x: &[f64], y: &[f64], cfg: &AnalysisConfig) -> Result<f64> {
        let mid = midpoint(x, y);
        let active = self.active_set(&mid)?;
        let a_mid = sub_frame_lower_bound(&self.frame, &active, cfg)?;
        let diff_sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok(0.25 * a_mid * diff_sq)
    }
}

/// Outcome of the injectivity decision over enumerated activation patterns.
#[derive(Debug, Clone)]
pub struct ReluInjectivityReport {
    pub injective: bool,
    /// Minimum over realizable patterns of the activated collection's lower
    /// frame bound; the optimal-bound constant when injective.
    pub a_alpha: f64,
    pub worst_pattern: ReluPattern,
    pub failing_pattern: Option<ReluPattern>,
    pub pattern_count: usize,
    pub method: EnumMethod,
    pub config: AnalysisConfig,
}

/// Decides injectivity: the layer is one-to-one iff every realizable
/// activation pattern leaves a spanning collection.
pub fn relu_injectivity(layer: &ReluLayer, cfg: &AnalysisConfig) -> Result<ReluInjectivityReport> {
    let set = enum_relu_patterns(layer.frame(), layer.bias(), cfg)?;
    if set.patterns.is_empty() {
        return Err(Error::Invalid("no realizable activation pattern found".into()));
    }
    let mut a_alpha = f64::INFINITY;
    let mut worst: Option<&ReluPattern> = None;
    let mut failing: Option<&ReluPattern> = None;
    for p in &set.patterns {
        let bound = sub_frame_lower_bound(layer.frame(), &p.active, cfg)?;
        if bound < a_alpha {
            a_alpha = bound;
            worst = Some(p);
        }
        if bound <= cfg.frame_tol && failing.is_none() {
            failing = Some(p);
        }
    }
    Ok(ReluInjectivityReport {
        injective: failing.is_none(),
        a_alpha,
        worst_pattern: worst.expect("nonempty pattern list").clone(),
        failing_pattern: failing.cloned(),
        pattern_count: set.patterns.len(),
        method: set.method,
        config: cfg.clone(),
    })
}

/// The sandwich (1/2) sqrt(A_alpha) <= kappa_L <= sqrt(A_alpha) for an
/// injective layer.
pub fn relu_lipschitz_bounds(report: &ReluInjectivityReport) -> Result<(f64, f64)> {
    if !report.injective {
        return Err(Error::NotInjective);
    }
    let s = report.a_alpha.sqrt();
    Ok((0.5 * s, s))
}

/// The doubled-frame zero-bias layer has optimal lower Lipschitz bound
/// exactly sqrt(A/2), attained by an antipodal pair along the bottom
/// eigenvector of the base frame operator.
#[derive(Debug, Clone)]
pub struct DoubledKappa {
    pub kappa: f64,
    pub witness: (Vec<f64>, Vec<f64>),
}

pub fn doubled_frame_kappa(f: &Frame, cfg: &AnalysisConfig) -> Result<DoubledKappa> {
    let bounds = frame_bounds(f, cfg)?;
    let eig = sym_eig(&f.frame_operator(), cfg)?;
    let u = eig.bottom_vector();
    let neg_u: Vec<f64> = u.iter().map(|x| -x).collect();
    Ok(DoubledKappa { kappa: (bounds.lower / 2.0).sqrt(), witness: (u, neg_u) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{make_doubled, make_mercedes_benz, make_random, make_standard_basis};
    use crate::linalg::{norm, norm_sq};
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    #[test]
    fn apply_standard_basis() {
        let layer = ReluLayer::zero_bias(make_standard_basis(2).unwrap());
        assert_eq!(layer.apply(&[3.0, -4.0]).unwrap(), vec![3.0, 0.0]);
    }

    #[test]
    fn apply_below_bias_is_zero() {
        let layer =
            ReluLayer::new(make_standard_basis(2).unwrap(), vec![1.0, 1.0]).unwrap();
        assert_eq!(layer.apply(&[0.5, -3.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn apply_doubled_basis_splits_signs() {
        let layer = ReluLayer::zero_bias(make_doubled(&make_standard_basis(2).unwrap()).unwrap());
        assert_eq!(layer.apply(&[1.0, -2.0]).unwrap(), vec![1.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn active_set_examples() {
        let layer = ReluLayer::zero_bias(make_standard_basis(2).unwrap());
        assert_eq!(layer.active_set(&[1.0, 1.0]).unwrap().bitstring(), "11");
        assert_eq!(layer.active_set(&[-1.0, -1.0]).unwrap().bitstring(), "00");
        // tie counts as active
        assert_eq!(layer.active_set(&[1.0, 0.0]).unwrap().bitstring(), "11");
    }

    #[test]
    fn standard_basis_is_not_injective() {
        let layer = ReluLayer::zero_bias(make_standard_basis(2).unwrap());
        let rep = relu_injectivity(&layer, &cfg()).unwrap();
        assert!(!rep.injective);
        assert!(rep.failing_pattern.as_ref().unwrap().active.is_empty());
        assert!(matches!(relu_lipschitz_bounds(&rep), Err(Error::NotInjective)));
    }

    #[test]
    fn doubled_frames_are_injective_with_a_alpha_equal_to_a() {
        for seed in [4u64, 9, 15] {
            let base = make_random(2, 3, seed).unwrap();
            let a = frame_bounds(&base, &cfg()).unwrap().lower;
            let layer = ReluLayer::zero_bias(make_doubled(&base).unwrap());
            let rep = relu_injectivity(&layer, &cfg()).unwrap();
            assert!(rep.injective);
            assert_abs_diff_eq!(rep.a_alpha, a, epsilon = 1e-9);
        }
    }

    #[test]
    fn doubled_basis_has_unit_a_alpha() {
        let layer = ReluLayer::zero_bias(make_doubled(&make_standard_basis(2).unwrap()).unwrap());
        let rep = relu_injectivity(&layer, &cfg()).unwrap();
        assert!(rep.injective);
        assert_abs_diff_eq!(rep.a_alpha, 1.0, epsilon = 1e-12);
        let (lo, hi) = relu_lipschitz_bounds(&rep).unwrap();
        assert_abs_diff_eq!(lo, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn doubled_mercedes_benz_bounds() {
        let layer = ReluLayer::zero_bias(make_doubled(&make_mercedes_benz()).unwrap());
        let rep = relu_injectivity(&layer, &cfg()).unwrap();
        let (lo, hi) = relu_lipschitz_bounds(&rep).unwrap();
        assert_abs_diff_eq!(hi, 1.5_f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(lo, 0.5 * 1.5_f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(lo, hi / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn pointwise_lower_is_zero_for_equal_inputs() {
        let layer = ReluLayer::zero_bias(make_standard_basis(2).unwrap());
        assert_eq!(layer.pointwise_lower(&[1.0, 2.0], &[1.0, 2.0], &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn pointwise_lower_hand_checked_case() {
        let layer = ReluLayer::zero_bias(make_doubled(&make_standard_basis(2).unwrap()).unwrap());
        let x = [1.0, 0.0];
        let y = [0.0, 1.0];
        let bound = layer.pointwise_lower(&x, &y, &cfg()).unwrap();
        assert_abs_diff_eq!(bound, 0.5, epsilon = 1e-12);
        let fx = layer.apply(&x).unwrap();
        let fy = layer.apply(&y).unwrap();
        let gap: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
        assert_abs_diff_eq!(gap, 2.0, epsilon = 1e-12);
        assert!(bound <= gap);
    }

    /// Midpoint bound and set inclusions on random pairs, injective or not.
    #[test]
    fn midpoint_bound_and_inclusions_hold_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..4u64 {
            let frame = make_random(2, 4, seed).unwrap();
            let bias: Vec<f64> = (0..4).map(|_| rng.random_range(-0.5..0.5)).collect();
            let layer = ReluLayer::new(frame, bias).unwrap();
            for _ in 0..2_000 {
                let x: Vec<f64> = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
                let y: Vec<f64> = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
                let bound = layer.pointwise_lower(&x, &y, &cfg()).unwrap();
                let fx = layer.apply(&x).unwrap();
                let fy = layer.apply(&y).unwrap();
                let gap: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
                assert!(bound <= gap + 1e-9, "bound {bound} > gap {gap}");

                let ix = layer.active_set(&x).unwrap();
                let iy = layer.active_set(&y).unwrap();
                let imid = layer.active_set(&midpoint(&x, &y)).unwrap();
                assert!(ix.intersect(&iy).is_subset_of(&imid));
                assert!(imid.is_subset_of(&ix.union(&iy)));
            }
        }
    }

    /// The activation is non-expansive, so sqrt(B) is an upper Lipschitz
    /// bound for the whole layer.
    #[test]
    fn upper_lipschitz_bound_sqrt_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let frame = make_random(3, 5, 2).unwrap();
        let b = frame_bounds(&frame, &cfg()).unwrap().upper;
        let layer = ReluLayer::new(frame, vec![0.1, -0.2, 0.3, 0.0, -0.4]).unwrap();
        for _ in 0..2_000 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let y: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let fx = layer.apply(&x).unwrap();
            let fy = layer.apply(&y).unwrap();
            let gap: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
            let dist_sq: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
            assert!(gap <= b * dist_sq + 1e-9);
        }
    }

    #[test]
    fn doubled_kappa_standard_basis() {
        let f = make_standard_basis(2).unwrap();
        let dk = doubled_frame_kappa(&f, &cfg()).unwrap();
        assert_abs_diff_eq!(dk.kappa, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        let (u, nu) = &dk.witness;
        assert_abs_diff_eq!(norm(u), 1.0, epsilon = 1e-12);
        for i in 0..2 {
            assert_abs_diff_eq!(u[i], -nu[i], epsilon = 0.0);
        }
        // identity frame operator: the deterministic bottom vector is e1
        assert_abs_diff_eq!(u[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn doubled_kappa_mercedes_benz() {
        let dk = doubled_frame_kappa(&make_mercedes_benz(), &cfg()).unwrap();
        assert_abs_diff_eq!(dk.kappa, (0.75_f64).sqrt(), epsilon = 1e-9);
    }

    /// The antipodal witness attains the exact ratio sqrt(A/2) for the
    /// doubled layer.
    #[test]
    fn witness_attains_doubled_kappa() {
        for seed in [1u64, 6] {
            let base = make_random(3, 4, seed).unwrap();
            let dk = doubled_frame_kappa(&base, &cfg()).unwrap();
            let layer = ReluLayer::zero_bias(make_doubled(&base).unwrap());
            let (u, nu) = &dk.witness;
            let fu = layer.apply(u).unwrap();
            let fnu = layer.apply(nu).unwrap();
            let gap = fu.iter().zip(&fnu).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let dist = (norm_sq(u) * 4.0).sqrt();
            assert_abs_diff_eq!(gap / dist, dk.kappa, epsilon = 1e-9);
        }
    }

    #[test]
    fn bias_dimension_is_checked() {
        assert!(matches!(
            ReluLayer::new(make_standard_basis(2).unwrap(), vec![0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
