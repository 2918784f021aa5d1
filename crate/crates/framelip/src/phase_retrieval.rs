//! Real phase retrieval: the intensity measurement operator on the sign
//! quotient, the complement property with its quantitative sigma^2 constant,
//! the sign-split constant A_|.| over realizable chamber-pair products, and
//! the three Lipschitz sandwiches.

use std::collections::BTreeSet;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::frame::{sub_frame_lower_bound, Frame, IndexSet};
use crate::patterns::{enum_sign_chambers, EnumMethod};

/// x -> (|<x, phi_i>|)_i; constant on the classes of x ~ -x.
pub fn intensity_apply(f: &Frame, x: &[f64]) -> Result<Vec<f64>> {
    Ok(f.measure(x)?.into_iter().map(f64::abs).collect())
}

/// Quotient metric on R^n / {x ~ -x}.
pub fn quotient_distance(x: &[f64], y: &[f64]) -> f64 {
    let d_minus: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    let d_plus: f64 = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum();
    d_minus.min(d_plus).sqrt()
}

/// The complement property verdict with its quantitative constant:
/// sigma^2 is the minimum over all partitions {J, J^c} of the larger of the
/// two sub-collection lower bounds.
#[derive(Debug, Clone)]
pub struct ComplementReport {
    pub holds: bool,
    pub sigma_sq: f64,
    pub worst_subset: IndexSet,
    pub failing_subset: Option<IndexSet>,
    pub config: AnalysisConfig,
}

/// Exhaustive check over the 2^(m-1) unordered partitions.
pub fn complement_property(f: &Frame, cfg: &AnalysisConfig) -> Result<ComplementReport> {
    let m = f.m();
    if m > cfg.pattern_cap {
        return Err(Error::TooManyIndices {
            context: "complement property".into(),
            m,
            cap: cfg.pattern_cap,
        });
    }
    let mut sigma_sq = f64::INFINITY;
    let mut worst = IndexSet::empty(m);
    let mut failing: Option<IndexSet> = None;
    // fixing element m-1 outside J enumerates unordered partitions once
    for mask in 0u64..(1u64 << (m - 1)) {
        let j = IndexSet::from_bits(mask, m);
        let jc = j.complement();
        let a_j = sub_frame_lower_bound(f, &j, cfg)?;
        let a_jc = sub_frame_lower_bound(f, &jc, cfg)?;
        let v = a_j.max(a_jc);
        if v < sigma_sq {
            sigma_sq = v;
            worst = j;
        }
        if v <= cfg.frame_tol && failing.is_none() {
            failing = Some(j);
        }
    }
    Ok(ComplementReport {
        holds: failing.is_none(),
        sigma_sq,
        worst_subset: worst,
        failing_subset: failing,
        config: cfg.clone(),
    })
}

/// The sign-split constant: minimum over realizable sign-product partitions
/// of the larger sub-collection bound. Products are generated by chamber
/// pairs; with s and t realizable, p = s * t splits indices into agreeing
/// and disagreeing coefficients.
#[derive(Debug, Clone)]
pub struct AAbsReport {
    pub a_abs: f64,
    pub worst_product_pattern: Vec<i8>,
    pub chamber_count: usize,
    pub method: EnumMethod,
    pub config: AnalysisConfig,
}

pub fn a_abs(f: &Frame, cfg: &AnalysisConfig) -> Result<AAbsReport> {
    let chambers = enum_sign_chambers(f, cfg)?;
    let m = f.m();
    let codes: Vec<u64> = chambers.patterns.iter().map(|c| c.code()).collect();
    // sign products: p_i = s_i t_i, so the product's negative set is the xor
    let mut products: BTreeSet<u64> = BTreeSet::new();
    for &a in &codes {
        for &b in &codes {
            products.insert(a ^ b);
        }
    }
    let mut best = f64::INFINITY;
    let mut worst_code = 0u64;
    for &p in &products {
        let neg = IndexSet::from_bits(p, m);
        let pos = neg.complement();
        let v = sub_frame_lower_bound(f, &pos, cfg)?.max(sub_frame_lower_bound(f, &neg, cfg)?);
        if v < best {
            best = v;
            worst_code = p;
        }
    }
    Ok(AAbsReport {
        a_abs: best,
        worst_product_pattern: (0..m).map(|i| if worst_code >> i & 1 == 1 { -1 } else { 1 }).collect(),
        chamber_count: chambers.patterns.len(),
        method: chambers.method,
        config: cfg.clone(),
    })
}

/// The three sandwiches for the optimal lower Lipschitz bound of the
/// intensity map: in terms of sigma, in terms of A_|.|, and the improved
/// combination of the two.
#[derive(Debug, Clone, Copy)]
pub struct PrBounds {
    pub bandeira: (f64, f64),
    pub a_form: (f64, f64),
    pub improved: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct PrAnalysis {
    pub complement: ComplementReport,
    pub a_abs: AAbsReport,
    pub bounds: Option<PrBounds>,
}

pub fn pr_analysis(f: &Frame, cfg: &AnalysisConfig) -> Result<PrAnalysis> {
    let complement = complement_property(f, cfg)?;
    let abs = a_abs(f, cfg)?;
    let bounds = if complement.holds {
        let sigma = complement.sigma_sq.sqrt();
        let ra = abs.a_abs.sqrt();
        Some(PrBounds {
            bandeira: (sigma, 2.0_f64.sqrt() * sigma),
            a_form: (ra, (2.0 * abs.a_abs).sqrt()),
            improved: (ra, 2.0_f64.sqrt() * sigma),
        })
    } else {
        None
    };
    Ok(PrAnalysis { complement, a_abs: abs, bounds })
}

pub fn pr_lipschitz_bounds(f: &Frame, cfg: &AnalysisConfig) -> Result<PrBounds> {
    pr_analysis(f, cfg)?.bounds.ok_or(Error::NotPhaseRetrievable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{make_mercedes_benz, make_random, make_standard_basis};
    use approx::assert_abs_diff_eq;

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    fn r1_two_copies() -> Frame {
        Frame::new(vec![vec![1.0], vec![1.0]], None, &cfg()).unwrap()
    }

    #[test]
    fn intensity_is_sign_invariant() {
        let f = make_mercedes_benz();
        let x = [0.3, -1.2];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(intensity_apply(&f, &x).unwrap(), intensity_apply(&f, &neg).unwrap());
    }

    #[test]
    fn intensity_examples() {
        let f = make_standard_basis(2).unwrap();
        assert_eq!(intensity_apply(&f, &[3.0, -4.0]).unwrap(), vec![3.0, 4.0]);
        assert_eq!(intensity_apply(&f, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn mercedes_benz_complement_property() {
        let rep = complement_property(&make_mercedes_benz(), &cfg()).unwrap();
        assert!(rep.holds);
        assert_abs_diff_eq!(rep.sigma_sq, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn standard_basis_fails_complement_property() {
        let rep = complement_property(&make_standard_basis(2).unwrap(), &cfg()).unwrap();
        assert!(!rep.holds);
        let failing = rep.failing_subset.unwrap();
        // {e1} vs {e2}: neither side spans
        assert_eq!(failing.count(), 1);
    }

    /// By-hand subset enumeration: splits of {1, 1} give max(1, 1) = 1 and
    /// the trivial split gives 2, so sigma^2 = 1.
    #[test]
    fn two_copies_in_r1_sigma() {
        let rep = complement_property(&r1_two_copies(), &cfg()).unwrap();
        assert!(rep.holds);
        assert_abs_diff_eq!(rep.sigma_sq, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_copies_in_r1_a_abs_is_two_sigma_sq() {
        let rep = a_abs(&r1_two_copies(), &cfg()).unwrap();
        assert_abs_diff_eq!(rep.a_abs, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn mercedes_benz_a_abs_equals_sigma_sq() {
        let rep = a_abs(&make_mercedes_benz(), &cfg()).unwrap();
        assert_abs_diff_eq!(rep.a_abs, 0.5, epsilon = 1e-9);
        assert_eq!(rep.chamber_count, 6);
    }

    #[test]
    fn sandwich_values_for_mercedes_benz() {
        let b = pr_lipschitz_bounds(&make_mercedes_benz(), &cfg()).unwrap();
        assert_abs_diff_eq!(b.improved.0, 0.5_f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(b.improved.1, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn sandwich_collapses_for_two_copies_in_r1() {
        let b = pr_lipschitz_bounds(&r1_two_copies(), &cfg()).unwrap();
        assert_abs_diff_eq!(b.improved.0, 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.improved.1, 2.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn non_retrievable_frame_has_no_bounds() {
        assert!(matches!(
            pr_lipschitz_bounds(&make_standard_basis(2).unwrap(), &cfg()),
            Err(Error::NotPhaseRetrievable)
        ));
    }

    /// sigma^2 <= A_|.| <= 2 sigma^2, the improved interval nests inside
    /// both original sandwiches, and the complement property is equivalent
    /// to A_|.| being positive.
    #[test]
    fn constants_nest_on_random_frames() {
        let mut checked = 0;
        let mut seed = 0u64;
        while checked < 8 {
            seed += 1;
            let n = 2 + (seed % 2) as usize;
            let m = 2 * n - 1 + (seed % 2) as usize;
            let f = make_random(n, m, seed).unwrap();
            let analysis = pr_analysis(&f, &cfg()).unwrap();
            let holds = analysis.complement.holds;
            assert_eq!(holds, analysis.a_abs.a_abs > cfg().frame_tol);
            if !holds {
                continue;
            }
            checked += 1;
            let s2 = analysis.complement.sigma_sq;
            let aa = analysis.a_abs.a_abs;
            assert!(s2 <= aa + 1e-9);
            assert!(aa <= 2.0 * s2 + 1e-9);
            let b = analysis.bounds.unwrap();
            assert!(b.improved.0 >= b.bandeira.0 - 1e-12);
            assert!(b.improved.1 <= b.a_form.1 + 1e-12);
        }
    }

    /// Realizable sign products are closed under global negation; the
    /// product set is symmetric because chamber codes are.
    #[test]
    fn product_patterns_are_negation_closed() {
        let f = make_random(2, 4, 6).unwrap();
        let chambers = enum_sign_chambers(&f, &cfg()).unwrap();
        let codes: Vec<u64> = chambers.patterns.iter().map(|c| c.code()).collect();
        let mut products = BTreeSet::new();
        for &a in &codes {
            for &b in &codes {
                products.insert(a ^ b);
            }
        }
        let full = IndexSet::full(f.m()).bits();
        for &p in &products {
            assert!(products.contains(&(!p & full)));
        }
    }

    #[test]
    fn quotient_distance_identifies_antipodes() {
        assert_eq!(quotient_distance(&[1.0, 2.0], &[-1.0, -2.0]), 0.0);
        assert_abs_diff_eq!(
            quotient_distance(&[1.0, 0.0], &[0.0, 1.0]),
            2.0_f64.sqrt(),
            epsilon = 1e-15
        );
    }
}
