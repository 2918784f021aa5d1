//! Finite frames for R^n: the frame type with its spanning check, optimal
//! frame bounds, sub-collection bounds, the analysis (linear measurement)
//! operator, named constructors, and file I/O.

use std::fmt;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::jsonfmt;
use crate::linalg::{all_finite, dot, sym_eig, Matrix};

/// Subset of frame indices as a bitmask over {0, .., m-1}. Capping m at 64
/// costs nothing here: every enumeration in this crate is exponential in m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet {
    bits: u64,
    m: usize,
}

impl IndexSet {
    pub fn empty(m: usize) -> Self {
        assert!(m <= 64);
        Self { bits: 0, m }
    }

    pub fn full(m: usize) -> Self {
        assert!(m <= 64);
        let bits = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Self { bits, m }
    }

    pub fn from_bits(bits: u64, m: usize) -> Self {
        assert!(m <= 64);
        let mask = Self::full(m).bits;
        Self { bits: bits & mask, m }
    }

    pub fn from_indices(indices: &[usize], m: usize) -> Self {
        let mut s = Self::empty(m);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len_universe(&self) -> usize {
        self.m
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.m);
        self.bits |= 1 << i;
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.m && self.bits >> i & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn complement(&self) -> Self {
        Self { bits: !self.bits & Self::full(self.m).bits, m: self.m }
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        Self { bits: self.bits | other.bits, m: self.m }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        Self { bits: self.bits & other.bits, m: self.m }
    }

    pub fn difference(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        Self { bits: self.bits & !other.bits, m: self.m }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(|&i| self.contains(i))
    }

    /// Bitmask string, index 0 leftmost: {1} in a universe of 4 is "0100".
    pub fn bitstring(&self) -> String {
        (0..self.m).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

/// Optimal frame bounds: the extreme eigenvalues of the frame operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// A finite collection of measurement vectors spanning R^n.
///
/// Construction validates finiteness, m >= n, and the spanning condition
/// (lower frame bound above `frame_tol`); sub-collections are queried through
/// [`IndexSet`]s and may freely fail to span, which deciders treat as a
/// first-class outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    vectors: Vec<Vec<f64>>,
    n: usize,
    label: Option<String>,
}

impl Frame {
    pub fn new(vectors: Vec<Vec<f64>>, label: Option<String>, cfg: &AnalysisConfig) -> Result<Frame> {
        if vectors.is_empty() {
            return Err(Error::Invalid("frame needs at least one vector".into()));
        }
        let n = vectors[0].len();
        if n == 0 {
            return Err(Error::Invalid("frame vectors must have dimension >= 1".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            if !all_finite(v) {
                return Err(Error::Invalid(format!("vector {i} has non-finite entries")));
            }
        }
        let m = vectors.len();
        if m < n {
            return Err(Error::Invalid(format!("need m >= n, got m = {m}, n = {n}")));
        }
        if m > 64 {
            return Err(Error::Invalid(format!("m = {m} exceeds the index cap of 64")));
        }
        let frame = Frame { vectors, n, label };
        let bounds = frame_bounds(&frame, cfg)?;
        if bounds.lower <= cfg.frame_tol {
            return Err(Error::NotAFrame { m, n, lower: bounds.lower, tol: cfg.frame_tol });
        }
        Ok(frame)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The analysis operator: x -> (<x, phi_i>)_i.
    pub fn measure(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        Ok(self.vectors.iter().map(|phi| dot(x, phi)).collect())
    }

    /// The frame operator Theta* Theta = sum_i phi_i phi_i^T.
    pub fn frame_operator(&self) -> Matrix {
        self.sub_frame_operator(&IndexSet::full(self.m()))
    }

    pub fn sub_frame_operator(&self, j: &IndexSet) -> Matrix {
        assert_eq!(j.len_universe(), self.m());
        let n = self.n;
        let mut s = Matrix::zeros(n, n);
        for i in j.iter() {
            let phi = &self.vectors[i];
            for r in 0..n {
                for c in 0..n {
                    s.set(r, c, s.get(r, c) + phi[r] * phi[c]);
                }
            }
        }
        s
    }
}

/// Optimal frame bounds as the extreme eigenvalues of the frame operator.
/// Rank-deficient collections report lower = 0 rather than an error.
pub fn frame_bounds(f: &Frame, cfg: &AnalysisConfig) -> Result<FrameBounds> {
    let eig = sym_eig(&f.frame_operator(), cfg)?;
    Ok(FrameBounds { lower: eig.min().max(0.0), upper: eig.max().max(0.0) })
}

/// Lower frame bound of the sub-collection indexed by `j`; zero whenever the
/// sub-collection cannot span.
pub fn sub_frame_lower_bound(f: &Frame, j: &IndexSet, cfg: &AnalysisConfig) -> Result<f64> {
    if j.count() < f.n() {
        return Ok(0.0);
    }
    let eig = sym_eig(&f.sub_frame_operator(j), cfg)?;
    Ok(eig.min().max(0.0))
}

/// Three unit vectors in R^2 at 120 degrees, first vector (0, 1).
pub fn make_mercedes_benz() -> Frame {
    let s3 = 3.0_f64.sqrt() / 2.0;
    Frame::new(
        vec![vec![0.0, 1.0], vec![-s3, -0.5], vec![s3, -0.5]],
        Some("mercedes-benz".into()),
        &AnalysisConfig::default(),
    )
    .expect("mercedes-benz frame is valid")
}

pub fn make_standard_basis(n: usize) -> Result<Frame> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be >= 1".into()));
    }
    let vectors: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    Frame::new(vectors, Some(format!("basis-{n}")), &AnalysisConfig::default())
}

/// The 2m-element frame (phi_i) followed by (-phi_i).
pub fn make_doubled(f: &Frame) -> Result<Frame> {
    let mut vectors = f.vectors.clone();
    vectors.extend(f.vectors.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<f64>>()));
    let label = match f.label() {
        Some(l) => format!("doubled({l})"),
        None => "doubled".into(),
    };
    Frame::new(vectors, Some(label), &AnalysisConfig::default())
}

/// Seeded i.i.d. standard normal frame; rank-deficient draws are rejected.
pub fn make_random(n: usize, m: usize, seed: u64) -> Result<Frame> {
    if n == 0 || m < n {
        return Err(Error::Invalid(format!("need m >= n >= 1, got n = {n}, m = {m}")));
    }
    let cfg = AnalysisConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let vectors: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        if let Ok(f) = Frame::new(vectors, Some(format!("random-{n}x{m}-seed{seed}")), &cfg) {
            return Ok(f);
        }
    }
    Err(Error::ConstructionFailed { detail: "random draws kept failing the spanning check".into() })
}

/// n+1 unit vectors forming a tight frame with frame operator ((n+1)/n) I:
/// the vertices of a regular simplex, via the Helmert basis of the
/// all-ones complement. Tightness and unit norms are verified on exit.
pub fn make_simplex_funtf(n: usize) -> Result<Frame> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be >= 1".into()));
    }
    let m = n + 1;
    // helmert[k] spans 1^perp in R^{n+1}
    let mut helmert = vec![vec![0.0_f64; m]; n];
    for k in 1..=n {
        let denom = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            helmert[k - 1][i] = 1.0 / denom;
        }
        helmert[k - 1][k] = -(k as f64) / denom;
    }
    let scale = ((m as f64) / (n as f64)).sqrt();
    let vectors: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..n).map(|k| scale * helmert[k][i]).collect())
        .collect();

    let cfg = AnalysisConfig::default();
    let frame = Frame::new(vectors, Some(format!("simplex-funtf-{n}")), &cfg)?;
    let target = (m as f64) / (n as f64);
    let op = frame.frame_operator();
    let mut residual = 0.0_f64;
    for r in 0..n {
        for c in 0..n {
            let want = if r == c { target } else { 0.0 };
            residual = residual.max((op.get(r, c) - want).abs());
        }
    }
    for v in frame.vectors() {
        residual = residual.max((dot(v, v) - 1.0).abs());
    }
    if residual > 1e-9 {
        return Err(Error::ConstructionFailed {
            detail: format!("tight-frame verification residual {residual:.3e} exceeds 1e-9"),
        });
    }
    Ok(frame)
}

// ---------------------------------------------------------------------------
// file formats: JSON {"n", "m", "vectors", "label"?} and CSV (one vector per
// row), both with 17-significant-digit decimals for bit-exact round-trips.
// ---------------------------------------------------------------------------

pub fn frame_to_json(f: &Frame) -> String {
    let vectors: Vec<Value> = f
        .vectors()
        .iter()
        .map(|v| Value::Array(v.iter().map(|&x| json!(x)).collect()))
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("n".into(), json!(f.n() as u64));
    obj.insert("m".into(), json!(f.m() as u64));
    obj.insert("vectors".into(), Value::Array(vectors));
    if let Some(l) = f.label() {
        obj.insert("label".into(), json!(l));
    }
    jsonfmt::to_json_pretty(&Value::Object(obj))
}

pub fn frame_from_json(s: &str, cfg: &AnalysisConfig) -> Result<Frame> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("frame file must be a JSON object".into()))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer field \"n\"".into()))? as usize;
    let m = obj
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer field \"m\"".into()))? as usize;
    let rows = obj
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"vectors\"".into()))?;
    let label = obj.get("label").and_then(Value::as_str).map(str::to_owned);

    let mut vectors = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("each vector must be an array of numbers".into()))?;
        let mut out = Vec::with_capacity(row.len());
        for x in row {
            out.push(x.as_f64().ok_or_else(|| Error::Parse("non-numeric vector entry".into()))?);
        }
        vectors.push(out);
    }
    if vectors.len() != m {
        return Err(Error::Parse(format!("\"m\" = {m} but {} vectors given", vectors.len())));
    }
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::Parse(format!("\"n\" = {n} but a vector has a different length")));
    }
    Frame::new(vectors, label, cfg)
}

pub fn frame_to_csv(f: &Frame) -> String {
    let mut out = String::new();
    for v in f.vectors() {
        let row: Vec<String> = v.iter().map(|&x| jsonfmt::fmt_f64(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn frame_from_csv(s: &str, cfg: &AnalysisConfig) -> Result<Frame> {
    let mut vectors = Vec::new();
    for (lineno, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let x: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {field:?}", lineno + 1)))?;
            row.push(x);
        }
        vectors.push(row);
    }
    Frame::new(vectors, None, cfg)
}

pub fn read_frame_file(path: &Path, cfg: &AnalysisConfig) -> Result<Frame> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().map(|e| e == "csv").unwrap_or(false) {
        frame_from_csv(&text, cfg)
    } else {
        frame_from_json(&text, cfg)
    }
}

pub fn write_frame_file(path: &Path, f: &Frame) -> Result<()> {
    let text = if path.extension().map(|e| e == "csv").unwrap_or(false) {
        frame_to_csv(f)
    } else {
        frame_to_json(f)
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    #[test]
    fn orthonormal_basis_has_unit_bounds() {
        let f = make_standard_basis(2).unwrap();
        let b = frame_bounds(&f, &cfg()).unwrap();
        assert_abs_diff_eq!(b.lower, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mercedes_benz_bounds_are_three_halves() {
        let f = make_mercedes_benz();
        let b = frame_bounds(&f, &cfg()).unwrap();
        assert_abs_diff_eq!(b.lower, 1.5, epsilon = 1e-9);
        assert_abs_diff_eq!(b.upper, 1.5, epsilon = 1e-9);
    }

    /// Rayleigh-quotient sampling oracle for the bounds of a random frame.
    #[test]
    fn random_frame_bounds_match_rayleigh_sampling() {
        let f = make_random(3, 5, 11).unwrap();
        let b = frame_bounds(&f, &cfg()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for _ in 0..1_000_000 {
            let x: Vec<f64> = (0..3).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let nsq = dot(&x, &x);
            if nsq < 1e-12 {
                continue;
            }
            let q = f.measure(&x).unwrap().iter().map(|c| c * c).sum::<f64>() / nsq;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        assert_abs_diff_eq!(b.lower, lo, epsilon = 1e-3);
        assert_abs_diff_eq!(b.upper, hi, epsilon = 1e-3);
    }

    #[test]
    fn mercedes_benz_minus_one_element() {
        let f = make_mercedes_benz();
        for drop in 0..3 {
            let j = IndexSet::from_indices(
                &(0..3).filter(|&i| i != drop).collect::<Vec<_>>(),
                3,
            );
            let a = sub_frame_lower_bound(&f, &j, &cfg()).unwrap();
            assert_abs_diff_eq!(a, 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn full_index_set_matches_frame_bounds() {
        let f = make_random(2, 4, 5).unwrap();
        let a = sub_frame_lower_bound(&f, &IndexSet::full(4), &cfg()).unwrap();
        assert_abs_diff_eq!(a, frame_bounds(&f, &cfg()).unwrap().lower, epsilon = 1e-12);
    }

    #[test]
    fn single_vector_cannot_span_r2() {
        let f = make_standard_basis(2).unwrap();
        let a = sub_frame_lower_bound(&f, &IndexSet::from_indices(&[0], 2), &cfg()).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn measure_standard_basis_is_identity() {
        let f = make_standard_basis(2).unwrap();
        assert_eq!(f.measure(&[3.0, -4.0]).unwrap(), vec![3.0, -4.0]);
        assert_eq!(f.measure(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn measure_mercedes_benz_first_coefficient() {
        let f = make_mercedes_benz();
        let c = f.measure(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn measure_rejects_wrong_dimension() {
        let f = make_standard_basis(2).unwrap();
        assert!(matches!(f.measure(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn simplex_funtf_bounds() {
        for n in 1..=5 {
            let f = make_simplex_funtf(n).unwrap();
            let b = frame_bounds(&f, &cfg()).unwrap();
            let want = (n as f64 + 1.0) / n as f64;
            assert_abs_diff_eq!(b.lower, want, epsilon = 1e-9);
            assert_abs_diff_eq!(b.upper, want, epsilon = 1e-9);
        }
    }

    #[test]
    fn doubling_doubles_the_bounds() {
        let f = make_doubled(&make_standard_basis(2).unwrap()).unwrap();
        assert_eq!(f.m(), 4);
        let b = frame_bounds(&f, &cfg()).unwrap();
        assert_abs_diff_eq!(b.lower, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn doubled_lower_bound_is_exactly_twice() {
        for seed in 0..5 {
            let f = make_random(3, 4, seed).unwrap();
            let d = make_doubled(&f).unwrap();
            let a = frame_bounds(&f, &cfg()).unwrap().lower;
            let ad = frame_bounds(&d, &cfg()).unwrap().lower;
            assert_abs_diff_eq!(ad, 2.0 * a, epsilon = 1e-9);
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = make_random(3, 7, 42).unwrap();
        let b = make_random(3, 7, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let f = make_random(3, 5, 3).unwrap();
        let back = frame_from_json(&frame_to_json(&f), &cfg()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let f = make_random(2, 4, 9).unwrap();
        let back = frame_from_csv(&frame_to_csv(&f), &cfg()).unwrap();
        assert_eq!(f.vectors(), back.vectors());
    }

    #[test]
    fn rank_deficient_collection_is_rejected() {
        let vs = vec![vec![1.0, 0.0], vec![2.0, 0.0]];
        assert!(matches!(
            Frame::new(vs, None, &cfg()),
            Err(Error::NotAFrame { .. })
        ));
    }

    proptest! {
        /// Adding vectors to a sub-collection cannot lower its bound.
        #[test]
        fn sub_bound_is_monotone(seed in 0u64..50, mask in 0u64..32, extra in 0u64..32) {
            let f = make_random(2, 5, seed).unwrap();
            let c = cfg();
            let j = IndexSet::from_bits(mask, 5);
            let j2 = IndexSet::from_bits(mask | extra, 5);
            let a = sub_frame_lower_bound(&f, &j, &c).unwrap();
            let a2 = sub_frame_lower_bound(&f, &j2, &c).unwrap();
            prop_assert!(a <= a2 + 1e-9);
        }

        /// A ||x||^2 <= ||Theta x||^2 <= B ||x||^2 on random inputs.
        #[test]
        fn bounds_sandwich_the_quadratic_form(seed in 0u64..20) {
            let f = make_random(3, 6, seed).unwrap();
            let c = cfg();
            let b = frame_bounds(&f, &c).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            for _ in 0..100 {
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
                let q: f64 = f.measure(&x).unwrap().iter().map(|v| v * v).sum();
                let nsq = dot(&x, &x);
                prop_assert!(b.lower * nsq <= q + 1e-9 * (1.0 + q.abs()));
                prop_assert!(q <= b.upper * nsq + 1e-9 * (1.0 + q.abs()));
            }
        }
    }
}
