//! Halfspace systems at desk scale: phase-1 simplex feasibility with
//! witnesses, minimum-norm points via Dykstra's alternating projections, and
//! exact vertex enumeration for bounded cells.

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, norm_sq};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
}

/// A closed halfspace `normal . x >= offset` or `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub sense: Sense,
}

impl Halfspace {
    pub fn ge(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset, sense: Sense::Ge }
    }

    pub fn le(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset, sense: Sense::Le }
    }

    /// Satisfaction slack; nonnegative iff `x` satisfies the halfspace.
    pub fn slack(&self, x: &[f64]) -> f64 {
        match self.sense {
            Sense::Ge => dot(&self.normal, x) - self.offset,
            Sense::Le => self.offset - dot(&self.normal, x),
        }
    }

    /// Row in `a . x >= b` form.
    fn as_ge(&self) -> (Vec<f64>, f64) {
        match self.sense {
            Sense::Ge => (self.normal.clone(), self.offset),
            Sense::Le => (self.normal.iter().map(|v| -v).collect(), -self.offset),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.normal.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.normal.len() });
        }
        if !self.normal.iter().all(|v| v.is_finite()) || !self.offset.is_finite() {
            return Err(Error::Invalid("halfspace with non-finite entries".into()));
        }
        if norm_sq(&self.normal) == 0.0 {
            return Err(Error::Invalid("halfspace normal is zero".into()));
        }
        Ok(())
    }
}

/// A halfspace that may be marked strict. Strict constraints are tightened by
/// the strictness margin before feasibility is decided, since open sets are
/// not representable in an LP.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub halfspace: Halfspace,
    pub strict: bool,
}

impl LinearConstraint {
    pub fn closed(halfspace: Halfspace) -> Self {
        Self { halfspace, strict: false }
    }

    pub fn strict(halfspace: Halfspace) -> Self {
        Self { halfspace, strict: true }
    }
}

/// Phase-1 simplex on `a_k . x >= b_k` rows. Returns a feasible point, or
/// `None` when the system is infeasible (the phase-1 optimum stays positive).
///
/// Free variables are split as x = u - v; Bland's rule keeps the pivoting
/// finite. Row count and dimension are both tiny here, so a dense tableau is
/// the whole story.
fn simplex_feasible_point(
    rows: &[(Vec<f64>, f64)],
    dim: usize,
    cfg: &AnalysisConfig,
) -> Result<Option<Vec<f64>>> {
    let m = rows.len();
    if m == 0 {
        return Ok(Some(vec![0.0; dim]));
    }

    // Normalize rhs >= 0; remember whether the surplus enters with +1.
    // columns: u(dim) | v(dim) | s(m) | artificials | rhs
    let n_uv = 2 * dim;
    let mut art_cols: Vec<Option<usize>> = vec![None; m];
    let mut n_art = 0;
    let mut flipped = vec![false; m];
    for (k, (_, b)) in rows.iter().enumerate() {
        if *b < 0.0 {
            flipped[k] = true; // surplus coefficient becomes +1, s_k can start basic
        } else {
            art_cols[k] = Some(n_art);
            n_art += 1;
        }
    }
    let n_cols = n_uv + m + n_art + 1;
    let rhs_col = n_cols - 1;

    let mut tab = vec![vec![0.0_f64; n_cols]; m];
    let mut basis = vec![0_usize; m];
    for (k, (a, b)) in rows.iter().enumerate() {
        let sgn = if flipped[k] { -1.0 } else { 1.0 };
        for j in 0..dim {
            tab[k][j] = sgn * a[j];
            tab[k][dim + j] = -sgn * a[j];
        }
        tab[k][n_uv + k] = -sgn; // surplus
        tab[k][rhs_col] = sgn * *b;
        match art_cols[k] {
            Some(ac) => {
                tab[k][n_uv + m + ac] = 1.0;
                basis[k] = n_uv + m + ac;
            }
            None => basis[k] = n_uv + k,
        }
    }

    // Objective: minimize the artificial sum. Reduced costs start as the
    // artificial indicator row, then basic artificial columns are eliminated.
    let mut obj = vec![0.0_f64; n_cols];
    for ac in 0..n_art {
        obj[n_uv + m + ac] = 1.0;
    }
    for k in 0..m {
        if art_cols[k].is_some() {
            for j in 0..n_cols {
                obj[j] -= tab[k][j];
            }
        }
    }

    let scale = rows.iter().fold(1.0_f64, |s, (a, b)| {
        a.iter().fold(s.max(b.abs()), |s2, v| s2.max(v.abs()))
    });
    let piv_tol = 1e-11 * scale;
    let mut pivots = 0;
    loop {
        // Bland: first column with negative reduced cost.
        let entering = (0..rhs_col).find(|&j| obj[j] < -piv_tol);
        let Some(e) = entering else { break };

        // Ratio test; ties resolved by smallest basic-variable index (Bland).
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for k in 0..m {
            if tab[k][e] > piv_tol {
                let ratio = tab[k][rhs_col] / tab[k][e];
                let better = match leave {
                    None => true,
                    Some(cur) => {
                        ratio < best - 1e-14 * scale
                            || (ratio <= best + 1e-14 * scale && basis[k] < basis[cur])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(k);
                }
            }
        }
        let Some(l) = leave else {
            // cannot happen for a bounded-below phase-1 objective
            return Err(Error::IterationLimit { context: "phase-1 simplex ratio test".into() });
        };

        let piv = tab[l][e];
        for j in 0..n_cols {
            tab[l][j] /= piv;
        }
        for k in 0..m {
            if k != l && tab[k][e].abs() > 0.0 {
                let f = tab[k][e];
                for j in 0..n_cols {
                    tab[k][j] -= f * tab[l][j];
                }
                tab[k][e] = 0.0;
            }
        }
        let f = obj[e];
        if f != 0.0 {
            for j in 0..n_cols {
                obj[j] -= f * tab[l][j];
            }
            obj[e] = 0.0;
        }
        basis[l] = e;

        pivots += 1;
        if pivots > cfg.lp_max_pivots {
            return Err(Error::IterationLimit { context: "phase-1 simplex".into() });
        }
    }

    let mut obj_val = 0.0;
    for k in 0..m {
        if basis[k] >= n_uv + m {
            obj_val += tab[k][rhs_col];
        }
    }
    if obj_val > 1e-9 * (1.0 + scale) {
        return Ok(None);
    }

    let mut x = vec![0.0_f64; dim];
    for k in 0..m {
        let b = basis[k];
        if b < dim {
            x[b] += tab[k][rhs_col];
        } else if b < n_uv {
            x[b - dim] -= tab[k][rhs_col];
        }
    }
    Ok(Some(x))
}

/// Decides feasibility of a mixed strict/closed system and returns a witness.
///
/// Strict constraints are tightened by `margin` (plus a small safety factor so
/// the witness verifies against the margin in floating point); the returned
/// point satisfies every closed constraint with slack >= 0 and every strict
/// one with slack >= margin, checked before returning. `Ok(None)` means the
/// tightened system is infeasible.
pub fn lp_feasible(
    constraints: &[LinearConstraint],
    dim: usize,
    margin: f64,
    cfg: &AnalysisConfig,
) -> Result<Option<Vec<f64>>> {
    if dim == 0 {
        return Err(Error::DegenerateDomain { dim });
    }
    for c in constraints {
        c.halfspace.validate(dim)?;
    }
    let tighten = margin * (1.0 + 1e-6);
    let rows: Vec<(Vec<f64>, f64)> = constraints
        .iter()
        .map(|c| {
            let (a, b) = c.halfspace.as_ge();
            let b = if c.strict { b + tighten } else { b };
            (a, b)
        })
        .collect();
    let Some(x) = simplex_feasible_point(&rows, dim, cfg)? else {
        return Ok(None);
    };
    for c in constraints {
        let need = if c.strict { margin } else { 0.0 };
        if c.halfspace.slack(&x) < need {
            return Err(Error::Invalid(
                "feasibility witness failed verification against its constraints".into(),
            ));
        }
    }
    Ok(Some(x))
}

/// Feasibility of a closed system, no witness verification. Used as the
/// phase-1 step of the min-norm solver and for cell emptiness checks.
pub fn feasible_point(
    halfspaces: &[Halfspace],
    dim: usize,
    cfg: &AnalysisConfig,
) -> Result<Option<Vec<f64>>> {
    if dim == 0 {
        return Err(Error::DegenerateDomain { dim });
    }
    for h in halfspaces {
        h.validate(dim)?;
    }
    let rows: Vec<(Vec<f64>, f64)> = halfspaces.iter().map(|h| h.as_ge()).collect();
    simplex_feasible_point(&rows, dim, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolytopeMinNorm {
    Infeasible,
    Minimum { point: Vec<f64>, norm: f64 },
}

/// Minimum-norm point of a closed polytope.
///
/// Feasibility is certified by the phase-1 simplex first; the minimizer is
/// then the projection of the origin onto the intersection, computed by
/// cyclic Dykstra iterations over the halfspaces. Cells with nearly parallel
/// faces can stall the projection inside the cycle cap; those fall back to
/// an exact active-set enumeration, which stays cheap at desk scale. The
/// returned point satisfies every constraint with slack >= -qp_tol and its
/// norm is within qp_tol of the optimum.
pub fn min_norm_in_polytope(
    halfspaces: &[Halfspace],
    dim: usize,
    cfg: &AnalysisConfig,
) -> Result<PolytopeMinNorm> {
    if feasible_point(halfspaces, dim, cfg)?.is_none() {
        return Ok(PolytopeMinNorm::Infeasible);
    }

    let rows: Vec<(Vec<f64>, f64, f64)> = halfspaces
        .iter()
        .map(|h| {
            let (a, b) = h.as_ge();
            let nsq = norm_sq(&a);
            (a, b, nsq)
        })
        .collect();

    let mut x = vec![0.0_f64; dim];
    if rows.iter().all(|(a, b, _)| dot(a, &x) >= *b) {
        return Ok(PolytopeMinNorm::Minimum { point: x, norm: 0.0 });
    }

    let mut corrections = vec![vec![0.0_f64; dim]; rows.len()];
    let mut converged = false;
    for _cycle in 0..cfg.qp_max_cycles {
        let x_start = x.clone();
        for (k, (a, b, nsq)) in rows.iter().enumerate() {
            let y: Vec<f64> = x.iter().zip(&corrections[k]).map(|(xi, ei)| xi + ei).collect();
            let slack = dot(a, &y) - b;
            let x_new: Vec<f64> = if slack >= 0.0 {
                y.clone()
            } else {
                let t = -slack / nsq;
                y.iter().zip(a).map(|(yi, ai)| yi + t * ai).collect()
            };
            for i in 0..dim {
                corrections[k][i] = y[i] - x_new[i];
            }
            x = x_new;
        }
        let moved = x
            .iter()
            .zip(&x_start)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        let violation = rows
            .iter()
            .fold(0.0_f64, |v, (a, b, _)| v.max(b - dot(a, &x)));
        if moved <= 0.01 * cfg.qp_tol && violation <= cfg.qp_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        let ge_rows: Vec<(Vec<f64>, f64)> =
            rows.iter().map(|(a, b, _)| (a.clone(), *b)).collect();
        return match min_norm_active_set(&ge_rows, dim) {
            Some((point, n)) => Ok(PolytopeMinNorm::Minimum { point, norm: n }),
            None => Err(Error::IterationLimit { context: "Dykstra min-norm projection".into() }),
        };
    }
    let n = norm(&x);
    Ok(PolytopeMinNorm::Minimum { point: x, norm: n })
}

/// Exact minimum-norm point by enumerating candidate active sets of size at
/// most `dim`: the optimum is the least-norm point of the affine hull of
/// some independent active subset, and feasibility screens the candidates.
fn min_norm_active_set(rows: &[(Vec<f64>, f64)], dim: usize) -> Option<(Vec<f64>, f64)> {
    let k = rows.len();
    let scale = rows
        .iter()
        .fold(1.0_f64, |s, (a, b)| a.iter().fold(s.max(b.abs()), |s2, v| s2.max(v.abs())));
    let feasible =
        |x: &[f64]| rows.iter().all(|(a, b)| dot(a, x) - b >= -1e-9 * scale);

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut consider = |x: Vec<f64>| {
        if feasible(&x) {
            let n = norm(&x);
            if best.as_ref().map(|(_, bn)| n < *bn).unwrap_or(true) {
                best = Some((x, n));
            }
        }
    };

    consider(vec![0.0; dim]);
    let mut stack: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    while let Some(subset) = stack.pop() {
        if let Some(x) = least_norm_on_affine(rows, &subset, dim) {
            consider(x);
        }
        if subset.len() < dim {
            let last = *subset.last().unwrap();
            for nxt in (last + 1)..k {
                let mut bigger = subset.clone();
                bigger.push(nxt);
                stack.push(bigger);
            }
        }
    }
    best
}

/// Least-norm solution of the equality system A x = b over the given rows,
/// via the normal equations A A^T y = b; `None` when the Gram is singular.
fn least_norm_on_affine(rows: &[(Vec<f64>, f64)], idx: &[usize], dim: usize) -> Option<Vec<f64>> {
    let r = idx.len();
    let mut g = vec![vec![0.0_f64; r + 1]; r];
    for (i, &ri) in idx.iter().enumerate() {
        for (j, &rj) in idx.iter().enumerate() {
            g[i][j] = dot(&rows[ri].0, &rows[rj].0);
        }
        g[i][r] = rows[ri].1;
    }
    for col in 0..r {
        let (p, pv) = (col..r)
            .map(|i| (i, g[i][col].abs()))
            .max_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())?;
        if pv < 1e-12 {
            return None;
        }
        g.swap(col, p);
        for i in 0..r {
            if i != col {
                let f = g[i][col] / g[col][col];
                for c in col..=r {
                    g[i][c] -= f * g[col][c];
                }
            }
        }
    }
    let y: Vec<f64> = (0..r).map(|i| g[i][r] / g[i][i]).collect();
    let mut x = vec![0.0_f64; dim];
    for (i, &ri) in idx.iter().enumerate() {
        for d in 0..dim {
            x[d] += y[i] * rows[ri].0[d];
        }
    }
    Some(x)
}

/// Exact max-norm vertex of a bounded nonempty polytope, by enumerating the
/// nondegenerate intersections of `dim` constraint hyperplanes. Returns
/// `None` when no nondegenerate vertex exists (degenerate geometry; callers
/// must treat that as inconclusive).
pub fn max_norm_vertex(halfspaces: &[Halfspace], dim: usize) -> Option<(Vec<f64>, f64)> {
    let rows: Vec<(Vec<f64>, f64)> = halfspaces.iter().map(|h| h.as_ge()).collect();
    let k = rows.len();
    if k < dim {
        return None;
    }
    let scale = rows
        .iter()
        .fold(1.0_f64, |s, (a, b)| a.iter().fold(s.max(b.abs()), |s2, v| s2.max(v.abs())));

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        if let Some(x) = solve_square(&rows, &subset, dim, scale) {
            let ok = rows.iter().all(|(a, b)| dot(a, &x) - b >= -1e-9 * scale);
            if ok {
                let n = norm(&x);
                if best.as_ref().map(|(_, bn)| n > *bn).unwrap_or(true) {
                    best = Some((x, n));
                }
            }
        }
        // next combination in lexicographic order
        let mut i = dim;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] != i + k - dim {
                subset[i] += 1;
                for j in (i + 1)..dim {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Solves the square system formed by the `subset` rows as equalities.
fn solve_square(
    rows: &[(Vec<f64>, f64)],
    subset: &[usize],
    dim: usize,
    scale: f64,
) -> Option<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = subset.iter().map(|&i| rows[i].0.clone()).collect();
    let mut b: Vec<f64> = subset.iter().map(|&i| rows[i].1).collect();
    for col in 0..dim {
        let (piv_row, piv_val) = (col..dim)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|(_, x), (_, y)| x.partial_cmp(y).unwrap())?;
        if piv_val < 1e-10 * scale {
            return None;
        }
        a.swap(col, piv_row);
        b.swap(col, piv_row);
        for r in 0..dim {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..dim {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..dim).map(|i| b[i] / a[i][i]).collect())
}
