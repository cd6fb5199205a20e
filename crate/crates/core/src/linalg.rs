//! Small dense per-atom linear algebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::rn_module::euclidean_norm;

/// Greedy independent row selection by Gaussian elimination.
///
/// Rows are taken in order; each is reduced against the rows already kept and
/// kept when its largest remaining entry exceeds `tol * max_row_norm`. The
/// pivot column of a kept row is its largest entry (column pivoting). Returns
/// the indices of the kept rows; their count is the numerical rank.
pub fn independent_rows(rows: &[&[Complex64]], tol: f64) -> Vec<usize> {
    let scale = rows.iter().map(|r| euclidean_norm(r)).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let threshold = tol * scale;
    let mut kept = Vec::new();
    // reduced rows paired with their pivot column
    let mut echelon: Vec<(Vec<Complex64>, usize)> = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut r = row.to_vec();
        for (e, p) in &echelon {
            let factor = r[*p] / e[*p];
            if factor != Complex64::new(0.0, 0.0) {
                for (ri, ei) in r.iter_mut().zip(e) {
                    *ri -= factor * ei;
                }
            }
            r[*p] = Complex64::new(0.0, 0.0);
        }
        let (pivot, size) = r
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if size > threshold {
            kept.push(k);
            echelon.push((r, pivot));
        }
    }
    kept
}

/// Outcome of a minimum-norm least-squares solve of `A x = b`.
#[derive(Debug, Clone)]
pub struct MinNormSolution {
    /// `A⁺ b`.
    pub x: Vec<Complex64>,
    /// `b − A x`, orthogonal to the range of `A`.
    pub residual: Vec<Complex64>,
    /// `(A Aᴴ)⁺ b`; satisfies `x = Aᴴ dual` whenever `b` lies in the range.
    pub dual: Vec<Complex64>,
    pub rank: usize,
    pub largest_singular_value: f64,
}

/// Minimum-norm least-squares solution of `A x = b` for an `m × n` matrix
/// given row-major. Singular values at or below `tol · σ_max` are dropped.
pub fn min_norm_solve(a: &[Complex64], m: usize, n: usize, b: &[Complex64], tol: f64) -> MinNormSolution {
    assert_eq!(a.len(), m * n);
    assert_eq!(b.len(), m);
    let zero = Complex64::new(0.0, 0.0);
    if m == 0 || n == 0 {
        return MinNormSolution {
            x: vec![zero; n],
            residual: b.to_vec(),
            dual: vec![zero; m],
            rank: 0,
            largest_singular_value: 0.0,
        };
    }
    let mat = DMatrix::from_row_slice(m, n, a);
    let rhs = DVector::from_column_slice(b);
    let svd = mat.svd(true, true);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = tol * smax;

    let mut x = DVector::from_element(n, zero);
    let mut projected = DVector::from_element(m, zero);
    let mut dual = DVector::from_element(m, zero);
    let mut rank = 0;
    for (i, &s) in sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        rank += 1;
        let ui = u.column(i);
        let coeff = ui.dotc(&rhs);
        // v_i = conj(row i of Vᴴ)
        let vi = v_t.row(i).transpose().map(|c| c.conj());
        x += vi * (coeff / s);
        projected += ui * coeff;
        dual += ui * (coeff / (s * s));
    }
    let residual = rhs - projected;
    MinNormSolution {
        x: x.iter().cloned().collect(),
        residual: residual.iter().cloned().collect(),
        dual: dual.iter().cloned().collect(),
        rank,
        largest_singular_value: smax,
    }
}

/// Solve a small real symmetric system through the pseudo-inverse.
pub(crate) fn real_pinv_solve(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    svd.solve(b, tol * svd.singular_values.max().max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| DVector::zeros(a.ncols()))
}
