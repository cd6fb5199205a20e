//! Real finite-dimensional convex geometry used per atom: nearest points of
//! polytopes, polytope membership and closest pairs of convex bodies.

use nalgebra::{DMatrix, DVector};

use crate::linalg::real_pinv_solve;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn combine(points: &[Vec<f64>], active: &[usize], weights: &[f64]) -> Vec<f64> {
    let dim = points[0].len();
    let mut out = vec![0.0; dim];
    for (&i, &w) in active.iter().zip(weights) {
        for (o, p) in out.iter_mut().zip(&points[i]) {
            *o += w * p;
        }
    }
    out
}

/// Minimum-norm point of `conv(points)` with its barycentric weights.
#[derive(Debug, Clone)]
pub struct NearestPoint {
    pub point: Vec<f64>,
    /// `(index, weight)` pairs of the active vertices.
    pub weights: Vec<(usize, f64)>,
}

/// Wolfe's minimum-norm-point algorithm.
///
/// Finite active-set method: each major step adds the vertex most violating
/// the optimality condition `⟨x, p⟩ ≥ ‖x‖²`, each minor step moves to the
/// affine minimizer of the active set, dropping vertices whose weights would
/// turn negative.
pub fn min_norm_point(points: &[Vec<f64>]) -> NearestPoint {
    assert!(!points.is_empty(), "polytope needs at least one vertex");
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    let tol_major = 1e-13 * scale;
    let tol_weight = 1e-13;

    let start = (0..points.len())
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .expect("nonempty");
    let mut active = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].clone();

    for _major in 0..(10 * points.len() + 100) {
        let xx = dot(&x, &x);
        if xx <= 1e-30 * scale {
            break;
        }
        let (j, best) = (0..points.len())
            .map(|i| (i, dot(&x, &points[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if best >= xx - tol_major || active.contains(&j) {
            break;
        }
        active.push(j);
        weights.push(0.0);

        for _minor in 0..(points.len() + 10) {
            let v = affine_minimizer(points, &active);
            if v.iter().all(|&vi| vi > tol_weight) {
                weights = v;
                x = combine(points, &active, &weights);
                break;
            }
            let mut theta = 1.0f64;
            for (&w, &vi) in weights.iter().zip(&v) {
                if vi <= tol_weight && w - vi > 0.0 {
                    theta = theta.min(w / (w - vi));
                }
            }
            for (w, &vi) in weights.iter_mut().zip(&v) {
                *w = theta * vi + (1.0 - theta) * *w;
            }
            let mut k = 0;
            while k < active.len() {
                if weights[k] <= tol_weight {
                    active.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            if active.is_empty() {
                // numerical breakdown; restart from the best single vertex
                active.push(j);
                weights.push(1.0);
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            x = combine(points, &active, &weights);
        }
    }
    NearestPoint {
        point: x,
        weights: active.into_iter().zip(weights).collect(),
    }
}

/// Weights `v` minimizing `‖Σ vᵢ pᵢ‖` subject to `Σ vᵢ = 1` over `active`.
///
/// Solved as least squares on the differences `pᵢ - p₀`, which keeps the
/// conditioning of the vertices rather than squaring it as a Gram system would.
fn affine_minimizer(points: &[Vec<f64>], active: &[usize]) -> Vec<f64> {
    let m = active.len();
    if m == 1 {
        return vec![1.0];
    }
    let base = &points[active[0]];
    let d = base.len();
    let diffs = DMatrix::<f64>::from_fn(d, m - 1, |r, c| points[active[c + 1]][r] - base[r]);
    let rhs = DVector::<f64>::from_iterator(d, base.iter().map(|b| -b));
    let c = real_pinv_solve(&diffs, &rhs, 1e-12);
    let mut v = Vec::with_capacity(m);
    v.push(1.0 - c.sum());
    v.extend(c.iter().cloned());
    v
}

/// Closest point of `conv(points)` to `z`.
pub fn project_onto_hull(points: &[Vec<f64>], z: &[f64]) -> Vec<f64> {
    let shifted: Vec<Vec<f64>> = points.iter().map(|p| sub(p, z)).collect();
    let near = min_norm_point(&shifted);
    near.point.iter().zip(z).map(|(a, b)| a + b).collect()
}

/// Distance from `z` to `conv(points)`.
pub fn hull_distance(points: &[Vec<f64>], z: &[f64]) -> f64 {
    let shifted: Vec<Vec<f64>> = points.iter().map(|p| sub(p, z)).collect();
    norm(&min_norm_point(&shifted).point)
}

/// Membership in `conv(points)` up to `tol` in distance.
pub fn hull_contains(points: &[Vec<f64>], z: &[f64], tol: f64) -> bool {
    hull_distance(points, z) <= tol
}

/// A convex body in real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum RealShape {
    Ball { center: Vec<f64>, radius: f64 },
    Hull { points: Vec<Vec<f64>> },
}

impl RealShape {
    pub fn dim(&self) -> usize {
        match self {
            RealShape::Ball { center, .. } => center.len(),
            RealShape::Hull { points } => points[0].len(),
        }
    }

    /// Largest distance of a point of the body from the origin.
    pub fn outer_radius(&self) -> f64 {
        match self {
            RealShape::Ball { center, radius } => norm(center) + radius,
            RealShape::Hull { points } => points.iter().map(|p| norm(p)).fold(0.0, f64::max),
        }
    }

    /// `(min, max)` of `⟨w, x⟩` over the body.
    pub fn support_range(&self, w: &[f64]) -> (f64, f64) {
        match self {
            RealShape::Ball { center, radius } => {
                let c = dot(w, center);
                let r = radius * norm(w);
                (c - r, c + r)
            }
            RealShape::Hull { points } => points
                .iter()
                .map(|p| dot(w, p))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v))),
        }
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        match self {
            RealShape::Ball { center, radius } => norm(&sub(z, center)) <= radius + tol,
            RealShape::Hull { points } => hull_contains(points, z, tol),
        }
    }

    /// A point in the (relative) interior: center or vertex centroid.
    pub fn inner_point(&self) -> Vec<f64> {
        match self {
            RealShape::Ball { center, .. } => center.clone(),
            RealShape::Hull { points } => {
                let mut c = vec![0.0; points[0].len()];
                for p in points {
                    for (ci, pi) in c.iter_mut().zip(p) {
                        *ci += pi / points.len() as f64;
                    }
                }
                c
            }
        }
    }
}

/// Closest pair `(g, m)` between two bodies and their distance.
#[derive(Debug, Clone)]
pub struct ClosestPair {
    pub on_first: Vec<f64>,
    pub on_second: Vec<f64>,
    pub distance: f64,
}

pub fn closest_pair(first: &RealShape, second: &RealShape) -> ClosestPair {
    use RealShape::*;
    match (first, second) {
        (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) => {
            let diff = sub(c2, c1);
            let gap = norm(&diff);
            let u: Vec<f64> = if gap > 0.0 {
                diff.iter().map(|v| v / gap).collect()
            } else {
                diff.clone()
            };
            ClosestPair {
                on_first: c1.iter().zip(&u).map(|(c, u)| c + r1 * u).collect(),
                on_second: c2.iter().zip(&u).map(|(c, u)| c - r2 * u).collect(),
                distance: gap - r1 - r2,
            }
        }
        (Ball { center, radius }, Hull { points }) => {
            let q = project_onto_hull(points, center);
            let diff = sub(&q, center);
            let gap = norm(&diff);
            let g = if gap > 0.0 {
                center.iter().zip(&diff).map(|(c, d)| c + radius * d / gap).collect()
            } else {
                center.clone()
            };
            ClosestPair {
                on_first: g,
                on_second: q,
                distance: gap - radius,
            }
        }
        (Hull { .. }, Ball { .. }) => {
            let swapped = closest_pair(second, first);
            ClosestPair {
                on_first: swapped.on_second,
                on_second: swapped.on_first,
                distance: swapped.distance,
            }
        }
        (Hull { points: p }, Hull { points: q }) => {
            let m = q.len();
            let diffs: Vec<Vec<f64>> = p.iter().flat_map(|pi| q.iter().map(move |qj| sub(qj, pi))).collect();
            let near = min_norm_point(&diffs);
            let dim = p[0].len();
            let mut g = vec![0.0; dim];
            let mut h = vec![0.0; dim];
            for &(idx, w) in &near.weights {
                let (i, j) = (idx / m, idx % m);
                for k in 0..dim {
                    g[k] += w * p[i][k];
                    h[k] += w * q[j][k];
                }
            }
            ClosestPair {
                distance: norm(&near.point),
                on_first: g,
                on_second: h,
            }
        }
    }
}
