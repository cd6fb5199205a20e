//! Separation of `L⁰`-convex bodies and their gauge functions.
//!
//! A body is described atom by atom as a closed Euclidean ball or the convex
//! hull of finitely many points. Complex coordinates are treated through the
//! identification `Cᵈ ≅ R²ᵈ`, under which `Re⟨x, y⟩` is the real dot product;
//! separating functionals are built from that real geometry and separate
//! through their real part.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, closest_pair, hull_contains, RealShape};
use crate::l0_algebra::{ensure_same, AtomSet, AtomicSpace, Field, L0Scalar};
use crate::linalg::independent_rows;
use crate::random_conjugate::RandomFunctional;
use crate::rn_module::RNElement;

/// Two bodies are disjoint on an atom when their distance exceeds this.
pub const DISJOINT_THRESHOLD: f64 = 1e-12;
/// Minimal ray length from the origin along every coordinate axis for a hull
/// to count as absorbent.
pub const ABSORBENCY_RADIUS: f64 = 1e-10;
/// Absolute bisection tolerance of the hull gauge.
pub const GAUGE_TOLERANCE: f64 = 1e-10;

/// Per-atom description of a convex set in `K^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ball { center: Vec<Complex64>, radius: f64 },
    Hull { points: Vec<Vec<Complex64>> },
}

impl Shape {
    fn dim(&self) -> usize {
        match self {
            Shape::Ball { center, .. } => center.len(),
            Shape::Hull { points } => points.first().map_or(0, Vec::len),
        }
    }
}

/// An `L⁰`-convex set given atom by atom.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    space: Arc<AtomicSpace>,
    dim: usize,
    shapes: Vec<Shape>,
    interior: bool,
}

impl ConvexBody {
    pub fn new(space: &Arc<AtomicSpace>, dim: usize, shapes: Vec<Shape>, interior: bool) -> Result<Self> {
        if shapes.len() != space.len() {
            return Err(Error::ShapeMismatch {
                expected: space.len(),
                found: shapes.len(),
            });
        }
        for shape in &shapes {
            match shape {
                Shape::Ball { radius, .. } if !(*radius >= 0.0 && radius.is_finite()) => {
                    return Err(Error::InvalidArgument(format!(
                        "ball radius {radius} is not a finite non-negative number"
                    )));
                }
                Shape::Hull { points } if points.is_empty() => {
                    return Err(Error::InvalidArgument("hull needs at least one point".into()));
                }
                Shape::Hull { points } if points.iter().any(|p| p.len() != dim) => {
                    return Err(Error::InvalidArgument("hull points have inconsistent dimension".into()));
                }
                _ => {}
            }
            if shape.dim() != dim {
                return Err(Error::ShapeMismatch {
                    expected: dim,
                    found: shape.dim(),
                });
            }
            let coords: Box<dyn Iterator<Item = &Complex64>> = match shape {
                Shape::Ball { center, .. } => Box::new(center.iter()),
                Shape::Hull { points } => Box::new(points.iter().flatten()),
            };
            if space.field() == Field::Real && coords.into_iter().any(|c| c.im != 0.0) {
                return Err(Error::NotReal);
            }
        }
        Ok(Self {
            space: space.clone(),
            dim,
            shapes,
            interior,
        })
    }

    /// The same shape on every atom.
    pub fn uniform(space: &Arc<AtomicSpace>, dim: usize, shape: Shape, interior: bool) -> Result<Self> {
        Self::new(space, dim, vec![shape; space.len()], interior)
    }

    pub fn space(&self) -> &Arc<AtomicSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn has_interior(&self) -> bool {
        self.interior
    }

    /// Real-coordinate description on one atom.
    pub fn real_shape(&self, atom: usize) -> RealShape {
        let field = self.space.field();
        match &self.shapes[atom] {
            Shape::Ball { center, radius } => RealShape::Ball {
                center: realify(center, field),
                radius: *radius,
            },
            Shape::Hull { points } => RealShape::Hull {
                points: points.iter().map(|p| realify(p, field)).collect(),
            },
        }
    }

    /// Atom-wise membership of `x`, with distance tolerance `tol`.
    pub fn contains(&self, x: &RNElement, tol: f64) -> Result<bool> {
        ensure_same(&self.space, x.space())?;
        let field = self.space.field();
        Ok((0..self.space.len()).all(|a| self.real_shape(a).contains(&realify(x.at(a), field), tol)))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        ensure_same(&self.space, &other.space)?;
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// Coordinates in `R^d` (real field) or `R^{2d}` (complex field, interleaved).
pub fn realify(v: &[Complex64], field: Field) -> Vec<f64> {
    match field {
        Field::Real => v.iter().map(|c| c.re).collect(),
        Field::Complex => v.iter().flat_map(|c| [c.re, c.im]).collect(),
    }
}

pub fn complexify(v: &[f64], field: Field) -> Vec<Complex64> {
    match field {
        Field::Real => v.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        Field::Complex => v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect(),
    }
}

/// `H(G, M)`: the atoms on which `G` and `M` are disjoint.
pub fn hereditary_disjoint_stratification(g: &ConvexBody, m: &ConvexBody) -> Result<AtomSet> {
    g.check_compatible(m)?;
    let mask = (0..g.space.len())
        .into_par_iter()
        .map(|a| closest_pair(&g.real_shape(a), &m.real_shape(a)).distance > DISJOINT_THRESHOLD)
        .collect();
    AtomSet::from_mask(&g.space, mask)
}

/// Absorbency data of a body on one atom.
#[derive(Debug, Clone, Copy)]
struct Absorbency {
    /// Every point of norm at most this lies in the body.
    inner: f64,
}

fn absorbency(shape: &RealShape, atom: usize) -> Result<Absorbency> {
    match shape {
        RealShape::Ball { center, radius } => {
            let slack = radius - geometry::norm(center);
            if slack > ABSORBENCY_RADIUS {
                Ok(Absorbency { inner: slack })
            } else {
                Err(Error::NotAbsorbent { atom })
            }
        }
        RealShape::Hull { points } => {
            let dim = points[0].len();
            let outer = shape.outer_radius();
            let tol = membership_tolerance(outer);
            let zero = vec![0.0; dim];
            if !hull_contains(points, &zero, tol) {
                return Err(Error::NotAbsorbent { atom });
            }
            // the cross-polytope spanned by the shortest axis rays is inside,
            // and it contains the ball of radius (shortest ray)/√dim
            let mut shortest = f64::INFINITY;
            for k in 0..dim {
                for sign in [1.0, -1.0] {
                    let mut u = vec![0.0; dim];
                    u[k] = sign;
                    shortest = shortest.min(ray_exit(points, &u, outer, tol));
                }
            }
            if shortest > ABSORBENCY_RADIUS {
                Ok(Absorbency {
                    inner: shortest / (dim as f64).sqrt(),
                })
            } else {
                Err(Error::NotAbsorbent { atom })
            }
        }
    }
}

fn membership_tolerance(scale: f64) -> f64 {
    1e-13 * scale.max(1.0)
}

/// Largest `s ∈ [0, outer]` with `s·u` in the hull (unit `u`, origin inside).
fn ray_exit(points: &[Vec<f64>], u: &[f64], outer: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, outer * (1.0 + 1e-9) + 1e-300);
    let at = |s: f64| -> Vec<f64> { u.iter().map(|v| v * s).collect() };
    if hull_contains(points, &at(hi), tol) {
        return hi;
    }
    while hi - lo > 1e-3 * ABSORBENCY_RADIUS.max(1e-12 * outer) {
        let mid = 0.5 * (lo + hi);
        if hull_contains(points, &at(mid), tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Check that `B` is absorbent on every atom (origin interior).
pub fn check_absorbent(body: &ConvexBody) -> Result<()> {
    for a in 0..body.space.len() {
        absorbency(&body.real_shape(a), a)?;
    }
    Ok(())
}

/// Minkowski functional `p_B(x) = inf{t > 0 : x/t ∈ B}` atom by atom.
pub fn gauge(body: &ConvexBody, x: &RNElement) -> Result<L0Scalar> {
    ensure_same(&body.space, x.space())?;
    if body.dim != x.dim() {
        return Err(Error::ShapeMismatch {
            expected: body.dim,
            found: x.dim(),
        });
    }
    let field = body.space.field();
    let values = (0..body.space.len())
        .into_par_iter()
        .map(|a| {
            let shape = body.real_shape(a);
            let abs = absorbency(&shape, a)?;
            Ok(gauge_at(&shape, abs, &realify(x.at(a), field)))
        })
        .collect::<Result<Vec<f64>>>()?;
    L0Scalar::from_real(&body.space, values)
}

fn gauge_at(shape: &RealShape, abs: Absorbency, z: &[f64]) -> f64 {
    let zn = geometry::norm(z);
    if zn == 0.0 {
        return 0.0;
    }
    match shape {
        RealShape::Ball { center, radius } => {
            if center.iter().all(|&c| c == 0.0) {
                return zn / radius;
            }
            // ‖z − t c‖ = r t  ⇔  (r² − ‖c‖²) t² + 2⟨z, c⟩ t − ‖z‖² = 0
            let a = radius * radius - geometry::dot(center, center);
            let b = geometry::dot(z, center);
            let disc = (b * b + a * zn * zn).sqrt();
            // stable root of a t² + 2 b t − ‖z‖² = 0
            if b >= 0.0 {
                zn * zn / (b + disc)
            } else {
                (disc - b) / a
            }
        }
        RealShape::Hull { points } => {
            let outer = shape.outer_radius();
            let tol = membership_tolerance(outer);
            let inside = |t: f64| {
                let y: Vec<f64> = z.iter().map(|v| v / t).collect();
                hull_contains(points, &y, tol)
            };
            // z/hi has norm `inner` (inside); z/lo has norm beyond `outer` (outside)
            let mut hi = zn / abs.inner;
            let mut lo = zn / (outer * (1.0 + 1e-6));
            while hi - lo > GAUGE_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        }
    }
}

/// A separating functional with the set on which it separates.
#[derive(Debug, Clone)]
pub struct Separation {
    pub functional: RandomFunctional,
    /// `H(G, M)`.
    pub set: AtomSet,
    /// `inf_M Re f − sup_G Re f` per atom (zero off `H`); with the
    /// normalization `‖f‖* = 1` on `H` this is the distance between the bodies.
    pub gap: L0Scalar,
}

fn has_interior(shape: &RealShape) -> bool {
    match shape {
        RealShape::Ball { radius, .. } => *radius > 0.0,
        RealShape::Hull { points } => {
            let dim = points[0].len();
            if points.len() <= dim {
                return false;
            }
            let base = &points[0];
            let diffs: Vec<Vec<Complex64>> = points[1..]
                .iter()
                .map(|p| geometry::sub(p, base).into_iter().map(|v| Complex64::new(v, 0.0)).collect())
                .collect();
            let rows: Vec<&[Complex64]> = diffs.iter().map(Vec::as_slice).collect();
            independent_rows(&rows, 1e-10).len() == dim
        }
    }
}

/// Build `f ∈ E*` with `Re f(x) ≤ Re f(y)` on `H(G, M)` for all `x ∈ G`,
/// `y ∈ M`, strict for interior `x`.
///
/// On each atom of `H` the Riesz vector is the unit direction from the
/// closest point of `G` to the closest point of `M`; off `H` it is zero.
pub fn separate(g: &ConvexBody, m: &ConvexBody) -> Result<Separation> {
    g.check_compatible(m)?;
    if !g.interior {
        return Err(Error::InvalidArgument("first body must be flagged with nonempty interior".into()));
    }
    let space = g.space.clone();
    let field = space.field();
    for a in 0..space.len() {
        if !has_interior(&g.real_shape(a)) {
            return Err(Error::EmptyInterior { atom: a });
        }
    }
    let per_atom: Vec<Option<(Vec<f64>, f64)>> = (0..space.len())
        .into_par_iter()
        .map(|a| {
            let cp = closest_pair(&g.real_shape(a), &m.real_shape(a));
            if cp.distance > DISJOINT_THRESHOLD {
                let w = geometry::sub(&cp.on_second, &cp.on_first);
                let n = geometry::norm(&w);
                Some((w.iter().map(|v| v / n).collect(), cp.distance))
            } else {
                None
            }
        })
        .collect();
    if per_atom.iter().all(Option::is_none) {
        return Err(Error::NoSeparation);
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut coords = Vec::with_capacity(space.len() * g.dim);
    let mut mask = Vec::with_capacity(space.len());
    let mut gaps = Vec::with_capacity(space.len());
    for entry in &per_atom {
        match entry {
            Some((w, dist)) => {
                coords.extend(complexify(w, field));
                mask.push(true);
                gaps.push(*dist);
            }
            None => {
                coords.extend(std::iter::repeat_n(zero, g.dim));
                mask.push(false);
                gaps.push(0.0);
            }
        }
    }
    Ok(Separation {
        functional: RandomFunctional::new(RNElement::new(&space, g.dim, coords)?),
        set: AtomSet::from_mask(&space, mask)?,
        gap: L0Scalar::from_real(&space, gaps)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn ball(center: &[f64], radius: f64) -> Shape {
        Shape::Ball {
            center: center.iter().map(|&v| c(v)).collect(),
            radius,
        }
    }

    fn hull(points: &[&[f64]]) -> Shape {
        Shape::Hull {
            points: points.iter().map(|p| p.iter().map(|&v| c(v)).collect()).collect(),
        }
    }

    fn two_atom_bodies() -> (ConvexBody, ConvexBody) {
        let s = AtomicSpace::uniform(2, Field::Real).unwrap();
        let g = ConvexBody::uniform(&s, 2, ball(&[0.0, 0.0], 1.0), true).unwrap();
        let m = ConvexBody::new(&s, 2, vec![hull(&[&[3.0, 0.0]]), hull(&[&[0.5, 0.0]])], false).unwrap();
        (g, m)
    }

    #[test]
    fn disjointness_set() {
        let (g, m) = two_atom_bodies();
        assert_eq!(hereditary_disjoint_stratification(&g, &m).unwrap().ids(), vec!["a1"]);
        assert!(hereditary_disjoint_stratification(&g, &g).unwrap().is_empty());
        let s = g.space().clone();
        let far = ConvexBody::uniform(&s, 2, hull(&[&[5.0, 5.0], &[6.0, 5.0]]), false).unwrap();
        assert_eq!(hereditary_disjoint_stratification(&g, &far).unwrap().len(), 2);
    }

    #[test]
    fn gauge_of_balls() {
        let s = AtomicSpace::uniform(2, Field::Real).unwrap();
        let unit = ConvexBody::uniform(&s, 2, ball(&[0.0, 0.0], 1.0), true).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![3.0, 4.0], vec![0.3, 0.4]]).unwrap();
        assert_eq!(gauge(&unit, &x).unwrap().real_values().unwrap(), vec![5.0, 0.5]);
        let two = ConvexBody::uniform(&s, 2, ball(&[0.0, 0.0], 2.0), true).unwrap();
        assert_eq!(gauge(&two, &x).unwrap().at(0).re, 2.5);
    }

    #[test]
    fn gauge_of_offset_ball() {
        // ball centered (0.5, 0) radius 1: along +x the boundary is at 1.5
        let s = AtomicSpace::uniform(1, Field::Real).unwrap();
        let b = ConvexBody::uniform(&s, 2, ball(&[0.5, 0.0], 1.0), true).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![3.0, 0.0]]).unwrap();
        assert!((gauge(&b, &x).unwrap().at(0).re - 2.0).abs() < 1e-14);
        let x = RNElement::from_real_atoms(&s, vec![vec![-1.0, 0.0]]).unwrap();
        assert!((gauge(&b, &x).unwrap().at(0).re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauge_of_square() {
        let s = AtomicSpace::uniform(1, Field::Real).unwrap();
        let sq = ConvexBody::uniform(&s, 2, hull(&[&[1.0, 1.0], &[1.0, -1.0], &[-1.0, 1.0], &[-1.0, -1.0]]), true).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![2.0, 1.0]]).unwrap();
        let p = gauge(&sq, &x).unwrap().at(0).re;
        assert!((p - 2.0).abs() <= GAUGE_TOLERANCE, "{p}");
    }

    #[test]
    fn gauge_requires_absorbency() {
        let s = AtomicSpace::uniform(1, Field::Real).unwrap();
        let off = ConvexBody::uniform(&s, 2, ball(&[2.0, 0.0], 1.0), true).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(gauge(&off, &x).unwrap_err(), Error::NotAbsorbent { atom: 0 });
        let tri = ConvexBody::uniform(&s, 2, hull(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]), true).unwrap();
        assert_eq!(gauge(&tri, &x).unwrap_err(), Error::NotAbsorbent { atom: 0 });
        assert!(check_absorbent(&tri).is_err());
    }

    #[test]
    fn separate_single_atom() {
        let s = AtomicSpace::uniform(1, Field::Real).unwrap();
        let g = ConvexBody::uniform(&s, 2, ball(&[0.0, 0.0], 1.0), true).unwrap();
        let m = ConvexBody::uniform(&s, 2, hull(&[&[3.0, 0.0]]), false).unwrap();
        let sep = separate(&g, &m).unwrap();
        assert_eq!(sep.functional.riesz().at(0), &[c(1.0), c(0.0)]);
        let w = realify(sep.functional.riesz().at(0), Field::Real);
        assert_eq!(g.real_shape(0).support_range(&w).1, 1.0);
        assert_eq!(m.real_shape(0).support_range(&w).0, 3.0);
        assert_eq!(sep.gap.at(0).re, 2.0);
    }

    #[test]
    fn separate_restricts_to_disjoint_atoms() {
        let (g, m) = two_atom_bodies();
        let sep = separate(&g, &m).unwrap();
        assert_eq!(sep.set.ids(), vec!["a1"]);
        assert!(sep.functional.riesz().at(1).iter().all(|v| v.norm() == 0.0));
        let localized = sep.functional.riesz().scalar_mul(&L0Scalar::indicator(&sep.set)).unwrap();
        assert_eq!(&localized, sep.functional.riesz());
    }

    #[test]
    fn separate_complex_via_real_part() {
        let s = AtomicSpace::uniform(1, Field::Complex).unwrap();
        let g = ConvexBody::uniform(
            &s,
            1,
            Shape::Ball {
                center: vec![c(0.0)],
                radius: 1.0,
            },
            true,
        )
        .unwrap();
        let m = ConvexBody::uniform(
            &s,
            1,
            Shape::Hull {
                points: vec![vec![Complex64::new(0.0, 3.0)]],
            },
            false,
        )
        .unwrap();
        let sep = separate(&g, &m).unwrap();
        let y0 = sep.functional.riesz().at(0)[0];
        assert!((y0 - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // Re f(3i) = Re(3i · conj(i)) = 3, while Re f on the unit disc is at most 1
        let p = RNElement::from_atoms(&s, vec![vec![Complex64::new(0.0, 3.0)]]).unwrap();
        assert!((sep.functional.evaluate(&p).unwrap().at(0).re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn separate_errors() {
        let (g, _) = two_atom_bodies();
        assert_eq!(separate(&g, &g).unwrap_err(), Error::NoSeparation);
        let s = g.space().clone();
        let thin = ConvexBody::uniform(&s, 2, hull(&[&[0.0, 0.0], &[1.0, 0.0]]), true).unwrap();
        let far = ConvexBody::uniform(&s, 2, hull(&[&[9.0, 9.0]]), false).unwrap();
        assert_eq!(separate(&thin, &far).unwrap_err(), Error::EmptyInterior { atom: 0 });
        let no_flag = ConvexBody::uniform(&s, 2, ball(&[0.0, 0.0], 1.0), false).unwrap();
        assert!(separate(&no_flag, &far).is_err());
    }
}
