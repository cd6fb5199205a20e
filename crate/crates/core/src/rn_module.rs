//! The random inner product module `L⁰(F, K^d)` with atom-wise Euclidean
//! structure.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::l0_algebra::{ensure_same, AtomicSpace, Field, L0Scalar};

/// One `d`-vector per atom.
#[derive(Debug, Clone)]
pub struct RNElement {
    space: Arc<AtomicSpace>,
    dim: usize,
    // atom-major: coords[atom * dim + k]
    coords: Vec<Complex64>,
}

impl PartialEq for RNElement {
    fn eq(&self, other: &Self) -> bool {
        self.space.same(&other.space) && self.dim == other.dim && self.coords == other.coords
    }
}

impl RNElement {
    pub fn new(space: &Arc<AtomicSpace>, dim: usize, coords: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if coords.len() != space.len() * dim {
            return Err(Error::ShapeMismatch {
                expected: space.len() * dim,
                found: coords.len(),
            });
        }
        if space.field() == Field::Real && coords.iter().any(|c| c.im != 0.0) {
            return Err(Error::NotReal);
        }
        Ok(Self {
            space: space.clone(),
            dim,
            coords,
        })
    }

    /// Build from one coordinate vector per atom.
    pub fn from_atoms(space: &Arc<AtomicSpace>, per_atom: Vec<Vec<Complex64>>) -> Result<Self> {
        if per_atom.len() != space.len() {
            return Err(Error::ShapeMismatch {
                expected: space.len(),
                found: per_atom.len(),
            });
        }
        let dim = per_atom.first().map_or(0, Vec::len);
        let mut coords = Vec::with_capacity(dim * per_atom.len());
        for v in per_atom {
            if v.len() != dim {
                return Err(Error::ShapeMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            coords.extend(v);
        }
        Self::new(space, dim, coords)
    }

    pub fn from_real_atoms(space: &Arc<AtomicSpace>, per_atom: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_atoms(
            space,
            per_atom
                .into_iter()
                .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// The null element `θ`.
    pub fn zero(space: &Arc<AtomicSpace>, dim: usize) -> Self {
        Self {
            space: space.clone(),
            dim,
            coords: vec![Complex64::new(0.0, 0.0); space.len() * dim],
        }
    }

    /// The same vector on every atom.
    pub fn constant(space: &Arc<AtomicSpace>, v: &[Complex64]) -> Result<Self> {
        Self::from_atoms(space, vec![v.to_vec(); space.len()])
    }

    pub fn space(&self) -> &Arc<AtomicSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn at(&self, atom: usize) -> &[Complex64] {
        &self.coords[atom * self.dim..(atom + 1) * self.dim]
    }

    pub fn per_atom(&self) -> impl Iterator<Item = &[Complex64]> {
        self.coords.chunks(self.dim)
    }

    pub fn is_null(&self) -> bool {
        self.coords.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    fn ensure_compatible(&self, other: &Self) -> Result<()> {
        ensure_same(&self.space, &other.space)?;
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        Ok(Self {
            space: self.space.clone(),
            dim: self.dim,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        Ok(Self {
            space: self.space.clone(),
            dim: self.dim,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    /// Module action `ξ · x`: scale each atom's vector by that atom's scalar.
    pub fn scalar_mul(&self, xi: &L0Scalar) -> Result<Self> {
        ensure_same(&self.space, xi.space())?;
        let coords = self
            .coords
            .chunks(self.dim)
            .zip(xi.values())
            .flat_map(|(v, &s)| v.iter().map(move |c| s * c))
            .collect();
        Ok(Self {
            space: self.space.clone(),
            dim: self.dim,
            coords,
        })
    }

    /// Random inner product `⟨x, y⟩ = Σ xₖ ȳₖ`, atom by atom.
    pub fn inner(&self, other: &Self) -> Result<L0Scalar> {
        self.ensure_compatible(other)?;
        let values = self.per_atom().zip(other.per_atom()).map(|(x, y)| dot(x, y)).collect();
        Ok(L0Scalar::from_parts_unchecked(self.space.clone(), values))
    }

    /// Random norm `‖x‖ = √⟨x, x⟩`.
    pub fn norm(&self) -> L0Scalar {
        let values = self.per_atom().map(|x| Complex64::new(euclidean_norm(x), 0.0)).collect();
        L0Scalar::from_parts_unchecked(self.space.clone(), values)
    }

    pub fn conj(&self) -> Self {
        Self {
            space: self.space.clone(),
            dim: self.dim,
            coords: self.coords.iter().map(|c| c.conj()).collect(),
        }
    }
}

/// Hermitian dot product, conjugate-linear in the second slot.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Euclidean norm with scaling against overflow.
pub fn euclidean_norm(x: &[Complex64]) -> f64 {
    let scale = x.iter().fold(0.0f64, |m, c| m.max(c.re.abs()).max(c.im.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let ss: f64 = x
        .iter()
        .map(|c| {
            let (r, i) = (c.re / scale, c.im / scale);
            r * r + i * i
        })
        .sum();
    scale * ss.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::l0_algebra::AtomSet;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn scalar_mul_examples() {
        let s = AtomicSpace::uniform(2, Field::Real).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let xi = L0Scalar::from_real(&s, vec![2.0, 3.0]).unwrap();
        assert_eq!(
            x.scalar_mul(&xi).unwrap(),
            RNElement::from_real_atoms(&s, vec![vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap()
        );
        assert_eq!(x.add(&RNElement::zero(&s, 2)).unwrap(), x);
        let ind = L0Scalar::indicator(&AtomSet::from_ids(&s, &["a1"]).unwrap());
        assert_eq!(
            x.scalar_mul(&ind).unwrap(),
            RNElement::from_real_atoms(&s, vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap()
        );
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let s = AtomicSpace::uniform(2, Field::Real).unwrap();
        let x = RNElement::zero(&s, 2);
        let y = RNElement::zero(&s, 3);
        assert!(matches!(x.add(&y), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(x.inner(&y), Err(Error::ShapeMismatch { .. })));
        let t = AtomicSpace::uniform(3, Field::Real).unwrap();
        assert_eq!(x.add(&RNElement::zero(&t, 2)).unwrap_err(), Error::SpaceMismatch);
        assert!(RNElement::new(&s, 2, vec![c(0.0); 3]).is_err());
    }

    #[test]
    fn inner_examples() {
        let s = AtomicSpace::uniform(1, Field::Real).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![1.0, 0.0]]).unwrap();
        let y = RNElement::from_real_atoms(&s, vec![vec![0.0, 1.0]]).unwrap();
        assert_eq!(x.inner(&y).unwrap().at(0), c(0.0));
        let z = RNElement::from_real_atoms(&s, vec![vec![3.0, 4.0]]).unwrap();
        assert_eq!(z.inner(&z).unwrap().at(0), c(25.0));

        let sc = AtomicSpace::uniform(1, Field::Complex).unwrap();
        let xi = RNElement::from_atoms(&sc, vec![vec![Complex64::i()]]).unwrap();
        let one = RNElement::from_atoms(&sc, vec![vec![c(1.0)]]).unwrap();
        assert_eq!(xi.inner(&one).unwrap().at(0), Complex64::i());
    }

    #[test]
    fn norm_examples() {
        let s = AtomicSpace::uniform(2, Field::Real).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![3.0, 4.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(x.norm().real_values().unwrap(), vec![5.0, 0.0]);
        assert_eq!(RNElement::zero(&s, 3).norm().real_values().unwrap(), vec![0.0, 0.0]);
        let e = RNElement::from_real_atoms(&s, vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let xi = L0Scalar::from_real(&s, vec![2.0, -3.0]).unwrap();
        assert_eq!(e.scalar_mul(&xi).unwrap().norm().real_values().unwrap(), vec![2.0, 3.0]);
        assert!(x.norm().is_nonnegative());
    }

    #[test]
    fn norm_does_not_overflow() {
        let s = AtomicSpace::uniform(1, Field::Real).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![3e200, 4e200]]).unwrap();
        let n = x.norm().at(0).re;
        assert!((n - 5e200).abs() <= 1e186);
    }
}
