//! Seeded random generators for spaces, elements and unit vectors.
//!
//! Used by the brute-force oracles, the axiom suites and the tests. All
//! generators take the RNG explicitly so results are reproducible from a seed.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::l0_algebra::{AtomicSpace, Field, L0Scalar};
use crate::random_conjugate::RandomFunctional;
use crate::rn_module::{euclidean_norm, RNElement};

pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: Field, range: f64) -> Complex64 {
    match field {
        Field::Real => Complex64::new(rng.random_range(-range..range), 0.0),
        Field::Complex => Complex64::new(rng.random_range(-range..range), rng.random_range(-range..range)),
    }
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: Field, range: f64) -> Vec<Complex64> {
    (0..dim).map(|_| scalar(rng, field, range)).collect()
}

/// Uniform point on the unit sphere of `K^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = match field {
                    Field::Real => 0.0,
                    Field::Complex => rng.sample(StandardNormal),
                };
                Complex64::new(re, im)
            })
            .collect();
        let norm = euclidean_norm(&v);
        if norm > 1e-300 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// A space with `atoms` atoms and random probabilities bounded away from 0.
pub fn space<R: Rng + ?Sized>(rng: &mut R, atoms: usize, field: Field) -> Arc<AtomicSpace> {
    let weights: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let head: f64 = probs[..atoms - 1].iter().sum();
    probs[atoms - 1] = 1.0 - head;
    let ids = (1..=atoms).map(|i| format!("a{i}")).collect();
    AtomicSpace::new(ids, probs, field).expect("generated space is valid")
}

pub fn l0_scalar<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomicSpace>, range: f64) -> L0Scalar {
    let values = (0..space.len()).map(|_| scalar(rng, space.field(), range)).collect();
    L0Scalar::new(space, values).expect("generated scalar is valid")
}

/// Random scalar with a given probability of an exact zero on each atom.
pub fn sparse_l0_scalar<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomicSpace>, range: f64, zero_prob: f64) -> L0Scalar {
    let values = (0..space.len())
        .map(|_| {
            if rng.random_bool(zero_prob) {
                Complex64::new(0.0, 0.0)
            } else {
                scalar(rng, space.field(), range)
            }
        })
        .collect();
    L0Scalar::new(space, values).expect("generated scalar is valid")
}

pub fn positive_l0_scalar<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomicSpace>, lo: f64, hi: f64) -> L0Scalar {
    let values = (0..space.len()).map(|_| rng.random_range(lo..hi)).collect();
    L0Scalar::from_real(space, values).expect("generated scalar is valid")
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomicSpace>, dim: usize, range: f64) -> RNElement {
    let coords = (0..space.len() * dim).map(|_| scalar(rng, space.field(), range)).collect();
    RNElement::new(space, dim, coords).expect("generated element is valid")
}

pub fn functional<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomicSpace>, dim: usize, range: f64) -> RandomFunctional {
    RandomFunctional::new(element(rng, space, dim, range))
}

/// Random functional with norm at most 1 on every atom.
pub fn unit_ball_functional<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomicSpace>, dim: usize) -> RandomFunctional {
    let coords = (0..space.len())
        .flat_map(|_| {
            let r: f64 = rng.random_range(0.0..=1.0);
            unit_vector(rng, dim, space.field()).into_iter().map(move |c| c * r)
        })
        .collect();
    RandomFunctional::new(RNElement::new(space, dim, coords).expect("generated element is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_vectors_have_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for field in [Field::Real, Field::Complex] {
            for n in 1..6 {
                let v = unit_vector(&mut rng, n, field);
                assert!((euclidean_norm(&v) - 1.0).abs() < 1e-14);
                if field == Field::Real {
                    assert!(v.iter().all(|c| c.im == 0.0));
                }
            }
        }
    }

    #[test]
    fn generated_spaces_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=8 {
            let s = space(&mut rng, n, Field::Real);
            assert_eq!(s.len(), n);
        }
        let s = space(&mut rng, 4, Field::Real);
        let f = unit_ball_functional(&mut rng, &s, 3);
        assert!(f.norm().real_values().unwrap().iter().all(|&v| v <= 1.0 + 1e-15));
    }
}
