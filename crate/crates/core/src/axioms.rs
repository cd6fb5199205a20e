//! Seeded property suites for the random normed module and random inner
//! product module axioms on `L⁰(F, K^d)`, and for the identities of the
//! scalar algebra `L⁰(F, K)`.
//!
//! Each law is checked on its own stream of random samples and reported as a
//! pass count, so a failing law shows how often it fails rather than only
//! that it did.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::l0_algebra::{sup, AtomSet, AtomicSpace, Field, L0Scalar};
use crate::rn_module::RNElement;
use crate::sampling;

/// Relative tolerance of the homogeneity and linearity laws.
pub const LINEAR_TOLERANCE: f64 = 1e-12;
/// Relative tolerance of Cauchy–Schwarz.
pub const CAUCHY_SCHWARZ_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Random normed module axioms.
    Norm,
    /// Random inner product module axioms.
    InnerProduct,
    /// Module structure shared by both.
    Module,
    /// Identities of the scalar algebra.
    Algebra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawResult {
    pub name: &'static str,
    pub family: Family,
    pub samples: usize,
    pub passed: usize,
}

impl LawResult {
    pub fn holds(&self) -> bool {
        self.passed == self.samples
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub seed: u64,
    pub laws: Vec<LawResult>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.laws.iter().all(LawResult::holds)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }
}

/// Random context shared by one sample: a space, a dimension and generators.
struct Sample {
    rng: ChaCha8Rng,
    space: Arc<AtomicSpace>,
    dim: usize,
}

impl Sample {
    fn new(rng: &mut ChaCha8Rng) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(rng.random());
        let field = if rng.random_bool(0.5) { Field::Real } else { Field::Complex };
        let atoms = rng.random_range(1..=8);
        let dim = rng.random_range(1..=6);
        let space = sampling::space(&mut rng, atoms, field);
        Self { rng, space, dim }
    }

    /// Element with exact zero vectors on some atoms.
    fn element(&mut self) -> RNElement {
        let field = self.space.field();
        let zero = Complex64::new(0.0, 0.0);
        let coords = (0..self.space.len())
            .flat_map(|_| {
                if self.rng.random_bool(0.2) {
                    vec![zero; self.dim]
                } else {
                    sampling::vector(&mut self.rng, self.dim, field, 10.0)
                }
            })
            .collect();
        RNElement::new(&self.space, self.dim, coords).expect("generated element is valid")
    }

    fn scalar(&mut self) -> L0Scalar {
        sampling::sparse_l0_scalar(&mut self.rng, &self.space, 10.0, 0.2)
    }

    fn real_scalar(&mut self) -> L0Scalar {
        let values = (0..self.space.len())
            .map(|_| {
                if self.rng.random_bool(0.2) {
                    0.0
                } else {
                    self.rng.random_range(-10.0..10.0)
                }
            })
            .collect();
        L0Scalar::from_real(&self.space, values).expect("generated scalar is valid")
    }

    fn set(&mut self) -> AtomSet {
        let mask = (0..self.space.len()).map(|_| self.rng.random_bool(0.5)).collect();
        AtomSet::from_mask(&self.space, mask).expect("mask has the space's length")
    }
}

fn close(a: Complex64, b: Complex64, scale: f64, tol: f64) -> bool {
    (a - b).norm() <= tol * scale.max(f64::MIN_POSITIVE)
}

fn all_close(a: &[Complex64], b: &[Complex64], scale: &[f64], tol: f64) -> bool {
    a.iter().zip(b).zip(scale).all(|((x, y), s)| close(*x, *y, *s, tol))
}

fn reals(x: &L0Scalar) -> Vec<f64> {
    x.values().iter().map(|v| v.re).collect()
}

type Law = fn(&mut Sample) -> bool;

fn norm_laws() -> Vec<(&'static str, Family, Law)> {
    vec![
        ("norm zero iff null", Family::Norm, |s| {
            let x = s.element();
            let n = x.norm();
            let ok = x
                .per_atom()
                .zip(n.values())
                .all(|(v, n)| (n.re == 0.0) == v.iter().all(|c| *c == Complex64::new(0.0, 0.0)));
            ok
        }),
        ("norm homogeneity", Family::Norm, |s| {
            let (x, xi) = (s.element(), s.scalar());
            let lhs = x.scalar_mul(&xi).unwrap().norm();
            let rhs = xi.abs().mul(&x.norm()).unwrap();
            all_close(lhs.values(), rhs.values(), &reals(&rhs), LINEAR_TOLERANCE)
        }),
        ("triangle inequality", Family::Norm, |s| {
            let (x, y) = (s.element(), s.element());
            let lhs = reals(&x.add(&y).unwrap().norm());
            let rhs = reals(&x.norm().add(&y.norm()).unwrap());
            lhs.iter().zip(&rhs).all(|(l, r)| *l <= r * (1.0 + LINEAR_TOLERANCE))
        }),
        ("inner self nonnegative, zero iff null", Family::InnerProduct, |s| {
            let x = s.element();
            let ip = x.inner(&x).unwrap();
            let ok = x
                .per_atom()
                .zip(ip.values())
                .all(|(v, p)| p.im == 0.0 && p.re >= 0.0 && ((p.re == 0.0) == v.iter().all(|c| *c == Complex64::new(0.0, 0.0))));
            ok
        }),
        ("conjugate symmetry", Family::InnerProduct, |s| {
            let (x, y) = (s.element(), s.element());
            x.inner(&y).unwrap() == y.inner(&x).unwrap().conj()
        }),
        ("first-slot homogeneity", Family::InnerProduct, |s| {
            let (x, y, xi) = (s.element(), s.element(), s.scalar());
            let lhs = x.scalar_mul(&xi).unwrap().inner(&y).unwrap();
            let rhs = xi.mul(&x.inner(&y).unwrap()).unwrap();
            let scale = reals(&xi.abs().mul(&x.norm()).unwrap().mul(&y.norm()).unwrap());
            all_close(lhs.values(), rhs.values(), &scale, LINEAR_TOLERANCE)
        }),
        ("first-slot additivity", Family::InnerProduct, |s| {
            let (x, y, z) = (s.element(), s.element(), s.element());
            let lhs = x.add(&y).unwrap().inner(&z).unwrap();
            let rhs = x.inner(&z).unwrap().add(&y.inner(&z).unwrap()).unwrap();
            let scale = reals(&x.norm().add(&y.norm()).unwrap().mul(&z.norm()).unwrap());
            all_close(lhs.values(), rhs.values(), &scale, LINEAR_TOLERANCE)
        }),
        ("cauchy-schwarz", Family::InnerProduct, |s| {
            let (x, y) = (s.element(), s.element());
            let lhs = reals(&x.inner(&y).unwrap().abs());
            let rhs = reals(&x.norm().mul(&y.norm()).unwrap());
            lhs.iter().zip(&rhs).all(|(l, r)| *l <= r * (1.0 + CAUCHY_SCHWARZ_TOLERANCE))
        }),
        ("distributivity over elements", Family::Module, |s| {
            let (x, y, xi) = (s.element(), s.element(), s.scalar());
            let lhs = x.add(&y).unwrap().scalar_mul(&xi).unwrap();
            let rhs = x.scalar_mul(&xi).unwrap().add(&y.scalar_mul(&xi).unwrap()).unwrap();
            let scale = reals(&xi.abs().mul(&x.norm().add(&y.norm()).unwrap()).unwrap());
            element_close(&lhs, &rhs, &scale)
        }),
        ("distributivity over scalars", Family::Module, |s| {
            let (x, xi, eta) = (s.element(), s.scalar(), s.scalar());
            let lhs = x.scalar_mul(&xi.add(&eta).unwrap()).unwrap();
            let rhs = x.scalar_mul(&xi).unwrap().add(&x.scalar_mul(&eta).unwrap()).unwrap();
            let scale = reals(&xi.abs().add(&eta.abs()).unwrap().mul(&x.norm()).unwrap());
            element_close(&lhs, &rhs, &scale)
        }),
    ]
}

fn element_close(a: &RNElement, b: &RNElement, scale: &[f64]) -> bool {
    a.per_atom()
        .zip(b.per_atom())
        .zip(scale)
        .all(|((u, v), s)| u.iter().zip(v).all(|(p, q)| close(*p, *q, *s, LINEAR_TOLERANCE)))
}

fn algebra_laws() -> Vec<(&'static str, Family, Law)> {
    vec![
        ("inverse gives support indicator bit-exactly", Family::Algebra, |s| {
            let xi = s.scalar();
            xi.mul(&xi.pseudo_inverse()).unwrap() == L0Scalar::indicator(&xi.support())
        }),
        ("inverse gives support indicator within 1 ulp", Family::Algebra, |s| {
            let xi = s.scalar();
            let prod = xi.mul(&xi.pseudo_inverse()).unwrap();
            prod.values().iter().zip(xi.values()).all(|(p, v)| {
                if *v == Complex64::new(0.0, 0.0) {
                    *p == Complex64::new(0.0, 0.0)
                } else {
                    (p.re - 1.0).abs() <= f64::EPSILON && p.im.abs() <= f64::EPSILON
                }
            })
        }),
        ("sup idempotent", Family::Algebra, |s| {
            let a = s.real_scalar();
            sup([&a, &a]).unwrap() == a
        }),
        ("sup commutative", Family::Algebra, |s| {
            let (a, b) = (s.real_scalar(), s.real_scalar());
            sup([&a, &b]).unwrap() == sup([&b, &a]).unwrap()
        }),
        ("sup associative", Family::Algebra, |s| {
            let (a, b, c) = (s.real_scalar(), s.real_scalar(), s.real_scalar());
            let left = sup([&sup([&a, &b]).unwrap(), &c]).unwrap();
            let right = sup([&a, &sup([&b, &c]).unwrap()]).unwrap();
            left == right
        }),
        ("sup is an upper bound", Family::Algebra, |s| {
            let (a, b) = (s.real_scalar(), s.real_scalar());
            let m = sup([&a, &b]).unwrap();
            a.leq(&m).unwrap() && b.leq(&m).unwrap()
        }),
        ("indicator of intersection", Family::Algebra, |s| {
            let (a, b) = (s.set(), s.set());
            L0Scalar::indicator(&a).mul(&L0Scalar::indicator(&b)).unwrap() == L0Scalar::indicator(&a.intersection(&b).unwrap())
        }),
        ("indicator of disjoint union", Family::Algebra, |s| {
            let a = s.set();
            let b = s.set().difference(&a).unwrap();
            L0Scalar::indicator(&a).add(&L0Scalar::indicator(&b)).unwrap() == L0Scalar::indicator(&a.union(&b).unwrap())
        }),
        ("order reflexive", Family::Algebra, |s| {
            let a = s.real_scalar();
            a.leq(&a).unwrap()
        }),
        ("order antisymmetric", Family::Algebra, |s| {
            let a = s.real_scalar();
            // draw b equal to a on a random set of atoms to hit the equal case
            let keep = s.set();
            let other = s.real_scalar();
            let b = L0Scalar::from_real(
                &s.space,
                (0..s.space.len())
                    .map(|i| if keep.contains(i) { a.at(i).re } else { other.at(i).re })
                    .collect(),
            )
            .unwrap();
            !(a.leq(&b).unwrap() && b.leq(&a).unwrap()) || a == b
        }),
        ("order transitive", Family::Algebra, |s| {
            let a = s.real_scalar();
            let b = a.add(&s.real_scalar().abs()).unwrap();
            let c = b.add(&s.real_scalar().abs()).unwrap();
            a.leq(&b).unwrap() && b.leq(&c).unwrap() && a.leq(&c).unwrap()
        }),
    ]
}

/// Names of every law in the order they are reported.
pub fn law_names() -> Vec<&'static str> {
    norm_laws().into_iter().chain(algebra_laws()).map(|(n, _, _)| n).collect()
}

/// Run every law on `samples` seeded random samples.
pub fn run_axiom_suites(seed: u64, samples: usize) -> AxiomReport {
    let laws = norm_laws()
        .into_iter()
        .chain(algebra_laws())
        .enumerate()
        .map(|(k, (name, family, law))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let passed = (0..samples).filter(|_| law(&mut Sample::new(&mut rng))).count();
            LawResult {
                name,
                family,
                samples,
                passed,
            }
        })
        .collect();
    AxiomReport { seed, laws }
}
