//! Random conjugate space `E*` of the module `L⁰(F, K^d)`.
//!
//! Every bounded random linear functional on this module is an inner product
//! against a fixed element (its Riesz vector), so functionals are stored that
//! way. The scalar action `(ξ·f)(x) = ξ·f(x)` therefore stores `ξ̄·y₀`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::l0_algebra::{ensure_same, AtomicSpace, L0Scalar};
use crate::rn_module::RNElement;

/// A P-a.e. bounded random linear functional `x ↦ ⟨x, y₀⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomFunctional {
    riesz: RNElement,
}

impl RandomFunctional {
    pub fn new(riesz: RNElement) -> Self {
        Self { riesz }
    }

    pub fn zero(space: &Arc<AtomicSpace>, dim: usize) -> Self {
        Self::new(RNElement::zero(space, dim))
    }

    pub fn riesz(&self) -> &RNElement {
        &self.riesz
    }

    pub fn into_riesz(self) -> RNElement {
        self.riesz
    }

    pub fn space(&self) -> &Arc<AtomicSpace> {
        self.riesz.space()
    }

    pub fn dim(&self) -> usize {
        self.riesz.dim()
    }

    pub fn evaluate(&self, x: &RNElement) -> Result<L0Scalar> {
        x.inner(&self.riesz)
    }

    /// `‖f‖* = ∨{|f(y)| : ‖y‖ ≤ 1}`, which for a Riesz functional is `‖y₀‖`.
    pub fn norm(&self) -> L0Scalar {
        self.riesz.norm()
    }

    /// `ξ · f`.
    pub fn scalar_mul(&self, xi: &L0Scalar) -> Result<Self> {
        Ok(Self::new(self.riesz.scalar_mul(&xi.conj())?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.riesz.add(&other.riesz)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.riesz.sub(&other.riesz)?))
    }

    /// `Σ λₖ fₖ`.
    pub fn combination(fs: &[Self], lambdas: &[L0Scalar]) -> Result<Self> {
        let first = fs.first().ok_or(Error::EmptyCollection)?;
        if fs.len() != lambdas.len() {
            return Err(Error::ShapeMismatch {
                expected: fs.len(),
                found: lambdas.len(),
            });
        }
        let mut acc = Self::zero(first.space(), first.dim());
        for (f, l) in fs.iter().zip(lambdas) {
            acc = acc.add(&f.scalar_mul(l)?)?;
        }
        Ok(acc)
    }
}

pub fn evaluate(f: &RandomFunctional, x: &RNElement) -> Result<L0Scalar> {
    f.evaluate(x)
}

pub fn functional_norm(f: &RandomFunctional) -> L0Scalar {
    f.norm()
}

/// `J(x)`, the image of `x` under the random natural embedding `E → E**`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedded {
    x: RNElement,
}

impl Embedded {
    /// `J(x)(g) = g(x)`.
    pub fn apply(&self, g: &RandomFunctional) -> Result<L0Scalar> {
        g.evaluate(&self.x)
    }

    pub fn element(&self) -> &RNElement {
        &self.x
    }

    /// Norm of `J(x)` in `E**`: the supremum of `|g(x)|` over `‖g‖* ≤ 1` is
    /// attained at `g = ‖x‖⁻¹·x`, so it equals `‖x‖`.
    pub fn norm(&self) -> Result<L0Scalar> {
        let n = self.x.norm();
        let g = RandomFunctional::new(self.x.scalar_mul(&n.pseudo_inverse())?);
        Ok(self.apply(&g)?.abs())
    }
}

pub fn embed(x: &RNElement) -> Embedded {
    Embedded { x: x.clone() }
}

/// An element `𝔩` of `E**` observed through finitely many values `𝔩(fᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BidualTarget {
    functionals: Vec<RandomFunctional>,
    targets: Vec<L0Scalar>,
}

impl BidualTarget {
    pub fn new(functionals: Vec<RandomFunctional>, targets: Vec<L0Scalar>) -> Result<Self> {
        if functionals.is_empty() {
            return Err(Error::EmptyCollection);
        }
        if functionals.len() != targets.len() {
            return Err(Error::ShapeMismatch {
                expected: functionals.len(),
                found: targets.len(),
            });
        }
        let space = functionals[0].space().clone();
        let dim = functionals[0].dim();
        for f in &functionals {
            ensure_same(&space, f.space())?;
            if f.dim() != dim {
                return Err(Error::ShapeMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
        }
        for t in &targets {
            ensure_same(&space, t.space())?;
        }
        Ok(Self { functionals, targets })
    }

    /// Targets observed from an actual element: `ζᵢ = fᵢ(z)`.
    pub fn from_element(functionals: Vec<RandomFunctional>, z: &RNElement) -> Result<Self> {
        let targets = functionals.iter().map(|f| f.evaluate(z)).collect::<Result<Vec<_>>>()?;
        Self::new(functionals, targets)
    }

    pub fn functionals(&self) -> &[RandomFunctional] {
        &self.functionals
    }

    pub fn targets(&self) -> &[L0Scalar] {
        &self.targets
    }
}
