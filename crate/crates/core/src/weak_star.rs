//! Membership in basic weak-star neighborhoods of `E*`, unit-ball exclusion
//! certificates and Goldstine witnesses.
//!
//! Two families of neighborhoods of a center `c ∈ E*` are modelled. The
//! `(ε, λ)` family asks that `P(|(g − c)(xᵢ)| < ε) > 1 − λ` for each anchor,
//! the locally `L⁰`-convex family asks that `|(g − c)(xᵢ)| < ε` on every atom.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::helly_solver::{self, HellyInstance};
use crate::l0_algebra::{ensure_same, sup, AtomSet, AtomicSpace, L0Scalar};
use crate::random_conjugate::{BidualTarget, RandomFunctional};
use crate::rn_module::RNElement;

/// Functionals of norm at most `1 + NORM_TOLERANCE` count as unit-ball members.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EpsLambdaNbhd {
    anchors: Vec<RNElement>,
    eps: f64,
    lam: f64,
}

impl EpsLambdaNbhd {
    pub fn new(anchors: Vec<RNElement>, eps: f64, lam: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        if !(lam > 0.0 && lam < 1.0) {
            return Err(Error::InvalidArgument(format!("lam must lie in (0, 1), got {lam}")));
        }
        check_anchors(&anchors)?;
        Ok(Self { anchors, eps, lam })
    }

    pub fn anchors(&self) -> &[RNElement] {
        &self.anchors
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn lam(&self) -> f64 {
        self.lam
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalNbhd {
    anchors: Vec<RNElement>,
    eps: L0Scalar,
}

impl LocalNbhd {
    pub fn new(anchors: Vec<RNElement>, eps: L0Scalar) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::InvalidArgument("eps must be strictly positive on every atom".into()));
        }
        check_anchors(&anchors)?;
        if let Some(x) = anchors.first() {
            ensure_same(x.space(), eps.space())?;
        }
        Ok(Self { anchors, eps })
    }

    pub fn anchors(&self) -> &[RNElement] {
        &self.anchors
    }

    pub fn eps(&self) -> &L0Scalar {
        &self.eps
    }
}

fn check_anchors(anchors: &[RNElement]) -> Result<()> {
    if let Some(first) = anchors.first() {
        for x in anchors {
            ensure_same(first.space(), x.space())?;
        }
    }
    Ok(())
}

fn differences(g: &RandomFunctional, center: &RandomFunctional, anchors: &[RNElement]) -> Result<Vec<L0Scalar>> {
    let diff = g.sub(center)?;
    anchors.iter().map(|x| Ok(diff.evaluate(x)?.abs())).collect()
}

pub fn in_eps_lambda_nbhd(g: &RandomFunctional, center: &RandomFunctional, nb: &EpsLambdaNbhd) -> Result<bool> {
    let space = g.space().clone();
    for d in differences(g, center, &nb.anchors)? {
        let good: f64 = (0..space.len()).filter(|&a| d.at(a).re < nb.eps).map(|a| space.prob(a)).sum();
        if good <= 1.0 - nb.lam {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn in_local_nbhd(g: &RandomFunctional, center: &RandomFunctional, nb: &LocalNbhd) -> Result<bool> {
    for d in differences(g, center, &nb.anchors)? {
        if !d.values().iter().zip(nb.eps.values()).all(|(v, e)| v.re < e.re) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A neighborhood of `g` containing no functional of the unit ball `E*(1)`.
#[derive(Debug, Clone)]
pub struct Exclusion {
    /// The set `A` on which `‖g‖* > 1 + δ`.
    pub set: AtomSet,
    pub delta: f64,
    /// The anchor `x`, with `‖x‖ ≤ Ĩ_A` and `g(x) = Ĩ_A‖g‖*`.
    pub point: RNElement,
    pub nbhd: EpsLambdaNbhd,
}

/// Certificate that `g` lies outside the `(ε, λ)` weak-star closure of `E*(1)`.
///
/// `A` collects the atoms with `‖g‖* > 1 + 1e-9` and `δ` is half the smallest
/// excess over `A`. Any `h` with `‖h‖* ≤ 1` then has `|(g − h)(x)| ≥ 2δ` on
/// `A`, so its good set misses `A` and has measure at most `1 − P(A)`.
pub fn excluding_neighborhood(g: &RandomFunctional) -> Result<Exclusion> {
    let space = g.space().clone();
    let norms = g.norm();
    let mask: Vec<bool> = norms.values().iter().map(|n| n.re > 1.0 + NORM_TOLERANCE).collect();
    let set = AtomSet::from_mask(&space, mask)?;
    if set.is_empty() {
        return Err(Error::InsideUnitBall);
    }
    let delta = set.indices().map(|a| (norms.at(a).re - 1.0) / 2.0).fold(f64::INFINITY, f64::min);
    let scale: Vec<f64> = (0..space.len())
        .map(|a| if set.contains(a) { 1.0 / norms.at(a).re } else { 0.0 })
        .collect();
    let point = g.riesz().scalar_mul(&L0Scalar::from_real(&space, scale)?)?;
    let nbhd = EpsLambdaNbhd::new(vec![point.clone()], delta / 2.0, set.measure() / 2.0)?;
    Ok(Exclusion { set, delta, point, nbhd })
}

/// The scaling factor `γ(γ + ε/2)⁻¹`.
pub fn goldstine_scale(gamma: &L0Scalar, eps: &L0Scalar) -> Result<L0Scalar> {
    gamma.zip_with(eps, |g, e| g / (g + e / 2.0))
}

/// An element `x` with `‖x‖ ≤ 1` and `|fᵢ(x) − ζᵢ| < ε` for every observed
/// pair `(fᵢ, ζᵢ)` of `bt`.
///
/// `x₀` is the minimum-norm solution of `fᵢ(x₀) = ζᵢ`; the result is
/// `γ(γ + ε/2)⁻¹ x₀` with `γ = sup‖fᵢ‖* ∨ 1`.
pub fn goldstine_witness(bt: &BidualTarget, eps: &L0Scalar) -> Result<RNElement> {
    let fs = bt.functionals();
    let space: Arc<AtomicSpace> = fs[0].space().clone();
    ensure_same(&space, eps.space())?;
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be strictly positive on every atom".into()));
    }
    let inst = HellyInstance::new(fs.to_vec(), bt.targets().to_vec(), L0Scalar::one(&space), eps.clone())?;
    let verdict = helly_solver::solve(&inst)?;
    let x0 = match (verdict.feasible, verdict.solution) {
        (true, Some(x)) => x,
        _ => {
            let violations = verdict.certificate.map(|c| c.violation_set.indices().collect()).unwrap_or_default();
            return Err(Error::NotInUnitBidualBall { violations });
        }
    };
    // the solver accepts norms up to 1 + tol; pull those back onto the sphere
    let pull: Vec<f64> = x0
        .norm()
        .values()
        .iter()
        .map(|n| if n.re > 1.0 { 1.0 / n.re } else { 1.0 })
        .collect();
    let x0 = x0.scalar_mul(&L0Scalar::from_real(&space, pull)?)?;
    let norms: Vec<L0Scalar> = fs.iter().map(RandomFunctional::norm).collect();
    let gamma = sup(norms.iter().chain(std::iter::once(&L0Scalar::one(&space))))?;
    x0.scalar_mul(&goldstine_scale(&gamma, eps)?)
}
