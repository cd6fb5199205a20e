//! Random linear equations under a stochastic norm budget.
//!
//! Given functionals `f₁…fₙ`, targets `ξ₁…ξₙ` and a budget `β ∈ L⁰₊`, an
//! element `x` with `fᵢ(x) = ξᵢ` and `‖x‖ ≤ β + ε` exists for every
//! `ε ∈ L⁰₊₊` exactly when
//!
//! ```text
//! |Σ λₖ ξₖ| ≤ β ‖Σ λₖ fₖ‖   for all λ₁…λₙ ∈ L⁰(F, K).
//! ```
//!
//! On atom `a`, with `Y` the `d × n` matrix of Riesz vectors, the equations
//! read `Yᴴ x = ξ`. Writing `μ = λ̄`, the condition becomes
//! `|μᴴ ξ| ≤ β ‖Y μ‖`, and its supremum over `μ` is the norm of the
//! minimum-norm solution `x* = (Yᴴ)⁺ ξ` when the system is consistent and
//! `+∞` otherwise. The verdict is therefore decided by one least-squares
//! solve per atom, and a failing atom yields an explicit `λ`:
//!
//! * inconsistent: `μ` is the normalized least-squares residual, which lies
//!   in the kernel of `Y` and pairs positively with `ξ`;
//! * over budget: `μ = (YᴴY)⁺ ξ` normalized, for which `Y μ ∝ x*` and the
//!   ratio equals `‖x*‖ > β`.
//!
//! Over finite-dimensional fibers the minimum-norm solution meets
//! `‖x*‖ ≤ β` outright, so the slack `ε` is carried for the statement of the
//! theorem but never consumed.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::l0_algebra::{ensure_same, AtomSet, AtomicSpace, Field, L0Scalar};
use crate::linalg::min_norm_solve;
use crate::random_conjugate::RandomFunctional;
use crate::rn_module::{euclidean_norm, RNElement};
use crate::sampling;
use crate::stratification::{express_in_basis, quasi_free_stratification};

/// Default rank/consistency tolerance, relative.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct HellyInstance {
    fs: Vec<RandomFunctional>,
    targets: Vec<L0Scalar>,
    budget: L0Scalar,
    slack: L0Scalar,
}

impl HellyInstance {
    pub fn new(fs: Vec<RandomFunctional>, targets: Vec<L0Scalar>, budget: L0Scalar, slack: L0Scalar) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::EmptyCollection);
        }
        if fs.len() != targets.len() {
            return Err(Error::ShapeMismatch {
                expected: fs.len(),
                found: targets.len(),
            });
        }
        let space = fs[0].space().clone();
        let dim = fs[0].dim();
        for f in &fs {
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
        ensure_same(&space, budget.space())?;
        ensure_same(&space, slack.space())?;
        if !budget.is_nonnegative() {
            return Err(Error::InvalidArgument("budget must lie in L⁰₊".into()));
        }
        if !slack.is_positive() {
            return Err(Error::InvalidArgument("slack must lie in L⁰₊₊".into()));
        }
        Ok(Self {
            fs,
            targets,
            budget,
            slack,
        })
    }

    pub fn functionals(&self) -> &[RandomFunctional] {
        &self.fs
    }

    pub fn targets(&self) -> &[L0Scalar] {
        &self.targets
    }

    pub fn budget(&self) -> &L0Scalar {
        &self.budget
    }

    pub fn slack(&self) -> &L0Scalar {
        &self.slack
    }

    pub fn space(&self) -> &Arc<AtomicSpace> {
        self.fs[0].space()
    }

    pub fn dim(&self) -> usize {
        self.fs[0].dim()
    }

    pub fn len(&self) -> usize {
        self.fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fs.is_empty()
    }

    /// Same equations with every `(fᵢ, ξᵢ)` multiplied by `α`.
    pub fn scaled(&self, alpha: &L0Scalar) -> Result<Self> {
        let fs = self.fs.iter().map(|f| f.scalar_mul(alpha)).collect::<Result<Vec<_>>>()?;
        let targets = self.targets.iter().map(|t| t.mul(alpha)).collect::<Result<Vec<_>>>()?;
        Self::new(fs, targets, self.budget.clone(), self.slack.clone())
    }

    /// Riesz vectors of all functionals on one atom.
    fn riesz_at(&self, atom: usize) -> Vec<&[Complex64]> {
        self.fs.iter().map(|f| f.riesz().at(atom)).collect()
    }

    fn targets_at(&self, atom: usize) -> Vec<Complex64> {
        self.targets.iter().map(|t| t.at(atom)).collect()
    }
}

/// Coefficients `λ` violating the Helly inequality on a set of positive measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub lambdas: Vec<L0Scalar>,
    pub violation_set: AtomSet,
}

#[derive(Debug, Clone)]
pub struct HellyVerdict {
    pub feasible: bool,
    pub solution: Option<RNElement>,
    pub certificate: Option<Certificate>,
    /// Norm of the per-atom minimum-norm solution; `+∞` where the equations
    /// are inconsistent. This is the supremum of `|Σλξ| / ‖Σλf‖`.
    pub min_solution_norm: L0Scalar,
}

impl HellyVerdict {
    /// Whether the solution meets `‖x‖ ≤ β` up to the consistency tolerance,
    /// i.e. without consuming the slack.
    pub fn within_budget(&self, inst: &HellyInstance, tol: f64) -> bool {
        match &self.solution {
            None => false,
            Some(x) => x
                .norm()
                .values()
                .iter()
                .zip(inst.budget.values())
                .all(|(n, b)| n.re <= b.re + tol * (1.0 + b.re)),
        }
    }
}

#[derive(Debug, Clone)]
enum AtomOutcome {
    Feasible { x: Vec<Complex64>, norm: f64 },
    Inconsistent { mu: Vec<Complex64> },
    OverBudget { mu: Vec<Complex64>, norm: f64 },
}

fn analyze_atom(inst: &HellyInstance, atom: usize, tol: f64) -> Result<AtomOutcome> {
    let riesz = inst.riesz_at(atom);
    let n = riesz.len();
    let d = inst.dim();
    let xi = inst.targets_at(atom);
    let beta = inst.budget.at(atom).re;
    // rows of Yᴴ
    let a: Vec<Complex64> = riesz.iter().flat_map(|y| y.iter().map(|c| c.conj())).collect();
    let sol = min_norm_solve(&a, n, d, &xi, tol);
    let real = inst.space().field() == Field::Real;
    let clean = |v: Vec<Complex64>| -> Vec<Complex64> {
        if real {
            v.into_iter().map(|c| Complex64::new(c.re, 0.0)).collect()
        } else {
            v
        }
    };
    let residual_norm = euclidean_norm(&sol.residual);
    let outcome = if residual_norm > tol * euclidean_norm(&xi) {
        let mu = clean(sol.residual.iter().map(|c| c / residual_norm).collect());
        AtomOutcome::Inconsistent { mu }
    } else {
        let x = clean(sol.x);
        let norm = euclidean_norm(&x);
        if norm <= beta + tol * (1.0 + beta) {
            AtomOutcome::Feasible { x, norm }
        } else {
            let dn = euclidean_norm(&sol.dual);
            let mu = clean(sol.dual.iter().map(|c| c / dn).collect());
            AtomOutcome::OverBudget { mu, norm }
        }
    };
    if let AtomOutcome::Inconsistent { mu } | AtomOutcome::OverBudget { mu, .. } = &outcome {
        let lambdas: Vec<Complex64> = mu.iter().map(|c| c.conj()).collect();
        if !violates_at(&riesz, &xi, beta, &lambdas) {
            return Err(Error::CertificateUnverified { atom });
        }
    }
    Ok(outcome)
}

/// Strict violation `|Σ λₖ ξₖ| > β ‖Σ λₖ fₖ‖` on one atom.
fn violates_at(riesz: &[&[Complex64]], xi: &[Complex64], beta: f64, lambdas: &[Complex64]) -> bool {
    let (lhs, rhs) = helly_sides(riesz, xi, lambdas);
    lhs > beta * rhs
}

/// `(|Σ λₖ ξₖ|, ‖Σ λₖ fₖ‖)` on one atom.
fn helly_sides(riesz: &[&[Complex64]], xi: &[Complex64], lambdas: &[Complex64]) -> (f64, f64) {
    let d = riesz.first().map_or(0, |r| r.len());
    let lhs: Complex64 = lambdas.iter().zip(xi).map(|(l, x)| l * x).sum();
    // riesz(Σ λₖ fₖ) = Σ λ̄ₖ yₖ
    let mut comb = vec![Complex64::new(0.0, 0.0); d];
    for (l, y) in lambdas.iter().zip(riesz) {
        for (c, yk) in comb.iter_mut().zip(y.iter()) {
            *c += l.conj() * yk;
        }
    }
    (lhs.norm(), euclidean_norm(&comb))
}

fn analyze(inst: &HellyInstance, tol: f64) -> Result<Vec<AtomOutcome>> {
    (0..inst.space().len())
        .into_par_iter()
        .map(|a| analyze_atom(inst, a, tol))
        .collect()
}

fn assemble(inst: &HellyInstance, outcomes: Vec<AtomOutcome>, with_solution: bool) -> HellyVerdict {
    let space = inst.space();
    let n = inst.len();
    let d = inst.dim();
    let zero = Complex64::new(0.0, 0.0);
    let feasible = outcomes.iter().all(|o| matches!(o, AtomOutcome::Feasible { .. }));
    let min_norms = outcomes
        .iter()
        .map(|o| match o {
            AtomOutcome::Feasible { norm, .. } | AtomOutcome::OverBudget { norm, .. } => Complex64::new(*norm, 0.0),
            AtomOutcome::Inconsistent { .. } => Complex64::new(f64::INFINITY, 0.0),
        })
        .collect();
    let min_solution_norm = L0Scalar::from_parts_unchecked(space.clone(), min_norms);

    if feasible {
        let solution = with_solution.then(|| {
            let coords = outcomes
                .iter()
                .flat_map(|o| match o {
                    AtomOutcome::Feasible { x, .. } => x.clone(),
                    _ => unreachable!(),
                })
                .collect();
            RNElement::new(space, d, coords).expect("solution has instance shape")
        });
        return HellyVerdict {
            feasible,
            solution,
            certificate: None,
            min_solution_norm,
        };
    }

    let mut lambdas = vec![vec![zero; space.len()]; n];
    let mut violation = vec![false; space.len()];
    for (a, o) in outcomes.iter().enumerate() {
        if let AtomOutcome::Inconsistent { mu } | AtomOutcome::OverBudget { mu, .. } = o {
            violation[a] = true;
            for (k, m) in mu.iter().enumerate() {
                lambdas[k][a] = m.conj();
            }
        }
    }
    let certificate = Certificate {
        lambdas: lambdas
            .into_iter()
            .map(|v| L0Scalar::from_parts_unchecked(space.clone(), v))
            .collect(),
        violation_set: AtomSet::from_mask(space, violation).expect("mask has space length"),
    };
    HellyVerdict {
        feasible,
        solution: None,
        certificate: Some(certificate),
        min_solution_norm,
    }
}

/// Decide the Helly condition; on failure return the violating `λ`.
pub fn check_condition(inst: &HellyInstance) -> Result<HellyVerdict> {
    check_condition_with(inst, DEFAULT_TOLERANCE)
}

pub fn check_condition_with(inst: &HellyInstance, tol: f64) -> Result<HellyVerdict> {
    Ok(assemble(inst, analyze(inst, tol)?, false))
}

/// Decide and, when feasible, return the atom-wise minimum-norm solution.
pub fn solve(inst: &HellyInstance) -> Result<HellyVerdict> {
    solve_with(inst, DEFAULT_TOLERANCE)
}

pub fn solve_with(inst: &HellyInstance, tol: f64) -> Result<HellyVerdict> {
    Ok(assemble(inst, analyze(inst, tol)?, true))
}

/// Numerically verify that `cert` violates the Helly inequality strictly on
/// its violation set, and that the set has positive measure.
pub fn verify_certificate(inst: &HellyInstance, cert: &Certificate) -> bool {
    if cert.violation_set.measure() <= 0.0 || cert.lambdas.len() != inst.len() {
        return false;
    }
    cert.violation_set.indices().all(|a| {
        let lambdas: Vec<Complex64> = cert.lambdas.iter().map(|l| l.at(a)).collect();
        violates_at(&inst.riesz_at(a), &inst.targets_at(a), inst.budget.at(a).re, &lambdas)
    })
}

/// Largest residual `|fᵢ(x) − ξᵢ| / (1 + |ξᵢ|)` over all equations and atoms.
pub fn relative_residual(inst: &HellyInstance, x: &RNElement) -> Result<f64> {
    let mut worst = 0.0f64;
    for (f, t) in inst.fs.iter().zip(&inst.targets) {
        let v = f.evaluate(x)?;
        for (a, b) in v.values().iter().zip(t.values()) {
            worst = worst.max((a - b).norm() / (1.0 + b.norm()));
        }
    }
    Ok(worst)
}

/// Same decision as [`check_condition`], reached through the quasi-free
/// stratification: on each rank-`i` stratum the equations of a basis
/// `g₁…gᵢ` are solved, and the remaining equations are checked against the
/// basis expansion `Ĩ_{Aᵢ} fₖ = Σ ηⱼₖ gⱼ`, which forces
/// `Ĩ_{Aᵢ} ξₖ = Σ ηⱼₖ γⱼ`.
pub fn solve_via_stratification(inst: &HellyInstance, rank_tol: f64, tol: f64) -> Result<HellyVerdict> {
    let strat = quasi_free_stratification(inst.functionals(), rank_tol)?;
    let space = inst.space().clone();
    let d = inst.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut coords = vec![zero; space.len() * d];
    let mut feasible_atoms = vec![true; space.len()];
    let mut norms = vec![Complex64::new(0.0, 0.0); space.len()];

    // rank 0: every functional vanishes, so ξ must vanish too
    for a in strat.part(0).indices() {
        if inst.targets_at(a).iter().any(|t| t.norm() > 0.0) {
            feasible_atoms[a] = false;
            norms[a] = Complex64::new(f64::INFINITY, 0.0);
        }
    }
    for rank in 1..=inst.len() {
        let part = strat.part(rank);
        if part.is_empty() {
            continue;
        }
        let basis = strat.basis(rank).expect("nonempty stratum has a basis");
        let selection = strat.selection(rank).expect("nonempty stratum has a selection");
        // γⱼ = Σ ζₖⱼ ξₖ: each basis functional is a glued selection of originals
        let gammas: Vec<L0Scalar> = (0..rank)
            .map(|j| {
                let vals = (0..space.len())
                    .map(|a| match &selection[a] {
                        Some(sel) => inst.targets[sel[j]].at(a),
                        None => zero,
                    })
                    .collect();
                L0Scalar::from_parts_unchecked(space.clone(), vals)
            })
            .collect();
        let etas = inst
            .functionals()
            .iter()
            .map(|f| express_in_basis(f, &strat, rank))
            .collect::<Result<Vec<_>>>()?;
        for a in part.indices() {
            let g_rows: Vec<Complex64> = basis.iter().flat_map(|g| g.riesz().at(a).iter().map(|c| c.conj())).collect();
            let gamma_a: Vec<Complex64> = gammas.iter().map(|g| g.at(a)).collect();
            let sol = min_norm_solve(&g_rows, rank, d, &gamma_a, tol);
            let mismatch: Vec<Complex64> = inst
                .targets
                .iter()
                .zip(&etas)
                .map(|(t, eta)| t.at(a) - eta.iter().zip(&gamma_a).map(|(e, g)| e.at(a) * g).sum::<Complex64>())
                .collect();
            let consistent = euclidean_norm(&mismatch) <= tol * euclidean_norm(&inst.targets_at(a));
            let n = euclidean_norm(&sol.x);
            let beta = inst.budget.at(a).re;
            if !consistent {
                feasible_atoms[a] = false;
                norms[a] = Complex64::new(f64::INFINITY, 0.0);
            } else {
                norms[a] = Complex64::new(n, 0.0);
                if n > beta + tol * (1.0 + beta) {
                    feasible_atoms[a] = false;
                } else {
                    coords[a * d..(a + 1) * d].copy_from_slice(&sol.x);
                }
            }
        }
    }
    let feasible = feasible_atoms.iter().all(|&f| f);
    let min_solution_norm = L0Scalar::from_parts_unchecked(space.clone(), norms);
    if feasible {
        if space.field() == Field::Real {
            coords.iter_mut().for_each(|c| c.im = 0.0);
        }
        Ok(HellyVerdict {
            feasible,
            solution: Some(RNElement::new(&space, d, coords)?),
            certificate: None,
            min_solution_norm,
        })
    } else {
        Ok(HellyVerdict {
            feasible,
            solution: None,
            certificate: None,
            min_solution_norm,
        })
    }
}

/// Brute-force estimate of `sup_λ |Σ λₖ ξₖ| / ‖Σ λₖ fₖ‖` per atom.
#[derive(Debug, Clone)]
pub struct OracleEstimate {
    /// Largest finite ratio seen on each atom.
    pub values: L0Scalar,
    /// Atoms where a sample had `‖Σ λₖ fₖ‖ = 0` but `Σ λₖ ξₖ ≠ 0`.
    pub infinite: AtomSet,
}

/// Sample `samples` directions `λ` uniformly on the unit sphere of `Kⁿ` and
/// record the largest ratio per atom. `0/0` counts as `0`.
pub fn sup_ratio_oracle<R: Rng + ?Sized>(
    fs: &[RandomFunctional],
    targets: &[L0Scalar],
    samples: usize,
    rng: &mut R,
) -> Result<OracleEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("oracle needs at least one sample".into()));
    }
    let first = fs.first().ok_or(Error::EmptyCollection)?;
    if fs.len() != targets.len() {
        return Err(Error::ShapeMismatch {
            expected: fs.len(),
            found: targets.len(),
        });
    }
    let space = first.space().clone();
    let field = space.field();
    let atoms = space.len();
    let mut best = vec![0.0f64; atoms];
    let mut infinite = vec![false; atoms];
    for _ in 0..samples {
        let lambdas = sampling::unit_vector(rng, fs.len(), field);
        for a in 0..atoms {
            let riesz: Vec<&[Complex64]> = fs.iter().map(|f| f.riesz().at(a)).collect();
            let xi: Vec<Complex64> = targets.iter().map(|t| t.at(a)).collect();
            let (num, den) = helly_sides(&riesz, &xi, &lambdas);
            if den == 0.0 {
                if num > 0.0 {
                    infinite[a] = true;
                }
            } else {
                best[a] = best[a].max(num / den);
            }
        }
    }
    Ok(OracleEstimate {
        values: L0Scalar::from_real(&space, best)?,
        infinite: AtomSet::from_mask(&space, infinite)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real_space(n: usize) -> Arc<AtomicSpace> {
        AtomicSpace::uniform(n, Field::Real).unwrap()
    }

    fn f(s: &Arc<AtomicSpace>, per_atom: Vec<Vec<f64>>) -> RandomFunctional {
        RandomFunctional::new(RNElement::from_real_atoms(s, per_atom).unwrap())
    }

    fn r(s: &Arc<AtomicSpace>, v: Vec<f64>) -> L0Scalar {
        L0Scalar::from_real(s, v).unwrap()
    }

    fn three_four(beta: f64) -> HellyInstance {
        let s = real_space(1);
        HellyInstance::new(
            vec![f(&s, vec![vec![1.0, 0.0]]), f(&s, vec![vec![0.0, 1.0]])],
            vec![r(&s, vec![3.0]), r(&s, vec![4.0])],
            r(&s, vec![beta]),
            r(&s, vec![1e-3]),
        )
        .unwrap()
    }

    #[test]
    fn feasible_three_four() {
        let inst = three_four(5.0);
        let v = check_condition(&inst).unwrap();
        assert!(v.feasible && v.solution.is_none() && v.certificate.is_none());
        let v = solve(&inst).unwrap();
        let x = v.solution.unwrap();
        assert!((x.at(0)[0].re - 3.0).abs() < 1e-12 && (x.at(0)[1].re - 4.0).abs() < 1e-12);
        assert!((v.min_solution_norm.at(0).re - 5.0).abs() < 1e-12);
    }

    #[test]
    fn over_budget_three_four() {
        let inst = three_four(4.9);
        let v = solve(&inst).unwrap();
        assert!(!v.feasible && v.solution.is_none());
        let cert = v.certificate.unwrap();
        assert_eq!(cert.violation_set.ids(), vec!["a1"]);
        let l1 = cert.lambdas[0].at(0).re;
        let l2 = cert.lambdas[1].at(0).re;
        // λ ∝ (3, 4)
        assert!((l1 * 4.0 - l2 * 3.0).abs() < 1e-12 && l1 > 0.0);
        assert!(verify_certificate(&inst, &cert));
    }

    #[test]
    fn zero_targets_zero_budget() {
        let s = real_space(2);
        let inst = HellyInstance::new(
            vec![f(&s, vec![vec![1.0, 2.0], vec![0.0, 1.0]])],
            vec![r(&s, vec![0.0, 0.0])],
            r(&s, vec![0.0, 0.0]),
            r(&s, vec![1.0, 1.0]),
        )
        .unwrap();
        let v = solve(&inst).unwrap();
        assert!(v.feasible);
        assert!(v.solution.unwrap().is_null());
    }

    fn rank_zero_instance(xi: Vec<f64>) -> HellyInstance {
        let s = real_space(2);
        HellyInstance::new(
            vec![f(&s, vec![vec![1.0, 0.0], vec![0.0, 0.0]])],
            vec![r(&s, xi)],
            r(&s, vec![1.0, 1.0]),
            r(&s, vec![0.5, 0.5]),
        )
        .unwrap()
    }

    #[test]
    fn rank_zero_atom_with_zero_target() {
        let v = solve(&rank_zero_instance(vec![1.0, 0.0])).unwrap();
        assert!(v.feasible);
        let x = v.solution.unwrap();
        assert_eq!(x.at(0)[0].re, 1.0);
        assert_eq!(x.at(1), &[Complex64::new(0.0, 0.0); 2]);
    }

    #[test]
    fn rank_zero_atom_with_nonzero_target() {
        let inst = rank_zero_instance(vec![1.0, 1.0]);
        let v = solve(&inst).unwrap();
        assert!(!v.feasible);
        let cert = v.certificate.unwrap();
        assert_eq!(cert.violation_set.ids(), vec!["a2"]);
        assert_eq!(cert.lambdas[0].values(), &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(verify_certificate(&inst, &cert));
        assert!(v.min_solution_norm.at(1).re.is_infinite());
    }

    #[test]
    fn oracle_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = three_four(5.0);
        let est = sup_ratio_oracle(inst.functionals(), inst.targets(), 10_000, &mut rng).unwrap();
        let v = est.values.at(0).re;
        assert!((5.0 - 0.01..=5.0 + 1e-9).contains(&v), "{v}");
        assert!(est.infinite.is_empty());

        let s = real_space(2);
        let zf = vec![RandomFunctional::zero(&s, 2)];
        let est = sup_ratio_oracle(&zf, &[r(&s, vec![0.0, 0.0])], 100, &mut rng).unwrap();
        assert_eq!(est.values.real_values().unwrap(), vec![0.0, 0.0]);
        assert!(est.infinite.is_empty());
        let est = sup_ratio_oracle(&zf, &[r(&s, vec![2.0, 0.0])], 100, &mut rng).unwrap();
        assert_eq!(est.infinite.ids(), vec!["a1"]);
        assert!(sup_ratio_oracle(&zf, &[r(&s, vec![2.0, 0.0])], 0, &mut rng).is_err());
    }

    #[test]
    fn instance_validation() {
        let s = real_space(1);
        let fs = vec![f(&s, vec![vec![1.0]])];
        assert!(HellyInstance::new(fs.clone(), vec![r(&s, vec![1.0])], r(&s, vec![-1.0]), r(&s, vec![1.0])).is_err());
        assert!(HellyInstance::new(fs.clone(), vec![r(&s, vec![1.0])], r(&s, vec![1.0]), r(&s, vec![0.0])).is_err());
        assert!(HellyInstance::new(fs, vec![], r(&s, vec![1.0]), r(&s, vec![1.0])).is_err());
    }

    #[test]
    fn complex_instance() {
        let s = AtomicSpace::uniform(1, Field::Complex).unwrap();
        let i = Complex64::i();
        // f(x) = ⟨x, (i, 0)⟩ = -i x₁ ; target 2 → x₁ = 2i
        let fs = vec![RandomFunctional::new(
            RNElement::from_atoms(&s, vec![vec![i, Complex64::new(0.0, 0.0)]]).unwrap(),
        )];
        let inst = HellyInstance::new(
            fs,
            vec![L0Scalar::constant_real(&s, 2.0)],
            L0Scalar::constant_real(&s, 2.0),
            L0Scalar::constant_real(&s, 0.1),
        )
        .unwrap();
        let v = solve(&inst).unwrap();
        let x = v.solution.unwrap();
        assert!((x.at(0)[0] - 2.0 * i).norm() < 1e-12);
        assert!(relative_residual(&inst, &x).unwrap() < 1e-12);
    }
}
