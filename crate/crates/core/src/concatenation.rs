//! Countable concatenation over finite spaces and over a countably atomic
//! dyadic space.
//!
//! The dyadic space has atoms `A_n = [2^{-(n+1)}, 2^{-n}]`, `n ≥ 0`, with
//! `P(A_n) = 2^{-(n+1)}`. It is never materialized: elements are finitely
//! supported, sequences of elements have a finite head followed by a
//! describable tail, and glued sums are evaluated lazily atom by atom.
//!
//! Over this space the module `E` of finitely supported scalars lacks the
//! countable concatenation property, which is what [`counterexample_check`]
//! exhibits.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::helly_solver::{self, HellyInstance};
use crate::l0_algebra::{ensure_same, AtomSet, AtomicSpace, Field, L0Scalar};
use crate::random_conjugate::RandomFunctional;
use crate::rn_module::RNElement;

/// Glue `Σ Ĩ_{A_k} x_k` over a finite space.
///
/// The pieces must be pairwise disjoint and cover the space. Finite spaces
/// have the countable concatenation property, so this never leaves the module.
pub fn concatenate(pieces: &[AtomSet], elems: &[RNElement]) -> Result<RNElement> {
    if pieces.is_empty() {
        return Err(Error::EmptyCollection);
    }
    if pieces.len() != elems.len() {
        return Err(Error::ShapeMismatch {
            expected: pieces.len(),
            found: elems.len(),
        });
    }
    let space = pieces[0].space().clone();
    let dim = elems[0].dim();
    let mut owner = vec![None; space.len()];
    for (k, (piece, x)) in pieces.iter().zip(elems).enumerate() {
        ensure_same(&space, piece.space())?;
        ensure_same(&space, x.space())?;
        if x.dim() != dim {
            return Err(Error::ShapeMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
        for a in piece.indices() {
            if owner[a].replace(k).is_some() {
                return Err(Error::InvalidArgument(format!("atom {} lies in two pieces", space.atoms()[a])));
            }
        }
    }
    let mut coords = Vec::with_capacity(space.len() * dim);
    for (a, k) in owner.iter().enumerate() {
        let k = k.ok_or_else(|| Error::InvalidArgument(format!("atom {} is not covered", space.atoms()[a])))?;
        coords.extend_from_slice(elems[k].at(a));
    }
    RNElement::new(&space, dim, coords)
}

/// The countably atomic base space.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DyadicSpace;

impl DyadicSpace {
    /// `P(A_n) = 2^{-(n+1)}`, exact in binary.
    pub fn prob(n: u64) -> f64 {
        pow2(-(n as i64) - 1)
    }

    /// `Σ_{m>n} P(A_m) = 2^{-(n+1)}`.
    pub fn tail_measure(n: u64) -> f64 {
        pow2(-(n as i64) - 1)
    }

    /// Finite truncation `{A_0, …, A_n}` with probabilities renormalized to 1.
    pub fn truncation(n: u64, field: Field) -> Result<Arc<AtomicSpace>> {
        let total = 1.0 - Self::tail_measure(n);
        let ids = (0..=n).map(|i| format!("A{i}")).collect();
        let probs = (0..=n).map(|i| Self::prob(i) / total).collect();
        AtomicSpace::new(ids, probs, field)
    }
}

fn pow2(e: i64) -> f64 {
    if e < -1074 {
        0.0
    } else {
        2f64.powi(e as i32)
    }
}

/// An element of `L⁰(C)` on the dyadic space with finite support.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FiniteSupportElement {
    values: BTreeMap<u64, Complex64>,
}

impl FiniteSupportElement {
    /// Build from `(atom, value)` pairs; zero values are dropped and later
    /// pairs overwrite earlier ones.
    pub fn new(values: impl IntoIterator<Item = (u64, Complex64)>) -> Self {
        let mut map = BTreeMap::new();
        for (n, v) in values {
            map.insert(n, v);
        }
        map.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        Self { values: map }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `Ĩ_{A_n}`.
    pub fn atom_indicator(n: u64) -> Self {
        Self::new([(n, Complex64::new(1.0, 0.0))])
    }

    pub fn at(&self, n: u64) -> Complex64 {
        self.values.get(&n).copied().unwrap_or_default()
    }

    pub fn support(&self) -> BTreeSet<u64> {
        self.values.keys().copied().collect()
    }

    pub fn values(&self) -> &BTreeMap<u64, Complex64> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

/// A set of atom indices of the dyadic space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomIndexSet {
    Finite(BTreeSet<u64>),
    /// Every index except the listed ones.
    Cofinite(BTreeSet<u64>),
}

impl AtomIndexSet {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            AtomIndexSet::Finite(s) => s.contains(&n),
            AtomIndexSet::Cofinite(s) => !s.contains(&n),
        }
    }
}

/// A countable measurable partition of the dyadic space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Partition {
    /// Finitely many pieces.
    Pieces(Vec<AtomIndexSet>),
    /// Piece `n` is `{A_n}`.
    Singletons,
}

impl Partition {
    fn validate(&self) -> Result<()> {
        let Partition::Pieces(pieces) = self else {
            return Ok(());
        };
        let mut seen = BTreeSet::new();
        let mut cofinite = None;
        for piece in pieces {
            match piece {
                AtomIndexSet::Finite(s) => {
                    for &n in s {
                        if !seen.insert(n) {
                            return Err(Error::InvalidArgument(format!("atom {n} lies in two pieces")));
                        }
                    }
                }
                AtomIndexSet::Cofinite(excluded) => {
                    if cofinite.replace(excluded).is_some() {
                        return Err(Error::InvalidArgument("two cofinite pieces always overlap".into()));
                    }
                }
            }
        }
        let excluded = cofinite.ok_or_else(|| Error::InvalidArgument("finitely many finite pieces cannot cover the space".into()))?;
        if excluded != &seen {
            return Err(Error::InvalidArgument(
                "the cofinite piece must exclude exactly the atoms of the finite pieces".into(),
            ));
        }
        Ok(())
    }

    /// Index of the piece containing atom `n`.
    fn piece_of(&self, n: u64) -> u64 {
        match self {
            Partition::Singletons => n,
            Partition::Pieces(pieces) => pieces
                .iter()
                .position(|p| p.contains(n))
                .expect("validated partition covers every atom") as u64,
        }
    }
}

/// Coefficient `c_n` of a diagonal tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Constant(Complex64),
    /// `c_n = c · n`.
    Linear(Complex64),
}

impl Coefficient {
    fn at(self, n: u64) -> Complex64 {
        match self {
            Coefficient::Constant(c) => c,
            Coefficient::Linear(c) => c * n as f64,
        }
    }
}

/// Elements `x_k` for `k` beyond the explicit head.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    Zero,
    Repeat(FiniteSupportElement),
    /// `x_k = c_k Ĩ_{A_k}`.
    Diagonal(Coefficient),
}

/// A sequence `(x_k)` of finitely supported elements.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSequence {
    pub head: Vec<FiniteSupportElement>,
    pub tail: Tail,
}

impl ElementSequence {
    pub fn value(&self, k: u64, n: u64) -> Complex64 {
        match self.head.get(k as usize) {
            Some(x) => x.at(n),
            None => match &self.tail {
                Tail::Zero => Complex64::new(0.0, 0.0),
                Tail::Repeat(x) => x.at(n),
                Tail::Diagonal(c) if k == n => c.at(n),
                Tail::Diagonal(_) => Complex64::new(0.0, 0.0),
            },
        }
    }
}

/// The formal sum `Σ Ĩ_{A_k} x_k`, evaluated lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSum {
    partition: Partition,
    elems: ElementSequence,
}

impl FormalSum {
    pub fn new(partition: Partition, elems: ElementSequence) -> Result<Self> {
        partition.validate()?;
        Ok(Self { partition, elems })
    }

    pub fn at(&self, n: u64) -> Complex64 {
        self.elems.value(self.partition.piece_of(n), n)
    }

    /// `‖x‖_cc = Σ Ĩ_{A_k} ‖x_k‖` at atom `n`.
    pub fn norm_at(&self, n: u64) -> f64 {
        self.at(n).norm()
    }

    /// The glued element if it is finitely supported.
    pub fn into_module(&self) -> ConcatResult {
        match &self.partition {
            Partition::Pieces(pieces) => {
                // finitely many finitely supported elements: collect their supports
                let mut values = Vec::new();
                for k in 0..pieces.len() as u64 {
                    for n in self.element_support(k) {
                        if self.partition.piece_of(n) == k {
                            values.push((n, self.at(n)));
                        }
                    }
                }
                ConcatResult::Element(FiniteSupportElement::new(values))
            }
            Partition::Singletons => {
                let head_len = self.elems.head.len() as u64;
                let mut values: Vec<(u64, Complex64)> = (0..head_len).map(|n| (n, self.at(n))).collect();
                match &self.elems.tail {
                    Tail::Zero => {}
                    Tail::Repeat(x) => values.extend(x.values().iter().filter(|(&n, _)| n >= head_len).map(|(&n, &v)| (n, v))),
                    Tail::Diagonal(c) => {
                        let witness: Vec<u64> = (head_len..).filter(|&n| c.at(n) != Complex64::new(0.0, 0.0)).take(10).collect();
                        // a constant or linear coefficient vanishes at most at one index
                        if witness.len() == 10 {
                            let pattern = match c {
                                Coefficient::Constant(_) => "diagonal tail with nonzero constant coefficient",
                                Coefficient::Linear(_) => "diagonal tail with coefficient c·n, c ≠ 0",
                            };
                            return ConcatResult::NotInModule {
                                first_indices: witness,
                                pattern: pattern.to_string(),
                            };
                        }
                        values.extend(witness.into_iter().map(|n| (n, c.at(n))));
                    }
                }
                ConcatResult::Element(FiniteSupportElement::new(values))
            }
        }
    }

    fn element_support(&self, k: u64) -> BTreeSet<u64> {
        match self.elems.head.get(k as usize) {
            Some(x) => x.support(),
            None => match &self.elems.tail {
                Tail::Zero => BTreeSet::new(),
                Tail::Repeat(x) => x.support(),
                Tail::Diagonal(_) => BTreeSet::from([k]),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConcatResult {
    Element(FiniteSupportElement),
    /// The glued sum has infinite support; `first_indices` lists atoms where
    /// it is nonzero and `pattern` names the reason the list never ends.
    NotInModule {
        first_indices: Vec<u64>,
        pattern: String,
    },
}

impl ConcatResult {
    pub fn element(&self) -> Option<&FiniteSupportElement> {
        match self {
            ConcatResult::Element(x) => Some(x),
            ConcatResult::NotInModule { .. } => None,
        }
    }
}

pub fn concatenate_dyadic(partition: Partition, elems: ElementSequence) -> Result<ConcatResult> {
    Ok(FormalSum::new(partition, elems)?.into_module())
}

/// Lazy `‖x‖_cc`; query with [`FormalSum::norm_at`].
pub fn cc_norm(partition: Partition, elems: ElementSequence) -> Result<FormalSum> {
    FormalSum::new(partition, elems)
}

/// Smallest `N` with tail measure `2^{-(N+1)} ≤ lam`.
pub fn truncation_index(lam: f64) -> u64 {
    let mut n = 0;
    while DyadicSpace::tail_measure(n) > lam {
        n += 1;
    }
    n
}

/// Restrict `x_cc` to `{A_0, …, A_N}` with `P(∪_{n>N} A_n) ≤ lam`.
///
/// The result agrees with `x_cc` on its support, so it differs from `x_cc`
/// by at least `eps` only on a set of measure at most `lam`.
pub fn truncate_to_tolerance(x_cc: impl Fn(u64) -> Complex64, eps: f64, lam: f64) -> Result<FiniteSupportElement> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if !(lam > 0.0 && lam < 1.0) {
        return Err(Error::InvalidArgument(format!("lam must lie in (0, 1), got {lam}")));
    }
    let n = truncation_index(lam);
    Ok(FiniteSupportElement::new((0..=n).map(|i| (i, x_cc(i)))))
}

/// One feasibility run on a finite truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationRun {
    pub n: u64,
    pub feasible: bool,
    /// `max_k |x(A_k) − 1|` of the returned solution.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub samples: usize,
    /// Samples with `|λξ| = β‖λf‖` on every atom, compared exactly.
    pub equality_holds: usize,
    /// Support sizes checked in the structural argument.
    pub structural_checked: u64,
    /// Whether the residual `|ξ − f(x)|` on atom `N + 1` was 1 for each.
    pub structural_holds: bool,
    /// Gluing `Ĩ_{A_n}` over all `n`.
    pub concatenation: ConcatResult,
    pub truncations: Vec<TruncationRun>,
}

impl CounterexampleReport {
    pub fn condition_holds(&self) -> bool {
        self.equality_holds == self.samples
    }

    pub fn solution_impossible(&self) -> bool {
        self.structural_holds && matches!(self.concatenation, ConcatResult::NotInModule { .. })
    }

    pub fn truncations_feasible(&self) -> bool {
        self.truncations.iter().all(|t| t.feasible && t.max_deviation <= 1e-12)
    }

    pub fn passed(&self) -> bool {
        self.condition_holds() && self.solution_impossible() && self.truncations_feasible()
    }
}

/// Number of truncations `N = 1..=TRUNCATIONS` solved in the contrast check.
pub const TRUNCATIONS: u64 = 20;
const STRUCTURAL_SUPPORT_SIZES: u64 = 64;

/// The module `E` of finitely supported scalars with `‖η‖ = |η|`, the
/// functional `f(η) = η` and `ξ = β = Ĩ_Ω`: the Helly condition holds with
/// equality, yet `f(x) = ξ` has no solution in `E`.
pub fn counterexample_check(seed: u64, samples: usize) -> Result<CounterexampleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xi = |_: u64| Complex64::new(1.0, 0.0);
    let beta = |_: u64| 1.0;
    // f is represented by its Riesz value 1 on every atom
    let f_riesz = |_: u64| Complex64::new(1.0, 0.0);

    let mut equality_holds = 0;
    for _ in 0..samples {
        let len = rng.random_range(0..=20);
        let lambda = FiniteSupportElement::new((0..len).map(|_| {
            let n = rng.random_range(0..64u64);
            let v = if rng.random_bool(0.1) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0))
            };
            (n, v)
        }));
        // off the support of λ both sides vanish; on it ‖λf‖ = |conj(λ)·1|
        let holds = lambda.values().iter().all(|(&n, &l)| {
            let lhs = (l * xi(n)).norm();
            let rhs = beta(n) * (l.conj() * f_riesz(n)).norm();
            lhs == rhs
        });
        if holds {
            equality_holds += 1;
        }
    }

    // f(x) = x, so a solution must equal ξ; any x supported in {0..N} misses
    // ξ by exactly 1 on atom N + 1
    let structural_holds = (0..STRUCTURAL_SUPPORT_SIZES).all(|n| {
        let best = FiniteSupportElement::new((0..=n).map(|i| (i, xi(i))));
        (xi(n + 1) - best.at(n + 1)).norm() == 1.0
    });
    let concatenation = concatenate_dyadic(
        Partition::Singletons,
        ElementSequence {
            head: Vec::new(),
            tail: Tail::Diagonal(Coefficient::Constant(Complex64::new(1.0, 0.0))),
        },
    )?;

    let truncations = (1..=TRUNCATIONS)
        .map(|n| {
            let space = DyadicSpace::truncation(n, Field::Complex)?;
            let f = RandomFunctional::new(RNElement::constant(&space, &[Complex64::new(1.0, 0.0)])?);
            let inst = HellyInstance::new(
                vec![f],
                vec![L0Scalar::one(&space)],
                L0Scalar::one(&space),
                L0Scalar::constant_real(&space, 1e-6),
            )?;
            let verdict = helly_solver::solve(&inst)?;
            let max_deviation = verdict
                .solution
                .as_ref()
                .map_or(f64::INFINITY, |x| x.coords().iter().map(|c| (c - 1.0).norm()).fold(0.0, f64::max));
            Ok(TruncationRun {
                n,
                feasible: verdict.feasible,
                max_deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CounterexampleReport {
        samples,
        equality_holds,
        structural_checked: STRUCTURAL_SUPPORT_SIZES,
        structural_holds,
        concatenation,
        truncations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn finite_gluing() {
        let s = AtomicSpace::uniform(2, Field::Real).unwrap();
        let x = RNElement::from_real_atoms(&s, vec![vec![1.0], vec![2.0]]).unwrap();
        let y = RNElement::from_real_atoms(&s, vec![vec![3.0], vec![4.0]]).unwrap();
        let pieces = [AtomSet::from_ids(&s, &["a1"]).unwrap(), AtomSet::from_ids(&s, &["a2"]).unwrap()];
        let glued = concatenate(&pieces, &[x.clone(), y.clone()]).unwrap();
        let expected = x
            .scalar_mul(&L0Scalar::indicator(&pieces[0]))
            .unwrap()
            .add(&y.scalar_mul(&L0Scalar::indicator(&pieces[1])).unwrap())
            .unwrap();
        assert_eq!(glued, expected);
        assert_eq!(glued.norm().real_values().unwrap(), vec![1.0, 4.0]);
    }

    #[test]
    fn finite_gluing_rejects_bad_partitions() {
        let s = AtomicSpace::uniform(2, Field::Real).unwrap();
        let x = RNElement::zero(&s, 1);
        let a1 = AtomSet::from_ids(&s, &["a1"]).unwrap();
        assert!(concatenate(std::slice::from_ref(&a1), std::slice::from_ref(&x)).is_err());
        assert!(concatenate(&[a1.clone(), AtomSet::full(&s)], &[x.clone(), x]).is_err());
    }

    #[test]
    fn dyadic_probabilities() {
        assert_eq!(DyadicSpace::prob(0), 0.5);
        assert_eq!(DyadicSpace::prob(3), 0.0625);
        let head: f64 = (0..10).map(DyadicSpace::prob).sum();
        assert_eq!(head + DyadicSpace::tail_measure(9), 1.0);
    }

    #[test]
    fn diagonal_indicators_leave_the_module() {
        let r = concatenate_dyadic(
            Partition::Singletons,
            ElementSequence {
                head: vec![],
                tail: Tail::Diagonal(Coefficient::Constant(one())),
            },
        )
        .unwrap();
        match r {
            ConcatResult::NotInModule { first_indices, .. } => assert_eq!(first_indices, (0..10).collect::<Vec<_>>()),
            other => panic!("expected NotInModule, got {other:?}"),
        }
    }

    #[test]
    fn finitely_many_indicators_stay() {
        let r = concatenate_dyadic(
            Partition::Singletons,
            ElementSequence {
                head: (0..=5).map(FiniteSupportElement::atom_indicator).collect(),
                tail: Tail::Zero,
            },
        )
        .unwrap();
        assert_eq!(r.element().unwrap().support(), (0..=5).collect());
    }

    #[test]
    fn finite_partition_of_dyadic_space() {
        let x = FiniteSupportElement::new([(0, one()), (1, one()), (7, one())]);
        let y = FiniteSupportElement::new([(0, Complex64::new(2.0, 0.0)), (9, Complex64::new(2.0, 0.0))]);
        let partition = Partition::Pieces(vec![AtomIndexSet::Finite([0, 1].into()), AtomIndexSet::Cofinite([0, 1].into())]);
        let r = concatenate_dyadic(
            partition,
            ElementSequence {
                head: vec![x, y],
                tail: Tail::Zero,
            },
        )
        .unwrap();
        let glued = r.element().unwrap();
        assert_eq!(glued.support(), [0, 1, 9].into());
        assert_eq!(glued.at(9).re, 2.0);

        let overlapping = Partition::Pieces(vec![AtomIndexSet::Finite([0].into()), AtomIndexSet::Cofinite([].into())]);
        assert!(cc_norm(
            overlapping,
            ElementSequence {
                head: vec![],
                tail: Tail::Zero
            }
        )
        .is_err());
    }

    #[test]
    fn cc_norm_values() {
        let unit = cc_norm(
            Partition::Singletons,
            ElementSequence {
                head: vec![],
                tail: Tail::Diagonal(Coefficient::Constant(Complex64::new(0.6, 0.8))),
            },
        )
        .unwrap();
        assert!((0..50).all(|n| (unit.norm_at(n) - 1.0).abs() < 1e-15));
        let growing = cc_norm(
            Partition::Singletons,
            ElementSequence {
                head: vec![],
                tail: Tail::Diagonal(Coefficient::Linear(one())),
            },
        )
        .unwrap();
        assert_eq!(growing.norm_at(1000), 1000.0);
    }

    #[test]
    fn truncation_indices() {
        assert_eq!(truncation_index(0.1), 3);
        assert_eq!(truncation_index(0.5), 0);
        let x = truncate_to_tolerance(|_| one(), 1e-3, 0.1).unwrap();
        assert_eq!(x.support(), (0..=3).collect());
        let finite = FiniteSupportElement::new([(1, one()), (2, one())]);
        assert_eq!(truncate_to_tolerance(|n| finite.at(n), 1e-3, 0.1).unwrap(), finite);
    }

    #[test]
    fn counterexample_report() {
        let report = counterexample_check(0, 1000).unwrap();
        assert!(report.condition_holds());
        assert!(report.solution_impossible());
        assert!(report.truncations_feasible(), "{:?}", report.truncations);
        assert_eq!(report.truncations.len(), 20);
        assert!(report.passed());
    }
}
