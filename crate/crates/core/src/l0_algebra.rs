//! Scalar foundation: `L⁰(F, K)` over a finite atomic probability space.
//!
//! Over an atomic space every measurable set is a union of atoms and every
//! equivalence class of random variables is one value per atom, so all of
//! the order and lattice statements below are decided atom by atom with no
//! null sets to worry about.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance on the total probability mass of an [`AtomicSpace`].
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// Scalar field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Real dimension of one scalar of this field.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// A finite probability space given by its atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicSpace {
    atoms: Vec<String>,
    probs: Vec<f64>,
    field: Field,
}

impl AtomicSpace {
    pub fn new(atoms: Vec<String>, probs: Vec<f64>, field: Field) -> Result<Arc<Self>> {
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("no atoms".into()));
        }
        if atoms.len() != probs.len() {
            return Err(Error::ShapeMismatch {
                expected: atoms.len(),
                found: probs.len(),
            });
        }
        let mut seen = HashSet::new();
        for id in &atoms {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate atom `{id}`")));
            }
        }
        for (id, &p) in atoms.iter().zip(&probs) {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::InvalidSpace(format!("atom `{id}` has non-positive probability {p}")));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::InvalidSpace(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Arc::new(Self { atoms, probs, field }))
    }

    /// `n` equally likely atoms named `a1..an`.
    pub fn uniform(n: usize, field: Field) -> Result<Arc<Self>> {
        let atoms = (1..=n).map(|i| format!("a{i}")).collect();
        let probs = vec![1.0 / n as f64; n];
        // 1/n summed n times can drift by a few ulps; renormalize the last atom.
        let mut probs: Vec<f64> = probs;
        if n > 0 {
            let head: f64 = probs[..n - 1].iter().sum();
            probs[n - 1] = 1.0 - head;
        }
        Self::new(atoms, probs, field)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, atom: usize) -> f64 {
        self.probs[atom]
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.atoms
            .iter()
            .position(|a| a == id)
            .ok_or_else(|| Error::UnknownAtom(id.to_string()))
    }

    /// Same space as `other`, either by identity or by value.
    pub fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

pub(crate) fn ensure_same(a: &Arc<AtomicSpace>, b: &Arc<AtomicSpace>) -> Result<()> {
    if a.same(b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A measurable set: a subset of the atoms.
#[derive(Debug, Clone)]
pub struct AtomSet {
    space: Arc<AtomicSpace>,
    members: Vec<bool>,
}

impl PartialEq for AtomSet {
    fn eq(&self, other: &Self) -> bool {
        self.space.same(&other.space) && self.members == other.members
    }
}

impl AtomSet {
    pub fn empty(space: &Arc<AtomicSpace>) -> Self {
        Self {
            space: space.clone(),
            members: vec![false; space.len()],
        }
    }

    pub fn full(space: &Arc<AtomicSpace>) -> Self {
        Self {
            space: space.clone(),
            members: vec![true; space.len()],
        }
    }

    pub fn from_ids<S: AsRef<str>>(space: &Arc<AtomicSpace>, ids: &[S]) -> Result<Self> {
        let mut set = Self::empty(space);
        for id in ids {
            let i = space.index_of(id.as_ref())?;
            set.members[i] = true;
        }
        Ok(set)
    }

    pub fn from_indices(space: &Arc<AtomicSpace>, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(space);
        for i in indices {
            if i >= space.len() {
                return Err(Error::InvalidArgument(format!(
                    "atom index {i} out of range for a {}-atom space",
                    space.len()
                )));
            }
            set.members[i] = true;
        }
        Ok(set)
    }

    pub fn from_mask(space: &Arc<AtomicSpace>, members: Vec<bool>) -> Result<Self> {
        if members.len() != space.len() {
            return Err(Error::ShapeMismatch {
                expected: space.len(),
                found: members.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            members,
        })
    }

    pub fn space(&self) -> &Arc<AtomicSpace> {
        &self.space
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.members[atom]
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn ids(&self) -> Vec<&str> {
        self.indices().map(|i| self.space.atoms[i].as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn measure(&self) -> f64 {
        self.indices().map(|i| self.space.probs[i]).sum()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        Self {
            space: self.space.clone(),
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        ensure_same(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            members: self.members.iter().zip(&other.members).map(|(&a, &b)| op(a, b)).collect(),
        })
    }
}

/// An element of `L⁰(F, K)`: one scalar per atom.
#[derive(Debug, Clone)]
pub struct L0Scalar {
    space: Arc<AtomicSpace>,
    values: Vec<Complex64>,
}

impl PartialEq for L0Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.space.same(&other.space) && self.values == other.values
    }
}

impl L0Scalar {
    pub fn new(space: &Arc<AtomicSpace>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::ShapeMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        if space.field() == Field::Real && values.iter().any(|v| v.im != 0.0) {
            return Err(Error::NotReal);
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub fn from_real(space: &Arc<AtomicSpace>, values: Vec<f64>) -> Result<Self> {
        Self::new(space, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(space: &Arc<AtomicSpace>, value: Complex64) -> Self {
        Self {
            space: space.clone(),
            values: vec![value; space.len()],
        }
    }

    pub fn constant_real(space: &Arc<AtomicSpace>, value: f64) -> Self {
        Self::constant(space, Complex64::new(value, 0.0))
    }

    pub fn zero(space: &Arc<AtomicSpace>) -> Self {
        Self::constant_real(space, 0.0)
    }

    pub fn one(space: &Arc<AtomicSpace>) -> Self {
        Self::constant_real(space, 1.0)
    }

    /// The class of the characteristic function of `set`.
    pub fn indicator(set: &AtomSet) -> Self {
        Self {
            space: set.space.clone(),
            values: set
                .members
                .iter()
                .map(|&m| Complex64::new(if m { 1.0 } else { 0.0 }, 0.0))
                .collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(space: Arc<AtomicSpace>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(space.len(), values.len());
        Self { space, values }
    }

    pub fn space(&self) -> &Arc<AtomicSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, atom: usize) -> Complex64 {
        self.values[atom]
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn real_values(&self) -> Result<Vec<f64>> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        Ok(self.values.iter().map(|v| v.re).collect())
    }

    /// Member of `L⁰₊`.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re >= 0.0)
    }

    /// Member of `L⁰₊₊`.
    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re > 0.0)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        ensure_same(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `|ξ|`, an element of `L⁰₊`.
    pub fn abs(&self) -> Self {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    /// Generalized inverse: `1/ξ` where `ξ ≠ 0` and `0` elsewhere.
    ///
    /// The zero test is exact, so `ξ · ξ⁻¹` is the indicator of the support
    /// bit for bit.
    pub fn pseudo_inverse(&self) -> Self {
        self.map(|v| {
            if v == Complex64::new(0.0, 0.0) {
                v
            } else if v.im == 0.0 {
                Complex64::new(1.0 / v.re, 0.0)
            } else {
                v.inv()
            }
        })
    }

    /// Atom-wise `ξ ≤ η`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        let (a, b) = self.real_pair(other)?;
        Ok(a.iter().zip(&b).all(|(x, y)| x <= y))
    }

    /// `ξ > η` on every atom of `set`.
    pub fn gt_on(&self, other: &Self, set: &AtomSet) -> Result<bool> {
        let (a, b) = self.real_pair(other)?;
        ensure_same(&self.space, &set.space)?;
        Ok(set.indices().all(|i| a[i] > b[i]))
    }

    /// `[ξ > η]`.
    pub fn bracket_gt(&self, other: &Self) -> Result<AtomSet> {
        let (a, b) = self.real_pair(other)?;
        Ok(AtomSet {
            space: self.space.clone(),
            members: a.iter().zip(&b).map(|(x, y)| x > y).collect(),
        })
    }

    /// `[|ξ| > 0]`, the support of `ξ`.
    pub fn support(&self) -> AtomSet {
        AtomSet {
            space: self.space.clone(),
            members: self.values.iter().map(|v| v.norm() > 0.0).collect(),
        }
    }

    /// Atom-wise maximum of two real elements.
    pub fn max(&self, other: &Self) -> Result<Self> {
        sup([self, other])
    }

    fn real_pair(&self, other: &Self) -> Result<(Vec<f64>, Vec<f64>)> {
        ensure_same(&self.space, &other.space)?;
        Ok((self.real_values()?, other.real_values()?))
    }
}

/// `ξ ↦ Ĩ_A` for a set of atoms of `space`.
pub fn indicator(space: &Arc<AtomicSpace>, set: &AtomSet) -> Result<L0Scalar> {
    ensure_same(space, &set.space)?;
    Ok(L0Scalar::indicator(set))
}

/// Supremum of a nonempty finite family of real elements: the atom-wise max.
pub fn sup<'a>(items: impl IntoIterator<Item = &'a L0Scalar>) -> Result<L0Scalar> {
    let mut iter = items.into_iter();
    let first = iter.next().ok_or(Error::EmptyCollection)?;
    let mut acc = first.real_values()?;
    for item in iter {
        ensure_same(&first.space, &item.space)?;
        for (a, b) in acc.iter_mut().zip(item.real_values()?) {
            if b > *a {
                *a = b;
            }
        }
    }
    L0Scalar::from_real(&first.space, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(n: usize) -> Arc<AtomicSpace> {
        AtomicSpace::uniform(n, Field::Real).unwrap()
    }

    fn real(s: &Arc<AtomicSpace>, v: &[f64]) -> L0Scalar {
        L0Scalar::from_real(s, v.to_vec()).unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(AtomicSpace::new(vec!["a".into(), "a".into()], vec![0.5, 0.5], Field::Real).is_err());
        assert!(AtomicSpace::new(vec!["a".into(), "b".into()], vec![1.0, 0.0], Field::Real).is_err());
        assert!(AtomicSpace::new(vec!["a".into(), "b".into()], vec![0.5, 0.6], Field::Real).is_err());
        assert!(AtomicSpace::new(vec!["a".into()], vec![1.0, 0.0], Field::Real).is_err());
        let s = AtomicSpace::uniform(7, Field::Complex).unwrap();
        assert_eq!(s.len(), 7);
    }

    #[test]
    fn indicator_examples() {
        let s = space(3);
        let a1 = AtomSet::from_ids(&s, &["a1"]).unwrap();
        assert_eq!(indicator(&s, &a1).unwrap(), real(&s, &[1.0, 0.0, 0.0]));
        assert_eq!(indicator(&s, &AtomSet::empty(&s)).unwrap(), real(&s, &[0.0, 0.0, 0.0]));
        assert_eq!(indicator(&s, &AtomSet::full(&s)).unwrap(), real(&s, &[1.0, 1.0, 1.0]));
        assert_eq!(AtomSet::from_ids(&s, &["a9"]).unwrap_err(), Error::UnknownAtom("a9".into()));
        let other = space(2);
        assert_eq!(indicator(&other, &a1).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn pseudo_inverse_examples() {
        let s = space(3);
        assert_eq!(real(&s, &[2.0, 0.0, -0.5]).pseudo_inverse(), real(&s, &[0.5, 0.0, -2.0]));
        assert_eq!(real(&s, &[0.0; 3]).pseudo_inverse(), real(&s, &[0.0; 3]));
        let c = AtomicSpace::uniform(2, Field::Complex).unwrap();
        let xi = L0Scalar::new(&c, vec![Complex64::i(), Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(xi.pseudo_inverse().values(), &[Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn sup_examples() {
        let s = space(2);
        assert_eq!(
            sup([&real(&s, &[1.0, 5.0]), &real(&s, &[3.0, 2.0])]).unwrap(),
            real(&s, &[3.0, 5.0])
        );
        assert_eq!(sup([&real(&s, &[1.0, 1.0])]).unwrap(), real(&s, &[1.0, 1.0]));
        assert_eq!(
            sup([&real(&s, &[0.0, 0.0]), &real(&s, &[-1.0, 2.0]), &real(&s, &[2.0, -1.0])]).unwrap(),
            real(&s, &[2.0, 2.0])
        );
        assert_eq!(sup(std::iter::empty()).unwrap_err(), Error::EmptyCollection);
        let other = space(2);
        let o = real(&other, &[0.0, 0.0]);
        let t = AtomicSpace::new(vec!["x".into(), "y".into()], vec![0.25, 0.75], Field::Real).unwrap();
        let q = real(&t, &[0.0, 0.0]);
        assert!(sup([&o, &real(&s, &[1.0, 1.0])]).is_ok());
        assert_eq!(sup([&q, &real(&s, &[1.0, 1.0])]).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn order_examples() {
        let s = space(2);
        assert!(real(&s, &[1.0, 2.0]).leq(&real(&s, &[1.0, 3.0])).unwrap());
        let a1 = AtomSet::from_ids(&s, &["a1"]).unwrap();
        let both = AtomSet::full(&s);
        assert!(real(&s, &[2.0, 0.0]).gt_on(&real(&s, &[1.0, 0.0]), &a1).unwrap());
        assert!(!real(&s, &[2.0, 0.0]).gt_on(&real(&s, &[1.0, 0.0]), &both).unwrap());

        let c = AtomicSpace::uniform(2, Field::Complex).unwrap();
        let z = L0Scalar::new(&c, vec![Complex64::i(), Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(z.leq(&z).unwrap_err(), Error::NotReal);
        assert_eq!(z.bracket_gt(&z).unwrap_err(), Error::NotReal);
    }

    #[test]
    fn bracket_examples() {
        let s3 = space(3);
        let b = real(&s3, &[2.0, 0.0, 1.0]).bracket_gt(&real(&s3, &[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(b.ids(), vec!["a1"]);
        let s2 = space(2);
        assert!(real(&s2, &[0.0, 0.0]).bracket_gt(&real(&s2, &[0.0, 0.0])).unwrap().is_empty());
        assert_eq!(
            real(&s2, &[3.0, 3.0]).bracket_gt(&real(&s2, &[1.0, 1.0])).unwrap().ids(),
            vec!["a1", "a2"]
        );
    }

    fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(prop_oneof![Just(0.0), -10.0..10.0f64], n)
    }

    proptest! {
        #[test]
        fn inverse_identity_is_bit_exact(v in values(6), w in values(6)) {
            let s = AtomicSpace::uniform(6, Field::Complex).unwrap();
            let xi = L0Scalar::new(&s, v.iter().zip(&w).map(|(&a, &b)| Complex64::new(a, b)).collect()).unwrap();
            let lhs = xi.mul(&xi.pseudo_inverse()).unwrap();
            let rhs = L0Scalar::indicator(&xi.abs().bracket_gt(&L0Scalar::zero(&s)).unwrap());
            // complex reciprocals are rounded, so compare support and unit modulus
            for (l, r) in lhs.values().iter().zip(rhs.values()) {
                prop_assert!((l - r).norm() <= 4.0 * f64::EPSILON);
            }
            // x * fl(1/x) is within one ulp of 1 but not always equal to it
            // (e.g. x = 49); the zero pattern is exact.
            let re = L0Scalar::from_real(&AtomicSpace::uniform(6, Field::Real).unwrap(), v).unwrap();
            let lhs = re.mul(&re.pseudo_inverse()).unwrap();
            prop_assert_eq!(lhs.support(), re.support());
            for (l, r) in lhs.values().iter().zip(L0Scalar::indicator(&re.support()).values()) {
                prop_assert!((l.re - r.re).abs() <= f64::EPSILON);
            }
        }

        #[test]
        fn indicator_algebra(a in prop::collection::vec(any::<bool>(), 5), b in prop::collection::vec(any::<bool>(), 5)) {
            let s = space(5);
            let sa = AtomSet::from_mask(&s, a).unwrap();
            let sb = AtomSet::from_mask(&s, b).unwrap();
            let ia = L0Scalar::indicator(&sa);
            let ib = L0Scalar::indicator(&sb);
            prop_assert_eq!(ia.mul(&ib).unwrap(), L0Scalar::indicator(&sa.intersection(&sb).unwrap()));
            let disjoint = sb.difference(&sa).unwrap();
            prop_assert_eq!(
                ia.add(&L0Scalar::indicator(&disjoint)).unwrap(),
                L0Scalar::indicator(&sa.union(&disjoint).unwrap())
            );
        }
    }
}
