//! Rank analysis of finite families of functionals.
//!
//! The module generated by `f₁…fₙ` splits the space into strata
//! `A₀, A₁, …, Aₙ` on which it has constant rank. Over an atomic space the
//! rank on an atom is the rank of the Riesz vectors there. A basis of the
//! rank-`i` stratum is glued atom by atom from an independent subfamily of
//! the originals chosen on that atom; different atoms of one stratum may use
//! different subfamilies, and the glued functionals are still combinations
//! `Σ ζₖⱼ fₖ` with indicator coefficients.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::l0_algebra::{ensure_same, AtomSet, AtomicSpace, Field, L0Scalar};
use crate::linalg::{independent_rows, min_norm_solve};
use crate::random_conjugate::RandomFunctional;
use crate::rn_module::{euclidean_norm, RNElement};

/// Default pivot tolerance, relative to the largest Riesz-vector norm on the atom.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-10;

/// Absolute (for small vectors) residual bound for basis expansions.
pub const EXPANSION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Stratification {
    space: Arc<AtomicSpace>,
    family_size: usize,
    // selected original indices per atom; its length is the rank there
    selected: Vec<Vec<usize>>,
    parts: Vec<AtomSet>,
    bases: Vec<Option<Vec<RandomFunctional>>>,
}

impl Stratification {
    pub fn space(&self) -> &Arc<AtomicSpace> {
        &self.space
    }

    pub fn family_size(&self) -> usize {
        self.family_size
    }

    /// `A₀, …, Aₙ`.
    pub fn parts(&self) -> &[AtomSet] {
        &self.parts
    }

    pub fn part(&self, rank: usize) -> &AtomSet {
        &self.parts[rank]
    }

    pub fn rank_at(&self, atom: usize) -> usize {
        self.selected[atom].len()
    }

    /// Basis `g₁…gᵢ` of the rank-`i` stratum, `None` when the stratum is
    /// empty or `i = 0`.
    pub fn basis(&self, rank: usize) -> Option<&[RandomFunctional]> {
        self.bases.get(rank)?.as_deref()
    }

    /// For each atom, the original indices glued into the basis of the
    /// rank-`i` stratum (`None` off the stratum).
    pub fn selection(&self, rank: usize) -> Option<Vec<Option<&[usize]>>> {
        self.basis(rank)?;
        Some(
            self.selected
                .iter()
                .enumerate()
                .map(|(a, s)| self.parts[rank].contains(a).then_some(s.as_slice()))
                .collect(),
        )
    }

    /// Refinement of the rank-`i` stratum into pieces sharing one selected
    /// subfamily.
    pub fn groups(&self, rank: usize) -> Vec<(Vec<usize>, AtomSet)> {
        let mut by_sel: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
        for a in self.parts[rank].indices() {
            by_sel.entry(self.selected[a].as_slice()).or_default().push(a);
        }
        by_sel
            .into_iter()
            .map(|(sel, atoms)| {
                (
                    sel.to_vec(),
                    AtomSet::from_indices(&self.space, atoms).expect("atoms come from this space"),
                )
            })
            .collect()
    }
}

/// `[|ξ| > 0]`.
pub fn support(xi: &L0Scalar) -> AtomSet {
    xi.support()
}

/// Partition the space by the rank of `fs` and pick a basis on each stratum.
pub fn quasi_free_stratification(fs: &[RandomFunctional], rank_tol: f64) -> Result<Stratification> {
    let first = fs.first().ok_or(Error::EmptyCollection)?;
    let space = first.space().clone();
    let dim = first.dim();
    for f in fs {
        ensure_same(&space, f.space())?;
        if f.dim() != dim {
            return Err(Error::ShapeMismatch {
                expected: dim,
                found: f.dim(),
            });
        }
    }
    let n = fs.len();
    let selected: Vec<Vec<usize>> = (0..space.len())
        .map(|a| {
            let rows: Vec<&[Complex64]> = fs.iter().map(|f| f.riesz().at(a)).collect();
            independent_rows(&rows, rank_tol)
        })
        .collect();
    let parts: Vec<AtomSet> = (0..=n)
        .map(|rank| AtomSet::from_mask(&space, selected.iter().map(|s| s.len() == rank).collect()).expect("mask has space length"))
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    let bases = (0..=n)
        .map(|rank| {
            if rank == 0 || parts[rank].is_empty() {
                return None;
            }
            let basis = (0..rank)
                .map(|j| {
                    let mut coords = vec![zero; space.len() * dim];
                    for a in parts[rank].indices() {
                        let src = fs[selected[a][j]].riesz().at(a);
                        coords[a * dim..(a + 1) * dim].copy_from_slice(src);
                    }
                    RandomFunctional::new(RNElement::new(&space, dim, coords).expect("basis has family shape"))
                })
                .collect();
            Some(basis)
        })
        .collect();
    Ok(Stratification {
        space,
        family_size: n,
        selected,
        parts,
        bases,
    })
}

/// Coefficients `η₁…ηᵢ` with `Ĩ_{Aᵢ} f = Σ ηⱼ gⱼ` on the rank-`i` stratum
/// (and zero elsewhere).
pub fn express_in_basis(f: &RandomFunctional, strat: &Stratification, rank: usize) -> Result<Vec<L0Scalar>> {
    ensure_same(&strat.space, f.space())?;
    let basis = strat
        .basis(rank)
        .ok_or_else(|| Error::InvalidArgument(format!("stratum {rank} is empty")))?;
    let dim = f.dim();
    if basis[0].dim() != dim {
        return Err(Error::ShapeMismatch {
            expected: basis[0].dim(),
            found: dim,
        });
    }
    let space = &strat.space;
    let zero = Complex64::new(0.0, 0.0);
    let mut coeffs = vec![vec![zero; space.len()]; rank];
    for a in strat.parts[rank].indices() {
        // riesz(Σ ηⱼ gⱼ) = Σ η̄ⱼ riesz(gⱼ): solve G c = riesz(f), η = c̄
        let mut g = vec![zero; dim * rank];
        for (j, b) in basis.iter().enumerate() {
            for (k, v) in b.riesz().at(a).iter().enumerate() {
                g[k * rank + j] = *v;
            }
        }
        let target = f.riesz().at(a);
        let sol = min_norm_solve(&g, dim, rank, target, 1e-14);
        let residual = euclidean_norm(&sol.residual);
        if residual > EXPANSION_TOLERANCE * euclidean_norm(target).max(1.0) {
            return Err(Error::Inconsistent { atom: a, residual });
        }
        for (j, c) in sol.x.iter().enumerate() {
            coeffs[j][a] = if space.field() == Field::Real {
                Complex64::new(c.re, 0.0)
            } else {
                c.conj()
            };
        }
    }
    Ok(coeffs
        .into_iter()
        .map(|v| L0Scalar::new(space, v).expect("coefficients have space shape"))
        .collect())
}
