//! Random instance generators shared by the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rnm_core::sampling;
use rnm_core::{AtomicSpace, Complex64, Field, L0Scalar, RNElement, RandomFunctional};

pub fn field<R: Rng>(rng: &mut R) -> Field {
    if rng.random_bool(0.5) {
        Field::Real
    } else {
        Field::Complex
    }
}

/// Per-atom Riesz vectors of `n` functionals spanning a space of dimension
/// `rank`: random combinations of `rank` random vectors.
pub fn rank_block<R: Rng>(rng: &mut R, n: usize, d: usize, rank: usize, field: Field) -> Vec<Vec<Complex64>> {
    let generators: Vec<Vec<Complex64>> = (0..rank).map(|_| sampling::vector(rng, d, field, 2.0)).collect();
    loop {
        let coeffs: Vec<Vec<Complex64>> = (0..n).map(|_| sampling::vector(rng, rank, field, 2.0)).collect();
        let rows: Vec<Vec<Complex64>> = coeffs
            .iter()
            .map(|c| (0..d).map(|k| c.iter().zip(&generators).map(|(a, g)| a * g[k]).sum()).collect())
            .collect();
        if rank == 0 || numeric_rank(&rows) == rank {
            return rows;
        }
    }
}

/// Rank by singular values, independent of the library's elimination.
pub fn numeric_rank(rows: &[Vec<Complex64>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-8 * max.max(1e-300)).count()
}

/// A family of `n` functionals with the given rank on each atom.
pub fn family_with_ranks<R: Rng>(rng: &mut R, space: &Arc<AtomicSpace>, d: usize, n: usize, ranks: &[usize]) -> Vec<RandomFunctional> {
    let blocks: Vec<Vec<Vec<Complex64>>> = ranks.iter().map(|&r| rank_block(rng, n, d, r, space.field())).collect();
    (0..n)
        .map(|i| {
            let per_atom = blocks.iter().map(|b| b[i].clone()).collect();
            RandomFunctional::new(RNElement::from_atoms(space, per_atom).unwrap())
        })
        .collect()
}

/// Ranks biased towards full rank, with some deficient atoms.
pub fn random_ranks<R: Rng>(rng: &mut R, atoms: usize, n: usize, d: usize) -> Vec<usize> {
    let full = n.min(d);
    (0..atoms)
        .map(|_| if rng.random_bool(0.6) { full } else { rng.random_range(0..=full) })
        .collect()
}

/// `ξᵢ = fᵢ(z)` on every atom.
pub fn targets_from(fs: &[RandomFunctional], z: &RNElement) -> Vec<L0Scalar> {
    fs.iter().map(|f| f.evaluate(z).unwrap()).collect()
}
