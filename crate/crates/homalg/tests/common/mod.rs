//! Shared test oracles, independent of the library's elimination path:
//! dense rational Gaussian elimination with its own pivot policy.

use homalg::linalg::{ChainComplex, SparseMat};
use homalg::scalar::Rat;
use num::traits::Zero;
use std::collections::BTreeMap;

/// Rank by dense rational elimination. Pivots take the *last* row with a
/// nonzero entry in the current column, unlike the sparse engine.
pub fn dense_rank(mat: &SparseMat) -> usize {
    let (rows, cols) = (mat.rows(), mat.cols());
    let mut m = vec![vec![Rat::zero(); cols]; rows];
    for (i, j, v) in mat.iter() {
        m[i][j] = v.clone();
    }
    let mut rank = 0usize;
    let mut used = vec![false; rows];
    for c in 0..cols {
        let Some(p) = (0..rows).rev().find(|&r| !used[r] && !m[r][c].is_zero()) else {
            continue;
        };
        used[p] = true;
        rank += 1;
        let inv = m[p][c].clone();
        for r in 0..rows {
            if r != p && !m[r][c].is_zero() {
                let f = &m[r][c] / &inv;
                for j in c..cols {
                    let sub = &f * &m[p][j];
                    m[r][j] -= sub;
                }
            }
        }
    }
    rank
}

/// Per-degree homology dimensions computed entirely from dense ranks.
pub fn dense_homology(c: &ChainComplex) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for d in c.degrees() {
        let rank_out = dense_rank(&c.diff(d));
        let rank_in = dense_rank(&c.diff(d - 1));
        out.insert(d, c.dim(d) - rank_out - rank_in);
    }
    out
}
