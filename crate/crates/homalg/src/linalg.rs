//! Exact sparse linear algebra over the rationals.
//!
//! Ranks are computed by fraction-free (Bareiss) integer elimination after
//! clearing denominators row by row; no floating point is involved anywhere.
//! Chain complexes are stored cohomologically: every differential raises the
//! degree by one. Homological complexes are stored with negated degrees.

use crate::scalar::{rat_str, Rat};
use num::bigint::BigInt;
use num::traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("differential does not square to zero at degree {degree}: d\u{b2}({basis}) = {image}")]
    SquareNonzero {
        degree: i64,
        basis: String,
        image: String,
    },
}

/// Pivot-row selection used by the elimination. Any strategy yields the same
/// rank; two are kept so tests can confirm that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotStrategy {
    FirstRow,
    SparsestRow,
}

/// A sparse matrix over the rationals. Rows index the target basis, columns
/// the source basis; no explicit zero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_entries<I>(rows: usize, cols: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rat)>,
    {
        let mut m = SparseMat::zero(rows, cols);
        for (i, j, v) in it {
            m.add(i, j, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        assert!(i < self.rows && j < self.cols, "entry out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: Rat) {
        assert!(i < self.rows && j < self.cols, "entry out of bounds");
        if v.is_zero() {
            return;
        }
        let cur = self.entries.entry((i, j)).or_insert_with(Rat::zero);
        *cur += v;
        if cur.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(
            self.cols, other.rows,
            "product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut by_col: Vec<Vec<(usize, &Rat)>> = vec![Vec::new(); self.cols];
        for (i, k, v) in self.iter() {
            by_col[k].push((i, v));
        }
        let mut out = SparseMat::zero(self.rows, other.cols);
        for (k, j, bv) in other.iter() {
            for &(i, av) in &by_col[k] {
                out.add(i, j, av * bv);
            }
        }
        out
    }

    /// Apply to a sparse column vector given as index -> coefficient.
    pub fn apply(&self, v: &BTreeMap<usize, Rat>) -> BTreeMap<usize, Rat> {
        let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, j, a) in self.iter() {
            if let Some(x) = v.get(&j) {
                let cur = out.entry(i).or_insert_with(Rat::zero);
                *cur += a * x;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    pub fn column(&self, j: usize) -> BTreeMap<usize, Rat> {
        self.entries
            .iter()
            .filter(|(&(_, c), _)| c == j)
            .map(|(&(r, _), v)| (r, v.clone()))
            .collect()
    }

    /// Permute rows and columns: entry (i, j) moves to (row_perm[i], col_perm[j]).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMat {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        SparseMat::from_entries(
            self.rows,
            self.cols,
            self.iter().map(|(i, j, v)| (row_perm[i], col_perm[j], v.clone())),
        )
    }

    /// Exact rank over the rationals, default pivot strategy.
    pub fn rank(&self) -> usize {
        self.rank_with(PivotStrategy::FirstRow)
    }

    /// Exact rank with an explicit pivot strategy (result is strategy-independent).
    pub fn rank_with(&self, strategy: PivotStrategy) -> usize {
        // Clear denominators row by row; rank is unchanged.
        let mut irows: Vec<BTreeMap<usize, BigInt>> = Vec::new();
        let mut grouped: BTreeMap<usize, Vec<(usize, &Rat)>> = BTreeMap::new();
        for (i, j, v) in self.iter() {
            grouped.entry(i).or_default().push((j, v));
        }
        for (_, row) in grouped {
            let mut lcm = BigInt::one();
            for (_, v) in &row {
                lcm = num::integer::lcm(lcm, v.denom().clone());
            }
            let mut irow = BTreeMap::new();
            for (j, v) in row {
                irow.insert(j, v.numer() * (&lcm / v.denom()));
            }
            irows.push(irow);
        }
        bareiss_rank(irows, self.cols, strategy)
    }

    /// A basis of the kernel, as dense rational coordinate vectors in the
    /// source basis. Deterministic: standard reduced row echelon form with
    /// leftmost pivots, free columns in ascending order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m: Vec<Vec<Rat>> = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (i, j, v) in self.iter() {
            m[i][j] = v.clone();
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].clone();
            for x in m[r].iter_mut() {
                *x /= inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..self.cols {
                        let sub = &f * &m[r][j];
                        m[i][j] -= sub;
                    }
                }
            }
            pivots.push((r, c));
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for &(pr, pc) in &pivots {
                v[pc] = -m[pr][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Fraction-free elimination on integer rows: each step eliminates with the
/// chosen pivot and divides by the previous pivot value, which is exact by
/// the minor identity. Returns the rank.
fn bareiss_rank(mut rows: Vec<BTreeMap<usize, BigInt>>, cols: usize, strategy: PivotStrategy) -> usize {
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut active: Vec<usize> = (0..rows.len()).collect();
    for col in 0..cols {
        let candidates: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&r| rows[r].contains_key(&col))
            .collect();
        let Some(&pivot_row) = (match strategy {
            PivotStrategy::FirstRow => candidates.first(),
            PivotStrategy::SparsestRow => candidates.iter().min_by_key(|&&r| (rows[r].len(), r)),
        }) else {
            continue;
        };
        rank += 1;
        let prow = rows[pivot_row].clone();
        let pv = prow[&col].clone();
        active.retain(|&r| r != pivot_row);
        let mut still = Vec::with_capacity(active.len());
        for &r in &active {
            let rv = rows[r].get(&col).cloned();
            let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
            match rv {
                None => {
                    for (&j, a) in &rows[r] {
                        out.insert(j, exact_div(a * &pv, &prev));
                    }
                }
                Some(rv) => {
                    let mut keys: Vec<usize> = rows[r].keys().copied().collect();
                    for &j in prow.keys() {
                        if !rows[r].contains_key(&j) {
                            keys.push(j);
                        }
                    }
                    for j in keys {
                        if j == col {
                            continue;
                        }
                        let a = rows[r].get(&j).cloned().unwrap_or_else(BigInt::zero);
                        let b = prow.get(&j).cloned().unwrap_or_else(BigInt::zero);
                        let num = &a * &pv - &rv * &b;
                        if !num.is_zero() {
                            out.insert(j, exact_div(num, &prev));
                        }
                    }
                }
            }
            rows[r] = out;
            if !rows[r].is_empty() {
                still.push(r);
            }
        }
        active = still;
        prev = pv;
        if active.is_empty() {
            break;
        }
    }
    rank
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num::integer::div_rem(num, den.clone());
    debug_assert!(r.is_zero(), "fraction-free division left a remainder");
    q
}

/// Result of a d\u{b2} = 0 check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareZero {
    Pass,
    Witness {
        degree: i64,
        basis: String,
        image: String,
    },
}

impl SquareZero {
    pub fn is_pass(&self) -> bool {
        matches!(self, SquareZero::Pass)
    }
}

/// Per-degree homology dimension, flagged when an adjacent differential lies
/// outside the stored range so the value may be a truncation artifact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomologySummary {
    pub dim: usize,
    pub flagged: bool,
}

/// A bounded cochain complex of based rational vector spaces.
///
/// `spaces[i]` is the basis of degree `min_degree + i`; `diffs[i]` maps degree
/// `min_degree + i` to the next degree. Truncation flags record whether the
/// complex genuinely continues past the stored range.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    min_degree: i64,
    spaces: Vec<Vec<String>>,
    diffs: Vec<SparseMat>,
    truncated_below: bool,
    truncated_above: bool,
    verified: bool,
}

impl ChainComplex {
    pub fn empty() -> Self {
        ChainComplex {
            min_degree: 0,
            spaces: Vec::new(),
            diffs: Vec::new(),
            truncated_below: false,
            truncated_above: false,
            verified: true,
        }
    }

    /// Build and verify d\u{b2} = 0.
    pub fn new(
        min_degree: i64,
        spaces: Vec<Vec<String>>,
        diffs: Vec<SparseMat>,
    ) -> Result<Self, LinalgError> {
        let mut c = Self::new_deferred(min_degree, spaces, diffs)?;
        match c.verify_square_zero() {
            SquareZero::Pass => {
                c.verified = true;
                Ok(c)
            }
            SquareZero::Witness { degree, basis, image } => {
                Err(LinalgError::SquareNonzero { degree, basis, image })
            }
        }
    }

    /// Build with the d\u{b2} = 0 check deferred to the first use.
    pub fn new_deferred(
        min_degree: i64,
        spaces: Vec<Vec<String>>,
        diffs: Vec<SparseMat>,
    ) -> Result<Self, LinalgError> {
        if !spaces.is_empty() && diffs.len() + 1 != spaces.len() {
            return Err(LinalgError::Shape(format!(
                "{} spaces need {} differentials, got {}",
                spaces.len(),
                spaces.len() - 1,
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.cols() != spaces[i].len() || d.rows() != spaces[i + 1].len() {
                return Err(LinalgError::Shape(format!(
                    "differential at degree {} is {}x{}, expected {}x{}",
                    min_degree + i as i64,
                    d.rows(),
                    d.cols(),
                    spaces[i + 1].len(),
                    spaces[i].len()
                )));
            }
        }
        Ok(ChainComplex {
            min_degree,
            spaces,
            diffs,
            truncated_below: false,
            truncated_above: false,
            verified: false,
        })
    }

    pub fn with_truncation(mut self, below: bool, above: bool) -> Self {
        self.truncated_below = below;
        self.truncated_above = above;
        self
    }

    pub fn truncated_below(&self) -> bool {
        self.truncated_below
    }

    pub fn truncated_above(&self) -> bool {
        self.truncated_above
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.spaces.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.spaces.len()).map(move |i| self.min_degree + i as i64)
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis(degree).map(|b| b.len()).unwrap_or(0)
    }

    pub fn basis(&self, degree: i64) -> Option<&[String]> {
        let idx = degree.checked_sub(self.min_degree)?;
        if idx < 0 {
            return None;
        }
        self.spaces.get(idx as usize).map(|v| v.as_slice())
    }

    /// The differential out of `degree`; a shape-consistent zero map when
    /// the degree lies outside the stored differentials.
    pub fn diff(&self, degree: i64) -> SparseMat {
        let idx = degree - self.min_degree;
        if idx >= 0 && (idx as usize) < self.diffs.len() {
            self.diffs[idx as usize].clone()
        } else {
            SparseMat::zero(self.dim(degree + 1), self.dim(degree))
        }
    }

    pub fn diff_ref(&self, degree: i64) -> Option<&SparseMat> {
        let idx = degree - self.min_degree;
        if idx < 0 {
            return None;
        }
        self.diffs.get(idx as usize)
    }

    /// Check d\u{b2} = 0 on the stored range; on failure report the first
    /// degree and basis vector (in deterministic order) with nonzero image.
    pub fn verify_square_zero(&self) -> SquareZero {
        for i in 0..self.diffs.len().saturating_sub(1) {
            let prod = self.diffs[i + 1].mul(&self.diffs[i]);
            if prod.is_zero() {
                continue;
            }
            let degree = self.min_degree + i as i64;
            for j in 0..prod.cols() {
                let col = prod.column(j);
                if col.is_empty() {
                    continue;
                }
                let image = format_vector(&col, &self.spaces[i + 2]);
                return SquareZero::Witness {
                    degree,
                    basis: self.spaces[i][j].clone(),
                    image,
                };
            }
        }
        SquareZero::Pass
    }

    /// Homology dimension in every stored degree. Requires d\u{b2} = 0 (checked
    /// here unless already verified at construction); degrees at a truncated
    /// end of the stored range are flagged.
    pub fn homology(&self) -> Result<BTreeMap<i64, HomologySummary>, LinalgError> {
        if !self.verified {
            if let SquareZero::Witness { degree, basis, image } = self.verify_square_zero() {
                return Err(LinalgError::SquareNonzero { degree, basis, image });
            }
        }
        let ranks: Vec<usize> = self.diffs.par_iter().map(|d| d.rank()).collect();
        let mut out = BTreeMap::new();
        for (i, space) in self.spaces.iter().enumerate() {
            let degree = self.min_degree + i as i64;
            let rank_out = if i < self.diffs.len() { ranks[i] } else { 0 };
            let rank_in = if i > 0 { ranks[i - 1] } else { 0 };
            let dim = space.len() - rank_out - rank_in;
            let flagged = (i == 0 && self.truncated_below)
                || (i + 1 == self.spaces.len() && self.truncated_above);
            out.insert(degree, HomologySummary { dim, flagged });
        }
        Ok(out)
    }

    /// Total dimension across unflagged degrees plus the flagged list.
    pub fn total_homology(&self) -> Result<(usize, Vec<i64>), LinalgError> {
        let h = self.homology()?;
        let total = h.values().filter(|s| !s.flagged).map(|s| s.dim).sum();
        let flagged = h
            .iter()
            .filter(|(_, s)| s.flagged)
            .map(|(&d, _)| d)
            .collect();
        Ok((total, flagged))
    }
}

/// Invert a dense rational matrix by Gauss-Jordan elimination; `None` when
/// singular.
pub fn invert_dense(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] /= piv.clone();
            inv[c][j] /= piv.clone();
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    let (s, t) = (&f * &a[c][j], &f * &inv[c][j]);
                    a[r][j] -= s;
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Format a sparse vector as an exact linear combination of basis labels.
pub fn format_vector(v: &BTreeMap<usize, Rat>, labels: &[String]) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (&i, c) in v {
        let label = labels.get(i).map(|s| s.as_str()).unwrap_or("?");
        if c.is_one() {
            parts.push(label.to_string());
        } else if (-c.clone()).is_one() {
            parts.push(format!("-{}", label));
        } else {
            parts.push(format!("{}\u{b7}{}", rat_str(c), label));
        }
    }
    parts.join(" + ")
}
