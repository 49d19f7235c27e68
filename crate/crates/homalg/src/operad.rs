//! The tree complex at each arity with its edge-splitting differential, the
//! dimension shift and sign twist, operadic insertion on formal chains of
//! trees, and the dictionary between trees and configuration-space strata.
//!
//! At arity s the complex places the trees with k internal edges in
//! cohomological degree 2 - s + k; the differential is the signed sum of all
//! single edge splittings. Orientations are determinant lines on internal
//! edges, stored canonically (edges sorted lexicographically by their
//! leaf-descendant sets) with signs folded into coefficients.

use crate::linalg::{ChainComplex, LinalgError, SparseMat};
use crate::scalar::{perm_sign, rat_int, sign_rat, sort_sign, Rat};
use crate::trees::{self, Tree, TreeError};
use num::traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// Hard cap on arity: numeric leaf labels stay single-digit so the canonical
/// label order agrees with the numeric one, and anything larger is far past
/// what exact elimination can handle anyway.
pub const MAX_ARITY: usize = 9;

#[derive(Debug, Error)]
pub enum OperadError {
    #[error("arity must lie in 2..={max}, got {got}", max = MAX_ARITY)]
    ArityOutOfRange { got: usize },
    #[error("ambient dimension must be >= 1, got {0}")]
    DimensionOutOfRange(i64),
    #[error("trees must share a leaf set")]
    LeafSetMismatch,
    #[error("chain terms must share leaf set and internal edge count")]
    MixedChain,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Leaf labels `"1"`, ..., `"s"`.
pub fn numeric_labels(s: usize) -> Vec<String> {
    (1..=s).map(|i| i.to_string()).collect()
}

/// Which shift formula to apply to the arity-s component in ambient
/// dimension n. The two appear side by side in the literature and disagree;
/// both are exposed rather than guessing an intent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftConvention {
    /// Shift by n(s-1): a generator of degree g moves to g - n(s-1).
    NTimesArityMinusOne,
    /// Shift by s(1-n): a generator of degree g moves to g - s(1-n).
    ArityTimesOneMinusN,
}

impl ShiftConvention {
    pub fn amount(self, s: usize, n: i64) -> i64 {
        match self {
            ShiftConvention::NTimesArityMinusOne => n * (s as i64 - 1),
            ShiftConvention::ArityTimesOneMinusN => s as i64 * (1 - n),
        }
    }
}

/// The arity-s tree complex together with its indexed basis.
#[derive(Debug, Clone)]
pub struct TreeComplex {
    arity: usize,
    /// basis[k] = trees with k internal edges, sorted canonically
    basis: Vec<Vec<Tree>>,
    index: Vec<BTreeMap<Tree, usize>>,
    complex: ChainComplex,
}

impl TreeComplex {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn basis(&self, k: usize) -> &[Tree] {
        &self.basis[k]
    }

    pub fn edge_counts(&self) -> std::ops::RangeInclusive<usize> {
        0..=(self.arity - 2)
    }

    pub fn degree_of_edges(&self, k: usize) -> i64 {
        2 - self.arity as i64 + k as i64
    }

    pub fn index_of(&self, t: &Tree) -> Option<(usize, usize)> {
        let k = t.internal_edge_count();
        self.index.get(k)?.get(t).map(|&i| (k, i))
    }

    /// The differential matrix out of the k-edge component.
    pub fn diff_at_edges(&self, k: usize) -> SparseMat {
        self.complex.diff(self.degree_of_edges(k))
    }

    /// Matrix of the symmetric-group action of `perm` (image form, acting on
    /// labels "1".."s") on the k-edge component, with determinant-line signs.
    pub fn action(&self, perm: &[usize], k: usize) -> SparseMat {
        assert_eq!(perm.len(), self.arity);
        let map: BTreeMap<String, String> = (0..self.arity)
            .map(|i| ((i + 1).to_string(), (perm[i] + 1).to_string()))
            .collect();
        let n = self.basis[k].len();
        let mut m = SparseMat::zero(n, n);
        for (j, t) in self.basis[k].iter().enumerate() {
            let (image, sign) = relabel_oriented(t, &map).expect("valid relabeling");
            let i = self.index[k][&image];
            m.set(i, j, sign_rat(sign));
        }
        m
    }

    /// Action matrix in the n-shifted component: the plain action twisted by
    /// the n-th power of the sign representation.
    pub fn shifted_action(&self, n: i64, perm: &[usize], k: usize) -> SparseMat {
        let twist = if n % 2 == 0 { 1 } else { perm_sign(perm) };
        let base = self.action(perm, k);
        if twist == 1 {
            base
        } else {
            SparseMat::from_entries(
                base.rows(),
                base.cols(),
                base.iter().map(|(i, j, v)| (i, j, -v.clone())),
            )
        }
    }
}

/// Relabel a tree through a bijection and compute the induced sign on its
/// determinant line: the canonical edge order of the source maps to a
/// presented order on the image, re-expressed canonically.
pub fn relabel_oriented(
    t: &Tree,
    map: &BTreeMap<String, String>,
) -> Result<(Tree, i32), TreeError> {
    let image = t.relabel(map)?;
    let presented: Vec<Vec<String>> = t
        .internal_edges()
        .iter()
        .map(|e| {
            let mut c: Vec<String> = e.iter().map(|l| map[l].clone()).collect();
            c.sort();
            c
        })
        .collect();
    let sign = sort_sign(&presented);
    Ok((image, sign))
}

/// Build the arity-s tree complex. Degrees run from 2-s (the star) to 0
/// (binary trees); d-squared-zero is verified on construction.
pub fn tree_complex(s: usize) -> Result<TreeComplex, OperadError> {
    tree_complex_impl(s, true)
}

/// As `tree_complex` but with the nilpotency check deferred; used where the
/// check itself is the thing under scrutiny.
pub fn tree_complex_unverified(s: usize) -> Result<TreeComplex, OperadError> {
    tree_complex_impl(s, false)
}

fn tree_complex_impl(s: usize, verify: bool) -> Result<TreeComplex, OperadError> {
    if !(2..=MAX_ARITY).contains(&s) {
        return Err(OperadError::ArityOutOfRange { got: s });
    }
    let labels = numeric_labels(s);
    let mut basis: Vec<Vec<Tree>> = Vec::new();
    for k in 0..=(s - 2) {
        let mut ts = trees::enumerate(&labels, k)?;
        ts.sort();
        basis.push(ts);
    }
    let index: Vec<BTreeMap<Tree, usize>> = basis
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
        .collect();
    let mut diffs = Vec::new();
    for k in 0..s - 2 {
        let mut m = SparseMat::zero(basis[k + 1].len(), basis[k].len());
        for (j, t) in basis[k].iter().enumerate() {
            for (split, sign) in t.splittings() {
                let i = index[k + 1][&split];
                m.add(i, j, sign_rat(sign));
            }
        }
        diffs.push(m);
    }
    let spaces: Vec<Vec<String>> = basis
        .iter()
        .map(|ts| ts.iter().map(|t| t.to_string()).collect())
        .collect();
    let complex = if verify {
        ChainComplex::new(2 - s as i64, spaces, diffs)?
    } else {
        ChainComplex::new_deferred(2 - s as i64, spaces, diffs)?
    };
    Ok(TreeComplex {
        arity: s,
        basis,
        index,
        complex,
    })
}

/// Homology of the arity-s tree complex, by degree.
pub fn tree_complex_homology(s: usize) -> Result<BTreeMap<i64, usize>, OperadError> {
    let lc = tree_complex(s)?;
    let h = lc.complex.homology()?;
    Ok(h.into_iter().map(|(d, s)| (d, s.dim)).collect())
}

/// The arity-s component shifted for ambient dimension n: same differential,
/// degrees moved down by the shift amount. The action twist lives in
/// `TreeComplex::shifted_action`.
pub fn shifted_tree_complex(
    s: usize,
    n: i64,
    convention: ShiftConvention,
) -> Result<(TreeComplex, ChainComplex), OperadError> {
    if n < 1 {
        return Err(OperadError::DimensionOutOfRange(n));
    }
    let lc = tree_complex(s)?;
    let shift = convention.amount(s, n);
    let spaces: Vec<Vec<String>> = lc
        .complex
        .degrees()
        .map(|d| lc.complex.basis(d).unwrap().to_vec())
        .collect();
    let diffs: Vec<SparseMat> = lc
        .complex
        .degrees()
        .take(spaces.len().saturating_sub(1))
        .map(|d| lc.complex.diff(d))
        .collect();
    let shifted = ChainComplex::new(lc.complex.min_degree() - shift, spaces, diffs)?;
    Ok((lc, shifted))
}

/// A formal rational combination of trees with a common leaf set and edge
/// count, each stored with canonical orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeChain {
    leaves: Vec<String>,
    edge_count: usize,
    terms: BTreeMap<Tree, Rat>,
}

impl TreeChain {
    pub fn from_tree(t: Tree) -> TreeChain {
        TreeChain {
            leaves: t.leaves().to_vec(),
            edge_count: t.internal_edge_count(),
            terms: BTreeMap::from([(t, rat_int(1))]),
        }
    }

    pub fn zero(leaves: Vec<String>, edge_count: usize) -> TreeChain {
        TreeChain {
            leaves,
            edge_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(leaves: Vec<String>, edge_count: usize, it: I) -> Result<TreeChain, OperadError>
    where
        I: IntoIterator<Item = (Tree, Rat)>,
    {
        let mut c = TreeChain::zero(leaves, edge_count);
        for (t, r) in it {
            c.add_term(t, r)?;
        }
        Ok(c)
    }

    pub fn add_term(&mut self, t: Tree, r: Rat) -> Result<(), OperadError> {
        if t.leaves() != self.leaves.as_slice() || t.internal_edge_count() != self.edge_count {
            return Err(OperadError::MixedChain);
        }
        if r.is_zero() {
            return Ok(());
        }
        let cur = self.terms.entry(t).or_insert_with(Rat::zero);
        *cur += r;
        if cur.is_zero() {
            let dead: Vec<Tree> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(t, _)| t.clone())
                .collect();
            for t in dead {
                self.terms.remove(&t);
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<Tree, Rat> {
        &self.terms
    }

    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TreeChain) -> Result<TreeChain, OperadError> {
        if self.leaves != other.leaves || self.edge_count != other.edge_count {
            return Err(OperadError::MixedChain);
        }
        let mut out = self.clone();
        for (t, r) in &other.terms {
            out.add_term(t.clone(), r.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rat) -> TreeChain {
        if r.is_zero() {
            return TreeChain::zero(self.leaves.clone(), self.edge_count);
        }
        TreeChain {
            leaves: self.leaves.clone(),
            edge_count: self.edge_count,
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * r)).collect(),
        }
    }
}

/// The splitting differential extended linearly to chains.
pub fn chain_differential(c: &TreeChain) -> TreeChain {
    let mut out = TreeChain::zero(c.leaves.clone(), c.edge_count + 1);
    for (t, r) in &c.terms {
        for (split, sign) in t.splittings() {
            out.add_term(split, r * sign_rat(sign)).expect("splitting keeps leaf set");
        }
    }
    out
}

/// Operadic insertion of `c2` at leaf `at` of `c1`, extended bilinearly with
/// determinant-line signs: the composite is oriented by the (transformed)
/// edges of the left factor in its canonical order, then the right factor's
/// edges, then the grafting edge, re-expressed canonically.
///
/// Against the splitting differential this satisfies the derivation rule
/// d(x o y) = (dx) o y + (-1)^e(x) x o (dy), where e(x) is the internal edge
/// count of the left factor.
pub fn insertion(c1: &TreeChain, at: &str, c2: &TreeChain) -> Result<TreeChain, OperadError> {
    if c1.leaves.binary_search(&at.to_string()).is_err() {
        return Err(OperadError::Tree(TreeError::UnknownLeaf(at.to_string())));
    }
    let mut leaves: Vec<String> = c1
        .leaves
        .iter()
        .filter(|l| l.as_str() != at)
        .cloned()
        .chain(c2.leaves.iter().cloned())
        .collect();
    leaves.sort();
    let graft_extra = usize::from(c1.leaves.len() > 1 && c2.leaves.len() > 1);
    let mut out = TreeChain::zero(leaves, c1.edge_count + c2.edge_count + graft_extra);
    for (t1, r1) in &c1.terms {
        for (t2, r2) in &c2.terms {
            let composite = t1.compose(at, t2)?;
            let mut presented: Vec<Vec<String>> = t1
                .internal_edges()
                .iter()
                .map(|e| {
                    if e.binary_search(&at.to_string()).is_ok() {
                        let mut c: Vec<String> = e
                            .iter()
                            .filter(|l| l.as_str() != at)
                            .cloned()
                            .chain(t2.leaves().iter().cloned())
                            .collect();
                        c.sort();
                        c
                    } else {
                        (*e).clone()
                    }
                })
                .collect();
            presented.extend(t2.internal_edges().iter().map(|e| (*e).clone()));
            if !t1.is_degenerate() && !t2.is_degenerate() {
                presented.push(t2.leaves().to_vec());
            }
            debug_assert_eq!(presented.len(), composite.internal_edge_count());
            let sign = sort_sign(&presented);
            out.add_term(composite, r1 * r2 * sign_rat(sign))?;
        }
    }
    Ok(out)
}

/// Codimension of the stratum indexed by a non-degenerate tree: its number
/// of internal edges.
pub fn stratum_codim(t: &Tree) -> Result<usize, OperadError> {
    if t.is_degenerate() {
        return Err(OperadError::Tree(TreeError::Degenerate));
    }
    Ok(t.internal_edge_count())
}

/// Dimension of the stratum indexed by a non-degenerate tree in ambient
/// dimension n: each internal vertex of arity a contributes na - n - 1
/// (a points in n-space modulo translation and scaling).
pub fn stratum_dim(t: &Tree, n: i64) -> Result<i64, OperadError> {
    if n < 1 {
        return Err(OperadError::DimensionOutOfRange(n));
    }
    if t.is_degenerate() {
        return Err(OperadError::Tree(TreeError::Degenerate));
    }
    Ok(t.clusters()
        .iter()
        .map(|c| n * t.arity(c) as i64 - n - 1)
        .sum())
}

/// Two strata on the same leaf set are incident in codimension one exactly
/// when the deeper tree is a single edge splitting of the shallower one.
pub fn incidence(t1: &Tree, t2: &Tree) -> Result<bool, OperadError> {
    if t1.leaves() != t2.leaves() {
        return Err(OperadError::LeafSetMismatch);
    }
    if t1.is_degenerate() {
        return Err(OperadError::Tree(TreeError::Degenerate));
    }
    if t2.internal_edge_count() != t1.internal_edge_count() + 1 {
        return Ok(false);
    }
    Ok(t1.clusters().iter().all(|c| t2.clusters().contains(c)))
}
