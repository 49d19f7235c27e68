//! L-infinity structures and their Chevalley-Eilenberg chain complexes.
//!
//! A structure is given on a finite graded space by a differential d and
//! higher brackets l_i of cohomological degree 2-i, graded-antisymmetric,
//! stored only on sorted basis tuples. Internally everything is transported
//! to the suspension: generator x of degree g becomes a generator of degree
//! g-1 with flipped parity, and each l_i becomes a graded-symmetric
//! operation of degree +1 there. The Chevalley-Eilenberg complex is the free
//! graded-commutative algebra on the suspended generators with the induced
//! coderivation; its nilpotency on words is exactly the set of L-infinity
//! relations, so validation and homology run through one sign source.
//!
//! Homological word length k is stored at cohomological degree -k when the
//! underlying space sits in degree 0, per the global convention.

use crate::algebra::Algebra;
use crate::graded::{BasisConstraint, GradedError, GradedSpace, Generator, Monomial};
use crate::linalg::{ChainComplex, LinalgError, SparseMat, SquareZero};
use crate::scalar::{rat_str, Rat};
use num::traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinftyError {
    #[error("bracket entry is not degree-homogeneous: {0}")]
    Degree(String),
    #[error("bad bracket tuple: {0}")]
    Tuple(String),
    #[error("Jacobi identity fails on ({a}, {b}, {c}): defect {defect}")]
    Jacobi {
        a: String,
        b: String,
        c: String,
        defect: String,
    },
    #[error("Leibniz rule fails on ({a}, {b}): defect {defect}")]
    Leibniz { a: String, b: String, defect: String },
    #[error("differential does not square to zero on {gen}: image {image}")]
    DifferentialSquare { gen: String, image: String },
    #[error("cutoff {got} too small: need at least {need}")]
    CutoffTooSmall { need: usize, got: usize },
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One bracket operation, as entries (sorted input tuple, output index,
/// coefficient) on basis elements.
#[derive(Debug, Clone)]
pub struct BracketSpec {
    pub arity: usize,
    pub entries: Vec<(Vec<usize>, usize, Rat)>,
}

type Vector = BTreeMap<usize, Rat>;

/// An L-infinity structure on a finite graded space.
#[derive(Debug, Clone)]
pub struct LInfty {
    space: GradedSpace,
    /// graded-symmetric suspended operations: arity -> sorted tuple -> image
    ops: BTreeMap<usize, BTreeMap<Vec<usize>, Vector>>,
}

impl LInfty {
    /// Assemble from bracket data without checking the L-infinity relations
    /// (use `check` or `from_dgla` for that). Degree homogeneity and tuple
    /// normalization are still enforced.
    pub fn from_brackets(
        space: GradedSpace,
        differential: &[(usize, usize, Rat)],
        brackets: &[BracketSpec],
    ) -> Result<LInfty, LinftyError> {
        let mut ops: BTreeMap<usize, BTreeMap<Vec<usize>, Vector>> = BTreeMap::new();
        let dim = space.len();
        for &(a, b, ref c) in differential {
            if a >= dim || b >= dim {
                return Err(LinftyError::Tuple(format!(
                    "differential entry ({}, {}) out of range",
                    a, b
                )));
            }
            if c.is_zero() {
                continue;
            }
            if space.degree(b) != space.degree(a) + 1 {
                return Err(LinftyError::Degree(format!(
                    "d({}) hits {} of degree {}, expected {}",
                    space.generators()[a].name,
                    space.generators()[b].name,
                    space.degree(b),
                    space.degree(a) + 1
                )));
            }
            let cur = ops
                .entry(1)
                .or_default()
                .entry(vec![a])
                .or_default()
                .entry(b)
                .or_insert_with(Rat::zero);
            *cur += c.clone();
        }
        for spec in brackets {
            let i = spec.arity;
            if i < 2 {
                return Err(LinftyError::Tuple(format!(
                    "bracket arity must be >= 2, got {}",
                    i
                )));
            }
            for (tuple, out, c) in &spec.entries {
                if c.is_zero() {
                    continue;
                }
                if tuple.len() != i {
                    return Err(LinftyError::Tuple(format!(
                        "tuple {:?} has length {}, bracket arity is {}",
                        tuple,
                        tuple.len(),
                        i
                    )));
                }
                if tuple.windows(2).any(|w| w[0] > w[1]) {
                    return Err(LinftyError::Tuple(format!(
                        "tuple {:?} is not sorted ascending",
                        tuple
                    )));
                }
                for w in tuple.windows(2) {
                    if w[0] == w[1] && !space.is_odd(w[0]) {
                        return Err(LinftyError::Tuple(format!(
                            "tuple {:?} repeats the even generator {}; antisymmetry forces 0",
                            tuple,
                            space.generators()[w[0]].name
                        )));
                    }
                }
                if tuple.iter().any(|&t| t >= dim) || *out >= dim {
                    return Err(LinftyError::Tuple(format!("entry {:?} out of range", tuple)));
                }
                let in_degree: i64 = tuple.iter().map(|&t| space.degree(t)).sum();
                let expect = in_degree + 2 - i as i64;
                if space.degree(*out) != expect {
                    return Err(LinftyError::Degree(format!(
                        "l_{} on {:?} hits {} of degree {}, expected {}",
                        i,
                        tuple,
                        space.generators()[*out].name,
                        space.degree(*out),
                        expect
                    )));
                }
                // suspension: l_i on the tuple becomes the symmetric operation
                // with the standard sign (-1)^{sum_j (i-j)|x_j|}
                let mut exp = 0i64;
                for (j, &t) in tuple.iter().enumerate() {
                    exp += (i as i64 - 1 - j as i64) * space.degree(t);
                }
                let sign = if exp.rem_euclid(2) == 0 { 1 } else { -1 };
                let mut v = c.clone();
                if sign < 0 {
                    v = -v;
                }
                let cur = ops
                    .entry(i)
                    .or_default()
                    .entry(tuple.clone())
                    .or_default()
                    .entry(*out)
                    .or_insert_with(Rat::zero);
                *cur += v;
            }
        }
        for table in ops.values_mut() {
            for v in table.values_mut() {
                v.retain(|_, c| !c.is_zero());
            }
            table.retain(|_, v| !v.is_empty());
        }
        ops.retain(|_, t| !t.is_empty());
        Ok(LInfty { space, ops })
    }

    /// A differential graded Lie algebra as an L-infinity structure with
    /// l_2 the bracket and no higher operations. The graded Jacobi identity,
    /// the Leibniz rule against d, and d^2 = 0 are all verified directly on
    /// basis elements; the first failure is reported as a witness.
    pub fn from_dgla(
        space: GradedSpace,
        differential: &[(usize, usize, Rat)],
        bracket: &[(Vec<usize>, usize, Rat)],
    ) -> Result<LInfty, LinftyError> {
        let g = LInfty::from_brackets(
            space,
            differential,
            &[BracketSpec {
                arity: 2,
                entries: bracket.to_vec(),
            }],
        )?;
        if g.ops.keys().any(|&i| i > 2) {
            return Err(LinftyError::Tuple("a DGLA has only l_2".to_string()));
        }
        g.validate_dgla()?;
        Ok(g)
    }

    /// The commutator L-infinity structure of an associative algebra:
    /// everything in degree 0, d = 0, l_2(a, b) = ab - ba.
    pub fn from_associative(alg: &Algebra) -> Result<LInfty, LinftyError> {
        let gens: Vec<Generator> = alg
            .names()
            .iter()
            .map(|n| Generator::new(n, 0))
            .collect();
        let space = GradedSpace::new(gens)?;
        let mut bracket = Vec::new();
        for a in 0..alg.dim() {
            for b in a + 1..alg.dim() {
                for (k, c) in alg.commutator(a, b) {
                    bracket.push((vec![a, b], k, c));
                }
            }
        }
        LInfty::from_dgla(space, &[], &bracket)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Largest arity with a nonzero operation (0 when abelian with d = 0).
    pub fn max_arity(&self) -> usize {
        self.ops.keys().copied().max().unwrap_or(0)
    }

    /// Evaluate l_2 on an arbitrary (not necessarily sorted) pair, through
    /// graded antisymmetry. Returns coordinates in the underlying basis.
    pub fn bracket2(&self, a: usize, b: usize) -> Vector {
        let (pa, pb) = (self.space.degree(a), self.space.degree(b));
        let (tuple, flip) = if a <= b {
            (vec![a, b], false)
        } else {
            (vec![b, a], true)
        };
        let sym = self
            .ops
            .get(&2)
            .and_then(|t| t.get(&tuple))
            .cloned()
            .unwrap_or_default();
        // undo the suspension sign for the sorted tuple (first slot's degree)
        let stored_sign = if self.space.degree(tuple[0]).rem_euclid(2) == 0 {
            1
        } else {
            -1
        };
        let mut out: Vector = sym
            .into_iter()
            .map(|(k, c)| (k, if stored_sign < 0 { -c } else { c }))
            .collect();
        if flip {
            // l(b, a) was stored; l(a, b) = -(-1)^{|a||b|} l(b, a)
            let sign = if (pa * pb).rem_euclid(2) == 0 { -1 } else { 1 };
            if sign < 0 {
                for c in out.values_mut() {
                    *c = -c.clone();
                }
            }
        }
        out
    }

    fn apply_d(&self, v: &Vector) -> Vector {
        let mut out: Vector = BTreeMap::new();
        if let Some(t) = self.ops.get(&1) {
            for (&i, c) in v {
                if let Some(img) = t.get(&vec![i]) {
                    for (&k, x) in img {
                        let cur = out.entry(k).or_insert_with(Rat::zero);
                        *cur += c * x;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn bracket2_vec(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out: Vector = BTreeMap::new();
        for (&i, ci) in a {
            for (&j, cj) in b {
                for (k, c) in self.bracket2(i, j) {
                    let cur = out.entry(k).or_insert_with(Rat::zero);
                    *cur += ci * cj * &c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn validate_dgla(&self) -> Result<(), LinftyError> {
        let names: Vec<&str> = self
            .space
            .generators()
            .iter()
            .map(|g| g.name.as_str())
            .collect();
        let dim = self.space.len();
        let single = |i: usize| -> Vector { BTreeMap::from([(i, Rat::from_integer(1.into()))]) };
        // d^2 = 0
        for i in 0..dim {
            let dd = self.apply_d(&self.apply_d(&single(i)));
            if !dd.is_empty() {
                return Err(LinftyError::DifferentialSquare {
                    gen: names[i].to_string(),
                    image: self.render(&dd),
                });
            }
        }
        // Leibniz: d[a,b] = [da, b] + (-1)^{|a|} [a, db]
        for a in 0..dim {
            for b in 0..dim {
                let lhs = self.apply_d(&self.bracket2(a, b));
                let mut rhs = self.bracket2_vec(&self.apply_d(&single(a)), &single(b));
                let sign = if self.space.degree(a).rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                };
                for (k, c) in self.bracket2_vec(&single(a), &self.apply_d(&single(b))) {
                    let cur = rhs.entry(k).or_insert_with(Rat::zero);
                    *cur += if sign < 0 { -c } else { c };
                }
                rhs.retain(|_, c| !c.is_zero());
                let defect = crate::algebra::sub(&lhs, &rhs);
                if !defect.is_empty() {
                    return Err(LinftyError::Leibniz {
                        a: names[a].to_string(),
                        b: names[b].to_string(),
                        defect: self.render(&defect),
                    });
                }
            }
        }
        // graded Jacobi in adjoint form: [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let lhs = self.bracket2_vec(&single(a), &self.bracket2(b, c));
                    let mut rhs = self.bracket2_vec(&self.bracket2(a, b), &single(c));
                    let sign = if (self.space.degree(a) * self.space.degree(b)).rem_euclid(2) == 0
                    {
                        1
                    } else {
                        -1
                    };
                    for (k, v) in self.bracket2_vec(&single(b), &self.bracket2(a, c)) {
                        let cur = rhs.entry(k).or_insert_with(Rat::zero);
                        *cur += if sign < 0 { -v } else { v };
                    }
                    rhs.retain(|_, v| !v.is_zero());
                    let defect = crate::algebra::sub(&lhs, &rhs);
                    if !defect.is_empty() {
                        return Err(LinftyError::Jacobi {
                            a: names[a].to_string(),
                            b: names[b].to_string(),
                            c: names[c].to_string(),
                            defect: self.render(&defect),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn render(&self, v: &Vector) -> String {
        if v.is_empty() {
            return "0".to_string();
        }
        v.iter()
            .map(|(&i, c)| format!("{}\u{b7}{}", rat_str(c), self.space.generators()[i].name))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The suspended generator space: same names, degrees lowered by one.
    pub fn suspended_space(&self) -> GradedSpace {
        GradedSpace::new(
            self.space
                .generators()
                .iter()
                .map(|g| Generator::new(&g.name, g.degree - 1))
                .collect(),
        )
        .expect("names already unique")
    }

    /// The Chevalley-Eilenberg complex on words of length at most `cutoff`.
    ///
    /// Word length can only stay or drop under the total differential, so the
    /// cutoff is a genuine subcomplex; homology in degrees whose words (or
    /// whose predecessors' words) are not all captured under the cutoff is
    /// flagged.
    pub fn ce_complex(&self, cutoff: usize) -> Result<CeComplex, LinftyError> {
        if cutoff < 1 {
            return Err(LinftyError::CutoffTooSmall { need: 1, got: cutoff });
        }
        let v_space = self.suspended_space();
        let basis = v_space.symmetric_basis(&BasisConstraint::WordLimit(cutoff))?;
        let lo = *basis.keys().next().expect("the empty word always exists");
        let hi = *basis.keys().last().unwrap();
        let degrees: Vec<i64> = (lo..=hi).collect();
        let empty: Vec<Monomial> = Vec::new();
        let per_degree: Vec<&Vec<Monomial>> = degrees
            .iter()
            .map(|d| basis.get(d).unwrap_or(&empty))
            .collect();
        let index: Vec<BTreeMap<&Monomial, usize>> = per_degree
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        let mut diffs = Vec::new();
        for di in 0..degrees.len().saturating_sub(1) {
            let mut m = SparseMat::zero(per_degree[di + 1].len(), per_degree[di].len());
            for (j, mono) in per_degree[di].iter().enumerate() {
                for (target, c) in self.apply_total_differential(&v_space, mono) {
                    let i = index[di + 1]
                        .get(&target)
                        .copied()
                        .expect("total differential never grows word length");
                    m.add(i, j, c);
                }
            }
            diffs.push(m);
        }
        // the top stored degree maps into degree hi+1, which is unstored;
        // it only matters when something actually maps out of it
        let mut truncated_above = false;
        if let Some(ms) = basis.get(&hi) {
            'top: for mono in ms {
                if !self.apply_total_differential(&v_space, mono).is_empty() {
                    truncated_above = true;
                    break 'top;
                }
            }
        }
        let spaces: Vec<Vec<String>> = per_degree
            .iter()
            .map(|ms| ms.iter().map(|m| v_space.render_monomial(m)).collect())
            .collect();
        let complex = ChainComplex::new_deferred(lo, spaces, diffs)?
            .with_truncation(false, truncated_above);
        let complete = complete_degrees(&v_space, &basis, cutoff, lo, hi);
        Ok(CeComplex {
            v_space,
            basis,
            complex,
            cutoff,
            complete,
        })
    }

    /// d_tot on a single word: sum over arities i and position subsets I of
    /// the unshuffle sign times m_i on the extracted letters, multiplied back
    /// into the remaining word.
    fn apply_total_differential(
        &self,
        v_space: &GradedSpace,
        mono: &Monomial,
    ) -> BTreeMap<Monomial, Rat> {
        let mut positions: Vec<usize> = Vec::new();
        for (g, &e) in mono.exps().iter().enumerate() {
            for _ in 0..e {
                positions.push(g);
            }
        }
        let odd: Vec<bool> = positions.iter().map(|&g| v_space.is_odd(g)).collect();
        let mut out: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (&arity, table) in &self.ops {
            if arity > positions.len() {
                continue;
            }
            let mut chosen: Vec<usize> = Vec::new();
            subsets(positions.len(), arity, 0, &mut chosen, &mut |sel| {
                let tuple: Vec<usize> = sel.iter().map(|&p| positions[p]).collect();
                let Some(image) = table.get(&tuple) else {
                    return;
                };
                // Koszul sign of pulling the selected letters to the front
                let mut flips = 0usize;
                for &p in sel {
                    if !odd[p] {
                        continue;
                    }
                    flips += (0..p).filter(|q| !sel.contains(q) && odd[*q]).count();
                }
                let sign = if flips % 2 == 0 { 1 } else { -1 };
                let mut rest = mono.exps().to_vec();
                for &g in &tuple {
                    rest[g] -= 1;
                }
                let rest = Monomial::from_exps(rest);
                for (&k, c) in image {
                    if let Some((m, s)) =
                        v_space.mul_monomials(&Monomial::generator(v_space, k), &rest)
                    {
                        let mut coeff = c.clone();
                        if sign * s < 0 {
                            coeff = -coeff;
                        }
                        let cur = out.entry(m).or_insert_with(Rat::zero);
                        *cur += coeff;
                    }
                }
            });
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Nilpotency of the total differential on words up to `cutoff`, which
    /// encodes the L-infinity relations there. Requires the cutoff to exceed
    /// the largest bracket arity.
    pub fn check(&self, cutoff: usize) -> Result<SquareZero, LinftyError> {
        let need = self.max_arity() + 1;
        if cutoff < need.max(1) {
            return Err(LinftyError::CutoffTooSmall {
                need: need.max(1),
                got: cutoff,
            });
        }
        Ok(self.ce_complex(cutoff)?.complex.verify_square_zero())
    }
}

fn subsets(
    n: usize,
    k: usize,
    start: usize,
    acc: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if acc.len() == k {
        emit(acc);
        return;
    }
    let missing = k - acc.len();
    for i in start..=(n.saturating_sub(missing)) {
        acc.push(i);
        subsets(n, k, i + 1, acc, emit);
        acc.pop();
    }
}

/// Exact per-degree completeness of the word-cutoff basis: a stored degree is
/// complete when no word longer than the cutoff lands there. Decidable when
/// the suspended degrees are all nonzero of one sign; otherwise every degree
/// is conservatively incomplete.
fn complete_degrees(
    v_space: &GradedSpace,
    basis: &BTreeMap<i64, Vec<Monomial>>,
    cutoff: usize,
    lo: i64,
    hi: i64,
) -> BTreeMap<i64, bool> {
    let degs: Vec<i64> = v_space.generators().iter().map(|g| g.degree).collect();
    let mut out = BTreeMap::new();
    let same_sign = !degs.is_empty()
        && (degs.iter().all(|&d| d > 0) || degs.iter().all(|&d| d < 0));
    if !same_sign {
        for d in lo - 1..=hi {
            out.insert(d, degs.is_empty());
        }
        return out;
    }
    let min_abs = degs.iter().map(|d| d.unsigned_abs()).min().unwrap() as usize;
    let reach = (lo.unsigned_abs().max(hi.unsigned_abs()) as usize + 1) / min_abs + 1;
    if reach <= cutoff {
        for d in lo - 1..=hi {
            out.insert(d, true);
        }
        return out;
    }
    let full = v_space
        .symmetric_basis(&BasisConstraint::WordLimit(reach))
        .expect("word limit always enumerates");
    for d in lo - 1..=hi {
        let stored = basis.get(&d).map(|v| v.len()).unwrap_or(0);
        let all = full.get(&d).map(|v| v.len()).unwrap_or(0);
        out.insert(d, stored == all);
    }
    out
}

/// A Chevalley-Eilenberg complex under a word-length cutoff.
#[derive(Debug, Clone)]
pub struct CeComplex {
    v_space: GradedSpace,
    basis: BTreeMap<i64, Vec<Monomial>>,
    complex: ChainComplex,
    cutoff: usize,
    complete: BTreeMap<i64, bool>,
}

impl CeComplex {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn v_space(&self) -> &GradedSpace {
        &self.v_space
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn basis_at(&self, degree: i64) -> &[Monomial] {
        self.basis.get(&degree).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Is the stored basis at this degree provably the full basis?
    pub fn degree_complete(&self, degree: i64) -> bool {
        self.complete.get(&degree).copied().unwrap_or(false)
    }

    /// Homology with exact truncation flags: a degree is trusted only when
    /// its own words and its predecessor degree's words are all within the
    /// cutoff.
    pub fn homology(&self) -> Result<BTreeMap<i64, crate::linalg::HomologySummary>, LinalgError> {
        let mut h = self.complex.homology()?;
        for (d, s) in h.iter_mut() {
            let ok = self.degree_complete(*d) && self.degree_complete(*d - 1);
            s.flagged = s.flagged || !ok;
        }
        Ok(h)
    }
}
