//! Finite graded vector spaces and free graded-commutative algebras.
//!
//! Parity is the cohomological degree mod 2; odd generators square to zero
//! and anticommute, even generators are polynomial. Monomials are stored as
//! exponent vectors in the fixed generator order, so every Koszul sign is
//! produced at one place: the merge that re-sorts a product.

use crate::linalg::{ChainComplex, LinalgError, SparseMat};
use crate::scalar::{rat_str, Rat};
use num::traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GradedError {
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("degree window needs finite graded pieces, but even generator {0:?} has degree 0")]
    ZeroDegreeEven(String),
    #[error("degree window needs finite graded pieces, but even generators {0:?} and {1:?} have degrees of opposite sign")]
    MixedSignEvens(String, String),
    #[error("curvature element must be homogeneous of cohomological degree +1, found degree {0:?}")]
    CurvatureDegree(Option<i64>),
    #[error("basis at degree {degree} is missing monomial {monomial} hit by the differential")]
    IncompleteBasis { degree: i64, monomial: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: &str, degree: i64) -> Generator {
        Generator {
            name: name.to_string(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// A finite list of named graded generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    gens: Vec<Generator>,
}

impl GradedSpace {
    pub fn new(gens: Vec<Generator>) -> Result<GradedSpace, GradedError> {
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].name == gens[j].name {
                    return Err(GradedError::DuplicateGenerator(gens[i].name.clone()));
                }
            }
        }
        Ok(GradedSpace { gens })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].is_odd()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.exps
            .iter()
            .enumerate()
            .map(|(i, &e)| self.gens[i].degree * e as i64)
            .sum()
    }

    /// Product of two monomials with the Koszul sign of merging the second
    /// behind the first; `None` when an odd generator repeats.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i32)> {
        debug_assert_eq!(a.exps.len(), self.gens.len());
        debug_assert_eq!(b.exps.len(), self.gens.len());
        let mut exps = vec![0u32; self.gens.len()];
        let mut sign = 1i32;
        // odd letters of b pass over the odd letters of a with larger index
        let mut odd_tail = 0u32; // odd letters of a strictly above current index
        for i in (0..self.gens.len()).rev() {
            let (ea, eb) = (a.exps[i], b.exps[i]);
            if self.gens[i].is_odd() {
                if ea + eb > 1 {
                    return None;
                }
                if eb == 1 && odd_tail % 2 == 1 {
                    sign = -sign;
                }
                odd_tail += ea;
            }
            exps[i] = ea + eb;
        }
        Some((Monomial { exps }, sign))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, s)) = self.mul_monomials(ma, mb) {
                    let mut c = ca * cb;
                    if s < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.gens[i].name.clone()),
                e => parts.push(format!("{}^{}", self.gens[i].name, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("\u{b7}")
        }
    }

    pub fn render_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        e.terms
            .iter()
            .map(|(m, c)| format!("{}\u{b7}{}", rat_str(c), self.render_monomial(m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Complete monomial bases of the free graded-commutative algebra,
    /// grouped by degree, under the given finiteness constraint.
    pub fn symmetric_basis(
        &self,
        constraint: &BasisConstraint,
    ) -> Result<BTreeMap<i64, Vec<Monomial>>, GradedError> {
        let mut out: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        match *constraint {
            BasisConstraint::WordLimit(k) => {
                let mut exps = vec![0u32; self.gens.len()];
                self.enumerate_words(0, k, &mut exps, &mut |m| {
                    let d = self.monomial_degree(&m);
                    out.entry(d).or_default().push(m);
                });
            }
            BasisConstraint::DegreeWindow(lo, hi) => {
                let mut sign = 0i64;
                for g in &self.gens {
                    if g.is_odd() {
                        continue;
                    }
                    if g.degree == 0 {
                        return Err(GradedError::ZeroDegreeEven(g.name.clone()));
                    }
                    if sign == 0 {
                        sign = g.degree.signum();
                    } else if g.degree.signum() != sign {
                        let first = self
                            .gens
                            .iter()
                            .find(|h| !h.is_odd() && h.degree.signum() == sign)
                            .unwrap();
                        return Err(GradedError::MixedSignEvens(
                            first.name.clone(),
                            g.name.clone(),
                        ));
                    }
                }
                let mut exps = vec![0u32; self.gens.len()];
                self.enumerate_window(0, lo, hi, 0, &mut exps, &mut |m, d| {
                    out.entry(d).or_default().push(m);
                });
                // empty degrees inside the window are part of the answer
                for d in lo..=hi {
                    out.entry(d).or_default();
                }
                out.retain(|d, _| (lo..=hi).contains(d));
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        Ok(out)
    }

    fn enumerate_words(
        &self,
        idx: usize,
        budget: usize,
        exps: &mut Vec<u32>,
        emit: &mut impl FnMut(Monomial),
    ) {
        if idx == self.gens.len() {
            emit(Monomial { exps: exps.clone() });
            return;
        }
        let cap = if self.gens[idx].is_odd() { 1 } else { budget as u32 };
        for e in 0..=cap.min(budget as u32) {
            exps[idx] = e;
            self.enumerate_words(idx + 1, budget - e as usize, exps, emit);
        }
        exps[idx] = 0;
    }

    fn enumerate_window(
        &self,
        idx: usize,
        lo: i64,
        hi: i64,
        acc: i64,
        exps: &mut Vec<u32>,
        emit: &mut impl FnMut(Monomial, i64),
    ) {
        if idx == self.gens.len() {
            if (lo..=hi).contains(&acc) {
                emit(Monomial { exps: exps.clone() }, acc);
            }
            return;
        }
        // bounds on what the generators after this one can still contribute;
        // within one window regime the unbounded direction never occurs on
        // the side the cap below consults
        let (mut rest_min, mut rest_max) = (0i64, 0i64);
        for g in &self.gens[idx + 1..] {
            if g.is_odd() {
                if g.degree < 0 {
                    rest_min += g.degree;
                } else {
                    rest_max += g.degree;
                }
            } else if g.degree < 0 {
                rest_min = i64::MIN / 4;
            } else {
                rest_max = i64::MAX / 4;
            }
        }
        let g = &self.gens[idx];
        let cap: u32 = if g.is_odd() {
            1
        } else {
            let room = if g.degree > 0 {
                hi - acc - rest_min
            } else {
                acc + rest_max - lo
            };
            if room < 0 {
                0
            } else {
                (room / g.degree.abs()).min(u32::MAX as i64) as u32
            }
        };
        for e in 0..=cap {
            let acc2 = acc + g.degree * e as i64;
            if acc2 + rest_min > hi || acc2 + rest_max < lo {
                continue;
            }
            exps[idx] = e;
            self.enumerate_window(idx + 1, lo, hi, acc2, exps, emit);
        }
        exps[idx] = 0;
    }

    /// The multiplication-by-omega complex on the given bases. `omega` must
    /// be homogeneous of cohomological degree +1 (odd, so nilpotency is
    /// automatic). In truncating mode, product terms falling outside the
    /// stored bases are dropped (the quotient onto a word cutoff, which is
    /// still a complex); in exact mode they are an error.
    pub fn multiplication_operator(
        &self,
        omega: &Element,
        bases: &BTreeMap<i64, Vec<Monomial>>,
        truncating: bool,
        truncated_below: bool,
    ) -> Result<ChainComplex, GradedError> {
        match self.element_degree(omega) {
            Some(1) | None => {}
            d => return Err(GradedError::CurvatureDegree(d)),
        }
        if bases.is_empty() {
            return Ok(ChainComplex::empty());
        }
        let lo = *bases.keys().next().unwrap();
        let hi = *bases.keys().last().unwrap();
        let degrees: Vec<i64> = (lo..=hi).collect();
        let empty: Vec<Monomial> = Vec::new();
        let per_degree: Vec<&Vec<Monomial>> = degrees
            .iter()
            .map(|d| bases.get(d).unwrap_or(&empty))
            .collect();
        let index: Vec<BTreeMap<&Monomial, usize>> = per_degree
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        let mut truncated_above = false;
        let mut diffs = Vec::new();
        for (di, d) in degrees.iter().enumerate() {
            let last = di + 1 == degrees.len();
            let target_rows = if last { 0 } else { per_degree[di + 1].len() };
            let mut m = SparseMat::zero(target_rows, per_degree[di].len());
            for (j, mono) in per_degree[di].iter().enumerate() {
                let e = Element::from_monomial(mono.clone());
                let prod = self.multiply(omega, &e);
                for (pm, pc) in &prod.terms {
                    let row = if last { None } else { index[di + 1].get(pm).copied() };
                    match row {
                        Some(i) => m.add(i, j, pc.clone()),
                        None => {
                            if last {
                                truncated_above = true;
                            } else if truncating {
                                // dropped by the cutoff
                            } else {
                                return Err(GradedError::IncompleteBasis {
                                    degree: d + 1,
                                    monomial: self.render_monomial(pm),
                                });
                            }
                        }
                    }
                }
            }
            if !last {
                diffs.push(m);
            }
        }
        let spaces: Vec<Vec<String>> = per_degree
            .iter()
            .map(|ms| ms.iter().map(|m| self.render_monomial(m)).collect())
            .collect();
        let complex = ChainComplex::new(lo, spaces, diffs)?
            .with_truncation(truncated_below, truncated_above || truncating);
        Ok(complex)
    }

    /// The common degree of all terms, `None` for zero, `Some(None)`-like
    /// failures are reported as the first offending pair.
    pub fn element_degree(&self, e: &Element) -> Option<i64> {
        let mut it = e.terms.keys();
        let first = it.next()?;
        let d = self.monomial_degree(first);
        for m in it {
            if self.monomial_degree(m) != d {
                return None;
            }
        }
        Some(d)
    }
}

/// Exponent-vector monomial over a fixed `GradedSpace`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(space: &GradedSpace) -> Monomial {
        Monomial {
            exps: vec![0; space.len()],
        }
    }

    pub fn generator(space: &GradedSpace, i: usize) -> Monomial {
        let mut exps = vec![0; space.len()];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn word_length(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }
}

/// A rational linear combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Rat>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn from_monomial(m: Monomial) -> Element {
        let mut e = Element::zero();
        e.add_term(m, Rat::from_integer(1.into()));
        e
    }

    pub fn generator(space: &GradedSpace, i: usize) -> Element {
        Element::from_monomial(Monomial::generator(space, i))
    }

    pub fn one(space: &GradedSpace) -> Element {
        Element::from_monomial(Monomial::one(space))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *cur += c;
        if cur.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Element {
        if r.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rat> {
        &self.terms
    }
}

/// Finiteness regime for symmetric-power bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisConstraint {
    /// All monomials of word length at most this bound.
    WordLimit(usize),
    /// All monomials with cohomological degree in the closed window; exact,
    /// but requires every even generator nonzero with degrees of one sign.
    DegreeWindow(i64, i64),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn space(gens: &[(&str, i64)]) -> GradedSpace {
        GradedSpace::new(gens.iter().map(|&(n, d)| Generator::new(n, d)).collect()).unwrap()
    }

    #[test]
    fn odd_square_is_zero() {
        let s = space(&[("x", 1)]);
        let x = Element::generator(&s, 0);
        assert!(s.multiply(&x, &x).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let s = space(&[("x", 1), ("y", 3)]);
        let x = Element::generator(&s, 0);
        let y = Element::generator(&s, 1);
        let xy = s.multiply(&x, &y);
        let yx = s.multiply(&y, &x);
        assert_eq!(xy, yx.scale(&rat_int(-1)));
    }

    #[test]
    fn mixed_square_expands() {
        // (x + xi)^2 = x^2 + 2 x xi for even x, odd xi
        let s = space(&[("x", 2), ("xi", 1)]);
        let sum = Element::generator(&s, 0).add(&Element::generator(&s, 1));
        let sq = s.multiply(&sum, &sum);
        let mut expect = Element::from_monomial(Monomial::from_exps(vec![2, 0]));
        expect.add_term(Monomial::from_exps(vec![1, 1]), rat_int(2));
        assert_eq!(sq, expect);
    }

    #[test]
    fn basis_one_odd_generator() {
        let s = space(&[("xi", 1)]);
        let b = s.symmetric_basis(&BasisConstraint::WordLimit(5)).unwrap();
        let total: usize = b.values().map(|v| v.len()).sum();
        assert_eq!(total, 2); // 1 and xi
    }

    #[test]
    fn basis_powers_of_even_generator() {
        let s = space(&[("x", -2)]);
        let b = s
            .symmetric_basis(&BasisConstraint::DegreeWindow(-6, 0))
            .unwrap();
        let dims: Vec<usize> = (0..=3).map(|i| b[&(-2 * i)].len()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1]); // 1, x, x^2, x^3
        assert_eq!(b[&-1].len(), 0);
        let total: usize = b.values().map(|v| v.len()).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn basis_window_mixed_generators() {
        // one odd generator of degree -1 and one even of degree -2: counted
        // directly, each degree in [-4, 0] holds exactly one monomial
        // (1, a, b, ab, b^2).
        let s = space(&[("a", -1), ("b", -2)]);
        let b = s
            .symmetric_basis(&BasisConstraint::DegreeWindow(-4, 0))
            .unwrap();
        let dims: Vec<usize> = (-4..=0).map(|d| b[&d].len()).collect();
        // independent direct count over exponents (a2, b2) with a2 <= 1
        let mut expect = vec![0usize; 5];
        for a2 in 0..=1i64 {
            for b2 in 0..=4i64 {
                let d = -a2 - 2 * b2;
                if (-4..=0).contains(&d) {
                    expect[(d + 4) as usize] += 1;
                }
            }
        }
        assert_eq!(dims, expect);
        assert_eq!(dims, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn degree_window_rejects_zero_even() {
        let s = space(&[("x", 0)]);
        match s.symmetric_basis(&BasisConstraint::DegreeWindow(-1, 1)) {
            Err(GradedError::ZeroDegreeEven(n)) => assert_eq!(n, "x"),
            other => panic!("expected zero-degree rejection, got {:?}", other),
        }
    }

    #[test]
    fn degree_window_rejects_mixed_signs() {
        let s = space(&[("x", 2), ("y", -2)]);
        assert!(matches!(
            s.symmetric_basis(&BasisConstraint::DegreeWindow(-4, 4)),
            Err(GradedError::MixedSignEvens(_, _))
        ));
    }

    #[test]
    fn zero_curvature_gives_zero_differential() {
        let s = space(&[("x", 2), ("xi", -1)]);
        let bases = s
            .symmetric_basis(&BasisConstraint::DegreeWindow(-2, 4))
            .unwrap();
        let c = s
            .multiplication_operator(&Element::zero(), &bases, false, false)
            .unwrap();
        for d in -2..4 {
            assert!(c.diff(d).is_zero());
        }
    }

    #[test]
    fn curvature_degree_validated() {
        let s = space(&[("x", -2), ("xi", 3)]);
        let bases = s.symmetric_basis(&BasisConstraint::WordLimit(3)).unwrap();
        // x has degree -2: multiplication by x alone is rejected
        let x = Element::generator(&s, 0);
        assert!(matches!(
            s.multiplication_operator(&x, &bases, true, true),
            Err(GradedError::CurvatureDegree(Some(-2)))
        ));
        // x*xi has degree +1 and passes
        let omega = s.multiply(&x, &Element::generator(&s, 1));
        assert!(s.multiplication_operator(&omega, &bases, true, true).is_ok());
    }

    #[test]
    fn single_pair_koszul_homology() {
        // multiplication by x·xi on Q[x] (x) Lambda[xi]: one-dimensional
        // cohomology at the degree of xi
        let s = space(&[("x", 2), ("xi", -1)]);
        let bases = s
            .symmetric_basis(&BasisConstraint::DegreeWindow(-2, 7))
            .unwrap();
        let omega = s.multiply(&Element::generator(&s, 0), &Element::generator(&s, 1));
        let c = s
            .multiplication_operator(&omega, &bases, false, false)
            .unwrap();
        let h = c.homology().unwrap();
        for (d, s) in &h {
            if *d == -1 {
                assert_eq!(s.dim, 1, "class at the odd generator");
            } else if !s.flagged {
                assert_eq!(s.dim, 0, "degree {}", d);
            }
        }
    }

    #[test]
    fn multiplication_operator_squares_to_zero() {
        let s = space(&[("x", 2), ("y", 4), ("xi", -1), ("eta", -3)]);
        let bases = s
            .symmetric_basis(&BasisConstraint::DegreeWindow(-5, 9))
            .unwrap();
        let mut omega = s.multiply(&Element::generator(&s, 0), &Element::generator(&s, 2));
        omega = omega.add(&s.multiply(&Element::generator(&s, 1), &Element::generator(&s, 3)));
        let c = s
            .multiplication_operator(&omega, &bases, false, false)
            .unwrap();
        assert!(c.verify_square_zero().is_pass());
    }

    proptest! {
        #[test]
        fn multiply_is_associative(seed in 0u64..500) {
            // three pseudo-random elements over a fixed mixed-parity space
            let s = space(&[("x", 2), ("xi", 1), ("eta", -1)]);
            let b = s.symmetric_basis(&BasisConstraint::WordLimit(3)).unwrap();
            let monos: Vec<Monomial> = b.values().flatten().cloned().collect();
            let pick = |k: u64| -> Element {
                let mut e = Element::zero();
                let mut st = seed.wrapping_mul(6364136223846793005).wrapping_add(k);
                for _ in 0..3 {
                    st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let m = monos[(st >> 33) as usize % monos.len()].clone();
                    let c = rat(((st >> 13) % 7) as i64 - 3, 1 + ((st >> 7) % 4) as i64);
                    e.add_term(m, c);
                }
                e
            };
            let (a, b2, c) = (pick(1), pick(2), pick(3));
            let left = s.multiply(&s.multiply(&a, &b2), &c);
            let right = s.multiply(&a, &s.multiply(&b2, &c));
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn associativity_exhaustive_on_generators() {
        let s = space(&[("x", 2), ("xi", 1), ("eta", -1)]);
        let gens: Vec<Element> = (0..3).map(|i| Element::generator(&s, i)).collect();
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    assert_eq!(
                        s.multiply(&s.multiply(a, b), c),
                        s.multiply(a, &s.multiply(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn graded_commutativity() {
        let s = space(&[("x", 2), ("xi", 1), ("eta", -3)]);
        let b = s.symmetric_basis(&BasisConstraint::WordLimit(2)).unwrap();
        let monos: Vec<Monomial> = b.values().flatten().cloned().collect();
        for ma in &monos {
            for mb in &monos {
                let a = Element::from_monomial(ma.clone());
                let b = Element::from_monomial(mb.clone());
                let ab = s.multiply(&a, &b);
                let ba = s.multiply(&b, &a);
                let sign = if s.monomial_degree(ma).rem_euclid(2) == 1
                    && s.monomial_degree(mb).rem_euclid(2) == 1
                {
                    -1
                } else {
                    1
                };
                assert_eq!(ab, ba.scale(&rat_int(sign)));
            }
        }
    }
}
