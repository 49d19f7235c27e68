//! Finite-dimensional unital associative algebras over the rationals,
//! presented by structure constants on a named basis.

use crate::scalar::{rat_str, Rat};
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("structure constants must form a square table over {dim} basis elements")]
    Shape { dim: usize },
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("associativity fails on basis triple ({i}, {j}, {k}): (e{i}e{j})e{k} - e{i}(e{j}e{k}) = {defect}")]
    Associativity {
        i: usize,
        j: usize,
        k: usize,
        defect: String,
    },
    #[error("unit law fails on basis element {i}: {side} product with the unit is {got}")]
    Unit { i: usize, side: &'static str, got: String },
    #[error("index {0} out of range for dimension {1}")]
    Index(usize, usize),
}

/// A unital associative algebra with basis `e_0, ..., e_{dim-1}` and
/// products `e_i e_j = sum_k c(i,j,k) e_k`. Associativity and both unit laws
/// are verified on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    names: Vec<String>,
    unit: Vec<Rat>,
    /// table[i][j] = sparse coordinates of e_i * e_j
    table: Vec<Vec<Vec<(usize, Rat)>>>,
}

pub type Vector = BTreeMap<usize, Rat>;

impl Algebra {
    pub fn new(
        names: Vec<String>,
        unit: Vec<Rat>,
        products: &[(usize, usize, usize, Rat)],
    ) -> Result<Algebra, AlgebraError> {
        let dim = names.len();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                if names[i] == names[j] {
                    return Err(AlgebraError::DuplicateName(names[i].clone()));
                }
            }
        }
        if unit.len() != dim {
            return Err(AlgebraError::Shape { dim });
        }
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for &(i, j, k, ref c) in products {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(AlgebraError::Index(idx, dim));
                }
            }
            if !c.is_zero() {
                table[i][j].push((k, c.clone()));
            }
        }
        for row in &mut table {
            for cell in row.iter_mut() {
                let mut merged: Vector = BTreeMap::new();
                for (k, c) in cell.drain(..) {
                    let cur = merged.entry(k).or_insert_with(Rat::zero);
                    *cur += c;
                }
                merged.retain(|_, v| !v.is_zero());
                *cell = merged.into_iter().collect();
            }
        }
        let alg = Algebra { names, unit, table };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let left = self.mul(&self.basis_product(i, j), &basis_vec(k));
                    let right = self.mul(&basis_vec(i), &self.basis_product(j, k));
                    let defect = sub(&left, &right);
                    if !defect.is_empty() {
                        return Err(AlgebraError::Associativity {
                            i,
                            j,
                            k,
                            defect: self.render(&defect),
                        });
                    }
                }
            }
        }
        let unit: Vector = self
            .unit
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        for i in 0..dim {
            let left = self.mul(&unit, &basis_vec(i));
            if left != basis_vec(i) {
                return Err(AlgebraError::Unit {
                    i,
                    side: "left",
                    got: self.render(&left),
                });
            }
            let right = self.mul(&basis_vec(i), &unit);
            if right != basis_vec(i) {
                return Err(AlgebraError::Unit {
                    i,
                    side: "right",
                    got: self.render(&right),
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> &[Rat] {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        self.table[i][j].iter().cloned().collect()
    }

    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Rat)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (k, c) in &self.table[i][j] {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out: Vector = BTreeMap::new();
        for (&i, ca) in a {
            for (&j, cb) in b {
                for (k, c) in &self.table[i][j] {
                    let cur = out.entry(*k).or_insert_with(Rat::zero);
                    *cur += ca * cb * c;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn commutator(&self, i: usize, j: usize) -> Vector {
        let ij = self.basis_product(i, j);
        let ji = self.basis_product(j, i);
        sub(&ij, &ji)
    }

    pub fn render(&self, v: &Vector) -> String {
        if v.is_empty() {
            return "0".to_string();
        }
        v.iter()
            .map(|(&i, c)| {
                if c.is_one() {
                    self.names[i].clone()
                } else {
                    format!("{}\u{b7}{}", rat_str(c), self.names[i])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn basis_vec(i: usize) -> Vector {
    BTreeMap::from([(i, Rat::one())])
}

pub fn sub(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    for (&i, c) in b {
        let cur = out.entry(i).or_insert_with(Rat::zero);
        *cur -= c;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Stock algebras used across the test suites and fixtures.
pub mod samples {
    use super::*;
    use crate::scalar::rat_int;

    /// The ground field.
    pub fn ground_field() -> Algebra {
        Algebra::new(
            vec!["1".to_string()],
            vec![rat_int(1)],
            &[(0, 0, 0, rat_int(1))],
        )
        .expect("valid")
    }

    /// Dual numbers Q[x]/(x^2), basis {1, x}.
    pub fn dual_numbers() -> Algebra {
        Algebra::new(
            vec!["1".to_string(), "x".to_string()],
            vec![rat_int(1), rat_int(0)],
            &[
                (0, 0, 0, rat_int(1)),
                (0, 1, 1, rat_int(1)),
                (1, 0, 1, rat_int(1)),
            ],
        )
        .expect("valid")
    }

    /// 2x2 matrices over Q, basis {e11, e12, e21, e22}.
    pub fn matrix2() -> Algebra {
        let names: Vec<String> = ["e11", "e12", "e21", "e22"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let idx = |r: usize, c: usize| 2 * r + c;
        let mut products = Vec::new();
        for r in 0..2 {
            for c in 0..2 {
                for r2 in 0..2 {
                    for c2 in 0..2 {
                        if c == r2 {
                            products.push((idx(r, c), idx(r2, c2), idx(r, c2), rat_int(1)));
                        }
                    }
                }
            }
        }
        Algebra::new(names, vec![rat_int(1), rat_int(0), rat_int(0), rat_int(1)], &products)
            .expect("valid")
    }

    /// Upper-triangular 2x2 matrices, basis {e11, e12, e22}.
    pub fn upper_triangular2() -> Algebra {
        let names: Vec<String> = ["e11", "e12", "e22"].iter().map(|s| s.to_string()).collect();
        let products = vec![
            (0usize, 0usize, 0usize, rat_int(1)), // e11 e11 = e11
            (0, 1, 1, rat_int(1)),                // e11 e12 = e12
            (1, 2, 1, rat_int(1)),                // e12 e22 = e12
            (2, 2, 2, rat_int(1)),                // e22 e22 = e22
        ];
        Algebra::new(names, vec![rat_int(1), rat_int(0), rat_int(1)], &products).expect("valid")
    }
}
