//! Input file formats: small JSON documents with exact rationals as
//! "p/q" strings. Parsing is strict; serialization is canonical (pretty,
//! two-space indent, trailing newline), so parse-then-serialize is a
//! idempotent normal form.

use crate::algebra::{Algebra, AlgebraError};
use crate::graded::{GradedSpace, Generator};
use crate::linfty::{BracketSpec, LInfty, LinftyError};
use crate::scalar::{parse_rat, rat_str, Rat};
use crate::weyl::{coefficient_space, ManifoldData, PairedSpace, WeylError};
use num::traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational: {0}")]
    Rational(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linfty(#[from] LinftyError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn rat(s: &str) -> Result<Rat, IoError> {
    parse_rat(s).map_err(IoError::Rational)
}

/// Canonical serialization used by every format here.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// An associative algebra: basis names, unit coordinates, structure
/// constants as (i, j, k, coefficient) meaning e_i e_j contains c e_k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub basis: Vec<String>,
    pub unit: Vec<String>,
    pub products: Vec<(usize, usize, usize, String)>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<AlgebraFile, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_algebra(&self) -> Result<Algebra, IoError> {
        let unit = self
            .unit
            .iter()
            .map(|s| rat(s))
            .collect::<Result<Vec<_>, _>>()?;
        let products = self
            .products
            .iter()
            .map(|(i, j, k, c)| Ok((*i, *j, *k, rat(c)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(Algebra::new(self.basis.clone(), unit, &products)?)
    }

    pub fn from_algebra(alg: &Algebra) -> AlgebraFile {
        AlgebraFile {
            basis: alg.names().to_vec(),
            unit: alg.unit().iter().map(rat_str).collect(),
            products: alg
                .structure_constants()
                .into_iter()
                .map(|(i, j, k, c)| (i, j, k, rat_str(&c)))
                .collect(),
        }
    }
}

/// One graded generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: i64,
}

/// One bracket of a fixed arity: entries (sorted input tuple, output index,
/// coefficient).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub arity: usize,
    pub entries: Vec<(Vec<usize>, usize, String)>,
}

/// An L-infinity (or differential graded Lie) structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinftyFile {
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub differential: Vec<(usize, usize, String)>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

impl LinftyFile {
    pub fn parse(text: &str) -> Result<LinftyFile, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn space(&self) -> Result<GradedSpace, IoError> {
        Ok(GradedSpace::new(
            self.generators
                .iter()
                .map(|g| Generator::new(&g.name, g.degree))
                .collect(),
        )
        .map_err(LinftyError::Graded)?)
    }

    /// Assemble without checking the higher relations; callers decide how
    /// deeply to validate (a pure differential graded Lie input goes through
    /// the full Jacobi/Leibniz check).
    pub fn to_linfty(&self) -> Result<LInfty, IoError> {
        let space = self.space()?;
        let differential = self
            .differential
            .iter()
            .map(|(a, b, c)| Ok((*a, *b, rat(c)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        let brackets = self
            .brackets
            .iter()
            .map(|b| {
                Ok(BracketSpec {
                    arity: b.arity,
                    entries: b
                        .entries
                        .iter()
                        .map(|(t, o, c)| Ok((t.clone(), *o, rat(c)?)))
                        .collect::<Result<Vec<_>, IoError>>()?,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        if brackets.iter().all(|b| b.arity == 2) {
            let entries: Vec<(Vec<usize>, usize, Rat)> = brackets
                .into_iter()
                .flat_map(|b| b.entries)
                .collect();
            Ok(LInfty::from_dgla(space, &differential, &entries)?)
        } else {
            Ok(LInfty::from_brackets(space, &differential, &brackets)?)
        }
    }
}

/// Manifold input: dimension, Betti data as (homological degree,
/// multiplicity), and the intersection pairing over the flattened generator
/// list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub n: i64,
    pub homology: Vec<(i64, usize)>,
    pub pairing: Vec<(usize, usize, String)>,
    /// recorded assumption, not checked: the model only uses (n, Betti,
    /// pairing) and is stated for parallelizable manifolds
    #[serde(default)]
    pub parallelizable: Option<bool>,
}

impl ManifoldFile {
    pub fn parse(text: &str) -> Result<ManifoldFile, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_manifold(&self) -> Result<ManifoldData, IoError> {
        let total: usize = self.homology.iter().map(|&(_, m)| m).sum();
        let matrix = entries_to_matrix(total, &self.pairing)?;
        Ok(ManifoldData::new(self.n, &self.homology, matrix)?)
    }
}

/// Coefficient-space input: graded dimensions as (degree, multiplicity) and
/// the pairing matrix entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub degrees: Vec<(i64, usize)>,
    pub q: Vec<(usize, usize, String)>,
}

impl CoefficientFile {
    pub fn parse(text: &str) -> Result<CoefficientFile, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_paired(&self, n: i64) -> Result<PairedSpace, IoError> {
        let mut gens = Vec::new();
        for &(d, mult) in &self.degrees {
            for c in 0..mult {
                gens.push(Generator::new(&format!("v{}_{}", d, c), d));
            }
        }
        let space = GradedSpace::new(gens).map_err(LinftyError::Graded)?;
        let matrix = entries_to_matrix(space.len(), &self.q)?;
        Ok(coefficient_space(space, matrix, n)?)
    }
}

fn entries_to_matrix(
    dim: usize,
    entries: &[(usize, usize, String)],
) -> Result<Vec<Vec<Rat>>, IoError> {
    let mut m = vec![vec![Rat::zero(); dim]; dim];
    for (i, j, c) in entries {
        if *i >= dim || *j >= dim {
            return Err(IoError::Invalid(format!(
                "pairing entry ({}, {}) out of range for {} generators",
                i, j, dim
            )));
        }
        let v = rat(c)?;
        if !m[*i][*j].is_zero() {
            return Err(IoError::Invalid(format!(
                "pairing entry ({}, {}) given twice",
                i, j
            )));
        }
        m[*i][*j] = v;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::samples;

    #[test]
    fn algebra_round_trip() {
        let file = AlgebraFile::from_algebra(&samples::matrix2());
        let text = to_canonical_json(&file);
        let parsed = AlgebraFile::parse(&text).unwrap();
        assert_eq!(parsed, file);
        assert_eq!(to_canonical_json(&parsed), text);
        let alg = parsed.to_algebra().unwrap();
        assert_eq!(&alg, &samples::matrix2());
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"basis": ["1"], "unit": ["1"], "products": [[0,0,0,"1"]], "extra": 1}"#;
        assert!(AlgebraFile::parse(text).is_err());
    }

    #[test]
    fn rejects_bad_rational() {
        let text = r#"{"basis": ["1"], "unit": ["1/0"], "products": [[0,0,0,"1"]]}"#;
        let f = AlgebraFile::parse(text).unwrap();
        assert!(matches!(f.to_algebra(), Err(IoError::Rational(_))));
    }

    #[test]
    fn linfty_file_dgla_validation() {
        let text = r#"{
  "generators": [{"name": "x", "degree": 0}, {"name": "y", "degree": 0}],
  "brackets": [{"arity": 2, "entries": [[[0, 1], 1, "1"]]}]
}"#;
        let f = LinftyFile::parse(text).unwrap();
        let g = f.to_linfty().unwrap();
        assert_eq!(g.max_arity(), 2);

        let bad = r#"{
  "generators": [{"name": "e", "degree": 0}, {"name": "f", "degree": 0}, {"name": "h", "degree": 0}],
  "brackets": [{"arity": 2, "entries": [[[0, 1], 2, "1"], [[0, 1], 0, "1"], [[0, 2], 0, "-2"], [[1, 2], 1, "2"]]}]
}"#;
        let f = LinftyFile::parse(bad).unwrap();
        assert!(matches!(f.to_linfty(), Err(IoError::Linfty(_))));
    }

    #[test]
    fn manifold_file_circle() {
        let text = r#"{
  "n": 1,
  "homology": [[0, 1], [1, 1]],
  "pairing": [[0, 1, "1"], [1, 0, "1"]]
}"#;
        let f = ManifoldFile::parse(text).unwrap();
        let m = f.to_manifold().unwrap();
        assert_eq!(m.n(), 1);
    }

    #[test]
    fn coefficient_file_dim1() {
        let text = r#"{
  "degrees": [[1, 1]],
  "q": [[0, 0, "1"]]
}"#;
        let f = CoefficientFile::parse(text).unwrap();
        assert!(f.to_paired(1).is_ok());
        assert!(f.to_paired(3).is_err());
    }

    #[test]
    fn duplicate_pairing_entry_rejected() {
        let text = r#"{
  "degrees": [[1, 1]],
  "q": [[0, 0, "1"], [0, 0, "2"]]
}"#;
        let f = CoefficientFile::parse(text).unwrap();
        assert!(matches!(f.to_paired(1), Err(IoError::Invalid(_))));
    }
}
