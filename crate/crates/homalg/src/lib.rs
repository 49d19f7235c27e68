//! An exact-arithmetic workbench for computational homological algebra:
//! tree operads with their splitting differentials, configuration-space
//! stratum bookkeeping, Chevalley-Eilenberg complexes of L-infinity
//! algebras, Hochschild-type complexes with a trace-map certifier, and
//! Koszul-type curvature models.
//!
//! Everything is computed over the rationals with arbitrary precision;
//! there is no floating point anywhere. Complexes follow one global
//! convention: cohomological grading, differentials of degree +1, with
//! homologically graded objects stored at negated degrees.

pub mod algebra;
pub mod graded;
pub mod hochschild;
pub mod io;
pub mod linalg;
pub mod linfty;
pub mod operad;
pub mod scalar;
pub mod trees;
pub mod weyl;
