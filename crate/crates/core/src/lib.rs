//! Koszul cohomology and graded Betti tables of explicit projective
//! varieties over prime fields.
//!
//! The pipeline is: an [`instances::InstanceSpec`] describes a variety (by
//! ideal generators or by a parametrization), [`ring`] turns it into a
//! degree-truncated [`ring::GradedAlgebra`], and [`koszul`] assembles the
//! Koszul differentials and computes `κ_{p,q}` by exact elimination over
//! `GF(p)` ([`field`]).

pub mod cli;
pub mod error;
pub mod field;
pub mod instances;
pub mod koszul;
pub mod multilinear;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod selftest;

pub use error::{Error, Result};
pub use field::{FieldContext, MatrixGF, SparseMatrix, DEFAULT_PRIME};
pub use koszul::{betti_table, koszul_dim, verify_green, BettiTable, GreenVerdict, KoszulCell};
pub use ring::{BigradedParametrization, GradedAlgebra, IdealPresentation};
