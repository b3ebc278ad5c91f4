//! Core library: certified point selection and curvature-growth analysis on
//! finite metric spaces, plus exact homological obstruction machinery for
//! spherical-space-form boundaries.
//!
//! The geometric half works on weighted graphs with shortest-path metrics:
//! selecting base points with verifiable certificates, fitting growth models
//! to scalar fields, auditing soliton-style identities, and checking
//! volume-noncollapsing. The algebraic half works exactly: Smith and Hermite
//! normal forms over the integers, finitely generated abelian groups,
//! exact-sequence verification, a space-form group catalog with an
//! independent quaternion oracle, and the bounded-disjoint-copies pipeline.

pub mod abelian;
pub mod cyclotomic;
pub mod error;
pub mod gen;
pub mod growth;
pub mod intmat;
pub mod metric;
pub mod num;
pub mod obstruction;
pub mod quaternion;
pub mod selection;
pub mod space_forms;

pub use error::{Error, Result};
