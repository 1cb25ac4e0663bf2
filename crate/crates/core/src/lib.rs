//! Numerical verification toolkit for left-invariant contact metric structures
//! on five-dimensional Lie algebras.

pub mod contact;
pub mod error;
pub mod families;
pub mod kmu;
pub mod liealg;
pub mod numlin;
pub mod phisym;
pub mod report;
pub mod riemann;
pub mod suite;

pub use contact::{boeckx_invariant, recover_phi, ContactMetricStructure, KMuSolution};
pub use error::{Error, Result};
pub use families::{CorollarySpec, Family, FamilySpec};
pub use kmu::KMuDeformation;
pub use liealg::LieAlgebra;
pub use numlin::{Matrix, Subspace, Tolerance};
pub use phisym::{ReductiveDecomposition, SolvableModelData};
pub use report::{Check, VerificationReport};
pub use riemann::{MetricLieAlgebra, OneillVariant};
