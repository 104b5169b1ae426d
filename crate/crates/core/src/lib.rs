//! Exact computations for preprojective algebras of Dynkin type.
//!
//! The crate builds the preprojective algebra Λ of a simply laced Dynkin
//! quiver, represents Λ-modules as matrices on the double quiver, enumerates
//! indecomposables in finite type (A2, A3, A4), mutates basic maximal rigid
//! modules, and extracts the exchange matrices, Cartan matrices and cluster
//! seeds attached to them. All arithmetic is exact: rationals by default,
//! prime fields for point counting.

pub mod algebra;
pub mod approximation;
pub mod catalog;
pub mod cluster;
pub mod endo_quiver;
pub mod error;
pub mod intmat;
pub mod linalg;
pub mod module;
pub mod module_rep;
pub mod poly;
pub mod quiver;
pub mod semicanonical;
pub mod verify;

pub use error::{Error, Result};
