//! Harnack curves, their amoebas and moduli, computed at desk scale.
//!
//! Exact rational arithmetic is used wherever an identity is being checked;
//! floating point is reserved for transcendental quantities such as
//! logarithms, amoeba rasters and Ronkin integrals.

pub mod amoeba;
pub mod error;
pub mod harnack;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod mesh;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod secondary;
pub mod tropical;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{CutPlan, Edge, LatticePoint, LatticePolygon};
