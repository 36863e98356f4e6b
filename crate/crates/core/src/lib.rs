//! Exact tools for quadratic minimization over Motzkin-decomposable sets.

pub mod affine;
pub mod asymptote;
pub mod caps;
pub mod cone_qp;
pub mod document;
pub mod error;
pub mod gallery;
pub mod linalg;
pub mod lp;
pub mod motzkin;
pub mod numeric;
pub mod poly;
pub mod qp;
pub mod quadratic;
pub mod rat;
pub mod set_algebra;

pub use affine::{AffineManifold, AffineMap};
pub use error::{Error, Result};
pub use poly::{HPolyhedron, PolyCone, Polyhedron, VPolyhedron};
pub use quadratic::Quadratic;
pub use rat::{RMat, RVec, Rat};
