//! Twist-knot invariants: exact distance polynomials and A-polynomials,
//! their Newton polygons, and numerical Chern–Simons invariants of twist-knot
//! cone-manifolds, orbifolds and cyclic covers.

pub mod chernsimons;
pub mod error;
pub mod exactpoly;
pub mod geom;
pub mod golden;
pub mod newton;
pub mod twistgen;

pub use error::{Error, Result};
