//! Exact verification engine for the finite computations behind the
//! characterization of the Fermat quartic K3 surface by its finite symmetry
//! groups.

pub mod cyclotomic;
pub mod error;
pub mod finite_group;
pub mod fixed_point;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod mathieu;
pub mod matrix_groups;
pub mod perm;
pub mod polynomial;
pub mod quartics;

pub use cyclotomic::{euler_phi, CycNumber, Rational};
pub use error::{Error, Result};
