//! Exact integer linear algebra: matrices, Hermite lattices, Smith normal
//! form, finitely generated abelian groups and finite-rank `Z`-algebras.

pub mod algebra;
pub mod lattice;
pub mod matrix;
pub mod module;
pub mod snf;

pub use algebra::ZAlgebra;
pub use lattice::{integer_kernel, solve, Lattice};
pub use matrix::{vector, IntMatrix, Vector};
pub use module::{quotient, subquotient, tensor, Coordinates, FgModule, GroupInvariants, Subgroup};
pub use snf::{smith_normal_form, SmithForm};
