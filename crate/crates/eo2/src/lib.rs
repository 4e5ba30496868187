//! Exact invariants of curves y^2 - y = f(x) over binary fields.
//!
//! The crate reduces f to a standard form with prescribed poles, builds the
//! 2-torsion of the Jacobian as a module with a 2-semilinear operator F and
//! a 1/2-semilinear operator V acting on de Rham cohomology, and computes
//! the invariants that classify such modules: the Ekedahl-Oort type, the
//! 2-rank, and the a-number. A library of standard indecomposable modules
//! and the matching structure theorem make every computation verifiable
//! against a closed form.
//!
//! All arithmetic is exact over GF(2^n) with bit-packed representations; no
//! floating point is involved anywhere.

pub mod classify;
pub mod cli;
pub mod curve;
pub mod drham;
pub mod field;
pub mod gc;
pub mod matrix;
pub mod poly;
pub mod semilin;
