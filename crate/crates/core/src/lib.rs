//! Exact multivector calculus and invariance checks for Poisson and Dirac
//! structures, together with transversal pairing certificates.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod dirac;
pub mod linalg;
pub mod mvcalc;
pub mod numfmt;
pub mod poisson;
pub mod quadrature;
pub mod scene;
pub mod transversal;
