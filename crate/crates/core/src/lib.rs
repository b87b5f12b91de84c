//! Exact computation of dynamical degrees of polynomial endomorphisms of
//! affine n-space over the rationals.
//!
//! The crate is organised around a small pipeline:
//!
//! * [`poly`] — sparse exact multivariate polynomials and the composition
//!   monoid of endomorphisms of affine space;
//! * [`unipoly`] / [`algebraic`] / [`numberfield`] — certified real algebraic
//!   numbers (Sturm-sequence root isolation, exact comparison) and arithmetic
//!   in the real field generated by one of them;
//! * [`weights`] — weighted degree functions, weighted-homogeneous
//!   decompositions and leading parts;
//! * [`matrices`] — the matrix shadow of an endomorphism: support matrices,
//!   spectral radii, maximal eigenvalues and eigenvectors;
//! * [`stability`] / [`degree`] — algebraic stability testing, the degree
//!   growth oracle and the top-level dynamical degree driver;
//! * [`shapes`] / [`dim3`] — structural normal forms (Bruhat conjugation,
//!   cyclic-elementary closed forms, the dimension-3 reduction loop and the
//!   degree-spectrum enumerators);
//! * [`perron`] — classification of algebraic numbers (Perron, weak Perron,
//!   Handelman) and realization of weak Perron numbers as dynamical degrees.

pub mod algebraic;
pub mod config;
pub mod conjugates;
pub mod degree;
pub mod dim3;
pub mod error;
pub mod matrices;
pub mod numberfield;
pub mod perron;
pub mod poly;
pub mod shapes;
pub mod stability;
pub mod text;
pub mod unipoly;
pub mod weights;

pub use algebraic::RealAlgebraicNumber;
pub use config::JobConfig;
pub use degree::{DegreeValue, DynamicalDegreeResult};
pub use error::DdError;
pub use matrices::{IntMatrix, MaxEigenData};
pub use numberfield::{KElem, RealField};
pub use poly::{Endomorphism, Monomial, Polynomial};
pub use weights::{MuDegree, WeightVector};

/// Convenience alias used across the crate.
pub type Rat = num_rational::BigRational;
/// Convenience alias used across the crate.
pub type Int = num_bigint::BigInt;
