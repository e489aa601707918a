//! Joint image sets of homogeneous functions, S-Lemma multipliers and
//! Lyapunov certificates for switched systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`homog`] holds generalized polynomials (sums of signed fractional
//!   powers), dilations and the generalized unit sphere.
//! * [`stp`] converts between coefficient vectors on tensor powers and
//!   ordinary polynomials, and homogenizes.
//! * [`image`] samples and classifies `U = {(f(x), g(x))}`.
//! * [`lemma`] decides copositivity and searches for multipliers.
//! * [`switched`] checks Lyapunov coverage and synthesizes stabilizing
//!   convex combinations.
//! * [`cli`] is the command-line front end over problem files.

// `!(a < b)` is used on purpose so that NaN fails a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod homog;
pub mod image;
pub mod interval;
pub mod lemma;
pub mod stp;
pub mod switched;

pub use error::{Error, Result};
pub use homog::{Dilation, GeneralizedPolynomial, Parity, SignedMonomial};
