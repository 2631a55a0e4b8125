//! High-precision evaluation of hyperbolic-sine analogues of Eisenstein
//! series, generalized Hurwitz numbers and functions, and q-zeta values.
//!
//! Every quantity is reachable by up to three independent routes: lattice
//! summation ([`lattice`]), contour extraction of generating-function
//! coefficients ([`theta`], [`laurent`], [`kernel`]) and exact symbolic
//! closed forms ([`ring`], [`closed_form`]).

pub mod bernoulli;
pub mod closed_form;
pub mod eisenstein_exact;
pub mod error;
pub mod evaluate;
pub mod expfrac;
pub mod input;
pub mod kernel;
pub mod laurent;
pub mod lattice;
pub mod params;
pub mod precision;
pub mod qzeta;
pub mod ring;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use params::{LatticeBasis, TwistParams};
pub use precision::{Constants, Context, HPComplex, HPReal, PrecisionConfig};
