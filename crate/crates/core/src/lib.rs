//! Stabilizer-complexity diagnostics for small pure states.
//!
//! The crate computes, exactly and densely, the characteristic distribution
//! `p(x) = 2^{-n} <psi|W_x|psi>^2` of a state over all Weyl operators, its
//! self-convolution `q` (the law of Bell difference sampling) and the
//! statistic `eta = E_{x~q} <psi|W_x|psi>^2`. Low-stabilizer-complexity
//! states have `eta >= F_S^6`, while Haar-random states have `eta` close to
//! `2^{-n}`; [`sampler::distinguish`] estimates `eta` from simulated
//! measurements and thresholds it.
//!
//! Modules:
//!
//! - [`weyl`]: Weyl operator bit algebra and action on states.
//! - [`state`]: dense state vectors, Haar sampling, tensor products.
//! - [`circuit`]: the `.qct` Clifford+T format and simulator.
//! - [`spectra`]: `p`, `q`, Fourier coefficients, eta.
//! - [`stabset`]: stabilizer enumeration, brute-force fidelity, extent bounds.
//! - [`sampler`]: Bell difference sampling and the distinguisher.
//! - [`bounds`]: closed-form concentration bounds and constants.

pub mod bounds;
pub mod circuit;
pub mod error;
pub mod limits;
pub mod rng;
pub mod sampler;
pub mod spectra;
pub mod stabset;
pub mod state;
pub mod weyl;

pub use error::{Error, Result};
pub use state::StateVector;
pub use weyl::WeylIndex;
