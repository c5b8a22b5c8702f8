//! Universal low-energy formfactors of the non-linear Luttinger liquid and the
//! threshold singularities of one-dimensional dynamical correlators built
//! from them.
//!
//! The crate is organised bottom-up:
//!
//! - [`gamma`]: sign-tracked log-gamma and the [`LogSigned`] number type.
//! - [`channels`]: physical parameters and the exponent set of every
//!   supported correlator channel.
//! - [`formfactors`]: exponential-operator formfactors, particle-hole
//!   enumeration, the closed-form sum rule and the high-energy shift
//!   reduction.
//! - [`spectral`]: finite-size formfactor sums, the continuum threshold
//!   forms, the small-momentum structure factor and prefactor relations.
//! - [`cli`]: configuration, scans and tabular export behind the `nlll`
//!   binary.
//!
//! All outputs are exact up to a single non-universal normalization, the
//! combination `L^alpha |<1|psi^+|0>|^2` (or equivalently the asymptotic
//! prefactor `C0`), which is an input.

pub mod channels;
pub mod cli;
mod error;
pub mod formfactors;
pub mod gamma;
pub mod spectral;

pub use channels::{
    exponents_for_channel, raw_exponents, threshold_energy, Branch, ChannelKind, ChannelSpec,
    ExponentSet, LuttingerParams, OmegaSign,
};
pub use error::{Error, Result};
pub use gamma::LogSigned;
