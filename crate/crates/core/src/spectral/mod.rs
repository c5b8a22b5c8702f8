//! Spectral density near the threshold of a high-energy particle or hole.
//!
//! Two estimates are provided for every channel: the finite-size sum over
//! the low-energy excitations ([`finite_l_sum`]), which is a brute-force
//! check, and the continuum threshold law ([`continuum`] and friends). A
//! small-momentum density structure factor ([`dsf_step`]) and the
//! conversion between the asymptotic prefactor `C0` and the invariant
//! normalization `ff_norm = L^alpha |<1|psi^+|0>|^2` complete the module.

mod continuum;
mod finite;
mod fit;

use serde::Serialize;

use crate::channels::LuttingerParams;

pub use continuum::{
    continuum, continuum_from_formfactor, continuum_hole, continuum_particle, kdep_formfactor,
    ThresholdLaw,
};
pub use finite::{finite_l_sum, tail_coefficient, BinSpec, TAIL_TOLERANCE, Histogram, SideGeometry, SpectralHistogram};
pub use fit::{analyze, analyze_in, fit_fixed_exponent, fit_power_law, FitWindow, PowerLawFit, SideAnalysis, ThresholdAnalysis};

/// One sample of the spectral density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub omega: f64,
    pub k: f64,
    /// `omega` minus the channel threshold.
    pub domega: f64,
    pub a_value: f64,
}

/// `ff_norm = c0 * 2^(alpha - 1)`.
pub fn prefactor_from_c0(c0: f64, alpha: f64) -> f64 {
    c0 * (alpha - 1.0).exp2()
}

/// Inverse of [`prefactor_from_c0`].
pub fn c0_from_prefactor(ff_norm: f64, alpha: f64) -> f64 {
    ff_norm * (1.0 - alpha).exp2()
}

/// Quasiparticle contribution to the density structure factor at small
/// `k`: `m / (k xi)` inside `[eps_2(k), eps_1(k)]`, zero outside.
pub fn dsf_step(omega: f64, k: f64, params: &LuttingerParams) -> f64 {
    let (lo, hi) = dsf_band(k, params);
    if omega >= lo && omega <= hi {
        params.m_eff() / (k * params.xi())
    } else {
        0.0
    }
}

/// `(eps_2(k), eps_1(k))` for `k >= 0`.
pub fn dsf_band(k: f64, params: &LuttingerParams) -> (f64, f64) {
    let k = k.abs();
    let (v, m) = (params.v(), params.m_eff());
    (v * k - k * k / (2.0 * m), v * k + k * k / (2.0 * m))
}
