//! Formfactors of the exponential operator
//! `exp(a (2 pi / L) sum_{p>0} rho_1(p) / p)` between the ground state and
//! particle-hole states near one Fermi point:
//!
//! ```text
//! F_a = prod_{i<j}(p_i - p_j) prod_{i>j}(q_i - q_j) / prod_{i,j}(p_i - q_j)
//!       * prod_i f+(p_i) * prod_i f-(q_i)
//! f+(p) = Gamma(p + a) / (Gamma(p) Gamma(a))
//! f-(q) = Gamma(1 - q - a) / (Gamma(1 - q) Gamma(1 - a))
//! ```
//!
//! with particles `p_i > 0` and holes `q_i <= 0`. The Cauchy part is taken
//! with particles in descending and holes in ascending order, which makes
//! it positive for every valid configuration.

mod config;
mod enumerate;

pub use config::ParticleHoleConfig;
pub use enumerate::{enumerate_configs, enumerate_configs_with_cap, hole_channel_configs, DEFAULT_CAP};

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio, is_gamma_pole, ln_gamma_signed, recip_gamma, LogSigned};

/// `F_a` for a configuration, measured from its Fermi point.
pub fn formfactor(config: &ParticleHoleConfig, a: f64) -> Result<LogSigned> {
    let (particles, holes) = config.relative();
    formfactor_at_positions(&particles, &holes, a)
}

/// `F_a` at arbitrary integer positions.
///
/// Beyond valid configurations this accepts a particle at `0` paired with a
/// hole at `0`: the vanishing `1/Gamma(0)` of the particle factor and the
/// Cauchy pole `1/(0 - 0)` are combined into their limit
/// `lim_{x->0} 1/(x Gamma(x)) = 1`, taken along the particle position.
/// This is the situation produced by the high-energy shift reduction.
pub fn formfactor_at_positions(particles: &[i64], holes: &[i64], a: f64) -> Result<LogSigned> {
    if particles.len() != holes.len() {
        return Err(Error::InvalidConfig(format!(
            "{} particles but {} holes",
            particles.len(),
            holes.len()
        )));
    }
    if particles.is_empty() {
        return Ok(LogSigned::ONE);
    }
    if is_gamma_pole(a) {
        return Err(Error::GammaPole { arg: a });
    }
    for &q in holes {
        let arg = 1.0 - q as f64 - a;
        if is_gamma_pole(arg) {
            return Err(Error::GammaPole { arg });
        }
    }

    let mut ps = particles.to_vec();
    let mut qs = holes.to_vec();
    ps.sort_unstable_by(|x, y| y.cmp(x));
    qs.sort_unstable();
    if ps.windows(2).any(|w| w[0] == w[1]) || qs.windows(2).any(|w| w[0] == w[1]) {
        return Ok(LogSigned::ZERO);
    }

    let removable = ps.contains(&0) && qs.contains(&0);
    if let Some(&clash) = ps.iter().find(|p| **p != 0 && qs.contains(p)) {
        return Err(Error::InvalidConfig(format!(
            "particle and hole coincide at {clash}"
        )));
    }

    let mut value = LogSigned::ONE;
    for (i, &pi) in ps.iter().enumerate() {
        for &pj in &ps[i + 1..] {
            value *= LogSigned::from_f64((pi - pj) as f64);
        }
    }
    for (i, &qi) in qs.iter().enumerate() {
        for &qj in &qs[..i] {
            value *= LogSigned::from_f64((qi - qj) as f64);
        }
    }
    for &p in &ps {
        for &q in &qs {
            if removable && p == 0 && q == 0 {
                continue;
            }
            value /= LogSigned::from_f64((p - q) as f64);
        }
    }

    let inv_gamma_a = ln_gamma_signed(a)?.recip()?;
    for &p in &ps {
        if removable && p == 0 {
            // Gamma(a) / Gamma(a) * lim 1/(x Gamma(x))
            continue;
        }
        let p = p as f64;
        value *= gamma_ratio(p + a, p)? * inv_gamma_a;
    }
    let inv_gamma_1ma = recip_gamma(1.0 - a)?;
    for &q in &qs {
        let q = q as f64;
        value *= gamma_ratio(1.0 - q - a, 1.0 - q)? * inv_gamma_1ma;
    }
    Ok(value)
}

/// `sum |F_a|^2` over every configuration of momentum `m`, by enumeration.
pub fn sum_rule_bruteforce(m: u32, a: f64) -> Result<f64> {
    sum_rule_bruteforce_with_cap(m, a, DEFAULT_CAP)
}

pub fn sum_rule_bruteforce_with_cap(m: u32, a: f64, cap: u32) -> Result<f64> {
    enumerate_configs_with_cap(m, cap)?
        .iter()
        .map(|c| formfactor(c, a).map(LogSigned::abs_sq))
        .sum()
}

/// `F(m, a^2) = Gamma(a^2 + m) / (Gamma(m + 1) Gamma(a^2))`.
pub fn sum_rule_closed(m: u32, a2: f64) -> Result<f64> {
    sum_rule_closed_log(f64::from(m), a2).map(LogSigned::to_f64)
}

/// Same as [`sum_rule_closed`] for a real `m >= 0`, in log form.
pub(crate) fn sum_rule_closed_log(m: f64, a2: f64) -> Result<LogSigned> {
    if is_gamma_pole(a2) {
        return Err(Error::GammaPole { arg: a2 });
    }
    if m == 0.0 {
        return Ok(LogSigned::ONE);
    }
    Ok(gamma_ratio(a2 + m, m + 1.0)? / ln_gamma_signed(a2)?)
}

/// Smooth prefactor of the high-energy particle,
/// `f = (1/kbar) Gamma(kbar + a) / (Gamma(kbar) Gamma(a))` with
/// `kbar = L k / 2 pi`. The hole factor is the same function at `-a`.
pub fn smooth_factor_f(kbar: f64, a: f64) -> Result<f64> {
    smooth_factor_log(kbar, a).map(LogSigned::to_f64)
}

pub(crate) fn smooth_factor_log(kbar: f64, a: f64) -> Result<LogSigned> {
    if !(kbar.is_finite() && kbar > 0.0) {
        return Err(Error::invalid("kbar", format!("must be > 0, got {kbar}")));
    }
    if is_gamma_pole(a) {
        return Err(Error::GammaPole { arg: a });
    }
    Ok(gamma_ratio(kbar + a, kbar)? / ln_gamma_signed(a)? / LogSigned::from_f64(kbar))
}

/// Large-`kbar` form `kbar^(a-1) / Gamma(a)` of [`smooth_factor_f`].
pub fn smooth_factor_asymptotic(kbar: f64, a: f64) -> Result<f64> {
    if !(kbar.is_finite() && kbar > 0.0) {
        return Err(Error::invalid("kbar", format!("must be > 0, got {kbar}")));
    }
    Ok(kbar.powf(a - 1.0) * recip_gamma(a)?.to_f64())
}

/// Positions of the composite state reached when the operator acts on the
/// one-extra-particle state: every level drops by one quantum and a hole
/// opens at the Fermi point. Returns `(particles, holes)`.
pub fn composite_positions(p: i64, config: &ParticleHoleConfig) -> (Vec<i64>, Vec<i64>) {
    let (ps, qs) = config.relative();
    let particles = std::iter::once(p - 1).chain(ps.iter().map(|x| x - 1)).collect();
    let holes = qs.iter().map(|x| x - 1).chain(std::iter::once(0)).collect();
    (particles, holes)
}

/// Relative deviation of the exact formfactor of the composite state
/// (high-energy particle at `p` on top of `config`) from the factorized
/// form `f(p - 1) F_{a-1}(config)`.
///
/// The two sides agree up to the phase `(-1)^n`, so magnitudes are compared.
/// The factorization is exact for the empty configuration and otherwise
/// holds up to `prod_i (p - p_i)/(p - q_i) = 1 + O(1/p)`.
pub fn shift_reduction_check(p: i64, config: &ParticleHoleConfig, a: f64) -> Result<f64> {
    if config.origin() != 0 {
        return Err(Error::InvalidConfig(
            "shift reduction needs a configuration at the standard Fermi point".into(),
        ));
    }
    if p < 2 {
        return Err(Error::invalid("p", format!("must be >= 2, got {p}")));
    }
    if let Some(&top) = config.particles().last() {
        if p <= top {
            return Err(Error::InvalidConfig(format!(
                "high-energy particle at {p} overlaps the low-energy particle at {top}"
            )));
        }
    }
    let (particles, holes) = composite_positions(p, config);
    let full = formfactor_at_positions(&particles, &holes, a)?;
    let reduced = smooth_factor_log((p - 1) as f64, a)? * formfactor(config, a - 1.0)?;
    if full.is_zero() || reduced.is_zero() {
        return Err(Error::Numeric("vanishing formfactor in shift reduction".into()));
    }
    Ok((full.log_abs() - reduced.log_abs()).exp_m1().abs())
}
