use std::f64::consts::PI;

use crate::channels::{
    branch_energy, exponents_for_channel, threshold_velocities, Branch, ChannelKind, ChannelSpec,
    ExponentSet, LuttingerParams,
};
use crate::error::{Error, Result};
use crate::gamma::{ln_gamma_signed, recip_gamma, sin_pi};

use super::SpectralPoint;

/// Extra factor carried by a channel relative to the single-particle
/// spectral density. The 2p_F density channels carry `2 pi`.
pub(crate) fn channel_factor(kind: ChannelKind) -> f64 {
    match kind {
        ChannelKind::Density2pfParticle | ChannelKind::Density2pfHole => 2.0 * PI,
        _ => 1.0,
    }
}

/// Continuum threshold law of one channel at fixed momentum:
///
/// ```text
/// A(omega) = universal * momentum * velocity * ff_norm * side(domega) * |domega|^(-mu)
/// ```
///
/// Particle-type channels have `side = sin(pi d2)` above and `sin(pi d1)`
/// below the threshold; hole-type channels have `side = theta(domega)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdLaw {
    pub channel: ChannelSpec,
    pub exponents: ExponentSet,
    pub k: f64,
    /// `epsilon_1(k)` or `epsilon_2(k)`.
    pub threshold: f64,
    /// `(C1, C2) = (|v_d - v|, v_d + v)`.
    pub velocities: (f64, f64),
    /// `k^(2a' - 2) / Gamma(a')^2` with `a' = +a` (particle) or `-a` (hole).
    pub momentum_factor: f64,
    /// `1 / (C1^d1 C2^d2)`.
    pub velocity_factor: f64,
    /// `(2 pi)^(1 - alpha) Gamma(mu) / pi` (particle) or
    /// `(2 pi)^(1 - alpha) / Gamma(d1 + d2)` (hole), times the channel factor.
    pub universal_factor: f64,
    pub ff_norm: f64,
    pub side_above: f64,
    pub side_below: f64,
}

impl ThresholdLaw {
    pub fn new(channel: ChannelSpec, k: f64, params: &LuttingerParams) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::invalid("k", format!("must be > 0, got {k}")));
        }
        let e = exponents_for_channel(channel, params.xi())?;
        let (c1, c2) = threshold_velocities(e.branch, k, params);
        if c2 <= 0.0 {
            return Err(Error::invalid(
                "k",
                format!("k = {k} exceeds 2 m v; the hole threshold velocity v + v_d is not positive"),
            ));
        }
        let (d1, d2) = (e.d1(), e.d2());
        let a = e.signed_a();
        let inv_gamma_a = recip_gamma(a)?.to_f64();
        let momentum_factor = k.powf(2.0 * a - 2.0) * inv_gamma_a * inv_gamma_a;
        let velocity_factor = 1.0 / (c1.powf(d1) * c2.powf(d2));
        let base = (2.0 * PI).powf(1.0 - e.alpha) * channel_factor(channel.kind());
        let (universal_factor, side_above, side_below) = match e.branch {
            Branch::Upper => {
                if e.mu <= 0.0 {
                    return Err(Error::NoIntegrableSingularity {
                        channel: channel.to_string(),
                        mu: e.mu,
                    });
                }
                let g = ln_gamma_signed(e.mu)?.to_f64();
                (base * g / PI, sin_pi(d2), sin_pi(d1))
            }
            Branch::Lower => {
                let g = recip_gamma(d1 + d2)?.to_f64();
                (base * g, 1.0, 0.0)
            }
        };
        Ok(ThresholdLaw {
            channel,
            exponents: e,
            k,
            threshold: branch_energy(e.branch, k, params),
            velocities: (c1, c2),
            momentum_factor,
            velocity_factor,
            universal_factor,
            ff_norm: params.ff_norm(e.alpha),
            side_above,
            side_below,
        })
    }

    /// Log-log slope `-mu` of the law on either side.
    pub fn exponent(&self) -> f64 {
        -self.exponents.mu
    }

    /// Coefficient of `|domega|^(-mu)` above (`above = true`) or below the
    /// threshold.
    pub fn amplitude(&self, above: bool) -> f64 {
        let side = if above { self.side_above } else { self.side_below };
        self.universal_factor * self.momentum_factor * self.velocity_factor * self.ff_norm * side
    }

    /// `A` at offset `domega` from the threshold.
    pub fn eval(&self, domega: f64) -> Result<f64> {
        if domega == 0.0 {
            return Err(Error::Numeric("continuum form evaluated exactly at the threshold".into()));
        }
        let amp = self.amplitude(domega > 0.0);
        if amp == 0.0 {
            return Ok(0.0);
        }
        Ok(amp * domega.abs().powf(self.exponent()))
    }

    /// Average of the law over `lo <= |domega| <= hi` on one side.
    pub fn bin_average(&self, lo: f64, hi: f64, above: bool) -> f64 {
        let p = 1.0 + self.exponent();
        let integral = if p.abs() < 1e-14 {
            (hi / lo).ln()
        } else {
            (hi.powf(p) - lo.powf(p)) / p
        };
        self.amplitude(above) * integral / (hi - lo)
    }

    pub fn point(&self, omega: f64) -> Result<SpectralPoint> {
        let domega = omega - self.threshold;
        Ok(SpectralPoint {
            omega,
            k: self.k,
            domega,
            a_value: self.eval(domega)?,
        })
    }
}

fn checked_law(
    channel: ChannelSpec,
    k: f64,
    params: &LuttingerParams,
    branch: Branch,
) -> Result<ThresholdLaw> {
    if channel.branch() != branch {
        return Err(Error::WrongChannelType {
            channel: channel.to_string(),
            expected: match branch {
                Branch::Upper => "particle",
                Branch::Lower => "hole",
            },
        });
    }
    ThresholdLaw::new(channel, k, params)
}

/// Two-sided particle threshold around `epsilon_1(k) = vk + k^2/2m`.
pub fn continuum_particle(
    omega: f64,
    k: f64,
    params: &LuttingerParams,
    channel: ChannelSpec,
) -> Result<SpectralPoint> {
    checked_law(channel, k, params, Branch::Upper)?.point(omega)
}

/// One-sided hole threshold above `epsilon_2(k) = vk - k^2/2m`.
pub fn continuum_hole(
    omega: f64,
    k: f64,
    params: &LuttingerParams,
    channel: ChannelSpec,
) -> Result<SpectralPoint> {
    checked_law(channel, k, params, Branch::Lower)?.point(omega)
}

/// Dispatches to the particle or hole form by channel type.
pub fn continuum(
    omega: f64,
    k: f64,
    params: &LuttingerParams,
    channel: ChannelSpec,
) -> Result<SpectralPoint> {
    ThresholdLaw::new(channel, k, params)?.point(omega)
}

/// `|<k|O^+|0>|^2 = k^(2a-2) (2 pi / L)^(2-2a) / Gamma(a)^2 * |<1|O^+|0>|^2`,
/// with `|<1|O^+|0>|^2 = ff_norm / L^alpha`. Pass `-a` for hole channels.
pub fn kdep_formfactor(k: f64, params: &LuttingerParams, a: f64, alpha: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::invalid("k", format!("must be > 0, got {k}")));
    }
    let l = params.length();
    let inv_gamma = recip_gamma(a)?.to_f64();
    let lowest = params.ff_norm(alpha) * l.powf(-alpha);
    Ok(k.powf(2.0 * a - 2.0) * (2.0 * PI / l).powf(2.0 - 2.0 * a) * inv_gamma * inv_gamma * lowest)
}

/// The continuum law written through the momentum-resolved formfactor
/// `|<k|O^+|0>|^2` instead of the explicit `k` and `Gamma(a)` factors.
pub fn continuum_from_formfactor(
    omega: f64,
    k: f64,
    params: &LuttingerParams,
    channel: ChannelSpec,
    kff: f64,
) -> Result<SpectralPoint> {
    let law = ThresholdLaw::new(channel, k, params)?;
    let e = law.exponents;
    let l = params.length();
    let domega = omega - law.threshold;
    if domega == 0.0 {
        return Err(Error::Numeric("continuum form evaluated exactly at the threshold".into()));
    }
    let side = if domega > 0.0 { law.side_above } else { law.side_below };
    let lift = l.powf(e.alpha) * (l / (2.0 * PI)).powf(2.0 - 2.0 * e.signed_a());
    let a_value = law.universal_factor * law.velocity_factor * kff * lift * side
        * domega.abs().powf(law.exponent());
    Ok(SpectralPoint {
        omega,
        k,
        domega,
        a_value,
    })
}
