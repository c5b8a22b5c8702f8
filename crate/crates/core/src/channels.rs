//! Physical parameters and per-channel threshold exponents.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Non-universal normalization of a channel: either the asymptotic
/// prefactor `C0` or the finite-size invariant `L^alpha |<1|O^+|0>|^2`
/// directly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    C0(f64),
    FfNorm(f64),
}

/// Parameters of the non-linear Luttinger liquid.
///
/// `length` is only read by finite-size operations; continuum formulas
/// depend on it solely through the normalization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LuttingerParams {
    xi: f64,
    v: f64,
    m_eff: f64,
    length: f64,
    norm: Normalization,
}

fn positive(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {x}")))
    }
}

impl LuttingerParams {
    /// Parameters with the default normalization `C0 = 1`.
    pub fn new(xi: f64, v: f64, m_eff: f64, length: f64) -> Result<Self> {
        Ok(LuttingerParams {
            xi: positive("xi", xi)?,
            v: positive("v", v)?,
            m_eff: positive("m_eff", m_eff)?,
            length: positive("length", length)?,
            norm: Normalization::C0(1.0),
        })
    }

    pub fn with_c0(mut self, c0: f64) -> Result<Self> {
        self.norm = Normalization::C0(positive("c0", c0)?);
        Ok(self)
    }

    pub fn with_ff_norm(mut self, ff_norm: f64) -> Result<Self> {
        self.norm = Normalization::FfNorm(positive("ff_norm", ff_norm)?);
        Ok(self)
    }

    pub fn with_length(mut self, length: f64) -> Result<Self> {
        self.length = positive("length", length)?;
        Ok(self)
    }

    pub fn with_xi(mut self, xi: f64) -> Result<Self> {
        self.xi = positive("xi", xi)?;
        Ok(self)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn m_eff(&self) -> f64 {
        self.m_eff
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn normalization(&self) -> Normalization {
        self.norm
    }

    /// `L^alpha |<1|O^+|0>|^2` for a channel of scaling combination `alpha`.
    pub fn ff_norm(&self, alpha: f64) -> f64 {
        match self.norm {
            Normalization::FfNorm(n) => n,
            Normalization::C0(c0) => crate::spectral::prefactor_from_c0(c0, alpha),
        }
    }

    /// `C0` implied by the normalization at a given `alpha`.
    pub fn c0(&self, alpha: f64) -> f64 {
        match self.norm {
            Normalization::C0(c0) => c0,
            Normalization::FfNorm(n) => crate::spectral::c0_from_prefactor(n, alpha),
        }
    }
}

/// Correlator channel.
///
/// Fermion particle/hole and the 2p_F density channels live at `omega > 0`;
/// the `FermionLeft*` channels are the `omega < 0` fermion case. Boson
/// channels exist at either sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelKind {
    FermionParticle,
    FermionHole,
    FermionLeftParticle,
    FermionLeftHole,
    Density2pfParticle,
    Density2pfHole,
    BosonParticle,
    BosonHole,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 8] = [
        ChannelKind::FermionParticle,
        ChannelKind::FermionHole,
        ChannelKind::FermionLeftParticle,
        ChannelKind::FermionLeftHole,
        ChannelKind::Density2pfParticle,
        ChannelKind::Density2pfHole,
        ChannelKind::BosonParticle,
        ChannelKind::BosonHole,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::FermionParticle => "FermionParticle",
            ChannelKind::FermionHole => "FermionHole",
            ChannelKind::FermionLeftParticle => "FermionLeftParticle",
            ChannelKind::FermionLeftHole => "FermionLeftHole",
            ChannelKind::Density2pfParticle => "Density2pfParticle",
            ChannelKind::Density2pfHole => "Density2pfHole",
            ChannelKind::BosonParticle => "BosonParticle",
            ChannelKind::BosonHole => "BosonHole",
        }
    }

    fn is_particle(self) -> bool {
        matches!(
            self,
            ChannelKind::FermionParticle
                | ChannelKind::FermionLeftParticle
                | ChannelKind::Density2pfParticle
                | ChannelKind::BosonParticle
        )
    }

    fn native_sign(self) -> OmegaSign {
        match self {
            ChannelKind::FermionLeftParticle | ChannelKind::FermionLeftHole => OmegaSign::Negative,
            _ => OmegaSign::Positive,
        }
    }

    fn is_boson(self) -> bool {
        matches!(self, ChannelKind::BosonParticle | ChannelKind::BosonHole)
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid("channel", format!("unknown channel `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaSign {
    Positive,
    Negative,
}

/// A channel together with the sign of frequency it is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelSpec {
    kind: ChannelKind,
    omega_sign: OmegaSign,
}

impl ChannelSpec {
    /// The channel at its natural frequency sign.
    pub fn new(kind: ChannelKind) -> Self {
        ChannelSpec {
            kind,
            omega_sign: kind.native_sign(),
        }
    }

    /// Only boson channels may be requested at the opposite sign.
    pub fn with_sign(kind: ChannelKind, omega_sign: OmegaSign) -> Result<Self> {
        if omega_sign != kind.native_sign() && !kind.is_boson() {
            return Err(Error::invalid(
                "omega_sign",
                format!("{kind} is only defined at {:?} frequency", kind.native_sign()),
            ));
        }
        Ok(ChannelSpec { kind, omega_sign })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn omega_sign(&self) -> OmegaSign {
        self.omega_sign
    }

    /// The kind whose exponent set is used. Bosons at `omega < 0` swap the
    /// particle and hole sets.
    fn exponent_source(&self) -> ChannelKind {
        match (self.kind, self.omega_sign) {
            (ChannelKind::BosonParticle, OmegaSign::Negative) => ChannelKind::BosonHole,
            (ChannelKind::BosonHole, OmegaSign::Negative) => ChannelKind::BosonParticle,
            (k, _) => k,
        }
    }

    pub fn branch(&self) -> Branch {
        if self.exponent_source().is_particle() {
            Branch::Upper
        } else {
            Branch::Lower
        }
    }

    pub fn is_particle(&self) -> bool {
        self.branch() == Branch::Upper
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.omega_sign == self.kind.native_sign() {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}[omega<0]", self.kind)
        }
    }
}

/// Threshold dispersion: `Upper` is `vk + k^2/2m` (particle-type
/// thresholds), `Lower` is `vk - k^2/2m` (hole-type).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Upper,
    Lower,
}

/// Exponents of one channel at one `xi`.
///
/// For hole-type channels `delta1`/`delta2` hold the effective exponents
/// `2 - delta1`, `delta2` of the high-energy hole, so that every downstream
/// formula reads them uniformly; `a` is always the positive-branch value and
/// [`ExponentSet::signed_a`] gives the `-a` that hole formulas use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentSet {
    pub a: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub alpha: f64,
    pub mu: f64,
    pub branch: Branch,
}

/// Absolute distance below which a gamma argument counts as a pole.
const POLE_TOLERANCE: f64 = 1e-14;

fn near_pole(x: f64, tol: f64) -> bool {
    let n = x.round();
    n <= 0.0 && (x - n).abs() <= tol * n.abs().max(1.0)
}

impl ExponentSet {
    /// `+a` for particle-type thresholds, `-a` for hole-type.
    pub fn signed_a(&self) -> f64 {
        match self.branch {
            Branch::Upper => self.a,
            Branch::Lower => -self.a,
        }
    }

    pub fn d1(&self) -> f64 {
        self.delta1 * self.delta1
    }

    pub fn d2(&self) -> f64 {
        self.delta2 * self.delta2
    }

    /// `alpha - (-1 + 2a' + delta1^2 + delta2^2)` with `a' = signed_a()`:
    /// vanishes when the powers of `L` cancel.
    pub fn cancellation_residual(&self) -> f64 {
        self.alpha - (-1.0 + 2.0 * self.signed_a() + self.d1() + self.d2())
    }

    /// Gamma arguments the channel's closed forms and finite sums need,
    /// with their pole tolerance. Squares of small deltas get the squared
    /// tolerance.
    fn gamma_arguments(&self) -> [(&'static str, f64, f64); 5] {
        let (d1, d2) = (self.d1(), self.d2());
        let (t, t2) = (POLE_TOLERANCE, POLE_TOLERANCE * POLE_TOLERANCE);
        match self.branch {
            Branch::Upper => [
                ("Gamma(a)", self.a, t),
                ("Gamma(1-a)", 1.0 - self.a, t),
                ("Gamma(delta1^2)", d1, t2),
                ("Gamma(delta2^2)", d2, t2),
                ("Gamma(1-delta1^2-delta2^2)", 1.0 - d1 - d2, t),
            ],
            Branch::Lower => [
                ("Gamma(-a)", -self.a, t),
                ("Gamma(1+a)", 1.0 + self.a, t),
                ("Gamma(delta1^2)", d1, t2),
                ("Gamma(delta2^2)", d2, t2),
                ("Gamma(delta1^2+delta2^2)", d1 + d2, t2),
            ],
        }
    }

    /// Describes the first gamma argument sitting on a pole, if any.
    pub fn degeneracy(&self) -> Option<String> {
        self.gamma_arguments()
            .into_iter()
            .find(|&(_, x, tol)| near_pole(x, tol))
            .map(|(name, x, _)| format!("{name} argument {x} is a gamma pole"))
    }
}

/// Exponent set without the degenerate-point check.
pub fn raw_exponents(channel: ChannelSpec, xi: f64) -> Result<ExponentSet> {
    let xi = positive("xi", xi)?;
    let s = xi.sqrt();
    let branch = channel.branch();
    let (a, delta1, delta2, alpha) = match channel.exponent_source() {
        ChannelKind::FermionParticle | ChannelKind::FermionHole => {
            let a = 0.5 * (s + 1.0 / s);
            let d1 = 1.0 - a;
            let d2 = 0.5 * (s - 1.0 / s);
            let d1 = if branch == Branch::Lower { 2.0 - d1 } else { d1 };
            (a, d1, d2, 0.5 * (xi + 1.0 / xi))
        }
        ChannelKind::FermionLeftParticle | ChannelKind::FermionLeftHole => {
            let a = 0.5 * (1.0 / s - s);
            let d1 = 0.5 * (s + 1.0 / s);
            let d2 = 1.0 - a;
            let d2 = if branch == Branch::Lower { 2.0 - d2 } else { d2 };
            (a, d1, d2, 0.5 * (xi + 1.0 / xi))
        }
        ChannelKind::Density2pfParticle | ChannelKind::Density2pfHole => {
            let a = 1.0 / s;
            let d1 = 1.0 - 1.0 / s;
            let d1 = if branch == Branch::Lower { 2.0 - d1 } else { d1 };
            (a, d1, 1.0 / s, 2.0 / xi)
        }
        ChannelKind::BosonParticle | ChannelKind::BosonHole => {
            let a = 0.5 * s;
            let d1 = 1.0 - 0.5 * s;
            let d1 = if branch == Branch::Lower { 2.0 - d1 } else { d1 };
            (a, d1, 0.5 * s, 0.5 * xi)
        }
    };
    Ok(ExponentSet {
        a,
        delta1,
        delta2,
        alpha,
        mu: 1.0 - delta1 * delta1 - delta2 * delta2,
        branch,
    })
}

/// Exponent set of a channel, refusing degenerate parameter points.
pub fn exponents_for_channel(channel: ChannelSpec, xi: f64) -> Result<ExponentSet> {
    let set = raw_exponents(channel, xi)?;
    match set.degeneracy() {
        Some(reason) => Err(Error::DegenerateChannel {
            channel: channel.to_string(),
            xi,
            reason,
        }),
        None => Ok(set),
    }
}

/// Threshold energy `vk + k^2/2m` (upper) or `vk - k^2/2m` (lower).
///
/// The formulas built on it assume `0 < k << p_F`; larger `k` is accepted
/// and evaluated literally.
pub fn threshold_energy(channel: ChannelSpec, k: f64, params: &LuttingerParams) -> Result<f64> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::invalid("k", format!("must be finite and >= 0, got {k}")));
    }
    Ok(branch_energy(channel.branch(), k, params))
}

pub(crate) fn branch_energy(branch: Branch, k: f64, params: &LuttingerParams) -> f64 {
    let curvature = k * k / (2.0 * params.m_eff);
    match branch {
        Branch::Upper => params.v * k + curvature,
        Branch::Lower => params.v * k - curvature,
    }
}

/// Velocities `(C1, C2) = (|v_d - v|, v_d + v)` with `v_d = v + k/m` for
/// particle thresholds and `v_d = v - k/m` for hole thresholds.
pub fn threshold_velocities(branch: Branch, k: f64, params: &LuttingerParams) -> (f64, f64) {
    let recoil = k / params.m_eff;
    match branch {
        Branch::Upper => (recoil, 2.0 * params.v + recoil),
        Branch::Lower => (recoil, 2.0 * params.v - recoil),
    }
}
