use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("gamma function pole at argument {arg}")]
    GammaPole { arg: f64 },

    #[error("degenerate channel {channel} at xi = {xi}: {reason}")]
    DegenerateChannel {
        channel: String,
        xi: f64,
        reason: String,
    },

    #[error(
        "channel {channel} has threshold exponent mu = {mu} <= 0; \
         the continuum particle form has no integrable singularity there"
    )]
    NoIntegrableSingularity { channel: String, mu: f64 },

    #[error("channel {channel} is not a {expected}-type channel")]
    WrongChannelType {
        channel: String,
        expected: &'static str,
    },

    #[error("enumeration cap exceeded: m = {m} > cap = {cap}")]
    CapExceeded { m: u32, cap: u32 },

    #[error("invalid particle-hole configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "qmax = {qmax} cannot populate the requested window [{lo}, {hi}]; \
         usable |domega| range is [{reach_lo}, {reach_hi}]"
    )]
    Unreachable {
        qmax: u32,
        lo: f64,
        hi: f64,
        reach_lo: f64,
        reach_hi: f64,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
