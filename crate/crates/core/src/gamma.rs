//! Sign-tracked log-gamma arithmetic.
//!
//! Formfactors are long products of gamma ratios and Cauchy factors whose
//! magnitudes overflow `f64` for moderate particle positions, and several
//! of the gamma arguments are negative (`Gamma(1 - q - a)` for `a > 1`, the
//! hole factor `Gamma(-a)`). Everything is therefore carried as a
//! [`LogSigned`] pair `(ln|x|, sign x)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, DivAssign, Mul, MulAssign};

use crate::error::{Error, Result};

/// A real number stored as `sign * exp(log_abs)`.
///
/// Zero is represented exactly by `sign == 0` (and `log_abs == -inf`).
#[derive(Clone, Copy, PartialEq)]
pub struct LogSigned {
    log_abs: f64,
    sign: i8,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogSigned = LogSigned {
        log_abs: 0.0,
        sign: 1,
    };

    /// Builds a value from its parts. A zero sign forces the canonical zero.
    pub fn new(log_abs: f64, sign: i8) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            LogSigned {
                log_abs,
                sign: sign.signum(),
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogSigned {
                log_abs: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn log_abs(self) -> f64 {
        self.log_abs
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        LogSigned {
            log_abs: self.log_abs,
            sign: self.sign.abs(),
        }
    }

    /// `|x|^2`, returned as a plain real.
    pub fn abs_sq(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            (2.0 * self.log_abs).exp()
        }
    }

    pub fn recip(self) -> Result<Self> {
        if self.sign == 0 {
            return Err(Error::Numeric("reciprocal of zero".into()));
        }
        Ok(LogSigned {
            log_abs: -self.log_abs,
            sign: self.sign,
        })
    }

    /// Real power of a positive value.
    pub fn powf(self, exponent: f64) -> Result<Self> {
        match self.sign {
            1 => Ok(LogSigned {
                log_abs: self.log_abs * exponent,
                sign: 1,
            }),
            0 if exponent > 0.0 => Ok(Self::ZERO),
            _ => Err(Error::Numeric(format!(
                "real power {exponent} of non-positive value"
            ))),
        }
    }
}

impl fmt::Debug for LogSigned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogSigned({:+} * e^{})", self.sign, self.log_abs)
    }
}

impl Mul for LogSigned {
    type Output = LogSigned;

    fn mul(self, rhs: LogSigned) -> LogSigned {
        if self.sign == 0 || rhs.sign == 0 {
            return LogSigned::ZERO;
        }
        LogSigned {
            log_abs: self.log_abs + rhs.log_abs,
            sign: self.sign * rhs.sign,
        }
    }
}

impl MulAssign for LogSigned {
    fn mul_assign(&mut self, rhs: LogSigned) {
        *self = *self * rhs;
    }
}

/// Division by zero yields a NaN magnitude; use [`LogSigned::recip`] where
/// the divisor may vanish.
impl Div for LogSigned {
    type Output = LogSigned;

    fn div(self, rhs: LogSigned) -> LogSigned {
        if self.sign == 0 {
            return LogSigned::ZERO;
        }
        if rhs.sign == 0 {
            return LogSigned {
                log_abs: f64::NAN,
                sign: self.sign,
            };
        }
        LogSigned {
            log_abs: self.log_abs - rhs.log_abs,
            sign: self.sign * rhs.sign,
        }
    }
}

impl DivAssign for LogSigned {
    fn div_assign(&mut self, rhs: LogSigned) {
        *self = *self / rhs;
    }
}

impl std::iter::Product for LogSigned {
    fn product<I: Iterator<Item = LogSigned>>(iter: I) -> Self {
        iter.fold(LogSigned::ONE, |acc, x| acc * x)
    }
}

/// `sin(pi x)` with exact argument reduction, so integers give exact zeros.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    let (s, y) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let y = if y > 0.5 { 1.0 - y } else { y };
    if y == 0.0 {
        return 0.0;
    }
    s * (PI * y).sin()
}

/// True when `x` is a pole of the gamma function.
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `Gamma(x)` as a sign-tracked logarithm.
///
/// Uses the library log-gamma for `x >= 1/2` and the reflection
/// `Gamma(x) = pi / (sin(pi x) Gamma(1 - x))` below it, which fixes the sign
/// on the negative axis.
pub fn ln_gamma_signed(x: f64) -> Result<LogSigned> {
    if !x.is_finite() {
        return Err(Error::Numeric(format!("gamma of non-finite argument {x}")));
    }
    if is_gamma_pole(x) {
        return Err(Error::GammaPole { arg: x });
    }
    if x >= 0.5 {
        return Ok(LogSigned::new(libm::lgamma(x), 1));
    }
    let s = sin_pi(x);
    let log_abs = PI.ln() - s.abs().ln() - libm::lgamma(1.0 - x);
    Ok(LogSigned::new(log_abs, if s > 0.0 { 1 } else { -1 }))
}

/// `1 / Gamma(x)`, which is entire: exact zero at the poles of `Gamma`.
pub fn recip_gamma(x: f64) -> Result<LogSigned> {
    if is_gamma_pole(x) {
        return Ok(LogSigned::ZERO);
    }
    ln_gamma_signed(x)?.recip()
}

/// `Gamma(num) / Gamma(den)`; a pole in the denominator gives zero.
pub fn gamma_ratio(num: f64, den: f64) -> Result<LogSigned> {
    Ok(ln_gamma_signed(num)? * recip_gamma(den)?)
}
