//! Power-law fits to binned spectral densities.

use serde::Serialize;

use crate::error::{Error, Result};

use super::continuum::ThresholdLaw;
use super::finite::{Histogram, SpectralHistogram};

/// Closed range of `|domega|` used for fitting. Only bins lying entirely
/// inside it are used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitWindow {
    pub lo: f64,
    pub hi: f64,
}

impl FitWindow {
    pub fn new(lo: f64, hi: f64) -> Self {
        FitWindow { lo, hi }
    }

    pub fn decades(&self) -> f64 {
        (self.hi / self.lo).log10()
    }

    fn contains_bin(&self, lo: f64, hi: f64) -> bool {
        lo >= self.lo && hi <= self.hi
    }
}

/// `A ~ exp(log_amplitude) |domega|^slope`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub log_amplitude: f64,
    pub bins: usize,
}

impl PowerLawFit {
    pub fn amplitude(&self) -> f64 {
        self.log_amplitude.exp()
    }
}

fn window_bins<'a>(
    hist: &'a Histogram,
    window: FitWindow,
) -> impl Iterator<Item = (f64, f64, f64)> + 'a {
    hist.bins()
        .filter(move |&(lo, hi, w)| window.contains_bin(lo, hi) && w > 0.0)
}

/// Least squares of `ln A` against `ln |domega|` at the geometric bin
/// centres, each bin weighted by its logarithmic width.
pub fn fit_power_law(hist: &Histogram, window: FitWindow) -> Result<PowerLawFit> {
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut n = 0;
    for (lo, hi, a) in window_bins(hist, window) {
        let w = (hi / lo).ln();
        let x = 0.5 * (lo.ln() + hi.ln());
        let y = a.ln();
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
        n += 1;
    }
    if n < 3 {
        return Err(Error::Numeric(format!(
            "only {n} populated bins in [{}, {}]",
            window.lo, window.hi
        )));
    }
    let (mx, my) = (sx / sw, sy / sw);
    let var = sxx / sw - mx * mx;
    let slope = (sxy / sw - mx * my) / var;
    Ok(PowerLawFit {
        slope,
        log_amplitude: my - slope * mx,
        bins: n,
    })
}

/// Amplitude of `A = c |domega|^exponent` with the exponent held fixed,
/// comparing each bin with the exact bin average of the power law.
pub fn fit_fixed_exponent(hist: &Histogram, window: FitWindow, exponent: f64) -> Result<f64> {
    let p = 1.0 + exponent;
    let (mut sw, mut sy) = (0.0, 0.0);
    for (lo, hi, a) in window_bins(hist, window) {
        let unit_avg = if p.abs() < 1e-14 {
            (hi / lo).ln() / (hi - lo)
        } else {
            (hi.powf(p) - lo.powf(p)) / (p * (hi - lo))
        };
        let w = (hi / lo).ln();
        sw += w;
        sy += w * (a / unit_avg).ln();
    }
    if sw == 0.0 {
        return Err(Error::Numeric(format!(
            "no populated bins in [{}, {}]",
            window.lo, window.hi
        )));
    }
    Ok((sy / sw).exp())
}

/// Finite-size versus continuum comparison on one side of the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SideAnalysis {
    pub window: FitWindow,
    pub fit: PowerLawFit,
    /// Amplitude with the exponent fixed to its analytic value.
    pub amplitude: f64,
    pub continuum_amplitude: f64,
    /// Largest `|A_finite / A_continuum - 1|` over the window bins.
    pub max_rel_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdAnalysis {
    pub analytic_exponent: f64,
    pub above: SideAnalysis,
    pub below: Option<SideAnalysis>,
    /// Fixed-exponent amplitude ratio above/below (particle channels).
    pub amplitude_ratio: Option<f64>,
    pub analytic_ratio: Option<f64>,
}

impl ThresholdAnalysis {
    /// Worst relative slope error over the analysed sides.
    pub fn max_slope_error(&self) -> f64 {
        let err = |s: &SideAnalysis| (s.fit.slope / self.analytic_exponent - 1.0).abs();
        self.below
            .iter()
            .map(err)
            .fold(err(&self.above), f64::max)
    }
}

fn side(
    hist: &Histogram,
    window: FitWindow,
    law: &ThresholdLaw,
    above: bool,
    qmax: u32,
    reach: (f64, f64),
) -> Result<SideAnalysis> {
    let decades = window.decades();
    if decades.is_nan() || decades < 1.0 {
        return Err(Error::Unreachable {
            qmax,
            lo: window.lo,
            hi: window.lo * 10.0,
            reach_lo: reach.0,
            reach_hi: reach.1,
        });
    }
    let fit = fit_power_law(hist, window)?;
    let amplitude = fit_fixed_exponent(hist, window, law.exponent())?;
    let max_rel_dev = window_bins(hist, window)
        .map(|(lo, hi, a)| (a / law.bin_average(lo, hi, above) - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(SideAnalysis {
        window,
        fit,
        amplitude,
        continuum_amplitude: law.amplitude(above),
        max_rel_dev,
    })
}

/// Fits both sides of a finite-size histogram in their default windows
/// and compares with the continuum law of the same channel.
///
/// Fails with [`Error::Unreachable`] when `qmax` is too small for a window
/// to span one decade.
pub fn analyze(hist: &SpectralHistogram, law: &ThresholdLaw) -> Result<ThresholdAnalysis> {
    let below = hist.below_geometry.map(|g| g.window);
    analyze_in(hist, law, hist.above_geometry.window, below)
}

/// As [`analyze`] with explicit windows. `below` is ignored for hole
/// thresholds.
pub fn analyze_in(
    hist: &SpectralHistogram,
    law: &ThresholdLaw,
    above_window: FitWindow,
    below_window: Option<FitWindow>,
) -> Result<ThresholdAnalysis> {
    let g = &hist.above_geometry;
    let above = side(
        &hist.above,
        above_window,
        law,
        true,
        hist.qmax,
        (g.quantum, g.window.hi),
    )?;
    let below = match (&hist.below_geometry, below_window) {
        (Some(g), Some(w)) => Some(side(
            &hist.below,
            w,
            law,
            false,
            hist.qmax,
            (g.quantum, g.window.hi),
        )?),
        (Some(_), None) => {
            return Err(Error::invalid("below_window", "required for particle thresholds"))
        }
        (None, _) => None,
    };
    let amplitude_ratio = below.map(|b| above.amplitude / b.amplitude);
    let analytic_ratio = below.map(|_| law.side_above / law.side_below);
    Ok(ThresholdAnalysis {
        analytic_exponent: law.exponent(),
        above,
        below,
        amplitude_ratio,
        analytic_ratio,
    })
}
