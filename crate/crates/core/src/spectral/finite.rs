//! Finite-size formfactor sum over the low-energy excitations dressing one
//! high-energy particle (or hole).
//!
//! With `n1`, `n2` quanta at the right and left Fermi points the state
//! sits at `domega = (2 pi / L)(-C1 n1 + C2 n2)` for particle channels and
//! `(2 pi / L)(C1 n1 + C2 n2)` for hole channels, with weight
//!
//! ```text
//! L f(kbar)^2 F(n1, d1) F(n2, d2) ff_norm / L^alpha
//! ```
//!
//! where `F` is the closed-form sum rule. The sum runs over
//! `0 <= n1, n2 <= qmax`; the `(0, 0)` state is the threshold peak and is
//! kept separately.

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{exponents_for_channel, threshold_velocities, Branch, ChannelSpec, ExponentSet, LuttingerParams};
use crate::error::{Error, Result};
use crate::formfactors::{smooth_factor_log, sum_rule_closed_log};
use crate::gamma::{ln_gamma_signed, sin_pi};

use super::continuum::channel_factor;
use super::fit::FitWindow;

/// Rows of the `(n1, n2)` grid handled by one work item, at least. The
/// chunking depends only on `qmax`, so the merge tree, and hence every
/// floating-point sum, is independent of the number of threads.
const ROWS_PER_CHUNK: usize = 32;
const MAX_CHUNKS: usize = 4096;

/// Binned density on one side of the threshold. Edges are `|domega|`
/// values; `weights` are accumulated spectral weight per unit energy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Histogram {
    fn zeros(bin_edges: Vec<f64>) -> Self {
        let n = bin_edges.len().saturating_sub(1);
        Histogram {
            bin_edges,
            weights: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Index of the bin containing `x`, if inside the edges.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let edges = &self.bin_edges;
        if edges.len() < 2 || !(x >= edges[0] && x < edges[edges.len() - 1]) {
            return None;
        }
        Some(edges.partition_point(|&e| e <= x) - 1)
    }

    pub fn density_at(&self, x: f64) -> Option<f64> {
        self.bin_of(x).map(|i| self.weights[i])
    }

    /// `(lower edge, upper edge, density)` per bin.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.bin_edges
            .windows(2)
            .zip(&self.weights)
            .map(|(e, &w)| (e[0], e[1], w))
    }

    pub fn total_weight(&self) -> f64 {
        self.bins().map(|(lo, hi, w)| w * (hi - lo)).sum()
    }
}

/// How the `|domega|` axis is binned.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BinSpec {
    pub bins_per_decade: u32,
    /// Snap edges to half-integer multiples of the level spacing of the
    /// dominant excitation line on each side, so that every bin holds a
    /// whole number of its levels.
    pub snap_to_levels: bool,
    /// Largest `|domega|` binned on either side. `None` bins everything
    /// the grid reaches. States beyond it are never visited, so a small
    /// range makes the cost linear in `qmax`.
    pub max_offset: Option<f64>,
}

impl Default for BinSpec {
    fn default() -> Self {
        BinSpec {
            bins_per_decade: 64,
            snap_to_levels: true,
            max_offset: None,
        }
    }
}

/// Geometry of one side of the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SideGeometry {
    /// Level spacing of the dominant single-branch line.
    pub quantum: f64,
    /// Largest `|domega|` reached by the truncated grid.
    pub reach: f64,
    /// Default fitting window.
    pub window: FitWindow,
    /// See [`tail_coefficient`]; zero for hole thresholds, whose sum is
    /// complete inside the window.
    pub tail_coefficient: f64,
}

/// Result of [`finite_l_sum`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralHistogram {
    #[serde(skip)]
    pub channel: ChannelSpec,
    pub exponents: ExponentSet,
    pub k: f64,
    pub kbar: f64,
    pub threshold: f64,
    /// Energy of one quantum, `2 pi / L`.
    pub unit: f64,
    pub velocities: (f64, f64),
    pub qmax: u32,
    pub above: Histogram,
    pub below: Histogram,
    pub above_geometry: SideGeometry,
    pub below_geometry: Option<SideGeometry>,
    /// Integrated weight sitting exactly at `domega = 0`.
    pub threshold_weight: f64,
}

impl SpectralHistogram {
    /// Binned density at `domega`; zero outside the binned range.
    pub fn density(&self, domega: f64) -> f64 {
        let side = if domega > 0.0 { &self.above } else { &self.below };
        side.density_at(domega.abs()).unwrap_or(0.0)
    }
}

#[derive(Clone)]
struct Partial {
    above: Vec<f64>,
    below: Vec<f64>,
    at_threshold: f64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.above.iter_mut().zip(&other.above) {
            *a += b;
        }
        for (a, b) in self.below.iter_mut().zip(&other.below) {
            *a += b;
        }
        self.at_threshold += other.at_threshold;
        self
    }
}

/// Pairwise merge in a fixed tree: `((0 1) (2 3)) ...`.
fn merge_tree(mut parts: Vec<Partial>) -> Option<Partial> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.merge(b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop()
}

fn log_edges(lo: f64, hi: f64, per_decade: u32, quantum: Option<f64>) -> Vec<f64> {
    let step = 10f64.powf(1.0 / f64::from(per_decade));
    let mut edges = vec![lo];
    let mut e = lo;
    while e < hi {
        e *= step;
        edges.push(e.min(hi));
    }
    if let Some(q) = quantum {
        for e in edges.iter_mut() {
            *e = (((*e / q) - 0.5).round() + 0.5) * q;
        }
    }
    edges.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * a.abs());
    edges.retain(|&e| e > 0.0);
    edges
}

/// Relative truncation tail tolerated at the upper edge of a particle
/// fitting window.
pub const TAIL_TOLERANCE: f64 = 0.03;

/// Coefficient `K` of the relative weight the continuum keeps beyond the
/// grid edge, `K (|domega| / (C1 qmax unit))^mu`, on one side of a particle
/// threshold. Integrating the asymptotic sum rules along the resonance
/// line `C2 q2 = C1 q1` past `q1 = qmax` gives
/// `K = pi / (Gamma(1 + mu) Gamma(d1) Gamma(d2) sin(pi d_side))`.
pub fn tail_coefficient(e: &ExponentSet, above: bool) -> Result<f64> {
    let side = sin_pi(if above { e.d2() } else { e.d1() });
    let g = ln_gamma_signed(1.0 + e.mu)? * ln_gamma_signed(e.d1())? * ln_gamma_signed(e.d2())?;
    Ok(std::f64::consts::PI / (g.to_f64() * side))
}

fn geometry(
    branch: Branch,
    above: bool,
    e: &ExponentSet,
    (c1, c2): (f64, f64),
    unit: f64,
    qmax: u32,
    cap: Option<f64>,
) -> Result<SideGeometry> {
    let q = f64::from(qmax);
    let clip = |x: f64| cap.map_or(x, |c| x.min(c));
    let (quantum, natural, lo, hi, tail) = match (branch, above) {
        (Branch::Upper, _) => {
            let quantum = if above { c2 } else { c1 } * unit;
            let natural = if above { c2 } else { c1 } * q * unit;
            let tail = tail_coefficient(e, above)?;
            let tail_edge = c1 * q * unit * (TAIL_TOLERANCE / tail).powf(1.0 / e.mu);
            (quantum, natural, 10.0 * quantum, tail_edge.min(0.9 * natural), tail)
        }
        (Branch::Lower, _) => {
            // the sum is complete below min(C1, C2) qmax
            let quantum = if e.d2() <= e.d1() { c1 } else { c2 } * unit;
            let hi = 0.9 * c1.min(c2) * q * unit;
            (quantum, (c1 + c2) * q * unit, f64::NAN, hi, 0.0)
        }
    };
    let hi = match cap {
        Some(c) => hi.min(0.9 * c),
        None => hi,
    };
    let lo = if lo.is_nan() { hi / 10.0 } else { lo };
    Ok(SideGeometry {
        quantum,
        reach: clip(natural),
        window: FitWindow::new(lo, hi),
        tail_coefficient: tail,
    })
}

/// Finite-size estimate of `A(omega, k)` on the `(n1, n2)` grid.
///
/// Work is split into fixed row chunks evaluated in parallel and merged in
/// a fixed pairwise order, so the result is bitwise identical for any
/// thread count.
pub fn finite_l_sum(
    channel: ChannelSpec,
    k: f64,
    params: &LuttingerParams,
    qmax: u32,
    bins: &BinSpec,
) -> Result<SpectralHistogram> {
    if qmax < 10 {
        return Err(Error::invalid("qmax", format!("must be >= 10, got {qmax}")));
    }
    if bins.bins_per_decade == 0 {
        return Err(Error::invalid("bins_per_decade", "must be positive"));
    }
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
    let length = params.length();
    let unit = 2.0 * std::f64::consts::PI / length;
    let kbar = length * k / (2.0 * std::f64::consts::PI);

    let f = smooth_factor_log(kbar, e.signed_a())?;
    let prefactor = length * f.abs_sq() * params.ff_norm(e.alpha) * length.powf(-e.alpha)
        * channel_factor(channel.kind());

    let n = qmax as usize + 1;
    let sums = |d: f64| -> Result<Vec<f64>> {
        (0..n).map(|j| sum_rule_closed_log(j as f64, d).map(|v| v.to_f64())).collect()
    };
    let right = sums(e.d1())?;
    let left = sums(e.d2())?;

    let cap = match bins.max_offset {
        Some(c) if !(c.is_finite() && c > 0.0) => {
            return Err(Error::invalid("max_offset", format!("must be > 0, got {c}")))
        }
        c => c,
    };
    let hole = e.branch == Branch::Lower;
    let geom = |above| geometry(e.branch, above, &e, (c1, c2), unit, qmax, cap);
    let above_geom = geom(true)?;
    let below_geom = if hole { None } else { Some(geom(false)?) };
    let edges_for = |g: &SideGeometry| {
        let lo = 0.5 * g.quantum.min(c1.min(c2) * unit);
        let top = if cap.is_some() { g.reach } else { g.reach + g.quantum };
        let snap = bins.snap_to_levels.then_some(g.quantum);
        log_edges(lo, top, bins.bins_per_decade, snap)
    };
    let above_edges = edges_for(&above_geom);
    let below_edges = below_geom.as_ref().map(edges_for).unwrap_or_default();

    let above_template = Histogram::zeros(above_edges);
    let below_template = Histogram::zeros(below_edges);
    let empty = Partial {
        above: vec![0.0; above_template.len()],
        below: vec![0.0; below_template.len()],
        at_threshold: 0.0,
    };

    // binned range in units of 2 pi / L; states outside it are skipped
    let top = |h: &Histogram| h.bin_edges.last().map_or(0.0, |e| e / unit);
    let (xa, xb) = (top(&above_template), top(&below_template));
    let sign1 = if hole { 1.0 } else { -1.0 };
    let rows_per_chunk = ROWS_PER_CHUNK.max(n.div_ceil(MAX_CHUNKS));
    let chunks: Vec<usize> = (0..n).step_by(rows_per_chunk).collect();
    let parts: Vec<Partial> = chunks
        .par_iter()
        .map(|&start| {
            let mut part = empty.clone();
            let end = (start + rows_per_chunk).min(n);
            for (i, &ri) in right.iter().enumerate().take(end).skip(start) {
                let row = prefactor * ri;
                let x1 = sign1 * c1 * i as f64;
                // c2 j must lie in [-x1 - xb, -x1 + xa]; one level of slack
                let j_lo = ((-x1 - xb) / c2).ceil() - 1.0;
                let j_hi = ((-x1 + xa) / c2).floor() + 1.0;
                if j_hi < 0.0 {
                    continue;
                }
                let j_lo = j_lo.max(0.0) as usize;
                let j_hi = (j_hi as usize).min(n - 1);
                for (j, &lj) in left.iter().enumerate().take(j_hi + 1).skip(j_lo) {
                    let w = row * lj;
                    let x2 = c2 * j as f64;
                    let x = x1 + x2;
                    let scale = c1 * i as f64 + x2;
                    if x.abs() <= 1e-12 * scale || (i == 0 && j == 0) {
                        part.at_threshold += w;
                        continue;
                    }
                    let domega = x * unit;
                    let (hist, sums) = if domega > 0.0 {
                        (&above_template, &mut part.above)
                    } else {
                        (&below_template, &mut part.below)
                    };
                    if let Some(b) = hist.bin_of(domega.abs()) {
                        sums[b] += w;
                    }
                }
            }
            part
        })
        .collect();
    let total = merge_tree(parts).unwrap_or(empty);

    let finish = |template: Histogram, sums: Vec<f64>| {
        let weights = template
            .bin_edges
            .windows(2)
            .zip(sums)
            .map(|(e, s)| s / (e[1] - e[0]))
            .collect();
        Histogram {
            bin_edges: template.bin_edges,
            weights,
        }
    };
    let above = finish(above_template, total.above);
    let below = finish(below_template, total.below);
    if above.weights.iter().chain(&below.weights).any(|w| !w.is_finite())
        || !total.at_threshold.is_finite()
    {
        return Err(Error::Numeric("non-finite spectral weight".into()));
    }

    Ok(SpectralHistogram {
        channel,
        exponents: e,
        k,
        kbar,
        threshold: crate::channels::branch_energy(e.branch, k, params),
        unit,
        velocities: (c1, c2),
        qmax,
        above,
        below,
        above_geometry: above_geom,
        below_geometry: below_geom,
        threshold_weight: total.at_threshold,
    })
}
