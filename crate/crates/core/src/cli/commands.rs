use serde_json::{json, Value};

use crate::channels::{raw_exponents, ChannelKind, ChannelSpec};
use crate::error::Error;
use crate::formfactors::{
    enumerate_configs, shift_reduction_check, sum_rule_bruteforce, sum_rule_closed,
    ParticleHoleConfig,
};
use crate::spectral::{analyze, dsf_band, dsf_step, finite_l_sum, BinSpec, ThresholdLaw};

use super::config::{RunConfig, Spacing};
use super::table::{Cell, Table};
use super::{CliError, SCHEMA_VERSION};

/// A table plus an optional machine-readable summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: Option<Value>,
}

fn finite_or_fail(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numeric(format!("{name} is not finite ({x})")).into())
    }
}

/// Exponents of all channels on a list of `xi`. Degenerate rows are
/// flagged in the `degenerate` column rather than rejected.
pub fn cmd_exponents(xi_list: &[f64]) -> Result<Report, CliError> {
    let mut t = Table::new(vec![
        "channel", "xi", "a", "delta1", "delta2", "alpha", "mu", "residual", "degenerate",
    ]);
    for &xi in xi_list {
        for kind in ChannelKind::ALL {
            let e = raw_exponents(ChannelSpec::new(kind), xi)?;
            t.push(vec![
                kind.name().into(),
                xi.into(),
                e.a.into(),
                e.delta1.into(),
                e.delta2.into(),
                e.alpha.into(),
                e.mu.into(),
                e.cancellation_residual().into(),
                e.degeneracy().is_some().into(),
            ]);
        }
    }
    Ok(Report {
        table: t,
        summary: None,
    })
}

/// Brute-force formfactor sums against the closed form for every
/// `m <= m_max` and `a` in `a_list`.
pub fn cmd_sumrule(m_max: u32, a_list: &[f64]) -> Result<Report, CliError> {
    let mut t = Table::new(vec!["m", "a", "configs", "bruteforce", "closed", "rel_err"]);
    let mut worst: f64 = 0.0;
    for m in 0..=m_max {
        let count = enumerate_configs(m)?.len();
        for &a in a_list {
            let brute = sum_rule_bruteforce(m, a)?;
            let closed = sum_rule_closed(m, a * a)?;
            let rel = finite_or_fail("relative error", (brute / closed - 1.0).abs())?;
            worst = worst.max(rel);
            t.push(vec![m.into(), a.into(), count.into(), brute.into(), closed.into(), rel.into()]);
        }
    }
    Ok(Report {
        table: t,
        summary: Some(json!({
            "schema_version": SCHEMA_VERSION,
            "command": "sumrule",
            "m_max": m_max,
            "a_list": a_list,
            "max_rel_err": worst,
        })),
    })
}

/// Log-log slope of `y` against `x` by ordinary least squares.
pub(crate) fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx).filter(|s| s.is_finite())
}

/// Shift-reduction deviation for the empty and the single-pair low-energy
/// configuration, with the fitted decay exponent of the latter.
pub fn cmd_shiftcheck(p_list: &[i64], a: f64) -> Result<Report, CliError> {
    let configs = [
        ("empty", ParticleHoleConfig::empty()),
        ("single_pair", ParticleHoleConfig::new(vec![1], vec![0])?),
    ];
    let mut devs = Vec::new();
    for (name, c) in &configs {
        let d: Vec<f64> = p_list
            .iter()
            .map(|&p| shift_reduction_check(p, c, a))
            .collect::<Result<_, _>>()?;
        devs.push((*name, d));
    }
    let pair_points: Vec<(f64, f64)> = p_list
        .iter()
        .zip(&devs[1].1)
        .filter(|(_, &d)| d > 0.0)
        .map(|(&p, &d)| (p as f64, d))
        .collect();
    let decay = loglog_slope(&pair_points);

    let mut t = Table::new(vec!["config", "p", "a", "deviation", "decay_exponent"]);
    for (name, d) in &devs {
        for (&p, &dev) in p_list.iter().zip(d) {
            let fit = match (*name, decay) {
                ("single_pair", Some(s)) => Cell::Num(s),
                _ => Cell::Empty,
            };
            t.push(vec![(*name).into(), p.into(), a.into(), dev.into(), fit]);
        }
    }
    Ok(Report {
        table: t,
        summary: Some(json!({
            "schema_version": SCHEMA_VERSION,
            "command": "shiftcheck",
            "a": a,
            "p_list": p_list,
            "decay_exponent": decay,
        })),
    })
}

/// The structure-factor step on a frequency grid around its band.
pub fn cmd_dsf(cfg: &RunConfig, xis: &[f64]) -> Result<Report, CliError> {
    cfg.validate()?;
    let base = cfg.luttinger_params()?;
    let mut t = Table::new(vec!["xi", "k", "omega", "dsf"]);
    let mut bands = Vec::new();
    for &xi in xis {
        let params = base.with_xi(xi)?;
        for &k in &cfg.k_list {
            let (lo, hi) = dsf_band(k, &params);
            let omegas = match &cfg.omega_grid {
                Some(g) if g.spacing == Spacing::Linear => g.points(),
                Some(g) => g.points().into_iter().map(|x| lo + x).collect(),
                None => {
                    let w = hi - lo;
                    (0..=200).map(|i| lo - 0.5 * w + 2.0 * w * f64::from(i) / 200.0).collect()
                }
            };
            for omega in omegas {
                t.push(vec![xi.into(), k.into(), omega.into(), dsf_step(omega, k, &params).into()]);
            }
            let height = params.m_eff() / (k * xi);
            bands.push(json!({
                "xi": xi,
                "k": k,
                "eps2": lo,
                "eps1": hi,
                "height": height,
                "integral": height * (hi - lo),
                "expected_integral": k / xi,
            }));
        }
    }
    Ok(Report {
        table: t,
        summary: Some(json!({
            "schema_version": SCHEMA_VERSION,
            "command": "dsf",
            "bands": bands,
        })),
    })
}

/// Finite-size histogram against the continuum law for every `xi` and
/// `k`. Rows falling exactly on the threshold are skipped.
pub fn cmd_spectral(cfg: &RunConfig, xis: &[f64]) -> Result<Report, CliError> {
    cfg.validate()?;
    let base = cfg.luttinger_params()?;
    let channel = cfg.channel_spec()?;
    let bins = BinSpec {
        bins_per_decade: cfg.bins_per_decade,
        max_offset: cfg.max_offset,
        ..BinSpec::default()
    };
    let mut t = Table::new(vec![
        "channel", "xi", "k", "omega", "domega", "A_finiteL", "A_continuum", "rel_dev",
    ]);
    let mut results = Vec::new();
    for &xi in xis {
        let params = base.with_xi(xi)?;
        for &k in &cfg.k_list {
            let hist = finite_l_sum(channel, k, &params, cfg.qmax, &bins)?;
            let law = ThresholdLaw::new(channel, k, &params)?;
            let analysis = analyze(&hist, &law)?;
            finite_or_fail("fitted slope", analysis.above.fit.slope)?;

            let domegas: Vec<f64> = match &cfg.omega_grid {
                Some(g) if g.spacing == Spacing::Linear => {
                    g.points().into_iter().map(|w| w - law.threshold).collect()
                }
                Some(g) => two_sided(&g.points()),
                None => {
                    let w = analysis.above.window;
                    let n = 48;
                    let pts: Vec<f64> = (0..n)
                        .map(|i| w.lo * (w.hi / w.lo).powf(i as f64 / (n - 1) as f64))
                        .collect();
                    two_sided(&pts)
                }
            };
            for domega in domegas {
                if domega == 0.0 {
                    continue;
                }
                let finite = hist.density(domega);
                let cont = law.eval(domega)?;
                let rel = if cont != 0.0 {
                    Cell::Num(finite / cont - 1.0)
                } else if finite == 0.0 {
                    Cell::Num(0.0)
                } else {
                    Cell::Empty
                };
                t.push(vec![
                    channel.to_string().into(),
                    xi.into(),
                    k.into(),
                    (law.threshold + domega).into(),
                    domega.into(),
                    finite.into(),
                    cont.into(),
                    rel,
                ]);
            }
            results.push(json!({
                "xi": xi,
                "k": k,
                "kbar": hist.kbar,
                "threshold": law.threshold,
                "threshold_weight": hist.threshold_weight,
                "exponents": hist.exponents,
                "analysis": analysis,
            }));
        }
    }
    let first = &results[0]["analysis"];
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "spectral",
        "channel": channel.to_string(),
        "qmax": cfg.qmax,
        "bins_per_decade": cfg.bins_per_decade,
        "max_offset": cfg.max_offset,
        "seed": cfg.seed,
        "params": cfg.params,
        "fitted_slope": first["above"]["fit"]["slope"],
        "fitted_slope_below": first["below"]["fit"]["slope"],
        "analytic_exponent": first["analytic_exponent"],
        "amplitude_ratio": first["amplitude_ratio"],
        "analytic_amplitude_ratio": first["analytic_ratio"],
        "results": results,
    });
    Ok(Report {
        table: t,
        summary: Some(summary),
    })
}

/// `-x_n, ..., -x_1, x_1, ..., x_n` for ascending positive offsets.
fn two_sided(offsets: &[f64]) -> Vec<f64> {
    offsets
        .iter()
        .rev()
        .map(|x| -x)
        .chain(offsets.iter().copied())
        .collect()
}
