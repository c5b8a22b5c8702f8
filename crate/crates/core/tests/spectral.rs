mod common;

use nlll::spectral::{
    analyze, analyze_in, c0_from_prefactor, continuum, continuum_from_formfactor, continuum_hole,
    continuum_particle, dsf_band, dsf_step, finite_l_sum, kdep_formfactor, prefactor_from_c0,
    BinSpec, FitWindow, SpectralHistogram, ThresholdAnalysis, ThresholdLaw,
};
use nlll::{exponents_for_channel, ChannelKind, ChannelSpec, Error, LuttingerParams, OmegaSign};
use proptest::prelude::*;

use common::{params, rel, K};

fn spec(kind: ChannelKind) -> ChannelSpec {
    ChannelSpec::new(kind)
}

fn continuum_specs() -> Vec<ChannelSpec> {
    vec![
        spec(ChannelKind::FermionParticle),
        spec(ChannelKind::FermionHole),
        spec(ChannelKind::FermionLeftHole),
        spec(ChannelKind::Density2pfHole),
        spec(ChannelKind::BosonHole),
        ChannelSpec::with_sign(ChannelKind::BosonParticle, OmegaSign::Negative).unwrap(),
    ]
}

#[test]
fn particle_law_is_two_sided_power() {
    let p = params(2.0);
    let ch = spec(ChannelKind::FermionParticle);
    let law = ThresholdLaw::new(ch, K, &p).unwrap();
    let e = law.exponents;
    for dw in [1e-4, 3e-3, 0.1] {
        let up = law.eval(dw).unwrap();
        let down = law.eval(-dw).unwrap();
        assert!(rel(up / down, (std::f64::consts::PI * e.d2()).sin() / (std::f64::consts::PI * e.d1()).sin()) < 1e-12);
        assert!(rel(law.eval(2.0 * dw).unwrap() / up, 2f64.powf(-e.mu)) < 1e-12);
        assert!(rel(law.eval(-2.0 * dw).unwrap() / down, 2f64.powf(-e.mu)) < 1e-12);
    }
    let pt = continuum_particle(law.threshold + 1e-3, K, &p, ch).unwrap();
    assert!((pt.domega - 1e-3).abs() < 1e-12);
    assert!(continuum_particle(law.threshold, K, &p, ch).is_err());
}

#[test]
fn hole_law_is_one_sided() {
    let p = params(2.0);
    for ch in continuum_specs().into_iter().filter(|c| !c.is_particle()) {
        let law = ThresholdLaw::new(ch, K, &p).unwrap();
        let e = law.exponents;
        for dw in [1e-4, 3e-3, 0.1] {
            assert_eq!(law.eval(-dw).unwrap(), 0.0);
            let a = law.eval(dw).unwrap();
            assert!(a > 0.0);
            assert!(rel(law.eval(2.0 * dw).unwrap() / a, 2f64.powf(e.d1() + e.d2() - 1.0)) < 1e-12);
        }
        let pt = continuum_hole(law.threshold + 0.01, K, &p, ch).unwrap();
        assert!((pt.domega - 0.01).abs() < 1e-12);
    }
}

#[test]
fn wrong_channel_type_is_rejected() {
    let p = params(2.0);
    assert!(matches!(
        continuum_particle(1.0, K, &p, spec(ChannelKind::FermionHole)),
        Err(Error::WrongChannelType { .. })
    ));
    assert!(matches!(
        continuum_hole(1.0, K, &p, spec(ChannelKind::FermionParticle)),
        Err(Error::WrongChannelType { .. })
    ));
}

#[test]
fn non_integrable_particle_threshold_is_rejected() {
    let p = params(2.0);
    assert!(matches!(
        continuum(0.5, K, &p, spec(ChannelKind::FermionLeftParticle)),
        Err(Error::NoIntegrableSingularity { .. })
    ));
    assert!(matches!(
        continuum(0.5, K, &params(0.5), spec(ChannelKind::Density2pfParticle)),
        Err(Error::NoIntegrableSingularity { .. })
    ));
}

#[test]
fn continuum_depends_on_length_only_through_normalization() {
    for xi in [0.5, 2.0, 3.0] {
        for ch in continuum_specs() {
            let base = params(xi).with_ff_norm(1.7).unwrap();
            let double = base.with_length(2.0 * base.length()).unwrap();
            let law = ThresholdLaw::new(ch, K, &base).unwrap();
            for dw in [-0.05, -1e-3, 1e-3, 0.05] {
                let w = law.threshold + dw;
                let a = continuum(w, K, &base, ch).unwrap().a_value;
                let b = continuum(w, K, &double, ch).unwrap().a_value;
                assert!((a - b).abs() <= 1e-12 * a.abs(), "{ch} xi = {xi}");
            }
        }
    }
}

#[test]
fn prefactor_relation() {
    assert_eq!(prefactor_from_c0(2.0, 1.0), 2.0);
    assert!((prefactor_from_c0(1.0, 2.125) - 2.181_015_465).abs() < 1e-9);
    let p = LuttingerParams::new(2.0, 1.0, 1.0, 10.0).unwrap().with_c0(0.8).unwrap();
    assert!(rel(p.ff_norm(1.25), prefactor_from_c0(0.8, 1.25)) < 1e-15);
    let q = p.with_ff_norm(p.ff_norm(1.25)).unwrap();
    assert!(rel(q.c0(1.25), 0.8) < 1e-15);
}

#[test]
fn momentum_resolved_formfactor() {
    let p = params(2.0);
    let a1 = kdep_formfactor(0.1, &p, 1.0, 1.3).unwrap();
    assert!(rel(kdep_formfactor(0.7, &p, 1.0, 1.3).unwrap(), a1) < 1e-14);
    let a = 0.37;
    let r = kdep_formfactor(0.4, &p, a, 1.3).unwrap() / kdep_formfactor(0.2, &p, a, 1.3).unwrap();
    assert!(rel(r, 2f64.powf(2.0 * a - 2.0)) < 1e-12);

    for xi in [0.5, 2.0] {
        for ch in continuum_specs() {
            let e = exponents_for_channel(ch, xi).unwrap();
            let p = params(xi);
            let kff = kdep_formfactor(K, &p, e.signed_a(), e.alpha).unwrap();
            let law = ThresholdLaw::new(ch, K, &p).unwrap();
            for dw in [-0.02, 0.02] {
                let w = law.threshold + dw;
                let direct = continuum(w, K, &p, ch).unwrap().a_value;
                let via = continuum_from_formfactor(w, K, &p, ch, kff).unwrap().a_value;
                assert!((direct - via).abs() <= 1e-12 * direct.abs(), "{ch} xi = {xi}");
            }
        }
    }
}

#[test]
fn dsf_band_integral() {
    for (xi, k, m) in [(2.0, 0.1, 1.0), (0.5, 0.3, 2.5), (4.0, 0.05, 0.7)] {
        let p = LuttingerParams::new(xi, 1.3, m, 100.0).unwrap();
        let (lo, hi) = dsf_band(k, &p);
        let w = hi - lo;
        // midpoint rule with breakpoints on the band edges is exact
        let mut integral = 0.0;
        for (a, b) in [(lo - w, lo), (lo, hi), (hi, hi + w)] {
            let n = 64;
            let h = (b - a) / n as f64;
            integral += (0..n).map(|i| dsf_step(a + (i as f64 + 0.5) * h, k, &p) * h).sum::<f64>();
        }
        assert!((integral - k / xi).abs() < 1e-12 * (k / xi));
        assert_eq!(dsf_step(0.5 * (lo + hi), k, &p), m / (k * xi));
    }
}

fn fermion_hist(kind: ChannelKind, qmax: u32) -> SpectralHistogram {
    finite_l_sum(spec(kind), K, &params(2.0), qmax, &BinSpec::default()).unwrap()
}

#[test]
fn finite_sum_is_thread_count_independent() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| fermion_hist(ChannelKind::FermionParticle, 700))
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    for (a, b) in one.above.weights.iter().zip(&four.above.weights) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn histograms_are_nonnegative_and_ascending() {
    for kind in [ChannelKind::FermionParticle, ChannelKind::FermionHole] {
        let h = fermion_hist(kind, 300);
        for side in [&h.above, &h.below] {
            assert!(side.bin_edges.windows(2).all(|w| w[1] > w[0]));
            assert!(side.weights.iter().all(|w| w.is_finite() && *w >= 0.0));
        }
    }
}

#[test]
fn hole_weight_below_threshold_is_zero() {
    let h = fermion_hist(ChannelKind::FermionHole, 500);
    assert!(h.below.is_empty());
    for x in [1e-6, 1e-3, 0.1, 10.0] {
        assert_eq!(h.density(-x), 0.0);
    }
}

#[test]
fn qmax_limits() {
    let p = params(2.0);
    let ch = spec(ChannelKind::FermionParticle);
    assert!(finite_l_sum(ch, K, &p, 9, &BinSpec::default()).is_err());
    let small = finite_l_sum(ch, K, &p, 200, &BinSpec::default()).unwrap();
    let law = ThresholdLaw::new(ch, K, &p).unwrap();
    assert!(matches!(analyze(&small, &law), Err(Error::Unreachable { qmax: 200, .. })));
}

#[test]
fn density_channel_is_boson_times_two_pi() {
    // at xi = 2 both sets coincide: d1 = (1 - 1/sqrt 2)^2, d2 = 1/2, alpha = 1
    let p = params(2.0);
    let d = finite_l_sum(spec(ChannelKind::Density2pfParticle), K, &p, 400, &BinSpec::default()).unwrap();
    let b = finite_l_sum(spec(ChannelKind::BosonParticle), K, &p, 400, &BinSpec::default()).unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    for (x, y) in d.above.weights.iter().zip(&b.above.weights).chain(d.below.weights.iter().zip(&b.below.weights)) {
        assert!((x - two_pi * y).abs() <= 1e-12 * x.abs());
    }
}

fn check(ch: ChannelSpec, xi: f64, qmax: u32, max_offset: Option<f64>, windows: Option<FitWindow>) -> ThresholdAnalysis {
    let p = params(xi);
    let bins = BinSpec {
        max_offset,
        ..BinSpec::default()
    };
    let h = finite_l_sum(ch, K, &p, qmax, &bins).unwrap();
    let law = ThresholdLaw::new(ch, K, &p).unwrap();
    let a = match windows {
        Some(w) => analyze_in(&h, &law, w, h.below_geometry.map(|_| w)).unwrap(),
        None => analyze(&h, &law).unwrap(),
    };
    let decades = |s: &nlll::spectral::SideAnalysis| s.window.decades();
    assert!(decades(&a.above) >= 1.0);
    assert!(a.max_slope_error() < 0.03, "{ch} xi = {xi}: {a:#?}");
    if let Some(b) = &a.below {
        assert!(decades(b) >= 1.0);
        let r = a.amplitude_ratio.unwrap() / a.analytic_ratio.unwrap();
        assert!((r - 1.0).abs() < 0.05, "{ch} xi = {xi}: ratio {r}");
    }
    a
}

#[test]
fn power_law_recovery_hole_channels() {
    for xi in [0.5, 2.0] {
        for kind in [ChannelKind::FermionHole, ChannelKind::FermionLeftHole, ChannelKind::Density2pfHole, ChannelKind::BosonHole] {
            check(spec(kind), xi, 2000, None, None);
        }
        let flipped = ChannelSpec::with_sign(ChannelKind::BosonParticle, OmegaSign::Negative).unwrap();
        check(flipped, xi, 2000, None, None);
    }
}

#[test]
fn power_law_recovery_fermion_particle() {
    for xi in [0.5, 2.0] {
        check(spec(ChannelKind::FermionParticle), xi, 2000, None, None);
    }
}

#[test]
fn power_law_recovery_boson_particle() {
    // large delta2^2 makes the truncation tail heavy: a long grid, binned
    // only near the threshold
    let c2 = 2.0 + K;
    let unit = 2.0 * std::f64::consts::PI / params(2.0).length();
    let w = FitWindow::new(10.0 * c2 * unit, 100.0 * c2 * unit);
    check(spec(ChannelKind::BosonParticle), 2.0, 2_000_000, Some(1.04 * w.hi), Some(w));
    check(spec(ChannelKind::BosonParticle), 0.5, 800_000, Some(1.2 * w.hi), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn continuum_values_are_nonnegative(xi in 0.2f64..5.0, k in 0.01f64..1.5, dw in -1.0f64..1.0) {
        prop_assume!(dw != 0.0);
        let p = LuttingerParams::new(xi, 1.0, 1.0, 100.0).unwrap();
        for kind in ChannelKind::ALL {
            let ch = spec(kind);
            match ThresholdLaw::new(ch, k, &p) {
                Ok(law) => prop_assert!(law.eval(dw).unwrap() >= 0.0, "{ch}"),
                Err(Error::NoIntegrableSingularity { .. } | Error::DegenerateChannel { .. }) => {}
                Err(e) => prop_assert!(false, "{ch}: {e}"),
            }
        }
    }

    #[test]
    fn k_scaling_of_prefactor(xi in 0.2f64..5.0, k in 0.01f64..0.5) {
        let p = LuttingerParams::new(xi, 1.0, 1.0, 100.0).unwrap();
        for ch in [spec(ChannelKind::FermionParticle), spec(ChannelKind::FermionHole)] {
            let (Ok(l1), Ok(l2)) = (ThresholdLaw::new(ch, k, &p), ThresholdLaw::new(ch, 2.0 * k, &p)) else {
                continue;
            };
            let e = l1.exponents;
            let vel = |k: f64| {
                let c2 = if ch.is_particle() { 2.0 + k } else { 2.0 - k };
                k.powf(e.d1()) * c2.powf(e.d2())
            };
            let r = l2.amplitude(true) * vel(2.0 * k) / (l1.amplitude(true) * vel(k));
            let expected = 2f64.powf(if ch.is_particle() { 2.0 * e.a - 2.0 } else { -2.0 - 2.0 * e.a });
            prop_assert!(rel(r, expected) < 1e-12, "{ch}: {r} vs {expected}");
        }
    }
}

#[test]
fn c0_round_trip() {
    for c0 in [1e-3, 0.5, 1.0, 3.0, 1e4] {
        for alpha in [0.25, 1.0, 2.125, 8.0] {
            let back = c0_from_prefactor(prefactor_from_c0(c0, alpha), alpha);
            assert!((back - c0).abs() <= 1e-15 * c0);
        }
    }
}
