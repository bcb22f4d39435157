use super::*;
use crate::cavity::{lorentzian_reduction, transmission, transmission_sweep, tune_to_resonance};
use crate::dispersion::GainDoubletParams;
use crate::resonances::{extract_peaks, PeakExtraction};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const OMEGA_REF: f64 = TWO_PI * 2.768e14;

fn vacuum_model() -> DispersionModel {
    DispersionModel::vacuum(OMEGA_REF).unwrap()
}

fn fig3_model() -> DispersionModel {
    DispersionModel::GainDoublet(
        GainDoubletParams::new(OMEGA_REF, TWO_PI * 1.5e6, TWO_PI * 0.8e6, 0.28, 0.06).unwrap(),
    )
}

fn fig3_geometry(model: &DispersionModel) -> CavityGeometry {
    let mut g = CavityGeometry::new(0.71, 0.02, 2.39, 0.06, 1.225, 0.0).unwrap();
    tune_to_resonance(&mut g, model, model.anchor_frequency());
    g
}

fn highq_geometry(model: &DispersionModel) -> CavityGeometry {
    let mut g = CavityGeometry::new(0.99, 0.01, 2.39, 0.06, 1.225, 0.0).unwrap();
    tune_to_resonance(&mut g, model, model.anchor_frequency());
    g
}

#[test]
fn vacuum_response_is_a_geometric_ray_comb() {
    // Oracle: the explicit ray sum T Σ R_eff^k δ(τ - kL/c - L_m/c). On a
    // round-trip-aligned grid each delta occupies one sample with weight
    // T R_eff^k / dt, and the tuned carrier makes every ray phase real.
    let model = vacuum_model();
    let geom = fig3_geometry(&model);
    let spec = GridSpec {
        t_pre: Some(0.2e-6),
        t_post: Some(2.0e-6),
        ..Default::default()
    };
    let resp = response_function(&Transfer::Cavity { geom: &geom, model: &model }, &spec).unwrap();
    let dt = resp.times[1] - resp.times[0];
    let t_rt = geom.round_trip_time();
    assert!((t_rt / dt - (t_rt / dt).round()).abs() < 1e-9, "grid not aligned");
    let r_eff = geom.feedback_factor();
    let t_coef = geom.mirror_transmission;
    let lm_c = geom.mirror_path / crate::SPEED_OF_LIGHT;

    // All rays share the constant carrier phase over the feed path.
    let feed_phase = resp
        .values
        .iter()
        .zip(&resp.times)
        .find(|(_, _)| true)
        .map(|_| {
            let i0 = resp
                .times
                .iter()
                .position(|&t| (t - lm_c).abs() < 0.25 * dt)
                .expect("feed-through sample on grid");
            resp.values[i0] / resp.values[i0].norm()
        })
        .unwrap();
    let mut checked_rays = 0;
    for (i, (&tau, v)) in resp.times.iter().zip(&resp.values).enumerate() {
        let k = (tau - lm_c) / t_rt;
        let is_ray = k > -0.25 && (k - k.round()).abs() < 1e-6;
        if is_ray {
            let expected = t_coef * r_eff.powi(k.round() as i32) / dt;
            // Late rays approach the transform round-off floor, which is
            // absolute with respect to the comb maximum T/dt.
            let tol = 1e-7 * expected + 1e-9 * t_coef / dt;
            assert!(
                (v.norm() - expected).abs() < tol,
                "ray {k}: got |{v}|, expected {expected}"
            );
            let aligned = v / feed_phase;
            assert!(
                aligned.im.abs() < tol,
                "ray {k} phase wanders: {aligned}"
            );
            checked_rays += 1;
        } else if tau > lm_c {
            // Between rays: empty to round-off.
            let floor = 1e-7 * t_coef / dt;
            assert!(v.norm() < floor, "sample {i} at tau {tau:e}: {v}");
        }
    }
    assert!(checked_rays > 100);
}

#[test]
fn causality_residual_vacuum_and_doublet() {
    for (model, geom) in [
        (vacuum_model(), fig3_geometry(&vacuum_model())),
        (fig3_model(), fig3_geometry(&fig3_model())),
    ] {
        let spec = GridSpec {
            t_pre: Some(0.5e-6),
            t_post: Some(4.0e-6),
            ..Default::default()
        };
        let resp =
            response_function(&Transfer::Cavity { geom: &geom, model: &model }, &spec).unwrap();
        let residual = resp.causality_residual();
        assert!(residual < 1e-6, "residual = {residual:e}");
    }
}

#[test]
fn response_rejects_thin_pre_window() {
    let model = vacuum_model();
    let geom = fig3_geometry(&model);
    let spec = GridSpec {
        t_pre: Some(0.01e-6),
        t_post: Some(2.0e-6),
        ..Default::default()
    };
    let res = response_function(&Transfer::Cavity { geom: &geom, model: &model }, &spec);
    assert!(matches!(res, Err(Error::Sizing { .. })));
}

#[test]
fn explicit_undersampling_is_a_bandwidth_error() {
    let model = fig3_model();
    let geom = fig3_geometry(&model);
    let spec = GridSpec {
        dt: Some(40.0e-9),
        ..Default::default()
    };
    let res = ringdown(
        &Transfer::Cavity { geom: &geom, model: &model },
        &InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 0.0).unwrap(),
        &spec,
    );
    assert!(matches!(res, Err(Error::Sizing { .. })), "{res:?}");
}

#[test]
fn vacuum_ringdown_steady_state_and_tail_rate() {
    let model = vacuum_model();
    let geom = highq_geometry(&model);
    let transfer = Transfer::Cavity { geom: &geom, model: &model };
    let input = InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 0.0).unwrap();
    let trace = ringdown(&transfer, &input, &GridSpec::default()).unwrap();

    // Pre-turn-off intensity equals |S(ω_l) E₀|².
    let expected = transmission(&geom, &model, OMEGA_REF).unwrap().norm_sqr();
    let steady = trace
        .times
        .iter()
        .zip(trace.intensity())
        .filter(|(t, _)| **t < 0.0)
        .map(|(_, i)| i)
        .fold((0.0, 0), |(s, n), i| (s + i, n + 1));
    let steady = steady.0 / steady.1 as f64;
    assert!(
        (steady - expected).abs() / expected < 1e-3,
        "steady {steady} vs |S E0|^2 {expected}"
    );

    // Fitted tail rate within 1% of 2(1 - R_eff)/(R_eff L/c).
    let diag = diagnose(&trace, 0.0, &DiagnosticsOptions::default());
    let (gamma, _) = lorentzian_reduction(&geom, &model, OMEGA_REF).unwrap();
    let fitted_rate = 1.0 / diag.tail_time_constant;
    assert!(
        (fitted_rate - gamma).abs() / gamma < 0.01,
        "fitted {fitted_rate:e} vs gamma_cav {gamma:e}"
    );
}

#[test]
fn spectral_ringdown_matches_analytic_lorentzian() {
    // Inject an ideal single-Lorentzian transfer function directly,
    // bypassing the cavity formula, and compare against the closed form.
    let gamma = 2.4718e6;
    let s0 = gamma / 2.0; // resonant |S| = 1
    let transfer = Transfer::Lorentzian(LorentzianTransfer {
        gamma_cav: gamma,
        s0,
        omega_p: OMEGA_REF,
        mirror_path: 1.2,
    });
    let input = InputSignal::new(Complex64::new(0.8, 0.3), OMEGA_REF, 0.0).unwrap();
    let spec = GridSpec {
        dt: Some(0.2e-9),
        ..Default::default()
    };
    let sim = ringdown(&transfer, &input, &spec).unwrap();
    let oracle = analytic_lorentzian_ringdown(
        gamma,
        s0,
        OMEGA_REF,
        OMEGA_REF,
        input.amplitude,
        1.2,
        &sim.times,
        sim.carrier,
    )
    .unwrap();
    let dist = relative_l2_distance(&sim, &oracle);
    assert!(dist < 1e-3, "relative L2 distance {dist:e}");
}

#[test]
fn ringdown_is_exactly_linear_in_the_drive() {
    let model = fig3_model();
    let geom = fig3_geometry(&model);
    let transfer = Transfer::Cavity { geom: &geom, model: &model };
    let spec = GridSpec {
        t_pre: Some(0.6e-6),
        t_post: Some(3.0e-6),
        ..Default::default()
    };
    let e0 = Complex64::new(0.4, -0.7);
    let a = ringdown(
        &transfer,
        &InputSignal::new(e0, OMEGA_REF, 0.0).unwrap(),
        &spec,
    )
    .unwrap();
    let b = ringdown(
        &transfer,
        &InputSignal::new(e0 * 2.0, OMEGA_REF, 0.0).unwrap(),
        &spec,
    )
    .unwrap();
    for (x, y) in a.envelope.iter().zip(&b.envelope) {
        assert_eq!(*x * 2.0, *y);
    }
}

#[test]
fn gain_doublet_ringdown_decays_then_beats() {
    let model = fig3_model();
    let geom = fig3_geometry(&model);
    let transfer = Transfer::Cavity { geom: &geom, model: &model };
    let input = InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 0.0).unwrap();
    let spec = GridSpec {
        t_pre: Some(1.0e-6),
        t_post: Some(6.0e-6),
        ..Default::default()
    };
    let trace = ringdown(&transfer, &input, &spec).unwrap();
    let intensity = trace.intensity();
    let steady = transmission(&geom, &model, OMEGA_REF).unwrap().norm_sqr();

    // Fast fall by at least two orders of magnitude.
    let min_early = trace
        .times
        .iter()
        .zip(&intensity)
        .filter(|(t, _)| **t > 0.0 && **t < 0.5e-6)
        .map(|(_, i)| *i)
        .fold(f64::MAX, f64::min);
    assert!(
        min_early < 1e-2 * steady,
        "early minimum {min_early:e} vs steady {steady:e}"
    );

    // Then oscillations at the beat between the two transmission peaks.
    let spectrum = transmission_sweep(&geom, &model, OMEGA_REF, TWO_PI * 6.0e6, 4096).unwrap();
    let peaks = extract_peaks(
        &spectrum,
        OMEGA_REF,
        &PeakExtraction {
            prominence_factor: 1.2,
        },
    )
    .unwrap();
    assert_eq!(peaks.len(), 2);
    let separation_hz = (peaks[1].omega_center - peaks[0].omega_center).abs() / TWO_PI;
    let beat = dominant_oscillation_frequency(&trace, (0.05e-6, 3.0e-6))
        .expect("beat note expected");
    assert!(
        (beat - separation_hz).abs() / separation_hz < 0.05,
        "beat {beat:e} Hz vs peak separation {separation_hz:e} Hz"
    );
}

#[test]
fn noncausal_prediction_differs_from_true_simulation() {
    let model = fig3_model();
    let geom = fig3_geometry(&model);
    let transfer = Transfer::Cavity { geom: &geom, model: &model };
    let input = InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 0.0).unwrap();
    let spec = GridSpec {
        t_pre: Some(1.0e-6),
        t_post: Some(6.0e-6),
        ..Default::default()
    };
    let sim = ringdown(&transfer, &input, &spec).unwrap();
    let (gamma, s0) = lorentzian_reduction(&geom, &model, OMEGA_REF).unwrap();
    assert!(gamma < 0.0);
    let oracle = noncausal_truncated_prediction(
        gamma,
        s0,
        OMEGA_REF,
        OMEGA_REF,
        input.amplitude,
        geom.mirror_path,
        &sim.times,
        sim.carrier,
    )
    .unwrap();
    // Compare the ring-down region; before the feed-through arrival both
    // show the same steady level by construction of the reduction.
    let dist = relative_l2_distance_from(&sim, &oracle, 0.0);
    assert!(dist >= 0.5, "distance {dist}");
}

#[test]
fn analytic_lorentzian_trivial_structure() {
    let gamma = 2.0e6;
    let s0 = 1.5e6;
    let omega_l = OMEGA_REF + 3.0e5;
    let lm = 1.2;
    let lm_c = lm / crate::SPEED_OF_LIGHT;
    let times: Vec<f64> = (0..8000).map(|i| -2.0e-9 + i as f64 * 5.0e-12).collect();
    let trace = analytic_lorentzian_ringdown(
        gamma,
        s0,
        OMEGA_REF,
        omega_l,
        Complex64::new(1.0, 0.0),
        lm,
        &times,
        OMEGA_REF,
    )
    .unwrap();
    let intensity = trace.intensity();
    let expected_level = (s0 / Complex64::new(gamma / 2.0, -(omega_l - OMEGA_REF)).norm()).powi(2);
    // Constant before the feed-through arrival.
    for (t, i) in times.iter().zip(&intensity) {
        if *t <= lm_c {
            assert!((i - expected_level).abs() / expected_level < 1e-12);
        }
    }
    // Exponential decay at γ afterwards.
    let idx = |t: f64| ((t + 2.0e-9) / 5.0e-12).round() as usize;
    let (i1, i2) = (idx(lm_c + 5.0e-9), idx(lm_c + 15.0e-9));
    let slope = (intensity[i2].ln() - intensity[i1].ln()) / (times[i2] - times[i1]);
    assert!((slope + gamma).abs() / gamma < 1e-6, "slope {slope:e}");
    // Resonant drive keeps the intensity continuous across the arrival.
    let resonant = analytic_lorentzian_ringdown(
        gamma,
        s0,
        OMEGA_REF,
        OMEGA_REF,
        Complex64::new(1.0, 0.0),
        lm,
        &times,
        OMEGA_REF,
    )
    .unwrap();
    let ri = resonant.intensity();
    let before = ri[idx(lm_c - 5.0e-12)];
    let after = ri[idx(lm_c + 5.0e-12)];
    assert!((before - after).abs() / before < 1e-4);

    assert!(analytic_lorentzian_ringdown(
        -gamma,
        s0,
        OMEGA_REF,
        omega_l,
        Complex64::new(1.0, 0.0),
        lm,
        &times,
        OMEGA_REF
    )
    .is_err());
}

#[test]
fn noncausal_trivial_structure() {
    let gamma = -2.48e8;
    let s0 = -3.4e6;
    let lm = 1.225;
    let lm_c = lm / crate::SPEED_OF_LIGHT;
    let times: Vec<f64> = (0..6000).map(|i| -20.0e-9 + i as f64 * 5.0e-12).collect();
    let e0 = Complex64::new(1.0, 0.0);
    let trace = noncausal_truncated_prediction(
        gamma, s0, OMEGA_REF, OMEGA_REF, e0, lm, &times, OMEGA_REF,
    )
    .unwrap();
    let intensity = trace.intensity();
    for (t, i) in times.iter().zip(&intensity) {
        if *t >= lm_c {
            assert_eq!(*i, 0.0, "output must vanish after the arrival");
        } else {
            // Equal carriers: |E|² = |S₀E₀|² (1 - e^{-γ/2 (t-L_m/c)})² / (γ/2)².
            let expected =
                (s0 / (gamma / 2.0) * (1.0 - (-gamma / 2.0 * (t - lm_c)).exp())).powi(2);
            assert!(
                (i - expected).abs() <= 1e-9 * expected.max(1e-30),
                "t = {t:e}: {i} vs {expected}"
            );
        }
    }
    assert!(noncausal_truncated_prediction(
        2.0e6, s0, OMEGA_REF, OMEGA_REF, e0, lm, &times, OMEGA_REF
    )
    .is_err());
}

#[test]
fn output_never_depends_on_future_input() {
    // Two drives identical up to turn-off and different afterwards give
    // bit-identical outputs up to the feed-through arrival; and a window
    // extension (carrying input samples the short run never saw) leaves
    // the common region unchanged.
    let model = fig3_model();
    let geom = fig3_geometry(&model);
    let transfer = Transfer::Cavity { geom: &geom, model: &model };
    let spec = GridSpec {
        t_pre: Some(1.0e-6),
        t_post: Some(4.0e-6),
        ..Default::default()
    };
    let step = ringdown(
        &transfer,
        &InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 0.0).unwrap(),
        &spec,
    )
    .unwrap();
    let slow = ringdown(
        &transfer,
        &InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 1.0e-6).unwrap(),
        &spec,
    )
    .unwrap();
    let lm_c = geom.mirror_path / crate::SPEED_OF_LIGHT;
    let scale = step.envelope[0].norm();
    for ((t, a), b) in step.times.iter().zip(&step.envelope).zip(&slow.envelope) {
        if *t < lm_c {
            // Identical up to FFT round-off of the convolution term.
            assert!((a - b).norm() < 1e-12 * scale, "pre-arrival difference {:e}", (a - b).norm());
        }
    }

    let long_spec = GridSpec {
        t_pre: Some(1.0e-6),
        t_post: Some(600.0e-6),
        ..Default::default()
    };
    let long = ringdown(
        &transfer,
        &InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 0.0).unwrap(),
        &long_spec,
    )
    .unwrap();
    let n = step.envelope.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        assert!((step.times[i] - long.times[i]).abs() < 1e-18);
        num += (step.envelope[i] - long.envelope[i]).norm_sqr();
        den += step.envelope[i].norm_sqr();
    }
    assert!((num / den).sqrt() < 1e-6);
}

#[test]
fn grid_refinement_converges() {
    let model = fig3_model();
    let geom = fig3_geometry(&model);
    let transfer = Transfer::Cavity { geom: &geom, model: &model };
    let input = InputSignal::new(Complex64::new(1.0, 0.0), OMEGA_REF, 100.0e-9).unwrap();
    let t_rt = geom.round_trip_time();
    let coarse = ringdown(
        &transfer,
        &input,
        &GridSpec {
            dt: Some(t_rt),
            t_pre: Some(1.0e-6),
            t_post: Some(4.0e-6),
            ..Default::default()
        },
    )
    .unwrap();
    let fine = ringdown(
        &transfer,
        &input,
        &GridSpec {
            dt: Some(t_rt / 2.0),
            t_pre: Some(1.0e-6),
            t_post: Some(8.0e-6),
            ..Default::default()
        },
    )
    .unwrap();
    let dt_fine = fine.times[1] - fine.times[0];
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, a) in coarse.times.iter().zip(&coarse.envelope) {
        let j = ((t - fine.times[0]) / dt_fine).round() as usize;
        if j >= fine.envelope.len() {
            break;
        }
        assert!((fine.times[j] - t).abs() < 0.01 * dt_fine, "grids misaligned");
        num += (fine.envelope[j] - a).norm_sqr();
        den += a.norm_sqr();
    }
    let dist = (num / den).sqrt();
    assert!(dist < 1e-3, "refinement distance {dist:e}");
}
