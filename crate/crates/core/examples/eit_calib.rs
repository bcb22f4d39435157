use num_complex::Complex64;
use ringcav::cavity::*;
use ringcav::dispersion::*;
use ringcav::resonances::*;
use ringcav::timedomain::*;

fn main() {
    let twopi = 2.0 * std::f64::consts::PI;
    let f_coupling = 2.768e14;
    let cell = 0.06;
    let base = DetunedEitParams {
        coupling_rabi: twopi * 11.0e6,
        optical_detuning: twopi * 1.3e9,
        raman_decay: twopi * 12.0e3,
        optical_decay: twopi * 20.0e6,
        doppler_width: twopi * 1.0309e9,
        amplitude: 0.0,
        omega_coupling: twopi * f_coupling,
        anchor_raman: twopi * 5.0e3,
    };

    let ods: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let ods = if ods.is_empty() { vec![1.0, 2.0, 4.0] } else { ods };
    for od in ods {
        let mut p = base.clone();
        p.amplitude = p.amplitude_for_resonant_od(od, cell).unwrap();
        let model = DispersionModel::DetunedEit(p.clone());

        // Cell-only properties around the Raman feature.
        let mut max_abs = (0.0f64, 0.0f64);
        for k in -60..=200 {
            let dr = twopi * (k as f64 * 1.0e3);
            let chi = model.susceptibility(p.omega_coupling + dr);
            if chi.im > max_abs.1 {
                max_abs = (dr, chi.im);
            }
        }
        let od_anchor = {
            let chi = model.susceptibility(p.omega_coupling + p.anchor_raman);
            chi.im * (p.omega_coupling) * cell / 299792458.0
        };
        let ng5 = group_index(&model, p.omega_coupling + twopi * 5.0e3);
        let tau_g5 = (ng5 - 1.0) * cell / 299792458.0;

        let mut geom = CavityGeometry::new(0.98, 0.02, 2.34, cell, 1.2, 0.01).unwrap();
        tune_to_resonance(&mut geom, &model, model.anchor_frequency());
        let omega_p = find_resonance(&geom, &model, model.anchor_frequency()).unwrap();
        let tau_rt = round_trip_group_delay(&geom, &model, omega_p);

        println!("== od {od}: amplitude {:.4e}", p.amplitude);
        println!("  abs max at dR = {:.1} kHz (chi''={:.3e}); od at anchor = {:.3}",
            max_abs.0 / twopi / 1e3, max_abs.1, od_anchor);
        println!("  tau_g(5kHz) = {:.3e} s, tau_rt(anchor) = {:.3e} s", tau_g5, tau_rt);

        // Spectrum: 24 MHz span
        let spec = transmission_sweep(&geom, &model, omega_p, twopi * 24.0e6, 8192).unwrap();
        let opts = PeakExtraction { prominence_factor: 3.0 };
        match extract_peaks(&spec, omega_p, &opts) {
            Ok(peaks) => {
                for pk in &peaks {
                    println!("  peak: off {:+9.4} MHz, fwhm {:9.2} kHz, h {:.3e} {:?}",
                        (pk.omega_center - omega_p) / twopi / 1e6,
                        pk.fwhm / twopi / 1e3, pk.height, pk.kind);
                }
            }
            Err(e) => println!("  peaks: {e}"),
        }

        // Ringdown
        let transfer = Transfer::Cavity { geom: &geom, model: &model };
        let input = InputSignal::new(Complex64::new(1.0, 0.0), omega_p, 200.0e-9).unwrap();
        let gspec = GridSpec { t_pre: Some(20.0e-6), t_post: Some(80.0e-6), ..Default::default() };
        match ringdown(&transfer, &input, &gspec) {
            Ok(trace) => {
                let d = diagnose(&trace, 0.0, &DiagnosticsOptions::default());
                println!("  ringdown: steady {:.3e}, overshoot x{:.2} at t={:.3e}, tail {:.3e} s, beat {:?} Hz",
                    d.steady_intensity, d.overshoot_ratio, d.time_of_post_max,
                    d.tail_time_constant, d.dominant_beat_hz);
            }
            Err(e) => println!("  ringdown: {e}"),
        }
    }
}
