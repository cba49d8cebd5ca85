//! Frequency-domain pump-probe pipeline against direct time integration of
//! the chain equations of motion.

use num_complex::Complex64 as C;
use slr_core::exciton::TransitionSpec;
use slr_core::pump_probe::*;
use slr_core::UnitVector3;
use slr_oracles::{ChainOde, ChainTrace, Pulse, Ring};

use std::sync::OnceLock;

const SPACING: f64 = 415.0;

fn t12() -> TransitionSpec {
    TransitionSpec { lower: 1, upper: 2, omega_t: 1.5, gamma_t_rad: 0.25, orientation: UnitVector3::Y, dipole_allowed: true }
}

fn t23() -> TransitionSpec {
    TransitionSpec { lower: 2, upper: 3, omega_t: 3.0, gamma_t_rad: 0.25, ..t12() }
}

fn pulses() -> (PulseSpec, PulseSpec) {
    (
        PulseSpec { center: 1.5, fwhm: 40.0, amplitude: 0.01, delay: 0.0 },
        PulseSpec { center: 3.0, fwhm: 40.0, amplitude: 0.01, delay: 50.0 },
    )
}

fn ode() -> ChainOde {
    let (pump, probe) = pulses();
    let to = |p: PulseSpec| Pulse { center: p.center, tau: p.temporal_width(), eta: p.amplitude, delay: p.delay };
    ChainOde {
        ring: Ring { sites_m: 10, spacing: SPACING, axis: [1.0, 0.0, 0.0] },
        orientation: [0.0, 1.0, 0.0],
        omega12: 1.5,
        gamma12: 0.25,
        omega23: 3.0,
        gamma23: 0.25,
        p_inv0: -1.0,
        pump: to(pump),
        probe: to(probe),
        eps_reg: EPS_REG,
    }
}

fn trace() -> &'static ChainTrace {
    static T: OnceLock<ChainTrace> = OnceLock::new();
    T.get_or_init(|| ode().integrate(-200.0, 700.0, 0.02))
}

fn setup(imag: ImagPart) -> PumpProbeSetup {
    let o = ode();
    let (pump, probe) = pulses();
    PumpProbeSetup {
        dressing12: Dressing::Constant(o.markov_sum(1.5, 0.25, pump.center)),
        dressing23: Dressing::Constant(o.markov_sum(3.0, 0.25, probe.center)),
        t12: t12(),
        t23: t23(),
        p_inv0: -1.0,
        pump,
        probe,
        k_parallel: 0.0,
        spacing: 5e-4,
        span_widths: 12.0,
        eps_reg: EPS_REG,
        imag,
        method: Method::Direct,
    }
}

/// Sup-norm mismatch relative to the oracle peak, over the reported probe band.
fn probe_mismatch(imag: ImagPart) -> f64 {
    let s = setup(imag);
    let r = s.run().unwrap();
    let g = r.third.grid;
    let f = pulse_spectrum(&s.probe, &g);
    let peak_f = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let idx: Vec<usize> = (0..g.len).filter(|&i| f[i].norm() > 1e-3 * peak_f).step_by(4).collect();
    let omegas: Vec<f64> = idx.iter().map(|&i| g.omega(i)).collect();
    let reference = trace().sigma23_spectrum(&omegas);
    let peak = reference.iter().map(|z| z.norm()).fold(0.0, f64::max);
    idx.iter()
        .zip(&reference)
        .map(|(&i, o)| (r.third.values[i] - o).norm())
        .fold(0.0, f64::max)
        / peak
}

#[test]
fn third_order_matches_time_integration() {
    let err = probe_mismatch(ImagPart::TimeDomain);
    println!("time-domain imaginary part: sup mismatch {err:.3e}");
    assert!(err < 0.02, "{err}");
}

#[test]
fn pointwise_imaginary_part_is_less_faithful() {
    let td = probe_mismatch(ImagPart::TimeDomain);
    let pw = probe_mismatch(ImagPart::Pointwise);
    println!("sup mismatch: time-domain {td:.3e}, pointwise {pw:.3e}");
    assert!(pw > 10.0 * td);
}

#[test]
fn population_trace_matches_time_integration() {
    let r = setup(ImagPart::TimeDomain).run().unwrap();
    let tr = trace();
    let picks: Vec<usize> = (0..tr.times.len()).step_by(250).collect();
    let times: Vec<f64> = picks.iter().map(|&i| tr.times[i]).collect();
    let p = r.population.time_trace(&times);
    let peak = tr.population.iter().cloned().fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (k, &i) in picks.iter().enumerate() {
        assert!(p[k].im.abs() < 1e-6 * peak);
        worst = worst.max((p[k].re - tr.population[i]).abs());
    }
    println!("population sup mismatch {:.3e} of peak {peak:.3e}", worst / peak);
    assert!(worst < 0.01 * peak);
}

#[test]
fn pump_band_coherence_matches_time_integration() {
    let r = setup(ImagPart::TimeDomain).run().unwrap();
    let g = r.first.grid;
    let tr = trace();
    let dt = tr.times[1] - tr.times[0];
    let c = pulses().0.center;
    let idx: Vec<usize> = (0..g.len).step_by(40).collect();
    let mut worst: f64 = 0.0;
    let mut peak: f64 = 0.0;
    for &i in &idx {
        let det = (g.omega(i) - c) / slr_core::HBAR;
        let vals: Vec<C> = tr.times.iter().zip(&tr.sigma12).map(|(&t, &s)| s * C::new(0.0, det * t).exp()).collect();
        let ft = (vals[1..vals.len() - 1].iter().sum::<C>() + (vals[0] + vals[vals.len() - 1]) * 0.5) * dt;
        worst = worst.max((ft - r.first.values[i]).norm());
        peak = peak.max(ft.norm());
    }
    assert!(worst < 1e-3 * peak, "{}", worst / peak);
}
