//! Classical oracle for `z'''' + (Ω² + ω²) z'' + Ω²ω² z = 0`.
//!
//! Every solution is a sum of two sinusoids at `Ω` and `ω`. [`integrate`]
//! solves the same equation with fixed-step RK4 on the first-order system
//! `u = (z, ż, z̈, z⃛)`, and [`match_expectation`] compares the integrated
//! trajectory against the quantum `⟨z⟩(t)`.

use crate::gcs::{GcsLabel, OscillatorSpec};
use crate::modes::PuoParams;
use crate::puo::{self, PuoStateLabel};
use crate::{Error, Result};

/// Step for the 5-point second-derivative stencil is `SECOND_DIFF_STEP / freq`.
pub const SECOND_DIFF_STEP: f64 = 1e-3;

/// Step for the 7-point fourth-derivative stencil is `FOURTH_DIFF_STEP / Ω`.
/// Smaller steps lose the fourth difference to roundoff (`∝ eps/h⁴`).
pub const FOURTH_DIFF_STEP: f64 = 0.05;

/// `z` and its first three time derivatives at the start of integration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalInit {
    pub z0: f64,
    pub zdot0: f64,
    pub zddot0: f64,
    pub zdddot0: f64,
}

impl ClassicalInit {
    fn to_state(self) -> [f64; 4] {
        [self.z0, self.zdot0, self.zddot0, self.zdddot0]
    }
}

/// `amp_big·sin(Ωt + phase_big) + amp_small·sin(ωt + phase_small)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSolution {
    pub amp_big: f64,
    pub phase_big: f64,
    pub amp_small: f64,
    pub phase_small: f64,
}

impl TwoModeSolution {
    /// The classical solution that `⟨z⟩(t)` should follow for these labels:
    /// amplitudes `√(2J/Ω)/s`, `√(2j/ω)/s`, phases `Γ₀`, `γ₀`.
    pub fn for_label(params: &PuoParams, label: &PuoStateLabel) -> Self {
        let s = params.splitting();
        Self {
            amp_big: (2.0 * label.big_strength() / params.big_freq()).sqrt() / s,
            phase_big: label.big_phase0(),
            amp_small: (2.0 * label.small_strength() / params.small_freq()).sqrt() / s,
            phase_small: label.small_phase0(),
        }
    }

    /// `k`-th time derivative at `t`, differentiated analytically.
    pub fn derivative(&self, params: &PuoParams, t: f64, k: u32) -> f64 {
        let term = |amp: f64, freq: f64, phase: f64| {
            // d^k/dt^k sin(ft + φ) = f^k sin(ft + φ + kπ/2)
            amp * freq.powi(k as i32) * (freq * t + phase + k as f64 * std::f64::consts::FRAC_PI_2).sin()
        };
        term(self.amp_big, params.big_freq(), self.phase_big)
            + term(self.amp_small, params.small_freq(), self.phase_small)
    }

    pub fn value(&self, params: &PuoParams, t: f64) -> f64 {
        analytic_solution(
            params,
            self.amp_big,
            self.phase_big,
            self.amp_small,
            self.phase_small,
            t,
        )
    }

    pub fn init_at(&self, params: &PuoParams, t: f64) -> ClassicalInit {
        ClassicalInit {
            z0: self.derivative(params, t, 0),
            zdot0: self.derivative(params, t, 1),
            zddot0: self.derivative(params, t, 2),
            zdddot0: self.derivative(params, t, 3),
        }
    }
}

pub fn analytic_solution(
    params: &PuoParams,
    amp_big: f64,
    phase_big: f64,
    amp_small: f64,
    phase_small: f64,
    t: f64,
) -> f64 {
    amp_big * (params.big_freq() * t + phase_big).sin() + amp_small * (params.small_freq() * t + phase_small).sin()
}

/// Uniformly sampled solution with derivatives up to third order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub z: Vec<f64>,
    pub zdot: Vec<f64>,
    pub zddot: Vec<f64>,
    pub zdddot: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn push(&mut self, t: f64, u: [f64; 4]) {
        self.times.push(t);
        self.z.push(u[0]);
        self.zdot.push(u[1]);
        self.zddot.push(u[2]);
        self.zdddot.push(u[3]);
    }
}

fn rhs(params: &PuoParams, u: &[f64; 4]) -> [f64; 4] {
    let (b2, w2) = (params.big_freq().powi(2), params.small_freq().powi(2));
    [u[1], u[2], u[3], -(b2 + w2) * u[2] - b2 * w2 * u[0]]
}

fn rk4_step(params: &PuoParams, u: &[f64; 4], h: f64) -> [f64; 4] {
    let axpy = |a: &[f64; 4], k: &[f64; 4], c: f64| -> [f64; 4] {
        [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2], a[3] + c * k[3]]
    };
    let k1 = rhs(params, u);
    let k2 = rhs(params, &axpy(u, &k1, h / 2.0));
    let k3 = rhs(params, &axpy(u, &k2, h / 2.0));
    let k4 = rhs(params, &axpy(u, &k3, h));
    let mut out = *u;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// RK4 from `t = 0` to `t_end`.
pub fn integrate(params: &PuoParams, init: ClassicalInit, t_end: f64, dt: f64) -> Result<Trajectory> {
    integrate_from(params, init, 0.0, t_end, dt)
}

/// RK4 over `[t0, t_end]`. The requested `dt` is rounded down so that a whole
/// number of uniform steps lands exactly on `t_end`.
pub fn integrate_from(params: &PuoParams, init: ClassicalInit, t0: f64, t_end: f64, dt: f64) -> Result<Trajectory> {
    let span = t_end - t0;
    if !(span > 0.0 && span.is_finite()) {
        return Err(Error::BadInterval(span));
    }
    let limit = 0.1 / params.big_freq();
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let steps = ((span / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = span / steps as f64;

    let mut traj = Trajectory::default();
    let mut u = init.to_state();
    if !u.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite { t: t0 });
    }
    traj.push(t0, u);
    for i in 1..=steps {
        u = rk4_step(params, &u, h);
        let t = t0 + i as f64 * h;
        if !u.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        traj.push(t, u);
    }
    Ok(traj)
}

/// Largest `|z_RK4(t) − ⟨z⟩(t)|` over the integration grid, with the classical
/// initial data taken analytically from the labels.
pub fn match_expectation(params: &PuoParams, label: &PuoStateLabel, t_end: f64, dt: f64) -> Result<f64> {
    let solution = TwoModeSolution::for_label(params, label);
    let traj = integrate(params, solution.init_at(params, 0.0), t_end, dt)?;
    Ok(traj
        .times
        .iter()
        .zip(&traj.z)
        .map(|(&t, &z)| (z - puo::closed_moments(params, &label.at_time(t)).mean_z).abs())
        .fold(0.0, f64::max))
}

/// Max deviation of an RK4 trajectory from the analytic two-mode solution.
pub fn max_error_vs_analytic(params: &PuoParams, solution: &TwoModeSolution, t_end: f64, dt: f64) -> Result<f64> {
    let traj = integrate(params, solution.init_at(params, 0.0), t_end, dt)?;
    Ok(traj
        .times
        .iter()
        .zip(&traj.z)
        .map(|(&t, &z)| (z - solution.value(params, t)).abs())
        .fold(0.0, f64::max))
}

/// `log₂(err(dt)/err(dt/2))` against the analytic solution.
pub fn convergence_order(params: &PuoParams, solution: &TwoModeSolution, t_end: f64, dt: f64) -> Result<f64> {
    let coarse = max_error_vs_analytic(params, solution, t_end, dt)?;
    let fine = max_error_vs_analytic(params, solution, t_end, dt / 2.0)?;
    Ok((coarse / fine).log2())
}

/// Centered 5-point second derivative.
pub fn second_derivative_5pt(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (-f(t - 2.0 * h) + 16.0 * f(t - h) - 30.0 * f(t) + 16.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h * h)
}

/// Centered 7-point fourth derivative.
pub fn fourth_derivative_7pt(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    let c = [-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0];
    let sum: f64 = c
        .iter()
        .enumerate()
        .map(|(i, ci)| ci * f(t + (i as f64 - 3.0) * h))
        .sum();
    sum / (6.0 * h.powi(4))
}

/// Finite-difference residual of `z'''' + (Ω²+ω²)z'' + Ω²ω²z` over the sample
/// times, divided by the largest individual term seen.
pub fn equation_of_motion_residual(params: &PuoParams, f: impl Fn(f64) -> f64, times: &[f64]) -> f64 {
    let (b2, w2) = (params.big_freq().powi(2), params.small_freq().powi(2));
    let h = FOURTH_DIFF_STEP / params.big_freq();
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for &t in times {
        let d4 = fourth_derivative_7pt(&f, t, h);
        let d2 = (b2 + w2) * second_derivative_5pt(&f, t, h);
        let d0 = b2 * w2 * f(t);
        worst = worst.max((d4 + d2 + d0).abs());
        scale = scale.max(d4.abs()).max(d2.abs()).max(d0.abs());
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

/// Ehrenfest check for one oscillator: `d²⟨pos⟩/dt² + freq²⟨pos⟩` over the
/// sample times, relative to `freq²·max|⟨pos⟩|`.
pub fn ehrenfest_residual(spec: &OscillatorSpec, label: &GcsLabel, times: &[f64]) -> f64 {
    let f2 = spec.freq() * spec.freq();
    let mean_pos = |t: f64| crate::gcs::first_moments(spec, &label.advanced(spec.freq(), t)).0;
    let h = SECOND_DIFF_STEP / spec.freq();
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for &t in times {
        let x = mean_pos(t);
        let d2 = second_derivative_5pt(mean_pos, t, h);
        worst = worst.max((d2 + f2 * x).abs());
        scale = scale.max(f2 * x.abs()).max(d2.abs());
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}
