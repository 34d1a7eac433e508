//! Flux sweeps of the transmission phase.
//!
//! A lapse is a run of adjacent samples whose wrap-corrected phase step
//! exceeds a threshold. Runs that bracket a sign change of the real factor
//! `xi^-` in `t_L` are transmission zeros, not lapses, and are reported
//! separately as nodes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{derived_quantities, ModelParams};
use crate::scattering::{reduced_transmission_phase, scattering_amplitudes};

pub const DEFAULT_SHIFT_POINTS: usize = 10_000;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let r = PI - (PI - x).rem_euclid(2.0 * PI);
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

// wrap_phase, with the roundoff neighbourhood of -pi sent to +pi
fn closed_wrap(x: f64) -> f64 {
    let w = wrap_phase(x);
    if w < -PI + BRANCH_CUT_TOL {
        PI
    } else {
        w
    }
}

const BRANCH_CUT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LapseOptions {
    /// Minimum adjacent-sample step that starts a jump run.
    pub threshold: f64,
    /// Samples added on each side of a run when measuring its net jump.
    pub context: usize,
}

impl Default for LapseOptions {
    fn default() -> Self {
        Self { threshold: FRAC_PI_4, context: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LapseEvent {
    /// Midpoint of the steepest interval in the run.
    pub phi: f64,
    /// Net unwrapped phase change across the padded run.
    pub jump: f64,
    /// First and last sample index of the run.
    pub start: usize,
    pub end: usize,
}

/// Phase jump at a transmission zero.
pub type NodeEvent = LapseEvent;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseProfile {
    pub phi_samples: Vec<f64>,
    /// `Arg(t_L)`; `None` marks a sample at the lasing pole.
    pub omega_samples: Vec<Option<f64>>,
    pub magnitude_samples: Vec<Option<f64>>,
    pub lapse_events: Vec<LapseEvent>,
    pub node_events: Vec<NodeEvent>,
}

impl PhaseProfile {
    pub fn gaps(&self) -> usize {
        self.omega_samples.iter().filter(|s| s.is_none()).count()
    }
}

pub fn phase_profile(k: f64, gamma: f64, phi_range: (f64, f64), n: usize) -> Result<PhaseProfile> {
    phase_profile_with(k, gamma, phi_range, n, LapseOptions::default())
}

pub fn phase_profile_with(
    k: f64,
    gamma: f64,
    phi_range: (f64, f64),
    n: usize,
    opts: LapseOptions,
) -> Result<PhaseProfile> {
    let (lo, hi) = phi_range;
    if n < 3 {
        return Err(Error::InvalidParams(format!("phase profile needs n >= 3, got {n}")));
    }
    if !(lo < hi) {
        return Err(Error::InvalidParams(format!("empty flux range [{lo}, {hi}]")));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let phi_samples: Vec<f64> = (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect();

    let samples: Vec<(Option<f64>, Option<f64>, f64)> = phi_samples
        .par_iter()
        .map(|&phi| {
            let p = ModelParams::new(gamma, phi, k)?;
            let xi_minus = derived_quantities(&p).xi_minus;
            Ok(match scattering_amplitudes(&p) {
                Ok(a) => (Some(a.transmission_phase()), Some(a.transmission()), xi_minus),
                Err(Error::SingularTransmission(_)) => (None, None, xi_minus),
                Err(e) => return Err(e),
            })
        })
        .collect::<Result<_>>()?;

    let omega_samples: Vec<Option<f64>> = samples.iter().map(|s| s.0).collect();
    let magnitude_samples: Vec<Option<f64>> = samples.iter().map(|s| s.1).collect();
    let xi_minus: Vec<f64> = samples.iter().map(|s| s.2).collect();

    let (lapse_events, node_events) = detect_events(&phi_samples, &omega_samples, &xi_minus, opts);
    Ok(PhaseProfile { phi_samples, omega_samples, magnitude_samples, lapse_events, node_events })
}

fn detect_events(
    phi: &[f64],
    omega: &[Option<f64>],
    xi_minus: &[f64],
    opts: LapseOptions,
) -> (Vec<LapseEvent>, Vec<NodeEvent>) {
    // steps[i] spans samples i -> i+1
    let steps: Vec<Option<f64>> = omega
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => Some(wrap_phase(b - a)),
            _ => None,
        })
        .collect();

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < steps.len() {
        if steps[i].is_some_and(|d| d.abs() > opts.threshold) {
            let start = i;
            while i + 1 < steps.len() && steps[i + 1].is_some_and(|d| d.abs() > opts.threshold) {
                i += 1;
            }
            runs.push((start, i));
        }
        i += 1;
    }

    let mut lapses = Vec::new();
    let mut nodes = Vec::new();
    for (r, &(first, last)) in runs.iter().enumerate() {
        let floor = if r == 0 { 0 } else { runs[r - 1].1 + 1 };
        let ceil = runs.get(r + 1).map_or(steps.len(), |next| next.0);

        let mut lo = first;
        while lo > floor && first - lo < opts.context && steps[lo - 1].is_some() {
            lo -= 1;
        }
        let mut hi = last + 1;
        while hi < ceil && hi - (last + 1) < opts.context && steps[hi].is_some() {
            hi += 1;
        }
        let jump: f64 = steps[lo..hi].iter().map(|d| d.unwrap_or(0.0)).sum();

        let steepest = (first..=last)
            .max_by(|&a, &b| steps[a].unwrap().abs().total_cmp(&steps[b].unwrap().abs()))
            .unwrap();
        let event = LapseEvent {
            phi: 0.5 * (phi[steepest] + phi[steepest + 1]),
            jump,
            start: first,
            end: last + 1,
        };
        let crosses_zero = xi_minus[first].signum() != xi_minus[last + 1].signum()
            || xi_minus[first] == 0.0
            || xi_minus[last + 1] == 0.0;
        if crosses_zero {
            nodes.push(event);
        } else {
            lapses.push(event);
        }
    }
    (lapses, nodes)
}

pub fn max_phase_shift(k: f64, gamma: f64) -> Result<f64> {
    max_phase_shift_with(k, gamma, DEFAULT_SHIFT_POINTS)
}

/// `max_phi [Omega(phi) - Omega(pi/4)]` over `[0, pi/2]`.
///
/// `Omega` is the node-free transmission phase, differences are wrapped
/// into `(-pi, pi]`, and samples at the lasing pole are skipped. Fails only
/// when the reference point `phi = pi/4` itself sits on the pole.
///
/// A difference within roundoff of `-pi` counts as `+pi`: at `k = pi/2` the
/// phase takes only two values and the full lapse lands on the branch cut.
pub fn max_phase_shift_with(k: f64, gamma: f64, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 grid points, got {points}")));
    }
    let reference = reduced_transmission_phase(&ModelParams::new(gamma, FRAC_PI_4, k)?)?;
    let step = FRAC_PI_2 / (points - 1) as f64;
    let best = (0..points)
        .into_par_iter()
        .map(|i| {
            let phi = if i == points - 1 { FRAC_PI_2 } else { step * i as f64 };
            ModelParams::new(gamma, phi, k)
                .ok()
                .and_then(|p| reduced_transmission_phase(&p).ok())
                .map_or(f64::NEG_INFINITY, |w| closed_wrap(w - reference))
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(best)
}
