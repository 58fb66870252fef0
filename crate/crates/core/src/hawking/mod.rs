//! Thermal observables of the soliton horizon.
//!
//! A horizon with surface-gravity scale `beta_s` radiates modes of
//! frequency `omega` with mean occupation `1 / (e^{2 pi omega / beta_s} -
//! 1)`, a Planck law at comoving temperature `beta_s / 2 pi`. Everything
//! here works in the rescaled units of the field equation; conversions to
//! kelvin and watts go through the circuit scales.

mod bogoliubov;

pub use bogoliubov::{
    bogoliubov_spectrum, BogoliubovSpectrum, QuadratureControls, SpectrumResult,
};

use crate::circuit::DerivedScales;
use crate::constants::{BOLTZMANN, HBAR};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HawkingError {
    #[error("beta_s must lie in (0, 1), got {0}")]
    BetaRange(f64),
    #[error("mode frequency must be positive and finite, got {0}")]
    FrequencyRange(f64),
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("sample {index} must be positive and finite")]
    BadSample { index: usize },
    #[error("sample lists differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("quadrature control {name} is out of range: {value}")]
    ControlRange { name: &'static str, value: f64 },
    #[error(
        "mode ratio at omega = {omega} stalled at relative change {last_change:e}, target {tol:e}"
    )]
    QuadratureStalled {
        omega: f64,
        last_change: f64,
        tol: f64,
    },
}

fn check_beta(beta: f64) -> Result<(), HawkingError> {
    if beta > 0.0 && beta < 1.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(HawkingError::BetaRange(beta))
    }
}

fn check_frequency(omega: f64) -> Result<(), HawkingError> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(HawkingError::FrequencyRange(omega))
    }
}

/// Mean occupation of a mode at frequency `omega` on a horizon of
/// surface-gravity scale `beta`.
///
/// Evaluates `1 / (e^{2 pi omega / beta} - 1)`, switching to the bare
/// exponential once the argument would overflow `exp_m1`.
pub fn occupation(omega: f64, beta: f64) -> Result<f64, HawkingError> {
    check_beta(beta)?;
    check_frequency(omega)?;
    let x = 2.0 * PI * omega / beta;
    Ok(if x > 700.0 {
        (-x).exp()
    } else {
        1.0 / x.exp_m1()
    })
}

pub fn occupation_spectrum(omegas: &[f64], beta: f64) -> Result<Vec<f64>, HawkingError> {
    omegas.iter().map(|&w| occupation(w, beta)).collect()
}

/// Horizon temperatures in rescaled units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperatures {
    /// `beta_s / 2 pi`, seen by an observer riding the soliton.
    pub comoving: f64,
    /// Doppler-shifted value `comoving * sqrt((1 - beta_s)/(1 + beta_s))`
    /// seen from the line frame.
    pub lab: f64,
}

pub fn temperatures(beta: f64) -> Result<Temperatures, HawkingError> {
    check_beta(beta)?;
    let comoving = beta / (2.0 * PI);
    let lab = comoving * ((1.0 - beta) / (1.0 + beta)).sqrt();
    Ok(Temperatures { comoving, lab })
}

impl Temperatures {
    /// Comoving temperature in kelvin, `hbar m T / k_B` with the mass
    /// frequency taken from the circuit scales.
    pub fn comoving_kelvin(&self, scales: &DerivedScales) -> f64 {
        HBAR * scales.mass * self.comoving / BOLTZMANN
    }

    pub fn lab_kelvin(&self, scales: &DerivedScales) -> f64 {
        HBAR * scales.mass * self.lab / BOLTZMANN
    }
}

/// One-dimensional thermal emission power in watts,
/// `(pi / 12 hbar) (k_B T)^2` for a temperature in kelvin.
pub fn radiated_power(temperature_kelvin: f64) -> f64 {
    let kt = BOLTZMANN * temperature_kelvin;
    PI / (12.0 * HBAR) * kt * kt
}

/// Planck-law fit of an occupation spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckFit {
    /// Best-fit comoving temperature in rescaled units.
    pub temperature: f64,
    /// Root-mean-square residual of log occupations at the optimum.
    pub rms_log_residual: f64,
    pub samples: usize,
}

impl PlanckFit {
    pub const MIN_SAMPLES: usize = 8;
}

fn log_planck(omega: f64, temperature: f64) -> f64 {
    let x = omega / temperature;
    if x > 700.0 {
        -x
    } else {
        -x.exp_m1().ln()
    }
}

/// Fit a single-temperature Planck law to `(omega, occupation)` samples by
/// least squares on log occupations.
///
/// The objective is unimodal in the log of the temperature, so a
/// golden-section search over a bracket built from per-sample temperature
/// estimates finds the optimum without derivatives.
pub fn planck_fit(omegas: &[f64], occupations: &[f64]) -> Result<PlanckFit, HawkingError> {
    if omegas.len() != occupations.len() {
        return Err(HawkingError::LengthMismatch {
            left: omegas.len(),
            right: occupations.len(),
        });
    }
    if omegas.len() < PlanckFit::MIN_SAMPLES {
        return Err(HawkingError::TooFewSamples {
            min: PlanckFit::MIN_SAMPLES,
            got: omegas.len(),
        });
    }
    for &w in omegas {
        check_frequency(w)?;
    }
    for (index, &n) in occupations.iter().enumerate() {
        if !(n > 0.0 && n.is_finite()) {
            return Err(HawkingError::BadSample { index });
        }
    }

    let estimates: Vec<f64> = omegas
        .iter()
        .zip(occupations)
        .map(|(&w, &n)| w / (1.0 + 1.0 / n).ln())
        .collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &t in &estimates {
        lo = lo.min(t);
        hi = hi.max(t);
    }
    let (mut a, mut b) = ((0.5 * lo).ln(), (2.0 * hi).ln());

    let objective = |log_t: f64| {
        let t = log_t.exp();
        let mut acc = 0.0;
        for (&w, &n) in omegas.iter().zip(occupations) {
            let r = n.ln() - log_planck(w, t);
            acc += r * r;
        }
        acc / omegas.len() as f64
    };

    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    for _ in 0..200 {
        if b - a < 1e-13 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let log_t = 0.5 * (a + b);
    Ok(PlanckFit {
        temperature: log_t.exp(),
        rms_log_residual: objective(log_t).sqrt(),
        samples: omegas.len(),
    })
}
