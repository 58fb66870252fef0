//! Mode-mixing integrals across the horizon.
//!
//! An outgoing mode of frequency `Omega` decomposes into positive and
//! negative frequency parts of the infalling plane waves through the pair
//!
//! ```text
//! I_-+ = int e^{-i Omega u~} exp((-+i - eps) omega u(u~)) du~,
//! u(u~) = e^{beta u~} / beta,
//! ```
//!
//! regulated by a small damping `eps`. Thermality shows up as
//! `|I_- / I_+|^2 -> e^{-2 pi Omega / beta}` when the regulator is removed.
//! The integrand never decays on the left, so the constant part is split
//! off and integrated exactly (`i / Omega`); the remainder falls below any
//! envelope cut at finite windows, where composite Simpson rules with node
//! density tied to the local phase rate finish the job. The regulator
//! limit is taken by Richardson extrapolation in log space across the pair
//! `(eps, eps/2)`, which cancels the leading `O(eps)` tilt of the ratio.

use super::HawkingError;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Tunable knobs of the mode-mixing quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControls {
    /// Damping `eps` applied to the infalling phase; the spectrum is
    /// extrapolated across `(regulator, regulator / 2)`.
    pub regulator: f64,
    /// Envelope level below which the integrand is dropped; sets both
    /// window edges.
    pub envelope_cut: f64,
    /// Simpson nodes per local oscillation period at the first attempt.
    pub nodes_per_period: f64,
    /// Relative change between refinements accepted as converged.
    pub relative_tol: f64,
    /// Refinements tried before reporting a stall (node density doubles
    /// each time).
    pub max_doublings: u32,
    /// Frequency of the infalling reference mode.
    pub mode_frequency: f64,
}

impl Default for QuadratureControls {
    fn default() -> Self {
        Self {
            regulator: 1e-2,
            envelope_cut: 1e-12,
            nodes_per_period: 16.0,
            relative_tol: 1e-3,
            max_doublings: 3,
            mode_frequency: 1.0,
        }
    }
}

impl QuadratureControls {
    fn validate(&self) -> Result<(), HawkingError> {
        let bad = |name: &'static str, value: f64| Err(HawkingError::ControlRange { name, value });
        if !(self.regulator > 0.0 && self.regulator < 1.0) {
            return bad("regulator", self.regulator);
        }
        if !(self.envelope_cut > 0.0 && self.envelope_cut < 1e-3) {
            return bad("envelope_cut", self.envelope_cut);
        }
        if !(self.nodes_per_period >= 4.0 && self.nodes_per_period.is_finite()) {
            return bad("nodes_per_period", self.nodes_per_period);
        }
        if self.relative_tol.is_nan() || self.relative_tol < 0.0 {
            return bad("relative_tol", self.relative_tol);
        }
        if self.max_doublings == 0 {
            return bad("max_doublings", 0.0);
        }
        if !(self.mode_frequency > 0.0 && self.mode_frequency.is_finite()) {
            return bad("mode_frequency", self.mode_frequency);
        }
        Ok(())
    }
}

/// Converged ratio for a single outgoing frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub omega: f64,
    /// Extrapolated `|I_- / I_+|^2`.
    pub ratio: f64,
    /// Occupation `ratio / (1 - ratio)`.
    pub occupation: f64,
    /// Ratio after each node-density refinement, coarsest first.
    pub history: Vec<f64>,
}

/// Mode-mixing spectrum over a list of outgoing frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovSpectrum {
    pub beta: f64,
    pub results: Vec<SpectrumResult>,
}

impl BogoliubovSpectrum {
    /// Worst relative deviation of the computed occupations from the
    /// closed-form thermal law.
    pub fn thermal_deviation(&self) -> f64 {
        self.results
            .iter()
            .map(|r| {
                let exact = 1.0 / (2.0 * PI * r.omega / self.beta).exp_m1();
                (r.occupation - exact).abs() / exact
            })
            .fold(0.0, f64::max)
    }
}

fn mixing_integral(
    beta: f64,
    big_omega: f64,
    sign: f64,
    eps: f64,
    nodes: f64,
    controls: &QuadratureControls,
) -> Complex64 {
    let omega = controls.mode_frequency;
    let cut = controls.envelope_cut;
    let w_minus = (omega / (beta * cut)).ln() / beta;
    let w_plus = ((-cut.ln()) * beta / (eps * omega)).ln() / beta;

    let infalling = |ut: f64| -> Complex64 {
        let u = (beta * ut).exp() / beta;
        (Complex64::new(-eps, sign) * (omega * u)).exp()
    };
    let segment = |lo: f64, hi: f64, subtract_constant: bool| -> Complex64 {
        let local_rate = big_omega + omega * (beta * hi).exp();
        let mut n = ((hi - lo) * local_rate / (2.0 * PI) * nodes).ceil() as usize;
        n = n.max(8);
        n += n % 2;
        let h = (hi - lo) / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            let ut = lo + k as f64 * h;
            let mut value = infalling(ut);
            if subtract_constant {
                value -= 1.0;
            }
            let weight = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += weight * Complex64::new(0.0, -big_omega * ut).exp() * value;
        }
        acc * (h / 3.0)
    };

    let mut total = Complex64::new(0.0, 0.0);
    let chunks = (w_minus as usize).max(2);
    let width = w_minus / chunks as f64;
    for k in 0..chunks {
        let lo = -w_minus + k as f64 * width;
        total += segment(lo, lo + width, true);
    }
    let chunks = (w_plus.ceil() as usize).max(2) * 2;
    let width = w_plus / chunks as f64;
    for k in 0..chunks {
        let lo = k as f64 * width;
        total += segment(lo, lo + width, false);
    }
    total + Complex64::new(0.0, 1.0 / big_omega)
}

fn regulated_ratio(
    beta: f64,
    big_omega: f64,
    nodes: f64,
    controls: &QuadratureControls,
) -> f64 {
    let ratio_at = |eps: f64| {
        let i_minus = mixing_integral(beta, big_omega, -1.0, eps, nodes, controls);
        let i_plus = mixing_integral(beta, big_omega, 1.0, eps, nodes, controls);
        (i_minus / i_plus).norm_sqr()
    };
    let coarse = ratio_at(controls.regulator);
    let fine = ratio_at(0.5 * controls.regulator);
    fine * fine / coarse
}

/// Compute `|I_- / I_+|^2` and the implied occupations for each outgoing
/// frequency, doubling the quadrature density until self-consistent.
pub fn bogoliubov_spectrum(
    beta: f64,
    omegas: &[f64],
    controls: &QuadratureControls,
) -> Result<BogoliubovSpectrum, HawkingError> {
    if !(beta > 0.0 && beta < 1.0 && beta.is_finite()) {
        return Err(HawkingError::BetaRange(beta));
    }
    controls.validate()?;
    if omegas.is_empty() {
        return Err(HawkingError::TooFewSamples { min: 1, got: 0 });
    }

    let mut results = Vec::with_capacity(omegas.len());
    for &omega in omegas {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(HawkingError::FrequencyRange(omega));
        }
        let mut nodes = controls.nodes_per_period;
        let mut previous = regulated_ratio(beta, omega, nodes, controls);
        let mut history = vec![previous];
        let mut accepted = None;
        let mut last_change = f64::INFINITY;
        for _ in 0..controls.max_doublings {
            nodes *= 2.0;
            let current = regulated_ratio(beta, omega, nodes, controls);
            history.push(current);
            last_change = (current - previous).abs() / current.abs().max(f64::MIN_POSITIVE);
            if last_change < controls.relative_tol {
                accepted = Some(current);
                break;
            }
            previous = current;
        }
        let ratio = accepted.ok_or(HawkingError::QuadratureStalled {
            omega,
            last_change,
            tol: controls.relative_tol,
        })?;
        if !(0.0..1.0).contains(&ratio) {
            return Err(HawkingError::BadSample {
                index: results.len(),
            });
        }
        results.push(SpectrumResult {
            omega,
            ratio,
            occupation: ratio / (1.0 - ratio),
            history,
        });
    }
    Ok(BogoliubovSpectrum { beta, results })
}
