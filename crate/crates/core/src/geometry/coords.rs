//! Coordinate chain from the comoving soliton frame to horizon-regular
//! null coordinates.
//!
//! Writing `r = sech(rho) / gamma` turns the comoving soliton metric into
//! the static form `f dT^2 - f^{-1} dr^2` with lapse `f = beta_s^2 - r^2`,
//! after absorbing the cross term into the shifted time
//! `dT = dtau + beta_s tanh^2(rho) / (gamma f) drho`. The horizon sits at
//! `r = beta_s`. From there the tortoise coordinate flattens the radial
//! part and the exponential null pair removes the horizon singularity of
//! the chart.

use super::{Chart, GeometryError, MetricPatch};
use crate::field::SolitonSpec;
use crate::grid::Grid2D;
use rand::Rng;

/// Exponent magnitude past which the null-coordinate map is reported as
/// saturated instead of overflowing.
const EXP_SATURATION: f64 = 700.0;

fn check_beta(beta: f64) -> Result<(), GeometryError> {
    if beta > 0.0 && beta < 1.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::BetaRange(beta))
    }
}

/// Static-chart data of a single comoving point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzschildPoint {
    /// Areal-like coordinate `sech(rho) / gamma`.
    pub r: f64,
    /// Lapse `beta_s^2 - r^2`; negative inside the horizon.
    pub metric_factor: f64,
    pub near_horizon: bool,
}

impl SchwarzschildPoint {
    /// Relative half-width of the band flagged as near-horizon.
    pub const NEAR_HORIZON_RTOL: f64 = 1e-8;
}

/// Map a comoving position to the static chart of the soliton hole.
pub fn to_schwarzschild(spec: &SolitonSpec, rho: f64) -> SchwarzschildPoint {
    let beta = spec.beta_s;
    let r = (1.0 / rho.cosh()) / spec.gamma();
    let metric_factor = beta * beta - r * r;
    SchwarzschildPoint {
        r,
        metric_factor,
        near_horizon: (r - beta).abs() < SchwarzschildPoint::NEAR_HORIZON_RTOL * beta,
    }
}

/// Comoving position of the horizon, `arcsech(gamma beta_s)`.
pub fn horizon_rho(beta: f64) -> Result<f64, GeometryError> {
    check_beta(beta)?;
    let x = beta / (1.0 + beta * beta).sqrt();
    Ok(((1.0 + (1.0 - x * x).sqrt()) / x).ln())
}

/// Tortoise coordinate `(2 beta_s)^{-1} ln((beta_s + r)/(beta_s - r))`.
///
/// Defined on `0 <= r < beta_s`; diverges logarithmically at the horizon.
pub fn tortoise(r: f64, beta: f64) -> Result<f64, GeometryError> {
    check_beta(beta)?;
    if !(0.0..beta).contains(&r) {
        return Err(GeometryError::TortoiseDomain { r, beta });
    }
    Ok(((beta + r) / (beta - r)).ln() / (2.0 * beta))
}

/// Inverse of [`tortoise`], `beta_s tanh(beta_s r_star)`.
pub fn inverse_tortoise(r_star: f64, beta: f64) -> f64 {
    beta * (beta * r_star).tanh()
}

/// Max relative deviation between a fourth-order finite difference of
/// [`tortoise`] and the analytic derivative `1 / (beta_s^2 - r^2)`.
pub fn tortoise_derivative_check(beta: f64, rs: &[f64]) -> Result<f64, GeometryError> {
    check_beta(beta)?;
    if rs.is_empty() {
        return Err(GeometryError::TooFewPoints { min: 1, got: 0 });
    }
    let mut worst = 0.0_f64;
    for &r in rs {
        let h = 1e-3 * (beta - r);
        if r - 2.0 * h < 0.0 || r + 2.0 * h >= beta {
            return Err(GeometryError::TortoiseDomain { r, beta });
        }
        let f = |x: f64| tortoise(x, beta).expect("stencil stays inside the domain");
        let fd = (-f(r + 2.0 * h) + 8.0 * f(r + h) - 8.0 * f(r - h) + f(r - 2.0 * h))
            / (12.0 * h);
        let exact = 1.0 / (beta * beta - r * r);
        worst = worst.max((fd - exact).abs() / exact);
    }
    Ok(worst)
}

/// Horizon-regular null pair with saturation reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalCoords {
    pub u: f64,
    pub v: f64,
    /// True when an exponent was clamped at +/-700 to stay finite.
    pub saturated: bool,
}

/// Null-coordinate map `u = e^{beta (t - r_star)} / beta`,
/// `v = e^{-beta (t + r_star)} / beta`.
pub fn kruskal(t: f64, r_star: f64, beta: f64) -> Result<KruskalCoords, GeometryError> {
    check_beta(beta)?;
    let eu = beta * (t - r_star);
    let ev = -beta * (t + r_star);
    let saturated = eu.abs() > EXP_SATURATION || ev.abs() > EXP_SATURATION;
    let u = eu.clamp(-EXP_SATURATION, EXP_SATURATION).exp() / beta;
    let v = ev.clamp(-EXP_SATURATION, EXP_SATURATION).exp() / beta;
    Ok(KruskalCoords { u, v, saturated })
}

/// Metric patch in the null chart, `ds^2 = (beta_s + r)^2 du dv` with
/// `r = beta_s (1 - beta_s^2 u v) / (1 + beta_s^2 u v)`.
///
/// The patch is regular across the horizon `u v = 0`. Points whose `r`
/// falls outside the image of the soliton chart, `0 <= r <= sqrt(1 +
/// beta_s^2)`, are marked degenerate.
pub fn kruskal_patch(beta: f64, grid: Grid2D) -> Result<MetricPatch, GeometryError> {
    check_beta(beta)?;
    let n = grid.len();
    let mut g01 = Vec::with_capacity(n);
    let mut degenerate = Vec::with_capacity(n);
    let r_max = (1.0 + beta * beta).sqrt();
    for i in 0..grid.tau.len() {
        let u = grid.tau.position(i);
        for j in 0..grid.xi.len() {
            let v = grid.xi.position(j);
            let w = beta * beta * u * v;
            let r = beta * (1.0 - w) / (1.0 + w);
            let half = beta + r;
            g01.push(0.5 * half * half);
            degenerate.push(!r.is_finite() || r < 0.0 || r > r_max);
        }
    }
    Ok(MetricPatch {
        chart: Chart::Kruskal,
        grid,
        g00: vec![0.0; n],
        g11: vec![0.0; n],
        g01,
        degenerate,
    })
}

/// Outcome of pulling the null-chart metric back through finite-difference
/// Jacobians and comparing against the diagonal tortoise form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullbackReport {
    pub points: usize,
    /// Overall sign fitted between the pullback and `diag(f, -f)`.
    pub sign: f64,
    /// Worst componentwise mismatch relative to the local lapse.
    pub max_rel_error: f64,
    /// Worst mismatch between finite-difference and analytic null-map
    /// derivatives, `du/dt = beta u` and friends.
    pub max_derivative_error: f64,
}

/// Pull `ds^2 = (beta+r)^2 du dv` back to the tortoise chart at random
/// exterior points and fit the overall sign against `diag(f, -f)`.
pub fn kruskal_pullback_check(
    beta: f64,
    points: usize,
    rng: &mut impl Rng,
) -> Result<PullbackReport, GeometryError> {
    check_beta(beta)?;
    if points == 0 {
        return Err(GeometryError::TooFewPoints { min: 1, got: 0 });
    }
    let u_of = |t: f64, rs: f64| (beta * (t - rs)).exp() / beta;
    let v_of = |t: f64, rs: f64| (-beta * (t + rs)).exp() / beta;
    let h = 1e-3;
    let d1 = |f: &dyn Fn(f64) -> f64, x: f64| {
        (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
    };

    let mut sign_sum = 0.0;
    let mut samples = Vec::with_capacity(points);
    for _ in 0..points {
        let r = rng.gen_range(0.05 * beta..0.95 * beta);
        let t = rng.gen_range(-2.0..2.0);
        let rs = tortoise(r, beta)?;
        let f = beta * beta - r * r;
        let guv = 0.5 * (beta + r) * (beta + r);

        let u_t = d1(&|x| u_of(x, rs), t);
        let u_r = d1(&|x| u_of(t, x), rs);
        let v_t = d1(&|x| v_of(x, rs), t);
        let v_r = d1(&|x| v_of(t, x), rs);

        let g_tt = 2.0 * guv * u_t * v_t;
        let g_rr = 2.0 * guv * u_r * v_r;
        let g_tr = guv * (u_t * v_r + u_r * v_t);
        sign_sum += g_tt * f;

        let u0 = u_of(t, rs);
        let v0 = v_of(t, rs);
        let deriv_err = ((u_t - beta * u0).abs() / (beta * u0))
            .max((u_r + beta * u0).abs() / (beta * u0))
            .max((v_t + beta * v0).abs() / (beta * v0))
            .max((v_r + beta * v0).abs() / (beta * v0));
        samples.push((f, g_tt, g_rr, g_tr, deriv_err));
    }

    let sign = if sign_sum >= 0.0 { 1.0 } else { -1.0 };
    let mut max_rel_error = 0.0_f64;
    let mut max_derivative_error = 0.0_f64;
    for (f, g_tt, g_rr, g_tr, deriv_err) in samples {
        let scale = f.abs();
        max_rel_error = max_rel_error
            .max((g_tt - sign * f).abs() / scale)
            .max((g_rr + sign * f).abs() / scale)
            .max(g_tr.abs() / scale);
        max_derivative_error = max_derivative_error.max(deriv_err);
    }
    if !(max_rel_error.is_finite() && max_derivative_error.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    Ok(PullbackReport {
        points,
        sign,
        max_rel_error,
        max_derivative_error,
    })
}

/// Residuals of the three coefficient identities tying the comoving metric
/// to the static form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartCheckReport {
    pub points: usize,
    /// `beta^2 - r^2` against `beta^2 tanh^2 - sech^2`, pure algebra.
    pub max_lapse_error: f64,
    /// Cross term `2 f dT/drho` against `2 beta tanh^2 / gamma`.
    pub max_cross_error: f64,
    /// Radial term `f (dT/drho)^2 - f^{-1} (dr/drho)^2` against
    /// `tanh^2 / gamma^2`.
    pub max_radial_error: f64,
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, fa, m, fm, b, fb, whole, tol, 28)
}

/// Verify the static-chart change of variables on an exterior band.
///
/// The shifted time is accumulated by adaptive quadrature of
/// `dT/drho = beta tanh^2(rho) / (gamma f)`, then differentiated back with
/// a fourth-order stencil and substituted into the three coefficient
/// identities linking `f dT^2 - f^{-1} dr^2` to the comoving metric.
pub fn schwarzschild_chart_check(
    spec: &SolitonSpec,
    rho_lo: f64,
    rho_hi: f64,
    points: usize,
) -> Result<ChartCheckReport, GeometryError> {
    let beta = spec.beta_s;
    let gamma = spec.gamma();
    if points < 9 {
        return Err(GeometryError::TooFewPoints {
            min: 9,
            got: points,
        });
    }
    let rho_h = horizon_rho(beta)?;
    let crosses = rho_lo >= rho_hi
        || rho_lo * rho_hi <= 0.0
        || rho_lo.abs().min(rho_hi.abs()) <= rho_h;
    if crosses {
        return Err(GeometryError::BandCrossesHorizon {
            lo: rho_lo,
            hi: rho_hi,
            horizon: rho_h,
        });
    }

    let lapse = |rho: f64| {
        let t = rho.tanh();
        let s = 1.0 / rho.cosh();
        beta * beta * t * t - s * s
    };
    let slope = |rho: f64| {
        let t = rho.tanh();
        beta * t * t / (gamma * lapse(rho))
    };

    let h = (rho_hi - rho_lo) / (points - 1) as f64;
    let rho: Vec<f64> = (0..points).map(|i| rho_lo + i as f64 * h).collect();
    let mut shifted_time = vec![0.0; points];
    for i in 1..points {
        let inc = adaptive_simpson(&slope, rho[i - 1], rho[i], 1e-13);
        shifted_time[i] = shifted_time[i - 1] + inc;
    }
    if shifted_time.iter().any(|t| !t.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let radius: Vec<f64> = rho.iter().map(|&p| (1.0 / p.cosh()) / gamma).collect();

    let d1 = |f: &[f64], i: usize| {
        (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h)
    };
    let mut report = ChartCheckReport {
        points: points - 4,
        max_lapse_error: 0.0,
        max_cross_error: 0.0,
        max_radial_error: 0.0,
    };
    for i in 2..points - 2 {
        let t = rho[i].tanh();
        let f_alg = lapse(rho[i]);
        let f_r = beta * beta - radius[i] * radius[i];
        let q_fd = d1(&shifted_time, i);
        let rp_fd = d1(&radius, i);

        let cross_ref = 2.0 * beta * t * t / gamma;
        let radial_ref = t * t / (gamma * gamma);
        report.max_lapse_error = report
            .max_lapse_error
            .max((f_r - f_alg).abs() / f_alg.abs());
        report.max_cross_error = report
            .max_cross_error
            .max((2.0 * f_alg * q_fd - cross_ref).abs() / cross_ref);
        report.max_radial_error = report
            .max_radial_error
            .max((f_alg * q_fd * q_fd - rp_fd * rp_fd / f_alg - radial_ref).abs() / radial_ref);
    }
    Ok(report)
}
