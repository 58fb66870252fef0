//! Effective geometry carried by the sine-Gordon field.
//!
//! In the rescaled coordinates the field defines the line element
//! `ds^2 = -sin^2(phi/2) dtau^2 + cos^2(phi/2) dxi^2` (Lorentzian sector)
//! or its Euclidean counterpart with `+sin^2`. On a single soliton the two
//! halves collapse to `-sech^2(rho)` and `tanh^2(rho)`, which is a black-hole
//! geometry in disguise; the coordinate chain that undresses it lives in
//! [`coords`].

mod coords;
mod curvature;

pub use coords::{
    horizon_rho, inverse_tortoise, kruskal, kruskal_patch, kruskal_pullback_check,
    schwarzschild_chart_check, to_schwarzschild, tortoise, tortoise_derivative_check,
    ChartCheckReport, KruskalCoords, PullbackReport, SchwarzschildPoint,
};
pub use curvature::{ricci_scalar, RicciField};

use crate::field::SolitonSpec;
use crate::grid::{Field2D, Grid2D};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("beta_s must lie in (0, 1), got {0}")]
    BetaRange(f64),
    #[error("tortoise coordinate needs 0 <= r < beta_s, got r = {r}, beta_s = {beta}")]
    TortoiseDomain { r: f64, beta: f64 },
    #[error("curvature needs a diagonal metric, patch has off-diagonal entries")]
    OffDiagonal,
    #[error("stencil needs at least {min} points per axis, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("rho band [{lo}, {hi}] touches or crosses the horizon at |rho| = {horizon:.6}")]
    BandCrossesHorizon { lo: f64, hi: f64, horizon: f64 },
    #[error("quadrature produced a non-finite value")]
    NonFinite,
}

/// Coordinate chart a metric patch is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Rescaled field coordinates (tau, xi).
    Soliton,
    /// Static black-hole coordinates (t, r).
    Schwarzschild,
    /// Static coordinates with the radial part flattened, (t, r_star).
    Tortoise,
    /// Horizon-regular null pair (u, v).
    Kruskal,
}

impl Chart {
    pub fn coordinate_names(&self) -> (&'static str, &'static str) {
        match self {
            Chart::Soliton => ("tau", "xi"),
            Chart::Schwarzschild => ("t", "r"),
            Chart::Tortoise => ("t", "r_star"),
            Chart::Kruskal => ("u", "v"),
        }
    }
}

/// Metric signature requested when building a patch from field data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    Euclidean,
    Lorentzian,
}

/// Metric components sampled on a rectangle of chart coordinates.
///
/// `degenerate[k]` marks points where a component collapses below the
/// degeneracy threshold and the metric stops being invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPatch {
    pub chart: Chart,
    pub grid: Grid2D,
    pub g00: Vec<f64>,
    pub g11: Vec<f64>,
    pub g01: Vec<f64>,
    pub degenerate: Vec<bool>,
}

impl MetricPatch {
    /// Components smaller than this in magnitude mark a degenerate point.
    pub const DEGENERACY_TOL: f64 = 1e-6;
}

/// Build the field-induced metric `diag(+/- sin^2(phi/2), cos^2(phi/2))`.
pub fn metric_from_field(phi: &Field2D, signature: Signature) -> MetricPatch {
    let n = phi.values.len();
    let mut g00 = Vec::with_capacity(n);
    let mut g11 = Vec::with_capacity(n);
    let mut degenerate = Vec::with_capacity(n);
    let time_sign = match signature {
        Signature::Euclidean => 1.0,
        Signature::Lorentzian => -1.0,
    };
    for p in &phi.values {
        let s = (p / 2.0).sin();
        let c = (p / 2.0).cos();
        g00.push(time_sign * s * s);
        g11.push(c * c);
        degenerate.push(s.abs() < MetricPatch::DEGENERACY_TOL || c.abs() < MetricPatch::DEGENERACY_TOL);
    }
    MetricPatch {
        chart: Chart::Soliton,
        grid: phi.grid,
        g00,
        g11,
        g01: vec![0.0; n],
        degenerate,
    }
}

/// The soliton metric in closed form, `diag(-sech^2 rho, tanh^2 rho)`.
///
/// Identical to pushing the soliton through [`metric_from_field`] because
/// `sin(phi_s/2) = sech(rho)` and `cos^2(phi_s/2) = tanh^2(rho)`.
pub fn soliton_metric_closed_form(spec: &SolitonSpec, grid: Grid2D) -> MetricPatch {
    let n = grid.len();
    let mut g00 = Vec::with_capacity(n);
    let mut g11 = Vec::with_capacity(n);
    let mut degenerate = Vec::with_capacity(n);
    for i in 0..grid.tau.len() {
        let tau = grid.tau.position(i);
        for j in 0..grid.xi.len() {
            let rho = spec.rho(tau, grid.xi.position(j));
            let sech = 1.0 / rho.cosh();
            let tanh = rho.tanh();
            g00.push(-sech * sech);
            g11.push(tanh * tanh);
            degenerate.push(
                sech.abs() < MetricPatch::DEGENERACY_TOL
                    || tanh.abs() < MetricPatch::DEGENERACY_TOL,
            );
        }
    }
    MetricPatch {
        chart: Chart::Soliton,
        grid,
        g00,
        g11,
        g01: vec![0.0; n],
        degenerate,
    }
}

/// Horizon location and the surface-gravity scale of the soliton hole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonInfo {
    /// Horizon radius in the static chart; equals the soliton velocity.
    pub r_horizon: f64,
    /// Surface-gravity proxy, the same `beta_s` (the lapse is
    /// `beta_s^2 - r^2`, whose half-derivative at the horizon is `beta_s`).
    pub surface_gravity_proxy: f64,
}

impl HorizonInfo {
    pub fn for_soliton(spec: &SolitonSpec) -> Self {
        Self {
            r_horizon: spec.beta_s,
            surface_gravity_proxy: spec.beta_s,
        }
    }

    /// Kruskal conformal factor `(beta_s + r)^2` evaluated at the horizon.
    pub fn kruskal_factor_at_horizon(&self) -> f64 {
        4.0 * self.r_horizon * self.r_horizon
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Polarity;
    use crate::grid::Grid1D;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn small_grid() -> Grid2D {
        Grid2D::new(
            Grid1D::new(0.0, 0.1, 8).unwrap(),
            Grid1D::new(-2.0, 0.5, 9).unwrap(),
        )
    }

    #[test]
    fn uniform_pi_collapses_the_spatial_part() {
        let phi = Field2D::tabulate(small_grid(), |_, _| PI);
        let patch = metric_from_field(&phi, Signature::Lorentzian);
        assert!(patch.g00.iter().all(|g| (*g + 1.0).abs() < 1e-15));
        assert!(patch.g11.iter().all(|g| g.abs() < 1e-15));
        assert!(patch.degenerate.iter().all(|d| *d));
    }

    #[test]
    fn uniform_half_pi_gives_half_metric() {
        let phi = Field2D::tabulate(small_grid(), |_, _| PI / 2.0);
        let lorentz = metric_from_field(&phi, Signature::Lorentzian);
        let euclid = metric_from_field(&phi, Signature::Euclidean);
        for k in 0..phi.values.len() {
            assert_relative_eq!(lorentz.g00[k], -0.5, max_relative = 1e-14);
            assert_relative_eq!(lorentz.g11[k], 0.5, max_relative = 1e-14);
            assert_relative_eq!(euclid.g00[k], 0.5, max_relative = 1e-14);
            assert!(!lorentz.degenerate[k]);
        }
    }

    #[test]
    fn closed_form_matches_field_metric() {
        let spec = SolitonSpec::new(0.6, Polarity::Kink, 0.0).unwrap();
        let grid = Grid2D::new(
            Grid1D::new(0.0, 0.05, 16).unwrap(),
            Grid1D::new(-3.0, 0.05, 121).unwrap(),
        );
        let phi = Field2D::tabulate(grid, |t, x| spec.phi(t, x));
        let from_field = metric_from_field(&phi, Signature::Lorentzian);
        let closed = soliton_metric_closed_form(&spec, grid);
        for k in 0..grid.len() {
            if closed.degenerate[k] {
                continue;
            }
            assert!((from_field.g00[k] - closed.g00[k]).abs() < 1e-14);
            assert!((from_field.g11[k] - closed.g11[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn soliton_metric_at_unit_rho() {
        let spec = SolitonSpec::new(0.5, Polarity::Kink, 0.0).unwrap();
        // rho = gamma (xi - beta tau); pick tau = 0 and solve xi for rho = 1
        let xi = 1.0 / spec.gamma();
        let g00 = -1.0 / (1.0_f64).cosh().powi(2);
        let g11 = (1.0_f64).tanh().powi(2);
        assert_relative_eq!(g00, -0.419_974_341_6, max_relative = 1e-9);
        assert_relative_eq!(g11, 0.580_025_658_4, max_relative = 1e-9);
        let direct = soliton_metric_closed_form(
            &spec,
            Grid2D::new(
                Grid1D::new(0.0, 0.1, 8).unwrap(),
                Grid1D::new(xi, 0.1, 8).unwrap(),
            ),
        );
        assert_relative_eq!(direct.g00[0], g00, max_relative = 1e-12);
        assert_relative_eq!(direct.g11[0], g11, max_relative = 1e-12);
    }

    #[test]
    fn degeneracy_mask_tracks_soliton_center() {
        let spec = SolitonSpec::new(0.5, Polarity::Kink, 0.0).unwrap();
        let grid = Grid2D::new(
            Grid1D::new(0.0, 1e-9, 8).unwrap(),
            Grid1D::new(-1e-7, 2.5e-8, 9).unwrap(),
        );
        let patch = soliton_metric_closed_form(&spec, grid);
        // tanh(rho) < 1e-6 right at the center line
        assert!(patch.degenerate.iter().any(|d| *d));
    }

    #[test]
    fn horizon_info_for_soliton() {
        let spec = SolitonSpec::new(0.37, Polarity::Kink, 0.0).unwrap();
        let info = HorizonInfo::for_soliton(&spec);
        assert_eq!(info.r_horizon, 0.37);
        assert_eq!(info.surface_gravity_proxy, 0.37);
        assert_relative_eq!(
            info.kruskal_factor_at_horizon(),
            4.0 * 0.37 * 0.37,
            max_relative = 1e-15
        );
        assert!(info.kruskal_factor_at_horizon().is_finite());
    }

    #[test]
    fn chart_names() {
        assert_eq!(Chart::Kruskal.coordinate_names(), ("u", "v"));
        assert_eq!(Chart::Soliton.coordinate_names(), ("tau", "xi"));
    }
}
