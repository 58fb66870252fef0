//! Continuum sine-Gordon field and its soliton solutions.
//!
//! Two unit systems appear here. The hyperbolic evolution
//! `phi_tt - c^2 phi_xx + m^2 sin(phi) = 0` keeps explicit velocity and mass
//! scales so it can mirror the lattice. The elliptic (rescaled) picture uses
//! `tau = m t`, `xi = m x / c`, where the static equation becomes
//! `phi_tautau + phi_xixi = sin(phi)` and the moving soliton is
//! `phi = 4 arctan exp(+/- gamma (xi - beta_s tau))` with
//! `gamma = (1 + beta_s^2)^(-1/2)`.

mod elliptic;

pub use elliptic::{
    elliptic_residual, elliptic_residual_2d, solve_dilaton, symmetry_map_check, DilatonOptions,
    DilatonSolution, SymmetryMapReport, TauStencil,
};

use crate::circuit::BoundaryCondition;
use crate::grid::{Grid1D, GridError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("soliton velocity beta_s must lie in (0, 1), got {0}")]
    BetaRange(f64),
    #[error("kink velocity {v} is not below the propagation velocity {c}")]
    Superluminal { v: f64, c: f64 },
    #[error("CFL number {0:.3} exceeds 0.9")]
    CflViolation(f64),
    #[error("states share no common grid")]
    GridMismatch,
    #[error("time stamps {0:?} are not uniformly spaced")]
    NonUniformStencil([f64; 3]),
    #[error("field contains a non-finite value")]
    NonFinite,
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("solver did not reach residual {target:.1e} in {iterations} iterations (best {best:.2e})")]
    NoConvergence {
        target: f64,
        iterations: usize,
        best: f64,
        /// Max-norm residual after each iteration, for convergence audits.
        history: Vec<f64>,
    },
    #[error("linearized-symmetry slope {slope:.3} fell below {threshold}")]
    SymmetrySlope { slope: f64, threshold: f64 },
}

/// Orientation of a soliton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Phase climbs from 0 to 2 pi.
    Kink,
    /// Phase falls from 2 pi to 0.
    Antikink,
}

impl Polarity {
    fn sign(self) -> f64 {
        match self {
            Polarity::Kink => 1.0,
            Polarity::Antikink => -1.0,
        }
    }
}

/// A single soliton of the rescaled (elliptic) equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonSpec {
    pub beta_s: f64,
    pub polarity: Polarity,
    pub center_offset: f64,
}

impl SolitonSpec {
    pub fn new(beta_s: f64, polarity: Polarity, center_offset: f64) -> Result<Self, FieldError> {
        if !(beta_s > 0.0 && beta_s < 1.0) {
            return Err(FieldError::BetaRange(beta_s));
        }
        if !center_offset.is_finite() {
            return Err(FieldError::NonFinite);
        }
        Ok(Self {
            beta_s,
            polarity,
            center_offset,
        })
    }

    /// `gamma = (1 + beta_s^2)^(-1/2)`.
    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 + self.beta_s * self.beta_s).sqrt()
    }

    /// Comoving coordinate `rho = +/- gamma (xi - beta_s tau - offset)`.
    pub fn rho(&self, tau: f64, xi: f64) -> f64 {
        self.polarity.sign() * self.gamma() * (xi - self.beta_s * tau - self.center_offset)
    }

    /// Field value `4 arctan exp(rho)`.
    pub fn phi(&self, tau: f64, xi: f64) -> f64 {
        4.0 * self.rho(tau, xi).exp().atan()
    }

    /// `d phi / d tau = -2 sign gamma beta_s sech(rho)`.
    pub fn phi_rate(&self, tau: f64, xi: f64) -> f64 {
        -2.0 * self.polarity.sign() * self.gamma() * self.beta_s / self.rho(tau, xi).cosh()
    }
}

/// Field samples and their time derivatives on a 1-D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: Grid1D,
    pub phi: Vec<f64>,
    pub phi_rate: Vec<f64>,
    pub time: f64,
}

impl FieldState {
    pub fn new(
        grid: Grid1D,
        phi: Vec<f64>,
        phi_rate: Vec<f64>,
        time: f64,
    ) -> Result<Self, FieldError> {
        if phi.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                values: phi.len(),
                points: grid.len(),
            }
            .into());
        }
        if phi_rate.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                values: phi_rate.len(),
                points: grid.len(),
            }
            .into());
        }
        if phi
            .iter()
            .chain(phi_rate.iter())
            .any(|v| !v.is_finite())
            || !time.is_finite()
        {
            return Err(FieldError::NonFinite);
        }
        Ok(Self {
            grid,
            phi,
            phi_rate,
            time,
        })
    }

    pub fn zero(grid: Grid1D) -> Self {
        Self {
            grid,
            phi: vec![0.0; grid.len()],
            phi_rate: vec![0.0; grid.len()],
            time: 0.0,
        }
    }

    /// Net phase winding across the grid in units of 2 pi.
    pub fn topological_charge(&self) -> f64 {
        (self.phi[self.phi.len() - 1] - self.phi[0]) / (2.0 * std::f64::consts::PI)
    }
}

/// Sample the moving soliton of the rescaled equation at time `tau`.
pub fn elliptic_soliton(spec: &SolitonSpec, tau: f64, grid: Grid1D) -> FieldState {
    let mut phi = Vec::with_capacity(grid.len());
    let mut rate = Vec::with_capacity(grid.len());
    for xi in grid.positions() {
        phi.push(spec.phi(tau, xi));
        rate.push(spec.phi_rate(tau, xi));
    }
    FieldState {
        grid,
        phi,
        phi_rate: rate,
        time: tau,
    }
}

/// Sample the lab-frame kink `4 arctan exp(k (x - x0 - v t))` with
/// `k = m / sqrt(c^2 - v^2)`.
pub fn hyperbolic_kink(
    grid: Grid1D,
    mass: f64,
    speed: f64,
    v: f64,
    center: f64,
    time: f64,
) -> Result<FieldState, FieldError> {
    if v.is_nan() || v.abs() >= speed {
        return Err(FieldError::Superluminal { v, c: speed });
    }
    let k = mass / (speed * speed - v * v).sqrt();
    let mut phi = Vec::with_capacity(grid.len());
    let mut rate = Vec::with_capacity(grid.len());
    for x in grid.positions() {
        let rho = k * (x - center - v * time);
        phi.push(4.0 * rho.exp().atan());
        rate.push(-2.0 * k * v / rho.cosh());
    }
    Ok(FieldState {
        grid,
        phi,
        phi_rate: rate,
        time,
    })
}

fn laplacian_1d(phi: &[f64], dx: f64, boundary: BoundaryCondition, out: &mut [f64]) {
    let n = phi.len();
    let inv = 1.0 / (dx * dx);
    match boundary {
        BoundaryCondition::Periodic => {
            for i in 0..n {
                let left = phi[(i + n - 1) % n];
                let right = phi[(i + 1) % n];
                out[i] = (right - 2.0 * phi[i] + left) * inv;
            }
        }
        BoundaryCondition::Fixed => {
            out[0] = 0.0;
            out[n - 1] = 0.0;
            for i in 1..n - 1 {
                out[i] = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * inv;
            }
        }
    }
}

fn check_cfl(speed: f64, dt: f64, dx: f64) -> Result<(), FieldError> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(FieldError::NonPositive {
            name: "dt",
            value: dt,
        });
    }
    let cfl = speed * dt / dx;
    if cfl > 0.9 {
        return Err(FieldError::CflViolation(cfl));
    }
    Ok(())
}

/// Integrate `phi_tt = c^2 phi_xx - m^2 sin(phi)` with velocity Verlet.
pub fn evolve_hyperbolic(
    state: &FieldState,
    mass: f64,
    speed: f64,
    boundary: BoundaryCondition,
    dt: f64,
    steps: usize,
) -> Result<FieldState, FieldError> {
    check_cfl(speed, dt, state.grid.spacing())?;
    let n = state.grid.len();
    let c2 = speed * speed;
    let m2 = mass * mass;
    let mut phi = state.phi.clone();
    let mut rate = state.phi_rate.clone();
    if boundary == BoundaryCondition::Fixed {
        rate[0] = 0.0;
        rate[n - 1] = 0.0;
    }
    let mut lap = vec![0.0; n];
    let mut acc = vec![0.0; n];
    let accel = |lap: &[f64], phi: &[f64], acc: &mut [f64]| {
        for i in 0..phi.len() {
            acc[i] = c2 * lap[i] - m2 * phi[i].sin();
        }
    };
    laplacian_1d(&phi, state.grid.spacing(), boundary, &mut lap);
    accel(&lap, &phi, &mut acc);
    if boundary == BoundaryCondition::Fixed {
        acc[0] = 0.0;
        acc[n - 1] = 0.0;
    }
    for _ in 0..steps {
        for i in 0..n {
            phi[i] += dt * rate[i] + 0.5 * dt * dt * acc[i];
        }
        laplacian_1d(&phi, state.grid.spacing(), boundary, &mut lap);
        let mut acc_next = vec![0.0; n];
        accel(&lap, &phi, &mut acc_next);
        if boundary == BoundaryCondition::Fixed {
            acc_next[0] = 0.0;
            acc_next[n - 1] = 0.0;
        }
        for i in 0..n {
            rate[i] += 0.5 * dt * (acc[i] + acc_next[i]);
        }
        acc = acc_next;
    }
    FieldState::new(
        state.grid,
        phi,
        rate,
        state.time + dt * steps as f64,
    )
}

/// Trapezoid energy `integral of rate^2/2 + c^2 phi_x^2/2 + m^2 (1 - cos phi)`.
pub fn field_energy(
    state: &FieldState,
    mass: f64,
    speed: f64,
    boundary: BoundaryCondition,
) -> f64 {
    let n = state.grid.len();
    let dx = state.grid.spacing();
    let c2 = speed * speed;
    let m2 = mass * mass;
    let phi = &state.phi;
    let density = |i: usize| -> f64 {
        let grad = match boundary {
            BoundaryCondition::Periodic => (phi[(i + 1) % n] - phi[(i + n - 1) % n]) / (2.0 * dx),
            BoundaryCondition::Fixed => {
                if i == 0 {
                    (phi[1] - phi[0]) / dx
                } else if i == n - 1 {
                    (phi[n - 1] - phi[n - 2]) / dx
                } else {
                    (phi[i + 1] - phi[i - 1]) / (2.0 * dx)
                }
            }
        };
        0.5 * state.phi_rate[i] * state.phi_rate[i] + 0.5 * c2 * grad * grad
            + m2 * (1.0 - phi[i].cos())
    };
    match boundary {
        BoundaryCondition::Periodic => (0..n).map(density).sum::<f64>() * dx,
        BoundaryCondition::Fixed => {
            let mut sum = 0.5 * (density(0) + density(n - 1));
            for i in 1..n - 1 {
                sum += density(i);
            }
            sum * dx
        }
    }
}

/// Integrate the linearized field on a frozen background,
/// `w_tt = w_xx - cos(phi_b) w` in rescaled units. Exactly linear in `w`.
pub fn evolve_perturbation(
    background: &FieldState,
    perturbation: &FieldState,
    boundary: BoundaryCondition,
    dt: f64,
    steps: usize,
) -> Result<FieldState, FieldError> {
    if background.grid != perturbation.grid {
        return Err(FieldError::GridMismatch);
    }
    check_cfl(1.0, dt, background.grid.spacing())?;
    let n = background.grid.len();
    let cos_bg: Vec<f64> = background.phi.iter().map(|p| p.cos()).collect();
    let mut w = perturbation.phi.clone();
    let mut rate = perturbation.phi_rate.clone();
    if boundary == BoundaryCondition::Fixed {
        rate[0] = 0.0;
        rate[n - 1] = 0.0;
    }
    let mut lap = vec![0.0; n];
    let accel = |lap: &[f64], w: &[f64], acc: &mut [f64]| {
        for i in 0..w.len() {
            acc[i] = lap[i] - cos_bg[i] * w[i];
        }
    };
    let mut acc = vec![0.0; n];
    laplacian_1d(&w, background.grid.spacing(), boundary, &mut lap);
    accel(&lap, &w, &mut acc);
    if boundary == BoundaryCondition::Fixed {
        acc[0] = 0.0;
        acc[n - 1] = 0.0;
    }
    for _ in 0..steps {
        for i in 0..n {
            w[i] += dt * rate[i] + 0.5 * dt * dt * acc[i];
        }
        laplacian_1d(&w, background.grid.spacing(), boundary, &mut lap);
        let mut acc_next = vec![0.0; n];
        accel(&lap, &w, &mut acc_next);
        if boundary == BoundaryCondition::Fixed {
            acc_next[0] = 0.0;
            acc_next[n - 1] = 0.0;
        }
        for i in 0..n {
            rate[i] += 0.5 * dt * (acc[i] + acc_next[i]);
        }
        acc = acc_next;
    }
    FieldState::new(
        background.grid,
        w,
        rate,
        perturbation.time + dt * steps as f64,
    )
}
