//! Discrete flux dynamics of a dc-SQUID transmission line.
//!
//! Each cell couples its node flux to the neighbors through the cell
//! inductance and to ground through an external-flux-tunable SQUID:
//!
//! ```text
//! C d2Phi_n/dt2 = (Phi_{n+1} - 2 Phi_n + Phi_{n-1}) / L_0
//!                 - (2 pi / Phi_Q) E_J(Phi_ext) sin(2 pi Phi_n / Phi_Q)
//! ```
//!
//! with `C = C_0 + C_J` and `Phi_Q` the flux quantum. Linearizing the sine
//! gives a lattice Klein-Gordon equation with propagation velocity
//! `c = a / sqrt(L_0 C)` and mass scale `m = sqrt(4 pi^2 E_J / (C Phi_Q^2))`.

use crate::constants::{ELEMENTARY_CHARGE, FLUX_QUANTUM};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("external flux {0} is outside [0, Phi_Q/2); the SQUID energy would vanish or flip sign")]
    ExternalFluxRange(f64),
    #[error("need at least 3 cells, got {0}")]
    TooFewCells(usize),
    #[error("state has {fluxes} fluxes and {rates} rates for {cells} cells")]
    StateShape {
        fluxes: usize,
        rates: usize,
        cells: usize,
    },
    #[error("state contains a non-finite value")]
    NonFiniteState,
    #[error("dt = {dt:.3e} exceeds the stability bound {bound:.3e}")]
    UnstableTimestep { dt: f64, bound: f64 },
}

/// Boundary handling for the lattice and the continuum field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Wrap around: node N couples back to node 0.
    Periodic,
    /// End nodes are clamped; their fluxes and rates never change.
    Fixed,
}

/// Electrical parameters of the array, all SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    /// Junction critical current, A.
    pub critical_current: f64,
    /// Single-SQUID junction capacitance, F.
    pub junction_capacitance: f64,
    /// Node capacitance to ground, F.
    pub ground_capacitance: f64,
    /// Cell inductance, H.
    pub cell_inductance: f64,
    /// Cell pitch, m.
    pub cell_pitch: f64,
    /// External flux through each SQUID loop, Wb.
    pub external_flux: f64,
    /// Number of nodes.
    pub cell_count: usize,
}

impl CircuitParams {
    pub fn new(
        critical_current: f64,
        junction_capacitance: f64,
        ground_capacitance: f64,
        cell_inductance: f64,
        cell_pitch: f64,
        external_flux: f64,
        cell_count: usize,
    ) -> Result<Self, CircuitError> {
        let positives = [
            ("critical_current", critical_current),
            ("junction_capacitance", junction_capacitance),
            ("ground_capacitance", ground_capacitance),
            ("cell_inductance", cell_inductance),
            ("cell_pitch", cell_pitch),
        ];
        for (name, value) in positives {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CircuitError::NonPositive { name, value });
            }
        }
        if !external_flux.is_finite() || !(0.0..0.5 * FLUX_QUANTUM).contains(&external_flux) {
            return Err(CircuitError::ExternalFluxRange(external_flux));
        }
        if cell_count < 3 {
            return Err(CircuitError::TooFewCells(cell_count));
        }
        Ok(Self {
            critical_current,
            junction_capacitance,
            ground_capacitance,
            cell_inductance,
            cell_pitch,
            external_flux,
            cell_count,
        })
    }

    /// The reference fabrication point: I_c = 2 uA, C_J = 1.2 fF,
    /// C_0 = 0.8 fF, L_0 = 0.01 nH, a = 6 um, zero external flux.
    pub fn reference(cell_count: usize) -> Result<Self, CircuitError> {
        Self::new(2e-6, 1.2e-15, 0.8e-15, 1e-11, 6e-6, 0.0, cell_count)
    }

    /// Total shunt capacitance per node, `C_0 + C_J`.
    pub fn total_capacitance(&self) -> f64 {
        self.ground_capacitance + self.junction_capacitance
    }
}

/// Node fluxes and their time derivatives at a common instant.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub node_fluxes: Vec<f64>,
    pub node_flux_rates: Vec<f64>,
    pub time: f64,
}

impl LatticeState {
    pub fn new(
        node_fluxes: Vec<f64>,
        node_flux_rates: Vec<f64>,
        time: f64,
        params: &CircuitParams,
    ) -> Result<Self, CircuitError> {
        if node_fluxes.len() != params.cell_count || node_flux_rates.len() != params.cell_count {
            return Err(CircuitError::StateShape {
                fluxes: node_fluxes.len(),
                rates: node_flux_rates.len(),
                cells: params.cell_count,
            });
        }
        if node_fluxes
            .iter()
            .chain(node_flux_rates.iter())
            .any(|v| !v.is_finite())
            || !time.is_finite()
        {
            return Err(CircuitError::NonFiniteState);
        }
        Ok(Self {
            node_fluxes,
            node_flux_rates,
            time,
        })
    }

    pub fn resting(params: &CircuitParams) -> Self {
        Self {
            node_fluxes: vec![0.0; params.cell_count],
            node_flux_rates: vec![0.0; params.cell_count],
            time: 0.0,
        }
    }
}

/// Scales derived from the circuit parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// Flux-tuned SQUID Josephson energy `E_J(Phi_ext)`, J.
    pub josephson_energy: f64,
    /// `C_0 + C_J`, F.
    pub total_capacitance: f64,
    /// Propagation velocity `a / sqrt(L_0 C)`, m/s.
    pub velocity: f64,
    /// Mass scale `sqrt(4 pi^2 E_J(Phi_ext) / (C Phi_Q^2))`, rad/s.
    pub mass: f64,
    /// Junction plasma frequency `2 pi sqrt(E_J / (Phi_Q^2 C_J))` with the
    /// single-junction energy `E_J = Phi_Q I_c / (2 pi)`, rad/s.
    pub plasma_frequency: f64,
}

/// SQUID Josephson coupling at the given external flux,
/// `E_J(Phi_ext) = 2 E_J cos(pi Phi_ext / Phi_Q)`.
pub fn effective_josephson_energy(params: &CircuitParams) -> f64 {
    let single = FLUX_QUANTUM * params.critical_current / (2.0 * PI);
    2.0 * single * (PI * params.external_flux / FLUX_QUANTUM).cos()
}

/// Compute all derived scales. Pure: identical inputs give identical outputs.
pub fn derive_scales(params: &CircuitParams) -> DerivedScales {
    let e_j = effective_josephson_energy(params);
    let c_total = params.total_capacitance();
    let velocity = params.cell_pitch / (params.cell_inductance * c_total).sqrt();
    let mass = (4.0 * PI * PI * e_j / (c_total * FLUX_QUANTUM * FLUX_QUANTUM)).sqrt();
    let single = FLUX_QUANTUM * params.critical_current / (2.0 * PI);
    let plasma_frequency =
        2.0 * PI * (single / (FLUX_QUANTUM * FLUX_QUANTUM * params.junction_capacitance)).sqrt();
    DerivedScales {
        josephson_energy: e_j,
        total_capacitance: c_total,
        velocity,
        mass,
        plasma_frequency,
    }
}

/// Flux acceleration of every node.
pub fn lattice_acceleration(
    state: &LatticeState,
    params: &CircuitParams,
    boundary: BoundaryCondition,
) -> Result<Vec<f64>, CircuitError> {
    let n = params.cell_count;
    if state.node_fluxes.len() != n || state.node_flux_rates.len() != n {
        return Err(CircuitError::StateShape {
            fluxes: state.node_fluxes.len(),
            rates: state.node_flux_rates.len(),
            cells: n,
        });
    }
    let e_j = effective_josephson_energy(params);
    let c_total = params.total_capacitance();
    let sine_scale = 2.0 * PI / FLUX_QUANTUM;
    let phi = &state.node_fluxes;
    let mut acc = vec![0.0; n];
    let (lo, hi) = match boundary {
        BoundaryCondition::Periodic => (0, n),
        BoundaryCondition::Fixed => (1, n - 1),
    };
    for i in lo..hi {
        let left = phi[(i + n - 1) % n];
        let right = phi[(i + 1) % n];
        let coupling = (right - 2.0 * phi[i] + left) / params.cell_inductance;
        let squid = sine_scale * e_j * (sine_scale * phi[i]).sin();
        acc[i] = (coupling - squid) / c_total;
    }
    Ok(acc)
}

/// Largest stable velocity-Verlet step,
/// `0.5 sqrt(L_0 C) / sqrt(1 + (m a / 2c)^2)`.
pub fn max_stable_dt(params: &CircuitParams) -> f64 {
    let scales = derive_scales(params);
    let lc = (params.cell_inductance * params.total_capacitance()).sqrt();
    let corner = scales.mass * params.cell_pitch / (2.0 * scales.velocity);
    0.5 * lc / (1.0 + corner * corner).sqrt()
}

/// Advance the lattice by one velocity-Verlet step.
pub fn step_lattice(
    state: &LatticeState,
    params: &CircuitParams,
    boundary: BoundaryCondition,
    dt: f64,
) -> Result<LatticeState, CircuitError> {
    let bound = max_stable_dt(params);
    if dt.is_nan() || dt <= 0.0 || dt > bound {
        return Err(CircuitError::UnstableTimestep { dt, bound });
    }
    let acc = lattice_acceleration(state, params, boundary)?;
    let n = params.cell_count;
    let mut next = state.clone();
    for (i, a) in acc.iter().enumerate() {
        next.node_fluxes[i] += dt * state.node_flux_rates[i] + 0.5 * dt * dt * a;
    }
    let acc_next = lattice_acceleration(&next, params, boundary)?;
    for (i, rate) in next.node_flux_rates.iter_mut().enumerate() {
        *rate += 0.5 * dt * (acc[i] + acc_next[i]);
    }
    if boundary == BoundaryCondition::Fixed {
        for i in [0, n - 1] {
            next.node_fluxes[i] = state.node_fluxes[i];
            next.node_flux_rates[i] = 0.0;
        }
    }
    next.time = state.time + dt;
    Ok(next)
}

/// Advance `steps` velocity-Verlet steps.
pub fn evolve_lattice(
    state: &LatticeState,
    params: &CircuitParams,
    boundary: BoundaryCondition,
    dt: f64,
    steps: usize,
) -> Result<LatticeState, CircuitError> {
    let mut current = state.clone();
    for _ in 0..steps {
        current = step_lattice(&current, params, boundary, dt)?;
    }
    Ok(current)
}

/// Total lattice energy: kinetic, inductive coupling, and SQUID potential.
pub fn lattice_energy(
    state: &LatticeState,
    params: &CircuitParams,
    boundary: BoundaryCondition,
) -> f64 {
    let e_j = effective_josephson_energy(params);
    let c_total = params.total_capacitance();
    let sine_scale = 2.0 * PI / FLUX_QUANTUM;
    let phi = &state.node_fluxes;
    let n = phi.len();
    let mut energy = 0.0;
    for (p, rate) in phi.iter().zip(&state.node_flux_rates) {
        energy += 0.5 * c_total * rate * rate;
        energy += e_j * (1.0 - (sine_scale * p).cos());
    }
    let couplings = match boundary {
        BoundaryCondition::Periodic => n,
        BoundaryCondition::Fixed => n - 1,
    };
    for i in 0..couplings {
        let d = phi[(i + 1) % n] - phi[i];
        energy += d * d / (2.0 * params.cell_inductance);
    }
    energy
}

/// Validity ratios for treating the array as a continuum sine-Gordon system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    /// `E_J(Phi_ext) / ((2e)^2 / (2 C_J))`; wants to be large.
    pub phase_ratio: f64,
    /// `max |Phi_n| / Phi_Q`; wants to be small.
    pub amplitude_ratio: f64,
    /// `a / probe_wavelength`; wants to be small.
    pub pitch_ratio: f64,
}

impl RegimeReport {
    pub const MIN_PHASE_RATIO: f64 = 10.0;
    pub const MAX_AMPLITUDE_RATIO: f64 = 0.1;
    pub const MAX_PITCH_RATIO: f64 = 0.1;

    pub fn phase_ok(&self) -> bool {
        self.phase_ratio >= Self::MIN_PHASE_RATIO
    }

    pub fn amplitude_ok(&self) -> bool {
        self.amplitude_ratio <= Self::MAX_AMPLITUDE_RATIO
    }

    pub fn pitch_ok(&self) -> bool {
        self.pitch_ratio <= Self::MAX_PITCH_RATIO
    }

    pub fn all_ok(&self) -> bool {
        self.phase_ok() && self.amplitude_ok() && self.pitch_ok()
    }
}

/// Check the phase regime, the small-amplitude regime, and the continuum
/// limit against a probe wavelength (meters).
pub fn validate_regime(
    params: &CircuitParams,
    state: &LatticeState,
    probe_wavelength: f64,
) -> RegimeReport {
    let charging = (2.0 * ELEMENTARY_CHARGE).powi(2) / (2.0 * params.junction_capacitance);
    let max_flux = state
        .node_fluxes
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    RegimeReport {
        phase_ratio: effective_josephson_energy(params) / charging,
        amplitude_ratio: max_flux / FLUX_QUANTUM,
        pitch_ratio: params.cell_pitch / probe_wavelength,
    }
}

/// Sample the continuum kink onto the lattice, moving at lab velocity `v`.
///
/// The node phase is `2 pi Phi_n / Phi_Q = 4 arctan exp(k (x_n - x_0 - v t))`
/// with `k = m / sqrt(c^2 - v^2)`.
pub fn lattice_kink(
    params: &CircuitParams,
    v: f64,
    center: f64,
) -> Result<LatticeState, CircuitError> {
    let scales = derive_scales(params);
    if v.is_nan() || v.abs() >= scales.velocity {
        return Err(CircuitError::NonPositive {
            name: "c^2 - v^2",
            value: scales.velocity * scales.velocity - v * v,
        });
    }
    let k = scales.mass / (scales.velocity * scales.velocity - v * v).sqrt();
    let flux_per_phase = FLUX_QUANTUM / (2.0 * PI);
    let n = params.cell_count;
    let mut fluxes = Vec::with_capacity(n);
    let mut rates = Vec::with_capacity(n);
    for i in 0..n {
        let x = i as f64 * params.cell_pitch;
        let rho = k * (x - center);
        fluxes.push(flux_per_phase * 4.0 * rho.exp().atan());
        rates.push(flux_per_phase * (-2.0 * k * v) / rho.cosh());
    }
    LatticeState::new(fluxes, rates, 0.0, params)
}
