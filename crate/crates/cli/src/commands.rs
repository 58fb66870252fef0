//! Command runners.
//!
//! Each runner writes its artifacts into one directory and returns the
//! internal checks it performed; the caller turns failed checks into the
//! exit status. Runners never print, so sweep workers can share them.

use crate::config::Config;
use crate::table::Table;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgbh_core::circuit::{
    derive_scales, evolve_lattice, lattice_energy, lattice_kink, max_stable_dt, validate_regime,
    BoundaryCondition, CircuitError, CircuitParams, DerivedScales, LatticeState,
};
use sgbh_core::constants::{FLUX_QUANTUM, LIGHT_SPEED};
use sgbh_core::field::{
    evolve_hyperbolic, field_energy, hyperbolic_kink, solve_dilaton, symmetry_map_check,
    DilatonOptions, FieldError, FieldState, Polarity, SolitonSpec,
};
use sgbh_core::geometry::{
    kruskal, kruskal_pullback_check, metric_from_field, ricci_scalar, schwarzschild_chart_check,
    to_schwarzschild, tortoise, tortoise_derivative_check, GeometryError, Signature,
};
use sgbh_core::grid::{Field2D, Grid1D, Grid2D, GridError};
use sgbh_core::hawking::{
    bogoliubov_spectrum, occupation_spectrum, planck_fit, radiated_power, temperatures,
    HawkingError, QuadratureControls,
};
use std::collections::VecDeque;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Hawking(#[from] HawkingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One internal check: a measured value against its configured bound.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
}

impl Check {
    fn at_most(name: &'static str, value: f64, bound: f64) -> Self {
        Self {
            name,
            value,
            bound,
            relation: Relation::AtMost,
        }
    }

    fn at_least(name: &'static str, value: f64, bound: f64) -> Self {
        Self {
            name,
            value,
            bound,
            relation: Relation::AtLeast,
        }
    }

    pub fn pass(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.value <= self.bound,
            Relation::AtLeast => self.value >= self.bound,
        }
    }

    pub fn describe(&self) -> String {
        let status = if self.pass() { "pass" } else { "FAIL" };
        let relation = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        format!(
            "check {}: {status} ({:e} {relation} {:e})",
            self.name, self.value, self.bound
        )
    }
}

/// Run one non-sweep command: create the directory, write the normalized
/// config echo, the artifacts, and the check table.
pub fn run_single(config: &Config, dir: &Path, version: &str) -> Result<Vec<Check>, RunError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("config.txt"),
        format!("# sgbh {version}\n{}", config.echo()),
    )?;
    let checks = match config.command() {
        "lattice" => lattice(config, dir)?,
        "kink" => kink(config, dir)?,
        "curvature" => curvature(config, dir)?,
        "coords" => coords(config, dir)?,
        "spectrum" => spectrum(config, dir)?,
        "fig2" => fig2(config, dir)?,
        other => unreachable!("command `{other}` is dispatched elsewhere"),
    };
    let mut table = Table::new("checks", vec!["check", "value", "bound", "relation", "pass"]);
    for check in &checks {
        let relation = match check.relation {
            Relation::AtMost => "at_most",
            Relation::AtLeast => "at_least",
        };
        table.push(vec![
            check.name.into(),
            check.value.into(),
            check.bound.into(),
            relation.into(),
            check.pass().into(),
        ]);
    }
    table.write(dir, config.text("output.format"))?;
    Ok(checks)
}

fn circuit_from(config: &Config) -> Result<CircuitParams, CircuitError> {
    CircuitParams::new(
        config.float("circuit.I_c_uA") * 1e-6,
        config.float("circuit.C_J_fF") * 1e-15,
        config.float("circuit.C_0_fF") * 1e-15,
        config.float("circuit.L_0_nH") * 1e-9,
        config.float("circuit.a_um") * 1e-6,
        config.float("circuit.flux_ratio") * FLUX_QUANTUM,
        config.count("circuit.cells"),
    )
}

fn soliton_from(config: &Config) -> Result<SolitonSpec, FieldError> {
    let polarity = match config.text("soliton.polarity") {
        "antikink" => Polarity::Antikink,
        _ => Polarity::Kink,
    };
    SolitonSpec::new(
        config.float("soliton.beta_s"),
        polarity,
        config.float("soliton.offset"),
    )
}

fn scales_table(scales: &DerivedScales) -> Table {
    let mut table = Table::new("scales", vec!["quantity", "value"]);
    let rows: [(&str, f64); 7] = [
        ("velocity_m_per_s", scales.velocity),
        ("velocity_over_light", scales.velocity / LIGHT_SPEED),
        ("mass_rad_per_s", scales.mass),
        ("plasma_rad_per_s", scales.plasma_frequency),
        ("josephson_energy_J", scales.josephson_energy),
        ("total_capacitance_F", scales.total_capacitance),
        ("natural_length_m", scales.velocity / scales.mass),
    ];
    for (name, value) in rows {
        table.push(vec![name.into(), value.into()]);
    }
    table
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn omega_ladder(config: &Config) -> Vec<f64> {
    linspace(
        config.float("spectrum.omega_min"),
        config.float("spectrum.omega_max"),
        config.count("spectrum.points"),
    )
}

/// Discrete circuit kink transported across the array; time series in SI.
fn lattice(config: &Config, dir: &Path) -> Result<Vec<Check>, RunError> {
    let format = config.text("output.format");
    let params = circuit_from(config)?;
    let scales = derive_scales(&params);
    let boundary = BoundaryCondition::Fixed;
    let v = config.float("soliton.beta_lab") * scales.velocity;
    let length = params.cell_pitch * (params.cell_count - 1) as f64;
    let center = 0.5 * length + config.float("soliton.offset") * scales.velocity / scales.mass;
    let start = lattice_kink(&params, v, center)?;
    let dt = config.float("numerics.dt_safety") * max_stable_dt(&params);
    let steps = config.count("numerics.steps");
    let stride = config.count("numerics.stride");

    let mut series = Table::new("timeseries", vec!["time", "node", "flux", "flux_rate"]);
    let mut energy = Table::new("energy", vec!["time", "energy"]);
    let mut record = |state: &LatticeState| {
        for (node, (flux, rate)) in state
            .node_fluxes
            .iter()
            .zip(&state.node_flux_rates)
            .enumerate()
        {
            series.push(vec![
                state.time.into(),
                node.into(),
                (*flux).into(),
                (*rate).into(),
            ]);
        }
        energy.push(vec![
            state.time.into(),
            lattice_energy(state, &params, boundary).into(),
        ]);
    };

    record(&start);
    let reference_energy = lattice_energy(&start, &params, boundary);
    let mut state = start;
    let mut done = 0;
    while done < steps {
        let chunk = stride.min(steps - done);
        state = evolve_lattice(&state, &params, boundary, dt, chunk)?;
        done += chunk;
        record(&state);
    }
    let drift =
        ((lattice_energy(&state, &params, boundary) - reference_energy) / reference_energy).abs();

    let kink_width = (scales.velocity * scales.velocity - v * v).sqrt() / scales.mass;
    let regime = validate_regime(&params, &state, kink_width);
    let mut regime_table = Table::new("regime", vec!["quantity", "value"]);
    regime_table.push(vec!["phase_ratio".into(), regime.phase_ratio.into()]);
    regime_table.push(vec!["amplitude_ratio".into(), regime.amplitude_ratio.into()]);
    regime_table.push(vec!["pitch_ratio".into(), regime.pitch_ratio.into()]);

    series.write(dir, format)?;
    energy.write(dir, format)?;
    regime_table.write(dir, format)?;
    scales_table(&scales).write(dir, format)?;

    Ok(vec![
        Check::at_least(
            "phase_ratio",
            regime.phase_ratio,
            config.float("checks.min_phase_ratio"),
        ),
        Check::at_most(
            "energy_drift",
            drift,
            config.float("checks.energy_drift"),
        ),
    ])
}

/// Continuum kink transport in natural units, checked against the exact
/// traveling profile.
fn kink(config: &Config, dir: &Path) -> Result<Vec<Check>, RunError> {
    let format = config.text("output.format");
    let beta = config.float("soliton.beta_lab");
    let offset = config.float("soliton.offset");
    let grid = Grid1D::span(
        config.float("grid.xi_min"),
        config.float("grid.xi_max"),
        config.count("grid.points"),
    )?;
    // shaved below the configured Courant number so the stability check
    // cannot trip on the rounding of dt / dx
    let dt = config.float("numerics.cfl") * grid.spacing() * (1.0 - 1e-12);
    let steps = config.count("numerics.steps");
    let stride = config.count("numerics.stride");
    let boundary = BoundaryCondition::Fixed;
    let start = hyperbolic_kink(grid, 1.0, 1.0, beta, offset, 0.0)?;
    let reference_energy = field_energy(&start, 1.0, 1.0, boundary);

    let mut series = Table::new("timeseries", vec!["time", "position", "phi", "phi_rate"]);
    let mut energy = Table::new("energy", vec!["time", "energy"]);
    let mut record = |state: &FieldState| {
        for (j, x) in state.grid.positions().enumerate() {
            series.push(vec![
                state.time.into(),
                x.into(),
                state.phi[j].into(),
                state.phi_rate[j].into(),
            ]);
        }
        energy.push(vec![
            state.time.into(),
            field_energy(state, 1.0, 1.0, boundary).into(),
        ]);
    };

    record(&start);
    let mut state = start;
    let mut done = 0;
    while done < steps {
        let chunk = stride.min(steps - done);
        state = evolve_hyperbolic(&state, 1.0, 1.0, boundary, dt, chunk)?;
        done += chunk;
        record(&state);
    }
    let drift =
        ((field_energy(&state, 1.0, 1.0, boundary) - reference_energy) / reference_energy).abs();

    let exact = hyperbolic_kink(grid, 1.0, 1.0, beta, offset, state.time)?;
    let shape_error = state
        .phi
        .iter()
        .zip(&exact.phi)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
        * grid.spacing().sqrt();

    series.write(dir, format)?;
    energy.write(dir, format)?;

    Ok(vec![
        Check::at_most(
            "shape_error",
            shape_error,
            config.float("checks.shape_error"),
        ),
        Check::at_most(
            "energy_drift",
            drift,
            config.float("checks.energy_drift"),
        ),
    ])
}

const SYMMETRY_EPSILONS: [f64; 3] = [1e-4, 1e-3, 1e-2];

/// Metric and Ricci scalar of the soliton patch, plus the linearized
/// (dilaton) solve and its second-order symmetry probe.
fn curvature(config: &Config, dir: &Path) -> Result<Vec<Check>, RunError> {
    let format = config.text("output.format");
    let spec = soliton_from(config)?;
    let spacing = config.float("curvature.spacing");
    let xi_lo = config.float("curvature.xi_lo");
    let xi_hi = config.float("curvature.xi_hi");
    let extent = config.float("curvature.tau_extent");
    let nx = ((xi_hi - xi_lo) / spacing).round() as usize + 1;
    let nt = (extent / spacing).round() as usize + 1;
    let grid = Grid2D::new(
        Grid1D::new(0.0, spacing, nt)?,
        Grid1D::new(xi_lo, spacing, nx)?,
    );
    let phi = Field2D::tabulate(grid, |t, x| spec.phi(t, x));
    let patch = metric_from_field(&phi, Signature::Lorentzian);
    let ricci = ricci_scalar(&patch)?;

    let mut metric = Table::new(
        "metric",
        vec!["tau", "xi", "g00", "g11", "g01", "degenerate"],
    );
    let mut field = Table::new("ricci", vec!["tau", "xi", "ricci", "residual", "valid"]);
    for (i, tau) in grid.tau.positions().enumerate() {
        for (j, xi) in grid.xi.positions().enumerate() {
            let k = grid.index(i, j);
            metric.push(vec![
                tau.into(),
                xi.into(),
                patch.g00[k].into(),
                patch.g11[k].into(),
                patch.g01[k].into(),
                patch.degenerate[k].into(),
            ]);
            field.push(vec![
                tau.into(),
                xi.into(),
                ricci.values[k].into(),
                (ricci.values[k] + 2.0).into(),
                ricci.valid[k].into(),
            ]);
        }
    }
    let residual = ricci.max_deviation_from(-2.0).unwrap_or(f64::INFINITY);

    let sech = Field2D::tabulate(grid, |t, x| 1.0 / spec.rho(t, x).cosh());
    let options = DilatonOptions {
        tolerance: config.float("numerics.tolerance"),
        max_iterations: config.count("numerics.max_iterations"),
    };
    let (psi, dilaton_residual, audit) = match solve_dilaton(&phi, &sech, &options) {
        Ok(solution) => {
            let audit = serde_json::json!({
                "converged": true,
                "tolerance": options.tolerance,
                "iterations": solution.iterations,
                "final_residual": solution.final_residual,
                "residual_history": solution.residual_history,
            });
            (Some(solution.psi), solution.final_residual, audit)
        }
        Err(FieldError::NoConvergence {
            target,
            iterations,
            best,
            history,
        }) => {
            let audit = serde_json::json!({
                "converged": false,
                "tolerance": target,
                "iterations": iterations,
                "final_residual": best,
                "residual_history": history,
            });
            (None, best, audit)
        }
        Err(other) => return Err(other.into()),
    };
    let mut audit_text = serde_json::to_string_pretty(&audit).expect("plain values");
    audit_text.push('\n');
    std::fs::write(dir.join("dilaton.json"), audit_text)?;

    let slope = match &psi {
        Some(psi) => match symmetry_map_check(&phi, psi, &SYMMETRY_EPSILONS) {
            Ok(report) => {
                let mut symmetry = Table::new("symmetry", vec!["epsilon", "residual_delta"]);
                for (eps, delta) in report.epsilons.iter().zip(&report.residual_deltas) {
                    symmetry.push(vec![(*eps).into(), (*delta).into()]);
                }
                symmetry.write(dir, format)?;
                report.slope
            }
            Err(FieldError::SymmetrySlope { slope, .. }) => slope,
            Err(other) => return Err(other.into()),
        },
        None => f64::NAN,
    };

    metric.write(dir, format)?;
    field.write(dir, format)?;

    Ok(vec![
        Check::at_most(
            "curvature_residual",
            residual,
            config.float("checks.curvature_residual"),
        ),
        Check::at_most("dilaton_residual", dilaton_residual, options.tolerance),
        Check::at_least(
            "symmetry_slope",
            slope,
            config.float("checks.min_symmetry_slope"),
        ),
    ])
}

/// Static-chart, tortoise, and null-coordinate tables with their
/// consistency residuals.
fn coords(config: &Config, dir: &Path) -> Result<Vec<Check>, RunError> {
    let format = config.text("output.format");
    let spec = soliton_from(config)?;
    let beta = config.float("soliton.beta_s");
    let points = config.count("coords.points");
    let rho_lo = config.float("coords.rho_lo");
    let rho_hi = config.float("coords.rho_hi");
    let band = linspace(rho_lo, rho_hi, points);

    let mut chart = Table::new("schwarzschild", vec!["rho", "r", "lapse", "near_horizon"]);
    for &rho in &band {
        let point = to_schwarzschild(&spec, rho);
        chart.push(vec![
            rho.into(),
            point.r.into(),
            point.metric_factor.into(),
            point.near_horizon.into(),
        ]);
    }

    let mut tort = Table::new("tortoise", vec!["r", "r_star", "r_back", "roundtrip_error"]);
    let mut roundtrip = 0.0_f64;
    for k in 1..=points {
        let r = beta * k as f64 / (points + 1) as f64;
        let r_star = tortoise(r, beta)?;
        let back = sgbh_core::geometry::inverse_tortoise(r_star, beta);
        let error = (back - r).abs() / beta;
        roundtrip = roundtrip.max(error);
        tort.push(vec![r.into(), r_star.into(), back.into(), error.into()]);
    }

    let mut null_chart = Table::new("kruskal", vec!["t", "r_star", "u", "v", "saturated"]);
    for t in [-1.0, 0.0, 1.0] {
        for &rho in &band {
            let r_star = tortoise(to_schwarzschild(&spec, rho).r, beta)?;
            let pair = kruskal(t, r_star, beta)?;
            null_chart.push(vec![
                t.into(),
                r_star.into(),
                pair.u.into(),
                pair.v.into(),
                pair.saturated.into(),
            ]);
        }
    }

    let report = schwarzschild_chart_check(&spec, rho_lo, rho_hi, points)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.count("numerics.seed") as u64);
    let pullback = kruskal_pullback_check(beta, points, &mut rng)?;
    let radii: Vec<f64> = (1..=9).map(|k| beta * k as f64 / 10.0).collect();
    let derivative_error = tortoise_derivative_check(beta, &radii)?;

    let mut residuals = Table::new("residuals", vec!["quantity", "value"]);
    let rows: [(&str, f64); 8] = [
        ("chart_lapse_error", report.max_lapse_error),
        ("chart_cross_error", report.max_cross_error),
        ("chart_radial_error", report.max_radial_error),
        ("pullback_sign", pullback.sign),
        ("pullback_metric_error", pullback.max_rel_error),
        ("pullback_derivative_error", pullback.max_derivative_error),
        ("tortoise_derivative_error", derivative_error),
        ("tortoise_roundtrip_error", roundtrip),
    ];
    for (name, value) in rows {
        residuals.push(vec![name.into(), value.into()]);
    }

    chart.write(dir, format)?;
    tort.write(dir, format)?;
    null_chart.write(dir, format)?;
    residuals.write(dir, format)?;

    let chart_bound = config.float("checks.chart_error");
    let pullback_bound = config.float("checks.pullback_error");
    Ok(vec![
        Check::at_most("pullback_sign_error", (pullback.sign + 1.0).abs(), 0.0),
        Check::at_most("pullback_metric_error", pullback.max_rel_error, pullback_bound),
        Check::at_most(
            "pullback_derivative_error",
            pullback.max_derivative_error,
            pullback_bound,
        ),
        Check::at_most("chart_lapse_error", report.max_lapse_error, chart_bound),
        Check::at_most("chart_cross_error", report.max_cross_error, chart_bound),
        Check::at_most("chart_radial_error", report.max_radial_error, chart_bound),
        Check::at_most("tortoise_derivative_error", derivative_error, pullback_bound),
        Check::at_most("tortoise_roundtrip_error", roundtrip, pullback_bound),
    ])
}

/// Occupation spectrum: closed form next to the mode-mixing quadrature.
fn spectrum(config: &Config, dir: &Path) -> Result<Vec<Check>, RunError> {
    let format = config.text("output.format");
    let beta = config.float("soliton.beta_s");
    let omegas = omega_ladder(config);
    let closed = occupation_spectrum(&omegas, beta)?;
    let controls = QuadratureControls {
        relative_tol: config.float("spectrum.quadrature_tol"),
        ..QuadratureControls::default()
    };
    let mixed = bogoliubov_spectrum(beta, &omegas, &controls)?;

    let mut table = Table::new(
        "spectrum",
        vec!["omega", "occupation", "occupation_bogoliubov", "abs_diff"],
    );
    for ((omega, reference), result) in omegas.iter().zip(&closed).zip(&mixed.results) {
        table.push(vec![
            (*omega).into(),
            (*reference).into(),
            result.occupation.into(),
            (result.occupation - reference).abs().into(),
        ]);
    }
    table.write(dir, format)?;

    Ok(vec![Check::at_most(
        "spectrum_deviation",
        mixed.thermal_deviation(),
        config.float("checks.spectrum_deviation"),
    )])
}

/// Temperature curves over the soliton velocity range plus the occupation
/// panel at the configured velocity.
fn fig2(config: &Config, dir: &Path) -> Result<Vec<Check>, RunError> {
    let format = config.text("output.format");
    let params = circuit_from(config)?;
    let scales = derive_scales(&params);
    let n = config.count("fig2.beta_points");

    let mut curve = Table::new(
        "temperatures",
        vec!["beta_s", "T_comoving", "T_lab", "T_lab_SI", "power_SI"],
    );
    let mut slope_error = 0.0_f64;
    let mut ordering_violations = 0_usize;
    for k in 1..=n {
        let beta = k as f64 / (n + 1) as f64;
        let t = temperatures(beta)?;
        let lab_si = t.lab_kelvin(&scales);
        curve.push(vec![
            beta.into(),
            t.comoving.into(),
            t.lab.into(),
            lab_si.into(),
            radiated_power(lab_si).into(),
        ]);
        slope_error = slope_error.max((t.comoving * 2.0 * PI / beta - 1.0).abs());
        if t.lab >= t.comoving {
            ordering_violations += 1;
        }
    }

    // locate the lab-frame maximum on a dense scan, independent of the
    // curve resolution above
    let mut peak_beta = 0.0;
    let mut peak_value = 0.0;
    let mut beta = 0.55;
    while beta <= 0.68 {
        let lab = temperatures(beta)?.lab;
        if lab > peak_value {
            peak_value = lab;
            peak_beta = beta;
        }
        beta += 1e-5;
    }
    let golden = 0.5 * (5.0_f64.sqrt() - 1.0);
    let peak_offset = (peak_beta - golden).abs();

    let beta_s = config.float("soliton.beta_s");
    let omegas = omega_ladder(config);
    let occupations = occupation_spectrum(&omegas, beta_s)?;
    let mut panel = Table::new("spectrum", vec!["omega", "occupation"]);
    for (omega, occ) in omegas.iter().zip(&occupations) {
        panel.push(vec![(*omega).into(), (*occ).into()]);
    }
    let monotonicity_violations = occupations
        .windows(2)
        .filter(|pair| pair[1] >= pair[0])
        .count();
    let fit = planck_fit(&omegas, &occupations)?;
    let true_temperature = temperatures(beta_s)?.comoving;
    let fit_error = (fit.temperature - true_temperature).abs() / true_temperature;

    curve.write(dir, format)?;
    panel.write(dir, format)?;
    scales_table(&scales).write(dir, format)?;

    Ok(vec![
        Check::at_most("comoving_slope_error", slope_error, 1e-12),
        Check::at_most("ordering_violations", ordering_violations as f64, 0.0),
        Check::at_most(
            "peak_offset",
            peak_offset,
            config.float("checks.peak_offset"),
        ),
        Check::at_most(
            "monotonicity_violations",
            monotonicity_violations as f64,
            0.0,
        ),
        Check::at_most("planck_fit_error", fit_error, config.float("checks.fit_error")),
    ])
}

/// Outcome of one fanned-out sweep entry.
pub struct SweepRun {
    pub value: String,
    pub directory: String,
    pub outcome: Result<Vec<Check>, RunError>,
}

/// Fan one config out over `sweep.values` with a bounded worker pool.
/// Workers share nothing but the job queue; each writes its own directory.
pub fn sweep(
    config: &Config,
    dir: &Path,
    jobs: usize,
    version: &str,
) -> Result<Vec<SweepRun>, RunError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("config.txt"),
        format!("# sgbh {version}\n{}", config.echo()),
    )?;
    let key = config.text("sweep.key");
    let values = config.sweep_values();
    let workers = jobs.clamp(1, values.len());

    let queue: Mutex<VecDeque<(usize, String)>> =
        Mutex::new(values.into_iter().enumerate().collect());
    let results: Mutex<Vec<(usize, SweepRun)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let job = queue.lock().expect("queue lock").pop_front();
                let Some((index, value)) = job else { break };
                let name = format!("{index:02}_{key}={value}");
                let child = config.sweep_child(&value);
                let outcome = run_single(&child, &dir.join(&name), version);
                let run = SweepRun {
                    value,
                    directory: name,
                    outcome,
                };
                results.lock().expect("results lock").push((index, run));
            });
        }
    });

    let mut indexed = results.into_inner().expect("workers joined");
    indexed.sort_by_key(|(index, _)| *index);
    let runs: Vec<SweepRun> = indexed.into_iter().map(|(_, run)| run).collect();

    let mut summary = Table::new(
        "summary",
        vec!["run", "key", "value", "directory", "checks_passed", "checks_total", "status"],
    );
    for (index, run) in runs.iter().enumerate() {
        let (passed, total, status) = match &run.outcome {
            Ok(checks) => {
                let passed = checks.iter().filter(|c| c.pass()).count();
                let status = if passed == checks.len() { "ok" } else { "failed" };
                (passed, checks.len(), status)
            }
            Err(_) => (0, 0, "error"),
        };
        summary.push(vec![
            index.into(),
            key.into(),
            run.value.as_str().into(),
            run.directory.as_str().into(),
            passed.into(),
            total.into(),
            status.into(),
        ]);
    }
    summary.write(dir, config.text("output.format"))?;
    Ok(runs)
}
