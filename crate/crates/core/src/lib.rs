//! Numerical laboratory for an analogue black hole in a dc-SQUID transmission
//! line.
//!
//! The crate is organized along the physics pipeline:
//!
//! * [`circuit`]: the discrete flux dynamics of the SQUID array and the
//!   derived propagation/mass/plasma scales,
//! * [`field`]: the continuum sine-Gordon field, its soliton solutions, and
//!   the linearized (dilaton) problem on a soliton background,
//! * [`geometry`]: the effective metric carried by the field, its curvature,
//!   and the coordinate chain down to Kruskal coordinates,
//! * [`hawking`]: occupation spectra, temperatures, and the Bogoliubov
//!   cross-check of thermality.
//!
//! Everything numeric works in natural units (velocity and mass scale set to
//! one) unless a function takes explicit SI circuit parameters; the one
//! conversion point is [`hawking::Temperatures`].

pub mod circuit;
pub mod constants;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod hawking;

pub use circuit::{
    derive_scales, effective_josephson_energy, evolve_lattice, lattice_acceleration,
    lattice_energy, lattice_kink, max_stable_dt, step_lattice, validate_regime, BoundaryCondition,
    CircuitError, CircuitParams, DerivedScales, LatticeState, RegimeReport,
};
pub use field::{
    elliptic_residual, elliptic_residual_2d, elliptic_soliton, evolve_hyperbolic,
    evolve_perturbation, field_energy, hyperbolic_kink, solve_dilaton, symmetry_map_check,
    DilatonOptions, DilatonSolution, FieldError, FieldState, Polarity, SolitonSpec,
    SymmetryMapReport, TauStencil,
};
pub use geometry::{
    horizon_rho, inverse_tortoise, kruskal, kruskal_patch, kruskal_pullback_check,
    metric_from_field, ricci_scalar, schwarzschild_chart_check, soliton_metric_closed_form,
    to_schwarzschild, tortoise, tortoise_derivative_check, Chart, ChartCheckReport, GeometryError,
    HorizonInfo, KruskalCoords, MetricPatch, PullbackReport, RicciField, SchwarzschildPoint,
    Signature,
};
pub use grid::{Field2D, Grid1D, Grid2D};
pub use hawking::{
    bogoliubov_spectrum, occupation, occupation_spectrum, planck_fit, radiated_power, temperatures,
    BogoliubovSpectrum, HawkingError, PlanckFit, QuadratureControls, SpectrumResult, Temperatures,
};
