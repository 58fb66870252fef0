//! Elliptic side of the rescaled equation: discrete residuals, the
//! linearized (dilaton) solve, and the symmetry-map consistency check.
//!
//! All stencils here are second-order central differences; the dilaton solve
//! targets the exact same discrete operator that the residual uses, so a
//! converged solution kills the first-order term in the symmetry expansion.

use super::{FieldError, FieldState};
use crate::grid::Field2D;

/// Three field snapshots at uniformly spaced times, used to form the
/// second time derivative at the middle time.
#[derive(Debug, Clone)]
pub struct TauStencil {
    pub prev: FieldState,
    pub mid: FieldState,
    pub next: FieldState,
}

impl TauStencil {
    pub fn new(prev: FieldState, mid: FieldState, next: FieldState) -> Result<Self, FieldError> {
        if prev.grid != mid.grid || mid.grid != next.grid {
            return Err(FieldError::GridMismatch);
        }
        let d0 = mid.time - prev.time;
        let d1 = next.time - mid.time;
        if d0.is_nan() || d0 <= 0.0 || (d1 - d0).abs() > 1e-9 * d0 {
            return Err(FieldError::NonUniformStencil([
                prev.time, mid.time, next.time,
            ]));
        }
        Ok(Self { prev, mid, next })
    }

    fn dtau(&self) -> f64 {
        self.mid.time - self.prev.time
    }
}

/// Residual of `phi_tautau + phi_xixi - sin(phi)` at the middle time,
/// interior grid points only (index `i` of the result is grid point `i + 1`).
pub fn elliptic_residual(stencil: &TauStencil) -> Vec<f64> {
    let dtau = stencil.dtau();
    let dxi = stencil.mid.grid.spacing();
    residual_row(
        &stencil.prev.phi,
        &stencil.mid.phi,
        &stencil.next.phi,
        dtau,
        dxi,
    )
}

fn residual_row(prev: &[f64], mid: &[f64], next: &[f64], dtau: f64, dxi: f64) -> Vec<f64> {
    let inv_t = 1.0 / (dtau * dtau);
    let inv_x = 1.0 / (dxi * dxi);
    (1..mid.len() - 1)
        .map(|i| {
            (prev[i] - 2.0 * mid[i] + next[i]) * inv_t
                + (mid[i + 1] - 2.0 * mid[i] + mid[i - 1]) * inv_x
                - mid[i].sin()
        })
        .collect()
}

/// Residual of the rescaled equation over the interior of a rectangle,
/// flattened with xi fastest.
pub fn elliptic_residual_2d(field: &Field2D) -> Vec<f64> {
    let nt = field.grid.tau.len();
    let nx = field.grid.xi.len();
    let inv_t = 1.0 / (field.grid.tau.spacing() * field.grid.tau.spacing());
    let inv_x = 1.0 / (field.grid.xi.spacing() * field.grid.xi.spacing());
    let v = &field.values;
    let idx = |i: usize, j: usize| i * nx + j;
    let mut out = Vec::with_capacity((nt - 2) * (nx - 2));
    for i in 1..nt - 1 {
        for j in 1..nx - 1 {
            let c = v[idx(i, j)];
            out.push(
                (v[idx(i + 1, j)] - 2.0 * c + v[idx(i - 1, j)]) * inv_t
                    + (v[idx(i, j + 1)] - 2.0 * c + v[idx(i, j - 1)]) * inv_x
                    - c.sin(),
            );
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct DilatonOptions {
    /// Max-norm target for the discrete residual.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for DilatonOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 50_000,
        }
    }
}

/// Converged dilaton field with its iteration trace.
#[derive(Debug, Clone)]
pub struct DilatonSolution {
    pub psi: Field2D,
    /// Max-norm residual after each iteration.
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub final_residual: f64,
}

/// Solve `(psi_tautau + psi_xixi) = cos(phi) psi` with Dirichlet data.
///
/// `boundary` supplies psi on the rectangle edge (interior values ignored).
/// The equation is linear, so the solve is a single conjugate-gradient run on
/// the symmetric operator `-laplacian + cos(phi)` with Jacobi scaling. On
/// domains where that operator stops being positive definite the iteration
/// fails to contract and surfaces as [`FieldError::NoConvergence`].
pub fn solve_dilaton(
    phi: &Field2D,
    boundary: &Field2D,
    opts: &DilatonOptions,
) -> Result<DilatonSolution, FieldError> {
    if phi.grid != boundary.grid {
        return Err(FieldError::GridMismatch);
    }
    if opts.tolerance.is_nan() || opts.tolerance <= 0.0 {
        return Err(FieldError::NonPositive {
            name: "tolerance",
            value: opts.tolerance,
        });
    }
    let nt = phi.grid.tau.len();
    let nx = phi.grid.xi.len();
    let inv_t = 1.0 / (phi.grid.tau.spacing() * phi.grid.tau.spacing());
    let inv_x = 1.0 / (phi.grid.xi.spacing() * phi.grid.xi.spacing());
    let cos_phi: Vec<f64> = phi.values.iter().map(|p| p.cos()).collect();
    let idx = |i: usize, j: usize| i * nx + j;
    let (mt, mx) = (nt - 2, nx - 2);
    let int_idx = |i: usize, j: usize| (i - 1) * mx + (j - 1);

    // A x = b on the interior, A = -(laplacian - cos phi), b from the edge.
    let apply = |x: &[f64], out: &mut [f64]| {
        for i in 1..nt - 1 {
            for j in 1..nx - 1 {
                let c = x[int_idx(i, j)];
                let up = if i + 1 < nt - 1 { x[int_idx(i + 1, j)] } else { 0.0 };
                let dn = if i > 1 { x[int_idx(i - 1, j)] } else { 0.0 };
                let rt = if j + 1 < nx - 1 { x[int_idx(i, j + 1)] } else { 0.0 };
                let lf = if j > 1 { x[int_idx(i, j - 1)] } else { 0.0 };
                out[int_idx(i, j)] = -((up - 2.0 * c + dn) * inv_t
                    + (rt - 2.0 * c + lf) * inv_x
                    - cos_phi[idx(i, j)] * c);
            }
        }
    };
    let mut b = vec![0.0; mt * mx];
    for i in 1..nt - 1 {
        for j in 1..nx - 1 {
            let up = if i + 1 == nt - 1 { boundary.values[idx(i + 1, j)] } else { 0.0 };
            let dn = if i == 1 { boundary.values[idx(i - 1, j)] } else { 0.0 };
            let rt = if j + 1 == nx - 1 { boundary.values[idx(i, j + 1)] } else { 0.0 };
            let lf = if j == 1 { boundary.values[idx(i, j - 1)] } else { 0.0 };
            b[int_idx(i, j)] = up * inv_t + dn * inv_t + rt * inv_x + lf * inv_x;
        }
    }

    let diag: Vec<f64> = {
        let mut d = vec![0.0; mt * mx];
        for i in 1..nt - 1 {
            for j in 1..nx - 1 {
                d[int_idx(i, j)] = 2.0 * inv_t + 2.0 * inv_x + cos_phi[idx(i, j)];
            }
        }
        d
    };

    let mut x = vec![0.0; mt * mx];
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; mt * mx];
    let mut history = Vec::new();
    let mut best = f64::INFINITY;

    for iteration in 0..opts.max_iterations {
        let res_max = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        history.push(res_max);
        best = best.min(res_max);
        if res_max < opts.tolerance {
            let mut psi = boundary.clone();
            for i in 1..nt - 1 {
                for j in 1..nx - 1 {
                    psi.values[idx(i, j)] = x[int_idx(i, j)];
                }
            }
            return Ok(DilatonSolution {
                psi,
                final_residual: res_max,
                iterations: iteration,
                residual_history: history,
            });
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if !(pap.is_finite()) || pap == 0.0 {
            break;
        }
        let alpha = rz / pap;
        for k in 0..x.len() {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        for k in 0..z.len() {
            z[k] = r[k] / diag[k];
        }
        let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for k in 0..p.len() {
            p[k] = z[k] + beta * p[k];
        }
    }
    Err(FieldError::NoConvergence {
        target: opts.tolerance,
        iterations: history.len(),
        best,
        history,
    })
}

/// Result of probing `phi -> phi + eps psi` against the discrete equation.
#[derive(Debug, Clone)]
pub struct SymmetryMapReport {
    pub epsilons: Vec<f64>,
    /// `max |residual(phi + eps psi) - residual(phi)|` per epsilon.
    pub residual_deltas: Vec<f64>,
    /// Max-norm discretization floor `max |residual(phi)|`.
    pub floor: f64,
    /// Log-log slope of the deltas; 2 when psi solves the linearized equation.
    pub slope: f64,
}

impl SymmetryMapReport {
    pub const MIN_SLOPE: f64 = 1.9;
}

/// Verify that a converged dilaton field moves the sine-Gordon residual only
/// at second order in the map `phi -> phi + eps psi`.
///
/// The discretization floor is subtracted pointwise, which removes the
/// eps-independent term exactly; what remains scales as `eps^2 sin(phi)
/// psi^2 / 2` plus the (negligible) eps-linear dilaton residual.
pub fn symmetry_map_check(
    phi: &Field2D,
    psi: &Field2D,
    epsilons: &[f64],
) -> Result<SymmetryMapReport, FieldError> {
    if phi.grid != psi.grid {
        return Err(FieldError::GridMismatch);
    }
    if epsilons.len() < 2 || epsilons.iter().any(|e| e.is_nan() || *e <= 0.0) {
        return Err(FieldError::NonPositive {
            name: "epsilons",
            value: epsilons.first().copied().unwrap_or(0.0),
        });
    }
    let base = elliptic_residual_2d(phi);
    let floor = base.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut deltas = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let shifted = Field2D::new(
            phi.grid,
            phi.values
                .iter()
                .zip(&psi.values)
                .map(|(a, b)| a + eps * b)
                .collect(),
        )
        .expect("same grid");
        let res = elliptic_residual_2d(&shifted);
        let delta = res
            .iter()
            .zip(&base)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        deltas.push(delta);
    }
    // least-squares slope in log-log
    let lx: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let report = SymmetryMapReport {
        epsilons: epsilons.to_vec(),
        residual_deltas: deltas,
        floor,
        slope,
    };
    if slope < SymmetryMapReport::MIN_SLOPE {
        return Err(FieldError::SymmetrySlope {
            slope,
            threshold: SymmetryMapReport::MIN_SLOPE,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{elliptic_soliton, Polarity, SolitonSpec};
    use crate::grid::{Grid1D, Grid2D};
    use std::f64::consts::PI;

    fn stencil(spec: &SolitonSpec, tau: f64, dtau: f64, grid: Grid1D) -> TauStencil {
        TauStencil::new(
            elliptic_soliton(spec, tau - dtau, grid),
            elliptic_soliton(spec, tau, grid),
            elliptic_soliton(spec, tau + dtau, grid),
        )
        .unwrap()
    }

    #[test]
    fn constant_backgrounds_have_zero_residual() {
        let grid = Grid1D::span(-2.0, 2.0, 64).unwrap();
        for value in [0.0, PI] {
            let state = |t: f64| {
                FieldState::new(grid, vec![value; 64], vec![0.0; 64], t).unwrap()
            };
            let st = TauStencil::new(state(0.0), state(0.01), state(0.02)).unwrap();
            let res = elliptic_residual(&st);
            assert!(res.iter().all(|r| r.abs() < 1e-12));
        }
    }

    #[test]
    fn soliton_residual_is_second_order() {
        let spec = SolitonSpec::new(0.5, Polarity::Kink, 0.0).unwrap();
        let max_res = |delta: f64| -> f64 {
            let n = (8.0 / delta) as usize + 1;
            let grid = Grid1D::new(-4.0, delta, n).unwrap();
            let st = stencil(&spec, 0.3, delta, grid);
            elliptic_residual(&st)
                .iter()
                .fold(0.0_f64, |m, r| m.max(r.abs()))
        };
        let coarse = max_res(1e-2);
        let fine = max_res(5e-3);
        assert!(coarse < 1e-3, "residual {coarse:e} at delta 1e-2");
        let order = (coarse / fine).log2();
        assert!((order - 2.0).abs() < 0.1, "observed order {order}");
    }

    #[test]
    fn stencil_rejects_uneven_times() {
        let grid = Grid1D::span(-2.0, 2.0, 32).unwrap();
        let state = |t: f64| FieldState::new(grid, vec![0.0; 32], vec![0.0; 32], t).unwrap();
        assert!(matches!(
            TauStencil::new(state(0.0), state(0.01), state(0.03)),
            Err(FieldError::NonUniformStencil(_))
        ));
    }

    fn unit_square(n: usize) -> Grid2D {
        let d = 1.0 / (n - 1) as f64;
        Grid2D::new(
            Grid1D::new(0.0, d, n).unwrap(),
            Grid1D::new(0.0, d, n).unwrap(),
        )
    }

    #[test]
    fn dilaton_zero_boundary_gives_zero() {
        let grid = unit_square(33);
        let phi = Field2D::tabulate(grid, |_, _| PI);
        let boundary = Field2D::tabulate(grid, |_, _| 0.0);
        let sol = solve_dilaton(&phi, &boundary, &DilatonOptions::default()).unwrap();
        assert!(sol.psi.values.iter().all(|v| *v == 0.0));
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn dilaton_matches_separable_solution_on_pi_background() {
        // cos(pi) = -1 turns the equation into laplacian psi = -psi, solved
        // by sin(0.8 tau) cos(0.6 xi)
        let grid = unit_square(129);
        let phi = Field2D::tabulate(grid, |_, _| PI);
        let exact = Field2D::tabulate(grid, |t, x| (0.8 * t).sin() * (0.6 * x).cos());
        let sol = solve_dilaton(&phi, &exact, &DilatonOptions::default()).unwrap();
        assert!(sol.final_residual < 1e-8);
        let worst = sol
            .psi
            .values
            .iter()
            .zip(&exact.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(worst < 1e-6, "deviation {worst:e}");
        assert!(!sol.residual_history.is_empty());
    }

    fn soliton_rectangle(delta: f64) -> (Field2D, Field2D) {
        let spec = SolitonSpec::new(0.5, Polarity::Kink, 0.0).unwrap();
        let gamma = spec.gamma();
        let beta = spec.beta_s;
        let nt = (1.5 / delta) as usize + 1;
        let nx = (6.0 / delta) as usize + 1;
        let grid = Grid2D::new(
            Grid1D::new(0.0, delta, nt).unwrap(),
            Grid1D::new(-3.0, delta, nx).unwrap(),
        );
        let phi = Field2D::tabulate(grid, |t, x| spec.phi(t, x));
        let sech = Field2D::tabulate(grid, |t, x| 1.0 / (gamma * (x - beta * t)).cosh());
        (phi, sech)
    }

    #[test]
    fn dilaton_recovers_sech_on_soliton_background() {
        // sech(rho) solves the continuum linearized equation exactly, so the
        // discrete solution should land within O(delta^2) of it
        let (phi, sech) = soliton_rectangle(0.02);
        let sol = solve_dilaton(&phi, &sech, &DilatonOptions::default()).unwrap();
        assert!(sol.final_residual < 1e-8);
        let worst = sol
            .psi
            .values
            .iter()
            .zip(&sech.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(worst < 1e-4, "deviation from sech {worst:e}");
    }

    #[test]
    fn dilaton_reports_non_convergence() {
        let grid = unit_square(65);
        let phi = Field2D::tabulate(grid, |_, _| PI);
        let exact = Field2D::tabulate(grid, |t, x| (0.8 * t).sin() * (0.6 * x).cos());
        let out = solve_dilaton(
            &phi,
            &exact,
            &DilatonOptions {
                tolerance: 1e-8,
                max_iterations: 3,
            },
        );
        match out {
            Err(FieldError::NoConvergence {
                iterations,
                best,
                history,
                ..
            }) => {
                assert_eq!(iterations, 3);
                assert_eq!(history.len(), 3);
                assert!(best.is_finite());
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn symmetry_map_slope_is_quadratic() {
        let (phi, sech) = soliton_rectangle(0.02);
        let sol = solve_dilaton(&phi, &sech, &DilatonOptions::default()).unwrap();
        let eps: Vec<f64> = (0..7).map(|i| 1e-4 * 10f64.powf(i as f64 / 3.0)).collect();
        let report = symmetry_map_check(&phi, &sol.psi, &eps).unwrap();
        assert!(
            (report.slope - 2.0).abs() < 0.1,
            "slope {} deltas {:?}",
            report.slope,
            report.residual_deltas
        );
        assert!(report.floor > 0.0);
    }

    #[test]
    fn symmetry_map_rejects_non_solution() {
        // a random-ish field is no symmetry generator: the residual moves at
        // first order and the slope check fails
        let (phi, _) = soliton_rectangle(0.05);
        let junk = Field2D::tabulate(phi.grid, |t, x| (3.0 * t + x).sin());
        let eps: Vec<f64> = (0..5).map(|i| 1e-4 * 10f64.powf(i as f64 / 2.0)).collect();
        assert!(matches!(
            symmetry_map_check(&phi, &junk, &eps),
            Err(FieldError::SymmetrySlope { .. })
        ));
    }
}
