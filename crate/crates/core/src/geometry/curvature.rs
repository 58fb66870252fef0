//! Ricci scalar of a diagonal two-dimensional metric.
//!
//! For `g = diag(g0(t,x), g1(t,x))` the scalar curvature reduces to
//!
//! ```text
//! R = [ g1 (dt g0 * dt g1 + (dx g0)^2)
//!     + g0 (dx g0 * dx g1 + (dt g1)^2)
//!     - 2 g0 g1 (dxx g0 + dtt g1) ] / (2 g0^2 g1^2)
//! ```
//!
//! No mixed derivatives appear, so a single pass of one-dimensional
//! fourth-order stencils per axis is enough.

use super::{GeometryError, MetricPatch};
use crate::grid::Grid2D;

/// Interior margin consumed by the five-point stencils.
const STENCIL_MARGIN: usize = 2;

/// Ricci scalar samples with a validity mask.
///
/// `valid[k]` is false on the two-point boundary layer and wherever the
/// stencil would read a degenerate metric point.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl RicciField {
    /// Largest |R - target| over the valid points, or `None` if none are valid.
    pub fn max_deviation_from(&self, target: f64) -> Option<f64> {
        self.values
            .iter()
            .zip(&self.valid)
            .filter(|(_, ok)| **ok)
            .map(|(r, _)| (r - target).abs())
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.max(d))))
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

fn d1(fm2: f64, fm1: f64, fp1: f64, fp2: f64, h: f64) -> f64 {
    (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)
}

fn d2(fm2: f64, fm1: f64, f0: f64, fp1: f64, fp2: f64, h: f64) -> f64 {
    (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h)
}

/// Compute the Ricci scalar of a diagonal metric patch with fourth-order
/// central differences.
pub fn ricci_scalar(patch: &MetricPatch) -> Result<RicciField, GeometryError> {
    if patch.g01.iter().any(|g| *g != 0.0) {
        return Err(GeometryError::OffDiagonal);
    }
    let nt = patch.grid.tau.len();
    let nx = patch.grid.xi.len();
    let ht = patch.grid.tau.spacing();
    let hx = patch.grid.xi.spacing();
    let idx = |i: usize, j: usize| i * nx + j;

    let mut values = vec![0.0; nt * nx];
    let mut valid = vec![false; nt * nx];
    for i in STENCIL_MARGIN..nt - STENCIL_MARGIN {
        for j in STENCIL_MARGIN..nx - STENCIL_MARGIN {
            let k = idx(i, j);
            let stencil_clean = (1..=STENCIL_MARGIN).all(|s| {
                !patch.degenerate[idx(i - s, j)]
                    && !patch.degenerate[idx(i + s, j)]
                    && !patch.degenerate[idx(i, j - s)]
                    && !patch.degenerate[idx(i, j + s)]
            }) && !patch.degenerate[k];
            if !stencil_clean {
                continue;
            }
            let g0 = patch.g00[k];
            let g1 = patch.g11[k];
            let g0_t = d1(
                patch.g00[idx(i - 2, j)],
                patch.g00[idx(i - 1, j)],
                patch.g00[idx(i + 1, j)],
                patch.g00[idx(i + 2, j)],
                ht,
            );
            let g1_t = d1(
                patch.g11[idx(i - 2, j)],
                patch.g11[idx(i - 1, j)],
                patch.g11[idx(i + 1, j)],
                patch.g11[idx(i + 2, j)],
                ht,
            );
            let g0_x = d1(
                patch.g00[idx(i, j - 2)],
                patch.g00[idx(i, j - 1)],
                patch.g00[idx(i, j + 1)],
                patch.g00[idx(i, j + 2)],
                hx,
            );
            let g1_x = d1(
                patch.g11[idx(i, j - 2)],
                patch.g11[idx(i, j - 1)],
                patch.g11[idx(i, j + 1)],
                patch.g11[idx(i, j + 2)],
                hx,
            );
            let g0_xx = d2(
                patch.g00[idx(i, j - 2)],
                patch.g00[idx(i, j - 1)],
                g0,
                patch.g00[idx(i, j + 1)],
                patch.g00[idx(i, j + 2)],
                hx,
            );
            let g1_tt = d2(
                patch.g11[idx(i - 2, j)],
                patch.g11[idx(i - 1, j)],
                g1,
                patch.g11[idx(i + 1, j)],
                patch.g11[idx(i + 2, j)],
                ht,
            );
            let numerator = g1 * (g0_t * g1_t + g0_x * g0_x)
                + g0 * (g0_x * g1_x + g1_t * g1_t)
                - 2.0 * g0 * g1 * (g0_xx + g1_tt);
            values[k] = numerator / (2.0 * g0 * g0 * g1 * g1);
            valid[k] = true;
        }
    }
    Ok(RicciField {
        grid: patch.grid,
        values,
        valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Polarity, SolitonSpec};
    use crate::geometry::{soliton_metric_closed_form, Chart};
    use crate::grid::{Grid1D, Grid2D};

    fn flat_patch(n: usize) -> MetricPatch {
        let grid = Grid2D::new(
            Grid1D::new(0.0, 0.1, n).unwrap(),
            Grid1D::new(0.0, 0.1, n).unwrap(),
        );
        MetricPatch {
            chart: Chart::Soliton,
            grid,
            g00: vec![-1.0; n * n],
            g11: vec![1.0; n * n],
            g01: vec![0.0; n * n],
            degenerate: vec![false; n * n],
        }
    }

    /// Soliton patch covering rho bands on both sides of the center; the
    /// center line itself sits between grid points.
    fn soliton_patch(beta: f64, spacing: f64) -> MetricPatch {
        let spec = SolitonSpec::new(beta, Polarity::Kink, 0.0).unwrap();
        let nx = (6.0 / spacing) as usize + 1;
        let nt = (0.4 / spacing) as usize + 1;
        let grid = Grid2D::new(
            Grid1D::new(0.0, spacing, nt).unwrap(),
            Grid1D::new(0.5, spacing, nx).unwrap(),
        );
        soliton_metric_closed_form(&spec, grid)
    }

    #[test]
    fn flat_space_is_flat() {
        let ricci = ricci_scalar(&flat_patch(12)).unwrap();
        assert!(ricci.valid_count() > 0);
        assert_eq!(ricci.max_deviation_from(0.0).unwrap(), 0.0);
    }

    #[test]
    fn soliton_background_has_constant_negative_curvature() {
        let ricci = ricci_scalar(&soliton_patch(0.5, 0.01)).unwrap();
        let dev = ricci.max_deviation_from(-2.0).unwrap();
        assert!(dev < 1e-4, "max |R + 2| = {dev:e}");
        assert!(dev > 0.0);
    }

    #[test]
    fn refinement_shows_fourth_order() {
        let coarse = ricci_scalar(&soliton_patch(0.5, 0.02))
            .unwrap()
            .max_deviation_from(-2.0)
            .unwrap();
        let fine = ricci_scalar(&soliton_patch(0.5, 0.01))
            .unwrap()
            .max_deviation_from(-2.0)
            .unwrap();
        let order = (coarse / fine).log2();
        assert!(
            (3.5..=4.5).contains(&order),
            "observed order {order}, coarse {coarse:e}, fine {fine:e}"
        );
    }

    #[test]
    fn off_diagonal_patch_is_rejected() {
        let mut patch = flat_patch(12);
        patch.g01[5] = 0.25;
        assert_eq!(ricci_scalar(&patch), Err(GeometryError::OffDiagonal));
    }

    #[test]
    fn smallest_legal_grid_still_has_interior() {
        let ricci = ricci_scalar(&flat_patch(8)).unwrap();
        assert_eq!(ricci.valid_count(), 16);
    }

    #[test]
    fn degenerate_points_poison_their_stencils() {
        let mut patch = flat_patch(12);
        patch.degenerate[12 * 6 + 6] = true;
        let ricci = ricci_scalar(&patch).unwrap();
        let idx = |i: usize, j: usize| i * 12 + j;
        assert!(!ricci.valid[idx(6, 6)]);
        assert!(!ricci.valid[idx(6, 5)]);
        assert!(!ricci.valid[idx(4, 6)]);
        assert!(ricci.valid[idx(4, 4)]);
    }
}
