//! Uniform sampling grids shared by the field and geometry modules.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid spacing must be positive and finite, got {0}")]
    BadSpacing(f64),
    #[error("grid needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("field has {values} values but the grid has {points} points")]
    LengthMismatch { values: usize, points: usize },
}

/// Uniform 1-D grid: points `origin + i * spacing` for `i` in `0..point_count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    origin: f64,
    spacing: f64,
    point_count: usize,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 8;

    pub fn new(origin: f64, spacing: f64, point_count: usize) -> Result<Self, GridError> {
        if !(spacing > 0.0 && spacing.is_finite() && origin.is_finite()) {
            return Err(GridError::BadSpacing(spacing));
        }
        if point_count < Self::MIN_POINTS {
            return Err(GridError::TooFewPoints {
                min: Self::MIN_POINTS,
                got: point_count,
            });
        }
        Ok(Self {
            origin,
            spacing,
            point_count,
        })
    }

    /// Grid spanning `[min, max]` inclusive with `point_count` points.
    pub fn span(min: f64, max: f64, point_count: usize) -> Result<Self, GridError> {
        if point_count < 2 {
            return Err(GridError::TooFewPoints {
                min: Self::MIN_POINTS,
                got: point_count,
            });
        }
        Self::new(min, (max - min) / (point_count - 1) as f64, point_count)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.point_count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, index: usize) -> f64 {
        self.origin + index as f64 * self.spacing
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.point_count).map(move |i| self.position(i))
    }
}

/// Tensor-product grid over a (tau, xi) rectangle, row-major with xi fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub tau: Grid1D,
    pub xi: Grid1D,
}

impl Grid2D {
    pub fn new(tau: Grid1D, xi: Grid1D) -> Self {
        Self { tau, xi }
    }

    pub fn len(&self) -> usize {
        self.tau.len() * self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i_tau: usize, j_xi: usize) -> usize {
        i_tau * self.xi.len() + j_xi
    }
}

/// Scalar samples on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl Field2D {
    pub fn new(grid: Grid2D, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                values: values.len(),
                points: grid.len(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Tabulate `f(tau, xi)` over the grid.
    pub fn tabulate(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.tau.len() {
            let t = grid.tau.position(i);
            for j in 0..grid.xi.len() {
                values.push(f(t, grid.xi.position(j)));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, i_tau: usize, j_xi: usize) -> f64 {
        self.values[self.grid.index(i_tau, j_xi)]
    }
}
