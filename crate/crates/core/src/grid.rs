//! The fixed reference grid on `[0, L₀]` and fields sampled on it.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform grid with `cells` intervals on `[0, l0]`; nodes `0..=cells`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub cells: usize,
    pub l0: f64,
}

impl Grid {
    /// `cells` must be even (Simpson quadrature) and at least 16.
    pub fn new(cells: usize, l0: f64) -> Result<Self> {
        if cells < 16 || !cells.is_multiple_of(2) {
            return Err(Error::Argument(format!("grid needs an even number of cells >= 16, got {cells}")));
        }
        if !(l0 > 0.0 && l0.is_finite()) {
            return Err(Error::Argument(format!("reference length must be positive, got {l0}")));
        }
        Ok(Self { cells, l0 })
    }

    pub fn spacing(&self) -> f64 {
        self.l0 / self.cells as f64
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    pub fn xi(&self, j: usize) -> f64 {
        self.l0 * j as f64 / self.cells as f64
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.nodes()).map(|j| self.xi(j)).collect()
    }

    /// `sin(πξ/L₀)` at every node, with exact zeros at both ends.
    pub fn principal_mode(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.nodes())
            .map(|j| (PI * j as f64 / self.cells as f64).sin())
            .collect();
        v[0] = 0.0;
        v[self.cells] = 0.0;
        v
    }
}

/// Values on the reference grid at time `t`. Boundary entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub t: f64,
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(t: f64, grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::Consistency(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.nodes()
            )));
        }
        Ok(Self { t, grid, values })
    }

    pub fn zeros(t: f64, grid: Grid) -> Self {
        Self { t, grid, values: vec![0.0; grid.nodes()] }
    }

    pub fn from_fn(t: f64, grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let mut values: Vec<f64> = grid.xis().into_iter().map(f).collect();
        values[0] = 0.0;
        values[grid.cells] = 0.0;
        Self { t, grid, values }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_odd_or_coarse() {
        assert!(Grid::new(15, 1.0).is_err());
        assert!(Grid::new(17, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        let g = Grid::new(16, 2.0).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert_eq!(g.xi(16), 2.0);
    }

    #[test]
    fn principal_mode_vanishes_at_ends() {
        let g = Grid::new(32, 3.0).unwrap();
        let m = g.principal_mode();
        assert_eq!(m[0], 0.0);
        assert_eq!(m[32], 0.0);
        assert_eq!(m[16], 1.0);
    }
}
