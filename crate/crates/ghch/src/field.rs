//! Real-valued fields on a periodic grid.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::grid::Grid;

/// A real function sampled on a [`Grid`], with its discrete spectrum cached
/// on first use. Fields are immutable values; every operation allocates its
/// output, so distinct fields can be processed concurrently.
#[derive(Debug)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl Clone for Field {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        Field {
            grid: self.grid.clone(),
            values: self.values.clone(),
            spectrum,
        }
    }
}

impl Field {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Field {
        assert_eq!(values.len(), grid.n(), "value count does not match grid");
        Field {
            grid,
            values,
            spectrum: OnceLock::new(),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Field {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Field::from_values(grid, values)
    }

    /// Build a field from its spectrum; samples are materialized right away
    /// and the spectrum is kept.
    pub fn from_spectrum(grid: Grid, spectrum: Vec<Complex64>) -> Field {
        let values = grid.inverse(&spectrum);
        let cell = OnceLock::new();
        let _ = cell.set(spectrum);
        Field {
            grid,
            values,
            spectrum: cell,
        }
    }

    pub fn zeros(grid: Grid) -> Field {
        let n = grid.n();
        Field::from_values(grid, vec![0.0; n])
    }

    pub fn constant(grid: Grid, c: f64) -> Field {
        let n = grid.n();
        Field::from_values(grid, vec![c; n])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Discrete Fourier coefficients (forward transform, unnormalized).
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| self.grid.forward(&self.values))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Trapezoidal L2 norm `sqrt(L/n * sum v_j^2)`; exact for trigonometric
    /// polynomials resolved on the grid.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v * v).sum();
        (self.grid.length() / self.grid.n() as f64 * sum).sqrt()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_values(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, a: f64) -> Field {
        self.map(|v| a * v)
    }

    pub fn add(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a - b)
    }

    /// Plain pointwise product (no dealiasing).
    pub fn mul(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a * b)
    }

    pub fn zip(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Field::from_values(self.grid.clone(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(32, 2.0 * PI).unwrap()
    }

    #[test]
    fn spectrum_round_trips_values() {
        let u = Field::from_fn(grid(), |x| x.sin() + 0.3 * (3.0 * x).cos());
        let v = Field::from_spectrum(grid(), u.spectrum().to_vec());
        let err: f64 = u
            .values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm = u.l2_norm().max(1e-300);
        assert!(err / norm < 1e-12, "relative L2 residual {}", err / norm);
    }

    #[test]
    fn l2_norm_of_cos_is_sqrt_pi() {
        // Independent quadrature: int_0^{2pi} cos^2 = pi.
        let u = Field::from_fn(grid(), |x| x.cos());
        assert!((u.l2_norm() - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn mean_matches_zeroth_mode() {
        let u = Field::from_fn(grid(), |x| 1.5 + x.sin());
        let s = u.spectrum();
        assert!((u.mean() - s[0].re / 32.0).abs() < 1e-13);
        assert!(s[0].im.abs() < 1e-12);
    }
}
