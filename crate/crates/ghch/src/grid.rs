//! Periodic spatial grid with cached transform plans.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

struct Plans {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    // 3N/2-point plans for dealiased products.
    fwd_pad: Arc<dyn Fft<f64>>,
    inv_pad: Arc<dyn Fft<f64>>,
    xi: Vec<f64>,
    nodes: Vec<f64>,
}

/// Uniform periodic grid: `n` nodes `x_j = j L / n` on a period of length
/// `L`, wavenumbers `xi_k = 2 pi k / L` for `k = -n/2 .. n/2 - 1` in FFT
/// order (`0, 1, .., n/2-1, -n/2, .., -1`).
///
/// Transform convention: the forward transform is unnormalized, the inverse
/// carries `1/n`. Cheap to clone; plans are shared.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    length: f64,
    plans: Arc<Plans>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Grid> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::Grid(format!(
                "node count must be even and >= 8, got {n}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Grid(format!("period must be positive, got {length}")));
        }
        let mut planner = FftPlanner::new();
        let m = 3 * n / 2;
        let dxi = 2.0 * PI / length;
        let xi = (0..n)
            .map(|k| {
                let k = if k < n / 2 { k as i64 } else { k as i64 - n as i64 };
                k as f64 * dxi
            })
            .collect();
        let nodes = (0..n).map(|j| j as f64 * length / n as f64).collect();
        Ok(Grid {
            n,
            length,
            plans: Arc::new(Plans {
                fwd: planner.plan_fft_forward(n),
                inv: planner.plan_fft_inverse(n),
                fwd_pad: planner.plan_fft_forward(m),
                inv_pad: planner.plan_fft_inverse(m),
                xi,
                nodes,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Node positions `x_j = j L / n`.
    pub fn nodes(&self) -> &[f64] {
        &self.plans.nodes
    }

    /// Wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.plans.xi
    }

    /// Index of the lone Nyquist mode `-n/2`.
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Unnormalized forward transform of real samples.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n, "value count does not match grid");
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.plans.fwd.process(&mut buf);
        buf
    }

    /// Inverse transform (normalized by `1/n`), real part.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<f64> {
        assert_eq!(spectrum.len(), self.n, "spectrum length does not match grid");
        let mut buf = spectrum.to_vec();
        self.plans.inv.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter().map(|c| c.re * scale).collect()
    }

    pub(crate) fn padded_len(&self) -> usize {
        3 * self.n / 2
    }

    pub(crate) fn forward_padded(&self, buf: &mut [Complex64]) {
        self.plans.fwd_pad.process(buf);
    }

    pub(crate) fn inverse_padded(&self, buf: &mut [Complex64]) {
        self.plans.inv_pad.process(buf);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_for_n8_period_2pi() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        let xi: Vec<i64> = g.wavenumbers().iter().map(|&x| x.round() as i64).collect();
        assert_eq!(xi, vec![0, 1, 2, 3, -4, -3, -2, -1]);
    }

    #[test]
    fn first_wavenumber_scales_with_period() {
        let g = Grid::new(16, 1.0).unwrap();
        assert!((g.wavenumbers()[1] - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn odd_or_small_n_rejected() {
        assert!(Grid::new(7, 1.0).is_err());
        assert!(Grid::new(6, 1.0).is_err());
        assert!(Grid::new(8, 0.0).is_err());
        assert!(Grid::new(8, -1.0).is_err());
        assert!(Grid::new(8, f64::NAN).is_err());
    }

    #[test]
    fn transforms_invert_each_other() {
        let g = Grid::new(32, 5.0).unwrap();
        let values: Vec<f64> = (0..32).map(|j| (j as f64 * 0.37).sin() + 0.2).collect();
        let back = g.inverse(&g.forward(&values));
        for (a, b) in values.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
