//! Periodic pseudospectral operator calculus.
//!
//! Everything here is a Fourier multiplier: an operator that scales the
//! `k`-th Fourier coefficient by a symbol `sigma(xi_k)`. The symbols in
//! play are
//!
//! | operator            | symbol                            |
//! |---------------------|-----------------------------------|
//! | `d^k/dx^k`          | `(i xi)^k`                        |
//! | `lambda_s(s)`       | `(1 + xi^2)^{s/2}`                |
//! | `lambda_m(m, s)`    | `(1 + m xi^2)^{s/2}`              |
//! | `lambda_m0(m)`      | `(1 + xi^2) / (1 + m xi^2)`       |
//!
//! and the Sobolev norm is `|u|_{H^s} = |lambda_s(u, s)|_{L2}`.
//!
//! Normalization (stated once, enforced by the Parseval test): the forward
//! transform is unnormalized and the inverse carries `1/n`, so
//! `|u|_{L2}^2 = L/n * sum_j u_j^2 = L * sum_k |u_hat_k|^2 / n^2`.
//!
//! The lone Nyquist mode `-n/2` has no conjugate partner: odd-order
//! derivatives (and the spectral antiderivative) zero it, even-power
//! multipliers keep it. Fractional powers are evaluated directly in double
//! precision; the symbols are smooth and positive.

use num_complex::Complex64;

use crate::field::Field;
use crate::grid::Grid;

/// Apply a real, even symbol `sigma(xi)`.
fn apply_real_symbol(u: &Field, sigma: impl Fn(f64) -> f64) -> Field {
    let grid = u.grid().clone();
    let spec: Vec<Complex64> = u
        .spectrum()
        .iter()
        .zip(grid.wavenumbers())
        .map(|(&c, &xi)| c * sigma(xi))
        .collect();
    Field::from_spectrum(grid, spec)
}

/// Spectral derivative of order `k` (contract: `1 <= k <= 5`).
pub fn derivative(u: &Field, k: usize) -> Field {
    let spec = derivative_spectrum(u.grid(), u.spectrum(), k);
    Field::from_spectrum(u.grid().clone(), spec)
}

/// Derivative acting on a raw spectrum.
pub(crate) fn derivative_spectrum(grid: &Grid, spec: &[Complex64], k: usize) -> Vec<Complex64> {
    assert!((1..=5).contains(&k), "derivative order {k} outside 1..=5");
    let nyquist = grid.nyquist_index();
    let odd = k % 2 == 1;
    // (i xi)^k = i^k xi^k with i^k cycling 1, i, -1, -i.
    let out: Vec<Complex64> = spec
        .iter()
        .zip(grid.wavenumbers())
        .enumerate()
        .map(|(idx, (&c, &xi))| {
            if odd && idx == nyquist {
                return Complex64::new(0.0, 0.0);
            }
            let p = xi.powi(k as i32);
            match k % 4 {
                0 => c * p,
                1 => c * Complex64::new(0.0, p),
                2 => c * (-p),
                _ => c * Complex64::new(0.0, -p),
            }
        })
        .collect();
    out
}

/// `Λ^s = (1 - d^2/dx^2)^{s/2}`, symbol `(1 + xi^2)^{s/2}`.
pub fn lambda_s(u: &Field, s: f64) -> Field {
    apply_real_symbol(u, |xi| (1.0 + xi * xi).powf(s / 2.0))
}

/// `Λ_m^s = (1 - m d^2/dx^2)^{s/2}`, symbol `(1 + m xi^2)^{s/2}`;
/// `s = -2` is the inverse elliptic factor used by the solvers.
pub fn lambda_m(u: &Field, m: f64, s: f64) -> Field {
    assert!(m > 0.0, "lambda_m requires m > 0, got {m}");
    apply_real_symbol(u, |xi| (1.0 + m * xi * xi).powf(s / 2.0))
}

/// `Λ_m^0 = Λ^2 Λ_m^{-2}`, symbol `(1 + xi^2)/(1 + m xi^2)`, or its
/// reciprocal when `inverse` is set.
pub fn lambda_m0(u: &Field, m: f64, inverse: bool) -> Field {
    assert!(m > 0.0, "lambda_m0 requires m > 0, got {m}");
    if inverse {
        apply_real_symbol(u, |xi| (1.0 + m * xi * xi) / (1.0 + xi * xi))
    } else {
        apply_real_symbol(u, |xi| (1.0 + xi * xi) / (1.0 + m * xi * xi))
    }
}

/// `|u|_{H^s}` via the discrete Parseval sum.
pub fn sobolev_norm(u: &Field, s: f64) -> f64 {
    sobolev_norm_spectrum(u.grid(), u.spectrum(), s)
}

pub(crate) fn sobolev_norm_spectrum(grid: &Grid, spec: &[Complex64], s: f64) -> f64 {
    let n = grid.n() as f64;
    let sum: f64 = spec
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, &xi)| (1.0 + xi * xi).powf(s) * c.norm_sqr())
        .sum();
    (grid.length() * sum / (n * n)).sqrt()
}

/// Discrete `H^s -> H^s` operator norm of a multiplier operator, measured
/// by probing every resolvable mode with a single-frequency field. For the
/// diagonal operators of this module the result is exactly the largest
/// symbol magnitude on the grid.
pub fn empirical_operator_norm(op: impl Fn(&Field) -> Field, s: f64, grid: &Grid) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..=grid.n() / 2 {
        let xi = 2.0 * std::f64::consts::PI * k as f64 / grid.length();
        let probe = Field::from_fn(grid.clone(), |x| (xi * x).cos());
        let denom = sobolev_norm(&probe, s);
        let gain = sobolev_norm(&op(&probe), s) / denom;
        worst = worst.max(gain);
    }
    worst
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Zero-pad an `n`-mode spectrum into a `3n/2`-mode buffer. The lone
/// Nyquist coefficient is split evenly between `+n/2` and `-n/2` so the
/// padded signal stays real.
pub(crate) fn pad_spectrum(grid: &Grid, spec: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    let m = grid.padded_len();
    let half = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    out[..half].copy_from_slice(&spec[..half]);
    for j in 1..half {
        out[m - j] = spec[n - j];
    }
    let ny = 0.5 * spec[half];
    out[half] += ny;
    out[m - half] += ny;
    out
}

/// Inverse of [`pad_spectrum`]: truncate a `3n/2`-mode spectrum back to `n`
/// modes, recombining `+n/2` and `-n/2` into the lone Nyquist slot.
pub(crate) fn truncate_spectrum(grid: &Grid, fine: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    let m = grid.padded_len();
    let half = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[..half].copy_from_slice(&fine[..half]);
    for j in 1..half {
        out[n - j] = fine[m - j];
    }
    out[half] = fine[half] + fine[m - half];
    out
}

/// Alias-free product spectrum by the 2/3-rule (3/2 zero padding): both
/// factors are padded to `3n/2` modes, multiplied pointwise in physical
/// space, and the result truncated back. The retained modes equal the exact
/// projection of the product onto the grid.
pub(crate) fn dealiased_product_spectrum(
    grid: &Grid,
    a: &[Complex64],
    b: &[Complex64],
) -> Vec<Complex64> {
    let m = grid.padded_len() as f64;
    let n = grid.n() as f64;
    let mut fa = pad_spectrum(grid, a);
    let mut fb = pad_spectrum(grid, b);
    grid.inverse_padded(&mut fa);
    grid.inverse_padded(&mut fb);
    let scale = 1.0 / (m * m);
    for (x, y) in fa.iter_mut().zip(&fb) {
        // Both factors are real up to roundoff after the inverse transform.
        *x = Complex64::new(x.re * y.re * scale, 0.0);
    }
    grid.forward_padded(&mut fa);
    let norm = n / m;
    truncate_spectrum(grid, &fa).into_iter().map(|c| c * norm).collect()
}

/// Dealiased pointwise product of two fields.
pub fn dealiased_product(a: &Field, b: &Field) -> Field {
    assert_eq!(a.grid(), b.grid(), "fields live on different grids");
    let spec = dealiased_product_spectrum(a.grid(), a.spectrum(), b.spectrum());
    Field::from_spectrum(a.grid().clone(), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::new(n, 2.0 * PI).unwrap()
    }

    fn rel_l2(a: &Field, b: &Field) -> f64 {
        let diff = a.sub(b).l2_norm();
        let scale = a.l2_norm().max(b.l2_norm()).max(1e-300);
        diff / scale
    }

    #[test]
    fn derivative_of_sin_is_cos() {
        let g = grid(64);
        let u = Field::from_fn(g.clone(), |x| x.sin());
        let du = derivative(&u, 1);
        let want = Field::from_fn(g, |x| x.cos());
        assert!(rel_l2(&du, &want) < 1e-12);
    }

    #[test]
    fn second_derivative_of_cos2x() {
        let g = grid(64);
        let u = Field::from_fn(g.clone(), |x| (2.0 * x).cos());
        let ddu = derivative(&u, 2);
        let want = Field::from_fn(g, |x| -4.0 * (2.0 * x).cos());
        assert!(rel_l2(&ddu, &want) < 1e-12);
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = grid(32);
        let u = Field::constant(g, 3.25);
        for k in 1..=5 {
            assert!(derivative(&u, k).max_abs() < 1e-11, "order {k}");
        }
    }

    #[test]
    fn lambda_s_zero_is_identity() {
        let g = grid(32);
        let u = Field::from_fn(g, |x| x.sin() + 0.5 * (3.0 * x).cos());
        let v = lambda_s(&u, 0.0);
        assert!(rel_l2(&u, &v) < 1e-13);
    }

    #[test]
    fn lambda_s_two_doubles_first_mode() {
        let g = grid(32);
        let u = Field::from_fn(g.clone(), |x| x.cos());
        let v = lambda_s(&u, 2.0);
        let want = Field::from_fn(g, |x| 2.0 * x.cos());
        assert!(rel_l2(&v, &want) < 1e-13);
    }

    #[test]
    fn lambda_s_inverts_itself() {
        let g = grid(32);
        let u = Field::from_fn(g, |x| (2.0 * x).sin() - 0.1);
        let v = lambda_s(&lambda_s(&u, 2.7), -2.7);
        assert!(rel_l2(&u, &v) < 1e-12);
    }

    #[test]
    fn lambda_m_with_unit_m_collapses_to_lambda_s() {
        let g = grid(32);
        let u = Field::from_fn(g, |x| x.sin() + (4.0 * x).cos());
        for s in [-2.0, 0.5, 3.0] {
            assert!(rel_l2(&lambda_m(&u, 1.0, s), &lambda_s(&u, s)) < 1e-13);
        }
    }

    #[test]
    fn lambda_m_inverse_elliptic_on_cos2x() {
        // (1 + 0.5 * 4)^{-1} = 1/3.
        let g = grid(32);
        let u = Field::from_fn(g.clone(), |x| (2.0 * x).cos());
        let v = lambda_m(&u, 0.5, -2.0);
        let want = Field::from_fn(g, |x| (2.0 * x).cos() / 3.0);
        assert!(rel_l2(&v, &want) < 1e-13);
    }

    #[test]
    fn lambda_m_pair_inverts() {
        let g = grid(32);
        let u = Field::from_fn(g, |x| (3.0 * x).sin() + 0.2 * x.cos());
        let v = lambda_m(&lambda_m(&u, 0.3, 2.0), 0.3, -2.0);
        assert!(rel_l2(&u, &v) < 1e-12);
    }

    #[test]
    fn lambda_m0_identity_cases() {
        let g = grid(32);
        let u = Field::from_fn(g.clone(), |x| x.sin() * x.cos() + 1.0);
        // m = 1 is the identity for any field.
        assert!(rel_l2(&lambda_m0(&u, 1.0, false), &u) < 1e-13);
        // Constants are fixed for any m (symbol at xi = 0 is 1).
        let c = Field::constant(g, -2.5);
        assert!(rel_l2(&lambda_m0(&c, 7.0, false), &c) < 1e-13);
        assert!(rel_l2(&lambda_m0(&c, 0.1, true), &c) < 1e-13);
    }

    #[test]
    fn lambda_m0_on_first_mode() {
        // ((1+1)/(1+4)) cos x = 0.4 cos x at m = 4.
        let g = grid(32);
        let u = Field::from_fn(g.clone(), |x| x.cos());
        let want = Field::from_fn(g, |x| 0.4 * x.cos());
        assert!(rel_l2(&lambda_m0(&u, 4.0, false), &want) < 1e-13);
    }

    #[test]
    fn sobolev_norm_oracle_values() {
        let g = grid(64);
        assert_eq!(sobolev_norm(&Field::zeros(g.clone()), 2.3), 0.0);
        // Quadrature oracle: int_0^{2pi} cos^2 = pi, so |cos|_{H^0} = sqrt(pi)
        // and the +-1 modes carry weight sqrt(2) in H^1.
        let u = Field::from_fn(g, |x| x.cos());
        assert!((sobolev_norm(&u, 0.0) - PI.sqrt()).abs() < 1e-13);
        assert!((sobolev_norm(&u, 1.0) - (2.0 * PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn operator_norm_bounds_from_the_lemma() {
        for &n in &[64usize, 256] {
            let g = grid(n);
            for &m in &[0.1, 0.25, 1.0, 2.0, 10.0] {
                for &s in &[0.0, 1.0, 2.7] {
                    let fwd = empirical_operator_norm(|u| lambda_m0(u, m, false), s, &g);
                    let inv = empirical_operator_norm(|u| lambda_m0(u, m, true), s, &g);
                    let slack = 1.0 + 1e-12;
                    assert!(fwd <= (1.0 / m).max(1.0) * slack, "fwd {fwd} m={m} s={s}");
                    assert!(inv <= m.max(1.0) * slack, "inv {inv} m={m} s={s}");
                }
            }
        }
    }

    #[test]
    fn operator_norm_approaches_supremum() {
        // For m = 0.25 the symbol sup over all frequencies is 4; the grid
        // value climbs toward it as n grows.
        let coarse = empirical_operator_norm(|u| lambda_m0(u, 0.25, false), 0.0, &grid(64));
        let fine = empirical_operator_norm(|u| lambda_m0(u, 0.25, false), 0.0, &grid(256));
        assert!(coarse <= 4.0 + 1e-12);
        assert!(fine <= 4.0 + 1e-12);
        assert!(fine > coarse);
        assert!(fine > 3.99);
        // m = 1 is the identity.
        let id = empirical_operator_norm(|u| lambda_m0(u, 1.0, false), 1.0, &grid(64));
        assert!((id - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dealiased_product_matches_plain_on_resolved_data() {
        // cos x * cos 2x has modes 1 and 3 only; no aliasing at n = 32, so
        // the padded product and the plain product agree.
        let g = grid(32);
        let a = Field::from_fn(g.clone(), |x| x.cos());
        let b = Field::from_fn(g.clone(), |x| (2.0 * x).cos());
        let d = dealiased_product(&a, &b);
        let plain = a.mul(&b);
        assert!(rel_l2(&d, &plain) < 1e-13);
    }

    #[test]
    fn dealiased_product_drops_aliased_modes() {
        // At n = 8 the product cos(3x)*cos(3x) = 1/2 + cos(6x)/2 aliases
        // mode 6 onto mode -2. The dealiased product keeps only the mean.
        let g = grid(8);
        let a = Field::from_fn(g.clone(), |x| (3.0 * x).cos());
        let d = dealiased_product(&a, &a);
        let spec = d.spectrum();
        assert!((spec[0].re / 8.0 - 0.5).abs() < 1e-13);
        assert!(spec[2].norm() / 8.0 < 1e-13, "aliased mode not removed");
        let plain = a.mul(&a);
        assert!(plain.spectrum()[6].norm() / 8.0 > 0.4, "plain product aliases");
    }

    fn arb_field(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1.0..1.0f64, n..=n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn commutation_identity(values in arb_field(64)) {
            // lambda_s(lambda_m(u, m, -2), s) == lambda_m0(lambda_s(u, s-2), m)
            let g = grid(64);
            let u = Field::from_values(g, values);
            for &m in &[0.25, 1.0, 4.0] {
                for &s in &[0.0, 1.0, 2.7, 3.0] {
                    let lhs = lambda_s(&lambda_m(&u, m, -2.0), s);
                    let rhs = lambda_m0(&lambda_s(&u, s - 2.0), m, false);
                    prop_assert!(rel_l2(&lhs, &rhs) <= 1e-12);
                }
            }
        }

        #[test]
        fn est1_bound(values in arb_field(64)) {
            // |lambda_m(f, m, -2)|_{H^{s+2}} <= max(1/m, 1) |f|_{H^s}
            let g = grid(64);
            let f = Field::from_values(g, values);
            for &m in &[0.1, 0.25, 1.0, 2.0, 10.0] {
                for &s in &[0.0, 1.0, 2.7] {
                    let u = lambda_m(&f, m, -2.0);
                    let lhs = sobolev_norm(&u, s + 2.0);
                    let bound = (1.0 / m).max(1.0) * sobolev_norm(&f, s);
                    prop_assert!(lhs <= bound * (1.0 + 1e-12),
                        "m={} s={} lhs={} bound={}", m, s, lhs, bound);
                }
            }
        }

        #[test]
        fn parseval_both_sides(values in arb_field(32)) {
            let g = grid(32);
            let u = Field::from_values(g.clone(), values);
            let lhs = sobolev_norm(&u, 0.0).powi(2);
            let spec_sum: f64 = u.spectrum().iter().map(|c| c.norm_sqr()).sum();
            let rhs = g.length() * spec_sum / (32.0 * 32.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-30));
        }

        #[test]
        fn multipliers_commute(values in arb_field(32)) {
            let g = grid(32);
            let u = Field::from_values(g, values);
            let a = lambda_m0(&lambda_m(&lambda_s(&u, 1.3), 0.5, -2.0), 2.0, false);
            let b = lambda_s(&lambda_m0(&lambda_m(&u, 0.5, -2.0), 2.0, false), 1.3);
            prop_assert!(rel_l2(&a, &b) <= 1e-12);
        }

        #[test]
        fn realness_preserved(values in arb_field(32)) {
            // Conjugate symmetry of the output spectrum bounds the imaginary
            // residue of the inverse transform.
            let g = grid(32);
            let u = Field::from_values(g, values);
            for out in [
                derivative(&u, 1),
                derivative(&u, 3),
                derivative(&u, 5),
                lambda_s(&u, 1.7),
                lambda_m0(&u, 0.3, false),
                dealiased_product(&u, &u),
            ] {
                let spec = out.spectrum();
                let scale = spec.iter().map(|c| c.norm()).fold(1e-300f64, f64::max);
                for k in 1..16 {
                    let asym = (spec[k] - spec[32 - k].conj()).norm();
                    prop_assert!(asym / scale <= 1e-13, "mode {} asymmetry {}", k, asym / scale);
                }
            }
        }
    }
}
