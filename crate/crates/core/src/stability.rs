//! Linearization of the controlled equation about an equilibrium.
//!
//! In the sine basis the linearized operator
//! `v ↦ v_xx + λ(1 − 3u*²)v + b(v − C_h[v])` has entries
//!
//! ```text
//! L_km = (−k² + λ + b(1 − h_k)) δ_km − 3λ W_km,
//! W_km = (2/π) ∫ u*² sin(kx) sin(mx) dx = (c_|k−m| − c_{k+m}) / 2,
//! ```
//!
//! where `c_n` are the cosine coefficients of `u*²`. The matrix is symmetric,
//! so its spectrum is real.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::control::{ControlParams, FilterKernel};
use crate::equilibria::count_zeros;
use crate::spectral::{sobolev_norm, Dealiaser, SpectralField};

/// Eigenvalues with `|μ| ≤ ZERO_TOLERANCE` count as neither stable nor
/// unstable.
pub const ZERO_TOLERANCE: f64 = 1e-9;

/// Largest control-term norm at which feedback still counts as noninvasive.
pub const NONINVASIVE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum StabilityError {
    #[error("control term does not vanish at the equilibrium (norm {norm:e})")]
    InvasiveControl { norm: f64 },
}

/// Spectrum of a linearization, eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizationReport {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<SpectralField>,
    pub morse_index: usize,
    pub margin: f64,
    pub zero_counts: Vec<usize>,
}

impl LinearizationReport {
    /// Eigenvector of the largest eigenvalue.
    pub fn leading_mode(&self) -> &SpectralField {
        &self.eigenvectors[0]
    }

    /// `(μ, v)` pairs with `μ > ZERO_TOLERANCE`.
    pub fn unstable_modes(&self) -> impl Iterator<Item = (f64, &SpectralField, usize)> {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .zip(&self.zero_counts)
            .take_while(|((mu, _), _)| **mu > ZERO_TOLERANCE)
            .map(|((mu, v), z)| (*mu, v, *z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Stable { margin: f64 },
    Unstable { morse_index: usize, margin: f64 },
}

impl Verdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, Verdict::Stable { .. })
    }

    pub fn margin(&self) -> f64 {
        match *self {
            Verdict::Stable { margin } | Verdict::Unstable { margin, .. } => margin,
        }
    }
}

/// Truncation that resolves the marginal modes and the potential coupling
/// at parameter `lambda`.
pub fn recommended_truncation(lambda: f64) -> usize {
    4 * libm::ceil(libm::sqrt(lambda.max(0.0))) as usize + 32
}

/// `N × N` matrix of the controlled linearization about `u_star`.
pub fn assemble(
    u_star: &SpectralField,
    lambda: f64,
    params: &ControlParams,
    modes: usize,
) -> DMatrix<f64> {
    let mut matrix = DMatrix::from_fn(modes, modes, |r, c| {
        if r == c {
            params.linear_symbol(r + 1, lambda)
        } else {
            0.0
        }
    });
    if u_star.is_zero() {
        return matrix;
    }
    let mut dealiaser = Dealiaser::new(u_star.truncation().max(modes));
    let cosine = dealiaser.square_cosine_coefficients(u_star.coeffs(), 2 * modes + 1);
    let coupling = 3.0 * lambda;
    for r in 0..modes {
        for c in 0..modes {
            let (k, m) = (r + 1, c + 1);
            let w = 0.5 * (cosine[k.abs_diff(m)] - cosine[k + m]);
            matrix[(r, c)] -= coupling * w;
        }
    }
    matrix
}

/// Full symmetric eigen-decomposition of an assembled linearization.
///
/// Eigenvectors are unit-normalized with their first significant component
/// positive.
pub fn spectrum(matrix: &DMatrix<f64>) -> LinearizationReport {
    let n = matrix.nrows();
    let eigen = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let eigenvectors: Vec<SpectralField> = order
        .iter()
        .map(|&i| {
            let column = eigen.eigenvectors.column(i);
            let norm = column.norm();
            let peak = column.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let lead = column
                .iter()
                .find(|v| v.abs() > 1e-10 * peak)
                .copied()
                .unwrap_or(1.0);
            let scale = if lead < 0.0 { -1.0 / norm } else { 1.0 / norm };
            SpectralField::from_vec_unchecked(column.iter().map(|v| v * scale).collect())
        })
        .collect();
    let zero_counts = eigenvectors.iter().map(count_zeros).collect();
    let morse_index = eigenvalues
        .iter()
        .filter(|&&mu| mu > ZERO_TOLERANCE)
        .count();
    let margin = eigenvalues.first().copied().unwrap_or(f64::NEG_INFINITY);
    LinearizationReport {
        eigenvalues,
        eigenvectors,
        morse_index,
        margin,
        zero_counts,
    }
}

/// Closed-form spectrum `μ_k = −k² + λ + b(1 − h_k)` of the controlled
/// linearization about `u = 0`, for `k = 1..=modes`.
pub fn theorem_spectrum(lambda: f64, gain: f64, kernel: &FilterKernel, modes: usize) -> Vec<f64> {
    let params = ControlParams::new(gain, kernel.clone());
    (1..=modes)
        .map(|k| params.linear_symbol(k, lambda))
        .collect()
}

/// Stability of `u_star` under the controlled dynamics.
///
/// The verdict only applies when the control leaves `u_star` an equilibrium,
/// so an invasive kernel is an error rather than a verdict.
pub fn verdict(
    u_star: &SpectralField,
    lambda: f64,
    params: &ControlParams,
    modes: usize,
) -> Result<Verdict, StabilityError> {
    if !u_star.is_zero() {
        let norm = sobolev_norm(&params.control_term(u_star), 0.0);
        if !(norm < NONINVASIVE_TOLERANCE) {
            return Err(StabilityError::InvasiveControl { norm });
        }
    }
    let report = spectrum(&assemble(u_star, lambda, params, modes));
    Ok(if report.margin < -ZERO_TOLERANCE {
        Verdict::Stable {
            margin: report.margin,
        }
    } else {
        Verdict::Unstable {
            morse_index: report.morse_index,
            margin: report.margin,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn trivial_state_is_diagonal() {
        let m = assemble(
            &SpectralField::zeros(5),
            10.0,
            &ControlParams::uncontrolled(5),
            5,
        );
        for r in 0..5 {
            for c in 0..5 {
                let k = (r + 1) as f64;
                let expected = if r == c { 10.0 - k * k } else { 0.0 };
                assert_eq!(m[(r, c)], expected);
            }
        }
        let p = ControlParams::new(-2.0, FilterKernel::theorem(4.0, 6));
        let m = assemble(&SpectralField::zeros(6), 4.0, &p, 6);
        assert_eq!(m[(0, 0)], -1.0 + 4.0 - 4.0);
        assert_eq!(m[(2, 2)], -9.0 + 4.0);
        assert!(m.iter().enumerate().all(|(i, v)| i % 7 == 0 || *v == 0.0));
    }

    #[test]
    fn coupling_of_single_mode_matches_quadrature() {
        // W_11 for u = sin x is (2/π)∫ sin⁴x dx = 3/4.
        let u = SpectralField::mode(1, 1, 1.0);
        let lambda = 1.0;
        let m = assemble(&u, lambda, &ControlParams::uncontrolled(4), 4);
        let w11 = -(m[(0, 0)] - (lambda - 1.0)) / (3.0 * lambda);
        assert!((w11 - 0.75).abs() < 1e-14);

        // Independent midpoint quadrature of every W_km.
        let panels = 4000;
        let h = PI / panels as f64;
        for k in 1..=4 {
            for mm in 1..=4 {
                let mut acc = 0.0;
                for i in 0..panels {
                    let x = (i as f64 + 0.5) * h;
                    let s = libm::sin(x);
                    acc += s * s * libm::sin(k as f64 * x) * libm::sin(mm as f64 * x);
                }
                let w = 2.0 / PI * acc * h;
                let diag = if k == mm {
                    lambda - (k * k) as f64
                } else {
                    0.0
                };
                let from_matrix = -(m[(k - 1, mm - 1)] - diag) / (3.0 * lambda);
                assert!((from_matrix - w).abs() < 1e-10, "k={k} m={mm}");
            }
        }
    }

    #[test]
    fn diagonal_spectra() {
        let m = assemble(
            &SpectralField::zeros(3),
            0.0,
            &ControlParams::uncontrolled(3),
            3,
        );
        let report = spectrum(&m);
        assert_eq!(report.eigenvalues, [-1.0, -4.0, -9.0]);
        assert_eq!(report.morse_index, 0);
        assert_eq!(report.zero_counts, [0, 1, 2]);

        let report = spectrum(&assemble(
            &SpectralField::zeros(8),
            10.0,
            &ControlParams::uncontrolled(8),
            8,
        ));
        assert_eq!(report.morse_index, 3);
    }

    #[test]
    fn closed_form_spectrum() {
        let mu = theorem_spectrum(1.0, -1.5, &FilterKernel::theorem(1.0, 4), 4);
        assert_eq!(mu, [-3.0, -3.0, -8.0, -15.0]);
        let mu = theorem_spectrum(4.0, -3.0, &FilterKernel::theorem(4.0, 4), 4);
        assert_eq!(mu, [-3.0, -6.0, -5.0, -12.0]);
        let mu = theorem_spectrum(7.0, 0.0, &FilterKernel::theorem(7.0, 3), 3);
        assert_eq!(mu, [6.0, 3.0, -2.0]);
    }

    #[test]
    fn invasive_control_is_refused() {
        let u = SpectralField::mode(4, 2, 0.3);
        let p = ControlParams::new(-4.0, FilterKernel::theorem(4.5, 4));
        assert!(matches!(
            verdict(&u, 4.5, &p, 4),
            Err(StabilityError::InvasiveControl { .. })
        ));
        // The trivial state is preserved by any kernel.
        assert!(verdict(&SpectralField::zeros(4), 0.5, &p, 4)
            .unwrap()
            .is_stable());
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(recommended_truncation(0.0), 32);
        assert_eq!(recommended_truncation(10.0), 48);
        assert_eq!(recommended_truncation(30.0), 56);
    }
}
