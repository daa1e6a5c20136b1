//! Sine-series fields on `(0, π)` with homogeneous Dirichlet conditions.
//!
//! A field is stored as its coefficients `a_1..a_N` in the expansion
//! `u(x) = Σ a_k sin(kx)`, with `a_k = (2/π) ∫₀^π u(x) sin(kx) dx`. Physical
//! samples live on the interior grid `x_i = iπ/(M+1)`, `i = 1..M`, which is
//! the natural grid of the type-I discrete sine transform.
//!
//! The cubic nonlinearity is evaluated pseudo-spectrally on a padded grid of
//! `4N` interior points, so every mode up to `3N` of `u³` is exact.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Neg, Sub};

/// Smallest normalizer used by relative residuals.
const NORM_FLOOR: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("a spectral field needs at least one mode")]
    Empty,
    #[error("coefficient a_{index} is not finite")]
    NonFinite { index: usize },
    #[error("cannot resolve {modes} modes from {samples} grid samples")]
    Truncation { modes: usize, samples: usize },
}

/// Truncated sine-coefficient vector; `coeffs[k - 1]` holds `a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, SpectralError> {
        if coeffs.is_empty() {
            return Err(SpectralError::Empty);
        }
        if let Some(i) = coeffs.iter().position(|a| !a.is_finite()) {
            return Err(SpectralError::NonFinite { index: i + 1 });
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            coeffs: vec![0.0; modes.max(1)],
        }
    }

    /// `amplitude · sin(kx)` in a field with `modes` coefficients.
    pub fn mode(modes: usize, k: usize, amplitude: f64) -> Self {
        let mut field = Self::zeros(modes.max(k));
        field.coeffs[k - 1] = amplitude;
        field
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<f64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient `a_k` (1-based); zero outside the stored range.
    pub fn coeff(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.coeffs.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, k: usize, value: f64) {
        self.coeffs[k - 1] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0.0)
    }

    /// Zero-pads or truncates to exactly `modes` coefficients.
    pub fn resized(&self, modes: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(modes.max(1), 0.0);
        Self { coeffs }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * factor).collect(),
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let n = self.truncation().max(other.truncation());
        let coeffs = (1..=n).map(|k| op(self.coeff(k), other.coeff(k))).collect();
        Self { coeffs }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

/// Point values `u(x_i)` on the interior grid `x_i = iπ/(M+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    values: Vec<f64>,
}

impl GridSamples {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    /// Abscissa of the `i`-th sample, `i` in `1..=M`.
    pub fn abscissa(&self, i: usize) -> f64 {
        grid_point(i, self.values.len())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `iπ/(M+1)` for the `M`-point interior grid.
pub fn grid_point(i: usize, points: usize) -> f64 {
    i as f64 * PI / (points + 1) as f64
}

/// Type-I sine/cosine transform tables for an `M`-point interior grid.
///
/// With `P = M + 1` intervals every product `k·i` reduces modulo `2P`, so a
/// single table of `2P` values serves all modes.
#[derive(Debug, Clone)]
pub struct SineGrid {
    intervals: usize,
    sin_table: Vec<f64>,
    cos_table: Vec<f64>,
}

impl SineGrid {
    pub fn new(points: usize) -> Self {
        let intervals = points.max(1) + 1;
        let period = 2 * intervals;
        let step = PI / intervals as f64;
        let sin_table = (0..period).map(|n| libm::sin(n as f64 * step)).collect();
        let cos_table = (0..period).map(|n| libm::cos(n as f64 * step)).collect();
        Self {
            intervals,
            sin_table,
            cos_table,
        }
    }

    /// Grid sized for alias-free cubing of `modes` coefficients.
    pub fn dealiased(modes: usize) -> Self {
        Self::new(4 * modes.max(1))
    }

    pub fn points(&self) -> usize {
        self.intervals - 1
    }

    /// `out[i-1] = Σ_k coeffs[k-1] sin(k x_i)`.
    pub fn synthesize_into(&self, coeffs: &[f64], out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.points());
        out.iter_mut().for_each(|v| *v = 0.0);
        let period = 2 * self.intervals;
        for (k, &a) in coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let k = (k + 1) % period;
            let mut idx = 0;
            for v in out.iter_mut() {
                idx += k;
                if idx >= period {
                    idx -= period;
                }
                *v += a * self.sin_table[idx];
            }
        }
    }

    /// `out[k-1] = (2/P) Σ_i values[i-1] sin(k x_i)` for `k = 1..=out.len()`.
    ///
    /// This is the trapezoidal rule for `(2/π)∫ u sin(kx) dx` with the
    /// boundary values `u(0) = u(π) = 0`; it is exact for sine polynomials
    /// of degree below `2P - k`.
    pub fn analyze_into(&self, values: &[f64], out: &mut [f64]) {
        self.project(values, out, &self.sin_table, 1);
    }

    /// `out[n] = (2/P) Σ_i values[i-1] cos(n x_i)` for `n = 0..out.len()`.
    ///
    /// For `values` that vanish at both ends this is the trapezoidal rule for
    /// `(2/π)∫ v cos(nx) dx`.
    pub fn cosine_coefficients_into(&self, values: &[f64], out: &mut [f64]) {
        self.project(values, out, &self.cos_table, 0);
    }

    fn project(&self, values: &[f64], out: &mut [f64], table: &[f64], first: usize) {
        debug_assert_eq!(values.len(), self.points());
        let period = 2 * self.intervals;
        let scale = 2.0 / self.intervals as f64;
        for (offset, slot) in out.iter_mut().enumerate() {
            let k = (offset + first) % period;
            let mut idx = 0;
            let mut acc = 0.0;
            for &v in values {
                idx += k;
                if idx >= period {
                    idx -= period;
                }
                acc += v * table[idx];
            }
            *slot = scale * acc;
        }
    }
}

/// Samples `field` on the `points`-point interior grid.
pub fn synthesize(field: &SpectralField, points: usize) -> GridSamples {
    let points = points.max(1);
    let grid = SineGrid::new(points);
    let mut values = vec![0.0; points];
    grid.synthesize_into(field.coeffs(), &mut values);
    GridSamples { values }
}

/// Discrete sine transform of grid samples, keeping `modes` coefficients.
pub fn analyze(samples: &GridSamples, modes: usize) -> Result<SpectralField, SpectralError> {
    if modes == 0 {
        return Err(SpectralError::Empty);
    }
    if modes > samples.points() {
        return Err(SpectralError::Truncation {
            modes,
            samples: samples.points(),
        });
    }
    let grid = SineGrid::new(samples.points());
    let mut coeffs = vec![0.0; modes];
    grid.analyze_into(samples.values(), &mut coeffs);
    SpectralField::new(coeffs)
}

/// Coefficient-weighted Sobolev norm `(Σ (1+k²)^s a_k²)^{1/2}`.
///
/// This differs from the integral `L²` norm by the constant `√(π/2)` at
/// `s = 0`; all operator bounds in this crate are stated in this norm.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> f64 {
    let sum: f64 = field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let k = (i + 1) as f64;
            let weight = if s == 0.0 {
                1.0
            } else {
                libm::pow(1.0 + k * k, s)
            };
            weight * a * a
        })
        .sum();
    libm::sqrt(sum)
}

/// Reusable workspace for the dealiased cube `u ↦ u³`.
#[derive(Debug, Clone)]
pub struct Dealiaser {
    modes: usize,
    grid: SineGrid,
    values: Vec<f64>,
}

impl Dealiaser {
    pub fn new(modes: usize) -> Self {
        let grid = SineGrid::dealiased(modes);
        let values = vec![0.0; grid.points()];
        Self {
            modes: modes.max(1),
            grid,
            values,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Writes the first `out.len()` sine coefficients of `u³` and returns
    /// the sup-norm of `u` over the padded grid.
    pub fn cube_into(&mut self, coeffs: &[f64], out: &mut [f64]) -> f64 {
        debug_assert!(coeffs.len() <= self.modes && out.len() <= 3 * self.modes);
        self.grid.synthesize_into(coeffs, &mut self.values);
        let mut sup = 0.0_f64;
        for v in self.values.iter_mut() {
            sup = sup.max(v.abs());
            *v = *v * *v * *v;
        }
        self.grid.analyze_into(&self.values, out);
        sup
    }

    pub fn cube(&mut self, field: &SpectralField) -> SpectralField {
        let field = if field.truncation() > self.modes {
            field.resized(self.modes)
        } else {
            field.clone()
        };
        let mut out = vec![0.0; field.truncation()];
        self.cube_into(field.coeffs(), &mut out);
        SpectralField::from_vec_unchecked(out)
    }

    /// Cosine coefficients `c_n = (2/π)∫ u² cos(nx) dx` for `n = 0..count`.
    ///
    /// Exact while `2·truncation(u) + count ≤ 8·modes`.
    pub fn square_cosine_coefficients(&mut self, coeffs: &[f64], count: usize) -> Vec<f64> {
        self.grid.synthesize_into(coeffs, &mut self.values);
        for v in self.values.iter_mut() {
            *v *= *v;
        }
        let mut out = vec![0.0; count];
        self.grid.cosine_coefficients_into(&self.values, &mut out);
        out
    }
}

/// Sine coefficients of `u³`, truncated to the input's `N` modes.
pub fn cube(field: &SpectralField) -> SpectralField {
    Dealiaser::new(field.truncation()).cube(field)
}

/// As [`cube`], also returning the energy `Σ_{k=N+1}^{3N} b_k²` of the
/// discarded modes of `u³`.
pub fn cube_with_tail(field: &SpectralField) -> (SpectralField, f64) {
    let n = field.truncation();
    let mut dealiaser = Dealiaser::new(n);
    let mut full = vec![0.0; 3 * n];
    dealiaser.cube_into(field.coeffs(), &mut full);
    let tail = full[n..].iter().map(|b| b * b).sum();
    full.truncate(n);
    (SpectralField::from_vec_unchecked(full), tail)
}

/// Spatial reflection `x ↦ π − x`, i.e. `a_k ↦ (−1)^{k+1} a_k`.
pub fn reflect(field: &SpectralField) -> SpectralField {
    let coeffs = field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| if i % 2 == 0 { a } else { -a })
        .collect();
    SpectralField::from_vec_unchecked(coeffs)
}

/// Whether mode `k` spans part of the vertex space `X_j`, i.e. `k = jℓ`
/// with `ℓ` odd.
pub fn is_vertex_mode(k: usize, j: usize) -> bool {
    j > 0 && k.is_multiple_of(j) && (k / j) % 2 == 1
}

/// Whether mode `k` is a multiple of `j` (the larger space `X̃_j`).
pub fn is_extended_vertex_mode(k: usize, j: usize) -> bool {
    j > 0 && k.is_multiple_of(j)
}

/// Orthogonal projection onto `X_j`.
pub fn project_vertex(field: &SpectralField, j: usize) -> SpectralField {
    let coeffs = field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| if is_vertex_mode(i + 1, j) { a } else { 0.0 })
        .collect();
    SpectralField::from_vec_unchecked(coeffs)
}

/// Relative size of the part of `field` outside `X_j`.
pub fn vertex_residual(field: &SpectralField, j: usize) -> f64 {
    let outside = field - &project_vertex(field, j);
    sobolev_norm(&outside, 0.0) / sobolev_norm(field, 0.0).max(NORM_FLOOR)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(rng: &mut ChaCha8Rng, n: usize) -> SpectralField {
        SpectralField::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    /// Composite Simpson rule for `(2/π)∫₀^π g(x) dx`.
    fn simpson(g: impl Fn(f64) -> f64, panels: usize) -> f64 {
        let h = PI / panels as f64;
        let mut acc = g(0.0) + g(PI);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * g(i as f64 * h);
        }
        2.0 / PI * acc * h / 3.0
    }

    fn eval(field: &SpectralField, x: f64) -> f64 {
        field
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| a * libm::sin((i + 1) as f64 * x))
            .sum()
    }

    #[test]
    fn rejects_bad_fields() {
        assert_eq!(SpectralField::new(vec![]), Err(SpectralError::Empty));
        assert_eq!(
            SpectralField::new(vec![0.0, f64::NAN]),
            Err(SpectralError::NonFinite { index: 2 })
        );
    }

    #[test]
    fn synthesize_single_modes() {
        let u = synthesize(&SpectralField::mode(1, 1, 1.0), 1);
        assert!((u.values()[0] - 1.0).abs() < 1e-15);
        let u = synthesize(&SpectralField::mode(2, 2, 1.0), 1);
        assert!(u.values()[0].abs() < 1e-15);
    }

    #[test]
    fn analyze_pure_mode_and_zero() {
        let values = (1..=16)
            .map(|i| libm::sin(3.0 * grid_point(i, 16)))
            .collect();
        let f = analyze(&GridSamples::new(values), 8).unwrap();
        for k in 1..=8 {
            let expected = if k == 3 { 1.0 } else { 0.0 };
            assert!((f.coeff(k) - expected).abs() < 1e-12, "k={k}");
        }
        let zero = analyze(&GridSamples::new(vec![0.0; 16]), 8).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn analyze_rejects_overlong_truncation() {
        let err = analyze(&GridSamples::new(vec![0.0; 4]), 5).unwrap_err();
        assert_eq!(
            err,
            SpectralError::Truncation {
                modes: 5,
                samples: 4
            }
        );
    }

    #[test]
    fn analyze_parabola_matches_quadrature() {
        let m = 2047;
        let values = (1..=m)
            .map(|i| {
                let x = grid_point(i, m);
                x * (PI - x)
            })
            .collect();
        let f = analyze(&GridSamples::new(values), 16).unwrap();
        for k in 1..=16 {
            let kf = k as f64;
            let oracle = simpson(|x| x * (PI - x) * libm::sin(kf * x), 20_000);
            assert!(
                (f.coeff(k) - oracle).abs() < 1e-8,
                "k={k}: {} vs {oracle}",
                f.coeff(k)
            );
        }
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 5, 16, 33] {
            let f = random_field(&mut rng, n);
            let back = analyze(&synthesize(&f, 4 * n), n).unwrap();
            for k in 1..=n {
                assert!((back.coeff(k) - f.coeff(k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sobolev_norm_values() {
        assert_eq!(sobolev_norm(&SpectralField::mode(1, 1, 1.0), 0.0), 1.0);
        assert!((sobolev_norm(&SpectralField::mode(1, 1, 1.0), 2.0) - 2.0).abs() < 1e-15);
        let f = SpectralField::new(vec![1.0, 1.0]).unwrap();
        assert!((sobolev_norm(&f, 1.0) - libm::sqrt(7.0)).abs() < 1e-15);
    }

    #[test]
    fn cube_triple_angle() {
        let c = cube(&SpectralField::mode(3, 1, 1.0));
        assert!((c.coeff(1) - 0.75).abs() < 1e-15);
        assert!(c.coeff(2).abs() < 1e-15);
        assert!((c.coeff(3) + 0.25).abs() < 1e-15);

        let c = cube(&SpectralField::mode(6, 2, 1.0));
        assert!((c.coeff(2) - 0.75).abs() < 1e-15);
        assert!((c.coeff(6) + 0.25).abs() < 1e-15);
        for k in [1, 3, 4, 5] {
            assert!(c.coeff(k).abs() < 1e-15);
        }
    }

    #[test]
    fn cube_tail_energy() {
        // sin³x truncated at N = 1 drops −¼ sin 3x.
        let (c, tail) = cube_with_tail(&SpectralField::mode(1, 1, 1.0));
        assert!((c.coeff(1) - 0.75).abs() < 1e-15);
        assert!((tail - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn cube_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_field(&mut rng, 16);
        let c = cube(&f);
        for k in 1..=16 {
            let kf = k as f64;
            let oracle = simpson(|x| libm::pow(eval(&f, x), 3.0) * libm::sin(kf * x), 4000);
            assert!((c.coeff(k) - oracle).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn reflection_rules() {
        assert_eq!(reflect(&SpectralField::mode(1, 1, 1.0)).coeff(1), 1.0);
        assert_eq!(reflect(&SpectralField::mode(2, 2, 1.0)).coeff(2), -1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_field(&mut rng, 9);
        assert_eq!(reflect(&reflect(&f)), f);
    }

    #[test]
    fn vertex_projection() {
        let f = SpectralField::new(vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0]).unwrap();
        let p = project_vertex(&f, 2);
        assert_eq!(p.coeffs(), &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let g = SpectralField::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(project_vertex(&g, 1).coeffs(), &[1.0, 0.0, 1.0]);
        assert_eq!(project_vertex(&p, 2), p);
    }

    #[test]
    fn vertex_residual_values() {
        let f = SpectralField::new(vec![0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(vertex_residual(&f, 2), 0.0);
        let g = SpectralField::new(vec![1.0, 1.0]).unwrap();
        assert!((vertex_residual(&g, 2) - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(vertex_residual(&SpectralField::zeros(4), 3), 0.0);
    }
}
