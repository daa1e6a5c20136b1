//! Equilibria of `u_xx + λu(1 − u²) = 0` on `(0, π)` with Dirichlet
//! conditions, and their pitchfork branches.
//!
//! Nontrivial equilibria are located by shooting on the initial slope
//! `u'(0)`, transferred to the sine basis, and polished by Newton's method on
//! the truncated spectral residual. The `j`-th branch bifurcates from the
//! trivial state where `sin(jx)` loses stability, at `λ_j = j²`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DVector;

use crate::control::{ControlParams, Sign};
use crate::spectral::{
    analyze, grid_point, sobolev_norm, synthesize, Dealiaser, GridSamples, SineGrid, SpectralField,
};
use crate::stability::{assemble, spectrum, ZERO_TOLERANCE};

/// Local error tolerance of the shooting integrator.
const SHOOT_TOLERANCE: f64 = 1e-10;
/// Terminal value accepted as `u(π) = 0`.
const TERMINAL_TOLERANCE: f64 = 1e-10;
/// Shooting trajectories leaving `|u| ≤ BLOWUP_BOUND` are abandoned.
const BLOWUP_BOUND: f64 = 10.0;
const SLOPE_SWEEP: usize = 64;

pub const NEWTON_TOLERANCE: f64 = 1e-10;
pub const NEWTON_MAX_ITERATIONS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EquilibriumError {
    #[error("no branch {j} at lambda = {lambda}: it bifurcates at {threshold}")]
    NoBranch {
        j: usize,
        lambda: f64,
        threshold: f64,
    },
    #[error("no slope bracket found for branch {j} at lambda = {lambda}")]
    BracketFailure { j: usize, lambda: f64 },
    #[error("shooting trajectory left |u| <= 10 at x = {x} (slope {slope})")]
    IntegrationBlowup { slope: f64, x: f64 },
    #[error("Newton iteration did not converge at lambda = {lambda} (residual {residual:e})")]
    NoConvergence { lambda: f64, residual: f64 },
    #[error("solution for branch {j} has {zeros} interior zeros instead of {expected}")]
    WrongBranch {
        j: usize,
        zeros: usize,
        expected: usize,
    },
}

/// How bifurcation values are reported.
///
/// `Eigen` uses the Dirichlet eigenvalues `j²` of `−∂xx` on `(0, π)`, which
/// is where branches actually emanate. `PaperLiteral` uses `j²π²`, the
/// eigenvalues on an interval of unit length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaConvention {
    #[default]
    Eigen,
    PaperLiteral,
}

impl LambdaConvention {
    pub fn bifurcation_value(self, j: usize) -> f64 {
        match self {
            LambdaConvention::Eigen => bifurcation_value(j),
            LambdaConvention::PaperLiteral => bifurcation_value(j) * PI * PI,
        }
    }
}

/// `λ_j = j²`, the parameter where the branch through `sin(jx)` appears.
pub fn bifurcation_value(j: usize) -> f64 {
    (j * j) as f64
}

/// Number of unstable directions of the trivial state at `lambda`.
pub fn trivial_morse_index(lambda: f64) -> usize {
    (1..)
        .take_while(|&k| lambda - bifurcation_value(k) > ZERO_TOLERANCE)
        .count()
}

/// Outcome of one shot from `u(0) = 0, u'(0) = slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingState {
    pub slope: f64,
    pub terminal_value: f64,
    pub zero_count: usize,
}

// Dormand–Prince 5(4) tableau; the system is autonomous, so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn rhs(lambda: f64, y: [f64; 2]) -> [f64; 2] {
    [y[1], -lambda * y[0] * (1.0 - y[0] * y[0])]
}

/// Integrates the equilibrium ODE across `[0, π]`, landing exactly on each
/// abscissa in `stops` (ascending, inside `(0, π]`) and reporting `u` there.
fn integrate(
    lambda: f64,
    slope: f64,
    stops: &[f64],
    mut visit: impl FnMut(usize, f64),
) -> Result<ShootingState, EquilibriumError> {
    let max_step = PI / 64.0;
    let mut x = 0.0;
    let mut y = [0.0, slope];
    let mut h = 1e-3_f64.min(max_step);
    let mut next_stop = 0;
    let mut last_sign = 0.0_f64;
    let mut zeros = 0;
    let mut k = [[0.0; 2]; 7];

    if slope == 0.0 {
        for i in 0..stops.len() {
            visit(i, 0.0);
        }
        return Ok(ShootingState {
            slope,
            terminal_value: 0.0,
            zero_count: 0,
        });
    }

    k[0] = rhs(lambda, y);
    while x < PI {
        let target = stops.get(next_stop).copied().unwrap_or(PI).min(PI);
        let mut step = h.min(target - x);
        let landing = step == target - x;
        if step <= 0.0 {
            step = target - x;
        }
        for s in 1..7 {
            let mut ys = y;
            for (r, kr) in k.iter().enumerate().take(s) {
                ys[0] += step * A[s][r] * kr[0];
                ys[1] += step * A[s][r] * kr[1];
            }
            k[s] = rhs(lambda, ys);
        }
        let mut y_new = y;
        for (r, kr) in k.iter().enumerate().take(6) {
            y_new[0] += step * A[6][r] * kr[0];
            y_new[1] += step * A[6][r] * kr[1];
        }
        let mut err = 0.0_f64;
        for comp in 0..2 {
            let e: f64 = (0..7).map(|r| ERR[r] * k[r][comp]).sum::<f64>() * step;
            let scale = SHOOT_TOLERANCE * (1.0 + y[comp].abs().max(y_new[comp].abs()));
            err = err.max(e.abs() / scale);
        }
        if err > 1.0 {
            h = step * (0.9 * libm::pow(err, -0.2)).max(0.2);
            continue;
        }

        x = if landing { target } else { x + step };
        y = y_new;
        // FSAL: the last stage is the derivative at the new point.
        k[0] = k[6];
        if y[0].abs() > BLOWUP_BOUND {
            return Err(EquilibriumError::IntegrationBlowup { slope, x });
        }
        if landing && next_stop < stops.len() {
            visit(next_stop, y[0]);
            next_stop += 1;
        }
        if x < PI && y[0] != 0.0 {
            let sign = y[0].signum();
            if last_sign != 0.0 && sign != last_sign {
                zeros += 1;
            }
            last_sign = sign;
        }
        let grow = if err == 0.0 {
            5.0
        } else {
            (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
        };
        h = (step * grow).min(max_step);
    }
    Ok(ShootingState {
        slope,
        terminal_value: y[0],
        zero_count: zeros,
    })
}

/// Solves `u'' = −λu(1 − u²)`, `u(0) = 0`, `u'(0) = slope` across `[0, π]`.
pub fn shoot(lambda: f64, slope: f64) -> Result<ShootingState, EquilibriumError> {
    integrate(lambda, slope, &[], |_, _| {})
}

/// Whether the shot at `slope` has at least `j` zeros in `(0, π]`. This is
/// monotone in the slope: larger amplitudes oscillate more slowly.
fn reaches_zero(lambda: f64, slope: f64, j: usize) -> (bool, Option<ShootingState>) {
    match shoot(lambda, slope) {
        Err(_) => (false, None),
        Ok(state) => {
            let expected_sign = if (j - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            let crossed = state.zero_count >= j
                || (state.zero_count == j - 1 && state.terminal_value * expected_sign <= 0.0);
            (crossed, Some(state))
        }
    }
}

/// Slope `u'(0) > 0` of the equilibrium on branch `j`.
fn bracket_slope(lambda: f64, j: usize) -> Result<f64, EquilibriumError> {
    let failure = EquilibriumError::BracketFailure { j, lambda };
    let slope_max = libm::sqrt(lambda);
    let sweep = (1..=SLOPE_SWEEP).map(|i| slope_max * i as f64 / SLOPE_SWEEP as f64);
    let mut lo = None;
    let mut hi = None;
    for s in sweep {
        if reaches_zero(lambda, s, j).0 {
            lo = Some(s);
        } else {
            hi = Some(s);
            break;
        }
    }
    let (mut lo, mut hi) = match (lo, hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(failure),
    };

    let mut best: Option<(f64, f64)> = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (crossed, state) = reaches_zero(lambda, mid, j);
        if let Some(st) = state.filter(|st| st.zero_count == j - 1) {
            let miss = st.terminal_value.abs();
            if best.is_none_or(|(_, m)| miss < m) {
                best = Some((mid, miss));
            }
            if miss < TERMINAL_TOLERANCE {
                return Ok(mid);
            }
        }
        if crossed {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best.map(|(s, _)| s).ok_or(failure)
}

/// The equilibrium on branch `j` at `lambda` with `sign · u'(0) > 0`, as a
/// field with `modes` sine coefficients.
pub fn find_equilibrium(
    lambda: f64,
    j: usize,
    sign: Sign,
    modes: usize,
) -> Result<SpectralField, EquilibriumError> {
    let threshold = bifurcation_value(j);
    if j == 0 || !(lambda > threshold) {
        return Err(EquilibriumError::NoBranch {
            j,
            lambda,
            threshold,
        });
    }
    let slope = bracket_slope(lambda, j)?;

    let points = SineGrid::dealiased(modes).points();
    let stops: Vec<f64> = (1..=points).map(|i| grid_point(i, points)).collect();
    let mut values = vec![0.0; points];
    integrate(lambda, slope, &stops, |i, u| values[i] = u)?;
    let seed = analyze(&GridSamples::new(values), modes)
        .map_err(|_| EquilibriumError::BracketFailure { j, lambda })?;
    let seed = seed.scaled(sign.value());

    let solution = refine_newton(&seed, lambda)?;
    let zeros = count_zeros(&solution);
    if zeros != j - 1 {
        return Err(EquilibriumError::WrongBranch {
            j,
            zeros,
            expected: j - 1,
        });
    }
    Ok(solution)
}

/// Spectral residual `−k²a_k + λa_k − λ(u³)_k` of the equilibrium equation.
pub fn residual(field: &SpectralField, lambda: f64) -> SpectralField {
    let mut dealiaser = Dealiaser::new(field.truncation());
    residual_with(&mut dealiaser, field, lambda)
}

fn residual_with(dealiaser: &mut Dealiaser, field: &SpectralField, lambda: f64) -> SpectralField {
    let cubed = dealiaser.cube(field);
    let coeffs = field
        .coeffs()
        .iter()
        .zip(cubed.coeffs())
        .enumerate()
        .map(|(i, (a, c))| {
            let k = (i + 1) as f64;
            (lambda - k * k) * a - lambda * c
        })
        .collect();
    SpectralField::from_vec_unchecked(coeffs)
}

/// Newton's method on the truncated spectral residual, with the Jacobian
/// taken from the uncontrolled linearization.
pub fn refine_newton(
    field: &SpectralField,
    lambda: f64,
) -> Result<SpectralField, EquilibriumError> {
    let modes = field.truncation();
    let mut dealiaser = Dealiaser::new(modes);
    let uncontrolled = ControlParams::uncontrolled(modes);
    let mut u = field.clone();
    let mut norm = f64::INFINITY;
    for iteration in 0..=NEWTON_MAX_ITERATIONS {
        let r = residual_with(&mut dealiaser, &u, lambda);
        norm = sobolev_norm(&r, 0.0);
        if norm < NEWTON_TOLERANCE {
            return Ok(u);
        }
        if iteration == NEWTON_MAX_ITERATIONS || !norm.is_finite() {
            break;
        }
        let jacobian = assemble(&u, lambda, &uncontrolled, modes);
        let rhs = DVector::from_iterator(modes, r.coeffs().iter().map(|v| -v));
        let Some(delta) = jacobian.lu().solve(&rhs) else {
            break;
        };
        let next: Vec<f64> = u
            .coeffs()
            .iter()
            .zip(delta.iter())
            .map(|(a, d)| a + d)
            .collect();
        u = SpectralField::from_vec_unchecked(next);
    }
    Err(EquilibriumError::NoConvergence {
        lambda,
        residual: norm,
    })
}

/// Number of strict sign changes of `u` over the interior grid of `16N`
/// points.
pub fn count_zeros(field: &SpectralField) -> usize {
    let samples = synthesize(field, 16 * field.truncation());
    let mut last = 0.0_f64;
    let mut zeros = 0;
    for &v in samples.values() {
        if v == 0.0 {
            continue;
        }
        let sign = v.signum();
        if last != 0.0 && sign != last {
            zeros += 1;
        }
        last = sign;
    }
    zeros
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchSample {
    pub lambda: f64,
    pub field: SpectralField,
    pub morse_index: usize,
    pub sign: Sign,
}

/// Samples of the pitchfork branch `Γ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumBranch {
    pub j: usize,
    pub samples: Vec<BranchSample>,
}

impl EquilibriumBranch {
    /// The other half of the pitchfork, `u ↦ −u`.
    pub fn mirrored(&self) -> Self {
        let samples = self
            .samples
            .iter()
            .map(|s| BranchSample {
                lambda: s.lambda,
                field: -&s.field,
                morse_index: s.morse_index,
                sign: s.sign.flip(),
            })
            .collect();
        Self { j: self.j, samples }
    }
}

/// Natural-parameter continuation of branch `j` over `steps` equal
/// increments from `lambda_from` to `lambda_to`.
pub fn continue_branch(
    j: usize,
    lambda_from: f64,
    lambda_to: f64,
    steps: usize,
    modes: usize,
) -> Result<EquilibriumBranch, EquilibriumError> {
    let threshold = bifurcation_value(j);
    for lambda in [lambda_from, lambda_to] {
        if !(lambda > threshold) {
            return Err(EquilibriumError::NoBranch {
                j,
                lambda,
                threshold,
            });
        }
    }
    let uncontrolled = ControlParams::uncontrolled(modes);
    let mut samples: Vec<BranchSample> = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let lambda = if steps == 0 {
            lambda_from
        } else {
            lambda_from + (lambda_to - lambda_from) * i as f64 / steps as f64
        };
        let field = match samples.as_slice() {
            [] => find_equilibrium(lambda, j, Sign::Plus, modes)?,
            [prev] => refine_newton(&prev.field, lambda)?,
            [.., before, prev] => {
                // Secant predictor along the branch.
                let w = (lambda - prev.lambda) / (prev.lambda - before.lambda);
                let guess = &prev.field + &(&(&prev.field - &before.field) * w);
                refine_newton(&guess, lambda).or_else(|_| refine_newton(&prev.field, lambda))?
            }
        };
        let morse_index = spectrum(&assemble(&field, lambda, &uncontrolled, modes)).morse_index;
        samples.push(BranchSample {
            lambda,
            field,
            morse_index,
            sign: Sign::Plus,
        });
    }
    Ok(EquilibriumBranch { j, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{reflect, vertex_residual};

    /// One-mode Galerkin amplitude: a_1² = 4(λ − 1)/(3λ).
    fn galerkin_amplitude(lambda: f64) -> f64 {
        libm::sqrt(4.0 * (lambda - 1.0) / (3.0 * lambda))
    }

    #[test]
    fn bifurcation_values() {
        assert_eq!(bifurcation_value(1), 1.0);
        assert_eq!(bifurcation_value(3), 9.0);
        assert_eq!(bifurcation_value(5), 25.0);
        assert!((LambdaConvention::PaperLiteral.bifurcation_value(1) - PI * PI).abs() < 1e-15);
        assert_eq!(trivial_morse_index(10.0), 3);
        assert_eq!(trivial_morse_index(0.5), 0);
        assert_eq!(trivial_morse_index(4.0), 1);
    }

    #[test]
    fn zero_slope_is_trivial() {
        let st = shoot(3.0, 0.0).unwrap();
        assert_eq!(st.terminal_value, 0.0);
        assert_eq!(st.zero_count, 0);
    }

    #[test]
    fn shooting_root_at_lambda_two() {
        let slope = bracket_slope(2.0, 1).unwrap();
        let st = shoot(2.0, slope).unwrap();
        assert!(st.terminal_value.abs() < 1e-9);
        assert_eq!(st.zero_count, 0);
    }

    #[test]
    fn no_root_below_first_bifurcation() {
        // Shots either stay positive or escape past u = 1 and blow up.
        for i in 1..=20 {
            match shoot(0.5, i as f64 / 20.0) {
                Ok(st) => assert!(st.terminal_value > 0.0, "slope {}", i as f64 / 20.0),
                Err(e) => assert!(matches!(e, EquilibriumError::IntegrationBlowup { .. })),
            }
        }
    }

    #[test]
    fn steep_shots_blow_up() {
        assert!(matches!(
            shoot(4.0, 3.0),
            Err(EquilibriumError::IntegrationBlowup { .. })
        ));
    }

    #[test]
    fn first_branch_near_galerkin_estimate() {
        let u = find_equilibrium(2.0, 1, Sign::Plus, 32).unwrap();
        let oracle = galerkin_amplitude(2.0);
        assert!((oracle - 0.816_496_580_927_726).abs() < 1e-12);
        assert!((u.coeff(1) - oracle).abs() < 0.05 * oracle);
        assert!(u.coeffs()[1..].iter().all(|a| a.abs() < 0.05));
        let neg = find_equilibrium(2.0, 1, Sign::Minus, 32).unwrap();
        assert!((&u + &neg).coeffs().iter().all(|a| a.abs() < 1e-9));
    }

    #[test]
    fn no_branch_at_threshold() {
        assert_eq!(
            find_equilibrium(1.0, 1, Sign::Plus, 16),
            Err(EquilibriumError::NoBranch {
                j: 1,
                lambda: 1.0,
                threshold: 1.0
            })
        );
    }

    #[test]
    fn second_branch_is_odd_about_midpoint() {
        let u = find_equilibrium(10.0, 2, Sign::Plus, 48).unwrap();
        assert_eq!(count_zeros(&u), 1);
        assert!(vertex_residual(&u, 2) < 1e-8);
        let mirror = &reflect(&u) + &u;
        assert!(sobolev_norm(&mirror, 0.0) < 1e-8 * sobolev_norm(&u, 0.0));
    }

    #[test]
    fn newton_fixed_points() {
        let u = find_equilibrium(2.0, 1, Sign::Plus, 24).unwrap();
        assert_eq!(refine_newton(&u, 2.0).unwrap(), u);
        let zero = SpectralField::zeros(8);
        assert_eq!(refine_newton(&zero, 2.0).unwrap(), zero);
        let seed = SpectralField::mode(24, 1, 0.8165);
        let refined = refine_newton(&seed, 2.0).unwrap();
        assert!(sobolev_norm(&residual(&refined, 2.0), 0.0) < 1e-10);
    }

    #[test]
    fn zero_counts() {
        assert_eq!(count_zeros(&SpectralField::mode(1, 1, 1.0)), 0);
        assert_eq!(count_zeros(&SpectralField::mode(3, 3, 1.0)), 2);
        let u4 = find_equilibrium(20.0, 4, Sign::Plus, 64).unwrap();
        assert_eq!(count_zeros(&u4), 3);
    }

    #[test]
    fn continuation_of_first_branch() {
        let branch = continue_branch(1, 1.5, 10.0, 20, 48).unwrap();
        assert_eq!(branch.samples.len(), 21);
        for pair in branch.samples.windows(2) {
            assert!(pair[1].field.coeff(1) > pair[0].field.coeff(1));
        }
        assert!(branch.samples.iter().all(|s| s.morse_index == 0));
        let second = continue_branch(2, 4.5, 10.0, 8, 48).unwrap();
        assert!(second.samples.iter().all(|s| s.morse_index == 1));
        let third = continue_branch(3, 9.5, 10.0, 2, 48).unwrap();
        assert!(third.samples.iter().all(|s| count_zeros(&s.field) == 2));
        assert!(matches!(
            continue_branch(2, 3.0, 10.0, 4, 16),
            Err(EquilibriumError::NoBranch { .. })
        ));
    }
}
