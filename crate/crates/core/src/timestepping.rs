//! Time integration of the controlled equation in the sine basis.
//!
//! With the feedback `b(u − C_h[u])` the linear part is diagonal, with
//! symbol `c_k = −k² + λ + b(1 − h_k)`, and the only nonlinearity is
//! `−λu³`. Steps use the second-order exponential time-differencing
//! Runge–Kutta scheme (ETD2RK):
//!
//! ```text
//! a       = e^{c dt} u + dt φ1(c dt) N(u)
//! u_next  = a + dt φ2(c dt) (N(a) − N(u))
//! ```
//!
//! with `φ1(z) = (e^z − 1)/z` and `φ2(z) = (e^z − 1 − z)/z²`. Equilibria of
//! the controlled equation are fixed points of the scheme.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::{ControlParams, Sign};
use crate::equilibria::{find_equilibrium, EquilibriumError};
use crate::spectral::{sobolev_norm, Dealiaser, SpectralField};

/// Below this `|c dt|` the φ-functions switch to their Taylor series.
const SERIES_THRESHOLD: f64 = 1e-4;

/// Sup-norm beyond which a run is declared divergent.
pub const BLOWUP_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum TimestepError {
    #[error("time step must be positive, got {dt}")]
    InvalidStep { dt: f64 },
    #[error("horizon {horizon} is shorter than the step {dt}")]
    InvalidHorizon { horizon: f64, dt: f64 },
    #[error("at least 8 modes are required, got {modes}")]
    TooFewModes { modes: usize },
    #[error("record interval must be at least one step")]
    InvalidRecordInterval,
    #[error("solution blew up (sup-norm above 10) at t = {t}")]
    Blowup { t: f64 },
    #[error("decay-rate window holds {samples} samples; at least 4 are needed")]
    DegenerateWindow { samples: usize },
    #[error("distance {distance:e} at t = {t} is not positive")]
    NonPositiveDistance { t: f64, distance: f64 },
    #[error(transparent)]
    Initial(#[from] EquilibriumError),
}

/// `(φ1(z), φ2(z))`.
fn phi(z: f64) -> (f64, f64) {
    if z.abs() < SERIES_THRESHOLD {
        let phi1 = 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z / 24.0));
        let phi2 = 1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
        (phi1, phi2)
    } else {
        let em1 = libm::expm1(z);
        (em1 / z, (em1 - z) / (z * z))
    }
}

/// Precomputed ETD2RK propagator for fixed `(N, λ, b, h, dt)`.
#[derive(Debug, Clone)]
pub struct Stepper {
    lambda: f64,
    propagator: Vec<f64>,
    weight1: Vec<f64>,
    weight2: Vec<f64>,
    dealiaser: Dealiaser,
    forcing: Vec<f64>,
    predictor: Vec<f64>,
    forcing_predicted: Vec<f64>,
}

impl Stepper {
    pub fn new(
        modes: usize,
        lambda: f64,
        params: &ControlParams,
        dt: f64,
    ) -> Result<Self, TimestepError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(TimestepError::InvalidStep { dt });
        }
        let mut propagator = Vec::with_capacity(modes);
        let mut weight1 = Vec::with_capacity(modes);
        let mut weight2 = Vec::with_capacity(modes);
        for k in 1..=modes {
            let z = params.linear_symbol(k, lambda) * dt;
            let (phi1, phi2) = phi(z);
            propagator.push(libm::exp(z));
            weight1.push(dt * phi1);
            weight2.push(dt * phi2);
        }
        Ok(Self {
            lambda,
            propagator,
            weight1,
            weight2,
            dealiaser: Dealiaser::new(modes),
            forcing: vec![0.0; modes],
            predictor: vec![0.0; modes],
            forcing_predicted: vec![0.0; modes],
        })
    }

    pub fn modes(&self) -> usize {
        self.propagator.len()
    }

    /// `N(u) = −λu³` into `out`; returns the sup-norm of `u`.
    fn nonlinear(&mut self, coeffs: &[f64], which: Buffer) -> f64 {
        let out = match which {
            Buffer::Current => &mut self.forcing,
            Buffer::Predicted => &mut self.forcing_predicted,
        };
        let sup = self.dealiaser.cube_into(coeffs, out);
        out.iter_mut().for_each(|v| *v *= -self.lambda);
        sup
    }

    /// Advances `state` by one step in place and returns the sup-norm of the
    /// state before the step.
    #[allow(clippy::needless_range_loop)]
    pub fn advance(&mut self, state: &mut [f64]) -> f64 {
        debug_assert_eq!(state.len(), self.modes());
        let sup = self.nonlinear(state, Buffer::Current);
        for i in 0..state.len() {
            self.predictor[i] = self.propagator[i] * state[i] + self.weight1[i] * self.forcing[i];
        }
        let predictor = core::mem::take(&mut self.predictor);
        self.nonlinear(&predictor, Buffer::Predicted);
        for i in 0..state.len() {
            state[i] =
                predictor[i] + self.weight2[i] * (self.forcing_predicted[i] - self.forcing[i]);
        }
        self.predictor = predictor;
        sup
    }

    pub fn step(&mut self, field: &SpectralField) -> Result<SpectralField, TimestepError> {
        let mut state = field.resized(self.modes()).into_coeffs();
        self.advance(&mut state);
        SpectralField::new(state).map_err(|_| TimestepError::Blowup { t: 0.0 })
    }
}

#[derive(Clone, Copy)]
enum Buffer {
    Current,
    Predicted,
}

/// One ETD2RK step of the controlled equation.
pub fn step(
    field: &SpectralField,
    lambda: f64,
    params: &ControlParams,
    dt: f64,
) -> Result<SpectralField, TimestepError> {
    Stepper::new(field.truncation(), lambda, params, dt)?.step(field)
}

/// Starting state of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Coefficients(SpectralField),
    /// `amplitude · sin(kx)`.
    Mode {
        k: usize,
        amplitude: f64,
    },
    /// The equilibrium on branch `j` plus `amplitude · sin(mode·x)`.
    PerturbedEquilibrium {
        j: usize,
        sign: Sign,
        mode: usize,
        amplitude: f64,
    },
    /// Independent uniform coefficients in `[−amplitude, amplitude]`.
    Random {
        amplitude: f64,
        seed: u64,
    },
}

impl InitialCondition {
    pub fn resolve(&self, lambda: f64, modes: usize) -> Result<SpectralField, EquilibriumError> {
        Ok(match self {
            InitialCondition::Coefficients(field) => field.resized(modes),
            InitialCondition::Mode { k, amplitude } => {
                SpectralField::mode(modes, *k, *amplitude).resized(modes)
            }
            InitialCondition::PerturbedEquilibrium {
                j,
                sign,
                mode,
                amplitude,
            } => {
                let base = find_equilibrium(lambda, *j, *sign, modes)?;
                (&base + &SpectralField::mode(modes, *mode, *amplitude)).resized(modes)
            }
            InitialCondition::Random { amplitude, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let a = amplitude.abs();
                let coeffs = (0..modes)
                    .map(|_| if a > 0.0 { rng.gen_range(-a..=a) } else { 0.0 })
                    .collect();
                SpectralField::from_vec_unchecked(coeffs)
            }
        })
    }
}

/// A reproducible run description.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub modes: usize,
    pub dt: f64,
    pub horizon: f64,
    pub lambda: f64,
    pub control: ControlParams,
    pub initial: InitialCondition,
    pub record_every: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), TimestepError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(TimestepError::InvalidStep { dt: self.dt });
        }
        if !(self.horizon >= self.dt) {
            return Err(TimestepError::InvalidHorizon {
                horizon: self.horizon,
                dt: self.dt,
            });
        }
        if self.modes < 8 {
            return Err(TimestepError::TooFewModes { modes: self.modes });
        }
        if self.record_every == 0 {
            return Err(TimestepError::InvalidRecordInterval);
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        libm::round(self.horizon / self.dt) as usize
    }
}

/// Recorded snapshots of a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    /// Coefficient-space distance to the designated target.
    pub distances: Vec<f64>,
    /// Norm of the control term `b(u − C_h[u])`.
    pub control_norms: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&SpectralField> {
        self.states.last()
    }

    fn record(&mut self, t: f64, state: &[f64], target: &SpectralField, control: &ControlParams) {
        let field = SpectralField::from_vec_unchecked(state.to_vec());
        self.distances.push(sobolev_norm(&(&field - target), 0.0));
        self.control_norms
            .push(sobolev_norm(&control.control_term(&field), 0.0));
        self.times.push(t);
        self.states.push(field);
    }
}

/// Integrates `cfg` and tracks the distance to `target`.
pub fn simulate(cfg: &SimConfig, target: &SpectralField) -> Result<Trajectory, TimestepError> {
    cfg.validate()?;
    let initial = cfg.initial.resolve(cfg.lambda, cfg.modes)?;
    let target = target.resized(cfg.modes);
    let mut stepper = Stepper::new(cfg.modes, cfg.lambda, &cfg.control, cfg.dt)?;
    let mut state = initial.into_coeffs();
    let steps = cfg.steps();
    let mut trajectory = Trajectory::default();
    trajectory.record(0.0, &state, &target, &cfg.control);
    for n in 1..=steps {
        let sup = stepper.advance(&mut state);
        let t_prev = (n - 1) as f64 * cfg.dt;
        if !(sup <= BLOWUP_BOUND) {
            return Err(TimestepError::Blowup { t: t_prev });
        }
        if state.iter().any(|a| !a.is_finite()) {
            return Err(TimestepError::Blowup {
                t: n as f64 * cfg.dt,
            });
        }
        if n % cfg.record_every == 0 || n == steps {
            trajectory.record(n as f64 * cfg.dt, &state, &target, &cfg.control);
        }
    }
    Ok(trajectory)
}

/// Least-squares slope of `ln(distance)` against time over `[t0, t1]`.
pub fn measure_decay_rate(traj: &Trajectory, window: (f64, f64)) -> Result<f64, TimestepError> {
    let (t0, t1) = window;
    let mut points = Vec::new();
    for (&t, &d) in traj.times.iter().zip(&traj.distances) {
        if t < t0 || t > t1 {
            continue;
        }
        if !(d > 0.0) {
            return Err(TimestepError::NonPositiveDistance { t, distance: d });
        }
        points.push((t, libm::log(d)));
    }
    if points.len() < 4 {
        return Err(TimestepError::DegenerateWindow {
            samples: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_t = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, y) in &points {
        sxy += (t - mean_t) * (y - mean_y);
        sxx += (t - mean_t) * (t - mean_t);
    }
    Ok(sxy / sxx)
}
