use std::f64::consts::PI;

use crate::Convention;

/// Conversion between user-facing parameters and the internal scaling on
/// `(0, π)`.
///
/// On the unit interval every rate is `π²` times larger, so `λ`, `b` and
/// eigenvalues scale by `π²` and times by `1/π²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    scale: f64,
    pub convention: Convention,
}

impl Units {
    pub fn new(convention: Convention) -> Self {
        let scale = match convention {
            Convention::Eigen => 1.0,
            Convention::PaperLiteral => PI * PI,
        };
        Self { scale, convention }
    }

    pub fn name(&self) -> &'static str {
        match self.convention {
            Convention::Eigen => "eigen",
            Convention::PaperLiteral => "paper-literal",
        }
    }

    /// `λ`, `b` and eigenvalues from user to internal units.
    pub fn rate_in(&self, value: f64) -> f64 {
        value / self.scale
    }

    pub fn rate_out(&self, value: f64) -> f64 {
        value * self.scale
    }

    pub fn time_in(&self, t: f64) -> f64 {
        t * self.scale
    }

    pub fn time_out(&self, t: f64) -> f64 {
        t / self.scale
    }
}
