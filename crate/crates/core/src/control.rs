//! Convolution feedback controls realized as Fourier sine filters.
//!
//! A kernel functional `h(z) = (1/π) Σ h_m cos(mz)` acts on a field by
//! multiplying the `k`-th sine coefficient by `h_k`. The constant mode
//! `h_0` cancels in the antisymmetrized kernel `h(x−ξ) − h(x+ξ)` and is not
//! stored. Kernels are truncated to `N` modes with an explicit value applied
//! to every mode above `N`.

use alloc::vec::Vec;

use crate::spectral::{is_extended_vertex_mode, is_vertex_mode, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ControlError {
    #[error("control parameter h_{index} is not finite")]
    NonFinite { index: usize },
    #[error("tail value is not finite")]
    NonFiniteTail,
    #[error("delayed feedback (tau = {tau}) is not supported; only tau = 0")]
    DelayUnsupported { tau: f64 },
}

/// Global sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// `(−1)^n` as a sign.
    pub fn alternating(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl core::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Control parameters `h_1..h_N` plus the value used for `m > N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterKernel {
    params: Vec<f64>,
    tail: f64,
}

impl FilterKernel {
    pub fn new(params: Vec<f64>, tail: f64) -> Result<Self, ControlError> {
        if let Some(i) = params.iter().position(|h| !h.is_finite()) {
            return Err(ControlError::NonFinite { index: i + 1 });
        }
        if !tail.is_finite() {
            return Err(ControlError::NonFiniteTail);
        }
        Ok(Self { params, tail })
    }

    /// `h ≡ 1`: the sifting kernel, which leaves every field unchanged.
    pub fn identity(modes: usize) -> Self {
        Self {
            params: alloc::vec![1.0; modes],
            tail: 1.0,
        }
    }

    /// `h_k = sign·(−1)^{k+1}`: feedback of `±u(π − x)`.
    ///
    /// The alternating pattern has no constant tail, so the kernel
    /// reproduces the reflection only for fields of at most `modes` modes;
    /// higher modes are left uncontrolled.
    pub fn reflection(sign: Sign, modes: usize) -> Self {
        let s = sign.value();
        let params = (1..=modes)
            .map(|k| if k % 2 == 1 { s } else { -s })
            .collect();
        Self { params, tail: 1.0 }
    }

    /// Stabilizing kernel near the bifurcation point at `lambda`: the first
    /// `k̃ = ⌊√λ⌋` modes are controlled (`h = −1`), the rest are not.
    pub fn theorem(lambda: f64, modes: usize) -> Self {
        let controlled = controlled_modes(lambda);
        let params = (1..=modes)
            .map(|m| if m <= controlled { -1.0 } else { 1.0 })
            .collect();
        Self { params, tail: 1.0 }
    }

    /// Like [`FilterKernel::theorem`], but leaves every mode of `X_j`
    /// uncontrolled so the kernel lies in the isotropy group `H_j`.
    pub fn selective(j: usize, lambda: f64, modes: usize) -> Self {
        let mut kernel = Self::theorem(lambda, modes);
        for (i, h) in kernel.params.iter_mut().enumerate() {
            if is_vertex_mode(i + 1, j) {
                *h = 1.0;
            }
        }
        kernel
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn tail_value(&self) -> f64 {
        self.tail
    }

    pub fn truncation(&self) -> usize {
        self.params.len()
    }

    /// `h_m` for `m ≥ 1`, falling back to the tail value above `N`.
    pub fn param(&self, m: usize) -> f64 {
        debug_assert!(m >= 1);
        self.params.get(m - 1).copied().unwrap_or(self.tail)
    }

    pub fn set_param(&mut self, m: usize, value: f64) {
        if m > self.params.len() {
            self.params.resize(m, self.tail);
        }
        self.params[m - 1] = value;
    }

    /// Every parameter, tail included, is `±1`.
    pub fn is_unit_modulus(&self) -> bool {
        self.params
            .iter()
            .chain(core::iter::once(&self.tail))
            .all(|&h| h == 1.0 || h == -1.0)
    }

    /// No parameter vanishes, so the induced filter is invertible.
    pub fn is_invertible(&self) -> bool {
        self.params
            .iter()
            .chain(core::iter::once(&self.tail))
            .all(|&h| h != 0.0)
    }

    /// Membership in the vertex isotropy group `H_j`: `h_{jℓ} = 1` for every
    /// odd `ℓ`, including the tail.
    pub fn is_member_h(&self, j: usize) -> bool {
        self.fixes_modes(|k| is_vertex_mode(k, j))
    }

    /// Membership in the smaller group `H̃_j`: `h_{jℓ} = 1` for every `ℓ`.
    pub fn is_member_h_extended(&self, j: usize) -> bool {
        self.fixes_modes(|k| is_extended_vertex_mode(k, j))
    }

    fn fixes_modes(&self, selected: impl Fn(usize) -> bool) -> bool {
        self.tail == 1.0
            && self
                .params
                .iter()
                .enumerate()
                .all(|(i, &h)| !selected(i + 1) || h == 1.0)
    }

    /// Termwise product of control parameters.
    pub fn compose(&self, other: &FilterKernel) -> FilterKernel {
        let n = self.truncation().max(other.truncation());
        let params = (1..=n).map(|m| self.param(m) * other.param(m)).collect();
        FilterKernel {
            params,
            tail: self.tail * other.tail,
        }
    }

    /// Termwise reciprocal, when every parameter is nonzero.
    pub fn inverse(&self) -> Option<FilterKernel> {
        self.is_invertible().then(|| FilterKernel {
            params: self.params.iter().map(|h| 1.0 / h).collect(),
            tail: 1.0 / self.tail,
        })
    }

    /// `C_h[v] = Σ h_k a_k sin(kx)`.
    pub fn apply(&self, field: &SpectralField) -> SpectralField {
        let coeffs = field
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| self.param(i + 1) * a)
            .collect();
        SpectralField::from_vec_unchecked(coeffs)
    }
}

/// Number of controlled modes `k̃`: the largest integer with `k̃² ≤ λ`.
pub fn controlled_modes(lambda: f64) -> usize {
    if !(lambda >= 1.0) {
        return 0;
    }
    let mut k = libm::floor(libm::sqrt(lambda)) as usize;
    while ((k + 1) * (k + 1)) as f64 <= lambda {
        k += 1;
    }
    while k > 0 && ((k * k) as f64) > lambda {
        k -= 1;
    }
    k
}

/// Feedback gain `b` and kernel `h` of the control term `b(u − C_h[u])`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlParams {
    pub gain: f64,
    pub kernel: FilterKernel,
}

impl ControlParams {
    pub fn new(gain: f64, kernel: FilterKernel) -> Self {
        Self { gain, kernel }
    }

    /// `b = 0`: the uncontrolled equation.
    pub fn uncontrolled(modes: usize) -> Self {
        Self::new(0.0, FilterKernel::identity(modes))
    }

    /// Only instantaneous feedback is modeled; any nonzero delay is refused.
    pub fn with_delay(gain: f64, kernel: FilterKernel, tau: f64) -> Result<Self, ControlError> {
        if tau != 0.0 {
            return Err(ControlError::DelayUnsupported { tau });
        }
        Ok(Self::new(gain, kernel))
    }

    pub fn delay(&self) -> f64 {
        0.0
    }

    /// `b(1 − h_k)`, the shift the control adds to mode `k`.
    pub fn mode_shift(&self, k: usize) -> f64 {
        self.gain * (1.0 - self.kernel.param(k))
    }

    /// Diagonal symbol `−k² + λ + b(1 − h_k)` of the controlled linear part.
    pub fn linear_symbol(&self, k: usize, lambda: f64) -> f64 {
        let kf = k as f64;
        -kf * kf + lambda + self.mode_shift(k)
    }

    /// `b(v − C_h[v])` with coefficients `b(1 − h_k) a_k`.
    pub fn control_term(&self, field: &SpectralField) -> SpectralField {
        let coeffs = field
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| self.mode_shift(i + 1) * a)
            .collect();
        SpectralField::from_vec_unchecked(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{reflect, sobolev_norm};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(rng: &mut ChaCha8Rng, n: usize) -> SpectralField {
        SpectralField::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn identity_filter_is_sifting() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_field(&mut rng, 12);
        assert_eq!(FilterKernel::identity(12).apply(&f), f);
        assert_eq!(FilterKernel::identity(3).apply(&f), f);
    }

    #[test]
    fn reflection_kernel_matches_reflect() {
        assert_eq!(
            FilterKernel::reflection(Sign::Plus, 4).params(),
            &[1.0, -1.0, 1.0, -1.0]
        );
        assert_eq!(
            FilterKernel::reflection(Sign::Minus, 3).params(),
            &[-1.0, 1.0, -1.0]
        );
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [1, 6, 17] {
            let f = random_field(&mut rng, n);
            assert_eq!(
                FilterKernel::reflection(Sign::Plus, n).apply(&f),
                reflect(&f)
            );
        }
    }

    #[test]
    fn isotropy_member_fixes_vertex_modes() {
        let mut h = FilterKernel::identity(9);
        h.set_param(2, -1.0);
        h.set_param(4, 0.3);
        assert!(h.is_member_h(1));
        let f = SpectralField::mode(9, 3, 1.0);
        assert_eq!(h.apply(&f), f);
    }

    #[test]
    fn control_term_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_field(&mut rng, 8);
        let p = ControlParams::new(-3.7, FilterKernel::identity(8));
        assert!(p.control_term(&f).is_zero());

        let mut h = FilterKernel::identity(1);
        h.set_param(1, -1.0);
        let p = ControlParams::new(-1.0, h);
        assert_eq!(
            p.control_term(&SpectralField::mode(1, 1, 1.0)).coeffs(),
            &[-2.0]
        );
    }

    #[test]
    fn membership_examples() {
        for j in 1..6 {
            assert!(FilterKernel::identity(20).is_member_h(j));
        }
        assert!(FilterKernel::reflection(Sign::Plus, 20).is_member_h(1));
        assert!(!FilterKernel::theorem(4.0, 20).is_member_h(2));
        let mut h = FilterKernel::identity(4);
        h.tail = -1.0;
        assert!(!h.is_member_h(1));
    }

    #[test]
    fn controlled_mode_counts() {
        assert_eq!(controlled_modes(1.0), 1);
        assert_eq!(
            controlled_modes(core::f64::consts::PI * core::f64::consts::PI),
            3
        );
        assert_eq!(controlled_modes(10.0), 3);
        assert_eq!(controlled_modes(16.0), 4);
        assert_eq!(controlled_modes(15.999), 3);
        assert_eq!(controlled_modes(0.5), 0);
        assert_eq!(FilterKernel::theorem(1.0, 3).params(), &[-1.0, 1.0, 1.0]);
        assert_eq!(
            FilterKernel::theorem(10.0, 5).params(),
            &[-1.0, -1.0, -1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn selective_kernel_examples() {
        assert_eq!(
            FilterKernel::selective(2, 4.5, 4).params(),
            &[-1.0, 1.0, 1.0, 1.0]
        );
        assert_eq!(FilterKernel::selective(1, 1.0, 4).params(), &[1.0; 4]);
        assert_eq!(
            FilterKernel::selective(3, 10.0, 5).params(),
            &[-1.0, -1.0, 1.0, 1.0, 1.0]
        );
        for j in 1..8 {
            assert!(FilterKernel::selective(j, 40.0, 64).is_member_h(j));
        }
    }

    #[test]
    fn composition_laws() {
        let h = FilterKernel::theorem(10.0, 8);
        assert_eq!(h.compose(&h), FilterKernel::identity(8));
        assert_eq!(FilterKernel::identity(8).compose(&h), h);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut rand_kernel =
            || FilterKernel::new((0..6).map(|_| rng.gen_range(-2.0..2.0)).collect(), 1.0).unwrap();
        let (a, b, c) = (rand_kernel(), rand_kernel(), rand_kernel());
        assert_eq!(a.compose(&b), b.compose(&a));
        // Associativity is exact for ±1 entries; general reals round.
        let (a, b, c) = (
            FilterKernel::new(a.params().iter().map(|x| x.signum()).collect(), 1.0).unwrap(),
            FilterKernel::new(b.params().iter().map(|x| x.signum()).collect(), -1.0).unwrap(),
            FilterKernel::new(c.params().iter().map(|x| x.signum()).collect(), 1.0).unwrap(),
        );
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn delay_is_rejected() {
        assert!(ControlParams::with_delay(1.0, FilterKernel::identity(2), 0.0).is_ok());
        assert_eq!(
            ControlParams::with_delay(1.0, FilterKernel::identity(2), 0.5),
            Err(ControlError::DelayUnsupported { tau: 0.5 })
        );
    }

    #[test]
    fn unit_modulus_norm_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let h = FilterKernel::new(
                (0..10)
                    .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                    .collect(),
                1.0,
            )
            .unwrap();
            let f = random_field(&mut rng, 10);
            assert!(sobolev_norm(&h.apply(&f), 2.0) <= sobolev_norm(&f, 2.0) * (1.0 + 1e-12));
        }
        assert!(!FilterKernel::new(vec![1.0, 0.5], 1.0)
            .unwrap()
            .is_unit_modulus());
    }
}
