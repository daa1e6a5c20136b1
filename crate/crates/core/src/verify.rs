//! Executable checks of the structural claims about the controlled equation.
//!
//! Every check returns a [`CheckReport`]. Randomized checks draw from a
//! ChaCha stream seeded by the caller, so a suite run is reproducible from
//! one master seed.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::{ControlParams, FilterKernel, Sign};
use crate::equilibria::find_equilibrium;
use crate::groupoid::{Morphism, Vertex};
use crate::spectral::{
    is_extended_vertex_mode, is_vertex_mode, reflect, sobolev_norm, vertex_residual, Dealiaser,
    SpectralField,
};
use crate::stability::{assemble, spectrum};
use crate::timestepping::Stepper;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub trials: usize,
    pub detail: String,
}

impl CheckReport {
    fn new(name: String, worst_residual: f64, tolerance: f64, trials: usize) -> Self {
        Self {
            name,
            passed: worst_residual <= tolerance,
            worst_residual,
            tolerance,
            trials,
            detail: String::new(),
        }
    }

    fn failure(name: String, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            passed: false,
            worst_residual: f64::INFINITY,
            tolerance,
            trials: 0,
            detail,
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen::<bool>() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn random_unit_kernel(rng: &mut ChaCha8Rng, vertex: Vertex, modes: usize) -> FilterKernel {
    let params = (1..=modes)
        .map(|k| {
            if vertex.contains_mode(k) || rng.gen::<bool>() {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let tail = if vertex == Vertex::Trivial && rng.gen::<bool>() {
        -1.0
    } else {
        1.0
    };
    FilterKernel::new(params, tail).expect("±1 entries are finite")
}

fn random_vertex(rng: &mut ChaCha8Rng) -> Vertex {
    let j = rng.gen_range(1..=4);
    match rng.gen_range(0..3) {
        0 => Vertex::Trivial,
        1 => Vertex::Odd(j),
        _ => Vertex::Full(j),
    }
}

fn random_morphism(rng: &mut ChaCha8Rng, vertex: Vertex, modes: usize) -> Morphism {
    let kernel = random_unit_kernel(rng, vertex, modes);
    Morphism::symmetry(vertex, random_sign(rng), kernel).expect("kernel fixes the vertex")
}

/// Field with coefficients uniform in `[−1/k, 1/k]` on the modes selected by
/// `keep`.
fn random_field(rng: &mut ChaCha8Rng, modes: usize, keep: impl Fn(usize) -> bool) -> SpectralField {
    let coeffs = (1..=modes)
        .map(|k| {
            let a: f64 = rng.gen_range(-1.0..=1.0);
            if keep(k) {
                a / k as f64
            } else {
                0.0
            }
        })
        .collect();
    SpectralField::new(coeffs).expect("finite coefficients")
}

fn field_distance(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
}

fn relative_l2(a: &SpectralField, b: &SpectralField) -> f64 {
    sobolev_norm(&(a - b), 0.0) / sobolev_norm(b, 0.0)
}

const GROUPOID_MODES: usize = 32;

/// Associativity, identities, self-inverses and the homomorphism property of
/// `apply`, plus refusal of compositions across different vertices. Exact.
pub fn check_groupoid_axioms(seed: u64, trials: usize) -> CheckReport {
    let name = String::from("groupoid_axioms");
    if trials == 0 {
        return CheckReport::failure(name, 0.0, String::from("no trials requested"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let mut refusals = 0;
    for _ in 0..trials {
        let v = random_vertex(&mut rng);
        let a = random_morphism(&mut rng, v, GROUPOID_MODES);
        let b = random_morphism(&mut rng, v, GROUPOID_MODES);
        let c = random_morphism(&mut rng, v, GROUPOID_MODES);
        let e = Morphism::identity(v, GROUPOID_MODES);
        let compose = |x: &Morphism, y: &Morphism| x.compose(y).expect("same vertex");

        let left = compose(&compose(&a, &b), &c);
        let right = compose(&a, &compose(&b, &c));
        worst = worst.max(left.distance(&right));
        worst = worst.max(compose(&e, &a).distance(&a));
        worst = worst.max(compose(&a, &e).distance(&a));
        worst = worst.max(compose(&a, &a.inverse()).distance(&e));
        worst = worst.max(compose(&a.inverse(), &a).distance(&e));
        worst = worst.max(compose(&a, &a).distance(&e));

        let f = random_field(&mut rng, GROUPOID_MODES, |_| true);
        let via_product = compose(&a, &b).apply(&f);
        let in_sequence = a.apply(&b.apply(&f));
        worst = worst.max(field_distance(&via_product, &in_sequence));

        let w = loop {
            let w = random_vertex(&mut rng);
            if w != v {
                break w;
            }
        };
        let stranger = random_morphism(&mut rng, w, GROUPOID_MODES);
        if stranger.compose(&a).is_ok() || a.compose(&stranger).is_ok() {
            worst = f64::INFINITY;
        } else {
            refusals += 1;
        }
    }
    CheckReport::new(name, worst, 0.0, trials)
        .with_detail(format!("{refusals} mismatched compositions refused"))
}

/// `F(f)_k = −k²a_k + λ(a_k − (f³)_k)`.
fn vector_field(dealiaser: &mut Dealiaser, f: &SpectralField, lambda: f64) -> SpectralField {
    let cubed = dealiaser.cube(f);
    let coeffs = f
        .coeffs()
        .iter()
        .zip(cubed.coeffs())
        .enumerate()
        .map(|(i, (a, c))| {
            let k = (i + 1) as f64;
            -k * k * a + lambda * (a - c)
        })
        .collect();
    SpectralField::from_vec_unchecked(coeffs)
}

/// The vector field maps `X_j` into itself.
pub fn check_vertex_invariance(
    j: usize,
    lambda: f64,
    trials: usize,
    modes: usize,
    seed: u64,
) -> CheckReport {
    let name = format!("vertex_invariance[j={j}]");
    if trials == 0 || j == 0 || modes < j {
        return CheckReport::failure(name, 1e-10, String::from("empty sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dealiaser = Dealiaser::new(modes);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let f = random_field(&mut rng, modes, |k| is_vertex_mode(k, j));
        worst = worst.max(vertex_residual(
            &vector_field(&mut dealiaser, &f, lambda),
            j,
        ));
    }
    CheckReport::new(name, worst, 1e-10, trials)
}

/// Vertex invariance for one given field.
pub fn check_vertex_invariance_of(field: &SpectralField, j: usize, lambda: f64) -> CheckReport {
    let mut dealiaser = Dealiaser::new(field.truncation());
    let residual = vertex_residual(&vector_field(&mut dealiaser, field, lambda), j);
    CheckReport::new(format!("vertex_invariance_of[j={j}]"), residual, 1e-10, 1)
}

/// The equilibrium on branch `j` lies in `X_j`.
pub fn check_equilibrium_in_vertex(j: usize, lambda: f64, modes: usize) -> CheckReport {
    let name = format!("equilibrium_in_vertex[j={j},lambda={lambda}]");
    match find_equilibrium(lambda, j, Sign::Plus, modes) {
        Ok(u) => CheckReport::new(name, vertex_residual(&u, j), 1e-8, 1),
        Err(e) => CheckReport::failure(name, 1e-8, format!("{e}")),
    }
}

/// Random kernels in `H_j` leave `u_j` unchanged. Free entries are uniform in
/// `[−2, 2]`.
pub fn check_noninvasiveness(
    j: usize,
    lambda: f64,
    trials: usize,
    modes: usize,
    seed: u64,
) -> CheckReport {
    let name = format!("noninvasiveness[j={j},lambda={lambda}]");
    if trials == 0 {
        return CheckReport::failure(name, 1e-8, String::from("no trials requested"));
    }
    let u = match find_equilibrium(lambda, j, Sign::Plus, modes) {
        Ok(u) => u,
        Err(e) => return CheckReport::failure(name, 1e-8, format!("{e}")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let params = (1..=modes)
            .map(|k| {
                let h = rng.gen_range(-2.0..=2.0);
                if is_vertex_mode(k, j) {
                    1.0
                } else {
                    h
                }
            })
            .collect();
        let kernel = FilterKernel::new(params, 1.0).expect("finite entries");
        worst = worst.max(relative_l2(&kernel.apply(&u), &u));
    }
    CheckReport::new(name, worst, 1e-8, trials)
}

/// Noninvasiveness of one given kernel on `u_j`.
pub fn check_noninvasiveness_of(
    j: usize,
    lambda: f64,
    kernel: &FilterKernel,
    modes: usize,
) -> CheckReport {
    let name = format!("noninvasiveness_of[j={j},lambda={lambda}]");
    match find_equilibrium(lambda, j, Sign::Plus, modes) {
        Ok(u) => CheckReport::new(name, relative_l2(&kernel.apply(&u), &u), 1e-8, 1),
        Err(e) => CheckReport::failure(name, 1e-8, format!("{e}")),
    }
}

/// Unstable eigenvectors of the uncontrolled linearization at `u_j` lie
/// outside `X_j`: each has `vertex_residual > 0.99` and at most `j − 2`
/// interior zeros. The reported residual is `1 − min vertex_residual`.
pub fn check_no_instability_in_vertex(j: usize, lambda: f64, modes: usize) -> CheckReport {
    let name = format!("no_instability_in_vertex[j={j},lambda={lambda}]");
    let u = match find_equilibrium(lambda, j, Sign::Plus, modes) {
        Ok(u) => u,
        Err(e) => return CheckReport::failure(name, 0.01, format!("{e}")),
    };
    let report = spectrum(&assemble(
        &u,
        lambda,
        &ControlParams::uncontrolled(modes),
        modes,
    ));
    let mut worst = 0.0_f64;
    let mut zeros = Vec::new();
    for (_, v, z) in report.unstable_modes() {
        worst = worst.max(1.0 - vertex_residual(v, j));
        if z + 2 > j {
            worst = f64::INFINITY;
        }
        zeros.push(z);
    }
    CheckReport::new(name, worst, 0.01, zeros.len())
        .with_detail(format!("unstable eigenvector zero counts {zeros:?}"))
}

/// `‖C_h f‖_{H²} ≤ ‖f‖_{H²}` for random unit-modulus kernels and random
/// fields. The reported residual is `max ratio − 1`.
pub fn check_operator_norm(trials: usize, modes: usize, seed: u64) -> CheckReport {
    let name = String::from("operator_norm");
    if trials == 0 {
        return CheckReport::failure(name, 1e-12, String::from("no trials requested"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let kernel = random_unit_kernel(&mut rng, Vertex::Trivial, modes);
        let f = random_field(&mut rng, modes, |_| true);
        worst = worst.max(norm_ratio(&kernel, &f) - 1.0);
    }
    CheckReport::new(name, worst, 1e-12, trials)
}

/// The norm bound for one given kernel over random fields.
pub fn check_operator_norm_of(
    kernel: &FilterKernel,
    trials: usize,
    modes: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials.max(1) {
        let f = random_field(&mut rng, modes, |_| true);
        worst = worst.max(norm_ratio(kernel, &f) - 1.0);
    }
    CheckReport::new(
        String::from("operator_norm_of"),
        worst,
        1e-12,
        trials.max(1),
    )
}

fn norm_ratio(kernel: &FilterKernel, f: &SpectralField) -> f64 {
    sobolev_norm(&kernel.apply(f), 2.0) / sobolev_norm(f, 2.0)
}

/// At `u = 0` the controlled linearization is diagonal in the sine basis
/// with entries `−k² + λ + b(1 − h_k)`.
pub fn check_eigenfunction_preservation(
    gain: f64,
    kernel: &FilterKernel,
    lambda: f64,
    modes: usize,
) -> CheckReport {
    let residual = diagonal_defect(gain, kernel, lambda, modes);
    CheckReport::new(
        format!("eigenfunction_preservation[b={gain},lambda={lambda}]"),
        residual,
        1e-12,
        1,
    )
}

/// Eigenfunction preservation for random gains in `[−10, 10]`, kernels with
/// entries in `[−2, 2]` and `λ` in `[0, 30]`.
pub fn check_eigenfunction_preservation_random(
    trials: usize,
    modes: usize,
    seed: u64,
) -> CheckReport {
    let name = String::from("eigenfunction_preservation_random");
    if trials == 0 {
        return CheckReport::failure(name, 1e-12, String::from("no trials requested"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let gain = rng.gen_range(-10.0..=10.0);
        let lambda = rng.gen_range(0.0..=30.0);
        let params = (0..modes).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        let kernel = FilterKernel::new(params, 1.0).expect("finite entries");
        worst = worst.max(diagonal_defect(gain, &kernel, lambda, modes));
    }
    CheckReport::new(name, worst, 1e-12, trials)
}

/// Largest deviation of the diagonal from the closed form; any nonzero
/// off-diagonal entry counts as infinite.
fn diagonal_defect(gain: f64, kernel: &FilterKernel, lambda: f64, modes: usize) -> f64 {
    let params = ControlParams::new(gain, kernel.clone());
    let matrix = assemble(&SpectralField::zeros(modes), lambda, &params, modes);
    let mut worst = 0.0_f64;
    for r in 0..modes {
        for c in 0..modes {
            if r != c {
                if matrix[(r, c)] != 0.0 {
                    return f64::INFINITY;
                }
                continue;
            }
            let k = (r + 1) as f64;
            let expected = -k * k + lambda + gain * (1.0 - kernel.param(r + 1));
            worst = worst.max((matrix[(r, c)] - expected).abs());
        }
    }
    worst
}

/// `u_j(π − x) = (−1)^{j−1} u_j(x)`.
pub fn check_reflection_symmetry(j: usize, lambda: f64, modes: usize) -> CheckReport {
    let name = format!("reflection_symmetry[j={j},lambda={lambda}]");
    match find_equilibrium(lambda, j, Sign::Plus, modes) {
        Ok(u) => {
            let expected = u.scaled(Sign::alternating(j - 1).value());
            CheckReport::new(name, relative_l2(&reflect(&u), &expected), 1e-8, 1)
        }
        Err(e) => CheckReport::failure(name, 1e-8, format!("{e}")),
    }
}

const SEMIFLOW_DT: f64 = 1e-3;
const SEMIFLOW_STEPS: usize = 1000;
const SEMIFLOW_COMPARE_EVERY: usize = 100;

/// `S(t)γy = γS(t)y` for `y ∈ X_j` and `γ` in the vertex symmetry group,
/// compared along uncontrolled runs up to `t = 1`.
pub fn check_semiflow_commutation(
    j: usize,
    lambda: f64,
    trials: usize,
    modes: usize,
    seed: u64,
) -> CheckReport {
    let name = format!("semiflow_commutation[j={j},lambda={lambda}]");
    if trials == 0 || j == 0 {
        return CheckReport::failure(name, 1e-7, String::from("empty sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uncontrolled = ControlParams::uncontrolled(modes);
    let mut stepper = match Stepper::new(modes, lambda, &uncontrolled, SEMIFLOW_DT) {
        Ok(s) => s,
        Err(e) => return CheckReport::failure(name, 1e-7, format!("{e}")),
    };
    let mut worst = 0.0_f64;
    for t in 0..trials {
        let vertex = if t % 2 == 0 {
            Vertex::Odd(j)
        } else {
            Vertex::Full(j)
        };
        let y = random_field(&mut rng, modes, |k| is_extended_vertex_mode(k, j)).scaled(0.5);
        let y = if vertex == Vertex::Odd(j) {
            crate::spectral::project_vertex(&y, j)
        } else {
            y
        };
        let gamma = random_morphism(&mut rng, vertex, modes);
        let mut plain = y.clone().into_coeffs();
        let mut moved = gamma.apply(&y).into_coeffs();
        for n in 1..=SEMIFLOW_STEPS {
            let sup = stepper.advance(&mut plain).max(stepper.advance(&mut moved));
            if !sup.is_finite() {
                return CheckReport::failure(name, 1e-7, String::from("run blew up"));
            }
            if n % SEMIFLOW_COMPARE_EVERY == 0 {
                let a = gamma.apply(&SpectralField::from_vec_unchecked(plain.clone()));
                let b = SpectralField::from_vec_unchecked(moved.clone());
                worst = worst.max(field_distance(&a, &b));
            }
        }
    }
    CheckReport::new(name, worst, 1e-7, trials)
}

/// Whether a suite entry is meant to pass or, as a negative control, fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub report: CheckReport,
    pub expected: Expectation,
}

impl SuiteEntry {
    pub fn ok(&self) -> bool {
        self.report.passed == (self.expected == Expectation::Pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Overrides every randomized check's trial count.
    pub trials: Option<usize>,
    pub negative_controls: bool,
    pub modes: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: None,
            negative_controls: false,
            modes: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SuiteCheck {
    GroupoidAxioms,
    VertexInvariance {
        j: usize,
    },
    EquilibriumInVertex {
        j: usize,
        lambda: f64,
    },
    Noninvasiveness {
        j: usize,
        lambda: f64,
    },
    ReflectionKernelNoninvasive,
    NoInstabilityInVertex {
        j: usize,
        lambda: f64,
    },
    OperatorNorm,
    EigenfunctionPreservation,
    ReflectionSymmetry {
        j: usize,
        lambda: f64,
    },
    SemiflowCommutation {
        j: usize,
        lambda: f64,
    },
    /// A field with an `a_2` component tested against `X_1`.
    NegativeVertexInvariance,
    /// `h_j = −1` on `u_j`.
    NegativeNoninvasiveness {
        j: usize,
        lambda: f64,
    },
    /// `h ≡ 2`.
    NegativeOperatorNorm,
}

impl SuiteCheck {
    pub fn expectation(&self) -> Expectation {
        match self {
            SuiteCheck::NegativeVertexInvariance
            | SuiteCheck::NegativeNoninvasiveness { .. }
            | SuiteCheck::NegativeOperatorNorm => Expectation::Fail,
            _ => Expectation::Pass,
        }
    }

    /// Runs the check with its own random stream `seed`.
    pub fn run(&self, opts: &SuiteOptions, seed: u64) -> SuiteEntry {
        let n = opts.modes;
        let trials = |default: usize| opts.trials.unwrap_or(default);
        let report = match *self {
            SuiteCheck::GroupoidAxioms => check_groupoid_axioms(seed, trials(1000)),
            SuiteCheck::VertexInvariance { j } => {
                check_vertex_invariance(j, 10.0, trials(100), n, seed)
            }
            SuiteCheck::EquilibriumInVertex { j, lambda } => {
                check_equilibrium_in_vertex(j, lambda, n)
            }
            SuiteCheck::Noninvasiveness { j, lambda } => {
                check_noninvasiveness(j, lambda, trials(20), n, seed)
            }
            SuiteCheck::ReflectionKernelNoninvasive => {
                check_noninvasiveness_of(1, 2.0, &FilterKernel::reflection(Sign::Plus, n), n)
            }
            SuiteCheck::NoInstabilityInVertex { j, lambda } => {
                check_no_instability_in_vertex(j, lambda, n)
            }
            SuiteCheck::OperatorNorm => check_operator_norm(trials(1000), n, seed),
            SuiteCheck::EigenfunctionPreservation => {
                check_eigenfunction_preservation_random(trials(50), 16, seed)
            }
            SuiteCheck::ReflectionSymmetry { j, lambda } => check_reflection_symmetry(j, lambda, n),
            SuiteCheck::SemiflowCommutation { j, lambda } => {
                check_semiflow_commutation(j, lambda, trials(2).min(4), 32, seed)
            }
            SuiteCheck::NegativeVertexInvariance => {
                let mut f = SpectralField::mode(n, 1, 1.0);
                f.set_coeff(2, 0.5);
                check_vertex_invariance_of(&f, 1, 10.0)
            }
            SuiteCheck::NegativeNoninvasiveness { j, lambda } => {
                let mut kernel = FilterKernel::identity(n);
                kernel.set_param(j, -1.0);
                check_noninvasiveness_of(j, lambda, &kernel, n)
            }
            SuiteCheck::NegativeOperatorNorm => {
                let kernel = FilterKernel::new(alloc::vec![2.0; n], 2.0).expect("finite");
                check_operator_norm_of(&kernel, trials(100), n, seed)
            }
        };
        SuiteEntry {
            report,
            expected: self.expectation(),
        }
    }
}

/// The checks of a full suite run, in report order.
pub fn plan(opts: &SuiteOptions) -> Vec<SuiteCheck> {
    let mut checks = alloc::vec![SuiteCheck::GroupoidAxioms];
    for j in 1..=4 {
        checks.push(SuiteCheck::VertexInvariance { j });
    }
    for j in 1..=3 {
        checks.push(SuiteCheck::EquilibriumInVertex { j, lambda: 10.0 });
        checks.push(SuiteCheck::Noninvasiveness { j, lambda: 10.0 });
    }
    checks.push(SuiteCheck::ReflectionKernelNoninvasive);
    checks.push(SuiteCheck::NoInstabilityInVertex { j: 1, lambda: 2.0 });
    checks.push(SuiteCheck::NoInstabilityInVertex { j: 2, lambda: 10.0 });
    checks.push(SuiteCheck::NoInstabilityInVertex { j: 3, lambda: 15.0 });
    checks.push(SuiteCheck::OperatorNorm);
    checks.push(SuiteCheck::EigenfunctionPreservation);
    for j in 1..=4 {
        checks.push(SuiteCheck::ReflectionSymmetry { j, lambda: 20.0 });
    }
    checks.push(SuiteCheck::SemiflowCommutation { j: 1, lambda: 10.0 });
    checks.push(SuiteCheck::SemiflowCommutation { j: 2, lambda: 10.0 });
    if opts.negative_controls {
        checks.push(SuiteCheck::NegativeVertexInvariance);
        checks.push(SuiteCheck::NegativeNoninvasiveness { j: 2, lambda: 10.0 });
        checks.push(SuiteCheck::NegativeOperatorNorm);
    }
    checks
}

/// Independent stream seed for check number `index` of a suite run.
pub fn check_seed(master: u64, index: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = master.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every planned check sequentially.
pub fn run_suite(opts: &SuiteOptions) -> Vec<SuiteEntry> {
    plan(opts)
        .iter()
        .enumerate()
        .map(|(i, check)| check.run(opts, check_seed(opts.seed, i)))
        .collect()
}
