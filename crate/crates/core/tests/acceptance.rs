//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p chafee-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chafee_core::control::{ControlParams, FilterKernel, Sign};
use chafee_core::equilibria::{bifurcation_value, find_equilibrium, EquilibriumError};
use chafee_core::groupoid::{Morphism, Vertex};
use chafee_core::spectral::{sobolev_norm, SpectralField};
use chafee_core::stability::{
    assemble, recommended_truncation, spectrum, theorem_spectrum, verdict, Verdict,
};
use chafee_core::timestepping::{
    measure_decay_rate, simulate, InitialCondition, SimConfig, Stepper,
};
use chafee_core::verify::{
    check_eigenfunction_preservation_random, check_groupoid_axioms, check_no_instability_in_vertex,
    check_noninvasiveness, check_noninvasiveness_of, check_operator_norm,
    check_reflection_symmetry, check_seed, check_vertex_invariance,
};

const SEED: u64 = 20_240_917;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `n`-th largest eigenvalue of the uncontrolled linearization about `0`.
fn trivial_eigenvalue(lambda: f64, n: usize) -> f64 {
    let modes = 16;
    let m = assemble(
        &SpectralField::zeros(modes),
        lambda,
        &ControlParams::uncontrolled(modes),
        modes,
    );
    spectrum(&m).eigenvalues[n - 1]
}

fn onsets() -> Outcome {
    for j in 1..=5 {
        let lj = bifurcation_value(j);
        find_equilibrium(lj + 0.25, j, Sign::Plus, 64)
            .map_err(|e| format!("j={j} at λ={}: {e}", lj + 0.25))?;
        match find_equilibrium(lj - 0.25, j, Sign::Plus, 64) {
            Err(EquilibriumError::NoBranch { .. }) => {}
            other => return Err(format!("j={j} below onset: {other:?}")),
        }
    }
    let mut worst = 0.0_f64;
    for k in 1..=5 {
        let target = (k * k) as f64;
        let (mut lo, mut hi) = (target - 0.5, target + 0.5);
        ensure(
            trivial_eigenvalue(lo, k) < 0.0 && trivial_eigenvalue(hi, k) > 0.0,
            || format!("no crossing bracketed for k={k}"),
        )?;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if trivial_eigenvalue(mid, k) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let err = (0.5 * (lo + hi) - target).abs();
        worst = worst.max(err);
        ensure(err < 1e-6, || format!("k={k}: crossing off by {err:e}"))?;
    }
    Ok(format!("branches born at j², crossings within {worst:.1e}"))
}

fn morse_indices() -> Outcome {
    let modes = 192;
    let lambda = 30.0;
    let mut found = Vec::new();
    for j in 1..=4 {
        let u =
            find_equilibrium(lambda, j, Sign::Plus, modes).map_err(|e| format!("j={j}: {e}"))?;
        let m = spectrum(&assemble(
            &u,
            lambda,
            &ControlParams::uncontrolled(modes),
            modes,
        ))
        .morse_index;
        found.push(m);
        ensure(m == j - 1, || format!("j={j}: Morse index {m}"))?;
    }
    Ok(format!("Morse indices {found:?}"))
}

fn vertex_invariance() -> Outcome {
    let mut worst = 0.0_f64;
    for j in 1..=4 {
        let r = check_vertex_invariance(j, 10.0, 100, 64, check_seed(SEED, j));
        worst = worst.max(r.worst_residual);
        ensure(r.passed, || {
            format!("{}: residual {:e}", r.name, r.worst_residual)
        })?;
    }
    Ok(format!("worst residual {worst:.1e}"))
}

fn noninvasiveness() -> Outcome {
    let modes = 64;
    let mut worst = 0.0_f64;
    let mut weakest_negative = f64::INFINITY;
    for j in 1..=3 {
        let r = check_noninvasiveness(j, 10.0, 20, modes, check_seed(SEED, 10 + j));
        worst = worst.max(r.worst_residual);
        ensure(r.passed, || {
            format!("{}: {:e} {}", r.name, r.worst_residual, r.detail)
        })?;
        let mut bad = FilterKernel::identity(modes);
        bad.set_param(j, -1.0);
        let n = check_noninvasiveness_of(j, 10.0, &bad, modes);
        weakest_negative = weakest_negative.min(n.worst_residual);
        ensure(n.worst_residual > 0.1, || {
            format!("negative control j={j} only {:e}", n.worst_residual)
        })?;
    }
    Ok(format!(
        "worst invasiveness {worst:.1e}, negative controls ≥ {weakest_negative:.2}"
    ))
}

fn operator_norm() -> Outcome {
    let r = check_operator_norm(1000, 64, check_seed(SEED, 20));
    ensure(r.passed && r.trials == 1000, || format!("{r:?}"))?;
    Ok(format!("max ratio − 1 = {:.1e}", r.worst_residual))
}

fn eigenfunction_preservation() -> Outcome {
    let r = check_eigenfunction_preservation_random(50, 32, check_seed(SEED, 21));
    ensure(r.passed && r.trials == 50, || format!("{r:?}"))?;
    Ok(format!(
        "diagonal, worst deviation {:.1e}",
        r.worst_residual
    ))
}

fn theorem_decay() -> Outcome {
    let modes = 32;
    let mut lines = Vec::new();
    for j in 1..=4 {
        let lambda = bifurcation_value(j);
        let gain = -lambda / 2.0 - 1.0;
        let kernel = FilterKernel::theorem(lambda, modes);
        let top = theorem_spectrum(lambda, gain, &kernel, modes)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        ensure(top < 0.0, || format!("j={j}: max μ = {top}"))?;
        let cfg = SimConfig {
            modes,
            dt: 0.01,
            horizon: 6.0,
            lambda,
            control: ControlParams::new(gain, kernel),
            initial: InitialCondition::Random {
                amplitude: 1e-3,
                seed: check_seed(SEED, 30 + j),
            },
            record_every: 10,
        };
        let traj =
            simulate(&cfg, &SpectralField::zeros(modes)).map_err(|e| format!("j={j}: {e}"))?;
        let rate = measure_decay_rate(&traj, (2.0, 6.0)).map_err(|e| format!("j={j}: {e}"))?;
        ensure((rate - top).abs() <= 0.1 * top.abs(), || {
            format!("j={j}: fitted rate {rate} vs max μ {top}")
        })?;
        lines.push(format!("j={j} μ={top:.3} fit={rate:.3}"));
    }
    Ok(lines.join(", "))
}

fn selective_stabilization() -> Outcome {
    let mut lines = Vec::new();
    for (j, lambda, unstable) in [(2, 4.5, 1), (3, 9.5, 2)] {
        let modes = recommended_truncation(lambda);
        let u =
            find_equilibrium(lambda, j, Sign::Plus, modes).map_err(|e| format!("j={j}: {e}"))?;
        let kernel = FilterKernel::selective(j, lambda, modes);
        let before = verdict(&u, lambda, &ControlParams::uncontrolled(modes), modes)
            .map_err(|e| format!("{e}"))?;
        ensure(
            matches!(before, Verdict::Unstable { morse_index, .. } if morse_index == unstable),
            || format!("j={j}: uncontrolled verdict {before:?}"),
        )?;
        let control = ControlParams::new(-4.0, kernel);
        let after = verdict(&u, lambda, &control, modes).map_err(|e| format!("{e}"))?;
        ensure(after.is_stable(), || {
            format!("j={j}: controlled verdict {after:?}")
        })?;
        let cfg = SimConfig {
            modes,
            dt: 0.01,
            horizon: 200.0,
            lambda,
            control,
            initial: InitialCondition::PerturbedEquilibrium {
                j,
                sign: Sign::Plus,
                mode: 1,
                amplitude: 0.01,
            },
            record_every: 1000,
        };
        let traj = simulate(&cfg, &u).map_err(|e| format!("j={j}: {e}"))?;
        let distance = *traj.distances.last().unwrap();
        let control_norm = *traj.control_norms.last().unwrap();
        ensure(distance < 1e-6 && control_norm < 1e-8, || {
            format!("j={j}: distance {distance:e}, control {control_norm:e}")
        })?;
        lines.push(format!(
            "j={j} margin={:.3} distance={distance:.1e} control={control_norm:.1e}",
            after.margin()
        ));
    }
    Ok(lines.join(", "))
}

fn no_instability_in_vertex() -> Outcome {
    let mut lines = Vec::new();
    for (j, lambda) in [(2, 10.0), (3, 15.0)] {
        let r = check_no_instability_in_vertex(j, lambda, 64);
        ensure(r.passed && r.trials == j - 1, || format!("{r:?}"))?;
        lines.push(format!("j={j}: {}", r.detail));
    }
    Ok(lines.join(", "))
}

fn groupoid_axioms() -> Outcome {
    let r = check_groupoid_axioms(check_seed(SEED, 40), 1000);
    ensure(r.passed && r.worst_residual == 0.0, || format!("{r:?}"))?;
    let a = Morphism::identity(Vertex::Odd(1), 8);
    let b = Morphism::identity(Vertex::Odd(2), 8);
    ensure(a.compose(&b).is_err() && b.compose(&a).is_err(), || {
        String::from("X_1 ∘ X_2 composition accepted")
    })?;
    Ok(format!("exact; {}", r.detail))
}

fn reflection_symmetry() -> Outcome {
    let mut worst = 0.0_f64;
    for j in 1..=4 {
        let r = check_reflection_symmetry(j, 20.0, 64);
        worst = worst.max(r.worst_residual);
        ensure(r.passed, || format!("{r:?}"))?;
    }
    Ok(format!("worst defect {worst:.1e}"))
}

fn integrator_order() -> Outcome {
    let modes = 32;
    let lambda = 4.5;
    let u = find_equilibrium(lambda, 2, Sign::Plus, modes).map_err(|e| format!("{e}"))?;
    let control = ControlParams::new(-4.0, FilterKernel::selective(2, lambda, modes));
    let mut start = u.clone();
    start.set_coeff(1, 0.3);
    start.set_coeff(3, -0.2);
    let run = |dt: f64| -> Result<SpectralField, String> {
        let mut stepper = Stepper::new(modes, lambda, &control, dt).map_err(|e| format!("{e}"))?;
        let steps = (1.0 / dt).round() as usize;
        let mut state = start.coeffs().to_vec();
        for _ in 0..steps {
            stepper.advance(&mut state);
        }
        SpectralField::new(state).map_err(|e| format!("{e}"))
    };
    let dt = 0.02;
    let reference = run(dt / 8.0)?;
    let coarse = sobolev_norm(&(&run(dt)? - &reference), 0.0);
    let fine = sobolev_norm(&(&run(dt / 2.0)? - &reference), 0.0);
    let ratio = coarse / fine;
    ensure((3.5..=4.5).contains(&ratio), || {
        format!("error ratio {ratio}")
    })?;
    Ok(format!("error ratio {ratio:.3}"))
}

struct Criterion {
    label: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            label: "bifurcation onsets",
            budget: Duration::from_secs(10),
            run: onsets,
        },
        Criterion {
            label: "Morse indices at λ=30",
            budget: Duration::from_secs(30),
            run: morse_indices,
        },
        Criterion {
            label: "vertex invariance",
            budget: Duration::from_secs(5),
            run: vertex_invariance,
        },
        Criterion {
            label: "noninvasiveness",
            budget: Duration::from_secs(5),
            run: noninvasiveness,
        },
        Criterion {
            label: "filter operator norm",
            budget: Duration::from_secs(5),
            run: operator_norm,
        },
        Criterion {
            label: "eigenfunction preservation",
            budget: Duration::from_secs(5),
            run: eigenfunction_preservation,
        },
        Criterion {
            label: "stabilization of u = 0",
            budget: Duration::from_secs(60),
            run: theorem_decay,
        },
        Criterion {
            label: "pattern-selective stabilization",
            budget: Duration::from_secs(120),
            run: selective_stabilization,
        },
        Criterion {
            label: "no instability inside vertex spaces",
            budget: Duration::from_secs(10),
            run: no_instability_in_vertex,
        },
        Criterion {
            label: "groupoid axioms",
            budget: Duration::from_secs(2),
            run: groupoid_axioms,
        },
        Criterion {
            label: "reflection symmetry",
            budget: Duration::from_secs(10),
            run: reflection_symmetry,
        },
        Criterion {
            label: "integrator order",
            budget: Duration::from_secs(30),
            run: integrator_order,
        },
    ];

    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.budget => Err(format!("{msg}; over budget {:?}", c.budget)),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(msg) => ("PASS", msg),
            Err(msg) => ("FAIL", msg),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!(
            "{tag} {:>2} {:<36} {:>8.2?}  {msg}",
            i + 1,
            c.label,
            elapsed
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
