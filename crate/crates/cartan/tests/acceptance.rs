//! Acceptance criteria at `p = 5`, `n` in {2, 3}, each with its time budget.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cartan::report::{Status, SuiteReport};
use cartan::suites::{run_suite, SuiteConfig, SuiteId};
use cartan_core::invariants::{minimal_p_polynomial, phi_values};
use cartan_core::{Ambient, Derivation, Field, TruncPoly};

type Outcome = Result<String, String>;

fn run(id: SuiteId, p: u32, n: usize, seed: u64, trials: u64) -> Result<SuiteReport, String> {
    let cfg = SuiteConfig {
        p,
        n: Some(n),
        seed,
        trials,
        jobs: 1,
    };
    run_suite(id, &cfg).map_err(|e| e.to_string())
}

/// Every check in `r` passed and exactly `want` of them are named `name[..]`.
fn require(r: &SuiteReport, name: &str, want: usize) -> Outcome {
    if let Some(bad) = r.checks.iter().find(|c| c.status == Status::Fail) {
        return Err(format!(
            "{}: {} failed, witness {}",
            r.suite,
            bad.name,
            bad.witness.as_ref().map(|w| w.to_string()).unwrap_or_default()
        ));
    }
    let prefix = format!("{name}[");
    let passed = r
        .checks_named(&prefix)
        .filter(|c| c.status == Status::Pass)
        .count();
    if passed != want {
        return Err(format!("{}: {passed} {name} checks passed, expected {want}", r.suite));
    }
    Ok(format!("{want} {name}"))
}

fn requires(r: &SuiteReport, names: &[(&str, usize)]) -> Outcome {
    let parts: Result<Vec<String>, String> = names.iter().map(|&(n, w)| require(r, n, w)).collect();
    Ok(parts?.join(", "))
}

fn no_anomalies(r: &SuiteReport, name: &str) -> Result<(), String> {
    let prefix = format!("{name}[");
    let count = r
        .checks_named(&prefix)
        .filter(|c| c.status == Status::Anomaly)
        .count();
    if count == 0 {
        Ok(())
    } else {
        Err(format!("{}: {count} {name} anomalies", r.suite))
    }
}

fn c1() -> Outcome {
    let mut out = Vec::new();
    for (p, n) in [(5, 2), (5, 3), (7, 2)] {
        let r = run(SuiteId::Dimensions, p, n, 0, 1)?;
        requires(&r, &[("dim-W", 1), ("dim-S", 1), ("dim-S-tilde", 1)])?;
        out.push(format!("({p},{n})"));
    }
    Ok(format!("exact counts at {}", out.join(" ")))
}

fn c2() -> Outcome {
    let r2 = run(SuiteId::CharpolyShape, 5, 2, 7, 100)?;
    let a = requires(&r2, &[("p-polynomial-shape", 100), ("restricted-identity", 100)])?;
    let r3 = run(SuiteId::CharpolyShape, 5, 3, 7, 25)?;
    let b = requires(&r3, &[("p-polynomial-shape", 25), ("restricted-identity", 25)])?;
    Ok(format!("W_2: {a}; W_3: {b}"))
}

fn c3() -> Outcome {
    let r2 = run(SuiteId::LemmaFor1, 5, 2, 3, 50)?;
    let a = require(&r2, "identity-dual", 50)?;
    let r3 = run(SuiteId::LemmaFor1, 5, 3, 3, 10)?;
    let fast = r3.checks_named("fast-path-agrees[").count();
    if fast == 0 {
        return Err("W_3: no sample took the fast path".into());
    }
    let b = requires(
        &r3,
        &[("identity-adjugate", 10), ("fast-path-agrees", fast), ("dual-spot-check", 5)],
    )?;
    Ok(format!("W_2: {a}; W_3: {b}"))
}

fn c4() -> Outcome {
    let r = run(SuiteId::PropPro1, 5, 2, 4, 200)?;
    let s = requires(&r, &[("u1-equals-u3", 200), ("routes-agree", 200)])?;
    no_anomalies(&r, "u2-agrees")?;
    let regular = r.checks_named("construction[").count();
    Ok(format!("{s}, {regular} constructed samples, 0 U2 mismatches"))
}

fn c5() -> Outcome {
    let r = run(SuiteId::Invariance, 5, 2, 5, 20)?;
    require(&r, "quotient-invariant", 20).map(|s| format!("{s} (20 x each)"))
}

fn c6() -> Outcome {
    let r = run(SuiteId::PhigDelta, 5, 3, 1, 25)?;
    requires(
        &r,
        &[("quotient-equals-eps", 25), ("constants-trivial", 25), ("minimal-is-characteristic", 25)],
    )
}

fn c7() -> Outcome {
    let d = run(SuiteId::CommutativeDiagram, 5, 3, 6, 100)?;
    let a = requires(&d, &[("diagram-commutes", 100), ("phi0-vanishes", 100), ("sigma-in-sn", 100)])?;
    let s = run(SuiteId::Prop24, 5, 3, 6, 100)?;
    let b = require(&s, "phi0-vanishes", 100)?;
    Ok(format!("{a}; S_3 combinations: {b}"))
}

fn c8() -> Outcome {
    let r = run(SuiteId::OmegaFiber, 5, 3, 8, 25)?;
    let zero = r.checks_named("nilpotent-at-zero[").count();
    if zero < 5 {
        return Err(format!("only {zero} eps = 0 instances"));
    }
    requires(
        &r,
        &[("quotient-equals-eps", 25), ("omega-in-sn", 25), ("nilpotent-at-zero", zero)],
    )
}

fn c9() -> Outcome {
    let r = run(SuiteId::TangentSum, 5, 3, 9, 25)?;
    requires(
        &r,
        &[("tangent-dims", 25), ("stabilizer-trivial", 25), ("orbit-tangent-annihilated", 25)],
    )
}

fn c10() -> Outcome {
    let r = run(SuiteId::BukongDegeneration, 5, 3, 10, 10)?;
    requires(
        &r,
        &[("quotient-constant", 10), ("limit-formula", 10), ("limit-in-sn", 10)],
    )
}

fn c11() -> Outcome {
    let f = Field::prime(5).map_err(|e| e.to_string())?;
    let a = Ambient::new(f, 1).map_err(|e| e.to_string())?;
    let x = TruncPoly::variable(a, 0).map_err(|e| e.to_string())?;
    let mut samples = vec![("(1+x)d".to_string(), &TruncPoly::one(a) + &x)];
    for lambda in 1..5 {
        samples.push((format!("{lambda}x d"), x.scale(lambda)));
    }
    for (label, coeff) in samples {
        let d = Derivation::single(coeff, 0).map_err(|e| e.to_string())?;
        let phi = phi_values(&d).map_err(|e| e.to_string())?;
        let mp = minimal_p_polynomial(&d).map_err(|e| e.to_string())?;
        if phi != [1] || mp.coeffs != [1] || mp.to_string() != "t^5 - t^1" {
            return Err(format!("{label}: phi = {phi:?}, minimal {mp}"));
        }
    }
    Ok("phi_0 = 1 and minimal t^5 - t for 5 elements".into())
}

fn c12() -> Outcome {
    let r = run(SuiteId::PropPro2Evidence, 5, 2, 12, 20)?;
    let s = requires(&r, &[("fiber-point-rank", 20), ("nilpotent-nonregular-rank", 20)])?;
    let labelled = r
        .checks_named("fiber-point-rank[")
        .all(|c| c.anchor.starts_with("sampled evidence"));
    if !labelled {
        return Err("rank checks are not labelled as sampled evidence".into());
    }
    Ok(format!("{s} (sampled evidence)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 12] = [
        ("dimensions of W_n, S_n and its hull", 10, c1),
        ("p-polynomial shape and restricted identity", 120, c2),
        ("M_adx identity", 300, c3),
        ("U1 = U3 on mixed samples", 120, c4),
        ("automorphism invariance of the quotient", 60, c5),
        ("slice Delta_eps in W_2", 30, c6),
        ("commutative diagram and phi_0 on S_3", 300, c7),
        ("Omega^eps in its fiber", 300, c8),
        ("tangent decomposition at slice points", 120, c9),
        ("degeneration to sigma(Delta_1)", 60, c10),
        ("W_1 fiber of t^p - t", 5, c11),
        ("differential rank on fibers", 300, c12),
    ];
    let mut failed = 0;
    for (k, (title, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(s) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{s}; over the {budget} s budget"))
            }
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        println!(
            "criterion {:>2} {tag} {title} [{:.2} s / {budget} s] {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
        if outcome.is_err() {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: 12/12 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 12 criteria failed");
        ExitCode::FAILURE
    }
}
