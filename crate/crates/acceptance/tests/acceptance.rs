//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every line is printed; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use bestofn::verify::{
    antiok_exact_checks, antiok_limit_check, catalan_mean_checks, clt_checks, concentration_bound_checks,
    fair_profit_checks, identity_checks, martingale_checks, negbin_checks, polya_finite_check, polya_integral_checks,
    polya_profit_checks, sampler_checks, Check, VerifyOptions,
};
use serde_json::Value;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_checks(checks: Vec<Check>) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let detail = if failed.is_empty() {
        let worst = checks
            .iter()
            .filter(|c| c.threshold > 0.0)
            .map(|c| c.observed / c.threshold)
            .fold(0.0f64, f64::max);
        format!("{} checks, worst observed/threshold {worst:.3}", checks.len())
    } else {
        failed
            .iter()
            .map(|c| format!("{} (observed {:e}, threshold {:e})", c.check, c.observed, c.threshold))
            .collect::<Vec<_>>()
            .join("; ")
    };
    Outcome {
        pass: failed.is_empty(),
        detail,
    }
}

fn c1() -> Outcome {
    from_checks(catalan_mean_checks(200, &VerifyOptions::default()).unwrap())
}

fn c2() -> Outcome {
    from_checks(negbin_checks(&[5, 10, 20, 40, 64]).unwrap())
}

fn c3() -> Outcome {
    let t = Instant::now();
    let mut checks = clt_checks(10_000, 0.6, 1_000_000, SEED, 0.02).unwrap();
    checks.truncate(1);
    let secs = t.elapsed().as_secs_f64();
    checks.push(Check::at_most("runtime seconds", secs, 120.0));
    from_checks(checks)
}

fn c4() -> Outcome {
    from_checks(fair_profit_checks(10_000).unwrap())
}

fn c5() -> Outcome {
    from_checks(martingale_checks(200).unwrap())
}

fn c6() -> Outcome {
    from_checks(polya_integral_checks().unwrap())
}

fn c7() -> Outcome {
    from_checks(polya_profit_checks(5, &[100, 400, 1600]).unwrap())
}

fn c8() -> Outcome {
    from_checks(vec![polya_finite_check(2000).unwrap()])
}

fn c9() -> Outcome {
    from_checks(antiok_exact_checks(200).unwrap())
}

fn c10() -> Outcome {
    from_checks(vec![antiok_limit_check(10_000, 10).unwrap()])
}

fn c11() -> Outcome {
    from_checks(identity_checks(30, 40, 40, &VerifyOptions::default()).unwrap())
}

fn c12() -> Outcome {
    from_checks(concentration_bound_checks(1_000_000, SEED).unwrap())
}

fn c13() -> Outcome {
    from_checks(sampler_checks(5, 1_000_000, SEED, 0.005, 0.007).unwrap())
}

fn simulate_results(partitions: u32) -> String {
    let parts = partitions.to_string();
    let args = [
        "bestofn", "simulate", "--regime", "polya", "--n1", "2", "--n2", "3", "--n", "12", "--samples", "250000",
        "--seed", "314", "--partitions", &parts,
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = bestofn_cli::main_with(args, &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let v: Value = serde_json::from_slice(&out).unwrap();
    serde_json::to_string(&v["results"]).unwrap()
}

fn c14() -> Outcome {
    let base = simulate_results(1);
    let mut same = 0;
    let mut total = 0;
    for parts in [1, 2, 8, 1, 2, 8] {
        total += 1;
        same += usize::from(simulate_results(parts) == base);
    }
    Outcome {
        pass: same == total,
        detail: format!("{same}/{total} repeated runs byte-identical to the first ({} bytes)", base.len()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("Catalan mean equals exact DP E[Z], n<=200", c1),
        ("negative binomial error within (4pq)^n", c2),
        ("CLT: KS of standardized Z <= 0.02 at n=1e4, 1e6 matches", c3),
        ("fair game E|Z| ratio and optional-stopping bound at n=1e4", c4),
        ("optional-stopping bounds on DP values, n<=200", c5),
        ("Polya limit integral, mass and duality", c6),
        ("Polya symmetric expected profit: exact forms and large-n rate", c7),
        ("Polya(2,1) finite-n win probability near 3/4 at n=2000", c8),
        ("anti-OK closed form equals DP, n<=200", c9),
        ("anti-OK law near 2^-(k+1) at n=1e4", c10),
        ("identity sweeps", c11),
        ("gamma race and negative binomial tail bounds", c12),
        ("sampler equivalence at n=5", c13),
        ("simulate payloads identical across 1, 2, 8 partitions", c14),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        });
        failed += usize::from(!outcome.pass);
        println!(
            "criterion {:>2} {} {name} [{:.1}s] {}",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
