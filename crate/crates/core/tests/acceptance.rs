//! Acceptance run: one PASS/FAIL line per criterion, gate first.
//!
//! Criterion 2 compares the series with the constant as usually printed,
//! whose pi^4 coefficient is off by a factor of two; it is expected to fail
//! and the run succeeds only if the set of failures is exactly that one.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use rug::Rational;

use hsze::closed_form::catalog_entry;
use hsze::lattice::{sinh_eisenstein_g, Route, TruncationPolicy};
use hsze::precision::format_float;
use hsze::ring::{eval_ring, GaussianRational, Monomial, RingExpr};
use hsze::verify::{
    bernoulli_checks, cauchy_mellin_checks, eisenstein_value_checks, h12_gate_check, k_grid, k_three_route_check,
    limit_order_check, parity_checks, radius_independence_check, reciprocity_checks, run_check, suite_checks,
    theorem1_specializations, theorem1_structure_holds, theta_checks, Check, Env, Suite,
};
use hsze::{Context, LatticeBasis, TwistParams};

const EXPECTED_FAILURES: &[u32] = &[2];

const TOL_SERIES_CONST: u32 = 35;
const TOL_CATALOG: u32 = 30;
const TOL_CATALOG_RHO: u32 = 25;
const TOL_EISENSTEIN: u32 = 30;
const TOL_THREE_ROUTE: u32 = 25;
const TOL_DIFF_NUMERIC: u32 = 15;
const TOL_CAUCHY_MELLIN: u32 = 35;
const TOL_QZETA_CLOSED: u32 = 35;
const TOL_QZETA_ROUTES: u32 = 30;
const TOL_RECIPROCITY: u32 = 25;
const TOL_PARITY: u32 = 30;
const TOL_THETA: u32 = 40;
const TOL_H2_MODULAR: u32 = 35;
const TOL_RADIUS: u32 = 35;
const TOL_H12: u32 = 30;
const MAX_SECONDS_1_11: f64 = 1.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn say(line: &str) {
    // written straight to stderr so the lines survive output capture
    let mut e = std::io::stderr();
    writeln!(e, "{line}").ok();
}

/// Runs checks at a pinned tolerance; the detail names the worst record.
fn run_all(env: &Env, checks: &[Check], tol: u32) -> Outcome {
    let mut failed = Vec::new();
    let mut worst: Option<(String, f64)> = None;
    for c in checks {
        assert!(c.tolerance_exp(tol) == tol, "check {} cannot be held to 1e-{tol}", c.id);
        let rec = run_check(c, env, tol, 30);
        let d: f64 = rec.abs_diff.parse().unwrap_or(f64::INFINITY);
        if worst.as_ref().map_or(true, |(_, w)| d > *w) {
            worst = Some((rec.identity_id.clone(), d));
        }
        if !rec.pass {
            failed.push(format!("{} ({})", rec.identity_id, rec.error.unwrap_or(rec.abs_diff)));
        }
    }
    let (wid, wd) = worst.unwrap_or_default();
    let mut detail = format!("{} checks at 1e-{tol}, largest diff {wd:.3e} ({wid})", checks.len());
    if !failed.is_empty() {
        detail.push_str(&format!("; failing: {}", failed.join(", ")));
    }
    Outcome { pass: failed.is_empty(), detail }
}

fn pick(suite: Suite, prefix: &str) -> Vec<Check> {
    suite_checks(suite).into_iter().filter(|c| c.id.starts_with(prefix)).collect()
}

fn term(n: i64, d: i64, pi: i32, w: u32) -> RingExpr {
    RingExpr::term(GaussianRational::real(Rational::from((n, d))), Monomial { pi, w, ..Monomial::default() })
}

fn sum(ts: &[RingExpr]) -> RingExpr {
    ts.iter().fold(RingExpr::zero(), |a, b| &a + b)
}

fn series_vs_constant(ctx: &Context, k: u32, constant: &RingExpr, tol: u32) -> (Outcome, f64) {
    let start = Instant::now();
    let pol = TruncationPolicy::default_for(ctx);
    let half = TwistParams::untwisted(Rational::from((1, 2))).unwrap();
    let g = sinh_eisenstein_g(ctx, k, 1, &half, &LatticeBasis::square(ctx), &pol, Route::RowAccelerated).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let c = eval_ring(constant, &ctx.consts, None).unwrap();
    let d = (&g.value - &c).abs();
    let pass = d <= ctx.tol(tol);
    (Outcome { pass, detail: format!("|diff| = {} at 1e-{tol}, {secs:.3} s", format_float(&d, 4)) }, secs)
}

fn c1(ctx: &Context) -> Outcome {
    // w^4/(15 pi) - 7 pi^3/90 + pi^2/6
    let printed = sum(&[term(1, 15, -1, 4), term(-7, 90, 3, 0), term(1, 6, 2, 0)]);
    let (mut o, secs) = series_vs_constant(ctx, 3, &printed, TOL_SERIES_CONST);
    if secs >= MAX_SECONDS_1_11 {
        o.pass = false;
        o.detail.push_str(" (over the time budget)");
    }
    o
}

fn c2(ctx: &Context) -> Outcome {
    // -w^4 pi/90 + 31 pi^5/2520 - 7 pi^4/720, as printed
    let printed = sum(&[term(-1, 90, 1, 4), term(31, 2520, 5, 0), term(-7, 720, 4, 0)]);
    let (mut o, _) = series_vs_constant(ctx, 5, &printed, TOL_SERIES_CONST);
    let corrected = &catalog_entry("1-11-2").unwrap().value;
    let (fixed, _) = series_vs_constant(ctx, 5, corrected, TOL_SERIES_CONST);
    o.detail.push_str(&format!(
        "; with pi^4 coefficient -7/360 instead: {} ({})",
        if fixed.pass { "agrees" } else { "disagrees" },
        fixed.detail
    ));
    o
}

fn c3(env: &Env) -> Outcome {
    let ids = ["aust-1", "4-2", "4-3", "4-4", "4-5", "4-6", "4-4-2", "4-4-3", "aust-2"];
    let rho_ids = ["e-16", "e-17", "e-18", "e-19", "e-20", "aust-3"];
    let cat = suite_checks(Suite::Catalog);
    let sel = |list: &[&str]| cat.iter().filter(|c| list.contains(&c.id.as_str())).cloned().collect::<Vec<_>>();
    let a = run_all(env, &sel(&ids), TOL_CATALOG);
    let b = run_all(env, &sel(&rho_ids), TOL_CATALOG_RHO);
    Outcome { pass: a.pass && b.pass, detail: format!("square: {}; hexagonal: {}", a.detail, b.detail) }
}

fn c5(env: &Env) -> Outcome {
    let checks: Vec<Check> = k_grid().into_iter().map(|(k, r, z)| k_three_route_check(k, r, z)).collect();
    run_all(env, &checks, TOL_THREE_ROUTE)
}

fn c6() -> Outcome {
    let mut bad = Vec::new();
    for k in 1..=6 {
        for r in 1..=4 {
            if !theorem1_structure_holds(k, r).unwrap() {
                bad.push(format!("k={k} r={r}"));
            }
        }
    }
    for (id, lhs, rhs) in theorem1_specializations() {
        if lhs != rhs {
            bad.push(id.to_string());
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("24 cases + 3 specializations exact; failing: {bad:?}") }
}

fn c7(env: &Env) -> Outcome {
    let exact = run_all(env, &pick(Suite::Theorem1, "diff k="), TOL_CATALOG);
    let numeric = run_all(env, &pick(Suite::Theorem1, "diff generic"), TOL_DIFF_NUMERIC);
    Outcome { pass: exact.pass && numeric.pass, detail: format!("exact: {}; (1,2i): {}", exact.detail, numeric.detail) }
}

fn c9(env: &Env) -> Outcome {
    let closed: Vec<Check> = suite_checks(Suite::Qzeta).into_iter().filter(|c| c.id.starts_with("5-1")).collect();
    let a = run_all(env, &closed, TOL_QZETA_CLOSED);
    let mut routes = pick(Suite::Qzeta, "prop5.1");
    routes.extend(pick(Suite::Qzeta, "rel-G1"));
    let b = run_all(env, &routes, TOL_QZETA_ROUTES);
    Outcome { pass: a.pass && b.pass, detail: format!("closed forms: {}; routes: {}", a.detail, b.detail) }
}

fn c10(env: &Env) -> Outcome {
    let a = run_all(env, &reciprocity_checks(), TOL_RECIPROCITY);
    let b = run_all(env, &parity_checks(), TOL_PARITY);
    Outcome { pass: a.pass && b.pass, detail: format!("reciprocity: {}; parity: {}", a.detail, b.detail) }
}

fn c11(env: &Env) -> Outcome {
    let theta: Vec<Check> = theta_checks().into_iter().filter(|c| c.id.starts_with("theta")).collect();
    let h2: Vec<Check> = theta_checks().into_iter().filter(|c| c.id.starts_with("H2")).collect();
    let parts = [
        ("theta", run_all(env, &theta, TOL_THETA)),
        ("H2 modular", run_all(env, &h2, TOL_H2_MODULAR)),
        ("bernoulli", run_all(env, &bernoulli_checks(), TOL_CATALOG)),
        ("radius", run_all(env, &[radius_independence_check()], TOL_RADIUS)),
        ("limit order", run_all(env, &[limit_order_check()], TOL_CATALOG)),
    ];
    let pass = parts.iter().all(|(_, o)| o.pass);
    let detail = parts.iter().map(|(n, o)| format!("{n}: {}", o.detail)).collect::<Vec<_>>().join("; ");
    Outcome { pass, detail }
}

fn main() {
    let ctx = Context::default();
    let pol = TruncationPolicy::default_for(&ctx);
    let env = Env { ctx: &ctx, policy: &pol, route: Route::RowAccelerated };
    let total = Instant::now();

    let gate = run_all(&env, &[h12_gate_check()], TOL_H12);
    say(&format!("{} [12] H12 recurrence gate: {}", if gate.pass { "PASS" } else { "FAIL" }, gate.detail));
    if !gate.pass {
        say("gate failed; the exact layer is not trusted, stopping");
        std::process::exit(1);
    }

    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "1-11 series vs constant", Box::new(|| c1(&ctx))),
        (2, "1-11-2 series vs printed constant", Box::new(|| c2(&ctx))),
        (3, "example catalog", Box::new(|| c3(&env))),
        (4, "Eisenstein values", Box::new(|| run_all(&env, &eisenstein_value_checks(), TOL_EISENSTEIN))),
        (5, "three-route K grid", Box::new(|| c5(&env))),
        (6, "exact right-hand side structure", Box::new(c6)),
        (7, "z-derivative relation", Box::new(|| c7(&env))),
        (8, "single sinh sums", Box::new(|| run_all(&env, &cauchy_mellin_checks(), TOL_CAUCHY_MELLIN))),
        (9, "q-zeta values and routes", Box::new(|| c9(&env))),
        (10, "reciprocity and parity", Box::new(|| c10(&env))),
        (11, "property suites", Box::new(|| c11(&env))),
    ];

    let mut failures = BTreeSet::new();
    for (n, name, f) in &criteria {
        let start = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && EXPECTED_FAILURES.contains(n) { " (expected)" } else { "" };
        say(&format!("{status} [{n}] {name}{note}: {} [{:.1} s]", o.detail, start.elapsed().as_secs_f64()));
        if !o.pass {
            failures.insert(*n);
        }
    }
    let expected: BTreeSet<u32> = EXPECTED_FAILURES.iter().copied().collect();
    say(&format!(
        "acceptance: {} of 12 criteria pass, failures {:?}, expected {:?}, {:.1} s",
        12 - failures.len(),
        failures,
        expected,
        total.elapsed().as_secs_f64()
    ));
    if failures != expected {
        std::process::exit(1);
    }
}
