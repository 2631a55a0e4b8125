//! Verification suites: every identity is a [`Check`] that produces both
//! sides numerically, and [`run`] turns a [`RunConfig`] into a [`Report`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::bernoulli::{bernoulli_poly, bernoulli_poly_high, binomial};
use crate::closed_form::{
    catalog_entry, catalog_lhs_series, diff_relation_check, example_catalog, k_from_series, theorem1_rhs,
    theorem1_rhs_at, worked_examples, BasisTag, CheckMode, K_closed,
};
use crate::eisenstein_exact::{eisenstein_exact, hurwitz_h_number, ExactLattice};
use crate::error::{Error, Result};
use crate::kernel::{default_radius, hurwitz_number, GenE, GenK, K_coeff};
use crate::lattice::{
    cauchy_mellin_sum, check_case, eisenstein_g, naive_box_sum, sinh_alternating_sum, sinh_eisenstein_g, Route,
    TruncationPolicy, DEFAULT_MAX_M, DEFAULT_MAX_N,
};
use crate::params::{LatticeBasis, TwistParams};
use crate::precision::{format_float, rel_floor, ten_pow_neg, Context, HPComplex, PrecisionConfig, DEFAULT_BITS};
use crate::qzeta::{f_q, f_q_closed, q_exp_minus_two_pi, qzeta_catalog, sinh_power_identity, QParams};
use crate::ring::{eval_ring, Generator, RingExpr};
use crate::theta::theta;

pub const REPORT_SCHEMA: u32 = 1;
pub const MIN_TOLERANCE_EXP: u32 = 10;
pub const DEFAULT_TOLERANCE_EXP: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Theorem1,
    Catalog,
    Qzeta,
    Properties,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Theorem1 => "theorem1",
            Suite::Catalog => "catalog",
            Suite::Qzeta => "qzeta",
            Suite::Properties => "properties",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "core" => Suite::Core,
            "theorem1" => Suite::Theorem1,
            "catalog" => Suite::Catalog,
            "qzeta" => Suite::Qzeta,
            "properties" => Suite::Properties,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "text" => OutputFormat::Text,
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            _ => return Err(Error::Parse(format!("unknown output format {s:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub tolerance_exp: u32,
    pub suite: Suite,
    pub output_format: OutputFormat,
    pub max_m: u64,
    pub max_n: u64,
    pub route: Route,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision_bits: DEFAULT_BITS,
            tolerance_exp: DEFAULT_TOLERANCE_EXP,
            suite: Suite::Core,
            output_format: OutputFormat::Text,
            max_m: DEFAULT_MAX_M,
            max_n: DEFAULT_MAX_N,
            route: Route::RowAccelerated,
            jobs: 1,
        }
    }
}

impl RunConfig {
    /// The precision requirement is checked against the working precision
    /// (requested bits plus guard bits).
    pub fn validate(&self) -> Result<()> {
        if self.tolerance_exp < MIN_TOLERANCE_EXP {
            return Err(Error::InvalidConfig(format!(
                "tolerance exponent must be at least {MIN_TOLERANCE_EXP}, got {}",
                self.tolerance_exp
            )));
        }
        let cfg = PrecisionConfig::with_bits(self.precision_bits)?;
        let needed = required_bits(self.tolerance_exp);
        if (cfg.working_bits() as u64) < needed {
            return Err(Error::InvalidConfig(format!(
                "tolerance 1e-{} needs at least {needed} working bits, have {}",
                self.tolerance_exp,
                cfg.working_bits()
            )));
        }
        if self.route == Route::ClosedForm {
            return Err(Error::InvalidConfig("route must be accel or naive".into()));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidConfig("jobs must be positive".into()));
        }
        let ctx = Context::new(cfg);
        TruncationPolicy::with_caps(&ctx, self.max_m, self.max_n)?;
        Ok(())
    }
}

/// `ceil(2 * digits * 3.33) + 64`.
pub fn required_bits(tolerance_exp: u32) -> u64 {
    (tolerance_exp as u64 * 666).div_ceil(100) + 64
}

/// Numeric outcome of one check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub lhs: HPComplex,
    pub rhs: HPComplex,
    pub abs_diff: Float,
    pub route: String,
    pub terms_used: u64,
    /// Replaces the configured tolerance, for checks whose bound is data driven.
    pub tolerance: Option<Float>,
}

impl Outcome {
    pub fn pair(lhs: HPComplex, rhs: HPComplex, route: impl Into<String>, terms_used: u64) -> Self {
        let abs_diff = (&lhs - &rhs).abs();
        Self { lhs, rhs, abs_diff, route: route.into(), terms_used, tolerance: None }
    }

    /// An exact identity: the difference is `0` when it holds and `inf` when
    /// it does not; `lhs`/`rhs` carry numeric evaluations for display.
    pub fn exact(holds: bool, lhs: HPComplex, rhs: HPComplex) -> Self {
        let p = lhs.prec();
        let abs_diff = if holds { Float::new(p) } else { Float::with_val(p, rug::float::Special::Infinity) };
        Self { lhs, rhs, abs_diff, route: "exact".into(), terms_used: 0, tolerance: None }
    }

    /// A residual compared against zero.
    pub fn residual(res: Float, route: impl Into<String>, terms_used: u64) -> Self {
        let p = res.prec();
        Self::pair(HPComplex::from_real(res), HPComplex::zero(p), route, terms_used)
    }
}

/// Shared state for running checks.
pub struct Env<'a> {
    pub ctx: &'a Context,
    pub policy: &'a TruncationPolicy,
    pub route: Route,
}

type CheckFn = dyn Fn(&Env) -> Result<Outcome> + Send + Sync;

#[derive(Clone)]
pub struct Check {
    pub id: String,
    /// Largest tolerance exponent the check is held to.
    pub cap: Option<u32>,
    run: Arc<CheckFn>,
}

impl fmt::Debug for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Check").field("id", &self.id).field("cap", &self.cap).finish()
    }
}

impl Check {
    pub fn new(id: impl Into<String>, cap: Option<u32>, f: impl Fn(&Env) -> Result<Outcome> + Send + Sync + 'static) -> Self {
        Self { id: id.into(), cap, run: Arc::new(f) }
    }

    pub fn evaluate(&self, env: &Env) -> Result<Outcome> {
        (self.run)(env)
    }

    pub fn tolerance_exp(&self, requested: u32) -> u32 {
        self.cap.map_or(requested, |c| c.min(requested))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationRecord {
    pub identity_id: String,
    pub lhs_value: String,
    pub rhs_value: String,
    pub abs_diff: String,
    pub tolerance: String,
    pub pass: bool,
    pub route: String,
    pub terms_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Decimal digits printed for values at `bits` of precision.
pub fn output_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

/// Runs one check at tolerance `10^-tolerance_exp` (after the check's cap).
pub fn run_check(check: &Check, env: &Env, tolerance_exp: u32, digits: usize) -> VerificationRecord {
    let start = Instant::now();
    let outcome = check.evaluate(env);
    let wall = format!("{:.3}", start.elapsed().as_secs_f64());
    match outcome {
        Ok(o) => {
            let p = env.ctx.prec();
            let tol = o.tolerance.clone().unwrap_or_else(|| ten_pow_neg(check.tolerance_exp(tolerance_exp), p));
            let bound = Float::with_val(p, &tol * rel_floor(&o.lhs, &o.rhs));
            let pass = o.abs_diff.is_finite() && o.abs_diff <= bound;
            VerificationRecord {
                identity_id: check.id.clone(),
                lhs_value: o.lhs.to_decimal(digits),
                rhs_value: o.rhs.to_decimal(digits),
                abs_diff: if o.abs_diff.is_finite() { format_float(&o.abs_diff, 6) } else { "inf".into() },
                tolerance: format_float(&tol, 6),
                pass,
                route: o.route,
                terms_used: o.terms_used,
                wall_time: Some(wall),
                error: None,
            }
        }
        Err(e) => VerificationRecord {
            identity_id: check.id.clone(),
            lhs_value: "nan".into(),
            rhs_value: "nan".into(),
            abs_diff: "nan".into(),
            tolerance: format_float(&ten_pow_neg(check.tolerance_exp(tolerance_exp), 64), 6),
            pass: false,
            route: "error".into(),
            terms_used: 0,
            wall_time: Some(wall),
            error: Some(e.to_string()),
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportConfig {
    pub precision_bits: u32,
    pub tolerance_exp: u32,
    pub suite: Suite,
    pub route: String,
    pub max_m: u64,
    pub max_n: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: ReportConfig,
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// The report without timing fields, the form used for determinism comparisons.
    pub fn canonical(&self) -> Report {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.wall_time = None;
        }
        r
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let status = if r.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {:<28} diff={:<14} tol={:<8} route={} terms={}",
                r.identity_id, r.abs_diff, r.tolerance, r.route, r.terms_used
            ));
            if let Some(t) = &r.wall_time {
                out.push_str(&format!(" time={t}s"));
            }
            if let Some(e) = &r.error {
                out.push_str(&format!(" error={e}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("passed {} failed {}\n", self.summary.passed, self.summary.failed));
        out
    }

    fn render_csv(&self) -> String {
        let header = ["identity_id", "lhs_value", "rhs_value", "abs_diff", "tolerance", "pass", "route", "terms_used", "wall_time", "error"];
        let rows = self.records.iter().map(|r| {
            vec![
                r.identity_id.clone(),
                r.lhs_value.clone(),
                r.rhs_value.clone(),
                r.abs_diff.clone(),
                r.tolerance.clone(),
                r.pass.to_string(),
                r.route.clone(),
                r.terms_used.to_string(),
                r.wall_time.clone().unwrap_or_default(),
                r.error.clone().unwrap_or_default(),
            ]
        });
        to_csv(&header, rows)
    }
}

/// Renders a header and rows as CSV text.
pub fn to_csv<I: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: I) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

/// Validates `cfg`, runs its suite on `cfg.jobs` threads and collects the
/// records ordered by identity id.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let ctx = Context::with_bits(cfg.precision_bits)?;
    let policy = TruncationPolicy::with_caps(&ctx, cfg.max_m, cfg.max_n)?;
    let env = Env { ctx: &ctx, policy: &policy, route: cfg.route };
    let checks = suite_checks(cfg.suite);
    let digits = output_digits(cfg.precision_bits);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let mut records: Vec<VerificationRecord> =
        pool.install(|| checks.par_iter().map(|c| run_check(c, &env, cfg.tolerance_exp, digits)).collect());
    records.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
    let passed = records.iter().filter(|r| r.pass).count();
    let failed = records.len() - passed;
    Ok(Report {
        schema: REPORT_SCHEMA,
        config: ReportConfig {
            precision_bits: cfg.precision_bits,
            tolerance_exp: cfg.tolerance_exp,
            suite: cfg.suite,
            route: cfg.route.as_str().into(),
            max_m: cfg.max_m,
            max_n: cfg.max_n,
        },
        records,
        summary: Summary { passed, failed },
    })
}

pub fn suite_checks(suite: Suite) -> Vec<Check> {
    let mut v = match suite {
        Suite::Core => core_checks(),
        Suite::Theorem1 => theorem1_checks(),
        Suite::Catalog => catalog_checks(),
        Suite::Qzeta => qzeta_checks(),
        Suite::Properties => property_checks(),
        Suite::All => {
            let mut v = catalog_checks();
            v.extend(theorem1_checks());
            v.extend(qzeta_checks());
            v.extend(property_checks());
            v.extend(core_only_checks());
            v
        }
    };
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v.dedup_by(|a, b| a.id == b.id);
    v
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn exact_tag(lat: ExactLattice) -> &'static str {
    match lat {
        ExactLattice::Square => "i",
        ExactLattice::Hexagonal => "rho",
    }
}

fn exact_basis(ctx: &Context, lat: ExactLattice) -> LatticeBasis {
    match lat {
        ExactLattice::Square => LatticeBasis::square(ctx),
        ExactLattice::Hexagonal => LatticeBasis::hexagonal(ctx),
    }
}

fn eval(ctx: &Context, e: &RingExpr) -> Result<HPComplex> {
    eval_ring(e, &ctx.consts, None)
}

// ---- core ----

const CORE_CATALOG: [&str; 8] = ["1-11", "1-11-2", "4-2", "4-3", "4-4", "4-5", "4-6", "4-4-3"];

fn core_checks() -> Vec<Check> {
    let mut v: Vec<Check> = CORE_CATALOG.iter().map(|id| catalog_check(id)).collect();
    v.extend(qzeta_closed_checks());
    v.extend(core_only_checks());
    v
}

fn core_only_checks() -> Vec<Check> {
    vec![
        Check::new("H2(1,i)", None, |env| {
            let v = hurwitz_number(env.ctx, 2, &LatticeBasis::square(env.ctx))?;
            Ok(Outcome::pair(v, env.ctx.pi().scale_i64(2), "contour", 0))
        }),
        Check::new("G4(i)", None, |env| {
            let v = eisenstein_g(env.ctx, 4, &env.ctx.i())?;
            Ok(Outcome::pair(v, eval(env.ctx, &eisenstein_exact(ExactLattice::Square, 4))?, "lattice", 0))
        }),
    ]
}

// ---- catalog ----

fn catalog_check(id: &str) -> Check {
    let entry = catalog_entry(id).unwrap_or_else(|| panic!("unknown catalog id {id}"));
    let cap = Some(entry.tol_digits);
    Check::new(entry.id, cap, move |env| {
        let s = catalog_lhs_series(env.ctx, &entry.lhs, env.policy, env.route)?;
        Ok(Outcome::pair(s.value, eval(env.ctx, &entry.value)?, s.route.as_str(), s.terms_used))
    })
}

fn catalog_checks() -> Vec<Check> {
    example_catalog().iter().map(|e| catalog_check(e.id)).collect()
}

// ---- theorem 1 ----

pub const K_GRID_CAP: u32 = 25;
pub const DIFF_GENERIC_CAP: u32 = 15;

/// `K_{k,r}(0,0,z;1,i)` by contour, lattice series and closed form; the
/// reported difference is the largest pairwise one.
pub fn k_three_route_check(k: u32, r: u32, z: Rational) -> Check {
    let id = format!("K3 k={k} r={r} z={z}");
    Check::new(id, Some(K_GRID_CAP), move |env| {
        let ctx = env.ctx;
        let params = TwistParams::untwisted(z.clone())?;
        let basis = LatticeBasis::square(ctx);
        let contour = K_coeff(ctx, k, r, &params, &basis)?;
        let series = k_from_series(ctx, k, r, &params, &basis, env.policy, env.route)?;
        let closed = K_closed(ctx, k, r, &params, &BasisTag::Square)?.to_complex(ctx)?;
        let d = [(&contour - &series.value).abs(), (&contour - &closed).abs(), (&series.value - &closed).abs()]
            .into_iter()
            .fold(Float::new(ctx.prec()), |a, b| a.max(&b));
        let mut o = Outcome::pair(series.value, closed, series.route.as_str(), series.terms_used);
        o.abs_diff = d;
        Ok(o)
    })
}

pub fn k_grid() -> Vec<(u32, u32, Rational)> {
    let mut v = Vec::new();
    for k in 1..=5 {
        for r in 1..=3 {
            for z in [q(1, 4), q(1, 2), q(3, 4)] {
                if check_case(k, r, &TwistParams::untwisted(z.clone()).expect("valid z")).is_ok() {
                    v.push((k, r, z));
                }
            }
        }
    }
    v
}

/// Membership in `Q[pi, w^4, z]` and the degree bounds, on every interval.
pub fn theorem1_structure_holds(k: u32, r: u32) -> Result<bool> {
    for iv in theorem1_rhs(k, r)? {
        let e = &iv.expr;
        if !e.has_real_coefficients() {
            return Ok(false);
        }
        for (m, _) in e.terms() {
            if m.wt != 0 || m.s3 != 0 || m.w % 4 != 0 || m.pi < 0 {
                return Ok(false);
            }
        }
        let pi_ok = e.degree_in(Generator::Pi).unwrap_or(0) <= (k + r) as i64;
        let w_ok = e.degree_in(Generator::W).unwrap_or(0) <= 4 * ((k + r) / 4) as i64;
        let z_ok = e.degree_in(Generator::Z).unwrap_or(0) <= (k - 1) as i64;
        if !(pi_ok && w_ok && z_ok) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact `theorem1_rhs` specializations: `1-11`, `1-11-2` at `z = 1/2`,
/// and the two endpoint values summing to twice `aust-1`.
pub fn theorem1_specializations() -> Vec<(&'static str, RingExpr, RingExpr)> {
    let pi = RingExpr::pi();
    let mut v = Vec::new();
    for (k, id) in [(3, "1-11"), (5, "1-11-2")] {
        let lhs = theorem1_rhs_at(k, 1, &q(1, 2)).expect("admissible");
        let rhs = &pi * &catalog_entry(id).expect("catalog id").value;
        v.push((id, lhs, rhs));
    }
    let e = theorem1_rhs(3, 1).expect("admissible").remove(0).expr;
    let lhs = &e.substitute_z(&q(0, 1)) + &e.substitute_z(&q(1, 1));
    let rhs = (&pi * &catalog_entry("aust-1").expect("catalog id").value).scale_rational(&q(2, 1));
    v.push(("aust-1", lhs, rhs));
    v
}

fn theorem1_checks() -> Vec<Check> {
    let mut v: Vec<Check> = k_grid().into_iter().map(|(k, r, z)| k_three_route_check(k, r, z)).collect();
    for (id, k, r, expr) in worked_examples() {
        v.push(Check::new(id, None, move |env| {
            let got = theorem1_rhs(k, r)?.remove(0).expr;
            let z = q(1, 3);
            let a = eval_ring(&got, &env.ctx.consts, Some(&z))?;
            let b = eval_ring(&expr, &env.ctx.consts, Some(&z))?;
            Ok(Outcome::exact(got == expr, a, b))
        }));
    }
    for k in 1..=6u32 {
        for r in 1..=4u32 {
            v.push(Check::new(format!("T1 structure k={k} r={r}"), None, move |env| {
                let ok = theorem1_structure_holds(k, r)?;
                Ok(Outcome::exact(ok, env.ctx.zero(), env.ctx.zero()))
            }));
        }
    }
    for (id, lhs, rhs) in theorem1_specializations() {
        v.push(Check::new(format!("T1 specialization {id}"), None, move |env| {
            Ok(Outcome::exact(lhs == rhs, eval(env.ctx, &lhs)?, eval(env.ctx, &rhs)?))
        }));
    }
    for k in 3..=6u32 {
        for r in 1..=3u32 {
            v.push(Check::new(format!("diff k={k} r={r}"), None, move |env| {
                let p = TwistParams::untwisted(q(1, 3))?;
                let c = diff_relation_check(env.ctx, k, r, &p, &BasisTag::Square)?;
                let z = env.ctx.zero();
                Ok(Outcome::exact(c.passed && c.mode == CheckMode::Exact, HPComplex::from_real(c.residual), z))
            }));
        }
    }
    v.push(Check::new("diff generic (1,2i)", Some(DIFF_GENERIC_CAP), |env| {
        let ctx = env.ctx;
        let b = LatticeBasis::new(ctx.one(), ctx.i().scale_i64(2))?;
        let p = TwistParams::new(q(1, 4), q(0, 1), q(2, 5))?;
        let c = diff_relation_check(ctx, 3, 2, &p, &BasisTag::Generic(b))?;
        Ok(Outcome::residual(c.residual, "contour", 0))
    }));
    v
}

// ---- q-zeta ----

fn qzeta_closed_checks() -> Vec<Check> {
    qzeta_catalog()
        .into_iter()
        .map(|(id, k, expr)| {
            Check::new(id, None, move |env| {
                let ctx = env.ctx;
                let p = QParams::integer(ctx, q_exp_minus_two_pi(ctx), 2 * k as i64, k as i64)?;
                let series = f_q(ctx, &p)?;
                let closed = f_q_closed(k)?;
                if closed.expr != expr {
                    return Ok(Outcome::exact(false, series, eval(ctx, &expr)?));
                }
                Ok(Outcome::pair(series, closed.eval(ctx)?, "direct", 0))
            })
        })
        .collect()
}

fn qzeta_checks() -> Vec<Check> {
    let mut v = qzeta_closed_checks();
    for k in 1..=4u32 {
        v.push(Check::new(format!("prop5.1 k={k}"), Some(30), move |env| {
            let (a, b) = sinh_power_identity(env.ctx, k, env.policy)?;
            Ok(Outcome::pair(a, b, "direct", 0))
        }));
    }
    for k in 1..=2u32 {
        v.push(Check::new(format!("rel-G1 k={k}"), Some(30), move |env| {
            let ctx = env.ctx;
            let sq = LatticeBasis::square(ctx);
            let half = TwistParams::untwisted(q(1, 2))?;
            let a = sinh_eisenstein_g(ctx, 1, 2 * k + 1, &half, &sq, env.policy, env.route)?;
            let b = sinh_eisenstein_g(ctx, 2, 2 * k, &half, &sq, env.policy, env.route)?;
            Ok(Outcome::pair(a.value, &b.value / &ctx.pi(), a.route.as_str(), a.terms_used + b.terms_used))
        }));
    }
    v
}

// ---- properties ----

pub const H12_GATE_ID: &str = "H12 gate";

/// `hurwitz_number(12, (1,i)) / (-(2w)^12)` against the recurrence value.
pub fn h12_gate_check() -> Check {
    Check::new(H12_GATE_ID, Some(30), |env| {
        let ctx = env.ctx;
        let num = hurwitz_number(ctx, 12, &LatticeBasis::square(ctx))?;
        let two_w = HPComplex::from_real(Float::with_val(ctx.prec(), &ctx.consts.lemniscate * 2u32));
        let ratio = &num / &(-two_w.powi(12)?);
        Ok(Outcome::pair(ratio, ctx.rat(&hurwitz_h_number(12)), "contour", 0))
    })
}

pub fn eisenstein_value_checks() -> Vec<Check> {
    let cases = [
        (ExactLattice::Square, 2),
        (ExactLattice::Square, 4),
        (ExactLattice::Square, 8),
        (ExactLattice::Square, 12),
        (ExactLattice::Hexagonal, 6),
        (ExactLattice::Hexagonal, 12),
    ];
    cases
        .into_iter()
        .map(|(lat, w)| {
            Check::new(format!("G{w}({})", exact_tag(lat)), Some(30), move |env| {
                let b = exact_basis(env.ctx, lat);
                let v = eisenstein_g(env.ctx, w, &b.tau)?;
                Ok(Outcome::pair(v, eval(env.ctx, &eisenstein_exact(lat, w))?, "lattice", 0))
            })
        })
        .collect()
}

pub fn cauchy_mellin_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for k in 0..=2u32 {
        v.push(Check::new(format!("cauchy-mellin k={k}"), None, move |env| {
            let c = cauchy_mellin_sum(env.ctx, k);
            Ok(Outcome::pair(c.lhs, c.rhs, "direct", c.terms_used))
        }));
    }
    for j in [-1i64, -5, -9] {
        v.push(Check::new(format!("S({j})"), None, move |env| {
            let ctx = env.ctx;
            let lhs = sinh_alternating_sum(ctx, j);
            let rhs = if j == -1 { ctx.pi().scale_i64(-4).recip()? } else { ctx.zero() };
            Ok(Outcome::pair(lhs, rhs, "direct", 0))
        }));
    }
    v
}

/// `G_1^<1>(tau) + G_1^<1>(-1/tau) = -2 + (tau^2 - 1) pi / (3 tau i)`.
pub fn reciprocity_checks() -> Vec<Check> {
    let taus: [(&str, (i64, i64), (i64, i64)); 3] = [("i", (0, 1), (1, 1)), ("2i", (0, 1), (2, 1)), ("(1+3i)/2", (1, 2), (3, 2))];
    taus.into_iter()
        .map(|(name, re, im)| {
            Check::new(format!("reciprocity tau={name}"), Some(25), move |env| {
                let ctx = env.ctx;
                let tau = HPComplex::from_rationals(&q(re.0, re.1), &q(im.0, im.1), ctx.prec());
                let half = TwistParams::untwisted(q(1, 2))?;
                let b1 = LatticeBasis::from_tau(ctx, tau.clone())?;
                let b2 = LatticeBasis::from_tau(ctx, -tau.recip()?)?;
                let a = sinh_eisenstein_g(ctx, 1, 1, &half, &b1, env.policy, env.route)?;
                let b = sinh_eisenstein_g(ctx, 1, 1, &half, &b2, env.policy, env.route)?;
                let rhs = &HPComplex::from_i64(-2, ctx.prec())
                    + &(&(&tau.square() - &ctx.one()) * &ctx.pi()) / &tau.mul_i().scale_i64(3);
                Ok(Outcome::pair(&a.value + &b.value, rhs, a.route.as_str(), a.terms_used + b.terms_used))
            })
        })
        .collect()
}

pub fn parity_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for k in 1..=6u32 {
        for r in 1..=6u32 {
            let half = TwistParams::untwisted(q(1, 2)).expect("valid z");
            if (k + r) % 2 == 0 || check_case(k, r, &half).is_err() {
                continue;
            }
            v.push(Check::new(format!("parity k={k} r={r}"), Some(30), move |env| {
                let sq = LatticeBasis::square(env.ctx);
                let g = sinh_eisenstein_g(env.ctx, k, r, &half, &sq, env.policy, env.route)?;
                Ok(Outcome::residual(g.value.abs(), g.route.as_str(), g.terms_used))
            }));
        }
    }
    v
}

/// Deterministic sample points in `[-3, 3] x [-1.2, 1.2]` from an
/// additive-recurrence sequence.
fn sample_points(ctx: &Context, n: usize) -> Vec<HPComplex> {
    let (a1, a2) = (0.754_877_666_246_692_7_f64, 0.569_840_290_998_053_2_f64);
    (1..=n)
        .map(|j| {
            let u = (j as f64 * a1).fract();
            let w = (j as f64 * a2).fract();
            HPComplex::new(ctx.real(6.0 * u - 3.0), ctx.real(2.4 * w - 1.2))
        })
        .collect()
}

fn theta_taus(ctx: &Context) -> Vec<(&'static str, HPComplex)> {
    vec![
        ("i", ctx.i()),
        ("2i", ctx.i().scale_i64(2)),
        ("1/2+i", HPComplex::new(ctx.real(0.5), ctx.real(1))),
        ("rho", ctx.consts.rho.clone()),
    ]
}

fn max_rel_residual(pairs: impl Iterator<Item = Result<(HPComplex, HPComplex)>>, prec: u32) -> Result<Float> {
    let mut worst = Float::new(prec);
    for pr in pairs {
        let (a, b) = pr?;
        let r = Float::with_val(prec, (&a - &b).abs() / rel_floor(&a, &b));
        worst = worst.max(&r);
    }
    Ok(worst)
}

pub fn theta_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for idx in 0..4usize {
        v.push(Check::new(format!("theta odd tau#{idx}"), Some(40), move |env| {
            let ctx = env.ctx;
            let (_, tau) = theta_taus(ctx).swap_remove(idx);
            let pts = sample_points(ctx, 20);
            let res = max_rel_residual(
                pts.iter().map(|z| Ok((theta(&-z, &tau, 0)?, -theta(z, &tau, 0)?))),
                ctx.prec(),
            )?;
            Ok(Outcome::residual(res, "series", 20))
        }));
        v.push(Check::new(format!("theta quasi-periodic tau#{idx}"), Some(40), move |env| {
            let ctx = env.ctx;
            let (_, tau) = theta_taus(ctx).swap_remove(idx);
            let pi_i = ctx.pi().mul_i();
            let pts = sample_points(ctx, 20);
            let res = max_rel_residual(
                pts.iter().flat_map(|z| {
                    let t = theta(z, &tau, 0);
                    let one = theta(&(z + &ctx.one()), &tau, 0);
                    let f = (&(&(-&pi_i) * &tau) - &(&pi_i.scale_i64(2) * z)).exp();
                    let sh = theta(&(z + &tau), &tau, 0);
                    [
                        one.and_then(|a| Ok((a, -t.clone()?))),
                        sh.and_then(|a| Ok((a, -(&f * &t.clone()?)))),
                    ]
                }),
                ctx.prec(),
            )?;
            Ok(Outcome::residual(res, "series", 40))
        }));
        v.push(Check::new(format!("H2 modular tau#{idx}"), Some(35), move |env| {
            // H_2(1, -1/tau) = tau^2 H_2(1, tau) - 4 pi i tau
            let ctx = env.ctx;
            let (_, tau) = theta_taus(ctx).swap_remove(idx);
            let b = LatticeBasis::from_tau(ctx, tau.clone())?;
            let b_inv = LatticeBasis::from_tau(ctx, -tau.recip()?)?;
            let lhs = hurwitz_number(ctx, 2, &b_inv)?;
            let rhs = &(&tau.square() * &hurwitz_number(ctx, 2, &b)?) - &(&ctx.two_pi_i().scale_i64(2) * &tau);
            Ok(Outcome::pair(lhs, rhs, "contour", 0))
        }));
    }
    v
}

pub fn bernoulli_checks() -> Vec<Check> {
    let reduction = Check::new("bernoulli order-one reduction", None, |env| {
        let ok = (0..=30).all(|m| bernoulli_poly_high(m, 1) == bernoulli_poly(m));
        Ok(Outcome::exact(ok, env.ctx.zero(), env.ctx.zero()))
    });
    let odd = Check::new("bernoulli odd at 1/2", None, |env| {
        let ok = (0..=15).all(|j| bernoulli_poly(2 * j + 1).eval(&q(1, 2)) == 0);
        Ok(Outcome::exact(ok, env.ctx.zero(), env.ctx.zero()))
    });
    let conv = Check::new("bernoulli convolution", None, |env| {
        // B_m^<r+s>(x) = sum_j C(m,j) B_j^<r>(x) B_{m-j}^<s>(x)
        let mut ok = true;
        for x in [q(2, 7), q(-3, 5), q(7, 4)] {
            for (r, s) in [(1, 1), (1, 2), (2, 3)] {
                for m in 0..=12u32 {
                    let lhs = bernoulli_poly_high(m, r + s).eval(&x);
                    let mut rhs = Rational::new();
                    for j in 0..=m {
                        let t = bernoulli_poly_high(j, r).eval(&x) * bernoulli_poly_high(m - j, s).eval(&x);
                        rhs += t * Integer::from(binomial(m, j));
                    }
                    ok &= lhs == rhs;
                }
            }
        }
        Ok(Outcome::exact(ok, env.ctx.zero(), env.ctx.zero()))
    });
    vec![reduction, odd, conv]
}

/// Laurent and Taylor coefficients extracted on two radii.
pub fn radius_independence_check() -> Check {
    Check::new("contour radius independence", None, |env| {
        let ctx = env.ctx;
        let p = ctx.prec();
        let basis = LatticeBasis::square(ctx);
        let mut worst = Float::new(p);
        let e = GenE::new(ctx, &q(1, 4), &q(1, 3), &basis)?;
        let r = default_radius(&basis, false);
        let half = Float::with_val(p, &r / 2u32);
        let a = e.laurent(ctx, 8, Some(&r))?;
        let b = e.laurent(ctx, 8, Some(&half))?;
        for j in -1..7 {
            worst = worst.max(&Float::with_val(p, (&a.coeff(j) - &b.coeff(j)).abs() / rel_floor(&a.coeff(j), &b.coeff(j))));
        }
        let params = TwistParams::new(q(1, 4), q(1, 3), q(1, 2))?;
        let rk = default_radius(&basis, true);
        let hk = Float::with_val(p, &rk / 2u32);
        let ka = GenK::with_radius(ctx, 2, &params, &basis, Some(&rk))?.taylor(ctx, 4, Some(&rk))?;
        let kb = GenK::with_radius(ctx, 2, &params, &basis, Some(&hk))?.taylor(ctx, 4, Some(&hk))?;
        for (x, y) in ka.iter().zip(&kb) {
            worst = worst.max(&Float::with_val(p, (x - y).abs() / rel_floor(x, y)));
        }
        Ok(Outcome::residual(worst, "contour", 0))
    })
}

pub const LIMIT_ORDER_BITS: u32 = 64;
pub const LIMIT_ORDER_FACTOR: u32 = 5;

/// Box sums with shapes `(T,T)`, `(T,2T)`, `(2T,T)` at `T = 200, 400`: the
/// spread between shapes at `T = 400` must stay within five times the
/// change observed from `T = 200` to `T = 400`, and the distance to the
/// accelerated value must shrink.
pub fn limit_order_check() -> Check {
    Check::new("limit order k=1", None, |env| {
        let ctx = Context::with_bits(LIMIT_ORDER_BITS)?;
        let p = ctx.prec();
        let basis = LatticeBasis::square(&ctx);
        let params = TwistParams::new(q(1, 5), q(1, 7), q(1, 3))?;
        let pol = TruncationPolicy::default_for(&ctx);
        let limit = sinh_eisenstein_g(&ctx, 1, 1, &params, &basis, &pol, Route::RowAccelerated)?.value;
        let mut vals = Vec::new();
        for t in [200u64, 400] {
            let mut row = Vec::new();
            for (m, n) in [(t, t), (t, 2 * t), (2 * t, t)] {
                row.push(naive_box_sum(&ctx, 1, 1, &params, &basis, m, n)?);
            }
            vals.push(row);
        }
        let mut spread = Float::new(p);
        for a in &vals[1] {
            for b in &vals[1] {
                spread = spread.max(&(a - b).abs());
            }
        }
        let mut trend = Float::new(p);
        for (a, b) in vals[0].iter().zip(&vals[1]) {
            trend = trend.max(&(a - b).abs());
        }
        let worst = |row: &[HPComplex]| row.iter().fold(Float::new(p), |w, v| w.max(&(v - &limit).abs()));
        let shrinking = worst(&vals[1]) < worst(&vals[0]);
        let terms = vals.len() as u64 * 3;
        let mut o = Outcome::residual(spread, "naive_box", terms);
        o.tolerance = Some(Float::with_val(env.ctx.prec(), trend * LIMIT_ORDER_FACTOR));
        if !shrinking {
            o.abs_diff = Float::with_val(env.ctx.prec(), rug::float::Special::Infinity);
        }
        Ok(o)
    })
}

fn property_checks() -> Vec<Check> {
    let mut v = vec![h12_gate_check()];
    v.extend(eisenstein_value_checks());
    v.extend(cauchy_mellin_checks());
    v.extend(reciprocity_checks());
    v.extend(parity_checks());
    v.extend(theta_checks());
    v.extend(bernoulli_checks());
    v.push(radius_independence_check());
    v.push(limit_order_check());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_invariants() {
        let ok = RunConfig { tolerance_exp: 30, ..RunConfig::default() };
        assert!(ok.validate().is_ok());
        let low = RunConfig { precision_bits: 64, tolerance_exp: 5, ..RunConfig::default() };
        assert!(matches!(low.validate(), Err(Error::InvalidConfig(_))));
        let too_fine = RunConfig { precision_bits: 64, tolerance_exp: 30, ..RunConfig::default() };
        assert!(too_fine.validate().is_err());
        assert!(RunConfig { jobs: 0, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { max_m: 2, ..RunConfig::default() }.validate().is_err());
        assert_eq!(required_bits(30), 264);
    }

    #[test]
    fn ids_are_unique_and_sorted() {
        for s in [Suite::Core, Suite::Theorem1, Suite::Catalog, Suite::Qzeta, Suite::Properties, Suite::All] {
            let ids: Vec<String> = suite_checks(s).into_iter().map(|c| c.id).collect();
            let mut sorted = ids.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(ids, sorted, "{s}");
        }
        assert_eq!(suite_checks(Suite::Core).len(), 13);
    }

    #[test]
    fn failing_and_erroring_checks_are_recorded() {
        let ctx = Context::default();
        let pol = TruncationPolicy::default_for(&ctx);
        let env = Env { ctx: &ctx, policy: &pol, route: Route::RowAccelerated };
        let bad = Check::new("bad", None, |env| Ok(Outcome::pair(env.ctx.one(), env.ctx.zero(), "x", 0)));
        let rec = run_check(&bad, &env, 30, 20);
        assert!(!rec.pass);
        let err = Check::new("err", None, |_| Err(Error::DivisionByZero));
        let rec = run_check(&err, &env, 30, 20);
        assert!(!rec.pass && rec.error.is_some());
        let ex = Check::new("exact", None, |env| Ok(Outcome::exact(false, env.ctx.one(), env.ctx.one())));
        assert!(!run_check(&ex, &env, 30, 20).pass);
    }

    #[test]
    fn qzeta_suite_passes_deterministically() {
        let cfg = RunConfig { suite: Suite::Qzeta, jobs: 2, ..RunConfig::default() };
        let a = run(&cfg).unwrap();
        assert!(a.all_passed(), "{}", a.render(OutputFormat::Text));
        let b = run(&RunConfig { jobs: 1, ..cfg }).unwrap();
        let ja = serde_json::to_string(&a.canonical()).unwrap();
        let jb = serde_json::to_string(&b.canonical()).unwrap();
        assert_eq!(ja, jb);
        assert!(ja.contains("\"schema\":1"));
    }

    #[test]
    fn csv_quotes_fields() {
        let s = to_csv(&["a", "b"], [vec!["x,y".to_string(), "plain".to_string()]]);
        assert_eq!(s, "a,b\n\"x,y\",plain\n");
    }
}
