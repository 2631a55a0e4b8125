use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rug::Rational;

use hsze::evaluate::{evaluate, render_table_csv, render_table_json, table_rows, EvalKind, EvalRequest, TableSpec};
use hsze::input::{parse_rational, parse_rational_list, parse_u32_range, BasisInput, ComplexInput};
use hsze::lattice::{Route, TruncationPolicy, DEFAULT_MAX_M, DEFAULT_MAX_N};
use hsze::precision::DEFAULT_BITS;
use hsze::verify::{output_digits, run, OutputFormat, RunConfig, Suite, DEFAULT_TOLERANCE_EXP};
use hsze::{Context, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "hsze", version, about = "Hyperbolic-sine Eisenstein series, Hurwitz numbers and q-zeta values")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Working precision in bits (guard bits are added on top).
    #[arg(long, global = true, env = "HSZE_PREC", default_value_t = DEFAULT_BITS)]
    prec: u32,
    /// Tolerance exponent: identities must agree to 10^-tol.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE_EXP)]
    tol: u32,
    /// text, json or csv.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long = "max-m", global = true, default_value_t = DEFAULT_MAX_M)]
    max_m: u64,
    #[arg(long = "max-n", global = true, default_value_t = DEFAULT_MAX_N)]
    max_n: u64,
    /// accel or naive.
    #[arg(long, global = true, default_value = "accel", value_parser = parse_route)]
    route: Route,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and print one record per identity.
    Verify {
        /// core, theorem1, catalog, qzeta, properties or all.
        #[arg(long, default_value = "core", value_parser = parse_suite)]
        suite: Suite,
        /// Omit timing fields so reruns are byte-identical.
        #[arg(long)]
        canonical: bool,
    },
    /// Evaluate one quantity.
    Eval(EvalArgs),
    /// Tabulate a quantity over a parameter grid.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// g, k_coeff, hurwitz, eisenstein, theta, phi or qzeta.
    #[arg(value_parser = parse_kind)]
    kind: EvalKind,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, default_value = "0", value_parser = parse_rat)]
    x: Rational,
    #[arg(long, default_value = "0", value_parser = parse_rat)]
    y: Rational,
    /// Rational twist, or a complex argument `re,im` for theta.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<ComplexInput>,
    #[arg(long, default_value = "1,i", value_parser = parse_basis, allow_hyphen_values = true)]
    basis: BasisInput,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    tau: Option<ComplexInput>,
    #[arg(long, default_value_t = 0)]
    deriv: u32,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Option<ComplexInput>,
    #[arg(long, value_parser = parse_complex)]
    s: Option<ComplexInput>,
    #[arg(long, value_parser = parse_complex)]
    t: Option<ComplexInput>,
    /// Defaults to e^(-2 pi).
    #[arg(long, value_parser = parse_rat)]
    q: Option<Rational>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// g, k_coeff, hurwitz or eisenstein.
    #[arg(value_parser = parse_kind)]
    kind: EvalKind,
    /// `a..b` or a comma list.
    #[arg(long, default_value = "1..4")]
    k: String,
    #[arg(long, default_value = "1..4")]
    r: String,
    /// Comma separated rationals.
    #[arg(long, default_value = "1/2")]
    z: String,
    #[arg(long, default_value = "0", value_parser = parse_rat)]
    x: Rational,
    #[arg(long, default_value = "0", value_parser = parse_rat)]
    y: Rational,
    #[arg(long, default_value = "1,i", value_parser = parse_basis, allow_hyphen_values = true)]
    basis: BasisInput,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_route(s: &str) -> Result<Route, String> {
    match s {
        "accel" => Ok(Route::RowAccelerated),
        "naive" => Ok(Route::NaiveSymmetric),
        _ => Err(format!("route must be accel or naive, got {s:?}")),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<EvalKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_complex(s: &str) -> Result<ComplexInput, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_basis(s: &str) -> Result<BasisInput, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

/// Parameter and configuration errors exit with 2, everything else with 1.
fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::InvalidConfig(_)
        | Error::Parse(_)
        | Error::CasePreconditionViolated(_)
        | Error::InadmissibleParameters(_)
        | Error::IllegalLerchPoint(_)
        | Error::NonconvergentTau
        | Error::NonconvergentQSeries(_)
        | Error::PoleHit(_) => ExitCode::from(EXIT_CONFIG),
        _ => ExitCode::from(EXIT_FAIL),
    }
}

fn setup(c: &Common) -> Result<(Context, TruncationPolicy), Error> {
    let ctx = Context::with_bits(c.prec)?;
    let policy = TruncationPolicy::with_caps(&ctx, c.max_m, c.max_n)?;
    Ok((ctx, policy))
}

fn cmd_verify(c: &Common, suite: Suite, canonical: bool) -> ExitCode {
    let cfg = RunConfig {
        precision_bits: c.prec,
        tolerance_exp: c.tol,
        suite,
        output_format: c.format,
        max_m: c.max_m,
        max_n: c.max_n,
        route: c.route,
        jobs: c.jobs,
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => return exit_for(&e),
    };
    let report = if canonical { report.canonical() } else { report };
    print!("{}", report.render(cfg.output_format));
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_eval(c: &Common, a: EvalArgs) -> ExitCode {
    let (ctx, policy) = match setup(c) {
        Ok(v) => v,
        Err(e) => return exit_for(&e),
    };
    let req = EvalRequest {
        kind: a.kind,
        k: a.k,
        r: a.r,
        x: a.x,
        y: a.y,
        z: a.z,
        basis: a.basis,
        tau: a.tau,
        deriv: a.deriv,
        alpha: a.alpha,
        beta: a.beta,
        s: a.s,
        t: a.t,
        q: a.q,
    };
    let res = match evaluate(&ctx, &policy, c.route, &req) {
        Ok(r) => r,
        Err(e) => return exit_for(&e),
    };
    let out = res.output(a.kind, output_digits(c.prec));
    match c.format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&out).expect("output serializes")),
        OutputFormat::Csv => {
            let header = ["kind", "value", "est_error", "route", "terms_used", "closed_form", "closed_factor", "closed_value"];
            let row = vec![
                out.kind.as_str().to_string(),
                out.value.clone(),
                out.est_error.clone(),
                out.route.clone(),
                out.terms_used.to_string(),
                out.closed_form.clone().unwrap_or_default(),
                out.closed_factor.clone().unwrap_or_default(),
                out.closed_value.clone().unwrap_or_default(),
            ];
            print!("{}", hsze::verify::to_csv(&header, [row]));
        }
        OutputFormat::Text => print!("{}", out.render_text()),
    }
    ExitCode::SUCCESS
}

fn cmd_table(c: &Common, a: TableArgs) -> ExitCode {
    let ks = match parse_u32_range(&a.k) {
        Ok(v) => v,
        Err(e) => return config_error(e),
    };
    let rs = match parse_u32_range(&a.r) {
        Ok(v) => v,
        Err(e) => return config_error(e),
    };
    let zs = match parse_rational_list(&a.z) {
        Ok(v) => v,
        Err(e) => return config_error(e),
    };
    let (ctx, policy) = match setup(c) {
        Ok(v) => v,
        Err(e) => return exit_for(&e),
    };
    let spec = TableSpec { kind: a.kind, ks, rs, zs, x: a.x, y: a.y, basis: a.basis };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(c.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let rows = match pool.install(|| table_rows(&ctx, &policy, c.route, &spec, output_digits(c.prec))) {
        Ok(r) => r,
        Err(e) => return exit_for(&e),
    };
    let text = match c.format {
        OutputFormat::Json => render_table_json(&rows),
        _ => render_table_csv(&rows),
    };
    match a.out {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_FAIL);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Command::Verify { suite, canonical } => cmd_verify(&cli.common, suite, canonical),
        Command::Eval(a) => cmd_eval(&cli.common, a),
        Command::Table(a) => cmd_table(&cli.common, a),
    }
}
