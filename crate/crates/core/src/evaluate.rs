//! Single evaluations and parameter-grid tables, shared by the command line
//! and the C interface.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::bernoulli::factorial;
use crate::closed_form::{sinh_g_exact, ClosedValue, K_closed};
use crate::eisenstein_exact::{eisenstein_exact, hurwitz_exact};
use crate::error::{Error, Result};
use crate::input::{BasisInput, ComplexInput};
use crate::kernel::{hurwitz_function, K_coeff};
use crate::lattice::{eisenstein_g, lerch_phi, sinh_eisenstein_g, Route, TruncationPolicy};
use crate::params::TwistParams;
use crate::precision::{format_float, Context, HPComplex};
use crate::qzeta::{f_q, f_q_closed, q_exp_minus_two_pi, QParams};
use crate::ring::RingExpr;
use crate::theta::theta;
use crate::verify::to_csv;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalKind {
    G,
    KCoeff,
    Hurwitz,
    Eisenstein,
    Theta,
    Phi,
    Qzeta,
}

impl EvalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalKind::G => "g",
            EvalKind::KCoeff => "k_coeff",
            EvalKind::Hurwitz => "hurwitz",
            EvalKind::Eisenstein => "eisenstein",
            EvalKind::Theta => "theta",
            EvalKind::Phi => "phi",
            EvalKind::Qzeta => "qzeta",
        }
    }
}

impl fmt::Display for EvalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EvalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "g" => EvalKind::G,
            "k_coeff" => EvalKind::KCoeff,
            "hurwitz" => EvalKind::Hurwitz,
            "eisenstein" => EvalKind::Eisenstein,
            "theta" => EvalKind::Theta,
            "phi" => EvalKind::Phi,
            "qzeta" => EvalKind::Qzeta,
            _ => return Err(Error::Parse(format!("unknown kind {s:?}"))),
        })
    }
}

/// Parameters for one evaluation; unused fields are ignored by each kind.
#[derive(Clone, Debug)]
pub struct EvalRequest {
    pub kind: EvalKind,
    pub k: Option<u32>,
    pub r: Option<u32>,
    pub x: Rational,
    pub y: Rational,
    /// Rational twist for `g` and `k_coeff`, complex argument for `theta`.
    pub z: Option<ComplexInput>,
    pub basis: BasisInput,
    pub tau: Option<ComplexInput>,
    pub deriv: u32,
    pub alpha: Option<Rational>,
    pub beta: Option<ComplexInput>,
    pub s: Option<ComplexInput>,
    pub t: Option<ComplexInput>,
    pub q: Option<Rational>,
}

impl EvalRequest {
    pub fn new(kind: EvalKind) -> Self {
        Self {
            kind,
            k: None,
            r: None,
            x: Rational::new(),
            y: Rational::new(),
            z: None,
            basis: BasisInput::square(),
            tau: None,
            deriv: 0,
            alpha: None,
            beta: None,
            s: None,
            t: None,
            q: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: HPComplex,
    pub est_error: Float,
    pub route: String,
    pub terms_used: u64,
    pub closed: Option<RingExpr>,
    pub closed_value: Option<HPComplex>,
    /// Numeric factor multiplying `closed`, when there is one.
    pub closed_factor: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalOutput {
    pub kind: EvalKind,
    pub value: String,
    pub est_error: String,
    pub route: String,
    pub terms_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_value: Option<String>,
}

impl EvalResult {
    pub fn output(&self, kind: EvalKind, digits: usize) -> EvalOutput {
        EvalOutput {
            kind,
            value: self.value.to_decimal(digits),
            est_error: format_float(&self.est_error, 6),
            route: self.route.clone(),
            terms_used: self.terms_used,
            closed_form: self.closed.as_ref().map(|e| e.to_string()),
            closed_factor: self.closed_factor.clone(),
            closed_value: self.closed_value.as_ref().map(|v| v.to_decimal(digits)),
        }
    }
}

impl EvalOutput {
    pub fn render_text(&self) -> String {
        let mut s = format!(
            "value: {}\nest_error: {}\nroute: {}\nterms_used: {}\n",
            self.value, self.est_error, self.route, self.terms_used
        );
        if let Some(c) = &self.closed_form {
            s.push_str(&format!("closed_form: {c}\n"));
        }
        if let Some(f) = &self.closed_factor {
            s.push_str(&format!("closed_factor: {f}\n"));
        }
        if let Some(v) = &self.closed_value {
            s.push_str(&format!("closed_value: {v}\n"));
        }
        s
    }
}

fn need<T: Clone>(v: &Option<T>, kind: EvalKind, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::InvalidConfig(format!("eval {kind} needs --{flag}")))
}

fn rational_z(req: &EvalRequest) -> Result<Rational> {
    let z = need(&req.z, req.kind, "z")?;
    z.as_rational()
        .cloned()
        .ok_or_else(|| Error::InvalidConfig(format!("eval {} needs a rational --z", req.kind)))
}

/// Nominal error of a contour or closed-form value: the precision target
/// relative to the value's size.
fn nominal_error(ctx: &Context, v: &HPComplex) -> Float {
    let m = v.abs().max(&ctx.real(1));
    Float::with_val(ctx.prec(), ctx.cfg.target_eps() * m)
}

fn plain(ctx: &Context, value: HPComplex, route: &str) -> EvalResult {
    let est_error = nominal_error(ctx, &value);
    EvalResult { value, est_error, route: route.into(), terms_used: 0, closed: None, closed_value: None, closed_factor: None }
}

fn with_closed(ctx: &Context, mut res: EvalResult, closed: ClosedValue) -> Result<EvalResult> {
    res.closed_value = Some(closed.to_complex(ctx)?);
    if let ClosedValue::Exact(e) = closed {
        res.closed = Some(e);
    }
    Ok(res)
}

pub fn evaluate(ctx: &Context, policy: &TruncationPolicy, route: Route, req: &EvalRequest) -> Result<EvalResult> {
    let kind = req.kind;
    match kind {
        EvalKind::G => {
            let (k, r) = (need(&req.k, kind, "k")?, need(&req.r, kind, "r")?);
            let params = TwistParams::new(req.x.clone(), req.y.clone(), rational_z(req)?)?;
            let tag = req.basis.tag(ctx)?;
            let basis = tag.basis(ctx);
            let s = sinh_eisenstein_g(ctx, k, r, &params, &basis, policy, route)?;
            let res = EvalResult {
                value: s.value,
                est_error: s.est_error,
                route: s.route.as_str().into(),
                terms_used: s.terms_used,
                closed: None,
                closed_value: None,
                closed_factor: None,
            };
            let closed = match (tag.exact(), params.is_origin()) {
                (Some(lat), true) => ClosedValue::Exact(sinh_g_exact(lat, k, r, &params.z)?),
                _ => {
                    // G = -K / (k! (pi i/omega2)^r)
                    let kv = K_closed(ctx, k, r, &params, &tag)?.to_complex(ctx)?;
                    let f = (&ctx.pi().mul_i() / &basis.omega2).powi(r as i64)?;
                    let f = f.scale_rational(&-Rational::from(factorial(k)));
                    ClosedValue::Numeric(&kv / &f)
                }
            };
            with_closed(ctx, res, closed)
        }
        EvalKind::KCoeff => {
            let (k, r) = (need(&req.k, kind, "k")?, need(&req.r, kind, "r")?);
            let params = TwistParams::new(req.x.clone(), req.y.clone(), rational_z(req)?)?;
            let tag = req.basis.tag(ctx)?;
            let v = K_coeff(ctx, k, r, &params, &tag.basis(ctx))?;
            let closed = K_closed(ctx, k, r, &params, &tag)?;
            with_closed(ctx, plain(ctx, v, "contour"), closed)
        }
        EvalKind::Hurwitz => {
            let k = need(&req.k, kind, "k")?;
            let tag = req.basis.tag(ctx)?;
            let v = hurwitz_function(ctx, k, &req.x, &req.y, &tag.basis(ctx))?;
            let res = plain(ctx, v, "contour");
            match (tag.exact(), req.x == 0 && req.y == 0) {
                (Some(lat), true) => with_closed(ctx, res, ClosedValue::Exact(hurwitz_exact(lat, k))),
                _ => Ok(res),
            }
        }
        EvalKind::Eisenstein => {
            let k = need(&req.k, kind, "k")?;
            let (tau, tag) = match &req.tau {
                Some(t) => {
                    let b = BasisInput { omega1: "1".parse()?, omega2: t.clone() };
                    (t.to_complex(ctx), b.tag(ctx)?)
                }
                None => {
                    let tag = req.basis.tag(ctx)?;
                    (tag.basis(ctx).tau, tag)
                }
            };
            let v = eisenstein_g(ctx, k, &tau)?;
            let res = plain(ctx, v, "lattice");
            match tag.exact() {
                Some(lat) => with_closed(ctx, res, ClosedValue::Exact(eisenstein_exact(lat, k))),
                None => Ok(res),
            }
        }
        EvalKind::Theta => {
            let z = need(&req.z, kind, "z")?.to_complex(ctx);
            let tau = need(&req.tau, kind, "tau")?.to_complex(ctx);
            if req.deriv > 3 {
                return Err(Error::InvalidConfig("theta derivatives above 3 are not provided".into()));
            }
            Ok(plain(ctx, theta(&z, &tau, req.deriv)?, "series"))
        }
        EvalKind::Phi => {
            let alpha = need(&req.alpha, kind, "alpha")?;
            let beta = need(&req.beta, kind, "beta")?.to_complex(ctx);
            Ok(plain(ctx, lerch_phi(ctx, &alpha, &beta)?, "closed_form"))
        }
        EvalKind::Qzeta => {
            let s_in = need(&req.s, kind, "s")?;
            let t_in = need(&req.t, kind, "t")?;
            let default_q = req.q.is_none();
            let q = match &req.q {
                Some(q) => ctx.real(q),
                None => q_exp_minus_two_pi(ctx),
            };
            let v = f_q(ctx, &QParams::new(q, s_in.to_complex(ctx), t_in.to_complex(ctx))?)?;
            let mut res = plain(ctx, v, "direct");
            if let (true, Some(s), Some(t)) = (default_q, s_in.as_rational(), t_in.as_rational()) {
                if t.is_integer() && *t > 0 && *s == Rational::from(t * 2u32) {
                    let c = f_q_closed(t.numer().to_u32().unwrap_or(0))?;
                    res.closed_value = Some(c.eval(ctx)?);
                    res.closed_factor = Some(format!("(1 - e^(-2 pi))^{}", c.q_power()));
                    res.closed = Some(c.expr);
                }
            }
            Ok(res)
        }
    }
}

/// A parameter grid over `k` (and `r`, `z` where the kind uses them).
#[derive(Clone, Debug)]
pub struct TableSpec {
    pub kind: EvalKind,
    pub ks: Vec<u32>,
    pub rs: Vec<u32>,
    pub zs: Vec<Rational>,
    pub x: Rational,
    pub y: Rational,
    pub basis: BasisInput,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub kind: EvalKind,
    pub k: u32,
    pub r: String,
    pub z: String,
    pub value: String,
    pub est_error: String,
    pub route: String,
    pub closed_form: String,
}

impl TableSpec {
    fn cells(&self) -> Result<Vec<EvalRequest>> {
        let base = EvalRequest { x: self.x.clone(), y: self.y.clone(), basis: self.basis.clone(), ..EvalRequest::new(self.kind) };
        let mut out = Vec::new();
        match self.kind {
            EvalKind::G | EvalKind::KCoeff => {
                for &k in &self.ks {
                    for &r in &self.rs {
                        for z in &self.zs {
                            let z = ComplexInput::Gaussian(z.clone(), Rational::new());
                            out.push(EvalRequest { k: Some(k), r: Some(r), z: Some(z), ..base.clone() });
                        }
                    }
                }
            }
            EvalKind::Hurwitz | EvalKind::Eisenstein => {
                for &k in &self.ks {
                    out.push(EvalRequest { k: Some(k), ..base.clone() });
                }
            }
            other => return Err(Error::InvalidConfig(format!("tables are not available for {other}"))),
        }
        Ok(out)
    }
}

/// Evaluates every cell; cells outside a kind's preconditions become rows
/// whose value names the violated condition.
pub fn table_rows(ctx: &Context, policy: &TruncationPolicy, route: Route, spec: &TableSpec, digits: usize) -> Result<Vec<TableRow>> {
    let cells = spec.cells()?;
    let rows = cells
        .par_iter()
        .map(|req| {
            let (value, est_error, route, closed) = match evaluate(ctx, policy, route, req) {
                Ok(res) => (
                    res.value.to_decimal(digits),
                    format_float(&res.est_error, 6),
                    res.route,
                    res.closed.map(|e| e.to_string()).unwrap_or_default(),
                ),
                Err(e @ (Error::CasePreconditionViolated(_) | Error::InadmissibleParameters(_) | Error::PoleHit(_))) => {
                    (format!("inadmissible: {e}"), String::new(), String::new(), String::new())
                }
                Err(e) => return Err(e),
            };
            Ok(TableRow {
                kind: spec.kind,
                k: req.k.unwrap_or(0),
                r: req.r.map(|r| r.to_string()).unwrap_or_default(),
                z: req.z.as_ref().and_then(|z| z.as_rational()).map(|z| z.to_string()).unwrap_or_default(),
                value,
                est_error,
                route,
                closed_form: closed,
            })
        })
        .collect::<Vec<Result<TableRow>>>();
    rows.into_iter().collect()
}

pub fn render_table_csv(rows: &[TableRow]) -> String {
    let header = ["kind", "k", "r", "z", "value", "est_error", "route", "closed_form"];
    to_csv(
        &header,
        rows.iter().map(|r| {
            vec![r.kind.as_str().to_string(), r.k.to_string(), r.r.clone(), r.z.clone(), r.value.clone(), r.est_error.clone(), r.route.clone(), r.closed_form.clone()]
        }),
    )
}

pub fn render_table_json(rows: &[TableRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}
