//! Lattice sums: classical Eisenstein series, the hyperbolic-sine series
//! `G_k^<r>(x, y, z; omega1, omega2)` and two single sums with `sinh` weights.
//!
//! Row acceleration: with `tau = omega2/omega1` every fixed-`m` row of a
//! lattice sum is `omega2^{-k} sum_n e^{2 pi i n alpha} / (n + m/tau)^k`,
//! which equals a derivative of the Lerch closed form
//! `Phi(alpha, beta) = 2 pi i e^{2 pi i beta (1 - {alpha})} / (e^{2 pi i beta} - 1)`.
//! The outer `m` sum then decays exponentially.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::bernoulli::{bernoulli_number, bernoulli_poly, factorial, frac_int_parts, is_integer};
use crate::error::{Error, Result};
use crate::expfrac::ExpFrac;
use crate::params::{LatticeBasis, TwistParams};
use crate::precision::{Context, HPComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    NaiveSymmetric,
    RowAccelerated,
    ClosedForm,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::NaiveSymmetric => "naive_symmetric",
            Route::RowAccelerated => "row_accelerated",
            Route::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive_symmetric" | "naive" => Ok(Route::NaiveSymmetric),
            "row_accelerated" | "accelerated" | "row" => Ok(Route::RowAccelerated),
            "closed_form" | "closed" => Ok(Route::ClosedForm),
            _ => Err(Error::Parse(format!("unknown route {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: HPComplex,
    /// Heuristic: last accepted increment plus a geometric tail extrapolation.
    pub est_error: Float,
    pub terms_used: u64,
    pub route: Route,
}

#[derive(Clone, Debug)]
pub struct TruncationPolicy {
    pub max_m: u64,
    pub max_n: u64,
    pub stop_rel: Float,
}

pub const DEFAULT_MAX_M: u64 = 2048;
pub const DEFAULT_MAX_N: u64 = 256;

impl TruncationPolicy {
    pub fn new(ctx: &Context, max_m: u64, max_n: u64, stop_rel: Float) -> Result<Self> {
        if max_m < 8 || max_n < 8 {
            return Err(Error::InvalidConfig(format!("truncation caps must be at least 8, got m={max_m} n={max_n}")));
        }
        let ceiling = Float::with_val(ctx.prec(), 1) >> (ctx.cfg.bits() / 2);
        if stop_rel > ceiling || stop_rel.is_sign_negative() {
            return Err(Error::InvalidConfig("stop_rel must lie in [0, 2^(-bits/2)]".into()));
        }
        Ok(Self { max_m, max_n, stop_rel })
    }

    pub fn with_caps(ctx: &Context, max_m: u64, max_n: u64) -> Result<Self> {
        Self::new(ctx, max_m, max_n, ctx.cfg.trunc_threshold())
    }

    pub fn default_for(ctx: &Context) -> Self {
        Self::with_caps(ctx, DEFAULT_MAX_M, DEFAULT_MAX_N).expect("defaults are valid")
    }
}

fn near_integer(ctx: &Context, b: &HPComplex) -> bool {
    let guard = Float::with_val(ctx.prec(), 1) >> (ctx.prec() / 2);
    let n = b.re.to_f64().round();
    let d = HPComplex::new(Float::with_val(ctx.prec(), &b.re - n), b.im.clone());
    d.abs() < guard
}

/// Row sums `sum_n e^{2 pi i n alpha} / (n + beta)^k` for fixed `(k, alpha)`.
#[derive(Clone, Debug)]
pub struct RowSum {
    k: u32,
    alpha: Rational,
    ef: ExpFrac,
    /// `(-1)^{k-1} (2 pi i)^k / (k-1)!`
    pref: HPComplex,
    two_pi_i: HPComplex,
}

impl RowSum {
    pub fn new(ctx: &Context, k: u32, alpha: &Rational) -> Result<Self> {
        if k == 0 {
            return Err(Error::InadmissibleParameters("row sums need k >= 1".into()));
        }
        if k == 1 && is_integer(alpha) {
            return Err(Error::IllegalLerchPoint(format!("alpha = {alpha} is an integer and k = 1")));
        }
        let (_, frac) = frac_int_parts(alpha);
        let c = Rational::from(1) - frac;
        let two_pi_i = ctx.two_pi_i();
        let mut pref = two_pi_i.powi(k as i64)?.scale_rational(&Rational::from((rug::Integer::from(1), factorial(k - 1))));
        if k % 2 == 0 {
            pref = -pref;
        }
        Ok(Self { k, alpha: alpha.clone(), ef: ExpFrac::new(c, k - 1), pref, two_pi_i })
    }

    pub fn eval(&self, ctx: &Context, beta: &HPComplex) -> Result<HPComplex> {
        if near_integer(ctx, beta) {
            return Err(Error::IllegalLerchPoint(format!("beta = {} is an integer", beta.to_decimal(12))));
        }
        let t = &self.two_pi_i * beta;
        let g = self.ef.eval(&t, self.k - 1).map_err(|_| {
            Error::IllegalLerchPoint(format!("beta = {} is an integer", beta.to_decimal(12)))
        })?;
        Ok(&self.pref * &g)
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }
}

/// `Phi(alpha, beta) = lim_N sum_{|n|<=N} e^{2 pi i n alpha} / (beta + n)`.
pub fn lerch_phi(ctx: &Context, alpha: &Rational, beta: &HPComplex) -> Result<HPComplex> {
    RowSum::new(ctx, 1, alpha)?.eval(ctx, beta)
}

/// `sum_n e^{2 pi i n alpha} / (beta + n)^k` (symmetric limit when `k = 1`).
pub fn inner_row_sum(ctx: &Context, k: u32, alpha: &Rational, beta: &HPComplex) -> Result<HPComplex> {
    RowSum::new(ctx, k, alpha)?.eval(ctx, beta)
}

/// `2 zeta(k)` for even `k >= 2`, exactly from `B_k`.
pub fn two_zeta_even(ctx: &Context, k: u32) -> HPComplex {
    assert!(k >= 2 && k % 2 == 0);
    // 2 zeta(k) = (-1)^{k/2+1} B_k (2 pi)^k / k!
    let mut c = bernoulli_number(k) / Rational::from(factorial(k));
    if (k / 2) % 2 == 0 {
        c = -c;
    }
    let two_pi = Float::with_val(ctx.prec(), &ctx.consts.pi * 2u32);
    HPComplex::from_real(Float::with_val(ctx.prec(), pow_u32(&two_pi, k)) * c)
}

fn pow_u32(x: &Float, k: u32) -> Float {
    Float::with_val(x.prec(), rug::ops::Pow::pow(x, k))
}

/// Rows `m = +-1, +-2, ...` added until a pair falls below `stop_rel` times
/// the largest magnitude seen.
fn accelerate_rows<F>(ctx: &Context, policy: &TruncationPolicy, row: F) -> Result<SeriesResult>
where
    F: Fn(i64) -> Result<HPComplex> + Sync,
{
    let p = ctx.prec();
    let mut acc = HPComplex::zero(p);
    let mut scale = Float::new(p);
    let mut prev_mag: Option<Float> = None;
    let mut m: i64 = 1;
    const BATCH: i64 = 8;
    loop {
        let batch: Vec<Result<(HPComplex, HPComplex)>> = (m..m + BATCH)
            .into_par_iter()
            .map(|mm| Ok((row(mm)?, row(-mm)?)))
            .collect();
        for (offset, pair) in batch.into_iter().enumerate() {
            let (a, b) = pair?;
            let cur = m + offset as i64;
            let pair_sum = &a + &b;
            let mag = Float::with_val(p, a.abs() + b.abs());
            acc += &pair_sum;
            for v in [&mag, &acc.abs()] {
                if *v > scale {
                    scale = v.clone();
                }
            }
            let bound = Float::with_val(p, &policy.stop_rel * &scale);
            if cur >= 2 && mag <= bound {
                // geometric tail from the observed ratio of successive pairs
                let tail = match &prev_mag {
                    Some(pm) if !pm.is_zero() && mag < *pm => {
                        let ratio = Float::with_val(p, &mag / pm);
                        Float::with_val(p, &mag * &ratio) / (Float::with_val(p, 1) - ratio)
                    }
                    _ => mag.clone(),
                };
                let floor = Float::with_val(p, ctx.cfg.target_eps() * &scale);
                return Ok(SeriesResult {
                    value: acc,
                    est_error: Float::with_val(p, &mag + &tail) + floor,
                    terms_used: cur as u64,
                    route: Route::RowAccelerated,
                });
            }
            if cur as u64 >= policy.max_m {
                return Err(Error::NonconvergenceAtPolicyCap(format!(
                    "row magnitude {} still above threshold at |m| = {cur}",
                    crate::precision::format_float(&mag, 6)
                )));
            }
            prev_mag = Some(mag);
        }
        m += BATCH;
    }
}

/// `G_k(tau) = sum' 1/(m + n tau)^k` for even `k >= 2`; `k = 2` is the
/// iterated sum with `m` outside and `n` inside.
pub fn eisenstein_g(ctx: &Context, k: u32, tau: &HPComplex) -> Result<HPComplex> {
    Ok(eisenstein_g_series(ctx, k, tau, &TruncationPolicy::default_for(ctx))?.value)
}

pub fn eisenstein_g_series(ctx: &Context, k: u32, tau: &HPComplex, policy: &TruncationPolicy) -> Result<SeriesResult> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InadmissibleParameters(format!("Eisenstein weight must be even and >= 2, got {k}")));
    }
    if tau.im.is_sign_negative() || tau.im.is_zero() {
        return Err(Error::NonconvergentTau);
    }
    let rs = RowSum::new(ctx, k, &Rational::new())?;
    let inv_tau = tau.recip()?;
    // row m: sum_n (m + n tau)^{-k} = tau^{-k} sum_n (n + m/tau)^{-k}
    let rows = accelerate_rows(ctx, policy, |m| rs.eval(ctx, &inv_tau.scale_i64(m)))?;
    let tk = inv_tau.powi(k as i64)?;
    let zero_row = two_zeta_even(ctx, k);
    Ok(SeriesResult {
        value: &tk * &(&rows.value + &zero_row),
        est_error: Float::with_val(ctx.prec(), &rows.est_error * tk.abs()),
        terms_used: rows.terms_used,
        route: Route::RowAccelerated,
    })
}

/// Admissible `(k, r, x, y, z)` for the hyperbolic-sine series.
pub fn check_case(k: u32, r: u32, params: &TwistParams) -> Result<()> {
    let interior = params.z > 0 && params.z < 1;
    let ok = match k {
        0 => false,
        1 => interior && !params.shift_is_integer(r),
        2 => interior || !params.is_origin(),
        _ => true,
    };
    if r == 0 || !ok {
        return Err(Error::CasePreconditionViolated(format!("k={k} r={r} {params}")));
    }
    Ok(())
}

/// The per-row prefactor `sinh(m pi i/tau)^{-r} e^{2 pi i m (x + r(z-1/2)/tau)}`.
struct RowWeight {
    pi_i_over_tau: HPComplex,
    phase_unit: HPComplex,
    r: u32,
    real_sinh: bool,
}

impl RowWeight {
    fn new(ctx: &Context, r: u32, params: &TwistParams, basis: &LatticeBasis) -> Result<Self> {
        let inv_tau = basis.tau.recip()?;
        let pi_i_over_tau = &ctx.pi().mul_i() * &inv_tau;
        let zc = Rational::from(&params.z - Rational::from((1, 2))) * r;
        let phase_unit = &ctx.two_pi_i() * &(&ctx.rat(&params.x) + &inv_tau.scale_rational(&zc));
        // tau = i exactly: sinh(m pi i / tau) = sinh(m pi) is real
        let real_sinh = basis.tau.re.is_zero() && basis.tau.im == 1;
        Ok(Self { pi_i_over_tau, phase_unit, r, real_sinh })
    }

    fn weight(&self, m: i64) -> Result<HPComplex> {
        let s = if self.real_sinh {
            let p = self.pi_i_over_tau.prec();
            HPComplex::from_real(Float::with_val(p, self.pi_i_over_tau.re.clone() * m).sinh())
        } else {
            self.pi_i_over_tau.scale_i64(m).sinh()
        };
        let phase = self.phase_unit.scale_i64(m).exp();
        Ok(&phase * &s.powi(-(self.r as i64))?)
    }
}

/// `G_k^<r>(x, y, z; omega1, omega2)` along the requested route.
pub fn sinh_eisenstein_g(
    ctx: &Context,
    k: u32,
    r: u32,
    params: &TwistParams,
    basis: &LatticeBasis,
    policy: &TruncationPolicy,
    route: Route,
) -> Result<SeriesResult> {
    check_case(k, r, params)?;
    match route {
        Route::RowAccelerated => sinh_eisenstein_accelerated(ctx, k, r, params, basis, policy),
        Route::NaiveSymmetric => sinh_eisenstein_naive(ctx, k, r, params, basis, policy),
        Route::ClosedForm => Err(Error::InvalidConfig("closed-form values live in the closed_form module".into())),
    }
}

fn sinh_eisenstein_accelerated(
    ctx: &Context,
    k: u32,
    r: u32,
    params: &TwistParams,
    basis: &LatticeBasis,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let rw = RowWeight::new(ctx, r, params, basis)?;
    let rs = RowSum::new(ctx, k, &params.shift(r))?;
    let inv_tau = basis.tau.recip()?;
    let res = accelerate_rows(ctx, policy, |m| {
        let inner = rs.eval(ctx, &inv_tau.scale_i64(m))?;
        Ok(&rw.weight(m)? * &inner)
    })?;
    let w2k = basis.omega2.powi(-(k as i64))?;
    Ok(SeriesResult {
        value: &w2k * &res.value,
        est_error: Float::with_val(ctx.prec(), &res.est_error * w2k.abs()),
        terms_used: res.terms_used,
        route: Route::RowAccelerated,
    })
}

/// Box sum over `0 < |m| <= big_m`, `|n| <= big_n`.
pub fn naive_box_sum(
    ctx: &Context,
    k: u32,
    r: u32,
    params: &TwistParams,
    basis: &LatticeBasis,
    big_m: u64,
    big_n: u64,
) -> Result<HPComplex> {
    let rw = RowWeight::new(ctx, r, params, basis)?;
    let alpha = params.shift(r);
    let n = big_n as i64;
    let phases: Vec<HPComplex> =
        (-n..=n).map(|j| ctx.exp_2pi_i_rational(&Rational::from(&alpha * j))).collect();
    let ms: Vec<i64> = (-(big_m as i64)..=big_m as i64).filter(|&m| m != 0).collect();
    let rows: Vec<Result<HPComplex>> = ms
        .par_iter()
        .map(|&m| {
            let mw1 = basis.omega1.scale_i64(m);
            let mut acc = HPComplex::zero(ctx.prec());
            for (idx, j) in (-n..=n).enumerate() {
                let w = &mw1 + &basis.omega2.scale_i64(j);
                acc += &(&phases[idx] * &w.powi(-(k as i64))?);
            }
            Ok(&rw.weight(m)? * &acc)
        })
        .collect();
    let mut total = HPComplex::zero(ctx.prec());
    for row in rows {
        total += &row?;
    }
    Ok(total)
}

fn sinh_eisenstein_naive(
    ctx: &Context,
    k: u32,
    r: u32,
    params: &TwistParams,
    basis: &LatticeBasis,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let p = ctx.prec();
    let cap = policy.max_m.min(policy.max_n);
    let mut t = 8u64;
    let mut prev = naive_box_sum(ctx, k, r, params, basis, t, t)?;
    let mut terms = (2 * t) * (2 * t + 1);
    // power-law tails: diff = tail(T/2) - tail(T) ~ (2^{k-1} - 1) tail(T)
    let tail_factor = Float::with_val(p, 1) + Float::with_val(p, 1) / ((1u64 << (k.max(2) - 1)) - 1);
    loop {
        if t * 2 > cap {
            break;
        }
        t *= 2;
        let cur = naive_box_sum(ctx, k, r, params, basis, t, t)?;
        terms += (2 * t) * (2 * t + 1);
        let diff = (&cur - &prev).abs();
        let stop = Float::with_val(p, &policy.stop_rel * crate::precision::rel_floor(&cur, &prev));
        prev = cur;
        if diff <= stop || t * 2 > cap {
            let floor = Float::with_val(p, ctx.cfg.target_eps() * crate::precision::rel_floor(&prev, &prev));
            return Ok(SeriesResult {
                value: prev,
                est_error: Float::with_val(p, &diff * &tail_factor) + floor,
                terms_used: terms,
                route: Route::NaiveSymmetric,
            });
        }
    }
    Err(Error::NonconvergenceAtPolicyCap(format!("naive route needs caps of at least 16, got {cap}")))
}

/// Both sides of `sum_{m != 0} (-1)^m / (sinh(m pi) m^{4k+3})
/// = (2 pi)^{4k+3} sum_j (-1)^{j+1} B_{2j}(1/2) B_{4k+4-2j}(1/2) / ((2j)! (4k+4-2j)!)`.
#[derive(Clone, Debug)]
pub struct CauchyMellin {
    pub lhs: HPComplex,
    pub rhs: HPComplex,
    pub diff: HPComplex,
    pub terms_used: u64,
}

pub fn cauchy_mellin_sum(ctx: &Context, k: u32) -> CauchyMellin {
    let p = ctx.prec();
    let e = 4 * k + 3;
    let (s, terms) = sinh_weighted_sum(ctx, -(e as i64), true);
    let lhs = HPComplex::from_real(s * 2u32);

    let half = Rational::from((1, 2));
    let mut c = Rational::new();
    for j in 0..=(2 * k + 2) {
        let a = bernoulli_poly(2 * j).eval(&half) / Rational::from(factorial(2 * j));
        let b = bernoulli_poly(4 * k + 4 - 2 * j).eval(&half) / Rational::from(factorial(4 * k + 4 - 2 * j));
        let term = a * b;
        if j % 2 == 0 {
            c -= term;
        } else {
            c += term;
        }
    }
    let two_pi = Float::with_val(p, &ctx.consts.pi * 2u32);
    let rhs = HPComplex::from_real(Float::with_val(p, pow_u32(&two_pi, e)) * c);
    let diff = &lhs - &rhs;
    CauchyMellin { lhs, rhs, diff, terms_used: terms }
}

/// `sum_{n >= 1} (+-1)^n n^power / sinh(n pi)` to working precision.
fn sinh_weighted_sum(ctx: &Context, power: i64, alternating: bool) -> (Float, u64) {
    let p = ctx.prec();
    let thr = ctx.cfg.trunc_threshold();
    let pi = &ctx.consts.pi;
    let mut acc = Float::new(p);
    let mut scale = Float::new(p);
    let mut n: u64 = 1;
    loop {
        let sh = Float::with_val(p, pi * n).sinh();
        let nf = Float::with_val(p, n);
        let np = if power >= 0 {
            Float::with_val(p, rug::ops::Pow::pow(&nf, power as u32))
        } else {
            Float::with_val(p, 1) / Float::with_val(p, rug::ops::Pow::pow(&nf, (-power) as u32))
        };
        let mut term = np / sh;
        if alternating && n % 2 == 1 {
            term = -term;
        }
        let mag = Float::with_val(p, term.abs_ref());
        acc += &term;
        if mag > scale {
            scale = mag.clone();
        }
        if n > 4 && mag < Float::with_val(p, &thr * &scale) {
            return (acc, n);
        }
        n += 1;
    }
}

/// `S(j) = sum_{n >= 1} (-1)^n / (sinh(n pi) n^j)`.
pub fn sinh_alternating_sum(ctx: &Context, j: i64) -> HPComplex {
    HPComplex::from_real(sinh_weighted_sum(ctx, -j, true).0)
}
