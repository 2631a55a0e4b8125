//! q-zeta values `f_q(s, t) = (1-q)^s sum_{m>=1} q^{mt}/(1-q^m)^s` and their
//! closed forms at `q = e^{-2 pi}`, `(s, t) = (2k, k)`.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::closed_form::sinh_g_exact;
use crate::eisenstein_exact::ExactLattice;
use crate::error::{Error, Result};
use crate::lattice::{sinh_eisenstein_g, Route, TruncationPolicy};
use crate::params::{LatticeBasis, TwistParams};
use crate::precision::{Context, HPComplex};
use crate::ring::{eval_ring, RingExpr};

pub const MAX_Q_TERMS: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct QParams {
    pub q: Float,
    pub s: HPComplex,
    pub t: HPComplex,
}

impl QParams {
    pub fn new(q: Float, s: HPComplex, t: HPComplex) -> Result<Self> {
        if q <= 0 || q >= 1 {
            return Err(Error::NonconvergentQSeries(format!("q must lie in (0,1), got {}", q.to_f64())));
        }
        if t.re <= 0 {
            return Err(Error::NonconvergentQSeries("the series needs Re t > 0".into()));
        }
        Ok(Self { q, s, t })
    }

    /// Integer `(s, t)`.
    pub fn integer(ctx: &Context, q: Float, s: i64, t: i64) -> Result<Self> {
        Self::new(q, HPComplex::from_i64(s, ctx.prec()), HPComplex::from_i64(t, ctx.prec()))
    }
}

/// `e^{-2 pi}` at working precision.
pub fn q_exp_minus_two_pi(ctx: &Context) -> Float {
    Float::with_val(ctx.prec(), &ctx.consts.pi * -2i32).exp()
}

/// `f_q(s, t)` by direct summation with a geometric tail bound.
///
/// For real positive `s, t` every term is positive, so the partial sums must
/// increase; a violation is reported as nonconvergence.
pub fn f_q(ctx: &Context, params: &QParams) -> Result<HPComplex> {
    let p = ctx.prec();
    let ln_q = HPComplex::from_real(Float::with_val(p, params.q.ln_ref()));
    let real_positive = params.s.im.is_zero() && params.t.im.is_zero() && params.s.re > 0;
    // |q^{(m+1)t}| / |q^{mt}|
    let ratio = Float::with_val(p, &params.t.re * ln_q.re.clone()).exp();
    let tail = Float::with_val(p, &ratio / Float::with_val(p, 1 - &ratio));
    let thr = ctx.cfg.trunc_threshold();
    let one = ctx.one();
    let mut acc = ctx.zero();
    let mut qm = ctx.one();
    let q = HPComplex::from_real(params.q.clone());
    for m in 1..=MAX_Q_TERMS {
        qm = &qm * &q;
        let num = (&ln_q * &params.t.scale_i64(m as i64)).exp();
        let den = (&params.s * &(&one - &qm).ln()).exp();
        let term = &num / &den;
        if real_positive && (term.re.is_sign_negative() || term.re.is_zero()) {
            return Err(Error::NonconvergentQSeries(format!("partial sums stopped increasing at m = {m}")));
        }
        acc += &term;
        let bound = Float::with_val(p, term.abs() * &tail);
        if bound <= Float::with_val(p, &thr * acc.abs()) {
            let pref = (&params.s * &(&one - &q).ln()).exp();
            return Ok(&pref * &acc);
        }
    }
    Err(Error::NonconvergentQSeries(format!("no convergence within {MAX_Q_TERMS} terms")))
}

/// `zeta_q(s) = f_q(s, s - 1)`.
pub fn zeta_q(ctx: &Context, q: Float, s: &HPComplex) -> Result<HPComplex> {
    let t = s - &ctx.one();
    f_q(ctx, &QParams::new(q, s.clone(), t)?)
}

/// `sum_{m != 0} sinh(m pi)^{-2k}`, summed until the terms drop below the
/// truncation threshold.
pub fn sinh_power_sum(ctx: &Context, k: u32) -> HPComplex {
    let p = ctx.prec();
    let thr = ctx.cfg.trunc_threshold();
    let mut acc = Float::new(p);
    let mut m = 1u32;
    loop {
        let s = Float::with_val(p, &ctx.consts.pi * m).sinh();
        let term = Float::with_val(p, (&s).pow(-2 * k as i32));
        acc += &term;
        if term <= Float::with_val(p, &thr * &acc) {
            break;
        }
        m += 1;
    }
    HPComplex::from_real(acc * 2u32)
}

/// Both sides of `sum_{m != 0} sinh(m pi)^{-2k} = G_1^<2k-1>(i)/pi`, the
/// right side from the lattice series.
pub fn sinh_power_identity(ctx: &Context, k: u32, policy: &TruncationPolicy) -> Result<(HPComplex, HPComplex)> {
    if k == 0 {
        return Err(Error::InadmissibleParameters("k must be positive".into()));
    }
    let direct = sinh_power_sum(ctx, k);
    let params = TwistParams::untwisted(Rational::from((1, 2)))?;
    let g = sinh_eisenstein_g(ctx, 1, 2 * k - 1, &params, &LatticeBasis::square(ctx), policy, Route::RowAccelerated)?;
    Ok((direct, &g.value / &ctx.pi()))
}

/// `f_q(2k, k)` at `q = e^{-2 pi}` as `(1 - e^{-2 pi})^{2k} * expr`.
#[derive(Clone, Debug)]
pub struct QClosed {
    pub k: u32,
    pub expr: RingExpr,
}

impl QClosed {
    /// Exponent of the numeric factor `(1 - e^{-2 pi})`.
    pub fn q_power(&self) -> u32 {
        2 * self.k
    }

    pub fn eval(&self, ctx: &Context) -> Result<HPComplex> {
        let one_minus_q = Float::with_val(ctx.prec(), 1 - q_exp_minus_two_pi(ctx));
        let f = Float::with_val(ctx.prec(), (&one_minus_q).pow(self.q_power()));
        Ok(eval_ring(&self.expr, &ctx.consts, None)?.scale(&f))
    }
}

/// Exact `f_q(2k, k)` at `q = e^{-2 pi}`:
/// `((1-q)/2)^{2k} * G_1^<2k-1>(i)/(2 pi)` with the series in closed form.
pub fn f_q_closed(k: u32) -> Result<QClosed> {
    if k == 0 {
        return Err(Error::InadmissibleParameters("k must be positive".into()));
    }
    let g = sinh_g_exact(ExactLattice::Square, 1, 2 * k - 1, &Rational::from((1, 2)))?;
    let c = Rational::from((1, 2)) >> (2 * k);
    Ok(QClosed { k, expr: (&g * &RingExpr::pi_pow(-1)).scale_rational(&c) })
}

/// The stated evaluations of `f_q(2,1)`, `f_q(4,2)`, `f_q(6,3)`, without the
/// `(1 - e^{-2 pi})^{2k}` factor.
pub fn qzeta_catalog() -> Vec<(&'static str, u32, RingExpr)> {
    let w4 = RingExpr::w().pow(4);
    let pi = RingExpr::pi_pow;
    let q = |n: i64, d: i64| Rational::from((n, d));
    vec![
        ("5-12", 1, (&RingExpr::frac(1, 3) - &pi(-1)).scale_rational(&q(1, 8))),
        (
            "5-13",
            2,
            (&(&(&w4 * &pi(-4)).scale_rational(&q(1, 15)) + &RingExpr::frac(-11, 45)) + &pi(-1).scale_rational(&q(2, 3)))
                .scale_rational(&q(1, 32)),
        ),
        (
            "5-14",
            3,
            (&(&(&w4 * &pi(-4)).scale_rational(&q(1, 15)) + &RingExpr::frac(-191, 945)) + &pi(-1).scale_rational(&q(8, 15)))
                .scale_rational(&q(-1, 128)),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(ctx: &Context) -> Float {
        q_exp_minus_two_pi(ctx)
    }

    #[test]
    fn rejects_bad_q() {
        let ctx = Context::default();
        assert!(matches!(QParams::integer(&ctx, ctx.real(1), 2, 1), Err(Error::NonconvergentQSeries(_))));
        assert!(matches!(QParams::integer(&ctx, ctx.real(0.5), 2, 0), Err(Error::NonconvergentQSeries(_))));
    }

    #[test]
    fn zeta_q_is_diagonal() {
        let ctx = Context::default();
        for (qv, s) in [(0.3, 2), (0.7, 3), (0.9, 5)] {
            let a = zeta_q(&ctx, ctx.real(qv), &HPComplex::from_i64(s, ctx.prec())).unwrap();
            let b = f_q(&ctx, &QParams::integer(&ctx, ctx.real(qv), s, s - 1).unwrap()).unwrap();
            assert!(a.approx_eq(&b, &ctx.tol(60)));
        }
    }

    #[test]
    fn closed_forms_match_statements_and_series() {
        let ctx = Context::default();
        for (id, k, expr) in qzeta_catalog() {
            let c = f_q_closed(k).unwrap();
            assert_eq!(c.expr, expr, "{id}");
            let series = f_q(&ctx, &QParams::integer(&ctx, q(&ctx), 2 * k as i64, k as i64).unwrap()).unwrap();
            assert!(series.approx_eq(&c.eval(&ctx).unwrap(), &ctx.tol(35)), "{id}");
        }
    }

    #[test]
    fn sinh_power_reduction() {
        let ctx = Context::default();
        let qv = q(&ctx);
        for k in 1..=4u32 {
            let f = f_q(&ctx, &QParams::integer(&ctx, qv.clone(), 2 * k as i64, k as i64).unwrap()).unwrap();
            let pref = Float::with_val(ctx.prec(), Float::with_val(ctx.prec(), 1 - &qv) / 2u32).pow(2 * k);
            let half = sinh_power_sum(&ctx, k).scale(&pref).scale_rational(&Rational::from((1, 2)));
            assert!(f.approx_eq(&half, &ctx.tol(35)), "k={k}");
        }
    }

    #[test]
    fn sinh_power_identity_both_routes() {
        let ctx = Context::default();
        let policy = TruncationPolicy::default_for(&ctx);
        for k in 1..=4 {
            let (a, b) = sinh_power_identity(&ctx, k, &policy).unwrap();
            assert!(a.approx_eq(&b, &ctx.tol(30)), "k={k}");
        }
    }
}
