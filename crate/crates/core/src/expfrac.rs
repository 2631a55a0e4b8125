//! Closed-form derivatives of `g(t; c) = e^{ct} / (e^t - 1)`.
//!
//! With `w = 1/(e^t - 1)` we have `dw/dt = -w(1 + w)`, so
//! `g^(n)(t; c) = e^{ct} P_n(w)` where `P_0 = w` and
//! `P_{n+1} = c P_n - w(1 + w) P_n'`. The `P_n` have exact rational
//! coefficients whenever `c` is rational.
//!
//! For `Re t < 0` the reflection `g(t; c) = -g(-t; 1 - c)` is used so that
//! `w` stays small and no cancellation occurs near `w = -1`.

use rug::Rational;

use crate::bernoulli::RatPoly;
use crate::error::{Error, Result};
use crate::precision::HPComplex;

#[derive(Clone, Debug)]
pub struct ExpFrac {
    c: Rational,
    max_order: u32,
    direct: Vec<RatPoly>,
    reflected: Vec<RatPoly>,
}

fn derivative_polys(c: &Rational, max_order: u32) -> Vec<RatPoly> {
    // w(1 + w) = w + w^2
    let w_one_w = RatPoly::new(vec![Rational::new(), Rational::from(1), Rational::from(1)]);
    let mut out = Vec::with_capacity(max_order as usize + 1);
    let mut p = RatPoly::new(vec![Rational::new(), Rational::from(1)]);
    out.push(p.clone());
    for _ in 0..max_order {
        p = p.scale(c).sub(&w_one_w.mul(&p.derivative()));
        out.push(p.clone());
    }
    out
}

impl ExpFrac {
    pub fn new(c: Rational, max_order: u32) -> Self {
        let one_minus = Rational::from(1) - &c;
        let direct = derivative_polys(&c, max_order);
        let reflected = derivative_polys(&one_minus, max_order);
        Self { c, max_order, direct, reflected }
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// `d^n/dt^n g(t; c)`; fails at the poles `t in 2 pi i Z`.
    pub fn eval(&self, t: &HPComplex, n: u32) -> Result<HPComplex> {
        assert!(n <= self.max_order, "derivative order {n} above prepared {}", self.max_order);
        if t.re.is_sign_negative() && !t.re.is_zero() {
            // g^(n)(t; c) = -(-1)^n g^(n)(-t; 1-c)
            let v = Self::eval_poly(&self.reflected[n as usize], &(Rational::from(1) - &self.c), &-t)?;
            return Ok(if n % 2 == 0 { -v } else { v });
        }
        Self::eval_poly(&self.direct[n as usize], &self.c, t)
    }

    fn eval_poly(poly: &RatPoly, c: &Rational, t: &HPComplex) -> Result<HPComplex> {
        let p = t.prec();
        let e = t.exp();
        let denom = &e - &HPComplex::one(p);
        let near = rug::Float::with_val(p, 1) >> (p / 2);
        if denom.abs() < near {
            return Err(Error::PoleHit("exp(t) = 1 in e^{ct}/(e^t-1)".into()));
        }
        let w = denom.recip()?;
        let ect = t.scale_rational(c).exp();
        Ok(&ect * &poly.eval_complex(&w))
    }

    /// All derivatives `0..=n` at one point.
    pub fn eval_all(&self, t: &HPComplex, n: u32) -> Result<Vec<HPComplex>> {
        (0..=n).map(|j| self.eval(t, j)).collect()
    }
}
