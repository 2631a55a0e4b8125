//! Exact Bernoulli numbers, Bernoulli polynomials and their higher-order
//! analogues `B_m^<r>(x)`, the coefficients of `(t e^{tx}/(e^t-1))^r`.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{Context, HPComplex};

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(n).binomial(k)
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// `B_m = B_m(0)`, with `B_1 = -1/2`.
pub fn bernoulli_number(m: u32) -> Rational {
    let mut table = bernoulli_table().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= m as usize {
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        let n = table.len() as u32;
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from(binomial(n + 1, j as u32)) * b;
        }
        let next = -acc / Rational::from(n + 1);
        table.push(next);
    }
    table[m as usize].clone()
}

/// Dense polynomial with exact rational coefficients, lowest power first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `a x + b`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, x: &HPComplex) -> HPComplex {
        let p = x.prec();
        let mut acc = HPComplex::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc.re += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(i as u32) * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * s)).collect())
    }

    /// `p(a x + b)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> Self {
        let lin = Self::linear(a.clone(), b.clone());
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `B_m(x) = sum_j C(m, j) B_j x^{m-j}`.
pub fn bernoulli_poly(m: u32) -> RatPoly {
    let mut coeffs = vec![Rational::new(); m as usize + 1];
    for j in 0..=m {
        coeffs[(m - j) as usize] = Rational::from(binomial(m, j)) * bernoulli_number(j);
    }
    RatPoly::new(coeffs)
}

/// Truncated exponential generating series `t e^{tx}/(e^t-1)`: entry `j`
/// is `B_j(x)/j!`.
fn bernoulli_egf(len: usize) -> Vec<RatPoly> {
    (0..len as u32)
        .map(|j| bernoulli_poly(j).scale(&Rational::from((Integer::from(1), factorial(j)))))
        .collect()
}

/// `B_m^<r>(x)`: `m!` times the `t^m` coefficient of the r-th power of the
/// Bernoulli generating series, by exact Cauchy products.
pub fn bernoulli_poly_high(m: u32, r: u32) -> RatPoly {
    assert!(r >= 1, "order r must be positive");
    let len = m as usize + 1;
    let base = bernoulli_egf(len);
    let mut acc = base.clone();
    for _ in 1..r {
        let mut next = vec![RatPoly::zero(); len];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in base.iter().take(len - i).enumerate() {
                next[i + j] = next[i + j].add(&a.mul(b));
            }
        }
        acc = next;
    }
    acc[m as usize].scale(&Rational::from(factorial(m)))
}

/// `([x], {x})` with the mathematical floor, so `{x}` lies in `[0, 1)`.
pub fn frac_int_parts(x: &Rational) -> (Integer, Rational) {
    let fl = Integer::from(x.floor_ref());
    let frac = Rational::from(x - &fl);
    (fl, frac)
}

pub fn is_integer(x: &Rational) -> bool {
    *x.denom() == 1
}

/// `(2 pi i / omega2)^m B_m({z})`.
pub fn bernoulli_scaled(ctx: &Context, m: u32, z: &Rational, omega2: &HPComplex) -> Result<HPComplex> {
    if m == 1 && is_integer(z) {
        return Err(Error::IllegalLerchPoint(format!("B_1 scaling needs z not an integer, got {z}")));
    }
    let (_, frac) = frac_int_parts(z);
    let b = bernoulli_poly(m).eval(&frac);
    let s = (&ctx.two_pi_i() / omega2).powi(m as i64)?;
    Ok(s.scale_rational(&b))
}
