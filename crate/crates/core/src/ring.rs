//! Exact arithmetic in `Q(i)[pi, 1/pi, w, wt, sqrt3, z]`, where `w` and `wt`
//! are the period constants of the square and hexagonal lattices.
//!
//! Elements are kept in a canonical form (a sparse map from monomials to
//! nonzero Gaussian rationals, `sqrt3^2` folded into the coefficient), so
//! structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::precision::{Constants, HPComplex};

/// `re + im i` with rational parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::new() }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::real(Rational::from(v))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn i() -> Self {
        Self::new(Rational::new(), Rational::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Rational::from(-&self.im))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(Rational::from(&self.re * q), Rational::from(&self.im * q))
    }

    pub fn to_complex(&self, prec: u32) -> HPComplex {
        HPComplex::from_rationals(&self.re, &self.im, prec)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(Rational::from(&self.re + &o.re), Rational::from(&self.im + &o.im))
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(Rational::from(&self.re - &o.re), Rational::from(&self.im - &o.im))
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussianRational::new(re, im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0 {
            write!(f, "({}-{}i)", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a Gaussian rational: {s:?}"));
        let t = s.trim();
        let inner = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let inner = inner.strip_suffix('i').ok_or_else(bad)?;
        let split = inner
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last()
            .ok_or_else(bad)?;
        let re = Rational::from_str(&inner[..split]).map_err(|_| bad())?;
        let im_txt = inner[split..].strip_prefix('+').unwrap_or(&inner[split..]);
        let im = Rational::from_str(im_txt).map_err(|_| bad())?;
        Ok(Self::new(re, im))
    }
}

/// Generators of the ring, in the order used by [`Monomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Pi,
    W,
    Wt,
    Sqrt3,
    Z,
}

/// `pi^pi * w^w * wt^wt * sqrt3^s3 * z^z`, ordered lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub pi: i32,
    pub w: u32,
    pub wt: u32,
    pub s3: u32,
    pub z: u32,
}

impl Monomial {
    pub fn exponent(&self, g: Generator) -> i64 {
        match g {
            Generator::Pi => self.pi as i64,
            Generator::W => self.w as i64,
            Generator::Wt => self.wt as i64,
            Generator::Sqrt3 => self.s3 as i64,
            Generator::Z => self.z as i64,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi^{} * w^{} * wt^{} * s3^{} * z^{}", self.pi, self.w, self.wt, self.s3, self.z)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingExpr {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl RingExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::default())
    }

    pub fn rational(q: Rational) -> Self {
        Self::constant(GaussianRational::real(q))
    }

    pub fn int(v: i64) -> Self {
        Self::rational(Rational::from(v))
    }

    /// `(n/d)`.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(Rational::from((n, d)))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn pi() -> Self {
        Self::pi_pow(1)
    }

    pub fn pi_pow(e: i32) -> Self {
        Self::term(GaussianRational::one(), Monomial { pi: e, ..Default::default() })
    }

    /// Square-lattice period constant.
    pub fn w() -> Self {
        Self::term(GaussianRational::one(), Monomial { w: 1, ..Default::default() })
    }

    /// Hexagonal-lattice period constant.
    pub fn wt() -> Self {
        Self::term(GaussianRational::one(), Monomial { wt: 1, ..Default::default() })
    }

    pub fn sqrt3() -> Self {
        Self::term(GaussianRational::one(), Monomial { s3: 1, ..Default::default() })
    }

    pub fn z() -> Self {
        Self::term(GaussianRational::one(), Monomial { z: 1, ..Default::default() })
    }

    /// `rho = (-1 + i sqrt3)/2`.
    pub fn rho() -> Self {
        &Self::frac(-1, 2) + &(&Self::i() * &Self::sqrt3()).scale_rational(&Rational::from((1, 2)))
    }

    /// `1/rho = rho^2 = (-1 - i sqrt3)/2`.
    pub fn rho_inv() -> Self {
        &Self::frac(-1, 2) - &(&Self::i() * &Self::sqrt3()).scale_rational(&Rational::from((1, 2)))
    }

    /// Polynomial in `z` with rational coefficients.
    pub fn from_z_poly(coeffs: &[Rational]) -> Self {
        let mut e = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            e.add_term(Monomial { z: k as u32, ..Default::default() }, GaussianRational::real(c.clone()));
        }
        e
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        // sqrt3^2 = 3
        let (m, c) = if m.s3 >= 2 {
            let pairs = m.s3 / 2;
            let f = Rational::from(3u32.pow(pairs));
            (Monomial { s3: m.s3 % 2, ..m }, c.scale(&f))
        } else {
            (m, c)
        };
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut e = Self::zero();
        for (m, v) in &self.terms {
            e.add_term(*m, v * c);
        }
        e
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&GaussianRational::real(q.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Replace `z` by the rational `q`.
    pub fn substitute_z(&self, q: &Rational) -> Self {
        let mut e = Self::zero();
        for (m, v) in &self.terms {
            let f = Rational::from(q.pow(m.z as i32));
            e.add_term(Monomial { z: 0, ..*m }, v.scale(&f));
        }
        e
    }

    /// Formal `d/dz`.
    pub fn differentiate_z(&self) -> Self {
        let mut e = Self::zero();
        for (m, v) in &self.terms {
            if m.z > 0 {
                e.add_term(Monomial { z: m.z - 1, ..*m }, v.scale(&Rational::from(m.z)));
            }
        }
        e
    }

    /// Largest exponent of `g`, `None` for the zero element.
    pub fn degree_in(&self, g: Generator) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(g)).max()
    }

    /// Smallest exponent of `g`, `None` for the zero element.
    pub fn min_degree_in(&self, g: Generator) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(g)).min()
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// The coefficient of `z^j`, as an element free of `z`.
    pub fn z_coefficient(&self, j: u32) -> Self {
        let mut e = Self::zero();
        for (m, v) in &self.terms {
            if m.z == j {
                e.add_term(Monomial { z: 0, ..*m }, v.clone());
            }
        }
        e
    }
}

impl Add for &RingExpr {
    type Output = RingExpr;
    fn add(self, o: &RingExpr) -> RingExpr {
        let mut e = self.clone();
        for (m, v) in &o.terms {
            e.add_term(*m, v.clone());
        }
        e
    }
}

impl Sub for &RingExpr {
    type Output = RingExpr;
    fn sub(self, o: &RingExpr) -> RingExpr {
        let mut e = self.clone();
        for (m, v) in &o.terms {
            e.add_term(*m, -v);
        }
        e
    }
}

impl Mul for &RingExpr {
    type Output = RingExpr;
    fn mul(self, o: &RingExpr) -> RingExpr {
        let mut e = RingExpr::zero();
        for (a, u) in &self.terms {
            for (b, v) in &o.terms {
                let m = Monomial { pi: a.pi + b.pi, w: a.w + b.w, wt: a.wt + b.wt, s3: a.s3 + b.s3, z: a.z + b.z };
                e.add_term(m, u * v);
            }
        }
        e
    }
}

impl Neg for &RingExpr {
    type Output = RingExpr;
    fn neg(self) -> RingExpr {
        self.scale(&GaussianRational::from_i64(-1))
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} * {m}")?;
        }
        Ok(())
    }
}

impl FromStr for RingExpr {
    type Err = Error;

    /// Parses the canonical text form; factors may appear in any order and
    /// missing generators default to exponent 0.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "0" {
            return Ok(Self::zero());
        }
        let mut e = Self::zero();
        for term in t.split(" + ") {
            let mut parts = term.split('*').map(str::trim);
            let c: GaussianRational = parts.next().unwrap_or("").parse()?;
            let mut m = Monomial::default();
            for f in parts {
                let (name, exp) = f.split_once('^').ok_or_else(|| Error::Parse(format!("bad factor {f:?}")))?;
                let bad = || Error::Parse(format!("bad exponent in {f:?}"));
                match name.trim() {
                    "pi" => m.pi = exp.trim().parse().map_err(|_| bad())?,
                    "w" => m.w = exp.trim().parse().map_err(|_| bad())?,
                    "wt" => m.wt = exp.trim().parse().map_err(|_| bad())?,
                    "s3" => m.s3 = exp.trim().parse().map_err(|_| bad())?,
                    "z" => m.z = exp.trim().parse().map_err(|_| bad())?,
                    other => return Err(Error::Parse(format!("unknown generator {other:?}"))),
                }
            }
            e.add_term(m, c);
        }
        Ok(e)
    }
}

/// Numeric value with the certified constants; `z` must be supplied if the
/// expression depends on it.
pub fn eval_ring(e: &RingExpr, consts: &Constants, z: Option<&Rational>) -> Result<HPComplex> {
    let p = consts.pi.prec();
    let mut acc = HPComplex::zero(p);
    for (m, c) in e.terms() {
        let mut f = Float::with_val(p, (&consts.pi).pow(m.pi));
        if m.w > 0 {
            f *= Float::with_val(p, (&consts.lemniscate).pow(m.w));
        }
        if m.wt > 0 {
            f *= Float::with_val(p, (&consts.lemniscate6).pow(m.wt));
        }
        if m.s3 > 0 {
            f *= Float::with_val(p, (&consts.sqrt3).pow(m.s3));
        }
        if m.z > 0 {
            let zq = z.ok_or(Error::SymbolRemains)?;
            f *= Float::with_val(p, Rational::from(zq.pow(m.z as i32)));
        }
        acc += &c.to_complex(p).scale(&f);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Context;
    use proptest::prelude::*;

    fn pz() -> RingExpr {
        &RingExpr::pi() * &RingExpr::z()
    }

    #[test]
    fn difference_of_squares() {
        let one = RingExpr::one();
        let prod = &(&pz() + &one) * &(&pz() - &one);
        let expect = &pz().pow(2) - &one;
        assert_eq!(prod, expect);
        assert_eq!(prod.degree_in(Generator::Z), Some(2));
    }

    #[test]
    fn rho_arithmetic() {
        let rho = RingExpr::rho();
        assert_eq!(&rho * &RingExpr::rho_inv(), RingExpr::one());
        assert_eq!(rho.pow(3), RingExpr::one());
        assert_eq!(&(&rho.pow(2) + &rho) + &RingExpr::one(), RingExpr::zero());
        assert_eq!(RingExpr::sqrt3().pow(2), RingExpr::int(3));
    }

    #[test]
    fn substitution_and_derivative() {
        // 3 z^2 pi + z
        let e = &(&RingExpr::z().pow(2) * &RingExpr::pi()).scale_rational(&Rational::from(3)) + &RingExpr::z();
        assert_eq!(
            e.substitute_z(&Rational::from((1, 2))),
            &RingExpr::pi().scale_rational(&Rational::from((3, 4))) + &RingExpr::frac(1, 2)
        );
        assert_eq!(e.differentiate_z(), &pz().scale_rational(&Rational::from(6)) + &RingExpr::one());
        assert_eq!(e.substitute_z(&Rational::new()).degree_in(Generator::Z), None);
    }

    #[test]
    fn text_round_trip() {
        let e = &(&RingExpr::w().pow(4) * &RingExpr::pi_pow(-1)).scale_rational(&Rational::from((1, 15)))
            - &(&RingExpr::i() * &pz()).scale_rational(&Rational::from((7, 90)));
        let s = e.to_string();
        assert!(s.contains("(1/15+0i) * pi^-1 * w^4 * wt^0 * s3^0 * z^0"), "{s}");
        assert!(s.contains("(0-7/90i) * pi^1"), "{s}");
        assert_eq!(s.parse::<RingExpr>().unwrap(), e);
        assert_eq!("0".parse::<RingExpr>().unwrap(), RingExpr::zero());
        assert!("(1+0i) * q^2".parse::<RingExpr>().is_err());
    }

    #[test]
    fn numeric_evaluation() {
        let ctx = Context::default();
        // pi - pi^2/3
        let e = &RingExpr::pi() - &RingExpr::pi_pow(2).scale_rational(&Rational::from((1, 3)));
        let v = eval_ring(&e, &ctx.consts, None).unwrap();
        let pi = ctx.pi();
        let direct = &pi - &(&pi * &pi).scale_rational(&Rational::from((1, 3)));
        assert!(v.approx_eq(&direct, &ctx.tol(70)));
        assert_eq!(eval_ring(&RingExpr::z(), &ctx.consts, None), Err(Error::SymbolRemains));
        let r = eval_ring(&RingExpr::rho(), &ctx.consts, None).unwrap();
        assert!(r.approx_eq(&ctx.consts.rho, &ctx.tol(70)));
    }

    fn small_expr() -> impl Strategy<Value = RingExpr> {
        prop::collection::vec((-3i64..4, 1i64..5, -1i64..2, -2i32..3, 0u32..2, 0u32..3, 0u32..2, 0u32..3), 0..5)
            .prop_map(|ts| {
                let mut e = RingExpr::zero();
                for (a, d, b, pi, w, wt, s3, z) in ts {
                    let c = GaussianRational::new(Rational::from((a, d)), Rational::from(b));
                    e = &e + &RingExpr::term(c, Monomial { pi, w, wt, s3, z });
                }
                e
            })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_expr(), b in small_expr(), c in small_expr()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &a), &RingExpr::zero());
        }

        #[test]
        fn leibniz_rule(a in small_expr(), b in small_expr()) {
            let lhs = (&a * &b).differentiate_z();
            let rhs = &(&a.differentiate_z() * &b) + &(&a * &b.differentiate_z());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn canonical_text_round_trip(a in small_expr()) {
            prop_assert_eq!(a.to_string().parse::<RingExpr>().unwrap(), a);
        }
    }
}
