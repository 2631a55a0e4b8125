//! Working precision, arbitrary-precision complex numbers and the certified
//! constants shared by every analytic evaluator.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Real numbers at the configured working precision.
pub type HPReal = Float;

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_GUARD_BITS: u32 = 32;

/// Mantissa precision plus guard digits carried internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    bits: u32,
    guard_bits: u32,
}

impl PrecisionConfig {
    pub fn new(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidConfig(format!("precision must be at least 64 bits, got {bits}")));
        }
        if guard_bits < 16 {
            return Err(Error::InvalidConfig(format!(
                "guard bits must be at least 16, got {guard_bits}"
            )));
        }
        Ok(Self { bits, guard_bits })
    }

    pub fn with_bits(bits: u32) -> Result<Self> {
        Self::new(bits, DEFAULT_GUARD_BITS)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Precision every `Float` is created with.
    pub fn working_bits(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// `2^(-bits-guard_bits)`; series terms below this (relative) are dropped.
    pub fn trunc_threshold(&self) -> Float {
        let e = -(self.working_bits() as i32);
        Float::with_val(self.working_bits(), 1) << e
    }

    /// `2^(-bits)`, the accuracy the caller asked for.
    pub fn target_eps(&self) -> Float {
        Float::with_val(self.working_bits(), 1) << -(self.bits as i32)
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self { bits: DEFAULT_BITS, guard_bits: DEFAULT_GUARD_BITS }
    }
}

/// A complex number made of two MPFR floats of equal precision.
#[derive(Clone, PartialEq)]
pub struct HPComplex {
    pub re: Float,
    pub im: Float,
}

impl HPComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn i(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::with_val(prec, 1) }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Self { re, im: Float::new(prec) }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self { re: Float::with_val(prec, v), im: Float::new(prec) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self { re: Float::with_val(prec, q), im: Float::new(prec) }
    }

    /// `re + i*im` from two exact rationals.
    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn scale(&self, f: &Float) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * f), im: Float::with_val(p, &self.im * f) }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * q), im: Float::with_val(p, &self.im * q) }
    }

    pub fn scale_i64(&self, v: i64) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * v), im: Float::with_val(p, &self.im * v) }
    }

    /// `self * 2^e`.
    pub fn shl(&self, e: i32) -> Self {
        Self { re: self.re.clone() << e, im: self.im.clone() << e }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec();
        let n = self.norm_sqr();
        Ok(Self {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        })
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self { re: Float::with_val(p, &m * &c), im: m * s }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, self.abs().ln_ref()), im: self.arg() }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec();
        let r = self.abs();
        let half_re = Float::with_val(p, (Float::with_val(p, &r + &self.re) >> 1u32).sqrt_ref());
        if half_re.is_zero() {
            // purely negative real
            let t = Float::with_val(p, (-self.re.clone()).sqrt_ref());
            let im = if self.im.is_sign_negative() { -t } else { t };
            return Self { re: Float::new(p), im };
        }
        let im = Float::with_val(p, &self.im / Float::with_val(p, &half_re * 2u32));
        Self { re: half_re, im }
    }

    pub fn sinh(&self) -> Self {
        let e = self.exp();
        let inv = (-self).exp();
        (&e - &inv).shl(-1)
    }

    pub fn cosh(&self) -> Self {
        let e = self.exp();
        let inv = (-self).exp();
        (&e + &inv).shl(-1)
    }

    pub fn sin(&self) -> Self {
        // sin(z) = -i sinh(iz)
        let s = self.mul_i().sinh();
        Self { re: s.im, im: -s.re }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            if self.is_zero() {
                return Err(Error::ZeroToNegativePower);
            }
            return self.powi_unsigned(n.unsigned_abs()).recip();
        }
        Ok(self.powi_unsigned(n as u64))
    }

    fn powi_unsigned(&self, mut n: u64) -> Self {
        let mut acc = Self::one(self.prec());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// `|a-b| <= tol * max(1, |a|, |b|)`.
    pub fn approx_eq(&self, other: &Self, tol: &Float) -> bool {
        let diff = (self - other).abs();
        diff <= Float::with_val(diff.prec(), tol * rel_floor(self, other))
    }

    /// Decimal rendering with `digits` significant digits in each part.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = format_float(&self.re, digits);
        let im = format_float(&self.im, digits);
        if self.im.is_sign_negative() {
            format!("{re}-{}i", im.trim_start_matches('-'))
        } else {
            format!("{re}+{im}i")
        }
    }

    /// Lossy conversion for diagnostics and the C ABI.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// `max(1, |a|, |b|)`, the denominator of every tolerance comparison.
pub fn rel_floor(a: &HPComplex, b: &HPComplex) -> Float {
    let p = a.prec().max(b.prec());
    let mut m = Float::with_val(p, 1);
    let aa = a.abs();
    let bb = b.abs();
    if aa > m {
        m = aa;
    }
    if bb > m {
        m = bb;
    }
    m
}

/// Decimal significand/exponent form, e.g. `-1.2345e-3`.
pub fn format_float(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let s = f.to_string_radix(10, Some(digits.max(1)));
    normalize_exponent(&s)
}

fn normalize_exponent(s: &str) -> String {
    // MPFR prints `1.234e5`; keep that, but drop a trailing `e0`.
    match s.find('e') {
        Some(pos) if &s[pos + 1..] == "0" => s[..pos].to_string(),
        _ => s.to_string(),
    }
}

/// `10^(-digits)` at precision `prec`.
pub fn ten_pow_neg(digits: u32, prec: u32) -> Float {
    let t = Float::with_val(prec, Integer::from(10).pow(digits));
    Float::with_val(prec, 1) / t
}

impl fmt::Debug for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(24))
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl<'a> Add<&'a HPComplex> for &'a HPComplex {
    type Output = HPComplex;
    fn add(self, rhs: &'a HPComplex) -> HPComplex {
        let p = self.prec().max(rhs.prec());
        HPComplex { re: Float::with_val(p, &self.re + &rhs.re), im: Float::with_val(p, &self.im + &rhs.im) }
    }
}

impl<'a> Sub<&'a HPComplex> for &'a HPComplex {
    type Output = HPComplex;
    fn sub(self, rhs: &'a HPComplex) -> HPComplex {
        let p = self.prec().max(rhs.prec());
        HPComplex { re: Float::with_val(p, &self.re - &rhs.re), im: Float::with_val(p, &self.im - &rhs.im) }
    }
}

impl<'a> Mul<&'a HPComplex> for &'a HPComplex {
    type Output = HPComplex;
    fn mul(self, rhs: &'a HPComplex) -> HPComplex {
        let p = self.prec().max(rhs.prec());
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        HPComplex { re: ac - bd, im: ad + bc }
    }
}

impl<'a> Div<&'a HPComplex> for &'a HPComplex {
    type Output = HPComplex;
    /// Panics on division by an exact zero; use [`HPComplex::recip`] where
    /// the divisor may vanish.
    fn div(self, rhs: &'a HPComplex) -> HPComplex {
        let inv = rhs.recip().expect("complex division by zero");
        self * &inv
    }
}

impl Neg for &HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<HPComplex> for HPComplex {
            type Output = HPComplex;
            fn $m(self, rhs: HPComplex) -> HPComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a HPComplex> for HPComplex {
            type Output = HPComplex;
            fn $m(self, rhs: &'a HPComplex) -> HPComplex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<HPComplex> for &'a HPComplex {
            type Output = HPComplex;
            fn $m(self, rhs: HPComplex) -> HPComplex {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&HPComplex> for HPComplex {
    fn add_assign(&mut self, rhs: &HPComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<HPComplex> for HPComplex {
    fn add_assign(&mut self, rhs: HPComplex) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign<&HPComplex> for HPComplex {
    fn sub_assign(&mut self, rhs: &HPComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&HPComplex> for HPComplex {
    fn mul_assign(&mut self, rhs: &HPComplex) {
        *self = &*self * rhs;
    }
}

/// `base^n` at the working precision of `base`.
pub fn complex_pow_int(base: &HPComplex, n: i64) -> Result<HPComplex> {
    base.powi(n)
}

/// Mathematical constants certified at one working precision.
#[derive(Clone, Debug)]
pub struct Constants {
    pub pi: Float,
    /// Lemniscate constant, the real period of the square lattice.
    pub lemniscate: Float,
    /// Period constant of the hexagonal lattice.
    pub lemniscate6: Float,
    pub sqrt3: Float,
    pub rho: HPComplex,
    pub imag_unit: HPComplex,
}

pub fn make_constants(cfg: &PrecisionConfig) -> Constants {
    let p = cfg.working_bits();
    let pi = Float::with_val(p, Constant::Pi);
    let two_pi = Float::with_val(p, &pi * 2u32);

    // Gamma(1/4)^2 / (2 sqrt(2 pi))
    let g14 = Float::with_val(p, Float::with_val(p, 0.25).gamma_ref());
    let lemniscate = Float::with_val(p, g14.square_ref()) / (Float::with_val(p, two_pi.sqrt_ref()) * 2u32);

    // Gamma(1/3)^3 / (2^(4/3) pi)
    let third = Float::with_val(p, Rational::from((1, 3)));
    let g13 = Float::with_val(p, third.gamma_ref());
    let two_43 = Float::with_val(p, Float::with_val(p, 2).pow(Float::with_val(p, Rational::from((4, 3)))));
    let lemniscate6 = Float::with_val(p, g13.pow(3u32)) / (two_43 * &pi);

    let sqrt3 = Float::with_val(p, 3).sqrt();
    let half_sqrt3 = Float::with_val(p, &sqrt3 >> 1u32);
    let rho = HPComplex::new(Float::with_val(p, -0.5), half_sqrt3);

    Constants { pi, lemniscate, lemniscate6, sqrt3, rho, imag_unit: HPComplex::i(p) }
}

/// Lemniscate constant by the arithmetic-geometric mean, `pi / agm(1, sqrt 2)`.
pub fn lemniscate_agm(prec: u32) -> Float {
    let pi = Float::with_val(prec, Constant::Pi);
    let one = Float::with_val(prec, 1);
    let s2 = Float::with_val(prec, 2).sqrt();
    pi / Float::with_val(prec, one.agm_ref(&s2))
}

/// Precision configuration together with the constants computed for it.
#[derive(Clone, Debug)]
pub struct Context {
    pub cfg: PrecisionConfig,
    pub consts: Constants,
}

impl Context {
    pub fn new(cfg: PrecisionConfig) -> Self {
        let consts = make_constants(&cfg);
        Self { cfg, consts }
    }

    pub fn with_bits(bits: u32) -> Result<Self> {
        Ok(Self::new(PrecisionConfig::with_bits(bits)?))
    }

    pub fn prec(&self) -> u32 {
        self.cfg.working_bits()
    }

    pub fn real<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec(), v)
    }

    pub fn rat(&self, q: &Rational) -> HPComplex {
        HPComplex::from_rational(q, self.prec())
    }

    pub fn zero(&self) -> HPComplex {
        HPComplex::zero(self.prec())
    }

    pub fn one(&self) -> HPComplex {
        HPComplex::one(self.prec())
    }

    pub fn i(&self) -> HPComplex {
        HPComplex::i(self.prec())
    }

    pub fn pi(&self) -> HPComplex {
        HPComplex::from_real(self.consts.pi.clone())
    }

    /// `2 pi i`.
    pub fn two_pi_i(&self) -> HPComplex {
        HPComplex::new(self.real(0), Float::with_val(self.prec(), &self.consts.pi * 2u32))
    }

    /// `exp(2 pi i q)` for rational `q`, reduced mod 1 first.
    pub fn exp_2pi_i_rational(&self, q: &Rational) -> HPComplex {
        let (_, frac) = crate::bernoulli::frac_int_parts(q);
        let angle = Float::with_val(self.prec(), &self.consts.pi * 2u32) * frac;
        let (s, c) = angle.sin_cos(self.real(0));
        HPComplex::new(c, s)
    }

    pub fn tol(&self, digits: u32) -> Float {
        ten_pow_neg(digits, self.prec())
    }
}

impl Default for Context {
    fn default() -> Self {
        Self::new(PrecisionConfig::default())
    }
}
