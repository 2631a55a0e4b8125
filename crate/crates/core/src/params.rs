//! Period lattices and twist parameters shared by the analytic routes.

use std::fmt;

use rug::{Float, Rational};

use crate::bernoulli::{frac_int_parts, is_integer};
use crate::error::{Error, Result};
use crate::precision::{Context, HPComplex};

/// An oriented period basis `(omega1, omega2)` with `Im(omega2/omega1) > 0`.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    pub omega1: HPComplex,
    pub omega2: HPComplex,
    pub tau: HPComplex,
}

impl LatticeBasis {
    pub fn new(omega1: HPComplex, omega2: HPComplex) -> Result<Self> {
        if omega1.is_zero() || omega2.is_zero() {
            return Err(Error::InvalidConfig("periods must be nonzero".into()));
        }
        let tau = &omega2 / &omega1;
        if tau.im.is_sign_negative() || tau.im.is_zero() {
            return Err(Error::NonconvergentTau);
        }
        Ok(Self { omega1, omega2, tau })
    }

    /// `(1, tau)`.
    pub fn from_tau(ctx: &Context, tau: HPComplex) -> Result<Self> {
        Self::new(ctx.one(), tau)
    }

    /// The square lattice `(1, i)`.
    pub fn square(ctx: &Context) -> Self {
        Self::new(ctx.one(), ctx.i()).expect("(1,i) is a valid basis")
    }

    /// The hexagonal lattice `(1, rho)`, `rho = e^{2 pi i / 3}`.
    pub fn hexagonal(ctx: &Context) -> Self {
        Self::new(ctx.one(), ctx.consts.rho.clone()).expect("(1,rho) is a valid basis")
    }

    /// `m omega1 + n omega2`.
    pub fn point(&self, m: i64, n: i64) -> HPComplex {
        &self.omega1.scale_i64(m) + &self.omega2.scale_i64(n)
    }

    /// Distance from 0 to the nearest nonzero lattice point.
    pub fn min_distance(&self) -> Float {
        // search a box in the reduced coordinates; enough for |Re tau| <= 1/2 style bases
        // and still correct (just slower) for skewed ones
        let mut best: Option<Float> = None;
        let span = self.search_span();
        for m in -span..=span {
            for n in -span..=span {
                if m == 0 && n == 0 {
                    continue;
                }
                let d = self.point(m, n).abs();
                if best.as_ref().map_or(true, |b| d < *b) {
                    best = Some(d);
                }
            }
        }
        best.expect("nonempty search box")
    }

    fn search_span(&self) -> i64 {
        let t = self.tau.to_f64_pair();
        let skew = t.0.abs() / t.1.max(1e-6) + 1.0 / t.1.max(1e-6) + t.1;
        (skew.ceil() as i64).clamp(2, 64)
    }

    /// Distance from `u` (in units of omega1) to the nearest point of `Z + tau Z`.
    pub fn distance_to_lattice(&self, xi: &HPComplex) -> Float {
        let u = xi / &self.omega1;
        let (_, ty) = self.tau.to_f64_pair();
        let n0 = (u.im.to_f64() / ty).round() as i64;
        let mut best: Option<Float> = None;
        for n in n0 - 1..=n0 + 1 {
            let shifted = &u - &self.tau.scale_i64(n);
            let m0 = shifted.re.to_f64().round() as i64;
            for m in m0 - 1..=m0 + 1 {
                let d = (&shifted - &HPComplex::from_i64(m, u.prec())).abs();
                if best.as_ref().map_or(true, |b| d < *b) {
                    best = Some(d);
                }
            }
        }
        Float::with_val(u.prec(), best.unwrap() * self.omega1.abs())
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.omega1.to_decimal(12), self.omega2.to_decimal(12))
    }
}

/// Rational twists `x, y` in `(-1, 1)` and shift `z` in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistParams {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl TwistParams {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        let one = Rational::from(1);
        let neg = Rational::from(-1);
        if x <= neg || x >= one || y <= neg || y >= one {
            return Err(Error::InadmissibleParameters(format!("x, y must lie in (-1,1), got x={x} y={y}")));
        }
        if z < 0 || z > one {
            return Err(Error::InadmissibleParameters(format!("z must lie in [0,1], got {z}")));
        }
        Ok(Self { x, y, z })
    }

    /// `(0, 0, z)`.
    pub fn untwisted(z: Rational) -> Result<Self> {
        Self::new(Rational::new(), Rational::new(), z)
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn z_at_endpoint(&self) -> bool {
        self.z == 0 || self.z == 1
    }

    /// `y + r z`.
    pub fn shift(&self, r: u32) -> Rational {
        Rational::from(&self.y + Rational::from(&self.z * r))
    }

    /// `{y + r z}`.
    pub fn frac_shift(&self, r: u32) -> Rational {
        frac_int_parts(&self.shift(r)).1
    }

    pub fn shift_is_integer(&self, r: u32) -> bool {
        is_integer(&self.shift(r))
    }
}

impl fmt::Display for TwistParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} y={} z={}", self.x, self.y, self.z)
    }
}
