//! Text input: rationals as `p/q`, complex numbers, lattice bases and
//! integer ranges.
//!
//! A complex entry is a `re,im` pair of rationals, a rational, a rational
//! followed by `i` (`2i`, `-1/3i`), or one of the symbols `i`, `rho`.
//! A basis is `omega1,omega2` where each period is a single-token entry
//! (`1,i`, `1,rho`, `2,3i`), or `omega1;omega2` with arbitrary entries
//! (`1;0,2` is `(1, 2i)`, `1,0;1/2,3/2` is `(1, (1+3i)/2)`).

use std::str::FromStr;

use rug::Rational;

use crate::closed_form::BasisTag;
use crate::error::{Error, Result};
use crate::params::LatticeBasis;
use crate::precision::{Context, HPComplex};

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a rational p/q: {s:?}")))
}

/// A complex input, kept symbolic where possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexInput {
    Gaussian(Rational, Rational),
    Rho,
}

impl ComplexInput {
    pub fn to_complex(&self, ctx: &Context) -> HPComplex {
        match self {
            ComplexInput::Gaussian(re, im) => HPComplex::from_rationals(re, im, ctx.prec()),
            ComplexInput::Rho => ctx.consts.rho.clone(),
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, ComplexInput::Gaussian(re, im) if *re == 1 && *im == 0)
    }

    fn is_i(&self) -> bool {
        matches!(self, ComplexInput::Gaussian(re, im) if *re == 0 && *im == 1)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ComplexInput::Gaussian(re, im) if *im == 0 => Some(re),
            _ => None,
        }
    }
}

fn parse_token(s: &str) -> Result<ComplexInput> {
    let t = s.trim();
    match t {
        "i" | "+i" => return Ok(ComplexInput::Gaussian(Rational::new(), Rational::from(1))),
        "-i" => return Ok(ComplexInput::Gaussian(Rational::new(), Rational::from(-1))),
        "rho" => return Ok(ComplexInput::Rho),
        _ => {}
    }
    if let Some(coef) = t.strip_suffix('i') {
        return Ok(ComplexInput::Gaussian(Rational::new(), parse_rational(coef)?));
    }
    Ok(ComplexInput::Gaussian(parse_rational(t)?, Rational::new()))
}

impl FromStr for ComplexInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(',') {
            Some((re, im)) => Ok(ComplexInput::Gaussian(parse_rational(re)?, parse_rational(im)?)),
            None => parse_token(s),
        }
    }
}

/// A parsed basis; exact when it is literally `(1, i)` or `(1, rho)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisInput {
    pub omega1: ComplexInput,
    pub omega2: ComplexInput,
}

impl FromStr for BasisInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = if let Some((a, b)) = s.split_once(';') {
            (a.parse()?, b.parse()?)
        } else {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("basis needs two periods, got {s:?}")));
            }
            (parse_token(parts[0])?, parse_token(parts[1])?)
        };
        Ok(BasisInput { omega1: a, omega2: b })
    }
}

impl BasisInput {
    pub fn square() -> Self {
        "1,i".parse().expect("literal basis")
    }

    pub fn tag(&self, ctx: &Context) -> Result<BasisTag> {
        if self.omega1.is_one() {
            if self.omega2.is_i() {
                return Ok(BasisTag::Square);
            }
            if self.omega2 == ComplexInput::Rho {
                return Ok(BasisTag::Hexagonal);
            }
        }
        Ok(BasisTag::Generic(LatticeBasis::new(self.omega1.to_complex(ctx), self.omega2.to_complex(ctx))?))
    }
}

/// `a..b` (inclusive), `a,b,c`, or a single value.
pub fn parse_u32_range(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("not a range: {s:?}"));
    let t = s.trim();
    if let Some((a, b)) = t.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// Comma separated rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}
