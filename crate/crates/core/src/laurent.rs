//! Laurent coefficients at the origin by trapezoidal quadrature of the
//! Cauchy integral on a circle, with node doubling until stable.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{Context, HPComplex};

pub const MAX_DOUBLINGS: u32 = 12;

/// Coefficients `c_j` of `sum_j c_j xi^j` for `j = base_order ..`.
#[derive(Clone, Debug)]
pub struct LaurentExpansion {
    pub base_order: i32,
    pub coefficients: Vec<HPComplex>,
    pub radius: Float,
    pub nodes: usize,
}

impl LaurentExpansion {
    /// Coefficient of `xi^j`; zero below the base order, panics past the end.
    pub fn coeff(&self, j: i32) -> HPComplex {
        if j < self.base_order {
            return HPComplex::zero(self.radius.prec());
        }
        self.coefficients[(j - self.base_order) as usize].clone()
    }

    pub fn top_order(&self) -> i32 {
        self.base_order + self.coefficients.len() as i32 - 1
    }
}

struct Sampler<'a, F> {
    f: &'a F,
    radius: Float,
    values: Vec<HPComplex>,
    max_abs: Float,
}

impl<F> Sampler<'_, F>
where
    F: Fn(&HPComplex) -> Result<HPComplex>,
{
    fn node(&self, k: usize, n: usize) -> HPComplex {
        let p = self.radius.prec();
        let angle = Float::with_val(p, Constant::Pi) * Float::with_val(p, 2 * k) / n as u32;
        let (s, c) = angle.sin_cos(Float::new(p));
        HPComplex::new(c, s).scale(&self.radius)
    }

    fn push(&mut self, v: HPComplex) {
        let a = v.abs();
        if a > self.max_abs {
            self.max_abs = a;
        }
        self.values.push(v);
    }

    /// Refine from `n/2` to `n` nodes, reusing the even ones.
    fn refine(&mut self, n: usize) -> Result<()> {
        if self.values.is_empty() {
            for k in 0..n {
                let v = (self.f)(&self.node(k, n))?;
                self.push(v);
            }
            return Ok(());
        }
        let old = std::mem::take(&mut self.values);
        for (k, v) in old.into_iter().enumerate() {
            self.values.push(v);
            let fresh = (self.f)(&self.node(2 * k + 1, n))?;
            self.push(fresh);
        }
        Ok(())
    }
}

/// Scaled coefficients `c_j R^j = (1/N) sum_k f(xi_k) e^{-2 pi i j k / N}`.
fn dft(values: &[HPComplex], orders: std::ops::Range<i32>) -> Vec<HPComplex> {
    let n = values.len();
    let p = values[0].prec();
    let pi = Float::with_val(p, Constant::Pi);
    let roots: Vec<HPComplex> = (0..n)
        .map(|k| {
            let angle = Float::with_val(p, &pi * (2 * k) as u32) / n as u32;
            let (s, c) = angle.sin_cos(Float::new(p));
            HPComplex::new(c, -s)
        })
        .collect();
    orders
        .map(|j| {
            let mut acc = HPComplex::zero(p);
            let jm = j.rem_euclid(n as i32) as usize;
            for (k, v) in values.iter().enumerate() {
                acc += &(v * &roots[(jm * k) % n]);
            }
            acc.scale(&(Float::with_val(p, 1) / n as u32))
        })
        .collect()
}

/// Laurent coefficients of `f` at 0 for orders `-pole_order .. count - pole_order`.
///
/// The quadrature is repeated with doubled node counts until two successive
/// results agree to `2^-bits` relative to `max |f|` on the circle.
pub fn laurent_coeffs<F>(
    ctx: &Context,
    f: F,
    pole_order: u32,
    count: usize,
    radius: &Float,
) -> Result<LaurentExpansion>
where
    F: Fn(&HPComplex) -> Result<HPComplex>,
{
    let p = ctx.prec();
    let radius = Float::with_val(p, radius);
    let lo = -(pole_order as i32);
    let hi = lo + count as i32;
    let eps = ctx.cfg.target_eps();
    let mut n = (2 * (count + pole_order as usize)).next_power_of_two().max(32);
    let mut sampler = Sampler { f: &f, radius: radius.clone(), values: Vec::new(), max_abs: Float::new(p) };
    sampler.refine(n)?;
    let mut prev = dft(&sampler.values, lo..hi);
    for _ in 0..MAX_DOUBLINGS {
        n *= 2;
        sampler.refine(n)?;
        let cur = dft(&sampler.values, lo..hi);
        let bound = Float::with_val(p, &eps * &sampler.max_abs);
        let stable = prev.iter().zip(&cur).all(|(a, b)| (a - b).abs() <= bound);
        if stable {
            let coefficients = cur
                .into_iter()
                .zip(lo..hi)
                .map(|(c, j)| {
                    let rj = Float::with_val(p, (&radius).pow(-j));
                    c.scale(&rj)
                })
                .collect();
            return Ok(LaurentExpansion { base_order: lo, coefficients, radius, nodes: n });
        }
        prev = cur;
    }
    Err(Error::QuadratureNonconvergence { doublings: MAX_DOUBLINGS })
}
