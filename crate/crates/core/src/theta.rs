//! The odd Jacobi theta function
//! `theta(z; tau) = -i sum_n exp(pi i (n+1/2)^2 tau + 2 pi i (n+1/2) z + pi i n)`
//! and its first three `z`-derivatives.
//!
//! Terms are generated by the two-term recurrence in `n` starting from the
//! dominant index, so only three exponentials are needed per evaluation.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::HPComplex;

/// `theta^(d)(z; tau)` for `d = 0..=max_deriv` (at most 3).
pub fn theta_derivs(z: &HPComplex, tau: &HPComplex, max_deriv: u32) -> Result<Vec<HPComplex>> {
    assert!(max_deriv <= 3, "theta derivatives above 3 are not provided");
    if tau.im.is_sign_negative() || tau.im.is_zero() {
        return Err(Error::NonconvergentTau);
    }
    let p = z.prec().max(tau.prec());
    let pi = Float::with_val(p, Constant::Pi);
    let two_pi = Float::with_val(p, &pi * 2u32);
    let pi_i = HPComplex::new(Float::new(p), pi.clone());
    let two_pi_i = HPComplex::new(Float::new(p), two_pi.clone());

    // theta(z + m) = (-1)^m theta(z)
    let m = z.re.to_f64().round();
    let zr = HPComplex::new(Float::with_val(p, &z.re - m), z.im.clone());
    let odd_shift = (m as i64).rem_euclid(2) == 1;

    // |term_n| peaks at n + 1/2 = -Im z / Im tau
    let n0 = (-zr.im.to_f64() / tau.im.to_f64() - 0.5).round() as i64;
    let half = |n: i64| Float::with_val(p, n) + 0.5f64;

    let term_at = |n: i64| -> HPComplex {
        let nh = HPComplex::from_real(half(n));
        let e = &(&(&pi_i * &(&nh.square() * tau)) + &(&two_pi_i * &(&nh * &zr)))
            + &pi_i.scale_i64(n);
        e.exp()
    };
    let neg_one = HPComplex::from_i64(-1, p);
    let e2z = (&two_pi_i * &zr).exp();
    let e2z_inv = (&(-&two_pi_i) * &zr).exp();
    let q2 = (&two_pi_i * tau).exp();

    let thr = Float::with_val(p, 1) >> p;
    let a0 = term_at(n0);
    let scale0 = a0.abs();
    let weight = |n: i64| HPComplex::from_real(Float::with_val(p, &two_pi * half(n))).mul_i();

    let mut sums = vec![HPComplex::zero(p); max_deriv as usize + 1];
    let add_term = |a: &HPComplex, n: i64, sums: &mut Vec<HPComplex>| {
        let w = weight(n);
        let mut t = a.clone();
        for s in sums.iter_mut() {
            *s += &t;
            t = &t * &w;
        }
    };
    let small = |a: &HPComplex, n: i64| -> bool {
        let mag = Float::with_val(p, a.abs() * Float::with_val(p, (half(n).abs() * &two_pi) + 1u32).pow(max_deriv));
        mag < Float::with_val(p, &thr * &scale0)
    };

    add_term(&a0, n0, &mut sums);
    // forward: a_{n+1} = a_n * (-e^{2 pi i z} q^{2(n+1)})
    let mut a = a0.clone();
    let mut ratio = &(&neg_one * &e2z) * &(&two_pi_i * &tau.scale_i64(n0 + 1)).exp();
    let mut n = n0;
    loop {
        a = &a * &ratio;
        ratio = &ratio * &q2;
        n += 1;
        add_term(&a, n, &mut sums);
        if n - n0 >= 2 && small(&a, n) {
            break;
        }
    }
    // backward: a_{n-1} = a_n * (-e^{-2 pi i z} q^{-2n})
    let mut a = a0;
    let mut ratio = &(&neg_one * &e2z_inv) * &(&(-&two_pi_i) * &tau.scale_i64(n0)).exp();
    let mut n = n0;
    loop {
        a = &a * &ratio;
        ratio = &ratio * &q2;
        n -= 1;
        add_term(&a, n, &mut sums);
        if n0 - n >= 2 && small(&a, n) {
            break;
        }
    }

    let minus_i = HPComplex::new(Float::new(p), Float::with_val(p, -1));
    let sign = if odd_shift { -&minus_i } else { minus_i };
    Ok(sums.iter().map(|s| &sign * s).collect())
}

/// `theta^(deriv)(z; tau)`.
pub fn theta(z: &HPComplex, tau: &HPComplex, deriv: u32) -> Result<HPComplex> {
    Ok(theta_derivs(z, tau, deriv)?.swap_remove(deriv as usize))
}

/// `theta'(0)` and `theta'''(0)`, the only nonzero low derivatives at the origin.
#[derive(Clone, Debug)]
pub struct ThetaAtZero {
    pub d1: HPComplex,
    pub d3: HPComplex,
}

impl ThetaAtZero {
    pub fn new(tau: &HPComplex) -> Result<Self> {
        let v = theta_derivs(&HPComplex::zero(tau.prec()), tau, 3)?;
        Ok(Self { d1: v[1].clone(), d3: v[3].clone() })
    }
}

/// `2 pi e^{pi i tau / 4} prod (1 - e^{2 pi i n tau})^3`, the product form of `theta'(0)`.
pub fn theta_prime_zero_product(tau: &HPComplex) -> Result<HPComplex> {
    if tau.im.is_sign_negative() || tau.im.is_zero() {
        return Err(Error::NonconvergentTau);
    }
    let p = tau.prec();
    let pi = Float::with_val(p, Constant::Pi);
    let two_pi_i = HPComplex::new(Float::new(p), Float::with_val(p, &pi * 2u32));
    let q = (&two_pi_i * tau).exp();
    let one = HPComplex::one(p);
    let thr = Float::with_val(p, 1) >> p;
    let mut prod = one.clone();
    let mut qn = q.clone();
    while qn.abs() > thr {
        let f = &one - &qn;
        prod = &prod * &(&f * &f.square());
        qn = &qn * &q;
    }
    let pref = (&HPComplex::new(Float::new(p), Float::with_val(p, &pi >> 2u32)) * tau).exp();
    Ok((&pref * &prod).scale(&Float::with_val(p, &pi * 2u32)))
}
