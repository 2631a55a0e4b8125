//! Generating functions built from theta quotients and exponential
//! fractions, and their Laurent/Taylor coefficients.
//!
//! - [`GenE`]: the twisted Weierstrass-type kernel with a simple pole at each
//!   lattice point; its Laurent coefficients are the Hurwitz functions.
//! - [`GenF`]: `(2 pi i/omega2) e^{2 pi i xi z/omega2} / (e^{2 pi i xi/omega2} - 1)`.
//! - [`GenK`]: the product `E F^r` with its principal part at the origin
//!   replaced by Lerch-type terms, holomorphic at 0.

use rug::{Float, Rational};

use crate::bernoulli::factorial;
use crate::error::{Error, Result};
use crate::expfrac::ExpFrac;
use crate::laurent::{laurent_coeffs, LaurentExpansion};
use crate::params::{LatticeBasis, TwistParams};
use crate::precision::{Context, HPComplex};
use crate::theta::{theta_derivs, ThetaAtZero};

fn pole_guard(ctx: &Context) -> Float {
    Float::with_val(ctx.prec(), 1) >> (ctx.prec() / 2)
}

/// Contour radius for coefficient extraction around 0.
pub fn default_radius(basis: &LatticeBasis, include_omega2_only: bool) -> Float {
    let d = basis.min_distance();
    let d = if include_omega2_only {
        let w2 = basis.omega2.abs();
        if w2 < d {
            w2
        } else {
            d
        }
    } else {
        d
    };
    d / 4u32
}

/// `E(xi; x, y; omega1, omega2)` prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct GenE {
    pub x: Rational,
    pub y: Rational,
    pub basis: LatticeBasis,
    at_zero: ThetaAtZero,
    /// `x tau - y` with `theta` and `theta'`, `theta''` there; absent at (0,0).
    shift: Option<(HPComplex, Vec<HPComplex>)>,
    two_pi_i: HPComplex,
    guard: Float,
}

impl GenE {
    pub fn new(ctx: &Context, x: &Rational, y: &Rational, basis: &LatticeBasis) -> Result<Self> {
        let at_zero = ThetaAtZero::new(&basis.tau)?;
        let shift = if *x == 0 && *y == 0 {
            None
        } else {
            let c = &basis.tau.scale_rational(x) - &ctx.rat(y);
            let th = theta_derivs(&c, &basis.tau, 2)?;
            if th[0].abs() < pole_guard(ctx) {
                return Err(Error::PoleHit(format!("theta(x tau - y) = 0 at x={x} y={y}")));
            }
            Some((c, th))
        };
        Ok(Self {
            x: x.clone(),
            y: y.clone(),
            basis: basis.clone(),
            at_zero,
            shift,
            two_pi_i: ctx.two_pi_i(),
            guard: pole_guard(ctx),
        })
    }

    pub fn is_origin(&self) -> bool {
        self.shift.is_none()
    }

    pub fn eval(&self, xi: &HPComplex) -> Result<HPComplex> {
        let w1 = &self.basis.omega1;
        if self.basis.distance_to_lattice(xi) < self.guard {
            return Err(Error::PoleHit(format!("xi = {} is a lattice point", xi.to_decimal(12))));
        }
        let u = xi / w1;
        let tau = &self.basis.tau;
        match &self.shift {
            None => {
                let th = theta_derivs(&u, tau, 1)?;
                let lin = &(&self.two_pi_i * xi) / &(w1 * &self.basis.omega2);
                Ok(&(&(&th[1] / &th[0]) / w1) + &lin)
            }
            Some((c, thc)) => {
                let num = theta_derivs(&(&u + c), tau, 0)?;
                let den = theta_derivs(&u, tau, 0)?;
                let phase = (&self.two_pi_i * &u.scale_rational(&self.x)).exp();
                let q = &(&self.at_zero.d1 * &num[0]) / &(&den[0] * &thc[0]);
                Ok(&(&phase * &q) / w1)
            }
        }
    }

    /// `H_1` from the closed theta formula.
    pub fn h1(&self) -> HPComplex {
        match &self.shift {
            None => HPComplex::zero(self.two_pi_i.prec()),
            Some((_, th)) => {
                let a = &self.two_pi_i.scale_rational(&self.x) + &(&th[1] / &th[0]);
                &a / &self.basis.omega1
            }
        }
    }

    /// `H_2` from the closed theta formula.
    pub fn h2(&self) -> HPComplex {
        let w1 = &self.basis.omega1;
        let w1sq = w1.square();
        let t3_over_t1 = &self.at_zero.d3 / &self.at_zero.d1;
        match &self.shift {
            None => {
                let a = &(&self.two_pi_i.scale_i64(2) * w1) / &self.basis.omega2;
                let b = t3_over_t1.scale_rational(&Rational::from((2, 3)));
                &(&a + &b) / &w1sq
            }
            Some((_, th)) => {
                let tx = self.two_pi_i.scale_rational(&self.x);
                let l1 = &th[1] / &th[0];
                let l2 = &th[2] / &th[0];
                let s = &(&(&tx.square() + &(&tx * &l1).scale_i64(2)) + &l2)
                    - &t3_over_t1.scale_rational(&Rational::from((1, 3)));
                &s / &w1sq
            }
        }
    }

    /// Laurent expansion at 0 with `count` coefficients starting at `xi^-1`.
    pub fn laurent(&self, ctx: &Context, count: usize, radius: Option<&Float>) -> Result<LaurentExpansion> {
        let r = radius.cloned().unwrap_or_else(|| default_radius(&self.basis, false));
        laurent_coeffs(ctx, |xi| self.eval(xi), 1, count, &r)
    }
}

/// `E(xi; x, y; omega1, omega2)`.
pub fn gen_e(ctx: &Context, xi: &HPComplex, x: &Rational, y: &Rational, basis: &LatticeBasis) -> Result<HPComplex> {
    GenE::new(ctx, x, y, basis)?.eval(xi)
}

/// `F(xi; z; omega2)` and its `xi`-derivatives up to a prepared order.
#[derive(Clone, Debug)]
pub struct GenF {
    pub z: Rational,
    pub omega2: HPComplex,
    scale: HPComplex,
    ef: ExpFrac,
}

impl GenF {
    pub fn new(ctx: &Context, z: &Rational, omega2: &HPComplex, max_deriv: u32) -> Result<Self> {
        if omega2.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let scale = &ctx.two_pi_i() / omega2;
        Ok(Self { z: z.clone(), omega2: omega2.clone(), scale, ef: ExpFrac::new(z.clone(), max_deriv) })
    }

    pub fn eval(&self, xi: &HPComplex, deriv: u32) -> Result<HPComplex> {
        let t = &self.scale * xi;
        let g = self.ef.eval(&t, deriv)?;
        Ok(&self.scale.powi(deriv as i64 + 1)? * &g)
    }

    /// `F^(j)(xi)` for `j = 0..=n`.
    pub fn eval_all(&self, xi: &HPComplex, n: u32) -> Result<Vec<HPComplex>> {
        let t = &self.scale * xi;
        let g = self.ef.eval_all(&t, n)?;
        let mut s = self.scale.clone();
        let mut out = Vec::with_capacity(g.len());
        for v in g {
            out.push(&s * &v);
            s = &s * &self.scale;
        }
        Ok(out)
    }
}

/// `F^(deriv)(xi; z; omega2)`.
pub fn gen_f(ctx: &Context, xi: &HPComplex, z: &Rational, omega2: &HPComplex, deriv: u32) -> Result<HPComplex> {
    GenF::new(ctx, z, omega2, deriv)?.eval(xi, deriv)
}

/// `H_k(x, y; omega1, omega2)`: closed theta formulas for `k <= 2`, contour
/// extraction above.
pub fn hurwitz_function(ctx: &Context, k: u32, x: &Rational, y: &Rational, basis: &LatticeBasis) -> Result<HPComplex> {
    let e = GenE::new(ctx, x, y, basis)?;
    match k {
        0 => Ok(ctx.one()),
        1 => Ok(e.h1()),
        2 => Ok(e.h2()),
        _ => {
            let lx = e.laurent(ctx, k as usize + 1, None)?;
            Ok(lx.coeff(k as i32 - 1).scale_rational(&Rational::from(factorial(k))))
        }
    }
}

/// `H_k(x, y)` for all `k = 0..=kmax` from one contour extraction.
pub fn hurwitz_functions(ctx: &Context, kmax: u32, x: &Rational, y: &Rational, basis: &LatticeBasis) -> Result<Vec<HPComplex>> {
    let e = GenE::new(ctx, x, y, basis)?;
    let lx = e.laurent(ctx, kmax as usize + 1, None)?;
    let mut out = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax {
        out.push(match k {
            0 => ctx.one(),
            1 => e.h1(),
            2 => e.h2(),
            _ => lx.coeff(k as i32 - 1).scale_rational(&Rational::from(factorial(k))),
        });
    }
    Ok(out)
}

/// The Hurwitz number `H_k(omega1, omega2) = H_k(0, 0; omega1, omega2)`, `k >= 2`.
pub fn hurwitz_number(ctx: &Context, k: u32, basis: &LatticeBasis) -> Result<HPComplex> {
    if k < 2 {
        return Err(Error::InadmissibleParameters(format!("Hurwitz numbers start at k = 2, got {k}")));
    }
    hurwitz_function(ctx, k, &Rational::new(), &Rational::new(), basis)
}

/// `K_r(xi; x, y, z; omega1, omega2)` with the principal-part coefficients of
/// `D_r = E F^r` computed once.
#[derive(Clone, Debug)]
pub struct GenK {
    pub r: u32,
    pub params: TwistParams,
    pub basis: LatticeBasis,
    /// `K_r(xi; 0,0,1) = (-1)^{r+1} K_r(-xi; 0,0,0)`.
    reflected: bool,
    e: GenE,
    f: GenF,
    f_shift: GenF,
    /// `D_0 .. D_r`, the coefficients of `xi^{-r-1} .. xi^{-1}` in `D_r`.
    principal: Vec<HPComplex>,
}

impl GenK {
    pub fn new(ctx: &Context, r: u32, params: &TwistParams, basis: &LatticeBasis) -> Result<Self> {
        Self::with_radius(ctx, r, params, basis, None)
    }

    pub fn with_radius(
        ctx: &Context,
        r: u32,
        params: &TwistParams,
        basis: &LatticeBasis,
        radius: Option<&Float>,
    ) -> Result<Self> {
        if r == 0 {
            return Err(Error::InadmissibleParameters("r must be positive".into()));
        }
        let reflected = params.is_origin() && params.z == 1;
        let eff = if reflected { TwistParams::untwisted(Rational::new())? } else { params.clone() };
        let e = GenE::new(ctx, &eff.x, &eff.y, basis)?;
        let f = GenF::new(ctx, &eff.z, &basis.omega2, 0)?;
        let f_shift = GenF::new(ctx, &eff.frac_shift(r), &basis.omega2, r)?;
        let rad = radius.cloned().unwrap_or_else(|| default_radius(basis, true));
        let d = {
            let e = &e;
            let f = &f;
            laurent_coeffs(
                ctx,
                move |xi| {
                    let fv = f.eval(xi, 0)?;
                    Ok(&e.eval(xi)? * &fv.powi(r as i64)?)
                },
                r + 1,
                r as usize + 1,
                &rad,
            )?
        };
        let principal = d.coefficients;
        Ok(Self { r, params: params.clone(), basis: basis.clone(), reflected, e, f, f_shift, principal })
    }

    /// `D_l` for `l = 0..=r`.
    pub fn principal_coeffs(&self) -> &[HPComplex] {
        &self.principal
    }

    fn eval_unreflected(&self, xi: &HPComplex) -> Result<HPComplex> {
        let r = self.r;
        let d = &self.e.eval(xi)? * &self.f.eval(xi, 0)?.powi(r as i64)?;
        let fd = self.f_shift.eval_all(xi, r)?;
        let mut sub = HPComplex::zero(xi.prec());
        let mut jfact = Rational::from(1);
        for j in 0..=r {
            if j > 0 {
                jfact *= j;
            }
            let mut c = Rational::from(1) / &jfact;
            if j % 2 == 1 {
                c = -c;
            }
            sub += &(&self.principal[(r - j) as usize] * &fd[j as usize]).scale_rational(&c);
        }
        Ok(&d - &sub)
    }

    pub fn eval(&self, xi: &HPComplex) -> Result<HPComplex> {
        if self.reflected {
            let v = self.eval_unreflected(&-xi)?;
            Ok(if self.r % 2 == 0 { -v } else { v })
        } else {
            self.eval_unreflected(xi)
        }
    }

    /// `K_{k,r}` for `k = 1..=kmax`, from the Taylor coefficients of `K_r`.
    pub fn taylor(&self, ctx: &Context, kmax: u32, radius: Option<&Float>) -> Result<Vec<HPComplex>> {
        let rad = radius.cloned().unwrap_or_else(|| default_radius(&self.basis, true));
        let lx = laurent_coeffs(ctx, |xi| self.eval(xi), 0, kmax as usize, &rad)?;
        Ok((1..=kmax)
            .map(|k| lx.coeff(k as i32 - 1).scale_rational(&Rational::from(factorial(k))))
            .collect())
    }
}

/// `K_r(xi; x, y, z; omega1, omega2)`.
pub fn gen_k(ctx: &Context, xi: &HPComplex, r: u32, params: &TwistParams, basis: &LatticeBasis) -> Result<HPComplex> {
    GenK::new(ctx, r, params, basis)?.eval(xi)
}

/// `K_{k,r}(x, y, z; omega1, omega2) = k! [xi^{k-1}] K_r(xi)`.
#[allow(non_snake_case)]
pub fn K_coeff(ctx: &Context, k: u32, r: u32, params: &TwistParams, basis: &LatticeBasis) -> Result<HPComplex> {
    if k == 0 {
        return Err(Error::InadmissibleParameters("k must be positive".into()));
    }
    let g = GenK::new(ctx, r, params, basis)?;
    Ok(g.taylor(ctx, k, None)?.swap_remove(k as usize - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::bernoulli_scaled;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    fn samples(ctx: &Context) -> Vec<HPComplex> {
        (0..20)
            .map(|k| {
                let a = 0.113 * k as f64 - 1.07;
                let b = 0.071 * ((k * 5) % 13) as f64 - 0.41;
                HPComplex::new(ctx.real(a), ctx.real(b))
            })
            .collect()
    }

    #[test]
    fn e_quasi_periodicity() {
        let ctx = Context::default();
        let tol = ctx.tol(40);
        let basis = LatticeBasis::from_tau(&ctx, HPComplex::new(ctx.real(0.5), ctx.real(1))).unwrap();
        let e = GenE::new(&ctx, &q(1, 4), &q(1, 3), &basis).unwrap();
        let px = ctx.exp_2pi_i_rational(&q(1, 4));
        let py = ctx.exp_2pi_i_rational(&q(1, 3));
        for xi in samples(&ctx) {
            let v = e.eval(&xi).unwrap();
            let v1 = e.eval(&(&xi + &basis.omega1)).unwrap();
            let v2 = e.eval(&(&xi + &basis.omega2)).unwrap();
            assert!(v1.approx_eq(&(&v * &px), &tol));
            assert!(v2.approx_eq(&(&v * &py), &tol));
        }
    }

    #[test]
    fn e_origin_quasi_periodicity() {
        let ctx = Context::default();
        let tol = ctx.tol(40);
        let basis = LatticeBasis::hexagonal(&ctx);
        let e = GenE::new(&ctx, &q(0, 1), &q(0, 1), &basis).unwrap();
        let jump = &ctx.two_pi_i() / &basis.omega2;
        for xi in samples(&ctx) {
            let v = e.eval(&xi).unwrap();
            assert!(e.eval(&(&xi + &basis.omega1)).unwrap().approx_eq(&(&v + &jump), &tol));
            assert!(e.eval(&(&xi + &basis.omega2)).unwrap().approx_eq(&v, &tol));
        }
    }

    #[test]
    fn e_residue_and_pole_guard() {
        let ctx = Context::default();
        let basis = LatticeBasis::square(&ctx);
        for (x, y) in [(q(0, 1), q(0, 1)), (q(1, 4), q(1, 3)), (q(-1, 2), q(0, 1))] {
            let e = GenE::new(&ctx, &x, &y, &basis).unwrap();
            let lx = e.laurent(&ctx, 3, None).unwrap();
            assert!(lx.coeff(-1).approx_eq(&ctx.one(), &ctx.tol(60)));
            assert!(matches!(e.eval(&basis.omega2), Err(Error::PoleHit(_))));
        }
    }

    #[test]
    fn closed_h1_h2_match_contour() {
        let ctx = Context::default();
        let tol = ctx.tol(50);
        let basis = LatticeBasis::from_tau(&ctx, HPComplex::new(ctx.real(0.25), ctx.real(1.2))).unwrap();
        for (x, y) in [(q(0, 1), q(0, 1)), (q(1, 4), q(1, 3)), (q(0, 1), q(1, 2)), (q(-2, 3), q(0, 1))] {
            let e = GenE::new(&ctx, &x, &y, &basis).unwrap();
            let lx = e.laurent(&ctx, 3, None).unwrap();
            assert!(lx.coeff(0).approx_eq(&e.h1(), &tol), "H1 {x} {y}");
            assert!(lx.coeff(1).scale_i64(2).approx_eq(&e.h2(), &tol), "H2 {x} {y}");
        }
    }

    #[test]
    fn square_lattice_hurwitz_values() {
        let ctx = Context::default();
        let tol = ctx.tol(40);
        let basis = LatticeBasis::square(&ctx);
        let h = hurwitz_functions(&ctx, 8, &q(0, 1), &q(0, 1), &basis).unwrap();
        let two_pi = ctx.pi().scale_i64(2);
        assert!(h[2].approx_eq(&two_pi, &tol));
        let w2 = HPComplex::from_real(ctx.consts.lemniscate.clone() * 2u32);
        let h4 = -(w2.powi(4).unwrap().scale_rational(&q(1, 10)));
        assert!(h[4].approx_eq(&h4, &tol));
        let h8 = -(w2.powi(8).unwrap().scale_rational(&q(3, 10)));
        assert!(h[8].approx_eq(&h8, &tol));
        assert!(h[6].abs() < tol);
        assert!(hurwitz_number(&ctx, 1, &basis).is_err());
    }

    #[test]
    fn hexagonal_h6() {
        let ctx = Context::default();
        let basis = LatticeBasis::hexagonal(&ctx);
        let h6 = hurwitz_number(&ctx, 6, &basis).unwrap();
        let wt = HPComplex::from_real(ctx.consts.lemniscate6.clone());
        let expect = -(wt.powi(6).unwrap().scale_rational(&q(144, 7)));
        assert!(h6.approx_eq(&expect, &ctx.tol(40)));
    }

    #[test]
    fn h2_modular_relation() {
        // H_2(1, -1/tau) = tau^2 H_2(1, tau) - 4 pi i tau
        let ctx = Context::default();
        let taus = [
            ctx.i(),
            ctx.i().scale_i64(2),
            HPComplex::new(ctx.real(0.5), ctx.real(1)),
            ctx.consts.rho.clone(),
        ];
        for tau in taus {
            let b = LatticeBasis::from_tau(&ctx, tau.clone()).unwrap();
            let inv = -(tau.recip().unwrap());
            let b_inv = LatticeBasis::from_tau(&ctx, inv).unwrap();
            let lhs = hurwitz_number(&ctx, 2, &b_inv).unwrap();
            let rhs = &(&tau.square() * &hurwitz_number(&ctx, 2, &b).unwrap())
                - &(&ctx.two_pi_i().scale_i64(2) * &tau);
            assert!(lhs.approx_eq(&rhs, &ctx.tol(35)));
        }
    }

    #[test]
    fn f_identities_and_bernoulli_coefficients() {
        let ctx = Context::default();
        let tol = ctx.tol(40);
        let w2 = HPComplex::new(ctx.real(0.3), ctx.real(1.1));
        let z = q(2, 7);
        let f = GenF::new(&ctx, &z, &w2, 0).unwrap();
        let fr = GenF::new(&ctx, &(Rational::from(1) - &z), &w2, 0).unwrap();
        let phase = ctx.exp_2pi_i_rational(&z);
        for xi in samples(&ctx) {
            let v = f.eval(&xi, 0).unwrap();
            assert!(f.eval(&(&xi + &w2), 0).unwrap().approx_eq(&(&v * &phase), &tol));
            assert!(fr.eval(&-&xi, 0).unwrap().approx_eq(&-&v, &tol));
        }
        let rad = Float::with_val(ctx.prec(), w2.abs() / 4u32);
        let lx = laurent_coeffs(&ctx, |xi| f.eval(xi, 0), 1, 10, &rad).unwrap();
        assert!(lx.coeff(-1).approx_eq(&ctx.one(), &tol));
        for k in 1..=8u32 {
            let b = bernoulli_scaled(&ctx, k, &z, &w2).unwrap();
            let expect = b.scale_rational(&Rational::from((rug::Integer::from(1), factorial(k))));
            assert!(lx.coeff(k as i32 - 1).approx_eq(&expect, &tol), "k={k}");
        }
    }

    #[test]
    fn f_derivatives_consistent() {
        let ctx = Context::default();
        let w2 = ctx.i();
        let f = GenF::new(&ctx, &q(1, 3), &w2, 3).unwrap();
        let xi = HPComplex::new(ctx.real(0.21), ctx.real(0.05));
        let h = HPComplex::from_real(ctx.real(1) >> 50u32);
        for d in 1..=3 {
            let num = &(&f.eval(&(&xi + &h), d - 1).unwrap() - &f.eval(&(&xi - &h), d - 1).unwrap())
                / &h.scale_i64(2);
            assert!(num.approx_eq(&f.eval(&xi, d).unwrap(), &ctx.tol(25)));
        }
        assert!(matches!(gen_f(&ctx, &ctx.zero(), &q(1, 3), &w2, 0), Err(Error::PoleHit(_))));
    }

    #[test]
    fn k_holomorphic_at_origin() {
        let ctx = Context::default();
        let basis = LatticeBasis::square(&ctx);
        let params = TwistParams::new(q(1, 4), q(1, 3), q(1, 2)).unwrap();
        let g = GenK::new(&ctx, 2, &params, &basis).unwrap();
        let mut prev: Option<HPComplex> = None;
        for e in [10u32, 20, 30, 40] {
            let xi = HPComplex::new(ctx.real(1) >> e, ctx.real(1) >> (e + 1));
            let v = g.eval(&xi).unwrap();
            assert!(v.abs() < ctx.real(1e6));
            if let Some(p) = prev {
                assert!(v.approx_eq(&p, &ctx.tol(2)));
            }
            prev = Some(v);
        }
    }

    #[test]
    fn k11_at_half_on_square_lattice() {
        // K_{1,1}(0,0,1/2; 1,i) = H_2/2 + pi^2/(3 tau^2) = pi - pi^2/3
        let ctx = Context::default();
        let basis = LatticeBasis::square(&ctx);
        let params = TwistParams::untwisted(q(1, 2)).unwrap();
        let k11 = K_coeff(&ctx, 1, 1, &params, &basis).unwrap();
        let pi = ctx.pi();
        let expect = &pi - &pi.square().scale_rational(&q(1, 3));
        assert!(k11.approx_eq(&expect, &ctx.tol(40)));
        let g = GenK::new(&ctx, 1, &params, &basis).unwrap();
        let tiny = HPComplex::new(ctx.real(1) >> 60u32, ctx.real(0));
        assert!(g.eval(&tiny).unwrap().approx_eq(&expect, &ctx.tol(15)));
    }

    #[test]
    fn k31_matches_catalogue() {
        // K_{3,1}(0,0,1/2; 1,i) = -6 (w^4/15 - 7 pi^4/90 + pi^3/6)
        let ctx = Context::default();
        let basis = LatticeBasis::square(&ctx);
        let params = TwistParams::untwisted(q(1, 2)).unwrap();
        let k = K_coeff(&ctx, 3, 1, &params, &basis).unwrap();
        let w = HPComplex::from_real(ctx.consts.lemniscate.clone());
        let pi = ctx.pi();
        let inner = &(&w.powi(4).unwrap().scale_rational(&q(1, 15)) - &pi.powi(4).unwrap().scale_rational(&q(7, 90)))
            + &pi.powi(3).unwrap().scale_rational(&q(1, 6));
        assert!(k.approx_eq(&inner.scale_i64(-6), &ctx.tol(35)));
    }

    #[test]
    fn radius_independence() {
        let ctx = Context::default();
        let basis = LatticeBasis::square(&ctx);
        let e = GenE::new(&ctx, &q(1, 4), &q(1, 3), &basis).unwrap();
        let r = default_radius(&basis, false);
        let half = Float::with_val(ctx.prec(), &r / 2u32);
        let a = e.laurent(&ctx, 8, Some(&r)).unwrap();
        let b = e.laurent(&ctx, 8, Some(&half)).unwrap();
        for j in -1..7 {
            assert!(a.coeff(j).approx_eq(&b.coeff(j), &ctx.tol(35)), "j={j}");
        }
        let params = TwistParams::new(q(1, 4), q(1, 3), q(1, 2)).unwrap();
        let rk = default_radius(&basis, true);
        let hk = Float::with_val(ctx.prec(), &rk / 2u32);
        let ka = GenK::with_radius(&ctx, 2, &params, &basis, Some(&rk)).unwrap().taylor(&ctx, 4, Some(&rk)).unwrap();
        let kb = GenK::with_radius(&ctx, 2, &params, &basis, Some(&hk)).unwrap().taylor(&ctx, 4, Some(&hk)).unwrap();
        for (a, b) in ka.iter().zip(&kb) {
            assert!(a.approx_eq(b, &ctx.tol(35)));
        }
    }

    #[test]
    fn k_matches_residue_definition() {
        // Res_{eta=0} (D(xi)/eta - D(eta) F(xi - eta; {y+rz})) by a small eta contour
        let ctx = Context::default();
        let basis = LatticeBasis::square(&ctx);
        let params = TwistParams::new(q(1, 4), q(1, 3), q(1, 2)).unwrap();
        let r = 1;
        let g = GenK::new(&ctx, r, &params, &basis).unwrap();
        let e = GenE::new(&ctx, &params.x, &params.y, &basis).unwrap();
        let f = GenF::new(&ctx, &params.z, &basis.omega2, 0).unwrap();
        let fs = GenF::new(&ctx, &params.frac_shift(r), &basis.omega2, 0).unwrap();
        let d = |xi: &HPComplex| -> Result<HPComplex> { Ok(&e.eval(xi)? * &f.eval(xi, 0)?.powi(r as i64)?) };
        let xi = HPComplex::new(ctx.real(0.31), ctx.real(0.12));
        let dxi = d(&xi).unwrap();
        for rad in [0.05f64, 0.1] {
            let lx = laurent_coeffs(
                &ctx,
                |eta| {
                    let a = &dxi / eta;
                    let b = &d(eta)? * &fs.eval(&(&xi - eta), 0)?;
                    Ok(&a - &b)
                },
                r + 1,
                r as usize + 2,
                &ctx.real(rad),
            )
            .unwrap();
            assert!(lx.coeff(-1).approx_eq(&g.eval(&xi).unwrap(), &ctx.tol(35)), "radius {rad}");
        }
    }

    #[test]
    fn reflection_at_z_one() {
        let ctx = Context::default();
        let basis = LatticeBasis::square(&ctx);
        let p1 = TwistParams::untwisted(q(1, 1)).unwrap();
        let p0 = TwistParams::untwisted(q(0, 1)).unwrap();
        for r in 1..=3u32 {
            let k1 = GenK::new(&ctx, r, &p1, &basis).unwrap().taylor(&ctx, 5, None).unwrap();
            let k0 = GenK::new(&ctx, r, &p0, &basis).unwrap().taylor(&ctx, 5, None).unwrap();
            for k in 1..=5usize {
                let sign = if (r as usize + 1 + k - 1) % 2 == 0 { 1 } else { -1 };
                assert!(k1[k - 1].approx_eq(&k0[k - 1].scale_i64(sign), &ctx.tol(40)));
            }
        }
    }
}
