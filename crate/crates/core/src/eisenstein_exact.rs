//! Exact Eisenstein values and Hurwitz numbers for the square lattice
//! `(1, i)` and the hexagonal lattice `(1, rho)`.
//!
//! With `p(u) = u^-2 + sum_{n>=1} b_n u^{2n}` and `b_n = (2n+1) G_{2n+2}`,
//! the differential equation of `p` gives
//! `b_n = 3/((2n+3)(n-2)) sum_{k=1}^{n-2} b_k b_{n-1-k}` for `n >= 3`.
//! Both lattices have one vanishing invariant, so a single seed fixes
//! everything: `G_4(i) = w^4/15` and `G_6(rho) = wt^6/35`.

use rug::{Integer, Rational};

use crate::bernoulli::factorial;
use crate::ring::RingExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactLattice {
    /// `(1, i)`, period constant `w`.
    Square,
    /// `(1, rho)`, period constant `wt`.
    Hexagonal,
}

impl ExactLattice {
    fn period(self) -> RingExpr {
        match self {
            ExactLattice::Square => RingExpr::w(),
            ExactLattice::Hexagonal => RingExpr::wt(),
        }
    }
}

/// `b_1 .. b_count` in units of the period constant.
pub fn weierstrass_coeffs(lat: ExactLattice, count: usize) -> Vec<Rational> {
    let mut b = vec![Rational::new(); count + 1];
    let (b1, b2) = match lat {
        ExactLattice::Square => (Rational::from((1, 5)), Rational::new()),
        ExactLattice::Hexagonal => (Rational::new(), Rational::from((1, 7))),
    };
    if count >= 1 {
        b[1] = b1;
    }
    if count >= 2 {
        b[2] = b2;
    }
    for n in 3..=count {
        let mut s = Rational::new();
        for k in 1..=n - 2 {
            s += Rational::from(&b[k] * &b[n - 1 - k]);
        }
        let den = Integer::from((2 * n + 3) * (n - 2));
        b[n] = s * Rational::from((Integer::from(3), den));
    }
    b.remove(0);
    b
}

/// Rational `g` with `G_weight = g * period^weight`, for even `weight >= 4`.
pub fn eisenstein_coeff(lat: ExactLattice, weight: u32) -> Rational {
    assert!(weight >= 4 && weight % 2 == 0, "weight must be even and at least 4");
    let n = (weight / 2 - 1) as usize;
    let b = weierstrass_coeffs(lat, n);
    Rational::from(&b[n - 1] / Rational::from(2 * n as u32 + 1))
}

/// `G_weight(1, tau)` exactly; the weight-2 value uses the order
/// "sum over m inside, n outside".
pub fn eisenstein_exact(lat: ExactLattice, weight: u32) -> RingExpr {
    if weight % 2 == 1 {
        return RingExpr::zero();
    }
    match weight {
        0 => RingExpr::one(),
        2 => match lat {
            ExactLattice::Square => -&RingExpr::pi(),
            // 2 pi rho / sqrt3
            ExactLattice::Hexagonal => (&(&RingExpr::pi() * &RingExpr::rho()) * &RingExpr::sqrt3())
                .scale_rational(&Rational::from((2, 3))),
        },
        _ => lat.period().pow(weight).scale_rational(&eisenstein_coeff(lat, weight)),
    }
}

/// The Hurwitz function `H_l(0, 0; 1, tau)` exactly.
pub fn hurwitz_exact(lat: ExactLattice, l: u32) -> RingExpr {
    match l {
        0 => RingExpr::one(),
        1 => RingExpr::zero(),
        2 => eisenstein_exact(lat, 2).scale_rational(&Rational::from(-2)),
        _ => eisenstein_exact(lat, l).scale_rational(&-Rational::from(factorial(l))),
    }
}

/// Classical Hurwitz number `H_l` with `H_l(0,0;1,i) = -(2w)^l H_l`.
pub fn hurwitz_h_number(l: u32) -> Rational {
    if l < 4 || l % 4 != 0 {
        return Rational::new();
    }
    let g = eisenstein_coeff(ExactLattice::Square, l);
    g * Rational::from((Integer::from(factorial(l)), Integer::from(1) << l))
}
