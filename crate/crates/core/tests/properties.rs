use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use hsze::bernoulli::{bernoulli_poly, bernoulli_poly_high, binomial, RatPoly};
use hsze::input::parse_rational;
use hsze::theta::theta;
use hsze::verify::theorem1_structure_holds;
use hsze::{Context, HPComplex};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn ctx() -> Context {
    Context::with_bits(128).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bernoulli_difference(m in 1u32..16, n in -40i64..40, d in 1i64..13) {
        let x = q(n, d);
        let p = bernoulli_poly(m);
        let lhs = p.eval(&(x.clone() + 1u32)) - p.eval(&x);
        let rhs = Rational::from(m) * Rational::from(x.clone().pow(m as i32 - 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bernoulli_reflection(m in 0u32..16, n in -40i64..40, d in 1i64..13) {
        let x = q(n, d);
        let p = bernoulli_poly(m);
        let sign = if m % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(p.eval(&(Rational::from(1) - &x)), Rational::from(sign) * p.eval(&x));
    }

    #[test]
    fn higher_order_derivative(m in 1u32..12, r in 1u32..5) {
        let d = bernoulli_poly_high(m, r).derivative();
        prop_assert_eq!(d, bernoulli_poly_high(m - 1, r).scale(&Rational::from(m * r)));
    }

    #[test]
    fn higher_order_convolution(m in 0u32..10, r in 1u32..4, s in 1u32..4, n in -20i64..20, d in 1i64..9) {
        let x = q(n, d);
        let mut rhs = Rational::new();
        for j in 0..=m {
            rhs += Rational::from(binomial(m, j)) * bernoulli_poly_high(j, r).eval(&x) * bernoulli_poly_high(m - j, s).eval(&x);
        }
        prop_assert_eq!(bernoulli_poly_high(m, r + s).eval(&x), rhs);
    }

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = q(n, d);
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn theta_symmetries(a in -3.0f64..3.0, b in -1.0f64..1.0, t in 0.6f64..2.0, s in -0.5f64..0.5) {
        let c = ctx();
        let z = HPComplex::new(c.real(a), c.real(b));
        let tau = HPComplex::new(c.real(s), c.real(t));
        let v = theta(&z, &tau, 0).unwrap();
        let tol = c.tol(30);
        prop_assert!(theta(&-&z, &tau, 0).unwrap().approx_eq(&-&v, &tol));
        let shifted = &z + &c.one();
        prop_assert!(theta(&shifted, &tau, 0).unwrap().approx_eq(&-&v, &tol));
    }
}

#[test]
fn exact_right_hand_sides_have_real_structure() {
    for k in 1..=5 {
        for r in 1..=3 {
            assert!(theorem1_structure_holds(k, r).unwrap(), "k={k} r={r}");
        }
    }
}

#[test]
fn constant_polynomial_evaluates_to_itself() {
    let p = RatPoly::constant(q(3, 7));
    assert_eq!(p.eval(&Rational::from(Integer::from(99))), q(3, 7));
}
