//! Chain coefficients `c_i` of a rank-two root system.
//!
//! With `zeta = -(a, b)` the coefficients obey `c_0 = 0`, `c_1 = 1`,
//! `c_{i+1} = 2 zeta c_i - c_{i-1}` and `c_{-i} = -c_i`. For `zeta = cosh(theta)`
//! this is `sinh(i theta) / sinh(theta)`; for `zeta = cos(pi/m)` it is
//! `sin(i pi/m) / sin(pi/m)`. The recurrence needs no transcendental
//! functions, so it is exact on the rational backend.

use crate::scalar::Scalar;

/// Closed form `sinh(i theta) / sinh(theta)`, or `i` when `theta` is zero
/// under the tolerance.
pub fn chain_coefficient(theta: f64, i: i64, epsilon: f64) -> f64 {
    if theta.abs() <= epsilon {
        return i as f64;
    }
    (i as f64 * theta).sinh() / theta.sinh()
}

/// `theta = arccosh(-(a, b))` for an infinite bond value `(a, b) <= -1`.
pub fn theta_of_form(form: f64) -> f64 {
    (-form).max(1.0).acosh()
}

/// `c_0 ..= c_n` from the recurrence.
pub fn chain_coefficients<S: Scalar>(zeta: &S, n: usize) -> Vec<S> {
    let two_zeta = zeta.clone() + zeta.clone();
    let mut out = Vec::with_capacity(n + 1);
    out.push(S::zero());
    if n >= 1 {
        out.push(S::one());
    }
    for k in 1..n {
        let next = two_zeta.clone() * out[k].clone() - out[k - 1].clone();
        out.push(next);
    }
    out
}

/// Single coefficient `c_i` for any integer `i`, from the recurrence.
pub fn chain_coefficient_exact<S: Scalar>(zeta: &S, i: i64) -> S {
    let c = chain_coefficients(zeta, i.unsigned_abs() as usize);
    let v = c[i.unsigned_abs() as usize].clone();
    if i < 0 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn closed_form_examples() {
        assert_eq!(chain_coefficient(0.0, 5, 1e-9), 5.0);
        let t = 1.5f64.acosh();
        assert!((chain_coefficient(t, 1, 1e-9) - 1.0).abs() < 1e-12);
        assert!((chain_coefficient(t, 2, 1e-9) - 3.0).abs() < 1e-12);
        assert!((chain_coefficient(t, 3, 1e-9) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for &zeta in &[1.0f64, 1.1, 1.5, 2.0, 3.7] {
            let t = theta_of_form(-zeta);
            let c = chain_coefficients(&zeta, 20);
            for (i, ci) in c.iter().enumerate() {
                let closed = chain_coefficient(t, i as i64, 1e-12);
                assert!((ci - closed).abs() <= 1e-9 * closed.abs().max(1.0), "zeta={zeta} i={i}");
            }
        }
    }

    #[test]
    fn finite_case_is_sine_ratio() {
        let m = 7u32;
        let t = std::f64::consts::PI / m as f64;
        let c = chain_coefficients(&t.cos(), m as usize);
        for (i, ci) in c.iter().enumerate() {
            assert!((ci - (i as f64 * t).sin() / t.sin()).abs() < 1e-12);
        }
        assert!(c[m as usize].abs() < 1e-12);
    }

    #[test]
    fn rational_recurrence_is_exact() {
        let zeta = Rational::parse_decimal("1.5").unwrap();
        let c = chain_coefficients(&zeta, 4);
        let expect: Vec<Rational> = [0, 1, 3, 8, 21].iter().map(|&k| Rational::from_i64_exact(k)).collect();
        assert_eq!(c, expect);
        assert_eq!(chain_coefficient_exact(&zeta, -3), Rational::from_i64_exact(-8));
    }
}
