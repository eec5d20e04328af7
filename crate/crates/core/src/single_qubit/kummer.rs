//! Kummer's confluent hypergeometric function `₁F₁(a; b; z)`.

use crate::error::{FloquetError, Result};
use crate::linalg::{c, C64};

pub const KUMMER_TERM_BUDGET: usize = 10_000;

/// Taylor series with the term-ratio recurrence
/// `t_{n+1} = t_n (a + n) z / ((b + n)(n + 1))`.
///
/// Converged once three consecutive terms fall below `1e-16` of the partial
/// sum; fails after [`KUMMER_TERM_BUDGET`] terms.
pub fn kummer_1f1(a: C64, b: C64, z: C64) -> Result<C64> {
    if b.im == 0.0 && b.re <= 0.0 && b.re.fract() == 0.0 {
        return Err(FloquetError::Domain(format!("b = {b} is a non-positive integer")));
    }
    let mut term = c(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..KUMMER_TERM_BUDGET {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        sum += term;
        if term.norm() <= 1e-16 * sum.norm() {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if term == c(0.0, 0.0) {
            // a is a non-positive integer: the series is a polynomial
            return Ok(sum);
        }
    }
    Err(FloquetError::KummerNonConvergence {
        terms: KUMMER_TERM_BUDGET,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_is_one() {
        assert_eq!(kummer_1f1(c(0.3, -2.0), c(0.5, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn a_equals_b_gives_exponential() {
        let z = c(0.3, 0.7);
        let v = kummer_1f1(c(1.0, 0.0), c(1.0, 0.0), z).unwrap();
        assert!((v - z.exp()).norm() < 1e-14);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn matches_high_precision_oracle() {
        // 50-digit reference values from an independent arbitrary-precision series
        let cases = [
            (
                c(0.0, -0.25),
                c(0.5, 0.0),
                c(0.0, -2.0),
                c(0.40455518262622446818, 0.42957836660841085434),
            ),
            (
                c(0.3, 0.1),
                c(1.5, 0.0),
                c(2.5, -1.0),
                c(2.1766962637882643121, -0.49878913511063738994),
            ),
            (
                c(0.5, 2.0),
                c(1.5, 0.0),
                c(0.0, 4.0),
                c(-0.037408034415852970706, -0.048854051152088591657),
            ),
            (
                c(0.0, -3.7),
                c(0.5, 0.0),
                c(0.0, -4.7),
                c(0.64830172748383526471, 0.42890086675620969872),
            ),
        ];
        for (a, b, z, want) in cases {
            let got = kummer_1f1(a, b, z).unwrap();
            assert!((got - want).norm() < 1e-12, "{a} {b} {z}: {got} vs {want}");
        }
    }

    #[test]
    fn polynomial_case_terminates() {
        // ₁F₁(−2; 1; z) = 1 − 2z + z²/2 (Laguerre L₂)
        let z = c(1.5, 0.0);
        let v = kummer_1f1(c(-2.0, 0.0), c(1.0, 0.0), z).unwrap();
        assert!((v - (c(1.0, 0.0) - z * 2.0 + z * z / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn non_positive_integer_b_is_rejected() {
        assert!(kummer_1f1(c(1.0, 0.0), c(-1.0, 0.0), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn huge_argument_exhausts_budget() {
        assert!(matches!(
            kummer_1f1(c(0.5, 0.0), c(1.5, 0.0), c(1.0e5, 0.0)),
            Err(FloquetError::KummerNonConvergence { .. })
        ));
    }
}
