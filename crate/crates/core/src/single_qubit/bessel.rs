//! Bessel function `J₀` for real arguments.

/// First positive zero of `J₀`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;
/// Second positive zero of `J₀`.
pub const J0_SECOND_ZERO: f64 = 5.520_078_110_286_311;

/// Power series for `|x| ≤ 12`, Hankel asymptotic expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 12.0 {
        let q = -(x * x) / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * kf);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    // J₀(x) ≈ √(2/πx) [P cos(x − π/4) − Q sin(x − π/4)]
    let mu = 0.0f64;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let eight_x = 8.0 * x;
    let mut last = f64::INFINITY;
    for k in 0..30 {
        let kf = k as f64;
        if k > 0 {
            let m = 2.0 * kf - 1.0;
            term *= (4.0 * mu - m * m) / (kf * eight_x);
        }
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
    }
    let phase = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * phase.cos() - q * phase.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::excessive_precision)]
    fn reference_values() {
        let refs = [
            (0.5, 0.93846980724081290423),
            (3.0, -0.26005195490193343762),
            (7.3, 0.28821694763501439904),
            (11.9, 0.02504944169958964508),
            (12.5, 0.14688405470042110231),
            (20.0, 0.16702466434058315473),
            (35.0, -0.12684568275631256981),
        ];
        for (x, want) in refs {
            let got = bessel_j0(x);
            assert!((got - want).abs() < 1e-11, "x={x}: {got} vs {want}");
        }
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!(bessel_j0(J0_FIRST_ZERO).abs() < 1e-14);
        assert!(bessel_j0(J0_SECOND_ZERO).abs() < 1e-13);
    }
}
