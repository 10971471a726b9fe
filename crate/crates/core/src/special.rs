//! Special functions used by the analytic predictions.
//!
//! Gamma and error functions come from `libm` (ports of the FreeBSD msun
//! routines, accurate to a few ulp on the arguments used here); the
//! regularized incomplete gamma function comes from `statrs`.

use std::f64::consts::PI;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Regularized lower incomplete gamma function `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    statrs::function::gamma::gamma_lr(a, x)
}

/// Surface area of the unit sphere in `d` dimensions, `2 pi^(d/2) / Gamma(d/2)`.
pub fn solid_angle(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0),
    }
}

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    solid_angle(d) / d as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_values() {
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(2.0), 1.0);
        assert!((gamma(0.5) - PI.sqrt()).abs() <= 1e-15);
        assert_eq!(solid_angle(2), 2.0 * PI);
        assert_eq!(solid_angle(3), 4.0 * PI);
        assert!((2.0 * PI.powf(1.5) / gamma(1.5) - 4.0 * PI).abs() < 1e-13);
        assert!((solid_angle(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert_eq!(erf(0.0), 0.0);
    }

    #[test]
    fn gamma_accuracy_on_working_range() {
        // recurrence Gamma(x+1) = x Gamma(x) and the reflection-free duplication formula
        for i in 0..=275 {
            let x = 0.25 + i as f64 * 0.01;
            let rel = (gamma(x + 1.0) - x * gamma(x)).abs() / gamma(x + 1.0);
            assert!(rel < 1e-14, "x = {x}");
            let dup = PI.sqrt() * gamma(2.0 * x) / (2f64.powf(2.0 * x - 1.0) * gamma(x));
            assert!((gamma(x + 0.5) - dup).abs() / dup < 1e-13, "x = {x}");
        }
        assert!((ln_gamma(3.5) - gamma(3.5).ln()).abs() < 1e-14);
    }

    #[test]
    fn erf_reference_values() {
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-15);
        assert!((1.0 - erf(5.0) - 1.537_459_794_428_035e-12).abs() < 2e-16);
    }

    #[test]
    fn incomplete_gamma() {
        // P(1, x) = 1 - e^-x, P(1/2, x) = erf(sqrt x)
        for &x in &[0.1, 0.7, 2.0, 9.0] {
            assert!((gamma_p(1.0, x) - (1.0 - (-x).exp())).abs() < 1e-13);
            assert!((gamma_p(0.5, x) - erf(x.sqrt())).abs() < 1e-13);
        }
        assert_eq!(gamma_p(2.0, 0.0), 0.0);
        assert_eq!(gamma_p(2.0, f64::INFINITY), 1.0);
    }
}
