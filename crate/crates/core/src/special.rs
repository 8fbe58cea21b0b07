// Copyright 2026 The camac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Special functions used by the closed forms.
//!
//! Gamma and the error function come from `statrs`; this module adds the
//! pieces the series need: a reciprocal gamma that is exactly zero at the
//! poles, a signed log form for large arguments, and the scaled
//! complementary error function.

use std::f64::consts::PI;

/// Tolerance used to decide that a float sits on an integer.
const INTEGER_TOL: f64 = 1e-12;

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn erfc(x: f64) -> f64 {
    statrs::function::erf::erfc(x)
}

/// True when `x` is within rounding of an integer.
pub fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= INTEGER_TOL * x.abs().max(1.0)
}

/// `sin(pi x)` with argument reduction, exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    if is_integer(x) {
        return 0.0;
    }
    let r = x - 2.0 * (x / 2.0).round();
    (PI * r).sin()
}

/// `1 / Gamma(x)`, returning exactly `0.0` at the poles `x = 0, -1, -2, ...`.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && is_integer(x) {
        return 0.0;
    }
    if x >= 0.5 {
        if x > 170.0 {
            (-ln_gamma(x)).exp()
        } else {
            1.0 / gamma(x)
        }
    } else {
        // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
        let z = 1.0 - x;
        let g = if z > 170.0 {
            ln_gamma(z).exp()
        } else {
            gamma(z)
        };
        g * sin_pi(x) / PI
    }
}

/// Signed logarithm of `1 / Gamma(1 - z)` for `z > 0`.
///
/// Returns `None` at the poles (`z` a positive integer), otherwise
/// `(ln |1/Gamma(1-z)|, sign)`. Uses `1/Gamma(1-z) = Gamma(z) sin(pi z) / pi`,
/// which stays finite in log space for any `z`.
pub fn ln_recip_gamma_one_minus(z: f64) -> Option<(f64, f64)> {
    debug_assert!(z > 0.0);
    let s = sin_pi(z);
    if s == 0.0 {
        return None;
    }
    Some((ln_gamma(z) + s.abs().ln() - PI.ln(), s.signum()))
}

/// Scaled complementary error function `exp(x^2) erfc(x)` for `x >= 0`.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 4.0 {
        return (x * x).exp() * erfc(x);
    }
    // Continued fraction, evaluated backwards:
    // erfcx(x) = 1/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut k = x;
    for n in (1..=60).rev() {
        k = x + 0.5 * n as f64 / k;
    }
    1.0 / (PI.sqrt() * k)
}

/// Upper incomplete gamma `Gamma(1/2, z) = sqrt(pi) erfc(sqrt(z))`.
pub fn upper_gamma_half(z: f64) -> f64 {
    PI.sqrt() * erfc(z.sqrt())
}

/// `exp(z) Gamma(1/2, z) / sqrt(pi)`, finite for every `z >= 0`.
pub fn scaled_upper_gamma_half(z: f64) -> f64 {
    erfcx(z.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_reference_values() {
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(1.5), 0.5 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn recip_gamma_poles_are_exact_zero() {
        for n in 0..20 {
            assert_eq!(recip_gamma(-(n as f64)), 0.0);
        }
        // 1 - m * 2/3 for m = 3 lands on -1 only up to rounding
        assert_eq!(recip_gamma(1.0 - 3.0 * (2.0 / 3.0)), 0.0);
        assert_relative_eq!(recip_gamma(-0.5), -1.0 / (2.0 * PI.sqrt()), max_relative = 1e-13);
        assert_relative_eq!(recip_gamma(4.0), 1.0 / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn signed_log_matches_direct() {
        for &z in &[0.5, 1.5, 2.5, 0.6667, 3.3, 7.25] {
            let (l, s) = ln_recip_gamma_one_minus(z).unwrap();
            assert_relative_eq!(s * l.exp(), recip_gamma(1.0 - z), max_relative = 1e-11);
        }
        assert!(ln_recip_gamma_one_minus(2.0).is_none());
    }

    #[test]
    fn erfcx_is_continuous_at_switch() {
        let below = (16.0f64).exp() * erfc(4.0 - 1e-9);
        assert_relative_eq!(erfcx(4.0), below, max_relative = 1e-8);
        // large-x asymptote 1/(x sqrt(pi))
        let x = 1e4;
        assert_relative_eq!(erfcx(x), 1.0 / (x * PI.sqrt()), max_relative = 1e-8);
    }

    #[test]
    fn incomplete_gamma_half_endpoints() {
        assert_relative_eq!(upper_gamma_half(0.0), PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(scaled_upper_gamma_half(0.0), 1.0, max_relative = 1e-15);
        assert!(scaled_upper_gamma_half(1e6).is_finite());
    }
}
