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

//! Shot noise, differential shot noise and the shot-noise ratio.
//!
//! For a homogeneous PPP `Phi` of density `lambda` the shot noise is
//! `S = sum |X|^-alpha`. The ratio `R = S(Phi_1) / S(Phi_2)` of two
//! independent processes has `Pr(R > x) = Pr(M(x) > 0)` with
//! `M(x) = S(Phi_1) - x S(Phi_2)`, which is stable with index `2/alpha`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::check_domain;
use crate::special::{ln_gamma, ln_recip_gamma_one_minus, sin_pi, gamma};
use crate::stable::{self, Form, Normalized, StableParams};
use crate::{Error, Result};

/// Densities of the numerator and denominator processes and the path-loss
/// exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSpec {
    pub lambda1: f64,
    pub lambda2: f64,
    pub alpha: f64,
}

impl RatioSpec {
    pub fn new(lambda1: f64, lambda2: f64, alpha: f64) -> Result<Self> {
        let s = RatioSpec {
            lambda1,
            lambda2,
            alpha,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_domain("lambda1", self.lambda1, self.lambda1 > 0.0 && self.lambda1.is_finite(), "> 0")?;
        check_domain("lambda2", self.lambda2, self.lambda2 > 0.0 && self.lambda2.is_finite(), "> 0")?;
        check_alpha(self.alpha)
    }

    /// `lambda2 / lambda1`, the only combination the closed forms depend on.
    pub fn density_ratio(&self) -> f64 {
        self.lambda2 / self.lambda1
    }

    /// Stability index `2 / alpha`.
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    check_domain("alpha", alpha, alpha > 2.0 && alpha.is_finite(), "> 2")
}

/// Truncation policy for the power series below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    /// Absolute tolerance on the magnitude of the last included term.
    pub tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 400,
            tol: 1e-12,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::ParameterDomain {
                name: "max_terms",
                value: 0.0,
                expected: ">= 1",
            });
        }
        check_domain("tol", self.tol, self.tol > 0.0, "> 0")
    }
}

/// Number of consecutive growing terms that is taken as divergence.
const GROWTH_LIMIT: usize = 3;

/// Sums `term(1) + term(2) + ...`, where `None` marks a term that is exactly
/// zero. Stops once a nonzero term falls below `ctrl.tol`.
pub(crate) fn sum_series<F>(
    ctrl: &SeriesControl,
    argument: f64,
    condition: &'static str,
    mut term: F,
) -> Result<f64>
where
    F: FnMut(usize) -> Option<f64>,
{
    ctrl.validate()?;
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    let mut growth = 0;
    let mut last = f64::NAN;
    for m in 1..=ctrl.max_terms {
        let Some(t) = term(m) else { continue };
        if !t.is_finite() {
            return Err(Error::SeriesDivergence {
                argument,
                last_index: m,
                condition,
            });
        }
        sum += t;
        last = t;
        if t.abs() < ctrl.tol {
            return Ok(sum);
        }
        match prev {
            Some(p) if t.abs() > p.abs() => growth += 1,
            _ => growth = 0,
        }
        if growth >= GROWTH_LIMIT {
            return Err(Error::SeriesDivergence {
                argument,
                last_index: m,
                condition,
            });
        }
        prev = Some(t);
    }
    Err(Error::SeriesBudget {
        terms: ctrl.max_terms,
        last_term: last,
    })
}

/// Characteristic function of `M(x) = S(Phi_1) - x S(Phi_2)`.
///
/// Evaluated as the product of the two shot-noise transforms
/// `exp(-lambda pi Gamma(1 - 2/alpha) (-j t)^(2/alpha))`, principal branch.
pub fn diff_char_fn(t: f64, x: f64, spec: &RatioSpec) -> Result<Complex64> {
    spec.validate()?;
    check_domain("x", x, x >= 0.0 && x.is_finite(), ">= 0")?;
    if t == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let d = spec.delta();
    let c = PI * gamma(1.0 - d);
    let mut log_g = -spec.lambda1 * c * Complex64::new(0.0, -t).powf(d);
    if x > 0.0 {
        log_g -= spec.lambda2 * c * Complex64::new(0.0, t * x).powf(d);
    }
    Ok(log_g.exp())
}

/// Form-A stable law of `M(x)`.
pub fn diff_stable_params(x: f64, spec: &RatioSpec) -> Result<StableParams> {
    spec.validate()?;
    check_domain("x", x, x >= 0.0 && x.is_finite(), ">= 0")?;
    let d = spec.delta();
    let num = spec.lambda1 - spec.lambda2 * x.powf(d);
    let den = spec.lambda1 + spec.lambda2 * x.powf(d);
    let mu = den * PI * gamma(1.0 - d) * (PI / spec.alpha).cos();
    StableParams::new(Form::A, d, num / den, 0.0, mu)
}

/// Form-B law with unit scale and the Form-B scale `mu_B` of the input,
/// so that `M ~ mu_B^(alpha/2) * M_normalized`.
pub fn normalize_diff(params_a: &StableParams) -> Result<Normalized> {
    params_a.validate()?;
    if params_a.form != Form::A {
        return Err(Error::Contract("normalize_diff expects a Form-A law".into()));
    }
    if params_a.gamma != 0.0 {
        return Err(Error::Contract(format!(
            "normalize_diff needs gamma = 0, got {}",
            params_a.gamma
        )));
    }
    let d = params_a.delta;
    if d >= 1.0 {
        return Err(Error::Contract(format!(
            "normalize_diff needs delta < 1, got {d}"
        )));
    }
    let alpha = 2.0 / d;
    let beta_b = (alpha / PI) * (params_a.beta * (PI / alpha).tan()).atan();
    let mu_b = params_a.mu / (PI * beta_b / alpha).cos();
    Ok(Normalized {
        params: StableParams::new(Form::B, d, beta_b.clamp(-1.0, 1.0), 0.0, 1.0)?,
        mu_b,
        scale: mu_b.powf(alpha / 2.0),
    })
}

/// `Pr(S(Phi_1) / S(Phi_2) > x)`.
pub fn ratio_ccdf(x: f64, spec: &RatioSpec) -> Result<f64> {
    spec.validate()?;
    check_domain("x", x, x >= 0.0, ">= 0")?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let a = spec.alpha;
    let y = spec.density_ratio() * x.powf(2.0 / a);
    let inner = (-1.0 + 2.0 / (1.0 + y)) * (PI / a).tan();
    Ok(a / (2.0 * PI) * inner.atan() + 0.5)
}

/// Same quantity as [`ratio_ccdf`], computed through the stable-law chain.
pub fn ratio_ccdf_via_stable(x: f64, spec: &RatioSpec) -> Result<f64> {
    let n = normalize_diff(&diff_stable_params(x, spec)?)?;
    Ok(1.0 - stable::zero_crossing_prob(&n.params)?)
}

/// Laplace transform `E[exp(-s R)]` as the power series in
/// `(lambda2/lambda1) s^(-2/alpha)`.
///
/// The series is asymptotic: its terms eventually grow for every argument,
/// so it is usable only while they first drop below `ctrl.tol`.
pub fn ratio_laplace(s: f64, spec: &RatioSpec, ctrl: &SeriesControl) -> Result<f64> {
    spec.validate()?;
    check_domain("s", s, s > 0.0 && s.is_finite(), "> 0")?;
    let d = spec.delta();
    let z = spec.density_ratio() * s.powf(-d);
    let ln_z = z.ln();
    sum_series(ctrl, z, "terms of sum (-1)^(m+1) z^m / Gamma(1 - 2m/alpha) kept shrinking", |m| {
        let (ln_r, sign) = ln_recip_gamma_one_minus(m as f64 * d)?;
        let alt = if m % 2 == 1 { 1.0 } else { -1.0 };
        Some(alt * sign * (ln_r + m as f64 * ln_z).exp())
    })
}

/// Density of a single shot noise of density `density`, from its power
/// series in `lambda pi Gamma(1 - 2/alpha) x^(-2/alpha)`.
pub fn shot_noise_pdf(x: f64, density: f64, alpha: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_alpha(alpha)?;
    check_domain("x", x, x > 0.0 && x.is_finite(), "> 0")?;
    check_domain("density", density, density > 0.0 && density.is_finite(), "> 0")?;
    let d = 2.0 / alpha;
    let z = density * PI * gamma(1.0 - d) * x.powf(-d);
    let ln_z = z.ln();
    let ln_pref = -(PI * x).ln();
    sum_series(ctrl, z, "x large enough that the series terms decay from the start", |m| {
        let mf = m as f64;
        let s = sin_pi(mf * d);
        if s == 0.0 {
            return None;
        }
        let alt = if m % 2 == 1 { 1.0 } else { -1.0 };
        let ln_mag = ln_pref + ln_gamma(1.0 + mf * d) - ln_gamma(mf + 1.0) + mf * ln_z + s.abs().ln();
        Some(alt * s.signum() * ln_mag.exp())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(l1: f64, l2: f64, a: f64) -> RatioSpec {
        RatioSpec::new(l1, l2, a).unwrap()
    }

    fn levy_pdf(x: f64, c: f64) -> f64 {
        (c / (2.0 * PI)).sqrt() * x.powf(-1.5) * (-c / (2.0 * x)).exp()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(RatioSpec::new(1.0, 1.0, 2.0).is_err());
        assert!(RatioSpec::new(0.0, 1.0, 3.0).is_err());
        assert!(RatioSpec::new(1.0, -1.0, 3.0).is_err());
        assert!(diff_char_fn(1.0, -1.0, &spec(1.0, 1.0, 4.0)).is_err());
    }

    #[test]
    fn diff_cf_examples() {
        let s = spec(1.0 / PI, 1.0, 4.0);
        assert_eq!(diff_char_fn(0.0, 3.0, &s).unwrap(), Complex64::new(1.0, 0.0));
        let g = diff_char_fn(1.0, 0.0, &s).unwrap();
        assert_relative_eq!(g.norm(), 0.2856, epsilon = 1e-4);
        assert_relative_eq!(g.arg(), 1.2533, epsilon = 1e-4);
        let k = (PI.sqrt() * std::f64::consts::FRAC_1_SQRT_2).exp().recip();
        assert_relative_eq!(g.norm(), k, max_relative = 1e-13);
    }

    #[test]
    fn diff_params_examples() {
        let p = diff_stable_params(1.0, &spec(2.0, 2.0, 3.0)).unwrap();
        assert_eq!(p.beta, 0.0);
        let q = diff_stable_params(1.0, &spec(1.0, 1.0, 4.0)).unwrap();
        let expect = 2.0 * PI * PI.sqrt() * (PI / 4.0).cos();
        assert_relative_eq!(q.mu, expect, max_relative = 1e-14);
        assert_relative_eq!(q.mu, 7.8748, epsilon = 1e-4);
        let r = diff_stable_params(0.0, &spec(0.3, 5.0, 3.5)).unwrap();
        assert_eq!(r.beta, 1.0);
        assert_relative_eq!(r.mu, 0.3 * PI * gamma(1.0 - 2.0 / 3.5) * (PI / 3.5).cos(), max_relative = 1e-14);
    }

    #[test]
    fn normalize_examples() {
        let sym = StableParams::new(Form::A, 0.5, 0.0, 0.0, 2.5).unwrap();
        let n = normalize_diff(&sym).unwrap();
        assert_eq!(n.params.beta, 0.0);
        assert_relative_eq!(n.mu_b, 2.5, max_relative = 1e-15);
        let one = StableParams::new(Form::A, 0.5, 1.0, 0.0, 3.0).unwrap();
        let m = normalize_diff(&one).unwrap();
        assert_relative_eq!(m.params.beta, 1.0, max_relative = 1e-14);
        assert_relative_eq!(m.mu_b, 3.0 / (PI / 4.0).cos(), max_relative = 1e-14);
        let off = StableParams::new(Form::A, 0.5, 1.0, 0.2, 3.0).unwrap();
        assert!(matches!(normalize_diff(&off), Err(Error::Contract(_))));
    }

    #[test]
    fn ccdf_examples() {
        let s4 = spec(1.0, 1.0, 4.0);
        assert_eq!(ratio_ccdf(0.0, &s4).unwrap(), 1.0);
        assert_relative_eq!(ratio_ccdf(1.0, &s4).unwrap(), 0.5, epsilon = 1e-15);
        assert!(ratio_ccdf(1e-300, &s4).unwrap() > 1.0 - 1e-12);
        assert!(ratio_ccdf(1e300, &s4).unwrap() < 1e-12);
        // With y = x^(1/2) = 2: (2/pi) atan(-1/3) + 1/2.
        let oracle4 = 2.0 / PI * (-1.0f64 / 3.0).atan() + 0.5;
        assert_relative_eq!(ratio_ccdf(4.0, &s4).unwrap(), oracle4, max_relative = 1e-14);
        assert_relative_eq!(oracle4, 0.29517, epsilon = 1e-5);
        // y = 8^(2/3) = 4, tan(pi/3) = sqrt 3.
        let oracle3 = 1.5 / PI * (-0.6 * 3f64.sqrt()).atan() + 0.5;
        assert_relative_eq!(ratio_ccdf(8.0, &spec(1.0, 1.0, 3.0)).unwrap(), oracle3, max_relative = 1e-14);
        assert_relative_eq!(oracle3, 0.11582, epsilon = 1e-5);
        assert_relative_eq!(ratio_ccdf_via_stable(4.0, &s4).unwrap(), 0.29517, epsilon = 1e-5);
        assert_relative_eq!(ratio_ccdf_via_stable(1.0, &spec(1.0, 1.0, 3.0)).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn laplace_examples() {
        let s = spec(1.0, 0.1, 4.0);
        let ctrl = SeriesControl::default();
        // At alpha = 4 the transform equals erfcx(sqrt(s) / rho).
        let v = ratio_laplace(1.0, &s, &ctrl).unwrap();
        assert_relative_eq!(v, crate::special::erfcx(10.0), max_relative = 1e-9);
        assert_relative_eq!(v, 0.056141, epsilon = 1e-6);
        let far = ratio_laplace(1e6, &s, &ctrl).unwrap();
        let lead = 0.1 / (PI.sqrt() * 1000.0);
        assert_relative_eq!(lead, 5.642e-5, epsilon = 1e-8);
        assert!((far - lead).abs() < 1e-10);
    }

    #[test]
    fn laplace_small_ratio_asymptote() {
        let ctrl = SeriesControl::default();
        for &a in &[3.0, 4.0, 5.0] {
            let rho = 1e-6;
            let s = spec(1.0, rho, a);
            let v = ratio_laplace(2.0, &s, &ctrl).unwrap();
            let lead = rho * 2f64.powf(-2.0 / a) / gamma(1.0 - 2.0 / a);
            assert_relative_eq!(v, lead, max_relative = 1e-5);
        }
    }

    #[test]
    fn laplace_reports_divergence() {
        let s = spec(1.0, 5.0, 4.0);
        match ratio_laplace(0.01, &s, &SeriesControl::default()) {
            Err(Error::SeriesDivergence { argument, .. }) => assert_relative_eq!(argument, 50.0, max_relative = 1e-12),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn pdf_matches_levy_at_alpha_four() {
        let ctrl = SeriesControl::default();
        let c = PI / 2.0;
        let v = shot_noise_pdf(100.0, 1.0 / PI, 4.0, &ctrl).unwrap();
        assert_relative_eq!(v, 4.961e-4, epsilon = 1e-7);
        for i in 0..=40 {
            let x = 10f64.powf(1.0 + 2.0 * i as f64 / 40.0);
            let v = shot_noise_pdf(x, 1.0 / PI, 4.0, &ctrl).unwrap();
            assert_relative_eq!(v, levy_pdf(x, c), max_relative = 1e-9);
        }
    }

    #[test]
    fn pdf_nonnegative_on_log_grid() {
        let ctrl = SeriesControl::default();
        for &a in &[3.0, 4.0, 5.0] {
            for i in 0..60 {
                let x = 10f64.powf(-0.5 + 4.0 * i as f64 / 60.0);
                match shot_noise_pdf(x, 0.1, a, &ctrl) {
                    Ok(v) => assert!(v >= -ctrl.tol, "pdf({x}) = {v}"),
                    Err(Error::SeriesDivergence { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn pdf_reports_divergence_near_origin() {
        let r = shot_noise_pdf(1e-4, 1.0, 4.0, &SeriesControl::default());
        assert!(matches!(r, Err(Error::SeriesDivergence { .. })), "{r:?}");
    }

    #[test]
    fn series_budget_is_reported() {
        let ctrl = SeriesControl { max_terms: 2, tol: 1e-300 };
        let r = shot_noise_pdf(100.0, 1.0 / PI, 4.0, &ctrl);
        assert!(matches!(r, Err(Error::SeriesBudget { terms: 2, .. })));
    }

    proptest! {
        #[test]
        fn pipeline_equivalence(x in 1e-3f64..1e3, a in 2.1f64..6.0, rho in 0.01f64..100.0) {
            let s = spec(1.0, rho, a);
            let direct = ratio_ccdf(x, &s).unwrap();
            let chain = ratio_ccdf_via_stable(x, &s).unwrap();
            prop_assert!((direct - chain).abs() < 1e-10);
        }

        #[test]
        fn ccdf_scale_invariant(x in 1e-3f64..1e3, a in 2.1f64..6.0, l1 in 1e-3f64..10.0, l2 in 1e-3f64..10.0, c in 1e-3f64..1e3) {
            let u = ratio_ccdf(x, &spec(l1, l2, a)).unwrap();
            let v = ratio_ccdf(x, &spec(c * l1, c * l2, a)).unwrap();
            prop_assert!((u - v).abs() < 1e-14);
        }

        #[test]
        fn ccdf_decreasing(x in 1e-3f64..1e3, a in 2.1f64..6.0, rho in 0.01f64..100.0, f in 1.01f64..3.0) {
            let s = spec(1.0, rho, a);
            prop_assert!(ratio_ccdf(x * f, &s).unwrap() < ratio_ccdf(x, &s).unwrap());
            prop_assert!(ratio_ccdf(x, &spec(1.0, rho * f, a)).unwrap() < ratio_ccdf(x, &s).unwrap());
        }

        #[test]
        fn ccdf_in_unit_interval(x in 0f64..1e6, a in 2.01f64..10.0, rho in 1e-4f64..1e4) {
            let v = ratio_ccdf(x, &spec(1.0, rho, a)).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn diff_cf_conjugate_symmetric(t in -50f64..50.0, x in 0f64..10.0, a in 2.1f64..6.0) {
            let s = spec(0.7, 1.3, a);
            let g = diff_char_fn(t, x, &s).unwrap();
            let h = diff_char_fn(-t, x, &s).unwrap();
            prop_assert!((g - h.conj()).norm() < 1e-14);
            prop_assert!(g.norm() <= 1.0 + 1e-15);
        }

        #[test]
        fn diff_cf_is_stable_law(t in -20f64..20.0, x in 0f64..10.0, a in 2.1f64..6.0) {
            let s = spec(0.7, 1.3, a);
            let g = diff_char_fn(t, x, &s).unwrap();
            let p = diff_stable_params(x, &s).unwrap();
            let h = stable::char_fn(&p, t).unwrap();
            prop_assert!((g - h).norm() < 1e-12);
        }

        #[test]
        fn normalize_matches_conversion(x in 0f64..10.0, a in 2.1f64..6.0, rho in 0.01f64..100.0) {
            let p = diff_stable_params(x, &spec(1.0, rho, a)).unwrap();
            let n = normalize_diff(&p).unwrap();
            let m = stable::normalize_form_b(&p).unwrap();
            prop_assert!((n.params.beta - m.params.beta).abs() <= 1e-12 * m.params.beta.abs().max(1e-3));
            prop_assert!((n.mu_b - m.mu_b).abs() <= 1e-12 * m.mu_b);
            prop_assert_eq!(n.params.mu, 1.0);
            prop_assert_eq!(n.params.gamma, 0.0);
        }

        #[test]
        fn laplace_decreasing_in_s(s in 10f64..1e4, f in 1.1f64..4.0) {
            let sp = spec(1.0, 0.1, 4.0);
            let ctrl = SeriesControl::default();
            let u = ratio_laplace(s, &sp, &ctrl).unwrap();
            let v = ratio_laplace(s * f, &sp, &ctrl).unwrap();
            prop_assert!(v < u);
        }
    }
}
