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

//! Alpha-stable laws in the two Zolotarev parametrizations.
//!
//! Form A (`delta != 1`):
//! `log E[e^{jtX}] = j t mu gamma - mu |t|^delta (1 - j beta sgn(t) tan(pi delta / 2))`
//!
//! Form B (`delta != 1`):
//! `log E[e^{jtX}] = j t mu gamma - mu |t|^delta exp(-j beta (pi/2) sgn(t) K(delta))`
//!
//! with `K(delta) = delta - 1 + sgn(1 - delta)`.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::check_domain;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    A,
    B,
}

/// A four-parameter stable law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    pub form: Form,
    /// Stability index in `(0, 2]`.
    pub delta: f64,
    /// Skewness in `[-1, 1]`.
    pub beta: f64,
    /// Location.
    pub gamma: f64,
    /// Scale, strictly positive.
    pub mu: f64,
}

/// `sgn` with `sgn(0) = 0`.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `K(delta) = delta - 1 + sgn(1 - delta)`.
pub fn k_factor(delta: f64) -> f64 {
    delta - 1.0 + sgn(1.0 - delta)
}

impl StableParams {
    pub fn new(form: Form, delta: f64, beta: f64, gamma: f64, mu: f64) -> Result<Self> {
        let p = StableParams {
            form,
            delta,
            beta,
            gamma,
            mu,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_domain("delta", self.delta, self.delta > 0.0 && self.delta <= 2.0, "(0, 2]")?;
        check_domain("beta", self.beta, (-1.0..=1.0).contains(&self.beta), "[-1, 1]")?;
        check_domain("gamma", self.gamma, self.gamma.is_finite(), "finite")?;
        check_domain("mu", self.mu, self.mu > 0.0 && self.mu.is_finite(), "> 0")
    }

    fn is_unit_index(&self) -> bool {
        self.delta == 1.0
    }
}

/// Characteristic function `E[exp(j t X)]`.
pub fn char_fn(params: &StableParams, t: f64) -> Result<Complex64> {
    Ok(log_char_fn(params, t)?.exp())
}

/// Logarithm of the characteristic function.
pub fn log_char_fn(params: &StableParams, t: f64) -> Result<Complex64> {
    params.validate()?;
    let StableParams {
        form,
        delta,
        beta,
        gamma,
        mu,
    } = *params;
    let j = Complex64::i();
    let s = sgn(t);
    let at = t.abs();
    let location = j * (t * mu * gamma);
    if at == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let body = match (form, params.is_unit_index()) {
        (Form::A, false) => {
            mu * at.powf(delta) * (1.0 - j * (beta * s * (PI * delta / 2.0).tan()))
        }
        (Form::A, true) => mu * at * (1.0 + j * (beta * FRAC_2_PI * s * at.ln())),
        (Form::B, false) => {
            let phase = -beta * FRAC_PI_2 * s * k_factor(delta);
            mu * at.powf(delta) * Complex64::from_polar(1.0, phase)
        }
        (Form::B, true) => mu * at * (FRAC_PI_2 + j * (beta * s * at.ln())),
    };
    Ok(location - body)
}

/// Reparametrizes the same law in `target` form.
pub fn convert(params: &StableParams, target: Form) -> Result<StableParams> {
    params.validate()?;
    if params.form == target {
        return Ok(*params);
    }
    let delta = params.delta;
    let mut out = *params;
    out.form = target;
    if params.is_unit_index() {
        match target {
            Form::A => {
                out.gamma = 2.0 * params.gamma / PI;
                out.mu = PI * params.mu / 2.0;
            }
            Form::B => {
                out.gamma = PI * params.gamma / 2.0;
                out.mu = 2.0 * params.mu / PI;
            }
        }
        return Ok(out);
    }
    if delta == 2.0 {
        // Gaussian: skewness has no effect and K(2) = 0.
        return Ok(out);
    }
    let k = k_factor(delta);
    let half = PI * delta / 2.0;
    match target {
        Form::A => {
            let phi = PI * params.beta * k / 2.0;
            out.beta = phi.tan() / half.tan();
            out.gamma = params.gamma / phi.cos();
            out.mu = params.mu * phi.cos();
        }
        Form::B => {
            let phi = (params.beta * half.tan()).atan();
            out.beta = 2.0 * phi / (PI * k);
            out.gamma = params.gamma * phi.cos();
            out.mu = params.mu / phi.cos();
        }
    }
    out.beta = out.beta.clamp(-1.0, 1.0);
    Ok(out)
}

/// A Form-B law rescaled to unit scale, `X ~ scale * X_normalized`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalized {
    pub params: StableParams,
    /// Form-B scale of the original law.
    pub mu_b: f64,
    /// `mu_b^(1/delta)`.
    pub scale: f64,
}

/// Converts to Form B and divides out the scale so that `mu = 1`.
///
/// Only strictly stable laws (`gamma = 0`) are accepted, since for
/// `gamma != 0` the location would move with the scaling.
pub fn normalize_form_b(params: &StableParams) -> Result<Normalized> {
    if params.gamma != 0.0 {
        return Err(Error::Contract(format!(
            "normalization needs gamma = 0, got {}",
            params.gamma
        )));
    }
    if params.is_unit_index() {
        return Err(Error::Unsupported(
            "scale normalization of a delta = 1 law".into(),
        ));
    }
    let b = convert(params, Form::B)?;
    let scale = b.mu.powf(1.0 / b.delta);
    Ok(Normalized {
        params: StableParams { mu: 1.0, ..b },
        mu_b: b.mu,
        scale,
    })
}

/// `Pr(X < 0)` for `X ~ S_B(delta, beta, 0, 1)`, `delta != 1`.
pub fn zero_crossing_prob(params: &StableParams) -> Result<f64> {
    params.validate()?;
    const TOL: f64 = 1e-12;
    if params.form != Form::B || params.gamma.abs() > TOL || (params.mu - 1.0).abs() > TOL {
        return Err(Error::Contract(format!(
            "zero-crossing probability needs a normalized Form-B law, got {params:?}"
        )));
    }
    if params.is_unit_index() {
        return Err(Error::Unsupported(
            "zero-crossing probability for delta = 1".into(),
        ));
    }
    let p = 0.5 * (1.0 - params.beta * k_factor(params.delta) / params.delta);
    Ok(p.clamp(0.0, 1.0))
}
