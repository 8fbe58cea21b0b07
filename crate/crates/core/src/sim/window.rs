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

//! Sampled window state shared by the simulators.

use rand::Rng;

use super::poisson;
use crate::popularity::RequestSampler;
use crate::quadrature::integrate;

/// Maximum number of times a window is doubled in radius.
pub(crate) const MAX_EXTENSIONS: u32 = 3;

/// Points of one PPP in a disk, stored as squared radii with optional file
/// marks. Angles never matter for isotropic path loss.
#[derive(Debug, Clone, Default)]
pub(crate) struct Window {
    pub r2max: f64,
    pub r2: Vec<f64>,
    pub marks: Vec<u32>,
    pub extensions: u32,
}

impl Window {
    /// Resamples the window of squared radius `r2max`.
    pub fn fill<R: Rng>(&mut self, density: f64, r2max: f64, marker: Option<&RequestSampler>, rng: &mut R) {
        self.r2.clear();
        self.marks.clear();
        self.r2max = 0.0;
        self.extensions = 0;
        self.add_annulus(density, r2max, marker, rng);
    }

    /// Doubles the radius, keeping the points already inside.
    pub fn extend<R: Rng>(&mut self, density: f64, marker: Option<&RequestSampler>, rng: &mut R) {
        let outer = 4.0 * self.r2max;
        self.add_annulus(density, outer, marker, rng);
        self.extensions += 1;
    }

    fn add_annulus<R: Rng>(&mut self, density: f64, outer: f64, marker: Option<&RequestSampler>, rng: &mut R) {
        let inner = self.r2max;
        let n = poisson(density * std::f64::consts::PI * (outer - inner), rng);
        let width = outer - inner;
        for _ in 0..n {
            // The lower edge has probability zero only for inner > 0; the
            // origin itself is excluded by drawing from (0, 1].
            let u = 1.0 - rng.random::<f64>();
            self.r2.push(inner + width * u);
            if let Some(m) = marker {
                self.marks.push(m.sample(rng) as u32);
            }
        }
        self.r2max = outer;
    }

    pub fn radius(&self) -> f64 {
        self.r2max.sqrt()
    }
}

/// `int_1^inf dw / (1 + w^(alpha/2) / c)`.
///
/// The exponent of the expected product `prod 1 / (1 + theta r^alpha |X|^-alpha)`
/// over the points beyond radius `R` is `lambda pi R^2` times this integral
/// with `c = theta (r / R)^alpha`.
pub fn far_field_exponent(c: f64, alpha: f64) -> f64 {
    let p = alpha / 2.0;
    let series = |w0: f64| {
        // int_w0^inf sum_j (-1)^(j+1) c^j w^(-j p) dw
        let u = c * w0.powf(-p);
        let mut acc = 0.0;
        let mut uj = 1.0;
        for j in 1..400 {
            uj *= u;
            let t = uj * w0 / (j as f64 * p - 1.0);
            acc += if j % 2 == 1 { t } else { -t };
            if t < 1e-17 * acc.abs().max(1e-300) {
                break;
            }
        }
        acc
    };
    if c <= 0.0 {
        return 0.0;
    }
    if c <= 0.5 {
        return series(1.0);
    }
    let w0 = (2.0 * c).powf(1.0 / p);
    let head = integrate(|w| 1.0 / (1.0 + w.powf(p) / c), 1.0, w0, 1e-12 * c)
        .map(|q| q.value)
        .unwrap_or(f64::NAN);
    head + series(w0)
}
