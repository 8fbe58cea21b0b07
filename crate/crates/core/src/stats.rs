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

//! Monte Carlo estimates and the goodness-of-fit statistics used to check them.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// A Monte Carlo result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    /// Trials whose simulation window had to be enlarged.
    pub extensions: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            mean: value,
            stderr: 0.0,
            trials: 0,
            seed: 0,
            extensions: 0,
        }
    }

    pub fn from_moments(m: &Moments, seed: u64) -> Self {
        Estimate {
            mean: m.mean(),
            stderr: m.stderr(),
            trials: m.count(),
            seed,
            extensions: 0,
        }
    }

    pub fn combined_stderr(&self, other: &Estimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }

    /// `|mean - value| < sigmas * stderr`.
    pub fn agrees_with(&self, value: f64, sigmas: f64) -> bool {
        (self.mean - value).abs() < sigmas * self.stderr
    }
}

/// Streaming mean and variance (Welford), mergeable with Chan's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.n as f64 * w;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// Joint moments of a pair, for ratio estimators.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CoMoments {
    n: u64,
    mean_x: f64,
    mean_y: f64,
    m2_x: f64,
    m2_y: f64,
    c_xy: f64,
}

impl CoMoments {
    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        let n = self.n as f64;
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        self.mean_x += dx / n;
        self.mean_y += dy / n;
        self.m2_x += dx * (x - self.mean_x);
        self.m2_y += dy * (y - self.mean_y);
        self.c_xy += dx * (y - self.mean_y);
    }

    pub fn merge(&mut self, o: &CoMoments) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let w = o.n as f64 / n as f64;
        let dx = o.mean_x - self.mean_x;
        let dy = o.mean_y - self.mean_y;
        let cross = self.n as f64 * w;
        self.mean_x += dx * w;
        self.mean_y += dy * w;
        self.m2_x += o.m2_x + dx * dx * cross;
        self.m2_y += o.m2_y + dy * dy * cross;
        self.c_xy += o.c_xy + dx * dy * cross;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    fn var(&self, m2: f64) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            m2 / (self.n - 1) as f64
        }
    }

    pub fn x(&self) -> Moments {
        Moments {
            n: self.n,
            mean: self.mean_x,
            m2: self.m2_x,
        }
    }

    pub fn y(&self) -> Moments {
        Moments {
            n: self.n,
            mean: self.mean_y,
            m2: self.m2_y,
        }
    }

    /// Ratio of means `E[x] / E[y]` with its delta-method standard error.
    pub fn ratio(&self) -> (f64, f64) {
        let r = self.mean_x / self.mean_y;
        if self.n < 2 {
            return (r, 0.0);
        }
        let n = self.n as f64;
        let vx = self.var(self.m2_x);
        let vy = self.var(self.m2_y);
        let cxy = self.c_xy / (n - 1.0);
        let v = (vx - 2.0 * r * cxy + r * r * vy) / (self.mean_y * self.mean_y * n);
        (r, v.max(0.0).sqrt())
    }
}

/// Asymptotic Kolmogorov critical value `c(level)` with
/// `P(sqrt(n) D_n > c) = level`.
pub fn kolmogorov_critical(level: f64) -> f64 {
    (-0.5 * (level / 2.0).ln()).sqrt()
}

/// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        let lo = f - i as f64 / n;
        let hi = (i + 1) as f64 / n - f;
        d.max(lo).max(hi)
    })
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Critical value of the two-sample KS distance at `level`.
pub fn ks_two_sample_critical(level: f64, na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    kolmogorov_critical(level) * ((na + nb) / (na * nb)).sqrt()
}

/// Pearson chi-square statistic for observed counts against probabilities.
pub fn chi_square_statistic(observed: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

/// Upper `level` quantile of the chi-square law with `dof` degrees of freedom.
pub fn chi_square_critical(dof: usize, level: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .expect("dof > 0")
        .inverse_cdf(1.0 - level)
}
