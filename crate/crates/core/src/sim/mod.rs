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

//! Monte Carlo oracle on a finite disk around the typical user.
//!
//! Points are Poisson in a disk of radius `R`. The part of the plane beyond
//! `R` is not sampled. Its expected contribution to every shot noise,
//! `2 pi lambda R^(2-alpha) / (alpha - 2)`, is added back as a constant. The
//! radius is chosen so that the standard deviation of the neglected
//! fluctuation is `tail_tol` times the natural scale `(pi lambda)^(alpha/2)`
//! of the shot noise. That needs `n = ((alpha - 1) tail_tol^2)^(-1/(alpha - 1))`
//! points on average.

mod ratio;
mod sir;
mod window;

pub use ratio::{
    empirical_ratio_ccdf, empirical_ratio_ccdf_multi, empirical_ratio_laplace, empirical_ratio_laplace_multi, ratio_samples,
    shot_noise_samples,
};
pub use sir::{
    simulate_sir_camac, simulate_sir_no_camac, simulate_totals, sir_samples_camac, CamacMode,
    DeliveryTotals, NoCamacMode,
};
pub use window::far_field_exponent;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::check_domain;
use crate::exec::Exec;
use crate::shot_noise::check_alpha;
use crate::{Error, Result};

/// Simulation disk centred on the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskRegion {
    pub radius: f64,
}

impl DiskRegion {
    pub fn new(radius: f64) -> Result<Self> {
        check_domain("radius", radius, radius > 0.0 && radius.is_finite(), "> 0")?;
        Ok(DiskRegion { radius })
    }

    /// Radius holding `expected_points(alpha, tail_tol)` points of a
    /// density-`density` process on average.
    pub fn for_tail(density: f64, alpha: f64, tail_tol: f64) -> Result<Self> {
        check_domain("density", density, density > 0.0 && density.is_finite(), "> 0")?;
        let n = expected_points(alpha, tail_tol)?;
        Self::new((n / (std::f64::consts::PI * density)).sqrt())
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    /// Mean shot noise of the points of density `density` outside the disk.
    pub fn tail_mean(&self, density: f64, alpha: f64) -> f64 {
        2.0 * std::f64::consts::PI * density * self.radius.powf(2.0 - alpha) / (alpha - 2.0)
    }
}

/// Mean point count for which the relative tail standard deviation is
/// `tail_tol`. Never below 16.
pub fn expected_points(alpha: f64, tail_tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_domain("tail_tol", tail_tol, tail_tol > 0.0 && tail_tol < 1.0, "(0, 1)")?;
    Ok(((alpha - 1.0) * tail_tol * tail_tol).powf(-1.0 / (alpha - 1.0)).max(16.0))
}

/// Trial count, master seed and window tolerance of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub trials: u64,
    pub seed: u64,
    pub tail_tol: f64,
    pub exec: Exec,
}

pub const DEFAULT_TAIL_TOL: f64 = 1e-3;

impl TrialConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        TrialConfig {
            trials,
            seed,
            tail_tol: DEFAULT_TAIL_TOL,
            exec: Exec::default(),
        }
    }

    pub fn with_tail_tol(self, tail_tol: f64) -> Self {
        TrialConfig { tail_tol, ..self }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        TrialConfig { exec, ..self }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::ParameterDomain {
                name: "trials",
                value: 0.0,
                expected: ">= 1",
            });
        }
        check_domain("tail_tol", self.tail_tol, self.tail_tol > 0.0 && self.tail_tol < 1.0, "(0, 1)")
    }
}

/// A planar point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Homogeneous PPP of density `density` restricted to `region`.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, region: &DiskRegion, rng: &mut R) -> Result<Vec<Point>> {
    check_domain("density", density, density > 0.0 && density.is_finite(), "> 0")?;
    let n = poisson(density * region.area(), rng);
    let r2max = region.radius * region.radius;
    Ok((0..n)
        .map(|_| {
            let r = (r2max * rng.random::<f64>()).sqrt();
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            Point {
                x: r * phi.cos(),
                y: r * phi.sin(),
            }
        })
        .collect())
}

pub(crate) fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
}

/// Fading applied to each point of a shot noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fading {
    None,
    /// I.i.d. unit-mean exponential power gains.
    Exponential,
}

/// `sum h_X |X|^-alpha` over `points`.
pub fn shot_noise_value<R: Rng + ?Sized>(points: &[Point], alpha: f64, fading: Fading, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    let pl = PathLoss::new(alpha);
    let mut s = 0.0;
    for p in points {
        let r2 = p.norm_sq();
        if r2 == 0.0 {
            return Err(Error::SingularConfiguration);
        }
        let h = match fading {
            Fading::None => 1.0,
            Fading::Exponential => rng.sample(Exp1),
        };
        s += h * pl.gain(r2);
    }
    Ok(s)
}

/// `|X|^-alpha` as a function of the squared distance.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PathLoss {
    alpha: f64,
    half: f64,
}

impl PathLoss {
    pub(crate) fn new(alpha: f64) -> Self {
        PathLoss {
            alpha,
            half: -alpha / 2.0,
        }
    }

    #[inline]
    pub(crate) fn gain(&self, r2: f64) -> f64 {
        if self.alpha == 4.0 {
            1.0 / (r2 * r2)
        } else if self.alpha == 3.0 {
            1.0 / (r2 * r2.sqrt())
        } else {
            r2.powf(self.half)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::trial_rng;
    use crate::stats::Moments;
    use approx::assert_relative_eq;

    #[test]
    fn window_sizes() {
        assert_relative_eq!(expected_points(3.0, 1e-3).unwrap(), (2e-6f64).powf(-0.5), max_relative = 1e-12);
        assert_relative_eq!(expected_points(4.0, 1e-3).unwrap(), (3e-6f64).powf(-1.0 / 3.0), max_relative = 1e-12);
        assert_eq!(expected_points(4.0, 0.5).unwrap(), 16.0);
        let d = DiskRegion::for_tail(0.1, 4.0, 1e-3).unwrap();
        assert_relative_eq!(0.1 * d.area(), expected_points(4.0, 1e-3).unwrap(), max_relative = 1e-12);
        assert!(DiskRegion::new(0.0).is_err());
        assert!(expected_points(2.0, 1e-3).is_err());
    }

    #[test]
    fn tail_mean_matches_integral() {
        let d = DiskRegion::new(7.0).unwrap();
        // 2 pi lambda int_R^inf r^(1 - alpha) dr
        let q = crate::quadrature::integrate_to_infinity(|r| 2.0 * std::f64::consts::PI * 0.3 * r.powf(-2.5), 7.0, 1e-12).unwrap();
        assert_relative_eq!(d.tail_mean(0.3, 3.5), q.value, max_relative = 1e-8);
    }

    #[test]
    fn ppp_mean_count() {
        let d = DiskRegion::new(30.0).unwrap();
        let mut m = Moments::default();
        for t in 0..10_000 {
            let pts = sample_ppp(0.1, &d, &mut trial_rng(5, 0, t)).unwrap();
            assert!(pts.iter().all(|p| p.norm_sq() <= 900.0));
            m.push(pts.len() as f64);
        }
        let expect = 0.1 * std::f64::consts::PI * 900.0;
        assert_relative_eq!(expect, 282.74, epsilon = 0.01);
        assert!((m.mean() - expect).abs() < 3.0 * m.stderr());
    }

    #[test]
    fn ppp_void_probability() {
        let d = DiskRegion::new((0.01 / std::f64::consts::PI).sqrt()).unwrap();
        let trials = 200_000;
        let empty = (0..trials)
            .filter(|&t| sample_ppp(1.0, &d, &mut trial_rng(6, 0, t)).unwrap().is_empty())
            .count() as f64;
        let p = (-0.01f64).exp();
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((empty / trials as f64 - p).abs() < 3.0 * se);
    }

    #[test]
    fn thinning_gives_independent_poisson_counts() {
        let d = DiskRegion::new(10.0).unwrap();
        let a = 0.3;
        let (mut m1, mut m2, mut cross) = (Moments::default(), Moments::default(), Moments::default());
        let trials = 20_000;
        for t in 0..trials {
            let mut rng = trial_rng(7, 0, t);
            let pts = sample_ppp(0.2, &d, &mut rng).unwrap();
            let k = pts.iter().filter(|_| rng.random::<f64>() < a).count() as f64;
            let rest = pts.len() as f64 - k;
            m1.push(k);
            m2.push(rest);
            cross.push(k * rest);
        }
        let mean1 = a * 0.2 * d.area();
        let mean2 = (1.0 - a) * 0.2 * d.area();
        assert!((m1.mean() - mean1).abs() < 3.0 * m1.stderr());
        assert!((m2.mean() - mean2).abs() < 3.0 * m2.stderr());
        // Poisson: variance equals the mean.
        assert!((m1.variance() / mean1 - 1.0).abs() < 0.05);
        assert!((m2.variance() / mean2 - 1.0).abs() < 0.05);
        // Independence: E[k rest] = E[k] E[rest].
        assert!((cross.mean() - mean1 * mean2).abs() < 3.0 * cross.stderr());
    }

    #[test]
    fn shot_noise_value_examples() {
        let mut rng = trial_rng(0, 0, 0);
        let one = [Point { x: 0.0, y: 2.0 }];
        assert_eq!(shot_noise_value(&one, 4.0, Fading::None, &mut rng).unwrap(), 0.0625);
        assert_eq!(shot_noise_value(&[], 4.0, Fading::None, &mut rng).unwrap(), 0.0);
        let bad = [Point { x: 0.0, y: 0.0 }];
        assert_eq!(shot_noise_value(&bad, 3.0, Fading::None, &mut rng), Err(Error::SingularConfiguration));
        let s = shot_noise_value(&one, 3.0, Fading::Exponential, &mut rng).unwrap();
        assert!(s > 0.0);
    }

    #[test]
    fn path_loss_fast_paths() {
        for &a in &[3.0, 4.0, 3.3] {
            let pl = PathLoss::new(a);
            for &r2 in &[0.01, 1.0, 7.5, 1e4] {
                assert_relative_eq!(pl.gain(r2), (r2 as f64).sqrt().powf(-a), max_relative = 1e-13);
            }
        }
    }
}
