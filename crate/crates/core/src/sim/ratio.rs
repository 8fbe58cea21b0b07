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

//! Shot noise and shot-noise ratio experiments.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::window::{Window, MAX_EXTENSIONS};
use super::{DiskRegion, Fading, PathLoss, TrialConfig};
use crate::error::check_domain;
use crate::exec::{fold_trials, map_chunks, trial_rng};
use crate::shot_noise::{check_alpha, RatioSpec};
use crate::stats::{Estimate, Moments};
use crate::Result;

const SHOT_STREAM: u64 = 0x5348_4f54;
const RATIO_STREAM: u64 = 0x0052_4154_494f;

/// Draws one compensated shot noise. Returns the value and whether the window
/// had to be enlarged because it came up empty.
pub(crate) struct ShotSampler {
    density: f64,
    alpha: f64,
    r2max: f64,
    pl: PathLoss,
    fading: Fading,
    window: Window,
}

impl ShotSampler {
    pub(crate) fn new(density: f64, alpha: f64, tail_tol: f64, fading: Fading) -> Result<Self> {
        let d = DiskRegion::for_tail(density, alpha, tail_tol)?;
        Ok(ShotSampler {
            density,
            alpha,
            r2max: d.radius * d.radius,
            pl: PathLoss::new(alpha),
            fading,
            window: Window::default(),
        })
    }

    pub(crate) fn sample(&mut self, rng: &mut ChaCha8Rng) -> (f64, bool) {
        self.window.fill(self.density, self.r2max, None, rng);
        while self.window.r2.is_empty() && self.window.extensions < MAX_EXTENSIONS {
            self.window.extend(self.density, None, rng);
        }
        let mut s = 0.0;
        for &r2 in &self.window.r2 {
            let h = match self.fading {
                Fading::None => 1.0,
                Fading::Exponential => rng.sample(Exp1),
            };
            s += h * self.pl.gain(r2);
        }
        let tail = DiskRegion { radius: self.window.radius() }.tail_mean(self.density, self.alpha);
        (s + tail, self.window.extensions > 0)
    }
}

/// Independent compensated shot-noise draws of density `density`.
pub fn shot_noise_samples(density: f64, alpha: f64, fading: Fading, cfg: &TrialConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_alpha(alpha)?;
    let proto = ShotSampler::new(density, alpha, cfg.tail_tol, fading)?;
    let parts = map_chunks(cfg.trials, cfg.exec, |range| {
        let mut s = proto_clone(&proto);
        range
            .map(|t| s.sample(&mut trial_rng(cfg.seed, SHOT_STREAM, t)).0)
            .collect::<Vec<_>>()
    });
    Ok(parts.concat())
}

fn proto_clone(p: &ShotSampler) -> ShotSampler {
    ShotSampler {
        density: p.density,
        alpha: p.alpha,
        r2max: p.r2max,
        pl: p.pl,
        fading: p.fading,
        window: Window::default(),
    }
}

struct RatioSampler {
    num: ShotSampler,
    den: ShotSampler,
}

impl RatioSampler {
    fn new(spec: &RatioSpec, tail_tol: f64) -> Result<Self> {
        spec.validate()?;
        Ok(RatioSampler {
            num: ShotSampler::new(spec.lambda1, spec.alpha, tail_tol, Fading::None)?,
            den: ShotSampler::new(spec.lambda2, spec.alpha, tail_tol, Fading::None)?,
        })
    }

    fn fresh(&self) -> Self {
        RatioSampler {
            num: proto_clone(&self.num),
            den: proto_clone(&self.den),
        }
    }

    /// `(S1 / S2, window enlarged)`.
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> (f64, bool) {
        let (s1, e1) = self.num.sample(rng);
        let (s2, e2) = self.den.sample(rng);
        (s1 / s2, e1 || e2)
    }
}

/// Draws of `S(Phi_1) / S(Phi_2)` without fading.
pub fn ratio_samples(spec: &RatioSpec, cfg: &TrialConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let proto = RatioSampler::new(spec, cfg.tail_tol)?;
    let parts = map_chunks(cfg.trials, cfg.exec, |range| {
        let mut s = proto.fresh();
        range
            .map(|t| s.sample(&mut trial_rng(cfg.seed, RATIO_STREAM, t)).0)
            .collect::<Vec<_>>()
    });
    Ok(parts.concat())
}

#[derive(Default)]
struct MultiAcc {
    m: Vec<Moments>,
    extensions: u64,
}

impl MultiAcc {
    fn merge(&mut self, o: &MultiAcc) {
        if self.m.is_empty() {
            self.m.resize(o.m.len(), Moments::default());
        }
        for (a, b) in self.m.iter_mut().zip(&o.m) {
            a.merge(b);
        }
        self.extensions += o.extensions;
    }
}

/// Averages `f(R)` for each function in `fs` over common ratio draws.
fn ratio_means<F>(spec: &RatioSpec, cfg: &TrialConfig, k: usize, f: F) -> Result<Vec<Estimate>>
where
    F: Fn(f64, &mut [f64]) + Sync + Send,
{
    cfg.validate()?;
    let proto = RatioSampler::new(spec, cfg.tail_tol)?;
    let acc = fold_trials(
        cfg.trials,
        cfg.exec,
        |range| {
            let mut s = proto.fresh();
            let mut acc = MultiAcc {
                m: vec![Moments::default(); k],
                extensions: 0,
            };
            let mut buf = vec![0.0; k];
            for t in range {
                let (r, ext) = s.sample(&mut trial_rng(cfg.seed, RATIO_STREAM, t));
                f(r, &mut buf);
                for (m, v) in acc.m.iter_mut().zip(&buf) {
                    m.push(*v);
                }
                acc.extensions += ext as u64;
            }
            acc
        },
        MultiAcc::merge,
    );
    Ok(acc
        .m
        .iter()
        .map(|m| Estimate {
            extensions: acc.extensions,
            ..Estimate::from_moments(m, cfg.seed)
        })
        .collect())
}

/// Fraction of trials with `S(Phi_1) / S(Phi_2) > x`.
pub fn empirical_ratio_ccdf(x: f64, spec: &RatioSpec, cfg: &TrialConfig) -> Result<Estimate> {
    Ok(empirical_ratio_ccdf_multi(&[x], spec, cfg)?.remove(0))
}

/// [`empirical_ratio_ccdf`] at several thresholds over the same draws.
pub fn empirical_ratio_ccdf_multi(xs: &[f64], spec: &RatioSpec, cfg: &TrialConfig) -> Result<Vec<Estimate>> {
    for &x in xs {
        check_domain("x", x, x >= 0.0, ">= 0")?;
    }
    ratio_means(spec, cfg, xs.len(), |r, out| {
        for (o, &x) in out.iter_mut().zip(xs) {
            *o = if r > x { 1.0 } else { 0.0 };
        }
    })
}

/// Monte Carlo `E[exp(-s R)]`.
pub fn empirical_ratio_laplace(s: f64, spec: &RatioSpec, cfg: &TrialConfig) -> Result<Estimate> {
    Ok(empirical_ratio_laplace_multi(&[s], spec, cfg)?.remove(0))
}

/// [`empirical_ratio_laplace`] at several arguments over the same draws.
pub fn empirical_ratio_laplace_multi(ss: &[f64], spec: &RatioSpec, cfg: &TrialConfig) -> Result<Vec<Estimate>> {
    for &s in ss {
        check_domain("s", s, s > 0.0 && s.is_finite(), "> 0")?;
    }
    ratio_means(spec, cfg, ss.len(), |r, out| {
        for (o, &s) in out.iter_mut().zip(ss) {
            *o = (-s * r).exp();
        }
    })
}
