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

//! SIR of the typical user with and without CAMAC.
//!
//! One PPP of density `lambda` is sampled per trial and each point is marked
//! with the file it caches. With CAMAC the helpers of the requested file add
//! coherently, so the received power of file `n` is `|sum H_X |X|^(-alpha/2)|^2`
//! over its helpers. Without CAMAC the user is served by the nearest helper
//! of its file and every other helper interferes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::window::{far_field_exponent, Window, MAX_EXTENSIONS};
use super::{DiskRegion, PathLoss, TrialConfig};
use crate::delivery::Scenario;
use crate::exec::{fold_trials, map_chunks, trial_rng};
use crate::popularity::RequestSampler;
use crate::stats::{CoMoments, Estimate, Moments};
use crate::{Error, Result};

const CAMAC_STREAM: u64 = 0x0043_414d_4143;
const BASELINE_STREAM: u64 = 0x4e45_4152;
const TOTALS_STREAM: u64 = 0x0054_4f54_414c;

/// Products above this are treated as infinite, i.e. probability zero.
const PRODUCT_CAP: f64 = 1e300;

/// How a CAMAC trial is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CamacMode {
    /// Circularly-symmetric complex Gaussian fade per helper, combined coherently.
    ComplexFading,
    /// One exponential fade per file multiplying that file's shot noise.
    ExponentialShotNoise,
    /// Success probability given the geometry, with fading integrated out.
    Conditional,
}

/// How a trial without CAMAC is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoCamacMode {
    /// Explicit exponential fades and a success indicator.
    Indicator,
    /// Success probability given the geometry, with fading and the field
    /// beyond the window integrated out.
    Conditional,
}

/// Window sampler for a scenario, reused across the trials of a chunk.
struct Network<'a> {
    s: &'a Scenario,
    sampler: RequestSampler,
    pl: PathLoss,
    r2max: f64,
    window: Window,
}

impl<'a> Network<'a> {
    fn new(s: &'a Scenario, cfg: &TrialConfig) -> Result<Self> {
        s.validate()?;
        cfg.validate()?;
        let d = DiskRegion::for_tail(s.lambda, s.alpha, cfg.tail_tol)?;
        Ok(Network {
            s,
            sampler: RequestSampler::new(&s.profile),
            pl: PathLoss::new(s.alpha),
            r2max: d.radius * d.radius,
            window: Window::default(),
        })
    }

    fn fresh(&self) -> Network<'a> {
        Network {
            s: self.s,
            sampler: self.sampler.clone(),
            pl: self.pl,
            r2max: self.r2max,
            window: Window::default(),
        }
    }

    fn fill(&mut self, rng: &mut ChaCha8Rng) {
        self.window.fill(self.s.lambda, self.r2max, Some(&self.sampler), rng);
    }

    fn extend(&mut self, rng: &mut ChaCha8Rng) {
        self.window.extend(self.s.lambda, Some(&self.sampler), rng);
    }

    /// Expected shot noise of all helpers beyond the window.
    fn tail(&self) -> f64 {
        DiskRegion { radius: self.window.radius() }.tail_mean(self.s.lambda, self.s.alpha)
    }

    /// Per-file shot noise with the tail of each file added back.
    fn file_shot_noise(&self, out: &mut Vec<f64>) {
        let tail = self.tail();
        out.clear();
        out.extend(self.s.profile.weights().iter().map(|a| a * tail));
        for (&r2, &m) in self.window.r2.iter().zip(&self.window.marks) {
            out[m as usize] += self.pl.gain(r2);
        }
    }

    /// Index of the nearest helper caching file `k`.
    fn nearest(&self, k: usize) -> Option<usize> {
        let w = &self.window;
        (0..w.r2.len())
            .filter(|&i| w.marks[i] as usize == k)
            .min_by(|&i, &j| w.r2[i].total_cmp(&w.r2[j]))
    }

    /// Nearest helper of file `k`, enlarging the window when it has none.
    fn serving(&mut self, k: usize, rng: &mut ChaCha8Rng) -> Option<usize> {
        loop {
            if let Some(i) = self.nearest(k) {
                return Some(i);
            }
            if self.window.extensions >= MAX_EXTENSIONS {
                return None;
            }
            self.extend(rng);
        }
    }
}

fn cn<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn check_file(s: &Scenario, k: usize) -> Result<()> {
    if k >= s.n_files() {
        return Err(Error::Contract(format!("file index {k} out of range 0..{}", s.n_files())));
    }
    Ok(())
}

/// `prod_{n != k} 1 / (1 + theta S_n / S_k)`.
fn camac_conditional(shot: &[f64], k: usize, theta: f64) -> f64 {
    let sk = shot[k];
    let scale = theta / sk;
    let mut prod = 1.0;
    for (n, &sn) in shot.iter().enumerate() {
        if n != k {
            prod *= 1.0 + scale * sn;
            if prod > PRODUCT_CAP {
                return 0.0;
            }
        }
    }
    1.0 / prod
}

/// One CAMAC trial: the success indicator or probability and the SIR when
/// the mode draws fades.
fn camac_trial(net: &mut Network, k: usize, mode: CamacMode, shot: &mut Vec<f64>, amp: &mut Vec<Complex64>, rng: &mut ChaCha8Rng) -> (f64, f64) {
    net.fill(rng);
    let theta = net.s.thresholds[k];
    match mode {
        CamacMode::ComplexFading => {
            let tail = net.tail();
            amp.clear();
            amp.resize(net.s.n_files(), Complex64::new(0.0, 0.0));
            let w = &net.window;
            for (&r2, &m) in w.r2.iter().zip(&w.marks) {
                amp[m as usize] += cn(rng) * net.pl.gain(r2).sqrt();
            }
            // Beyond the window the coherent sum of each file is Gaussian
            // with variance equal to its mean tail power.
            for (a, wgt) in amp.iter_mut().zip(net.s.profile.weights()) {
                *a += cn(rng) * (wgt * tail).sqrt();
            }
            let signal = amp[k].norm_sqr();
            let interference: f64 = amp.iter().enumerate().filter(|(n, _)| *n != k).map(|(_, a)| a.norm_sqr()).sum();
            let sir = signal / interference;
            ((sir > theta) as u8 as f64, sir)
        }
        CamacMode::ExponentialShotNoise => {
            net.file_shot_noise(shot);
            let mut signal = 0.0;
            let mut interference = 0.0;
            for (n, &sn) in shot.iter().enumerate() {
                let h: f64 = rng.sample(Exp1);
                if n == k {
                    signal = h * sn;
                } else {
                    interference += h * sn;
                }
            }
            let sir = signal / interference;
            ((sir > theta) as u8 as f64, sir)
        }
        CamacMode::Conditional => {
            net.file_shot_noise(shot);
            (camac_conditional(shot, k, theta), f64::NAN)
        }
    }
}

/// `Pr(SIR > theta_k)` for a user requesting file `k` under CAMAC.
pub fn simulate_sir_camac(s: &Scenario, k: usize, cfg: &TrialConfig, mode: CamacMode) -> Result<Estimate> {
    check_file(s, k)?;
    let proto = Network::new(s, cfg)?;
    if s.n_files() == 1 {
        return Ok(Estimate { seed: cfg.seed, ..Estimate::exact(1.0) });
    }
    let m = fold_trials(
        cfg.trials,
        cfg.exec,
        |range| {
            let mut net = proto.fresh();
            let (mut shot, mut amp) = (Vec::new(), Vec::new());
            let mut acc = Moments::default();
            for t in range {
                let mut rng = trial_rng(cfg.seed, CAMAC_STREAM, t);
                acc.push(camac_trial(&mut net, k, mode, &mut shot, &mut amp, &mut rng).0);
            }
            acc
        },
        Moments::merge,
    );
    Ok(Estimate::from_moments(&m, cfg.seed))
}

/// CAMAC SIR draws for file `k` in one of the fading modes.
pub fn sir_samples_camac(s: &Scenario, k: usize, cfg: &TrialConfig, mode: CamacMode) -> Result<Vec<f64>> {
    check_file(s, k)?;
    if mode == CamacMode::Conditional {
        return Err(Error::Contract("conditional mode has no SIR samples".into()));
    }
    if s.n_files() == 1 {
        return Err(Error::DegenerateScenario("no interference with a single file".into()));
    }
    let proto = Network::new(s, cfg)?;
    let parts = map_chunks(cfg.trials, cfg.exec, |range| {
        let mut net = proto.fresh();
        let (mut shot, mut amp) = (Vec::new(), Vec::new());
        range
            .map(|t| {
                let mut rng = trial_rng(cfg.seed, CAMAC_STREAM, t);
                camac_trial(&mut net, k, mode, &mut shot, &mut amp, &mut rng).1
            })
            .collect::<Vec<_>>()
    });
    Ok(parts.concat())
}

/// Interference at the user from every window point except `serving`,
/// each with its own exponential fade.
fn faded_interference(net: &Network, serving: usize, rng: &mut ChaCha8Rng) -> f64 {
    let mut i_sum = 0.0;
    for (i, &r2) in net.window.r2.iter().enumerate() {
        if i == serving {
            continue;
        }
        let h: f64 = rng.sample(Exp1);
        i_sum += h * net.pl.gain(r2);
    }
    i_sum
}

/// `prod_{i != serving} 1 / (1 + theta g_i / g_k)` times the expected factor
/// of the field beyond the window.
fn baseline_conditional(net: &Network, serving: usize, theta: f64) -> f64 {
    let w = &net.window;
    let gk = net.pl.gain(w.r2[serving]);
    let scale = theta / gk;
    let mut prod = 1.0;
    for (i, &r2) in w.r2.iter().enumerate() {
        if i == serving {
            continue;
        }
        prod *= 1.0 + scale * net.pl.gain(r2);
        if prod > PRODUCT_CAP {
            return 0.0;
        }
    }
    let c = scale * net.pl.gain(w.r2max);
    let outer = net.s.lambda * PI * w.r2max * far_field_exponent(c, net.s.alpha);
    (-outer).exp() / prod
}

fn baseline_trial(net: &mut Network, k: usize, mode: NoCamacMode, rng: &mut ChaCha8Rng) -> (f64, bool) {
    net.fill(rng);
    let Some(serving) = net.serving(k, rng) else {
        // No helper of file k within eight window radii: the signal is then
        // weaker than each of the many window interferers.
        return (0.0, true);
    };
    let extended = net.window.extensions > 0;
    let theta = net.s.thresholds[k];
    let v = match mode {
        NoCamacMode::Indicator => {
            let h: f64 = rng.sample(Exp1);
            let signal = h * net.pl.gain(net.window.r2[serving]);
            let interference = faded_interference(net, serving, rng) + net.tail();
            (signal > theta * interference) as u8 as f64
        }
        NoCamacMode::Conditional => baseline_conditional(net, serving, theta),
    };
    (v, extended)
}

#[derive(Default)]
struct CountedMoments {
    m: Moments,
    extensions: u64,
}

impl CountedMoments {
    fn merge(&mut self, o: &CountedMoments) {
        self.m.merge(&o.m);
        self.extensions += o.extensions;
    }
}

/// `Pr(SIR > theta_k)` for a user served by its nearest helper of file `k`.
pub fn simulate_sir_no_camac(s: &Scenario, k: usize, cfg: &TrialConfig, mode: NoCamacMode) -> Result<Estimate> {
    check_file(s, k)?;
    let proto = Network::new(s, cfg)?;
    let acc = fold_trials(
        cfg.trials,
        cfg.exec,
        |range| {
            let mut net = proto.fresh();
            let mut acc = CountedMoments::default();
            for t in range {
                let mut rng = trial_rng(cfg.seed, BASELINE_STREAM, t);
                let (v, ext) = baseline_trial(&mut net, k, mode, &mut rng);
                acc.m.push(v);
                acc.extensions += ext as u64;
            }
            acc
        },
        CountedMoments::merge,
    );
    Ok(Estimate {
        extensions: acc.extensions,
        ..Estimate::from_moments(&acc.m, cfg.seed)
    })
}

/// Popularity-weighted delivery probabilities with and without CAMAC on
/// common realizations, and their ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryTotals {
    pub camac: Estimate,
    pub no_camac: Estimate,
    pub gain: f64,
    /// Delta-method standard error of `gain`.
    pub gain_stderr: f64,
    /// Per-file success probabilities, not weighted by popularity.
    pub per_file_camac: Vec<Estimate>,
    pub per_file_no_camac: Vec<Estimate>,
}

#[derive(Default)]
struct TotalsAcc {
    c: CoMoments,
    camac: Vec<Moments>,
    no_camac: Vec<Moments>,
    extensions: u64,
}

impl TotalsAcc {
    fn with_files(n: usize) -> Self {
        TotalsAcc {
            camac: vec![Moments::default(); n],
            no_camac: vec![Moments::default(); n],
            ..Default::default()
        }
    }

    fn merge(&mut self, o: &TotalsAcc) {
        self.c.merge(&o.c);
        if self.camac.is_empty() {
            self.camac = o.camac.clone();
            self.no_camac = o.no_camac.clone();
        } else {
            self.camac.iter_mut().zip(&o.camac).for_each(|(a, b)| a.merge(b));
            self.no_camac.iter_mut().zip(&o.no_camac).for_each(|(a, b)| a.merge(b));
        }
        self.extensions += o.extensions;
    }
}

/// Ratio below which a file with no helper in the window is dropped: its
/// baseline probability is at most `(1 + theta)^-n` for `n` window points.
const NEGLIGIBLE: f64 = 1e-12;

/// Both totals per trial, averaged over the request instead of sampling it.
pub fn simulate_totals(s: &Scenario, cfg: &TrialConfig) -> Result<DeliveryTotals> {
    let proto = Network::new(s, cfg)?;
    let n = s.n_files();
    let weights = s.profile.weights();
    let acc = fold_trials(
        cfg.trials,
        cfg.exec,
        |range| {
            let mut net = proto.fresh();
            let mut shot = Vec::new();
            let mut nearest: Vec<Option<usize>> = vec![None; n];
            let mut acc = TotalsAcc::with_files(n);
            for t in range {
                let mut rng = trial_rng(cfg.seed, TOTALS_STREAM, t);
                net.fill(&mut rng);
                loop {
                    nearest.iter_mut().for_each(|x| *x = None);
                    let w = &net.window;
                    for (i, (&r2, &m)) in w.r2.iter().zip(&w.marks).enumerate() {
                        let slot = &mut nearest[m as usize];
                        if slot.is_none_or(|j| r2 < w.r2[j]) {
                            *slot = Some(i);
                        }
                    }
                    let count = w.r2.len() as f64;
                    let unresolved = (0..n).any(|k| {
                        nearest[k].is_none() && weights[k] > 0.0 && (1.0 + s.thresholds[k]).powf(-count) > NEGLIGIBLE
                    });
                    if !unresolved || w.extensions >= MAX_EXTENSIONS {
                        break;
                    }
                    net.extend(&mut rng);
                }
                acc.extensions += (net.window.extensions > 0) as u64;
                let mut x = 0.0;
                let mut y = 0.0;
                if n > 1 {
                    net.file_shot_noise(&mut shot);
                }
                for k in 0..n {
                    let p = match n {
                        1 => 1.0,
                        _ => camac_conditional(&shot, k, s.thresholds[k]),
                    };
                    let q = nearest[k].map_or(0.0, |i| baseline_conditional(&net, i, s.thresholds[k]));
                    acc.camac[k].push(p);
                    acc.no_camac[k].push(q);
                    x += weights[k] * p;
                    y += weights[k] * q;
                }
                acc.c.push(x, y);
            }
            acc
        },
        TotalsAcc::merge,
    );
    let (gain, gain_stderr) = acc.c.ratio();
    let tag = |m: &Moments| Estimate {
        extensions: acc.extensions,
        ..Estimate::from_moments(m, cfg.seed)
    };
    Ok(DeliveryTotals {
        camac: tag(&acc.c.x()),
        no_camac: tag(&acc.c.y()),
        gain,
        gain_stderr,
        per_file_camac: acc.camac.iter().map(tag).collect(),
        per_file_no_camac: acc.no_camac.iter().map(tag).collect(),
    })
}
