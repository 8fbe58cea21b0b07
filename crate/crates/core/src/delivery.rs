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

//! Content-delivery probability under CAMAC, its bounds and the
//! conventional nearest-helper baseline.
//!
//! With CAMAC the conditional delivery probability of file `k` reduces to a
//! shot-noise ratio whose denominator collects the other files. After
//! Rayleigh fading is absorbed, everything depends on the weighted
//! popularity ratio `h_k^(2/alpha) a_k / g_k`, `g_k = sum_{n != k} a_n h_n^(2/alpha)`
//! with `h_n` i.i.d. unit exponential.

use std::f64::consts::{FRAC_2_PI, PI};

use rand::Rng;
use rand_distr::Exp1;

use crate::error::check_domain;
use crate::exec::{fold_trials, map_chunks, trial_rng, Exec};
use crate::popularity::PopularityProfile;
use crate::quadrature::integrate;
use crate::shot_noise::{check_alpha, sum_series, SeriesControl};
use crate::special::{gamma, ln_recip_gamma_one_minus, erfcx};
use crate::stats::{Estimate, Moments};
use crate::{Error, Result};

/// Stream purpose for the fading batch; shared by every method so that
/// estimates computed from one batch use common random numbers.
const FADING_STREAM: u64 = 0x4641_4449_4e47;

/// A network instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub profile: PopularityProfile,
    pub alpha: f64,
    /// SIR threshold per file.
    pub thresholds: Vec<f64>,
    /// Helper density. Closed forms never read it.
    pub lambda: f64,
}

impl Scenario {
    pub fn new(profile: PopularityProfile, alpha: f64, thresholds: Vec<f64>, lambda: f64) -> Result<Self> {
        let s = Scenario {
            profile,
            alpha,
            thresholds,
            lambda,
        };
        s.validate()?;
        Ok(s)
    }

    /// Same threshold for every file.
    pub fn uniform(profile: PopularityProfile, alpha: f64, theta: f64, lambda: f64) -> Result<Self> {
        let n = profile.len();
        Self::new(profile, alpha, vec![theta; n], lambda)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_domain("lambda", self.lambda, self.lambda > 0.0 && self.lambda.is_finite(), "> 0")?;
        if self.thresholds.len() != self.profile.len() {
            return Err(Error::Contract(format!(
                "{} thresholds for {} files",
                self.thresholds.len(),
                self.profile.len()
            )));
        }
        for &t in &self.thresholds {
            check_domain("theta", t, t > 0.0 && t.is_finite(), "> 0")?;
        }
        Ok(())
    }

    pub fn n_files(&self) -> usize {
        self.profile.len()
    }

    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    fn check_file(&self, k: usize) -> Result<()> {
        if k >= self.n_files() {
            return Err(Error::Contract(format!("file index {k} out of range 0..{}", self.n_files())));
        }
        Ok(())
    }
}

/// Size and seed of the fading sample used for the expectations over
/// `(h_k, g_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingBatch {
    pub sample_count: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl FadingBatch {
    pub fn new(sample_count: u64, seed: u64) -> Self {
        FadingBatch {
            sample_count,
            seed,
            exec: Exec::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::ParameterDomain {
                name: "sample_count",
                value: 0.0,
                expected: ">= 1",
            });
        }
        Ok(())
    }
}

#[inline]
fn pow_delta(h: f64, delta: f64) -> f64 {
    if delta == 0.5 {
        h.sqrt()
    } else {
        h.powf(delta)
    }
}

/// One draw of `g_k`, using `h` for the fades when given.
fn g_from(profile: &PopularityProfile, k: usize, hd: &[f64]) -> f64 {
    profile
        .weights()
        .iter()
        .zip(hd)
        .enumerate()
        .filter(|(n, _)| *n != k)
        .map(|(_, (a, h))| a * h)
        .sum()
}

/// Draws `g_k = sum_{n != k} a_n h_n^(2/alpha)` with fresh exponential fades.
pub fn g_sample<R: Rng + ?Sized>(profile: &PopularityProfile, k: usize, alpha: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    if profile.len() < 2 {
        return Err(Error::DegenerateScenario("g_k is an empty sum for a single file".into()));
    }
    if k >= profile.len() {
        return Err(Error::Contract(format!("file index {k} out of range")));
    }
    let d = 2.0 / alpha;
    let hd: Vec<f64> = (0..profile.len()).map(|_| pow_delta(rng.sample(Exp1), d)).collect();
    Ok(g_from(profile, k, &hd))
}

/// Fills `hd` with `h_n^(2/alpha)` for one trial of the batch.
fn draw_fades<R: Rng>(rng: &mut R, delta: f64, hd: &mut [f64]) {
    for h in hd.iter_mut() {
        *h = pow_delta(rng.sample(Exp1), delta);
    }
}

/// Integrands over the fading batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Integrand {
    Expectation,
    Alpha4,
    Lower,
}

struct FileConst {
    a: f64,
    theta: f64,
    /// `a_k / theta_k^(2/alpha)`.
    c: f64,
    /// `eta_k` of the lower bound.
    eta: f64,
}

fn file_consts(s: &Scenario) -> Vec<FileConst> {
    let d = s.delta();
    let gd = gamma(1.0 + d);
    s.profile
        .weights()
        .iter()
        .zip(&s.thresholds)
        .map(|(&a, &theta)| {
            let td = theta.powf(d);
            FileConst {
                a,
                theta,
                c: a / td,
                eta: a / ((1.0 - a) * gd * td),
            }
        })
        .collect()
}

/// `(alpha/2pi) atan(((y-1)/(y+1)) tan(pi/alpha)) + 1/2`, the CCDF of the
/// ratio written in terms of `y = 1/ (rho x^(2/alpha))`.
#[inline]
fn ratio_ccdf_of_y(y: f64, alpha: f64, tan_pa: f64) -> f64 {
    if y.is_infinite() {
        return 1.0;
    }
    alpha / (2.0 * PI) * ((1.0 - 2.0 / (1.0 + y)) * tan_pa).atan() + 0.5
}

#[inline]
fn integrand(kind: Integrand, f: &FileConst, alpha: f64, tan_pa: f64, hd_k: f64, h_k: f64, g: f64) -> f64 {
    match kind {
        Integrand::Expectation => {
            if g == 0.0 {
                1.0
            } else {
                ratio_ccdf_of_y(f.c * hd_k / g, alpha, tan_pa)
            }
        }
        Integrand::Alpha4 => 1.0 - FRAC_2_PI * ((g / f.a) * (f.theta / h_k).sqrt()).atan(),
        Integrand::Lower => {
            if f.a >= 1.0 {
                1.0
            } else {
                ratio_ccdf_of_y(f.eta * hd_k, alpha, tan_pa)
            }
        }
    }
}

/// Per-file and popularity-weighted moments of an integrand over the batch.
#[derive(Debug, Clone, Default)]
struct PassMoments {
    per_file: Vec<Moments>,
    total: Moments,
}

impl PassMoments {
    fn merge(&mut self, o: &PassMoments) {
        if self.per_file.len() < o.per_file.len() {
            self.per_file.resize(o.per_file.len(), Moments::default());
        }
        for (m, x) in self.per_file.iter_mut().zip(&o.per_file) {
            m.merge(x);
        }
        self.total.merge(&o.total);
    }
}

/// Runs one pass over the fading batch. `files = Some(k)` restricts the
/// per-file moments to file `k`.
fn fading_pass(s: &Scenario, kind: Integrand, batch: &FadingBatch, file: Option<usize>) -> PassMoments {
    let n = s.n_files();
    let d = s.delta();
    let alpha = s.alpha;
    let tan_pa = (PI / alpha).tan();
    let fc = file_consts(s);
    let weights = s.profile.weights();
    let want_total = file.is_none();
    fold_trials(
        batch.sample_count,
        batch.exec,
        |range| {
            let slots = if want_total { n } else { 1 };
            let mut acc = PassMoments {
                per_file: vec![Moments::default(); slots],
                total: Moments::default(),
            };
            let mut hd = vec![0.0; n];
            let mut h = vec![0.0; n];
            let mut suffix = vec![0.0; n + 1];
            for t in range {
                let mut rng = trial_rng(batch.seed, FADING_STREAM, t);
                for (hn, hdn) in h.iter_mut().zip(hd.iter_mut()) {
                    *hn = rng.sample(Exp1);
                    *hdn = pow_delta(*hn, d);
                }
                match file {
                    Some(k) => {
                        let g = g_from(&s.profile, k, &hd);
                        acc.per_file[0].push(integrand(kind, &fc[k], alpha, tan_pa, hd[k], h[k], g));
                    }
                    None => {
                        for i in (0..n).rev() {
                            suffix[i] = suffix[i + 1] + weights[i] * hd[i];
                        }
                        let mut prefix = 0.0;
                        let mut total = 0.0;
                        for k in 0..n {
                            let g = prefix + suffix[k + 1];
                            let v = integrand(kind, &fc[k], alpha, tan_pa, hd[k], h[k], g);
                            acc.per_file[k].push(v);
                            total += weights[k] * v;
                            prefix += weights[k] * hd[k];
                        }
                        acc.total.push(total);
                    }
                }
            }
            acc
        },
        PassMoments::merge,
    )
}

fn estimate(m: &Moments, batch: &FadingBatch) -> Estimate {
    Estimate::from_moments(m, batch.seed)
}

fn single_file(k: usize, s: &Scenario, kind: Integrand, batch: &FadingBatch) -> Result<Estimate> {
    s.validate()?;
    s.check_file(k)?;
    batch.validate()?;
    if s.n_files() == 1 {
        return Ok(Estimate::exact(1.0));
    }
    let pass = fading_pass(s, kind, batch, Some(k));
    Ok(estimate(&pass.per_file[0], batch))
}

/// Conditional delivery probability of file `k` in expectation form,
/// averaged over the fading batch.
pub fn delivery_prob_expectation(k: usize, s: &Scenario, batch: &FadingBatch) -> Result<Estimate> {
    single_file(k, s, Integrand::Expectation, batch)
}

/// Expectation form specialised to `alpha = 4`,
/// `1 - (2/pi) atan((g_k/a_k) sqrt(theta_k/h_k))`.
pub fn delivery_prob_alpha4(k: usize, s: &Scenario, batch: &FadingBatch) -> Result<Estimate> {
    if s.alpha != 4.0 {
        return Err(Error::Contract(format!("alpha = 4 required, got {}", s.alpha)));
    }
    single_file(k, s, Integrand::Alpha4, batch)
}

/// Result of the series form with the moment diagnostics behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    /// Linearized standard error from the moment estimates.
    pub stderr: f64,
    /// Index of the last summed term.
    pub terms: usize,
    /// Relative standard error of `E[g^-m]`, `m = 1..=terms`.
    pub moment_rel_se: Vec<f64>,
    /// True when a moment that entered the sum has relative error above 10%.
    pub unreliable: bool,
}

const UNRELIABLE_REL_SE: f64 = 0.1;

/// Conditional delivery probability of file `k` as the power series in
/// `a_k / theta_k^(2/alpha)` with Monte Carlo moments `E[g_k^-m]`.
pub fn delivery_prob_series(k: usize, s: &Scenario, ctrl: &SeriesControl, batch: &FadingBatch) -> Result<SeriesEstimate> {
    s.validate()?;
    s.check_file(k)?;
    batch.validate()?;
    ctrl.validate()?;
    if s.n_files() == 1 {
        return Ok(SeriesEstimate {
            value: 1.0,
            stderr: 0.0,
            terms: 0,
            moment_rel_se: Vec::new(),
            unreliable: false,
        });
    }
    let g0 = series_scale(s, k);
    let draws = ratio_draws(s, &[k], &[g0], batch).remove(0);
    series_from_draws(k, s, ctrl, &draws, g0)
}

/// Reference scale `E[g_k]`, which keeps `(g0/g)^m` representable.
fn series_scale(s: &Scenario, k: usize) -> f64 {
    (1.0 - s.profile.weight(k)) * gamma(1.0 + s.delta())
}

/// `g0_j / g_k` over the batch for each `k = files[j]`, in trial order.
fn ratio_draws(s: &Scenario, files: &[usize], g0: &[f64], batch: &FadingBatch) -> Vec<Vec<f64>> {
    let n = s.n_files();
    let d = s.delta();
    let w = s.profile.weights();
    let parts = map_chunks(batch.sample_count, batch.exec, |range| {
        let mut out = vec![Vec::with_capacity((range.end - range.start) as usize); files.len()];
        let mut hd = vec![0.0; n];
        let mut prefix = vec![0.0; n + 1];
        let mut suffix = vec![0.0; n + 1];
        for t in range {
            let mut rng = trial_rng(batch.seed, FADING_STREAM, t);
            draw_fades(&mut rng, d, &mut hd);
            for i in 0..n {
                prefix[i + 1] = prefix[i] + w[i] * hd[i];
                suffix[n - 1 - i] = suffix[n - i] + w[n - 1 - i] * hd[n - 1 - i];
            }
            for (j, &k) in files.iter().enumerate() {
                out[j].push(g0[j] / (prefix[k] + suffix[k + 1]));
            }
        }
        out
    });
    let mut draws = vec![Vec::with_capacity(batch.sample_count as usize); files.len()];
    for part in parts {
        for (all, chunk) in draws.iter_mut().zip(part) {
            all.extend(chunk);
        }
    }
    draws
}

/// Sums the series with moments `E[r^m]` taken from stored draws of `r`.
fn series_from_draws(k: usize, s: &Scenario, ctrl: &SeriesControl, r: &[f64], g0: f64) -> Result<SeriesEstimate> {
    let d = s.delta();
    let c = s.profile.weight(k) / s.thresholds[k].powf(d);
    let ln_z = (c / g0).ln();
    let mut pow = r.to_vec();
    let mut moment_rel_se = Vec::new();
    let mut se = 0.0;
    let mut unreliable = false;
    let value = sum_series(ctrl, c, "needs (E[g^-m])^(1/m) a_k / theta_k^(2/alpha) < 1 for all m", |m| {
        if m > 1 {
            pow.iter_mut().zip(r).for_each(|(p, x)| *p *= x);
        }
        let mut mom = Moments::default();
        pow.iter().for_each(|&p| mom.push(p));
        let rel = mom.stderr() / mom.mean();
        moment_rel_se.push(rel);
        let (ln_r, sign) = ln_recip_gamma_one_minus(m as f64 * d)?;
        let alt = if m % 2 == 1 { 1.0 } else { -1.0 };
        let coef = alt * sign * (ln_r + m as f64 * ln_z).exp();
        se += (coef * mom.stderr()).abs();
        unreliable |= !(rel <= UNRELIABLE_REL_SE);
        Some(coef * mom.mean())
    })?;
    Ok(SeriesEstimate {
        value,
        stderr: se,
        terms: moment_rel_se.len(),
        moment_rel_se,
        unreliable,
    })
}

/// Files handled per pass over the fading batch by the series totals.
const SERIES_BLOCK: usize = 64;

fn series_all(s: &Scenario, batch: &FadingBatch) -> Result<Vec<SeriesEstimate>> {
    let n = s.n_files();
    let ctrl = SeriesControl::default();
    let w = s.profile.weights();
    let mut out: Vec<Option<SeriesEstimate>> = vec![None; n];
    let live: Vec<usize> = (0..n).filter(|&k| w[k] > 0.0).collect();
    for block in live.chunks(SERIES_BLOCK) {
        let g0: Vec<f64> = block.iter().map(|&k| series_scale(s, k)).collect();
        let draws = ratio_draws(s, block, &g0, batch);
        for ((&k, r), g0) in block.iter().zip(&draws).zip(&g0) {
            out[k] = Some(series_from_draws(k, s, &ctrl, r, *g0)?);
        }
    }
    Ok(out
        .into_iter()
        .map(|e| {
            e.unwrap_or(SeriesEstimate {
                value: 0.0,
                stderr: 0.0,
                terms: 0,
                moment_rel_se: Vec::new(),
                unreliable: false,
            })
        })
        .collect())
}

/// High-SIR approximation
/// `(sin(2pi/alpha) / (2pi/alpha)) theta^(-2/alpha) a_k / (1 - a_k)`.
pub fn delivery_prob_highsir(a_k: f64, theta: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_domain("a_k", a_k, (0.0..1.0).contains(&a_k), "[0, 1)")?;
    check_domain("theta", theta, theta > 0.0, "> 0")?;
    let w = 2.0 * PI / alpha;
    Ok(w.sin() / w * theta.powf(-2.0 / alpha) * a_k / (1.0 - a_k))
}

fn check_a(a_k: f64) -> Result<()> {
    check_domain("a_k", a_k, a_k > 0.0 && a_k <= 1.0, "(0, 1]")
}

/// `1 / (1 + theta^(2/alpha) (1/a_k - 1))`.
pub fn delivery_upper_bound(a_k: f64, theta: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_a(a_k)?;
    check_domain("theta", theta, theta >= 0.0, ">= 0")?;
    Ok(1.0 / (1.0 + theta.powf(2.0 / alpha) * (1.0 / a_k - 1.0)))
}

/// Jensen lower bound: the conditional CCDF with `g_k` replaced by its mean,
/// averaged over `h_k`.
pub fn delivery_lower_bound(a_k: f64, theta: f64, alpha: f64, batch: &FadingBatch) -> Result<Estimate> {
    check_alpha(alpha)?;
    check_a(a_k)?;
    check_domain("theta", theta, theta >= 0.0, ">= 0")?;
    batch.validate()?;
    if a_k == 1.0 || theta == 0.0 {
        return Ok(Estimate::exact(1.0));
    }
    let d = 2.0 / alpha;
    let tan_pa = (PI / alpha).tan();
    let eta = a_k / ((1.0 - a_k) * gamma(1.0 + d) * theta.powf(d));
    let m = fold_trials(
        batch.sample_count,
        batch.exec,
        |range| {
            let mut acc = Moments::default();
            for t in range {
                let mut rng = trial_rng(batch.seed, FADING_STREAM, t);
                let h: f64 = rng.sample(Exp1);
                acc.push(ratio_ccdf_of_y(eta * pow_delta(h, d), alpha, tan_pa));
            }
            acc
        },
        Moments::merge,
    );
    Ok(estimate(&m, batch))
}

/// Closed-form bounds at `alpha = 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha4Bounds {
    pub upper: f64,
    /// `exp(zeta) Gamma(1/2, zeta) / sqrt(pi)`.
    pub lower_a: f64,
    /// `1 - (2/pi) atan((pi sqrt(theta) / 2) (1/a - 1))`.
    pub lower_b: f64,
}

pub fn alpha4_bounds(a_k: f64, theta: f64) -> Result<Alpha4Bounds> {
    check_a(a_k)?;
    check_domain("theta", theta, theta > 0.0 && theta.is_finite(), "> 0")?;
    let r = 1.0 / a_k - 1.0;
    let zeta = PI * theta / 4.0 * r * r;
    Ok(Alpha4Bounds {
        upper: 1.0 / (1.0 + theta.sqrt() * r),
        lower_a: erfcx(zeta.sqrt()),
        lower_b: 1.0 - FRAC_2_PI * (PI * theta.sqrt() / 2.0 * r).atan(),
    })
}

/// Absolute tolerance for the interference integral.
const MU_TOL: f64 = 1e-10;

/// `mu(theta, alpha) = int_1^inf dx / (1 + x^(alpha/2) / theta)`.
///
/// Quadrature up to the point `X` where `theta X^(-alpha/2) = 0.1`, then the
/// alternating expansion of the integrand in `theta x^(-alpha/2)`, which
/// integrates term by term in closed form.
pub fn interference_integral(theta: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_domain("theta", theta, theta >= 0.0 && theta.is_finite(), ">= 0")?;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let p = alpha / 2.0;
    let x_split = (10.0 * theta).powf(1.0 / p).max(1.0);
    let head = if x_split > 1.0 {
        let q = integrate(|x| 1.0 / (1.0 + x.powf(p) / theta), 1.0, x_split, MU_TOL)?;
        q.value
    } else {
        0.0
    };
    let u = theta * x_split.powf(-p);
    let mut tail = 0.0;
    let mut uj = 1.0;
    for j in 1..200 {
        uj *= u;
        let term = uj * x_split / (j as f64 * p - 1.0);
        tail += if j % 2 == 1 { term } else { -term };
        if term < MU_TOL * 1e-3 {
            return Ok(head + tail);
        }
    }
    Err(Error::QuadratureNonconvergence {
        error: uj * x_split,
        tolerance: MU_TOL,
    })
}

/// Nearest-helper delivery probability without CAMAC,
/// `1 / (1 + mu + theta^(2/alpha) (2pi/alpha) csc(2pi/alpha) (1/a_k - 1))`.
pub fn no_camac_prob(a_k: f64, theta: f64, alpha: f64) -> Result<f64> {
    check_a(a_k)?;
    check_domain("theta", theta, theta > 0.0, "> 0")?;
    let mu = interference_integral(theta, alpha)?;
    let w = 2.0 * PI / alpha;
    Ok(1.0 / (1.0 + mu + theta.powf(2.0 / alpha) * (w / w.sin()) * (1.0 / a_k - 1.0)))
}

/// Gain approximation for a dominant file,
/// `1 + mu(theta_1, alpha) / (1 + theta_1^(2/alpha) (1/a_1 - 1))`.
pub fn alignment_gain_approx(a_1: f64, theta1: f64, alpha: f64) -> Result<f64> {
    check_a(a_1)?;
    check_domain("theta", theta1, theta1 > 0.0, "> 0")?;
    let mu = interference_integral(theta1, alpha)?;
    Ok(1.0 + mu / (1.0 + theta1.powf(2.0 / alpha) * (1.0 / a_1 - 1.0)))
}

/// Method used for each conditional probability in a popularity-weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Expectation,
    Alpha4,
    Series,
    Upper,
    Lower,
    NoCamac,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Expectation,
        Method::Alpha4,
        Method::Series,
        Method::Upper,
        Method::Lower,
        Method::NoCamac,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Expectation => "expectation",
            Method::Alpha4 => "alpha4",
            Method::Series => "series",
            Method::Upper => "upper",
            Method::Lower => "lower",
            Method::NoCamac => "no_camac",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::Contract(format!("unknown method `{s}`")))
    }
}

/// Conditional probability of every file under `method`.
pub fn per_file_probs(s: &Scenario, method: Method, batch: &FadingBatch) -> Result<Vec<Estimate>> {
    Ok(totals(s, method, batch)?.1)
}

/// `sum_k a_k P_d(F_k)` under `method`.
pub fn total_delivery_prob(s: &Scenario, method: Method, batch: &FadingBatch) -> Result<Estimate> {
    Ok(totals(s, method, batch)?.0)
}

fn totals(s: &Scenario, method: Method, batch: &FadingBatch) -> Result<(Estimate, Vec<Estimate>)> {
    s.validate()?;
    batch.validate()?;
    let n = s.n_files();
    let w = s.profile.weights();
    let exact_sum = |v: Vec<f64>| {
        let total = w.iter().zip(&v).map(|(a, p)| a * p).sum();
        (Estimate::exact(total), v.into_iter().map(Estimate::exact).collect())
    };
    match method {
        Method::Upper => {
            let v = (0..n)
                .map(|k| if w[k] > 0.0 { delivery_upper_bound(w[k], s.thresholds[k], s.alpha) } else { Ok(0.0) })
                .collect::<Result<Vec<_>>>()?;
            Ok(exact_sum(v))
        }
        Method::NoCamac => {
            let v = (0..n)
                .map(|k| if w[k] > 0.0 { no_camac_prob(w[k], s.thresholds[k], s.alpha) } else { Ok(0.0) })
                .collect::<Result<Vec<_>>>()?;
            Ok(exact_sum(v))
        }
        Method::Series => {
            let mut total = 0.0;
            let mut var = 0.0;
            let mut per = Vec::with_capacity(n);
            if n == 1 {
                return Ok((Estimate::exact(1.0), vec![Estimate::exact(1.0)]));
            }
            for (k, r) in series_all(s, batch)?.into_iter().enumerate() {
                if w[k] == 0.0 {
                    per.push(Estimate::exact(0.0));
                    continue;
                }
                total += w[k] * r.value;
                var += (w[k] * r.stderr).powi(2);
                per.push(Estimate {
                    mean: r.value,
                    stderr: r.stderr,
                    trials: batch.sample_count,
                    seed: batch.seed,
                    extensions: 0,
                });
            }
            let est = Estimate {
                mean: total,
                stderr: var.sqrt(),
                trials: batch.sample_count,
                seed: batch.seed,
                extensions: 0,
            };
            Ok((est, per))
        }
        Method::Expectation | Method::Alpha4 | Method::Lower => {
            if method == Method::Alpha4 && s.alpha != 4.0 {
                return Err(Error::Contract(format!("alpha = 4 required, got {}", s.alpha)));
            }
            if n == 1 {
                return Ok((Estimate::exact(1.0), vec![Estimate::exact(1.0)]));
            }
            let kind = match method {
                Method::Expectation => Integrand::Expectation,
                Method::Alpha4 => Integrand::Alpha4,
                _ => Integrand::Lower,
            };
            let pass = fading_pass(s, kind, batch, None);
            let per = pass.per_file.iter().map(|m| estimate(m, batch)).collect();
            Ok((estimate(&pass.total, batch), per))
        }
    }
}
