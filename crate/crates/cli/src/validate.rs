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

//! The invariant suite behind `camac validate`.
//!
//! Every check is deterministic given the configuration, so two runs with
//! the same seed print byte-identical reports.

use std::f64::consts::PI;
use std::fmt::Write as _;

use camac_core::delivery::{
    alignment_gain_approx, alpha4_bounds, delivery_lower_bound, delivery_prob_alpha4, delivery_prob_expectation,
    delivery_upper_bound, interference_integral, no_camac_prob, FadingBatch, Scenario,
};
use camac_core::popularity::{zipf, PopularityProfile, ZipfSpec};
use camac_core::shot_noise::{ratio_ccdf, ratio_ccdf_via_stable, ratio_laplace, shot_noise_pdf, RatioSpec, SeriesControl};
use camac_core::sim::{
    empirical_ratio_ccdf_multi, empirical_ratio_laplace, shot_noise_samples, simulate_sir_camac, simulate_sir_no_camac,
    sir_samples_camac, CamacMode, Fading, NoCamacMode,
};
use camac_core::special::erfc;
use camac_core::stats::{kolmogorov_critical, ks_statistic, ks_two_sample, ks_two_sample_critical};

use crate::check::{agree, all_pass, Check};
use crate::config::ExperimentConfig;
use crate::CliError;

type Suite = Vec<(&'static str, fn(&ExperimentConfig) -> Result<Vec<Check>, camac_core::Error>)>;

fn suite() -> Suite {
    vec![
        ("pipeline equivalence", pipeline_equivalence),
        ("monte carlo agreement", monte_carlo_agreement),
        ("bound ordering", bound_ordering),
        ("levy oracle", levy_oracle),
        ("fading equivalence", fading_equivalence),
    ]
}

fn pipeline_equivalence(_: &ExperimentConfig) -> Result<Vec<Check>, camac_core::Error> {
    let mut out = Vec::new();
    for alpha in [2.5, 3.0, 4.0, 6.0] {
        let mut worst: f64 = 0.0;
        for rho in [0.2, 1.0, 5.0] {
            let spec = RatioSpec::new(1.0, rho, alpha)?;
            for i in 0..200 {
                let x = 10f64.powf(-3.0 + 6.0 * i as f64 / 199.0);
                worst = worst.max((ratio_ccdf(x, &spec)? - ratio_ccdf_via_stable(x, &spec)?).abs());
            }
        }
        out.push(Check::new(format!("ccdf closed form = stable pipeline, alpha={alpha}"), worst < 1e-10, format!("max |diff| {worst:.3e} < 1e-10")));
    }
    Ok(out)
}

fn monte_carlo_agreement(cfg: &ExperimentConfig) -> Result<Vec<Check>, camac_core::Error> {
    let tc = cfg.trial_config();
    let tol = cfg.check_tol;
    let mut out = Vec::new();
    for alpha in [3.0, 4.0] {
        let spec = RatioSpec::new(cfg.lambda, cfg.lambda, alpha)?;
        let xs = [0.5, 4.0];
        for (x, e) in xs.iter().zip(empirical_ratio_ccdf_multi(&xs, &spec, &tc)?) {
            let (pass, d) = agree(e.mean, ratio_ccdf(*x, &spec)?, e.stderr, 3.0, tol);
            out.push(Check::new(format!("ratio ccdf simulated, alpha={alpha} x={x}"), pass, d));
        }
    }
    let spec = RatioSpec::new(1.0, 0.1, 4.0)?;
    let e = empirical_ratio_laplace(1.0, &spec, &tc)?;
    let series = ratio_laplace(1.0, &spec, &SeriesControl::default())?;
    let (pass, d) = agree(e.mean, series, e.stderr, 3.0, tol);
    out.push(Check::new("laplace series simulated, s=1 alpha=4 ratio=0.1", pass, d));

    let s = Scenario::uniform(zipf(ZipfSpec { n: 10, gamma: 1.0 })?, 4.0, cfg.theta, cfg.lambda)?;
    let sim = simulate_sir_camac(&s, 0, &tc, CamacMode::Conditional)?;
    let ana = delivery_prob_expectation(0, &s, &FadingBatch::new(cfg.trials, cfg.seed))?;
    let (pass, d) = agree(sim.mean, ana.mean, sim.combined_stderr(&ana), 3.0, tol);
    out.push(Check::new("camac simulated vs expectation form, N=10 gamma=1", pass, d));

    for a in [0.2, 0.5, 1.0] {
        let mut w = vec![(1.0 - a) / 9.0; 10];
        w[0] = a;
        let p = if a == 1.0 { PopularityProfile::new(vec![1.0])? } else { PopularityProfile::from_scores(&w)? };
        let s = Scenario::uniform(p, 4.0, cfg.theta, cfg.lambda)?;
        let e = simulate_sir_no_camac(&s, 0, &tc, NoCamacMode::Indicator)?;
        let (pass, d) = agree(e.mean, no_camac_prob(a, cfg.theta, 4.0)?, e.stderr, 3.0, tol);
        out.push(Check::new(format!("no-camac simulated vs closed form, a={a}"), pass, d));
    }
    Ok(out)
}

fn bound_ordering(cfg: &ExperimentConfig) -> Result<Vec<Check>, camac_core::Error> {
    let mut out = Vec::new();
    let batch = FadingBatch::new(cfg.trials, cfg.seed);
    for alpha in [3.0, 4.0] {
        let mut worst = f64::INFINITY;
        for theta in [1.0, 5.0, 20.0] {
            for a in [0.05, 0.2, 0.5, 0.8, 0.95] {
                let mut w = vec![(1.0 - a) / 49.0; 50];
                w[0] = a;
                let s = Scenario::uniform(PopularityProfile::from_scores(&w)?, alpha, theta, cfg.lambda)?;
                let mid = delivery_prob_expectation(0, &s, &batch)?;
                let lo = delivery_lower_bound(a, theta, alpha, &batch)?;
                let up = delivery_upper_bound(a, theta, alpha)?;
                let se = mid.combined_stderr(&lo);
                worst = worst.min((up - mid.mean) / mid.stderr.max(1e-300)).min((mid.mean - lo.mean) / se.max(1e-300));
            }
        }
        out.push(Check::new(format!("lower <= expectation <= upper, alpha={alpha}"), worst > -3.0, format!("worst margin {worst:.2} sigma > -3")));
    }
    let b = alpha4_bounds(0.5, 5.0)?;
    let pass = (b.upper - 0.30902).abs() < 1e-3 && (b.lower_a - 0.2568).abs() < 1e-3 && (b.lower_b - 0.17664).abs() < 1e-3;
    out.push(Check::new("alpha=4 bounds at theta=5 a=0.5", pass, format!("{:.6} {:.6} {:.6}", b.upper, b.lower_a, b.lower_b)));
    let mut tight = true;
    for theta in [0.5, 1.0, 5.0, 20.0, 100.0] {
        for a in [0.05, 0.2, 0.5, 0.8, 0.95] {
            let b = alpha4_bounds(a, theta)?;
            tight &= b.lower_b <= b.lower_a && b.lower_a <= b.upper;
        }
    }
    out.push(Check::new("alpha=4 lower_b <= lower_a <= upper on grid", tight, "25 points"));
    let s = Scenario::uniform(zipf(ZipfSpec { n: 50, gamma: 3.0 })?, 4.0, cfg.theta, cfg.lambda)?;
    let (c1, t1) = (delivery_prob_alpha4(0, &s, &batch)?, delivery_prob_expectation(0, &s, &batch)?);
    let (pass, d) = agree(c1.mean, t1.mean, c1.combined_stderr(&t1), 3.0, None);
    out.push(Check::new("alpha=4 specialization = expectation form", pass, d));
    let mu = interference_integral(5.0, 4.0)?;
    let exact = 5f64.sqrt() * (PI / 2.0 - (1.0 / 5f64.sqrt()).atan());
    out.push(Check::new("mu(5, 4) vs antiderivative", (mu - exact).abs() < 1e-4 && (mu - 2.5720).abs() < 1e-4, format!("{mu:.6} vs {exact:.6}")));
    let limit = alignment_gain_approx(1.0 - 1e-12, cfg.theta, 4.0)?;
    let target = 1.0 + interference_integral(cfg.theta, 4.0)?;
    out.push(Check::new("gain approximation at a1 -> 1", (limit - target).abs() < 1e-9, format!("{limit:.9} vs {target:.9}")));
    Ok(out)
}

fn levy_oracle(cfg: &ExperimentConfig) -> Result<Vec<Check>, camac_core::Error> {
    let c = PI / 2.0;
    let density = |x: f64| (c / (2.0 * PI)).sqrt() * x.powf(-1.5) * (-c / (2.0 * x)).exp();
    let ctrl = SeriesControl::default();
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let x = 10f64.powf(1.0 + 2.0 * i as f64 / 40.0);
        worst = worst.max((shot_noise_pdf(x, 1.0 / PI, 4.0, &ctrl)? / density(x) - 1.0).abs());
    }
    let mut out = vec![Check::new("shot-noise density = Levy density on [10, 1000]", worst < 0.01, format!("max rel err {worst:.3e} < 1e-2"))];
    let xs = shot_noise_samples(1.0 / PI, 4.0, Fading::None, &cfg.trial_config())?;
    let d = ks_statistic(&xs, |x| erfc((c / (2.0 * x)).sqrt())) * (xs.len() as f64).sqrt();
    let crit = kolmogorov_critical(0.01);
    out.push(Check::new("simulated shot noise ~ Levy (KS, 1%)", d < crit, format!("sqrt(n) D {d:.4} < {crit:.4}")));
    Ok(out)
}

fn fading_equivalence(cfg: &ExperimentConfig) -> Result<Vec<Check>, camac_core::Error> {
    let s = Scenario::uniform(zipf(ZipfSpec { n: 10, gamma: 1.0 })?, 3.0, cfg.theta, cfg.lambda)?;
    let tc = cfg.trial_config();
    let a = sir_samples_camac(&s, 0, &tc, CamacMode::ComplexFading)?;
    let b = sir_samples_camac(&s, 0, &camac_core::sim::TrialConfig { seed: tc.seed ^ 1, ..tc }, CamacMode::ExponentialShotNoise)?;
    let d = ks_two_sample(&a, &b);
    let crit = ks_two_sample_critical(0.01, a.len(), b.len());
    Ok(vec![Check::new("coherent sum of helper fades = faded shot noise (KS, 1%)", d < crit, format!("D {d:.4} < {crit:.4}"))])
}

pub struct Report {
    pub checks: Vec<Check>,
    pub text: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks)
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut checks = Vec::new();
    let mut text = String::new();
    let _ = writeln!(text, "# camac validate\n# config_hash={}\n# seed={}", cfg.hash(), cfg.seed);
    for (group, f) in suite() {
        let _ = writeln!(text, "[{group}]");
        let group_checks = f(cfg).unwrap_or_else(|e| vec![Check::error(group, e)]);
        for c in &group_checks {
            let _ = writeln!(text, "{c}");
        }
        checks.extend(group_checks);
    }
    let failed = checks.iter().filter(|c| !c.pass && c.required).count();
    let _ = writeln!(text, "summary: {} checks, {} failed", checks.len(), failed);
    Ok(Report { checks, text })
}
