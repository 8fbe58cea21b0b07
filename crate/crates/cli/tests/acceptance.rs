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

//! Acceptance criteria, one PASS/FAIL line each.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use camac_cli::figures::{run_figure, Figure, SweepRow};
use camac_cli::ExperimentConfig;
use camac_core::delivery::{
    alpha4_bounds, delivery_lower_bound, delivery_prob_alpha4, delivery_prob_expectation, delivery_upper_bound,
    interference_integral, no_camac_prob, total_delivery_prob, FadingBatch, Method, Scenario,
};
use camac_core::popularity::{zipf, PopularityProfile, ZipfSpec};
use camac_core::shot_noise::{ratio_ccdf, ratio_ccdf_via_stable, ratio_laplace, shot_noise_pdf, RatioSpec, SeriesControl};
use camac_core::sim::{
    empirical_ratio_ccdf_multi, empirical_ratio_laplace, shot_noise_samples, simulate_sir_no_camac, simulate_totals,
    Fading, NoCamacMode, TrialConfig,
};
use camac_core::stats::{kolmogorov_critical, ks_statistic};
use camac_core::Exec;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Written past the test harness capture so the lines land in the log.
fn report(id: usize, title: &str, o: &Outcome) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{tag} criterion {id} ({title}): {}", o.detail);
    let _ = out.flush();
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// One-sided stable law of index 1/2: `sqrt(c / 2pi) x^(-3/2) exp(-c / 2x)`.
fn levy_pdf(x: f64, c: f64) -> f64 {
    (c / (2.0 * PI)).sqrt() * x.powf(-1.5) * (-c / (2.0 * x)).exp()
}

/// Complementary error function by composite Simpson, independent of the
/// library's special functions.
fn erfc_simpson(x: f64) -> f64 {
    let (b, n) = (x + 12.0, 200_000);
    let h = (b - x) / n as f64;
    let f = |t: f64| (-t * t).exp();
    let mut s = f(x) + f(b);
    for i in 1..n {
        s += f(x + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 / PI.sqrt() * s * h / 3.0
}

/// `(2 sqrt(z) / pi) int_0^inf exp(-t^2) / (t^2 + z) dt` by Simpson on a
/// long finite range.
fn lower_a_oracle(z: f64) -> f64 {
    let (b, n) = (12.0, 400_000);
    let h = b / n as f64;
    let f = |t: f64| (-t * t).exp() / (t * t + z);
    let mut s = f(0.0) + f(b);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * z.sqrt() / PI * s * h / 3.0
}

/// Popularity with `a` on file 0 and the rest spread evenly over `n - 1`.
fn head_profile(a: f64, n: usize) -> PopularityProfile {
    if a == 1.0 {
        return PopularityProfile::new(vec![1.0]).unwrap();
    }
    let mut w = vec![(1.0 - a) / (n - 1) as f64; n];
    w[0] = a;
    PopularityProfile::from_scores(&w).unwrap()
}

fn c1_ccdf_vs_monte_carlo() -> Outcome {
    let start = Instant::now();
    let xs = [0.1, 1.0, 4.0, 10.0];
    let mut worst: f64 = 0.0;
    let mut fails = Vec::new();
    for alpha in [3.0, 4.0] {
        for rho in [0.2, 1.0, 5.0] {
            let spec = RatioSpec::new(0.1, 0.1 * rho, alpha).unwrap();
            let est = empirical_ratio_ccdf_multi(&xs, &spec, &TrialConfig::new(100_000, 101)).unwrap();
            for (&x, e) in xs.iter().zip(&est) {
                let z = (e.mean - ratio_ccdf(x, &spec).unwrap()).abs() / e.stderr;
                worst = worst.max(z);
                if z >= 3.0 {
                    fails.push(format!("alpha={alpha} rho={rho} x={x}: {z:.2} sigma"));
                }
            }
        }
    }
    let t = secs(start.elapsed());
    outcome(fails.is_empty() && t < 120.0, format!("24 points, worst {worst:.2} sigma < 3, {t:.1} s < 120 s {fails:?}"))
}

fn c2_pipeline_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for alpha in [3.0, 4.0] {
        for rho in [0.2, 1.0, 5.0] {
            let spec = RatioSpec::new(1.0, rho, alpha).unwrap();
            for i in 0..200 {
                let x = 10f64.powf(-3.0 + 6.0 * i as f64 / 199.0);
                worst = worst.max((ratio_ccdf(x, &spec).unwrap() - ratio_ccdf_via_stable(x, &spec).unwrap()).abs());
            }
        }
    }
    let t = secs(start.elapsed());
    outcome(worst < 1e-10 && t < 1.0, format!("max |diff| {worst:.2e} < 1e-10 over 6 x 200 points, {t:.4} s < 1 s"))
}

fn c3_laplace_series() -> Outcome {
    let spec = RatioSpec::new(1.0, 0.1, 4.0).unwrap();
    let series = ratio_laplace(1.0, &spec, &SeriesControl::default()).unwrap();
    let mc = empirical_ratio_laplace(1.0, &spec, &TrialConfig::new(100_000, 103)).unwrap();
    let z = (mc.mean - series).abs() / mc.stderr;
    let pass = (series - 0.056141).abs() < 1e-5 && z < 3.0;
    outcome(pass, format!("series {series:.6} (0.056141 +- 1e-5), simulated {:.6} +- {:.1e}, {z:.2} sigma", mc.mean, mc.stderr))
}

fn c4_levy_oracle() -> Outcome {
    let c = PI / 2.0;
    let ctrl = SeriesControl::default();
    let mut worst: f64 = 0.0;
    for i in 0..=100 {
        let x = 10f64.powf(1.0 + 2.0 * i as f64 / 100.0);
        worst = worst.max((shot_noise_pdf(x, 1.0 / PI, 4.0, &ctrl).unwrap() / levy_pdf(x, c) - 1.0).abs());
    }
    let xs = shot_noise_samples(1.0 / PI, 4.0, Fading::None, &TrialConfig::new(20_000, 104)).unwrap();
    let d = ks_statistic(&xs, |x| erfc_simpson((c / (2.0 * x)).sqrt())) * (xs.len() as f64).sqrt();
    let crit = kolmogorov_critical(0.01);
    outcome(worst < 0.01 && d < crit, format!("density max rel err {worst:.2e} < 1e-2; KS sqrt(n) D {d:.3} < {crit:.3}"))
}

fn c5_sandwich() -> Outcome {
    let batch = FadingBatch::new(20_000, 105);
    let mut worst = f64::INFINITY;
    let mut fails = Vec::new();
    for alpha in [3.0, 4.0] {
        for theta in [1.0, 5.0, 20.0] {
            for a in [0.05, 0.2, 0.5, 0.8, 0.95] {
                let s = Scenario::uniform(head_profile(a, 50), alpha, theta, 0.1).unwrap();
                let mid = delivery_prob_expectation(0, &s, &batch).unwrap();
                let lo = delivery_lower_bound(a, theta, alpha, &batch).unwrap();
                let up = delivery_upper_bound(a, theta, alpha).unwrap();
                let m_up = (up - mid.mean) / (3.0 * mid.stderr);
                let m_lo = (mid.mean - lo.mean) / (3.0 * mid.combined_stderr(&lo));
                worst = worst.min(m_up.min(m_lo));
                if m_up < -1.0 || m_lo < -1.0 {
                    fails.push(format!("alpha={alpha} theta={theta} a={a}"));
                }
            }
        }
    }
    outcome(fails.is_empty(), format!("30 grid points, worst margin {worst:.2} of 3 combined stderr (>= -1) {fails:?}"))
}

fn c6_alpha4() -> Outcome {
    let batch = FadingBatch::new(20_000, 106);
    let mut notes = Vec::new();
    let mut pass = true;
    for gamma in [0.5, 3.0] {
        let s = Scenario::uniform(zipf(ZipfSpec { n: 50, gamma }).unwrap(), 4.0, 5.0, 0.1).unwrap();
        for k in [0, 9] {
            let c1 = delivery_prob_alpha4(k, &s, &batch).unwrap();
            let t1 = delivery_prob_expectation(k, &s, &batch).unwrap();
            pass &= (c1.mean - t1.mean).abs() <= 3.0 * c1.combined_stderr(&t1).max(1e-15);
        }
    }
    notes.push(format!("alpha4 form = expectation form: {pass}"));
    let b = alpha4_bounds(0.5, 5.0).unwrap();
    let zeta = PI * 5.0 / 4.0;
    let oracle = lower_a_oracle(zeta);
    let values = (b.upper - 0.30902).abs() < 1e-3
        && (b.lower_b - 0.17664).abs() < 1e-3
        && (b.lower_a - oracle).abs() < 1e-3
        && (b.lower_a - 0.2568).abs() < 1e-3;
    notes.push(format!("(upper, lowerA, lowerB) = ({:.5}, {:.5}, {:.5}), lowerA oracle {oracle:.5}", b.upper, b.lower_a, b.lower_b));
    let mut ordered = true;
    for i in 0..40 {
        let theta = 10f64.powf(-1.0 + 3.0 * i as f64 / 39.0);
        for j in 1..40 {
            let b = alpha4_bounds(j as f64 / 40.0, theta).unwrap();
            ordered &= b.lower_b <= b.lower_a;
        }
    }
    notes.push(format!("lowerB <= lowerA on 40 x 39 grid: {ordered}"));
    outcome(pass && values && ordered, notes.join("; "))
}

fn c7_no_camac() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for a in [0.2, 0.5, 1.0] {
        let s = Scenario::uniform(head_profile(a, 10), 4.0, 5.0, 0.1).unwrap();
        let e = simulate_sir_no_camac(&s, 0, &TrialConfig::new(20_000, 107), NoCamacMode::Indicator).unwrap();
        let exact = no_camac_prob(a, 5.0, 4.0).unwrap();
        let z = (e.mean - exact).abs() / e.stderr;
        pass &= z < 3.0;
        notes.push(format!("a={a}: {:.5} vs {exact:.5} ({z:.2} sigma)", e.mean));
    }
    let mu = interference_integral(5.0, 4.0).unwrap();
    let closed = 5f64.sqrt() * (PI / 2.0 - (1.0 / 5f64.sqrt()).atan());
    pass &= (mu - 2.5720).abs() < 1e-4 && (mu - closed).abs() < 1e-4;
    notes.push(format!("mu(5,4) = {mu:.6}, antiderivative {closed:.6}"));
    outcome(pass, notes.join("; "))
}

fn gain(rows: &[SweepRow], gamma: f64, alpha: f64, n: usize) -> f64 {
    rows.iter()
        .find(|r| r.gamma == gamma && r.alpha == alpha && r.n_files == n && r.method == "sim_camac")
        .and_then(|r| r.gain)
        .unwrap_or(f64::NAN)
}

fn c8_figure3() -> Outcome {
    let cfg = ExperimentConfig::default();
    let start = Instant::now();
    let out = run_figure(&cfg, Figure::Fig3).unwrap();
    let t = secs(start.elapsed());
    let (g3, g4) = (gain(&out.rows, 3.0, 3.0, 50), gain(&out.rows, 3.0, 4.0, 50));
    let pass = (g3 / 6.0 - 1.0).abs() <= 0.25 && (g4 / 3.0 - 1.0).abs() <= 0.25 && t < 600.0;
    let points = cfg.gamma_grid.len() * cfg.alphas.len();
    outcome(pass, format!("gain {g3:.3} (6 +- 25%) at alpha=3, {g4:.3} (3 +- 25%) at alpha=4; {points} points x {} trials in {t:.0} s < 600 s", cfg.trials))
}

fn c9_figure5() -> Outcome {
    let cfg = ExperimentConfig { alphas: vec![4.0, 3.0], n_list: vec![5, 500], gamma_grid: vec![0.0, 1.0, 2.0, 3.0], ..Default::default() };
    let out = run_figure(&cfg, Figure::Fig5).unwrap();
    let mut worst: f64 = 0.0;
    let mut info = Vec::new();
    for c in &out.checks {
        let rel: f64 = c.detail.rsplit("rel ").next().and_then(|v| v.parse().ok()).unwrap_or(f64::NAN);
        if c.required {
            worst = worst.max(rel);
        } else {
            info.push(format!("{:.3}", rel));
        }
    }
    let required = out.checks.iter().filter(|c| c.required).count();
    let pass = required == 8 && out.checks.iter().all(|c| c.pass || !c.required);
    outcome(pass, format!("alpha=4, N in {{5, 500}}, gamma in {{0,1,2,3}}: worst rel err {worst:.3} <= 0.10; alpha=3 for reference: [{}]", info.join(", ")))
}

fn c10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_camac");
    let run = |threads: &str| {
        Command::new(bin).args(["validate", "--seed", "42"]).env("RAYON_NUM_THREADS", threads).output().unwrap()
    };
    let (a, b, c) = (run("1"), run("1"), run("3"));
    let reports = a.status.success() && a.stdout == b.stdout && a.stdout == c.stdout && !a.stdout.is_empty();

    let spec = RatioSpec::new(0.1, 0.2, 3.0).unwrap();
    let cfg = TrialConfig::new(3000, 110);
    let seq = |x: TrialConfig| x.with_exec(Exec::Sequential);
    let ratio = empirical_ratio_ccdf_multi(&[0.5, 2.0], &spec, &cfg).unwrap() == empirical_ratio_ccdf_multi(&[0.5, 2.0], &spec, &seq(cfg)).unwrap();
    let s = Scenario::uniform(zipf(ZipfSpec { n: 50, gamma: 1.0 }).unwrap(), 4.0, 5.0, 0.1).unwrap();
    let totals = simulate_totals(&s, &cfg).unwrap() == simulate_totals(&s, &seq(cfg)).unwrap();
    let batch = FadingBatch::new(3000, 111);
    let sb = FadingBatch { exec: Exec::Sequential, ..batch };
    let fading = [Method::Expectation, Method::Series, Method::Lower]
        .iter()
        .all(|&m| total_delivery_prob(&s, m, &batch).unwrap() == total_delivery_prob(&s, m, &sb).unwrap());
    outcome(
        reports && ratio && totals && fading,
        format!("validate --seed 42 identical across runs and 1/3 threads: {reports}; sequential = parallel estimates (ratio {ratio}, totals {totals}, fading {fading})"),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form CCDF vs Monte Carlo", c1_ccdf_vs_monte_carlo),
        ("derivation-chain equivalence", c2_pipeline_equivalence),
        ("Laplace series", c3_laplace_series),
        ("Levy oracle", c4_levy_oracle),
        ("bound sandwich", c5_sandwich),
        ("alpha=4 specializations", c6_alpha4),
        ("no-CAMAC baseline", c7_no_camac),
        ("figure-3 headline gains", c8_figure3),
        ("figure-5 approximation", c9_figure5),
        ("determinism", c10_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let o = f();
        report(i + 1, title, &o);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
