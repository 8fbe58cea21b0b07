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

//! Curve dumps of the shot-noise ratio law: CCDF and Laplace transform.

use camac_core::shot_noise::{ratio_ccdf, ratio_laplace, RatioSpec, SeriesControl};
use camac_core::sim::{empirical_ratio_ccdf_multi, empirical_ratio_laplace_multi};
use camac_core::{Error, Estimate};

use crate::config::ExperimentConfig;
use crate::figures::header_meta;
use crate::table::{Cell, Column, Table};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveOptions {
    /// Density ratios `lambda2 / lambda1`; `lambda1` is the configured density.
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// Overlay a Monte Carlo estimate at every grid point.
    pub simulate: bool,
}

impl CurveOptions {
    pub fn ccdf_defaults() -> Self {
        CurveOptions { ratios: vec![0.2, 1.0, 5.0], min: 0.01, max: 100.0, points: 41, simulate: false }
    }

    pub fn laplace_defaults() -> Self {
        CurveOptions { ratios: vec![0.1, 1.0], min: 0.1, max: 100.0, points: 31, simulate: false }
    }

    /// Log-spaced grid from `min` to `max`.
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.min > 0.0 && self.max >= self.min && self.points >= 1) {
            return Err(CliError::Config("grid needs 0 < min <= max and at least one point".into()));
        }
        if self.ratios.is_empty() || self.ratios.iter().any(|&r| !(r > 0.0)) {
            return Err(CliError::Config("density ratios must be positive".into()));
        }
        let (lo, hi) = (self.min.ln(), self.max.ln());
        let steps = (self.points - 1).max(1) as f64;
        Ok((0..self.points).map(|i| (lo + (hi - lo) * i as f64 / steps).exp()).collect())
    }
}

fn columns(arg: (&str, &str), value: &str) -> Vec<Column> {
    vec![
        Column::new("alpha", "1"),
        Column::new("density_ratio", "1"),
        Column::new(arg.0, arg.1),
        Column::new(value, "probability"),
        Column::new("simulated", "probability"),
        Column::new("simulated_stderr", "probability"),
        Column::new("status", "text"),
    ]
}

fn sim_cells(e: Option<&Estimate>) -> [Cell; 2] {
    match e {
        Some(e) => [e.mean.into(), e.stderr.into()],
        None => [Cell::Empty, Cell::Empty],
    }
}

/// `Pr(S(Phi_1) / S(Phi_2) > x)` on a log grid of `x`.
pub fn ccdf_table(cfg: &ExperimentConfig, opts: &CurveOptions) -> Result<Table, CliError> {
    cfg.validate()?;
    let xs = opts.grid()?;
    let mut t = Table::new(columns(("x", "1"), "ccdf"));
    t.meta = header_meta(cfg, "ccdf");
    for &alpha in &cfg.alphas {
        for &rho in &opts.ratios {
            let spec = RatioSpec::new(cfg.lambda, rho * cfg.lambda, alpha)?;
            let sim = match opts.simulate {
                true => empirical_ratio_ccdf_multi(&xs, &spec, &cfg.trial_config())?,
                false => Vec::new(),
            };
            for (i, &x) in xs.iter().enumerate() {
                let [m, se] = sim_cells(sim.get(i));
                t.push(vec![alpha.into(), rho.into(), x.into(), ratio_ccdf(x, &spec)?.into(), m, se, "ok".into()]);
            }
        }
    }
    Ok(t)
}

/// `E[exp(-s R)]` from the series where it converges, on a log grid of `s`.
pub fn laplace_table(cfg: &ExperimentConfig, opts: &CurveOptions) -> Result<Table, CliError> {
    cfg.validate()?;
    let ss = opts.grid()?;
    let mut t = Table::new(columns(("s", "1"), "laplace"));
    t.meta = header_meta(cfg, "laplace");
    let ctrl = SeriesControl::default();
    for &alpha in &cfg.alphas {
        for &rho in &opts.ratios {
            let spec = RatioSpec::new(cfg.lambda, rho * cfg.lambda, alpha)?;
            let sim = match opts.simulate {
                true => empirical_ratio_laplace_multi(&ss, &spec, &cfg.trial_config())?,
                false => Vec::new(),
            };
            for (i, &s) in ss.iter().enumerate() {
                let (value, status) = match ratio_laplace(s, &spec, &ctrl) {
                    Ok(v) => (Cell::Num(v), "ok".to_string()),
                    Err(e @ (Error::SeriesDivergence { .. } | Error::SeriesBudget { .. })) => (Cell::Empty, e.to_string()),
                    Err(e) => return Err(e.into()),
                };
                let [m, se] = sim_cells(sim.get(i));
                t.push(vec![alpha.into(), rho.into(), s.into(), value, m, se, status.as_str().into()]);
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ccdf_curve_is_monotone() {
        let cfg = ExperimentConfig { alphas: vec![3.0], ..Default::default() };
        let t = ccdf_table(&cfg, &CurveOptions { ratios: vec![1.0], ..CurveOptions::ccdf_defaults() }).unwrap();
        let v: Vec<f64> = t.rows.iter().map(|r| r[3].as_f64().unwrap()).collect();
        assert_eq!(v.len(), 41);
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        assert!(t.rows.iter().all(|r| r[4] == Cell::Empty));
    }

    #[test]
    fn laplace_marks_divergent_points() {
        let cfg = ExperimentConfig { alphas: vec![4.0], trials: 200, ..Default::default() };
        let opts = CurveOptions { simulate: true, ..CurveOptions::laplace_defaults() };
        let t = laplace_table(&cfg, &opts).unwrap();
        let ok = t.rows.iter().filter(|r| r[6].as_str() == Some("ok")).count();
        assert!(ok > 0 && ok < t.rows.len());
        assert!(t.rows.iter().all(|r| r[4].as_f64().is_some()));
    }

    #[test]
    fn grid_validation() {
        let bad = CurveOptions { min: -1.0, ..CurveOptions::ccdf_defaults() };
        assert!(bad.grid().is_err());
        let one = CurveOptions { points: 1, min: 2.0, max: 2.0, ..CurveOptions::ccdf_defaults() };
        assert_eq!(one.grid().unwrap(), vec![2.0]);
    }
}
