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

//! Experiment configuration: defaults, a flat `key=value` file and flag
//! overrides, plus a stable hash embedded in every output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use camac_core::delivery::Method;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub lambda: f64,
    pub alphas: Vec<f64>,
    pub n_files: usize,
    /// Database sizes compared by the figure-4 and figure-5 sweeps.
    pub n_list: Vec<usize>,
    pub theta: f64,
    pub gamma_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub tail_tol: f64,
    /// Analytic methods swept alongside the simulation.
    pub methods: Vec<Method>,
    /// Absolute tolerance replacing the three-sigma rule in Monte Carlo
    /// agreement checks.
    pub check_tol: Option<f64>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            lambda: 0.1,
            alphas: vec![3.0, 4.0],
            n_files: 50,
            n_list: vec![5, 50, 500],
            theta: 5.0,
            gamma_grid: (0..=12).map(|i| i as f64 * 0.25).collect(),
            trials: 20_000,
            seed: 1,
            tail_tol: camac_core::sim::DEFAULT_TAIL_TOL,
            methods: vec![Method::Expectation, Method::Series, Method::Upper, Method::Lower, Method::NoCamac],
            check_tol: None,
            out_dir: PathBuf::from("."),
        }
    }
}

fn bad(key: &str, value: &str, why: &str) -> CliError {
    CliError::Config(format!("{key}={value}: {why}"))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(|v| v.trim().parse().map_err(|_| bad(key, value, "unparsable list entry")))
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| bad(key, value, "unparsable value"))
}

impl ExperimentConfig {
    /// Apply one `key=value` setting. Keys match the long flag names with
    /// dashes or underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key.trim().replace('-', "_").as_str() {
            "lambda" => self.lambda = parse_one(key, value)?,
            "alpha" => self.alphas = parse_list(key, value)?,
            "n_files" => self.n_files = parse_one(key, value)?,
            "n_list" => self.n_list = parse_list(key, value)?,
            "theta" => self.theta = parse_one(key, value)?,
            "gamma_grid" => self.gamma_grid = parse_list(key, value)?,
            "trials" => self.trials = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "tail_tol" => self.tail_tol = parse_one(key, value)?,
            "methods" => {
                self.methods = value
                    .split(',')
                    .map(|m| m.trim().parse().map_err(|e: camac_core::Error| bad(key, value, &e.to_string())))
                    .collect::<Result<_, _>>()?
            }
            "check_tol" => self.check_tol = Some(parse_one(key, value)?),
            "out_dir" => self.out_dir = PathBuf::from(value.trim()),
            other => return Err(CliError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Read a config file: one `key = value` per line, `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_str(&text)
    }

    pub fn apply_str(&mut self, text: &str) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", no + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: &str| Err(CliError::Config(m.to_string()));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return fail("lambda must be positive");
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|&a| !(a > 2.0 && a.is_finite())) {
            return fail("every alpha must exceed 2");
        }
        if self.gamma_grid.is_empty() || self.gamma_grid.iter().any(|&g| !(g >= 0.0 && g.is_finite())) {
            return fail("gamma grid must be nonempty and nonnegative");
        }
        if self.n_files == 0 || self.n_list.is_empty() || self.n_list.contains(&0) {
            return fail("file counts must be positive");
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return fail("theta must be positive");
        }
        if self.trials < 2 {
            return fail("at least two trials are needed for a standard error");
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return fail("tail_tol must lie in (0, 1)");
        }
        if self.check_tol.is_some_and(|t| !(t >= 0.0)) {
            return fail("check_tol must be nonnegative");
        }
        Ok(())
    }

    /// Canonical `key=value` lines for every setting that affects results.
    pub fn canonical(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "lambda={:?}", self.lambda);
        let _ = writeln!(s, "alpha={}", join(&self.alphas));
        let _ = writeln!(s, "n_files={}", self.n_files);
        let n_list: Vec<String> = self.n_list.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "n_list={}", n_list.join(","));
        let _ = writeln!(s, "theta={:?}", self.theta);
        let _ = writeln!(s, "gamma_grid={}", join(&self.gamma_grid));
        let _ = writeln!(s, "trials={}", self.trials);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "tail_tol={:?}", self.tail_tol);
        let methods: Vec<&str> = self.methods.iter().map(|m| m.label()).collect();
        let _ = writeln!(s, "methods={}", methods.join(","));
        if let Some(t) = self.check_tol {
            let _ = writeln!(s, "check_tol={t:?}");
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`canonical`](Self::canonical).
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn trial_config(&self) -> camac_core::sim::TrialConfig {
        camac_core::sim::TrialConfig::new(self.trials, self.seed).with_tail_tol(self.tail_tol)
    }
}
