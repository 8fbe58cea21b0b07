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

//! Pass/fail checks shared by `validate` and the figure commands.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Informational checks are reported but never fail a run.
    pub required: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, required: true, detail: detail.into() }
    }

    pub fn info(self) -> Self {
        Check { required: false, ..self }
    }

    pub fn error(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Check::new(name, false, format!("error: {err}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.pass, self.required) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass || !c.required)
}

/// `|a - b| <= tol`, where `tol` defaults to `sigmas` standard errors.
pub fn agree(a: f64, b: f64, se: f64, sigmas: f64, abs_tol: Option<f64>) -> (bool, String) {
    let tol = abs_tol.unwrap_or(sigmas * se);
    let d = (a - b).abs();
    (d <= tol, format!("{a:.6} vs {b:.6}, |diff| {d:.3e} <= {tol:.3e}"))
}
