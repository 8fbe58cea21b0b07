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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the law or formula is defined.
    #[error("parameter `{name}` = {value} is outside its domain ({expected})")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The caller violated an operation precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The requested case exists mathematically but is not supported here.
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// A truncated series started growing before reaching its tolerance.
    #[error(
        "series diverges: |term| grew for 3 consecutive terms (last index {last_index}, \
         argument {argument:e}); {condition}"
    )]
    SeriesDivergence {
        argument: f64,
        last_index: usize,
        condition: &'static str,
    },

    /// The series hit its term budget before the tolerance was met.
    #[error("series not converged after {terms} terms (last |term| = {last_term:e})")]
    SeriesBudget { terms: usize, last_term: f64 },

    #[error("quadrature did not converge: estimated error {error:e} > tolerance {tolerance:e}")]
    QuadratureNonconvergence { error: f64, tolerance: f64 },

    /// The scenario has no interferers, so the quantity is undefined.
    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),

    /// Point at the origin makes |X|^-alpha singular.
    #[error("singular configuration: point at the origin")]
    SingularConfiguration,
}

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            expected,
        })
    }
}
