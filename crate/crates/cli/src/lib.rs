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

//! Experiment runner for the camac toolkit: figure sweeps, curve dumps and
//! a validation suite, all written as self-describing CSV.

pub mod check;
pub mod config;
pub mod curves;
pub mod figures;
pub mod plot;
pub mod table;
pub mod validate;

pub use config::ExperimentConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] camac_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed table: {0}")]
    Format(String),
}

impl CliError {
    /// 2 for configuration problems, 1 for anything that failed at run time.
    pub fn exit_code(&self) -> i32 {
        use camac_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Core(E::ParameterDomain { .. }) => 2,
            _ => 1,
        }
    }
}
