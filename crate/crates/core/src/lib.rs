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

//! Ratio of Poisson shot-noise processes and content delivery with
//! content-adaptive modulation and coding (CAMAC).
//!
//! The crate is split into closed-form analytics and an independent
//! Monte Carlo oracle:
//!
//! - [`stable`]: alpha-stable laws in the two classical parametrizations.
//! - [`shot_noise`]: differential shot noise, shot-noise ratio CCDF, Laplace
//!   series and the series density of a single shot noise.
//! - [`popularity`]: Zipf and explicit popularity profiles.
//! - [`delivery`]: conditional and total content-delivery probabilities,
//!   bounds, the no-CAMAC baseline and the spatial alignment gain.
//! - [`sim`]: Poisson point-process simulator for shot noise, ratios and SIRs.
//!
//! Monte Carlo work is split into fixed-size chunks of trials, each trial
//! drawing from its own counter-based ChaCha stream. With the `parallel`
//! feature (on by default) chunks run on the rayon pool; results are
//! bit-identical to the sequential path.

pub mod delivery;
pub mod error;
pub mod exec;
pub mod popularity;
pub mod quadrature;
pub mod shot_noise;
pub mod sim;
pub mod special;
pub mod stable;
pub mod stats;

pub use error::{Error, Result};
pub use exec::Exec;
pub use stats::Estimate;
