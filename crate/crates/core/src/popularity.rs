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

//! Content popularity profiles and request sampling.

use rand::Rng;

use crate::error::check_domain;
use crate::{Error, Result};

const SUM_TOL: f64 = 1e-12;

/// Request probabilities `a_1, ..., a_N`, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularityProfile {
    weights: Vec<f64>,
}

impl PopularityProfile {
    /// Accepts an explicit vector. It must already sum to one.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Contract("popularity profile needs at least one file".into()));
        }
        for &w in &weights {
            check_domain("weight", w, (0.0..=1.0).contains(&w), "[0, 1]")?;
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Contract(format!("weights sum to {total}, not 1")));
        }
        Ok(PopularityProfile { weights })
    }

    /// Normalizes nonnegative scores into a profile.
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        for &s in scores {
            check_domain("score", s, s >= 0.0 && s.is_finite(), ">= 0")?;
        }
        let total: f64 = scores.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Contract("scores must not all be zero".into()));
        }
        Self::new(scores.iter().map(|s| s / total).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Zero-based.
    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfSpec {
    pub n: usize,
    pub gamma: f64,
}

/// `a_n = n^-gamma / sum_m m^-gamma`.
pub fn zipf(spec: ZipfSpec) -> Result<PopularityProfile> {
    if spec.n == 0 {
        return Err(Error::ParameterDomain {
            name: "n",
            value: 0.0,
            expected: ">= 1",
        });
    }
    check_domain("gamma", spec.gamma, spec.gamma >= 0.0 && spec.gamma.is_finite(), ">= 0")?;
    let raw: Vec<f64> = (1..=spec.n).map(|n| (n as f64).powf(-spec.gamma)).collect();
    // Sum smallest first so the normalizer is as accurate as possible.
    let total: f64 = raw.iter().rev().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let drift: f64 = 1.0 - weights.iter().sum::<f64>();
    weights[0] += drift;
    PopularityProfile::new(weights)
}

/// Per-file helper densities `a_n lambda`.
pub fn decompose_densities(profile: &PopularityProfile, lambda: f64) -> Result<Vec<f64>> {
    check_domain("lambda", lambda, lambda > 0.0 && lambda.is_finite(), "> 0")?;
    Ok(profile.weights.iter().map(|a| a * lambda).collect())
}

/// Inverse-CDF file sampler over a cumulative table.
#[derive(Debug, Clone)]
pub struct RequestSampler {
    cumulative: Vec<f64>,
}

impl RequestSampler {
    pub fn new(profile: &PopularityProfile) -> Self {
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = profile
            .weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        // Rounding must not leave a gap above the last drawable file.
        let last = profile.weights.iter().rposition(|&w| w > 0.0).expect("weights sum to one");
        for c in &mut cumulative[last..] {
            *c = f64::INFINITY;
        }
        RequestSampler { cumulative }
    }

    /// Zero-based index `k` with probability `a_k`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        // First file whose cumulative weight exceeds u; zero-weight files
        // share their predecessor's value and are skipped.
        self.cumulative.partition_point(|&c| c <= u)
    }
}

/// One request drawn from `profile`.
pub fn sample_request<R: Rng + ?Sized>(profile: &PopularityProfile, rng: &mut R) -> usize {
    RequestSampler::new(profile).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::trial_rng;
    use crate::stats::{chi_square_critical, chi_square_statistic};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zipf_examples() {
        let u = zipf(ZipfSpec { n: 4, gamma: 0.0 }).unwrap();
        assert_eq!(u.weights(), &[0.25; 4]);
        let z = zipf(ZipfSpec { n: 3, gamma: 1.0 }).unwrap();
        for (w, e) in z.weights().iter().zip([6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0]) {
            assert_relative_eq!(*w, e, max_relative = 1e-15);
        }
        let s = zipf(ZipfSpec { n: 50, gamma: 50.0 }).unwrap();
        assert!(s.weight(0) > 1.0 - 1e-10);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(PopularityProfile::new(vec![]).is_err());
        assert!(PopularityProfile::new(vec![0.5, 0.6]).is_err());
        assert!(PopularityProfile::new(vec![1.5, -0.5]).is_err());
        assert!(zipf(ZipfSpec { n: 0, gamma: 1.0 }).is_err());
        assert!(zipf(ZipfSpec { n: 3, gamma: -1.0 }).is_err());
        assert!(PopularityProfile::from_scores(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn decompose_examples() {
        let u = zipf(ZipfSpec { n: 2, gamma: 0.0 }).unwrap();
        assert_eq!(decompose_densities(&u, 0.1).unwrap(), vec![0.05, 0.05]);
        let z = zipf(ZipfSpec { n: 3, gamma: 1.0 }).unwrap();
        let d = decompose_densities(&z, 0.11).unwrap();
        for (v, e) in d.iter().zip([0.06, 0.03, 0.02]) {
            assert_relative_eq!(*v, e, max_relative = 1e-14);
        }
        assert!(decompose_densities(&z, 0.0).is_err());
    }

    #[test]
    fn single_file_always_drawn() {
        let p = PopularityProfile::new(vec![1.0]).unwrap();
        let mut rng = trial_rng(1, 0, 0);
        assert!((0..1000).all(|_| sample_request(&p, &mut rng) == 0));
    }

    #[test]
    fn zero_weight_never_drawn() {
        let p = PopularityProfile::new(vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        let s = RequestSampler::new(&p);
        let mut rng = trial_rng(2, 0, 0);
        for _ in 0..20_000 {
            let k = s.sample(&mut rng);
            assert!(k == 0 || k == 2, "drew {k}");
        }
    }

    #[test]
    fn request_frequencies_pass_chi_square() {
        let p = zipf(ZipfSpec { n: 3, gamma: 1.0 }).unwrap();
        let s = RequestSampler::new(&p);
        let mut rng = trial_rng(3, 0, 0);
        let mut counts = [0u64; 3];
        for _ in 0..100_000 {
            counts[s.sample(&mut rng)] += 1;
        }
        let stat = chi_square_statistic(&counts, p.weights());
        assert!(stat < chi_square_critical(2, 0.01), "chi2 = {stat}");
    }

    #[test]
    fn same_seed_same_requests() {
        let p = zipf(ZipfSpec { n: 10, gamma: 0.8 }).unwrap();
        let s = RequestSampler::new(&p);
        let (mut a, mut b) = (trial_rng(9, 1, 5), trial_rng(9, 1, 5));
        let x: Vec<usize> = (0..100).map(|_| s.sample(&mut a)).collect();
        let y: Vec<usize> = (0..100).map(|_| s.sample(&mut b)).collect();
        assert_eq!(x, y);
    }

    proptest! {
        #[test]
        fn zipf_shape(n in 1usize..300, g in 0f64..5.0) {
            let p = zipf(ZipfSpec { n, gamma: g }).unwrap();
            let total: f64 = p.weights().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            for w in p.weights().windows(2) {
                if g > 0.0 {
                    prop_assert!(w[1] < w[0]);
                } else {
                    prop_assert!((w[1] - w[0]).abs() < 1e-15);
                }
            }
        }

        #[test]
        fn decomposition_preserves_density(scores in proptest::collection::vec(0.01f64..1.0, 1..60), lambda in 1e-3f64..10.0) {
            let p = PopularityProfile::from_scores(&scores).unwrap();
            let d = decompose_densities(&p, lambda).unwrap();
            let total: f64 = d.iter().sum();
            prop_assert!((total - lambda).abs() <= 1e-12 * lambda);
        }
    }
}
