// Copyright 2026 The qseal Developers
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

//! Measurement invariants over random states and POVMs.

use proptest::prelude::*;
use qseal::matcore::hermitian_eigendecomp;
use qseal::qstate::{
    coarse_grain, helstrom_probability, measure_probabilities, standard_implementation,
    unknown_outcome_state,
};
use qseal::random::{random_density, split_psd};
use qseal::rng::RngStream;
use qseal::{ComplexMatrix, DensityMatrix, OutcomeLabel, Povm};

fn random_povm(dim: usize, n: usize, seed: u64) -> Povm {
    let mut rng = RngStream::from_seed(seed)
        .derive("povm", &[dim as u64, n as u64])
        .rng();
    let parts = split_psd(&ComplexMatrix::identity(dim), n, &mut rng).unwrap();
    Povm::new(
        parts
            .into_iter()
            .enumerate()
            .map(|(k, e)| (OutcomeLabel::Pair(1 + k % 2, k / 2), e))
            .collect(),
    )
    .unwrap()
}

fn random_state(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = RngStream::from_seed(seed)
        .derive("state", &[dim as u64])
        .rng();
    let rank = 1 + (seed as usize) % dim;
    DensityMatrix::new(random_density(dim, rank, &mut rng)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_sum_to_one(dim in 1usize..=12, n in 1usize..=6, seed in any::<u64>()) {
        let rho = random_state(dim, seed);
        let povm = random_povm(dim, n, seed);
        let total: f64 = measure_probabilities(&rho, &povm).unwrap().iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn post_states_are_states(dim in 1usize..=8, n in 1usize..=5, seed in any::<u64>()) {
        let rho = random_state(dim, seed);
        let povm = random_povm(dim, n, seed);
        for o in standard_implementation(&rho, &povm).unwrap() {
            if let Some(post) = o.post_state {
                prop_assert!((post.matrix().trace().re - 1.0).abs() < 1e-10);
                prop_assert!(hermitian_eigendecomp(post.matrix()).unwrap().eigenvalues[0] > -1e-10);
            }
        }
        let mixed = unknown_outcome_state(&rho, &povm).unwrap();
        prop_assert!((mixed.matrix().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(hermitian_eigendecomp(mixed.matrix()).unwrap().eigenvalues[0] > -1e-10);
    }

    #[test]
    fn coarse_graining_adds_probabilities(dim in 1usize..=8, n in 2usize..=6, seed in any::<u64>()) {
        let rho = random_state(dim, seed);
        let povm = random_povm(dim, n, seed);
        let fine = measure_probabilities(&rho, &povm).unwrap();
        let coarse = measure_probabilities(&rho, &coarse_grain(&povm).unwrap()).unwrap();
        for (label, p) in coarse {
            let OutcomeLabel::Index(i) = label else { panic!("coarse label {label}") };
            let sum: f64 = fine
                .iter()
                .filter(|(l, _)| matches!(l, OutcomeLabel::Pair(a, _) if *a == i))
                .map(|(_, p)| p)
                .sum();
            prop_assert!((p - sum).abs() < 1e-10);
        }
    }

    #[test]
    fn helstrom_is_symmetric_and_bounded(dim in 1usize..=8, seed in any::<u64>()) {
        let rho = random_state(dim, seed);
        let sigma = random_state(dim, seed ^ 0x5eed);
        let a = helstrom_probability(&rho, &sigma).unwrap();
        let b = helstrom_probability(&sigma, &rho).unwrap();
        prop_assert!((0.5..=1.0).contains(&a));
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((helstrom_probability(&rho, &rho).unwrap() - 0.5).abs() < 1e-10);
    }
}
