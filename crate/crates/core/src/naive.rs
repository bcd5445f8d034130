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

//! The permuted product-state protocol and the two attacks on it.
//!
//! With `M = 2`, Alice sends `3q` qubits: `U_σ|0>^{2q}|+>^q` for message 1 or
//! `U_τ|1>^{2q}|+>^q` for message 2, and tells Bob to read every qubit in the
//! standard basis. Reading qubit by qubit wrecks the `|+>` registers even after
//! Bob's best repair. Measuring only the two-outcome majority projector
//! `{Π₁, Π₂}` reveals the message without touching the state at all.
//!
//! Register 0 is the most significant bit of a dense basis index.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::matcore::{ComplexMatrix, C64, MAX_DENSE_DIM};
use crate::qstate::{OutcomeLabel, Povm, PureState};
use crate::rng::RngStream;

/// Largest `q` with a dense `2^{3q}` representation.
pub const MAX_DENSE_Q: usize = 4;
const TRIALS_PER_BATCH: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QubitLabel {
    Zero,
    One,
    Plus,
}

impl QubitLabel {
    /// Real amplitudes on `|0>`, `|1>`.
    pub fn amplitudes(self) -> [f64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            QubitLabel::Zero => [1.0, 0.0],
            QubitLabel::One => [0.0, 1.0],
            QubitLabel::Plus => [h, h],
        }
    }
}

/// `U_π |b>^{2q} |+>^q` with `b = 0` for message 1 and `b = 1` for message 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductState {
    q: usize,
    message: usize,
    /// Base qubit `k` sits in register `permutation[k]`.
    permutation: Vec<usize>,
}

impl ProductState {
    pub fn new(q: usize, message: usize, permutation: Vec<usize>) -> Result<Self> {
        if q == 0 {
            return Err(out_of_range("q", 0.0, ">= 1"));
        }
        if message != 1 && message != 2 {
            return Err(out_of_range("message", message as f64, "{1, 2}"));
        }
        let n = 3 * q;
        let mut seen = vec![false; n];
        if permutation.len() != n
            || !permutation
                .iter()
                .all(|&r| r < n && !std::mem::replace(&mut seen[r], true))
        {
            return Err(Error::InvalidProductState(format!(
                "{permutation:?} is not a permutation of 0..{n}"
            )));
        }
        Ok(Self {
            q,
            message,
            permutation,
        })
    }

    pub fn identity(q: usize, message: usize) -> Result<Self> {
        Self::new(q, message, (0..3 * q).collect())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn message(&self) -> usize {
        self.message
    }

    pub fn num_registers(&self) -> usize {
        3 * self.q
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Label of the `|0>`/`|1>` registers for this message.
    pub fn bit_label(&self) -> QubitLabel {
        if self.message == 1 {
            QubitLabel::Zero
        } else {
            QubitLabel::One
        }
    }

    /// Per-register labels after permutation.
    pub fn register_labels(&self) -> Vec<QubitLabel> {
        let mut labels = vec![QubitLabel::Plus; self.num_registers()];
        for (k, &r) in self.permutation.iter().enumerate() {
            labels[r] = if k < 2 * self.q {
                self.bit_label()
            } else {
                QubitLabel::Plus
            };
        }
        labels
    }
}

fn shuffled_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = RngStream::from_seed(seed)
        .derive("naive/permutation", &[n as u64])
        .rng();
    perm.shuffle(&mut rng);
    perm
}

/// Message-1 and message-2 states with Fisher–Yates permutations drawn from
/// `sigma_seed` and `tau_seed`.
pub fn build_naive_scheme(
    q: usize,
    sigma_seed: u64,
    tau_seed: u64,
) -> Result<(ProductState, ProductState)> {
    if q == 0 {
        return Err(out_of_range("q", 0.0, ">= 1"));
    }
    Ok((
        ProductState::new(q, 1, shuffled_permutation(3 * q, sigma_seed))?,
        ProductState::new(q, 2, shuffled_permutation(3 * q, tau_seed))?,
    ))
}

/// Dense vector of a product of single-qubit labels.
pub fn product_vector(labels: &[QubitLabel]) -> Result<Vec<C64>> {
    let n = labels.len();
    if n >= usize::BITS as usize || (1usize << n) > MAX_DENSE_DIM {
        return Err(Error::Capacity {
            requested: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            max: MAX_DENSE_DIM,
        });
    }
    let mut v = vec![C64::new(1.0, 0.0)];
    for label in labels {
        let amp = label.amplitudes();
        v = v.iter().flat_map(|&z| [z * amp[0], z * amp[1]]).collect();
    }
    Ok(v)
}

pub fn dense_state(s: &ProductState) -> Result<PureState> {
    if s.q() > MAX_DENSE_Q {
        return Err(Error::Capacity {
            requested: 1 << s.num_registers().min(63),
            max: MAX_DENSE_DIM,
        });
    }
    PureState::new(product_vector(&s.register_labels())?)
}

/// Number of `0` bits in the `n`-register basis string `index`.
pub fn zero_count(index: usize, n: usize) -> usize {
    n - (index & ((1 << n) - 1)).count_ones() as usize
}

/// `2·zeros > 3q`, i.e. strictly more than `3q/2` zeros.
pub fn in_majority_zero(zeros: usize, q: usize) -> bool {
    2 * zeros > 3 * q
}

/// Diagonal of `Π₁` as a mask over basis strings.
pub fn majority_mask(q: usize) -> Vec<bool> {
    let n = 3 * q;
    (0..1usize << n)
        .map(|x| in_majority_zero(zero_count(x, n), q))
        .collect()
}

/// `{Π₁, Π₂}` as a dense POVM labelled `Index(1)`, `Index(2)`.
pub fn majority_projector_povm(q: usize) -> Result<Povm> {
    if q == 0 || q > MAX_DENSE_Q {
        return Err(Error::Capacity {
            requested: 1 << (3 * q).min(63),
            max: MAX_DENSE_DIM,
        });
    }
    let mask = majority_mask(q);
    let pi1: Vec<f64> = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let pi2: Vec<f64> = mask.iter().map(|&b| if b { 0.0 } else { 1.0 }).collect();
    Povm::new(vec![
        (OutcomeLabel::Index(1), ComplexMatrix::from_real_diag(&pi1)),
        (OutcomeLabel::Index(2), ComplexMatrix::from_real_diag(&pi2)),
    ])
}

/// `Π₁|ψ₁> = |ψ₁>` and `Π₂|ψ₂> = |ψ₂>` within `1e-10`.
pub fn verify_nondisturbing(q: usize, sigma_seed: u64, tau_seed: u64) -> Result<bool> {
    verify_nondisturbing_with(q, sigma_seed, tau_seed, |zeros| in_majority_zero(zeros, q))
}

/// As [`verify_nondisturbing`], with a caller-chosen `Π₁` membership rule on
/// the zero count.
pub fn verify_nondisturbing_with(
    q: usize,
    sigma_seed: u64,
    tau_seed: u64,
    in_pi1: impl Fn(usize) -> bool,
) -> Result<bool> {
    let (s1, s2) = build_naive_scheme(q, sigma_seed, tau_seed)?;
    let n = 3 * q;
    let untouched = |s: &ProductState, keep_pi1: bool| -> Result<bool> {
        let psi = dense_state(s)?;
        let max_change = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(x, z)| {
                if in_pi1(zero_count(x, n)) == keep_pi1 {
                    0.0
                } else {
                    z.norm()
                }
            })
            .fold(0.0, f64::max);
        Ok(max_change <= 1e-10)
    };
    Ok(untouched(&s1, true)? && untouched(&s2, false)?)
}

/// Labels after Bob's repair: registers whose outcome contradicts the message
/// bit are reset to `|+>`, the rest keep their collapsed basis state.
pub fn repaired_labels(s: &ProductState, outcomes: &[bool]) -> Vec<QubitLabel> {
    let consistent = s.message() == 1;
    outcomes
        .iter()
        .map(|&one| match (one, consistent) {
            (true, true) | (false, false) => QubitLabel::Plus,
            (false, true) => QubitLabel::Zero,
            (true, false) => QubitLabel::One,
        })
        .collect()
}

/// `(1/2)^k`, with `k` the `|+>` registers that produced the message bit.
pub fn trial_fidelity(s: &ProductState, outcomes: &[bool]) -> f64 {
    let message_bit = s.message() == 2;
    let k = s
        .register_labels()
        .iter()
        .zip(outcomes)
        .filter(|(label, &one)| **label == QubitLabel::Plus && one == message_bit)
        .count();
    0.5f64.powi(k as i32)
}

/// Mean fidelity `(3/4)^q` of the repaired state.
pub fn exact_mean_fidelity(q: usize) -> f64 {
    0.75f64.powi(q as i32)
}

/// Monte Carlo summary of the qubit-wise attack.
#[derive(Clone, Debug, PartialEq)]
pub struct AttackResult {
    pub trials: usize,
    pub mean_fidelity: f64,
    pub fidelity_std_error: f64,
    pub detection_probability: f64,
    /// `outcome_histogram[z]` counts trials with `z` zero outcomes.
    pub outcome_histogram: Vec<u64>,
}

/// Simulates the read-every-qubit attack with repair, register by register.
///
/// Trials run in batches; batch `b` uses `stream.split(b)`.
pub fn simulate_qubitwise_attack(
    s: &ProductState,
    trials: usize,
    stream: &RngStream,
) -> Result<AttackResult> {
    if trials == 0 {
        return Err(out_of_range("trials", 0.0, ">= 1"));
    }
    let labels = s.register_labels();
    let n = labels.len();
    let batches = trials.div_ceil(TRIALS_PER_BATCH);
    let partials: Vec<(f64, f64, Vec<u64>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream.split(b as u64).rng();
            let count = TRIALS_PER_BATCH.min(trials - b * TRIALS_PER_BATCH);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut hist = vec![0u64; n + 1];
            let mut outcomes = vec![false; n];
            for _ in 0..count {
                for (o, label) in outcomes.iter_mut().zip(&labels) {
                    *o = match label {
                        QubitLabel::Zero => false,
                        QubitLabel::One => true,
                        QubitLabel::Plus => rng.random_bool(0.5),
                    };
                }
                hist[outcomes.iter().filter(|&&one| !one).count()] += 1;
                let f = trial_fidelity(s, &outcomes);
                sum += f;
                sum_sq += f * f;
            }
            (sum, sum_sq, hist)
        })
        .collect();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut histogram = vec![0u64; n + 1];
    for (s1, s2, h) in partials {
        sum += s1;
        sum_sq += s2;
        for (acc, c) in histogram.iter_mut().zip(h) {
            *acc += c;
        }
    }
    let t = trials as f64;
    let mean = sum / t;
    let variance = if trials > 1 {
        ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(AttackResult {
        trials,
        mean_fidelity: mean,
        fidelity_std_error: (variance / t).sqrt(),
        detection_probability: 1.0 - mean,
        outcome_histogram: histogram,
    })
}

/// Alice's detection probability with `{I − |ψ><ψ|, |ψ><ψ|}`: `1 − F̄`.
pub fn detection_probability_naive(result: &AttackResult) -> f64 {
    1.0 - result.mean_fidelity
}
