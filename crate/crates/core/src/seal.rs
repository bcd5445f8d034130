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

//! Seal schemes, Bob's coarse-grained cheat and Alice's detection metrics.
//!
//! Alice encodes message `m ∈ [M]` in a pure state `|ψ_m>` on `A ⊗ B`, keeps
//! `A` and hands `B` to Bob together with a POVM `{E_{i,j}}` on `B`. Reading
//! outcome `(i, j)` means "the message is `i`", and Alice promises that this
//! is right with probability at least `p`.
//!
//! Bob cheats by merging every element with the same message into
//! `F_i = Σ_j E_{i,j}` and applying the standard implementation of `{F_i}`.
//! Alice then either distinguishes the returned state from `|ψ_m>` optimally
//! (`p_dist`) or measures `{I − |ψ_m><ψ_m|, |ψ_m><ψ_m|}` so an honest Bob is
//! never accused (`p_NFP`).

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{out_of_range, Error, Result};
use crate::matcore::{partial_trace, tensor_product, trace_norm, ComplexMatrix, Subsystem, C64};
use crate::qstate::{coarse_grain, DensityMatrix, OutcomeLabel, Povm, PureState};
use crate::random::{complex_gaussian, random_unitary, split_psd};

/// Slack on the promise `Σ_j tr(E_{m,j} ρ_m) ≥ p`.
pub const PROMISE_TOL: f64 = 1e-9;

/// A seal: per-message joint states, Bob's POVM and the promised readout
/// probability.
#[derive(Clone, Debug)]
pub struct SealScheme {
    num_messages: usize,
    dim_a: usize,
    dim_b: usize,
    joint_states: Vec<PureState>,
    bob_povm: Povm,
    coarse: Povm,
    promised_p: f64,
}

impl SealScheme {
    /// Validates the scheme, including the promise for every message.
    pub fn new(
        num_messages: usize,
        dim_a: usize,
        dim_b: usize,
        joint_states: Vec<PureState>,
        bob_povm: Povm,
        promised_p: f64,
    ) -> Result<Self> {
        let scheme = Self::without_promise(
            num_messages,
            dim_a,
            dim_b,
            joint_states,
            bob_povm,
            promised_p,
        )?;
        let floor = 1.0 / num_messages as f64;
        if !(promised_p > floor && promised_p <= 1.0) {
            return Err(out_of_range("promised_p", promised_p, "(1/M, 1]"));
        }
        for m in 1..=num_messages {
            let realized = scheme.promise_probability(m)?;
            if realized < promised_p - PROMISE_TOL {
                return Err(Error::PromiseViolation {
                    message: m,
                    realized,
                    promised: promised_p,
                });
            }
        }
        Ok(scheme)
    }

    /// Structural validation only: the promise and the range of `promised_p`
    /// are not checked. For analysing candidate designs.
    pub fn without_promise(
        num_messages: usize,
        dim_a: usize,
        dim_b: usize,
        joint_states: Vec<PureState>,
        bob_povm: Povm,
        promised_p: f64,
    ) -> Result<Self> {
        if num_messages < 2 {
            return Err(out_of_range("M", num_messages as f64, ">= 2"));
        }
        if joint_states.len() != num_messages {
            return Err(Error::DimensionMismatch(format!(
                "{} joint states for {num_messages} messages",
                joint_states.len()
            )));
        }
        if bob_povm.dim() != dim_b {
            return Err(Error::DimensionMismatch(format!(
                "POVM on dim {} but dimB = {dim_b}",
                bob_povm.dim()
            )));
        }
        for label in bob_povm.labels() {
            match label {
                OutcomeLabel::Pair(i, _) if (1..=num_messages).contains(&i) => {}
                OutcomeLabel::Pair(..) => {
                    return Err(Error::InvalidPovm(format!(
                        "label {label} names a message outside 1..={num_messages}"
                    )))
                }
                OutcomeLabel::Index(_) => return Err(Error::MixedLabels),
            }
        }
        let joint_states = joint_states
            .into_iter()
            .map(|s| s.with_dims(dim_a, dim_b))
            .collect::<Result<Vec<_>>>()?;
        let coarse = coarse_grain(&bob_povm)?;
        Ok(Self {
            num_messages,
            dim_a,
            dim_b,
            joint_states,
            bob_povm,
            coarse,
            promised_p,
        })
    }

    pub fn num_messages(&self) -> usize {
        self.num_messages
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn promised_p(&self) -> f64 {
        self.promised_p
    }

    pub fn bob_povm(&self) -> &Povm {
        &self.bob_povm
    }

    /// `{F_i}` labelled `Index(i)`; messages without elements are absent.
    pub fn coarse_povm(&self) -> &Povm {
        &self.coarse
    }

    pub fn joint_states(&self) -> &[PureState] {
        &self.joint_states
    }

    /// `|ψ_m>` for `m ∈ 1..=M`.
    pub fn joint_state(&self, m: usize) -> Result<&PureState> {
        self.check_message(m)?;
        Ok(&self.joint_states[m - 1])
    }

    fn check_message(&self, m: usize) -> Result<()> {
        if (1..=self.num_messages).contains(&m) {
            Ok(())
        } else {
            Err(out_of_range("m", m as f64, "1..=M"))
        }
    }

    /// `ρ_m = tr_A |ψ_m><ψ_m|`.
    pub fn reduced_state(&self, m: usize) -> Result<DensityMatrix> {
        let psi = self.joint_state(m)?.amplitudes();
        let joint = ComplexMatrix::outer(psi, psi);
        DensityMatrix::new(partial_trace(&joint, self.dim_a, self.dim_b, Subsystem::A)?)
    }

    /// `Σ_j tr(E_{m,j} ρ_m)`.
    pub fn promise_probability(&self, m: usize) -> Result<f64> {
        let rho = self.reduced_state(m)?;
        let mut total = 0.0;
        for (label, e) in self.bob_povm.elements() {
            if label.message() == m {
                total += e.trace_of_product(rho.matrix())?.re;
            }
        }
        Ok(total.clamp(0.0, 1.0))
    }

    /// `(I_A ⊗ √F_i)|ψ_m>` for every coarse outcome `i`, in label order.
    fn cheat_branches(&self, m: usize) -> Result<Vec<Vec<C64>>> {
        let psi = self.joint_state(m)?.amplitudes();
        (0..self.coarse.len())
            .map(|k| apply_on_b(self.coarse.root(k), psi, self.dim_a, self.dim_b))
            .collect()
    }

    /// State Alice gets back after Bob's coarse-grained measurement with the
    /// outcome averaged out: `Σ_i (I_A ⊗ √F_i)|ψ_m><ψ_m|(I_A ⊗ √F_i)`.
    pub fn coarse_cheat_state(&self, m: usize) -> Result<DensityMatrix> {
        let n = self.dim_a * self.dim_b;
        let sum = self
            .cheat_branches(m)?
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, v| {
                &acc + &ComplexMatrix::outer(v, v)
            });
        Ok(DensityMatrix::from_trusted(sum))
    }

    /// `{I_A ⊗ F_i}` on the joint space.
    pub fn lifted_coarse_povm(&self) -> Result<Povm> {
        let id = ComplexMatrix::identity(self.dim_a);
        let elements = self
            .coarse
            .elements()
            .iter()
            .map(|(label, f)| Ok((*label, tensor_product(&id, f)?)))
            .collect::<Result<Vec<_>>>()?;
        Povm::new(elements)
    }

    /// `1/2 + ‖|ψ_m><ψ_m| − cheat‖₁ / 4`.
    pub fn p_dist_numeric(&self, m: usize) -> Result<f64> {
        let psi = self.joint_state(m)?.amplitudes();
        let honest = ComplexMatrix::outer(psi, psi);
        let cheat = self.coarse_cheat_state(m)?;
        Ok((0.5 + 0.25 * trace_norm(&(&honest - cheat.matrix()))?).clamp(0.5, 1.0))
    }

    /// `1 − Σ_i |<ψ_m|I_A ⊗ √F_i|ψ_m>|²`.
    pub fn p_nfp_numeric(&self, m: usize) -> Result<f64> {
        let psi = self.joint_state(m)?.amplitudes();
        let kept: f64 = self
            .cheat_branches(m)?
            .iter()
            .map(|v| {
                psi.iter()
                    .zip(v)
                    .map(|(a, b)| a.conj() * b)
                    .sum::<C64>()
                    .norm_sqr()
            })
            .sum();
        Ok((1.0 - kept).clamp(0.0, 1.0))
    }

    /// `tr((I − |ψ_m><ψ_m|) · cheat)`, computed from the full operators.
    pub fn p_nfp_by_trace(&self, m: usize) -> Result<f64> {
        let psi = self.joint_state(m)?.amplitudes();
        let n = psi.len();
        let detector = &ComplexMatrix::identity(n) - &ComplexMatrix::outer(psi, psi);
        let cheat = self.coarse_cheat_state(m)?;
        Ok(detector
            .trace_of_product(cheat.matrix())?
            .re
            .clamp(0.0, 1.0))
    }
}

/// `(I_A ⊗ op) v` for `v ∈ C^{dim_a} ⊗ C^{dim_b}`.
fn apply_on_b(op: &ComplexMatrix, v: &[C64], dim_a: usize, dim_b: usize) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(v.len());
    for block in v.chunks(dim_b).take(dim_a) {
        out.extend(op.matvec(block)?);
    }
    Ok(out)
}

/// Upper bound on `p_dist`, raw and clipped to a probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PDistBound {
    /// `1/2 + (2√(1−p) + 1 − p)/4`; exceeds 1 for small `p`.
    pub raw: f64,
    pub clamped: f64,
}

pub fn p_dist_upper_bound(p: f64) -> Result<PDistBound> {
    if !(0.0..=1.0).contains(&p) {
        return Err(out_of_range("p", p, "[0, 1]"));
    }
    let eps = 1.0 - p;
    let raw = 0.5 + 0.25 * (2.0 * eps.sqrt() + eps);
    Ok(PDistBound {
        raw,
        clamped: raw.min(1.0),
    })
}

/// Slack when deciding `p ≥ 1/M` for values computed in floating point.
const FLOOR_TOL: f64 = 1e-12;

fn nfp_expression(t: f64, num_messages: usize) -> f64 {
    1.0 - t * t - (1.0 - t).powi(2) / (num_messages as f64 - 1.0)
}

/// `1 − p² − (1−p)²/(M−1)` for `p ∈ [1/M, 1]`.
pub fn p_nfp_upper_bound(p: f64, num_messages: usize) -> Result<f64> {
    if num_messages < 2 {
        return Err(out_of_range("M", num_messages as f64, ">= 2"));
    }
    let floor = 1.0 / num_messages as f64;
    if !(p >= floor - FLOOR_TOL && p <= 1.0) {
        return Err(out_of_range("p", p, "[1/M, 1]"));
    }
    Ok(nfp_expression(p, num_messages).clamp(0.0, 1.0))
}

/// Whether `1 − t² − (1−t)²/(M−1)` is non-increasing along `grid`.
///
/// Grid points below `1/M` are rejected: monotonicity is only claimed above.
pub fn monotonicity_check(grid: &[f64], num_messages: usize) -> Result<bool> {
    if num_messages < 2 {
        return Err(out_of_range("M", num_messages as f64, ">= 2"));
    }
    let floor = 1.0 / num_messages as f64;
    if let Some(&t) = grid
        .iter()
        .find(|&&t| !(t >= floor - FLOOR_TOL && t <= 1.0))
    {
        return Err(out_of_range("t", t, "[1/M, 1]"));
    }
    Ok(grid
        .windows(2)
        .all(|w| nfp_expression(w[1], num_messages) <= nfp_expression(w[0], num_messages)))
}

/// Detection metrics for one message.
#[derive(Clone, Debug, PartialEq)]
pub struct MessageDetection {
    pub message: usize,
    pub promise_probability: f64,
    pub p_dist_numeric: f64,
    pub p_dist_upper: PDistBound,
    pub p_nfp_numeric: f64,
    /// `None` when the realized promise probability is below `1/M`.
    pub p_nfp_upper: Option<f64>,
}

/// Per-message detection metrics and their uniform average over messages.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectionReport {
    pub p_dist_numeric: f64,
    pub p_dist_upper: f64,
    pub p_nfp_numeric: f64,
    /// Average of the per-message bounds; `None` if any is undefined.
    pub p_nfp_upper: Option<f64>,
    pub per_message: Vec<MessageDetection>,
}

pub fn detect_message(scheme: &SealScheme, m: usize) -> Result<MessageDetection> {
    let promise = scheme.promise_probability(m)?;
    let nfp_upper = if promise >= 1.0 / scheme.num_messages() as f64 - FLOOR_TOL {
        Some(p_nfp_upper_bound(promise, scheme.num_messages())?)
    } else {
        None
    };
    Ok(MessageDetection {
        message: m,
        promise_probability: promise,
        p_dist_numeric: scheme.p_dist_numeric(m)?,
        p_dist_upper: p_dist_upper_bound(promise)?,
        p_nfp_numeric: scheme.p_nfp_numeric(m)?,
        p_nfp_upper: nfp_upper,
    })
}

pub fn detection_report(scheme: &SealScheme) -> Result<DetectionReport> {
    let per_message = (1..=scheme.num_messages())
        .map(|m| detect_message(scheme, m))
        .collect::<Result<Vec<_>>>()?;
    let n = per_message.len() as f64;
    let mean = |f: &dyn Fn(&MessageDetection) -> f64| per_message.iter().map(f).sum::<f64>() / n;
    let p_nfp_upper = per_message
        .iter()
        .map(|d| d.p_nfp_upper)
        .sum::<Option<f64>>()
        .map(|s| s / n);
    Ok(DetectionReport {
        p_dist_numeric: mean(&|d| d.p_dist_numeric),
        p_dist_upper: mean(&|d| d.p_dist_upper.clamped),
        p_nfp_numeric: mean(&|d| d.p_nfp_numeric),
        p_nfp_upper,
        per_message,
    })
}

/// Random valid scheme with `num_messages ≤ dim_b`.
///
/// Each message owns a random subset of a Haar-random basis of `B`; `F_i` is
/// a blend of that projector with a random PSD split of the identity, then
/// refined into 1–3 random pieces. `|ψ_m>` lives mostly on `A ⊗ supp(F_m)`
/// plus Gaussian noise, and `promised_p` is the smallest realized promise
/// probability. Draws are repeated until that exceeds `1/M`.
pub fn random_scheme<R: Rng + ?Sized>(
    num_messages: usize,
    dim_a: usize,
    dim_b: usize,
    rng: &mut R,
) -> Result<SealScheme> {
    if num_messages < 2 || num_messages > dim_b {
        return Err(out_of_range("M", num_messages as f64, "2..=dimB"));
    }
    loop {
        let u = random_unitary(dim_b, rng);
        let mut owner: Vec<usize> = (1..=num_messages)
            .chain((num_messages..dim_b).map(|_| rng.random_range(1..=num_messages)))
            .collect();
        owner.shuffle(rng);
        let column = |c: usize| -> Vec<C64> { (0..dim_b).map(|r| u[(r, c)]).collect() };

        let blend: f64 = rng.random_range(0.0..0.3);
        let noise = split_psd(&ComplexMatrix::identity(dim_b), num_messages, rng)?;
        let mut elements = Vec::new();
        for (i, noise_i) in (1..=num_messages).zip(&noise) {
            let mut proj = ComplexMatrix::zeros(dim_b, dim_b);
            for c in (0..dim_b).filter(|&c| owner[c] == i) {
                let v = column(c);
                proj = &proj + &ComplexMatrix::outer(&v, &v);
            }
            let f = &proj.scale_real(1.0 - blend) + &noise_i.scale_real(blend);
            let pieces = rng.random_range(1..=3);
            for (j, piece) in split_psd(&f, pieces, rng)?.into_iter().enumerate() {
                elements.push((OutcomeLabel::Pair(i, j + 1), piece));
            }
        }
        let povm = Povm::new(elements)?;

        let n = dim_a * dim_b;
        let noise_level: f64 = rng.random_range(0.0..0.2);
        let states = (1..=num_messages)
            .map(|m| {
                let mut amps = vec![C64::new(0.0, 0.0); n];
                for a in 0..dim_a {
                    let weight = complex_gaussian(rng);
                    for c in (0..dim_b).filter(|&c| owner[c] == m) {
                        let coeff = weight * complex_gaussian(rng);
                        for r in 0..dim_b {
                            amps[a * dim_b + r] += coeff * u[(r, c)];
                        }
                    }
                }
                let scale = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in amps.iter_mut() {
                    *z = *z / scale.max(1e-300)
                        + complex_gaussian(rng) * (noise_level / (n as f64).sqrt());
                }
                PureState::normalized(amps)
            })
            .collect::<Result<Vec<_>>>()?;

        let draft = SealScheme::without_promise(num_messages, dim_a, dim_b, states, povm, 1.0)?;
        let promised = (1..=num_messages)
            .map(|m| draft.promise_probability(m))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(1.0, f64::min);
        if promised > 1.0 / num_messages as f64 {
            let SealScheme {
                joint_states,
                bob_povm,
                ..
            } = draft;
            return SealScheme::new(num_messages, dim_a, dim_b, joint_states, bob_povm, promised);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{densify, standard_implementation, unknown_outcome_state};
    use crate::rng::RngStream;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis_povm() -> Povm {
        Povm::new(vec![
            (
                OutcomeLabel::Pair(1, 1),
                ComplexMatrix::from_real_diag(&[1.0, 0.0]),
            ),
            (
                OutcomeLabel::Pair(2, 1),
                ComplexMatrix::from_real_diag(&[0.0, 1.0]),
            ),
        ])
        .unwrap()
    }

    fn qubit_family(p: f64) -> SealScheme {
        let a = p.sqrt();
        let b = (1.0 - p).sqrt();
        let states = vec![
            PureState::new(vec![c(a, 0.0), c(b, 0.0)]).unwrap(),
            PureState::new(vec![c(b, 0.0), c(a, 0.0)]).unwrap(),
        ];
        SealScheme::new(2, 1, 2, states, basis_povm(), p).unwrap()
    }

    #[test]
    fn promise_on_eigenstates() {
        let states = vec![
            PureState::basis(2, 0).unwrap(),
            PureState::basis(2, 1).unwrap(),
        ];
        let s = SealScheme::new(2, 1, 2, states, basis_povm(), 1.0).unwrap();
        assert_eq!(s.promise_probability(1).unwrap(), 1.0);
        assert_eq!(s.promise_probability(2).unwrap(), 1.0);
        assert!(s.promise_probability(3).is_err());
        assert_eq!(s.p_dist_numeric(1).unwrap(), 0.5);
        assert_eq!(s.p_nfp_numeric(2).unwrap(), 0.0);
    }

    #[test]
    fn promise_on_qubit_family() {
        let s = qubit_family(0.75);
        assert!((s.promise_probability(1).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn uniform_povm_gives_chance_level() {
        let m = 3;
        let povm = Povm::new(
            (1..=m)
                .map(|i| {
                    (
                        OutcomeLabel::Pair(i, 1),
                        ComplexMatrix::identity(2).scale_real(1.0 / m as f64),
                    )
                })
                .collect(),
        )
        .unwrap();
        let states = vec![
            PureState::basis(2, 0).unwrap(),
            PureState::basis(2, 1).unwrap(),
            PureState::normalized(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap(),
        ];
        let s = SealScheme::without_promise(m, 1, 2, states.clone(), povm.clone(), 0.5).unwrap();
        for k in 1..=m {
            assert!((s.promise_probability(k).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!(matches!(
            SealScheme::new(m, 1, 2, states, povm, 0.5),
            Err(Error::PromiseViolation { message: 1, .. })
        ));
    }

    #[test]
    fn trivial_coarse_povm_returns_state_unchanged() {
        let e = ComplexMatrix::from_real_rows(&[&[0.6, 0.2], &[0.2, 0.3]]);
        let rest = &ComplexMatrix::identity(2) - &e;
        let povm = Povm::new(vec![
            (OutcomeLabel::Pair(1, 1), e),
            (OutcomeLabel::Pair(1, 2), rest),
        ])
        .unwrap();
        let psi = PureState::normalized(vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.5, 0.0), c(0.1, -0.6)])
            .unwrap();
        let states = vec![psi.clone(), psi.clone()];
        let s = SealScheme::without_promise(2, 2, 2, states, povm, 1.0).unwrap();
        let cheat = s.coarse_cheat_state(1).unwrap();
        assert!(cheat.matrix().max_abs_diff(densify(&psi).matrix()) < 1e-14);
        assert!((s.p_dist_numeric(1).unwrap() - 0.5).abs() < 1e-14);
        assert!(s.p_nfp_numeric(1).unwrap() < 1e-14);
    }

    #[test]
    fn qubit_family_cheat_is_dephased() {
        let p = 0.75;
        let s = qubit_family(p);
        let cheat = s.coarse_cheat_state(1).unwrap();
        assert!(
            cheat
                .matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[p, 1.0 - p]))
                < 1e-15
        );
        // <ψ1|√E1|ψ1> = p and <ψ1|√E2|ψ1> = 1 − p for the projective POVM.
        let oracle = 1.0 - p * p - (1.0 - p) * (1.0 - p);
        assert!((s.p_nfp_numeric(1).unwrap() - oracle).abs() < 1e-15);
        assert!((s.p_nfp_numeric(1).unwrap() - 0.375).abs() < 1e-15);
        // ‖Z(p) − |ψ1><ψ1|‖₁ = 2√(p(1−p)) from the 2x2 off-diagonal eigenvalues.
        let expected = 0.5 + 0.25 * 2.0 * (p * (1.0 - p)).sqrt();
        assert!((s.p_dist_numeric(1).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn cheat_matches_mixture_oracle_on_random_schemes() {
        let stream = RngStream::from_seed(99);
        for k in 0..10 {
            let mut rng = stream.split(k).rng();
            let s = random_scheme(2, 1, 4, &mut rng).unwrap();
            for m in 1..=2 {
                let cheat = s.coarse_cheat_state(m).unwrap();
                // Oracle: collapse per outcome, then mix by probability.
                let rho = densify(s.joint_state(m).unwrap());
                let mut mixture = ComplexMatrix::zeros(4, 4);
                for o in standard_implementation(&rho, s.coarse_povm()).unwrap() {
                    if let Some(post) = o.post_state {
                        mixture = &mixture + &post.matrix().scale_real(o.probability);
                    }
                }
                assert!(cheat.matrix().max_abs_diff(&mixture) < 1e-10);
                let lifted = unknown_outcome_state(&rho, &s.lifted_coarse_povm().unwrap()).unwrap();
                assert!(cheat.matrix().max_abs_diff(lifted.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn orthogonal_collapse_is_nearly_certain_detection() {
        // A single qubit |+> read with a two-message standard-basis POVM on
        // one register collapses orthogonally per branch.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let s = SealScheme::without_promise(2, 1, 2, vec![plus.clone(), plus], basis_povm(), 0.5)
            .unwrap();
        let d = s.p_dist_numeric(1).unwrap();
        assert!((d - 0.75).abs() < 1e-14);
        assert!((s.p_nfp_numeric(1).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn upper_bound_values() {
        let b = p_dist_upper_bound(1.0).unwrap();
        assert_eq!((b.raw, b.clamped), (0.5, 0.5));
        assert_eq!(p_dist_upper_bound(0.75).unwrap().raw, 0.8125);
        let b = p_dist_upper_bound(0.0).unwrap();
        assert_eq!((b.raw, b.clamped), (1.25, 1.0));
        assert!(p_dist_upper_bound(1.1).is_err());

        assert_eq!(p_nfp_upper_bound(1.0, 2).unwrap(), 0.0);
        assert_eq!(p_nfp_upper_bound(0.5, 2).unwrap(), 0.5);
        let v = p_nfp_upper_bound(0.1, 1_000_000).unwrap();
        assert!((v - 0.99).abs() < 1e-6);
        assert!(p_nfp_upper_bound(0.4, 2).is_err());
        assert!(p_nfp_upper_bound(0.5, 1).is_err());
    }

    #[test]
    fn monotonicity_cases() {
        assert!(monotonicity_check(&[0.5, 0.75, 1.0], 2).unwrap());
        assert!(monotonicity_check(&[0.25, 0.5, 1.0], 4).unwrap());
        assert!(monotonicity_check(&[0.1, 0.4], 2).is_err());
        assert!(!monotonicity_check(&[1.0, 0.5], 2).unwrap());
    }

    #[test]
    fn report_averages_messages() {
        let s = qubit_family(0.8);
        let r = detection_report(&s).unwrap();
        let mean = (r.per_message[0].p_nfp_numeric + r.per_message[1].p_nfp_numeric) / 2.0;
        assert_eq!(r.p_nfp_numeric, mean);
        assert!(r.p_nfp_upper.is_some());
    }

    #[test]
    fn structural_validation() {
        let states = vec![
            PureState::basis(2, 0).unwrap(),
            PureState::basis(2, 1).unwrap(),
        ];
        assert!(SealScheme::new(2, 1, 3, states.clone(), basis_povm(), 1.0).is_err());
        assert!(SealScheme::new(2, 1, 2, states[..1].to_vec(), basis_povm(), 1.0).is_err());
        assert!(SealScheme::new(2, 1, 2, states.clone(), Povm::standard_basis(2), 1.0).is_err());
        assert!(SealScheme::new(2, 1, 2, states.clone(), basis_povm(), 0.4).is_err());
        let wrong_message = Povm::new(vec![
            (
                OutcomeLabel::Pair(1, 1),
                ComplexMatrix::from_real_diag(&[1.0, 0.0]),
            ),
            (
                OutcomeLabel::Pair(3, 1),
                ComplexMatrix::from_real_diag(&[0.0, 1.0]),
            ),
        ])
        .unwrap();
        assert!(SealScheme::new(2, 1, 2, states, wrong_message, 1.0).is_err());
    }

    #[test]
    fn random_schemes_are_valid() {
        let stream = RngStream::from_seed(5);
        for k in 0..20 {
            let mut rng = stream.split(k).rng();
            let m = 2 + (k as usize % 3);
            let s = random_scheme(m, 1 + k as usize % 3, 4 + k as usize % 5, &mut rng).unwrap();
            assert!(s.promised_p() > 1.0 / m as f64);
        }
    }
}
