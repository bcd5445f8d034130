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

//! Gentle measurement bounds.
//!
//! If some POVM element `E_j` has `tr(E_j ρ) ≥ 1 − ε`, then
//!
//! - recording outcome `j` disturbs `ρ` by at most `‖ρ − √E_j ρ √E_j‖₁ ≤ 2√ε`;
//! - not recording the outcome disturbs it by at most
//!   `‖ρ − Σ_i √E_i ρ √E_i‖₁ ≤ 2√ε + ε`.
//!
//! The second bound follows from the first by the triangle inequality plus the
//! identity `Σ_{i≠j} ‖√E_i ρ √E_i‖₁ = Σ_{i≠j} tr(E_i ρ) = 1 − tr(E_j ρ)`.
//! [`verify_instance`] evaluates every link of that chain numerically.

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{out_of_range, Error, Result};
use crate::matcore::{hermitian_eigendecomp, trace_norm, ComplexMatrix};
use crate::qstate::{unknown_outcome_state, DensityMatrix, OutcomeLabel, Povm};
use crate::random::{random_density, random_psd, split_psd};
use crate::rng::RngStream;

/// Slack allowed when checking a bound numerically.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Slack allowed on the exact proof identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Largest dimension [`random_instance`] will generate.
pub const MAX_INSTANCE_DIM: usize = 64;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..=1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(out_of_range("epsilon", epsilon, "[0, 1]"))
    }
}

/// `2√ε`.
pub fn classic_bound(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(2.0 * epsilon.sqrt())
}

/// `2√ε + ε`.
pub fn unknown_outcome_bound(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(2.0 * epsilon.sqrt() + epsilon)
}

/// A state, a POVM and the element that dominates it.
#[derive(Clone, Debug)]
pub struct GentleInstance {
    pub rho: DensityMatrix,
    pub povm: Povm,
    pub dominant: OutcomeLabel,
    /// `1 − tr(E_dominant ρ)`, clamped to `[0, 1]`.
    pub epsilon: f64,
}

impl GentleInstance {
    pub fn new(rho: DensityMatrix, povm: Povm, dominant: OutcomeLabel) -> Result<Self> {
        if rho.dim() != povm.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state of dim {} with POVM on dim {}",
                rho.dim(),
                povm.dim()
            )));
        }
        let e = povm
            .element(dominant)
            .ok_or_else(|| Error::InvalidPovm(format!("no element labelled {dominant}")))?;
        let overlap = e.trace_of_product(rho.matrix())?.re;
        let epsilon = (1.0 - overlap).clamp(0.0, 1.0);
        Ok(Self {
            rho,
            povm,
            dominant,
            epsilon,
        })
    }

    /// JSON dump of the instance, for diagnostics.
    pub fn to_json(&self) -> serde_json::Value {
        let mat = |m: &ComplexMatrix| -> Vec<[f64; 2]> {
            m.as_slice().iter().map(|z| [z.re, z.im]).collect()
        };
        json!({
            "dim": self.rho.dim(),
            "epsilon": self.epsilon,
            "dominant": self.dominant,
            "rho": mat(self.rho.matrix()),
            "povm": self.povm.elements().iter().map(|(l, e)| json!({
                "label": l,
                "matrix": mat(e),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Numerical evaluation of both gentle-measurement bounds on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GentleReport {
    pub epsilon: f64,
    /// `‖ρ − √E_j ρ √E_j‖₁`.
    pub lhs_classic: f64,
    /// `‖ρ − Σ_i √E_i ρ √E_i‖₁`.
    pub lhs_unknown: f64,
    pub bound_classic: f64,
    pub bound_unknown: f64,
    /// `Σ_{i≠j} ‖√E_i ρ √E_i‖₁`.
    pub off_dominant_norms: f64,
    /// `Σ_{i≠j} tr(E_i ρ)`.
    pub off_dominant_weight: f64,
    pub satisfied_classic: bool,
    pub satisfied_unknown: bool,
}

impl GentleReport {
    pub fn slack_classic(&self) -> f64 {
        self.bound_classic - self.lhs_classic
    }

    pub fn slack_unknown(&self) -> f64 {
        self.bound_unknown - self.lhs_unknown
    }

    /// `|Σ_{i≠j} ‖√E_i ρ √E_i‖₁ − Σ_{i≠j} tr(E_i ρ)|`.
    pub fn norm_trace_residual(&self) -> f64 {
        (self.off_dominant_norms - self.off_dominant_weight).abs()
    }

    /// `|Σ_{i≠j} tr(E_i ρ) − (1 − tr(E_j ρ))|`.
    pub fn complement_residual(&self) -> f64 {
        (self.off_dominant_weight - self.epsilon).abs()
    }

    /// Excess of `lhs_unknown` over the triangle-inequality split.
    pub fn triangle_excess(&self) -> f64 {
        self.lhs_unknown - (self.lhs_classic + self.off_dominant_weight)
    }

    /// Every bound and proof step holds within the given tolerances.
    pub fn holds(&self, bound_tol: f64, identity_tol: f64) -> bool {
        self.slack_classic() >= -bound_tol
            && self.slack_unknown() >= -bound_tol
            && self.triangle_excess() <= bound_tol
            && self.off_dominant_weight <= self.epsilon + identity_tol
            && self.norm_trace_residual() <= identity_tol
            && self.complement_residual() <= identity_tol
    }
}

pub fn verify_instance(inst: &GentleInstance) -> Result<GentleReport> {
    let rho = inst.rho.matrix();
    let j = inst
        .povm
        .position(inst.dominant)
        .ok_or_else(|| Error::InvalidPovm(format!("no element labelled {}", inst.dominant)))?;
    let sandwich = |k: usize| {
        let root = inst.povm.root(k);
        (&(root * rho) * root).hermitian_part()
    };
    let lhs_classic = trace_norm(&(rho - &sandwich(j)))?;
    let unknown = unknown_outcome_state(&inst.rho, &inst.povm)?;
    let lhs_unknown = trace_norm(&(rho - unknown.matrix()))?;
    let mut off_dominant_norms = 0.0;
    let mut off_dominant_weight = 0.0;
    for (k, (_, e)) in inst.povm.elements().iter().enumerate() {
        if k == j {
            continue;
        }
        off_dominant_norms += trace_norm(&sandwich(k))?;
        off_dominant_weight += e.trace_of_product(rho)?.re;
    }
    let bound_classic = classic_bound(inst.epsilon)?;
    let bound_unknown = unknown_outcome_bound(inst.epsilon)?;
    Ok(GentleReport {
        epsilon: inst.epsilon,
        lhs_classic,
        lhs_unknown,
        bound_classic,
        bound_unknown,
        off_dominant_norms,
        off_dominant_weight,
        satisfied_classic: lhs_classic <= bound_classic + VIOLATION_TOL,
        satisfied_unknown: lhs_unknown <= bound_unknown + VIOLATION_TOL,
    })
}

/// Random instance whose realized `ε` lies in `[0, 2·epsilon_target]`.
///
/// `ρ` is pure or of random rank. The dominant element is
/// `(1−δ)·P + η·W`, where `P` projects onto the leading eigenvectors of `ρ`
/// (dropping at most `epsilon_target` of its weight), `δ ≤ epsilon_target`,
/// `η ≤ δ` and `W` is a random PSD matrix of unit spectral norm. The remainder
/// `I − E_j` is split into random PSD pieces for the other outcomes.
pub fn random_instance<R: Rng + ?Sized>(
    dim: usize,
    n_outcomes: usize,
    epsilon_target: f64,
    rng: &mut R,
) -> Result<GentleInstance> {
    if dim == 0 || dim > MAX_INSTANCE_DIM {
        return Err(Error::Capacity {
            requested: dim,
            max: MAX_INSTANCE_DIM,
        });
    }
    if n_outcomes < 2 {
        return Err(out_of_range("n_outcomes", n_outcomes as f64, ">= 2"));
    }
    if !(0.0..1.0).contains(&epsilon_target) {
        return Err(out_of_range("epsilon_target", epsilon_target, "[0, 1)"));
    }
    let rank = if rng.random_bool(0.5) {
        1
    } else {
        rng.random_range(1..=dim)
    };
    let rho = random_density(dim, rank, rng);
    let eig = hermitian_eigendecomp(&rho)?;

    let dominant_matrix = if epsilon_target == 0.0 {
        ComplexMatrix::identity(dim)
    } else {
        // Keep the top `kept` eigenvectors; the discarded tail weighs <= tail_budget.
        let tail_budget = epsilon_target * rng.random::<f64>();
        let mut kept = dim;
        let mut tail = 0.0;
        for &l in &eig.eigenvalues {
            if tail + l.max(0.0) > tail_budget || kept == 1 {
                break;
            }
            tail += l.max(0.0);
            kept -= 1;
        }
        let kept = rng.random_range(kept..=dim);
        let projector = eig.map_eigenvalues_indexed(|k| if k >= dim - kept { 1.0 } else { 0.0 });
        let delta = epsilon_target * rng.random_range(0.5..=1.0);
        let eta = delta * rng.random::<f64>();
        let w = random_psd(dim, rng);
        let w_norm = *hermitian_eigendecomp(&w)?
            .eigenvalues
            .last()
            .unwrap_or(&1.0);
        &projector.scale_real(1.0 - delta) + &w.scale_real(eta / w_norm)
    };
    let remainder = (&ComplexMatrix::identity(dim) - &dominant_matrix).hermitian_part();
    let pieces = split_psd(&remainder, n_outcomes - 1, rng)?;

    let j = rng.random_range(0..n_outcomes);
    let mut pieces = pieces.into_iter();
    let elements = (0..n_outcomes)
        .map(|k| {
            let m = if k == j {
                dominant_matrix.clone()
            } else {
                pieces.next().expect("n_outcomes - 1 pieces")
            };
            (OutcomeLabel::Index(k), m)
        })
        .collect();
    let povm = Povm::new(elements)?;
    GentleInstance::new(DensityMatrix::new(rho)?, povm, OutcomeLabel::Index(j))
}

/// One verified instance from a sweep.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub index: usize,
    pub epsilon_target: f64,
    pub instance: GentleInstance,
    pub report: GentleReport,
}

/// Generates and verifies `count` instances in parallel.
///
/// Instance `k` draws from `stream.split(k)`, so results do not depend on the
/// thread count. Targets are log-uniform in `[5e-5, 0.5]`.
pub fn sweep(
    dim: usize,
    n_outcomes: usize,
    count: usize,
    stream: &RngStream,
) -> Result<Vec<SweepEntry>> {
    (0..count)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream.split(index as u64).rng();
            let epsilon_target = 0.5 * 10f64.powf(-4.0 * rng.random::<f64>());
            let instance = random_instance(dim, n_outcomes, epsilon_target, &mut rng)?;
            let report = verify_instance(&instance)?;
            Ok(SweepEntry {
                index,
                epsilon_target,
                instance,
                report,
            })
        })
        .collect()
}
