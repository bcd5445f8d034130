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

//! Quantum states, POVMs and measurement implementations.
//!
//! Measuring `ρ` with outcome `E` under the standard implementation leaves
//! `√E ρ √E / tr(Eρ)`. When the outcome is not recorded the system is left in
//! `Σ_i √E_i ρ √E_i`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigendecomp, trace_norm, ComplexMatrix, C64, HERMITIAN_TOL};

/// Tolerance on `‖ψ‖ = 1` and `tr ρ = 1`.
pub const NORM_TOL: f64 = 1e-10;
/// Elementwise tolerance on `Σ E_i = I`.
pub const POVM_SUM_TOL: f64 = 1e-9;
/// Outcomes at or below this probability carry no post-measurement state.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Outcome label: a plain index `i` or a message/refinement pair `(i, j)`.
///
/// Ordering is lexicographic, with plain indices before pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OutcomeLabel {
    Index(usize),
    Pair(usize, usize),
}

impl OutcomeLabel {
    /// Message index: `i` for both `Index(i)` and `Pair(i, _)`.
    pub fn message(&self) -> usize {
        match *self {
            OutcomeLabel::Index(i) | OutcomeLabel::Pair(i, _) => i,
        }
    }
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeLabel::Index(i) => write!(f, "{i}"),
            OutcomeLabel::Pair(i, j) => write!(f, "({i},{j})"),
        }
    }
}

/// Unit vector, optionally split as `C^dim_a ⊗ C^dim_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Option<(usize, usize)>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch("empty state vector".into()));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes,
            dims: None,
        })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n.is_nan() || n <= 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn bipartite(amplitudes: Vec<C64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::new(amplitudes)?.with_dims(dim_a, dim_b)
    }

    pub fn with_dims(mut self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != self.amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "bipartition {dim_a}x{dim_b} of a length-{} state",
                self.amplitudes.len()
            )));
        }
        self.dims = Some((dim_a, dim_b));
        Ok(self)
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch(format!(
                "basis index {index} in dim {dim}"
            )));
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[index] = C64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, PSD, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and symmetrizes `matrix`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = hermitian_eigendecomp(&matrix)?.eigenvalues[0];
        if min < -HERMITIAN_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix })
    }

    /// For operators produced by trusted measurement maps.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(s: &PureState) -> Self {
        densify(s)
    }
}

/// `|ψ><ψ|`.
pub fn densify(state: &PureState) -> DensityMatrix {
    let a = state.amplitudes();
    DensityMatrix::from_trusted(ComplexMatrix::outer(a, a))
}

/// Positive operator-valued measure, kept in canonical label order.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<(OutcomeLabel, ComplexMatrix)>,
    roots: Vec<ComplexMatrix>,
}

impl Povm {
    /// Validates PSD elements summing to the identity; sorts by label.
    ///
    /// POVMs outside tolerance are rejected, never renormalized.
    pub fn new(mut elements: Vec<(OutcomeLabel, ComplexMatrix)>) -> Result<Self> {
        let Some((_, first)) = elements.first() else {
            return Err(Error::InvalidPovm("no elements".into()));
        };
        let dim = first.rows();
        elements.sort_by_key(|a| a.0);
        for pair in elements.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateLabel(pair[0].0));
            }
        }
        let mut roots = Vec::with_capacity(elements.len());
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (label, e) in elements.iter_mut() {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "element {label} is {}x{}, expected {dim}x{dim}",
                    e.rows(),
                    e.cols()
                )));
            }
            let dev = e.hermitian_deviation();
            if dev > HERMITIAN_TOL {
                return Err(Error::InvalidPovm(format!(
                    "element {label} deviates from Hermitian by {dev:e}"
                )));
            }
            *e = e.hermitian_part();
            let eig = hermitian_eigendecomp(e)?;
            if eig.eigenvalues[0] < -HERMITIAN_TOL {
                return Err(Error::InvalidPovm(format!(
                    "element {label} has eigenvalue {:e}",
                    eig.eigenvalues[0]
                )));
            }
            roots.push(eig.map_eigenvalues(|l| l.max(0.0).sqrt()));
            sum = &sum + e;
        }
        let gap = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if gap > POVM_SUM_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {gap:e}"
            )));
        }
        Ok(Self { elements, roots })
    }

    /// `{|k><k|}` labelled `Index(k)`.
    pub fn standard_basis(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|k| {
                let mut d = vec![0.0; dim];
                d[k] = 1.0;
                (OutcomeLabel::Index(k), ComplexMatrix::from_real_diag(&d))
            })
            .collect();
        Self::new(elements).expect("standard basis is a valid POVM")
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[(OutcomeLabel, ComplexMatrix)] {
        &self.elements
    }

    pub fn labels(&self) -> impl Iterator<Item = OutcomeLabel> + '_ {
        self.elements.iter().map(|(l, _)| *l)
    }

    pub fn element(&self, label: OutcomeLabel) -> Option<&ComplexMatrix> {
        self.position(label).map(|k| &self.elements[k].1)
    }

    /// PSD square root of the `k`-th element in canonical order.
    pub fn root(&self, k: usize) -> &ComplexMatrix {
        &self.roots[k]
    }

    pub fn position(&self, label: OutcomeLabel) -> Option<usize> {
        self.elements.binary_search_by(|(l, _)| l.cmp(&label)).ok()
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state of dim {} measured with a POVM on dim {}",
                rho.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Result of one outcome of the standard implementation.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub label: OutcomeLabel,
    pub probability: f64,
    /// `None` when `probability <= ZERO_PROBABILITY`.
    pub post_state: Option<DensityMatrix>,
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `tr(E_i ρ)` for every outcome, in label order.
pub fn measure_probabilities(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<(OutcomeLabel, f64)>> {
    povm.check_dim(rho)?;
    povm.elements
        .iter()
        .map(|(label, e)| {
            Ok((
                *label,
                clamp_probability(e.trace_of_product(rho.matrix())?.re),
            ))
        })
        .collect()
}

/// `√E ρ √E` (unnormalized).
fn sandwich(root: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    (&(root * rho) * root).hermitian_part()
}

/// Outcome probabilities and collapsed states of the standard implementation.
pub fn standard_implementation(
    rho: &DensityMatrix,
    povm: &Povm,
) -> Result<Vec<MeasurementOutcome>> {
    povm.check_dim(rho)?;
    Ok(povm
        .elements
        .iter()
        .zip(&povm.roots)
        .map(|((label, _), root)| {
            let unnormalized = sandwich(root, rho.matrix());
            let p = unnormalized.trace().re;
            if p > ZERO_PROBABILITY {
                MeasurementOutcome {
                    label: *label,
                    probability: clamp_probability(p),
                    post_state: Some(DensityMatrix::from_trusted(
                        unnormalized.scale_real(1.0 / p),
                    )),
                }
            } else {
                MeasurementOutcome {
                    label: *label,
                    probability: 0.0,
                    post_state: None,
                }
            }
        })
        .collect())
}

/// `Σ_i √E_i ρ √E_i`: the state after a measurement whose outcome is unknown.
pub fn unknown_outcome_state(rho: &DensityMatrix, povm: &Povm) -> Result<DensityMatrix> {
    povm.check_dim(rho)?;
    let dim = rho.dim();
    let sum = povm
        .roots
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, root| {
            &acc + &sandwich(root, rho.matrix())
        });
    Ok(DensityMatrix::from_trusted(sum))
}

/// Merges `(i, j)` elements into `F_i = Σ_j E_{i,j}` labelled `Index(i)`.
pub fn coarse_grain(povm: &Povm) -> Result<Povm> {
    let mut merged: Vec<(OutcomeLabel, ComplexMatrix)> = Vec::new();
    for (label, e) in &povm.elements {
        let OutcomeLabel::Pair(i, _) = *label else {
            return Err(Error::MixedLabels);
        };
        match merged.last_mut() {
            Some((OutcomeLabel::Index(prev), acc)) if *prev == i => *acc = &*acc + e,
            _ => merged.push((OutcomeLabel::Index(i), e.clone())),
        }
    }
    Povm::new(merged)
}

/// Optimal success probability for telling `ρ` from `σ` with equal priors:
/// `1/2 + ‖ρ − σ‖₁ / 4`.
pub fn helstrom_probability(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok((0.5 + 0.25 * trace_norm(&diff)?).clamp(0.5, 1.0))
}

/// Draws one outcome by inverse CDF over the canonical label order.
pub fn sample_outcome<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    povm: &Povm,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let mut outcomes = standard_implementation(rho, povm)?;
    let u: f64 = rng.random();
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut chosen = None;
    for (k, o) in outcomes.iter().enumerate() {
        if o.probability <= 0.0 {
            continue;
        }
        acc += o.probability;
        chosen = Some(k);
        if target < acc {
            break;
        }
    }
    let k = chosen.expect("a valid POVM has a positive-probability outcome");
    Ok(outcomes.swap_remove(k))
}
