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

//! The single-qubit, two-message seal family
//!
//! `|ψ₁> = √p|0> + e^{iφ}√(1−p)|1>`, `|ψ₂> = √(1−p)|0> + e^{iφ}√p|1>`, read
//! with the standard-basis projectors. Bob's best return after reading is the
//! centre of the φ-circle on the Bloch sphere, `Z(p)` (resp. `Z(1−p)`), which
//! is exactly what the unrecorded standard-basis measurement leaves behind.
//!
//! Two lower-bound values are reported side by side: the closed form
//! `1/2 + √(2p(1−p))/4`, and
//! `1/2 + ‖Z(p) − |ψ₁><ψ₁|‖₁/4` computed numerically with the Helstrom
//! factor. They differ because `‖Z(p) − |ψ₁><ψ₁|‖₁ = 2√(p(1−p))`; neither
//! is adjusted to match the other.

use crate::error::{out_of_range, Error, Result};
use crate::matcore::{trace_norm, ComplexMatrix, C64};
use crate::qstate::{densify, unknown_outcome_state, DensityMatrix, OutcomeLabel, Povm, PureState};
use crate::seal::SealScheme;

/// Parameters of the family: readout probability and relative phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitSealFamily {
    p: f64,
    phi: f64,
}

impl QubitSealFamily {
    pub fn new(p: f64, phi: f64) -> Result<Self> {
        if !(p > 0.5 && p <= 1.0) {
            return Err(out_of_range("p", p, "(0.5, 1]"));
        }
        if !(0.0..std::f64::consts::TAU).contains(&phi) {
            return Err(out_of_range("phi", phi, "[0, 2π)"));
        }
        Ok(Self { p, phi })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `|ψ_m>` for `m ∈ {1, 2}`.
    pub fn state(&self, m: usize) -> Result<PureState> {
        let (a, b) = match m {
            1 => (self.p.sqrt(), (1.0 - self.p).sqrt()),
            2 => ((1.0 - self.p).sqrt(), self.p.sqrt()),
            _ => return Err(out_of_range("m", m as f64, "{1, 2}")),
        };
        PureState::new(vec![C64::new(a, 0.0), C64::from_polar(b, self.phi)])
    }

    /// Standard-basis projectors labelled `(1,1)` and `(2,1)`.
    pub fn povm(&self) -> Povm {
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
        .expect("standard basis is a valid POVM")
    }
}

/// The family as a validated scheme with `dimA = 1`, `dimB = 2`, `M = 2`.
pub fn build_family(p: f64, phi: f64) -> Result<SealScheme> {
    let family = QubitSealFamily::new(p, phi)?;
    let states = vec![family.state(1)?, family.state(2)?];
    SealScheme::new(2, 1, 2, states, family.povm(), p)
}

/// `Z(x) = diag(x, 1 − x)`.
pub fn z_state(x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(out_of_range("x", x, "[0, 1]"));
    }
    DensityMatrix::new(ComplexMatrix::from_real_diag(&[x, 1.0 - x]))
}

/// State Bob hands back after the unrecorded standard-basis measurement.
pub fn returned_state(family: &QubitSealFamily, m: usize) -> Result<DensityMatrix> {
    let rho = densify(&family.state(m)?);
    unknown_outcome_state(&rho, &family.povm())
}

/// `1/2 + √(2p(1−p))/4`. Evaluates the closed form for any `p ∈ [0, 1]`.
pub fn p_dist_lower_paper(p: f64) -> f64 {
    0.5 + (2.0 * p * (1.0 - p)).sqrt() / 4.0
}

/// `1/2 + ‖Z(p) − |ψ₁><ψ₁|‖₁ / 4`.
pub fn p_dist_lower_numeric(p: f64, phi: f64) -> Result<f64> {
    let family = QubitSealFamily::new(p, phi)?;
    let psi = densify(&family.state(1)?);
    let z = z_state(p)?;
    Ok(0.5 + 0.25 * trace_norm(&(z.matrix() - psi.matrix()))?)
}

/// `(tr(ρX), tr(ρY), tr(ρZ))`.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch vector of a {}-dimensional state",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    Ok([
        2.0 * m[(0, 1)].re,
        -2.0 * m[(0, 1)].im,
        (m[(0, 0)] - m[(1, 1)]).re,
    ])
}

/// `(I + xX + yY + zZ) / 2`.
pub fn from_bloch(r: [f64; 3]) -> Result<DensityMatrix> {
    let [x, y, z] = r;
    DensityMatrix::new(ComplexMatrix::from_rows(&[
        &[C64::new((1.0 + z) / 2.0, 0.0), C64::new(x / 2.0, -y / 2.0)],
        &[C64::new(x / 2.0, y / 2.0), C64::new((1.0 - z) / 2.0, 0.0)],
    ]))
}
