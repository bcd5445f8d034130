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

//! Simulation and verification toolkit for quantum seals.
//!
//! A quantum seal hands Bob a state together with a measurement that reveals a
//! classical message. Alice later asks for the state back and tries to tell
//! whether Bob looked. This crate provides:
//!
//! - [`matcore`]: dense complex linear algebra (Kronecker products, partial
//!   traces, Hermitian eigendecomposition, PSD square roots, trace norms).
//! - [`qstate`]: states, POVMs, the standard measurement implementation and
//!   the unknown-outcome post-measurement state.
//! - [`gentle`]: the gentle measurement bounds and a numerical verifier.
//! - [`seal`]: seal schemes, Bob's coarse-grained cheat and Alice's detection
//!   metrics with their closed-form upper bounds.
//! - [`naive`]: the permuted product-state protocol and the attacks on it.
//! - [`achieve`]: the single-qubit two-message seal family.
//!
//! Randomized routines take explicit, splittable [`rng::RngStream`]s so every
//! result is reproducible from a single seed.

#![forbid(unsafe_code)]

pub mod achieve;
pub mod error;
pub mod gentle;
pub mod matcore;
pub mod naive;
pub mod qstate;
pub mod random;
pub mod rng;
pub mod scheme_file;
pub mod seal;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, HermitianEigen, Subsystem, C64};
pub use qstate::{DensityMatrix, MeasurementOutcome, OutcomeLabel, Povm, PureState};
pub use seal::{DetectionReport, SealScheme};
