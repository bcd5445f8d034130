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

use thiserror::Error;

use crate::qstate::OutcomeLabel;

/// Errors raised by state construction, measurement and protocol analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dense dimension {requested} exceeds capacity {max}")]
    Capacity { requested: usize, max: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("state vector has norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("POVM mixes simple and paired outcome labels")]
    MixedLabels,

    #[error("duplicate outcome label {0}")]
    DuplicateLabel(OutcomeLabel),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("promise violated for message {message}: realized {realized}, promised {promised}")]
    PromiseViolation {
        message: usize,
        realized: f64,
        promised: f64,
    },

    #[error("invalid product state: {0}")]
    InvalidProductState(String),

    #[error("scheme file: {0}")]
    SchemeFormat(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, value: f64, range: &'static str) -> Error {
    Error::OutOfRange { name, value, range }
}
