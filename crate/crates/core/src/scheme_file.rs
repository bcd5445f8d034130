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

//! JSON scheme files.
//!
//! ```json
//! {
//!   "M": 2,
//!   "dimA": 1,
//!   "dimB": 2,
//!   "promised_p": 7.5000000000000000e-1,
//!   "states": [[[re, im], ...], ...],
//!   "povm": [{"label": [1, 1], "matrix": [[re, im], ...]}, ...]
//! }
//! ```
//!
//! `states` holds `M` joint vectors in computational-basis order over
//! `A ⊗ B`; each POVM matrix is row-major `dimB × dimB`. Writers emit 17
//! significant digits so values survive a round trip bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, C64};
use crate::qstate::{OutcomeLabel, Povm, PureState};
use crate::seal::SealScheme;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeDoc {
    #[serde(rename = "M")]
    num_messages: usize,
    #[serde(rename = "dimA")]
    dim_a: usize,
    #[serde(rename = "dimB")]
    dim_b: usize,
    promised_p: f64,
    states: Vec<Vec<[f64; 2]>>,
    povm: Vec<PovmEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PovmEntry {
    label: [usize; 2],
    matrix: Vec<[f64; 2]>,
}

fn complex_vec(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

/// Parses and fully validates a scheme, including the promise.
pub fn parse_scheme(text: &str) -> Result<SealScheme> {
    let doc: SchemeDoc = serde_json::from_str(text)?;
    if doc.states.len() != doc.num_messages {
        return Err(Error::SchemeFormat(format!(
            "{} states listed for M = {}",
            doc.states.len(),
            doc.num_messages
        )));
    }
    let states = doc
        .states
        .iter()
        .enumerate()
        .map(|(k, s)| {
            PureState::new(complex_vec(s))
                .map_err(|e| Error::SchemeFormat(format!("state {}: {e}", k + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let elements = doc
        .povm
        .iter()
        .map(|entry| {
            let [i, j] = entry.label;
            let m = ComplexMatrix::new(doc.dim_b, doc.dim_b, complex_vec(&entry.matrix))
                .map_err(|e| Error::SchemeFormat(format!("POVM element ({i},{j}): {e}")))?;
            Ok((OutcomeLabel::Pair(i, j), m))
        })
        .collect::<Result<Vec<_>>>()?;
    let povm = Povm::new(elements)?;
    SealScheme::new(
        doc.num_messages,
        doc.dim_a,
        doc.dim_b,
        states,
        povm,
        doc.promised_p,
    )
}

pub fn load_scheme(path: impl AsRef<Path>) -> Result<SealScheme> {
    parse_scheme(&std::fs::read_to_string(path)?)
}

fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn pairs(values: &[C64]) -> String {
    let items: Vec<String> = values
        .iter()
        .map(|z| format!("[{}, {}]", num(z.re), num(z.im)))
        .collect();
    format!("[{}]", items.join(", "))
}

/// Serializes a scheme in the documented layout.
pub fn scheme_to_string(scheme: &SealScheme) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"M\": {},", scheme.num_messages());
    let _ = writeln!(out, "  \"dimA\": {},", scheme.dim_a());
    let _ = writeln!(out, "  \"dimB\": {},", scheme.dim_b());
    let _ = writeln!(out, "  \"promised_p\": {},", num(scheme.promised_p()));
    out.push_str("  \"states\": [\n");
    let states: Vec<String> = scheme
        .joint_states()
        .iter()
        .map(|s| format!("    {}", pairs(s.amplitudes())))
        .collect();
    out.push_str(&states.join(",\n"));
    out.push_str("\n  ],\n  \"povm\": [\n");
    let elements: Vec<String> = scheme
        .bob_povm()
        .elements()
        .iter()
        .map(|(label, m)| {
            let (i, j) = match *label {
                OutcomeLabel::Pair(i, j) => (i, j),
                OutcomeLabel::Index(i) => (i, 1),
            };
            format!(
                "    {{\"label\": [{i}, {j}], \"matrix\": {}}}",
                pairs(m.as_slice())
            )
        })
        .collect();
    out.push_str(&elements.join(",\n"));
    out.push_str("\n  ]\n}\n");
    out
}

pub fn save_scheme(scheme: &SealScheme, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, scheme_to_string(scheme))?;
    Ok(())
}
