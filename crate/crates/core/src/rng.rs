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

//! Splittable deterministic random streams.
//!
//! A stream is a 256-bit key. Children are derived by hashing the parent key
//! with a label and a parameter tuple, so any component can carve out
//! independent sub-streams without coordinating with the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Seed material for a reproducible random sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    key: [u8; 32],
}

impl RngStream {
    /// Root stream for a user-facing 64-bit seed.
    pub fn from_seed(seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"qseal/root");
        h.update(seed.to_le_bytes());
        Self {
            key: h.finalize().into(),
        }
    }

    /// Child stream for `(label, params)`.
    pub fn derive(&self, label: &str, params: &[u64]) -> Self {
        let mut h = Sha256::new();
        h.update(self.key);
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        h.update((params.len() as u64).to_le_bytes());
        for p in params {
            h.update(p.to_le_bytes());
        }
        Self {
            key: h.finalize().into(),
        }
    }

    /// Child stream number `id`.
    pub fn split(&self, id: u64) -> Self {
        self.derive("split", &[id])
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.key)
    }
}
