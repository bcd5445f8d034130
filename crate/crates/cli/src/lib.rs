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

//! Experiment runner for the `qseal` library.
//!
//! Each command produces a [`CsvTable`] plus a short human-readable summary.
//! Randomized commands derive their streams from the master seed, the command
//! name and its parameters, so output depends only on the [`RunConfig`] and
//! the command arguments.

#![forbid(unsafe_code)]

pub mod args;
pub mod commands;
pub mod table;

use std::path::PathBuf;

pub use args::{Cli, Command};
pub use commands::{
    cmd_bounds_fig1, cmd_bounds_fig2, cmd_export_family, cmd_seal_eval, cmd_simulate_achieve,
    cmd_simulate_naive, cmd_verify_gentle, execute, CommandOutput, GentleRun,
};
pub use table::{format_float, Cell, CsvTable};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qseal::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// CSV destination; standard output when `None`.
    pub output_path: Option<PathBuf>,
    pub tolerance: f64,
    pub trials: usize,
    pub grid_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            output_path: None,
            tolerance: 1e-9,
            trials: 100_000,
            grid_points: 101,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Config(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.trials < 1 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.grid_points < 2 {
            return Err(CliError::Config("grid must have at least 2 points".into()));
        }
        Ok(())
    }

    /// `n` evenly spaced points from `lo` to `hi`, both endpoints exact.
    pub(crate) fn grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        let last = (self.grid_points - 1) as f64;
        (0..self.grid_points)
            .map(|k| {
                if k + 1 == self.grid_points {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / last
                }
            })
            .collect()
    }
}
