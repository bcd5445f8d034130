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

//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "qseal",
    version,
    about = "Quantum seal bounds, simulations and verification"
)]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    group: Group,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance for bound checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Monte Carlo trials.
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: usize,
    /// Grid points for sweeps.
    #[arg(long, global = true, default_value_t = 101)]
    grid: usize,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Closed-form detection bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Randomized verification sweeps.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Protocol simulations.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Evaluate seal schemes.
    #[command(subcommand)]
    Seal(SealCmd),
    /// Write scheme files.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Debug, Subcommand)]
enum BoundsCmd {
    /// Distinguishing probability bounds over p in [0.5, 1].
    Fig1,
    /// No-false-positive detection bounds over p in [0, 1].
    Fig2 {
        /// Message count; repeat for several curves.
        #[arg(long = "M", default_values_t = [2usize, 4, 16, 256])]
        m: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Gentle measurement bounds on random instances.
    Gentle {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        outcomes: usize,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SimulateCmd {
    /// Permuted product-state seal under the qubit-wise attack.
    Naive {
        #[arg(long)]
        q: usize,
    },
    /// Two-message qubit family.
    Achieve {
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Subcommand)]
enum SealCmd {
    /// Detection metrics of a scheme file.
    Eval {
        #[arg(long)]
        scheme: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum ExportCmd {
    /// Scheme file of the two-message qubit family.
    Family {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
}

/// A fully parsed command.
#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    BoundsFig1,
    BoundsFig2 {
        ms: Vec<usize>,
    },
    VerifyGentle {
        dim: usize,
        outcomes: usize,
        instances: usize,
    },
    SimulateNaive {
        q: usize,
    },
    SimulateAchieve {
        p: f64,
    },
    SealEval {
        scheme: PathBuf,
    },
    ExportFamily {
        p: f64,
        phi: f64,
    },
}

impl Cli {
    pub fn into_parts(self) -> (RunConfig, Command) {
        let g = self.global;
        let config = RunConfig {
            seed: g.seed,
            output_path: g.out,
            tolerance: g.tol,
            trials: g.trials,
            grid_points: g.grid,
        };
        let command = match self.group {
            Group::Bounds(BoundsCmd::Fig1) => Command::BoundsFig1,
            Group::Bounds(BoundsCmd::Fig2 { m }) => Command::BoundsFig2 { ms: m },
            Group::Verify(VerifyCmd::Gentle {
                dim,
                outcomes,
                instances,
            }) => Command::VerifyGentle {
                dim,
                outcomes,
                instances,
            },
            Group::Simulate(SimulateCmd::Naive { q }) => Command::SimulateNaive { q },
            Group::Simulate(SimulateCmd::Achieve { p }) => Command::SimulateAchieve { p },
            Group::Seal(SealCmd::Eval { scheme }) => Command::SealEval { scheme },
            Group::Export(ExportCmd::Family { p, phi }) => Command::ExportFamily { p, phi },
        };
        (config, command)
    }
}
