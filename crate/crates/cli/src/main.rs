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

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qseal_cli::{execute, Cli, CliError, CommandOutput, RunConfig};

fn emit(config: &RunConfig, out: &CommandOutput) -> qseal_cli::Result<()> {
    let io_err = |path: &std::path::Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    match &config.output_path {
        Some(path) => {
            std::fs::write(path, &out.data).map_err(io_err(path))?;
            print!("{}", out.summary);
        }
        None => {
            std::io::stdout()
                .write_all(out.data.as_bytes())
                .map_err(io_err("<stdout>".as_ref()))?;
            eprint!("{}", out.summary);
        }
    }
    for failure in &out.failures {
        eprintln!("FAIL {failure}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let (config, command) = Cli::parse().into_parts();
    let result = execute(&config, &command).and_then(|out| emit(&config, &out).map(|()| out));
    match result {
        Ok(out) if out.failures.is_empty() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
