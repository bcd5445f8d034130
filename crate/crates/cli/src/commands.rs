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

//! The commands behind each subcommand.

use std::fmt::Write as _;
use std::path::Path;

use qseal::achieve::{
    build_family, p_dist_lower_numeric, p_dist_lower_paper, returned_state, QubitSealFamily,
};
use qseal::gentle::{sweep, IDENTITY_TOL, MAX_INSTANCE_DIM};
use qseal::naive::{
    build_naive_scheme, detection_probability_naive, exact_mean_fidelity,
    simulate_qubitwise_attack, verify_nondisturbing, MAX_DENSE_Q,
};
use qseal::qstate::{densify, helstrom_probability};
use qseal::rng::RngStream;
use qseal::scheme_file::{load_scheme, scheme_to_string};
use qseal::seal::{detection_report, p_dist_upper_bound, p_nfp_upper_bound};
use qseal::DetectionReport;
use rand::Rng;

use crate::table::{format_float, Cell, CsvTable};
use crate::{CliError, Command, Result, RunConfig};

/// Printed alongside the two lower-bound columns.
pub const LOWER_BOUND_NOTE: &str = "note: p_dist_lower_paper is 1/2 + sqrt(2p(1-p))/4; \
p_dist_lower_numeric is 1/2 + ||Z(p) - |psi_1><psi_1|||_1/4 = 1/2 + sqrt(p(1-p))/2. \
The two use different trace-norm prefactors and are reported side by side without reconciling them.";

/// Upper bound on the distinguishing probability, lower bounds from the
/// qubit family. `p` sweeps `[0.5, 1]`.
pub fn cmd_bounds_fig1(config: &RunConfig) -> Result<CsvTable> {
    config.validate()?;
    let mut table = CsvTable::new([
        "p",
        "p_dist_upper",
        "p_dist_lower_paper",
        "p_dist_lower_numeric",
    ]);
    for p in config.grid(0.5, 1.0) {
        let numeric = if p > 0.5 {
            Some(p_dist_lower_numeric(p, 0.0)?)
        } else {
            None
        };
        table.push(vec![
            p.into(),
            p_dist_upper_bound(p)?.clamped.into(),
            p_dist_lower_paper(p).into(),
            numeric.into(),
        ]);
    }
    Ok(table)
}

/// No-false-positive detection bounds, one column per message count. `p`
/// sweeps `[0, 1]`; cells with `p < 1/M` are blank.
pub fn cmd_bounds_fig2(config: &RunConfig, ms: &[usize]) -> Result<CsvTable> {
    config.validate()?;
    if let Some(&m) = ms.iter().find(|&&m| m < 2) {
        return Err(CliError::Config(format!("M = {m} must be at least 2")));
    }
    let mut table = CsvTable::new(
        std::iter::once("p".to_string()).chain(ms.iter().map(|m| format!("p_nfp_upper_M{m}"))),
    );
    for p in config.grid(0.0, 1.0) {
        let mut row = vec![Cell::Float(p)];
        for &m in ms {
            row.push(if p >= 1.0 / m as f64 {
                p_nfp_upper_bound(p, m)?.into()
            } else {
                Cell::Blank
            });
        }
        table.push(row);
    }
    Ok(table)
}

/// Outcome of a gentle-measurement sweep.
#[derive(Clone, Debug)]
pub struct GentleRun {
    pub table: CsvTable,
    pub instances: usize,
    /// Instances where either bound fails by more than the tolerance.
    pub bound_violations: usize,
    /// Instances where a proof identity or the triangle step fails.
    pub identity_violations: usize,
    /// `(min, max)` of `bound − lhs` for the recorded-outcome bound.
    pub slack_classic: Option<(f64, f64)>,
    /// `(min, max)` of `bound − lhs` for the unknown-outcome bound.
    pub slack_unknown: Option<(f64, f64)>,
    pub max_identity_residual: f64,
    /// JSON dumps of failing instances.
    pub offending: Vec<serde_json::Value>,
}

impl GentleRun {
    pub fn passed(&self) -> bool {
        self.bound_violations == 0 && self.identity_violations == 0
    }
}

fn widen(range: Option<(f64, f64)>, x: f64) -> Option<(f64, f64)> {
    Some(range.map_or((x, x), |(lo, hi)| (lo.min(x), hi.max(x))))
}

pub fn cmd_verify_gentle(
    config: &RunConfig,
    dim: usize,
    outcomes: usize,
    instances: usize,
) -> Result<GentleRun> {
    config.validate()?;
    if !(1..=MAX_INSTANCE_DIM).contains(&dim) {
        return Err(CliError::Config(format!(
            "dim = {dim} must lie in 1..={MAX_INSTANCE_DIM}"
        )));
    }
    if outcomes < 2 {
        return Err(CliError::Config(format!(
            "outcomes = {outcomes} must be at least 2"
        )));
    }
    let stream =
        RngStream::from_seed(config.seed).derive("verify gentle", &[dim as u64, outcomes as u64]);
    let entries = sweep(dim, outcomes, instances, &stream)?;

    let mut table = CsvTable::new([
        "index",
        "epsilon_target",
        "epsilon",
        "lhs_classic",
        "bound_classic",
        "slack_classic",
        "lhs_unknown",
        "bound_unknown",
        "slack_unknown",
        "triangle_excess",
        "norm_trace_residual",
        "complement_residual",
        "classic_ok",
        "unknown_ok",
        "identities_ok",
    ]);
    let tol = config.tolerance;
    let mut run = GentleRun {
        table: CsvTable::new(Vec::<String>::new()),
        instances,
        bound_violations: 0,
        identity_violations: 0,
        slack_classic: None,
        slack_unknown: None,
        max_identity_residual: 0.0,
        offending: Vec::new(),
    };
    for e in &entries {
        let r = &e.report;
        let classic_ok = r.slack_classic() >= -tol;
        let unknown_ok = r.slack_unknown() >= -tol;
        let residual = r.norm_trace_residual().max(r.complement_residual());
        let identities_ok = residual <= IDENTITY_TOL && r.triangle_excess() <= tol;
        run.slack_classic = widen(run.slack_classic, r.slack_classic());
        run.slack_unknown = widen(run.slack_unknown, r.slack_unknown());
        run.max_identity_residual = run.max_identity_residual.max(residual);
        if !(classic_ok && unknown_ok) {
            run.bound_violations += 1;
        }
        if !identities_ok {
            run.identity_violations += 1;
        }
        if !(classic_ok && unknown_ok && identities_ok) {
            let mut dump = e.instance.to_json();
            dump["index"] = e.index.into();
            run.offending.push(dump);
        }
        table.push(vec![
            e.index.into(),
            e.epsilon_target.into(),
            r.epsilon.into(),
            r.lhs_classic.into(),
            r.bound_classic.into(),
            r.slack_classic().into(),
            r.lhs_unknown.into(),
            r.bound_unknown.into(),
            r.slack_unknown().into(),
            r.triangle_excess().into(),
            r.norm_trace_residual().into(),
            r.complement_residual().into(),
            classic_ok.into(),
            unknown_ok.into(),
            identities_ok.into(),
        ]);
    }
    run.table = table;
    Ok(run)
}

/// Permutation seeds of the naive scheme for `q`.
fn naive_seeds(config: &RunConfig, q: usize) -> (u64, u64) {
    let mut rng = RngStream::from_seed(config.seed)
        .derive("simulate naive/permutations", &[q as u64])
        .rng();
    (rng.random(), rng.random())
}

/// Qubit-wise attack on the permuted product-state seal, one row per message.
pub fn cmd_simulate_naive(config: &RunConfig, q: usize) -> Result<CsvTable> {
    config.validate()?;
    let (sigma_seed, tau_seed) = naive_seeds(config, q);
    let (s1, s2) = build_naive_scheme(q, sigma_seed, tau_seed)?;
    let nondisturbing = if q <= MAX_DENSE_Q {
        Cell::Bool(verify_nondisturbing(q, sigma_seed, tau_seed)?)
    } else {
        Cell::Blank
    };
    let mut table = CsvTable::new([
        "q",
        "m",
        "trials",
        "nondisturbing",
        "mc_mean_fidelity",
        "mc_stderr",
        "exact_fidelity",
        "detection_probability",
    ]);
    for s in [&s1, &s2] {
        let stream = RngStream::from_seed(config.seed)
            .derive("simulate naive/attack", &[q as u64, s.message() as u64]);
        let result = simulate_qubitwise_attack(s, config.trials, &stream)?;
        table.push(vec![
            q.into(),
            s.message().into(),
            config.trials.into(),
            nondisturbing.clone(),
            result.mean_fidelity.into(),
            result.fidelity_std_error.into(),
            exact_mean_fidelity(q).into(),
            detection_probability_naive(&result).into(),
        ]);
    }
    Ok(table)
}

/// The qubit family at `p`: promise probabilities, returned states, both lower
/// bounds and the spread of φ-dependent quantities over `grid_points` phases.
pub fn cmd_simulate_achieve(config: &RunConfig, p: f64) -> Result<CsvTable> {
    config.validate()?;
    QubitSealFamily::new(p, 0.0)?;
    let phases: Vec<f64> = (0..config.grid_points)
        .map(|k| std::f64::consts::TAU * k as f64 / config.grid_points as f64)
        .collect();
    let mut table = CsvTable::new([
        "p",
        "m",
        "promise_probability",
        "returned_00",
        "returned_11",
        "p_dist_lower_paper",
        "p_dist_lower_numeric",
        "phi_spread",
    ]);
    let scheme = build_family(p, 0.0)?;
    for m in 1..=2 {
        let mut reference: Option<(qseal::ComplexMatrix, f64)> = None;
        let mut spread: f64 = 0.0;
        for &phi in &phases {
            let family = QubitSealFamily::new(p, phi)?;
            let back = returned_state(&family, m)?;
            let lower = helstrom_probability(&back, &densify(&family.state(m)?))?;
            match &reference {
                None => reference = Some((back.into_matrix(), lower)),
                Some((r, l)) => {
                    spread = spread
                        .max(back.matrix().max_abs_diff(r))
                        .max((lower - l).abs());
                }
            }
        }
        let (back, lower) = reference.expect("at least two phases");
        table.push(vec![
            p.into(),
            m.into(),
            scheme.promise_probability(m)?.into(),
            back[(0, 0)].re.into(),
            back[(1, 1)].re.into(),
            p_dist_lower_paper(p).into(),
            lower.into(),
            spread.into(),
        ]);
    }
    Ok(table)
}

/// Detection metrics of a scheme file plus the table rows: one per message
/// and a final average row with a blank `m`.
pub fn cmd_seal_eval(
    config: &RunConfig,
    scheme_path: &Path,
) -> Result<(CsvTable, DetectionReport)> {
    config.validate()?;
    let scheme = load_scheme(scheme_path)?;
    let report = detection_report(&scheme)?;
    let mut table = CsvTable::new([
        "m",
        "promise_probability",
        "p_dist_numeric",
        "p_dist_upper",
        "p_nfp_numeric",
        "p_nfp_upper",
    ]);
    for d in &report.per_message {
        table.push(vec![
            d.message.into(),
            d.promise_probability.into(),
            d.p_dist_numeric.into(),
            d.p_dist_upper.clamped.into(),
            d.p_nfp_numeric.into(),
            d.p_nfp_upper.into(),
        ]);
    }
    let n = report.per_message.len() as f64;
    let mean_promise = report
        .per_message
        .iter()
        .map(|d| d.promise_probability)
        .sum::<f64>()
        / n;
    table.push(vec![
        Cell::Blank,
        mean_promise.into(),
        report.p_dist_numeric.into(),
        report.p_dist_upper.into(),
        report.p_nfp_numeric.into(),
        report.p_nfp_upper.into(),
    ]);
    Ok((table, report))
}

/// Scheme file text for the qubit family.
pub fn cmd_export_family(p: f64, phi: f64) -> Result<String> {
    Ok(scheme_to_string(&build_family(p, phi)?))
}

/// What a command hands back to the binary.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    /// CSV text, or a scheme file for `export`.
    pub data: String,
    pub summary: String,
    /// One entry per failed check; the exit status is nonzero when non-empty.
    pub failures: Vec<String>,
}

fn fmt_range(range: Option<(f64, f64)>) -> String {
    range.map_or("n/a".into(), |(lo, hi)| {
        format!("min {}, max {}", format_float(lo), format_float(hi))
    })
}

pub fn execute(config: &RunConfig, command: &Command) -> Result<CommandOutput> {
    config.validate()?;
    let mut summary = String::new();
    let mut failures = Vec::new();
    let data = match command {
        Command::BoundsFig1 => {
            let table = cmd_bounds_fig1(config)?;
            writeln!(summary, "bounds fig1: {} rows", table.rows().len()).unwrap();
            writeln!(summary, "{LOWER_BOUND_NOTE}").unwrap();
            table.to_csv()
        }
        Command::BoundsFig2 { ms } => {
            let table = cmd_bounds_fig2(config, ms)?;
            writeln!(
                summary,
                "bounds fig2: {} rows, M = {ms:?}",
                table.rows().len()
            )
            .unwrap();
            table.to_csv()
        }
        Command::VerifyGentle {
            dim,
            outcomes,
            instances,
        } => {
            let run = cmd_verify_gentle(config, *dim, *outcomes, *instances)?;
            writeln!(
                summary,
                "verify gentle: dim {dim}, {outcomes} outcomes, {} instances",
                run.instances
            )
            .unwrap();
            writeln!(summary, "bound violations: {}", run.bound_violations).unwrap();
            writeln!(summary, "identity violations: {}", run.identity_violations).unwrap();
            writeln!(
                summary,
                "slack 2*sqrt(eps): {}",
                fmt_range(run.slack_classic)
            )
            .unwrap();
            writeln!(
                summary,
                "slack 2*sqrt(eps)+eps: {}",
                fmt_range(run.slack_unknown)
            )
            .unwrap();
            writeln!(
                summary,
                "max identity residual: {}",
                format_float(run.max_identity_residual)
            )
            .unwrap();
            failures.extend(
                run.offending
                    .iter()
                    .map(|v| format!("violating instance: {v}")),
            );
            run.table.to_csv()
        }
        Command::SimulateNaive { q } => {
            let table = cmd_simulate_naive(config, *q)?;
            let exact = exact_mean_fidelity(*q);
            let k = table.column("nondisturbing").expect("column");
            for row in table.rows() {
                if row[k] == Cell::Bool(false) {
                    failures.push(format!("honest readout disturbs the state at q = {q}"));
                }
            }
            let mc = table.floats("mc_mean_fidelity").expect("column");
            let se = table.floats("mc_stderr").expect("column");
            for (m, (mean, err)) in mc.iter().zip(&se).enumerate() {
                let (mean, err) = (mean.unwrap(), err.unwrap());
                let z = if err > 0.0 {
                    (mean - exact).abs() / err
                } else {
                    0.0
                };
                writeln!(
                    summary,
                    "m = {}: mean fidelity {} ({} standard errors from {})",
                    m + 1,
                    format_float(mean),
                    format_float(z),
                    format_float(exact)
                )
                .unwrap();
            }
            table.to_csv()
        }
        Command::SimulateAchieve { p } => {
            let table = cmd_simulate_achieve(config, *p)?;
            let upper = p_dist_upper_bound(*p)?.clamped;
            let lower = table.floats("p_dist_lower_numeric").expect("column");
            let spread = table.floats("phi_spread").expect("column");
            for (l, s) in lower.iter().zip(&spread) {
                if l.unwrap() > upper + config.tolerance {
                    failures.push(format!(
                        "lower bound {} exceeds upper bound {}",
                        format_float(l.unwrap()),
                        format_float(upper)
                    ));
                }
                if s.unwrap() > config.tolerance {
                    failures.push(format!(
                        "phase spread {} exceeds tolerance",
                        format_float(s.unwrap())
                    ));
                }
            }
            writeln!(
                summary,
                "simulate achieve: p = {}, p_dist_upper = {}",
                format_float(*p),
                format_float(upper)
            )
            .unwrap();
            writeln!(summary, "{LOWER_BOUND_NOTE}").unwrap();
            table.to_csv()
        }
        Command::SealEval { scheme } => {
            let (table, report) = cmd_seal_eval(config, scheme)?;
            let tol = config.tolerance;
            for d in &report.per_message {
                if d.p_dist_numeric > d.p_dist_upper.clamped + tol {
                    failures.push(format!(
                        "message {}: p_dist exceeds its upper bound",
                        d.message
                    ));
                }
                if d.p_nfp_upper.is_some_and(|u| d.p_nfp_numeric > u + tol) {
                    failures.push(format!(
                        "message {}: p_nfp exceeds its upper bound",
                        d.message
                    ));
                }
            }
            writeln!(summary, "seal eval: {} messages", report.per_message.len()).unwrap();
            writeln!(
                summary,
                "average p_dist {} (upper {})",
                format_float(report.p_dist_numeric),
                format_float(report.p_dist_upper)
            )
            .unwrap();
            writeln!(
                summary,
                "average p_nfp {} (upper {})",
                format_float(report.p_nfp_numeric),
                report.p_nfp_upper.map_or("n/a".into(), format_float)
            )
            .unwrap();
            table.to_csv()
        }
        Command::ExportFamily { p, phi } => {
            writeln!(
                summary,
                "export family: p = {}, phi = {}",
                format_float(*p),
                format_float(*phi)
            )
            .unwrap();
            cmd_export_family(*p, *phi)?
        }
    };
    Ok(CommandOutput {
        data,
        summary,
        failures,
    })
}
