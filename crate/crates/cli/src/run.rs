//! Job orchestration and result files.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sobolev_hf::field::write_orbital_dump;
use sobolev_hf::molecule::{initial_guess, load_molecule, nuclear_repulsion};
use sobolev_hf::optim::{
    conjugate_gradient, scf_fixed_point, stationarity_residual, steepest_descent, HfObjective,
    HfPoint, OptimizerTrace, SolveError, TraceRow,
};
use sobolev_hf::{Grid, GuessSpec, HfProblem};

use crate::config::{GuessKind, RunConfig, SolverKind};
use crate::CliError;

pub const TRACE_HEADER: &str =
    "iter,energy,grad_h1,update_l2,alpha,beta,restart,energy_evals,wall_ms";
pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const ORBITAL_DIR: &str = "orbitals";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub energy_electronic: f64,
    pub energy_nuclear: f64,
    pub energy_total: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub energy_evaluations: usize,
    pub converged: bool,
    /// `‖A − 4ε‖_F / ‖ε‖_F` at the final point.
    pub a_minus_4eps_rel: f64,
}

/// What a finished job produced.
#[derive(Clone, Debug)]
pub struct JobReport {
    pub summary: Summary,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
    pub orbital_paths: Vec<PathBuf>,
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_row(row: &TraceRow) -> String {
    format!(
        "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e}",
        row.iter,
        row.energy,
        row.grad_h1,
        row.update_l2,
        row.alpha,
        row.beta,
        u8::from(row.restart),
        row.energy_evals,
        row.wall_ms
    )
}

/// Write the trace as CSV with 17 significant digits per float.
pub fn write_trace(trace: &OptimizerTrace, path: &Path) -> Result<(), CliError> {
    let mut out = String::with_capacity(128 * (trace.rows.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for row in &trace.rows {
        out.push_str(&format_row(row));
        out.push('\n');
    }
    fs::write(path, out).map_err(io_error(path))
}

/// Parse a trace written by [`write_trace`].
pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>, CliError> {
    let file = fs::File::open(path).map_err(io_error(path))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |line: usize, message: String| CliError::Trace {
        path: path.to_path_buf(),
        line,
        message,
    };
    match lines.next() {
        Some(Ok(h)) if h == TRACE_HEADER => {}
        Some(Ok(h)) => return Err(bad(1, format!("unexpected header `{h}`"))),
        Some(Err(e)) => return Err(io_error(path)(e)),
        None => return Err(bad(1, "empty file".into())),
    }
    let mut rows = vec![];
    for (i, line) in lines.enumerate() {
        let number = i + 2;
        let line = line.map_err(io_error(path))?;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 9 {
            return Err(bad(
                number,
                format!("expected 9 columns, found {}", cells.len()),
            ));
        }
        let real = |j: usize| {
            cells[j]
                .parse::<f64>()
                .map_err(|e| bad(number, format!("column {j}: {e}")))
        };
        let int = |j: usize| {
            cells[j]
                .parse::<usize>()
                .map_err(|e| bad(number, format!("column {j}: {e}")))
        };
        rows.push(TraceRow {
            iter: int(0)?,
            energy: real(1)?,
            grad_h1: real(2)?,
            update_l2: real(3)?,
            alpha: real(4)?,
            beta: real(5)?,
            restart: int(6)? != 0,
            energy_evals: int(7)?,
            wall_ms: real(8)?,
        });
    }
    Ok(rows)
}

pub fn write_summary(summary: &Summary, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    fs::write(path, text).map_err(io_error(path))
}

pub fn read_summary(path: &Path) -> Result<Summary, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    Ok(serde_json::from_str(&text)?)
}

struct Finished {
    point: HfPoint,
    converged: bool,
    trace: OptimizerTrace,
}

fn finish<A>(
    result: Result<sobolev_hf::optim::Solution<HfPoint, A>, SolveError>,
) -> Result<Finished, SolveError> {
    result.map(|s| Finished {
        point: s.point,
        converged: s.converged,
        trace: s.trace,
    })
}

/// Load the molecule, build the guess, run the solver and write the trace,
/// summary and (optionally) orbital dumps into the output directory.
///
/// A solver failure still writes the partial trace before the error is
/// returned.
pub fn run_job(config: &RunConfig) -> Result<JobReport, CliError> {
    config.validate()?;
    let path = &config.molecule_path;
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let molecule = load_molecule(&text).map_err(|source| CliError::Molecule {
        path: path.clone(),
        source,
    })?;
    let grid = Grid::new(config.box_length, config.points_per_axis)?;
    let softening = config.softening.unwrap_or(grid.spacing());
    let n = config
        .n_orbitals
        .unwrap_or(molecule.closed_shell_orbitals());
    let guess = match config.guess {
        GuessKind::Random => GuessSpec::random(config.seed),
        GuessKind::Atomic => GuessSpec::atomic(),
    };
    let energy_nuclear = nuclear_repulsion(&molecule)?;
    let problem = HfProblem::new(molecule.clone(), &grid, softening)?;
    let phi0 = initial_guess(&guess, &molecule, &grid, n)?;

    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(io_error(out))?;
    let trace_path = out.join(TRACE_FILE);

    let objective = HfObjective::new(&problem, config.manifold);
    let result = match config.solver {
        SolverKind::Scf => finish(scf_fixed_point(&problem, &phi0, &config.stop)),
        SolverKind::Steepest => finish(
            objective
                .point(&phi0)
                .map_err(|e| SolveError::new(e, OptimizerTrace::default()))
                .and_then(|x0| steepest_descent(&objective, x0, &config.line_search, &config.stop)),
        ),
        SolverKind::Cg => finish(
            objective
                .point(&phi0)
                .map_err(|e| SolveError::new(e, OptimizerTrace::default()))
                .and_then(|x0| {
                    conjugate_gradient(
                        &objective,
                        x0,
                        &config.line_search,
                        &config.cg,
                        &config.stop,
                    )
                }),
        ),
    };
    let mut finished = match result {
        Ok(f) => f,
        Err(mut e) => {
            if !config.wall_clock {
                zero_clock(&mut e.trace);
            }
            write_trace(&e.trace, &trace_path)?;
            return Err(CliError::Solver(e));
        }
    };
    if !config.wall_clock {
        zero_clock(&mut finished.trace);
    }
    write_trace(&finished.trace, &trace_path)?;

    let energy_electronic = finished.point.energy();
    let summary = Summary {
        energy_electronic,
        energy_nuclear,
        energy_total: energy_electronic + energy_nuclear,
        iterations: finished.trace.iterations(),
        restarts: finished.trace.restarts(),
        energy_evaluations: finished.trace.energy_evaluations(),
        converged: finished.converged,
        a_minus_4eps_rel: stationarity_residual(&finished.point, &problem)?,
    };
    let summary_path = out.join(SUMMARY_FILE);
    write_summary(&summary, &summary_path)?;

    let mut orbital_paths = vec![];
    if config.dump_orbitals {
        let dir = out.join(ORBITAL_DIR);
        for (i, f) in finished.point.orbitals().iter().enumerate() {
            orbital_paths.push(write_orbital_dump(&dir, i, f)?);
        }
    }
    Ok(JobReport {
        summary,
        trace_path,
        summary_path,
        orbital_paths,
    })
}

fn zero_clock(trace: &mut OptimizerTrace) {
    for row in &mut trace.rows {
        row.wall_ms = 0.0;
    }
}

/// One-line human summary for the terminal.
pub fn describe(report: &JobReport, mut w: impl Write) -> io::Result<()> {
    let s = &report.summary;
    writeln!(
        w,
        "{} after {} iterations: E_total = {:.12} (electronic {:.12}, nuclear {:.12}), |A - 4eps|/|eps| = {:.2e}",
        if s.converged { "converged" } else { "NOT converged" },
        s.iterations,
        s.energy_total,
        s.energy_electronic,
        s.energy_nuclear,
        s.a_minus_4eps_rel
    )
}
