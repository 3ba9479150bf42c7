//! Command-line front end for the convolved-action oscillator solver:
//! trajectory CSV, table reproduction and the stability report.

pub mod config;
mod error;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use convfem::{
    amplification_eigenvalues, exact_solution, fem_trajectory, march_mesh, stability_limit,
    uniform_mesh, Forcing, OscillatorProblem,
};

pub use config::{ForcingSpec, PartialConfig, RunConfig, SchemeChoice, Step};
pub use error::CliError;

pub const CSV_HEADER: &str = "time,fem,onestep,exact,err_fem,err_onestep";

pub const TABLE_TAUS: [f64; 6] = [0.1, 0.05, 0.025, 0.02, 0.0125, 0.01];

/// Lossless CSV number: 17 significant digits.
fn csv_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Four decimals, ties to even, without a minus sign on zero.
pub fn four_decimals(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let wrap = |source| CliError::Write {
        path: path.to_owned(),
        source,
    };
    let name = path
        .file_name()
        .ok_or_else(|| wrap(io::ErrorKind::InvalidInput.into()))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(wrap)
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// CSV text of one run.
pub fn solve_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let problem = cfg.problem()?;
    let mesh = cfg.mesh()?;
    let fem = cfg
        .scheme
        .fem()
        .then(|| fem_trajectory(&problem, &mesh))
        .transpose()?;
    let one = cfg
        .scheme
        .onestep()
        .then(|| march_mesh(&problem, &mesh))
        .transpose()?;
    let mut csv = String::with_capacity(96 * (mesh.element_count() + 2));
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for (i, &t) in mesh.nodes().iter().enumerate() {
        let f = fem.as_ref().map(|tr| tr.displacements[i]);
        let o = one.as_ref().map(|tr| tr.displacements[i]);
        let e = if cfg.emit_exact {
            Some(exact_solution(&problem, t)?)
        } else {
            None
        };
        let diff = |a: Option<f64>| a.zip(e).map(|(a, e)| a - e);
        let cells = [Some(t), f, o, e, diff(f), diff(o)];
        for (c, cell) in cells.iter().enumerate() {
            if c > 0 {
                csv.push(',');
            }
            if let Some(v) = cell {
                csv.push_str(&csv_number(*v));
            }
        }
        csv.push('\n');
    }
    Ok(csv)
}

pub fn run_solve(cfg: &RunConfig) -> Result<(), CliError> {
    let csv = solve_csv(cfg)?;
    emit(cfg.output.as_deref(), &csv)
}

fn table_problem(which: u8) -> OscillatorProblem {
    let base = |v0| OscillatorProblem::free(1.0, 9.0, 0.0, v0, 10.0).expect("fixed parameters");
    match which {
        1 => base(2.0),
        _ => base(0.0).with_forcing(Forcing::sinusoid(5.0, 3.6).expect("fixed parameters")),
    }
}

/// Nodal displacements at t = 1..10 from both schemes.
fn table_columns(problem: &OscillatorProblem, tau: f64) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mesh = uniform_mesh(10.0, (10.0 / tau).round() as usize)?;
    let f = fem_trajectory(problem, &mesh)?;
    let o = march_mesh(problem, &mesh)?;
    let pick = |tr: &convfem::Trajectory| {
        (1..=10)
            .map(|t| tr.value_at(t as f64).expect("integer times are nodes"))
            .collect()
    };
    Ok((pick(&f), pick(&o)))
}

/// Aligned text of table 1, 2 or 3.
pub fn table_text(which: u8) -> Result<String, CliError> {
    let problem = match which {
        1..=3 => table_problem(which),
        _ => {
            return Err(CliError::Config(format!(
                "unknown table {which}; choose 1, 2 or 3"
            )))
        }
    };
    let mut out = String::new();
    if which == 3 {
        let (f_coarse, o_coarse) = table_columns(&problem, 0.5)?;
        let (f_fine, o_fine) = table_columns(&problem, 0.01)?;
        writeln!(
            out,
            "# forced vibration f0=5 Omega=3.6, F: FEM, O: one-step, D = F - O"
        )
        .unwrap();
        writeln!(out, "{:>4}  {:^29}  {:^29}", "", "tau=0.5", "tau=0.01").unwrap();
        writeln!(
            out,
            "{:>4}  {:>9} {:>9} {:>9}  {:>9} {:>9} {:>9}",
            "time", "F", "O", "D*1e14", "F", "O", "D*1e12"
        )
        .unwrap();
        for r in 0..10 {
            writeln!(
                out,
                "{:>4}  {:>9} {:>9} {:>9}  {:>9} {:>9} {:>9}",
                r + 1,
                four_decimals(f_coarse[r]),
                four_decimals(o_coarse[r]),
                four_decimals((f_coarse[r] - o_coarse[r]) * 1e14),
                four_decimals(f_fine[r]),
                four_decimals(o_fine[r]),
                four_decimals((f_fine[r] - o_fine[r]) * 1e12),
            )
            .unwrap();
        }
        return Ok(out);
    }
    let title = if which == 1 {
        "# free vibration m=1 k=9 u0=0 v0=2, FEM and one-step agree to the digits shown"
    } else {
        "# forced vibration m=1 k=9 u0=0 v0=0 f0=5 Omega=3.6, FEM and one-step agree to the digits shown"
    };
    let columns: Vec<Vec<f64>> = TABLE_TAUS
        .iter()
        .map(|&tau| {
            let (f, o) = table_columns(&problem, tau)?;
            if f.iter()
                .zip(&o)
                .any(|(a, b)| four_decimals(*a) != four_decimals(*b))
            {
                log::warn!("FEM and one-step differ at four decimals for tau={tau}");
            }
            Ok(f)
        })
        .collect::<Result<_, CliError>>()?;
    writeln!(out, "{title}").unwrap();
    write!(out, "{:>4}", "time").unwrap();
    for tau in TABLE_TAUS {
        write!(out, " {:>9}", format!("tau={tau}")).unwrap();
    }
    writeln!(out, " {:>9}", "exact").unwrap();
    for r in 0..10 {
        write!(out, "{:>4}", r + 1).unwrap();
        for col in &columns {
            write!(out, " {:>9}", four_decimals(col[r])).unwrap();
        }
        let exact = exact_solution(&problem, (r + 1) as f64)?;
        writeln!(out, " {:>9}", four_decimals(exact)).unwrap();
    }
    Ok(out)
}

pub fn run_tables(which: u8, out: Option<&Path>) -> Result<(), CliError> {
    let text = table_text(which)?;
    emit(out, &text)
}

/// Text report of the stability limit and, with `tau`, the amplification
/// eigenvalues at that step.
pub fn stability_report(m: f64, k: f64, tau: Option<f64>) -> Result<String, CliError> {
    if !(m > 0.0 && m.is_finite() && k > 0.0 && k.is_finite()) {
        return Err(CliError::Config("m and k must be positive".into()));
    }
    let critical = stability_limit(m, k);
    let period = 2.0 * std::f64::consts::PI / (k / m).sqrt();
    let mut out = String::new();
    writeln!(out, "critical tau: {critical:.6}").unwrap();
    writeln!(out, "critical tau / period: {:.4}", critical / period).unwrap();
    if let Some(tau) = tau {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(CliError::Config(format!("tau must be positive, got {tau}")));
        }
        let (l1, l2) = amplification_eigenvalues(m, k, tau);
        let big = l1.norm().max(l2.norm());
        let stable = tau < critical && big <= 1.0 + 1e-12;
        writeln!(out, "tau: {tau}").unwrap();
        for (i, l) in [l1, l2].iter().enumerate() {
            writeln!(
                out,
                "lambda{}: {:.6} {:+.6}i  |lambda{}| = {:.6}",
                i + 1,
                l.re,
                l.im,
                i + 1,
                l.norm()
            )
            .unwrap();
        }
        writeln!(out, "max |lambda|: {big:.6}").unwrap();
        writeln!(
            out,
            "verdict: {}",
            if stable { "STABLE" } else { "UNSTABLE" }
        )
        .unwrap();
    }
    Ok(out)
}

pub fn run_stability(m: f64, k: f64, tau: Option<f64>, out: Option<&Path>) -> Result<(), CliError> {
    let text = stability_report(m, k, tau)?;
    emit(out, &text)
}
