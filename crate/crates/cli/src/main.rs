//! `combicoh`: sequences, weights, moment verification and coherent states
//! from the command line.
//!
//! Exit codes: 0 on success, 2 for invalid requests (bad ids, points outside
//! a domain, usage errors), 3 for numerical failures and failed verifications.

mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use combicoh::report;
use combicoh::states::state_coefficients;
use combicoh::{
    bell_atoms, calibrate_constant, cb_weight_eval, normalization, overlap, seq_values, spectrum,
    verify_moments, Error, QuadratureConfig, Scheme, SequenceId, StateParams, WeightKind,
    WeightSpec,
};
use num_complex::Complex64;

use render::{Format, Table};

const IDS_HELP: &str = "Sequence ids: factorial, ex1..ex10, centralbinomial (= ex3), \
catalan (= ex4), middletrinomial (= ex9), bell, product:catalan*bell";

#[derive(Parser)]
#[command(
    name = "combicoh",
    version,
    about = "Coherent states from combinatorial sequences"
)]
#[command(after_help = IDS_HELP)]
struct Cli {
    /// Output format; COMBICOH_FORMAT sets the default
    #[arg(
        long,
        global = true,
        value_enum,
        env = "COMBICOH_FORMAT",
        default_value = "table"
    )]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print c(n) and the spectrum εₙ = c(n)/c(n-1) for n = 0..=n_max
    #[command(after_help = IDS_HELP)]
    Seq {
        id: SequenceId,
        /// At most 100
        n_max: u32,
    },
    /// Compare numerical moments of the weight with the exact sequence
    #[command(after_help = IDS_HELP)]
    Verify {
        id: SequenceId,
        #[arg(default_value_t = 10)]
        n_max: u32,
        /// Largest accepted relative error
        #[arg(default_value_t = 1e-10)]
        rel_tol: f64,
        /// substitution-sqrt, jacobi, jacobi(p,q), double-exponential, truncated-de, truncated-de(U)
        #[arg(long)]
        scheme: Option<Scheme>,
        /// Tolerance handed to the quadrature rules
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
        /// Refinement levels allowed to the quadrature rules
        #[arg(long, default_value_t = 12)]
        max_subdivisions: u32,
    },
    /// Sample the weight W(x), or list the atoms of the Bell measure
    #[command(after_help = IDS_HELP)]
    Weight {
        id: SequenceId,
        x_min: Option<f64>,
        x_max: Option<f64>,
        #[arg(default_value_t = 100)]
        points: usize,
        /// Logarithmic spacing
        #[arg(long)]
        log: bool,
        /// List atom locations and masses (bell)
        #[arg(long)]
        atoms: bool,
        /// Rescale the constant so that the zeroth moment is 1
        #[arg(long)]
        calibrated: bool,
        /// Highest moment the atom list must reproduce (with --atoms)
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// Tail tolerance for atom lists and mixture sums
        #[arg(long, default_value_t = 1e-13)]
        tail_tol: f64,
    },
    /// Evaluate the normalization N(x) = Σ xⁿ/c(n)
    #[command(after_help = IDS_HELP)]
    Norm {
        id: SequenceId,
        x: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Overlaps ⟨z|w⟩ for one z against one or more w ("re,im" or "re")
    #[command(after_help = IDS_HELP)]
    Overlap {
        id: SequenceId,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        w: Vec<Complex64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Amplitudes of the coherent state |z⟩ ("re,im" or "re")
    #[command(after_help = IDS_HELP)]
    State {
        id: SequenceId,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(default_value_t = 10)]
        n_max: u32,
        /// Largest omitted probability; the order grows until it is met
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("'{s}' is not a complex number; use re,im or re"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(s)?, 0.0)),
    }
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn format_complex(z: Complex64) -> String {
    format!("{},{}", render::float(z.re), render::float(z.im))
}

fn cmd_seq(id: SequenceId, n_max: u32) -> Result<Table, Failure> {
    if n_max > 100 {
        return Err(usage(format!("n_max must be at most 100, got {n_max}")));
    }
    let values = seq_values(id, n_max);
    let spec = spectrum(id, n_max);
    let mut table = Table::new("sequence", &["n", "c", "epsilon"]).meta("id", id.to_string());
    for (n, (c, eps)) in values.iter().zip(&spec.epsilon).enumerate() {
        table.push(vec![
            (n as u64).into(),
            c.to_string().into(),
            eps.to_string().into(),
        ]);
    }
    Ok(table)
}

fn verify_table(r: &combicoh::MomentReport, rel_tol: f64) -> Table {
    let status = if r.passes(rel_tol) {
        "verified"
    } else {
        "failed"
    };
    let mut table = Table::new(
        "verify",
        &["n", "exact", "numeric", "relative_error", "scheme"],
    )
    .meta("id", r.id.to_string())
    .meta("calibration_ratio", r.calibration_ratio)
    .meta("max_relative_error", r.max_relative_error)
    .meta("rel_tol", rel_tol)
    .meta("status", status.to_string());
    for note in &r.notes {
        table = table.meta("note", note.clone());
    }
    for row in &r.rows {
        table.push(vec![
            row.n.into(),
            row.exact.to_string().into(),
            row.numeric.into(),
            row.relative_error.into(),
            row.scheme.clone().into(),
        ]);
    }
    table
}

fn cmd_verify(
    id: SequenceId,
    n_max: u32,
    rel_tol: f64,
    cfg: QuadratureConfig,
    format: Format,
) -> Result<(), Failure> {
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(usage(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let spec = WeightSpec::for_sequence(id)?;
    let r = verify_moments(&spec, n_max, &cfg)?;
    match format {
        Format::Json => print!("{}", report::to_json(&r) + "\n"),
        Format::Report => print!("{}", report::to_text(&r)),
        Format::Csv => {
            print!("{}", report::to_csv(&r));
            eprintln!("calibration_ratio {:e}", r.calibration_ratio);
        }
        Format::Table => print!("{}", verify_table(&r, rel_tol).render(format)),
    }
    if r.passes(rel_tol) {
        Ok(())
    } else {
        Err(Failure {
            code: 3,
            message: format!(
                "max relative error {:e} exceeds rel_tol {rel_tol:e}",
                r.max_relative_error
            ),
        })
    }
}

fn sample_points(lo: f64, hi: f64, points: usize, log: bool) -> Result<Vec<f64>, Failure> {
    if points == 0 {
        return Err(usage("points must be positive"));
    }
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(usage(format!("x_min = {lo} exceeds x_max = {hi}")));
    }
    if log && lo <= 0.0 {
        return Err(usage("logarithmic spacing needs x_min > 0"));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            i if i == points - 1 => hi,
            i if log => (lo.ln() + (hi.ln() - lo.ln()) * step(i)).exp(),
            i => lo + (hi - lo) * step(i),
        })
        .collect())
}

struct WeightArgs {
    id: SequenceId,
    x_min: Option<f64>,
    x_max: Option<f64>,
    points: usize,
    log: bool,
    atoms: bool,
    calibrated: bool,
    n_max: u32,
    tail_tol: f64,
}

fn cmd_weight(a: WeightArgs) -> Result<Table, Failure> {
    let spec = WeightSpec::for_sequence(a.id)?;
    if a.atoms || spec.kind == WeightKind::DiscreteAtoms {
        if spec.kind != WeightKind::DiscreteAtoms {
            return Err(usage(format!(
                "{} has no atoms; --atoms applies to bell",
                a.id
            )));
        }
        if !a.atoms {
            return Err(usage("bell is purely atomic; use --atoms"));
        }
        let list = bell_atoms(a.tail_tol, a.n_max)?;
        let mut table = Table::new("atoms", &["k", "mass"]).meta("id", a.id.to_string());
        table.push(vec![0u32.into(), list.origin_mass.into()]);
        for atom in &list.atoms {
            table.push(vec![atom.location.into(), atom.mass.into()]);
        }
        return Ok(table);
    }
    let (Some(lo), Some(hi)) = (a.x_min, a.x_max) else {
        return Err(usage("weight needs x_min and x_max"));
    };
    let xs = sample_points(lo, hi, a.points, a.log)?;
    let mut table = Table::new("weight", &["x", "w"]).meta("id", a.id.to_string());
    if spec.kind == WeightKind::MixedSum {
        if a.calibrated {
            return Err(usage("--calibrated applies to continuous weights"));
        }
        table = table.meta("note", "plus an atom of mass 1/e at x = 0".to_string());
        for x in xs {
            table.push(vec![x.into(), cb_weight_eval(x, a.tail_tol)?.into()]);
        }
        return Ok(table);
    }
    let spec = if a.calibrated {
        let cfg = QuadratureConfig::default();
        let cal = calibrate_constant(&spec, cfg.calibration_tol, &cfg)?;
        table = table.meta("calibration_ratio", cal.measured_mu0);
        cal.spec
    } else {
        spec
    };
    table = table.meta("constant", spec.normalization_constant);
    for x in xs {
        table.push(vec![x.into(), spec.eval(x)?.into()]);
    }
    Ok(table)
}

fn cmd_norm(id: SequenceId, x: f64, tol: f64) -> Result<Table, Failure> {
    let value = normalization(id, x, tol)?;
    Ok(Table::new("normalization", &[])
        .meta("id", id.to_string())
        .meta("x", x)
        .meta("normalization", value))
}

fn cmd_overlap(id: SequenceId, z: Complex64, ws: &[Complex64], tol: f64) -> Result<Table, Failure> {
    let mut table = Table::new("overlap", &["w", "re", "im", "abs"])
        .meta("id", id.to_string())
        .meta("z", format_complex(z));
    for &w in ws {
        let v = overlap(id, z, w, tol)?;
        table.push(vec![
            format_complex(w).into(),
            v.re.into(),
            v.im.into(),
            v.norm().into(),
        ]);
    }
    Ok(table)
}

fn cmd_state(id: SequenceId, z: Complex64, n_max: u32, tol: f64) -> Result<Table, Failure> {
    let state = state_coefficients(&StateParams {
        id,
        z,
        n_max,
        series_tol: tol,
    })?;
    let mut table = Table::new("state", &["n", "re", "im", "probability"])
        .meta("id", id.to_string())
        .meta("z", format_complex(z))
        .meta("normalization", state.normalization)
        .meta("truncation_mass", state.truncation_mass);
    for (n, a) in state.amplitudes.iter().enumerate() {
        table.push(vec![
            (n as u64).into(),
            a.re.into(),
            a.im.into(),
            a.norm_sqr().into(),
        ]);
    }
    Ok(table)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    let table = match cli.command {
        Command::Seq { id, n_max } => cmd_seq(id, n_max)?,
        Command::Verify {
            id,
            n_max,
            rel_tol,
            scheme,
            quad_tol,
            max_subdivisions,
        } => {
            let cfg = QuadratureConfig {
                rel_tol: quad_tol,
                max_subdivisions,
                scheme,
                ..Default::default()
            };
            return cmd_verify(id, n_max, rel_tol, cfg, format);
        }
        Command::Weight {
            id,
            x_min,
            x_max,
            points,
            log,
            atoms,
            calibrated,
            n_max,
            tail_tol,
        } => cmd_weight(WeightArgs {
            id,
            x_min,
            x_max,
            points,
            log,
            atoms,
            calibrated,
            n_max,
            tail_tol,
        })?,
        Command::Norm { id, x, tol } => cmd_norm(id, x, tol)?,
        Command::Overlap { id, z, w, tol } => cmd_overlap(id, z, &w, tol)?,
        Command::State { id, z, n_max, tol } => cmd_state(id, z, n_max, tol)?,
    };
    print!("{}", table.render(format));
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
