//! Command-line front end. Usage problems exit with code 2, numeric
//! failures during construction or verification with code 1.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::algebra::{root_system, AlgebraKind};
use crate::assembler::build;
use crate::characters::{character, HighestWeight};
use crate::error::{QrepError, Result};
use crate::export;
use crate::spectra::build_spectra;
use crate::verify::{self, ORACLE_DIM_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Build,
    Verify,
    Character,
    Spectra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qrep", version, about = "Generator matrices for quantum algebras of rank two")]
pub struct Args {
    /// Algebra tag (C2 is accepted as an alias of B2).
    #[arg(long)]
    pub algebra: String,

    /// Highest-weight components, comma separated (one for A1, two otherwise).
    #[arg(long)]
    pub weight: String,

    /// Deformation parameter; required for build and verify.
    #[arg(long)]
    pub t: Option<f64>,

    /// Numeric tolerance for rank decisions and verification.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    #[arg(long, value_enum, default_value_t = Mode::Build)]
    pub mode: Mode,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file (JSON) or file prefix (CSV). Defaults to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn comps_of(hw: &HighestWeight, kind: AlgebraKind) -> String {
    let parts: Vec<String> = hw.0.iter().take(kind.rank()).map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn parse_weight(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| QrepError::Parse(format!("bad weight component `{p}`")))
        })
        .collect()
}

fn require_t(args: &Args) -> Result<f64> {
    args.t.ok_or_else(|| {
        QrepError::InvalidParameter("--t is required for this mode".into())
    })
}

fn emit(args: &Args, text: &str) -> Result<()> {
    match &args.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_build(args: &Args, kind: AlgebraKind, comps: &[i64]) -> Result<()> {
    let t = require_t(args)?;
    let g = build(kind, comps, t, args.tol)?;
    log::info!("built {} weight {:?} dim {}", g.algebra, comps, g.dim);
    match args.format {
        Format::Json => emit(args, &export::to_json(&g)),
        Format::Csv => match &args.output {
            Some(prefix) => export::write_csv(&g, prefix),
            None => emit(args, &export::csv_stream(&g)),
        },
    }
}

fn run_verify(args: &Args, kind: AlgebraKind, comps: &[i64]) -> Result<()> {
    let t = require_t(args)?;
    let g = build(kind, comps, t, args.tol)?;
    let report = verify::check_relations(&g);
    let oracle_diff = if g.dim <= ORACLE_DIM_CAP {
        match verify::build_oracle(kind, comps, t) {
            Ok(o) => Some(verify::compare_invariants(&g, &o)),
            Err(QrepError::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let threshold = args.tol * report.scale.max(1.0);
    let pass = report.max_residual() <= threshold
        && oracle_diff.map_or(true, |d| d <= threshold);

    let mut s = String::new();
    match args.format {
        Format::Json => {
            s.push_str("{\"algebra\":\"");
            let _ = write!(s, "{}", g.algebra);
            let _ = write!(s, "\",\"weight\":{},\"dim\":{},\"residuals\":{{", &comps_of(&g.hw, kind), g.dim);
            let _ = write!(s, "\"cartan\":{:.3e},", report.cartan);
            let _ = write!(s, "\"ladder\":{:.3e},", report.ladder);
            let _ = write!(s, "\"t_form\":{:.3e},", report.t_form);
            for (k, r) in report.q_rows.iter().enumerate() {
                let _ = write!(s, "\"q_row{}\":{:.3e},", k + 1, r);
            }
            let _ = write!(s, "\"scale\":{:.3e}}},", report.scale);
            match oracle_diff {
                Some(d) => {
                    let _ = write!(s, "\"oracle_diff\":{d:.3e},");
                }
                None => s.push_str("\"oracle_diff\":null,"),
            }
            let _ = writeln!(s, "\"pass\":{pass}}}");
        }
        Format::Csv => {
            s.push_str("check,value\n");
            let _ = writeln!(s, "cartan,{:.3e}", report.cartan);
            let _ = writeln!(s, "ladder,{:.3e}", report.ladder);
            let _ = writeln!(s, "t_form,{:.3e}", report.t_form);
            for (k, r) in report.q_rows.iter().enumerate() {
                let _ = writeln!(s, "q_row{},{:.3e}", k + 1, r);
            }
            let _ = writeln!(s, "scale,{:.3e}", report.scale);
            match oracle_diff {
                Some(d) => {
                    let _ = writeln!(s, "oracle_diff,{d:.3e}");
                }
                None => s.push_str("oracle_diff,\n"),
            }
            let _ = writeln!(s, "pass,{pass}");
        }
    }
    emit(args, &s)?;
    if !pass {
        return Err(QrepError::ConsistencyError {
            residual: report.max_residual().max(oracle_diff.unwrap_or(0.0)),
        });
    }
    Ok(())
}

fn run_character(args: &Args, kind: AlgebraKind, comps: &[i64]) -> Result<()> {
    let rs = root_system(kind);
    let hw = HighestWeight::new(&rs, comps)?;
    let ch = character(&rs, hw)?;
    let mut s = String::new();
    match args.format {
        Format::Json => {
            s.push_str("{\"algebra\":\"");
            let _ = write!(s, "{}", rs.kind);
            let _ = write!(s, "\",\"weight\":{},\"dim\":{},\"terms\":[", &comps_of(&hw, kind), ch.mass());
            for (k, (w, c)) in ch.terms().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{{\"weight\":[{},{}],\"mult\":{}}}", w[0], w[1], c);
            }
            s.push_str("]}\n");
        }
        Format::Csv => {
            s.push_str("n1,n2,mult\n");
            for (w, c) in ch.terms() {
                let _ = writeln!(s, "{},{},{}", w[0], w[1], c);
            }
        }
    }
    emit(args, &s)
}

fn run_spectra(args: &Args, kind: AlgebraKind, comps: &[i64]) -> Result<()> {
    let rs = root_system(kind);
    let hw = HighestWeight::new(&rs, comps)?;
    let ch = character(&rs, hw)?;
    let st = build_spectra(&rs, &ch)?;
    let mut s = String::new();
    match args.format {
        Format::Json => {
            s.push_str("{\"algebra\":\"");
            let _ = write!(s, "{}", rs.kind);
            let _ = write!(s, "\",\"weight\":{},\"dim\":{},\"levels\":[", &comps_of(&hw, kind), st.total_dim);
            for (k, level) in st.levels.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                let _ = write!(
                    s,
                    "{{\"n\":{},\"lambda_exp\":{},\"classes\":[",
                    level.n, level.lambda_exp
                );
                for (e, class) in level.classes.iter().enumerate() {
                    if e > 0 {
                        s.push(',');
                    }
                    let _ = write!(
                        s,
                        "{{\"alpha_exp\":{},\"weight\":[{},{}],\"mult\":{}}}",
                        class.alpha_exp, class.weight[0], class.weight[1], class.mult
                    );
                }
                s.push_str("]}");
            }
            s.push_str("]}\n");
        }
        Format::Csv => {
            s.push_str("level,lambda_exp,alpha_exp,n1,n2,mult\n");
            for level in &st.levels {
                for class in &level.classes {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        level.n,
                        level.lambda_exp,
                        class.alpha_exp,
                        class.weight[0],
                        class.weight[1],
                        class.mult
                    );
                }
            }
        }
    }
    emit(args, &s)
}

fn execute(args: &Args) -> Result<()> {
    let kind: AlgebraKind = args.algebra.parse()?;
    let comps = parse_weight(&args.weight)?;
    match args.mode {
        Mode::Build => run_build(args, kind, &comps),
        Mode::Verify => run_verify(args, kind, &comps),
        Mode::Character => run_character(args, kind, &comps),
        Mode::Spectra => run_spectra(args, kind, &comps),
    }
}

fn exit_code(e: &QrepError) -> i32 {
    match e {
        QrepError::InvalidParameter(_) | QrepError::Parse(_) => 2,
        _ => 1,
    }
}

/// Entry point used by the binary; clap itself exits with code 2 on
/// malformed command lines.
pub fn run() -> i32 {
    let args = Args::parse();
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("QREP_LOG"))
        .try_init();
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
