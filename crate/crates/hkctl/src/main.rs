//! Batch verifier: build models, run named check suites, construct twistor paths.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input or configuration error.

mod report;
mod suites;
mod twistor;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hkcore::exact_kernel::{Matrix, Scalar, SymmetricForm};
use hkcore::frobenius_core::validate_algebra;
use hkcore::model_forge::{apolar_model, load_model, save_model, ModelSpec};
use hkcore::twistor_walk::ScalarContext;
use serde_json::json;

use report::Report;

#[derive(Parser)]
#[command(name = "hkctl", version, about = "Exact verification of hyperkähler-type cohomology models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Connect,
    Admissible,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scalars {
    Rational,
    Quadratic,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the apolar model for (b, m, q) and write it after validation.
    Build {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        m: usize,
        /// `diag:…` or a JSON integer Gram matrix; defaults to diag(1,1,1,−1,…).
        #[arg(long)]
        q: Option<String>,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Run a named suite (or `all`) against a model file.
    Verify {
        model: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Construct and validate twistor paths in the period space of a lattice.
    Twistor {
        /// `diag:…` or a JSON integer Gram matrix.
        #[arg(long)]
        gram: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Néron–Severi target for admissible mode: `none`, `e5`, `e4,e5`, …
        #[arg(long)]
        ns: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of plane pairs in connect mode.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Defaults to rational for connect and quadratic for admissible.
        #[arg(long, value_enum)]
        scalars: Option<Scalars>,
        /// Path file for the (first) constructed path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn read_form(spec: &str) -> Result<SymmetricForm<Scalar>> {
    let gram = twistor::read_gram(spec)?;
    let rows: Vec<&[i64]> = gram.iter().map(Vec::as_slice).collect();
    SymmetricForm::new(Matrix::from_ints(&rows)).map_err(|e| anyhow!("{spec}: {e}"))
}

fn build(b: usize, m: usize, q: Option<&str>, out: &Path) -> Result<bool> {
    let spec = match q {
        None => ModelSpec::standard(b, m),
        Some(q) => ModelSpec { b, m, q: read_form(q)? },
    };
    spec.validate()?;
    let alg = apolar_model(&spec)?;
    let report = validate_algebra(&alg);
    if !report.all_pass() {
        for e in report.entries.iter().filter(|e| !e.pass) {
            eprintln!("validation failed: {} {}", e.name, e.witness.as_deref().unwrap_or(""));
        }
        return Ok(false);
    }
    std::fs::write(out, save_model(&alg)).with_context(|| format!("writing {}", out.display()))?;
    let dims: Vec<usize> = (0..=2 * m).map(|i| alg.dim(2 * i)).collect();
    println!("wrote {} b={b} m={m} dims={dims:?}", out.display());
    Ok(true)
}

fn emit(report: &Report, path: Option<&Path>) -> Result<bool> {
    report.print();
    if let Some(p) = path {
        std::fs::write(p, report.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(report.all_pass())
}

fn verify(model: Option<&Path>, suite: &str, seed: u64, report: Option<&Path>, list: bool) -> Result<bool> {
    if list {
        for (name, about) in suites::SUITES {
            println!("{name:<20} {about}");
        }
        println!("{:<20} every suite above", "all");
        return Ok(true);
    }
    let model = model.ok_or_else(|| anyhow!("a model file is required unless --list is given"))?;
    let names: Vec<&str> = if suite == "all" {
        suites::SUITES.iter().map(|s| s.0).collect()
    } else if suites::SUITES.iter().any(|s| s.0 == suite) {
        vec![suite]
    } else {
        bail!("unknown suite {suite:?}; `hkctl verify --list` shows the available ones");
    };
    let bytes = std::fs::read(model).with_context(|| format!("reading {}", model.display()))?;
    let alg = load_model(&bytes)?;
    if alg.reference_form().is_none() {
        bail!("{}: model has no reference form", model.display());
    }
    let b = alg.dim(2);
    let m = alg.top_degree() / 4;
    if b < 4 || m < 1 {
        bail!("{}: expected a model with b ≥ 4 and m ≥ 1", model.display());
    }
    let ctx = suites::Ctx { alg: &alg, b, m, seed };
    let records: Vec<_> = names.iter().filter_map(|n| suites::run(n, &ctx)).collect();
    let config = json!({"command": "verify", "model": model.display().to_string(), "suite": suite, "seed": seed});
    emit(&Report::new(config, records), report)
}

#[allow(clippy::too_many_arguments)]
fn twistor_cmd(
    gram: &str,
    mode: Mode,
    ns: Option<&str>,
    seed: u64,
    count: usize,
    scalars: Option<Scalars>,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<bool> {
    let space = twistor::Space::load(gram)?;
    let ctx = |default| match scalars.unwrap_or(default) {
        Scalars::Rational => ScalarContext::Rational,
        Scalars::Quadratic => ScalarContext::Quadratic,
    };
    let (records, mode_name, ctx) = match mode {
        Mode::Connect => {
            let c = ctx(Scalars::Rational);
            (twistor::connect(&space, c, seed, count, out)?, "connect", c)
        }
        Mode::Admissible => {
            let c = ctx(Scalars::Quadratic);
            let q = twistor::parse_ns(ns, space.gram.len())?;
            (vec![twistor::admissible(&space, c, &q, seed, out)?], "admissible", c)
        }
    };
    let config = json!({
        "command": "twistor",
        "gram": space.gram,
        "mode": mode_name,
        "ns": ns,
        "seed": seed,
        "count": count,
        "scalars": ctx,
        "max_height": twistor::max_height()?,
    });
    emit(&Report::new(config, records), report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Build { b, m, q, out } => build(*b, *m, q.as_deref(), out),
        Cmd::Verify { model, suite, seed, report, list } => {
            verify(model.as_deref(), suite, *seed, report.as_deref(), *list)
        }
        Cmd::Twistor { gram, mode, ns, seed, count, scalars, out, report } => {
            twistor_cmd(gram, *mode, ns.as_deref(), *seed, *count, *scalars, out.as_deref(), report.as_deref())
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
