//! `cfsum`: closed forms for sums of products of C-finite sequences.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use cfsum_core::closer::{certify_identity_window, solve_problem, SumProblem};
use cfsum_core::exact::set_degree_cap;
use cfsum_core::indefinite::independence_check;
use cfsum_core::io::{
    closed_form_from_value, parse_rational, to_json, AnalysisJson, CertificateJson, FormFile, IndependenceJson,
    ProblemFile, Registry, ResultEnvelope, sum_problem,
};
use cfsum_core::spectra::{analyze, uniqueness_report};
use cfsum_core::{builtin, Error, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cfsum", version, about = "Exact closed forms for sums of C-finite sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the sum described by a problem file.
    Solve {
        file: PathBuf,
        /// Include the uniqueness verdict.
        #[arg(long)]
        uniqueness: bool,
    },
    /// Check a closed form against the direct sum on 0..window.
    Verify {
        file: PathBuf,
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value_t = 30)]
        window: usize,
    },
    /// Value sets, dimensions and uniqueness for one sequence.
    Analyze {
        /// A builtin such as `fibonacci` or `subword(3)`.
        #[arg(long)]
        seq: String,
        #[arg(short)]
        p: usize,
        #[arg(short, default_value_t = 0)]
        q: usize,
    },
    /// Solve an indefinite sum for several initial values and compare.
    Indefinite { file: PathBuf },
    /// Prove or refute an identity between two closed forms.
    Certify {
        lhs: PathBuf,
        rhs: PathBuf,
        /// Check at least this many points.
        #[arg(long, default_value_t = 0)]
        window: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<(ProblemFile, Registry, SumProblem)> {
    let file = ProblemFile::from_json(&read(path)?)?;
    let reg = file.registry()?;
    let problem = file.problem(&reg)?;
    Ok((file, reg, problem))
}

/// `kind` or `kind(p1, p2, ...)`.
fn parse_builtin(spec: &str) -> Result<cfsum_core::SeqRef> {
    let spec = spec.trim();
    let (kind, params) = match spec.find('(') {
        Some(i) => {
            let inner = spec[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Invalid(format!("unbalanced parentheses in `{spec}`")))?;
            let params = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_rational(&serde_json::Value::from(s.trim())))
                .collect::<Result<Vec<_>>>()?;
            (&spec[..i], params)
        }
        None => (spec, Vec::new()),
    };
    Ok(Arc::new(builtin(kind.trim(), &params)?.renamed(kind.trim())))
}

fn solve(path: &Path, want_uniqueness: bool) -> Result<ExitCode> {
    let (file, _, problem) = load_problem(path)?;
    let sol = solve_problem(&problem, file.basis_kind()?, &file.options())?;
    let uniqueness = if want_uniqueness || file.uniqueness {
        Some(uniqueness_report(&problem, &sol.basis)?)
    } else {
        None
    };
    print!("{}", to_json(&ResultEnvelope::new(&problem, &sol, uniqueness.as_ref())?));
    Ok(ExitCode::SUCCESS)
}

fn verify(path: &Path, form: &Path, window: usize) -> Result<ExitCode> {
    let (_, reg, problem) = load_problem(path)?;
    let value: serde_json::Value = serde_json::from_str(&read(form)?)
        .map_err(|e| Error::Invalid(format!("malformed JSON in {}: {e}", form.display())))?;
    let cf = closed_form_from_value(&value, &reg)?;
    if window == 0 {
        eprintln!("warning: window 0 checks nothing");
    }
    let report = cfsum_core::io::verify(&problem, &cf, window)?;
    print!("{}", to_json(&report));
    if let Some(n) = report.n {
        eprintln!("verification failed at n = {n}");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze_cmd(seq: &str, p: usize, q: usize) -> Result<ExitCode> {
    let seq = parse_builtin(seq)?;
    print!("{}", to_json(&AnalysisJson::from(&analyze(&seq, p, q)?)));
    Ok(ExitCode::SUCCESS)
}

fn indefinite(path: &Path) -> Result<ExitCode> {
    let (file, _, problem) = load_problem(path)?;
    let report = independence_check(&problem, file.variant_seq.as_deref(), &file.variants())?;
    print!("{}", to_json(&IndependenceJson::from(&report)));
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn certify(lhs: &Path, rhs: &Path, window: usize) -> Result<ExitCode> {
    let l = FormFile::from_json(&read(lhs)?)?;
    let r = FormFile::from_json(&read(rhs)?)?;
    if !r.sum.is_empty() {
        return Err(Error::Invalid("only the left side may carry a sum".into()));
    }
    let mut reg = Registry::new(&l.sequences)?;
    reg.merge(&Registry::new(&r.sequences)?)?;
    let lhs_form = closed_form_from_value(&l.closed_form, &reg)?;
    let rhs_form = closed_form_from_value(&r.closed_form, &reg)?;
    let sum = if l.sum.is_empty() {
        None
    } else {
        Some(sum_problem(&l.sum, &reg)?)
    };
    let cert = certify_identity_window(&lhs_form, &rhs_form, sum.as_ref(), window)?;
    print!("{}", to_json(&CertificateJson::from(&cert)));
    Ok(if cert.proved() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn apply_degree_cap() -> Result<()> {
    if let Ok(v) = std::env::var("CFSUM_MAX_DEGREE") {
        let cap = v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Invalid(format!("CFSUM_MAX_DEGREE must be a nonnegative integer, got `{v}`")))?;
        set_degree_cap(cap);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    apply_degree_cap()?;
    match cli.command {
        Command::Solve { file, uniqueness } => solve(&file, uniqueness),
        Command::Verify { file, form, window } => verify(&file, &form, window),
        Command::Analyze { seq, p, q } => analyze_cmd(&seq, p, q),
        Command::Indefinite { file } => indefinite(&file),
        Command::Certify { lhs, rhs, window } => certify(&lhs, &rhs, window),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
