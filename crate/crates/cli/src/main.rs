mod fail;
mod params;
mod sweep;

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nsbox::theories::repro::{self, ReproConfig};
use nsbox::{
    chsh_values, f_pr, hardy_check, is_bell_local, is_genuine_member, max_chsh, pr_decompose, witness, BoxTable,
    ChshLabel, Rational,
};
use serde_json::{json, Map, Value};

use fail::CliError;
use params::FamilyArgs;

/// Exact analysis of two-party, two-input, two-output nonsignaling boxes.
#[derive(Parser, Debug)]
#[command(name = "nsbox", version)]
struct Cli {
    /// Seed for every sampler.
    #[arg(long, global = true, env = "NSBOX_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full analysis report for a box file ("-" reads stdin).
    Eval {
        file: PathBuf,
        /// Report validation only for signaling boxes instead of failing.
        #[arg(long)]
        allow_signaling: bool,
    },
    /// F_PR with its covariance CHSH values and Gamma triad.
    Fpr { file: PathBuf },
    /// Bell-local polytope membership with certificate.
    Local { file: PathBuf },
    /// Membership in the hull of P_PR and the deterministic boxes.
    Genuine { file: PathBuf },
    /// Split into a PR fraction plus a local residual.
    Decompose { file: PathBuf },
    /// Hardy conditions and success probability.
    Hardy {
        file: PathBuf,
        /// Try all relabelings and report the first that satisfies the conditions.
        #[arg(long)]
        search_variants: bool,
    },
    /// Write the box of a family point.
    Family {
        /// gnstpq, gnstpq1, hardy, noisy-pr, isotropic or noise.
        family: String,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV region map over a rational parameter grid.
    Sweep {
        family: String,
        /// Grid axis as name=start:stop:step; repeat for more axes.
        #[arg(long = "grid", value_name = "SPEC")]
        grid: Vec<String>,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a reproduction suite: lemma1, lemma2, lemma3, theorem, fpr-properties or all.
    Repro {
        suite: String,
        #[command(flatten)]
        sizes: ReproSizes,
    },
}

#[derive(Args, Debug)]
struct ReproSizes {
    /// Grid step, of the form 1/n.
    #[arg(long, default_value = "1/100")]
    step: String,
    #[arg(long, default_value_t = 20)]
    local_parts: usize,
    #[arg(long, default_value_t = 1000)]
    hardy_samples: usize,
    #[arg(long, default_value_t = 1000)]
    theorem_samples: usize,
    #[arg(long, default_value_t = 10_000)]
    corpus: usize,
    #[arg(long, default_value_t = 1000)]
    product_samples: usize,
    #[arg(long, default_value_t = 100)]
    relabel_samples: usize,
}

impl ReproSizes {
    fn config(&self, seed: u64) -> Result<ReproConfig, CliError> {
        let step = params::rational("step", &self.step)?;
        let bad = || CliError::Usage(format!("--step: expected 1/n for a positive integer n, got {}", self.step));
        if !step.is_positive() {
            return Err(bad());
        }
        // an integer reciprocal displays without a slash
        let grid_denominator = (Rational::one() / step).to_string().parse::<i64>().map_err(|_| bad())?;
        Ok(ReproConfig {
            seed,
            grid_denominator,
            local_parts_per_point: self.local_parts,
            hardy_samples: self.hardy_samples,
            theorem_samples: self.theorem_samples,
            corpus_size: self.corpus,
            product_samples: self.product_samples,
            relabel_samples: self.relabel_samples,
        })
    }
}

fn read_box(path: &Path) -> Result<BoxTable, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    };
    Ok(BoxTable::from_json_str(&text)?)
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::Usage(format!("stdout: {e}")))
        }
    }
}

fn emit_json(value: &impl serde::Serialize, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    emit(text.as_bytes(), out)
}

fn eval_report(b: &BoxTable, allow_signaling: bool) -> Result<Value, CliError> {
    if !b.is_nonsignaling() {
        if allow_signaling {
            return Ok(json!({"box": b.to_json(), "nonsignaling": false}));
        }
        return Err(nsbox::Error::Signaling.into());
    }
    let values = chsh_values(b)?;
    let chsh: Map<String, Value> = ChshLabel::all().zip(values).map(|(l, v)| (l.to_string(), json!(v))).collect();
    let (best, best_value) = max_chsh(b)?;
    Ok(json!({
        "box": b.to_json(),
        "nonsignaling": true,
        "summary": b.correlation_summary()?,
        "chsh": chsh,
        "max_chsh": {"chsh": best, "value": best_value},
        "fpr": f_pr(b)?,
        "local": is_bell_local(b)?,
        "genuine": is_genuine_member(b)?,
        "hardy": hardy_check(b, false)?,
        "witness": witness(b, None)?,
    }))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Eval { file, allow_signaling } => {
            let b = read_box(&file)?;
            emit_json(&eval_report(&b, allow_signaling)?, None)?;
        }
        Command::Fpr { file } => emit_json(&f_pr(&read_box(&file)?)?, None)?,
        Command::Local { file } => emit_json(&is_bell_local(&read_box(&file)?)?, None)?,
        Command::Genuine { file } => emit_json(&is_genuine_member(&read_box(&file)?)?, None)?,
        Command::Decompose { file } => emit_json(&pr_decompose(&read_box(&file)?)?, None)?,
        Command::Hardy { file, search_variants } => emit_json(&hardy_check(&read_box(&file)?, search_variants)?, None)?,
        Command::Family { family, params: args, out } => {
            let point = params::point(&family, &params::scalars(&args)?, &args)?;
            let b = nsbox::generate(&point)?;
            emit_json(&b.to_json(), out.as_deref())?;
        }
        Command::Sweep { family, grid, params: args, out } => {
            let axes = grid.iter().map(|g| sweep::parse_axis(g)).collect::<Result<Vec<_>, _>>()?;
            let result = sweep::run(&family, &axes, &args)?;
            if result.skipped > 0 {
                eprintln!("nsbox: skipped {} grid points outside the {family} parameter domain", result.skipped);
            }
            emit(&result.csv, out.as_deref())?;
        }
        Command::Repro { suite, sizes } => {
            let cfg = sizes.config(cli.seed)?;
            let report = repro::run_suite(&suite, &cfg).ok_or_else(|| {
                CliError::Usage(format!("unknown suite {suite:?}; expected one of {}, all", repro::SUITES.join(", ")))
            })?;
            emit_json(&report, None)?;
            if !report.passes() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("nsbox: {e}");
            e.exit_code()
        }
    }
}
