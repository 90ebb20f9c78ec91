use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use modinv::sagbi::SetKind;
use modinv::{Error, MultiDegree, Prime};
use modinv_cli::checks::{Ctx, Fault, DEFAULT_SEED};
use modinv_cli::reports::{self, Report};

#[derive(Parser)]
#[command(
    name = "modinv",
    version,
    about = "Modular vector invariants of C_p and SL_2(F_p) on mV_2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenSet {
    Minimal,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// μ, ν and ν̄ tables, checked against path enumeration.
    Counts {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dmax: usize,
    },
    /// Lists the PDP and IDP paths of length d.
    Paths {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
    },
    /// Decomposes the d-th tensor power of V_2.
    Tensor {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
    },
    /// Decomposes the graded component of a multidegree.
    Decompose {
        #[arg(long)]
        p: u64,
        /// Comma separated, e.g. 1,1,1,2.
        #[arg(long)]
        multidegree: String,
    },
    /// Checks the generating set as a SAGBI basis in every multidegree up to dmax.
    Sagbi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        dmax: u32,
        #[arg(long, value_enum, default_value_t = GenSet::Minimal)]
        set: GenSet,
    },
    /// Minimal generators of the SL_2(F_p) invariants up to degree dmax.
    Sl2 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        dmax: u32,
    },
    /// Runs the built-in oracle checks.
    Selftest {
        #[arg(value_enum, default_value_t = Level::Quick)]
        level: Level,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn prime(p: u64) -> anyhow::Result<Prime> {
    Prime::new(p).map_err(|e| anyhow!("--p: {e}"))
}

fn parse_multidegree(s: &str) -> anyhow::Result<MultiDegree> {
    let parts = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .with_context(|| format!("bad multidegree entry `{t}`"))
        })
        .collect::<anyhow::Result<Vec<u32>>>()?;
    if parts.is_empty() {
        bail!("empty multidegree");
    }
    Ok(MultiDegree::new(parts))
}

fn budget_deadline() -> anyhow::Result<Option<Instant>> {
    match std::env::var("MODINV_BUDGET_SECS") {
        Ok(v) => {
            let secs: u64 = v
                .trim()
                .parse()
                .context("MODINV_BUDGET_SECS must be a whole number of seconds")?;
            Ok(Some(Instant::now() + Duration::from_secs(secs)))
        }
        Err(_) => Ok(None),
    }
}

fn lib(r: Result<Report, Error>) -> anyhow::Result<Report> {
    r.map_err(|e| anyhow!(e))
}

fn execute(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Counts { p, dmax } => {
            if *dmax > 63 {
                bail!("--dmax above 63 overflows the counts");
            }
            Ok(reports::counts(prime(*p)?, *dmax))
        }
        Command::Paths { p, d } => lib(reports::paths(prime(*p)?, *d)),
        Command::Tensor { p, d } => lib(reports::tensor(prime(*p)?, *d)),
        Command::Decompose { p, multidegree } => lib(reports::decompose(
            prime(*p)?,
            &parse_multidegree(multidegree)?,
        )),
        Command::Sagbi { p, m, dmax, set } => {
            if *m == 0 {
                bail!("--m must be at least 1");
            }
            let kind = match set {
                GenSet::Minimal => SetKind::Minimal,
                GenSet::Full => SetKind::Full,
            };
            Ok(reports::sagbi(prime(*p)?, *m, *dmax, kind))
        }
        Command::Sl2 { p, m, dmax } => {
            if *m == 0 || *dmax < 2 {
                bail!("need --m >= 1 and --dmax >= 2");
            }
            lib(reports::sl2(prime(*p)?, *m, *dmax, budget_deadline()?))
        }
        Command::Selftest {
            level,
            seed,
            inject_fault,
        } => {
            let fault = inject_fault
                .as_deref()
                .map(str::parse::<Fault>)
                .transpose()
                .map_err(|e| anyhow!(e))?;
            Ok(reports::selftest(
                matches!(level, Level::Full),
                &Ctx { seed: *seed, fault },
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.json),
                Format::Table => print!("{}", report.table),
            }
            if report.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
