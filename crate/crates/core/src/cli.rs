//! Command-line front end: `codegen`, `verify` and `simulate`.
//!
//! Exit codes: 0 on success, 1 when a checked property does not hold
//! (unrecoverable erasure patterns or rounds), 2 for usage, parse and
//! parameter errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codes::{CodeError, ProtectionCode};
use crate::netmodel::{Capacity, NetError, Network};
use crate::protocol::{
    build_schedule, run_simulation, FailureModel, FixedFailures, NoFailures, Outcome,
    ProtocolError, RandomFailures, SimulationMetrics,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Column order of the simulation report.
pub const REPORT_HEADER: &str =
    "round,failed,outcome,queries,xor_ops,transmissions,capacity_num,capacity_den";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Net(#[from] NetError),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "netprotect",
    version,
    about = "Network protection codes against link failures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Parity,
    Hamming,
    Bch,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a code and write it in code-file format.
    Codegen {
        #[arg(long, value_enum)]
        family: Family,
        /// Code length (parity, bch).
        #[arg(long)]
        n: Option<usize>,
        /// Hamming order; length is 2^mu - 1.
        #[arg(long)]
        mu: Option<u32>,
        /// Number of correctable errors the BCH code is designed for (1 or 2).
        #[arg(long = "design-t")]
        design_t: Option<usize>,
        /// Message positions to shorten away, comma-separated.
        #[arg(long, value_delimiter = ',')]
        shorten: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every t-erasure pattern of a code is recoverable.
    Verify {
        code: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Run a protection simulation described by a config file.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Where a simulation's code comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSource {
    Parity,
    Hamming { mu: u32 },
    Bch { design_t: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureSpec {
    None,
    Fixed(Vec<usize>),
    Random { t: usize },
}

/// Parsed `simulate` config: flat `key = value` lines, `#` comments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub n: usize,
    pub code: CodeSource,
    pub shorten: Vec<usize>,
    pub rounds: u64,
    pub failures: FailureSpec,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "n",
    "family",
    "mu",
    "design_t",
    "code_file",
    "shorten",
    "rounds",
    "failure_model",
    "failed",
    "t",
    "seed",
    "output",
];

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad index {x:?}"))
        })
        .collect()
}

impl ScenarioConfig {
    /// Relative `code_file` and `output` paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config {
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(err(format!("unknown key {key:?}")));
            }
            if entries.insert(key, (i + 1, value.trim())).is_some() {
                return Err(err(format!("duplicate key {key:?}")));
            }
        }

        fn get<T: std::str::FromStr>(
            entries: &BTreeMap<&str, (usize, &str)>,
            key: &str,
        ) -> Result<Option<T>, CliError> {
            match entries.get(key) {
                None => Ok(None),
                Some(&(line, v)) => v.parse().map(Some).map_err(|_| CliError::Config {
                    line,
                    message: format!("bad value {v:?} for {key}"),
                }),
            }
        }
        let required = |key: &str| CliError::Config {
            line: 0,
            message: format!("missing required key {key:?}"),
        };
        let list = |key: &str| -> Result<Vec<usize>, CliError> {
            match entries.get(key) {
                None => Ok(Vec::new()),
                Some(&(line, v)) => {
                    parse_list(v).map_err(|message| CliError::Config { line, message })
                }
            }
        };

        let n: usize = get(&entries, "n")?.ok_or_else(|| required("n"))?;
        let rounds: u64 = get(&entries, "rounds")?.ok_or_else(|| required("rounds"))?;
        if rounds < 1 {
            return Err(CliError::Usage("rounds must be at least 1".into()));
        }
        let family: String = get(&entries, "family")?.ok_or_else(|| required("family"))?;
        let code = match family.as_str() {
            "parity" => CodeSource::Parity,
            "hamming" => CodeSource::Hamming {
                mu: get(&entries, "mu")?.ok_or_else(|| required("mu"))?,
            },
            "bch" => CodeSource::Bch {
                design_t: get(&entries, "design_t")?.ok_or_else(|| required("design_t"))?,
            },
            "file" => {
                let p: String = get(&entries, "code_file")?.ok_or_else(|| required("code_file"))?;
                CodeSource::File(base_dir.join(p))
            }
            other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
        };
        let model: String = get(&entries, "failure_model")?.unwrap_or_else(|| "none".into());
        let failures = match model.as_str() {
            "none" => FailureSpec::None,
            "fixed" => {
                let failed = list("failed")?;
                if failed.len() > n {
                    return Err(CliError::Usage("more failed links than connections".into()));
                }
                FailureSpec::Fixed(failed)
            }
            "random" => {
                let t: usize = get(&entries, "t")?.ok_or_else(|| required("t"))?;
                if t > n {
                    return Err(CliError::Usage(format!("t = {t} exceeds n = {n}")));
                }
                FailureSpec::Random { t }
            }
            other => return Err(CliError::Usage(format!("unknown failure_model {other:?}"))),
        };
        Ok(Self {
            n,
            code,
            shorten: list("shorten")?,
            rounds,
            failures,
            seed: get(&entries, "seed")?.unwrap_or(0),
            output: get::<String>(&entries, "output")?.map(|p| base_dir.join(p)),
        })
    }

    /// Builds the configured code and checks its length against `n`.
    pub fn build_code(&self) -> Result<ProtectionCode, CliError> {
        let code = match &self.code {
            CodeSource::Parity => ProtectionCode::single_parity(self.n)?,
            CodeSource::Hamming { mu } => ProtectionCode::hamming(*mu)?,
            CodeSource::Bch { design_t } => ProtectionCode::bch(self.n, *design_t)?,
            CodeSource::File(path) => ProtectionCode::from_file_text(&read(path)?)?,
        };
        let code = code.shorten(&self.shorten)?;
        if code.n() != self.n {
            return Err(CliError::Usage(format!(
                "config n = {} but the code has length {}",
                self.n,
                code.n()
            )));
        }
        Ok(code)
    }

    pub fn run(&self) -> Result<(ProtectionCode, SimulationMetrics), CliError> {
        let code = self.build_code()?;
        let sched = build_schedule(code.n(), code.m(), self.rounds)?;
        let mut net = Network::direct(code.n())?;
        let mut data_rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut failure_rng = ChaCha8Rng::seed_from_u64(self.seed);
        failure_rng.set_stream(1);
        let mut model: Box<dyn FailureModel> = match &self.failures {
            FailureSpec::None => Box::new(NoFailures),
            FailureSpec::Fixed(failed) => Box::new(FixedFailures::new(failed.clone())),
            FailureSpec::Random { t } => Box::new(RandomFailures::from_rng(*t, failure_rng)),
        };
        let metrics = run_simulation(
            &mut net,
            &code,
            &sched,
            model.as_mut(),
            self.rounds,
            &mut data_rng,
        )?;
        Ok((code, metrics))
    }
}

fn fraction(c: Capacity) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Header, one row per round, then a `# summary` footer whose counters are
/// the column sums.
pub fn render_report(metrics: &SimulationMetrics) -> String {
    let mut s = String::new();
    s.push_str(REPORT_HEADER);
    s.push('\n');
    for rec in &metrics.rounds {
        let r = &rec.report;
        let failed = if r.failed.is_empty() {
            "-".to_string()
        } else {
            r.failed.iter().join(";")
        };
        let cap = rec.capacity();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.round,
            failed,
            r.outcome,
            r.queries_sent,
            r.xor_operations,
            r.transmissions,
            cap.numer(),
            cap.denom()
        );
    }
    let _ = writeln!(s, "{}", summary_line(metrics));
    s
}

pub fn summary_line(metrics: &SimulationMetrics) -> String {
    format!(
        "# summary rounds={} avg_capacity={} recovery_rate={} queries={} xor_ops={} transmissions={} encoded_counts={}",
        metrics.rounds.len(),
        fraction(metrics.avg_capacity),
        fraction(metrics.recovery_rate),
        metrics.total_queries,
        metrics.total_xor_operations,
        metrics.total_transmissions,
        metrics.per_connection_encoded_counts.iter().join(";"),
    )
}

fn code_summary(code: &ProtectionCode) -> String {
    format!(
        "{} {} {} {}",
        code.n(),
        code.k(),
        code.d_min(),
        code.distance_kind()
    )
}

fn construct(
    family: Family,
    n: Option<usize>,
    mu: Option<u32>,
    design_t: Option<usize>,
    shorten: &[usize],
) -> Result<ProtectionCode, CliError> {
    let need = |what: &str| CliError::Usage(format!("--{what} is required for this family"));
    let code = match family {
        Family::Parity => ProtectionCode::single_parity(n.ok_or_else(|| need("n"))?)?,
        Family::Hamming => ProtectionCode::hamming(mu.ok_or_else(|| need("mu"))?)?,
        Family::Bch => ProtectionCode::bch(
            n.ok_or_else(|| need("n"))?,
            design_t.ok_or_else(|| need("design-t"))?,
        )?,
    };
    Ok(code.shorten(shorten)?)
}

fn codegen(
    code: ProtectionCode,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let text = code.to_file_text();
    match out_path {
        Some(p) => {
            write(p, &text)?;
            let _ = writeln!(out, "{}", code_summary(&code));
        }
        None => {
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "{}", code_summary(&code));
        }
    }
    Ok(EXIT_OK)
}

fn verify(
    path: &Path,
    t: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let code = ProtectionCode::from_file_text(&read(path)?)?;
    let report = code.verify_protection(t)?;
    let _ = writeln!(
        err,
        "{code}: {} patterns of {t} erasures checked, {} unrecoverable",
        report.patterns_checked,
        report.failing_patterns.len()
    );
    for p in &report.failing_patterns {
        let _ = writeln!(out, "{p}");
    }
    Ok(if report.recoverable() {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    })
}

fn simulate(config: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let base = config.parent().unwrap_or(Path::new("."));
    let cfg = ScenarioConfig::parse(&read(config)?, base)?;
    let (_, metrics) = cfg.run()?;
    let report = render_report(&metrics);
    match out_path.or(cfg.output.as_deref()) {
        Some(p) => {
            write(p, &report)?;
            let _ = writeln!(out, "{}", summary_line(&metrics));
        }
        None => {
            let _ = out.write_all(report.as_bytes());
        }
    }
    let violated = metrics.symbol_errors > 0
        || metrics
            .rounds
            .iter()
            .any(|r| r.report.outcome == Outcome::Unrecoverable);
    Ok(if violated { EXIT_VIOLATED } else { EXIT_OK })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Codegen {
            family,
            n,
            mu,
            design_t,
            shorten,
            out: out_path,
        } => construct(family, n, mu, design_t, &shorten)
            .and_then(|code| codegen(code, out_path.as_deref(), out, err)),
        Command::Verify { code, t } => verify(&code, t, out, err),
        Command::Simulate {
            config,
            out: out_path,
        } => simulate(&config, out_path.as_deref(), out),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_USAGE
    })
}
