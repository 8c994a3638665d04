//! Command-line front end: load presheaves from JSON, run the verification
//! suites, compute resolutions and sheafifications, and emit JSON reports.
//!
//! Exit codes: 0 pass, 1 check failure, 2 size or site bound, 3 parse error,
//! 4 functor-law violation, 64 usage error.

pub mod io;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use condensed::finset::FinSet;
use condensed::plus::{sharp, sharp_oracle_iso};
use condensed::presheaf::{check_star, check_times, constant, random_presheaf, representable, CheckReport, Presheaf};
use condensed::resolution::Resolution;
use condensed::site::Site;
use condensed::stone::{enumerate_ultrafilters, BetaConfig};
use serde_json::json;

use report::{ErrorInfo, Report, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] condensed::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use condensed::Error as E;
        match self {
            CliError::Core(E::SizeBoundExceeded { .. } | E::BoundViolation(_)) => 2,
            CliError::Core(E::FunctorLawViolation(_)) => 4,
            CliError::Core(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 3,
            CliError::Usage(_) => 64,
        }
    }

    fn kind(&self) -> &'static str {
        use condensed::Error as E;
        match self {
            CliError::Core(E::SizeBoundExceeded { .. } | E::BoundViolation(_)) => "bounds",
            CliError::Core(E::FunctorLawViolation(_)) => "functor-law",
            CliError::Core(_) => "failure",
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "condensed",
    version,
    about = "Finite-scale condensed sets: ultrafilters, resolutions, descent and sheafification"
)]
pub struct Cli {
    /// Add wall-clock time to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the ultrafilters on {0, ..., N-1} by brute force.
    Ultrafilters {
        #[arg(long)]
        size: usize,
        /// Largest size for which enumeration is allowed (at most 5).
        #[arg(long, default_value_t = condensed::stone::DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Compute the standard free resolution of {0, ..., N-1}.
    Resolve {
        #[arg(long)]
        size: usize,
    },
    /// Run the product and descent checks on a presheaf file.
    Check { file: PathBuf },
    /// Sheafify a presheaf file and compare with the closed form.
    Sheafify {
        file: PathBuf,
        /// Where to write the sheafified presheaf.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite (`all` runs every suite).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random cases for randomized suites.
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Write an example presheaf document.
    Fixture {
        kind: FixtureKind,
        /// T for `representable`, the value size for `constant`.
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest value size for `random`.
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = 4)]
        max_card: usize,
        #[arg(long, default_value_t = 2)]
        max_cover_size: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureKind {
    /// `X ↦ Hom(X, T)`
    Representable,
    /// The same set at every object.
    Constant,
    /// A seeded random presheaf.
    Random,
}

/// What a run prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses arguments and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let echo = echo(&cli.command);
    let (mut report, extra) = match execute(&cli.command, &echo) {
        Ok(r) => r,
        Err(e) => {
            let mut report = Report::new(echo);
            report.passed = false;
            report.error = Some(ErrorInfo { kind: e.kind(), message: e.to_string() });
            let code = e.exit_code();
            return Outcome { stdout: report.to_json_string(), stderr: format!("error: {e}\n"), code };
        }
    };
    if let Some(doc) = extra {
        // Fixtures print the document itself rather than a report.
        return Outcome { stdout: doc, stderr: String::new(), code: 0 };
    }
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    let code = if report.passed { 0 } else { 1 };
    Outcome { stdout: report.to_json_string(), stderr: String::new(), code }
}

fn echo(cmd: &Command) -> String {
    match cmd {
        Command::Ultrafilters { size, bound } => format!("ultrafilters --size {size} --bound {bound}"),
        Command::Resolve { size } => format!("resolve --size {size}"),
        Command::Check { file } => format!("check {}", file.display()),
        Command::Sheafify { file, output } => match output {
            Some(o) => format!("sheafify {} --output {}", file.display(), o.display()),
            None => format!("sheafify {}", file.display()),
        },
        Command::Verify { suite, seed, cases } => match cases {
            Some(c) => format!("verify --suite {suite} --seed {seed} --cases {c}"),
            None => format!("verify --suite {suite} --seed {seed}"),
        },
        Command::Fixture { kind, .. } => format!("fixture {kind:?}").to_lowercase(),
    }
}

fn read_presheaf(path: &Path) -> Result<Presheaf, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    io::parse_presheaf(&text)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn verdict_of(report: &CheckReport) -> Verdict {
    let mut v = Verdict::new(report.check);
    v.cases = 1;
    if let Some(w) = report.witnesses.first() {
        v.fail(format!("{}: {}", w.context, w.failure));
    }
    v.notes = report.notes.clone();
    v
}

/// Runs a command; the second component is a document to print verbatim.
fn execute(cmd: &Command, echo: &str) -> Result<(Report, Option<String>), CliError> {
    let mut report = Report::new(echo);
    match cmd {
        Command::Ultrafilters { size, bound } => {
            let config = BetaConfig::with_bound(*bound)?;
            let us = enumerate_ultrafilters(&FinSet::canonical(*size), &config)?;
            let mut v = Verdict::new("principal");
            v.cases = us.len();
            if let Some(u) = us.iter().find(|u| !u.is_principal()) {
                v.fail(format!("non-principal ultrafilter with {} members", u.family().members().count()));
            }
            report.push(v);
            report.data = Some(json!({
                "size": size,
                "count": us.len(),
                "generators": us.iter().map(|u| u.generator()).collect::<Vec<_>>(),
            }));
        }
        Command::Resolve { size } => {
            let r = Resolution::new(&FinSet::canonical(*size))?;
            let mut v = Verdict::new("coequalizer");
            v.cases = 1;
            match r.verify_coequalizer() {
                Ok(_) => {}
                Err(e) => v.fail(e.to_string()),
            }
            report.push(v);
            report.data = Some(json!({
                "x": io::set_to_json(r.x()),
                "b": io::set_to_json(r.b().carrier()),
                "b_tilde": io::set_to_json(&r.btilde().apex),
                "b2": io::set_to_json(r.b2().carrier()),
                "xi": io::map_to_json(r.xi()),
                "pi1": io::map_to_json(r.pi1()),
                "pi2": io::map_to_json(r.pi2()),
            }));
        }
        Command::Check { file } => {
            let f = read_presheaf(file)?;
            report.push(verdict_of(&check_times(&f)));
            report.push(verdict_of(&check_star(&f)));
        }
        Command::Sheafify { file, output } => {
            let f = read_presheaf(file)?;
            let sh = sharp(&f)?;
            let mut oracle = Verdict::new("oracle");
            oracle.cases = 1;
            if let Err(e) = sharp_oracle_iso(&f, &sh) {
                oracle.fail(e.to_string());
            }
            report.push(oracle);
            report.push(verdict_of(&check_times(&sh.presheaf)));
            report.push(verdict_of(&check_star(&sh.presheaf)));
            report.data = Some(json!({
                "unit_is_iso": sh.unit.is_iso(),
                "value_sizes": sh.presheaf.values().iter().map(FinSet::len).collect::<Vec<_>>(),
            }));
            let text = io::presheaf_to_string(&sh.presheaf);
            match output {
                Some(path) => write_file(path, &text)?,
                None => {
                    report.data.as_mut().expect("set above")["presheaf"] =
                        serde_json::to_value(io::presheaf_to_doc(&sh.presheaf)).expect("documents serialize")
                }
            }
        }
        Command::Verify { suite, seed, cases } => {
            let selected: Vec<&suites::Suite> = if suite == "all" {
                suites::SUITES.iter().collect()
            } else {
                vec![suites::find(suite).ok_or_else(|| {
                    let names: Vec<_> = suites::SUITES.iter().map(|s| s.name).collect();
                    CliError::Usage(format!("unknown suite {suite:?}; known suites: all, {}", names.join(", ")))
                })?]
            };
            report.seed = Some(*seed);
            for s in selected {
                let mut v = s.run(*seed, *cases);
                v.notes.insert(0, s.description.to_string());
                report.push(v);
            }
        }
        Command::Fixture { kind, size, seed, bound, max_card, max_cover_size, output } => {
            let site = Site::new(*max_card, *max_cover_size)?;
            let f = match kind {
                FixtureKind::Representable => representable(&site, *size)?,
                FixtureKind::Constant => constant(&site, &FinSet::canonical(*size))?,
                FixtureKind::Random => random_presheaf(&site, *seed, *bound)?,
            };
            let text = io::presheaf_to_string(&f);
            return match output {
                Some(path) => {
                    write_file(path, &text)?;
                    Ok((report, Some(String::new())))
                }
                None => Ok((report, Some(text))),
            };
        }
    }
    Ok((report, None))
}
