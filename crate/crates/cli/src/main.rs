//! `qmckay`: command-line driver for the exact correlator computations.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmckay::fracbern::DecoratedTree;
use qmckay::group::Family;
use qmckay::io::{TableKind, CACHE_ENV};
use qmckay::qrr::Route;
use qmckay::wdvv::Mode;
use qmckay::{Error, Exec};
use report::RunReport;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const MAX_N: u32 = 16;
const MAX_LEN: u32 = 8;

#[derive(Parser)]
#[command(name = "qmckay", version, about = "Exact genus-0 correlators of binary dihedral orbifolds")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached correlator tables.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// JSON report (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Plain-text report.
    #[arg(long, global = true)]
    table: bool,
    /// Lift the size guards on n and lengths.
    #[arg(long, global = true)]
    force: bool,
    /// Run every loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Bdn,
    Dn,
    Cyclic,
}

impl From<Group> for Family {
    fn from(g: Group) -> Family {
        match g {
            Group::Bdn => Family::BinaryDihedral,
            Group::Dn => Family::Dihedral,
            Group::Cyclic => Family::Cyclic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Conjectural,
    WdvvSolved,
    Untwisted,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    Paper,
    Generic,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum HodgeMode {
    Lthe,
    Sequential,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Gamma1,
    Gamma2,
    Fork,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugacy classes and character table.
    Chars {
        #[arg(long, value_enum, default_value = "bdn")]
        group: Group,
        #[arg(long)]
        n: u32,
    },
    /// Correlator table keyed by insertion counts over the non-unit classes.
    Correlators {
        #[arg(long, value_enum, default_value = "bdn")]
        group: Group,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        max_len: u32,
        #[arg(long, value_enum, default_value = "conjectural")]
        kind: Kind,
    },
    /// WDVV residuals of the conjectural table.
    WdvvCheck {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 5)]
        max_len: u32,
    },
    /// Solve WDVV by induction from the seed correlators and compare with the formula.
    WdvvSolve {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 5)]
        max_len: u32,
        #[arg(long, value_enum, default_value = "paper")]
        mode: SolveMode,
    },
    /// `<e_b^{2m}>` from the Chern-character expansion.
    Hodge {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "lthe")]
        mode: HodgeMode,
        /// Fail unless the value equals the closed form.
        #[arg(long)]
        check_closed_form: bool,
    },
    /// Decorated tree sums of Bernoulli values.
    BernoulliGraph {
        #[arg(long, value_enum, conflicts_with = "tree")]
        preset: Option<Preset>,
        /// Tree as JSON: {"vertices":[..],"edges":[{"u":..,"v":..,"decoration":[..]}]}.
        #[arg(long)]
        tree: Option<String>,
        /// Values of n to evaluate, e.g. "2-6" or "3,5,8".
        #[arg(long, default_value = "2-8")]
        n: String,
        /// Fit points for the Laurent fit.
        #[arg(long)]
        fit: Option<String>,
        /// Holdout points for the Laurent fit.
        #[arg(long)]
        holdout: Option<String>,
    },
    /// Run every consistency check.
    VerifyAll {
        #[arg(long, default_value = "4-6")]
        n_range: String,
        #[arg(long, default_value_t = 5)]
        max_length: u32,
        /// Perturb the reference table so that checks fail.
        #[arg(long)]
        sabotage: bool,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::ParamTooSmall(_) | Error::UnsupportedPair(_) | Error::InvalidTree(_) => Failure::Usage(e.to_string()),
            e => Failure::Run(e),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (i64, i64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_u32s(s: &str) -> Result<Vec<u32>, Failure> {
    parse_list(s)?
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| Failure::Usage(format!("{x} is negative"))))
        .collect()
}

fn guard(force: bool, n: u32, len: u32) -> Result<(), Failure> {
    if force {
        return Ok(());
    }
    if n > MAX_N {
        return Err(Failure::Usage(format!("n = {n} exceeds {MAX_N}; pass --force to run anyway")));
    }
    if len > MAX_LEN {
        return Err(Failure::Usage(format!("length {len} exceeds {MAX_LEN}; pass --force to run anyway")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<RunReport, Failure> {
    let g = &cli.global;
    let exec = if g.sequential { Exec::Seq } else { Exec::default() };
    let cache = g.cache_dir.as_deref();
    let rep = match &cli.cmd {
        &Cmd::Chars { group, n } => {
            guard(g.force, n, 0)?;
            commands::chars(group.into(), n)?
        }
        &Cmd::Correlators { group, n, max_len, kind } => {
            guard(g.force, n, max_len)?;
            let kind = match kind {
                Kind::Conjectural => TableKind::Conjectural,
                Kind::WdvvSolved => TableKind::WdvvSolved,
                Kind::Untwisted => TableKind::Untwisted,
            };
            commands::correlators(group.into(), n, max_len, kind, cache, exec)?
        }
        &Cmd::WdvvCheck { n, max_len } => {
            guard(g.force, n, max_len)?;
            commands::wdvv_check_cmd(n, max_len, cache, exec)?
        }
        &Cmd::WdvvSolve { n, max_len, mode } => {
            guard(g.force, n, max_len)?;
            let modes: &[Mode] = match mode {
                SolveMode::Paper => &[Mode::Paper],
                SolveMode::Generic => &[Mode::Generic],
                SolveMode::Both => &[Mode::Paper, Mode::Generic],
            };
            commands::wdvv_solve_cmd(n, max_len, modes, cache, exec)?
        }
        &Cmd::Hodge { n, m, mode, check_closed_form } => {
            guard(g.force, n, 2 * m)?;
            let route = match mode {
                HodgeMode::Lthe => Route::Lthe,
                HodgeMode::Sequential => Route::Sequential,
                HodgeMode::Both => Route::Both,
            };
            commands::hodge_cmd(n, m, route, check_closed_form, exec)?
        }
        Cmd::BernoulliGraph { preset, tree, n, fit, holdout } => {
            let t: DecoratedTree = match (preset, tree) {
                (Some(p), _) => commands::preset_tree(match p {
                    Preset::Gamma1 => "gamma1",
                    Preset::Gamma2 => "gamma2",
                    Preset::Fork => "fork",
                })
                .expect("known preset"),
                (None, Some(s)) => serde_json::from_str(s).map_err(|e| Failure::Usage(format!("bad --tree: {e}")))?,
                (None, None) => return Err(Failure::Usage("pass --preset or --tree".into())),
            };
            let ns = parse_u32s(n)?;
            if let Some(&bad) = ns.iter().find(|&&x| x == 0) {
                return Err(Failure::Usage(format!("n = {bad} must be positive")));
            }
            let fh = match (fit, holdout) {
                (Some(f), Some(h)) => Some((parse_list(f)?, parse_list(h)?)),
                (None, None) => None,
                _ => return Err(Failure::Usage("--fit and --holdout go together".into())),
            };
            commands::bernoulli_graph(&t, &ns, fh.as_ref().map(|(f, h)| (f.as_slice(), h.as_slice())))?
        }
        Cmd::VerifyAll { n_range, max_length, sabotage } => {
            let ns = parse_u32s(n_range)?;
            for &n in &ns {
                guard(g.force, n, *max_length)?;
            }
            commands::verify_all(&commands::VerifyOptions {
                ns,
                max_len: *max_length,
                sabotage: *sabotage,
                cache,
                exec,
            })?
        }
    };
    Ok(rep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let rep = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = if cli.global.table { rep.to_table() } else { rep.to_json() };
    let written = match &cli.global.out {
        Some(p) => std::fs::write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    eprintln!("wall time {:.3}s", start.elapsed().as_secs_f64());
    if rep.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
