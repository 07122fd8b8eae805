//! The `trades` command line.
//!
//! Exit status: 0 on success, 1 when the result is negative or absent
//! (invalid trade, no witness, inconclusive search), 2 on usage errors and
//! unreadable input. Documents go to stdout, diagnostics to stderr.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::catalog;
use crate::constructor::{decompose_3homogeneous, existence_verdict, Construction, Constructor, ConstructorOptions};
use crate::error::Error;
use crate::format::{parse_latin_text, parse_trade, sniff, write_latin_text, write_trade, Format};
use crate::latin::{latin_to_steiner, search_latin_trade, verify_latin_trade, LatinSearchOutcome};
use crate::search::{exhaustive_search, SearchSpec};
use crate::verify::{verify_homogeneous, verify_steiner, verify_trade, Verdict};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Parser, Debug)]
#[command(name = "trades", version, about = "Construct, verify and search 3-way homogeneous Steiner trades")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    pub format: Format,
    /// Print element labels starting from 1.
    #[arg(long, global = true)]
    pub one_based: bool,
    /// Node budget for each search.
    #[arg(long, global = true, env = "TRADE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker cap. Searches currently run on one thread, so this is accepted and ignored.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|_| format!("expected `text` or `json`, got {s:?}"))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a trade (or with --latin, a Latin trade).
    Verify {
        /// Input file; stdin when absent or `-`.
        file: Option<PathBuf>,
        /// Also require every t-subset at most once per collection.
        #[arg(long)]
        steiner: bool,
        /// Also require every foundation element in exactly d blocks per collection.
        #[arg(long)]
        d: Option<usize>,
        /// Input is a Latin trade in `latin m= d=` format.
        #[arg(long, conflicts_with_all = ["steiner", "d"])]
        latin: bool,
    },
    /// Build a 3-way d-homogeneous (v,3,2) Steiner trade.
    Construct {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        v: usize,
    },
    /// Report what is known about existence for (d, v).
    Solve {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        v: usize,
    },
    /// Enumerate Steiner trades up to isomorphism.
    Search {
        #[arg(long, default_value_t = 3)]
        mu: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        volume: usize,
        /// Required: only Steiner trades are enumerated.
        #[arg(long)]
        steiner: bool,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        max_foundation: Option<usize>,
        /// Report every labeled solution the search visits instead of one per class.
        #[arg(long)]
        no_isomorph_reduction: bool,
        /// Do not identify trades that differ only in collection order.
        #[arg(long)]
        fixed_collections: bool,
    },
    /// Search for a (3, d, m) Latin trade.
    Latin {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        /// Emit the associated Steiner trade instead of the Latin trade.
        #[arg(long)]
        steiner: bool,
    },
    /// Split a 3-homogeneous trade of volume v into pieces of volume 8 or 9.
    Decompose { file: Option<PathBuf> },
    /// Objects shipped with the library.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Re-encode a trade; the input format is detected.
    Convert { file: Option<PathBuf> },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
    Emit { name: String },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Usage-level failure: message for stderr, exit 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(e.to_string())
    }
}

/// Parse `args` (program name first) and run; returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    match dispatch(&cli, &mut io) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            2
        }
    }
}

fn read_input(file: &Option<PathBuf>, io: &mut Io) -> Result<String, Usage> {
    match file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io.stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<i32, Usage> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { file, steiner, d, latin } => {
            let input = read_input(file, io)?;
            let verdict = if *latin {
                verify_latin_trade(&parse_latin_text(&input)?)
            } else {
                let trade = parse_trade(&input, sniff(&input))?;
                let mut v = verify_trade(&trade);
                if *steiner {
                    v = v.and(verify_steiner(&trade));
                }
                if let Some(d) = d {
                    v = v.and(verify_homogeneous(&trade, *d));
                }
                v
            };
            print_verdict(&verdict, g.format, io)?;
            Ok(if verdict.is_valid() { 0 } else { 1 })
        }
        Command::Construct { d, v } => {
            let mut c = Constructor::new(ConstructorOptions { budget: g.budget, seed: g.seed });
            match c.construct(*d, *v) {
                Construction::Built(t) => {
                    io.out.write_all(write_trade(&t, g.format, g.one_based).as_bytes())?;
                    Ok(0)
                }
                Construction::Declined(verdict) => {
                    writeln!(io.err, "no witness: {verdict}")?;
                    Ok(1)
                }
                Construction::BudgetExhausted => {
                    writeln!(io.err, "budget of {} nodes exhausted before a witness was found", g.budget)?;
                    Ok(1)
                }
                Construction::NoRoute => {
                    writeln!(io.err, "existence is known but no construction route applies")?;
                    Ok(1)
                }
            }
        }
        Command::Solve { d, v } => {
            let verdict = existence_verdict(*d, *v);
            match g.format {
                Format::Text => writeln!(io.out, "{verdict}")?,
                Format::Json => writeln!(
                    io.out,
                    "{}",
                    json!({
                        "d": d,
                        "v": v,
                        "status": verdict.status.to_string(),
                        "clause": verdict.clause.id(),
                        "citation": verdict.citation(),
                    })
                )?,
            }
            Ok(if verdict.exists() { 0 } else { 1 })
        }
        Command::Search { mu, k, t, volume, steiner, d, max_foundation, no_isomorph_reduction, fixed_collections } => {
            if !steiner {
                return Err(Usage("only Steiner trades are enumerated; pass --steiner".into()));
            }
            let spec = SearchSpec {
                mu: *mu,
                k: *k,
                t: *t,
                volume: *volume,
                homogeneity: *d,
                max_foundation: *max_foundation,
                budget: g.budget,
                isomorph_reduction: !no_isomorph_reduction,
                collection_permutation: !fixed_collections,
            };
            let outcome = exhaustive_search(&spec)?;
            for trade in &outcome.trades {
                io.out.write_all(write_trade(trade, g.format, g.one_based).as_bytes())?;
            }
            writeln!(io.out, "exhausted={} classes={}", outcome.exhausted, outcome.trades.len())?;
            if !outcome.exact_classes {
                writeln!(io.err, "note: some foundations exceed the exact canonical-form cap; classes may be merged")?;
            }
            Ok(if outcome.exhausted { 0 } else { 1 })
        }
        Command::Latin { d, m, steiner } => {
            let report = search_latin_trade(*d, *m, g.budget);
            match report.outcome {
                LatinSearchOutcome::Found(triple) => {
                    if *steiner {
                        let t = latin_to_steiner(&triple)?;
                        io.out.write_all(write_trade(&t, g.format, g.one_based).as_bytes())?;
                    } else {
                        io.out.write_all(write_latin_text(&triple).as_bytes())?;
                    }
                    writeln!(io.err, "found after {} nodes", report.nodes)?;
                    Ok(0)
                }
                LatinSearchOutcome::Exhausted => {
                    writeln!(io.err, "exhausted after {} nodes: no (3,{d},{m}) Latin trade", report.nodes)?;
                    Ok(1)
                }
                LatinSearchOutcome::BudgetExhausted => {
                    writeln!(io.err, "budget of {} nodes exhausted; inconclusive", g.budget)?;
                    Ok(1)
                }
            }
        }
        Command::Decompose { file } => {
            let input = read_input(file, io)?;
            let trade = parse_trade(&input, sniff(&input))?;
            match decompose_3homogeneous(&trade) {
                Ok(pieces) => {
                    for p in &pieces {
                        io.out.write_all(write_trade(p, g.format, g.one_based).as_bytes())?;
                    }
                    Ok(0)
                }
                Err(e) => {
                    writeln!(io.err, "{e}")?;
                    Ok(1)
                }
            }
        }
        Command::Catalog { action: CatalogAction::List } => {
            for (name, description) in catalog::NAMES {
                writeln!(io.out, "{name:<12} {description}")?;
            }
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::Emit { name } } => match catalog::emit(name, g.seed) {
            Some(t) => {
                io.out.write_all(write_trade(&t, g.format, g.one_based).as_bytes())?;
                Ok(0)
            }
            None if catalog::NAMES.iter().any(|(n, _)| n == name) => {
                writeln!(io.err, "{name}: search ran out of budget")?;
                Ok(1)
            }
            None => Err(Usage(format!("unknown catalog object {name:?}; see `catalog list`"))),
        },
        Command::Convert { file } => {
            let input = read_input(file, io)?;
            let trade = parse_trade(&input, sniff(&input))?;
            io.out.write_all(write_trade(&trade, g.format, g.one_based).as_bytes())?;
            Ok(0)
        }
    }
}

fn print_verdict(v: &Verdict, format: Format, io: &mut Io) -> Result<(), Usage> {
    match format {
        Format::Text => {
            writeln!(io.out, "{}", if v.is_valid() { "valid" } else { "invalid" })?;
            for violation in v.violations() {
                writeln!(io.out, "{violation}")?;
            }
        }
        Format::Json => writeln!(io.out, "{}", serde_json::to_string(v).map_err(Error::from)?)?,
    }
    Ok(())
}
