//! Command-line front end.
//!
//! Exit codes: `check` returns 0 when the pattern is normal and 1 when it is
//! not; `search` returns 0 when the search completed and 3 when the budget ran
//! out; `verify` returns 0 for a verified or degenerate verdict, 3 when
//! inconclusive and 1 when falsified. Errors of any subcommand return 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::canon::{canonical_key, orbit_size};
use crate::classify::classify_normal_binary;
use crate::constructions::{extremal, with_k_classes};
use crate::error::{Error, Result};
use crate::format::{parse_pattern, write_pattern};
use crate::normality::{
    is_normal_binary_assignments, is_normal_lemma2, is_normal_random_specialization, is_normal_symbolic,
};
use crate::pattern::Pattern;
use crate::search::{run_search, verify_theorem, SearchConfig, Strategy, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "entry-patterns", version)]
#[command(about = "Normality tests, canonical forms and exhaustive searches for entry patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Lemma2,
    Symbolic,
    Subsets,
    Random,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    ExhaustiveRgs,
    PrunedDfs,
    Lemma6Reduction,
    CatalogCover,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::ExhaustiveRgs => Strategy::ExhaustiveRgs,
            StrategyArg::PrunedDfs => Strategy::PrunedDfs,
            StrategyArg::Lemma6Reduction => Strategy::Lemma6Reduction,
            StrategyArg::CatalogCover => Strategy::CatalogCover,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a pattern file for normality
    Check {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lemma2")]
        oracle: Oracle,
        /// Seed for the random-specialization oracle
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random specializations
        #[arg(long, default_value_t = 32)]
        trials: usize,
    },
    /// Print the canonical form of a pattern file and the permutation reaching it
    Canon {
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
    /// Print the extremal pattern of order n, or a pattern with k classes
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Classify the normal 0-1 matrices of order n with a given number of ones
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ones: usize,
        #[arg(long)]
        json: bool,
    },
    /// Search for nonsymmetric normal patterns with many classes
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long = "min-k", default_value_t = 1)]
        min_k: usize,
        #[arg(long, value_enum, default_value = "pruned-dfs")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 2_000_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Catalog cover: smallest class size considered
        #[arg(long = "min-class-size", default_value_t = 1)]
        min_class_size: usize,
        /// Report symmetric patterns too
        #[arg(long = "allow-symmetric")]
        allow_symmetric: bool,
        /// Disable prefix-minimality pruning (pruned-dfs)
        #[arg(long = "no-symmetry-reduction")]
        no_symmetry_reduction: bool,
        /// Seed for sampled merge checks on witnesses
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Verify the class-count bound and uniqueness of the extremal pattern
    Verify {
        #[arg(long)]
        n: usize,
        /// Node budget of each search
        #[arg(long, default_value_t = 2_000_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        json: bool,
    },
}

fn read_pattern(path: &Path) -> Result<Pattern> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    parse_pattern(&text)
}

fn check(out: &mut dyn Write, file: &Path, oracle: Oracle, seed: u64, trials: usize) -> Result<i32> {
    let p = read_pattern(file)?;
    let mut verdicts = Vec::new();
    let wanted = |o: Oracle| oracle == o || oracle == Oracle::All;
    if wanted(Oracle::Lemma2) {
        verdicts.push(("lemma2", is_normal_lemma2(&p)));
    }
    if wanted(Oracle::Symbolic) {
        verdicts.push(("symbolic", is_normal_symbolic(&p)));
    }
    if wanted(Oracle::Subsets) {
        verdicts.push(("subsets", is_normal_binary_assignments(&p)?));
    }
    if wanted(Oracle::Random) {
        verdicts.push(("random", is_normal_random_specialization(&p, trials, seed)?));
    }
    let normal = verdicts[0].1;
    write_out(out, format!(
        "order: {}\nclasses: {}\nsymmetric: {}\n",
        p.order(),
        p.class_count(),
        p.is_symmetric()
    ))?;
    if verdicts.len() > 1 {
        for (name, v) in &verdicts {
            write_out(out, format!("normal.{name}: {v}\n"))?;
        }
        if verdicts.iter().any(|(_, v)| *v != normal) {
            return Err(Error::Counterexample("the oracles disagree".to_string()));
        }
    }
    write_out(out, format!("normal: {normal}\n"))?;
    Ok(if normal { EXIT_OK } else { EXIT_NEGATIVE })
}

fn canon(out: &mut dyn Write, file: &Path) -> Result<i32> {
    let p = read_pattern(file)?;
    let key = canonical_key(&p)?;
    let witness: Vec<String> = key.witness.iter().map(usize::to_string).collect();
    let form = Pattern::from_rgs(p.order(), key.cells)?;
    write_out(out, format!(
        "# permutation: {}\n# members: {}\n{}",
        witness.join(" "),
        orbit_size(&p)?,
        write_pattern(&form)
    ))?;
    Ok(EXIT_OK)
}

fn write_out(out: &mut dyn Write, text: String) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::domain(format!("cannot write output: {e}")))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Check {
            file,
            oracle,
            seed,
            trials,
        } => check(out, &file, oracle, seed, trials),
        Command::Canon { file } => canon(out, &file),
        Command::Extremal { n, k } => {
            let p = match k {
                Some(k) => with_k_classes(n, k)?,
                None => extremal(n)?,
            };
            write_out(out, write_pattern(&p))?;
            Ok(EXIT_OK)
        }
        Command::Classify { n, ones, json } => {
            let r = classify_normal_binary(n, ones)?;
            let text = if json {
                serde_json::to_string_pretty(&r).expect("reports serialize") + "\n"
            } else {
                r.to_text()
            };
            write_out(out, text)?;
            Ok(EXIT_OK)
        }
        Command::Search {
            n,
            min_k,
            strategy,
            budget,
            workers,
            min_class_size,
            allow_symmetric,
            no_symmetry_reduction,
            seed,
            json,
        } => {
            let config = SearchConfig::new(n, strategy.into())
                .min_classes(min_k)
                .budget(budget)
                .workers(workers)
                .min_class_size(min_class_size)
                .nonsymmetric(!allow_symmetric)
                .symmetry_reduction(!no_symmetry_reduction)
                .seed(seed);
            let r = run_search(&config)?;
            write_out(out, if json { r.to_json() + "\n" } else { r.to_text() })?;
            Ok(if r.completed { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Command::Verify {
            n,
            budget,
            workers,
            json,
        } => {
            let r = verify_theorem(n, budget, workers)?;
            write_out(out, if json { r.to_json() + "\n" } else { r.to_text() })?;
            Ok(match r.verdict {
                Verdict::Verified | Verdict::Degenerate => EXIT_OK,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
                Verdict::Falsified => EXIT_NEGATIVE,
            })
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
