//! The `ismatch` command-line surface.
//!
//! Subcommands: `normalize`, `match`, `gen-base`, `gen-testset`,
//! `evaluate`, `sweep`, `compare`. Status and timing go to stderr;
//! stdout and output files carry only deterministic data, so repeated
//! runs with the same flags and seeds are byte-identical regardless of
//! the worker count.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ismatch_core::{normalize_name, MatchParams};

use crate::dataset::{generate_test_set, BaseSet, ErrorType, TestSet};
use crate::files::{load_frequency, load_rules, ToolError};
use crate::harness::{
    compare_algorithms, generate_synthetic_base, parameter_sweep, success_match_percentage,
    Algorithm, Evaluator, MatcherSpec,
};
use crate::report::{
    comparison_entries, render_comparison, render_sweep, sweep_entries, ReportFile,
};

#[derive(Parser, Debug)]
#[command(
    name = "ismatch",
    version,
    about = "Fuzzy matching for Arabic personal names: standardization, \
             similarity scoring, synthetic test sets, and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command that standardizes names.
#[derive(Args, Debug, Clone)]
pub struct RulesOpt {
    /// Standardization rules file (default: built-in rules)
    #[arg(long, env = "ISMATCH_RULES")]
    pub rules: Option<PathBuf>,
}

/// Flags shared by every command that scores names.
#[derive(Args, Debug, Clone)]
pub struct SpecOpts {
    /// Scoring algorithm: hybrid, basic-levenshtein, token-levenshtein,
    /// jaccard, tfidf, soft-tfidf, jaro-winkler, monge-elkan
    #[arg(long, default_value = "hybrid")]
    pub algorithm: String,

    /// Frequency weighting factor of the hybrid metric, in [0, 1]
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    /// Middle-position weight of the hybrid metric, in [0, 1]
    #[arg(long, default_value_t = 0.7)]
    pub beta: f64,

    /// Token-cost clipping threshold of the hybrid metric, in [0, 1]
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,

    /// CLOSE threshold of Soft-TFIDF, in [0, 1]
    #[arg(long, default_value_t = 0.9)]
    pub soft_theta: f64,

    /// Frequency table file (default: built-in common-name table)
    #[arg(long)]
    pub freq: Option<PathBuf>,
}

impl SpecOpts {
    fn spec(&self) -> Result<MatcherSpec, ToolError> {
        let algorithm = Algorithm::from_str(&self.algorithm)?;
        let params = MatchParams::new(self.alpha, self.beta, self.theta)
            .map_err(|e| ToolError::param(e.to_string()))?;
        let mut spec = match algorithm {
            Algorithm::Hybrid => MatcherSpec::hybrid(params),
            other => MatcherSpec::baseline(other),
        };
        spec.params = params;
        spec.soft_theta = self.soft_theta;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Standardize a B_ID,BName file; writes B_ID,normalized rows
    Normalize {
        /// Input file of B_ID,BName rows
        #[arg(long)]
        input: PathBuf,
        /// Output path
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        rules: RulesOpt,
    },

    /// Rank base names against one query name
    Match {
        /// The query name (raw text; it is standardized first)
        query: String,
        /// Base set file of B_ID,BName rows
        #[arg(long)]
        base: PathBuf,
        /// Number of results to print
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        #[command(flatten)]
        spec: SpecOpts,
        #[command(flatten)]
        rules: RulesOpt,
    },

    /// Generate a synthetic base set of unique multi-token names
    GenBase {
        /// Number of names
        #[arg(long)]
        n: usize,
        /// Size of the rare-token pool (minimum 20)
        #[arg(long, default_value_t = 400)]
        pool_size: usize,
        /// Generator seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Frequency table steering the common-token mix
        #[arg(long)]
        freq: Option<PathBuf>,
        /// Output path
        #[arg(long)]
        out: PathBuf,
    },

    /// Sample base names and distort each with one error type
    GenTestset {
        /// Base set file
        #[arg(long)]
        base: PathBuf,
        /// one-char, two-char, omit-first, omit-second, omit-third,
        /// or omit-second-and-third
        #[arg(long)]
        error_type: String,
        /// Number of test rows
        #[arg(long, default_value_t = 300)]
        n: usize,
        /// Generator seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        rules: RulesOpt,
    },

    /// Top-1 success of one matcher over one test set
    Evaluate {
        /// Base set file
        #[arg(long)]
        base: PathBuf,
        /// Test set file
        #[arg(long)]
        test: PathBuf,
        /// Worker threads (0 = all available)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Report file to write
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        spec: SpecOpts,
        #[command(flatten)]
        rules: RulesOpt,
    },

    /// Hybrid success over a theta x beta grid
    Sweep {
        /// Base set file
        #[arg(long)]
        base: PathBuf,
        /// Test set file
        #[arg(long)]
        test: PathBuf,
        /// Fixed frequency weighting factor
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Comma-separated beta values
        #[arg(long, default_value = "0,0.1,0.3,0.5,0.7,1.0")]
        beta_grid: String,
        /// Comma-separated theta values
        #[arg(long, default_value = "0,0.1,0.3,0.5,0.7,1.0")]
        theta_grid: String,
        /// Frequency table file
        #[arg(long)]
        freq: Option<PathBuf>,
        /// Worker threads (0 = all available)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Report file to write
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        rules: RulesOpt,
    },

    /// Success of several matchers across several test sets
    Compare {
        /// Base set file
        #[arg(long)]
        base: PathBuf,
        /// Test set files (repeat the flag, one per error type)
        #[arg(long, required = true)]
        test: Vec<PathBuf>,
        /// Comma-separated algorithms to run
        #[arg(
            long,
            default_value = "hybrid,basic-levenshtein,monge-elkan,jaro-winkler,soft-tfidf"
        )]
        algorithms: String,
        #[command(flatten)]
        spec: SpecOpts,
        /// Worker threads (0 = all available)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Report file to write
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        rules: RulesOpt,
    },
}

fn parse_grid(text: &str) -> Result<Vec<f64>, ToolError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| ToolError::param(format!("invalid grid value {s:?}")))
        })
        .collect()
}

pub fn run(cli: Cli) -> Result<(), ToolError> {
    match cli.command {
        Command::Normalize { input, out, rules } => cmd_normalize(&input, &out, &rules),
        Command::Match {
            query,
            base,
            top_k,
            spec,
            rules,
        } => cmd_match(&query, &base, top_k, &spec, &rules),
        Command::GenBase {
            n,
            pool_size,
            seed,
            freq,
            out,
        } => cmd_gen_base(n, pool_size, seed, freq.as_deref(), &out),
        Command::GenTestset {
            base,
            error_type,
            n,
            seed,
            out,
            rules,
        } => cmd_gen_testset(&base, &error_type, n, seed, &out, &rules),
        Command::Evaluate {
            base,
            test,
            workers,
            out,
            spec,
            rules,
        } => cmd_evaluate(&base, &test, workers, out.as_deref(), &spec, &rules),
        Command::Sweep {
            base,
            test,
            alpha,
            beta_grid,
            theta_grid,
            freq,
            workers,
            out,
            rules,
        } => cmd_sweep(
            &base,
            &test,
            alpha,
            &beta_grid,
            &theta_grid,
            freq.as_deref(),
            workers,
            out.as_deref(),
            &rules,
        ),
        Command::Compare {
            base,
            test,
            algorithms,
            spec,
            workers,
            out,
            rules,
        } => cmd_compare(
            &base,
            &test,
            &algorithms,
            &spec,
            workers,
            out.as_deref(),
            &rules,
        ),
    }
}

fn cmd_normalize(
    input: &std::path::Path,
    out: &std::path::Path,
    rules: &RulesOpt,
) -> Result<(), ToolError> {
    let rules = load_rules(rules.rules.as_deref())?;
    let base = BaseSet::load(input, &rules)?;
    let mut text = String::new();
    for (rec, name) in base.records().iter().zip(base.normalized()) {
        text.push_str(&format!("{},{}\n", rec.id, name.joined()));
    }
    crate::files::write_utf8(out, &text)?;
    eprintln!("standardized {} names into {}", base.len(), out.display());
    Ok(())
}

fn cmd_match(
    query: &str,
    base_path: &std::path::Path,
    top_k: usize,
    spec_opts: &SpecOpts,
    rules: &RulesOpt,
) -> Result<(), ToolError> {
    if top_k == 0 {
        return Err(ToolError::param("--top-k must be at least 1"));
    }
    let spec = spec_opts.spec()?;
    let rules = load_rules(rules.rules.as_deref())?;
    let table = load_frequency(spec_opts.freq.as_deref())?;
    let base = BaseSet::load(base_path, &rules)?;

    let normalized = normalize_name(query, &rules);
    if normalized.is_empty() {
        return Err(ToolError::data(format!(
            "query {query:?} standardizes to no tokens"
        )));
    }
    let evaluator = Evaluator::new(spec, &base, &table)?;
    let prepared = evaluator.prepare_query(normalized)?;
    for (idx, score) in evaluator.rank(&prepared).into_iter().take(top_k) {
        let rec = &base.records()[idx];
        println!("{}\t{}\t{:.6}", rec.id, rec.raw, score);
    }
    Ok(())
}

fn cmd_gen_base(
    n: usize,
    pool_size: usize,
    seed: u64,
    freq: Option<&std::path::Path>,
    out: &std::path::Path,
) -> Result<(), ToolError> {
    let table = load_frequency(freq)?;
    let base = generate_synthetic_base(n, pool_size, &table, seed)?;
    base.write(out)?;
    eprintln!("wrote {} synthetic names to {}", base.len(), out.display());
    Ok(())
}

fn cmd_gen_testset(
    base_path: &std::path::Path,
    error_type: &str,
    n: usize,
    seed: u64,
    out: &std::path::Path,
    rules: &RulesOpt,
) -> Result<(), ToolError> {
    let error_type = ErrorType::from_str(error_type)?;
    let rules = load_rules(rules.rules.as_deref())?;
    let base = BaseSet::load(base_path, &rules)?;
    let test = generate_test_set(&base, error_type, n, seed)?;
    test.write(out)?;
    eprintln!(
        "wrote {} {} rows to {}",
        test.rows.len(),
        error_type,
        out.display()
    );
    Ok(())
}

fn base_headers(base: &BaseSet, test: Option<&TestSet>) -> Vec<(String, String)> {
    let mut header = vec![("base_checksum".to_string(), base.checksum())];
    if let Some(test) = test {
        header.push((
            "test_error_type".to_string(),
            test.error_label().to_string(),
        ));
        header.push(("test_seed".to_string(), test.seed.to_string()));
    }
    header
}

fn cmd_evaluate(
    base_path: &std::path::Path,
    test_path: &std::path::Path,
    workers: usize,
    out: Option<&std::path::Path>,
    spec_opts: &SpecOpts,
    rules: &RulesOpt,
) -> Result<(), ToolError> {
    let spec = spec_opts.spec()?;
    let rules = load_rules(rules.rules.as_deref())?;
    let table = load_frequency(spec_opts.freq.as_deref())?;
    let base = BaseSet::load(base_path, &rules)?;
    let test = TestSet::load(test_path)?;

    let started = Instant::now();
    let eval = success_match_percentage(&test, &base, &spec, &table, workers)?;
    let elapsed = started.elapsed();

    println!(
        "{} on {}: {}/{} = {:.2}%",
        eval.algorithm,
        eval.error_type,
        eval.true_matches,
        eval.n,
        eval.success() * 100.0
    );
    eprintln!("evaluated {} rows in {elapsed:.2?}", eval.n);
    if let Some(path) = out {
        let mut header = vec![("command".to_string(), "evaluate".to_string())];
        header.extend(base_headers(&base, Some(&test)));
        ReportFile::new(header, vec![eval]).write(path)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    base_path: &std::path::Path,
    test_path: &std::path::Path,
    alpha: f64,
    beta_grid: &str,
    theta_grid: &str,
    freq: Option<&std::path::Path>,
    workers: usize,
    out: Option<&std::path::Path>,
    rules: &RulesOpt,
) -> Result<(), ToolError> {
    let beta_grid = parse_grid(beta_grid)?;
    let theta_grid = parse_grid(theta_grid)?;
    let rules = load_rules(rules.rules.as_deref())?;
    let table = load_frequency(freq)?;
    let base = BaseSet::load(base_path, &rules)?;
    let test = TestSet::load(test_path)?;

    let started = Instant::now();
    let grid = parameter_sweep(
        &test,
        &base,
        alpha,
        &beta_grid,
        &theta_grid,
        &table,
        workers,
    )?;
    let elapsed = started.elapsed();

    print!("{}", render_sweep(&grid));
    eprintln!(
        "swept {} cells in {elapsed:.2?}",
        beta_grid.len() * theta_grid.len()
    );
    if let Some(path) = out {
        let mut header = vec![
            ("command".to_string(), "sweep".to_string()),
            ("alpha".to_string(), alpha.to_string()),
        ];
        header.extend(base_headers(&base, Some(&test)));
        ReportFile::new(header, sweep_entries(&grid)).write(path)?;
    }
    Ok(())
}

fn cmd_compare(
    base_path: &std::path::Path,
    test_paths: &[PathBuf],
    algorithms: &str,
    spec_opts: &SpecOpts,
    workers: usize,
    out: Option<&std::path::Path>,
    rules: &RulesOpt,
) -> Result<(), ToolError> {
    let specs: Vec<MatcherSpec> = algorithms
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            let mut opts = spec_opts.clone();
            opts.algorithm = name.to_string();
            opts.spec()
        })
        .collect::<Result<_, _>>()?;
    let rules = load_rules(rules.rules.as_deref())?;
    let table = load_frequency(spec_opts.freq.as_deref())?;
    let base = BaseSet::load(base_path, &rules)?;
    let tests: Vec<TestSet> = test_paths
        .iter()
        .map(|p| TestSet::load(p))
        .collect::<Result<_, _>>()?;

    let started = Instant::now();
    let comparison = compare_algorithms(&tests, &base, &specs, &table, workers)?;
    let elapsed = started.elapsed();

    print!("{}", render_comparison(&comparison));
    eprintln!(
        "compared {} matchers over {} test sets in {elapsed:.2?}",
        specs.len(),
        tests.len()
    );
    if let Some(path) = out {
        let mut header = vec![("command".to_string(), "compare".to_string())];
        header.extend(base_headers(&base, None));
        for test in &tests {
            header.push((
                format!("test_{}", test.error_label()),
                format!("seed={}", test.seed),
            ));
        }
        ReportFile::new(header, comparison_entries(&comparison)).write(path)?;
    }
    Ok(())
}
