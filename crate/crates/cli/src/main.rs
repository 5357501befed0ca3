//! `synchro` — avoiding words, reset words and exact bounds for complete
//! deterministic automata, plus a reproducible experiment harness.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, malformed files),
//! 2 computation refusal (oracle guards, retry caps, inputs the requested
//! construction cannot handle), 3 verification failure.

mod experiments;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use synchro_core::avoiding::{self, SubsetAvoidOutcome};
use synchro_core::compression::greedy_compress_to;
use synchro_core::generators::{random_automaton, Family, GeneratorSpec, DEFAULT_MAX_REJECTIONS};
use synchro_core::oracle::{self, AvoidMode, OracleLimits};
use synchro_core::pipeline::{self, PipelineBranch};
use synchro_core::{Automaton, Error, StateSet, Word};

/// Environment variable overriding the oracle's visited-node budget.
pub const MAX_NODES_ENV: &str = "SYNCHRO_MAX_ORACLE_NODES";

#[derive(Parser)]
#[command(
    name = "synchro",
    version,
    about = "Avoiding and reset words for complete deterministic automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an automaton from one of the deterministic families.
    Generate {
        /// Family: cerny, random or sink-random.
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Alphabet size (the cerny family is always binary).
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated constraints: sync, scc.
        #[arg(long)]
        require: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_REJECTIONS)]
        max_rejections: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the classification report of an automaton file.
    Info { file: PathBuf },
    /// Build a reset word.
    Reset {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: ResetMethod,
        #[command(flatten)]
        guards: GuardArgs,
    },
    /// Build avoiding words for the given states.
    Avoid {
        file: PathBuf,
        /// Comma-separated state list.
        #[arg(long)]
        states: String,
        #[arg(long, value_enum)]
        method: AvoidMethod,
        /// Treat the list as one subset to avoid entirely.
        #[arg(long)]
        subset: bool,
        #[command(flatten)]
        guards: GuardArgs,
    },
    /// Print exact bound values for a state count.
    Bounds {
        #[arg(long)]
        n: usize,
        /// Evaluate the parametrized bound at this k (default: the tuned k).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Re-check a word against an automaton.
    Verify {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Expected rank of the word.
        #[arg(long)]
        rank: Option<usize>,
        /// States that must be absent from the image of Q.
        #[arg(long)]
        avoids: Option<String>,
    },
    /// Run a CSV experiment.
    Experiment {
        #[command(subcommand)]
        experiment: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Max shortest avoiding word length per sampled automaton.
    Avoiding {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ExperimentFamily::Random)]
        family: ExperimentFamily,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        guards: GuardArgs,
    },
    /// Exact bound values and the crossover point per n.
    Bounds {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Max over states of the shortest pair-merge length.
    Pair {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Clone, Copy)]
struct GuardArgs {
    /// Oracle guard: refuse automata with more states than this.
    #[arg(long)]
    max_states: Option<usize>,
    /// Oracle guard: refuse after visiting this many image sets.
    #[arg(long)]
    max_nodes: Option<usize>,
}

impl GuardArgs {
    fn limits(&self) -> OracleLimits {
        let mut limits = OracleLimits::default();
        if let Ok(value) = std::env::var(MAX_NODES_ENV) {
            if let Ok(nodes) = value.parse() {
                limits.max_nodes = nodes;
            }
        }
        if let Some(nodes) = self.max_nodes {
            limits.max_nodes = nodes;
        }
        if let Some(states) = self.max_states {
            limits.max_states = states;
        }
        limits
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cerny,
    Random,
    SinkRandom,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ResetMethod {
    Greedy,
    Pipeline,
    Exact,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum AvoidMethod {
    Span,
    Exact,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
pub enum ExperimentFamily {
    Random,
    Cerny,
}

pub enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 1,
            CliError::Core(err) => match err {
                Error::Parse { .. } | Error::Construction(_) | Error::Precondition(_) => 1,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(path, err) => write!(f, "{}: {err}", path.display()),
            CliError::Core(err) => write!(f, "{err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Core(err)
    }
}

pub type CliResult = Result<ExitCode, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate {
            family,
            n,
            k,
            seed,
            require,
            max_rejections,
            out,
        } => generate(family, n, k, seed, require.as_deref(), max_rejections, out),
        Command::Info { file } => info(&file),
        Command::Reset { file, method, guards } => reset(&file, method, &guards),
        Command::Avoid {
            file,
            states,
            method,
            subset,
            guards,
        } => avoid(&file, &states, method, subset, &guards),
        Command::Bounds { n, k } => bounds(n, k),
        Command::Verify {
            file,
            word,
            rank,
            avoids,
        } => verify(&file, &word, rank, avoids.as_deref()),
        Command::Experiment { experiment } => match experiment {
            ExperimentCommand::Avoiding {
                n_min,
                n_max,
                samples,
                seed,
                family,
                out,
                guards,
            } => experiments::avoiding(n_min, n_max, samples, seed, family, &out, guards.limits()),
            ExperimentCommand::Bounds { n_max, out } => experiments::bounds(n_max, &out),
            ExperimentCommand::Pair {
                n_min,
                n_max,
                samples,
                seed,
                out,
            } => experiments::pair(n_min, n_max, samples, seed, &out),
        },
    }
}

pub fn load_automaton(path: &Path) -> Result<Automaton, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    Ok(Automaton::parse(&text)?)
}

fn parse_states(list: &str, n: usize, flag: &str) -> Result<StateSet, CliError> {
    let mut set = StateSet::empty(n);
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let q: usize = part
            .parse()
            .map_err(|_| CliError::Usage(format!("{flag}: {part:?} is not a state index")))?;
        if q >= n {
            return Err(CliError::Usage(format!(
                "{flag}: state {q} is out of range 0..{n}"
            )));
        }
        set.insert(q);
    }
    if set.is_empty() {
        return Err(CliError::Usage(format!("{flag}: empty state list")));
    }
    Ok(set)
}

fn generate(
    family: FamilyArg,
    n: usize,
    k: usize,
    seed: u64,
    require: Option<&str>,
    max_rejections: u64,
    out: Option<PathBuf>,
) -> CliResult {
    let family = match family {
        FamilyArg::Cerny => {
            if k != 2 {
                return Err(CliError::Usage(
                    "--k: the cerny family is binary; pass --k 2 or omit it".into(),
                ));
            }
            Family::Cerny
        }
        FamilyArg::Random => Family::Random,
        FamilyArg::SinkRandom => Family::SinkRandom,
    };
    let mut spec = GeneratorSpec::new(family, n, k, seed);
    spec.max_rejections = max_rejections;
    if let Some(require) = require {
        for token in require.split(',').filter(|t| !t.trim().is_empty()) {
            match token.trim() {
                "sync" | "synchronizing" => spec.require_synchronizing = true,
                "scc" | "strongly-connected" => spec.require_strongly_connected = true,
                other => {
                    return Err(CliError::Usage(format!(
                        "--require: unknown constraint {other:?} (expected sync, scc)"
                    )))
                }
            }
        }
    }
    let aut = random_automaton(&spec)?;
    let text = aut.to_text();
    match out {
        Some(path) => {
            fs::write(&path, text).map_err(|e| CliError::Io(path.clone(), e))?;
            println!("written={}", path.display());
            println!("n={} k={}", aut.n(), aut.k());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn info(file: &Path) -> CliResult {
    let aut = load_automaton(file)?;
    let report = aut.classify();
    println!("n={}", aut.n());
    println!("k={}", aut.k());
    println!("synchronizing={}", report.synchronizing);
    println!("strongly_connected={}", report.strongly_connected);
    match report.sink {
        Some(q) => println!("sink={q}"),
        None => println!("sink=none"),
    }
    Ok(ExitCode::SUCCESS)
}

fn branch_name(branch: PipelineBranch) -> &'static str {
    match branch {
        PipelineBranch::Avoiding => "avoiding",
        PipelineBranch::BulkCompress => "bulk-compress",
        PipelineBranch::Sink => "sink",
        PipelineBranch::GreedyFallback => "greedy-fallback",
    }
}

fn reset(file: &Path, method: ResetMethod, guards: &GuardArgs) -> CliResult {
    let aut = load_automaton(file)?;
    let k = aut.k();
    match method {
        ResetMethod::Exact => {
            let res = oracle::exact_shortest_reset(&aut, &guards.limits())?;
            println!("method=exact");
            match &res.witness {
                Some(word) => {
                    println!("length={}", word.len());
                    println!("word={}", word.to_text(k));
                }
                None => println!("length=unreachable"),
            }
            println!("explored={}", res.explored);
        }
        ResetMethod::Greedy => {
            let word = greedy_compress_to(&aut, &aut.all_states(), 1)?;
            println!("method=greedy");
            println!("length={}", word.len());
            println!("word={}", word.to_text(k));
        }
        ResetMethod::Pipeline => {
            let cert = pipeline::pipeline_reset(&aut)?;
            println!("method=pipeline");
            println!("length={}", cert.word.len());
            println!("word={}", cert.word.to_text(k));
            println!("branch={}", branch_name(cert.branch));
            println!("k={}", cert.k_used);
            println!("bound={}", cert.bound_value);
            println!("bound_decimal={}", pipeline::ratio_to_f64(&cert.bound_value));
            let trace: Vec<String> = cert
                .rank_trace
                .iter()
                .map(|(len, rank)| format!("{len}:{rank}"))
                .collect();
            println!("trace={}", trace.join(","));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn avoid(file: &Path, states: &str, method: AvoidMethod, subset: bool, guards: &GuardArgs) -> CliResult {
    let aut = load_automaton(file)?;
    let k = aut.k();
    let set = parse_states(states, aut.n(), "--states")?;
    if subset {
        return avoid_subset(&aut, &set, method, guards);
    }
    for q in set.iter() {
        let single = StateSet::singleton(aut.n(), q);
        let witness = match method {
            AvoidMethod::Exact => {
                oracle::exact_shortest_avoiding(&aut, &single, AvoidMode::SomeState, &guards.limits())?
                    .witness
            }
            AvoidMethod::Span => match avoiding::avoid_global(&aut, &single) {
                Ok(word) => Some(word),
                Err(Error::NoWitness(_)) => None,
                Err(err) => return Err(err.into()),
            },
        };
        match witness {
            Some(word) => {
                println!("state={q} length={} word={}", word.len(), word.to_text(k))
            }
            None => println!("state={q} unavoidable=true"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn avoid_subset(aut: &Automaton, d: &StateSet, method: AvoidMethod, guards: &GuardArgs) -> CliResult {
    let k = aut.k();
    let list: Vec<String> = d.iter().map(|q| q.to_string()).collect();
    println!("subset={}", list.join(","));
    match method {
        AvoidMethod::Exact => {
            let res =
                oracle::exact_shortest_avoiding(aut, d, AvoidMode::WholeSubset, &guards.limits())?;
            match &res.witness {
                Some(word) => {
                    println!("length={}", word.len());
                    println!("word={}", word.to_text(k));
                }
                None => println!("unavoidable=true"),
            }
        }
        AvoidMethod::Span => {
            if d.len() != 2 {
                return Err(CliError::Usage(
                    "--subset with --method span needs exactly two states \
                     (larger subsets need avoiding words for subsets, which \
                     the constructive route only derives pairwise)"
                        .into(),
                ));
            }
            let states: Vec<usize> = d.iter().collect();
            let (p, other) = (states[0], states[1]);
            let w_dprime = avoiding::avoid_global(aut, &StateSet::singleton(aut.n(), other))?;
            let outcome = avoiding::avoid_subset_or_compress(aut, &aut.all_states(), d, p, &w_dprime)?;
            match outcome {
                SubsetAvoidOutcome::SubsetAvoided { word } => {
                    println!("outcome=subset-avoided");
                    println!("length={}", word.len());
                    println!("word={}", word.to_text(k));
                }
                SubsetAvoidOutcome::Compressed { word } => {
                    println!("outcome=compressed");
                    println!("length={}", word.len());
                    println!("word={}", word.to_text(k));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(n: usize, k: Option<usize>) -> CliResult {
    let ks: Vec<usize> = k.into_iter().collect();
    let report = pipeline::bound_report(n, &ks)?;
    println!("n={n}");
    println!("pin_bound={}", report.pin_bound);
    println!("sink_bound={}", report.sink_bound);
    println!("new_bound={}", report.new_bound);
    println!("new_bound_decimal={}", pipeline::ratio_to_f64(&report.new_bound));
    for (k, value) in &report.parametrized {
        println!(
            "k={k} parametrized_bound={value} decimal={}",
            pipeline::ratio_to_f64(value)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(file: &Path, word: &str, rank: Option<usize>, avoids: Option<&str>) -> CliResult {
    if rank.is_none() && avoids.is_none() {
        return Err(CliError::Usage(
            "verify needs --rank or --avoids (or both)".into(),
        ));
    }
    let aut = load_automaton(file)?;
    let word = Word::parse(word, aut.k())?;
    let image = aut.apply_word(&aut.all_states(), &word);
    println!("length={}", word.len());
    println!("rank={}", image.len());
    let mut ok = true;
    if let Some(expected) = rank {
        if image.len() != expected {
            ok = false;
            eprintln!("rank mismatch: expected {expected}, got {}", image.len());
        }
    }
    if let Some(avoids) = avoids {
        let targets = parse_states(avoids, aut.n(), "--avoids")?;
        for q in targets.iter() {
            if image.contains(q) {
                ok = false;
                eprintln!("state {q} is still in the image");
            }
        }
    }
    println!("verified={ok}");
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}
