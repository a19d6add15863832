//! Command-line front end: refute CNFs, check proof traces, generate
//! formula families, and benchmark the size bounds.
//!
//! Exit codes: 0 success (a satisfiable input is still a success, flagged in
//! the output), 1 check failure, 2 usage or parse error, 3 budget exceeded.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use obdd2res::cnf::{parse_dimacs, Cnf, Var};
use obdd2res::gen::{self, Fixture, GenError, RandomUnsatConfig};
use obdd2res::obdd::{EngineError, DEFAULT_PATH_BUDGET};
use obdd2res::oracle::{brute_force_status, OracleConfig, OracleError, SatStatus};
use obdd2res::proof::{check, read_trace, write_trace, Verdict};
use obdd2res::sim::{
    run_refutation, stats, translate, JoinTree, RefutationScript, RunArtifacts, RunConfig,
    RunOutcome, Schedule, ScriptStep, SimError,
};

#[derive(Parser)]
#[command(
    name = "obdd2res",
    version,
    about = "Refute CNFs by decision-diagram conjunction and emit checkable resolution proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refute a DIMACS CNF and optionally emit the proof trace, run script,
    /// statistics and per-step diagrams.
    Refute(RefuteArgs),
    /// Check a resolution trace against a DIMACS CNF.
    Check {
        /// Input formula (DIMACS CNF).
        cnf: PathBuf,
        /// Proof trace to verify.
        trace: PathBuf,
    },
    /// Generate a formula family to stdout or a file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Refute a family over a parameter range and report the size bounds as
    /// CSV rows `instance,m,n,derived,m_times_n,n_squared`.
    Bench(BenchArgs),
}

#[derive(Args)]
struct RefuteArgs {
    /// Input formula (DIMACS CNF).
    cnf: PathBuf,
    /// Variable order: `asc` or an explicit permutation like `3,1,2`.
    #[arg(long, default_value = "asc")]
    order: String,
    /// Join schedule: `linear`, `balanced`, or a JSON file with a nested
    /// array tree over 1-based clause indices, e.g. `[[1,2],[3,4]]`.
    #[arg(long, default_value = "linear")]
    schedule: String,
    /// Write the resolution proof trace here.
    #[arg(long, value_name = "FILE")]
    emit_proof: Option<PathBuf>,
    /// Write the run script as JSON here.
    #[arg(long, value_name = "FILE")]
    emit_script: Option<PathBuf>,
    /// Write one GraphViz file per step into this directory.
    #[arg(long, value_name = "DIR")]
    dot: Option<PathBuf>,
    /// Verify the emitted proof with the independent checker.
    #[arg(long)]
    check: bool,
    /// Write run statistics as JSON here.
    #[arg(long, value_name = "FILE")]
    stats: Option<PathBuf>,
    /// Cross-check the outcome against the brute-force oracle.
    #[arg(long)]
    oracle_verify: bool,
    /// Abort if a diagram has more false paths than this.
    #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
    path_budget: usize,
    /// Variable limit for the brute-force oracle.
    #[arg(long, default_value_t = 20)]
    oracle_limit: usize,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Pigeonhole formula: n+1 pigeons into n holes.
    Php(GenPhp),
    /// Pigeonhole formula doubled over a fresh leading variable.
    PhpDoubled(GenPhp),
    /// Random unsatisfiable CNF, certified by the brute-force oracle.
    RandomUnsat {
        #[arg(long)]
        vars: u32,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// One of the built-in worked examples.
    Fixture {
        /// `running-example` or `eight-clause-example`.
        name: String,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenPhp {
    /// Number of holes.
    #[arg(short = 'n')]
    n: u32,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Family: `php`, `php-doubled` or `random-unsat`.
    family: String,
    /// Inclusive parameter range, e.g. `1..3` (hole counts for the
    /// pigeonhole families, seeds for random instances).
    range: String,
    /// Variables per random instance.
    #[arg(long, default_value_t = 8)]
    vars: u32,
    /// Clauses per random instance.
    #[arg(long, default_value_t = 20)]
    clauses: usize,
    /// Join schedule, as for `refute`.
    #[arg(long, default_value = "linear")]
    schedule: String,
    /// Run instances one at a time even when the parallel pool is built in.
    #[arg(long)]
    sequential: bool,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    CheckFailed(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::CheckFailed(_) => 1,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::CheckFailed(m) | CliError::Budget(m) => write!(f, "{m}"),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> CliError {
        match e {
            SimError::Engine(EngineError::PathBudgetExceeded { .. }) => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        CliError::Budget(e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> CliError {
        match e {
            GenError::Oracle(o) => o.into(),
            GenError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Refute(args) => refute(args),
        Command::Check { cnf, trace } => check_cmd(&cnf, &trace),
        Command::Gen(cmd) => generate(cmd),
        Command::Bench(args) => bench(args),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_cnf(path: &Path) -> Result<Cnf, CliError> {
    let text = read_file(path)?;
    let parsed =
        parse_dimacs(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        println!("c warning: {w}");
    }
    Ok(parsed.cnf)
}

fn parse_order(spec: &str, cnf: &Cnf) -> Result<Option<Vec<Var>>, CliError> {
    if spec == "asc" {
        return Ok(None);
    }
    let vars: Result<Vec<Var>, _> = spec
        .split(',')
        .map(|t| t.trim().parse::<u32>().map(Var))
        .collect();
    let vars = vars.map_err(|_| {
        CliError::Usage(format!(
            "--order must be `asc` or a comma-separated permutation, got `{spec}`"
        ))
    })?;
    let max = cnf.max_var();
    if vars.len() != max as usize {
        return Err(CliError::Usage(format!(
            "--order must list all {max} variables exactly once"
        )));
    }
    Ok(Some(vars))
}

fn parse_schedule(spec: &str) -> Result<Schedule, CliError> {
    match spec {
        "linear" => Ok(Schedule::Linear),
        "balanced" => Ok(Schedule::Balanced),
        path => {
            let text = read_file(Path::new(path))?;
            let tree: JoinTree = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{path}: not a join tree: {e}")))?;
            Ok(Schedule::Explicit(tree))
        }
    }
}

fn write_dots(dir: &Path, arts: &RunArtifacts) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    for (i, step) in arts.script.steps.iter().enumerate() {
        let (name, root) = match step {
            ScriptStep::Axiom { clause, root, .. } => (format!("axiom_{clause}"), *root),
            ScriptStep::Join { root, .. } => ("join".to_string(), *root),
            ScriptStep::Eliminate {
                var, root_after, ..
            } => (format!("eliminate_{var}"), *root_after),
        };
        let file = dir.join(format!("s{:03}_{name}.dot", i + 1));
        write_file(&file, &arts.store.dot(root))?;
    }
    Ok(())
}

fn refute(args: RefuteArgs) -> Result<(), CliError> {
    let cnf = load_cnf(&args.cnf)?;
    if cnf.is_empty() {
        return Err(CliError::Usage("formula has no clauses".into()));
    }
    let schedule = parse_schedule(&args.schedule)?;
    let config = RunConfig {
        order: parse_order(&args.order, &cnf)?,
        path_budget: args.path_budget,
    };
    let arts = run_refutation(&cnf, &schedule, &config)?;
    let script = &arts.script;
    for w in &script.warnings {
        println!("c warning: {w}");
    }
    println!(
        "c m={} n={} obdds={} derived={}",
        script.m,
        script.total_size,
        script.obdd_count(),
        script.derived_count()
    );

    if let Some(dir) = &args.dot {
        write_dots(dir, &arts)?;
    }
    if let Some(path) = &args.emit_script {
        let json = serde_json::to_string_pretty(&script.to_json()).expect("script serializes");
        write_file(path, &json)?;
    }

    let proof = match script.outcome {
        RunOutcome::Refuted => Some(
            translate(&cnf, script)
                .map_err(|e| CliError::CheckFailed(format!("translation failed: {e}")))?,
        ),
        RunOutcome::Satisfiable => None,
    };

    if let Some(path) = &args.stats {
        let report = stats(script, proof.as_ref());
        let json = serde_json::to_string_pretty(&report).expect("stats serialize");
        write_file(path, &json)?;
    }

    if args.oracle_verify {
        let cfg = OracleConfig {
            max_vars: args.oracle_limit,
        };
        let status = brute_force_status(&cnf, &cfg)?;
        let agrees = matches!(
            (&status, script.outcome),
            (SatStatus::Unsatisfiable, RunOutcome::Refuted)
                | (SatStatus::Satisfiable(_), RunOutcome::Satisfiable)
        );
        if !agrees {
            return Err(CliError::CheckFailed(
                "oracle disagrees with the run outcome".into(),
            ));
        }
        println!("c oracle: outcome confirmed");
    }

    match proof {
        Some(proof) => {
            println!("s UNSATISFIABLE");
            println!("c proof steps={} (axioms={})", proof.len(), script.m);
            if let Some(path) = &args.emit_proof {
                write_file(path, &write_trace(&proof))?;
            }
            if args.check {
                let verdict = check(&cnf, &proof);
                println!("c check: {verdict}");
                if !verdict.is_ok() {
                    return Err(CliError::CheckFailed(format!("proof rejected: {verdict}")));
                }
            }
        }
        None => {
            println!("s SATISFIABLE");
            if args.emit_proof.is_some() || args.check {
                println!("c no proof: the input is satisfiable");
            }
        }
    }
    Ok(())
}

fn check_cmd(cnf_path: &Path, trace_path: &Path) -> Result<(), CliError> {
    let cnf = load_cnf(cnf_path)?;
    let text = read_file(trace_path)?;
    let proof =
        read_trace(&text).map_err(|e| CliError::Usage(format!("{}: {e}", trace_path.display())))?;
    let verdict = check(&cnf, &proof);
    println!("{verdict}");
    match verdict {
        Verdict::Verified => Ok(()),
        Verdict::Failed { .. } => Err(CliError::CheckFailed("trace rejected".into())),
    }
}

fn emit_cnf(cnf: &Cnf, output: Option<&PathBuf>) -> Result<(), CliError> {
    let text = cnf.to_dimacs();
    match output {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(cmd: GenCommand) -> Result<(), CliError> {
    match cmd {
        GenCommand::Php(a) => {
            if a.n == 0 {
                return Err(CliError::Usage("-n must be at least 1".into()));
            }
            emit_cnf(&gen::php(a.n), a.output.as_ref())
        }
        GenCommand::PhpDoubled(a) => {
            if a.n == 0 {
                return Err(CliError::Usage("-n must be at least 1".into()));
            }
            emit_cnf(&gen::php_doubled(a.n), a.output.as_ref())
        }
        GenCommand::RandomUnsat {
            vars,
            clauses,
            seed,
            output,
        } => {
            let cnf = gen::random_unsat(&RandomUnsatConfig::new(vars, clauses, seed))?;
            emit_cnf(&cnf, output.as_ref())
        }
        GenCommand::Fixture { name, output } => {
            let fixture = Fixture::parse(&name).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown fixture `{name}`; try running-example or eight-clause-example"
                ))
            })?;
            emit_cnf(&gen::fixture(fixture), output.as_ref())
        }
    }
}

fn parse_range(spec: &str) -> Result<(u64, u64), CliError> {
    let parts: Vec<&str> = spec.split("..").collect();
    let parsed = match parts.as_slice() {
        [a, b] => a.parse::<u64>().ok().zip(b.parse::<u64>().ok()),
        [a] => a.parse::<u64>().ok().map(|n| (n, n)),
        _ => None,
    };
    match parsed {
        Some((lo, hi)) if lo <= hi => Ok((lo, hi)),
        _ => Err(CliError::Usage(format!(
            "range must look like `1..3`, got `{spec}`"
        ))),
    }
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let (lo, hi) = parse_range(&args.range)?;
    let schedule = parse_schedule(&args.schedule)?;
    let mut instances: Vec<(String, Cnf)> = Vec::new();
    for k in lo..=hi {
        match args.family.as_str() {
            "php" => instances.push((format!("php-{k}"), gen::php(k as u32))),
            "php-doubled" => {
                instances.push((format!("php-doubled-{k}"), gen::php_doubled(k as u32)))
            }
            "random-unsat" => {
                let cfg = RandomUnsatConfig::new(args.vars, args.clauses, k);
                match gen::random_unsat(&cfg) {
                    Ok(cnf) => instances.push((format!("rnd-{k}"), cnf)),
                    Err(e) => eprintln!("c skipping seed {k}: {e}"),
                }
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown family `{other}`; try php, php-doubled or random-unsat"
                )))
            }
        }
    }

    let config = RunConfig::default();
    let results = if args.sequential {
        obdd2res::sim::run_many_seq(&instances, &schedule, &config)
    } else {
        obdd2res::sim::run_many(&instances, &schedule, &config)
    };

    let mut csv = String::from("instance,m,n,derived,m_times_n,n_squared\n");
    for (label, result) in results {
        let script: RefutationScript = result?;
        if script.outcome != RunOutcome::Refuted {
            return Err(CliError::CheckFailed(format!("{label}: not refuted")));
        }
        let (m, n, derived) = (script.m, script.total_size, script.derived_count());
        if derived > m * n {
            return Err(CliError::CheckFailed(format!(
                "{label}: derived steps {derived} exceed m*n = {}",
                m * n
            )));
        }
        if m <= n && derived > n * n {
            return Err(CliError::CheckFailed(format!(
                "{label}: derived steps {derived} exceed n^2 = {}",
                n * n
            )));
        }
        csv.push_str(&format!("{label},{m},{n},{derived},{},{}\n", m * n, n * n));
    }
    match &args.output {
        Some(path) => write_file(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
