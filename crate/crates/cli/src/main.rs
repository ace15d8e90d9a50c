use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use asplearn_core::{build_rule_space, learn, parse_task, report, Algorithm, Error, LearnOptions, Outcome};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "asplearn", version, about = "Learn answer set programs from examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a hypothesis for a task file.
    Learn(LearnArgs),
}

#[derive(Parser)]
struct LearnArgs {
    /// Task file with background, examples and mode declarations.
    file: PathBuf,
    #[arg(long, default_value = "ilasp3", value_parser = parse_algorithm)]
    algorithm: Algorithm,
    /// Maximum number of body literals per rule.
    #[arg(long)]
    max_body: Option<usize>,
    /// Maximum number of variables per rule (overrides `#maxv`).
    #[arg(long)]
    max_vars: Option<usize>,
    #[arg(long)]
    max_rule_length: Option<usize>,
    /// Extra rule kinds to generate besides normal rules.
    #[arg(long, value_delimiter = ',')]
    enable: Vec<Kind>,
    /// Priority levels for learned weak constraints.
    #[arg(long, value_delimiter = ',')]
    weak_levels: Vec<i64>,
    /// Bounds for choice rules, as `lo:hi`.
    #[arg(long, value_delimiter = ',', value_parser = parse_bounds)]
    choice_bounds: Vec<(u32, u32)>,
    /// Print the generated rule space as comment lines.
    #[arg(long)]
    print_rule_space: bool,
    /// Print a `%`-prefixed statistics block after the program.
    #[arg(long)]
    stats: bool,
    /// Write one JSON object per learner event to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Number of optimal programs to print.
    #[arg(long, default_value_t = 1)]
    solutions: usize,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Constraints,
    Choice,
    Weak,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    Algorithm::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        format!("unknown algorithm `{s}`, expected one of {}", names.join(", "))
    })
}

fn parse_bounds(s: &str) -> std::result::Result<(u32, u32), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("lower bound: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("lower bound {lo} exceeds upper bound {hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Learn(args) = cli.command;
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = match e.downcast_ref::<Error>() {
                Some(Error::NoSolution) => {
                    println!("UNSATISFIABLE");
                    1
                }
                Some(Error::ResourceExceeded(_) | Error::OracleRefused { .. }) => 3,
                _ => 2,
            };
            if code != 1 {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn run(args: &LearnArgs) -> Result<()> {
    let text = fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let mut task = parse_task(&text).map_err(Error::from)?;
    let cfg = &mut task.config;
    if let Some(n) = args.max_body {
        cfg.max_body_literals = n;
    }
    if let Some(n) = args.max_vars {
        task.mode_bias.max_variables = n;
    }
    if args.max_rule_length.is_some() {
        cfg.max_rule_length = args.max_rule_length;
    }
    for k in &args.enable {
        match k {
            Kind::Constraints => cfg.enable_constraints = true,
            Kind::Choice => cfg.enable_choice = true,
            Kind::Weak => cfg.enable_weak = true,
        }
    }
    if !args.weak_levels.is_empty() {
        cfg.weak_levels = args.weak_levels.clone();
    }
    if !args.choice_bounds.is_empty() {
        cfg.choice_bounds = args.choice_bounds.clone();
    }

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if args.print_rule_space {
        let space = build_rule_space(&task.mode_bias, &task.config)?;
        writeln!(out, "% rule space: {} rules", space.rules().len())?;
        for (i, r) in space.rules().iter().enumerate() {
            writeln!(out, "% {i}: {r}")?;
        }
        out.flush()?;
    }

    let opts = LearnOptions {
        solutions: args.solutions.max(1),
        time_limit: args.time_limit.map(Duration::from_secs_f64),
        ..LearnOptions::default()
    };
    let outcome = learn(&task, args.algorithm, &opts)?;
    if let Some(path) = &args.trace {
        write_trace(path, &outcome)?;
    }

    let checked = report(&task, &outcome.program)?;
    if args.solutions > 1 {
        for (i, (p, s)) in outcome.solutions.iter().enumerate() {
            writeln!(out, "% solution {} (score {s})", i + 1)?;
            write!(out, "{p}")?;
        }
    } else {
        write!(out, "{}", outcome.program)?;
    }
    if args.stats {
        let s = &outcome.stats;
        writeln!(out, "% algorithm: {}", args.algorithm.name())?;
        writeln!(out, "% status: optimal")?;
        writeln!(out, "% score: {}", checked.score)?;
        writeln!(out, "% length: {}", checked.length)?;
        let uncovered = if checked.uncovered.is_empty() { "none".to_string() } else { checked.uncovered.join(" ") };
        writeln!(out, "% uncovered: {uncovered}")?;
        writeln!(out, "% iterations: {}", s.iterations)?;
        writeln!(out, "% relevant examples: {}", s.relevant_examples)?;
        writeln!(out, "% violating reasons: {}", s.violating_reasons)?;
        writeln!(out, "% constraints: {}", s.constraints)?;
        writeln!(out, "% solver calls: {}", s.solver_calls)?;
        writeln!(out, "% search nodes: {}", s.search_nodes)?;
        // Timing varies between runs, so it stays off stdout.
        eprintln!("% wall ms: {}", s.wall_ms);
    }
    out.flush()?;
    Ok(())
}

fn write_trace(path: &PathBuf, outcome: &Outcome) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for e in &outcome.trace {
        serde_json::to_writer(&mut w, e)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}
