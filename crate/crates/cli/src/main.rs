//! `irw`: compile machines to rewrite systems, run machines, search
//! rewrite systems, explore ω-runs and check the bounded laws.
//!
//! Every command ends its standard output with `VERDICT: <word>`. Exit
//! codes: 0 success or holds, 1 refuted or negative, 2 unknown or
//! exhausted, 3 input error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use irw_core::encoders::{compile, Construction};
use irw_core::laws::{self, fixtures, LawReport, RConstructionOptions, Verdict};
use irw_core::machine::{parse_machine, Machine};
use irw_core::omega::{
    classify_run, explore_runs, membership_semidecide, parse_word, Exploration, Membership,
    NdTmSpec, OmegaWord, RunPrefix, Tri,
};
use irw_core::rewrite::{
    bounded_normalize, bounded_reach, close_limit, limit_approximant, parse_trs, run_strategy,
    Approximant, Bounds, SearchOutcome, Strategy, Trace, TrsFile,
};
use irw_core::turing::{
    decode_value, fun_input, parse_config, rel_input, tm_run, TmConfig, TmOutcome, TmSpec,
};
use irw_core::{parse_term, Term};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "irw", version, about = "Infinitary term rewriting workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a construction to a TRS file.
    Compile(CompileArgs),
    /// Run a deterministic two-sided machine.
    Tm {
        #[command(subcommand)]
        mode: TmMode,
    },
    /// Trace, normalize or reach in a TRS file.
    Trs {
        #[command(subcommand)]
        mode: TrsMode,
    },
    /// Explore the runs of a non-deterministic one-sided machine on an
    /// ω-word.
    Omega {
        #[command(subcommand)]
        mode: OmegaMode,
    },
    /// Check a bounded law and print its report.
    Laws(LawArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// One of base, pebbled, pickn, S, Sprime, srs, R.
    construction: String,
    /// Machine file or fixture name; not needed for pickn.
    machine: Option<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Emit the first run rule of R with D1 in both Δ arguments.
    #[arg(long)]
    as_printed: bool,
}

#[derive(Subcommand)]
enum TmMode {
    /// Run from a configuration such as `0 S q0 S 0`.
    Run {
        machine: String,
        /// Defaults to the initial state on a blank tape.
        #[arg(long)]
        config: Option<String>,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Compute the function value on `q0 S^n 0`.
    Fun {
        machine: String,
        #[arg(long)]
        arg: usize,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Decide the relation on `0 S^n q0 S^k 0`.
    Rel {
        machine: String,
        #[arg(long, num_args = 2, value_names = ["N", "K"])]
        pair: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    /// Leftmost-outermost redex.
    Lo,
    /// A seeded random redex.
    Random,
    /// Shortest path to each firing of the rule `run`.
    Greedy,
}

#[derive(Args)]
struct SearchBounds {
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    /// Redexes are looked for up to this position length.
    #[arg(long, default_value_t = 32)]
    depth: usize,
    #[arg(long, default_value_t = 4)]
    epochs: usize,
    #[arg(long)]
    show_terms: bool,
}

impl SearchBounds {
    fn bounds(&self) -> Bounds {
        Bounds {
            fuel: self.fuel,
            max_epochs: self.epochs,
            depth_bound: self.depth,
        }
    }
}

#[derive(Subcommand)]
enum TrsMode {
    /// Follow one strategy for at most `--fuel` steps.
    Trace {
        file: PathBuf,
        /// Defaults to the file's `start` header.
        #[arg(long)]
        term: Option<String>,
        #[arg(long, value_enum, default_value_t = StrategyName::Lo)]
        strategy: StrategyName,
        #[arg(long)]
        seed: Option<u64>,
        /// Firings of `run` for the greedy strategy.
        #[arg(long, default_value_t = 5)]
        firings: usize,
        #[command(flatten)]
        bounds: SearchBounds,
    },
    /// Search for a (possibly transfinite) trace to a normal form.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        term: Option<String>,
        #[command(flatten)]
        bounds: SearchBounds,
    },
    /// Search for a trace between two terms.
    Reach {
        file: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        bounds: SearchBounds,
    },
}

#[derive(Args)]
struct OmegaArgs {
    machine: String,
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 1000)]
    fuel: usize,
    /// Most open branches kept per level of the run tree.
    #[arg(long, default_value_t = 64)]
    width: usize,
}

#[derive(Subcommand)]
enum OmegaMode {
    /// Classify every explored run.
    Classify(OmegaArgs),
    /// Semi-decide membership in the accepted language.
    Member(OmegaArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LawName {
    TwoSided,
    Srs,
    Pickn,
    RunCycles,
    PebbleLimit,
    RConstruction,
    LimitCorrespondence,
    RunClassification,
}

#[derive(Args)]
struct LawArgs {
    #[arg(value_enum)]
    name: LawName,
    /// Machine files or fixture names; random machines when omitted
    /// (two-sided, srs).
    #[arg(long, num_args = 1..)]
    fixture: Vec<String>,
    /// Defaults to IRW_SEED, then to a fixed seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Sample count; its meaning depends on the law.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    fuel: Option<usize>,
    /// Run firings to demand (run-cycles, pebble-limit).
    #[arg(long)]
    firings: Option<usize>,
    /// Word for limit-correspondence and run-classification.
    #[arg(long)]
    word: Option<String>,
    /// r-construction only.
    #[arg(long)]
    as_printed: bool,
}

/// Bad input: unreadable files, syntax, wrong machine kinds.
#[derive(Debug)]
struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<irw_core::Error> for InputError {
    fn from(e: irw_core::Error) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<u8, InputError>;

fn verdict(word: &str, code: u8) -> u8 {
    println!("VERDICT: {word}");
    code
}

/// Reads a machine from a file, falling back to the built-in fixtures
/// (`m_acc`, `nd_pong`, ...).
fn load_machine(arg: &str) -> Result<Machine, InputError> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| InputError(format!("{arg}: {e}")))?;
        return parse_machine(&text).map_err(|e| InputError(format!("{arg}: {e}")));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    fixtures::machine(&stem.replace('-', "_"))
        .ok_or_else(|| InputError(format!("{arg}: no such file or fixture")))
}

fn load_det(arg: &str) -> Result<TmSpec, InputError> {
    Ok(TmSpec::new(load_machine(arg)?)?)
}

fn load_nd(arg: &str) -> Result<NdTmSpec, InputError> {
    Ok(NdTmSpec::new(load_machine(arg)?)?)
}

fn load_trs(path: &Path) -> Result<TrsFile, InputError> {
    let text =
        fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_trs(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// `--term` if given, otherwise the file's `start` header.
fn term_arg(file: &TrsFile, text: Option<&str>) -> Result<Term, InputError> {
    let text = text
        .or_else(|| file.header_value("start"))
        .ok_or_else(|| InputError("no term given and the file has no start header".into()))?;
    Ok(parse_term(text, &file.trs.sig)?)
}

fn cmd_compile(a: &CompileArgs) -> CmdResult {
    let construction = Construction::parse(&a.construction)
        .or_else(|| {
            Construction::ALL
                .into_iter()
                .find(|c| c.tag().eq_ignore_ascii_case(&a.construction))
        })
        .ok_or_else(|| InputError(format!("unknown construction `{}`", a.construction)))?;
    let machine = a.machine.as_deref().map(load_machine).transpose()?;
    let compiled = compile(construction, machine.as_ref(), a.as_printed)?;
    for w in &compiled.warnings {
        eprintln!("warning: {w}");
    }
    let text = compiled.to_file();
    let summary = format!("{} rules", compiled.trs.len());
    match &a.out {
        Some(out) => {
            fs::write(out, text).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
            println!("wrote {}: {summary}", out.display());
            Ok(verdict("ok", 0))
        }
        None => {
            // the file goes to stdout, so the summary stays off it
            print!("{text}");
            eprintln!("{summary}");
            eprintln!("VERDICT: ok");
            Ok(0)
        }
    }
}

fn print_run(m: &TmSpec, start: &TmConfig, fuel: usize) -> TmOutcome {
    let mut i = 0;
    let outcome = tm_run(m, start, fuel, |c| {
        println!("{i}: {c}");
        i += 1;
    });
    match &outcome {
        TmOutcome::Final { steps, .. } => println!("halted after {steps} steps"),
        TmOutcome::Timeout { steps, .. } => println!("no halt within {steps} steps"),
    }
    outcome
}

fn cmd_tm(mode: &TmMode) -> CmdResult {
    match mode {
        TmMode::Run {
            machine,
            config,
            fuel,
        } => {
            let m = load_det(machine)?;
            let start = match config {
                Some(text) => parse_config(m.machine(), text)?,
                None => TmConfig::new(Vec::new(), m.initial, Vec::new(), m.blank),
            };
            Ok(match print_run(&m, &start, *fuel) {
                TmOutcome::Final { .. } => verdict("halted", 0),
                TmOutcome::Timeout { .. } => verdict("unknown", 2),
            })
        }
        TmMode::Fun { machine, arg, fuel } => {
            let m = load_det(machine)?;
            let start = fun_input(&m, *arg)?;
            Ok(match print_run(&m, &start, *fuel) {
                TmOutcome::Final { config, .. } => match decode_value(&config, m.blank) {
                    Some(v) => {
                        println!("value: {v}");
                        verdict(&v.to_string(), 0)
                    }
                    None => {
                        println!("value: undefined (head does not read S^k 0)");
                        verdict("undefined", 1)
                    }
                },
                TmOutcome::Timeout { .. } => verdict("unknown", 2),
            })
        }
        TmMode::Rel {
            machine,
            pair,
            fuel,
        } => {
            let m = load_det(machine)?;
            let start = rel_input(&m, pair[0], pair[1])?;
            Ok(match print_run(&m, &start, *fuel) {
                TmOutcome::Final { config, .. } if config.head(m.blank).name() == "0" => {
                    verdict("holds", 0)
                }
                TmOutcome::Final { .. } => verdict("fails", 1),
                TmOutcome::Timeout { .. } => verdict("unknown", 2),
            })
        }
    }
}

fn print_search(outcome: SearchOutcome, show_terms: bool, what: &str) -> u8 {
    match outcome {
        SearchOutcome::Found { trace, term } => {
            print!("{}", trace.render(show_terms));
            println!(
                "{what} in {} steps, {} closures: {term}",
                trace.step_count(),
                trace.closure_count()
            );
            verdict(what, 0)
        }
        SearchOutcome::Exhausted(d) => {
            println!("{d}");
            verdict("exhausted", 2)
        }
    }
}

/// The prefix above the last step's position no longer changes.
fn print_stable_prefix(trace: &Trace) {
    let depth = trace.last_step().map_or(0, |s| s.position.len());
    if let Approximant::Stable(prefix) = limit_approximant(trace, depth) {
        println!("stable prefix (depth {depth}): {prefix}");
    }
}

fn cmd_trs(mode: &TrsMode) -> CmdResult {
    match mode {
        TrsMode::Trace {
            file,
            term,
            strategy,
            seed,
            firings,
            bounds,
        } => {
            let f = load_trs(file)?;
            let t = term_arg(&f, term.as_deref())?;
            let strategy = match strategy {
                StrategyName::Lo => Strategy::LeftmostOutermost,
                StrategyName::Random => Strategy::Random(seed_or_env(*seed)?),
                StrategyName::Greedy => {
                    if f.trs.rule("run").is_none() {
                        return Err(InputError("the greedy strategy needs a rule `run`".into()));
                    }
                    let g = laws::greedy_firings(&f.trs, &t, *firings, bounds.fuel, true);
                    print!("{}", g.trace.render(bounds.show_terms));
                    println!(
                        "steps: {}, run firings: {}",
                        g.trace.step_count(),
                        g.firings
                    );
                    print_stable_prefix(&g.trace);
                    return Ok(if g.firings == *firings {
                        verdict("fired", 0)
                    } else {
                        verdict("exhausted", 2)
                    });
                }
            };
            let run = run_strategy(&f.trs, &t, strategy, bounds.fuel, bounds.depth);
            let trace = &run.trace;
            print!("{}", trace.render(bounds.show_terms));
            println!("steps: {}", trace.step_count());
            if !run.fuel_exhausted {
                println!("normal form: {}", trace.final_term());
                return Ok(verdict("normal_form", 0));
            }
            let steps: Vec<_> = trace.steps().cloned().collect();
            match close_limit(&steps) {
                Ok((limit, cert)) => {
                    println!("omega-limit: {limit}");
                    println!("  {}", cert.summary());
                    return Ok(verdict("closed", 0));
                }
                Err(nc) => println!("no closure: {}", nc.reason),
            }
            print_stable_prefix(trace);
            Ok(verdict("exhausted", 2))
        }
        TrsMode::Normalize { file, term, bounds } => {
            let f = load_trs(file)?;
            let t = term_arg(&f, term.as_deref())?;
            let outcome = bounded_normalize(&f.trs, &t, bounds.bounds())?;
            Ok(print_search(outcome, bounds.show_terms, "found"))
        }
        TrsMode::Reach {
            file,
            from,
            to,
            bounds,
        } => {
            let f = load_trs(file)?;
            let source = term_arg(&f, from.as_deref())?;
            let target = parse_term(to, &f.trs.sig)?;
            let outcome = bounded_reach(&f.trs, &source, &target, bounds.bounds())?;
            Ok(print_search(outcome, bounds.show_terms, "reached"))
        }
    }
}

fn print_runs(w: &OmegaWord, ex: &Exploration) {
    println!("word: {w}");
    println!(
        "runs: {}{}",
        ex.runs.len(),
        if ex.width_cut {
            " (width bound cut branches)"
        } else {
            ""
        }
    );
    for (i, r) in ex.runs.iter().enumerate() {
        println!("run {i}: {}", run_line(r));
        println!("  {}", classify_run(r));
    }
}

fn run_line(r: &RunPrefix) -> String {
    let heads: Vec<String> = r.heads().iter().map(|h| h.to_string()).collect();
    let mut line = format!(
        "{} configurations, {:?}, heads {}",
        r.configs.len(),
        r.end,
        heads.join(" ")
    );
    if let Some(l) = &r.lasso {
        line.push_str(&format!(
            ", lasso from {} length {} displacement {} window {}..{}",
            l.cycle_start, l.cycle_length, l.displacement, l.window.0, l.window.1
        ));
    }
    line
}

fn cmd_omega(mode: &OmegaMode) -> CmdResult {
    let (OmegaMode::Classify(a) | OmegaMode::Member(a)) = mode;
    let m = load_nd(&a.machine)?;
    let w = parse_word(&a.word)?;
    for s in w.symbols() {
        if !m.is_tape_symbol(s) {
            return Err(InputError(format!(
                "word symbol `{s}` is not in the alphabet"
            )));
        }
    }
    let ex = explore_runs(&m, &w, a.fuel, a.width);
    print_runs(&w, &ex);
    Ok(match mode {
        OmegaMode::Classify(_) => {
            let classes: Vec<_> = ex.runs.iter().map(classify_run).collect();
            if classes.iter().any(|c| c.accepting == Tri::Yes) {
                verdict("accepting", 0)
            } else if !ex.width_cut && classes.iter().all(|c| c.accepting == Tri::No) {
                verdict("rejecting", 1)
            } else {
                verdict("unknown", 2)
            }
        }
        OmegaMode::Member(_) => {
            let membership = membership_semidecide(&m, &w, a.fuel, a.width);
            if let Membership::Accepted(r) = &membership {
                println!("accepting run: {}", run_line(r));
            }
            let code = match membership {
                Membership::Accepted(_) => 0,
                Membership::RejectedExhausted => 1,
                Membership::Unknown => 2,
            };
            verdict(membership.name(), code)
        }
    })
}

fn seed_or_env(seed: Option<u64>) -> Result<u64, InputError> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("IRW_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| InputError(format!("IRW_SEED `{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn fixtures_or(a: &LawArgs, default: &[&str]) -> Vec<String> {
    if a.fixture.is_empty() {
        default.iter().map(|s| s.to_string()).collect()
    } else {
        a.fixture.clone()
    }
}

fn word_arg(a: &LawArgs) -> Result<OmegaWord, InputError> {
    Ok(parse_word(a.word.as_deref().unwrap_or(fixtures::WORDS[0]))?)
}

fn run_law(a: &LawArgs) -> Result<Vec<LawReport>, InputError> {
    let seed = seed_or_env(a.seed)?;
    let mut reports = Vec::new();
    match a.name {
        LawName::TwoSided => {
            let steps = a.fuel.unwrap_or(50);
            if a.fixture.is_empty() {
                reports.push(laws::check_two_sided_random(
                    a.samples.unwrap_or(200),
                    5,
                    steps,
                    seed,
                ));
            }
            for f in &a.fixture {
                let m = load_det(f)?;
                let samples = a.samples.unwrap_or(50);
                reports.push(laws::check_two_sided_bisim(&m, samples, steps, seed));
            }
        }
        LawName::Srs => {
            let depth = a.fuel.unwrap_or(100);
            if a.fixture.is_empty() {
                reports.push(laws::check_srs_random(
                    a.samples.unwrap_or(100),
                    depth,
                    seed,
                ));
            }
            let words = match &a.word {
                Some(w) => vec![parse_word(w)?],
                None => fixtures::words(),
            };
            for f in &a.fixture {
                reports.push(laws::check_srs_bisim(&load_nd(f)?, &words, depth));
            }
        }
        LawName::Pickn => reports.push(laws::check_pickn(a.samples.unwrap_or(50))),
        LawName::RunCycles => {
            for f in fixtures_or(a, &["m_acc"]) {
                let m = load_det(&f)?;
                let firings = a.firings.unwrap_or(5);
                reports.push(laws::check_run_cycles(
                    &m,
                    firings,
                    a.fuel.unwrap_or(100_000),
                )?);
            }
        }
        LawName::PebbleLimit => {
            for f in fixtures_or(a, &["m_acc"]) {
                let m = load_det(&f)?;
                let firings = a.firings.unwrap_or(5);
                let fuel = a.fuel.unwrap_or(100_000);
                reports.push(laws::check_pebble_limit(&m, firings, fuel, 1000)?);
            }
        }
        LawName::RConstruction => {
            let names = fixtures_or(a, &["nd_right", "nd_pong"]);
            let [pos, neg] = names.as_slice() else {
                return Err(InputError(
                    "r-construction takes two fixtures: an accepting and a rejecting machine"
                        .into(),
                ));
            };
            let mut opts = RConstructionOptions {
                as_printed: a.as_printed,
                ..RConstructionOptions::default()
            };
            if let Some(fuel) = a.fuel {
                opts.fuel = fuel;
            }
            reports.push(laws::check_r_construction(
                &load_nd(pos)?,
                &load_nd(neg)?,
                opts,
            )?);
        }
        LawName::LimitCorrespondence => {
            let w = word_arg(a)?;
            for f in fixtures_or(a, &["nd_right"]) {
                let m = load_nd(&f)?;
                let (report, outcome) =
                    laws::check_limit_correspondence(&m, &w, a.fuel.unwrap_or(10_000));
                let mut report = report;
                report.details.push(format!("outcome: {outcome:?}"));
                reports.push(report);
            }
        }
        LawName::RunClassification => {
            let w = word_arg(a)?;
            for f in fixtures_or(a, &["nd_right"]) {
                let m = load_nd(&f)?;
                reports.push(laws::check_run_classification(
                    &m,
                    &w,
                    a.fuel.unwrap_or(10_000),
                ));
            }
        }
    }
    Ok(reports)
}

fn cmd_laws(a: &LawArgs) -> CmdResult {
    let reports = run_law(a)?;
    for r in &reports {
        print!("{}", r.render());
    }
    // refuted outranks unknown
    let worst = reports
        .iter()
        .map(|r| &r.verdict)
        .max_by_key(|v| match v {
            Verdict::Holds => 0,
            Verdict::Unknown(_) => 1,
            Verdict::Refuted(_) => 2,
        })
        .cloned()
        .unwrap_or(Verdict::Holds);
    if reports.len() > 1 {
        println!("VERDICT: {}", worst.name());
    }
    Ok(worst.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Compile(a) => cmd_compile(a),
        Command::Tm { mode } => cmd_tm(mode),
        Command::Trs { mode } => cmd_trs(mode),
        Command::Omega { mode } => cmd_omega(mode),
        Command::Laws(a) => cmd_laws(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
