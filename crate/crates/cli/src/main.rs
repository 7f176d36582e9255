//! `varlam`: command-line front end for the lambda-calculus workbench.

use std::fmt::Write as _;
use std::io::{self, BufRead, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use varlam_core::bracket::{extended_closed, turner};
use varlam_core::engine::{
    compare, normalize, trace, ReductionConfig, ReductionOutcome, Status, Verdict,
};
use varlam_core::kernel::{parse, print, Env, Term};
use varlam_core::metagen::{expand, parse_meta};
use varlam_core::prelude::{church, unchurch};
use varlam_core::suite::{run_suite, Suite};
use varlam_core::variadic::{Outcome, Report};

/// Exit code for command-line usage errors.
const EX_USAGE: u8 = 64;
/// Exit code for malformed input terms or definitions.
const EX_DATAERR: u8 = 65;
/// Exit code for unreadable input files.
const EX_NOINPUT: u8 = 66;

#[derive(Parser, Debug)]
#[command(
    name = "varlam",
    version,
    about = "Untyped lambda calculus workbench: reduction, bracket abstraction and arity-generic combinators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// Maximum number of beta steps per normalization.
    #[arg(long, global = true, default_value_t = 1_000_000, value_name = "N")]
    max_steps: u64,

    /// Maximum term size (nodes) during reduction.
    #[arg(long, global = true, default_value_t = 1_000_000, value_name = "N")]
    max_size: u64,

    /// Skip the eta post-pass; normal forms are then beta-normal only.
    #[arg(long, global = true)]
    no_eta: bool,

    /// Start from an empty environment instead of the shipped prelude.
    #[arg(long, global = true)]
    no_prelude: bool,

    /// Load extra `Name := term ;` definitions (may be repeated).
    #[arg(long, global = true, value_name = "FILE")]
    defs: Vec<PathBuf>,

    /// Print Church numerals as `#n`.
    #[arg(long, global = true)]
    sugar: bool,

    /// Print every reduction step.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// Term given on the command line.
    #[arg(
        short = 'e',
        long = "expr",
        value_name = "EXPR",
        conflicts_with = "file"
    )]
    expr: Option<String>,

    /// File holding the input; standard input is read when neither is given.
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PairInput {
    /// A term to compare; give it twice.
    #[arg(short = 'e', long = "expr", value_name = "EXPR", num_args = 1, action = clap::ArgAction::Append)]
    exprs: Vec<String>,

    /// Files holding the terms. A single input may hold both terms, either on
    /// two lines or separated by `==`.
    #[arg(value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Turner,
    Variadic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Kernel,
    Bracket,
    Variadic,
    Fixpoint,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Kernel => Suite::Kernel,
            SuiteArg::Bracket => Suite::Bracket,
            SuiteArg::Variadic => Suite::Variadic,
            SuiteArg::Fixpoint => Suite::Fixpoint,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term and print it in canonical form.
    Parse(Input),
    /// Reduce a term to normal form (exit 2 if fuel or size runs out).
    Normalize(Input),
    /// Decide beta-eta equality of two terms: EQUAL (0), NOT-EQUAL (1), UNKNOWN (2).
    Eq(PairInput),
    /// Compile a term to combinators.
    Bracket {
        #[command(flatten)]
        input: Input,
        /// `turner` takes a term; `variadic` takes a meta-term such as `\x[1..n]. x[1..n]`.
        #[arg(long, value_enum, default_value = "turner")]
        algo: Algo,
        /// With `--algo variadic`: apply the result to `#N` and normalize.
        #[arg(long, value_name = "N")]
        n: Option<u64>,
    },
    /// Instantiate a meta-term at a concrete arity.
    Expand {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "N")]
        n: usize,
    },
    /// Print the Church numeral for N.
    Church {
        #[arg(value_name = "N")]
        n: u64,
    },
    /// Read back a term that normalizes to a Church numeral.
    Unchurch(Input),
    /// Run verification suites; exit 0 iff every case passes.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 3, value_name = "N")]
        max_n: usize,
    },
    /// Interactive loop: terms are normalized; `:def Name := term`, `:eq a == b`, `:quit`.
    Repl,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EX_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl std::fmt::Display) -> Failure {
        Failure {
            code: EX_DATAERR,
            message: message.to_string(),
        }
    }
}

type Run = Result<u8, Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return read_stdin();
    }
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EX_NOINPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(|e| Failure {
        code: EX_NOINPUT,
        message: format!("standard input: {e}"),
    })?;
    Ok(s)
}

impl Input {
    fn source(&self) -> Result<String, Failure> {
        match (&self.expr, &self.file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(f)) => read_file(f),
            (None, None) => read_stdin(),
        }
    }
}

fn prelude_env(no_prelude: bool) -> Result<Env, Failure> {
    if no_prelude {
        return Ok(Env::empty());
    }
    let Some(dir) = std::env::var_os("VARLAM_PRELUDE") else {
        return Ok(Env::prelude());
    };
    let dir = PathBuf::from(dir);
    let mut env = Env::empty();
    let base = dir.join("prelude.lam");
    env.load(&read_file(&base)?, &base.display().to_string())
        .map_err(|e| Failure::data(format!("{}: {e}", base.display())))?;
    let variadic = dir.join("variadic.lam");
    if variadic.exists() {
        env.load(&read_file(&variadic)?, &variadic.display().to_string())
            .map_err(|e| Failure::data(format!("{}: {e}", variadic.display())))?;
    }
    Ok(env)
}

fn build_env(opts: &Options) -> Result<Env, Failure> {
    let mut env = prelude_env(opts.no_prelude)?;
    for path in &opts.defs {
        env.load(&read_file(path)?, &path.display().to_string())
            .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    }
    Ok(env)
}

fn config(opts: &Options) -> ReductionConfig {
    ReductionConfig {
        fuel: opts.max_steps,
        max_term_size: opts.max_size,
        eta: !opts.no_eta,
    }
}

fn parse_term(src: &str, env: &Env) -> Result<Term, Failure> {
    parse(src, env).map_err(Failure::data)
}

/// Writes the normal form, or a FUEL/SIZE diagnostic; returns the exit code.
fn report_outcome(
    out: &ReductionOutcome,
    cfg: &ReductionConfig,
    sugar: bool,
    stdout: &mut String,
) -> u8 {
    match out.status {
        Status::NormalForm => {
            let _ = writeln!(stdout, "{}", print(&out.result, sugar));
            0
        }
        Status::FuelExhausted => {
            eprintln!("FUEL: no normal form within {} steps", cfg.fuel);
            2
        }
        Status::SizeExceeded => {
            eprintln!(
                "SIZE: term grew beyond {} nodes after {} steps",
                cfg.max_term_size, out.steps
            );
            2
        }
    }
}

fn cmd_normalize(t: &Term, env: &Env, opts: &Options, stdout: &mut String) -> Run {
    let cfg = config(opts);
    if opts.trace {
        let seq = trace(t, env, &cfg).map_err(Failure::data)?;
        for (i, step) in seq.iter().enumerate() {
            let _ = writeln!(stdout, "{i:>4}: {}", print(step, opts.sugar));
        }
    }
    let out = normalize(t, env, &cfg).map_err(Failure::data)?;
    Ok(report_outcome(&out, &cfg, opts.sugar, stdout))
}

/// Splits a single input holding two terms.
fn split_pair(src: &str) -> Option<(String, String)> {
    if let Some((a, b)) = src.split_once("==") {
        return Some((a.to_string(), b.to_string()));
    }
    let lines: Vec<&str> = src
        .lines()
        .filter(|l| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with("--")
        })
        .collect();
    match lines.as_slice() {
        [a, b] => Some((a.to_string(), b.to_string())),
        _ => None,
    }
}

fn cmd_eq(input: &PairInput, env: &Env, opts: &Options, stdout: &mut String) -> Run {
    let mut sources = input.exprs.clone();
    for f in &input.files {
        sources.push(read_file(f)?);
    }
    if sources.is_empty() {
        sources.push(read_stdin()?);
    }
    let (a, b) = match sources.as_slice() {
        [one] => split_pair(one).ok_or_else(|| {
            Failure::usage("eq: a single input must hold two terms (two lines, or `a == b`)")
        })?,
        [a, b] => (a.clone(), b.clone()),
        more => {
            return Err(Failure::usage(format!(
                "eq takes two terms, got {}",
                more.len()
            )))
        }
    };
    let (a, b) = (parse_term(&a, env)?, parse_term(&b, env)?);
    write_verdict(&a, &b, env, &config(opts), stdout)
}

fn write_verdict(a: &Term, b: &Term, env: &Env, cfg: &ReductionConfig, stdout: &mut String) -> Run {
    let cmp = compare(a, b, env, cfg).map_err(Failure::data)?;
    let (word, code) = match cmp.verdict {
        Verdict::Equal => ("EQUAL", 0),
        Verdict::NotEqual => ("NOT-EQUAL", 1),
        Verdict::Unknown => ("UNKNOWN", 2),
    };
    let _ = writeln!(stdout, "{word}");
    Ok(code)
}

fn cmd_bracket(
    src: &str,
    algo: Algo,
    n: Option<u64>,
    env: &Env,
    opts: &Options,
    stdout: &mut String,
) -> Run {
    match algo {
        Algo::Turner => {
            if n.is_some() {
                return Err(Failure::usage("--n only applies to --algo variadic"));
            }
            let t = parse_term(src, env)?;
            // A bare name stands for its definition.
            let t = match &t {
                Term::Const(c) => env.get(c).cloned().unwrap_or(t),
                _ => t,
            };
            let _ = writeln!(stdout, "{}", print(&turner(&t), opts.sugar));
            Ok(0)
        }
        Algo::Variadic => {
            let m = parse_meta(src).map_err(Failure::data)?;
            let generic = extended_closed(&m).map_err(Failure::data)?;
            match n {
                None => {
                    let _ = writeln!(stdout, "{}", print(&generic, opts.sugar));
                    Ok(0)
                }
                Some(n) => {
                    let cfg = config(opts);
                    let out = normalize(&Term::app(generic, church(n)), env, &cfg)
                        .map_err(Failure::data)?;
                    Ok(report_outcome(&out, &cfg, opts.sugar, stdout))
                }
            }
        }
    }
}

fn write_report(group: &str, report: &Report, out: &mut String) {
    let _ = writeln!(
        out,
        "[{group}] {}: {} cases, {} pass, {} fail, {} inconclusive, {} notes",
        report.name,
        report.cases.len(),
        report.count(Outcome::Pass),
        report.count(Outcome::Fail),
        report.count(Outcome::Inconclusive),
        report.count(Outcome::Note),
    );
    for case in &report.cases {
        let mut line = format!("  {:<12} {}", case.outcome.label(), case.label);
        if case.steps > 0 {
            let unit = if case.steps == 1 { "step" } else { "steps" };
            let _ = write!(line, "  [{} {unit}]", case.steps);
        }
        if !case.detail.is_empty() {
            let _ = write!(line, "  -- {}", case.detail);
        }
        let _ = writeln!(out, "{line}");
    }
}

fn cmd_check(suite: SuiteArg, max_n: usize, env: &Env, opts: &Options, stdout: &mut String) -> Run {
    if opts.no_prelude {
        return Err(Failure::usage("check needs the prelude; drop --no-prelude"));
    }
    let cfg = config(opts);
    let groups = run_suite(suite.into(), max_n, env, &cfg).map_err(Failure::data)?;
    let (mut reports, mut checked, mut passed, mut notes) = (0, 0, 0, 0);
    let mut all_pass = true;
    for (group, rs) in &groups {
        for r in rs {
            write_report(group, r, stdout);
            reports += 1;
            checked += r.checked();
            passed += r.count(Outcome::Pass);
            notes += r.count(Outcome::Note);
            all_pass &= r.passed();
        }
    }
    let _ = writeln!(
        stdout,
        "summary: {} ({reports} reports, {passed}/{checked} cases pass, {notes} notes; max-n {max_n}, fuel {})",
        if all_pass { "PASS" } else { "FAIL" },
        cfg.fuel
    );
    Ok(if all_pass { 0 } else { 1 })
}

fn repl_line(line: &str, env: &mut Env, opts: &Options) -> Result<Option<String>, Failure> {
    let line = line.trim();
    let mut out = String::new();
    if line.is_empty() || line.starts_with("--") {
        return Ok(Some(out));
    }
    if line == ":quit" || line == ":q" {
        return Ok(None);
    }
    if let Some(def) = line.strip_prefix(":def") {
        let def = def.trim().trim_end_matches(';');
        let names = env
            .load(&format!("{def} ;"), "repl")
            .map_err(Failure::data)?;
        let _ = writeln!(out, "defined {}", names.join(", "));
    } else if let Some(pair) = line.strip_prefix(":eq") {
        let (a, b) = split_pair(pair).ok_or_else(|| Failure::usage(":eq expects `a == b`"))?;
        let (a, b) = (parse_term(&a, env)?, parse_term(&b, env)?);
        write_verdict(&a, &b, env, &config(opts), &mut out)?;
    } else if line.starts_with(':') {
        return Err(Failure::usage(format!(
            "unknown command `{line}`; try :def Name := term, :eq a == b, :quit"
        )));
    } else {
        let t = parse_term(line, env)?;
        cmd_normalize(&t, env, opts, &mut out)?;
    }
    Ok(Some(out))
}

fn cmd_repl(mut env: Env, opts: &Options) -> Run {
    let interactive = io::stdin().is_terminal();
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            print!("λ> ");
            let _ = io::stdout().flush();
        }
        let Some(line) = lines.next() else { break };
        let line = line.map_err(|e| Failure::data(format!("standard input: {e}")))?;
        match repl_line(&line, &mut env, opts) {
            Ok(Some(out)) => {
                print!("{out}");
                let _ = io::stdout().flush();
            }
            Ok(None) => break,
            Err(f) => eprintln!("error: {}", f.message),
        }
    }
    Ok(0)
}

fn run(cli: Cli, stdout: &mut String) -> Run {
    let opts = &cli.opts;
    let env = build_env(opts)?;
    match &cli.command {
        Command::Parse(input) => {
            let t = parse_term(&input.source()?, &env)?;
            let _ = writeln!(stdout, "{}", print(&t, opts.sugar));
            Ok(0)
        }
        Command::Normalize(input) => {
            let t = parse_term(&input.source()?, &env)?;
            cmd_normalize(&t, &env, opts, stdout)
        }
        Command::Eq(input) => cmd_eq(input, &env, opts, stdout),
        Command::Bracket { input, algo, n } => {
            cmd_bracket(&input.source()?, *algo, *n, &env, opts, stdout)
        }
        Command::Expand { input, n } => {
            let m = parse_meta(&input.source()?).map_err(Failure::data)?;
            let t = expand(&m, *n).map_err(Failure::data)?;
            let _ = writeln!(stdout, "{}", print(&t, opts.sugar));
            Ok(0)
        }
        Command::Church { n } => {
            let _ = writeln!(stdout, "{}", print(&church(*n), opts.sugar));
            Ok(0)
        }
        Command::Unchurch(input) => {
            let t = parse_term(&input.source()?, &env)?;
            let n = unchurch(&t, &env, &config(opts)).map_err(Failure::data)?;
            let _ = writeln!(stdout, "{n}");
            Ok(0)
        }
        Command::Check { suite, max_n } => cmd_check(*suite, *max_n, &env, opts, stdout),
        Command::Repl => cmd_repl(env, opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EX_USAGE } else { 0 });
        }
    };
    // Deep terms recurse deeply in the printer and converters.
    let worker = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || {
            let mut stdout = String::new();
            let result = run(cli, &mut stdout);
            print!("{stdout}");
            let _ = io::stdout().flush();
            result
        })
        .expect("spawn worker thread");
    match worker.join() {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(f)) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(70),
    }
}
