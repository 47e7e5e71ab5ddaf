//! Command-line front-end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::criterion::{classify, ClassifyOptions, Verdict};
use crate::generate::{generate, rng_from_seed, GenKind};
use crate::ketparse::{parse_state, render_document};
use crate::oracle::{oracle_classify, DEFAULT_ORACLE_CAP};
use crate::report::{explain, explanation_json, explanation_text, verdict_json, verdict_text};
use crate::selftest;
use crate::state::SparseState;

pub const EXIT_INPUT_ERROR: i32 = 64;
pub const CAP_ENV: &str = "ENTGATE_ORACLE_CAP";

const AFTER_HELP: &str = "\
Exit status:
  0   separable or trivially separable (selftest: all fixtures pass)
  1   genuinely entangled (selftest: some fixture failed)
  2   unknown (the exhaustive search was needed above the oracle cap)
  64  input error (unreadable file, syntax error, bad parameters)

When FILE is a directory every regular file in it is classified in name
order; the exit status is then 64 if any file failed to parse, otherwise
the largest status among the files.

ENTGATE_ORACLE_CAP sets the oracle cap when --oracle-cap is absent.
`gen` uses the ChaCha8 generator seeded with --seed (rand_chacha
seed_from_u64), so output is reproducible.";

#[derive(Parser, Debug)]
#[command(name = "entgate", version, about = "Separability classifier for sparse pure qubit states", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (default: text on a terminal, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest qubit count the exhaustive cut search will attempt.
    #[arg(long, global = true)]
    oracle_cap: Option<usize>,
    /// Decide by exhaustive cut search even when the pair-structure test applies.
    #[arg(long, global = true)]
    force_oracle: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a state.
    Classify(InputArgs),
    /// Show pair structures, coefficient matrices and minors.
    Explain(InputArgs),
    /// Classify by exhaustive cut search only.
    Oracle(InputArgs),
    /// Print a random state document.
    Gen(GenArgs),
    /// Check the built-in reference states.
    Selftest,
}

#[derive(clap::Args, Debug)]
struct InputArgs {
    /// State file, directory of state files, or `-` for standard input.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// separable, random or complete-pairs.
    #[arg(long, default_value = "separable")]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy)]
enum Mode {
    Classify,
    Explain,
    Oracle,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

/// Runs the CLI with explicit streams and environment lookup; returns the
/// exit status.
pub fn run(
    args: Vec<OsString>,
    env_cap: Option<String>,
    stdout_is_tty: bool,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io { stdin, stdout, stderr };
    let cap = match resolve_cap(cli.oracle_cap, env_cap) {
        Ok(cap) => cap,
        Err(msg) => {
            let _ = writeln!(io.stderr, "entgate: {msg}");
            return EXIT_INPUT_ERROR;
        }
    };
    let format = cli
        .format
        .unwrap_or(if stdout_is_tty { Format::Text } else { Format::Json });
    let opts = ClassifyOptions {
        oracle_cap: cap,
        force_oracle: cli.force_oracle,
    };
    let code = match cli.command {
        Command::Classify(a) => run_input(&a.input, Mode::Classify, format, &opts, &mut io),
        Command::Explain(a) => run_input(&a.input, Mode::Explain, format, &opts, &mut io),
        Command::Oracle(a) => run_input(&a.input, Mode::Oracle, format, &opts, &mut io),
        Command::Gen(g) => run_gen(&g, &mut io),
        Command::Selftest => run_selftest(format, &opts, &mut io),
    };
    let _ = io.stdout.flush();
    code
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    let stdout_is_tty = io::stdout().is_terminal();
    let mut stdin = io::stdin().lock();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    run(
        std::env::args_os().collect(),
        std::env::var(CAP_ENV).ok(),
        stdout_is_tty,
        &mut stdin,
        &mut stdout,
        &mut stderr,
    )
}

fn resolve_cap(flag: Option<usize>, env: Option<String>) -> Result<usize, String> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match env {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("{CAP_ENV} must be a non-negative integer, got `{text}`")),
        None => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn read_source(input: &str, io: &mut Io<'_>) -> Result<String, String> {
    if input == "-" {
        let mut text = String::new();
        io.stdin
            .read_to_string(&mut text)
            .map_err(|e| format!("<stdin>: {e}"))?;
        Ok(text)
    } else {
        fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))
    }
}

fn load(label: &str, text: &str) -> Result<SparseState, String> {
    parse_state(text).map_err(|e| match e.position() {
        Some(_) => format!("{label}:{e}"),
        None => format!("{label}: {e}"),
    })
}

fn evaluate(
    state: &SparseState,
    mode: Mode,
    format: Format,
    opts: &ClassifyOptions,
) -> (i32, serde_json::Value, String) {
    match mode {
        Mode::Explain => {
            let e = explain(state, opts);
            let code = e.verdict.kind.exit_code();
            (code, explanation_json(&e), explanation_text(&e))
        }
        Mode::Classify | Mode::Oracle => {
            let v: Verdict = match mode {
                Mode::Oracle => oracle_classify(state, opts.oracle_cap),
                _ => classify(state, opts),
            };
            let text = if format == Format::Text {
                verdict_text(&v)
            } else {
                String::new()
            };
            (v.kind.exit_code(), verdict_json(&v), text)
        }
    }
}

fn run_input(input: &str, mode: Mode, format: Format, opts: &ClassifyOptions, io: &mut Io<'_>) -> i32 {
    if input != "-" && Path::new(input).is_dir() {
        return run_batch(Path::new(input), mode, format, opts, io);
    }
    let label = if input == "-" { "<stdin>" } else { input };
    let state = match read_source(input, io).and_then(|text| load(label, &text)) {
        Ok(s) => s,
        Err(msg) => {
            let _ = writeln!(io.stderr, "entgate: {msg}");
            return EXIT_INPUT_ERROR;
        }
    };
    let (code, json, text) = evaluate(&state, mode, format, opts);
    match format {
        Format::Json => {
            let _ = writeln!(
                io.stdout,
                "{}",
                serde_json::to_string_pretty(&json).expect("json values serialize")
            );
        }
        Format::Text => {
            let _ = io.stdout.write_all(text.as_bytes());
        }
    }
    code
}

fn run_batch(dir: &Path, mode: Mode, format: Format, opts: &ClassifyOptions, io: &mut Io<'_>) -> i32 {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect(),
        Err(e) => {
            let _ = writeln!(io.stderr, "entgate: {}: {e}", dir.display());
            return EXIT_INPUT_ERROR;
        }
    };
    files.sort();
    let mut worst = 0;
    let mut input_error = false;
    let mut docs = Vec::new();
    for path in files {
        let label = path.display().to_string();
        let loaded = fs::read_to_string(&path)
            .map_err(|e| format!("{label}: {e}"))
            .and_then(|t| load(&label, &t));
        match loaded {
            Err(msg) => {
                input_error = true;
                let _ = writeln!(io.stderr, "entgate: {msg}");
                docs.push(serde_json::json!({ "file": label, "error": msg }));
                if format == Format::Text {
                    let _ = writeln!(io.stdout, "== {label}\nerror: {msg}");
                }
            }
            Ok(state) => {
                let (code, json, text) = evaluate(&state, mode, format, opts);
                worst = worst.max(code);
                docs.push(serde_json::json!({ "file": label, "result": json }));
                if format == Format::Text {
                    let _ = write!(io.stdout, "== {label}\n{text}");
                }
            }
        }
    }
    if format == Format::Json {
        let all = serde_json::Value::Array(docs);
        let _ = writeln!(
            io.stdout,
            "{}",
            serde_json::to_string_pretty(&all).expect("json values serialize")
        );
    }
    if input_error {
        EXIT_INPUT_ERROR
    } else {
        worst
    }
}

fn run_gen(g: &GenArgs, io: &mut Io<'_>) -> i32 {
    let mut rng = rng_from_seed(g.seed);
    match generate(&mut rng, g.kind, g.n, g.m) {
        Ok(state) => {
            let _ = io.stdout.write_all(render_document(&state).as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(io.stderr, "entgate: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn run_selftest(format: Format, opts: &ClassifyOptions, io: &mut Io<'_>) -> i32 {
    let report = selftest::run(&crate::fixtures::all(), opts);
    match format {
        Format::Json => {
            let _ = writeln!(
                io.stdout,
                "{}",
                serde_json::to_string_pretty(&report).expect("reports serialize")
            );
        }
        Format::Text => {
            let _ = io.stdout.write_all(report.to_text().as_bytes());
        }
    }
    report.exit_code()
}
