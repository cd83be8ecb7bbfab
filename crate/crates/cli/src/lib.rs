//! Command-line front end: parse, compile, validate, lower, lift and check.
//!
//! [`run`] takes the argument vector and output sinks and returns the exit
//! code, so the binary and the tests drive exactly the same code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use durative_core::compiler::{compile_domain, CompilationMap, CompileOptions};
use durative_core::model::{Domain, Plan, Problem, Rational};
use durative_core::parser::{
    parse_domain_with_warnings, parse_plan, parse_problem, print_domain, print_plan, print_problem, Dialect, ParseError,
};
use durative_core::roundtrip::{compare_verdicts, lift_plan, lower_plan};
use durative_core::validator::{validate, Semantics, ValidateOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "durative", version, about = "Rich durative actions: compile, validate and compare plans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Syntax-check a domain, and optionally a problem and a plan.
    Parse {
        domain: PathBuf,
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Print the normalized form of every input.
        #[arg(long)]
        dump: bool,
    },
    /// Compile rich actions into strict PDDL2.1.
    Compile {
        domain: PathBuf,
        /// Output domain; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the compilation map (JSON).
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        untagged_clocks: bool,
    },
    /// Validate a timed plan.
    Validate {
        domain: PathBuf,
        problem: PathBuf,
        plan: PathBuf,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Rich)]
        semantics: SemanticsArg,
        #[command(flatten)]
        common: ReportArgs,
    },
    /// Rewrite a rich plan into envelope and segment steps.
    Lower {
        domain: PathBuf,
        problem: PathBuf,
        plan: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fold envelope and segment steps back into rich steps.
    Lift {
        plan: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile, lower, validate both encodings and compare the verdicts.
    Check {
        domain: PathBuf,
        problem: PathBuf,
        plan: PathBuf,
        #[arg(long)]
        untagged_clocks: bool,
        #[command(flatten)]
        common: ReportArgs,
    },
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Minimum separation between interfering happenings.
    #[arg(long, default_value = "0.001", value_parser = parse_epsilon)]
    epsilon: Rational,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SemanticsArg {
    Rich,
    Strict21,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    let r: Rational = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if r.is_negative() {
        return Err("epsilon must not be negative".into());
    }
    Ok(r)
}

/// A user-facing error: printed on standard error, exit code 2.
struct Failure(String);

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: ParseError) -> Failure {
    Failure(format!("{}:{e}", path.display()))
}

fn load_domain(path: &Path, err: &mut dyn Write) -> Result<Domain, Failure> {
    let (d, warnings) = parse_domain_with_warnings(&read(path)?).map_err(|e| located(path, e))?;
    for w in warnings {
        let _ = writeln!(err, "{}:{}: warning: {}", path.display(), w.span, w.message);
    }
    Ok(d)
}

fn load_problem(path: &Path) -> Result<Problem, Failure> {
    parse_problem(&read(path)?).map_err(|e| located(path, e))
}

fn load_plan(path: &Path) -> Result<Plan, Failure> {
    parse_plan(&read(path)?).map_err(|e| located(path, e))
}

fn load_map(path: &Path) -> Result<CompilationMap, Failure> {
    CompilationMap::from_json(&read(path)?)
        .map_err(|e| Failure(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

fn emit(target: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match target {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure(format!("standard output: {e}"))),
    }
}

fn fail(context: &Path, e: impl std::fmt::Display) -> Failure {
    Failure(format!("{}: {e}", context.display()))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Parse { domain, problem, plan, dump } => {
            let d = load_domain(&domain, err)?;
            let p = problem.as_deref().map(load_problem).transpose()?;
            let l = plan.as_deref().map(load_plan).transpose()?;
            let mut text = String::new();
            if dump {
                text.push_str(&print_domain(&d, Dialect::Rich).map_err(|e| fail(&domain, e))?);
                if let Some(p) = &p {
                    text.push_str(&print_problem(p));
                }
                if let Some(l) = &l {
                    text.push_str(&print_plan(l));
                }
            } else {
                text.push_str(&format!("domain {}: {} action(s)\n", d.name, d.actions.len()));
                if let Some(p) = &p {
                    text.push_str(&format!("problem {}: {} object(s)\n", p.name, p.objects.len()));
                }
                if let Some(l) = &l {
                    text.push_str(&format!("plan: {} step(s)\n", l.len()));
                }
            }
            emit(None, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Compile { domain, output, map, untagged_clocks } => {
            let d = load_domain(&domain, err)?;
            let opts = CompileOptions { tagged_clocks: !untagged_clocks };
            let (compiled, m) = compile_domain(&d, opts).map_err(|e| fail(&domain, e))?;
            let text = print_domain(&compiled, Dialect::Strict21).map_err(|e| fail(&domain, e))?;
            emit(output.as_deref(), &text, out)?;
            if let Some(path) = &map {
                emit(Some(path), &m.to_json(), out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Validate { domain, problem, plan, semantics, common } => {
            let d = load_domain(&domain, err)?;
            let p = load_problem(&problem)?;
            let l = load_plan(&plan)?;
            let semantics = match semantics {
                SemanticsArg::Rich => Semantics::Rich,
                SemanticsArg::Strict21 => Semantics::Strict21,
            };
            let opts = ValidateOptions { semantics, epsilon: common.epsilon };
            let verdict = validate(&d, &p, &l, &opts).map_err(|e| fail(&plan, e))?;
            let text = match common.format {
                Format::Text => verdict.to_text(),
                Format::Json => verdict.to_json(),
            };
            emit(None, &text, out)?;
            Ok(if verdict.is_valid() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Lower { domain, problem, plan, map, output } => {
            let d = load_domain(&domain, err)?;
            let p = load_problem(&problem)?;
            let l = load_plan(&plan)?;
            let m = load_map(&map)?;
            let (lowered, _) = lower_plan(&l, &d, &p, &m).map_err(|e| fail(&plan, e))?;
            emit(output.as_deref(), &print_plan(&lowered), out)?;
            Ok(EXIT_OK)
        }
        Command::Lift { plan, map, output } => {
            let l = load_plan(&plan)?;
            let m = load_map(&map)?;
            let lifted = lift_plan(&l, &m).map_err(|e| fail(&plan, e))?;
            emit(output.as_deref(), &print_plan(&lifted), out)?;
            Ok(EXIT_OK)
        }
        Command::Check { domain, problem, plan, untagged_clocks, common } => {
            let d = load_domain(&domain, err)?;
            let p = load_problem(&problem)?;
            let l = load_plan(&plan)?;
            let opts = CompileOptions { tagged_clocks: !untagged_clocks };
            let (compiled, m) = compile_domain(&d, opts).map_err(|e| fail(&domain, e))?;
            let report = compare_verdicts(&d, &compiled, &p, &l, &m, &common.epsilon).map_err(|e| fail(&plan, e))?;
            let text = match common.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            emit(None, &text, out)?;
            Ok(if report.agreement() { EXIT_OK } else { EXIT_INVALID })
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_ERROR
        }
    }
}
