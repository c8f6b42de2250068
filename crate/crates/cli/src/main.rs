//! `sfc`: check, run, inspect and compile `.sfc` programs.

mod diag;
mod dump;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sfc_core::eval::{Evaluator, DEFAULT_FUEL};
use sfc_core::syntax::SourceProgram;
use sfc_core::typecheck::{check_program, CheckedProgram};
use sfc_core::{lower_program, parse_program, print_scheme, print_type, CodegenError, Span, Ty};

use diag::Diagnostic;

const EXIT_TYPE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "sfc", version, about = "Closure-typed System F toolchain")]
struct Cli {
    /// Print diagnostics as one JSON object per line.
    #[arg(long, global = true)]
    json_diagnostics: bool,

    /// Evaluation step budget.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL,
          value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,

    /// Reject programs that use integer literals or addition.
    #[arg(long, global = true)]
    purity: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the type of every binding.
    Check { file: PathBuf },
    /// Evaluate the program and print the value of `main`.
    Eval { file: PathBuf },
    /// Lower the program to C++.
    Compile {
        file: PathBuf,
        /// Output path (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the parsed syntax tree.
    Ast { file: PathBuf },
    /// Print the captured-variable record of every lambda.
    Delta { file: PathBuf },
}

impl Command {
    fn file(&self) -> &PathBuf {
        match self {
            Command::Check { file }
            | Command::Eval { file }
            | Command::Compile { file, .. }
            | Command::Ast { file }
            | Command::Delta { file } => file,
        }
    }
}

struct Session {
    file: String,
    json: bool,
}

impl Session {
    fn fail(&self, code: u8, d: Diagnostic) -> ExitCode {
        d.emit(&self.file, self.json);
        ExitCode::from(code)
    }

    fn parse(&self, src: &str, purity: bool) -> Result<SourceProgram, ExitCode> {
        let p = parse_program(src).map_err(|e| {
            self.fail(
                EXIT_PARSE,
                Diagnostic::new(e.span, "parse-error", e.to_string()),
            )
        })?;
        if purity {
            if let Some(b) = p.bindings.iter().find(|b| b.term.uses_plumbing()) {
                return Err(self.fail(
                    EXIT_TYPE,
                    Diagnostic::new(
                        b.span,
                        "impure",
                        format!("`{}` uses integer literals or addition", b.name),
                    ),
                ));
            }
        }
        Ok(p)
    }

    fn check<'p>(&self, p: &'p SourceProgram) -> Result<CheckedProgram<'p>, ExitCode> {
        check_program(p).map_err(|e| {
            let names = e.error.names.iter().map(|n| n.to_string());
            self.fail(
                EXIT_TYPE,
                Diagnostic::new(
                    e.error.span,
                    e.error.kind.as_str(),
                    format!("in `{}`: {}", e.binding, e.error),
                )
                .with_names(names),
            )
        })
    }
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    let path = cli.command.file().clone();
    let s = Session {
        file: path.display().to_string(),
        json: cli.json_diagnostics,
    };
    let src = std::fs::read_to_string(&path).map_err(|e| {
        s.fail(
            EXIT_USAGE,
            Diagnostic::new(Span::default(), "io-error", e.to_string()),
        )
    })?;
    let program = s.parse(&src, cli.purity)?;

    match &cli.command {
        Command::Ast { .. } => print!("{}", dump::dump_program(&program)),
        Command::Check { .. } => {
            let checked = s.check(&program)?;
            for (name, scheme) in checked.schemes() {
                println!("{name} : {}", print_scheme(scheme));
            }
        }
        Command::Delta { .. } => {
            let checked = s.check(&program)?;
            for l in checked.lambdas_in_source_order() {
                println!("{} {}", l.span, print_type(&Ty::Scope(l.scope.clone())));
            }
        }
        Command::Eval { .. } => {
            s.check(&program)?;
            let Some(main) = program.main() else {
                return Err(s.fail(
                    EXIT_USAGE,
                    Diagnostic::new(Span::default(), "no-main", "program has no `main` binding"),
                ));
            };
            let ev = Evaluator::new()
                .with_fuel(cli.fuel)
                .load(&program)
                .map_err(|e| {
                    s.fail(
                        EXIT_RUNTIME,
                        Diagnostic::new(
                            e.error.span,
                            e.error.kind.as_str(),
                            format!("in `{}`: {}", e.binding, e.error.detail),
                        ),
                    )
                })?;
            let value = ev
                .globals()
                .lookup(&main.name)
                .expect("loaded programs bind every name");
            println!("{value}");
        }
        Command::Compile { output, .. } => {
            let checked = s.check(&program)?;
            let lowered = lower_program(&checked).map_err(|e| {
                let (span, detail) = match e {
                    CodegenError::Type { span, detail } => (span, detail),
                    CodegenError::Unsupported { span, detail } => {
                        (span, format!("cannot lower {detail}"))
                    }
                };
                s.fail(EXIT_TYPE, Diagnostic::new(span, "unsupported", detail))
            })?;
            match output {
                Some(out) => std::fs::write(out, lowered.text()).map_err(|e| {
                    s.fail(
                        EXIT_USAGE,
                        Diagnostic::new(
                            Span::default(),
                            "io-error",
                            format!("{}: {e}", out.display()),
                        ),
                    )
                })?,
                None => print!("{}", lowered.text()),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
