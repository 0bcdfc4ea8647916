use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;
use wittkit::cli::{parse_presentation, run_suite, run_suite_timed, Built, Params, Report};
use wittkit::error::{enumeration_cap, Error};

#[derive(Parser)]
#[command(name = "wittkit", version, about = "Exact checks on truncated Witt vectors, divided powers and W2 lifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    WittAxioms,
    AppendixRecursion,
    Deformation,
    Isogamma,
    Tautological,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::WittAxioms => "witt-axioms",
            Suite::AppendixRecursion => "appendix-recursion",
            Suite::Deformation => "deformation",
            Suite::Isogamma => "isogamma",
            Suite::Tautological => "tautological",
            Suite::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Run {
        suite: Suite,
        #[arg(long)]
        p: Option<u64>,
        /// Witt vector length.
        #[arg(long)]
        n: Option<usize>,
        /// Number of homogeneous coordinates, or the divided power degree for module input.
        #[arg(long)]
        d: Option<usize>,
        /// Witt length for sections of O(1).
        #[arg(long)]
        r: Option<usize>,
        /// A presentation, e.g. "F3[t]/(t^2+t)".
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum enumeration size; defaults to WITTKIT_GUARD or 2^20.
        #[arg(long)]
        guard: Option<u64>,
        /// Attach wall-clock timings (reports are then no longer byte-identical across runs).
        #[arg(long)]
        timings: bool,
    },
    /// Parse a presentation file ("-" for stdin) and describe what it builds.
    Parse {
        file: String,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn fail(e: &Error) -> ExitCode {
    match e {
        Error::NotReduced(m) => eprintln!("wittkit: rejected: not reduced: {m}"),
        _ => eprintln!("wittkit: error: {e}"),
    }
    ExitCode::from(2)
}

fn emit(report: &Report, format: Format) -> ExitCode {
    match format {
        Format::Json => out(&report.to_json()),
        Format::Md => out(&report.to_markdown()),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn parse_file(file: &str, format: Format) -> ExitCode {
    let text = if file == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(file)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("wittkit: cannot read {file}: {e}");
            return ExitCode::from(2);
        }
    };
    let pres = match parse_presentation(&text) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let built = match pres.build_default() {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let mut info = json!({
        "presentation": pres.format(),
        "kind": pres.kind,
        "p": pres.p,
        "n": pres.n,
        "generators": pres.generators,
    });
    match &built {
        Built::Algebra(a) => {
            info["dim"] = json!(a.dim());
            info["basis"] = json!(a.labels());
            info["reduced"] = json!(a.is_reduced());
            info["perfect"] = json!(a.is_perfect());
        }
        Built::Module(m) => {
            info["order"] = json!(m.order().to_string());
            info["invariant_factors"] = json!(m.invariant_factors());
        }
        Built::Extension(b) => {
            info["rank"] = json!(b.dim());
            info["basis"] = json!(b.labels());
        }
    }
    match format {
        Format::Json => out(&(serde_json::to_string_pretty(&info).expect("serializable") + "\n")),
        Format::Md => {
            let mut text = format!("`{}`\n\n", pres.format());
            for (k, v) in info.as_object().expect("object") {
                if k != "presentation" {
                    text.push_str(&format!("- {k}: {v}\n"));
                }
            }
            out(&text);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { suite, p, n, d, r, algebra, format, seed, guard, timings } => {
            let params = Params { p, n, d, r, algebra, seed, guard: guard.unwrap_or_else(enumeration_cap) };
            let result = if timings { run_suite_timed(suite.name(), &params) } else { run_suite(suite.name(), &params) };
            match result {
                Ok(report) => emit(&report, format),
                Err(e) => fail(&e),
            }
        }
        Command::Parse { file, format } => parse_file(&file, format),
    }
}
