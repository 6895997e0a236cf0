use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use grouplat::task::{export_dot, run_oracle, run_task, RunOptions, TaskError};

const USAGE: &str = "\
grouplat — subgroup lattice problems in free and nilpotent groups

USAGE:
    grouplat run [--check-oracle <K>] [--compact] <task.json | ->
    grouplat dot [--compact] <task.json | -> -o <out.dot>
    grouplat oracle [--budget <K>] [--compact] <task.json | ->

Task files are JSON; results are printed as JSON on stdout and timing on
stderr. `-` reads the task from stdin. GROUPLAT_EXPAND_BUDGET overrides
the factorization expansion budget (default 1000000).

Exit codes: 0 computed (including negative answers), 2 parse error,
3 precondition violation.";

struct Args {
    command: String,
    input: Option<String>,
    output: Option<String>,
    check_oracle: Option<usize>,
    budget: Option<usize>,
    compact: bool,
}

fn parse_args() -> Result<Args, String> {
    let mut argv = std::env::args().skip(1);
    let command = argv.next().ok_or_else(|| USAGE.to_string())?;
    let mut args = Args {
        command,
        input: None,
        output: None,
        check_oracle: None,
        budget: None,
        compact: false,
    };
    while let Some(arg) = argv.next() {
        match arg.as_str() {
            "--check-oracle" => {
                let value = argv.next().ok_or("--check-oracle needs a budget")?;
                args.check_oracle =
                    Some(value.parse().map_err(|_| "--check-oracle needs an integer")?);
            }
            "--budget" => {
                let value = argv.next().ok_or("--budget needs an integer")?;
                args.budget = Some(value.parse().map_err(|_| "--budget needs an integer")?);
            }
            "--compact" => args.compact = true,
            "-o" => args.output = Some(argv.next().ok_or("-o needs a path")?),
            "--help" | "-h" => return Err(USAGE.to_string()),
            other if args.input.is_none() => args.input = Some(other.to_string()),
            other => return Err(format!("unexpected argument `{other}`")),
        }
    }
    Ok(args)
}

fn read_input(path: &str) -> Result<String, TaskError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| TaskError {
                exit_code: 2,
                message: format!("cannot read stdin: {e}"),
            })?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| TaskError {
            exit_code: 2,
            message: format!("cannot read `{path}`: {e}"),
        })
    }
}

fn expand_budget() -> usize {
    std::env::var("GROUPLAT_EXPAND_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(grouplat::geodesic::DEFAULT_EXPAND_BUDGET)
}

fn run() -> Result<(), TaskError> {
    let args = parse_args().map_err(|message| TaskError {
        exit_code: 2,
        message,
    })?;
    let input_path = args.input.as_deref().ok_or_else(|| TaskError {
        exit_code: 2,
        message: "missing task file argument".to_string(),
    })?;
    let input = read_input(input_path)?;
    let opts = RunOptions {
        check_oracle: args.check_oracle,
        compact: args.compact,
        expand_budget: expand_budget(),
    };
    let started = Instant::now();
    match args.command.as_str() {
        "run" => {
            let out = run_task(&input, &opts)?;
            println!("{}", serde_json::to_string(&out).expect("serializable"));
        }
        "dot" => {
            let dot = export_dot(&input, &opts)?;
            match &args.output {
                Some(path) => std::fs::write(path, dot).map_err(|e| TaskError {
                    exit_code: 3,
                    message: format!("cannot write `{path}`: {e}"),
                })?,
                None => print!("{dot}"),
            }
        }
        "oracle" => {
            let out = run_oracle(&input, args.budget, &opts)?;
            println!("{}", serde_json::to_string(&out).expect("serializable"));
        }
        other => {
            return Err(TaskError {
                exit_code: 2,
                message: format!("unknown subcommand `{other}`\n{USAGE}"),
            })
        }
    }
    eprintln!("timing: {} ms", started.elapsed().as_millis());
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.exit_code as u8)
        }
    }
}
