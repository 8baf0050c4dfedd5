mod args;
mod commands;
mod error;
mod output;
mod source;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::{CliError, ErrorKind};
use output::{Manifest, Run};

fn report(e: &CliError) {
    eprintln!("{}", e.record());
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or_default();
            report(&CliError::input(first.trim_start_matches("error: ")));
            return ExitCode::from(ErrorKind::Input.exit_code() as u8);
        }
    };
    ExitCode::from(execute(&cli, argv) as u8)
}

fn execute(cli: &Cli, argv: Vec<String>) -> i32 {
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            let e = CliError::internal(format!("thread pool: {e}"));
            report(&e);
            return e.kind.exit_code();
        }
    }
    let config = serde_json::to_value(cli).expect("arguments serialize");
    let manifest = Manifest::new(argv, config, rayon::current_num_threads());
    let mut run = match Run::new(cli.out.clone(), manifest) {
        Ok(run) => run,
        Err(e) => {
            report(&e);
            return e.kind.exit_code();
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| {
        commands::dispatch(&mut run, &cli.command)
    }))
    .unwrap_or_else(|payload| {
        let detail = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(CliError::internal(format!("internal failure: {detail}")))
    });
    let code = match &outcome {
        Ok(()) => 0,
        Err(e) => {
            report(e);
            e.kind.exit_code()
        }
    };
    if let Err(e) = run.finish(&outcome) {
        let e = CliError::input(format!("cannot write the manifest: {e}"));
        report(&e);
        if code == 0 {
            return e.kind.exit_code();
        }
    }
    code
}
