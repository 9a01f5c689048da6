use std::process::ExitCode;

use clap::Parser;
use polyfinsler::cli::{run, Cli, Context};
use polyfinsler::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::Input("--config <path> is required".into()))
        .and_then(|config| Context::load(config, cli.out.clone(), cli.tol_overrides.as_deref()))
        .and_then(|ctx| run(cli.command, &ctx));
    match result {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.summary).expect("serializable"));
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            let code = e.exit_code();
            eprintln!("{}", serde_json::json!({ "error": e.to_string(), "exit_code": code }));
            ExitCode::from(code as u8)
        }
    }
}
