//! File formats, experiments and the `factional` command line on top of
//! `factional-core`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod inputs;
pub mod table;

use std::ffi::OsString;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;

use args::{Cli, Command, GlobalArgs};
use commands::{Body, Context, Outcome};
use config::ConfigMap;
use error::{CliError, CliResult};

fn option_keys<T: Serialize>(value: &T) -> Vec<String> {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::Object(map)) => map.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

/// Rejects config keys that no option of this subcommand understands.
fn check_keys<T: Serialize>(config: &ConfigMap, sub: &T) -> CliResult<()> {
    let mut known = option_keys(&GlobalArgs::default());
    known.extend(option_keys(sub));
    match config.keys().find(|k| !known.contains(k)) {
        Some(key) => Err(CliError::config(key.clone(), "not an option of this subcommand")),
        None => Ok(()),
    }
}

fn execute<T, F>(global: &GlobalArgs, sub: &T, config: &ConfigMap, run: F) -> CliResult<(GlobalArgs, Outcome)>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce(&T, &Context) -> CliResult<Outcome>,
{
    check_keys(config, sub)?;
    let global = config::merge(global, config)?;
    let sub = config::merge(sub, config)?;
    let ctx = Context {
        seed: global.seed.unwrap_or(0),
        jobs: global.jobs,
    };
    let outcome = run(&sub, &ctx)?;
    Ok((global, outcome))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let config = match &cli.global.config {
        Some(path) => config::load(path)?,
        None => ConfigMap::new(),
    };
    let g = &cli.global;
    let (global, outcome) = match &cli.command {
        Command::Analyze(a) => execute(g, a, &config, commands::analyze::run)?,
        Command::Promise(a) => execute(g, a, &config, commands::promise::run)?,
        Command::Sweep(a) => execute(g, a, &config, commands::sweep::run)?,
        Command::Validate(a) => execute(g, a, &config, commands::validate::run)?,
        Command::Oracle(a) => execute(g, a, &config, commands::oracle::run)?,
        Command::Epistemic(a) => execute(g, a, &config, commands::epistemic::run)?,
        Command::Gen(a) => execute(g, a, &config, commands::gen::run)?,
        Command::Bounds(a) => execute(g, a, &config, commands::bounds::run)?,
    };
    let text = match outcome.body {
        Body::Table { table, default_format } => table.render(global.format.unwrap_or(default_format)),
        Body::Text(text) => text,
    };
    table::emit(&text, global.out.as_deref())?;
    match outcome.status {
        Some(status) => Err(status),
        None => Ok(()),
    }
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = e.hint() {
                eprintln!("{hint}");
            }
            e.exit_code()
        }
    }
}
