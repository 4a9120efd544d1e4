//! `sphere-hecke`: batch front end over the library.
//!
//! Exit status: 0 when every requested check passes, 1 when one fails, 2 on a
//! usage, configuration or domain error, 3 when only exploratory checks fail.

mod commands;
mod config;
mod output;
mod verify;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use serde_json::json;

use config::{Cli, Command, FileConfig, Format, RunConfig};

fn dispatch(cfg: &RunConfig) -> Result<commands::Report> {
    match cfg.command {
        Command::Enumerate => commands::enumerate(cfg),
        Command::Class => commands::class(cfg),
        Command::Hecke => commands::hecke(cfg),
        Command::Eigen => commands::eigen(cfg),
        Command::Restrict => commands::restrict(cfg),
        Command::Sweep => commands::sweep_cmd(cfg),
        Command::Theta => commands::theta(cfg),
        Command::Cm => commands::cm(cfg),
        Command::Afe => commands::afe(cfg),
        Command::Verify => Ok(verify::run(cfg)),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let file = match &cli.opts.config {
        Some(p) => config::read_file_config(p)?,
        None => FileConfig::default(),
    };
    let cfg = config::merge(cli.command, &cli.opts, file)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let report = dispatch(&cfg)?;
    let text = match cfg.format {
        Format::Json => output::to_json_string(&json!({
            "command": cfg.command,
            "ok": report.failures.is_empty(),
            "exploratory_ok": report.exploratory_failures.is_empty(),
            "records": report.records,
        }))?,
        Format::Csv => output::to_csv_string(&report.table)?,
    };
    let path = cfg.output_path();
    output::write_text(path.as_deref(), &text)?;
    if let Some(plot) = &report.plot {
        let target = cfg.plot.clone().or_else(|| path.as_ref().map(|p| p.with_extension("dat")));
        if let Some(t) = target {
            output::write_text(Some(&t), plot)?;
        }
    }
    for line in &report.summary {
        eprintln!("{line}");
    }
    for f in &report.failures {
        eprintln!("failed: {f}");
    }
    for f in &report.exploratory_failures {
        eprintln!("investigate: {f}");
    }
    Ok(if !report.failures.is_empty() {
        ExitCode::from(1)
    } else if !report.exploratory_failures.is_empty() {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
