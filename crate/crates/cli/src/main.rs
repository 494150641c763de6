mod args;
mod commands;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use z2harm::report::{Format, Report, Status};

use args::{Cli, Command, ExistsCommand, NeckCommand, SumCommand};

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Invariants(_) => "invariants",
        Command::Exists(ExistsCommand::Spinor(_)) => "exists spinor",
        Command::Exists(ExistsCommand::Spinc(_)) => "exists spinc",
        Command::Exists(ExistsCommand::Oneform { .. }) => "exists oneform",
        Command::Brieskorn { .. } => "brieskorn",
        Command::Sum(SumCommand::H1 { .. }) => "sum h1",
        Command::Sum(SumCommand::Zeros { .. }) => "sum zeros",
        Command::Sum(SumCommand::Genus { .. }) => "sum genus",
        Command::Sum(SumCommand::Dims { .. }) => "sum dims",
        Command::Neck(n) => match n {
            NeckCommand::Flow { .. } => "neck flow",
            NeckCommand::Ode { .. } => "neck ode",
            NeckCommand::Bvp { .. } => "neck bvp",
            NeckCommand::Profile { .. } => "neck profile",
            NeckCommand::Bessel { .. } => "neck bessel",
            NeckCommand::Pairing { .. } => "neck pairing",
            NeckCommand::Index { .. } => "neck index",
            NeckCommand::Rates { .. } => "neck rates",
            NeckCommand::S2 { .. } => "neck s2",
        },
        Command::Catalog(_) => "catalog verify",
    }
}

fn write_report(report: &Report, path: &Path) -> Result<(), String> {
    let format = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) { Format::Csv } else { Format::Json };
    let text = report.render(format).map_err(|e| e.to_string())?;
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.message());
            if let (commands::Failure::Numerical(msg), Some(path)) = (&f, &cli.report) {
                let mut r = Report::new(command_name(&cli.command));
                r.output("error", msg).escalate(Status::NumericalError);
                if let Err(e) = write_report(&r, path) {
                    eprintln!("error: {e}");
                }
            }
            return ExitCode::from(f.exit_code() as u8);
        }
    };
    match report.render(cli.format.into()) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Some(path) = &cli.report {
        if let Err(e) = write_report(&report, path) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(commands::exit_code(report.status) as u8)
}
