//! `srint`: verification, obstruction runs, reduction and reduced-flow
//! numerics from the command line.
//!
//! Exit codes: 0 success or nonexistence verdict, 1 inconclusive, 2 failed
//! verification, 3 unknown system, 4 bad input or precondition, 5 numeric
//! failure.

mod args;
mod commands;
mod figures;
mod parse;
mod report;
mod svg;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use report::Exit;

fn run(argv: Vec<OsString>) -> Exit {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Exit::Precondition
            } else {
                Exit::Ok
            };
        }
    };
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let result = match cli.command {
        Command::Verify(a) => commands::verify(&a, &echo),
        Command::Obstruct(a) => commands::obstruct(&a),
        Command::Reduce(a) => commands::reduce(&a, &echo),
        Command::Integrate(a) => commands::integrate(&a, &echo),
        Command::Section(a) => commands::section(&a, &echo),
        Command::Figure(a) => figures::figure(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn main() {
    std::process::exit(run(std::env::args_os().collect()) as i32);
}
