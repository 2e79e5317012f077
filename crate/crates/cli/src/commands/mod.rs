mod povm_check;
mod schur;
mod table;
mod teleport;

use crate::args::{Cli, Command};
use crate::output::{sink, CliResult};

pub fn run(cli: &Cli) -> CliResult<()> {
    let mut out = sink(cli.output.as_deref())?;
    let res = match &cli.command {
        Command::Schur { n, unitary } => schur::run(*n, *unitary, cli.format, &mut *out),
        Command::PovmCheck {
            regime,
            ports,
            tolerance,
            validity_tolerance,
            inject_fault,
        } => povm_check::run(
            &regime.0,
            *ports,
            povm_check::Tolerances {
                equivalence: *tolerance,
                validity: *validity_tolerance,
            },
            *inject_fault,
            cli.format,
            &mut *out,
        ),
        Command::Teleport {
            regime,
            ports,
            trials,
        } => teleport::run(*regime, *ports, *trials, cli.seed, cli.format, &mut *out),
        Command::Table {
            metric,
            ports,
            epsilon,
            schur_variant,
        } => table::run(
            *metric,
            *ports,
            *epsilon,
            &schur_variant.0,
            cli.format,
            &mut *out,
        ),
    };
    // Reports are flushed even when a check fails.
    out.flush()?;
    res
}
