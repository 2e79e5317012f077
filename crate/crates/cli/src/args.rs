use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use portsim::protocols::{Protocol, SchurVariant};
use portsim::Regime;

#[derive(Debug, Parser)]
#[command(
    name = "portsim",
    version,
    about = "Exact simulation of qubit port-based teleportation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Seed for the ChaCha8 generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schur basis labels (and amplitudes) on n qubits.
    Schur {
        #[arg(long)]
        n: usize,
        /// Also emit the dense coupling unitary (json and human only).
        #[arg(long)]
        unitary: bool,
    },
    /// POVM validity and analytic-vs-oracle equivalence.
    PovmCheck {
        /// dpbt, ppbt-mes, ppbt-opt or all.
        #[arg(long, default_value = "all")]
        regime: RegimeArg,
        #[arg(long, default_value = "1..4")]
        ports: PortRange,
        /// Frobenius tolerance for analytic vs oracle.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Tolerance for completeness, positivity and SWAP covariance.
        #[arg(long, default_value_t = 1e-10)]
        validity_tolerance: f64,
        /// Flip the sign of one analytic eigenvalue; the run must then fail.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Seeded teleportation trials through the Naimark circuits.
    Teleport {
        /// dpbt-mes (dpbt), dpbt-opt, ppbt-mes, ppbt-mes-no-aa or ppbt-opt.
        #[arg(long)]
        regime: Protocol,
        #[arg(long)]
        ports: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Exact fidelity or success tables, or resource estimates.
    Table {
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, default_value = "1..6")]
        ports: PortRange,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        /// bch, spin-coupling or all.
        #[arg(long, default_value = "all")]
        schur_variant: VariantArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Fidelity,
    Success,
    Resources,
}

/// Inclusive port range, written `a..b`, `a..=b` or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PortRange {
    pub lo: usize,
    pub hi: usize,
}

impl PortRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for PortRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad port count '{t}'"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("empty or zero-based range '{s}'"));
        }
        Ok(PortRange { lo, hi })
    }
}

#[derive(Debug, Clone)]
pub struct RegimeArg(pub Vec<Regime>);

impl FromStr for RegimeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(RegimeArg(Regime::ALL.to_vec()));
        }
        s.parse()
            .map(|r| RegimeArg(vec![r]))
            .map_err(|e: portsim::Error| e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct VariantArg(pub Vec<SchurVariant>);

impl FromStr for VariantArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(VariantArg(SchurVariant::ALL.to_vec()));
        }
        s.parse()
            .map(|v| VariantArg(vec![v]))
            .map_err(|e: portsim::Error| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn port_ranges() {
        assert_eq!(
            "1..4".parse::<PortRange>().unwrap(),
            PortRange { lo: 1, hi: 4 }
        );
        assert_eq!(
            "2..=3".parse::<PortRange>().unwrap(),
            PortRange { lo: 2, hi: 3 }
        );
        assert_eq!(
            "5".parse::<PortRange>().unwrap(),
            PortRange { lo: 5, hi: 5 }
        );
        assert!("0..3".parse::<PortRange>().is_err());
        assert!("4..2".parse::<PortRange>().is_err());
        assert!("a..2".parse::<PortRange>().is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
