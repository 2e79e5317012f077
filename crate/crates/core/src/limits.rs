//! Desk-scale size caps.
//!
//! Every dense construction in the crate is exponential in the port count.
//! The caps below keep accidental calls from eating the machine. Setting
//! `PORTSIM_MAX_PORTS` raises the port caps (not the label-enumeration cap).

use crate::error::{Error, Result};

pub const ENV_MAX_PORTS: &str = "PORTSIM_MAX_PORTS";

/// Largest N for the dense POVM oracle.
pub const ORACLE_MAX_PORTS: usize = 7;
/// Largest N for protocol circuits and figure-of-merit evaluation.
pub const PROTOCOL_MAX_PORTS: usize = 6;
/// Largest qubit count for a dense coupling unitary.
pub const COUPLING_MAX_QUBITS: usize = 12;
/// Largest qubit count for label enumeration.
pub const LABEL_MAX_QUBITS: usize = 20;

fn env_override() -> Option<usize> {
    std::env::var(ENV_MAX_PORTS).ok()?.trim().parse().ok()
}

/// Effective cap: the default, or the environment override if larger.
pub fn effective(default: usize) -> usize {
    env_override().map_or(default, |v| v.max(default))
}

pub(crate) fn check_ports(what: &'static str, n: usize, default_cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain(format!("{what} must be at least 1")));
    }
    let cap = effective(default_cap);
    if n > cap {
        return Err(Error::SizeCap {
            what,
            value: n,
            cap,
        });
    }
    Ok(())
}

pub(crate) fn check_qubits(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain(format!("{what} must be at least 1")));
    }
    if n > cap {
        return Err(Error::SizeCap {
            what,
            value: n,
            cap,
        });
    }
    Ok(())
}
