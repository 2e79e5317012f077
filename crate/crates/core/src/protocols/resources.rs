//! Symbolic Clifford+T estimates. All big-O constants are set to 1 and
//! logarithms are base 2, so the absolute numbers are order-of-magnitude
//! only. p and n are taken from the actual circuit plans.

use serde::{Deserialize, Serialize};

use super::plan::{plan, RotationCounts};
use super::Protocol;
use crate::error::{Error, Result};
use crate::spinalg::HalfInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchurVariant {
    /// Fast, O(N log N) ancillas.
    Bch,
    /// Slower, O(log N) ancillas.
    SpinCoupling,
}

impl SchurVariant {
    pub const ALL: [SchurVariant; 2] = [SchurVariant::Bch, SchurVariant::SpinCoupling];

    pub fn name(self) -> &'static str {
        match self {
            SchurVariant::Bch => "bch",
            SchurVariant::SpinCoupling => "spin-coupling",
        }
    }
}

impl std::str::FromStr for SchurVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bch" => Ok(SchurVariant::Bch),
            "spin-coupling" | "spin" => Ok(SchurVariant::SpinCoupling),
            other => Err(Error::Domain(format!("unknown Schur variant '{other}'"))),
        }
    }
}

impl std::fmt::Display for SchurVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Complexity classes as labeled in the published tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceClasses {
    pub p: &'static str,
    pub rounds: &'static str,
    pub ancilla: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResourceEstimate {
    pub protocol: Protocol,
    pub n: usize,
    pub epsilon: f64,
    pub schur_variant: SchurVariant,
    /// Two-level rotations per use of U, Schur transform excluded.
    pub p: usize,
    pub counts: RotationCounts,
    pub rounds: usize,
    pub c_star: f64,
    pub t_sch: f64,
    pub total_cost: f64,
    pub ancilla: usize,
    pub classes: ResourceClasses,
}

fn bits(values: usize) -> usize {
    if values <= 1 {
        0
    } else {
        (usize::BITS - (values - 1).leading_zeros()) as usize
    }
}

fn spin_values(q: usize) -> usize {
    HalfInt::spins_for(q).len()
}

/// Ancilla qubits beyond the N+1 system qubits.
pub fn ancilla_count(
    variant: SchurVariant,
    n: usize,
    port_dim: usize,
    block_qubits: usize,
) -> usize {
    let q = n + 1;
    let schur = match variant {
        // One register per prefix spin k_1..k_{N-1}, j, s plus m.
        SchurVariant::Bch => {
            let regs: usize = (2..=q).map(|t| bits(spin_values(t))).sum::<usize>() + bits(q + 1);
            regs.saturating_sub(q)
        }
        // Only the last three spins and m are ever held at once.
        SchurVariant::SpinCoupling => {
            let regs = bits(spin_values(q.saturating_sub(2).max(1)))
                + bits(spin_values(q - 1))
                + bits(spin_values(q))
                + bits(q + 1);
            regs.saturating_sub(2)
        }
    };
    schur + bits(port_dim) + block_qubits
}

fn log2_floor1(x: f64) -> f64 {
    x.log2().max(1.0)
}

pub fn resource_estimate(
    protocol: Protocol,
    n: usize,
    epsilon: f64,
    variant: SchurVariant,
) -> Result<ResourceEstimate> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon {epsilon} outside (0, 1)")));
    }
    let pl = plan(protocol, n)?;
    let counts = pl.counts();
    let p = counts.total;
    let nf = n as f64;
    let logn = log2_floor1(nf);
    let t_sch = match variant {
        SchurVariant::Bch => nf * logn * (1.0 / epsilon).log2(),
        SchurVariant::SpinCoupling => nf.powi(3) * logn * (nf / epsilon).log2().max(1.0),
    };
    let uses = pl.rounds.max(1) as f64;
    let total_cost = (t_sch + p as f64 * logn * (p as f64 * uses / epsilon).log2()) * uses;
    let classes = ResourceClasses {
        p: "O(N)",
        rounds: match protocol {
            Protocol::PpbtMes | Protocol::PpbtMesNoAa => "Theta(1)",
            _ => "O(sqrt N)",
        },
        ancilla: match variant {
            SchurVariant::Bch => "O(N log N)",
            SchurVariant::SpinCoupling => "O(log N)",
        },
    };
    Ok(ResourceEstimate {
        protocol,
        n,
        epsilon,
        schur_variant: variant,
        p,
        counts,
        rounds: pl.rounds,
        c_star: pl.c_star,
        t_sch,
        total_cost,
        ancilla: ancilla_count(variant, n, pl.port_dim, pl.block_qubits),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_widths() {
        assert_eq!(
            (bits(1), bits(2), bits(3), bits(4), bits(5)),
            (0, 1, 2, 2, 3)
        );
    }

    #[test]
    fn mes_rounds_constant() {
        for n in 1..=40 {
            let e = resource_estimate(Protocol::PpbtMes, n, 1e-3, SchurVariant::Bch).unwrap();
            assert_eq!(e.rounds, 5);
            assert_eq!(e.classes.rounds, "Theta(1)");
        }
    }

    #[test]
    fn spin_coupling_uses_fewer_ancillas() {
        for n in [8, 16, 32, 64] {
            let a = resource_estimate(Protocol::DpbtMes, n, 1e-3, SchurVariant::Bch).unwrap();
            let b =
                resource_estimate(Protocol::DpbtMes, n, 1e-3, SchurVariant::SpinCoupling).unwrap();
            assert!(b.ancilla < a.ancilla, "N={n}");
            assert!(b.t_sch > a.t_sch);
        }
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(resource_estimate(Protocol::DpbtMes, 3, 0.0, SchurVariant::Bch).is_err());
    }
}
