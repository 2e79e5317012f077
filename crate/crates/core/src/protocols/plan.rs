//! Register-level description of one Naimark circuit.
//!
//! Everything here acts on the spin registers (k_{N-2}, j, s) or on their
//! compressed form (s, a, b) plus the block-encode qubit, never on the
//! 2^{N+1}-dimensional system. That keeps two-level rotation counts cheap at
//! port counts where the dense circuit would not fit.

use std::collections::BTreeSet;

use serde::Serialize;

use super::Protocol;
use crate::circuit::{c_star, SubspaceSpec};
use crate::error::{Error, Result};
use crate::operator::{c, C64};
use crate::povm_analytic::compress_tag;
use crate::spinalg::{
    eigen_scalar, fail_eigenvalue, null_coeffs, rot_coeffs, sectors, HalfInt, Regime,
};

const HALF: HalfInt = HalfInt::HALF;

/// (k_{N-2}, j, s).
pub type Tail = (HalfInt, HalfInt, HalfInt);
/// (s, a, b, r) after compression; for Algorithm 2 the last slot is y.
pub type AttachKey = (HalfInt, u8, u8, u8);
/// (j, s, r) on the failure branch, where no compression is needed.
pub type FailKey = (HalfInt, HalfInt, u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PortClass {
    /// Branches i ≤ N, which see a SWAP-conjugated Π_N.
    Main,
    /// The pPBT branch N+1.
    Fail,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RotationCounts {
    pub superposition: usize,
    pub cswap: usize,
    pub rotation: usize,
    pub compression: usize,
    pub attachment: usize,
    pub total: usize,
}

#[derive(Debug, Clone)]
pub struct Plan {
    pub protocol: Protocol,
    pub n: usize,
    pub port_dim: usize,
    pub block_qubits: usize,
    /// Amplitudes the port register is prepared in from |0⟩.
    pub port_amps: Vec<f64>,
    /// Amplitude of the target branch before c* rescaling.
    pub target: f64,
    pub c_star: f64,
    pub rounds: usize,
    pub rotation: SubspaceSpec<Tail>,
    pub attach: SubspaceSpec<AttachKey>,
    pub attach_fail: Option<SubspaceSpec<FailKey>>,
    /// Every coefficient attached to r = 0 (or y = 0).
    pub attached: Vec<f64>,
}

/// All (k, j, s) spin triples reachable on N+1 qubits.
pub fn tail_triples(n: usize) -> Vec<Tail> {
    let mut out = Vec::new();
    for k in HalfInt::spins_for(n - 1) {
        for j in [k - HALF, k + HALF] {
            if j < HalfInt::ZERO {
                continue;
            }
            for s in [j - HALF, j + HALF] {
                if s >= HalfInt::ZERO {
                    out.push((k, j, s));
                }
            }
        }
    }
    out
}

/// Compressed (a, b) slot of a triple. The dPBT maximal-spin states share
/// the (+,+) slot of their sector.
pub fn slot(regime: Regime, n: usize, (k, j, s): Tail) -> (u8, u8) {
    if regime == Regime::Dpbt && s == HalfInt::max_spin(n + 1) {
        return (1, 1);
    }
    compress_tag(k, j, s)
        .bits()
        .expect("bare tags always carry bits")
}

fn slot_eigenvalue(regime: Regime, n: usize, s: HalfInt, ab: (u8, u8)) -> Result<f64> {
    if ab != (1, 1) {
        return Ok(0.0);
    }
    eigen_scalar(regime, n, s)
}

/// Columns of the r-rotation attaching `a` to |key,0⟩, with a flip when
/// a = 0.
fn attach_columns<K: Clone>(key0: K, key1: K, a: f64) -> Vec<(K, Vec<(K, C64)>)> {
    let b = (1.0 - a * a).max(0.0).sqrt();
    vec![
        (
            key0.clone(),
            vec![(key0.clone(), c(a)), (key1.clone(), c(b))],
        ),
        (key1.clone(), vec![(key0, c(b)), (key1, c(-a))]),
    ]
}

fn checked(a: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&a) {
        return Err(Error::Domain(format!(
            "attached coefficient {a} outside [0, 1]"
        )));
    }
    Ok(a.clamp(0.0, 1.0))
}

impl Plan {
    pub fn class(&self, port: usize) -> PortClass {
        match self.protocol {
            Protocol::PpbtMes | Protocol::PpbtOpt if port == self.n => PortClass::Fail,
            _ => PortClass::Main,
        }
    }

    /// Two-level rotations in one use of U, Schur transform excluded.
    pub fn counts(&self) -> RotationCounts {
        let n = self.n;
        let superposition = self
            .port_amps
            .iter()
            .filter(|a| **a != 0.0)
            .count()
            .saturating_sub(1);
        let swapping = (0..self.port_dim)
            .filter(|&p| self.class(p) == PortClass::Main && p % n != n - 1)
            .count();
        let cswap = 2 * swapping;
        let rotation = 2 * self.rotation.two_level_count();
        let compression = 2 * tail_triples(n).len();
        let attachment = self.attach.two_level_count()
            + self.attach_fail.as_ref().map_or(0, |f| f.two_level_count());
        RotationCounts {
            superposition,
            cswap,
            rotation,
            compression,
            attachment,
            total: superposition + cswap + rotation + compression + attachment,
        }
    }
}

/// Builds the register-level plan of `protocol` on N ports.
pub fn plan(protocol: Protocol, n: usize) -> Result<Plan> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let regime = protocol.regime();
    let nf = n as f64;
    let (port_dim, port_amps, target) = match protocol {
        Protocol::DpbtMes | Protocol::DpbtOpt => (n, vec![1.0 / nf.sqrt(); n], 1.0 / nf.sqrt()),
        Protocol::PpbtMes => {
            let mut amps = vec![1.0 / (2.0 * nf).sqrt(); n];
            amps.push(std::f64::consts::FRAC_1_SQRT_2);
            (n + 1, amps, 1.0 / (2.0 * 2f64.sqrt()))
        }
        Protocol::PpbtMesNoAa => {
            let mut amps = vec![1.0 / nf.sqrt(); n];
            amps.extend(std::iter::repeat_n(0.0, n));
            (2 * n, amps, 0.5)
        }
        Protocol::PpbtOpt => (
            n + 1,
            vec![1.0 / (nf + 1.0).sqrt(); n + 1],
            1.0 / (nf + 1.0).sqrt(),
        ),
    };
    let (cs, rounds) = if protocol == Protocol::PpbtMesNoAa {
        (1.0, 0)
    } else {
        c_star(target)?
    };
    // Per-branch weights, chosen so every target branch carries `target`.
    let (w_main, w_fail) = match protocol {
        Protocol::DpbtMes | Protocol::DpbtOpt | Protocol::PpbtOpt => (1.0, 1.0),
        Protocol::PpbtMes => ((nf / 4.0).sqrt(), 0.5),
        Protocol::PpbtMesNoAa => ((nf / 4.0).sqrt(), 0.0),
    };

    let mut rot_cols = Vec::new();
    for s in sectors(n) {
        if s == HalfInt::ZERO {
            continue;
        }
        let minus = (s, s - HALF, s);
        let plus = (s, s + HALF, s);
        let (p, q) = rot_coeffs(regime, n, s)?;
        let (z1, z2) = null_coeffs(regime, n, s)?;
        // Sends p|minus⟩ + q|plus⟩ to |plus⟩ and the null partner to |minus⟩.
        rot_cols.push((minus, vec![(plus, c(p)), (minus, c(z1))]));
        rot_cols.push((plus, vec![(plus, c(q)), (minus, c(z2))]));
    }
    let rotation = SubspaceSpec::new(rot_cols)?;

    let slots: BTreeSet<(HalfInt, u8, u8)> = tail_triples(n)
        .into_iter()
        .map(|t| {
            let (a, b) = slot(regime, n, t);
            (t.2, a, b)
        })
        .collect();
    let mut attached = Vec::new();
    let mut cols = Vec::new();
    for (s, a, b) in slots {
        let ev = slot_eigenvalue(regime, n, s, (a, b))?;
        let coef = checked(w_main * ev.sqrt() / cs)?;
        attached.push(coef);
        cols.extend(attach_columns((s, a, b, 0u8), (s, a, b, 1u8), coef));
    }
    let attach = SubspaceSpec::new(cols)?;

    let attach_fail = if matches!(protocol, Protocol::PpbtMes | Protocol::PpbtOpt) {
        let pairs: BTreeSet<(HalfInt, HalfInt)> = tail_triples(n)
            .into_iter()
            .map(|(_, j, s)| (j, s))
            .collect();
        let mut cols = Vec::new();
        for (j, s) in pairs {
            let ev = fail_eigenvalue(regime, n, j, s)?;
            let coef = checked(w_fail * ev.max(0.0).sqrt() / cs)?;
            attached.push(coef);
            cols.extend(attach_columns((j, s, 0u8), (j, s, 1u8), coef));
        }
        Some(SubspaceSpec::new(cols)?)
    } else {
        None
    };

    Ok(Plan {
        protocol,
        n,
        port_dim,
        block_qubits: usize::from(protocol != Protocol::PpbtMesNoAa),
        port_amps,
        target,
        c_star: cs,
        rounds,
        rotation,
        attach,
        attach_fail,
        attached,
    })
}
