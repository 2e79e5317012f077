//! Oracle helpers shared by the integration tests. Everything here goes
//! through the dense povm_oracle constructions, never the analytic tables.
#![allow(dead_code)]

use portsim::operator::{Operator, C64, ZERO};
use portsim::povm_oracle::{povm, psd_sqrt};
use portsim::protocols::{NaimarkCircuit, Protocol};

/// √Πᵢ for every element of the protocol's POVM.
pub fn oracle_roots(protocol: Protocol, n: usize) -> Vec<Operator> {
    povm(protocol.regime(), n)
        .unwrap()
        .elements
        .iter()
        .map(|e| psd_sqrt(e).unwrap())
        .collect()
}

/// Places a system state at port 0, r = 0.
pub fn embed_input(circ: &NaimarkCircuit, psi: &[C64]) -> Vec<C64> {
    let l = circ.layout;
    let mut v = vec![ZERO; l.dim()];
    for (sys, &a) in psi.iter().enumerate() {
        v[l.index(0, sys, 0, 0)] = a;
    }
    v
}

/// Σᵢ √Πᵢ|ψ⟩|i⟩|0⟩_r; for Algorithm 2 the target is half that, on y = 0.
pub fn naimark_target(circ: &NaimarkCircuit, roots: &[Operator], psi: &[C64]) -> Vec<C64> {
    let l = circ.layout;
    let n = circ.plan.n;
    let half = circ.plan.protocol == Protocol::PpbtMesNoAa;
    let mut v = vec![ZERO; l.dim()];
    for (i, root) in roots.iter().enumerate() {
        if half && i >= n {
            continue;
        }
        let w = root.apply(psi);
        for (sys, a) in w.into_iter().enumerate() {
            v[l.index(0, sys, i, 0)] = if half { a * 0.5 } else { a };
        }
    }
    v
}

/// ‖output − target‖, restricted to y = 0 for Algorithm 2.
pub fn naimark_residual(circ: &NaimarkCircuit, out: &[C64], target: &[C64]) -> f64 {
    let l = circ.layout;
    let n = circ.plan.n;
    let half = circ.plan.protocol == Protocol::PpbtMesNoAa;
    out.iter()
        .zip(target)
        .enumerate()
        .filter(|(idx, _)| !half || l.split(*idx).2 < n)
        .map(|(_, (a, b))| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// The four circuits: dPBT serves both resource states.
pub const CIRCUITS: [Protocol; 4] = [
    Protocol::DpbtMes,
    Protocol::PpbtMes,
    Protocol::PpbtMesNoAa,
    Protocol::PpbtOpt,
];
