//! Statevector primitives: controlled SWAP over ports, subspace unitaries,
//! register measurement, and amplitude amplification.

mod oaa;
mod spec;

pub use oaa::{c_pi_not, c_star, oaa, reflect_via_ancilla, Oaa, Projector, UnitaryAction};
pub use spec::{SparseOp, SubspaceSpec};

use crate::error::{Error, Result};
use crate::operator::{c, swap_bits, C64, ZERO};
use crate::schur::{Layout, StateVector};

/// Index of the port whose qubit is swapped with A_N on port-register value
/// `p` (0-based), or None for the idle failure branch.
pub fn swap_partner(p: usize, n: usize, port_dim: usize) -> Option<usize> {
    if port_dim == 2 * n {
        Some(p % n)
    } else if p < n {
        Some(p)
    } else {
        None
    }
}

fn check_cswap_layout(layout: &Layout, n: usize, include_idle: bool) -> Result<()> {
    if layout.system_qubits != n + 1 {
        return Err(Error::RegisterMismatch(format!(
            "C-SWAP over {n} ports needs {} system qubits, got {}",
            n + 1,
            layout.system_qubits
        )));
    }
    let ok = match layout.port_dim {
        d if d == n + 1 && n + 1 != 2 * n => include_idle,
        d if d == n => !include_idle,
        d if d == 2 * n => true,
        _ => false,
    };
    if !ok {
        return Err(Error::RegisterMismatch(format!(
            "port register of dimension {} does not fit N = {n} (idle branch: {include_idle})",
            layout.port_dim
        )));
    }
    Ok(())
}

/// The C-SWAP as a permutation of basis indices.
pub fn cswap_op(layout: &Layout, n: usize) -> SparseOp {
    let d = layout.inner_dim();
    let spec_layout = Layout {
        spectator_qubits: 0,
        ..*layout
    };
    let mut m: Vec<Option<Vec<(usize, C64)>>> = vec![None; d];
    for (idx, slot) in m.iter_mut().enumerate() {
        let (_, sys, port, r) = spec_layout.split(idx);
        let Some(a) = swap_partner(port, n, layout.port_dim) else {
            continue;
        };
        let sys2 = swap_bits(sys, a, n - 1, n + 1);
        if sys2 != sys {
            *slot = Some(vec![(spec_layout.index(0, sys2, port, r), c(1.0))]);
        }
    }
    SparseOp::from_columns(m)
}

/// Σᵢ SWAP_{A_i A_N} ⊗ |i⟩⟨i| (plus identity on the idle branch N+1 when
/// `include_idle`).
pub fn apply_cswap(state: &StateVector, n: usize, include_idle: bool) -> Result<StateVector> {
    check_cswap_layout(&state.layout, n, include_idle)?;
    let op = cswap_op(&state.layout, n);
    Ok(StateVector {
        amplitudes: op.apply_blocks(&state.amplitudes),
        layout: state.layout,
        normalized: state.normalized,
    })
}

/// Applies a spec keyed by full basis index.
pub fn apply_subspace_unitary(
    state: &StateVector,
    spec: &SubspaceSpec<usize>,
) -> Result<StateVector> {
    let d = state.amplitudes.len();
    if let Some((k, _)) = spec.columns().iter().find(|(k, _)| *k >= d) {
        return Err(Error::RegisterMismatch(format!(
            "spec key {k} outside dimension {d}"
        )));
    }
    let op = spec.lift(d, |i| Some((i, ())), |k, _| *k);
    Ok(StateVector {
        amplitudes: op.apply(&state.amplitudes),
        layout: state.layout,
        normalized: state.normalized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    Spectator,
    System,
    Port,
    Block,
}

#[derive(Debug, Clone)]
pub struct Measurement {
    pub probabilities: Vec<f64>,
    /// Renormalized post-measurement states; None for zero-probability
    /// outcomes.
    pub post_states: Vec<Option<StateVector>>,
}

fn register_value(layout: &Layout, reg: Register, idx: usize) -> usize {
    let (sp, sys, port, r) = layout.split(idx);
    match reg {
        Register::Spectator => sp,
        Register::System => sys,
        Register::Port => port,
        Register::Block => r,
    }
}

fn register_dim(layout: &Layout, reg: Register) -> usize {
    match reg {
        Register::Spectator => 1 << layout.spectator_qubits,
        Register::System => 1 << layout.system_qubits,
        Register::Port => layout.port_dim,
        Register::Block => 1 << layout.block_qubits,
    }
}

/// Born-rule measurement of one register.
pub fn measure_register(state: &StateVector, reg: Register) -> Measurement {
    let k = register_dim(&state.layout, reg);
    let mut probs = vec![0.0; k];
    for (i, a) in state.amplitudes.iter().enumerate() {
        probs[register_value(&state.layout, reg, i)] += a.norm_sqr();
    }
    let total: f64 = probs.iter().sum();
    let post = (0..k)
        .map(|v| {
            if probs[v] <= 0.0 {
                return None;
            }
            let scale = 1.0 / probs[v].sqrt();
            let amps = state
                .amplitudes
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if register_value(&state.layout, reg, i) == v {
                        a * scale
                    } else {
                        ZERO
                    }
                })
                .collect();
            Some(StateVector {
                amplitudes: amps,
                layout: state.layout,
                normalized: true,
            })
        })
        .collect();
    if total > 0.0 {
        probs.iter_mut().for_each(|p| *p /= total);
    }
    Measurement {
        probabilities: probs,
        post_states: post,
    }
}

/// A real unitary on a `d`-dimensional register mapping |0⟩ to `amps`
/// (a Householder reflection), as a spec over register values.
pub fn superposition_spec(amps: &[f64]) -> Result<SubspaceSpec<usize>> {
    let nrm: f64 = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (nrm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidSpec(format!("amplitudes have norm {nrm}")));
    }
    let support: Vec<usize> = (0..amps.len())
        .filter(|&i| i == 0 || amps[i] != 0.0)
        .collect();
    if support.len() == 1 && amps[0] == 1.0 {
        return Ok(SubspaceSpec::empty());
    }
    // H = I - 2 w wᵀ / wᵀw with w = e₀ - a, so H e₀ = a.
    let w: Vec<f64> = (0..amps.len())
        .map(|i| if i == 0 { 1.0 - amps[0] } else { -amps[i] })
        .collect();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let cols = support
        .iter()
        .map(|&col| {
            let out = support
                .iter()
                .map(|&row| {
                    let id = if row == col { 1.0 } else { 0.0 };
                    (row, c(id - 2.0 * w[row] * w[col] / ww))
                })
                .collect();
            (col, out)
        })
        .collect();
    SubspaceSpec::new(cols)
}
