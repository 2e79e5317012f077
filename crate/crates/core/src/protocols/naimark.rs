//! Dense lifting of a [`Plan`] to the system ⊗ port ⊗ r space.
//!
//! U = C-SWAP · U_c · R† · A · R · U_c† · C-SWAP · S, where S prepares the
//! port superposition, U_c is the coupling unitary, R straightens each
//! two-dimensional Π_N block onto one label, and A attaches eigenvalue
//! square roots to the block-encode qubit. Compression of (k, j) into the
//! (a, b) qubits is a relabeling and is folded into A's key map.

use super::plan::{plan, slot, Plan, PortClass};
use super::Protocol;
use crate::circuit::{cswap_op, oaa, superposition_spec, Projector, SparseOp, UnitaryAction};
use crate::error::Result;
use crate::limits::{self, PROTOCOL_MAX_PORTS};
use crate::operator::{Operator, C64, ZERO};
use crate::povm_analytic::tail;
use crate::schur::{coupling_unitary, Layout, SchurBasis};

pub struct NaimarkCircuit {
    pub plan: Plan,
    /// Full layout, spectators included.
    pub layout: Layout,
    ops: Vec<SparseOp>,
    adjoints: Vec<SparseOp>,
}

impl std::fmt::Debug for NaimarkCircuit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NaimarkCircuit")
            .field("protocol", &self.plan.protocol)
            .field("n", &self.plan.n)
            .field("layout", &self.layout)
            .finish()
    }
}

/// Lifts a dense system operator to the inner space.
fn lift_system(m: &Operator, il: &Layout) -> SparseOp {
    let d = il.inner_dim();
    let cols = (0..d)
        .map(|idx| {
            let (_, sys, port, r) = il.split(idx);
            let entries = (0..m.dim())
                .filter_map(|row| {
                    let a = m.get(row, sys);
                    (a != ZERO).then(|| (il.index(0, row, port, r), a))
                })
                .collect();
            Some(entries)
        })
        .collect();
    SparseOp::from_columns(cols)
}

pub fn naimark(protocol: Protocol, n: usize) -> Result<NaimarkCircuit> {
    naimark_with_spectators(protocol, n, 0)
}

/// The pre-amplification circuit U, with `spectators` untouched qubits
/// above the system (Bob's ports during teleportation).
pub fn naimark_with_spectators(
    protocol: Protocol,
    n: usize,
    spectators: usize,
) -> Result<NaimarkCircuit> {
    limits::check_ports("N", n, PROTOCOL_MAX_PORTS)?;
    let plan = plan(protocol, n)?;
    let regime = protocol.regime();
    let il = Layout {
        spectator_qubits: 0,
        system_qubits: n + 1,
        port_dim: plan.port_dim,
        block_qubits: plan.block_qubits,
    };
    let layout = Layout {
        spectator_qubits: spectators,
        ..il
    };
    let d = il.inner_dim();
    let basis = SchurBasis::new(n + 1)?;
    let uc = coupling_unitary(n + 1)?;
    let no_aa = protocol == Protocol::PpbtMesNoAa;

    let sup = superposition_spec(&plan.port_amps)?.lift(
        d,
        |i| {
            let (_, sys, port, r) = il.split(i);
            Some((port, (sys, r)))
        },
        |p, &(sys, r)| il.index(0, sys, *p, r),
    );
    let cswap = cswap_op(&il, n);
    let to_schur = lift_system(&uc.adjoint(), &il);
    let from_schur = lift_system(&uc, &il);

    let rot = plan.rotation.lift(
        d,
        |i| {
            let (_, sys, port, r) = il.split(i);
            (plan.class(port) == PortClass::Main).then(|| (tail(basis.label(sys)), (sys, port, r)))
        },
        |&(_, j, s), &(sys, port, r)| {
            let old = basis.label(sys);
            let new = old
                .with_tail(&[j, s], old.m())
                .expect("rotation stays inside the label set");
            il.index(0, basis.index(&new), port, r)
        },
    );

    let attach = plan.attach.lift(
        d,
        |i| {
            let (_, sys, port, r) = il.split(i);
            if plan.class(port) != PortClass::Main {
                return None;
            }
            let t = tail(basis.label(sys));
            let (a, b) = slot(regime, n, t);
            let rr = if no_aa { port / n } else { r };
            Some(((t.2, a, b, rr as u8), (sys, port, r)))
        },
        |&(_, _, _, rr), &(sys, port, r)| {
            if no_aa {
                il.index(0, sys, port % n + n * rr as usize, r)
            } else {
                il.index(0, sys, port, rr as usize)
            }
        },
    );

    let mut ops = vec![sup, cswap.clone(), to_schur, rot.clone(), attach];
    if let Some(fail) = &plan.attach_fail {
        ops.push(fail.lift(
            d,
            |i| {
                let (_, sys, port, r) = il.split(i);
                if plan.class(port) != PortClass::Fail {
                    return None;
                }
                let (_, j, s) = tail(basis.label(sys));
                Some(((j, s, r as u8), (sys, port)))
            },
            |&(_, _, rr), &(sys, port)| il.index(0, sys, port, rr as usize),
        ));
    }
    ops.extend([rot.adjoint(), from_schur, cswap]);
    let adjoints = ops.iter().rev().map(SparseOp::adjoint).collect();
    Ok(NaimarkCircuit {
        plan,
        layout,
        ops,
        adjoints,
    })
}

impl NaimarkCircuit {
    pub fn rounds(&self) -> usize {
        self.plan.rounds
    }

    /// Π = |port 0⟩⟨port 0| ⊗ |0⟩⟨0|_r, the input subspace.
    pub fn pi(&self) -> Projector {
        let l = self.layout;
        Projector::new(move |i| {
            let (_, _, port, r) = l.split(i);
            port == 0 && r == 0
        })
    }

    /// Π̃ = |0⟩⟨0|_r.
    pub fn pi_tilde(&self) -> Projector {
        let l = self.layout;
        Projector::new(move |i| l.split(i).3 == 0)
    }

    /// The full algorithm: U amplified with the plan's round count, or U
    /// alone when no amplification is used.
    pub fn run(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.plan.rounds == 0 {
            return Ok(self.apply(v));
        }
        let amp = oaa(self, self.pi(), self.pi_tilde(), self.plan.rounds)?;
        Ok(amp.apply(v))
    }

    /// Dense matrix of U on the inner space (testing only).
    pub fn to_dense(&self) -> nalgebra::DMatrix<C64> {
        let d = self.ops[0].dim();
        let mut m = nalgebra::DMatrix::<C64>::identity(d, d);
        for op in &self.ops {
            m = op.to_dense() * m;
        }
        m
    }
}

impl UnitaryAction for NaimarkCircuit {
    fn dim(&self) -> usize {
        self.layout.dim()
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.ops
            .iter()
            .fold(v.to_vec(), |w, op| op.apply_blocks(&w))
    }

    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        self.adjoints
            .iter()
            .fold(v.to_vec(), |w, op| op.apply_blocks(&w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{c, ONE};

    #[test]
    fn pre_amplification_unitary() {
        for proto in Protocol::ALL {
            let u = naimark(proto, 3).unwrap().to_dense();
            let dev = (u.adjoint() * &u - nalgebra::DMatrix::<C64>::identity(u.nrows(), u.ncols()))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10, "{proto}: {dev:e}");
        }
    }

    #[test]
    fn single_port_dpbt_is_trivial() {
        let circ = naimark(Protocol::DpbtMes, 1).unwrap();
        assert_eq!(circ.rounds(), 1);
        let l = circ.layout;
        let mut v = vec![ZERO; l.dim()];
        v[l.index(0, 1, 0, 0)] = c(0.6);
        v[l.index(0, 2, 0, 0)] = C64::new(0.0, 0.8);
        let out = circ.run(&v).unwrap();
        for (a, b) in out.iter().zip(&v) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pre_amplification_amplitude() {
        // ‖Π̃ U |ψ⟩|0⟩|0⟩‖ = target / c* for any system input.
        for proto in [Protocol::DpbtMes, Protocol::PpbtMes, Protocol::PpbtOpt] {
            for n in 1..=3 {
                let circ = naimark(proto, n).unwrap();
                let l = circ.layout;
                let mut v = vec![ZERO; l.dim()];
                v[l.index(0, 0, 0, 0)] = ONE;
                let out = circ.apply(&v);
                let kept: f64 = circ
                    .pi_tilde()
                    .apply(&out)
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum();
                let want = circ.plan.target / circ.plan.c_star;
                assert!((kept.sqrt() - want).abs() < 1e-12, "{proto} N={n}");
            }
        }
    }
}
