//! End-to-end teleportation through the simulated Naimark circuits.
//!
//! Bob's qubits B_1..B_N ride along as spectators above the system register
//! A_1..A_N, C, so the state never leaves the pure-state picture.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::figures::resource_operator;
use super::naimark::{naimark_with_spectators, NaimarkCircuit};
use super::Protocol;
use crate::circuit::{measure_register, Register};
use crate::error::Result;
use crate::operator::{C64, ZERO};
use crate::schur::StateVector;

/// Haar-random pure state of dimension `dim` (normalized complex Gaussian).
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let nrm = crate::operator::norm(&v);
    v.iter_mut().for_each(|a| *a /= nrm);
    v
}

pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let v = haar_state(rng, 2);
    [v[0], v[1]]
}

/// (X_A ⊗ I_B) applied to N singlets |ψ⁻⟩_{A_i B_i}, normalized. Indexed
/// as b · 2^N + a with A_1 and B_1 most significant in their registers.
pub fn resource_state(protocol: Protocol, n: usize) -> Result<Vec<C64>> {
    let x = resource_operator(protocol, n)?;
    let da = 1usize << n;
    let amp = std::f64::consts::FRAC_1_SQRT_2.powi(n as i32);
    let mut out = vec![ZERO; da * da];
    for b in 0..da {
        // The singlet pairs a with the complement of b, sign (-1)^{#ones in a}.
        let a0 = !b & (da - 1);
        let sign = if a0.count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        for a in 0..da {
            out[b * da + a] = x.get(a, a0) * (sign * amp);
        }
    }
    let nrm = crate::operator::norm(&out);
    out.iter_mut().for_each(|z| *z /= nrm);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolRun {
    pub protocol: Protocol,
    pub n: usize,
    pub rounds: usize,
    pub c_star: f64,
    /// P(outcome) for outcomes 1..=N, then failure for pPBT.
    pub outcome_probabilities: Vec<f64>,
    /// Sampled outcome, counted from 1; N+1 is failure.
    pub outcome: usize,
    pub success: bool,
    /// Bob's selected port, row-major 2x2, on success.
    pub bob_state: Option<[[C64; 2]; 2]>,
    pub fidelity: Option<f64>,
    /// Weight left outside the block-encoded subspace.
    pub leakage: f64,
    #[serde(skip)]
    pub final_state: StateVector,
}

/// Maps port-register probabilities onto the reported outcomes.
pub fn outcome_distribution(circ: &NaimarkCircuit, port_probs: &[f64]) -> Vec<f64> {
    let n = circ.plan.n;
    let mut out = vec![0.0; circ.plan.protocol.outcomes(n)];
    for (p, &w) in port_probs.iter().enumerate() {
        out[p.min(n)] += w;
    }
    out
}

/// Draws an index with the given weights.
pub fn sample_outcome<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, &p) in probs.iter().enumerate() {
        if x < p {
            return i;
        }
        x -= p;
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn bob_port_state(state: &StateVector, port: usize, n: usize) -> [[C64; 2]; 2] {
    let inner = state.layout.inner_dim();
    let mask = 1usize << (n - 1 - port);
    let mut rho = [[ZERO; 2]; 2];
    for (idx, &a0) in state.amplitudes.iter().enumerate() {
        if (idx / inner) & mask != 0 {
            continue;
        }
        let a1 = state.amplitudes[idx + mask * inner];
        rho[0][0] += a0 * a0.conj();
        rho[0][1] += a0 * a1.conj();
        rho[1][0] += a1 * a0.conj();
        rho[1][1] += a1 * a1.conj();
    }
    rho
}

/// One teleportation of `input` with a fresh circuit and a seeded
/// ChaCha8 generator.
pub fn teleport(protocol: Protocol, n: usize, input: [C64; 2], seed: u64) -> Result<ProtocolRun> {
    let circ = naimark_with_spectators(protocol, n, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    teleport_with_rng(&circ, &resource_state(protocol, n)?, input, &mut rng)
}

/// One teleportation through a prebuilt circuit (built with N spectators).
pub fn teleport_with_rng<R: Rng + ?Sized>(
    circ: &NaimarkCircuit,
    resource: &[C64],
    input: [C64; 2],
    rng: &mut R,
) -> Result<ProtocolRun> {
    let n = circ.plan.n;
    let layout = circ.layout;
    let da = 1usize << n;
    let mut v = vec![ZERO; layout.dim()];
    for b in 0..da {
        for a in 0..da {
            let ra = resource[b * da + a];
            if ra == ZERO {
                continue;
            }
            for (cbit, &ic) in input.iter().enumerate() {
                v[layout.index(b, 2 * a + cbit, 0, 0)] = ra * ic;
            }
        }
    }
    let out = StateVector::new(circ.run(&v)?, layout)?;
    let leakage = if layout.block_qubits > 0 {
        measure_register(&out, Register::Block).probabilities[1..]
            .iter()
            .sum()
    } else {
        0.0
    };
    let m = measure_register(&out, Register::Port);
    let probs = outcome_distribution(circ, &m.probabilities);
    let outcome = sample_outcome(&probs, rng);
    let success = outcome < n;
    let (bob_state, fidelity) = if success {
        let post = m.post_states[outcome]
            .as_ref()
            .expect("sampled outcome has weight");
        let rho = bob_port_state(post, outcome, n);
        let f = (input[0].conj() * (rho[0][0] * input[0] + rho[0][1] * input[1])
            + input[1].conj() * (rho[1][0] * input[0] + rho[1][1] * input[1]))
            .re;
        (Some(rho), Some(f))
    } else {
        (None, None)
    };
    Ok(ProtocolRun {
        protocol: circ.plan.protocol,
        n,
        rounds: circ.plan.rounds,
        c_star: circ.plan.c_star,
        outcome_probabilities: probs,
        outcome: outcome + 1,
        success,
        bob_state,
        fidelity,
        leakage,
        final_state: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::c;

    #[test]
    fn resource_is_singlets() {
        let r = resource_state(Protocol::DpbtMes, 1).unwrap();
        // b·2 + a: |a=0,b=1⟩ at 2, |a=1,b=0⟩ at 1.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[2] - c(h)).norm() < 1e-15);
        assert!((r[1] - c(-h)).norm() < 1e-15);
        assert_eq!(r[0], ZERO);
    }

    #[test]
    fn single_port_dpbt_outputs_maximally_mixed() {
        let input = [c(0.6), C64::new(0.0, 0.8)];
        let run = teleport(Protocol::DpbtMes, 1, input, 3).unwrap();
        let rho = run.bob_state.unwrap();
        assert!((rho[0][0].re - 0.5).abs() < 1e-12 && rho[0][1].norm() < 1e-12);
        assert!((run.fidelity.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn probabilistic_success_is_perfect() {
        for proto in [Protocol::PpbtMes, Protocol::PpbtMesNoAa, Protocol::PpbtOpt] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let circ = naimark_with_spectators(proto, 2, 2).unwrap();
            let res = resource_state(proto, 2).unwrap();
            let mut seen = 0;
            for _ in 0..40 {
                let run = teleport_with_rng(&circ, &res, haar_qubit(&mut rng), &mut rng).unwrap();
                assert!(run.leakage < 1e-18 + 1e-9);
                if let Some(f) = run.fidelity {
                    assert!((f - 1.0).abs() < 1e-9, "{proto}: {f}");
                    seen += 1;
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = teleport(Protocol::PpbtMes, 2, [c(1.0), ZERO], 99).unwrap();
        let b = teleport(Protocol::PpbtMes, 2, [c(1.0), ZERO], 99).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.outcome_probabilities, b.outcome_probabilities);
    }
}
