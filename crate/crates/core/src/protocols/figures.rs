//! Exact figures of merit.
//!
//! With Alice holding X_A ⊗ I_B applied to N singlets, the teleportation
//! channel has entanglement fidelity
//!
//!   F_e = (1/4) Σᵢ Tr[Πᵢ (X ⊗ I_C) σ⁽ⁱ⁾ (X ⊗ I_C)†],
//!
//! and the average over pure inputs is F = (2 F_e + 1) / 3. The pPBT
//! success probability averaged over inputs is
//!
//!   p = 2^{-(N+1)} Σ_{i≤N} Tr[Πᵢ (X X† ⊗ I_C)].

use nalgebra::DMatrix;
use serde::Serialize;

use super::{Protocol, Resource};
use crate::error::{Error, Result};
use crate::limits::{self, PROTOCOL_MAX_PORTS};
use crate::operator::Operator;
use crate::povm_analytic::analytic_povm;
use crate::povm_oracle::{o_operator, sigma_i, PovmSet};
use crate::schur::{coupling_unitary, spin_projector_from};
use crate::spinalg::{HalfInt, Regime};

/// The symmetric resource Σ_j c_j 𝕀(j) maximizing the PGM entanglement
/// fidelity, normalized so the shared state has unit norm.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalResource {
    pub n: usize,
    /// Twice-values of the spins j of Alice's N qubits.
    pub spins: Vec<i32>,
    pub coeffs: Vec<f64>,
    pub entanglement_fidelity: f64,
    #[serde(skip)]
    pub operator: Operator,
}

fn check(n: usize) -> Result<()> {
    limits::check_ports("N", n, PROTOCOL_MAX_PORTS)
}

fn pair_trace(povm: &PovmSet, left: &Operator, right: &Operator, n: usize) -> Result<f64> {
    let mut acc = 0.0;
    for i in 1..=n {
        let t = povm.elements[i - 1]
            .mul(left)
            .mul(&sigma_i(i, n)?)
            .mul(right);
        acc += t.trace().re;
    }
    Ok(acc / 4.0)
}

/// Maximizes cᵀAc / cᵀBc with A_ab = F_e(P_a, P_b), B = diag(Tr 𝕀(j_a) / 2^N).
pub fn optimal_resource(n: usize) -> Result<OptimalResource> {
    check(n)?;
    let povm = analytic_povm(Regime::Dpbt, n)?;
    let uc = coupling_unitary(n)?;
    let spins = HalfInt::spins_for(n);
    let projs = spins
        .iter()
        .map(|&j| spin_projector_from(&uc, n, j))
        .collect::<Result<Vec<_>>>()?;
    let lifted: Vec<Operator> = projs
        .iter()
        .map(|p| p.kron(&Operator::identity(1)))
        .collect();
    let k = spins.len();
    let mut a = DMatrix::<f64>::zeros(k, k);
    for x in 0..k {
        for y in x..k {
            let v = pair_trace(&povm, &lifted[x], &lifted[y], n)?;
            a[(x, y)] = v;
            a[(y, x)] = v;
        }
    }
    let scale = 0.5f64.powi(n as i32);
    let b: Vec<f64> = projs.iter().map(|p| p.trace().re * scale).collect();
    let binv_sqrt: Vec<f64> = b.iter().map(|x| 1.0 / x.sqrt()).collect();
    let m = DMatrix::from_fn(k, k, |x, y| binv_sqrt[x] * a[(x, y)] * binv_sqrt[y]);
    let eig = crate::operator::hermitian_eigen(m);
    let top = eig.eigenvalues.iamax();
    let mut coeffs: Vec<f64> = (0..k)
        .map(|x| eig.eigenvectors[(x, top)] * binv_sqrt[x])
        .collect();
    if coeffs.iter().sum::<f64>() < 0.0 {
        coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    let operator = projs
        .iter()
        .zip(&coeffs)
        .fold(Operator::zeros(n), |acc, (p, c)| acc.add(&p.scale(*c)));
    Ok(OptimalResource {
        n,
        spins: spins.iter().map(|s| s.twice()).collect(),
        coeffs,
        entanglement_fidelity: eig.eigenvalues[top],
        operator,
    })
}

/// X acting on Alice's N qubits for the protocol's resource state.
pub fn resource_operator(protocol: Protocol, n: usize) -> Result<Operator> {
    check(n)?;
    match protocol.resource() {
        Resource::Singlets => Ok(Operator::identity(n)),
        Resource::Deformed => o_operator(n),
        Resource::Optimal => Ok(optimal_resource(n)?.operator),
    }
}

/// F_e of the teleportation channel (deterministic protocols).
pub fn entanglement_fidelity(protocol: Protocol, n: usize) -> Result<f64> {
    check(n)?;
    if protocol.is_probabilistic() {
        return Err(Error::Unsupported(format!(
            "{protocol} is probabilistic; use success_probability"
        )));
    }
    let povm = analytic_povm(Regime::Dpbt, n)?;
    let x = resource_operator(protocol, n)?.kron(&Operator::identity(1));
    pair_trace(&povm, &x, &x.adjoint(), n)
}

/// Average fidelity over uniformly random pure inputs.
pub fn average_fidelity(protocol: Protocol, n: usize) -> Result<f64> {
    Ok((2.0 * entanglement_fidelity(protocol, n)? + 1.0) / 3.0)
}

/// Success probability averaged over inputs (probabilistic protocols).
pub fn success_probability(protocol: Protocol, n: usize) -> Result<f64> {
    check(n)?;
    if !protocol.is_probabilistic() {
        return Err(Error::Unsupported(format!(
            "{protocol} always succeeds; use average_fidelity"
        )));
    }
    let povm = analytic_povm(protocol.regime(), n)?;
    let x = resource_operator(protocol, n)?;
    let state = x.mul(&x.adjoint()).kron(&Operator::identity(1));
    let total: f64 = povm.elements[..n]
        .iter()
        .map(|e| e.mul(&state).trace().re)
        .sum();
    let p = total * 0.5f64.powi(n as i32 + 1);
    Ok(if protocol == Protocol::PpbtMesNoAa {
        p / 4.0
    } else {
        p
    })
}
