//! Brute-force dense POVMs built straight from their definitions.
//!
//! This is the ground truth the analytic eigensystems and the circuits are
//! checked against, so it deliberately shares nothing with them beyond the
//! spin projectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{self, ORACLE_MAX_PORTS};
use crate::operator::Operator;
use crate::schur::{coupling_unitary, spin_projector_from};
use crate::spinalg::{lambda_eig, nu, to_f64, u, HalfInt, Regime};

/// Relative cutoff below which eigenvalues count as zero.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Eigenvalues below this are a genuine PSD violation.
pub const NEGATIVE_TOLERANCE: f64 = -1e-8;

#[derive(Debug, Clone)]
pub struct PovmSet {
    pub regime: Regime,
    pub n: usize,
    pub elements: Vec<Operator>,
}

/// Validity numbers for one POVM.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PovmReport {
    /// max |Σ Π - I| entrywise.
    pub completeness: f64,
    pub min_eigenvalue: f64,
    /// max over i < N of |Π_i - SWAP Π_N SWAP| entrywise.
    pub swap_covariance: f64,
}

impl PovmSet {
    pub fn sum(&self) -> Operator {
        let q = self.elements[0].qubits();
        self.elements
            .iter()
            .fold(Operator::zeros(q), |acc, e| acc.add(e))
    }

    pub fn report(&self) -> PovmReport {
        let q = self.elements[0].qubits();
        let completeness = self.sum().max_abs_diff(&Operator::identity(q));
        let min_eigenvalue = self
            .elements
            .iter()
            .map(Operator::min_eigenvalue)
            .fold(f64::INFINITY, f64::min);
        let last = &self.elements[self.n - 1];
        let swap_covariance = (0..self.n - 1)
            .map(|i| self.elements[i].max_abs_diff(&last.conjugate_swap(i, self.n - 1)))
            .fold(0.0, f64::max);
        PovmReport {
            completeness,
            min_eigenvalue,
            swap_covariance,
        }
    }
}

fn check(n: usize) -> Result<()> {
    limits::check_ports("N", n, ORACLE_MAX_PORTS)
}

/// σ⁽ⁱ⁾ = 2^{-(N-1)} |ψ⁻⟩⟨ψ⁻|_{A_i A_{N+1}} ⊗ I, with i counted from 1.
pub fn sigma_i(i: usize, n: usize) -> Result<Operator> {
    check(n)?;
    if i == 0 || i > n {
        return Err(Error::Domain(format!("port {i} out of range 1..={n}")));
    }
    let p = Operator::projector(&crate::operator::singlet())?;
    Ok(Operator::embed(&p, &[i - 1, n], n + 1)?.scale(0.5f64.powi(n as i32 - 1)))
}

/// ρ = Σᵢ σ⁽ⁱ⁾.
pub fn rho(n: usize) -> Result<Operator> {
    check(n)?;
    let mut acc = Operator::zeros(n + 1);
    for i in 1..=n {
        acc = acc.add(&sigma_i(i, n)?);
    }
    Ok(acc)
}

fn check_psd(a: &Operator) -> Result<crate::operator::Eigh> {
    let e = a.eigh();
    if let Some(&lo) = e.values.first() {
        if lo < NEGATIVE_TOLERANCE {
            return Err(Error::NotPsd(lo));
        }
    }
    Ok(e)
}

fn from_eigh(a: &Operator, e: &crate::operator::Eigh, f: impl Fn(f64) -> f64) -> Operator {
    let d = a.dim();
    let mut out = nalgebra::DMatrix::zeros(d, d);
    for (k, &lam) in e.values.iter().enumerate() {
        let w = f(lam);
        if w != 0.0 {
            let v = e.vectors.column(k);
            out += v * v.adjoint() * crate::operator::c(w);
        }
    }
    Operator::from_matrix(out).expect("same shape as input")
}

/// A^{1/2} for PSD A. Eigenvalues below the support cutoff (negative ones
/// included) are roundoff and map to zero; a plain square root would turn
/// 1e-16 into 1e-8.
pub fn psd_sqrt(a: &Operator) -> Result<Operator> {
    let e = check_psd(a)?;
    let top = e.values.iter().cloned().fold(0.0, f64::max);
    let cut = SUPPORT_CUTOFF * top;
    Ok(from_eigh(a, &e, |x| if x > cut { x.sqrt() } else { 0.0 }))
}

/// A^{-1/2} on the support of A, zero elsewhere.
pub fn support_pinv_sqrt(a: &Operator) -> Result<Operator> {
    let e = check_psd(a)?;
    let top = e.values.iter().cloned().fold(0.0, f64::max);
    let cut = SUPPORT_CUTOFF * top;
    Ok(from_eigh(
        a,
        &e,
        |x| if x > cut { 1.0 / x.sqrt() } else { 0.0 },
    ))
}

/// Pretty-good measurement: Πᵢ = ρ^{-1/2} σ⁽ⁱ⁾ ρ^{-1/2} + Δ.
pub fn pgm_povm(n: usize) -> Result<PovmSet> {
    check(n)?;
    let r = support_pinv_sqrt(&rho(n)?)?;
    let mut core = Vec::with_capacity(n);
    for i in 1..=n {
        core.push(r.mul(&sigma_i(i, n)?).mul(&r));
    }
    let total = core.iter().fold(Operator::zeros(n + 1), |a, e| a.add(e));
    let delta = Operator::identity(n + 1).sub(&total).scale(1.0 / n as f64);
    Ok(PovmSet {
        regime: Regime::Dpbt,
        n,
        elements: core.into_iter().map(|e| e.add(&delta)).collect(),
    })
}

/// Σ_s w(s) 𝕀(s) on `q` qubits.
fn spin_weighted(q: usize, w: impl Fn(HalfInt) -> Result<f64>) -> Result<Operator> {
    if q == 0 {
        return Ok(Operator::identity(0).scale(w(HalfInt::ZERO)?));
    }
    let uc = coupling_unitary(q)?;
    let mut acc = Operator::zeros(q);
    for s in HalfInt::spins_for(q) {
        acc = acc.add(&spin_projector_from(&uc, q, s)?.scale(w(s)?));
    }
    Ok(acc)
}

/// |ψ⁻⟩⟨ψ⁻|_{A_i A_{N+1}} ⊗ Θ̃ on the remaining ports.
fn singlet_times_theta(i: usize, n: usize, theta: &Operator) -> Result<Operator> {
    let p = Operator::projector(&crate::operator::singlet())?;
    let others: Vec<usize> = (0..n).filter(|&q| q != i - 1).collect();
    let t = Operator::embed(theta, &others, n + 1)?;
    Ok(Operator::embed(&p, &[i - 1, n], n + 1)?.mul(&t))
}

fn with_failure(regime: Regime, n: usize, mut elements: Vec<Operator>) -> PovmSet {
    let total = elements
        .iter()
        .fold(Operator::zeros(n + 1), |a, e| a.add(e));
    elements.push(Operator::identity(n + 1).sub(&total));
    PovmSet {
        regime,
        n,
        elements,
    }
}

/// Θ̃ for maximally entangled pPBT: 2^{-(N-1)} Σ_s 𝕀(s) / λ⁺_{s+1/2}.
pub fn theta_mes(n: usize) -> Result<Operator> {
    check(n)?;
    let scale = 0.5f64.powi(n as i32 - 1);
    spin_weighted(n - 1, |s| Ok(scale / lambda_eig(n, s + HalfInt::HALF, s)?))
}

/// Θ̃ for optimised pPBT: Σ_s u(s) 𝕀(s).
pub fn theta_opt(n: usize) -> Result<Operator> {
    check(n)?;
    spin_weighted(n - 1, |s| Ok(to_f64(&u(n, s)?)))
}

/// O = Σ_j √ν(j) 𝕀(j) on Alice's N qubits.
pub fn o_operator(n: usize) -> Result<Operator> {
    check(n)?;
    spin_weighted(n, |j| Ok(to_f64(&nu(n, j)?).sqrt()))
}

pub fn ppbt_mes_povm(n: usize) -> Result<PovmSet> {
    let theta = theta_mes(n)?;
    let els = (1..=n)
        .map(|i| singlet_times_theta(i, n, &theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(with_failure(Regime::PpbtMes, n, els))
}

pub fn ppbt_opt_povm(n: usize) -> Result<PovmSet> {
    let theta = theta_opt(n)?;
    let o = o_operator(n)?;
    // O is full rank on N qubits, so its support inverse is the inverse.
    let oinv = o.map_spectrum(|x| if x > SUPPORT_CUTOFF { 1.0 / x } else { 0.0 });
    let oinv = oinv.kron(&Operator::identity(1));
    let els = (1..=n)
        .map(|i| Ok(oinv.mul(&singlet_times_theta(i, n, &theta)?).mul(&oinv)))
        .collect::<Result<Vec<_>>>()?;
    Ok(with_failure(Regime::PpbtOpt, n, els))
}

pub fn povm(regime: Regime, n: usize) -> Result<PovmSet> {
    match regime {
        Regime::Dpbt => pgm_povm(n),
        Regime::PpbtMes => ppbt_mes_povm(n),
        Regime::PpbtOpt => ppbt_opt_povm(n),
    }
}
