//! Robust oblivious amplitude amplification.
//!
//! Ũ = Q^k U with Q = -U R_Π U† R_Π̃, R_P = I - 2P and k = (n-1)/2. If
//! Π̃ U |Ψ⟩ = sin(π/2n) W|Ψ⟩ for every |Ψ⟩ in img Π, then Π̃ Ũ |Ψ⟩ = W|Ψ⟩.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::{C64, ZERO};

/// A unitary given by its action on dense vectors.
pub trait UnitaryAction {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[C64]) -> Vec<C64>;
    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64>;
}

/// Projector onto the span of basis states selected by a predicate.
#[derive(Clone)]
pub struct Projector {
    keep: Arc<dyn Fn(usize) -> bool + Send + Sync>,
}

impl std::fmt::Debug for Projector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Projector(..)")
    }
}

impl Projector {
    pub fn new(keep: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        Projector {
            keep: Arc::new(keep),
        }
    }

    pub fn contains(&self, idx: usize) -> bool {
        (self.keep)(idx)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        v.iter()
            .enumerate()
            .map(|(i, &a)| if self.contains(i) { a } else { ZERO })
            .collect()
    }

    /// I - 2P in place.
    pub fn reflect(&self, v: &mut [C64]) {
        for (i, a) in v.iter_mut().enumerate() {
            if self.contains(i) {
                *a = -*a;
            }
        }
    }
}

/// C_Π NOT = X ⊗ Π + I ⊗ (I - Π), with the target appended as the least
/// significant qubit. Used to realize the reflections with one ancilla.
pub fn c_pi_not(pi: &Projector, v: &[C64]) -> Vec<C64> {
    let mut out = v.to_vec();
    for base in 0..v.len() / 2 {
        if pi.contains(base) {
            out.swap(2 * base, 2 * base + 1);
        }
    }
    out
}

/// I - 2P realized as C_Π NOT · (I ⊗ Z) · C_Π NOT with the ancilla in |0⟩.
pub fn reflect_via_ancilla(pi: &Projector, v: &[C64]) -> Vec<C64> {
    let mut ext = Vec::with_capacity(2 * v.len());
    for &a in v {
        ext.push(a);
        ext.push(ZERO);
    }
    let mut ext = c_pi_not(pi, &ext);
    for k in 0..v.len() {
        ext[2 * k + 1] = -ext[2 * k + 1];
    }
    let ext = c_pi_not(pi, &ext);
    ext.chunks(2).map(|p| p[0]).collect()
}

pub struct Oaa<'a, U: UnitaryAction + ?Sized> {
    u: &'a U,
    pi: Projector,
    pi_tilde: Projector,
    rounds: usize,
}

/// Wraps `u` into its amplified version with `n` (odd) rounds.
pub fn oaa<U: UnitaryAction + ?Sized>(
    u: &U,
    pi: Projector,
    pi_tilde: Projector,
    n: usize,
) -> Result<Oaa<'_, U>> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenRounds(n));
    }
    Ok(Oaa {
        u,
        pi,
        pi_tilde,
        rounds: n,
    })
}

impl<U: UnitaryAction + ?Sized> Oaa<'_, U> {
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    fn q(&self, v: &[C64]) -> Vec<C64> {
        let mut w = v.to_vec();
        self.pi_tilde.reflect(&mut w);
        let mut w = self.u.apply_adjoint(&w);
        self.pi.reflect(&mut w);
        self.u.apply(&w).into_iter().map(|a| -a).collect()
    }

    fn q_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut w = self.u.apply_adjoint(v);
        self.pi.reflect(&mut w);
        let mut w = self.u.apply(&w);
        self.pi_tilde.reflect(&mut w);
        w.into_iter().map(|a| -a).collect()
    }
}

impl<U: UnitaryAction + ?Sized> UnitaryAction for Oaa<'_, U> {
    fn dim(&self) -> usize {
        self.u.dim()
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut w = self.u.apply(v);
        for _ in 0..(self.rounds - 1) / 2 {
            w = self.q(&w);
        }
        w
    }

    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let mut w = v.to_vec();
        for _ in 0..(self.rounds - 1) / 2 {
            w = self.q_adjoint(&w);
        }
        self.u.apply_adjoint(&w)
    }
}

/// Smallest c* ≥ 1 with an odd n such that target / c* = sin(π/2n).
pub fn c_star(target: f64) -> Result<(f64, usize)> {
    if !(target > 0.0 && target <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "target amplitude {target} outside (0, 1]"
        )));
    }
    let mut n = 1usize;
    loop {
        let s = (std::f64::consts::PI / (2 * n) as f64).sin();
        if s <= target * (1.0 + 1e-12) {
            return Ok(((target / s).max(1.0), n));
        }
        n += 2;
    }
}
