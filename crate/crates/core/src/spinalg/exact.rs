//! Rational-valued scalars: h, g, ν, u and λ.
//!
//! All arguments are taken as twice-values where spins are involved. The
//! factorials in g are big integers so nothing overflows past N = 20.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::HalfInt;
use crate::error::{Error, Result};

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn pow2(n: usize) -> BigInt {
    BigInt::one() << n
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Whether `j` is a spin that `n` qubits can carry.
pub fn admissible(n: usize, j: HalfInt) -> bool {
    j >= HalfInt::ZERO && j <= HalfInt::max_spin(n) && j.same_parity(HalfInt::max_spin(n))
}

/// h(N) = 6 / ((N+1)(N+2)(N+3)).
pub fn h(n: usize) -> BigRational {
    let n = n as i64;
    rat(6, (n + 1) * (n + 2) * (n + 3))
}

/// g^{[N]}(j), the multiplicity of the spin-j irrep in N qubits.
pub fn g(n: usize, j: HalfInt) -> Result<BigInt> {
    if !admissible(n, j) {
        return Err(Error::Domain(format!(
            "spin {j} is not admissible for {n} qubits"
        )));
    }
    let tj = j.twice() as u32;
    let n = n as u32;
    let lo = (n - tj) / 2;
    let hi = (n + tj) / 2 + 1;
    Ok(BigInt::from(tj + 1) * factorial(n) / (factorial(lo) * factorial(hi)))
}

/// ν(j) = 2^N h(N) (2j+1) / g^{[N]}(j).
pub fn nu(n: usize, j: HalfInt) -> Result<BigRational> {
    let g = g(n, j)?;
    Ok(h(n) * BigRational::from_integer(pow2(n) * j.multiplicity()) / BigRational::from_integer(g))
}

/// u(s) = 2^{N+1} h(N) (2s+1) / (N g^{[N-1]}(s)).
pub fn u(n: usize, s: HalfInt) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Domain("u(s) needs N >= 1".into()));
    }
    let g = g(n - 1, s)?;
    Ok(
        h(n) * BigRational::from_integer(pow2(n + 1) * s.multiplicity())
            / BigRational::from_integer(g * n),
    )
}

/// λ(j, s): the eigenvalue of ρ on Schur states with penultimate spin j and
/// total spin s, on N+1 qubits.
pub fn lambda(n: usize, j: HalfInt, s: HalfInt) -> Result<BigRational> {
    if !admissible(n, j) {
        return Err(Error::Domain(format!(
            "j = {j} is not admissible for N = {n}"
        )));
    }
    let denom = BigRational::from_integer(pow2(n + 1));
    let (n, tj) = (n as i64, j.twice() as i64);
    if s == j + HalfInt::HALF {
        Ok(BigRational::from_integer(BigInt::from(n - tj)) / denom)
    } else if s == j - HalfInt::HALF && j > HalfInt::ZERO {
        Ok(BigRational::from_integer(BigInt::from(n + tj + 2)) / denom)
    } else {
        Err(Error::Domain(format!(
            "(j, s) = ({j}, {s}) is not a valid coupling"
        )))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactValue {
    /// Twice the spin argument.
    pub spin: i32,
    pub numer: String,
    pub denom: String,
    pub value: f64,
}

impl ExactValue {
    fn new(spin: HalfInt, r: &BigRational) -> Self {
        ExactValue {
            spin: spin.twice(),
            numer: r.numer().to_string(),
            denom: r.denom().to_string(),
            value: to_f64(r),
        }
    }
}

/// Tabulated ν, u, g and h for one N.
#[derive(Debug, Clone, Serialize)]
pub struct OptScalars {
    pub n: usize,
    pub h: ExactValue,
    pub g: Vec<ExactValue>,
    pub nu: Vec<ExactValue>,
    pub u: Vec<ExactValue>,
}

impl OptScalars {
    pub fn nu_at(&self, j: HalfInt) -> Option<f64> {
        self.nu
            .iter()
            .find(|e| e.spin == j.twice())
            .map(|e| e.value)
    }

    pub fn u_at(&self, s: HalfInt) -> Option<f64> {
        self.u.iter().find(|e| e.spin == s.twice()).map(|e| e.value)
    }

    pub fn g_at(&self, j: HalfInt) -> Option<f64> {
        self.g.iter().find(|e| e.spin == j.twice()).map(|e| e.value)
    }
}

pub fn opt_scalars(n: usize) -> Result<OptScalars> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let mut out = OptScalars {
        n,
        h: ExactValue::new(HalfInt::ZERO, &h(n)),
        g: Vec::new(),
        nu: Vec::new(),
        u: Vec::new(),
    };
    for j in HalfInt::spins_for(n) {
        out.g
            .push(ExactValue::new(j, &BigRational::from_integer(g(n, j)?)));
        out.nu.push(ExactValue::new(j, &nu(n, j)?));
    }
    for s in HalfInt::spins_for(n - 1) {
        out.u.push(ExactValue::new(s, &u(n, s)?));
    }
    Ok(out)
}

/// Σ_j ν(j) g(j) (2j+1) / 2^N = tr(O²)/2^N, which must be 1 for the deformed
/// resource state to be normalized.
pub fn deformed_norm(n: usize) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for j in HalfInt::spins_for(n) {
        acc += nu(n, j)? * BigRational::from_integer(g(n, j)? * j.multiplicity());
    }
    Ok(acc / BigRational::from_integer(pow2(n)))
}
