//! Spin-1/2 coupling algebra and the closed-form scalars of the three POVM
//! families.
//!
//! Conventions: qubit |0⟩ is m = +1/2, Clebsch-Gordan coefficients follow
//! Condon-Shortley, and all (k, j, s) arguments refer to the last three
//! spins of a coupling chain on N+1 qubits: k is the spin of the first N-1
//! qubits, j of the first N, s of all N+1.

mod exact;
mod halfint;

pub use exact::{
    admissible, deformed_norm, g, h, lambda, nu, opt_scalars, to_f64, u, ExactValue, OptScalars,
};
pub use halfint::HalfInt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three POVM families. dPBT with either resource state shares one
/// POVM, the pretty-good measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Dpbt,
    PpbtMes,
    PpbtOpt,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Dpbt, Regime::PpbtMes, Regime::PpbtOpt];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Dpbt => "dpbt",
            Regime::PpbtMes => "ppbt-mes",
            Regime::PpbtOpt => "ppbt-opt",
        }
    }

    pub fn is_probabilistic(self) -> bool {
        !matches!(self, Regime::Dpbt)
    }

    /// Number of POVM elements for N ports.
    pub fn outcomes(self, n: usize) -> usize {
        if self.is_probabilistic() {
            n + 1
        } else {
            n
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dpbt" => Ok(Regime::Dpbt),
            "ppbt-mes" | "ppbt_mes" => Ok(Regime::PpbtMes),
            "ppbt-opt" | "ppbt_opt" => Ok(Regime::PpbtOpt),
            other => Err(Error::Domain(format!("unknown regime '{other}'"))),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

const HALF: HalfInt = HalfInt::HALF;

/// C^{J,M}_{j1,m1; 1/2,m2}.
pub fn cg(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    jj: HalfInt,
    mm: HalfInt,
) -> Result<f64> {
    if j2 != HALF {
        return Err(Error::UnsupportedCoupling(j2.as_fraction()));
    }
    if j1 < HalfInt::ZERO || jj < HalfInt::ZERO {
        return Err(Error::Domain("negative spin".into()));
    }
    if mm != m1 + m2 || m1.abs() > j1 || m2.abs() > j2 || mm.abs() > jj {
        return Ok(0.0);
    }
    if !m1.same_parity(j1) || !mm.same_parity(jj) {
        return Ok(0.0);
    }
    let j = j1.value();
    let m = mm.value();
    let d = 2.0 * j + 1.0;
    let up = m2 == HALF;
    let c = if jj == j1 + HALF {
        if up {
            ((j + m + 0.5) / d).sqrt()
        } else {
            ((j - m + 0.5) / d).sqrt()
        }
    } else if jj == j1 - HALF && j1 > HalfInt::ZERO {
        if up {
            -((j - m + 0.5) / d).sqrt()
        } else {
            ((j + m + 0.5) / d).sqrt()
        }
    } else {
        0.0
    };
    Ok(c)
}

/// λ(j, s) as a float. See [`lambda`] for the exact value.
pub fn lambda_eig(n: usize, j: HalfInt, s: HalfInt) -> Result<f64> {
    lambda(n, j, s).map(|r| to_f64(&r))
}

/// c(k, j, s): the partial inner product of the last two couplings with a
/// singlet on the final pair.
pub fn c_coeff(k: HalfInt, j: HalfInt, s: HalfInt) -> f64 {
    if k != s {
        return 0.0;
    }
    let sv = s.value();
    if s == j + HALF && j == k - HALF {
        (sv / (2.0 * sv + 1.0)).sqrt()
    } else if s == j - HALF && j == k + HALF {
        -((sv + 1.0) / (2.0 * sv + 1.0)).sqrt()
    } else {
        0.0
    }
}

fn check_sector(n: usize, s: HalfInt) -> Result<()> {
    if !admissible(n - 1, s) {
        return Err(Error::Domain(format!(
            "s = {s} has no nonzero Π_N branch for N = {n}"
        )));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("N must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// α(s) = c(s, s-1/2, s) / √(2^{N-1} λ(s-1/2, s)); zero at s = 0.
pub fn alpha(n: usize, s: HalfInt) -> Result<f64> {
    check_n(n)?;
    check_sector(n, s)?;
    if s == HalfInt::ZERO {
        return Ok(0.0);
    }
    let lam = lambda_eig(n, s - HALF, s)?;
    Ok(c_coeff(s, s - HALF, s) / (2f64.powi(n as i32 - 1) * lam).sqrt())
}

/// β(s) = c(s, s+1/2, s) / √(2^{N-1} λ(s+1/2, s)).
pub fn beta(n: usize, s: HalfInt) -> Result<f64> {
    check_n(n)?;
    check_sector(n, s)?;
    let lam = lambda_eig(n, s + HALF, s)?;
    Ok(c_coeff(s, s + HALF, s) / (2f64.powi(n as i32 - 1) * lam).sqrt())
}

/// σ(s) = 4 / (N+3+2s).
pub fn sigma(n: usize, s: HalfInt) -> f64 {
    4.0 / (n as f64 + 3.0 + 2.0 * s.value())
}

/// τ(s) = 2(2s+1) / (N+3+2s).
pub fn tau(n: usize, s: HalfInt) -> f64 {
    2.0 * (2.0 * s.value() + 1.0) / (n as f64 + 3.0 + 2.0 * s.value())
}

/// γ(s) = c(s, s-1/2, s) / √ν(s-1/2); zero at s = 0.
pub fn gamma(n: usize, s: HalfInt) -> Result<f64> {
    check_n(n)?;
    check_sector(n, s)?;
    if s == HalfInt::ZERO {
        return Ok(0.0);
    }
    Ok(c_coeff(s, s - HALF, s) / to_f64(&nu(n, s - HALF)?).sqrt())
}

/// δ(s) = c(s, s+1/2, s) / √ν(s+1/2).
pub fn delta(n: usize, s: HalfInt) -> Result<f64> {
    check_n(n)?;
    check_sector(n, s)?;
    Ok(c_coeff(s, s + HALF, s) / to_f64(&nu(n, s + HALF)?).sqrt())
}

/// The nonzero Π_N eigenvalue in sector s. For dPBT at the maximal spin
/// s = (N+1)/2 this is 1/N.
pub fn eigen_scalar(regime: Regime, n: usize, s: HalfInt) -> Result<f64> {
    check_n(n)?;
    if regime == Regime::Dpbt && s == HalfInt::max_spin(n + 1) {
        return Ok(1.0 / n as f64);
    }
    check_sector(n, s)?;
    match regime {
        Regime::Dpbt => {
            let (a, b) = (alpha(n, s)?, beta(n, s)?);
            Ok(a * a + b * b)
        }
        Regime::PpbtMes => Ok(sigma(n, s)),
        Regime::PpbtOpt => {
            let (gm, dl) = (gamma(n, s)?, delta(n, s)?);
            Ok(to_f64(&u(n, s)?) * (gm * gm + dl * dl))
        }
    }
}

/// Unit vector (coefficient of |k̃,s,s-1/2,s,m⟩, coefficient of
/// |k̃,s,s+1/2,s,m⟩) spanning the nonzero-eigenvalue direction of Π_N.
pub fn rot_coeffs(regime: Regime, n: usize, s: HalfInt) -> Result<(f64, f64)> {
    check_n(n)?;
    if s == HalfInt::max_spin(n + 1) {
        return Err(Error::Domain(
            "maximal spin sector is one-dimensional".into(),
        ));
    }
    check_sector(n, s)?;
    let (p, q) = match regime {
        Regime::Dpbt => (alpha(n, s)?, beta(n, s)?),
        Regime::PpbtMes => {
            let sv = s.value();
            let d = 2.0 * sv + 1.0;
            ((sv / d).sqrt(), -((sv + 1.0) / d).sqrt())
        }
        Regime::PpbtOpt => (gamma(n, s)?, delta(n, s)?),
    };
    let norm = p.hypot(q);
    Ok((p / norm, q / norm))
}

/// The zero-eigenvalue partner of [`rot_coeffs`] in the same 2D sector.
/// dPBT and pPBT-opt use (q, -p); pPBT-MES uses (√((s+1)/(2s+1)), √(s/(2s+1))).
pub fn null_coeffs(regime: Regime, n: usize, s: HalfInt) -> Result<(f64, f64)> {
    let (p, q) = rot_coeffs(regime, n, s)?;
    Ok(match regime {
        Regime::PpbtMes => (-q, p),
        _ => (q, -p),
    })
}

/// Π_{N+1} eigenvalue on a Schur state with penultimate spin j and total
/// spin s (pPBT only).
pub fn fail_eigenvalue(regime: Regime, n: usize, j: HalfInt, s: HalfInt) -> Result<f64> {
    check_n(n)?;
    if s == HalfInt::max_spin(n + 1) {
        return Ok(1.0);
    }
    match regime {
        Regime::Dpbt => Err(Error::Unsupported("dPBT has no failure element".into())),
        Regime::PpbtMes => {
            if s == j + HALF {
                Ok(tau(n, s))
            } else {
                Ok(0.0)
            }
        }
        Regime::PpbtOpt => {
            let lam = lambda_eig(n, j, s)?;
            let uu = if admissible(n - 1, s) {
                to_f64(&u(n, s)?)
            } else {
                0.0
            };
            let nuj = to_f64(&nu(n, j)?);
            Ok(1.0 - 2f64.powi(n as i32 - 1) * lam * uu / nuj)
        }
    }
}

/// Sector s of the nonzero Π_N branch: s_min ..= (N-1)/2.
pub fn sectors(n: usize) -> Vec<HalfInt> {
    HalfInt::spins_for(n - 1)
}

/// Per-sector scalar table for one (regime, N).
#[derive(Debug, Clone, Serialize)]
pub struct RegimeScalars {
    pub regime: Regime,
    pub n: usize,
    pub sectors: Vec<SectorScalars>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorScalars {
    /// Twice s.
    pub s: i32,
    pub eigenvalue: f64,
    pub rot: (f64, f64),
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub tau: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl RegimeScalars {
    pub fn new(regime: Regime, n: usize) -> Result<Self> {
        check_n(n)?;
        let mut out = Vec::new();
        for s in sectors(n) {
            out.push(SectorScalars {
                s: s.twice(),
                eigenvalue: eigen_scalar(regime, n, s)?,
                rot: rot_coeffs(regime, n, s)?,
                alpha: alpha(n, s)?,
                beta: beta(n, s)?,
                sigma: sigma(n, s),
                tau: tau(n, s),
                gamma: gamma(n, s)?,
                delta: delta(n, s)?,
            });
        }
        Ok(RegimeScalars {
            regime,
            n,
            sectors: out,
        })
    }
}
