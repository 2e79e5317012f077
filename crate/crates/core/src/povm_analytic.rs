//! Closed-form eigensystems of Π_N and Π_{N+1} over Schur labels.
//!
//! Π_N only mixes the pair |k̃,s,s-1/2,s,m⟩, |k̃,s,s+1/2,s,m⟩ (both with
//! k_{N-2} = s); every other label is an eigenvector on its own. Each entry
//! carries a compression tag (a, b) naming its slot after the two middle
//! registers are squeezed into one qubit each:
//!
//! | (k_{N-2}, j)        | tag    |
//! |---------------------|--------|
//! | (s-1, s-1/2)        | (-,-)  |
//! | (s+1, s+1/2)        | (+,-)  |
//! | (s, s∓1/2) null     | (-,+)  |
//! | (s, s∓1/2) nonzero  | (+,+)  |
//!
//! The dPBT maximal-spin states are tagged (+,+) as well.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{self, ORACLE_MAX_PORTS};
use crate::operator::{c, Operator, C64};
use crate::povm_oracle::PovmSet;
use crate::schur::{coupling_unitary, label_index, SchurBasis, SchurLabel};
use crate::spinalg::{eigen_scalar, fail_eigenvalue, null_coeffs, rot_coeffs, HalfInt, Regime};

const HALF: HalfInt = HalfInt::HALF;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    PlusPlus,
    MinusPlus,
    MinusMinus,
    PlusMinus,
    /// Π_{N+1} entries, which need no rotation.
    Diagonal,
}

impl Branch {
    /// The (a, b) bits, + = 1.
    pub fn bits(self) -> Option<(u8, u8)> {
        match self {
            Branch::PlusPlus => Some((1, 1)),
            Branch::MinusPlus => Some((0, 1)),
            Branch::MinusMinus => Some((0, 0)),
            Branch::PlusMinus => Some((1, 0)),
            Branch::Diagonal => None,
        }
    }
}

/// Which POVM element an eigensystem describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Element {
    PiN,
    PiNPlus1,
}

/// An eigenvector as a real combination of Schur labels.
#[derive(Debug, Clone)]
pub struct EigenEntry {
    pub eigenvalue: f64,
    pub terms: Vec<(f64, SchurLabel)>,
    pub branch: Branch,
    pub s: HalfInt,
}

#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub regime: Regime,
    pub n: usize,
    pub element: Element,
    pub entries: Vec<EigenEntry>,
}

/// Tag for a label outside the mixing pairs.
fn outer_branch(k: HalfInt, s: HalfInt) -> Branch {
    if k < s {
        Branch::MinusMinus
    } else {
        Branch::PlusMinus
    }
}

/// Compression tag for a bare label (k_{N-2}, j, s), before rotation.
pub fn compress_tag(k: HalfInt, j: HalfInt, s: HalfInt) -> Branch {
    if k != s {
        outer_branch(k, s)
    } else if j < s {
        Branch::MinusPlus
    } else {
        Branch::PlusPlus
    }
}

/// (k_{N-2}, j, s) of a label on N+1 qubits.
pub fn tail(label: &SchurLabel) -> (HalfInt, HalfInt, HalfInt) {
    let n1 = label.n();
    (
        label.prefix_spin(n1 - 2),
        label.penultimate(),
        label.total(),
    )
}

fn check(n: usize) -> Result<()> {
    limits::check_ports("N", n, ORACLE_MAX_PORTS)
}

pub fn eigensystem_pi_n(regime: Regime, n: usize) -> Result<EigenSystem> {
    check(n)?;
    let basis = SchurBasis::new(n + 1)?;
    let top = HalfInt::max_spin(n + 1);
    let mut entries = Vec::with_capacity(1 << (n + 1));
    for label in basis.labels() {
        let (k, j, s) = tail(label);
        if k != s {
            let (ev, branch) = if regime == Regime::Dpbt && s == top {
                (eigen_scalar(regime, n, s)?, Branch::PlusPlus)
            } else {
                (0.0, outer_branch(k, s))
            };
            entries.push(EigenEntry {
                eigenvalue: ev,
                terms: vec![(1.0, label.clone())],
                branch,
                s,
            });
            continue;
        }
        // Each pair is emitted from its s+1/2 member, which always exists.
        if j < s {
            continue;
        }
        let m = label.m();
        let minus = label.with_tail(&[s - HALF, s], m).ok();
        let (p, q) = rot_coeffs(regime, n, s)?;
        let ev = eigen_scalar(regime, n, s)?;
        match minus {
            Some(minus) => {
                let (z1, z2) = null_coeffs(regime, n, s)?;
                entries.push(EigenEntry {
                    eigenvalue: ev,
                    terms: vec![(p, minus.clone()), (q, label.clone())],
                    branch: Branch::PlusPlus,
                    s,
                });
                entries.push(EigenEntry {
                    eigenvalue: 0.0,
                    terms: vec![(z1, minus), (z2, label.clone())],
                    branch: Branch::MinusPlus,
                    s,
                });
            }
            None => {
                // s = 0: the block is one-dimensional and p vanishes.
                entries.push(EigenEntry {
                    eigenvalue: ev,
                    terms: vec![(q, label.clone())],
                    branch: Branch::PlusPlus,
                    s,
                });
            }
        }
    }
    Ok(EigenSystem {
        regime,
        n,
        element: Element::PiN,
        entries,
    })
}

pub fn eigensystem_pi_n_plus1(regime: Regime, n: usize) -> Result<EigenSystem> {
    check(n)?;
    if regime == Regime::Dpbt {
        return Err(Error::Unsupported("dPBT has no element N+1".into()));
    }
    let basis = SchurBasis::new(n + 1)?;
    let entries = basis
        .labels()
        .iter()
        .map(|label| {
            let (_, j, s) = tail(label);
            Ok(EigenEntry {
                eigenvalue: fail_eigenvalue(regime, n, j, s)?,
                terms: vec![(1.0, label.clone())],
                branch: Branch::Diagonal,
                s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenSystem {
        regime,
        n,
        element: Element::PiNPlus1,
        entries,
    })
}

impl EigenSystem {
    /// Expands an entry into a dense vector using the columns of `uc`.
    pub fn vector(&self, entry: &EigenEntry, uc: &Operator) -> Result<Vec<C64>> {
        let d = uc.dim();
        let mut v = vec![C64::new(0.0, 0.0); d];
        for (coef, label) in &entry.terms {
            let col = label_index(label)?;
            for (r, x) in v.iter_mut().enumerate() {
                *x += uc.get(r, col) * *coef;
            }
        }
        Ok(v)
    }

    /// Σ λ |v⟩⟨v|.
    pub fn assemble(&self, uc: &Operator) -> Result<Operator> {
        let d = uc.dim();
        let mut mat = nalgebra::DMatrix::<C64>::zeros(d, d);
        for e in &self.entries {
            if e.eigenvalue == 0.0 {
                continue;
            }
            let v = nalgebra::DVector::from_vec(self.vector(e, uc)?);
            mat += &v * v.adjoint() * c(e.eigenvalue);
        }
        Operator::from_matrix(mat)
    }
}

/// Dense element `which` (1-based) from an eigensystem. Elements i < N are
/// SWAP_{A_i A_N}-conjugates of Π_N.
pub fn reconstruct_povm(es: &EigenSystem, which: usize) -> Result<Operator> {
    let n = es.n;
    let uc = coupling_unitary(n + 1)?;
    match es.element {
        Element::PiN => {
            if which == 0 || which > n {
                return Err(Error::Domain(format!(
                    "element {which} is not built from Π_N"
                )));
            }
            let pin = es.assemble(&uc)?;
            Ok(if which == n {
                pin
            } else {
                pin.conjugate_swap(which - 1, n - 1)
            })
        }
        Element::PiNPlus1 => {
            if which != n + 1 {
                return Err(Error::Domain(format!("element {which} is not Π_(N+1)")));
            }
            es.assemble(&uc)
        }
    }
}

/// All elements of a regime's POVM rebuilt from the analytic eigensystems.
pub fn analytic_povm(regime: Regime, n: usize) -> Result<PovmSet> {
    let uc = coupling_unitary(n + 1)?;
    let pin = eigensystem_pi_n(regime, n)?.assemble(&uc)?;
    let mut elements: Vec<Operator> = (0..n - 1).map(|i| pin.conjugate_swap(i, n - 1)).collect();
    elements.push(pin);
    if regime.is_probabilistic() {
        elements.push(eigensystem_pi_n_plus1(regime, n)?.assemble(&uc)?);
    }
    Ok(PovmSet {
        regime,
        n,
        elements,
    })
}

/// Eigenvalue multiset of one spin sector.
#[derive(Debug, Clone, Serialize)]
pub struct SectorReport {
    pub regime: Regime,
    pub n: usize,
    pub element: Element,
    /// Twice s.
    pub s: i32,
    pub eigenvalues: Vec<EigenCount>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenCount {
    pub value: f64,
    pub multiplicity: usize,
}

pub fn sector_report(es: &EigenSystem) -> Vec<SectorReport> {
    let mut by_s: BTreeMap<i32, BTreeMap<i64, (f64, usize)>> = BTreeMap::new();
    for e in &es.entries {
        let key = (e.eigenvalue * 1e12).round() as i64;
        let slot = by_s
            .entry(e.s.twice())
            .or_default()
            .entry(key)
            .or_insert((e.eigenvalue, 0));
        slot.1 += 1;
    }
    by_s.into_iter()
        .rev()
        .map(|(s, vals)| SectorReport {
            regime: es.regime,
            n: es.n,
            element: es.element,
            s,
            eigenvalues: vals
                .into_values()
                .map(|(value, multiplicity)| EigenCount {
                    value,
                    multiplicity,
                })
                .collect(),
        })
        .collect()
}
