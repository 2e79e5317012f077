//! Dense complex operators on qubit registers.
//!
//! Qubit 0 is the most significant bit of a basis index.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense square matrix on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
    qubits: usize,
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Columns are eigenvectors, in the same order as `values`.
    pub vectors: DMatrix<C64>,
}

fn qubits_for(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::RegisterMismatch(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl Operator {
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::RegisterMismatch("operator must be square".into()));
        }
        let qubits = qubits_for(mat.nrows())?;
        Ok(Operator { mat, qubits })
    }

    pub fn from_real(rows: usize, data: &[f64]) -> Result<Self> {
        let mat = DMatrix::from_row_iterator(rows, rows, data.iter().map(|&x| c(x)));
        Self::from_matrix(mat)
    }

    pub fn identity(qubits: usize) -> Self {
        let d = 1usize << qubits;
        Operator {
            mat: DMatrix::identity(d, d),
            qubits,
        }
    }

    pub fn zeros(qubits: usize) -> Self {
        let d = 1usize << qubits;
        Operator {
            mat: DMatrix::zeros(d, d),
            qubits,
        }
    }

    /// |v⟩⟨v|.
    pub fn projector(v: &[C64]) -> Result<Self> {
        let v = DVector::from_column_slice(v);
        Self::from_matrix(&v * v.adjoint())
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn get(&self, r: usize, col: usize) -> C64 {
        self.mat[(r, col)]
    }

    pub fn adjoint(&self) -> Self {
        Operator {
            mat: self.mat.adjoint(),
            qubits: self.qubits,
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        Operator {
            mat: &self.mat * c(a),
            qubits: self.qubits,
        }
    }

    pub fn add(&self, other: &Operator) -> Self {
        Operator {
            mat: &self.mat + &other.mat,
            qubits: self.qubits,
        }
    }

    pub fn sub(&self, other: &Operator) -> Self {
        Operator {
            mat: &self.mat - &other.mat,
            qubits: self.qubits,
        }
    }

    pub fn mul(&self, other: &Operator) -> Self {
        Operator {
            mat: &self.mat * &other.mat,
            qubits: self.qubits,
        }
    }

    pub fn kron(&self, other: &Operator) -> Self {
        Operator {
            mat: self.mat.kronecker(&other.mat),
            qubits: self.qubits + other.qubits,
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let v = DVector::from_column_slice(v);
        (&self.mat * v).as_slice().to_vec()
    }

    /// ⟨v|A|v⟩.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let w = self.apply(v);
        v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_dist(&self, other: &Operator) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        (&self.mat - &other.mat)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Hermitian eigendecomposition. The matrix is symmetrized first so tiny
    /// asymmetries from accumulated roundoff don't leak into the solver.
    pub fn eigh(&self) -> Eigh {
        let h = (&self.mat + self.mat.adjoint()) * c(0.5);
        let e = hermitian_eigen(h);
        let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
        let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, col| {
            e.eigenvectors[(r, order[col])]
        });
        Eigh { values, vectors }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Σ f(λ) |v⟩⟨v| over the eigendecomposition.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let e = self.eigh();
        let d = self.dim();
        let mut out = DMatrix::<C64>::zeros(d, d);
        for (k, &lam) in e.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            let v = e.vectors.column(k);
            out += v * v.adjoint() * c(w);
        }
        Operator {
            mat: out,
            qubits: self.qubits,
        }
    }

    /// Embeds `op` (acting on `positions.len()` qubits, listed most
    /// significant first) into an `n`-qubit operator.
    pub fn embed(op: &Operator, positions: &[usize], n: usize) -> Result<Self> {
        let k = positions.len();
        if op.qubits != k || positions.iter().any(|&p| p >= n) {
            return Err(Error::RegisterMismatch(format!(
                "cannot place a {}-qubit operator at {positions:?} in {n} qubits",
                op.qubits
            )));
        }
        let d = 1usize << n;
        let masks: Vec<usize> = positions.iter().map(|&p| 1usize << (n - 1 - p)).collect();
        let clear: usize = !masks.iter().fold(0, |a, m| a | m);
        let sub_of = |idx: usize| {
            masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(idx & m != 0))
        };
        let spread = |sub: usize| {
            masks.iter().enumerate().fold(0usize, |acc, (t, &m)| {
                if sub >> (k - 1 - t) & 1 == 1 {
                    acc | m
                } else {
                    acc
                }
            })
        };
        let mut mat = DMatrix::<C64>::zeros(d, d);
        for col in 0..d {
            let base = col & clear;
            let sc = sub_of(col);
            for sr in 0..(1usize << k) {
                let a = op.mat[(sr, sc)];
                if a != ZERO {
                    mat[(base | spread(sr), col)] += a;
                }
            }
        }
        Ok(Operator { mat, qubits: n })
    }

    /// SWAP_{a b} · self · SWAP_{a b}, done as an index permutation.
    pub fn conjugate_swap(&self, a: usize, b: usize) -> Self {
        let perm: Vec<usize> = (0..self.dim())
            .map(|i| swap_bits(i, a, b, self.qubits))
            .collect();
        let mat = DMatrix::from_fn(self.dim(), self.dim(), |r, col| {
            self.mat[(perm[r], perm[col])]
        });
        Operator {
            mat,
            qubits: self.qubits,
        }
    }
}

/// Exchanges qubits `a` and `b` (0 = most significant) in basis index `i`.
/// nalgebra's default deflation tolerance can stop early on highly
/// degenerate spectra (errors near 1e-6 at 32x32); a tighter one fixes it.
pub fn hermitian_eigen<T: nalgebra::ComplexField<RealField = f64>>(
    m: DMatrix<T>,
) -> SymmetricEigen<T, nalgebra::Dyn> {
    SymmetricEigen::try_new(m.clone(), 1e-17, 1_000_000).unwrap_or_else(|| SymmetricEigen::new(m))
}

pub fn swap_bits(i: usize, a: usize, b: usize, n: usize) -> usize {
    let (pa, pb) = (n - 1 - a, n - 1 - b);
    let (ba, bb) = (i >> pa & 1, i >> pb & 1);
    if ba == bb {
        i
    } else {
        i ^ (1 << pa) ^ (1 << pb)
    }
}

/// The two-qubit singlet (|01⟩ - |10⟩)/√2.
pub fn singlet() -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [ZERO, c(h), c(-h), ZERO]
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
