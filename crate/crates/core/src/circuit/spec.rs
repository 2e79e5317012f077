//! Unitaries given by their action on a handful of basis states.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{C64, ONE, ZERO};

const ORTHO_TOL: f64 = 1e-12;

/// A unitary on a register whose basis states are keyed by `K`, written as
/// input key → output superposition. Keys that never appear as inputs are
/// left alone. The spec must be closed (outputs stay inside the input set)
/// and its columns orthonormal.
#[derive(Debug, Clone)]
pub struct SubspaceSpec<K: Ord + Clone> {
    columns: Vec<(K, Vec<(K, C64)>)>,
}

impl<K: Ord + Clone + std::fmt::Debug> SubspaceSpec<K> {
    pub fn new(columns: Vec<(K, Vec<(K, C64)>)>) -> Result<Self> {
        let spec = SubspaceSpec { columns };
        spec.validate()?;
        Ok(spec)
    }

    pub fn empty() -> Self {
        SubspaceSpec {
            columns: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[(K, Vec<(K, C64)>)] {
        &self.columns
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    fn validate(&self) -> Result<()> {
        let inputs: BTreeSet<&K> = self.columns.iter().map(|(k, _)| k).collect();
        if inputs.len() != self.columns.len() {
            return Err(Error::InvalidSpec("repeated input key".into()));
        }
        let mut outs: Vec<BTreeMap<&K, C64>> = Vec::with_capacity(self.columns.len());
        for (k, col) in &self.columns {
            let mut m = BTreeMap::new();
            for (o, a) in col {
                if !inputs.contains(o) {
                    return Err(Error::InvalidSpec(format!(
                        "column {k:?} leaks into {o:?}, which is not an input"
                    )));
                }
                *m.entry(o).or_insert(ZERO) += a;
            }
            outs.push(m);
        }
        for (a, ca) in outs.iter().enumerate() {
            for (b, cb) in outs.iter().enumerate().skip(a) {
                let dot: C64 = ca
                    .iter()
                    .filter_map(|(k, x)| cb.get(k).map(|y| x.conj() * y))
                    .sum();
                let want = if a == b { ONE } else { ZERO };
                if (dot - want).norm() > ORTHO_TOL {
                    return Err(Error::InvalidSpec(format!(
                        "columns {:?} and {:?} are not orthonormal (overlap {dot})",
                        self.columns[a].0, self.columns[b].0
                    )));
                }
            }
        }
        Ok(())
    }

    /// Two-level rotations needed: a connected block of d basis states
    /// costs d(d-1)/2, a lone phase costs 1, an identity column nothing.
    pub fn two_level_count(&self) -> usize {
        let keys: Vec<&K> = self.columns.iter().map(|(k, _)| k).collect();
        let pos: BTreeMap<&K, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut parent: Vec<usize> = (0..keys.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut trivial = vec![true; keys.len()];
        for (i, (k, col)) in self.columns.iter().enumerate() {
            for (o, a) in col {
                if a.norm() == 0.0 {
                    continue;
                }
                if o != k || (a - ONE).norm() > ORTHO_TOL {
                    trivial[i] = false;
                }
                let j = pos[o];
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
        let mut blocks: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
        for (i, &triv) in trivial.iter().enumerate() {
            let r = find(&mut parent, i);
            let e = blocks.entry(r).or_insert((0, true));
            e.0 += 1;
            e.1 &= triv;
        }
        blocks
            .values()
            .filter(|(_, triv)| !triv)
            .map(|&(d, _)| if d == 1 { 1 } else { d * (d - 1) / 2 })
            .sum()
    }

    /// Lifts the spec to a full space of dimension `dim`. `decompose` splits
    /// a basis index into (key, context) or returns None where the spec
    /// does not act; `compose` rebuilds an index.
    pub fn lift<C>(
        &self,
        dim: usize,
        decompose: impl Fn(usize) -> Option<(K, C)>,
        compose: impl Fn(&K, &C) -> usize,
    ) -> SparseOp {
        let table: BTreeMap<&K, &Vec<(K, C64)>> =
            self.columns.iter().map(|(k, c)| (k, c)).collect();
        let mut cols = vec![None; dim];
        for (idx, slot) in cols.iter_mut().enumerate() {
            let Some((k, ctx)) = decompose(idx) else {
                continue;
            };
            let Some(col) = table.get(&k) else { continue };
            let entries: Vec<(usize, C64)> = col
                .iter()
                .filter(|(_, a)| a.norm() != 0.0)
                .map(|(o, a)| (compose(o, &ctx), *a))
                .collect();
            if entries.len() == 1 && entries[0].0 == idx && (entries[0].1 - ONE).norm() == 0.0 {
                continue;
            }
            *slot = Some(entries);
        }
        SparseOp { cols }
    }
}

/// Column-sparse operator: `None` columns are identity.
#[derive(Debug, Clone)]
pub struct SparseOp {
    cols: Vec<Option<Vec<(usize, C64)>>>,
}

impl SparseOp {
    pub fn identity(dim: usize) -> Self {
        SparseOp {
            cols: vec![None; dim],
        }
    }

    /// Builds from explicit columns; `None` columns are identity.
    pub fn from_columns(cols: Vec<Option<Vec<(usize, C64)>>>) -> Self {
        SparseOp { cols }
    }

    /// Wraps a dense matrix, dropping identity columns.
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let cols = (0..m.ncols())
            .map(|c| {
                let entries: Vec<(usize, C64)> = (0..m.nrows())
                    .filter(|&r| m[(r, c)] != ZERO)
                    .map(|r| (r, m[(r, c)]))
                    .collect();
                if entries.len() == 1 && entries[0] == (c, ONE) {
                    None
                } else {
                    Some(entries)
                }
            })
            .collect();
        SparseOp { cols }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        self.apply_into(v, &mut out);
        out
    }

    fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        for (c, col) in self.cols.iter().enumerate() {
            let x = v[c];
            if x == ZERO {
                continue;
            }
            match col {
                None => out[c] += x,
                Some(entries) => {
                    for &(r, a) in entries {
                        out[r] += a * x;
                    }
                }
            }
        }
    }

    /// Applies to every consecutive block of `dim()` amplitudes.
    pub fn apply_blocks(&self, v: &[C64]) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![ZERO; v.len()];
        for (src, dst) in v.chunks(d).zip(out.chunks_mut(d)) {
            self.apply_into(src, dst);
        }
        out
    }

    pub fn adjoint(&self) -> SparseOp {
        let mut cols: Vec<Option<Vec<(usize, C64)>>> = vec![None; self.dim()];
        for (c, col) in self.cols.iter().enumerate() {
            if let Some(entries) = col {
                for &(r, a) in entries {
                    cols[r].get_or_insert_with(Vec::new).push((c, a.conj()));
                }
            }
        }
        SparseOp { cols }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (c, col) in self.cols.iter().enumerate() {
            match col {
                None => m[(c, c)] = ONE,
                Some(entries) => {
                    for &(r, a) in entries {
                        m[(r, c)] += a;
                    }
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::c;

    #[test]
    fn empty_spec_is_identity() {
        let s: SubspaceSpec<usize> = SubspaceSpec::empty();
        let op = s.lift(4, |i| Some((i, ())), |k, _| *k);
        assert_eq!(op.to_dense(), DMatrix::identity(4, 4));
        assert_eq!(s.two_level_count(), 0);
    }

    #[test]
    fn givens_rotation() {
        let (co, si) = (0.6, 0.8);
        let s = SubspaceSpec::new(vec![
            (0usize, vec![(0, c(co)), (1, c(si))]),
            (1usize, vec![(0, c(-si)), (1, c(co))]),
        ])
        .unwrap();
        let m = s.lift(2, |i| Some((i, ())), |k, _| *k).to_dense();
        assert_eq!(m[(0, 0)], c(co));
        assert_eq!(m[(1, 0)], c(si));
        assert_eq!(m[(0, 1)], c(-si));
        assert_eq!(s.two_level_count(), 1);
    }

    #[test]
    fn rejects_bad_specs() {
        let leak = SubspaceSpec::new(vec![(0usize, vec![(1, ONE)])]);
        assert!(matches!(leak, Err(Error::InvalidSpec(_))));
        let skew = SubspaceSpec::new(vec![
            (0usize, vec![(0, ONE)]),
            (1usize, vec![(0, c(0.6)), (1, c(0.8))]),
        ]);
        assert!(matches!(skew, Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn lift_acts_per_context_and_adjoint_inverts() {
        // X on the low bit of a 3-bit index, only when the high bit is set.
        let s = SubspaceSpec::new(vec![(0u8, vec![(1, ONE)]), (1u8, vec![(0, ONE)])]).unwrap();
        let op = s.lift(
            8,
            |i| {
                if i & 4 != 0 {
                    Some(((i & 1) as u8, i & !1))
                } else {
                    None
                }
            },
            |k, ctx| ctx | *k as usize,
        );
        let m = op.to_dense();
        assert_eq!(m[(5, 4)], ONE);
        assert_eq!(m[(1, 1)], ONE);
        let v: Vec<C64> = (0..8).map(|i| C64::new(i as f64, 1.0)).collect();
        let back = op.adjoint().apply(&op.apply(&v));
        assert_eq!(back, v);
    }
}
