//! Schur basis on n qubits via sequential spin-1/2 coupling.
//!
//! A label is the full coupling chain: `spins[t]` is the total spin of the
//! first t+1 qubits, so `spins[0] = 1/2` and `spins[n-1]` is the total spin
//! s. In the protocol notation (k₁..k_{n-3}, j, s, m) the k's are
//! `spins[1..n-2]` and j is `spins[n-2]`.
//!
//! Canonical order: s descending, then the intermediate chain
//! `spins[1..n-1]` ascending lexicographically, then m descending. Ranking
//! is done by counting lattice paths, so [`label_index`] never enumerates.

use std::cmp::Ordering;
use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{self, COUPLING_MAX_QUBITS, LABEL_MAX_QUBITS};
use crate::operator::{Operator, C64, ONE, ZERO};
use crate::spinalg::{cg, HalfInt};

const HALF: HalfInt = HalfInt::HALF;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SchurLabel {
    spins: Vec<HalfInt>,
    m: HalfInt,
}

impl std::fmt::Debug for SchurLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|")?;
        for s in &self.spins[1..] {
            write!(f, "{s},")?;
        }
        write!(f, "m={}⟩", self.m)
    }
}

impl SchurLabel {
    pub fn new(spins: Vec<HalfInt>, m: HalfInt) -> Result<Self> {
        if spins.first() != Some(&HALF) {
            return Err(Error::InvalidLabel("chain must start at 1/2".into()));
        }
        for w in spins.windows(2) {
            let d = (w[1] - w[0]).twice();
            if d.abs() != 1 || w[1] < HalfInt::ZERO {
                return Err(Error::InvalidLabel(format!(
                    "bad coupling step {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
        }
        let s = *spins.last().unwrap_or(&HalfInt::ZERO);
        if m.abs() > s || !m.same_parity(s) {
            return Err(Error::InvalidLabel(format!(
                "m = {m} incompatible with s = {s}"
            )));
        }
        Ok(SchurLabel { spins, m })
    }

    pub fn n(&self) -> usize {
        self.spins.len()
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    pub fn total(&self) -> HalfInt {
        self.spins[self.spins.len() - 1]
    }

    /// Spin of the first q qubits; zero for q = 0.
    pub fn prefix_spin(&self, q: usize) -> HalfInt {
        if q == 0 {
            HalfInt::ZERO
        } else {
            self.spins[q - 1]
        }
    }

    /// Spin of the first n-1 qubits.
    pub fn penultimate(&self) -> HalfInt {
        self.prefix_spin(self.n() - 1)
    }

    /// k₁..k_{n-3}.
    pub fn ks(&self) -> &[HalfInt] {
        if self.n() >= 3 {
            &self.spins[1..self.n() - 2]
        } else {
            &[]
        }
    }

    /// Same label with the last `k` spins and m replaced.
    pub fn with_tail(&self, tail: &[HalfInt], m: HalfInt) -> Result<Self> {
        let keep = self.n() - tail.len();
        let mut spins = self.spins[..keep].to_vec();
        spins.extend_from_slice(tail);
        Self::new(spins, m)
    }

    pub fn record(&self, index: usize) -> LabelRecord {
        LabelRecord {
            ks: self.ks().iter().map(|k| k.twice()).collect(),
            j: self.penultimate().twice(),
            s: self.total().twice(),
            m: self.m.twice(),
            index,
        }
    }

    fn chain(&self) -> &[HalfInt] {
        &self.spins[1..]
    }
}

impl PartialOrd for SchurLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The canonical order.
impl Ord for SchurLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .total()
            .cmp(&self.total())
            .then_with(|| self.chain().cmp(other.chain()))
            .then_with(|| other.m.cmp(&self.m))
    }
}

/// JSON/CSV row for a label; spins are twice-values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub ks: Vec<i32>,
    pub j: i32,
    pub s: i32,
    pub m: i32,
    pub index: usize,
}

/// Register layout of a composite state, most significant first:
/// spectators, system qubits, port register, block-encode qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub spectator_qubits: usize,
    pub system_qubits: usize,
    pub port_dim: usize,
    pub block_qubits: usize,
}

impl Layout {
    pub fn system(qubits: usize) -> Self {
        Layout {
            spectator_qubits: 0,
            system_qubits: qubits,
            port_dim: 1,
            block_qubits: 0,
        }
    }

    pub fn inner_dim(&self) -> usize {
        (1usize << self.system_qubits) * self.port_dim * (1usize << self.block_qubits)
    }

    pub fn dim(&self) -> usize {
        (1usize << self.spectator_qubits) * self.inner_dim()
    }

    pub fn index(&self, spectator: usize, sys: usize, port: usize, r: usize) -> usize {
        let inner = (sys * self.port_dim + port) * (1usize << self.block_qubits) + r;
        spectator * self.inner_dim() + inner
    }

    /// (spectator, system, port, r) of a basis index.
    pub fn split(&self, idx: usize) -> (usize, usize, usize, usize) {
        let rdim = 1usize << self.block_qubits;
        let (outer, inner) = (idx / self.inner_dim(), idx % self.inner_dim());
        let r = inner % rdim;
        let rest = inner / rdim;
        (outer, rest / self.port_dim, rest % self.port_dim, r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<C64>,
    pub layout: Layout,
    /// False for post-measurement branches that were not renormalized.
    pub normalized: bool,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, layout: Layout) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::RegisterMismatch(format!(
                "{} amplitudes for a layout of dimension {}",
                amplitudes.len(),
                layout.dim()
            )));
        }
        Ok(StateVector {
            amplitudes,
            layout,
            normalized: true,
        })
    }

    pub fn norm(&self) -> f64 {
        crate::operator::norm(&self.amplitudes)
    }
}

/// Number of coupling walks from spin `a` on `q` qubits to spin `s` on `n`
/// qubits.
fn paths(q: usize, a: HalfInt, n: usize, s: HalfInt) -> u64 {
    if q > n {
        return 0;
    }
    let steps = n - q;
    let width = (a.twice() as usize) + steps + 2;
    let mut cur = vec![0u64; width];
    cur[a.twice() as usize] = 1;
    for _ in 0..steps {
        let mut next = vec![0u64; width];
        for (t, &cnt) in cur.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            if t + 1 < width {
                next[t + 1] += cnt;
            }
            if t >= 1 {
                next[t - 1] += cnt;
            }
        }
        cur = next;
    }
    let ts = s.twice();
    if ts < 0 || ts as usize >= width {
        0
    } else {
        cur[ts as usize]
    }
}

/// Number of labels with total spin s on n qubits, counting m.
fn block_size(n: usize, s: HalfInt) -> u64 {
    paths(1, HALF, n, s) * s.multiplicity() as u64
}

fn check_n(n: usize) -> Result<()> {
    limits::check_qubits("qubits", n, LABEL_MAX_QUBITS)
}

/// All 2ⁿ labels in canonical order.
pub fn enumerate_labels(n: usize) -> Result<Vec<SchurLabel>> {
    check_n(n)?;
    let mut chains: Vec<Vec<HalfInt>> = Vec::new();
    let mut stack = vec![vec![HALF]];
    while let Some(ch) = stack.pop() {
        if ch.len() == n {
            chains.push(ch);
            continue;
        }
        let last = *ch.last().unwrap();
        for next in [last + HALF, last - HALF] {
            if next >= HalfInt::ZERO {
                let mut c2 = ch.clone();
                c2.push(next);
                stack.push(c2);
            }
        }
    }
    let mut out = Vec::with_capacity(1 << n);
    for ch in chains {
        let s = *ch.last().unwrap();
        for tm in (-s.twice()..=s.twice()).step_by(2) {
            out.push(SchurLabel {
                spins: ch.clone(),
                m: HalfInt::from_twice(tm),
            });
        }
    }
    out.sort();
    Ok(out)
}

/// Position of `label` in the canonical order.
pub fn label_index(label: &SchurLabel) -> Result<usize> {
    let n = label.n();
    check_n(n)?;
    let s = label.total();
    let mut idx: u64 = 0;
    let mut top = HalfInt::max_spin(n);
    while top > s {
        idx += block_size(n, top);
        top = top - HalfInt::ONE;
    }
    let mut rank: u64 = 0;
    let sp = &label.spins;
    for t in 1..n.saturating_sub(1) {
        let lower = sp[t - 1] - HALF;
        if sp[t] == sp[t - 1] + HALF && lower >= HalfInt::ZERO {
            rank += paths(t + 1, lower, n, s);
        }
    }
    idx += rank * s.multiplicity() as u64 + ((s - label.m).twice() / 2) as u64;
    Ok(idx as usize)
}

/// Inverse of [`label_index`].
pub fn index_label(i: usize, n: usize) -> Result<SchurLabel> {
    check_n(n)?;
    if i >= 1usize << n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut rem = i as u64;
    let mut s = HalfInt::max_spin(n);
    loop {
        let b = block_size(n, s);
        if rem < b {
            break;
        }
        rem -= b;
        s = s - HalfInt::ONE;
    }
    let mult = s.multiplicity() as u64;
    let mut rank = rem / mult;
    let m = s - HalfInt::from_twice(2 * (rem % mult) as i32);
    let mut spins = vec![HALF];
    for t in 1..n {
        let prev = spins[t - 1];
        if t == n - 1 {
            spins.push(s);
            break;
        }
        let lower = prev - HALF;
        let cnt = if lower >= HalfInt::ZERO {
            paths(t + 1, lower, n, s)
        } else {
            0
        };
        if rank < cnt {
            spins.push(lower);
        } else {
            rank -= cnt;
            spins.push(prev + HALF);
        }
    }
    SchurLabel::new(spins, m)
}

/// Amplitudes of all chain prefixes' m-states for one chain, keyed by twice m.
fn chain_states(spins: &[HalfInt]) -> HashMap<i32, Vec<C64>> {
    let mut cur: HashMap<i32, Vec<C64>> = HashMap::new();
    cur.insert(1, vec![ONE, ZERO]);
    cur.insert(-1, vec![ZERO, ONE]);
    for t in 1..spins.len() {
        cur = couple_step(&cur, spins[t - 1], spins[t]);
    }
    cur
}

/// Couples one more qubit (appended as the least significant bit).
fn couple_step(prev: &HashMap<i32, Vec<C64>>, j: HalfInt, jj: HalfInt) -> HashMap<i32, Vec<C64>> {
    let dim = prev.values().next().map_or(1, Vec::len) * 2;
    let mut out = HashMap::new();
    for tm in (-jj.twice()..=jj.twice()).step_by(2) {
        let mm = HalfInt::from_twice(tm);
        let mut v = vec![ZERO; dim];
        for (bit, x) in [(0usize, HALF), (1usize, -HALF)] {
            let m1 = mm - x;
            let Some(src) = prev.get(&m1.twice()) else {
                continue;
            };
            let w = cg(j, m1, HALF, x, jj, mm).unwrap_or(0.0);
            if w == 0.0 {
                continue;
            }
            for (k, a) in src.iter().enumerate() {
                if *a != ZERO {
                    v[2 * k + bit] += a * w;
                }
            }
        }
        out.insert(tm, v);
    }
    out
}

/// The Schur basis state for `label`, a product of CG coefficients summed
/// over computational states with the right Z-spin.
pub fn schur_vector(label: &SchurLabel) -> Result<StateVector> {
    check_n(label.n())?;
    let states = chain_states(&label.spins);
    let amps = states
        .get(&label.m.twice())
        .cloned()
        .ok_or_else(|| Error::InvalidLabel(format!("{label:?}")))?;
    StateVector::new(amps, Layout::system(label.n()))
}

/// Dense unitary whose column `label_index(L)` is `schur_vector(L)`.
pub fn coupling_unitary(n: usize) -> Result<Operator> {
    limits::check_qubits("qubits", n, COUPLING_MAX_QUBITS)?;
    let d = 1usize << n;
    let mut mat = DMatrix::<C64>::zeros(d, d);
    // Depth-first over chain prefixes so shared prefixes are coupled once.
    type Partial = (Vec<HalfInt>, HashMap<i32, Vec<C64>>);
    let mut stack: Vec<Partial> = vec![(vec![HALF], chain_states(&[HALF]))];
    while let Some((ch, states)) = stack.pop() {
        if ch.len() == n {
            for (&tm, v) in &states {
                let label = SchurLabel {
                    spins: ch.clone(),
                    m: HalfInt::from_twice(tm),
                };
                let col = label_index(&label)?;
                for (r, a) in v.iter().enumerate() {
                    mat[(r, col)] = *a;
                }
            }
            continue;
        }
        let last = *ch.last().unwrap();
        for next in [last - HALF, last + HALF] {
            if next >= HalfInt::ZERO {
                let mut c2 = ch.clone();
                c2.push(next);
                let st = couple_step(&states, last, next);
                stack.push((c2, st));
            }
        }
    }
    Operator::from_matrix(mat)
}

/// Projector onto total spin s of n qubits. For n = 0 this is the 1×1
/// identity at s = 0.
pub fn spin_projector(n: usize, s: HalfInt) -> Result<Operator> {
    if n == 0 {
        return Ok(if s == HalfInt::ZERO {
            Operator::identity(0)
        } else {
            Operator::zeros(0)
        });
    }
    let u = coupling_unitary(n)?;
    spin_projector_from(&u, n, s)
}

/// As [`spin_projector`] but reusing an already built coupling unitary.
pub fn spin_projector_from(u: &Operator, n: usize, s: HalfInt) -> Result<Operator> {
    let d = 1usize << n;
    let mut mat = DMatrix::<C64>::zeros(d, d);
    for col in 0..d {
        let label = index_label(col, n)?;
        if label.total() != s {
            continue;
        }
        let v = u.matrix().column(col);
        mat += v * v.adjoint();
    }
    Operator::from_matrix(mat)
}

/// Labels indexed both ways for repeated lookups.
#[derive(Debug, Clone)]
pub struct SchurBasis {
    n: usize,
    labels: Vec<SchurLabel>,
}

impl SchurBasis {
    pub fn new(n: usize) -> Result<Self> {
        Ok(SchurBasis {
            n,
            labels: enumerate_labels(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[SchurLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &SchurLabel {
        &self.labels[i]
    }

    pub fn index(&self, label: &SchurLabel) -> usize {
        // Canonical order is the sort order, so binary search is exact.
        self.labels
            .binary_search(label)
            .expect("label belongs to this basis")
    }
}

/// Real amplitude helper for tests and tables.
pub fn real_amplitudes(v: &StateVector) -> Vec<f64> {
    v.amplitudes.iter().map(|z| z.re).collect()
}
