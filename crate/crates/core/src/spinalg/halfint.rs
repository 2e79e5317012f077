use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A value in ℤ/2 stored as twice the value, so spin labels stay exact and
/// hashable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(v: i32) -> Self {
        HalfInt(2 * v)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// 2j+1, the dimension of a spin-j irrep.
    pub const fn multiplicity(self) -> i32 {
        self.0 + 1
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Half-integer part check: `self - other` is an integer.
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    /// Admissible total spins for `n` spin-1/2 particles, ascending.
    pub fn spins_for(n: usize) -> Vec<HalfInt> {
        let top = n as i32;
        (top % 2..=top).step_by(2).map(HalfInt).collect()
    }

    /// Smallest admissible spin for `n` qubits (0 or 1/2 by parity).
    pub const fn min_spin(n: usize) -> HalfInt {
        HalfInt((n % 2) as i32)
    }

    /// Largest admissible spin for `n` qubits, n/2.
    pub const fn max_spin(n: usize) -> HalfInt {
        HalfInt(n as i32)
    }

    /// Prints as "3/2", "1", "-1/2".
    pub fn as_fraction(self) -> String {
        if self.is_integer() {
            format!("{}", self.0 / 2)
        } else {
            format!("{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_fraction())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_fraction())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}
