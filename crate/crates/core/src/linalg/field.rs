use std::fmt;

use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Largest supported modulus.
pub const MAX_MODULUS: u32 = 1 << 13;

/// The prime field GF(p). Elements are plain `u32` residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if !(2..=MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(LinalgError::InvalidModulus(p));
        }
        Ok(Self { p })
    }

    /// GF(2), which every worked example in this crate lives in.
    pub const fn binary() -> Self {
        Self { p: 2 }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Number of elements, as a `u64` for counting spaces.
    pub fn order(&self) -> u64 {
        u64::from(self.p)
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.p
    }

    /// Reduces an arbitrary signed integer to its residue.
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.p)) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // a^(p-2) by square-and-multiply
        let mut base = a % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Some(acc)
    }

    pub fn dot(&self, x: &[u32], y: &[u32]) -> u32 {
        debug_assert_eq!(x.len(), y.len());
        x.iter()
            .zip(y)
            .fold(0u64, |acc, (&a, &b)| (acc + u64::from(a) * u64::from(b)) % u64::from(self.p))
            as u32
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = LinalgError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
