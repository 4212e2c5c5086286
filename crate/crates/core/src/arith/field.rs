use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::factor::is_prime_u64;
use crate::error::{Error, Result};

/// The prime field F_p. Residues are plain `u64` values in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Moduli are limited to 32 bits so products fit a `u64` before reduction.
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::Precondition(format!("modulus {p} exceeds 32 bits")));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_big(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits")
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// `b^e` for a signed exponent; negative exponents go through the inverse.
    pub fn pow_signed(&self, b: u64, e: i64) -> Option<u64> {
        if e >= 0 {
            Some(self.pow(b, e as u64))
        } else {
            self.inv(b).map(|ib| self.pow(ib, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// Legendre symbol as -1, 0 or 1.
    pub fn legendre(&self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Centered representative in `(-p/2, p/2]`.
    pub fn centered(&self, a: u64) -> i64 {
        let a = a % self.p;
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    fn non_residue(&self) -> u64 {
        (2..self.p).find(|&z| self.legendre(z) == -1).expect("odd prime has a non-residue")
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Square roots of `x` in F_p by Tonelli–Shanks.
///
/// Returns `None` for a non-residue, `Some(vec![0])` for zero, and otherwise
/// the two roots `{r, p - r}` in increasing order.
pub fn mod_sqrt(x: u64, field: &PrimeField) -> Option<Vec<u64>> {
    let p = field.p();
    if x >= p {
        return mod_sqrt(x % p, field);
    }
    if x == 0 {
        return Some(vec![0]);
    }
    if p == 2 {
        return Some(vec![x]);
    }
    if field.legendre(x) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = field.non_residue();
    let mut m = s;
    let mut c = field.pow(z, q);
    let mut t = field.pow(x, q);
    let mut r = field.pow(x, q.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = field.mul(tt, tt);
            i += 1;
        }
        let b = field.pow(c, 1 << (m - i - 1));
        m = i;
        c = field.mul(b, b);
        t = field.mul(t, c);
        r = field.mul(r, b);
    }
    debug_assert_eq!(field.mul(r, r), x);
    let other = p - r;
    Some(if r < other { vec![r, other] } else { vec![other, r] })
}

/// The nonzero n-th powers of F_p, i.e. the t-th roots of unity for p = nt + 1.
pub fn nth_power_residues(n: u64, field: &PrimeField) -> Result<BTreeSet<u64>> {
    let p = field.p();
    if n == 0 || !(p - 1).is_multiple_of(n) {
        return Err(Error::Precondition(format!("{p} is not 1 mod {n}")));
    }
    let t = (p - 1) / n;
    let set: BTreeSet<u64> = (1..p).map(|x| field.pow(x, n)).collect();
    debug_assert!(set.iter().all(|&x| field.pow(x, t) == 1));
    debug_assert_eq!(set.len() as u64, t);
    Ok(set)
}
