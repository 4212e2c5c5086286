use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sparse polynomial over Q in a fixed number of variables.
///
/// Only what the identity checks need: ring operations, substitution of a
/// variable by a polynomial, and reduction of a power `v^k` by a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        MPoly::constant(nvars, BigRational::from(BigInt::from(c)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.push(e.clone(), v * c);
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from(BigInt::from(c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::int(self.nvars, 1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn push(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Replaces variable `i` by `value` everywhere.
    pub fn substitute(&self, i: usize, value: &MPoly) -> Self {
        let mut out = MPoly::zero(self.nvars);
        let mut powers: Vec<MPoly> = vec![MPoly::int(self.nvars, 1)];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let mut mono = MPoly::zero(self.nvars);
            mono.terms.insert(rest, c.clone());
            out = &out + &(&mono * &powers[k]);
        }
        out
    }

    /// Rewrites every occurrence of `v_i^k` using `v_i^k = relation` until the
    /// degree in `v_i` is below `k`. `relation` must not involve `v_i^k` itself.
    pub fn reduce_power(&self, i: usize, k: u32, relation: &MPoly) -> Self {
        let mut current = self.clone();
        loop {
            let mut low = MPoly::zero(self.nvars);
            let mut high = MPoly::zero(self.nvars);
            for (e, c) in &current.terms {
                if e[i] >= k {
                    let mut lowered = e.clone();
                    lowered[i] -= k;
                    high.push(lowered, c.clone());
                } else {
                    low.push(e.clone(), c.clone());
                }
            }
            if high.is_zero() {
                return low;
            }
            current = &low + &(&high * relation);
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(point)
                .fold(BigRational::one(), |m, (&k, x)| m * num_traits::pow(x.clone(), k as usize));
            acc + c * mono
        })
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.push(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.push(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        const NAMES: [&str; 6] = ["a", "b", "d", "s", "t", "u"];
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = NAMES.get(i).copied().unwrap_or("v");
                    if k == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
