use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::factor::primes_up_to;
use super::field::PrimeField;
use super::numfield::NumberFieldElem;
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// Element of `Z[θ]/(f(θ))` for monic `f`, integer coordinates in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientRingElem {
    modpoly: Arc<IntPoly>,
    coords: Vec<BigInt>,
}

impl QuotientRingElem {
    /// Reduces an arbitrary polynomial in θ modulo `modpoly`.
    pub fn from_poly(modpoly: Arc<IntPoly>, p: &IntPoly) -> Result<Self> {
        let d = Self::check_modulus(&modpoly)?;
        let mut coords: Vec<BigInt> = p.coeffs().to_vec();
        reduce(&mut coords, &modpoly, d);
        Ok(QuotientRingElem { modpoly, coords })
    }

    pub fn from_i64s(modpoly: Arc<IntPoly>, coords: &[i64]) -> Result<Self> {
        Self::from_poly(modpoly, &IntPoly::from_i64s(coords))
    }

    pub fn from_integer(modpoly: Arc<IntPoly>, c: BigInt) -> Result<Self> {
        Self::from_poly(modpoly, &IntPoly::constant(c))
    }

    /// θ itself.
    pub fn generator(modpoly: Arc<IntPoly>) -> Result<Self> {
        Self::from_i64s(modpoly, &[0, 1])
    }

    fn check_modulus(modpoly: &IntPoly) -> Result<usize> {
        match modpoly.degree() {
            Some(d) if d >= 1 && modpoly.is_monic() => Ok(d),
            _ => Err(Error::Precondition(format!("modulus {modpoly} must be monic of positive degree"))),
        }
    }

    pub fn modpoly(&self) -> &Arc<IntPoly> {
        &self.modpoly
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord(&self, k: usize) -> &BigInt {
        &self.coords[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuotientRingElem::from_integer(self.modpoly.clone(), BigInt::one()).expect("checked modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_number_field(&self) -> NumberFieldElem {
        let coords = self.coords.iter().cloned().map(BigRational::from).collect();
        NumberFieldElem::new(self.modpoly.clone(), coords).expect("same basis")
    }

    /// Image under θ ↦ r in F_q.
    pub fn eval_mod(&self, r: u64, q: u64) -> u64 {
        IntPoly::new(self.coords.clone()).eval_mod(r, q)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.modpoly == other.modpoly {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let d = self.coords.len();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        reduce(&mut prod, &self.modpoly, d);
        Ok(QuotientRingElem { modpoly: self.modpoly.clone(), coords: prod })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(QuotientRingElem { modpoly: self.modpoly.clone(), coords })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QuotientRingElem { modpoly: self.modpoly.clone(), coords: self.coords.iter().map(|a| a * c).collect() }
    }
}

/// Eager reduction by `θ^d = −(f_0 + … + f_{d−1} θ^{d−1})`; leaves exactly `d` coordinates.
fn reduce(coords: &mut Vec<BigInt>, modpoly: &IntPoly, d: usize) {
    let m = modpoly.coeffs();
    for k in (d..coords.len()).rev() {
        let top = std::mem::take(&mut coords[k]);
        if top.is_zero() {
            continue;
        }
        for (i, mi) in m[..d].iter().enumerate() {
            coords[k - d + i] -= &top * mi;
        }
    }
    coords.resize(d, BigInt::zero());
}

/// Product in the quotient ring; both factors must share the modulus.
pub fn qring_mul(a: &QuotientRingElem, b: &QuotientRingElem) -> Result<QuotientRingElem> {
    a.try_mul(b)
}

impl Mul for &QuotientRingElem {
    type Output = QuotientRingElem;
    fn mul(self, rhs: &QuotientRingElem) -> QuotientRingElem {
        self.try_mul(rhs).expect("quotient ring modulus mismatch")
    }
}

impl Add for &QuotientRingElem {
    type Output = QuotientRingElem;
    fn add(self, rhs: &QuotientRingElem) -> QuotientRingElem {
        self.try_add(rhs).expect("quotient ring modulus mismatch")
    }
}

impl Sub for &QuotientRingElem {
    type Output = QuotientRingElem;
    fn sub(self, rhs: &QuotientRingElem) -> QuotientRingElem {
        self.try_add(&-rhs).expect("quotient ring modulus mismatch")
    }
}

impl Neg for &QuotientRingElem {
    type Output = QuotientRingElem;
    fn neg(self) -> QuotientRingElem {
        QuotientRingElem { modpoly: self.modpoly.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for QuotientRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = IntPoly::new(self.coords.clone()).to_string();
        write!(f, "{}", s.replace('x', "θ"))
    }
}

/// Outcome of [`square_class_test`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SquareClass {
    /// Some degree-one prime `θ ↦ root (mod q)` maps the element to a non-residue.
    NonSquare { q: u64, root: u64 },
    /// Every tested split prime saw a residue. Advisory only.
    ProbablySquare { primes_tested: usize },
}

const SPLIT_PRIME_SEARCH_LIMIT: u64 = 20_000;

/// Local square test at degree-one primes of `Z[θ]/(f)`.
///
/// Scans odd primes `q` for which `f` has a root mod `q` and checks quadratic
/// residuosity of the image of `g` at every such root. A non-residue proves
/// `g` is not a square; `probably_square` carries no proof.
pub fn square_class_test(g: &QuotientRingElem, prime_budget: usize) -> Result<SquareClass> {
    if g.is_zero() {
        return Err(Error::Precondition("square class of zero".into()));
    }
    let f = g.modpoly();
    let mut tested = 0;
    for q in primes_up_to(SPLIT_PRIME_SEARCH_LIMIT).into_iter().skip(1) {
        if tested >= prime_budget {
            break;
        }
        let field = PrimeField::new(q)?;
        let residues: Vec<u64> = f.coeffs().iter().map(|c| field.reduce_big(c)).collect();
        let roots: Vec<u64> = (0..q)
            .filter(|&r| residues.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, r), c)) == 0)
            .collect();
        if roots.is_empty() {
            continue;
        }
        let mut usable = false;
        for root in roots {
            let v = g.eval_mod(root, q);
            match field.legendre(v) {
                -1 => return Ok(SquareClass::NonSquare { q, root }),
                1 => usable = true,
                _ => {}
            }
        }
        if usable {
            tested += 1;
        }
    }
    if tested == 0 {
        return Err(Error::Inconclusive(SPLIT_PRIME_SEARCH_LIMIT));
    }
    Ok(SquareClass::ProbablySquare { primes_tested: tested })
}
