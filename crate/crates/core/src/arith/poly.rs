use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest degree accepted by [`resultant`]. Subresultant PRS costs
/// O(d^2) big-integer operations per step, O(d^3) overall.
pub const RESULTANT_DEGREE_CAP: usize = 256;

/// Dense polynomial in `Z[x]`, coefficients in ascending degree.
///
/// The canonical form has no trailing zeros; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl From<Vec<BigInt>> for IntPoly {
    fn from(coeffs: Vec<BigInt>) -> Self {
        IntPoly::new(coeffs)
    }
}

impl From<IntPoly> for Vec<BigInt> {
    fn from(p: IntPoly) -> Self {
        p.coeffs
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let mb = BigInt::from(m);
        self.coeffs.iter().rev().fold(0u64, |acc, c| {
            let c = c.mod_floor(&mb);
            let c: u64 = c.try_into().expect("residue fits");
            ((acc as u128 * x as u128 + c as u128) % m as u128) as u64
        })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn div_exact_scalar(&self, c: &BigInt) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        )
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("pseudo_rem by zero");
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut steps = da - db + 1;
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let lr = r[k].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[k - db + i] -= &lr * bc;
            }
            debug_assert!(r[k].is_zero());
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps -= 1;
        }
        let tail = lb.pow(steps as u32);
        IntPoly::new(r).scale(&tail)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}*x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Resultant `Res(f, g) = lc(f)^deg(g) · Π g(α)` over the roots α of f,
/// by the subresultant pseudo-remainder sequence.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial("resultant"));
    };
    for d in [df, dg] {
        if d > RESULTANT_DEGREE_CAP {
            return Err(Error::DegreeCap { degree: d, cap: RESULTANT_DEGREE_CAP });
        }
    }
    if dg == 0 {
        return Ok(g.lc().pow(df as u32));
    }
    if df == 0 {
        return Ok(f.lc().pow(dg as u32));
    }

    let ca = f.content();
    let cb = g.content();
    let mut a = f.div_exact_scalar(&ca);
    let mut b = g.div_exact_scalar(&cb);
    let t = ca.pow(dg as u32) * cb.pow(df as u32);
    let mut s = BigInt::one();
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            s = -s;
        }
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &gg * h.pow(delta);
        b = r.div_exact_scalar(&divisor);
        gg = a.lc();
        h = if delta == 0 {
            h
        } else {
            gg.pow(delta) / h.pow(delta - 1)
        };
        match b.degree() {
            None => return Ok(BigInt::zero()),
            Some(0) => {
                let da = a.degree().unwrap() as u32;
                let hh = b.lc().pow(da) / h.pow(da - 1);
                return Ok(s * t * hh);
            }
            Some(_) => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    /// Independent oracle: determinant of the Sylvester matrix by rational
    /// Gaussian elimination.
    fn sylvester_resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
        let m = f.degree().unwrap();
        let n = g.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        // rows hold coefficients in descending degree
        for i in 0..n {
            for (j, c) in f.coeffs().iter().rev().enumerate() {
                mat[i][i + j] = BigRational::from(c.clone());
            }
        }
        for i in 0..m {
            for (j, c) in g.coeffs().iter().rev().enumerate() {
                mat[n + i][i + j] = BigRational::from(c.clone());
            }
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let pv = mat[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let factor = &mat[r][col] / &pv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..size {
                    let sub = &factor * &mat[col][c];
                    mat[r][c] -= sub;
                }
            }
        }
        assert!(det.is_integer());
        det.to_integer()
    }

    #[test]
    fn resultant_examples() {
        let r = resultant(&IntPoly::from_i64s(&[-2, 0, 1]), &IntPoly::from_i64s(&[-4, 1])).unwrap();
        assert_eq!(r, BigInt::from(14));
        let r = resultant(&IntPoly::from_i64s(&[-1, 1]), &IntPoly::from_i64s(&[-1, 1])).unwrap();
        assert_eq!(r, BigInt::zero());
        let r = resultant(&IntPoly::from_i64s(&[1, 0, 1]), &IntPoly::from_i64s(&[-2, 0, 1])).unwrap();
        assert_eq!(r, BigInt::from(9));
    }

    #[test]
    fn zero_input_rejected() {
        assert_eq!(
            resultant(&IntPoly::zero(), &IntPoly::from_i64s(&[1, 1])),
            Err(Error::ZeroPolynomial("resultant"))
        );
    }

    #[test]
    fn degree_cap_enforced() {
        let big = IntPoly::monomial(BigInt::one(), RESULTANT_DEGREE_CAP + 1);
        assert!(matches!(
            resultant(&big, &IntPoly::from_i64s(&[1, 1])),
            Err(Error::DegreeCap { .. })
        ));
    }

    #[test]
    fn constants() {
        let f = IntPoly::from_i64s(&[1, 0, 0, 1]);
        assert_eq!(resultant(&f, &IntPoly::from_i64s(&[3])).unwrap(), BigInt::from(27));
        assert_eq!(resultant(&IntPoly::from_i64s(&[-2]), &f).unwrap(), BigInt::from(-8));
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64s(&[14, 0, -1, 1]).to_string(), "x^3 - x^2 + 14");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    fn arb_poly() -> impl Strategy<Value = IntPoly> {
        (1usize..=6)
            .prop_flat_map(|d| (prop::collection::vec(-20i64..=20, d), (1i64..=9), any::<bool>()))
            .prop_map(|(mut v, lead, neg)| {
                v.push(if neg { -lead } else { lead });
                IntPoly::from_i64s(&v)
            })
    }

    proptest! {
        #[test]
        fn matches_sylvester_determinant(f in arb_poly(), g in arb_poly()) {
            prop_assert_eq!(resultant(&f, &g).unwrap(), sylvester_resultant(&f, &g));
        }

        #[test]
        fn swap_sign_rule(f in arb_poly(), g in arb_poly()) {
            let df = f.degree().unwrap();
            let dg = g.degree().unwrap();
            let sign = if (df * dg) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(resultant(&f, &g).unwrap(), resultant(&g, &f).unwrap() * sign);
        }

        #[test]
        fn multiplicative_in_second_argument(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let gh = &g * &h;
            prop_assert_eq!(
                resultant(&f, &gh).unwrap(),
                resultant(&f, &g).unwrap() * resultant(&f, &h).unwrap()
            );
        }
    }
}
