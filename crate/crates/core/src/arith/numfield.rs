use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{resultant, IntPoly};
use crate::error::{Error, Result};

/// Element of `K = Q[x]/(m)` in the power basis `1, x, …, x^(deg m − 1)`.
///
/// `m` is taken to be monic and irreducible; irreducibility is not re-checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberFieldElem {
    minpoly: Arc<IntPoly>,
    coords: Vec<BigRational>,
}

impl NumberFieldElem {
    pub fn new(minpoly: Arc<IntPoly>, coords: Vec<BigRational>) -> Result<Self> {
        let deg = minpoly.degree().ok_or(Error::ZeroPolynomial("number field"))?;
        if !minpoly.is_monic() || deg == 0 {
            return Err(Error::Precondition(format!("minimal polynomial {minpoly} is not monic of positive degree")));
        }
        if coords.len() != deg {
            return Err(Error::Precondition(format!(
                "{} coordinates for a degree {deg} field",
                coords.len()
            )));
        }
        Ok(NumberFieldElem { minpoly, coords })
    }

    pub fn from_integers(minpoly: Arc<IntPoly>, coords: &[i64]) -> Result<Self> {
        let c = coords.iter().map(|&v| BigRational::from(BigInt::from(v))).collect();
        NumberFieldElem::new(minpoly, c)
    }

    pub fn rational(minpoly: Arc<IntPoly>, c: BigRational) -> Result<Self> {
        let deg = minpoly.degree().unwrap_or(0);
        let mut coords = vec![BigRational::zero(); deg.max(1)];
        coords[0] = c;
        NumberFieldElem::new(minpoly, coords)
    }

    pub fn minpoly(&self) -> &Arc<IntPoly> {
        &self.minpoly
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// `self + c` for a rational constant.
    pub fn add_rational(&self, c: &BigRational) -> Self {
        let mut coords = self.coords.clone();
        coords[0] += c;
        NumberFieldElem { minpoly: self.minpoly.clone(), coords }
    }

    /// Common denominator `D` and integer polynomial `D·self`.
    pub fn integral_numerator(&self) -> (BigInt, IntPoly) {
        let den = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .coords
            .iter()
            .map(|c| (c * BigRational::from(den.clone())).to_integer())
            .collect();
        (den, IntPoly::new(num))
    }

    fn check_same(&self, other: &Self) {
        assert!(self.minpoly == other.minpoly, "number field mismatch");
    }

    /// Characteristic polynomial of multiplication by `self`, i.e. `Norm(X − self)`.
    pub fn charpoly(&self) -> Result<CharPoly> {
        CharPoly::of(self)
    }
}

impl Add for &NumberFieldElem {
    type Output = NumberFieldElem;
    fn add(self, rhs: &NumberFieldElem) -> NumberFieldElem {
        self.check_same(rhs);
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect();
        NumberFieldElem { minpoly: self.minpoly.clone(), coords }
    }
}

impl Sub for &NumberFieldElem {
    type Output = NumberFieldElem;
    fn sub(self, rhs: &NumberFieldElem) -> NumberFieldElem {
        self.check_same(rhs);
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect();
        NumberFieldElem { minpoly: self.minpoly.clone(), coords }
    }
}

impl Mul for &NumberFieldElem {
    type Output = NumberFieldElem;
    fn mul(self, rhs: &NumberFieldElem) -> NumberFieldElem {
        self.check_same(rhs);
        let d = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        // x^d = −(m_0 + … + m_{d−1} x^{d−1})
        let m = self.minpoly.coeffs();
        for k in (d..prod.len()).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            for (i, mi) in m[..d].iter().enumerate() {
                prod[k - d + i] -= &top * BigRational::from(mi.clone());
            }
        }
        prod.truncate(d);
        NumberFieldElem { minpoly: self.minpoly.clone(), coords: prod }
    }
}

/// `Norm_{K/Q}(e) = Res(m, D·e) / D^deg(m)` for monic `m`.
///
/// With this normalization `Norm(c) = c^deg` for rational `c`, and the value
/// is the product of the conjugates of `e`.
pub fn nf_norm(e: &NumberFieldElem) -> Result<BigRational> {
    if e.is_zero() {
        return Ok(BigRational::zero());
    }
    let deg = e.degree() as u32;
    let (den, num) = e.integral_numerator();
    let res = resultant(&e.minpoly, &num)?;
    Ok(BigRational::new(res, den.pow(deg)))
}

/// `Norm(X − e)` as a polynomial in `X`, recovered by interpolating norms at
/// `X = 0, …, deg`. Evaluating it at an integer `c` gives `Norm(c − e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigRational>,
}

impl CharPoly {
    fn of(e: &NumberFieldElem) -> Result<Self> {
        let d = e.degree();
        let xs: Vec<BigRational> = (0..=d).map(|k| BigRational::from(BigInt::from(k))).collect();
        let mut ys = Vec::with_capacity(d + 1);
        let neg = NumberFieldElem {
            minpoly: e.minpoly.clone(),
            coords: e.coords.iter().map(|c| -c).collect(),
        };
        for x in &xs {
            ys.push(nf_norm(&neg.add_rational(x))?);
        }
        // Newton divided differences, then expand to monomial basis.
        let mut dd = ys.clone();
        for level in 1..=d {
            for i in (level..=d).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for i in (0..=d).rev() {
            // coeffs = coeffs * (X − xs[i]) + dd[i]
            let mut next = vec![BigRational::zero(); d + 1];
            for k in 0..d {
                next[k + 1] += &coeffs[k];
            }
            for k in 0..=d {
                next[k] -= &coeffs[k] * &xs[i];
            }
            next[0] += &dd[i];
            coeffs = next;
        }
        debug_assert!(coeffs[d].is_one());
        Ok(CharPoly { coeffs })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigRational {
        let x = BigRational::from(x.clone());
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// `Norm(c − e)` for integer `c`.
    pub fn norm_at(&self, c: i64) -> BigRational {
        self.eval(&BigInt::from(c))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}
