//! The four Frey–Hellegouarch models `E_κ` and their reductions at Kraus primes.
//!
//! For `κ = gcd(x, 10)` and `T = d² + x²`, a solution gives
//! `7κ^(4n−5)·a^(4n) + b^n = (10/κ)·T²`. Reducing at `p = nt + 1` and writing
//! `(A, B) = (a^n, b^n) mod p`, both `A` and `B` lie in the t-element group of
//! n-th powers, so only finitely many curves over F_p can occur.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{mod_sqrt, nth_power_residues, PrimeField};
use crate::ec_fp::{ap_trace, EllipticCurveFp};
use crate::error::{Error, Result};

/// `κ = gcd(x, 10)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub enum Kappa {
    One,
    Two,
    Five,
    Ten,
}

impl Kappa {
    pub const ALL: [Kappa; 4] = [Kappa::One, Kappa::Two, Kappa::Five, Kappa::Ten];

    pub fn value(self) -> u64 {
        match self {
            Kappa::One => 1,
            Kappa::Two => 2,
            Kappa::Five => 5,
            Kappa::Ten => 10,
        }
    }

    /// The model whose level is `level`, if any.
    pub fn for_level(level: u64) -> Option<Kappa> {
        Kappa::ALL.into_iter().find(|k| frey_level(*k) == level)
    }
}

impl TryFrom<u64> for Kappa {
    type Error = Error;
    fn try_from(v: u64) -> Result<Self> {
        match v {
            1 => Ok(Kappa::One),
            2 => Ok(Kappa::Two),
            5 => Ok(Kappa::Five),
            10 => Ok(Kappa::Ten),
            other => Err(Error::BadKappa(other)),
        }
    }
}

impl From<Kappa> for u64 {
    fn from(k: Kappa) -> u64 {
        k.value()
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `N_{E_κ}`: 2⁸·5²·7, 2·5²·7, 2⁸·5·7, 2·5·7.
pub fn frey_level(kappa: Kappa) -> u64 {
    match kappa {
        Kappa::One => 44800,
        Kappa::Two => 350,
        Kappa::Five => 8960,
        Kappa::Ten => 70,
    }
}

/// A Frey model together with its level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreyModel {
    pub kappa: Kappa,
    pub level: u64,
}

impl FreyModel {
    pub fn new(kappa: Kappa) -> Self {
        FreyModel { kappa, level: frey_level(kappa) }
    }

    /// Human-readable Weierstrass equation over Q in terms of `a, b, T, n`.
    pub fn equation(&self) -> &'static str {
        match self.kappa {
            Kappa::One => "Y^2 = X^3 + 20T X^2 + 10b^n X",
            Kappa::Two => "Y^2 + XY = X^3 + (5T - 1)/4 X^2 + 35*2^(4n-11) a^(4n) X",
            Kappa::Five => "Y^2 = X^3 + 4T X^2 + 2b^n X",
            Kappa::Ten => "Y^2 + XY = X^3 + (T - 1)/4 X^2 + 7*10^(4n-11) a^(4n) X",
        }
    }
}

fn check_prime(p: u64) -> Result<PrimeField> {
    if 70 % p == 0 {
        return Err(Error::UnusablePrime(p));
    }
    PrimeField::new(p)
}

/// Reduction of `E_κ` at `p` with `(a^n, b^n, T)` replaced by residues `(a, b, T)`.
pub fn instantiate(kappa: Kappa, a: u64, b: u64, t: u64, n: u64, field: &PrimeField) -> Result<EllipticCurveFp> {
    let p = field.p();
    if p == 2 || 70 % p == 0 {
        return Err(Error::UnusablePrime(p));
    }
    let f = field;
    let n = n as i64;
    let a4 = f.pow(a, 4);
    let curve = match kappa {
        Kappa::One => EllipticCurveFp {
            field: *f,
            a1: 0,
            a2: f.mul(20, t),
            a3: 0,
            a4: f.mul(10, b),
            a6: 0,
        },
        Kappa::Five => EllipticCurveFp {
            field: *f,
            a1: 0,
            a2: f.mul(4, t),
            a3: 0,
            a4: f.mul(2, b),
            a6: 0,
        },
        Kappa::Two => {
            let a2 = f.div(f.sub(f.mul(5, t), 1), 4).expect("p odd");
            let scale = f.pow_signed(2, 4 * n - 11).expect("p odd");
            EllipticCurveFp { field: *f, a1: 1, a2, a3: 0, a4: f.mul(f.mul(35, scale), a4), a6: 0 }
        }
        Kappa::Ten => {
            let a2 = f.div(f.sub(t, 1), 4).expect("p odd");
            let scale = f.pow_signed(10, 4 * n - 11).expect("p ∤ 10");
            EllipticCurveFp { field: *f, a1: 1, a2, a3: 0, a4: f.mul(f.mul(7, scale), a4), a6: 0 }
        }
    };
    Ok(curve)
}

/// All `T` with `(10/κ)·T² = 7κ^(4n−5)·a⁴ + b` in F_p.
pub fn solve_t(kappa: Kappa, n: u64, p: u64, a: u64, b: u64) -> Result<Vec<u64>> {
    if 10 % p == 0 {
        return Err(Error::UnusablePrime(p));
    }
    let f = PrimeField::new(p)?;
    let k = kappa.value();
    let rhs = f.add(f.mul(f.mul(7, f.pow_signed(k, 4 * n as i64 - 5).expect("p ∤ κ")), f.pow(a, 4)), b % p);
    let t_sq = f.div(rhs, f.reduce((10 / k) as i64)).expect("p ∤ 10");
    Ok(mod_sqrt(t_sq, &f).unwrap_or_default())
}

/// One admissible residue datum `(a, b, T)` at a Kraus prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SieveTriple {
    pub a: u64,
    pub b: u64,
    pub t: u64,
}

impl SieveTriple {
    /// Checks `(10/κ)·T² = 7κ^(4n−5)·a⁴ + b` in F_p.
    pub fn satisfies_relation(&self, kappa: Kappa, n: u64, field: &PrimeField) -> bool {
        let f = field;
        let k = kappa.value();
        let lhs = f.mul(f.reduce((10 / k) as i64), f.mul(self.t, self.t));
        let rhs = f.add(f.mul(f.mul(7, f.pow_signed(k, 4 * n as i64 - 5).unwrap()), f.pow(self.a, 4)), self.b);
        lhs == rhs
    }
}

/// A triple together with the trace of the curve it induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleTrace {
    pub triple: SieveTriple,
    /// `None` when the instantiated curve is singular at p.
    pub trace: Option<i64>,
}

/// Result of enumerating every admissible `(a, b, T)` at one Kraus prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrausTraceSet {
    pub kappa: Kappa,
    pub n: u64,
    pub p: u64,
    /// The n-th power residues μ_n(F_p).
    pub residues: BTreeSet<u64>,
    pub triples: Vec<TripleTrace>,
    /// Traces of the nonsingular instantiations.
    pub traces: BTreeSet<i64>,
    /// Number of singular instantiations, kept apart from `traces`.
    pub singular: usize,
}

impl KrausTraceSet {
    /// Distinct `(b, T)` classes that occur, with `b` and `T` centered in `(−p/2, p/2]`.
    pub fn bt_classes(&self) -> BTreeSet<(i64, i64)> {
        let f = PrimeField::new(self.p).expect("prime");
        self.triples.iter().map(|t| (f.centered(t.triple.b), f.centered(t.triple.t))).collect()
    }
}

/// Enumerates `a, b ∈ μ_n(F_p)` and the matching `T`, and collects the
/// traces of the instantiated curves.
pub fn kraus_trace_set(kappa: Kappa, n: u64, p: u64) -> Result<KrausTraceSet> {
    let field = check_prime(p)?;
    if p.is_multiple_of(n) {
        return Err(Error::UnusablePrime(p));
    }
    let residues = nth_power_residues(n, &field)?;
    let mut triples = Vec::new();
    let mut traces = BTreeSet::new();
    let mut singular = 0;
    for &a in &residues {
        for &b in &residues {
            for t in solve_t(kappa, n, p, a, b)? {
                let triple = SieveTriple { a, b, t };
                debug_assert!(triple.satisfies_relation(kappa, n, &field));
                let curve = instantiate(kappa, a, b, t, n, &field)?;
                let trace = match ap_trace(&curve) {
                    Ok(ap) => {
                        traces.insert(ap);
                        Some(ap)
                    }
                    Err(Error::SingularCurve(_)) => {
                        singular += 1;
                        None
                    }
                    Err(e) => return Err(e),
                };
                triples.push(TripleTrace { triple, trace });
            }
        }
    }
    Ok(KrausTraceSet { kappa, n, p, residues, triples, traces, singular })
}

/// Primes `p = nt + 1 ≤ bound` usable for the Kraus step at exponent `n`.
pub fn kraus_prime_candidates(n: u64, bound: u64) -> Vec<u64> {
    crate::arith::primes_up_to(bound).into_iter().filter(|&p| p % n == 1 && 70 % p != 0 && p != n).collect()
}
