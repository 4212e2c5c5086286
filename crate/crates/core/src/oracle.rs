//! Brute-force solutions of `(x − d)⁵ + x⁵ + (x + d)⁵ = yⁿ`, the factor
//! witnesses `(κ, a, b, T)` they induce, and exact identity checks.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, MPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub x: i64,
    pub d: i64,
    pub y: i128,
    pub n: u32,
}

impl SolutionRecord {
    /// Re-checks the defining equation with big integers.
    pub fn holds(&self) -> bool {
        self.x.gcd(&self.d) == 1
            && self.n >= 2
            && main_lhs(&BigInt::from(self.x), &BigInt::from(self.d)) == BigInt::from(self.y).pow(self.n)
    }

    /// `(|x|, |d|, |y|, n)`.
    pub fn abs_key(&self) -> (u64, u64, u128, u32) {
        (self.x.unsigned_abs(), self.d.unsigned_abs(), self.y.unsigned_abs(), self.n)
    }
}

/// `(x − d)⁵ + x⁵ + (x + d)⁵`.
pub fn main_lhs(x: &BigInt, d: &BigInt) -> BigInt {
    (x - d).pow(5) + x.pow(5) + (x + d).pow(5)
}

/// `3x⁴ + 20x²d² + 10d⁴`.
pub fn quartic(x: &BigInt, d: &BigInt) -> BigInt {
    let x2 = x * x;
    let d2 = d * d;
    BigInt::from(3) * &x2 * &x2 + BigInt::from(20) * &x2 * &d2 + BigInt::from(10) * &d2 * &d2
}

/// Exact n-th root, negative values allowed for odd n.
pub fn exact_root(v: &BigInt, n: u32) -> Option<BigInt> {
    if n == 0 {
        return None;
    }
    if v.is_negative() {
        if n.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-v, n).map(|r| -r);
    }
    let r = v.nth_root(n);
    (r.pow(n) == *v).then_some(r)
}

/// Exact n-th root for machine integers.
pub fn exact_root_i128(v: i128, n: u32) -> Option<i128> {
    if n == 0 {
        return None;
    }
    if v < 0 {
        if n.is_multiple_of(2) {
            return None;
        }
        return exact_root_i128(v.checked_neg()?, n).map(|r| -r);
    }
    let r = (v as u128).nth_root(n) as i128;
    (r.checked_pow(n) == Some(v)).then_some(r)
}

fn sum_i128(x: i64, d: i64) -> i128 {
    let (x, d) = (x as i128, d as i128);
    (x - d).pow(5) + x.pow(5) + (x + d).pow(5)
}

fn search_strip(xs: std::ops::RangeInclusive<i64>, box_d: i64, nmax: u32) -> Vec<SolutionRecord> {
    let mut out = Vec::new();
    for x in xs {
        for d in -box_d..=box_d {
            if x.gcd(&d) != 1 {
                continue;
            }
            let v = sum_i128(x, d);
            for n in 2..=nmax {
                if let Some(y) = exact_root_i128(v, n) {
                    out.push(SolutionRecord { x, d, y, n });
                }
            }
        }
    }
    out
}

/// All coprime `(x, d)` with `|x| ≤ box_x`, `|d| ≤ box_d` whose sum is a
/// perfect n-th power for some `2 ≤ n ≤ nmax`, sorted.
pub fn search_solutions(box_x: u64, box_d: u64, nmax: u32) -> Result<Vec<SolutionRecord>> {
    if box_x < 1 || box_d < 1 || nmax < 2 {
        return Err(Error::Precondition("search needs box bounds ≥ 1 and nmax ≥ 2".into()));
    }
    // 3·(2B)⁵ must fit in i128
    if box_x.max(box_d) > 1 << 22 {
        return Err(Error::Precondition("search box too large".into()));
    }
    let (bx, bd) = (box_x as i64, box_d as i64);
    let mut out = run_strips(bx, bd, nmax);
    out.sort();
    Ok(out)
}

#[cfg(not(target_arch = "wasm32"))]
fn run_strips(bx: i64, bd: i64, nmax: u32) -> Vec<SolutionRecord> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(16) as i64;
    let width = 2 * bx + 1;
    let step = (width + workers - 1) / workers;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| -bx + w * step)
            .take_while(|&lo| lo <= bx)
            .map(|lo| {
                let hi = (lo + step - 1).min(bx);
                scope.spawn(move || search_strip(lo..=hi, bd, nmax))
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
    })
}

#[cfg(target_arch = "wasm32")]
fn run_strips(bx: i64, bd: i64, nmax: u32) -> Vec<SolutionRecord> {
    search_strip(-bx..=bx, bd, nmax)
}

/// `κ = gcd(x, 10)`, `x = κ^(n−1)aⁿ`, `3x⁴ + 20x²d² + 10d⁴ = κbⁿ`, `T = d² + x²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorWitness {
    pub kappa: u64,
    pub a: i128,
    pub b: i128,
    pub t: i128,
    pub n: u32,
}

impl FactorWitness {
    /// Checks every defining relation with big integers.
    pub fn check(&self, x: i64, d: i64) -> bool {
        let n = self.n;
        let k = BigInt::from(self.kappa);
        let (a, b, t) = (BigInt::from(self.a), BigInt::from(self.b), BigInt::from(self.t));
        let (x, d) = (BigInt::from(x), BigInt::from(d));
        let x_ok = x == k.pow(n - 1) * a.pow(n);
        let fish_ok = quartic(&x, &d) == &k * b.pow(n);
        let t_ok = t == &d * &d + &x * &x;
        // 7κ^(4n−5) a^(4n) + bⁿ = (10/κ)T², multiplied through by κ⁵ to stay integral
        let lhs = BigInt::from(7) * k.pow(4 * n) * a.pow(4 * n) + k.pow(5) * b.pow(n);
        let rhs = k.pow(5) * BigInt::from(10 / self.kappa) * &t * &t;
        let coprime = (&k * &a).gcd(&b).is_one();
        x_ok && fish_ok && t_ok && lhs == rhs && coprime
    }

    /// `X = 10b/(κ³a⁴)` on `Y² = X⁵ + 7·10⁵` when n = 5.
    pub fn quintic_x(&self) -> BigRational {
        let k = BigInt::from(self.kappa);
        BigRational::new(BigInt::from(10) * BigInt::from(self.b), k.pow(3) * BigInt::from(self.a).pow(4))
    }
}

fn to_i128(v: &BigInt, what: &str) -> Result<i128> {
    v.to_i128().ok_or_else(|| Error::Precondition(format!("{what} does not fit in 128 bits")))
}

/// Computes `(κ, a, b, T)` for a solution with `y ≠ 0` and prime n.
pub fn derive_witness(s: &SolutionRecord) -> Result<FactorWitness> {
    if s.y == 0 || s.x == 0 {
        return Err(Error::Precondition("witness needs x ≠ 0 and y ≠ 0".into()));
    }
    if !is_prime_u64(s.n as u64) {
        return Err(Error::Precondition(format!("exponent {} is not prime", s.n)));
    }
    if !s.holds() {
        return Err(Error::Precondition(format!("{s:?} is not a solution")));
    }
    let n = s.n;
    let kappa = s.x.gcd(&10) as u64;
    let k = BigInt::from(kappa);
    let x = BigInt::from(s.x);
    let d = BigInt::from(s.d);
    let (q, r) = x.div_rem(&k.pow(n - 1));
    let a = (r.is_zero()).then(|| exact_root(&q, n)).flatten();
    let (qb, rb) = quartic(&x, &d).div_rem(&k);
    let b = (rb.is_zero()).then(|| exact_root(&qb, n)).flatten();
    let (a, b) = match (a, b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Precondition(format!("{s:?} does not factor as x = κ^(n−1)aⁿ, quartic = κbⁿ"))),
    };
    let w = FactorWitness {
        kappa,
        a: to_i128(&a, "a")?,
        b: to_i128(&b, "b")?,
        t: to_i128(&(&d * &d + &x * &x), "T")?,
        n,
    };
    assert!(w.check(s.x, s.d), "witness invariants fail for {s:?}");
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeDividesReport {
    /// `(κ, n, a, b, d)` residue tuples mod 9 satisfying the quartic relation.
    pub admissible_classes: usize,
    /// Admissible classes with `3 | d`; must be zero.
    pub three_divides_d: usize,
    /// Admissible classes with `3 ∤ ab`; must be zero.
    pub counterexamples: usize,
    pub ok: bool,
}

/// Residue check mod 9 that every solution has `3 ∤ d` and `3 | ab`.
pub fn three_divides_ab_check() -> ThreeDividesReport {
    let mut admissible = 0;
    let mut three_d = 0;
    let mut bad = 0;
    for kappa in [1u64, 2, 5, 10] {
        // residues mod 9 of κ^(n−1)aⁿ and bⁿ depend on n mod 6 once n ≥ 2
        for n in 2..=7u32 {
            for a in 0..9u64 {
                for b in 0..9u64 {
                    if a % 3 == 0 && b % 3 == 0 {
                        continue;
                    }
                    let x = (kappa.pow(n - 1) % 9) * pow_mod(a, n, 9) % 9;
                    for d in 0..9u64 {
                        if x.is_multiple_of(3) && d % 3 == 0 {
                            continue;
                        }
                        let lhs = (3 * pow_mod(x, 4, 9) + 20 * x * x % 9 * d * d + 10 * pow_mod(d, 4, 9)) % 9;
                        let rhs = kappa * pow_mod(b, n, 9) % 9;
                        if lhs != rhs {
                            continue;
                        }
                        admissible += 1;
                        if d % 3 == 0 {
                            three_d += 1;
                        }
                        if a % 3 != 0 && b % 3 != 0 {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    ThreeDividesReport {
        admissible_classes: admissible,
        three_divides_d: three_d,
        counterexamples: bad,
        ok: three_d == 0 && bad == 0 && admissible > 0,
    }
}

fn pow_mod(b: u64, e: u32, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * (b % m) % m)
}

/// Every record with `y ≠ 0` has `3 | y`.
pub fn three_divides_y(records: &[SolutionRecord]) -> bool {
    records.iter().filter(|r| r.y != 0).all(|r| r.y % 3 == 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: u64,
    pub seed: u64,
    pub failures: Vec<(i64, i64)>,
    pub ok: bool,
}

/// Both identities at a single point.
pub fn identities_hold(x: &BigInt, d: &BigInt) -> bool {
    let q = quartic(x, d);
    let t = d * d + x * x;
    main_lhs(x, d) == x * &q && q == BigInt::from(10) * &t * &t - BigInt::from(7) * x.pow(4)
}

/// Random-point check of
/// `(x − d)⁵ + x⁵ + (x + d)⁵ = x(3x⁴ + 20x²d² + 10d⁴)` and
/// `3x⁴ + 20x²d² + 10d⁴ = 10(d² + x²)² − 7x⁴`.
pub fn identity_fuzz(trials: u64, seed: u64) -> Result<FuzzReport> {
    if trials < 1 {
        return Err(Error::Precondition("identity_fuzz needs at least one trial".into()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..trials {
        // alternate small and full-width values
        let bound = if i % 2 == 0 { 1_000 } else { i64::MAX / 2 };
        let x = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(-bound..=bound);
        if !identities_hold(&BigInt::from(x), &BigInt::from(d)) {
            failures.push((x, d));
        }
    }
    Ok(FuzzReport { trials, seed, ok: failures.is_empty(), failures })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SjOutcome {
    NotApplicable { j: u64 },
    Checked { j: u64, identity: bool, residues: bool },
}

impl SjOutcome {
    pub fn passed(&self) -> Option<bool> {
        match self {
            SjOutcome::NotApplicable { .. } => None,
            SjOutcome::Checked { identity, residues, .. } => Some(*identity && *residues),
        }
    }
}

/// `S_j(x, d, 5) = Σ_{i<j} (x + id)⁵`.
pub fn s_j(j: u64, x: &BigInt, d: &BigInt) -> BigInt {
    (0..j).map(|i| (x + BigInt::from(i) * d).pow(5)).sum()
}

/// For `j ≡ ±3 (mod 18)`: the factorization of `S_j(x, d, 5)` at
/// `x = z − (j − 1)d/2`, and `3 | S_j` whenever `3 ∤ d`.
pub fn sj_three_divides(j: u64) -> Result<SjOutcome> {
    if j < 1 {
        return Err(Error::Precondition("j must be ≥ 1".into()));
    }
    if j % 18 != 3 && j % 18 != 15 {
        return Ok(SjOutcome::NotApplicable { j });
    }
    let q = |v: i128| BigRational::from(BigInt::from(v));
    let jj = j as i128;
    // variables: z = 0, d = 1
    let z = MPoly::var(2, 0);
    let d = MPoly::var(2, 1);
    let shift = d.scale(&BigRational::new(BigInt::from(-(jj - 1)), BigInt::from(2)));
    let x = &z + &shift;
    let mut lhs = MPoly::zero(2);
    for i in 0..jj {
        lhs = &lhs + &(&x + &d.scale(&q(i))).pow(5);
    }
    let c2 = BigRational::new(BigInt::from(5 * (jj * jj - 1)), BigInt::from(2));
    let c4 = BigRational::new(BigInt::from((jj * jj - 1) * (3 * jj * jj - 7)), BigInt::from(16));
    let inner = &(&z.pow(4).scale_int(3) + &(&z.pow(2) * &d.pow(2)).scale(&c2)) + &d.pow(4).scale(&c4);
    let rhs = (&z * &inner).scale(&BigRational::new(BigInt::from(jj), BigInt::from(3)));
    let identity = (&lhs - &rhs).is_zero();
    // (j − 1)/2 is an integer here, so integral z gives integral x
    let half = BigInt::from((jj - 1) / 2);
    let mut residues = true;
    for zr in 0..9i64 {
        for dr in (1..9i64).filter(|v| v % 3 != 0) {
            let (zb, db) = (BigInt::from(zr), BigInt::from(dr));
            let xb = &zb - &half * &db;
            residues &= (s_j(j, &xb, &db) % 3u32).is_zero();
        }
    }
    Ok(SjOutcome::Checked { j, identity, residues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent double loop over the box, one exponent at a time.
    fn naive_search(bx: i64, bd: i64, nmax: u32) -> Vec<SolutionRecord> {
        let mut out = Vec::new();
        for x in -bx..=bx {
            for d in -bd..=bd {
                if x.gcd(&d) != 1 {
                    continue;
                }
                let v = main_lhs(&BigInt::from(x), &BigInt::from(d));
                for n in 2..=nmax {
                    let lim = 1 + (v.abs().to_f64().unwrap().powf(1.0 / n as f64)) as i128;
                    for y in -lim - 1..=lim + 1 {
                        if BigInt::from(y).pow(n) == v && (n % 2 == 1 || y >= 0) {
                            out.push(SolutionRecord { x, d, y, n });
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn search_matches_naive_loop() {
        for (bx, bd, nmax) in [(1, 1, 2), (5, 7, 6), (12, 12, 11), (30, 30, 5)] {
            let fast = search_solutions(bx as u64, bd as u64, nmax).unwrap();
            assert_eq!(fast, naive_search(bx, bd, nmax), "box {bx}×{bd}, nmax {nmax}");
        }
    }

    #[test]
    fn small_box_has_only_trivial_family() {
        let s = search_solutions(1, 1, 2).unwrap();
        assert!(!s.is_empty());
        assert!(s.iter().all(|r| r.x == 0 && r.d.abs() == 1 && r.y == 0));
    }

    #[test]
    fn witness_examples() {
        let w = derive_witness(&SolutionRecord { x: 1, d: 2, y: 3, n: 5 }).unwrap();
        assert_eq!(w, FactorWitness { kappa: 1, a: 1, b: 3, t: 5, n: 5 });
        assert_eq!(7 + 243, 10 * 25);
        let w = derive_witness(&SolutionRecord { x: -1, d: 2, y: -3, n: 5 }).unwrap();
        assert_eq!((w.kappa, w.a, w.b, w.t), (1, -1, 3, 5));
        assert!(derive_witness(&SolutionRecord { x: 0, d: 1, y: 0, n: 5 }).is_err());
        assert!(derive_witness(&SolutionRecord { x: 1, d: 2, y: 3, n: 4 }).is_err());
    }

    #[test]
    fn three_divides_checks() {
        let r = three_divides_ab_check();
        assert!(r.ok, "{r:?}");
        assert!(three_divides_y(&[SolutionRecord { x: 1, d: 2, y: 3, n: 5 }]));
    }

    #[test]
    fn fuzz_examples() {
        assert!(identities_hold(&BigInt::from(2), &BigInt::from(3)));
        assert!(identities_hold(&BigInt::from(0), &BigInt::from(1)));
        assert_eq!(quartic(&BigInt::from(0), &BigInt::from(1)), BigInt::from(10));
        assert!(identity_fuzz(500, 7).unwrap().ok);
    }

    #[test]
    fn sj_examples() {
        assert_eq!(sj_three_divides(3).unwrap().passed(), Some(true));
        assert_eq!(sj_three_divides(21).unwrap().passed(), Some(true));
        assert_eq!(sj_three_divides(15).unwrap().passed(), Some(true));
        assert_eq!(sj_three_divides(5).unwrap(), SjOutcome::NotApplicable { j: 5 });
    }

    #[test]
    fn sj_three_is_the_main_form() {
        for (x, d) in [(1i64, 2i64), (-4, 7), (10, 3)] {
            let (x, d) = (BigInt::from(x), BigInt::from(d));
            // S_3 starts at x − d
            assert_eq!(s_j(3, &(&x - &d), &d), main_lhs(&x, &d));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn exact_root_agrees_with_machine_root(v in -1_000_000_000i64..=1_000_000_000, n in 2u32..=13) {
            let big = exact_root(&BigInt::from(v), n).map(|r| r.to_i128().unwrap());
            prop_assert_eq!(big, exact_root_i128(v as i128, n));
            if let Some(r) = big {
                prop_assert_eq!(r.pow(n), v as i128);
            }
        }

        #[test]
        fn perfect_powers_are_detected((n, base) in (2u32..=13).prop_flat_map(|n| {
            let m = (1_000_000_000f64).powf(1.0 / n as f64).floor() as i64;
            (Just(n), -m..=m)
        })) {
            let v = (base as i128).pow(n);
            let r = exact_root_i128(v, n).unwrap();
            prop_assert_eq!(r.pow(n), v);
            if n % 2 == 1 { prop_assert_eq!(r, base as i128); } else { prop_assert_eq!(r, base.abs() as i128); }
        }

        #[test]
        fn witness_invariants_hold_on_found_records(bx in 1u64..20) {
            for r in search_solutions(bx, 20, 13).unwrap() {
                prop_assert!(r.holds());
                if r.y != 0 && is_prime_u64(r.n as u64) {
                    let w = derive_witness(&r).unwrap();
                    prop_assert!(w.check(r.x, r.d));
                }
            }
        }
    }
}
