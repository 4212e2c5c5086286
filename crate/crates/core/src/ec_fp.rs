//! Elliptic curves over prime fields and exact traces of Frobenius.
//!
//! Point counting is the O(p) character sum over the completed-square model;
//! every prime this crate feeds in is below a few hundred.

use serde::{Deserialize, Serialize};

use crate::arith::PrimeField;
use crate::error::{Error, Result};

/// Long Weierstrass model `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveFp {
    pub field: PrimeField,
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
    pub a4: u64,
    pub a6: u64,
}

impl EllipticCurveFp {
    pub fn new(field: PrimeField, [a1, a2, a3, a4, a6]: [i64; 5]) -> Self {
        EllipticCurveFp {
            field,
            a1: field.reduce(a1),
            a2: field.reduce(a2),
            a3: field.reduce(a3),
            a4: field.reduce(a4),
            a6: field.reduce(a6),
        }
    }

    /// `y² = x³ + a·x + b`.
    pub fn short(field: PrimeField, a: i64, b: i64) -> Self {
        EllipticCurveFp::new(field, [0, 0, 0, a, b])
    }

    /// `(b2, b4, b6, b8)` of the standard formulary.
    pub fn b_invariants(&self) -> [u64; 4] {
        let f = &self.field;
        let (a1, a2, a3, a4, a6) = (self.a1, self.a2, self.a3, self.a4, self.a6);
        let b2 = f.add(f.mul(a1, a1), f.mul(4, a2));
        let b4 = f.add(f.mul(2, a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(4, a6));
        let b8 = {
            let t1 = f.mul(f.mul(a1, a1), a6);
            let t2 = f.mul(4, f.mul(a2, a6));
            let t3 = f.mul(a1, f.mul(a3, a4));
            let t4 = f.mul(a2, f.mul(a3, a3));
            let t5 = f.mul(a4, a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        [b2, b4, b6, b8]
    }

    pub fn is_singular(&self) -> bool {
        discriminant(self) == 0
    }

    /// `#E(F_p)` including the point at infinity. Requires odd p.
    pub fn count_points(&self) -> u64 {
        let f = &self.field;
        let p = f.p();
        assert!(p % 2 == 1, "character-sum counting needs odd p");
        // (2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6
        let [b2, b4, b6, _] = self.b_invariants();
        let two_b4 = f.mul(2, b4);
        let chi = quadratic_character_table(f);
        let mut total: i64 = 1;
        for x in 0..p {
            let rhs = f.add(f.mul(f.add(f.mul(f.add(f.mul(4, x), b2), x), two_b4), x), b6);
            total += 1 + chi[rhs as usize] as i64;
        }
        total as u64
    }
}

fn quadratic_character_table(f: &PrimeField) -> Vec<i8> {
    let p = f.p();
    let mut table = vec![-1i8; p as usize];
    table[0] = 0;
    for r in 1..p {
        table[f.mul(r, r) as usize] = 1;
    }
    table
}

/// `Δ = −b2²·b8 − 8·b4³ − 27·b6² + 9·b2·b4·b6`.
pub fn discriminant(e: &EllipticCurveFp) -> u64 {
    let f = &e.field;
    let [b2, b4, b6, b8] = e.b_invariants();
    let t1 = f.mul(f.mul(b2, b2), b8);
    let t2 = f.mul(8, f.mul(b4, f.mul(b4, b4)));
    let t3 = f.mul(27, f.mul(b6, b6));
    let t4 = f.mul(9, f.mul(b2, f.mul(b4, b6)));
    f.add(f.neg(f.add(f.add(t1, t2), t3)), t4)
}

/// `a_p = p + 1 − #E(F_p)` for a curve with good reduction at odd p.
pub fn ap_trace(e: &EllipticCurveFp) -> Result<i64> {
    let p = e.field.p();
    if p.is_multiple_of(2) {
        return Err(Error::Precondition("trace computation requires odd p".into()));
    }
    if e.is_singular() {
        return Err(Error::SingularCurve(p));
    }
    let ap = p as i64 + 1 - e.count_points() as i64;
    assert!((ap * ap) as u64 <= 4 * p, "Hasse bound violated: a_{p} = {ap}");
    Ok(ap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Oracle: count affine solutions of the long model by brute force.
    fn naive_count(e: &EllipticCurveFp) -> u64 {
        let f = &e.field;
        let p = f.p();
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                let lhs = f.add(f.add(f.mul(y, y), f.mul(e.a1, f.mul(x, y))), f.mul(e.a3, y));
                let rhs = f.add(
                    f.add(f.add(f.mul(x, f.mul(x, x)), f.mul(e.a2, f.mul(x, x))), f.mul(e.a4, x)),
                    e.a6,
                );
                if lhs == rhs {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn discriminant_examples() {
        // short form oracle: Δ = −16(4a³ + 27b²)
        let short_disc = |a: i64, b: i64, p: u64| (-16 * (4 * a * a * a + 27 * b * b)).rem_euclid(p as i64) as u64;
        assert_eq!(discriminant(&EllipticCurveFp::short(fp(5), 1, 0)), 1);
        assert_eq!(short_disc(1, 0, 5), 1);
        assert_eq!(discriminant(&EllipticCurveFp::short(fp(7), 0, 0)), 0);
        assert_eq!(discriminant(&EllipticCurveFp::short(fp(5), -1, 0)), 4);
        assert_eq!(short_disc(-1, 0, 5), 4);
    }

    #[test]
    fn trace_examples() {
        let e = EllipticCurveFp::short(fp(5), 0, 1);
        assert_eq!(naive_count(&e), 6);
        assert_eq!(ap_trace(&e).unwrap(), 0);
        let e = EllipticCurveFp::short(fp(5), -1, 0);
        assert_eq!(naive_count(&e), 8);
        assert_eq!(ap_trace(&e).unwrap(), -2);
    }

    #[test]
    fn singular_curve_rejected() {
        assert_eq!(ap_trace(&EllipticCurveFp::short(fp(7), 0, 0)), Err(Error::SingularCurve(7)));
    }

    #[test]
    fn character_sum_matches_enumeration_up_to_100() {
        for p in primes_up_to(100).into_iter().skip(1) {
            let f = fp(p);
            let step = (p / 7).max(1) as usize;
            for a1 in (0..p).step_by(step) {
                for a2 in (0..p).step_by(step + 1) {
                    for a4 in (0..p).step_by(step + 2) {
                        let e = EllipticCurveFp::new(f, [a1 as i64, a2 as i64, (a1 * 3 % p) as i64, a4 as i64, 1]);
                        assert_eq!(e.count_points(), naive_count(&e), "{e:?}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn hasse_bound(idx in 1usize..95, a in 0i64..1000, b in 0i64..1000) {
            let primes = primes_up_to(500);
            let f = fp(primes[idx % primes.len()].max(3));
            let e = EllipticCurveFp::short(f, a, b);
            prop_assume!(!e.is_singular());
            let ap = ap_trace(&e).unwrap();
            prop_assert!((ap * ap) as u64 <= 4 * f.p());
        }

        #[test]
        fn quadratic_twist_negates_trace(idx in 1usize..95, a in 0i64..1000, b in 0i64..1000) {
            let primes = primes_up_to(500);
            let f = fp(primes[idx % primes.len()].max(3));
            let e = EllipticCurveFp::short(f, a, b);
            prop_assume!(!e.is_singular());
            let d = (2..f.p()).find(|&z| f.legendre(z) == -1).unwrap() as i64;
            let twist = EllipticCurveFp::short(f, a * d * d, b * d * d * d);
            prop_assert_eq!(ap_trace(&twist).unwrap(), -ap_trace(&e).unwrap());
        }

        #[test]
        fn counting_matches_enumeration(idx in 1usize..25, c in prop::array::uniform5(0i64..100)) {
            let primes = primes_up_to(100);
            let f = fp(primes[idx % primes.len()].max(3));
            let e = EllipticCurveFp::new(f, c);
            prop_assert_eq!(e.count_points(), naive_count(&e));
        }
    }
}
