use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LaurentInt;

/// a + b·√q with rational a, b.
///
/// Negative powers of v = √q make rational components unavoidable. When q is
/// a perfect square the √q part is folded into `a`, which keeps equality
/// componentwise in both cases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScalarSqrtQ {
    pub q: u64,
    pub a: BigRational,
    pub b: BigRational,
}

fn isqrt(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}

impl ScalarSqrtQ {
    pub fn new(q: u64, a: BigRational, b: BigRational) -> Self {
        match isqrt(q) {
            Some(r) if !b.is_zero() => ScalarSqrtQ { q, a: a + b * BigRational::from_integer(r.into()), b: BigRational::zero() },
            _ => ScalarSqrtQ { q, a, b },
        }
    }

    pub fn zero(q: u64) -> Self {
        ScalarSqrtQ { q, a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one(q: u64) -> Self {
        Self::int(q, 1)
    }

    pub fn int(q: u64, n: i64) -> Self {
        ScalarSqrtQ { q, a: BigRational::from_integer(n.into()), b: BigRational::zero() }
    }

    pub fn from_bigint(q: u64, n: BigInt) -> Self {
        ScalarSqrtQ { q, a: BigRational::from_integer(n), b: BigRational::zero() }
    }

    /// v^e at v = √q.
    pub fn v_pow(q: u64, e: i64) -> Self {
        let qq = BigRational::from_integer(q.into());
        let half = e.div_euclid(2);
        let base = if half >= 0 { num_traits::pow(qq.clone(), half as usize) } else { num_traits::pow(qq.recip(), (-half) as usize) };
        if e.rem_euclid(2) == 0 {
            ScalarSqrtQ::new(q, base, BigRational::zero())
        } else {
            ScalarSqrtQ::new(q, BigRational::zero(), base)
        }
    }

    /// Specialization v ↦ √q.
    pub fn from_laurent(q: u64, l: &LaurentInt) -> Self {
        let mut acc = Self::zero(q);
        for (e, c) in l.terms() {
            acc = &acc + &Self::v_pow(q, e).scale(&BigRational::from_integer(c));
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ScalarSqrtQ { q: self.q, a: &self.a * c, b: &self.b * c }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let qq = BigRational::from_integer(self.q.into());
        let norm = &self.a * &self.a - &self.b * &self.b * qq;
        Some(ScalarSqrtQ { q: self.q, a: &self.a / &norm, b: -&self.b / &norm })
    }

    /// Returns `Some(n)` when the value is the integer n.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    /// Writes the value as c·v^e with integer c if possible.
    pub fn as_monomial(&self) -> Option<(BigInt, i64)> {
        if self.is_zero() {
            return None;
        }
        let (part, odd) = if self.b.is_zero() { (&self.a, false) } else if self.a.is_zero() { (&self.b, true) } else { return None };
        // part = c · q^k with k ∈ ℤ and q ∤ c when k < 0.
        let q = BigInt::from(self.q);
        let num = part.numer().clone();
        let mut den = part.denom().clone();
        let mut k: i64 = 0;
        while !den.is_one() {
            let (d, r) = num_integer::Integer::div_rem(&den, &q);
            if !r.is_zero() {
                return None;
            }
            den = d;
            k -= 1;
        }
        Some((num, 2 * k + if odd { 1 } else { 0 }))
    }
}

impl Add for &ScalarSqrtQ {
    type Output = ScalarSqrtQ;
    fn add(self, rhs: &ScalarSqrtQ) -> ScalarSqrtQ {
        assert_eq!(self.q, rhs.q, "mixed q in scalar arithmetic");
        ScalarSqrtQ { q: self.q, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &ScalarSqrtQ {
    type Output = ScalarSqrtQ;
    fn sub(self, rhs: &ScalarSqrtQ) -> ScalarSqrtQ {
        assert_eq!(self.q, rhs.q, "mixed q in scalar arithmetic");
        ScalarSqrtQ { q: self.q, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &ScalarSqrtQ {
    type Output = ScalarSqrtQ;
    fn mul(self, rhs: &ScalarSqrtQ) -> ScalarSqrtQ {
        assert_eq!(self.q, rhs.q, "mixed q in scalar arithmetic");
        let qq = BigRational::from_integer(self.q.into());
        ScalarSqrtQ {
            q: self.q,
            a: &self.a * &rhs.a + &self.b * &rhs.b * qq,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &ScalarSqrtQ {
    type Output = ScalarSqrtQ;
    fn neg(self) -> ScalarSqrtQ {
        ScalarSqrtQ { q: self.q, a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for ScalarSqrtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.q)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qint;

    #[test]
    fn v_powers_multiply() {
        for q in [2u64, 3, 5] {
            for e in -4..5 {
                for f in -4..5 {
                    assert_eq!(&ScalarSqrtQ::v_pow(q, e) * &ScalarSqrtQ::v_pow(q, f), ScalarSqrtQ::v_pow(q, e + f));
                }
            }
        }
    }

    #[test]
    fn quantum_two_specializes_to_q_plus_one_over_v() {
        let q = 3;
        let two = ScalarSqrtQ::from_laurent(q, &qint(2));
        let expected = &ScalarSqrtQ::v_pow(q, -1) * &ScalarSqrtQ::int(q, 4);
        assert_eq!(two, expected);
    }

    #[test]
    fn inverse_and_monomial_readback() {
        let x = ScalarSqrtQ::new(2, BigRational::from_integer(3.into()), BigRational::from_integer(1.into()));
        assert_eq!(&x * &x.inv().unwrap(), ScalarSqrtQ::one(2));
        let m = ScalarSqrtQ::v_pow(5, -3).scale(&BigRational::from_integer(7.into()));
        assert_eq!(m.as_monomial(), Some((BigInt::from(7), -3)));
        assert_eq!(ScalarSqrtQ::int(4, 6).as_integer(), Some(BigInt::from(6)));
        assert_eq!(ScalarSqrtQ::v_pow(4, 1), ScalarSqrtQ::int(4, 2));
    }
}
