use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of ℤ[v, v⁻¹], stored densely from the lowest exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentInt {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: i64, e: i64) -> Self {
        Self::from_parts(e, vec![BigInt::from(c)])
    }

    /// The indeterminate v.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_parts(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut l = LaurentInt { low, coeffs };
        l.normalize();
        l
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, &(e, c)| acc + Self::monomial(c, e))
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        let idx = e - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms as (exponent, coefficient), ascending.
    pub fn terms(&self) -> Vec<(i64, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.low + k as i64, c.clone()))
            .collect()
    }

    /// Applies v ↦ v⁻¹.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_parts(-self.max_exp().unwrap(), coeffs)
    }

    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentInt { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_parts(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let p = if e >= 0 { num_traits::pow(x.clone(), e as usize) } else { num_traits::pow(x.recip(), (-e) as usize) };
            acc += p * BigRational::from_integer(c);
        }
        acc
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |a, c| a + c)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentInt) -> Option<LaurentInt> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Long division on the underlying polynomials, highest terms first.
        let dc = &d.coeffs;
        let dlead = dc.last().unwrap();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n < dc.len() {
            return None;
        }
        let qlen = n - dc.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + dc.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(dlead);
            if !r.is_zero() {
                return None;
            }
            for (t, dt) in dc.iter().enumerate() {
                rem[k + t] -= &qk * dt;
            }
            quot[k] = qk;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_parts(self.low - d.low, quot))
    }

    /// Content gcd of the integer coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Terms with negative exponent.
    pub fn negative_part(&self) -> LaurentInt {
        let keep = (-self.low).clamp(0, self.coeffs.len() as i64) as usize;
        LaurentInt::from_parts(self.low, self.coeffs[..keep].to_vec())
    }

    /// Greatest common divisor up to units ±vᵏ, normalized to lowest
    /// exponent 0 and a positive leading coefficient.
    pub fn gcd(&self, other: &LaurentInt) -> LaurentInt {
        if self.is_zero() {
            return other.unit_normal();
        }
        if other.is_zero() {
            return self.unit_normal();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (primitive(&self.coeffs), primitive(&other.coeffs));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive(&r);
        }
        LaurentInt::from_parts(0, a.into_iter().map(|c| c * &content).collect()).unit_normal()
    }

    /// The associate with lowest exponent 0 and positive leading coefficient.
    pub fn unit_normal(&self) -> LaurentInt {
        let coeffs = if self.leading_sign() == Ordering::Less { self.coeffs.iter().map(|c| -c).collect() } else { self.coeffs.clone() };
        LaurentInt { low: 0, coeffs }
    }

    /// Sign-normalizing key: positive leading coefficient.
    pub fn leading_sign(&self) -> Ordering {
        match self.coeffs.last() {
            None => Ordering::Equal,
            Some(c) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }
}

fn primitive(c: &[BigInt]) -> Vec<BigInt> {
    let mut v = c.to_vec();
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Vec::new();
    }
    for x in &mut v {
        *x = &*x / &g;
    }
    v
}

/// A nonzero multiple of a mod b, for nonzero b.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &lr * bk;
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    r
}

impl Add for &LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.max_exp().unwrap().max(rhs.max_exp().unwrap());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + k] += c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - low) as usize + k] += c;
        }
        LaurentInt::from_parts(low, coeffs)
    }
}

impl Sub for &LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        self + &(-rhs)
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        if self.is_zero() || rhs.is_zero() {
            return LaurentInt::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentInt::from_parts(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: LaurentInt) -> LaurentInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -&self
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().into_iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = a.is_one();
            match e {
                0 => write!(f, "{a}")?,
                1 if unit => write!(f, "v")?,
                1 => write!(f, "{a}v")?,
                _ if unit => write!(f, "v^{e}")?,
                _ => write!(f, "{a}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(i64, String)> = self.terms().into_iter().map(|(e, c)| (e, c.to_string())).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<(i64, String)> = Vec::deserialize(d)?;
        let mut acc = LaurentInt::zero();
        for (e, c) in terms {
            let c: BigInt = c.parse().map_err(serde::de::Error::custom)?;
            acc = acc + LaurentInt::from_parts(e, vec![c]);
        }
        Ok(acc)
    }
}

/// Quantum integer [n] = (vⁿ − v⁻ⁿ)/(v − v⁻¹).
pub fn qint(n: u32) -> LaurentInt {
    let mut acc = LaurentInt::zero();
    let n = n as i64;
    for k in 0..n {
        acc = acc + LaurentInt::monomial(1, n - 1 - 2 * k);
    }
    acc
}

pub fn qfactorial(n: u32) -> LaurentInt {
    (1..=n).fold(LaurentInt::one(), |acc, k| &acc * &qint(k))
}

/// Gaussian binomial [n choose m] in the balanced (bar-invariant) normalization.
pub fn qbinom(n: u32, m: u32) -> Result<LaurentInt> {
    if m > n {
        return Err(Error::Domain(format!("qbinom({n},{m}) with m > n")));
    }
    let num = qfactorial(n);
    let den = &qfactorial(m) * &qfactorial(n - m);
    num.div_exact(&den).ok_or_else(|| Error::Contract("quantum factorial quotient not exact".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        let a = &qint(2) * &qint(3);
        let b = &qint(2) * &LaurentInt::from_terms(&[(0, 2), (1, 1)]);
        assert_eq!(a.gcd(&b), qint(2).unit_normal());
        assert_eq!(qint(3).gcd(&qint(2)), LaurentInt::one());
        assert_eq!(LaurentInt::monomial(-6, 3).gcd(&LaurentInt::constant(4)), LaurentInt::constant(2));
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(2, 1).unwrap(), LaurentInt::from_terms(&[(1, 1), (-1, 1)]));
        assert_eq!(qbinom(5, 0).unwrap(), LaurentInt::one());
        assert_eq!(qbinom(4, 2).unwrap(), LaurentInt::from_terms(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]));
        assert!(qbinom(1, 2).is_err());
    }

    #[test]
    fn qbinom_symmetry_bar_and_classical_limit() {
        for n in 0..8u32 {
            for m in 0..=n {
                let b = qbinom(n, m).unwrap();
                assert_eq!(b, qbinom(n, n - m).unwrap());
                assert_eq!(b.bar(), b);
                let classical = (0..m).fold(BigInt::one(), |acc, k| acc * (n - k) / (k + 1));
                assert_eq!(b.eval_at_one(), classical);
            }
        }
    }

    #[test]
    fn division_roundtrip_and_failure() {
        let a = LaurentInt::from_terms(&[(3, 2), (0, -1), (-2, 5)]);
        let b = LaurentInt::from_terms(&[(1, 1), (-1, -3)]);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(LaurentInt::from_terms(&[(0, 1), (1, 1)]).div_exact(&LaurentInt::constant(2)).is_none());
    }

    #[test]
    fn display_and_serde() {
        let a = LaurentInt::from_terms(&[(2, 1), (0, -3), (-1, 1)]);
        assert_eq!(a.to_string(), "v^2 - 3 + v^-1");
        let json = serde_json::to_string(&a).unwrap();
        let back: LaurentInt = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
