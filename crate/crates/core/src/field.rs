//! Small finite fields F_q (q ≤ 256) with table arithmetic.
//!
//! Elements are encoded as integers `0..q`; for q = p^k an element is the
//! base-p digit string of its coefficients in F_p[t]/(f), so `0..p` is the
//! prime subfield and `1` is the unit.

use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elt = u8;

#[derive(Debug)]
pub struct Field {
    q: usize,
    p: usize,
    k: u32,
    add: Vec<Elt>,
    mul: Vec<Elt>,
    neg: Vec<Elt>,
    inv: Vec<Elt>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Field {}

/// Returns `(p, k)` with `q = p^k`, or `None` when q is not a prime power.
pub fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut n = q;
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some((p, k))
}

fn digits(mut x: usize, p: usize, k: u32) -> Vec<usize> {
    let mut d = vec![0; k as usize];
    for slot in d.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    d
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplies two polynomials over F_p given low-degree-first and reduces by
/// the monic `modulus` (degree k, leading coefficient implicit).
fn polymulmod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let k = modulus.len();
    let mut prod = vec![0usize; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c != 0 {
            prod[deg] = 0;
            for (t, &m) in modulus.iter().enumerate() {
                let idx = deg - k + t;
                prod[idx] = (prod[idx] + (p - c) * m % p) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

/// Remainder of `a` modulo the monic polynomial `m` (both low-degree-first,
/// `m` given with its leading 1).
fn polyrem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (t, &mt) in m.iter().enumerate() {
            r[shift + t] = (r[shift + t] + (p - c) * mt % p) % p;
        }
        r.pop();
    }
    r
}

fn find_irreducible(p: usize, k: u32) -> Vec<usize> {
    let k = k as usize;
    if k == 1 {
        return vec![0];
    }
    let q = p.pow(k as u32);
    for code in 0..q {
        let low = digits(code, p, k as u32);
        if low[0] == 0 {
            continue;
        }
        let mut full = low.clone();
        full.push(1);
        let reducible = (1..=k / 2).any(|d| {
            (0..p.pow(d as u32)).any(|c| {
                let mut div = digits(c, p, d as u32);
                div.push(1);
                polyrem(&full, &div, p).iter().all(|&x| x == 0)
            })
        });
        if !reducible {
            return low;
        }
    }
    unreachable!("an irreducible polynomial exists for every degree")
}

impl Field {
    pub fn new(q: usize) -> Result<Arc<Field>> {
        if q > 256 {
            return Err(Error::Domain(format!("field size {q} exceeds 256")));
        }
        let (p, k) = prime_power(q).ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
        let modulus = find_irreducible(p, k);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as Elt;
                let m = if k == 1 { vec![a * b % p] } else { polymulmod(&da, &db, &modulus, p) };
                mul[a * q + b] = undigits(&m, p) as Elt;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Elt;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Elt;
                }
            }
        }
        Ok(Arc::new(Field { q, p, k, add, mul, neg, inv }))
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }
    #[inline]
    pub fn characteristic(&self) -> usize {
        self.p
    }
    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.add[a as usize * self.q + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul[a as usize * self.q + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        self.neg[a as usize]
    }
    /// Inverse of a nonzero element. Zero maps to zero.
    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        (0..self.q).map(|x| x as Elt)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> Elt {
        n.rem_euclid(self.p as i64) as Elt
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(q: usize) {
        let f = Field::new(q).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_small_orders() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            check_axioms(q);
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(13), Some((13, 1)));
        assert!(Field::new(6).is_err());
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_one() {
        for q in [4, 8, 9, 16] {
            let f = Field::new(q).unwrap();
            let has_generator = f.elements().skip(1).any(|g| {
                let mut x = g;
                let mut order = 1;
                while x != 1 {
                    x = f.mul(x, g);
                    order += 1;
                }
                order == q - 1
            });
            assert!(has_generator);
        }
    }
}
