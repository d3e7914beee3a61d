use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer partition with parts in weakly decreasing order.
///
/// The derived ordering is lexicographic on the parts, so for equal weight
/// `(1,1) < (2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dominance order: every prefix sum of `self` is at least that of `other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for k in 0..n {
            a += self.0.get(k).copied().unwrap_or(0);
            b += other.0.get(k).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// m!/∏λ_j!, the dimension of the permutation module M^λ.
    pub fn multinomial(&self) -> u64 {
        let fact = |n: u32| (1..=n as u64).product::<u64>();
        self.0.iter().fold(fact(self.weight()), |acc, &p| acc / fact(p))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of m, in increasing lexicographic order.
pub fn partitions(m: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Number of semistandard tableaux of shape `lam` and content `mu`.
pub fn kostka(lam: &Partition, mu: &Partition) -> Result<u64> {
    if lam.weight() != mu.weight() {
        return Err(Error::Domain(format!("kostka: weights of {lam} and {mu} differ")));
    }
    // Fill values 1, 2, … in turn; value k occupies a horizontal strip, so
    // the shape grows from one partition to the next by a horizontal strip of
    // size mu_k.
    let shape = vec![0u32; lam.len()];
    Ok(strips(lam.parts(), mu.parts(), &shape))
}

fn strips(target: &[u32], content: &[u32], prev: &[u32]) -> u64 {
    match content.split_first() {
        None => u64::from(prev == target),
        Some((&size, rest)) => {
            let mut next = prev.to_vec();
            let mut total = 0;
            grow_strip(target, rest, prev, 0, size, &mut next, &mut total);
            total
        }
    }
}

/// Enumerates shapes `next` with `prev ⊆ next ⊆ target` and `next/prev` a
/// horizontal strip of the given size (interlacing: next_r ≤ prev_{r-1}).
fn grow_strip(target: &[u32], rest: &[u32], prev: &[u32], row: usize, left: u32, next: &mut Vec<u32>, total: &mut u64) {
    if left == 0 {
        *total += strips(target, rest, next);
        return;
    }
    if row == prev.len() {
        return;
    }
    let ceiling = if row == 0 { target[0] } else { target[row].min(prev[row - 1]) };
    let cap = ceiling.saturating_sub(prev[row]).min(left);
    for add in 0..=cap {
        next[row] = prev[row] + add;
        grow_strip(target, rest, prev, row + 1, left - add, next, total);
    }
    next[row] = prev[row];
}

/// f^λ by the hook length formula.
pub fn hook_length_dimension(lam: &Partition) -> u64 {
    let parts = lam.parts();
    let mut hooks: u64 = 1;
    for (r, &len) in parts.iter().enumerate() {
        for c in 0..len {
            let arm = len - c - 1;
            let leg = parts[r + 1..].iter().filter(|&&l| l > c).count() as u32;
            hooks *= u64::from(arm + leg + 1);
        }
    }
    let m = lam.weight() as u64;
    (1..=m).product::<u64>() / hooks
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    heap_permute(m, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

fn cycle_type(perm: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        cycles.push(len);
    }
    cycles
}

/// Number of λ-tabloids fixed by a permutation with the given cycles: ways
/// to distribute whole cycles into rows of sizes λ_j.
fn fixed_tabloids(cycles: &[u32], rows: &mut [u32]) -> i64 {
    match cycles.split_first() {
        None => i64::from(rows.iter().all(|&r| r == 0)),
        Some((&c, rest)) => {
            let mut total = 0;
            for j in 0..rows.len() {
                if rows[j] >= c {
                    rows[j] -= c;
                    total += fixed_tabloids(rest, rows);
                    rows[j] += c;
                }
            }
            total
        }
    }
}

const MAX_BRUTE_FORCE: u32 = 7;

/// Irreducible characters of 𝔖_m, one value per group element (in a fixed
/// enumeration of permutations), obtained from permutation characters by
/// peeling off irreducibles in decreasing lexicographic order using only
/// inner products over the whole group.
pub fn symmetric_group_characters(m: u32) -> Result<BTreeMap<Partition, Vec<i64>>> {
    if m > MAX_BRUTE_FORCE {
        return Err(Error::Resource(format!("brute-force characters of S_{m} exceed the desk-scale limit")));
    }
    let perms = permutations(m as usize);
    let types: Vec<Vec<u32>> = perms.iter().map(|p| cycle_type(p)).collect();
    let order = perms.len() as i64;
    let inner = |a: &[i64], b: &[i64]| -> i64 {
        let s: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        debug_assert_eq!(s % order, 0);
        s / order
    };
    let mut chars: BTreeMap<Partition, Vec<i64>> = BTreeMap::new();
    for lam in partitions(m).into_iter().rev() {
        let mut rows = lam.parts().to_vec();
        let mut chi: Vec<i64> = types.iter().map(|t| fixed_tabloids(t, &mut rows)).collect();
        for psi in chars.values() {
            let mult = inner(&chi, psi);
            for (x, y) in chi.iter_mut().zip(psi) {
                *x -= mult * y;
            }
        }
        if inner(&chi, &chi) != 1 {
            return Err(Error::Contract(format!("peeled character for {lam} is not irreducible")));
        }
        chars.insert(lam, chi);
    }
    Ok(chars)
}

/// Multiplicity of each irreducible χ_μ in the permutation module M^λ.
pub fn perm_module_multiplicities(lam: &Partition) -> Result<BTreeMap<Partition, u64>> {
    let rows = lam.parts().to_vec();
    decompose_character(lam.weight(), |p| fixed_tabloids(&cycle_type(p), &mut rows.clone()))
}

/// Decomposes the character σ ↦ `chi(σ)` of 𝔖_m (σ as the image list of
/// 0..m) into irreducibles.
pub fn decompose_character<F: Fn(&[usize]) -> i64>(m: u32, chi: F) -> Result<BTreeMap<Partition, u64>> {
    let chars = symmetric_group_characters(m)?;
    let perms = permutations(m as usize);
    let values: Vec<i64> = perms.iter().map(|p| chi(p)).collect();
    let order = BigRational::from_integer((perms.len() as i64).into());
    let mut out = BTreeMap::new();
    for (mu, irr) in chars {
        let s: i64 = values.iter().zip(&irr).map(|(a, b)| a * b).sum();
        let mult = BigRational::from_integer(s.into()) / &order;
        if !mult.is_integer() || mult < BigRational::zero() {
            return Err(Error::Contract(format!("non-integral multiplicity for {mu}")));
        }
        let mult = mult.to_integer().to_u64().unwrap();
        if mult > 0 {
            out.insert(mu, mult);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn kostka_examples() {
        assert_eq!(kostka(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(kostka(&p(&[1, 1]), &p(&[2])).unwrap(), 0);
        assert_eq!(kostka(&p(&[3, 2]), &p(&[3, 2])).unwrap(), 1);
        assert_eq!(kostka(&p(&[3, 2]), &p(&[2, 2, 1])).unwrap(), 2);
        assert_eq!(kostka(&p(&[2, 2]), &p(&[1, 1, 1, 1])).unwrap(), 2);
        assert!(kostka(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn permutation_module_examples() {
        let m = perm_module_multiplicities(&p(&[1, 1])).unwrap();
        assert_eq!(m, BTreeMap::from([(p(&[1, 1]), 1), (p(&[2]), 1)]));
        let m = perm_module_multiplicities(&p(&[1, 1, 1])).unwrap();
        assert_eq!(m, BTreeMap::from([(p(&[1, 1, 1]), 1), (p(&[2, 1]), 2), (p(&[3]), 1)]));
        let m = perm_module_multiplicities(&p(&[4])).unwrap();
        assert_eq!(m, BTreeMap::from([(p(&[4]), 1)]));
    }

    #[test]
    fn lexicographic_order_and_counts() {
        assert!(p(&[1, 1]) < p(&[2]));
        assert!(p(&[2, 1, 1]) < p(&[2, 2]));
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(7).len(), 15);
        assert_eq!(p(&[2, 1]).multinomial(), 3);
    }

    #[test]
    fn characters_have_standard_tableau_degrees() {
        let chars = symmetric_group_characters(5).unwrap();
        for (mu, chi) in &chars {
            assert_eq!(chi[0] as u64, hook_length_dimension(mu));
            assert_eq!(hook_length_dimension(mu), kostka(mu, &Partition::new(vec![1; 5])).unwrap());
        }
        assert!(symmetric_group_characters(8).is_err());
    }
}
