//! Flags of type 𝐬 = (s₁i₁,…,s_n i_n): point counts of F_𝐬 and F̃_𝐬,
//! their dimensions, and x-stable flag counts.
//!
//! A flag V = V⁰ ⊇ V¹ ⊇ ⋯ ⊇ Vⁿ = 0 of type 𝐬 has V^{m−1}/V^m of dimension
//! s_m at vertex i_m, so the first entry of a word is the top quotient.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::mat::{self, Mat};
use crate::quiver::{DimVec, Quiver};
use crate::rep::FqRep;
use crate::ring::ScalarSqrtQ;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Word(pub Vec<(u32, usize)>);

impl Word {
    pub fn new(entries: Vec<(u32, usize)>) -> Word {
        Word(entries.into_iter().filter(|&(s, _)| s > 0).collect())
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn entries(&self) -> &[(u32, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, nv: usize) -> DimVec {
        let mut w = DimVec::zero(nv);
        for &(s, i) in &self.0 {
            w.0[i] += s as i64;
        }
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn split_at(&self, k: usize) -> (Word, Word) {
        (Word(self.0[..k].to_vec()), Word(self.0[k..].to_vec()))
    }

    /// Text form `(1j,1i)` using the quiver's vertex names.
    pub fn display(&self, quiver: &Quiver) -> String {
        let parts: Vec<String> = self.0.iter().map(|&(s, i)| format!("{s}{}", quiver.vertices()[i])).collect();
        format!("({})", parts.join(","))
    }

    /// Parses `(1j,1i)` or `1j,1i`; the vertex name follows the multiplicity.
    pub fn parse(quiver: &Quiver, text: &str) -> Result<Word> {
        let body = text.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for item in body.split(',') {
            let item = item.trim();
            let split = item.find(|c: char| !c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("word entry '{item}' has no vertex")))?;
            let (num, name) = item.split_at(split);
            let s: u32 = if num.is_empty() { 1 } else { num.parse().map_err(|_| Error::Parse(format!("bad multiplicity in '{item}'")))? };
            let i = quiver.vertex_index(name).ok_or_else(|| Error::Parse(format!("unknown vertex '{name}' in word")))?;
            out.push((s, i));
        }
        Ok(Word::new(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|&(s, i)| format!("{s}·{i}")).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagDims {
    pub flag: i64,
    pub stable: i64,
    pub fiber: i64,
}

/// dim F_𝐬 = Σ_{m<m', i_m=i_{m'}} s_m s_{m'}; the fiber of F̃_𝐬 → F_𝐬 is
/// the space of x with x_h(V^m) ⊆ V^m, of dimension
/// Σ_h Σ_{m ≤ m', i_m = s(h), i_{m'} = t(h)} s_m s_{m'}.
pub fn flag_dims(quiver: &Quiver, word: &Word) -> FlagDims {
    let e = word.entries();
    let mut flag = 0i64;
    for a in 0..e.len() {
        for b in a + 1..e.len() {
            if e[a].1 == e[b].1 {
                flag += (e[a].0 * e[b].0) as i64;
            }
        }
    }
    let mut fiber = 0i64;
    for &(s, t) in quiver.arrows() {
        for a in 0..e.len() {
            if e[a].1 != s {
                continue;
            }
            for b in a..e.len() {
                if e[b].1 == t {
                    fiber += (e[a].0 * e[b].0) as i64;
                }
            }
        }
    }
    FlagDims { flag, stable: flag + fiber, fiber }
}

/// Gaussian binomial coefficient at an integer q.
pub fn gaussian_binomial(n: u32, k: u32, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (q.pow(n - j) - 1) / (q.pow(j + 1) - 1);
    }
    acc
}

/// |F_𝐬(F_q)| as a product of q-multinomials, one per vertex.
pub fn flag_count(quiver: &Quiver, word: &Word, q: u128) -> u128 {
    let nv = quiver.num_vertices();
    let mut remaining: Vec<u32> = (0..nv).map(|i| word.weight(nv).get(i) as u32).collect();
    let mut total: u128 = 1;
    for &(s, i) in word.entries() {
        total *= gaussian_binomial(remaining[i], s, q);
        remaining[i] -= s;
    }
    total
}

/// Number of x-stable flags of type 𝐬, counted from the top: V¹ agrees with V
/// away from i₁ and has codimension s₁ at i₁, and is x-stable exactly when
/// V¹_{i₁} contains the images of all arrows into i₁.
pub fn stable_flag_count(word: &Word, x: &FqRep) -> Result<u64> {
    let nv = x.quiver.num_vertices();
    if word.weight(nv) != x.dimvec() {
        return Err(Error::Domain(format!("word weight {} differs from dimension {}", word.weight(nv), x.dimvec())));
    }
    Ok(count_from_top(word.entries(), x))
}

fn count_from_top(entries: &[(u32, usize)], x: &FqRep) -> u64 {
    let Some((&(s, i), rest)) = entries.split_first() else {
        return u64::from(x.is_zero());
    };
    let f = &x.field;
    let s = s as usize;
    let d = x.dims[i];
    if d < s {
        return 0;
    }
    let into = x.quiver.arrows_into(i);
    let imgs: Vec<&Mat> = into.iter().map(|&h| &x.mats[h]).collect();
    let w = if imgs.is_empty() { Mat::zeros(d, 0) } else { mat::column_basis(f, &Mat::hcat(&imgs, d)) };
    if w.cols + s > d {
        return 0;
    }
    let c = mat::complement(f, &w);
    let mut total = 0;
    for k in mat::subspaces(f, c.cols, d - s - w.cols) {
        let extra = c.mul(f, &k);
        let u = Mat::hcat(&[&w, &extra], d);
        let bases: Vec<Mat> = (0..nv_of(x)).map(|v| if v == i { u.clone() } else { Mat::identity(x.dims[v]) }).collect();
        let sub = x.sub_rep(&bases);
        total += count_from_top(rest, &sub);
    }
    total
}

/// The x-stable flags of type 𝐬 themselves, each as the chain V⁰ ⊇ V¹ ⊇ ⋯ ⊇ Vⁿ
/// of column bases per vertex in the coordinates of V.
pub fn stable_flags(word: &Word, x: &FqRep) -> Result<Vec<Vec<Vec<Mat>>>> {
    let nv = x.quiver.num_vertices();
    if word.weight(nv) != x.dimvec() {
        return Err(Error::Domain(format!("word weight {} differs from dimension {}", word.weight(nv), x.dimvec())));
    }
    let top: Vec<Mat> = x.dims.iter().map(|&d| Mat::identity(d)).collect();
    let mut out = Vec::new();
    flags_from_top(word.entries(), x, &top, &mut vec![top.clone()], &mut out);
    Ok(out)
}

fn flags_from_top(entries: &[(u32, usize)], x: &FqRep, abs: &[Mat], chain: &mut Vec<Vec<Mat>>, out: &mut Vec<Vec<Vec<Mat>>>) {
    let Some((&(s, i), rest)) = entries.split_first() else {
        if x.is_zero() {
            out.push(chain.clone());
        }
        return;
    };
    let f = &x.field;
    let s = s as usize;
    let d = x.dims[i];
    if d < s {
        return;
    }
    let into = x.quiver.arrows_into(i);
    let imgs: Vec<&Mat> = into.iter().map(|&h| &x.mats[h]).collect();
    let w = if imgs.is_empty() { Mat::zeros(d, 0) } else { mat::column_basis(f, &Mat::hcat(&imgs, d)) };
    if w.cols + s > d {
        return;
    }
    let c = mat::complement(f, &w);
    for k in mat::subspaces(f, c.cols, d - s - w.cols) {
        let u = Mat::hcat(&[&w, &c.mul(f, &k)], d);
        let bases: Vec<Mat> = (0..nv_of(x)).map(|v| if v == i { u.clone() } else { Mat::identity(x.dims[v]) }).collect();
        let sub = x.sub_rep(&bases);
        let next: Vec<Mat> = abs.iter().zip(&bases).map(|(a, b)| a.mul(f, b)).collect();
        chain.push(next.clone());
        flags_from_top(rest, &sub, &next, chain, out);
        chain.pop();
    }
}

/// The subquotient V^upper / V^lower of x for nested graded subspaces.
pub fn subquotient(x: &FqRep, upper: &[Mat], lower: &[Mat]) -> Result<FqRep> {
    let f = &x.field;
    let sub = x.sub_rep(upper);
    let coords: Vec<Mat> = upper
        .iter()
        .zip(lower)
        .map(|(u, l)| mat::solve(f, u, l).ok_or_else(|| Error::Domain("lower subspace is not contained in the upper one".into())))
        .collect::<Result<_>>()?;
    Ok(sub.quotient_rep(&coords))
}

fn nv_of(x: &FqRep) -> usize {
    x.quiver.num_vertices()
}

/// All flags of type 𝐬 on V, each as the list of graded subspaces
/// V¹,…,V^{n−1} given by column bases per vertex.
pub fn enumerate_flags(field: &Field, quiver: &Quiver, word: &Word) -> Vec<Vec<Vec<Mat>>> {
    let nv = quiver.num_vertices();
    let dims: Vec<usize> = (0..nv).map(|i| word.weight(nv).udim(i)).collect();
    let mut out = Vec::new();
    let start: Vec<Mat> = dims.iter().map(|&d| Mat::identity(d)).collect();
    flags_rec(field, word.entries(), start, &mut Vec::new(), &mut out);
    out
}

fn flags_rec(f: &Field, entries: &[(u32, usize)], cur: Vec<Mat>, chain: &mut Vec<Vec<Mat>>, out: &mut Vec<Vec<Vec<Mat>>>) {
    let Some((&(s, i), rest)) = entries.split_first() else {
        out.push(chain.clone());
        return;
    };
    let k = cur[i].cols;
    for sub in mat::subspaces(f, k, k - s as usize) {
        let mut next = cur.clone();
        next[i] = cur[i].mul(f, &sub);
        chain.push(next.clone());
        flags_rec(f, rest, next, chain, out);
        chain.pop();
    }
}

/// dim {x ∈ E_V : x_h(V^m_{s(h)}) ⊆ V^m_{t(h)} for all m}, by linear algebra.
pub fn stabilizer_dim(field: &Field, quiver: &Quiver, dims: &[usize], chain: &[Vec<Mat>]) -> usize {
    let mut total = 0;
    for &(s, t) in quiver.arrows() {
        let (ds, dt) = (dims[s], dims[t]);
        let unknowns = ds * dt;
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for level in chain {
            let b = &level[s];
            let l = mat::left_kernel(field, &level[t]);
            // (L X B)[r,c] = Σ_{a,b} L[r,a] X[a,b] B[b,c]
            for r in 0..l.rows {
                for c in 0..b.cols {
                    let mut row = vec![0u8; unknowns];
                    for a in 0..dt {
                        let la = l.get(r, a);
                        if la == 0 {
                            continue;
                        }
                        for bb in 0..ds {
                            row[a * ds + bb] = field.add(row[a * ds + bb], field.mul(la, b.get(bb, c)));
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let m = Mat::from_rows(rows.len(), unknowns, rows.concat());
        total += unknowns - if rows.is_empty() { 0 } else { mat::rank(field, &m) };
    }
    total
}

/// |F̃_𝐬(F_q)| = Σ over flags of q^{dim stabilizer}, computed flag by flag.
pub fn stable_pair_count(field: &Arc<Field>, quiver: &Quiver, word: &Word, exec: Exec) -> u128 {
    let nv = quiver.num_vertices();
    let dims: Vec<usize> = (0..nv).map(|i| word.weight(nv).udim(i)).collect();
    let flags = enumerate_flags(field, quiver, word);
    let q = field.q() as u128;
    exec.map(&flags, |chain| q.pow(stabilizer_dim(field, quiver, &dims, chain) as u32)).into_iter().sum()
}

/// One row of the tabulated count function.
#[derive(Clone, Debug)]
pub struct CountValue {
    pub class: usize,
    pub parts: Vec<(usize, usize)>,
    pub raw: u64,
    pub value: ScalarSqrtQ,
}

/// n_𝐬(x) = v^(−dim F̃_𝐬)·#{x-stable flags} on one representative per
/// G_V-orbit of E_V(F_q), in the catalog's class order.
pub fn count_function(word: &Word, catalog: &Catalog, exec: Exec) -> Result<Vec<CountValue>> {
    let quiver = &catalog.quiver;
    let nu = word.weight(quiver.num_vertices());
    let classes = catalog.iso_classes(&nu)?;
    let shift = flag_dims(quiver, word).stable;
    let q = catalog.q() as u64;
    let raws: Vec<u64> = exec.map(&classes, |c| count_from_top(word.entries(), &c.rep));
    Ok(classes
        .into_iter()
        .zip(raws)
        .enumerate()
        .map(|(k, (c, raw))| CountValue {
            class: k,
            parts: c.parts,
            raw,
            value: ScalarSqrtQ::v_pow(q, -shift).scale(&num_rational::BigRational::from_integer(raw.into())),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k() -> Arc<Quiver> {
        Arc::new(Quiver::kronecker())
    }

    fn w(e: &[(u32, usize)]) -> Word {
        Word::new(e.to_vec())
    }

    #[test]
    fn dims_examples() {
        let q = k();
        assert_eq!(flag_dims(&q, &w(&[(1, 0), (1, 0)])).flag, 1);
        let d = flag_dims(&q, &w(&[(1, 1), (1, 0)]));
        assert_eq!((d.flag, d.fiber, d.stable), (0, 2, 2));
        assert_eq!(flag_dims(&q, &w(&[(3, 0)])).flag, 0);
    }

    #[test]
    fn count_examples() {
        let q = k();
        assert_eq!(flag_count(&q, &w(&[(1, 0), (1, 0)]), 2), 3);
        assert_eq!(flag_count(&q, &w(&[(1, 1), (1, 0)]), 7), 1);
        assert_eq!(flag_count(&q, &w(&[(2, 0)]), 5), 1);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
    }

    #[test]
    fn stable_counts_on_regular_simple() {
        let f = Field::new(3).unwrap();
        let x = FqRep::new(f.clone(), k(), vec![1, 1], vec![Mat::from_rows(1, 1, vec![1]), Mat::from_rows(1, 1, vec![2])]).unwrap();
        assert_eq!(stable_flag_count(&w(&[(1, 1), (1, 0)]), &x).unwrap(), 1);
        assert_eq!(stable_flag_count(&w(&[(1, 0), (1, 1)]), &x).unwrap(), 0);
        let zero = FqRep::zero(f, k(), vec![2, 1]);
        let s = w(&[(1, 0), (1, 1), (1, 0)]);
        assert_eq!(stable_flag_count(&s, &zero).unwrap() as u128, flag_count(&k(), &s, 3));
    }

    #[test]
    fn stable_count_matches_flag_enumeration() {
        let f = Field::new(2).unwrap();
        let q = k();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let words = [w(&[(1, 0), (1, 1), (1, 0), (1, 1)]), w(&[(1, 1), (2, 0), (1, 1)]), w(&[(1, 1), (1, 1), (1, 0), (1, 0)])];
        for word in &words {
            let flags = enumerate_flags(&f, &q, word);
            for _ in 0..10 {
                let x = FqRep::random(f.clone(), q.clone(), vec![2, 2], &mut rng);
                let brute = flags.iter().filter(|chain| chain.iter().all(|lvl| x.is_stable(lvl))).count() as u64;
                assert_eq!(stable_flag_count(word, &x).unwrap(), brute);
            }
        }
    }

    #[test]
    fn stabilizer_dim_matches_fiber_formula() {
        let f = Field::new(3).unwrap();
        let q = k();
        for word in [w(&[(1, 1), (1, 0)]), w(&[(1, 0), (1, 1), (1, 0), (1, 1)]), w(&[(2, 1), (1, 0), (1, 0)])] {
            let dims: Vec<usize> = (0..2).map(|i| word.weight(2).udim(i)).collect();
            let fiber = flag_dims(&q, &word).fiber as usize;
            for chain in enumerate_flags(&f, &q, &word) {
                assert_eq!(stabilizer_dim(&f, &q, &dims, &chain), fiber);
            }
        }
    }

    #[test]
    fn stable_flags_agree_with_counts() {
        let f = Field::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let word = w(&[(1, 1), (1, 0), (1, 1), (1, 0)]);
        for _ in 0..10 {
            let x = FqRep::random(f.clone(), k(), vec![2, 2], &mut rng);
            let flags = stable_flags(&word, &x).unwrap();
            assert_eq!(flags.len() as u64, stable_flag_count(&word, &x).unwrap());
            for chain in &flags {
                assert_eq!(chain.len(), 5);
                assert!(chain.iter().all(|lvl| x.is_stable(lvl)));
                let q = subquotient(&x, &chain[0], &chain[2]).unwrap();
                assert_eq!(q.dims, vec![1, 1]);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let q = k();
        let word = Word::parse(&q, "(1j,2i)").unwrap();
        assert_eq!(word, w(&[(1, 1), (2, 0)]));
        assert_eq!(word.display(&q), "(1j,2i)");
        assert!(Word::parse(&q, "(1x)").is_err());
    }
}
