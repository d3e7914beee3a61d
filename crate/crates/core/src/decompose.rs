//! Krull–Schmidt decomposition and isomorphism tests.
//!
//! A representation splits as soon as its endomorphism algebra contains an
//! element that is neither nilpotent nor invertible: Fitting's lemma then
//! gives V = ker φᴺ ⊕ im φᴺ as representations. When End(M) is small every
//! element is inspected, so locality is certified exactly; larger algebras are
//! searched along a fixed pseudo-random sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Field;
use crate::mat::{self, Mat};
use crate::rep::{self, FqRep, Morphism};

/// Above this many elements End(M) is sampled instead of enumerated.
const EXHAUSTIVE_LIMIT: usize = 1 << 14;
const RANDOM_TRIALS: usize = 600;

fn combine(f: &Field, basis: &[Morphism], coeffs: &[u8]) -> Morphism {
    let mut acc: Morphism = basis[0].iter().map(|m| Mat::zeros(m.rows, m.cols)).collect();
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (a, m) in acc.iter_mut().zip(b) {
            *a = a.add(f, &m.scale(f, c));
        }
    }
    acc
}

fn is_splitting(f: &Field, phi: &Morphism) -> bool {
    !rep::is_nilpotent_morphism(f, phi) && !rep::is_invertible_morphism(f, phi)
}

/// An endomorphism that is neither nilpotent nor invertible, if one is found.
pub fn splitting_endomorphism(m: &FqRep) -> Option<Morphism> {
    let f = &m.field;
    let basis = rep::hom_basis(m, m).expect("same representation");
    let e = basis.len();
    if e <= 1 {
        return None;
    }
    let q = f.q();
    let exhaustive = (q as f64).powi(e as i32) <= EXHAUSTIVE_LIMIT as f64;
    for b in &basis {
        if is_splitting(f, b) {
            return Some(b.clone());
        }
    }
    if exhaustive {
        let total = q.pow(e as u32);
        let mut coeffs = vec![0u8; e];
        for code in 1..total {
            let mut x = code;
            for c in coeffs.iter_mut() {
                *c = (x % q) as u8;
                x /= q;
            }
            let phi = combine(f, &basis, &coeffs);
            if is_splitting(f, &phi) {
                return Some(phi);
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_f17e);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<u8> = (0..e).map(|_| rng.gen_range(0..q) as u8).collect();
        let phi = combine(f, &basis, &coeffs);
        if is_splitting(f, &phi) {
            return Some(phi);
        }
    }
    None
}

/// Fitting decomposition of M along φ: (ker φᴺ, im φᴺ).
fn fitting_split(m: &FqRep, phi: &Morphism) -> (FqRep, FqRep) {
    let f = &m.field;
    let n = m.dims.iter().copied().max().unwrap_or(0);
    let powers: Vec<Mat> = phi.iter().map(|p| p.pow(f, n)).collect();
    let kers: Vec<Mat> = powers.iter().map(|p| mat::kernel(f, p)).collect();
    let ims: Vec<Mat> = powers.iter().map(|p| mat::column_basis(f, p)).collect();
    (m.sub_rep(&kers), m.sub_rep(&ims))
}

pub fn is_indecomposable(m: &FqRep) -> bool {
    !m.is_zero() && splitting_endomorphism(m).is_none()
}

/// Indecomposable summands of M (with repetition, unordered).
pub fn decompose(m: &FqRep) -> Vec<FqRep> {
    if m.is_zero() {
        return Vec::new();
    }
    // Split off the parts concentrated at isolated vertices directly.
    let mut out = Vec::new();
    let mut stack = vec![m.clone()];
    while let Some(x) = stack.pop() {
        if x.is_zero() {
            continue;
        }
        if x.total_dim() == 1 {
            out.push(x);
            continue;
        }
        match splitting_endomorphism(&x) {
            None => out.push(x),
            Some(phi) => {
                let (a, b) = fitting_split(&x, &phi);
                stack.push(a);
                stack.push(b);
            }
        }
    }
    out
}

/// Isomorphism test for two indecomposables: M ≅ N iff some ψ∘φ with
/// φ ∈ Hom(M,N), ψ ∈ Hom(N,M) from fixed bases is not nilpotent.
pub fn indecomposables_isomorphic(a: &FqRep, b: &FqRep) -> bool {
    if a.dims != b.dims {
        return false;
    }
    let f = &a.field;
    let h1 = rep::hom_basis(a, b).expect("compatible");
    if h1.is_empty() {
        return false;
    }
    let h2 = rep::hom_basis(b, a).expect("compatible");
    for phi in &h1 {
        for psi in &h2 {
            if !rep::is_nilpotent_morphism(f, &rep::compose(f, psi, phi)) {
                return true;
            }
        }
    }
    false
}

/// Matches two lists of indecomposables as multisets up to isomorphism.
pub fn same_summands(xs: &[FqRep], ys: &[FqRep]) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = vec![false; ys.len()];
    'outer: for x in xs {
        for (k, y) in ys.iter().enumerate() {
            if !used[k] && indecomposables_isomorphic(x, y) {
                used[k] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_isomorphic(m: &FqRep, n: &FqRep) -> bool {
    if m.dims != n.dims {
        return false;
    }
    let h = rep::hom_dim(m, n).expect("compatible");
    if h != rep::hom_dim(m, m).expect("compatible") || h != rep::hom_dim(n, n).expect("compatible") {
        return false;
    }
    same_summands(&decompose(m), &decompose(n))
}

/// Number of units of End(M) by enumeration (small algebras only).
pub fn count_units(m: &FqRep) -> Option<u64> {
    let f = &m.field;
    let basis = rep::hom_basis(m, m).expect("same representation");
    let q = f.q();
    let e = basis.len();
    if (q as f64).powi(e as i32) > EXHAUSTIVE_LIMIT as f64 {
        return None;
    }
    let total = q.pow(e as u32);
    let mut coeffs = vec![0u8; e];
    let mut units = 0;
    for code in 1..total {
        let mut x = code;
        for c in coeffs.iter_mut() {
            *c = (x % q) as u8;
            x /= q;
        }
        if rep::is_invertible_morphism(f, &combine(f, &basis, &coeffs)) {
            units += 1;
        }
    }
    Some(units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use std::sync::Arc;

    fn kron_rep(q: usize, dims: Vec<usize>, a: Vec<u8>, b: Vec<u8>) -> FqRep {
        let f = Field::new(q).unwrap();
        let k = Arc::new(Quiver::kronecker());
        let (r, c) = (dims[0], dims[1]);
        FqRep::new(f, k, dims, vec![Mat::from_rows(r, c, a), Mat::from_rows(r, c, b)]).unwrap()
    }

    #[test]
    fn semisimple_and_zero() {
        let m = kron_rep(2, vec![2, 0], vec![], vec![]);
        let parts = decompose(&m);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.dims == vec![1, 0]));
        assert!(decompose(&kron_rep(2, vec![0, 0], vec![], vec![])).is_empty());
    }

    #[test]
    fn regular_simple_is_indecomposable() {
        let m = kron_rep(3, vec![1, 1], vec![1], vec![0]);
        assert_eq!(decompose(&m).len(), 1);
        assert!(is_indecomposable(&m));
    }

    #[test]
    fn distinct_points_of_p1_are_not_isomorphic() {
        let a = kron_rep(3, vec![1, 1], vec![1], vec![0]);
        let b = kron_rep(3, vec![1, 1], vec![0], vec![1]);
        let c = kron_rep(3, vec![1, 1], vec![2], vec![0]);
        assert!(!is_isomorphic(&a, &b));
        assert!(is_isomorphic(&a, &c));
        assert!(is_isomorphic(&a, &a));
    }

    #[test]
    fn level_two_homogeneous_module() {
        // x_a = I, x_b = Jordan block: one indecomposable R_{T,2}.
        let m = kron_rep(2, vec![2, 2], vec![1, 0, 0, 1], vec![0, 1, 0, 0]);
        assert!(is_indecomposable(&m));
        // x_a = I, x_b = 0: T ⊕ T.
        let n = kron_rep(2, vec![2, 2], vec![1, 0, 0, 1], vec![0, 0, 0, 0]);
        let parts = decompose(&n);
        assert_eq!(parts.len(), 2);
        assert!(indecomposables_isomorphic(&parts[0], &parts[1]));
    }

    #[test]
    fn units_of_local_ring() {
        let m = kron_rep(2, vec![2, 2], vec![1, 0, 0, 1], vec![0, 1, 0, 0]);
        // End = F_2[t]/t²: 2 units.
        assert_eq!(count_units(&m), Some(2));
    }
}
