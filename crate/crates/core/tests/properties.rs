use std::sync::{Arc, OnceLock};

use affine_hall::catalog::Catalog;
use affine_hall::exec::Exec;
use affine_hall::field::{Elt, Field};
use affine_hall::flags::{self, Word};
use affine_hall::hall::Hall;
use affine_hall::mat::{self, Mat};
use affine_hall::quiver::{DimVec, Quiver};
use affine_hall::ring::{hook_length_dimension, kostka, partitions, qbinom, LaurentInt, Partition, ScalarSqrtQ};
use affine_hall::uqminus::{CartanMatrix, UElement, UqMinus};
use affine_hall::{checks, rep};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

fn laurent() -> impl Strategy<Value = LaurentInt> {
    (-4i64..=4, prop::collection::vec(-5i64..=5, 0..5)).prop_map(|(low, cs)| LaurentInt::from_parts(low, cs.into_iter().map(BigInt::from).collect()))
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentInt> {
    laurent().prop_filter("nonzero", |x| !x.is_zero())
}

fn word(nv: usize, max_len: usize, max_s: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=max_s, 0..nv), 1..=max_len).prop_map(Word)
}

fn kronecker_hall(q: usize) -> &'static Hall {
    static HALLS: OnceLock<Vec<Hall>> = OnceLock::new();
    let halls = HALLS.get_or_init(|| {
        [2, 3]
            .iter()
            .map(|&q| {
                let c = Catalog::build(Arc::new(Quiver::kronecker()), Field::new(q).unwrap(), &DimVec(vec![2, 2]), Exec::Parallel).unwrap();
                Hall::new(Arc::new(c), Exec::Parallel)
            })
            .collect()
    });
    &halls[q - 2]
}

fn uq(kind: usize) -> &'static UqMinus {
    static UQ: OnceLock<Vec<UqMinus>> = OnceLock::new();
    &UQ.get_or_init(|| {
        vec![UqMinus::new(CartanMatrix::finite_a(2), 6), UqMinus::new(CartanMatrix::from_quiver(&Quiver::kronecker()), 5)]
    })[kind]
}

fn element(uq: &UqMinus, letters: &[usize], coeffs: &[LaurentInt], n: usize) -> UElement {
    // Σ c_k · (monomial of a rotation of the letters)
    let mut weight = DimVec::zero(n);
    for &i in letters {
        weight = &weight + &DimVec::unit(n, i);
    }
    let mut acc = uq.zero(&weight).unwrap();
    for (k, c) in coeffs.iter().enumerate() {
        let mut w = letters.to_vec();
        w.rotate_left(k % letters.len());
        acc = acc.add(&uq.monomial(&w).unwrap().scale(c)).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn laurent_bar_is_an_involutive_ring_map(a in laurent(), b in laurent()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
    }

    #[test]
    fn laurent_division_and_gcd(a in nonzero_laurent(), b in nonzero_laurent(), c in nonzero_laurent()) {
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        let g = (&a * &c).gcd(&(&b * &c));
        prop_assert!((&a * &c).div_exact(&g).is_some());
        prop_assert!((&b * &c).div_exact(&g).is_some());
        // c divides both, hence divides the gcd
        prop_assert!(g.div_exact(&c).is_some());
    }

    #[test]
    fn specialization_is_a_ring_map(a in laurent(), b in laurent(), qi in 0usize..QS.len()) {
        let q = QS[qi] as u64;
        let (x, y) = (ScalarSqrtQ::from_laurent(q, &a), ScalarSqrtQ::from_laurent(q, &b));
        prop_assert_eq!(ScalarSqrtQ::from_laurent(q, &(&a * &b)), &x * &y);
        prop_assert_eq!(ScalarSqrtQ::from_laurent(q, &(&a + &b)), &x + &y);
    }

    #[test]
    fn gaussian_binomials(n in 0u32..10, m in 0u32..10) {
        prop_assume!(m <= n);
        let g = qbinom(n, m).unwrap();
        prop_assert_eq!(g.bar(), g.clone());
        prop_assert_eq!(g.clone(), qbinom(n, n - m).unwrap());
        let binom = (0..m).fold(BigInt::from(1), |acc, k| acc * (n - k) / (k + 1));
        prop_assert_eq!(g.eval_at_one(), binom);
    }

    #[test]
    fn field_axioms(qi in 0usize..QS.len(), xs in prop::collection::vec(any::<u8>(), 3)) {
        let f = Field::new(QS[qi]).unwrap();
        let q = f.q() as u8;
        let (a, b, c): (Elt, Elt, Elt) = (xs[0] % q, xs[1] % q, xs[2] % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        let mut power = 1;
        for _ in 0..f.q() {
            power = f.mul(power, a);
        }
        prop_assert_eq!(power, a);
    }

    #[test]
    fn rank_nullity(qi in 0usize..QS.len(), rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let f = Field::new(QS[qi]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Elt> = (0..rows * cols).map(|_| rand::Rng::gen_range(&mut rng, 0..f.q()) as Elt).collect();
        let m = Mat::from_rows(rows, cols, data);
        let r = mat::rank(&f, &m);
        prop_assert_eq!(r, mat::rank(&f, &m.transpose()));
        let k = mat::kernel(&f, &m);
        prop_assert_eq!(k.cols, cols - r);
        prop_assert!(m.mul(&f, &k).is_zero());
    }

    #[test]
    fn flag_enumeration_matches_formula(w in word(2, 4, 2), qi in 0usize..2) {
        let quiver = Quiver::kronecker();
        let f = Field::new(QS[qi]).unwrap();
        prop_assert_eq!(flags::enumerate_flags(&f, &quiver, &w).len() as u128, flags::flag_count(&quiver, &w, f.q() as u128));
    }

    #[test]
    fn hall_word_bracketings_agree(w in word(2, 4, 2), q in 2usize..=3) {
        let nv = 2;
        prop_assume!(w.weight(nv).le(&DimVec(vec![2, 2])));
        let hall = kronecker_hall(q);
        let left = hall.evaluate_word(&w).unwrap();
        prop_assert_eq!(&left, &hall.evaluate_word_right(&w).unwrap());
        prop_assert_eq!(&left, &hall.from_count_function(&w).unwrap());
    }

    #[test]
    fn uq_product_is_associative_and_bar_multiplicative(
        kind in 0usize..2,
        a in prop::collection::vec(0usize..2, 1..3),
        b in prop::collection::vec(0usize..2, 1..3),
        c in prop::collection::vec(0usize..2, 1..2),
        ca in prop::collection::vec(laurent(), 1..3),
        cb in prop::collection::vec(laurent(), 1..3),
    ) {
        let uq = uq(kind);
        let (x, y, z) = (element(uq, &a, &ca, 2), element(uq, &b, &cb, 2), uq.monomial(&c).unwrap());
        let left = uq.mul(&uq.mul(&x, &y).unwrap(), &z).unwrap();
        let right = uq.mul(&x, &uq.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(uq.mul(&x, &y).unwrap().bar(), uq.mul(&x.bar(), &y.bar()).unwrap());
        prop_assert_eq!(x.bar().bar(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn euler_and_bgp_on_random_modules(seed in any::<u64>(), q in 2usize..=3) {
        for quiver in [Arc::new(Quiver::kronecker()), Arc::new(Quiver::affine_a(2))] {
            let e = checks::euler_identity(&quiver, q, 10, 3, seed, Exec::Sequential).unwrap();
            prop_assert!(e.pass(), "{:?}", e.failures);
            let b = checks::bgp_identity(&quiver, q, 5, 2, seed, Exec::Sequential).unwrap();
            prop_assert!(b.pass(), "{:?}", b.failures);
        }
    }

    #[test]
    fn direct_sums_add_hom_dimensions(seed in any::<u64>()) {
        let f = Field::new(2).unwrap();
        let quiver = Arc::new(Quiver::kronecker());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || {
            let d = vec![rand::Rng::gen_range(&mut rng, 0..=2usize), rand::Rng::gen_range(&mut rng, 0..=2usize)];
            rep::FqRep::random(f.clone(), quiver.clone(), d, &mut rng)
        };
        let (m, n, k) = (draw(), draw(), draw());
        let sum = m.direct_sum(&n);
        prop_assert_eq!(rep::hom_dim(&sum, &k).unwrap(), rep::hom_dim(&m, &k).unwrap() + rep::hom_dim(&n, &k).unwrap());
        prop_assert_eq!(rep::ext_dim(&k, &sum).unwrap(), rep::ext_dim(&k, &m).unwrap() + rep::ext_dim(&k, &n).unwrap());
    }
}

#[test]
fn imaginary_root_is_isotropic_for_every_builtin() {
    for quiver in [Quiver::kronecker(), Quiver::affine_a(2), Quiver::affine_a(3), Quiver::affine_d4()] {
        let delta = quiver.delta().clone();
        assert_eq!(quiver.euler_form(&delta, &delta), 0);
        for (root, kind) in quiver.positive_roots(&delta.scale(2)) {
            let form = quiver.euler_form(&root, &root);
            assert_eq!(form, if kind.real { 1 } else { 0 }, "{root}");
        }
    }
}

#[test]
fn young_lattice_identities() {
    for m in 1..=7 {
        let ps = partitions(m);
        let total: u64 = ps.iter().map(|p| hook_length_dimension(p).pow(2)).sum();
        assert_eq!(total, (1..=m as u64).product::<u64>());
        for lam in &ps {
            assert_eq!(kostka(lam, lam).unwrap(), 1);
            for mu in &ps {
                if kostka(lam, mu).unwrap() != 0 {
                    assert!(lam.dominates(mu), "{lam} {mu}");
                }
            }
        }
        // K_{λ,(1^m)} = f^λ
        let column = Partition::new(vec![1; m as usize]);
        for lam in &ps {
            assert_eq!(kostka(lam, &column).unwrap(), hook_length_dimension(lam));
        }
    }
}
