//! Randomized and exhaustive verification sweeps shared by the command-line
//! suites and the acceptance tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::decompose::is_isomorphic;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::flags::{self, Word};
use crate::hall::{interpolate, Hall, HallElement, QPoly};
use crate::quiver::{DimVec, Quiver};
use crate::rep::{self, FqRep, Sign};
use crate::strata::{self, PointClass};
use crate::uqminus::{self, CartanMatrix, ConsistencyReport, UqMinus};

/// Field sizes used to fit polynomials in q from closed formulas.
pub const FIT_QS: [u64; 16] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29];

fn random_dims<R: Rng>(n: usize, max: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let d: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
        if d.iter().any(|&x| x > 0) {
            return d;
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EulerReport {
    pub q: usize,
    pub pairs: usize,
    pub failures: Vec<String>,
}

impl EulerReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// dim Hom(M,N) − dim Ext¹(M,N) = ⟨dim M, dim N⟩ on random pairs.
pub fn euler_identity(quiver: &Arc<Quiver>, q: usize, pairs: usize, max_dim: usize, seed: u64, exec: Exec) -> Result<EulerReport> {
    let field = Field::new(q)?;
    let n = quiver.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reps: Vec<(FqRep, FqRep)> = (0..pairs)
        .map(|_| {
            let (a, b) = (random_dims(n, max_dim, &mut rng), random_dims(n, max_dim, &mut rng));
            (FqRep::random(field.clone(), quiver.clone(), a, &mut rng), FqRep::random(field.clone(), quiver.clone(), b, &mut rng))
        })
        .collect();
    let out: Vec<Result<Option<String>>> = exec.map(&reps, |(m, k)| {
        let lhs = rep::hom_dim(m, k)? as i64 - rep::ext_dim(m, k)? as i64;
        let rhs = quiver.euler_form(&m.dimvec(), &k.dimvec());
        Ok((lhs != rhs).then(|| format!("{} vs {}: hom − ext = {lhs}, Euler form {rhs}", m.dimvec(), k.dimvec())))
    });
    let failures = out.into_iter().filter_map(|r| r.transpose()).collect::<Result<Vec<_>>>()?;
    Ok(EulerReport { q, pairs, failures })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BgpReport {
    pub q: usize,
    pub sinks: Vec<usize>,
    pub per_sink: usize,
    pub failures: Vec<String>,
}

impl BgpReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// M ≅ Φ_i⁻Φ_i⁺M ⊕ M(i) at every sink i.
pub fn bgp_identity(quiver: &Arc<Quiver>, q: usize, per_sink: usize, max_dim: usize, seed: u64, exec: Exec) -> Result<BgpReport> {
    let field = Field::new(q)?;
    let n = quiver.num_vertices();
    let sinks: Vec<usize> = (0..n).filter(|&i| quiver.is_sink(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for &i in &sinks {
        for _ in 0..per_sink {
            let d = random_dims(n, max_dim, &mut rng);
            cases.push((i, FqRep::random(field.clone(), quiver.clone(), d, &mut rng)));
        }
    }
    let out: Vec<Result<Option<String>>> = exec.map(&cases, |(i, m)| {
        let back = rep::bgp_reflect(*i, Sign::Minus, &rep::bgp_reflect(*i, Sign::Plus, m)?)?;
        let back = FqRep::new(m.field.clone(), m.quiver.clone(), back.dims, back.mats)?;
        let sum = back.direct_sum(&rep::sink_defect(*i, m));
        Ok((!is_isomorphic(m, &sum)).then(|| format!("sink {i}, dimension {}", m.dimvec())))
    });
    let failures = out.into_iter().filter_map(|r| r.transpose()).collect::<Result<Vec<_>>>()?;
    Ok(BgpReport { q, sinks, per_sink, failures })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagCount {
    pub q: usize,
    pub flags: u128,
    pub flags_formula: u128,
    pub stable_pairs: u128,
    pub stable_formula: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagRow {
    pub word: String,
    pub dim_flag: i64,
    pub dim_stable: i64,
    pub fiber: i64,
    pub degree_flag: usize,
    pub degree_stable: usize,
    pub counts: Vec<FlagCount>,
    pub pass: bool,
}

/// |F_s| and |F̃_s| counted by enumeration against |F_s| from Gaussian
/// binomials and |F_s|·q^fiber; the degree of |F_s| is fitted over FIT_QS.
pub fn flag_formulas(quiver: &Quiver, words: &[Word], qs: &[usize], exec: Exec) -> Result<Vec<FlagRow>> {
    let fields: Vec<Arc<Field>> = qs.iter().map(|&q| Field::new(q)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for w in words {
        let dims = flags::flag_dims(quiver, w);
        let values: Vec<(u64, BigInt)> = FIT_QS.iter().map(|&q| (q, BigInt::from(flags::flag_count(quiver, w, q as u128)))).collect();
        let poly = interpolate(&values, FIT_QS.len() - 3)?;
        let degree_flag = poly.degree().unwrap_or(0);
        // q^fiber·|F| has the fiber added to every exponent
        let degree_stable = degree_flag + dims.fiber as usize;
        let mut counts = Vec::new();
        let mut pass = degree_flag as i64 == dims.flag && degree_stable as i64 == dims.stable;
        for f in &fields {
            let q = f.q();
            let enumerated = flags::enumerate_flags(f, quiver, w).len() as u128;
            let formula = flags::flag_count(quiver, w, q as u128);
            let stable = flags::stable_pair_count(f, quiver, w, exec);
            let stable_formula = formula * (q as u128).pow(dims.fiber as u32);
            pass &= enumerated == formula && stable == stable_formula && poly_value(&poly, q) == Some(formula);
            counts.push(FlagCount { q, flags: enumerated, flags_formula: formula, stable_pairs: stable, stable_formula });
        }
        rows.push(FlagRow { word: w.display(quiver), dim_flag: dims.flag, dim_stable: dims.stable, fiber: dims.fiber, degree_flag, degree_stable, counts, pass });
    }
    Ok(rows)
}

fn poly_value(p: &QPoly, q: usize) -> Option<u128> {
    let v = p.eval(q as u64);
    v.is_integer().then(|| v.to_integer().try_into().ok()).flatten()
}

/// Every word with entries (s, i), s ≥ 1, of nonzero weight ≤ bound.
pub fn all_words(nv: usize, bound: &DimVec) -> Vec<Word> {
    fn go(nv: usize, rest: &mut Vec<i64>, cur: &mut Vec<(u32, usize)>, out: &mut Vec<Word>) {
        if !cur.is_empty() {
            out.push(Word(cur.clone()));
        }
        for i in 0..nv {
            for s in 1..=rest[i] {
                rest[i] -= s;
                cur.push((s as u32, i));
                go(nv, rest, cur, out);
                cur.pop();
                rest[i] += s;
            }
        }
    }
    let mut out = Vec::new();
    go(nv, &mut bound.0.clone(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A random word of weight ≤ bound with adjacent entries at distinct vertices.
pub fn random_word<R: Rng>(nv: usize, bound: &DimVec, rng: &mut R) -> Word {
    loop {
        let target: Vec<i64> = (0..nv).map(|i| rng.gen_range(0..=bound.get(i))).collect();
        if target.iter().any(|&x| x > 0) {
            return shuffled_word(&target, rng);
        }
    }
}

/// A random word whose weight has every component at least half the bound.
pub fn random_large_word<R: Rng>(nv: usize, bound: &DimVec, rng: &mut R) -> Word {
    let target: Vec<i64> = (0..nv).map(|i| rng.gen_range((bound.get(i) + 1) / 2..=bound.get(i))).collect();
    shuffled_word(&target, rng)
}

/// Letters of the target weight in random order, equal neighbours merged.
fn shuffled_word<R: Rng>(target: &[i64], rng: &mut R) -> Word {
    use rand::seq::SliceRandom;
    let mut letters: Vec<usize> = target.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize)).collect();
    letters.shuffle(rng);
    let mut merged: Vec<(u32, usize)> = Vec::new();
    for i in letters {
        match merged.last_mut() {
            Some((t, j)) if *j == i => *t += 1,
            _ => merged.push((1, i)),
        }
    }
    Word(merged)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct WordCheckReport {
    pub q: u64,
    pub words: usize,
    pub orbit_values: usize,
    pub splits: usize,
    pub associativity: usize,
    pub failures: Vec<String>,
}

impl WordCheckReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every word of weight ≤ bound: the count function equals the Hall
/// evaluation at every orbit, and each split s = s'·s'' factors as a
/// product; then random associativity triples.
pub fn word_checks(hall: &Hall, bound: &DimVec, triples: usize, seed: u64) -> Result<WordCheckReport> {
    let quiver = hall.quiver().clone();
    let nv = quiver.num_vertices();
    let mut memo: HashMap<Word, HallElement> = HashMap::new();
    let eval = |w: &Word, memo: &mut HashMap<Word, HallElement>| -> Result<HallElement> {
        if let Some(e) = memo.get(w) {
            return Ok(e.clone());
        }
        let e = hall.evaluate_word(w)?;
        memo.insert(w.clone(), e.clone());
        Ok(e)
    };
    let mut report = WordCheckReport { q: hall.q(), ..Default::default() };
    for w in all_words(nv, bound) {
        report.words += 1;
        let e = eval(&w, &mut memo)?;
        let cf = hall.from_count_function(&w)?;
        let table = hall.table(&w.weight(nv).0.iter().map(|&x| x as usize).collect::<Vec<_>>())?;
        report.orbit_values += table.len();
        if cf != e {
            report.failures.push(format!("{}: count function differs from the Hall evaluation", w.display(&quiver)));
        }
        for k in 1..w.len() {
            let (a, b) = w.split_at(k);
            let prod = hall.product(&eval(&a, &mut memo)?, &eval(&b, &mut memo)?)?;
            report.splits += 1;
            if prod != e {
                report.failures.push(format!("{} ≠ {}·{}", w.display(&quiver), a.display(&quiver), b.display(&quiver)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    // small bounds may admit no triple at all
    while report.associativity < triples && attempts < 100 * triples {
        attempts += 1;
        let ws: Vec<Word> = (0..3).map(|_| random_word(nv, bound, &mut rng)).collect();
        let total = ws.iter().fold(DimVec::zero(nv), |acc, w| &acc + &w.weight(nv));
        if !total.le(bound) {
            continue;
        }
        let (a, b, c) = (eval(&ws[0], &mut memo)?, eval(&ws[1], &mut memo)?, eval(&ws[2], &mut memo)?);
        let left = hall.product(&hall.product(&a, &b)?, &c)?;
        let right = hall.product(&a, &hall.product(&b, &c)?)?;
        report.associativity += 1;
        if left != right {
            report.failures.push(format!("associativity fails on {}, {}, {}", ws[0].display(&quiver), ws[1].display(&quiver), ws[2].display(&quiver)));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct HallFitReport {
    pub fit_qs: Vec<usize>,
    pub check_q: usize,
    pub triples: usize,
    pub max_degree: usize,
    pub failures: Vec<String>,
}

impl HallFitReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.triples > 0
    }
}

/// Hall numbers g^M_{N,L} for orbit types present at every q, fitted by the
/// interpolating polynomial through the fit values and compared with the
/// recount at check_q.
pub fn hall_fit(quiver: &Arc<Quiver>, bound: &DimVec, fit_qs: &[usize], check_q: usize, exec: Exec) -> Result<HallFitReport> {
    let mut all_q = fit_qs.to_vec();
    all_q.push(check_q);
    let halls: Vec<Hall> = all_q
        .iter()
        .map(|&q| Ok(Hall::new(Arc::new(Catalog::build(quiver.clone(), Field::new(q)?, bound, exec)?), exec)))
        .collect::<Result<_>>()?;
    let common = |nu: &DimVec| -> Result<Vec<String>> {
        let mut sets = Vec::new();
        for h in &halls {
            let s: BTreeSet<String> = h.catalog.iso_classes(nu)?.iter().map(|c| h.catalog.fingerprint(&c.parts)).collect();
            sets.push(s);
        }
        Ok(sets[0].iter().filter(|fp| sets.iter().all(|s| s.contains(*fp))).cloned().collect())
    };
    let mut report = HallFitReport { fit_qs: fit_qs.to_vec(), check_q, ..Default::default() };
    let mut by_weight: BTreeMap<DimVec, Vec<String>> = BTreeMap::new();
    for nu in bound.below() {
        by_weight.insert(nu.clone(), common(&nu)?);
    }
    for nu in bound.below().into_iter().filter(|n| !n.is_zero()) {
        for sub in nu.below() {
            let quot = &nu - &sub;
            if sub.is_zero() || quot.is_zero() {
                continue;
            }
            for m in &by_weight[&nu] {
                for n in &by_weight[&quot] {
                    for l in &by_weight[&sub] {
                        let values: Vec<u64> = halls.iter().map(|h| h.hall_number_fp(m, n, l)).collect::<Result<_>>()?;
                        let fit: Vec<(u64, BigInt)> = fit_qs.iter().zip(&values).map(|(&q, &g)| (q as u64, BigInt::from(g))).collect();
                        let poly = interpolate(&fit, fit.len() - 1)?;
                        report.triples += 1;
                        report.max_degree = report.max_degree.max(poly.degree().unwrap_or(0));
                        let predicted = poly.eval(check_q as u64);
                        let actual = *values.last().unwrap();
                        if predicted != num_rational::BigRational::from_integer(actual.into()) {
                            report.failures.push(format!("g^{m}_{{{n},{l}}}: predicted {predicted} at q={check_q}, counted {actual}"));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaReport {
    pub nu: DimVec,
    pub q: usize,
    pub enumerated: Vec<String>,
    pub exhaustive: Vec<String>,
    /// Indices needing more split homogeneous tubes than F_q provides.
    pub unrealized: Vec<String>,
}

impl DeltaReport {
    pub fn pass(&self) -> bool {
        self.enumerated == self.exhaustive
    }
}

/// Δ_ν from the index-set enumeration against the strata met by
/// classifying every orbit of E_ν(F_q).
pub fn delta_check(catalog: &Catalog, nu: &DimVec) -> Result<DeltaReport> {
    let tubes = catalog.homogeneous_simples(1).len();
    let (mut enumerated, mut unrealized) = (Vec::new(), Vec::new());
    for d in strata::enumerate_delta(catalog, nu)? {
        if d.lam.parts().len() <= tubes { &mut enumerated } else { &mut unrealized }.push(d.to_string());
    }
    let mut found = BTreeSet::new();
    for c in catalog.iso_classes(nu)? {
        if let PointClass::Level(idx) = strata::classify_parts(catalog, &c.parts) {
            found.insert(idx.to_string());
        }
    }
    enumerated.sort();
    unrealized.sort();
    Ok(DeltaReport { nu: nu.clone(), q: catalog.q(), enumerated, exhaustive: found.into_iter().collect(), unrealized })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectionRow {
    pub weight: DimVec,
    pub dim: usize,
    pub pass: bool,
}

/// Bar-invariant correction of the A₂ PBW lattice in every weight space of
/// total degree ≤ max_total.
pub fn a2_correction(max_total: i64) -> Result<Vec<CorrectionRow>> {
    let uq = UqMinus::new(CartanMatrix::finite_a(2), max_total.max(2));
    let mut rows = Vec::new();
    for nu in DimVec(vec![max_total, max_total]).below() {
        if nu.total() > max_total || nu.is_zero() {
            continue;
        }
        let lattice = uqminus::pbw_a2(&uq, &nu)?;
        let c = uqminus::lusztig_correction(&uq, &lattice)?;
        rows.push(CorrectionRow { dim: lattice.len(), pass: uqminus::check_correction(&c), weight: nu });
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolicReport {
    pub q: u64,
    pub serre: Vec<ConsistencyReport>,
    pub random: Vec<ConsistencyReport>,
    pub kostant: Vec<(DimVec, usize, u64)>,
}

impl SymbolicReport {
    pub fn pass(&self) -> bool {
        self.serre.iter().all(|r| r.relations > 0) && self.serre.iter().chain(&self.random).all(|r| r.pass())
            && self.kostant.iter().all(|(_, d, k)| *d as u64 == *k)
    }
}

/// Serre relations for every ordered pair of distinct vertices and `samples`
/// random identities of weight ≤ bound, each checked on the Hall side.
pub fn symbolic_check(hall: &Hall, bound: &DimVec, samples: usize, seed: u64) -> Result<SymbolicReport> {
    let quiver = hall.quiver();
    let n = quiver.num_vertices();
    let cartan = CartanMatrix::from_quiver(quiver);
    let max_total = bound.total().max(8);
    let uq = UqMinus::new(cartan.clone(), max_total);
    let mut serre = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let words: Vec<Word> = uqminus::serre_words(&cartan, i, j).into_iter().map(|(_, w)| w).collect();
            let weight = words[0].weight(n);
            if !weight.le(&hall.catalog.bound) {
                return Err(Error::Resource(format!("Serre weight {weight} exceeds the catalog bound")));
            }
            serre.push(uqminus::hall_consistency(&uq, hall, &words)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = Vec::new();
    while random.len() < samples {
        let nu = DimVec((0..n).map(|i| rng.gen_range(0..=bound.get(i))).collect());
        if nu.total() < 2 {
            continue;
        }
        let words = uqminus::random_identity(&uq, &nu, &mut rng)?;
        random.push(uqminus::hall_consistency(&uq, hall, &words)?);
    }
    let mut kostant = Vec::new();
    for nu in bound.below() {
        kostant.push((nu.clone(), uq.dim(&nu)?, uqminus::kostant_count(&cartan, &nu)));
    }
    Ok(SymbolicReport { q: hall.q(), serre, random, kostant })
}
