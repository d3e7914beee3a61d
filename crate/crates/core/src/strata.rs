//! The index set Δ_ν, strata X(a,λ), their point counts over F_q and the
//! partial order ≺.
//!
//! X(a,λ) consists of the x with (V,x) ≅ ⊕ a(V)V ⊕ T₁ ⊕ ⋯ ⊕ T_m for pairwise
//! non-isomorphic homogeneous regular simples T_k, m = |λ|; it depends on λ
//! only through m. Points are additionally sorted into finer level strata,
//! where a level-ℓ homogeneous summand R_{T,ℓ+1} contributes a part ℓ+1 to λ.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{self, Catalog, IndecLabel};
use crate::error::{Error, Result};
use crate::hall::{self, Hall};
use crate::quiver::DimVec;
use crate::rep::FqRep;
use crate::ring::{partitions, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumIndex {
    pub a: BTreeMap<IndecLabel, usize>,
    pub lam: Partition,
}

impl StratumIndex {
    pub fn m(&self) -> u32 {
        self.lam.weight()
    }

    /// Σ a(V)|V| + mδ.
    pub fn weight(&self, catalog: &Catalog) -> Result<DimVec> {
        let mut w = catalog.quiver.delta().scale(self.m() as i64);
        for (label, &mult) in &self.a {
            let k = catalog.index_of(label).ok_or_else(|| Error::Domain(format!("{label} is not in the catalog")))?;
            w = &w + &catalog.rep(k).dimvec().scale(mult as i64);
        }
        Ok(w)
    }

    /// Catalog parts of the discrete module M_a.
    pub fn a_parts(&self, catalog: &Catalog) -> Result<Vec<(usize, usize)>> {
        let mut parts: Vec<(usize, usize)> = self
            .a
            .iter()
            .map(|(label, &m)| catalog.index_of(label).map(|k| (k, m)).ok_or_else(|| Error::Domain(format!("{label} is not in the catalog"))))
            .collect::<Result<_>>()?;
        parts.sort_unstable();
        Ok(parts)
    }

    /// Same stratum X(a,λ) (same a and |λ|).
    pub fn same_stratum(&self, other: &StratumIndex) -> bool {
        self.a == other.a && self.m() == other.m()
    }
}

impl fmt::Display for StratumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = catalog::fingerprint_of(self.a.iter().map(|(l, &m)| (l.clone(), m)));
        write!(f, "[{a}; {}]", self.lam)
    }
}

/// Where a point of E_V sits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClass {
    /// Homogeneous summands in pairwise distinct tubes of degree one; λ
    /// lists their regular lengths.
    Level(StratumIndex),
    /// Two homogeneous summands share a tube.
    Repeated,
    /// A homogeneous summand is defined only over a proper extension of F_q.
    NonSplit,
    /// Some inhomogeneous tube contributes every ray at one level.
    Periodic,
}

impl PointClass {
    /// The stratum X(a,λ) containing the point, when there is one.
    pub fn stratum(&self) -> Option<(BTreeMap<IndecLabel, usize>, u32)> {
        match self {
            PointClass::Level(idx) if idx.lam.parts().iter().all(|&p| p == 1) => Some((idx.a.clone(), idx.m())),
            _ => None,
        }
    }
}

/// All (a,λ) ∈ Δ_ν in a fixed order: by m, then a, then λ.
pub fn enumerate_delta(catalog: &Catalog, nu: &DimVec) -> Result<Vec<StratumIndex>> {
    if !nu.le(&catalog.bound) {
        return Err(Error::Resource(format!("dimension {nu} exceeds the catalog bound {}", catalog.bound)));
    }
    let delta = catalog.quiver.delta().clone();
    let discrete: Vec<usize> = (0..catalog.len()).filter(|&k| catalog.label(k).is_discrete()).collect();
    let item_dims: Vec<Vec<usize>> = discrete.iter().map(|&k| catalog.rep(k).dims.clone()).collect();
    let mut out = Vec::new();
    let mut m = 0u32;
    loop {
        let rest = nu - &delta.scale(m as i64);
        if !rest.is_nonnegative() {
            break;
        }
        let target: Vec<usize> = (0..rest.len()).map(|i| rest.udim(i)).collect();
        let mut a_list: Vec<BTreeMap<IndecLabel, usize>> = Vec::new();
        for parts in catalog::multisets(&item_dims, &target) {
            let parts: Vec<(usize, usize)> = parts.into_iter().map(|(j, mult)| (discrete[j], mult)).collect();
            if aperiodic_by_tube(catalog, &parts)? {
                a_list.push(parts.iter().map(|&(k, mult)| (catalog.label(k).clone(), mult)).collect());
            }
        }
        a_list.sort();
        let lams = if m == 0 { vec![Partition::empty()] } else { partitions(m) };
        for a in &a_list {
            for lam in &lams {
                out.push(StratumIndex { a: a.clone(), lam: lam.clone() });
            }
        }
        m += 1;
    }
    Ok(out)
}

fn aperiodic_by_tube(catalog: &Catalog, parts: &[(usize, usize)]) -> Result<bool> {
    let mut by_tube: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for &(k, mult) in parts {
        if let IndecLabel::RegularInhomog { tube, .. } = catalog.label(k) {
            by_tube.entry(*tube).or_default().push((k, mult));
        }
    }
    for group in by_tube.values() {
        if !catalog.is_aperiodic(group)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classification of a point given by its Krull–Schmidt parts.
pub fn classify_parts(catalog: &Catalog, parts: &[(usize, usize)]) -> PointClass {
    let mut a = BTreeMap::new();
    let mut lam = Vec::new();
    let mut tubes = BTreeSet::new();
    for &(k, mult) in parts {
        match *catalog.label(k) {
            IndecLabel::RegularHomog { degree, param, level } => {
                if degree != 1 {
                    return PointClass::NonSplit;
                }
                if mult > 1 || !tubes.insert(param) {
                    return PointClass::Repeated;
                }
                lam.push(level + 1);
            }
            ref label => {
                a.insert(label.clone(), mult);
            }
        }
    }
    if matches!(aperiodic_by_tube(catalog, parts), Ok(false)) {
        return PointClass::Periodic;
    }
    PointClass::Level(StratumIndex { a, lam: Partition::new(lam) })
}

pub fn classify_point(catalog: &Catalog, x: &FqRep) -> Result<PointClass> {
    Ok(classify_parts(catalog, &catalog.identify(x)?))
}

/// |X(a,λ)(F_q)| counted at split points, i.e. Σ of orbit sizes over the
/// orbits in the stratum.
pub fn stratum_count(catalog: &Catalog, idx: &StratumIndex) -> Result<u128> {
    let nu = idx.weight(catalog)?;
    let classes = catalog.iso_classes(&nu)?;
    let key = (idx.a.clone(), idx.m());
    Ok(classes.iter().filter(|c| classify_parts(catalog, &c.parts).stratum().as_ref() == Some(&key)).map(|c| c.orbit_size).sum())
}

/// Point counts of all level strata of weight ν plus the repeated,
/// non-split and periodic remainders; the total is q^{dim E_V}.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PointCensus {
    pub level: BTreeMap<StratumIndex, u128>,
    pub repeated: u128,
    pub non_split: u128,
    pub periodic: u128,
}

impl PointCensus {
    pub fn total(&self) -> u128 {
        self.level.values().sum::<u128>() + self.repeated + self.non_split + self.periodic
    }
}

pub fn census(catalog: &Catalog, nu: &DimVec) -> Result<PointCensus> {
    let mut out = PointCensus::default();
    for c in catalog.iso_classes(nu)? {
        match classify_parts(catalog, &c.parts) {
            PointClass::Level(idx) => *out.level.entry(idx).or_default() += c.orbit_size,
            PointClass::Repeated => out.repeated += c.orbit_size,
            PointClass::NonSplit => out.non_split += c.orbit_size,
            PointClass::Periodic => out.periodic += c.orbit_size,
        }
    }
    Ok(out)
}

/// A split point of X(a,λ): M_a plus the first m homogeneous simples of
/// degree one.
pub fn representative(catalog: &Catalog, idx: &StratumIndex) -> Result<Vec<(usize, usize)>> {
    let mut parts = idx.a_parts(catalog)?;
    let simples = catalog.homogeneous_simples(1);
    let m = idx.m() as usize;
    if simples.len() < m {
        return Err(Error::Resource(format!("only {} split homogeneous simples over F_{}, {m} needed", simples.len(), catalog.q())));
    }
    parts.extend(simples[..m].iter().map(|&k| (k, 1)));
    parts.sort_unstable();
    Ok(parts)
}

/// Hom-order probes: the catalog indecomposables N with dimension ≤ ν, used
/// as dim Hom(N, −) and as dim Hom(−, N).
fn probes(catalog: &Catalog, nu: &DimVec) -> Vec<(bool, usize)> {
    catalog.within(nu).into_iter().flat_map(|k| [(true, k), (false, k)]).collect()
}

fn hom_probe(catalog: &Catalog, probe: (bool, usize), l: usize) -> usize {
    match probe {
        (true, n) => catalog.hom(n, l),
        (false, n) => catalog.hom(l, n),
    }
}

/// Hom dimensions of the point with the given parts against all probes.
pub fn point_profile(catalog: &Catalog, nu: &DimVec, parts: &[(usize, usize)]) -> Vec<usize> {
    probes(catalog, nu).into_iter().map(|pr| parts.iter().map(|&(l, m)| m * hom_probe(catalog, pr, l)).sum()).collect()
}

/// Hom profile of a generic point of X(a,λ): homogeneous simples with
/// parameters avoiding every probe, so Hom(N, T_k) = Hom(T_k, N) = 0 for
/// homogeneous N, while for other N these do not depend on T.
pub fn generic_profile(catalog: &Catalog, idx: &StratumIndex) -> Result<Vec<usize>> {
    let nu = idx.weight(catalog)?;
    let a = idx.a_parts(catalog)?;
    let m = idx.m() as usize;
    let t = if m > 0 {
        Some(*catalog.homogeneous_simples(1).first().ok_or_else(|| Error::Resource("no homogeneous simple of degree one".into()))?)
    } else {
        None
    };
    Ok(probes(catalog, &nu)
        .into_iter()
        .map(|pr| {
            let base: usize = a.iter().map(|&(l, mult)| mult * hom_probe(catalog, pr, l)).sum();
            let reg = match (t, catalog.label(pr.1)) {
                (_, IndecLabel::RegularHomog { .. }) | (None, _) => 0,
                (Some(t), _) => m * hom_probe(catalog, pr, t),
            };
            base + reg
        })
        .collect())
}

fn dominates(x: &[usize], y: &[usize]) -> bool {
    x.iter().zip(y).all(|(a, b)| a >= b)
}

/// Whether the point lies in the closure of X(a,λ), by the Hom-order.
pub fn in_closure(catalog: &Catalog, idx: &StratumIndex, parts: &[(usize, usize)]) -> Result<bool> {
    let nu = idx.weight(catalog)?;
    Ok(dominates(&point_profile(catalog, &nu, parts), &generic_profile(catalog, idx)?))
}

/// X(p) ⊆ X̄(r), by the Hom-order on generic points.
pub fn closure_contains(catalog: &Catalog, r: &StratumIndex, p: &StratumIndex) -> Result<bool> {
    if p.weight(catalog)? != r.weight(catalog)? {
        return Err(Error::Domain("strata of different weights".into()));
    }
    Ok(dominates(&generic_profile(catalog, p)?, &generic_profile(catalog, r)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StratumOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// (a,λ) ≺ (b,μ) iff X(a,λ) ⊆ X̄(b,μ)∖X(b,μ), or the closures agree and μ < λ.
pub fn stratum_order(catalog: &Catalog, p: &StratumIndex, r: &StratumIndex) -> Result<StratumOrder> {
    if p == r {
        return Ok(StratumOrder::Equal);
    }
    if p.same_stratum(r) {
        return Ok(if r.lam < p.lam { StratumOrder::Less } else { StratumOrder::Greater });
    }
    let le = closure_contains(catalog, r, p)?;
    let ge = closure_contains(catalog, p, r)?;
    Ok(match (le, ge) {
        (true, false) => StratumOrder::Less,
        (false, true) => StratumOrder::Greater,
        (false, false) => StratumOrder::Incomparable,
        (true, true) => return Err(Error::Contract(format!("distinct strata {p} and {r} have equal generic Hom profiles"))),
    })
}

/// p ≼ r.
pub fn precedes_eq(catalog: &Catalog, p: &StratumIndex, r: &StratumIndex) -> Result<bool> {
    Ok(matches!(stratum_order(catalog, p, r)?, StratumOrder::Less | StratumOrder::Equal))
}

/// Outcome of comparing the Hom-order with explicit degenerations.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Pairs (p, r) with X(p) ⊆ X̄(r) by both criteria.
    pub confirmed: usize,
    /// Hom-order containment with no chain of extension degenerations.
    pub unwitnessed: Vec<(String, String)>,
    /// Degeneration chains the Hom-order rejects; these would be errors.
    pub contradicted: Vec<(String, String)>,
    /// Single degenerations M ⇝ U ⊕ M/U that decrease some Hom dimension.
    pub non_monotone: usize,
}

/// Cross-checks the Hom-order on Δ_ν against chains M ⇝ U ⊕ M/U starting
/// from the split points of each stratum.
pub fn witness_check(hall: &Hall, nu: &DimVec) -> Result<WitnessReport> {
    let catalog = &hall.catalog;
    let dims: Vec<usize> = (0..nu.len()).map(|i| nu.udim(i)).collect();
    let table = hall.table(&dims)?;
    let n = table.len();
    let profiles: Vec<Vec<usize>> = table.parts.iter().map(|p| point_profile(catalog, nu, p)).collect();
    let mut report = WitnessReport::default();
    // One-step degenerations between orbits.
    let mut edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let subdims: Vec<Vec<usize>> = nu.below().into_iter().filter(|d| !d.is_zero() && d != nu).map(|d| (0..d.len()).map(|i| d.udim(i)).collect()).collect();
    for c in 0..n {
        let m = catalog.direct_sum(&table.parts[c]);
        for d in &subdims {
            for bases in hall::stable_subspaces(&m, d) {
                let mut split = catalog.identify(&m.sub_rep(&bases))?;
                split.extend(catalog.identify(&m.quotient_rep(&bases))?);
                let merged = merge_parts(&split);
                let target = table.index_of(&catalog.fingerprint(&merged)).ok_or_else(|| Error::Contract("degeneration outside the orbit table".into()))?;
                if target != c {
                    if !dominates(&profiles[target], &profiles[c]) {
                        report.non_monotone += 1;
                    }
                    edges[c].insert(target);
                }
            }
        }
    }
    let deltas = enumerate_delta(catalog, nu)?;
    let members: Vec<Vec<usize>> = deltas
        .iter()
        .map(|idx| {
            let key = (idx.a.clone(), idx.m());
            (0..n).filter(|&c| classify_parts(catalog, &table.parts[c]).stratum().as_ref() == Some(&key)).collect()
        })
        .collect();
    for (ri, r) in deltas.iter().enumerate() {
        if members[ri].is_empty() {
            continue;
        }
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = members[ri].iter().copied().collect();
        for &c in &members[ri] {
            seen[c] = true;
        }
        while let Some(c) = queue.pop_front() {
            for &t in &edges[c] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        for (pi, p) in deltas.iter().enumerate() {
            if p.same_stratum(r) || members[pi].is_empty() || !p.lam.parts().iter().all(|&x| x == 1) {
                continue;
            }
            let hom = closure_contains(catalog, r, p)?;
            let reached = members[pi].iter().any(|&c| seen[c]);
            match (hom, reached) {
                (true, true) => report.confirmed += 1,
                (true, false) => report.unwitnessed.push((p.to_string(), r.to_string())),
                (false, true) => report.contradicted.push((p.to_string(), r.to_string())),
                (false, false) => {}
            }
        }
    }
    Ok(report)
}

fn merge_parts(parts: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut acc: BTreeMap<usize, usize> = BTreeMap::new();
    for &(k, m) in parts {
        *acc.entry(k).or_default() += m;
    }
    acc.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::field::Field;
    use crate::quiver::Quiver;
    use std::sync::Arc;

    fn kron(q: usize, b: i64) -> Catalog {
        Catalog::build(Arc::new(Quiver::kronecker()), Field::new(q).unwrap(), &DimVec(vec![b, b]), Exec::Sequential).unwrap()
    }

    #[test]
    fn delta_sizes() {
        let c = kron(2, 3);
        assert_eq!(enumerate_delta(&c, &DimVec(vec![0, 0])).unwrap().len(), 1);
        let d1 = enumerate_delta(&c, &DimVec(vec![1, 1])).unwrap();
        assert_eq!(d1.len(), 2);
        assert_eq!(d1[0].to_string(), "[P0+I1; ()]");
        assert_eq!(enumerate_delta(&c, &DimVec(vec![2, 2])).unwrap().len(), 6);
    }

    #[test]
    fn census_partitions_points() {
        for q in [2, 3] {
            let c = kron(q, 2);
            for nu in [DimVec(vec![1, 1]), DimVec(vec![2, 2]), DimVec(vec![2, 1])] {
                let cen = census(&c, &nu).unwrap();
                let (_, expected) = c.mass_check(&nu).unwrap();
                assert_eq!(cen.total(), expected);
            }
        }
        let c = kron(2, 1);
        let d = enumerate_delta(&c, &DimVec(vec![1, 1])).unwrap();
        assert_eq!(stratum_count(&c, &d[0]).unwrap(), 1);
        assert_eq!(stratum_count(&c, &d[1]).unwrap(), 3);
    }

    #[test]
    fn classify_examples() {
        let c = kron(3, 2);
        let zero = FqRep::zero(c.field.clone(), c.quiver.clone(), vec![1, 1]);
        let PointClass::Level(idx) = classify_point(&c, &zero).unwrap() else { panic!() };
        assert_eq!(idx.to_string(), "[P0+I1; ()]");
        let hs = c.homogeneous_simples(1);
        let two = classify_parts(&c, &[(hs[0], 1), (hs[1], 1)]);
        assert!(matches!(&two, PointClass::Level(i) if i.lam == Partition::new(vec![1, 1])));
        let r2 = (0..c.len()).find(|&k| matches!(c.label(k), IndecLabel::RegularHomog { degree: 1, level: 1, .. })).unwrap();
        assert!(matches!(classify_parts(&c, &[(r2, 1)]), PointClass::Level(i) if i.lam == Partition::new(vec![2])));
        assert_eq!(classify_parts(&c, &[(hs[0], 2)]), PointClass::Repeated);
    }

    #[test]
    fn periodic_points() {
        let c = Catalog::build(Arc::new(Quiver::affine_a(2)), Field::new(2).unwrap(), &DimVec(vec![1, 1, 1]), Exec::Sequential).unwrap();
        let simple = |ray| (0..c.len()).find(|&k| *c.label(k) == IndecLabel::RegularInhomog { tube: 1, ray, level: 0 }).unwrap();
        assert_eq!(classify_parts(&c, &[(simple(1), 1), (simple(2), 1)]), PointClass::Periodic);
        assert!(matches!(classify_parts(&c, &[(simple(1), 1)]), PointClass::Level(_)));
        let census = census(&c, &DimVec(vec![1, 1, 1])).unwrap();
        assert_eq!(census.periodic, 1);
        assert_eq!(census.total(), 8);
    }

    #[test]
    fn order_examples() {
        let c = kron(3, 2);
        let d1 = enumerate_delta(&c, &DimVec(vec![1, 1])).unwrap();
        assert_eq!(stratum_order(&c, &d1[0], &d1[1]).unwrap(), StratumOrder::Less);
        assert_eq!(stratum_order(&c, &d1[1], &d1[1]).unwrap(), StratumOrder::Equal);
        let d2 = enumerate_delta(&c, &DimVec(vec![2, 2])).unwrap();
        let two = d2.iter().find(|i| i.a.is_empty() && i.lam == Partition::new(vec![2])).unwrap();
        let ones = d2.iter().find(|i| i.a.is_empty() && i.lam == Partition::new(vec![1, 1])).unwrap();
        assert_eq!(stratum_order(&c, two, ones).unwrap(), StratumOrder::Less);
        // strict partial order on Δ_{2δ}
        for p in &d2 {
            assert_eq!(stratum_order(&c, p, p).unwrap(), StratumOrder::Equal);
            for r in &d2 {
                for s in &d2 {
                    let pr = stratum_order(&c, p, r).unwrap() == StratumOrder::Less;
                    let rs = stratum_order(&c, r, s).unwrap() == StratumOrder::Less;
                    if pr && rs {
                        assert_eq!(stratum_order(&c, p, s).unwrap(), StratumOrder::Less);
                    }
                }
            }
        }
    }

    #[test]
    fn hom_order_agrees_with_degenerations() {
        let c = Arc::new(kron(3, 2));
        let h = Hall::new(c, Exec::Sequential);
        for nu in [DimVec(vec![1, 1]), DimVec(vec![2, 2])] {
            let r = witness_check(&h, &nu).unwrap();
            assert!(r.contradicted.is_empty() && r.unwitnessed.is_empty(), "{r:?}");
            assert_eq!(r.non_monotone, 0);
            assert!(r.confirmed > 0);
        }
    }
}
