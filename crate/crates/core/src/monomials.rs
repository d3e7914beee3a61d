//! Monomial words: s(α), tube words, the λδ blocks and the assembled
//! s(a,λ); resolution and triangularity checks; the Kronecker embeddings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, IndecLabel};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::flags::{self, Word};
use crate::mat::Mat;
use crate::quiver::{AffineType, DimVec, Quiver};
use crate::rep::FqRep;
use crate::ring::{decompose_character, hook_length_dimension, kostka, partitions, Partition};
use crate::strata::{self, StratumIndex, StratumOrder};

/// s(α) = (α_{i_n} i_n, …, α_{i₀} i₀) for the admissible order i₀,…,i_n.
pub fn seq_alpha(order: &[usize], alpha: &DimVec) -> Word {
    Word::new(order.iter().rev().map(|&i| (alpha.get(i) as u32, i)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    Preprojective(u32),
    Tube(u32),
    Homogeneous(u32),
    Preinjective(i64),
}

/// Entries `start..end` of a word come from one factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequencePlan {
    pub index: StratumIndex,
    pub monomial_word: Word,
    pub resolution_word: Word,
    pub expected_shift: i64,
    pub blocks: Vec<Block>,
}

#[derive(Default)]
struct WordBuilder {
    entries: Vec<(u32, usize)>,
    blocks: Vec<Block>,
}

impl WordBuilder {
    fn push(&mut self, kind: BlockKind, w: &Word) {
        let start = self.entries.len();
        self.entries.extend_from_slice(w.entries());
        self.blocks.push(Block { kind, start, end: self.entries.len() });
    }
}

/// Search limit for tube words, in candidate sequences.
pub const DEFAULT_TUBE_SEARCH: usize = 4000;

/// Parts of a module living in one inhomogeneous tube, found by searching
/// words over the tube's regular simples: each candidate is a sequence of
/// (c, T) rendered as s(c·|T|), accepted when the count function is
/// supported on the orbit closure of M and is 1 on M itself.
pub fn tube_word(catalog: &Catalog, parts: &[(usize, usize)], limit: usize) -> Result<Word> {
    let tube_id = match parts.first().map(|&(k, _)| catalog.label(k)) {
        Some(IndecLabel::RegularInhomog { tube, .. }) => *tube,
        _ => return Err(Error::Domain("tube_word needs a module in an inhomogeneous tube".into())),
    };
    if !catalog.is_aperiodic(parts)? {
        return Err(Error::Domain(format!("{} is not aperiodic", catalog.fingerprint(parts))));
    }
    let tube = catalog.tubes.iter().find(|t| t.id == tube_id).ok_or_else(|| Error::Contract("unknown tube".into()))?;
    let simples: Vec<DimVec> = tube.simples.iter().map(|&k| catalog.rep(k).dimvec()).collect();
    let target = DimVec(catalog.parts_dims(parts).iter().map(|&x| x as i64).collect());
    let order = &catalog.order;
    let m = catalog.direct_sum(parts);
    let classes = catalog.iso_classes(&target)?;
    let own = strata::point_profile(catalog, &target, parts);
    let inside: Vec<bool> = classes.iter().map(|c| strata::point_profile(catalog, &target, &c.parts).iter().zip(&own).all(|(a, b)| a >= b)).collect();
    let mut tried = 0usize;
    // Depth-first over sequence lengths, shortest first.
    for len in 1..=target.total() as usize {
        let mut found = None;
        let mut seq: Vec<(u32, usize)> = Vec::new();
        search(&simples, &target, len, &mut seq, &mut |cand| {
            if found.is_some() || tried >= limit {
                return true;
            }
            tried += 1;
            let mut entries = Vec::new();
            for &(c, r) in cand {
                entries.extend_from_slice(seq_alpha(order, &simples[r].scale(c as i64)).entries());
            }
            let word = Word::new(entries);
            if flags::stable_flag_count(&word, &m).ok() != Some(1) {
                return false;
            }
            let ok = classes
                .iter()
                .zip(&inside)
                .all(|(c, &ins)| ins || flags::stable_flag_count(&word, &c.rep).map(|n| n == 0).unwrap_or(false));
            if ok {
                found = Some(word);
            }
            found.is_some()
        });
        if let Some(w) = found {
            return Ok(w);
        }
        if tried >= limit {
            break;
        }
    }
    Err(Error::Resource(format!("no tube word for {} within {limit} candidates", catalog.fingerprint(parts))))
}

/// Sequences of (multiplicity, simple) of the given length summing to the
/// target, adjacent simples distinct. The visitor returns true to stop.
fn search(simples: &[DimVec], rest: &DimVec, len: usize, seq: &mut Vec<(u32, usize)>, visit: &mut dyn FnMut(&[(u32, usize)]) -> bool) -> bool {
    if seq.len() == len {
        return rest.is_zero() && visit(seq);
    }
    for (r, d) in simples.iter().enumerate() {
        if seq.last().is_some_and(|&(_, p)| p == r) {
            continue;
        }
        let mut c = 1u32;
        loop {
            let left = rest - &d.scale(c as i64);
            if !left.is_nonnegative() {
                break;
            }
            seq.push((c, r));
            let stop = search(simples, &left, len, seq, visit);
            seq.pop();
            if stop {
                return true;
            }
            c += 1;
        }
    }
    false
}

/// s(a,λ) and its resolution variant.
pub fn build_plan(catalog: &Catalog, idx: &StratumIndex, tube_limit: usize) -> Result<SequencePlan> {
    let order = &catalog.order;
    let quiver = &catalog.quiver;
    let nv = quiver.num_vertices();
    let mut pre = Vec::new();
    let mut post = Vec::new();
    let mut tubes: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (label, &mult) in &idx.a {
        let k = catalog.index_of(label).ok_or_else(|| Error::Domain(format!("{label} is not in the catalog")))?;
        match *label {
            IndecLabel::Preprojective(m) => pre.push((m, catalog.rep(k).dimvec().scale(mult as i64))),
            IndecLabel::Preinjective(l) => post.push((l, catalog.rep(k).dimvec().scale(mult as i64))),
            IndecLabel::RegularInhomog { tube, .. } => tubes.entry(tube).or_default().push((k, mult)),
            IndecLabel::RegularHomog { .. } => return Err(Error::Domain(format!("homogeneous {label} cannot appear in a"))),
        }
    }
    pre.sort_by_key(|(m, _)| *m);
    post.sort_by_key(|(l, _)| *l);
    let mut head = WordBuilder::default();
    for (m, alpha) in &pre {
        head.push(BlockKind::Preprojective(*m), &seq_alpha(order, alpha));
    }
    for (t, parts) in &tubes {
        let mut parts = parts.clone();
        parts.sort_unstable();
        head.push(BlockKind::Tube(*t), &tube_word(catalog, &parts, tube_limit)?);
    }
    let mut tail = WordBuilder::default();
    for (l, beta) in &post {
        tail.push(BlockKind::Preinjective(*l), &seq_alpha(order, beta));
    }
    let delta = quiver.delta();
    let assemble = |middle: &[(u32, Word)]| -> (Word, Vec<Block>) {
        let mut b = WordBuilder { entries: head.entries.clone(), blocks: head.blocks.clone() };
        for (p, w) in middle {
            b.push(BlockKind::Homogeneous(*p), w);
        }
        let offset = b.entries.len();
        b.entries.extend_from_slice(&tail.entries);
        b.blocks.extend(tail.blocks.iter().map(|x| Block { kind: x.kind.clone(), start: x.start + offset, end: x.end + offset }));
        (Word(b.entries), b.blocks)
    };
    let lam_blocks: Vec<(u32, Word)> = idx.lam.parts().iter().map(|&p| (p, seq_alpha(order, &delta.scale(p as i64)))).collect();
    let (monomial_word, blocks) = assemble(&lam_blocks);
    let m = idx.m();
    let res_blocks: Vec<(u32, Word)> = if m > 0 { vec![(m, seq_alpha(order, &delta.scale(m as i64)))] } else { Vec::new() };
    let (resolution_word, _) = assemble(&res_blocks);
    let weight = idx.weight(catalog)?;
    if monomial_word.weight(nv) != weight || resolution_word.weight(nv) != weight {
        return Err(Error::Contract(format!("plan for {idx} has the wrong weight")));
    }
    let expected_shift = flags::flag_dims(quiver, &monomial_word).stable;
    Ok(SequencePlan { index: idx.clone(), monomial_word, resolution_word, expected_shift, blocks })
}

/// dim X(a,λ) = dim G_V − dim End(M) + m for a split point M.
pub fn stratum_dimension(catalog: &Catalog, idx: &StratumIndex) -> Result<i64> {
    let rep = strata::representative(catalog, idx)?;
    let dims = catalog.parts_dims(&rep);
    let g: usize = dims.iter().map(|d| d * d).sum();
    Ok(g as i64 - catalog.end_dim(&rep) as i64 + idx.m() as i64)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub index: String,
    pub word: String,
    pub points_checked: usize,
    pub own_points: usize,
    pub pass: bool,
    pub counterexamples: Vec<String>,
}

/// Fiber counts of the resolution word: 1 on every split point of X(idx)
/// and 0 off the closure of X(idx).
pub fn verify_resolution(catalog: &Catalog, idx: &StratumIndex, word: Option<&Word>, exec: Exec) -> Result<ResolutionReport> {
    let plan;
    let word = match word {
        Some(w) => w,
        None => {
            plan = build_plan(catalog, idx, DEFAULT_TUBE_SEARCH)?;
            &plan.resolution_word
        }
    };
    let nu = idx.weight(catalog)?;
    let classes = catalog.iso_classes(&nu)?;
    let key = (idx.a.clone(), idx.m());
    let checks: Vec<Result<Option<String>>> = exec.map(&classes, |c| {
        let own = strata::classify_parts(catalog, &c.parts).stratum().as_ref() == Some(&key);
        let inside = strata::in_closure(catalog, idx, &c.parts)?;
        if !own && inside {
            return Ok(None);
        }
        let n = flags::stable_flag_count(word, &c.rep)?;
        let fp = catalog.fingerprint(&c.parts);
        Ok(match (own, n) {
            (true, 1) | (false, 0) => None,
            (true, n) => Some(format!("{fp}: {n} flags on X(idx), expected 1")),
            (false, n) => Some(format!("{fp}: {n} flags outside the closure, expected 0")),
        })
    });
    let mut report = ResolutionReport { index: idx.to_string(), word: word.display(&catalog.quiver), points_checked: classes.len(), ..Default::default() };
    report.own_points = classes.iter().filter(|c| strata::classify_parts(catalog, &c.parts).stratum().as_ref() == Some(&key)).count();
    for r in checks {
        if let Some(msg) = r? {
            report.counterexamples.push(msg);
        }
    }
    report.pass = report.counterexamples.is_empty() && report.own_points > 0;
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TriangularityReport {
    pub nu: DimVec,
    pub q: usize,
    pub indices: Vec<String>,
    /// raw[row][col]: stable flags of the row's monomial word at a split
    /// point of the column's stratum.
    pub raw: Vec<Vec<u64>>,
    /// order[row][col] ∈ {"<", "=", ">", "|"}
    pub order: Vec<Vec<String>>,
    pub shifts: Vec<i64>,
    pub dimensions: Vec<i64>,
    pub support_ok: bool,
    pub diagonal_ok: bool,
    pub kostka_ok: bool,
    pub module_factor_ok: bool,
    pub shift_ok: bool,
    pub counterexamples: Vec<String>,
}

impl TriangularityReport {
    pub fn pass(&self) -> bool {
        self.support_ok && self.diagonal_ok && self.kostka_ok && self.module_factor_ok && self.shift_ok
    }
}

/// Multiplicities of the irreducible 𝔖_m-modules in M^λ predicted by
/// Kostka numbers: χ_μ appears K_{μλ} times.
pub fn kostka_multiplicities(lam: &Partition) -> Result<BTreeMap<Partition, u64>> {
    let mut out = BTreeMap::new();
    for mu in partitions(lam.weight()) {
        let k = kostka(&mu, lam)?;
        if k > 0 {
            out.insert(mu, k);
        }
    }
    Ok(out)
}

/// Σ_μ K_{μλ} f^μ.
pub fn kostka_dimension(lam: &Partition) -> Result<u64> {
    Ok(kostka_multiplicities(lam)?.iter().map(|(mu, k)| k * hook_length_dimension(mu)).sum())
}

/// 𝔖_m acting on the stable flags of s(a,λ) at a split point of X(a,λ) by
/// permuting the homogeneous simples T₁,…,T_m: each flag is labelled by the
/// simples in its λ-blocks, and the character of this action is decomposed.
pub fn fiber_multiplicities(catalog: &Catalog, plan: &SequencePlan) -> Result<BTreeMap<Partition, u64>> {
    let idx = &plan.index;
    let m = idx.m() as usize;
    let rep_parts = strata::representative(catalog, idx)?;
    let simples: Vec<usize> = catalog.homogeneous_simples(1)[..m].to_vec();
    let x = catalog.direct_sum(&rep_parts);
    let chains = flags::stable_flags(&plan.monomial_word, &x)?;
    let hblocks: Vec<&Block> = plan.blocks.iter().filter(|b| matches!(b.kind, BlockKind::Homogeneous(_))).collect();
    let mut labels: BTreeSet<Vec<BTreeSet<usize>>> = BTreeSet::new();
    for chain in &chains {
        let mut label = Vec::new();
        for b in &hblocks {
            let piece = flags::subquotient(&x, &chain[b.start], &chain[b.end])?;
            let parts = catalog.identify(&piece)?;
            let mut set = BTreeSet::new();
            for (k, mult) in parts {
                let pos = simples.iter().position(|&s| s == k).ok_or_else(|| Error::Contract("λ-block subquotient is not a sum of the chosen simples".into()))?;
                if mult != 1 || !set.insert(pos) {
                    return Err(Error::Contract("λ-block subquotient repeats a simple".into()));
                }
            }
            label.push(set);
        }
        if !labels.insert(label) {
            return Err(Error::Contract("two stable flags carry the same block labelling".into()));
        }
    }
    if m == 0 {
        return Ok(BTreeMap::from([(Partition::empty(), labels.len() as u64)]));
    }
    decompose_character(m as u32, |perm| {
        labels
            .iter()
            .filter(|l| {
                let moved: Vec<BTreeSet<usize>> = l.iter().map(|s| s.iter().map(|&i| perm[i]).collect()).collect();
                &moved == *l
            })
            .count() as i64
    })
}

/// Monomial-to-stratum matrix at split points with its support, diagonal,
/// Kostka, module-factor and shift checks.
pub fn verify_triangularity(catalog: &Catalog, nu: &DimVec, exec: Exec) -> Result<TriangularityReport> {
    let deltas = strata::enumerate_delta(catalog, nu)?;
    let plans: Vec<SequencePlan> = deltas.iter().map(|d| build_plan(catalog, d, DEFAULT_TUBE_SEARCH)).collect::<Result<_>>()?;
    let reps: Vec<FqRep> = deltas.iter().map(|d| strata::representative(catalog, d).map(|p| catalog.direct_sum(&p))).collect::<Result<_>>()?;
    let mut report = TriangularityReport { nu: nu.clone(), q: catalog.q(), indices: deltas.iter().map(|d| d.to_string()).collect(), ..Default::default() };
    report.raw = exec.map(&plans, |p| reps.iter().map(|r| flags::stable_flag_count(&p.monomial_word, r).unwrap_or(u64::MAX)).collect());
    report.support_ok = true;
    report.diagonal_ok = true;
    report.kostka_ok = true;
    report.module_factor_ok = true;
    report.shift_ok = true;
    for (r, p) in deltas.iter().enumerate() {
        let mut row = Vec::new();
        for (c, s) in deltas.iter().enumerate() {
            let ord = strata::stratum_order(catalog, s, p)?;
            row.push(match ord {
                StratumOrder::Less => "<",
                StratumOrder::Equal => "=",
                StratumOrder::Greater => ">",
                StratumOrder::Incomparable => "|",
            }.to_string());
            let v = report.raw[r][c];
            if v != 0 && !s.same_stratum(p) && ord != StratumOrder::Less {
                report.support_ok = false;
                report.counterexamples.push(format!("row {p}: {v} flags at a point of {s}, which is not below it"));
            }
        }
        report.order.push(row);
    }
    // Support at every orbit, not only the split representatives.
    let classes = catalog.iso_classes(nu)?;
    for (p, plan) in deltas.iter().zip(&plans) {
        let bad: Vec<Result<Option<String>>> = exec.map(&classes, |c| {
            if strata::in_closure(catalog, p, &c.parts)? {
                return Ok(None);
            }
            let n = flags::stable_flag_count(&plan.monomial_word, &c.rep)?;
            Ok((n != 0).then(|| format!("row {p}: {n} flags at {} outside the closure", catalog.fingerprint(&c.parts))))
        });
        for b in bad {
            if let Some(msg) = b? {
                report.support_ok = false;
                report.counterexamples.push(msg);
            }
        }
    }
    for (r, (p, plan)) in deltas.iter().zip(&plans).enumerate() {
        let expect = p.lam.multinomial();
        let kd = kostka_dimension(&p.lam)?;
        if report.raw[r][r] != expect || kd != expect {
            report.diagonal_ok = false;
            report.counterexamples.push(format!("{p}: diagonal {} vs m!/∏λ! = {expect}, Σ K f = {kd}", report.raw[r][r]));
        }
        let fiber = fiber_multiplicities(catalog, plan)?;
        let predicted = if p.m() == 0 { BTreeMap::from([(Partition::empty(), 1)]) } else { kostka_multiplicities(&p.lam)? };
        if fiber != predicted {
            report.kostka_ok = false;
            report.counterexamples.push(format!("{p}: fiber characters {fiber:?} vs Kostka {predicted:?}"));
        }
        // The module part alone fixes exactly one flag at M_a.
        let a_only = StratumIndex { a: p.a.clone(), lam: Partition::empty() };
        let a_plan = build_plan(catalog, &a_only, DEFAULT_TUBE_SEARCH)?;
        let ma = catalog.direct_sum(&a_only.a_parts(catalog)?);
        if flags::stable_flag_count(&a_plan.monomial_word, &ma)? != 1 {
            report.module_factor_ok = false;
            report.counterexamples.push(format!("{p}: module word does not fix a unique flag"));
        }
        let dim = stratum_dimension(catalog, p)?;
        report.shifts.push(plan.expected_shift);
        report.dimensions.push(dim);
        if dim != plan.expected_shift {
            report.shift_ok = false;
            report.counterexamples.push(format!("{p}: shift {} vs dim X = {dim}", plan.expected_shift));
        }
    }
    Ok(report)
}

/// The functor φ: Rep(K) → Rep(Q) of cases 1–4.
pub fn kronecker_embed(case: u8, target: &Catalog, m: &FqRep) -> Result<FqRep> {
    let q = &target.quiver;
    let f = &target.field;
    if m.quiver.affine_type() != AffineType::Kronecker {
        return Err(Error::Domain("kronecker_embed takes a Kronecker representation".into()));
    }
    let (di, dj) = (m.dims[0], m.dims[1]);
    let (xa, xb) = (&m.mats[0], &m.mats[1]);
    let nv = q.num_vertices();
    match case {
        1 => {
            if q.affine_type() != AffineType::Kronecker {
                return Err(Error::Domain("case 1 needs the Kronecker quiver".into()));
            }
            FqRep::new(f.clone(), q.clone(), m.dims.clone(), m.mats.clone())
        }
        2 => {
            if !matches!(q.affine_type(), AffineType::A(_)) || !q.is_acyclic() {
                return Err(Error::Domain("case 2 needs an acyclic quiver of type Ã_n".into()));
            }
            let i0 = target.order[0];
            let into = q.arrows_into(i0);
            if into.len() != 2 {
                return Err(Error::Domain("case 2 needs two arrows into the sink i₀".into()));
            }
            let dims: Vec<usize> = (0..nv).map(|v| if v == i0 { di } else { dj }).collect();
            let mats = (0..q.arrows().len())
                .map(|h| {
                    if h == into[0] {
                        xa.clone()
                    } else if h == into[1] {
                        xb.clone()
                    } else {
                        Mat::identity(dj)
                    }
                })
                .collect();
            FqRep::new(f.clone(), q.clone(), dims, mats)
        }
        3 => {
            if !matches!(q.affine_type(), AffineType::D(_) | AffineType::E(_)) {
                return Err(Error::Domain("case 3 needs type D̃ or Ẽ".into()));
            }
            let i0 = target.order[0];
            if q.delta().get(i0) != 1 || !q.is_sink(i0) {
                return Err(Error::Domain("case 3 needs an extending vertex that is a sink".into()));
            }
            let h0 = q.arrows_into(i0)[0];
            let v = rigid(target, &(q.delta() - &q.unit(i0)))?;
            let s0 = q.source(h0);
            let dims: Vec<usize> = (0..nv).map(|u| if u == i0 { di } else { dj * v.dims[u] }).collect();
            let mats = (0..q.arrows().len())
                .map(|h| {
                    if h == h0 {
                        // v ⊗ e₁ + w ⊗ e₂ ↦ x_a v + x_b w
                        let mut y = Mat::zeros(di, dj * v.dims[s0]);
                        for col in 0..dj {
                            for r in 0..di {
                                y.set(r, col * 2, xa.get(r, col));
                                y.set(r, col * 2 + 1, xb.get(r, col));
                            }
                        }
                        y
                    } else {
                        Mat::identity(dj).kron(f, &v.mats[h])
                    }
                })
                .collect();
            FqRep::new(f.clone(), q.clone(), dims, mats)
        }
        4 => {
            if !matches!(q.affine_type(), AffineType::D(_) | AffineType::E(_)) {
                return Err(Error::Domain("case 4 needs type D̃ or Ẽ".into()));
            }
            let ext = q.extending_vertices();
            if !ext.iter().all(|&e| q.is_source(e)) {
                return Err(Error::Domain("case 4 needs every extending vertex to be a source".into()));
            }
            let i_n = *target.order.iter().rev().find(|v| ext.contains(v)).expect("extending vertex");
            let hn = q.arrows_out_of(i_n)[0];
            let v = rigid(target, &(q.delta() - &q.unit(i_n)))?;
            let t = q.target(hn);
            let dims: Vec<usize> = (0..nv).map(|u| if u == i_n { dj } else { di * v.dims[u] }).collect();
            let mats = (0..q.arrows().len())
                .map(|h| {
                    if h == hn {
                        // v ↦ x_a v ⊗ e₁ + x_b v ⊗ e₂
                        let mut y = Mat::zeros(di * v.dims[t], dj);
                        for r in 0..di {
                            for c in 0..dj {
                                y.set(r * 2, c, xa.get(r, c));
                                y.set(r * 2 + 1, c, xb.get(r, c));
                            }
                        }
                        y
                    } else {
                        Mat::identity(di).kron(f, &v.mats[h])
                    }
                })
                .collect();
            FqRep::new(f.clone(), q.clone(), dims, mats)
        }
        _ => Err(Error::Domain(format!("unknown embedding case {case}"))),
    }
}

/// The unique indecomposable of a real-root dimension vector.
fn rigid(catalog: &Catalog, dims: &DimVec) -> Result<FqRep> {
    let d: Vec<usize> = (0..dims.len()).map(|i| dims.udim(i)).collect();
    match catalog.with_dims(&d) {
        [k] => Ok(catalog.rep(*k).clone()),
        other => Err(Error::Contract(format!("expected one indecomposable of dimension {dims}, found {}", other.len()))),
    }
}

/// The D̃₄ orientation with all arrows from the center to the leaves.
pub fn affine_d4_sinks() -> Quiver {
    let vertices = (0..5).map(|k| k.to_string()).collect();
    Quiver::new(vertices, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).expect("affine D4 quiver")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::rep;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn kron(q: usize, b: i64) -> Catalog {
        Catalog::build(Arc::new(Quiver::kronecker()), Field::new(q).unwrap(), &DimVec(vec![b, b]), Exec::Sequential).unwrap()
    }

    fn idx(c: &Catalog, nu: &[i64], pred: impl Fn(&StratumIndex) -> bool) -> StratumIndex {
        strata::enumerate_delta(c, &DimVec(nu.to_vec())).unwrap().into_iter().find(|i| pred(i)).unwrap()
    }

    #[test]
    fn seq_alpha_examples() {
        let c = kron(2, 1);
        assert_eq!(seq_alpha(&c.order, c.quiver.delta()).display(&c.quiver), "(1j,1i)");
        assert!(seq_alpha(&c.order, &DimVec(vec![0, 0])).is_empty());
    }

    #[test]
    fn plan_examples() {
        let c = kron(2, 2);
        let p = build_plan(&c, &idx(&c, &[1, 1], |i| i.a.is_empty()), 100).unwrap();
        assert_eq!(p.monomial_word.display(&c.quiver), "(1j,1i)");
        let p = build_plan(&c, &idx(&c, &[2, 2], |i| i.a.is_empty() && i.lam == Partition::new(vec![1, 1])), 100).unwrap();
        assert_eq!(p.monomial_word.display(&c.quiver), "(1j,1i,1j,1i)");
        assert_eq!(p.resolution_word.display(&c.quiver), "(2j,2i)");
        assert_eq!(p.expected_shift, 8);
        let p = build_plan(&c, &idx(&c, &[1, 1], |i| !i.a.is_empty()), 100).unwrap();
        assert_eq!(p.monomial_word.display(&c.quiver), "(1i,1j)");
    }

    #[test]
    fn resolution_on_delta() {
        let c = kron(2, 2);
        for d in strata::enumerate_delta(&c, &DimVec(vec![1, 1])).unwrap() {
            let r = verify_resolution(&c, &d, None, Exec::Sequential).unwrap();
            assert!(r.pass, "{r:?}");
        }
        // swapped block
        let d = idx(&c, &[1, 1], |i| i.a.is_empty());
        let wrong = Word::new(vec![(1, 0), (1, 1)]);
        assert!(!verify_resolution(&c, &d, Some(&wrong), Exec::Sequential).unwrap().pass);
    }

    #[test]
    fn triangularity_small() {
        let c = kron(2, 2);
        let r = verify_triangularity(&c, &DimVec(vec![1, 1]), Exec::Sequential).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.raw, vec![vec![1, 0], vec![1, 1]]);
        let r = verify_triangularity(&c, &DimVec(vec![2, 2]), Exec::Sequential).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn embeddings() {
        let f = Field::new(2).unwrap();
        let kq = Arc::new(Quiver::kronecker());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let targets: Vec<(u8, Quiver)> = vec![(1, Quiver::kronecker()), (2, Quiver::affine_a(3)), (3, affine_d4_sinks()), (4, Quiver::affine_d4())];
        for (case, q) in targets {
            let q = Arc::new(q);
            let cat = Catalog::build(q.clone(), f.clone(), &q.delta().clone(), Exec::Sequential).unwrap();
            let si = FqRep::simple(f.clone(), kq.clone(), 0);
            let sj = FqRep::simple(f.clone(), kq.clone(), 1);
            let (pi, pj) = (kronecker_embed(case, &cat, &si).unwrap(), kronecker_embed(case, &cat, &sj).unwrap());
            match case {
                2 | 3 => assert_eq!(pi.dimvec(), q.unit(cat.order[0])),
                4 => assert_eq!(pj.dimvec().total(), 1),
                _ => {}
            }
            for _ in 0..6 {
                let a = FqRep::random(f.clone(), kq.clone(), vec![1, 2], &mut rng);
                let b = FqRep::random(f.clone(), kq.clone(), vec![2, 1], &mut rng);
                let (fa, fb) = (kronecker_embed(case, &cat, &a).unwrap(), kronecker_embed(case, &cat, &b).unwrap());
                assert_eq!(rep::hom_dim(&a, &b).unwrap(), rep::hom_dim(&fa, &fb).unwrap());
                assert_eq!(rep::ext_dim(&a, &b).unwrap(), rep::ext_dim(&fa, &fb).unwrap());
                assert_eq!(rep::ext_dim(&b, &a).unwrap(), rep::ext_dim(&fb, &fa).unwrap());
            }
        }
        let cat = Catalog::build(Arc::new(Quiver::kronecker()), f.clone(), &DimVec(vec![1, 1]), Exec::Sequential).unwrap();
        assert!(kronecker_embed(3, &cat, &FqRep::simple(f, kq, 0)).is_err());
    }
}
