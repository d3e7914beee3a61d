//! Labelled catalog of indecomposables over F_q and the isomorphism classes
//! (G_V-orbits) they generate.
//!
//! Indecomposables are produced dimension by dimension: a non-simple
//! indecomposable M has some S_i in its socle, so M is an extension of
//! X = M/S_i by S_i. Running over all classes X of smaller dimension and all
//! extension classes therefore finds every indecomposable. Only extensions
//! whose components on the copies of each summand X_k of X span an
//! m_k-dimensional subspace of Ext¹(X_k, S_i) can be indecomposable, and
//! GL_{m_k} acts transitively on bases of that subspace, so one echelon basis
//! per subspace suffices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decompose;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::mat::{self, Mat};
use crate::quiver::{DimVec, Quiver};
use crate::rep::{self, FqRep, Sign};

/// Position of an indecomposable in the preprojective / preinjective /
/// regular trichotomy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndecLabel {
    Preprojective(u32),
    Preinjective(i64),
    RegularInhomog { tube: u32, ray: u32, level: u32 },
    /// `param` numbers the homogeneous regular simples of the given degree
    /// (their dimension is degree·δ).
    RegularHomog { degree: u32, param: u32, level: u32 },
}

impl IndecLabel {
    pub fn is_discrete(&self) -> bool {
        !matches!(self, IndecLabel::RegularHomog { .. })
    }

    pub fn is_preprojective(&self) -> bool {
        matches!(self, IndecLabel::Preprojective(_))
    }

    pub fn is_preinjective(&self) -> bool {
        matches!(self, IndecLabel::Preinjective(_))
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, IndecLabel::RegularInhomog { .. } | IndecLabel::RegularHomog { .. })
    }

    /// Tube key: `Some((0, degree, param))` for homogeneous tubes and
    /// `Some((tube, 0, 0))` for inhomogeneous ones.
    pub fn tube_key(&self) -> Option<(u32, u32, u32)> {
        match *self {
            IndecLabel::RegularInhomog { tube, .. } => Some((tube, 0, 0)),
            IndecLabel::RegularHomog { degree, param, .. } => Some((0, degree, param)),
            _ => None,
        }
    }
}

impl fmt::Display for IndecLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndecLabel::Preprojective(m) => write!(f, "P{m}"),
            IndecLabel::Preinjective(l) => write!(f, "I{l}"),
            IndecLabel::RegularInhomog { tube, ray, level } => write!(f, "T{tube}.{ray}.{level}"),
            IndecLabel::RegularHomog { degree, param, level } => write!(f, "H{degree}:{param}.{level}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Indec {
    pub label: IndecLabel,
    pub rep: FqRep,
    /// Degree over F_q of the residue field End(M)/rad End(M).
    pub residue_degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tube {
    pub id: u32,
    /// Catalog indices of the regular simples, ray 1 first, each the image
    /// of the previous one under Φ⁺.
    pub simples: Vec<usize>,
}

impl Tube {
    pub fn period(&self) -> usize {
        self.simples.len()
    }
}

/// A G_V-orbit of E_V(F_q), recorded as a multiset of catalog indices.
#[derive(Clone, Debug)]
pub struct IsoClass {
    pub parts: Vec<(usize, usize)>,
    pub rep: FqRep,
    pub aut_order: u128,
    pub orbit_size: u128,
}

pub struct Catalog {
    pub quiver: Arc<Quiver>,
    pub field: Arc<Field>,
    pub order: Vec<usize>,
    /// Componentwise maximum of the requested bound and δ.
    pub bound: DimVec,
    indecs: Vec<Indec>,
    by_dims: HashMap<Vec<usize>, Vec<usize>>,
    hom: Vec<Vec<usize>>,
    pub preprojective_dims: Vec<DimVec>,
    pub preinjective_dims: Vec<(i64, DimVec)>,
    pub tubes: Vec<Tube>,
}

/// Above this many points the lexicographically least representatives of
/// the degree-one homogeneous simples are not searched for.
const SWEEP_LIMIT: u64 = 1 << 22;

pub fn gl_order(n: usize, q: u128) -> u128 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|k| qn - q.pow(k)).product()
}

pub fn group_order(dims: &[usize], q: usize) -> u128 {
    dims.iter().map(|&d| gl_order(d, q as u128)).product()
}

pub fn rep_space_dim(quiver: &Quiver, dims: &[usize]) -> usize {
    quiver.arrows().iter().map(|&(s, t)| dims[s] * dims[t]).sum()
}

fn udims(d: &DimVec) -> Vec<usize> {
    (0..d.len()).map(|i| d.udim(i)).collect()
}

/// Multisets of items (with repetition, nondecreasing index) whose
/// dimension vectors add up to `target`.
pub(crate) fn multisets(item_dims: &[Vec<usize>], target: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn rec(items: &[Vec<usize>], start: usize, rem: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rem.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for k in start..items.len() {
            let d = &items[k];
            let mut mult = 0;
            while rem.iter().zip(d).all(|(r, x)| r >= x) {
                for (r, x) in rem.iter_mut().zip(d) {
                    *r -= x;
                }
                mult += 1;
                cur.push((k, mult));
                rec(items, k + 1, rem, cur, out);
                cur.pop();
            }
            for (r, x) in rem.iter_mut().zip(d) {
                *r += x * mult;
            }
        }
    }
    let mut out = Vec::new();
    if target.iter().all(|&x| x == 0) {
        out.push(Vec::new());
        return out;
    }
    rec(item_dims, 0, &mut target.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn direct_sum_parts(parts: &[(usize, usize)], reps: &[FqRep], field: &Arc<Field>, quiver: &Arc<Quiver>) -> FqRep {
    let mut all = Vec::new();
    for &(k, m) in parts {
        for _ in 0..m {
            all.push(reps[k].clone());
        }
    }
    FqRep::direct_sum_all(&all, field.clone(), quiver.clone())
}

/// Cheap isomorphism invariant used to bucket candidates before exact tests.
fn invariant(m: &FqRep) -> (Vec<usize>, usize, Vec<usize>) {
    let f = &m.field;
    let end = rep::hom_dim(m, m).expect("same representation");
    let ranks = m.mats.iter().map(|x| mat::rank(f, x)).collect();
    (m.dims.clone(), end, ranks)
}

/// P_k for k = 0..n and I_k for k = 0..n from the admissible order.
fn seeds(quiver: &Arc<Quiver>, field: &Arc<Field>, order: &[usize]) -> Result<(Vec<FqRep>, Vec<FqRep>)> {
    let n1 = order.len();
    // stages[k] = σ_{i_{k-1}}⋯σ_{i_0} Q
    let mut stages = vec![(**quiver).clone()];
    for &i in order {
        let next = stages.last().unwrap().sigma(i);
        stages.push(next);
    }
    let mut proj = Vec::new();
    for k in 0..n1 {
        let mut cur = FqRep::simple(field.clone(), Arc::new(stages[k].clone()), order[k]);
        for r in (0..k).rev() {
            cur = rep::bgp_reflect(order[r], Sign::Minus, &cur)?;
        }
        cur.quiver = quiver.clone();
        proj.push(cur);
    }
    let mut inj = Vec::new();
    for k in 0..n1 {
        let mut cur = FqRep::simple(field.clone(), Arc::new(stages[k + 1].clone()), order[k]);
        for &i in &order[k + 1..] {
            cur = rep::bgp_reflect(i, Sign::Plus, &cur)?;
        }
        cur.quiver = quiver.clone();
        inj.push(cur);
    }
    Ok((proj, inj))
}

fn coxeter_power(m: &FqRep, sign: Sign, order: &[usize], p: usize) -> Result<FqRep> {
    let mut cur = m.clone();
    for _ in 0..p {
        cur = rep::coxeter(&cur, sign, order)?;
    }
    Ok(cur)
}

/// Dimension vectors of P_0, P_1, … and I_n, I_{n-1}, … until a whole round
/// of n+1 consecutive entries exceeds `bound` in total dimension.
fn trichotomy_dims(quiver: &Quiver, order: &[usize], proj: &[FqRep], inj: &[FqRep], bound: &DimVec) -> (Vec<DimVec>, Vec<(i64, DimVec)>) {
    let n1 = order.len() as i64;
    let limit = bound.total();
    let cox = |d: &DimVec, sign: Sign| -> DimVec {
        let mut cur = d.clone();
        let mut q = quiver.clone();
        let seq: Vec<usize> = match sign {
            Sign::Plus => order.to_vec(),
            Sign::Minus => order.iter().rev().copied().collect(),
        };
        for i in seq {
            cur = q.reflect(i, &cur);
            q = q.sigma(i);
        }
        cur
    };
    let mut pdims: Vec<DimVec> = proj.iter().map(|p| p.dimvec()).collect();
    loop {
        let round = &pdims[pdims.len() - order.len()..];
        if round.iter().all(|d| d.total() > limit) {
            break;
        }
        let next: Vec<DimVec> = round.iter().map(|d| cox(d, Sign::Minus)).collect();
        pdims.extend(next);
    }
    let mut idims: Vec<(i64, DimVec)> = (0..order.len()).rev().map(|k| (k as i64, inj[k].dimvec())).collect();
    loop {
        let round: Vec<(i64, DimVec)> = idims[idims.len() - order.len()..].to_vec();
        if round.iter().all(|(_, d)| d.total() > limit) {
            break;
        }
        idims.extend(round.iter().map(|(l, d)| (l - n1, cox(d, Sign::Plus))));
    }
    (pdims, idims)
}

impl Catalog {
    /// Builds the catalog of all indecomposables with dimension vector
    /// componentwise at most `bound ∨ δ`.
    pub fn build(quiver: Arc<Quiver>, field: Arc<Field>, bound: &DimVec, exec: Exec) -> Result<Catalog> {
        let order = quiver.admissible_order()?;
        let nv = quiver.num_vertices();
        if bound.len() != nv || !bound.is_nonnegative() {
            return Err(Error::Domain("catalog bound must be a nonnegative vector on the vertices".into()));
        }
        let full = DimVec((0..nv).map(|i| bound.get(i).max(quiver.delta().get(i))).collect());
        let raw = enumerate_indecomposables(&quiver, &field, &full, exec)?;
        let (proj, inj) = seeds(&quiver, &field, &order)?;
        let (pdims, idims) = trichotomy_dims(&quiver, &order, &proj, &inj, &full);
        label_all(quiver, field, order, full, raw, pdims, idims, exec)
    }

    pub fn len(&self) -> usize {
        self.indecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indecs.is_empty()
    }

    pub fn indecs(&self) -> &[Indec] {
        &self.indecs
    }

    pub fn get(&self, k: usize) -> &Indec {
        &self.indecs[k]
    }

    pub fn label(&self, k: usize) -> &IndecLabel {
        &self.indecs[k].label
    }

    pub fn rep(&self, k: usize) -> &FqRep {
        &self.indecs[k].rep
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn hom(&self, k: usize, l: usize) -> usize {
        self.hom[k][l]
    }

    pub fn index_of(&self, label: &IndecLabel) -> Option<usize> {
        self.indecs.iter().position(|x| &x.label == label)
    }

    pub fn with_dims(&self, dims: &[usize]) -> &[usize] {
        self.by_dims.get(dims).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Indices of the indecomposables whose dimension vector is ≤ `bound`.
    pub fn within(&self, bound: &DimVec) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.indecs[k].rep.dimvec().le(bound)).collect()
    }

    pub fn homogeneous_simples(&self, degree: u32) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| matches!(self.indecs[k].label, IndecLabel::RegularHomog { degree: d, level: 0, .. } if d == degree))
            .collect()
    }

    pub fn tube_of(&self, k: usize) -> Option<&Tube> {
        match self.indecs[k].label {
            IndecLabel::RegularInhomog { tube, .. } => self.tubes.iter().find(|t| t.id == tube),
            _ => None,
        }
    }

    /// Catalog index of the indecomposable M, or `None` when M is outside
    /// the catalog bound. M must be indecomposable.
    pub fn match_indecomposable(&self, m: &FqRep) -> Option<usize> {
        let cands = self.with_dims(&m.dims);
        match cands {
            [] => None,
            [k] => Some(*k),
            _ => cands.iter().copied().find(|&k| decompose::indecomposables_isomorphic(m, &self.indecs[k].rep)),
        }
    }

    /// Krull–Schmidt multiset of M as sorted (catalog index, multiplicity).
    pub fn identify(&self, m: &FqRep) -> Result<Vec<(usize, usize)>> {
        if !m.dimvec().le(&self.bound) {
            return Err(Error::Resource(format!("dimension {} exceeds the catalog bound {}", m.dimvec(), self.bound)));
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for piece in decompose::decompose(m) {
            let k = self
                .match_indecomposable(&piece)
                .ok_or_else(|| Error::Contract(format!("indecomposable summand of dimension {} missing from the catalog", piece.dimvec())))?;
            *counts.entry(k).or_default() += 1;
        }
        Ok(counts.into_iter().collect())
    }

    pub fn direct_sum(&self, parts: &[(usize, usize)]) -> FqRep {
        let reps: Vec<FqRep> = self.indecs.iter().map(|x| x.rep.clone()).collect();
        direct_sum_parts(parts, &reps, &self.field, &self.quiver)
    }

    pub fn parts_dims(&self, parts: &[(usize, usize)]) -> Vec<usize> {
        let mut d = vec![0; self.quiver.num_vertices()];
        for &(k, m) in parts {
            for (x, y) in d.iter_mut().zip(&self.indecs[k].rep.dims) {
                *x += m * y;
            }
        }
        d
    }

    /// dim End(⊕ X_k^{m_k}) from the precomputed Hom table.
    pub fn end_dim(&self, parts: &[(usize, usize)]) -> usize {
        parts.iter().flat_map(|&(k, a)| parts.iter().map(move |&(l, b)| a * b * self.hom[k][l])).sum()
    }

    /// |Aut(M)| = q^{dim rad End M} · ∏_k |GL_{m_k}(F_{q^{r_k}})|.
    pub fn aut_order(&self, parts: &[(usize, usize)]) -> u128 {
        let q = self.q() as u128;
        let semisimple: usize = parts.iter().map(|&(k, m)| m * m * self.indecs[k].residue_degree as usize).sum();
        let rad = self.end_dim(parts) - semisimple;
        let gl: u128 = parts.iter().map(|&(k, m)| gl_order(m, q.pow(self.indecs[k].residue_degree))).product();
        q.pow(rad as u32) * gl
    }

    /// All G_V-orbits of E_V(F_q) for |V| = ν, in a fixed order.
    pub fn iso_classes(&self, nu: &DimVec) -> Result<Vec<IsoClass>> {
        if !nu.le(&self.bound) || !nu.is_nonnegative() {
            return Err(Error::Resource(format!("dimension {nu} exceeds the catalog bound {}", self.bound)));
        }
        let target = udims(nu);
        let item_dims: Vec<Vec<usize>> = self.indecs.iter().map(|x| x.rep.dims.clone()).collect();
        let g = group_order(&target, self.q());
        Ok(multisets(&item_dims, &target)
            .into_iter()
            .map(|parts| {
                let aut = self.aut_order(&parts);
                IsoClass { rep: self.direct_sum(&parts), aut_order: aut, orbit_size: g / aut, parts }
            })
            .collect())
    }

    /// Σ orbit sizes against q^{dim E_V}.
    pub fn mass_check(&self, nu: &DimVec) -> Result<(u128, u128)> {
        let classes = self.iso_classes(nu)?;
        let total: u128 = classes.iter().map(|c| c.orbit_size).sum();
        let expected = (self.q() as u128).pow(rep_space_dim(&self.quiver, &udims(nu)) as u32);
        Ok((total, expected))
    }

    pub fn fingerprint(&self, parts: &[(usize, usize)]) -> String {
        fingerprint_of(parts.iter().map(|&(k, m)| (self.indecs[k].label.clone(), m)))
    }

    /// Joint q-independent key for a tuple of classes: homogeneous
    /// parameters are renamed consistently across the tuple, choosing the
    /// lexicographically least renaming.
    pub fn generic_key(&self, tuple: &[&[(usize, usize)]]) -> String {
        let mut params: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for parts in tuple {
            for &(k, _) in parts.iter() {
                if let IndecLabel::RegularHomog { degree, param, .. } = self.indecs[k].label {
                    let v = params.entry(degree).or_default();
                    if !v.contains(&param) {
                        v.push(param);
                    }
                }
            }
        }
        let groups: Vec<(u32, Vec<u32>)> = params.into_iter().collect();
        let mut best: Option<String> = None;
        for_each_renaming(&groups, &mut BTreeMap::new(), 0, &mut |rename| {
            let s: Vec<String> = tuple
                .iter()
                .map(|parts| {
                    fingerprint_of(parts.iter().map(|&(k, m)| {
                        let label = match self.indecs[k].label {
                            IndecLabel::RegularHomog { degree, param, level } => {
                                IndecLabel::RegularHomog { degree, param: rename[&(degree, param)], level }
                            }
                            ref other => other.clone(),
                        };
                        (label, m)
                    }))
                })
                .collect();
            let s = s.join(" | ");
            if best.as_ref().is_none_or(|b| &s < b) {
                best = Some(s);
            }
        });
        best.unwrap_or_default()
    }

    /// Whether a module (given by its parts) in one inhomogeneous tube is
    /// aperiodic: at every level some ray is missing.
    pub fn is_aperiodic(&self, parts: &[(usize, usize)]) -> Result<bool> {
        let mut tube_id = None;
        let mut present: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(k, _) in parts {
            match self.indecs[k].label {
                IndecLabel::RegularInhomog { tube, ray, level } => {
                    if tube_id.is_some_and(|t| t != tube) {
                        return Err(Error::Domain("summands lie in different tubes".into()));
                    }
                    tube_id = Some(tube);
                    present.entry(level).or_default().push(ray);
                }
                _ => return Err(Error::Domain(format!("{} is not in an inhomogeneous tube", self.indecs[k].label))),
            }
        }
        let Some(t) = tube_id else { return Ok(true) };
        let period = self.tubes.iter().find(|x| x.id == t).map(|x| x.period()).unwrap_or(0);
        Ok(present.values().all(|rays| {
            let mut r = rays.clone();
            r.sort_unstable();
            r.dedup();
            r.len() < period
        }))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let record = CatalogRecord {
            quiver_hash: self.quiver.hash(),
            q: self.q(),
            order: self.order.clone(),
            bound: self.bound.clone(),
            indecs: self
                .indecs
                .iter()
                .map(|x| IndecRecord {
                    label: x.label.clone(),
                    dims: x.rep.dims.clone(),
                    mats: x.rep.mats.iter().map(|m| m.data.clone()).collect(),
                    residue_degree: x.residue_degree,
                })
                .collect(),
            hom: self.hom.clone(),
            preprojective_dims: self.preprojective_dims.clone(),
            preinjective_dims: self.preinjective_dims.clone(),
            tubes: self.tubes.clone(),
        };
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, serde_json::to_string(&record)?)?;
        Ok(())
    }

    pub fn load(path: &Path, quiver: Arc<Quiver>, field: Arc<Field>) -> Result<Catalog> {
        let record: CatalogRecord = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if record.quiver_hash != quiver.hash() || record.q != field.q() {
            return Err(Error::Parse("catalog record does not match quiver or field".into()));
        }
        let mut indecs = Vec::new();
        for r in record.indecs {
            let mats = quiver
                .arrows()
                .iter()
                .zip(r.mats)
                .map(|(&(s, t), data)| {
                    if data.len() != r.dims[t] * r.dims[s] {
                        return Err(Error::Parse("matrix size mismatch in catalog record".into()));
                    }
                    Ok(Mat::from_rows(r.dims[t], r.dims[s], data))
                })
                .collect::<Result<Vec<Mat>>>()?;
            let rep = FqRep::new(field.clone(), quiver.clone(), r.dims, mats)?;
            indecs.push(Indec { label: r.label, rep, residue_degree: r.residue_degree });
        }
        if record.hom.len() != indecs.len() {
            return Err(Error::Parse("hom table size mismatch in catalog record".into()));
        }
        let by_dims = index_by_dims(&indecs);
        Ok(Catalog {
            quiver,
            field,
            order: record.order,
            bound: record.bound,
            indecs,
            by_dims,
            hom: record.hom,
            preprojective_dims: record.preprojective_dims,
            preinjective_dims: record.preinjective_dims,
            tubes: record.tubes,
        })
    }
}

fn for_each_renaming(groups: &[(u32, Vec<u32>)], cur: &mut BTreeMap<(u32, u32), u32>, g: usize, visit: &mut dyn FnMut(&BTreeMap<(u32, u32), u32>)) {
    if g == groups.len() {
        visit(cur);
        return;
    }
    let (degree, params) = &groups[g];
    let n = params.len();
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    loop {
        for (p, &new) in params.iter().zip(&perm) {
            cur.insert((*degree, *p), new);
        }
        for_each_renaming(groups, cur, g + 1, visit);
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Deterministic text form: sorted labels joined by `+`, with `^m` for
/// multiplicities above one; the zero module is `0`.
pub fn fingerprint_of(parts: impl IntoIterator<Item = (IndecLabel, usize)>) -> String {
    let mut v: Vec<(IndecLabel, usize)> = parts.into_iter().collect();
    v.sort();
    if v.is_empty() {
        return "0".into();
    }
    v.iter().map(|(l, m)| if *m == 1 { l.to_string() } else { format!("{l}^{m}") }).collect::<Vec<_>>().join("+")
}

#[derive(Serialize, Deserialize)]
struct IndecRecord {
    label: IndecLabel,
    dims: Vec<usize>,
    mats: Vec<Vec<u8>>,
    residue_degree: u32,
}

#[derive(Serialize, Deserialize)]
struct CatalogRecord {
    quiver_hash: String,
    q: usize,
    order: Vec<usize>,
    bound: DimVec,
    indecs: Vec<IndecRecord>,
    hom: Vec<Vec<usize>>,
    preprojective_dims: Vec<DimVec>,
    preinjective_dims: Vec<(i64, DimVec)>,
    tubes: Vec<Tube>,
}

fn index_by_dims(indecs: &[Indec]) -> HashMap<Vec<usize>, Vec<usize>> {
    let mut by_dims: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (k, x) in indecs.iter().enumerate() {
        by_dims.entry(x.rep.dims.clone()).or_default().push(k);
    }
    by_dims
}

/// All indecomposables with dimension ≤ `bound`, one per isomorphism class,
/// in order of discovery.
fn enumerate_indecomposables(quiver: &Arc<Quiver>, field: &Arc<Field>, bound: &DimVec, exec: Exec) -> Result<Vec<FqRep>> {
    let nv = quiver.num_vertices();
    let mut dims_list: Vec<DimVec> = quiver.positive_roots(bound).into_iter().map(|(d, _)| d).collect();
    dims_list.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    let simples: Vec<FqRep> = (0..nv).map(|i| FqRep::simple(field.clone(), quiver.clone(), i)).collect();
    let mut found: Vec<FqRep> = Vec::new();
    let mut ext_cache: HashMap<(usize, usize), Vec<Vec<Mat>>> = HashMap::new();
    for d in dims_list {
        let target = udims(&d);
        if d.total() == 1 {
            let i = target.iter().position(|&x| x == 1).unwrap();
            found.push(simples[i].clone());
            continue;
        }
        let item_dims: Vec<Vec<usize>> = found.iter().map(|x| x.dims.clone()).collect();
        let mut candidates: Vec<FqRep> = Vec::new();
        for i in 0..nv {
            if target[i] == 0 {
                continue;
            }
            let mut rest = target.clone();
            rest[i] -= 1;
            for parts in multisets(&item_dims, &rest) {
                for &(k, _) in &parts {
                    if let std::collections::hash_map::Entry::Vacant(e) = ext_cache.entry((k, i)) {
                        e.insert(rep::ext_basis(&found[k], &simples[i])?);
                    }
                }
                if parts.iter().any(|&(k, m)| ext_cache[&(k, i)].len() < m) {
                    continue;
                }
                let x = direct_sum_parts(&parts, &found, field, quiver);
                let choices: Vec<Vec<Mat>> = parts.iter().map(|&(k, m)| mat::subspaces(field, ext_cache[&(k, i)].len(), m)).collect();
                let mut pick = vec![0usize; parts.len()];
                loop {
                    let psi = assemble_psi(field, quiver, &parts, &pick, &choices, &ext_cache, &found, i);
                    candidates.push(rep::extension(&x, &simples[i], &psi));
                    // Odometer over the subspace choices.
                    let mut pos = 0;
                    loop {
                        if pos == pick.len() {
                            break;
                        }
                        pick[pos] += 1;
                        if pick[pos] < choices[pos].len() {
                            break;
                        }
                        pick[pos] = 0;
                        pos += 1;
                    }
                    if pos == pick.len() {
                        break;
                    }
                }
            }
        }
        let keep: Vec<bool> = exec.map(&candidates, decompose::is_indecomposable);
        let mut buckets: HashMap<(Vec<usize>, usize, Vec<usize>), Vec<usize>> = HashMap::new();
        for (cand, ok) in candidates.into_iter().zip(keep) {
            if !ok {
                continue;
            }
            let key = invariant(&cand);
            let bucket = buckets.entry(key).or_default();
            if bucket.iter().any(|&k| decompose::indecomposables_isomorphic(&cand, &found[k])) {
                continue;
            }
            bucket.push(found.len());
            found.push(cand);
        }
    }
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn assemble_psi(
    field: &Field,
    quiver: &Quiver,
    parts: &[(usize, usize)],
    pick: &[usize],
    choices: &[Vec<Mat>],
    ext_cache: &HashMap<(usize, usize), Vec<Vec<Mat>>>,
    found: &[FqRep],
    i: usize,
) -> Vec<Mat> {
    quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(h, &(s, t))| {
            let rows = usize::from(t == i);
            let mut blocks = Vec::new();
            for (slot, &(k, m)) in parts.iter().enumerate() {
                let basis = &ext_cache[&(k, i)];
                let coeffs = &choices[slot][pick[slot]];
                for c in 0..m {
                    let mut block = Mat::zeros(rows, found[k].dims[s]);
                    for (r, b) in basis.iter().enumerate() {
                        let w = coeffs.get(r, c);
                        if w != 0 {
                            block = block.add(field, &b[h].scale(field, w));
                        }
                    }
                    blocks.push(block);
                }
            }
            let refs: Vec<&Mat> = blocks.iter().collect();
            Mat::hcat(&refs, rows)
        })
        .collect()
}

/// Enumerates E_V in lexicographic order of the row-major matrix data.
fn lex_points(field: &Arc<Field>, quiver: &Arc<Quiver>, dims: &[usize]) -> impl Iterator<Item = FqRep> {
    let n = rep_space_dim(quiver, dims);
    let q = field.q() as u64;
    let total = q.pow(n as u32);
    let (field, quiver, dims) = (field.clone(), quiver.clone(), dims.to_vec());
    (0..total).map(move |code| {
        let mut digits = vec![0u8; n];
        let mut x = code;
        for k in (0..n).rev() {
            digits[k] = (x % q) as u8;
            x /= q;
        }
        let mut off = 0;
        let mats = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let len = dims[t] * dims[s];
                let m = Mat::from_rows(dims[t], dims[s], digits[off..off + len].to_vec());
                off += len;
                m
            })
            .collect();
        FqRep { field: field.clone(), quiver: quiver.clone(), dims: dims.clone(), mats }
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Preprojective,
    Preinjective,
    Regular,
}

#[allow(clippy::too_many_arguments)]
fn label_all(
    quiver: Arc<Quiver>,
    field: Arc<Field>,
    order: Vec<usize>,
    bound: DimVec,
    mut raw: Vec<FqRep>,
    pdims: Vec<DimVec>,
    idims: Vec<(i64, DimVec)>,
    exec: Exec,
) -> Result<Catalog> {
    let n1 = order.len();
    let delta = quiver.delta().clone();
    let kinds: Vec<Kind> = raw
        .iter()
        .map(|m| {
            let defect = quiver.euler_form(&delta, &m.dimvec());
            match defect.signum() {
                -1 => Kind::Preprojective,
                1 => Kind::Preinjective,
                _ => Kind::Regular,
            }
        })
        .collect();
    let n = raw.len();
    let mut labels: Vec<Option<IndecLabel>> = vec![None; n];
    let mut residue = vec![1u32; n];

    // Preprojective and preinjective: the dimension vector fixes the module;
    // the Coxeter step count to zero must agree with the index.
    for k in 0..n {
        let dv = raw[k].dimvec();
        match kinds[k] {
            Kind::Preprojective => {
                let m = pdims.iter().position(|d| *d == dv).ok_or_else(|| Error::Contract(format!("no preprojective of dimension {dv}")))?;
                let p = m / n1;
                let killed = coxeter_power(&raw[k], Sign::Plus, &order, p + 1)?.is_zero();
                let alive = !coxeter_power(&raw[k], Sign::Plus, &order, p)?.is_zero();
                if !(killed && alive) {
                    return Err(Error::Contract(format!("Coxeter orbit of P{m} does not end after {} steps", p + 1)));
                }
                labels[k] = Some(IndecLabel::Preprojective(m as u32));
            }
            Kind::Preinjective => {
                let (l, _) = idims.iter().find(|(_, d)| *d == dv).ok_or_else(|| Error::Contract(format!("no preinjective of dimension {dv}")))?;
                let p = ((n1 as i64 - 1 - l) / n1 as i64) as usize;
                if !coxeter_power(&raw[k], Sign::Minus, &order, p + 1)?.is_zero() {
                    return Err(Error::Contract(format!("Coxeter orbit of I{l} does not end after {} steps", p + 1)));
                }
                labels[k] = Some(IndecLabel::Preinjective(*l));
            }
            Kind::Regular => {}
        }
    }

    let regular: Vec<usize> = (0..n).filter(|&k| kinds[k] == Kind::Regular).collect();
    // Φ⁺ images of regular indecomposables, matched back into the catalog
    // when they lie within the bound.
    let images: Vec<FqRep> = exec.map(&regular, |&k| rep::coxeter(&raw[k], Sign::Plus, &order).expect("acyclic"));
    let match_raw = |m: &FqRep| -> Option<usize> {
        regular.iter().copied().find(|&l| raw[l].dims == m.dims && decompose::indecomposables_isomorphic(m, &raw[l]))
    };
    let phi: HashMap<usize, Option<usize>> = regular.iter().zip(&images).map(|(&k, img)| (k, match_raw(img))).collect();

    let is_simple: Vec<bool> = exec.map(&regular, |&k| {
        let dk = raw[k].dimvec();
        !regular.iter().any(|&l| {
            let dl = raw[l].dimvec();
            dl != dk && dl.le(&dk) && rep::hom_dim(&raw[l], &raw[k]).expect("compatible") > 0
        })
    });
    let simples: Vec<usize> = regular.iter().zip(&is_simple).filter(|(_, &s)| s).map(|(&k, _)| k).collect();
    let delta_total = delta.total();

    // Homogeneous regular simples: Φ⁺(T) ≅ T.
    let mut homog: Vec<usize> = simples.iter().copied().filter(|&k| phi[&k] == Some(k)).collect();
    let inhomog: Vec<usize> = simples.iter().copied().filter(|&k| phi[&k] != Some(k)).collect();

    // Degree-one homogeneous simples get the lexicographically least point of
    // their orbit as representative.
    let deg1: Vec<usize> = homog.iter().copied().filter(|&k| raw[k].dims == udims(&delta)).collect();
    let npoints = (field.q() as u64).checked_pow(rep_space_dim(&quiver, &udims(&delta)) as u32);
    if !deg1.is_empty() && npoints.is_some_and(|p| p <= SWEEP_LIMIT) {
        let mut pending = deg1.clone();
        for p in lex_points(&field, &quiver, &udims(&delta)) {
            if let Some(pos) = pending.iter().position(|&k| decompose::indecomposables_isomorphic(&p, &raw[k])) {
                raw[pending[pos]] = p;
                pending.remove(pos);
                if pending.is_empty() {
                    break;
                }
            }
        }
        if !pending.is_empty() {
            return Err(Error::Contract("homogeneous simple not met in the sweep of E_δ".into()));
        }
    }
    homog.sort_by(|&a, &b| raw[a].total_dim().cmp(&raw[b].total_dim()).then_with(|| raw[a].encode().cmp(&raw[b].encode())));
    let mut next_param: BTreeMap<u32, u32> = BTreeMap::new();
    for &k in &homog {
        let total = raw[k].total_dim() as i64;
        if total % delta_total != 0 {
            return Err(Error::Contract("homogeneous simple with dimension not a multiple of δ".into()));
        }
        let degree = (total / delta_total) as u32;
        let param = next_param.entry(degree).or_insert(0);
        *param += 1;
        labels[k] = Some(IndecLabel::RegularHomog { degree, param: *param, level: 0 });
        residue[k] = degree;
    }

    // Inhomogeneous tubes as Φ⁺-orbits of regular simples.
    let mut tubes_raw: Vec<Vec<usize>> = Vec::new();
    let mut assigned: Vec<usize> = Vec::new();
    for &k in &inhomog {
        if assigned.contains(&k) {
            continue;
        }
        let mut orbit = vec![k];
        let mut cur = k;
        loop {
            let next = phi[&cur].ok_or_else(|| Error::Contract("Φ⁺ of a regular simple left the catalog".into()))?;
            if next == k {
                break;
            }
            if orbit.contains(&next) || orbit.len() > n1 + 1 {
                return Err(Error::Contract("Φ⁺-orbit of a regular simple is not a cycle".into()));
            }
            orbit.push(next);
            cur = next;
        }
        let sum = orbit.iter().fold(DimVec::zero(quiver.num_vertices()), |acc, &x| &acc + &raw[x].dimvec());
        if sum != delta {
            return Err(Error::Contract("regular simples of a tube do not add up to δ".into()));
        }
        let start = (0..orbit.len()).min_by(|&a, &b| raw[orbit[a]].dims.cmp(&raw[orbit[b]].dims).then(raw[orbit[a]].encode().cmp(&raw[orbit[b]].encode()))).unwrap();
        orbit.rotate_left(start);
        assigned.extend(&orbit);
        tubes_raw.push(orbit);
    }
    tubes_raw.sort_by(|a, b| raw[a[0]].dims.cmp(&raw[b[0]].dims).then(raw[a[0]].encode().cmp(&raw[b[0]].encode())));
    if tubes_raw.len() > 3 {
        return Err(Error::Contract(format!("{} inhomogeneous tubes found", tubes_raw.len())));
    }
    for (t, orbit) in tubes_raw.iter().enumerate() {
        for (a, &k) in orbit.iter().enumerate() {
            labels[k] = Some(IndecLabel::RegularInhomog { tube: t as u32 + 1, ray: a as u32 + 1, level: 0 });
        }
    }

    // Remaining regular modules: locate the regular top among the simples.
    for &k in &regular {
        if labels[k].is_some() {
            continue;
        }
        let top = simples
            .iter()
            .copied()
            .find(|&s| rep::hom_dim(&raw[k], &raw[s]).expect("compatible") > 0)
            .ok_or_else(|| Error::Contract("regular module without a regular simple quotient".into()))?;
        match labels[top].clone() {
            Some(IndecLabel::RegularHomog { degree, param, .. }) => {
                let level = raw[k].total_dim() / raw[top].total_dim() - 1;
                labels[k] = Some(IndecLabel::RegularHomog { degree, param, level: level as u32 });
                residue[k] = degree;
            }
            Some(IndecLabel::RegularInhomog { tube, ray, .. }) => {
                let orbit = &tubes_raw[tube as usize - 1];
                let target = raw[k].dimvec();
                let mut acc = DimVec::zero(quiver.num_vertices());
                let mut level = None;
                for step in 0..=target.total() as usize {
                    acc = &acc + &raw[orbit[(ray as usize - 1 + step) % orbit.len()]].dimvec();
                    if acc == target {
                        level = Some(step as u32);
                        break;
                    }
                }
                let level = level.ok_or_else(|| Error::Contract("tube module dimension is not a run of regular simples".into()))?;
                labels[k] = Some(IndecLabel::RegularInhomog { tube, ray, level });
            }
            _ => return Err(Error::Contract("regular top is not labelled".into())),
        }
    }

    let mut indecs: Vec<Indec> = raw
        .into_iter()
        .zip(labels)
        .zip(residue)
        .map(|((rep, label), residue_degree)| Indec { label: label.expect("every indecomposable is labelled"), rep, residue_degree })
        .collect();
    indecs.sort_by(|a, b| a.rep.total_dim().cmp(&b.rep.total_dim()).then_with(|| a.rep.dims.cmp(&b.rep.dims)).then_with(|| a.label.cmp(&b.label)));
    let positions: HashMap<IndecLabel, usize> = indecs.iter().enumerate().map(|(k, x)| (x.label.clone(), k)).collect();
    if positions.len() != indecs.len() {
        return Err(Error::Contract("two indecomposables share a label".into()));
    }
    let tubes = tubes_raw
        .iter()
        .enumerate()
        .map(|(t, orbit)| Tube {
            id: t as u32 + 1,
            simples: (1..=orbit.len() as u32).map(|a| positions[&IndecLabel::RegularInhomog { tube: t as u32 + 1, ray: a, level: 0 }]).collect(),
        })
        .collect();
    let hom: Vec<Vec<usize>> = exec.map_range(indecs.len(), |k| {
        (0..indecs.len()).map(|l| rep::hom_dim(&indecs[k].rep, &indecs[l].rep).expect("compatible")).collect()
    });
    let by_dims = index_by_dims(&indecs);
    let pdims = pdims.into_iter().filter(|d| d.le(&bound)).collect();
    let idims = idims.into_iter().filter(|(_, d)| d.le(&bound)).collect();
    Ok(Catalog { quiver, field, order, bound, indecs, by_dims, hom, preprojective_dims: pdims, preinjective_dims: idims, tubes })
}
