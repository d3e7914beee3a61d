//! Hall numbers over F_q, the twisted Hall product, divided powers, word
//! evaluation, the on-disk Hall-number cache and polynomial interpolation.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::flags::Word;
use crate::mat::{self, Mat};
use crate::quiver::{DimVec, Quiver};
use crate::rep::{self, FqRep};
use crate::ring::ScalarSqrtQ;

/// A function on G_V-orbits of E_V(F_q), indexed by orbit fingerprints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallElement {
    pub q: u64,
    pub weight: DimVec,
    pub coeffs: BTreeMap<String, ScalarSqrtQ>,
}

impl HallElement {
    pub fn zero(q: u64, weight: DimVec) -> HallElement {
        HallElement { q, weight, coeffs: BTreeMap::new() }
    }

    pub fn get(&self, fp: &str) -> ScalarSqrtQ {
        self.coeffs.get(fp).cloned().unwrap_or_else(|| ScalarSqrtQ::zero(self.q))
    }

    pub fn insert(&mut self, fp: String, c: ScalarSqrtQ) {
        if c.is_zero() {
            self.coeffs.remove(&fp);
        } else {
            self.coeffs.insert(fp, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<&str> {
        self.coeffs.keys().map(|s| s.as_str()).collect()
    }

    fn check(&self, other: &HallElement) -> Result<()> {
        if self.q != other.q {
            return Err(Error::Domain(format!("field mismatch: q={} and q={}", self.q, other.q)));
        }
        Ok(())
    }

    pub fn add(&self, other: &HallElement) -> Result<HallElement> {
        self.check(other)?;
        if self.weight != other.weight && !self.is_zero() && !other.is_zero() {
            return Err(Error::Domain(format!("weights {} and {} differ", self.weight, other.weight)));
        }
        let mut out = if self.is_zero() { HallElement::zero(self.q, other.weight.clone()) } else { self.clone() };
        for (fp, c) in &other.coeffs {
            let s = &out.get(fp) + c;
            out.insert(fp.clone(), s);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ScalarSqrtQ) -> HallElement {
        let mut out = HallElement::zero(self.q, self.weight.clone());
        for (fp, x) in &self.coeffs {
            out.insert(fp.clone(), x * c);
        }
        out
    }
}

/// Integer polynomial in q with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, q: u64) -> BigRational {
        let x = BigRational::from_integer(q.into());
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

/// The interpolating polynomial of degree ≤ `degree_bound` through all
/// points; an interpolation error when no such polynomial exists.
pub fn interpolate(values: &[(u64, BigInt)], degree_bound: usize) -> Result<QPoly> {
    if values.len() <= degree_bound {
        return Err(Error::Interpolation(format!("{} values cannot certify degree ≤ {degree_bound}", values.len())));
    }
    let k = degree_bound + 1;
    // Newton divided differences on the first k points.
    let xs: Vec<BigRational> = values[..k].iter().map(|(q, _)| BigRational::from_integer((*q).into())).collect();
    let mut dd: Vec<BigRational> = values[..k].iter().map(|(_, y)| BigRational::from_integer(y.clone())).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let den = &xs[i] - &xs[i - level];
            if den.is_zero() {
                return Err(Error::Interpolation("repeated interpolation node".into()));
            }
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut coeffs = vec![BigRational::zero(); k];
    let mut basis = vec![BigRational::one()];
    for (i, c) in dd.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            coeffs[j] += c * b;
        }
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (j, b) in basis.iter().enumerate() {
            next[j + 1] += b;
            next[j] -= b * &xs[i];
        }
        basis = next;
    }
    let poly = QPoly(coeffs);
    for (q, y) in &values[k..] {
        if poly.eval(*q) != BigRational::from_integer(y.clone()) {
            return Err(Error::Interpolation(format!("value {y} at q={q} is off the degree-{degree_bound} fit")));
        }
    }
    Ok(poly)
}

/// d₁ − d₂ for a quotient of weight τ and a sub of weight ω.
pub fn twist(quiver: &Quiver, tau: &DimVec, omega: &DimVec) -> i64 {
    let diag: i64 = (0..quiver.num_vertices()).map(|i| tau.get(i) * omega.get(i)).sum();
    let arrows: i64 = quiver.arrows().iter().map(|&(s, t)| tau.get(s) * omega.get(t)).sum();
    diag + arrows
}

/// Accumulated shift of the n-fold product of the generators of a word,
/// nested to the left or to the right.
pub fn nested_shift(quiver: &Quiver, word: &Word, left: bool) -> i64 {
    let nv = quiver.num_vertices();
    let pieces: Vec<DimVec> = word.entries().iter().map(|&(s, i)| DimVec::unit(nv, i).scale(s as i64)).collect();
    if pieces.is_empty() {
        return 0;
    }
    let mut shift = 0;
    if left {
        let mut acc = pieces[0].clone();
        for p in &pieces[1..] {
            shift += twist(quiver, &acc, p);
            acc = &acc + p;
        }
    } else {
        let mut acc = pieces[pieces.len() - 1].clone();
        for p in pieces[..pieces.len() - 1].iter().rev() {
            shift += twist(quiver, p, &acc);
            acc = &acc + p;
        }
    }
    shift
}

/// Closed form of the accumulated shift: Σ_{a<b} twist(e_a, e_b).
pub fn closed_shift(quiver: &Quiver, word: &Word) -> i64 {
    let nv = quiver.num_vertices();
    let pieces: Vec<DimVec> = word.entries().iter().map(|&(s, i)| DimVec::unit(nv, i).scale(s as i64)).collect();
    let mut total = 0;
    for a in 0..pieces.len() {
        for b in a + 1..pieces.len() {
            total += twist(quiver, &pieces[a], &pieces[b]);
        }
    }
    total
}

/// Orbits of one dimension vector with an exact identification table.
pub struct ClassTable {
    pub dims: Vec<usize>,
    pub parts: Vec<Vec<(usize, usize)>>,
    pub fingerprints: Vec<String>,
    pub orbit_sizes: Vec<u128>,
    index: HashMap<String, usize>,
    probes: Vec<(bool, usize)>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl ClassTable {
    fn build(catalog: &Catalog, dims: &[usize]) -> Result<ClassTable> {
        let nu = DimVec(dims.iter().map(|&x| x as i64).collect());
        let classes = catalog.iso_classes(&nu)?;
        let parts: Vec<Vec<(usize, usize)>> = classes.iter().map(|c| c.parts.clone()).collect();
        let fingerprints: Vec<String> = parts.iter().map(|p| catalog.fingerprint(p)).collect();
        let orbit_sizes = classes.iter().map(|c| c.orbit_size).collect();
        let index = fingerprints.iter().enumerate().map(|(k, fp)| (fp.clone(), k)).collect();
        // Hom dimensions against indecomposables fitting inside ν, in both
        // directions, are additive in the Krull–Schmidt multiset.
        let candidates: Vec<(bool, usize)> = catalog
            .within(&nu)
            .into_iter()
            .flat_map(|k| [(true, k), (false, k)])
            .collect();
        let value = |p: &[(usize, usize)], probe: (bool, usize)| -> usize {
            let (into, k) = probe;
            p.iter().map(|&(l, m)| m * if into { catalog.hom(k, l) } else { catalog.hom(l, k) }).sum()
        };
        let separates = |probes: &[(bool, usize)]| -> bool {
            let mut seen = std::collections::HashSet::new();
            parts.iter().all(|p| seen.insert(probes.iter().map(|&pr| value(p, pr)).collect::<Vec<usize>>()))
        };
        if !separates(&candidates) {
            return Err(Error::Contract(format!("Hom dimensions do not separate the orbits of dimension {nu}")));
        }
        let mut probes = candidates;
        let mut k = 0;
        while k < probes.len() {
            let mut trial = probes.clone();
            trial.remove(k);
            if separates(&trial) {
                probes = trial;
            } else {
                k += 1;
            }
        }
        let lookup = parts.iter().enumerate().map(|(c, p)| (probes.iter().map(|&pr| value(p, pr)).collect(), c)).collect();
        Ok(ClassTable { dims: dims.to_vec(), parts, fingerprints, orbit_sizes, index, probes, lookup })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn index_of(&self, fp: &str) -> Option<usize> {
        self.index.get(fp).copied()
    }

    /// Orbit of a representation of this dimension vector.
    pub fn classify(&self, catalog: &Catalog, m: &FqRep) -> Result<usize> {
        let key: Vec<usize> = self
            .probes
            .iter()
            .map(|&(into, k)| {
                let x = catalog.rep(k);
                if into { rep::hom_dim(x, m) } else { rep::hom_dim(m, x) }
            })
            .collect::<Result<_>>()?;
        self.lookup.get(&key).copied().ok_or_else(|| Error::Contract(format!("no orbit of dimension {} has Hom profile {key:?}", m.dimvec())))
    }
}

/// Counts of (quotient class, sub class) over the x-stable graded subspaces
/// of one module with a fixed sub dimension vector.
pub type Tally = BTreeMap<(usize, usize), u64>;

/// x-stable graded subspaces U ⊆ M with dim U = d, as column bases.
pub fn stable_subspaces(m: &FqRep, d: &[usize]) -> Vec<Vec<Mat>> {
    let f = &m.field;
    let nv = m.quiver.num_vertices();
    let choices: Vec<Vec<Mat>> = (0..nv).map(|i| mat::subspaces(f, m.dims[i], d[i])).collect();
    let arrows = m.quiver.arrows().to_vec();
    let mut out = Vec::new();
    let mut cur: Vec<Mat> = Vec::with_capacity(nv);
    fn rec(m: &FqRep, arrows: &[(usize, usize)], choices: &[Vec<Mat>], cur: &mut Vec<Mat>, out: &mut Vec<Vec<Mat>>) {
        let v = cur.len();
        if v == choices.len() {
            out.push(cur.clone());
            return;
        }
        let f = &m.field;
        'next: for u in &choices[v] {
            cur.push(u.clone());
            for (h, &(s, t)) in arrows.iter().enumerate() {
                if s.max(t) != v {
                    continue;
                }
                // x_h(U_s) ⊆ U_t
                let img = m.mats[h].mul(f, &cur[s]);
                let joined = Mat::hcat(&[&cur[t], &img], m.dims[t]);
                if mat::rank(f, &joined) != cur[t].cols {
                    cur.pop();
                    continue 'next;
                }
            }
            rec(m, arrows, choices, cur, out);
            cur.pop();
        }
    }
    rec(m, &arrows, &choices, &mut cur, &mut out);
    out
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    m: String,
    n: String,
    l: String,
    g: u64,
}

/// Hall numbers persisted as JSON lines, one file per (quiver, q).
#[derive(Default)]
pub struct HallCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(String, String, String), u64>,
    pending: Vec<(String, String, String, u64)>,
    pub warnings: Vec<String>,
}

impl HallCache {
    pub fn in_memory() -> HallCache {
        HallCache::default()
    }

    /// Opens `dir/hall-<quiver hash>-q<q>.jsonl`. A corrupt file is
    /// discarded with a warning and rebuilt from scratch.
    pub fn open(dir: &Path, quiver: &Quiver, q: usize) -> Result<HallCache> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("hall-{}-q{q}.jsonl", quiver.hash()));
        let mut cache = HallCache { path: Some(path.clone()), ..HallCache::default() };
        if let Ok(text) = fs::read_to_string(&path) {
            for (no, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheRecord>(line) {
                    Ok(r) => {
                        cache.entries.insert((r.m, r.n, r.l), r.g);
                    }
                    Err(e) => {
                        cache.warnings.push(format!("corrupt Hall cache {} at line {}: {e}; rebuilding", path.display(), no + 1));
                        cache.entries.clear();
                        fs::write(&path, "")?;
                        break;
                    }
                }
            }
        }
        Ok(cache)
    }

    pub fn get(&self, m: &str, n: &str, l: &str) -> Option<u64> {
        self.entries.get(&(m.to_string(), n.to_string(), l.to_string())).copied()
    }

    pub fn insert(&mut self, m: &str, n: &str, l: &str, g: u64) {
        let key = (m.to_string(), n.to_string(), l.to_string());
        if self.entries.insert(key, g).is_none() {
            self.pending.push((m.to_string(), n.to_string(), l.to_string(), g));
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends records inserted since the last flush.
    pub fn flush(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            self.pending.clear();
            return Ok(());
        };
        if self.pending.is_empty() {
            return Ok(());
        }
        let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
        for (m, n, l, g) in self.pending.drain(..) {
            let line = serde_json::to_string(&CacheRecord { m, n, l, g })?;
            writeln!(file, "{line}")?;
        }
        Ok(())
    }
}

/// Hall-algebra computations over one catalog.
pub struct Hall {
    pub catalog: Arc<Catalog>,
    pub exec: Exec,
    tables: Mutex<HashMap<Vec<usize>, Arc<ClassTable>>>,
    tallies: Mutex<HashMap<(Vec<usize>, usize, Vec<usize>), Arc<Tally>>>,
    cache: Mutex<HallCache>,
}

impl Hall {
    pub fn new(catalog: Arc<Catalog>, exec: Exec) -> Hall {
        Hall::with_cache(catalog, exec, HallCache::in_memory())
    }

    pub fn with_cache(catalog: Arc<Catalog>, exec: Exec, cache: HallCache) -> Hall {
        Hall { catalog, exec, tables: Mutex::new(HashMap::new()), tallies: Mutex::new(HashMap::new()), cache: Mutex::new(cache) }
    }

    pub fn q(&self) -> u64 {
        self.catalog.q() as u64
    }

    pub fn quiver(&self) -> &Quiver {
        &self.catalog.quiver
    }

    pub fn flush_cache(&self) -> Result<()> {
        self.cache.lock().expect("cache lock").flush()
    }

    pub fn cache_warnings(&self) -> Vec<String> {
        self.cache.lock().expect("cache lock").warnings.clone()
    }

    pub fn table(&self, dims: &[usize]) -> Result<Arc<ClassTable>> {
        if let Some(t) = self.tables.lock().expect("table lock").get(dims) {
            return Ok(t.clone());
        }
        let t = Arc::new(ClassTable::build(&self.catalog, dims)?);
        self.tables.lock().expect("table lock").entry(dims.to_vec()).or_insert(t.clone());
        Ok(t)
    }

    fn udims(&self, d: &DimVec) -> Result<Vec<usize>> {
        if !d.is_nonnegative() {
            return Err(Error::Domain(format!("negative weight {d}")));
        }
        Ok((0..d.len()).map(|i| d.udim(i)).collect())
    }

    /// Tally of (quotient, sub) orbits over stable subspaces of dimension d
    /// in the orbit `class` of dimension `dims`.
    pub fn tally(&self, dims: &[usize], class: usize, d: &[usize]) -> Result<Arc<Tally>> {
        let key = (dims.to_vec(), class, d.to_vec());
        if let Some(t) = self.tallies.lock().expect("tally lock").get(&key) {
            return Ok(t.clone());
        }
        let mt = self.table(dims)?;
        let quot: Vec<usize> = dims.iter().zip(d).map(|(a, b)| a - b).collect();
        let nt = self.table(&quot)?;
        let lt = self.table(d)?;
        let m = self.catalog.direct_sum(&mt.parts[class]);
        let mut tally = Tally::new();
        for bases in stable_subspaces(&m, d) {
            let l = lt.classify(&self.catalog, &m.sub_rep(&bases))?;
            let n = nt.classify(&self.catalog, &m.quotient_rep(&bases))?;
            *tally.entry((n, l)).or_default() += 1;
        }
        {
            let mut cache = self.cache.lock().expect("cache lock");
            for (&(n, l), &g) in &tally {
                cache.insert(&mt.fingerprints[class], &nt.fingerprints[n], &lt.fingerprints[l], g);
            }
        }
        let tally = Arc::new(tally);
        self.tallies.lock().expect("tally lock").insert(key, tally.clone());
        Ok(tally)
    }

    /// g^M_{N,L}: stable U ⊆ M with U ≅ L and M/U ≅ N.
    pub fn hall_number(&self, m: &FqRep, n_fp: &str, l_fp: &str) -> Result<u64> {
        let dims = m.dims.clone();
        let mt = self.table(&dims)?;
        let class = mt.classify(&self.catalog, m)?;
        self.hall_number_of(&dims, class, n_fp, l_fp)
    }

    /// g^M_{N,L} with all three given by fingerprints.
    pub fn hall_number_fp(&self, m_fp: &str, n_fp: &str, l_fp: &str) -> Result<u64> {
        let m_parts = self.parts_of(m_fp)?;
        let dims = self.catalog.parts_dims(&m_parts);
        let mt = self.table(&dims)?;
        let class = mt.index_of(m_fp).ok_or_else(|| Error::Domain(format!("unknown orbit {m_fp}")))?;
        self.hall_number_of(&dims, class, n_fp, l_fp)
    }

    fn hall_number_of(&self, dims: &[usize], class: usize, n_fp: &str, l_fp: &str) -> Result<u64> {
        let mt = self.table(dims)?;
        if let Some(g) = self.cache.lock().expect("cache lock").get(&mt.fingerprints[class], n_fp, l_fp) {
            return Ok(g);
        }
        let n_dims = self.catalog.parts_dims(&self.parts_of(n_fp)?);
        let l_dims = self.catalog.parts_dims(&self.parts_of(l_fp)?);
        if n_dims.iter().zip(&l_dims).zip(dims).any(|((a, b), c)| a + b != *c) {
            return Err(Error::Domain(format!("|{n_fp}| + |{l_fp}| differs from |{}|", mt.fingerprints[class])));
        }
        let nt = self.table(&n_dims)?;
        let lt = self.table(&l_dims)?;
        let (n, l) = (nt.index_of(n_fp).unwrap(), lt.index_of(l_fp).unwrap());
        let g = self.tally(dims, class, &l_dims)?.get(&(n, l)).copied().unwrap_or(0);
        self.cache.lock().expect("cache lock").insert(&mt.fingerprints[class], n_fp, l_fp, g);
        Ok(g)
    }

    /// Catalog parts of an orbit fingerprint.
    pub fn parts_of(&self, fp: &str) -> Result<Vec<(usize, usize)>> {
        if fp == "0" {
            return Ok(Vec::new());
        }
        let mut out: BTreeMap<usize, usize> = BTreeMap::new();
        for item in fp.split('+') {
            let (label, mult) = match item.split_once('^') {
                Some((a, b)) => (a, b.parse::<usize>().map_err(|_| Error::Parse(format!("bad multiplicity in {item}")))?),
                None => (item, 1),
            };
            let k = (0..self.catalog.len())
                .find(|&k| self.catalog.label(k).to_string() == label)
                .ok_or_else(|| Error::Domain(format!("unknown indecomposable {label}")))?;
            *out.entry(k).or_default() += mult;
        }
        Ok(out.into_iter().collect())
    }

    /// The twisted product: [M] ↦ v^(−(d₁−d₂)) Σ g^M_{N,L} f[N] g[L], with
    /// f on quotients and g on subs.
    pub fn product(&self, f: &HallElement, g: &HallElement) -> Result<HallElement> {
        f.check(g)?;
        let q = self.q();
        if f.q != q {
            return Err(Error::Domain(format!("element over q={} used with a catalog over q={q}", f.q)));
        }
        let weight = &f.weight + &g.weight;
        let mut out = HallElement::zero(q, weight.clone());
        if f.is_zero() || g.is_zero() {
            return Ok(out);
        }
        let dims = self.udims(&weight)?;
        let sub = self.udims(&g.weight)?;
        let quot = self.udims(&f.weight)?;
        let mt = self.table(&dims)?;
        let nt = self.table(&quot)?;
        let lt = self.table(&sub)?;
        let fv: Vec<Option<ScalarSqrtQ>> = nt.fingerprints.iter().map(|fp| f.coeffs.get(fp).cloned()).collect();
        let gv: Vec<Option<ScalarSqrtQ>> = lt.fingerprints.iter().map(|fp| g.coeffs.get(fp).cloned()).collect();
        let shift = ScalarSqrtQ::v_pow(q, -twist(self.quiver(), &f.weight, &g.weight));
        let values: Vec<Result<ScalarSqrtQ>> = self.exec.map_range(mt.len(), |c| {
            let tally = self.tally(&dims, c, &sub)?;
            let mut acc = ScalarSqrtQ::zero(q);
            for (&(n, l), &count) in tally.iter() {
                if let (Some(a), Some(b)) = (&fv[n], &gv[l]) {
                    acc = &acc + &(a * b).scale(&BigRational::from_integer(count.into()));
                }
            }
            Ok(&acc * &shift)
        });
        for (c, v) in values.into_iter().enumerate() {
            out.insert(mt.fingerprints[c].clone(), v?);
        }
        Ok(out)
    }

    /// The unit: the zero module with coefficient 1.
    pub fn unit(&self) -> HallElement {
        let mut e = HallElement::zero(self.q(), self.quiver().zero_dim());
        e.insert("0".into(), ScalarSqrtQ::one(self.q()));
        e
    }

    /// F_i^(n) at function level: coefficient 1 on the semisimple S_i^n.
    pub fn generator(&self, i: usize, n: usize) -> Result<HallElement> {
        let nv = self.quiver().num_vertices();
        if i >= nv {
            return Err(Error::Domain(format!("vertex {i} out of range")));
        }
        let weight = DimVec::unit(nv, i).scale(n as i64);
        let dims = self.udims(&weight)?;
        let t = self.table(&dims)?;
        let zero = FqRep::zero(self.catalog.field.clone(), self.catalog.quiver.clone(), dims);
        let c = t.classify(&self.catalog, &zero)?;
        let mut e = HallElement::zero(self.q(), weight);
        e.insert(t.fingerprints[c].clone(), ScalarSqrtQ::one(self.q()));
        Ok(e)
    }

    /// Left fold of the generators along the word.
    pub fn evaluate_word(&self, word: &Word) -> Result<HallElement> {
        let mut acc = self.unit();
        for &(s, i) in word.entries() {
            acc = self.product(&acc, &self.generator(i, s as usize)?)?;
        }
        Ok(acc)
    }

    /// Right fold of the generators along the word.
    pub fn evaluate_word_right(&self, word: &Word) -> Result<HallElement> {
        let mut acc = self.unit();
        for &(s, i) in word.entries().iter().rev() {
            acc = self.product(&self.generator(i, s as usize)?, &acc)?;
        }
        Ok(acc)
    }

    /// A count function as a Hall element.
    pub fn from_count_function(&self, word: &Word) -> Result<HallElement> {
        let nv = self.quiver().num_vertices();
        let values = crate::flags::count_function(word, &self.catalog, self.exec)?;
        let mut e = HallElement::zero(self.q(), word.weight(nv));
        for v in values {
            e.insert(self.catalog.fingerprint(&v.parts), v.value);
        }
        Ok(e)
    }

    /// Linear combination Σ c_k · evaluate_word(w_k) of one weight.
    pub fn combination(&self, terms: &[(ScalarSqrtQ, Word)]) -> Result<HallElement> {
        let mut acc: Option<HallElement> = None;
        for (c, w) in terms {
            let e = self.evaluate_word(w)?.scale(c);
            acc = Some(match acc {
                None => e,
                Some(a) => a.add(&e)?,
            });
        }
        Ok(acc.unwrap_or_else(|| self.unit()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn hall(q: usize, bound: &[i64]) -> Hall {
        let quiver = Arc::new(Quiver::kronecker());
        let field = Field::new(q).unwrap();
        let cat = Catalog::build(quiver, field, &DimVec(bound.to_vec()), Exec::Sequential).unwrap();
        Hall::new(Arc::new(cat), Exec::Sequential)
    }

    fn w(e: &[(u32, usize)]) -> Word {
        Word::new(e.to_vec())
    }

    #[test]
    fn hall_number_examples() {
        let h = hall(3, &[2, 2]);
        let cat = h.catalog.clone();
        let si = cat.fingerprint(&h.parts_of("I1").unwrap());
        assert_eq!(si, "I1");
        let split = FqRep::direct_sum_all(&[cat.rep(cat.index_of(&crate::catalog::IndecLabel::Preprojective(0)).unwrap()).clone(), cat.rep(cat.index_of(&crate::catalog::IndecLabel::Preinjective(1)).unwrap()).clone()], cat.field.clone(), cat.quiver.clone());
        assert_eq!(h.hall_number(&split, "P0", "I1").unwrap(), 1);
        let reg = FqRep::new(cat.field.clone(), cat.quiver.clone(), vec![1, 1], vec![Mat::from_rows(1, 1, vec![1]), Mat::from_rows(1, 1, vec![0])]).unwrap();
        assert_eq!(h.hall_number(&reg, "I1", "P0").unwrap(), 1);
        assert_eq!(h.hall_number(&reg, "P0", "I1").unwrap(), 0);
        assert!(h.hall_number(&reg, "P0", "P0").is_err());
    }

    #[test]
    fn word_examples() {
        let h = hall(2, &[2, 2]);
        let e = h.evaluate_word(&w(&[(1, 1), (1, 0)])).unwrap();
        assert_eq!(e.coeffs.len(), 4);
        assert!(e.coeffs.values().all(|c| *c == ScalarSqrtQ::v_pow(2, -2)));
        let e = h.evaluate_word(&w(&[(1, 0), (1, 1)])).unwrap();
        assert_eq!(e.support(), vec!["P0+I1"]);
    }

    #[test]
    fn divided_power() {
        for q in [2, 3] {
            let h = hall(q, &[2, 2]);
            let f = h.generator(0, 1).unwrap();
            let ff = h.product(&f, &f).unwrap();
            let two = &ScalarSqrtQ::v_pow(q as u64, 1) + &ScalarSqrtQ::v_pow(q as u64, -1);
            assert_eq!(ff, h.generator(0, 2).unwrap().scale(&two));
        }
    }

    #[test]
    fn unit_and_words_match_count_functions() {
        let h = hall(3, &[2, 2]);
        let f = h.generator(1, 1).unwrap();
        assert_eq!(h.product(&h.unit(), &f).unwrap(), f);
        for word in [w(&[(1, 1), (1, 0), (1, 1), (1, 0)]), w(&[(2, 1), (2, 0)]), w(&[(1, 0), (1, 1), (1, 1), (1, 0)])] {
            assert_eq!(h.evaluate_word(&word).unwrap(), h.from_count_function(&word).unwrap());
            assert_eq!(h.evaluate_word_right(&word).unwrap(), h.evaluate_word(&word).unwrap());
        }
    }

    #[test]
    fn shifts_agree() {
        let k = Quiver::kronecker();
        let word = w(&[(1, 1), (2, 0), (1, 1), (1, 0)]);
        let fl = crate::flags::flag_dims(&k, &word);
        assert_eq!(nested_shift(&k, &word, true), closed_shift(&k, &word));
        assert_eq!(nested_shift(&k, &word, false), closed_shift(&k, &word));
        assert_eq!(closed_shift(&k, &word), fl.stable);
    }

    #[test]
    fn interpolation() {
        let pts: Vec<(u64, BigInt)> = [2u64, 3, 4].iter().map(|&q| (q, BigInt::from(q + 1))).collect();
        let p = interpolate(&pts, 1).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.eval(7), BigRational::from_integer(8.into()));
        let c = interpolate(&[(2, 5.into()), (3, 5.into())], 0).unwrap();
        assert_eq!(c.degree(), Some(0));
        assert!(interpolate(&[(2, 1.into()), (3, 2.into()), (5, 9.into())], 1).is_err());
        assert!(interpolate(&[(2, 1.into())], 1).is_err());
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let k = Quiver::kronecker();
        let mut c = HallCache::open(dir.path(), &k, 2).unwrap();
        c.insert("P1", "I1", "P0", 3);
        c.flush().unwrap();
        let c2 = HallCache::open(dir.path(), &k, 2).unwrap();
        assert_eq!(c2.get("P1", "I1", "P0"), Some(3));
        let path = dir.path().join(format!("hall-{}-q2.jsonl", k.hash()));
        fs::write(&path, "{not json\n").unwrap();
        let c3 = HallCache::open(dir.path(), &k, 2).unwrap();
        assert!(c3.is_empty());
        assert_eq!(c3.warnings.len(), 1);
    }
}
