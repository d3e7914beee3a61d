//! U⁻ at generic v: weight-space normal forms modulo the quantum Serre
//! relations, the bar involution, bar-invariant correction of a lattice
//! basis, and the comparison with the Hall side.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::flags::Word;
use crate::hall::{Hall, HallElement};
use crate::quiver::{DimVec, Quiver};
use crate::ring::{qbinom, qfactorial, LaurentInt, ScalarSqrtQ};

/// Symmetric generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    c: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(c: Vec<Vec<i64>>) -> Result<CartanMatrix> {
        let n = c.len();
        for i in 0..n {
            if c[i].len() != n || c[i][i] != 2 {
                return Err(Error::Domain("Cartan matrix must be square with 2 on the diagonal".into()));
            }
            for j in 0..n {
                if i != j && (c[i][j] > 0 || c[i][j] != c[j][i]) {
                    return Err(Error::Domain("Cartan matrix must be symmetric with nonpositive off-diagonal entries".into()));
                }
            }
        }
        Ok(CartanMatrix { c })
    }

    /// c_ij = (e_i, e_j) for the symmetric Euler form.
    pub fn from_quiver(q: &Quiver) -> CartanMatrix {
        let n = q.num_vertices();
        let c = (0..n).map(|i| (0..n).map(|j| q.symmetric_form(&q.unit(i), &q.unit(j))).collect()).collect();
        CartanMatrix { c }
    }

    /// Type A_n, vertices on a path.
    pub fn finite_a(n: usize) -> CartanMatrix {
        let c = (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect()).collect();
        CartanMatrix { c }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    pub fn form(&self, a: &DimVec, b: &DimVec) -> i64 {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a.get(i) * self.c[i][j] * b.get(j)).sum()
    }

    /// Positive roots α ≤ bound with multiplicity: (α,α) = 2 real, (α,α) = 0
    /// imaginary with multiplicity n − 1. Valid for finite and affine type.
    pub fn positive_roots(&self, bound: &DimVec) -> Vec<(DimVec, u64)> {
        bound
            .below()
            .into_iter()
            .filter(|a| !a.is_zero())
            .filter_map(|a| match self.form(&a, &a) {
                2 => Some((a, 1)),
                0 => Some((a, self.n() as u64 - 1)),
                _ => None,
            })
            .collect()
    }
}

/// Kostant partition function: ways to write ν as a sum of positive roots
/// counted with multiplicity.
pub fn kostant_count(cartan: &CartanMatrix, nu: &DimVec) -> u64 {
    let below = nu.below();
    let pos: HashMap<&DimVec, usize> = below.iter().enumerate().map(|(k, d)| (d, k)).collect();
    let mut ways = vec![0u64; below.len()];
    ways[pos[&DimVec::zero(nu.len())]] = 1;
    for (root, mult) in cartan.positive_roots(nu) {
        for _ in 0..mult {
            // below() is sorted so that every d − root precedes d
            for k in 0..below.len() {
                let rest = &below[k] - &root;
                if rest.is_nonnegative() {
                    ways[k] += ways[pos[&rest]];
                }
            }
        }
    }
    ways[pos[nu]]
}

fn words_of(weight: &DimVec) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<i64>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            if rest[i] > 0 {
                rest[i] -= 1;
                cur.push(i);
                go(rest, cur, out);
                cur.pop();
                rest[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut weight.0.clone(), &mut Vec::new(), &mut out);
    out
}

fn word_weight(n: usize, w: &[usize]) -> DimVec {
    let mut d = DimVec::zero(n);
    for &i in w {
        d.0[i] += 1;
    }
    d
}

/// Divide a row by the gcd of its entries and normalize the entry at `lead`.
fn primitive_row(row: &mut [LaurentInt], lead: usize) {
    let g = row.iter().fold(LaurentInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let unit = row[lead].div_exact(&g).map(|x| {
        let n = x.unit_normal();
        (n.min_exp().unwrap_or(0) - x.min_exp().unwrap_or(0), x.leading_sign() == std::cmp::Ordering::Less)
    });
    for x in row.iter_mut() {
        let mut y = x.div_exact(&g).expect("gcd divides");
        if let Some((shift, neg)) = unit {
            y = y.shift(shift);
            if neg {
                y = -y;
            }
        }
        *x = y;
    }
}

fn leading(row: &[LaurentInt]) -> Option<usize> {
    (0..row.len()).rev().find(|&c| !row[c].is_zero())
}

/// row ← p·row − row[c]·pivot, made primitive.
fn eliminate(row: &mut [LaurentInt], c: usize, pivot: &[LaurentInt]) {
    if row[c].is_zero() {
        return;
    }
    let (p, a) = (pivot[c].clone(), row[c].clone());
    for (x, y) in row.iter_mut().zip(pivot) {
        *x = &(&p * &*x) - &(&a * y);
    }
    if let Some(l) = leading(row) {
        primitive_row(row, l);
    }
}

/// One graded piece of U⁻: generator words of the weight, the reduced
/// Serre ideal component, and the standard words spanning the quotient.
#[derive(Debug)]
pub struct WeightSpace {
    pub weight: DimVec,
    pub words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// Reduced ideal rows keyed by their leading word.
    pivots: BTreeMap<usize, Vec<LaurentInt>>,
    /// Standard words, lexicographically increasing.
    pub basis: Vec<usize>,
    basis_pos: Vec<Option<usize>>,
}

impl WeightSpace {
    fn build(cartan: &CartanMatrix, weight: &DimVec) -> Result<WeightSpace> {
        let n = cartan.n();
        let words = words_of(weight);
        let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let mut pivots: BTreeMap<usize, Vec<LaurentInt>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let m = (1 - cartan.get(i, j)) as u32;
                let s = &DimVec::unit(n, i).scale(m as i64) + &DimVec::unit(n, j);
                let rest = weight - &s;
                if !rest.is_nonnegative() {
                    continue;
                }
                // [m]!·Σ_p (−1)^p F_i^(p) F_j F_i^(m−p) in plain words
                let serre: Vec<(LaurentInt, Vec<usize>)> = (0..=m)
                    .map(|p| {
                        let c = qbinom(m, p).expect("p ≤ m");
                        let mut w = vec![i; p as usize];
                        w.push(j);
                        w.extend(std::iter::repeat_n(i, (m - p) as usize));
                        (if p % 2 == 0 { c } else { -c }, w)
                    })
                    .collect();
                for left in rest.below() {
                    let right = &rest - &left;
                    let (lw, rw) = (words_of(&left), words_of(&right));
                    for u in &lw {
                        for w in &rw {
                            let mut row = vec![LaurentInt::zero(); words.len()];
                            for (c, mid) in &serre {
                                let full: Vec<usize> = u.iter().chain(mid).chain(w).copied().collect();
                                let k = index[&full];
                                row[k] = &row[k] + c;
                            }
                            Self::insert(&mut pivots, row);
                        }
                    }
                }
            }
        }
        let basis: Vec<usize> = (0..words.len()).filter(|k| !pivots.contains_key(k)).collect();
        let mut basis_pos = vec![None; words.len()];
        for (p, &k) in basis.iter().enumerate() {
            basis_pos[k] = Some(p);
        }
        Ok(WeightSpace { weight: weight.clone(), words, index, pivots, basis, basis_pos })
    }

    /// Adds a row to the reduced echelon set, keeping it fully reduced.
    fn insert(pivots: &mut BTreeMap<usize, Vec<LaurentInt>>, mut row: Vec<LaurentInt>) {
        for (&c, p) in pivots.iter() {
            eliminate(&mut row, c, p);
        }
        let Some(lead) = leading(&row) else { return };
        primitive_row(&mut row, lead);
        for p in pivots.values_mut() {
            eliminate(p, lead, &row);
        }
        pivots.insert(lead, row);
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_words(&self) -> Vec<Vec<usize>> {
        self.basis.iter().map(|&k| self.words[k].clone()).collect()
    }

    /// Coordinates of a plain generator word on the standard words.
    fn reduce_word(&self, k: usize) -> UElement {
        let mut coords = vec![LaurentInt::zero(); self.dim()];
        if let Some(p) = self.basis_pos[k] {
            coords[p] = LaurentInt::one();
            return UElement::new(self.weight.clone(), coords, LaurentInt::one());
        }
        let row = &self.pivots[&k];
        for (p, &b) in self.basis.iter().enumerate() {
            coords[p] = -row[b].clone();
        }
        UElement::new(self.weight.clone(), coords, row[k].clone())
    }
}

/// Element of one weight space: coords / denom on the standard words,
/// kept in lowest terms with a unit-normal denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UElement {
    pub weight: DimVec,
    pub coords: Vec<LaurentInt>,
    pub denom: LaurentInt,
}

impl UElement {
    pub fn new(weight: DimVec, mut coords: Vec<LaurentInt>, mut denom: LaurentInt) -> UElement {
        if coords.iter().all(|c| c.is_zero()) {
            return UElement { weight, coords, denom: LaurentInt::one() };
        }
        let g = coords.iter().fold(denom.clone(), |g, c| g.gcd(c));
        for c in coords.iter_mut() {
            *c = c.div_exact(&g).expect("gcd divides");
        }
        denom = denom.div_exact(&g).expect("gcd divides");
        let shift = -denom.min_exp().unwrap_or(0);
        let neg = denom.leading_sign() == std::cmp::Ordering::Less;
        let fix = |x: &LaurentInt| {
            let y = x.shift(shift);
            if neg {
                -y
            } else {
                y
            }
        };
        UElement { weight, coords: coords.iter().map(fix).collect(), denom: fix(&denom) }
    }

    pub fn zero(weight: DimVec, dim: usize) -> UElement {
        UElement { weight, coords: vec![LaurentInt::zero(); dim], denom: LaurentInt::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &UElement) -> Result<UElement> {
        if self.weight != other.weight {
            return Err(Error::Domain(format!("adding weights {} and {}", self.weight, other.weight)));
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| &(x * &other.denom) + &(y * &self.denom)).collect();
        Ok(UElement::new(self.weight.clone(), coords, &self.denom * &other.denom))
    }

    pub fn sub(&self, other: &UElement) -> Result<UElement> {
        self.add(&other.scale(&LaurentInt::constant(-1)))
    }

    pub fn scale(&self, c: &LaurentInt) -> UElement {
        UElement::new(self.weight.clone(), self.coords.iter().map(|x| x * c).collect(), self.denom.clone())
    }

    pub fn divide(&self, c: &LaurentInt) -> Result<UElement> {
        if c.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(UElement::new(self.weight.clone(), self.coords.clone(), &self.denom * c))
    }

    /// v ↦ v⁻¹ on coefficients; standard words are fixed.
    pub fn bar(&self) -> UElement {
        UElement::new(self.weight.clone(), self.coords.iter().map(|c| c.bar()).collect(), self.denom.bar())
    }

    /// Coefficients are Laurent polynomials.
    pub fn is_integral(&self) -> bool {
        self.denom == LaurentInt::one()
    }
}

/// U⁻ for a Cartan matrix, with weight spaces built on demand.
pub struct UqMinus {
    pub cartan: CartanMatrix,
    pub max_total: i64,
    spaces: Mutex<HashMap<DimVec, Arc<WeightSpace>>>,
}

impl UqMinus {
    pub fn new(cartan: CartanMatrix, max_total: i64) -> UqMinus {
        UqMinus { cartan, max_total, spaces: Mutex::new(HashMap::new()) }
    }

    pub fn space(&self, weight: &DimVec) -> Result<Arc<WeightSpace>> {
        if weight.len() != self.cartan.n() || !weight.is_nonnegative() {
            return Err(Error::Domain(format!("weight {weight} does not fit the Cartan matrix")));
        }
        if weight.total() > self.max_total {
            return Err(Error::Resource(format!("weight {weight} exceeds total degree {}", self.max_total)));
        }
        if let Some(s) = self.spaces.lock().unwrap().get(weight) {
            return Ok(s.clone());
        }
        let s = Arc::new(WeightSpace::build(&self.cartan, weight)?);
        self.spaces.lock().unwrap().insert(weight.clone(), s.clone());
        Ok(s)
    }

    /// Builds the listed weight spaces concurrently.
    pub fn precompute(&self, weights: &[DimVec], exec: Exec) -> Result<()> {
        exec.map(weights, |w| self.space(w)).into_iter().collect::<Result<Vec<_>>>().map(|_| ())
    }

    pub fn dim(&self, weight: &DimVec) -> Result<usize> {
        Ok(self.space(weight)?.dim())
    }

    pub fn zero(&self, weight: &DimVec) -> Result<UElement> {
        Ok(UElement::zero(weight.clone(), self.dim(weight)?))
    }

    /// A plain word F_{i₁}⋯F_{i_k}.
    pub fn monomial(&self, word: &[usize]) -> Result<UElement> {
        let weight = word_weight(self.cartan.n(), word);
        let s = self.space(&weight)?;
        Ok(s.reduce_word(s.index[word]))
    }

    /// F_{i₁}^{(s₁)}⋯F_{i_k}^{(s_k)} in the standard-word basis.
    pub fn serre_normal_form(&self, word: &Word) -> Result<UElement> {
        let mut plain = Vec::new();
        let mut denom = LaurentInt::one();
        for &(s, i) in word.entries() {
            if i >= self.cartan.n() {
                return Err(Error::Domain(format!("vertex {i} out of range")));
            }
            plain.extend(std::iter::repeat_n(i, s as usize));
            denom = &denom * &qfactorial(s);
        }
        self.monomial(&plain)?.divide(&denom)
    }

    pub fn mul(&self, a: &UElement, b: &UElement) -> Result<UElement> {
        let sa = self.space(&a.weight)?;
        let sb = self.space(&b.weight)?;
        let weight = &a.weight + &b.weight;
        let mut acc = self.zero(&weight)?;
        for (x, &wa) in a.coords.iter().zip(&sa.basis) {
            if x.is_zero() {
                continue;
            }
            for (y, &wb) in b.coords.iter().zip(&sb.basis) {
                if y.is_zero() {
                    continue;
                }
                let w: Vec<usize> = sa.words[wa].iter().chain(&sb.words[wb]).copied().collect();
                acc = acc.add(&self.monomial(&w)?.scale(&(x * y)))?;
            }
        }
        acc.divide(&(&a.denom * &b.denom))
    }

    pub fn display(&self, e: &UElement) -> String {
        let Ok(s) = self.space(&e.weight) else { return "?".into() };
        let terms: Vec<String> = e
            .coords
            .iter()
            .zip(&s.basis)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, &k)| format!("({c})·F[{}]", s.words[k].iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if e.denom == LaurentInt::one() {
            body
        } else {
            format!("[{body}] / ({})", e.denom)
        }
    }
}

/// Σ_p (−1)^p F_i^(p) F_j F_i^(1−c_ij−p) as signed words.
pub fn serre_words(cartan: &CartanMatrix, i: usize, j: usize) -> Vec<(i64, Word)> {
    let m = (1 - cartan.get(i, j)) as u32;
    (0..=m).map(|p| (if p % 2 == 0 { 1 } else { -1 }, Word::new(vec![(p, i), (1, j), (m - p, i)]))).collect()
}

/// Rational function num/den with gcd removed.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Frac {
    num: LaurentInt,
    den: LaurentInt,
}

impl Frac {
    fn new(num: LaurentInt, den: LaurentInt) -> Frac {
        let e = UElement::new(DimVec::default(), vec![num], den);
        Frac { num: e.coords[0].clone(), den: e.denom }
    }
    fn zero() -> Frac {
        Frac { num: LaurentInt::zero(), den: LaurentInt::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn sub(&self, o: &Frac) -> Frac {
        Frac::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }
    fn mul(&self, o: &Frac) -> Frac {
        Frac::new(&self.num * &o.num, &self.den * &o.den)
    }
    fn div(&self, o: &Frac) -> Frac {
        Frac::new(&self.num * &o.den, &self.den * &o.num)
    }
}

/// Reduced row echelon form over ℚ(v); returns pivot columns.
fn rref(m: &mut [Vec<Frac>]) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, i);
        let p = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.div(&p);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_fracs(e: &UElement) -> Vec<Frac> {
    e.coords.iter().map(|c| Frac::new(c.clone(), e.denom.clone())).collect()
}

/// Coefficient vectors c with Σ c_k e_k = 0, cleared of denominators.
pub fn relations(elements: &[UElement]) -> Vec<Vec<LaurentInt>> {
    let n = elements.len();
    let Some(dim) = elements.first().map(|e| e.coords.len()) else { return Vec::new() };
    // transpose: rows are coordinates, columns are elements
    let mut m: Vec<Vec<Frac>> = (0..dim).map(|p| elements.iter().map(|e| Frac::new(e.coords[p].clone(), e.denom.clone())).collect()).collect();
    let piv = rref(&mut m);
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !piv.contains(c)) {
        let mut v: Vec<Frac> = vec![Frac::zero(); n];
        v[f] = Frac::new(LaurentInt::one(), LaurentInt::one());
        for (r, &c) in piv.iter().enumerate() {
            v[c] = Frac::zero().sub(&m[r][f]);
        }
        let den = v.iter().fold(LaurentInt::one(), |acc, x| {
            let g = acc.gcd(&x.den);
            (&acc * &x.den).div_exact(&g).expect("gcd divides")
        });
        let mut row: Vec<LaurentInt> = v.iter().map(|x| (&x.num * &den).div_exact(&x.den).expect("lcm")).collect();
        let lead = leading(&row).expect("nonzero relation");
        primitive_row(&mut row, lead);
        out.push(row);
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Correction {
    /// bar(e_k) = Σ_l bar_matrix[k][l] e_l
    pub bar_matrix: Vec<Vec<LaurentInt>>,
    /// b_k = Σ_l coeffs[k][l] e_l
    pub coeffs: Vec<Vec<LaurentInt>>,
    pub elements: Vec<UElement>,
}

/// The unique bar-invariant b_k = e_k + Σ_{l>k} c_kl e_l with
/// c_kl ∈ v⁻¹ℤ[v⁻¹], for a lattice basis with unitriangular bar matrix.
pub fn lusztig_correction(uq: &UqMinus, lattice: &[UElement]) -> Result<Correction> {
    let n = lattice.len();
    let Some(first) = lattice.first() else { return Ok(Correction { bar_matrix: vec![], coeffs: vec![], elements: vec![] }) };
    let dim = uq.dim(&first.weight)?;
    if n != dim || lattice.iter().any(|e| e.weight != first.weight) {
        return Err(Error::Contract(format!("lattice of {n} elements is not a basis of a weight space of dimension {dim}")));
    }
    // inverse of the coordinate matrix by row reduction of [E | I]
    let mut aug: Vec<Vec<Frac>> = lattice
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let mut row = to_fracs(e);
            row.extend((0..n).map(|l| Frac::new(LaurentInt::constant((k == l) as i64), LaurentInt::one())));
            row
        })
        .collect();
    if rref(&mut aug).iter().take_while(|&&c| c < n).count() != n {
        return Err(Error::Contract("lattice elements are linearly dependent".into()));
    }
    let inv: Vec<Vec<Frac>> = aug.iter().map(|r| r[n..].to_vec()).collect();
    let mut bar_matrix = Vec::new();
    for (k, e) in lattice.iter().enumerate() {
        let b = to_fracs(&e.bar());
        let mut row = Vec::new();
        for l in 0..n {
            let mut acc = Frac::zero();
            for p in 0..n {
                acc = acc.sub(&Frac::zero().sub(&b[p].mul(&inv[p][l])));
            }
            if acc.den != LaurentInt::one() {
                return Err(Error::Contract(format!("bar(e_{k}) has non-integral coefficient on e_{l}")));
            }
            let expect_one = l == k;
            if (l < k && !acc.num.is_zero()) || (expect_one && acc.num != LaurentInt::one()) {
                return Err(Error::Contract(format!("bar matrix is not unitriangular at ({k},{l}): {}", acc.num)));
            }
            row.push(acc.num);
        }
        bar_matrix.push(row);
    }
    let mut coeffs: Vec<Vec<LaurentInt>> = vec![vec![LaurentInt::zero(); n]; n];
    for k in (0..n).rev() {
        coeffs[k][k] = LaurentInt::one();
        // bar(e_k) − e_k in the e basis, then in the b basis
        let mut r: Vec<LaurentInt> = bar_matrix[k].clone();
        r[k] = &r[k] - &LaurentInt::one();
        for l in k + 1..n {
            let a = r[l].clone();
            if a.is_zero() {
                continue;
            }
            let d = a.negative_part();
            if &d - &d.bar() != a {
                return Err(Error::Contract(format!("bar(e_{k}) − e_{k} is not anti-invariant on b_{l}")));
            }
            let bl = coeffs[l].clone();
            for m in l..n {
                r[m] = &r[m] - &(&a * &bl[m]);
                coeffs[k][m] = &coeffs[k][m] + &(&d * &bl[m]);
            }
        }
    }
    let mut elements = Vec::new();
    for row in &coeffs {
        let mut acc = UElement::zero(first.weight.clone(), dim);
        for (c, e) in row.iter().zip(lattice) {
            if !c.is_zero() {
                acc = acc.add(&e.scale(c))?;
            }
        }
        elements.push(acc);
    }
    Ok(Correction { bar_matrix, coeffs, elements })
}

/// Bar invariance of the output and c_kl ∈ v⁻¹ℤ[v⁻¹] above a unit diagonal.
pub fn check_correction(c: &Correction) -> bool {
    let n = c.coeffs.len();
    let tri = (0..n).all(|k| {
        (0..n).all(|l| {
            let x = &c.coeffs[k][l];
            match l.cmp(&k) {
                std::cmp::Ordering::Less => x.is_zero(),
                std::cmp::Ordering::Equal => *x == LaurentInt::one(),
                std::cmp::Ordering::Greater => x.max_exp().is_none_or(|e| e < 0),
            }
        })
    });
    tri && c.elements.iter().all(|b| b.bar() == *b)
}

/// PBW lattice in type A₂: F₁^(z) F₀₁^(y) F₀^(x) with F₀₁ = F₀F₁ − v⁻¹F₁F₀,
/// ordered by decreasing y.
pub fn pbw_a2(uq: &UqMinus, weight: &DimVec) -> Result<Vec<UElement>> {
    if uq.cartan != CartanMatrix::finite_a(2) {
        return Err(Error::Domain("pbw_a2 needs the A2 Cartan matrix".into()));
    }
    let root = uq.monomial(&[0, 1])?.sub(&uq.monomial(&[1, 0])?.scale(&LaurentInt::monomial(1, -1)))?;
    let (a, b) = (weight.get(0), weight.get(1));
    let mut out = Vec::new();
    for y in (0..=a.min(b)).rev() {
        let (x, z) = (a - y, b - y);
        let mut ry = uq.monomial(&[])?;
        for _ in 0..y {
            ry = uq.mul(&ry, &root)?;
        }
        let ry = ry.divide(&qfactorial(y as u32))?;
        let left = uq.serre_normal_form(&Word::new(vec![(z as u32, 1)]))?;
        let right = uq.serre_normal_form(&Word::new(vec![(x as u32, 0)]))?;
        out.push(uq.mul(&uq.mul(&left, &ry)?, &right)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub q: u64,
    pub weight: DimVec,
    pub words: Vec<String>,
    pub symbolic_rank: usize,
    pub numeric_rank: usize,
    pub relations: usize,
    pub failures: Vec<String>,
}

impl ConsistencyReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.symbolic_rank == self.numeric_rank
    }
}

fn numeric_rank(elements: &[HallElement]) -> usize {
    let keys: Vec<String> = {
        let mut k: Vec<String> = elements.iter().flat_map(|e| e.coeffs.keys().cloned()).collect();
        k.sort();
        k.dedup();
        k
    };
    let mut m: Vec<Vec<ScalarSqrtQ>> = elements.iter().map(|e| keys.iter().map(|k| e.get(k)).collect()).collect();
    let mut rank = 0;
    for c in 0..keys.len() {
        let Some(i) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, i);
        let inv = m[rank][c].inv().expect("nonzero");
        let pr: Vec<ScalarSqrtQ> = m[rank].iter().map(|x| x * &inv).collect();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pr) {
                *x = &*x - &(&f * y);
            }
        }
        rank += 1;
    }
    rank
}

/// Every symbolic relation among the words holds between their Hall
/// elements at v = √q, and the Hall elements have the symbolic rank.
pub fn hall_consistency(uq: &UqMinus, hall: &Hall, words: &[Word]) -> Result<ConsistencyReport> {
    let n = uq.cartan.n();
    let weight = words.first().map(|w| w.weight(n)).unwrap_or_else(|| DimVec::zero(n));
    if words.iter().any(|w| w.weight(n) != weight) {
        return Err(Error::Domain("hall_consistency needs words of one weight".into()));
    }
    let q = hall.q();
    let nfs: Vec<UElement> = words.iter().map(|w| uq.serre_normal_form(w)).collect::<Result<_>>()?;
    let rels = relations(&nfs);
    let values: Vec<HallElement> = words.iter().map(|w| hall.evaluate_word(w)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for rel in &rels {
        let mut acc = HallElement::zero(q, weight.clone());
        for (c, v) in rel.iter().zip(&values) {
            if !c.is_zero() {
                acc = acc.add(&v.scale(&ScalarSqrtQ::from_laurent(q, c)))?;
            }
        }
        if !acc.is_zero() {
            let text: Vec<String> = rel.iter().zip(words).filter(|(c, _)| !c.is_zero()).map(|(c, w)| format!("({c}){}", w.display(hall.quiver()))).collect();
            failures.push(format!("relation {} fails at q={q}", text.join(" + ")));
        }
    }
    Ok(ConsistencyReport {
        q,
        weight,
        words: words.iter().map(|w| w.display(hall.quiver())).collect(),
        symbolic_rank: words.len() - rels.len(),
        numeric_rank: numeric_rank(&values),
        relations: rels.len(),
        failures,
    })
}

/// A random divided-power word of the given weight.
pub fn random_word<R: Rng>(weight: &DimVec, rng: &mut R) -> Word {
    let mut rest = weight.0.clone();
    let mut entries = Vec::new();
    while rest.iter().any(|&x| x > 0) {
        let live: Vec<usize> = (0..rest.len()).filter(|&i| rest[i] > 0).collect();
        let i = live[rng.gen_range(0..live.len())];
        let s = rng.gen_range(1..=rest[i]);
        rest[i] -= s;
        entries.push((s as u32, i));
    }
    Word::new(entries)
}

/// dim + 1 random words of one weight, which always satisfy a relation.
pub fn random_identity<R: Rng>(uq: &UqMinus, weight: &DimVec, rng: &mut R) -> Result<Vec<Word>> {
    let d = uq.dim(weight)?;
    Ok((0..=d).map(|_| random_word(weight, rng)).collect())
}

/// Sum of Laurent coefficients times ScalarSqrtQ; exposed for reports.
pub fn specialize(c: &LaurentInt, q: u64) -> ScalarSqrtQ {
    ScalarSqrtQ::from_laurent(q, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(e: &[(u32, usize)]) -> Word {
        Word::new(e.to_vec())
    }

    #[test]
    fn serre_examples() {
        let commuting = UqMinus::new(CartanMatrix::new(vec![vec![2, 0], vec![0, 2]]).unwrap(), 6);
        let a = commuting.monomial(&[0, 1]).unwrap();
        assert!(a.sub(&commuting.monomial(&[1, 0]).unwrap()).unwrap().is_zero());
        let kr = UqMinus::new(CartanMatrix::from_quiver(&Quiver::kronecker()), 8);
        let mut acc = kr.zero(&DimVec(vec![3, 1])).unwrap();
        for (sign, word) in serre_words(&kr.cartan, 0, 1) {
            acc = acc.add(&kr.serre_normal_form(&word).unwrap().scale(&LaurentInt::constant(sign))).unwrap();
        }
        assert!(acc.is_zero());
        assert_eq!(kr.dim(&DimVec(vec![3, 1])).unwrap(), 3);
        for n in 1..5u32 {
            let plain = kr.monomial(&vec![0; n as usize]).unwrap();
            let divided = kr.serre_normal_form(&w(&[(n, 0)])).unwrap();
            assert_eq!(plain, divided.scale(&qfactorial(n)));
        }
        assert!(matches!(kr.dim(&DimVec(vec![5, 4])), Err(Error::Resource(_))));
    }

    #[test]
    fn dimensions_are_kostant_counts() {
        let cases = [(CartanMatrix::from_quiver(&Quiver::kronecker()), 7), (CartanMatrix::from_quiver(&Quiver::affine_a(2)), 5), (CartanMatrix::finite_a(2), 6), (CartanMatrix::finite_a(3), 5)];
        for (cartan, total) in cases {
            let n = cartan.n();
            let uq = UqMinus::new(cartan.clone(), total);
            for nu in DimVec(vec![total; n]).below() {
                if nu.total() <= total {
                    assert_eq!(uq.dim(&nu).unwrap() as u64, kostant_count(&cartan, &nu), "{nu}");
                }
            }
        }
        let kr = CartanMatrix::from_quiver(&Quiver::kronecker());
        assert_eq!(kostant_count(&kr, &DimVec(vec![1, 1])), 2);
        assert_eq!(kostant_count(&CartanMatrix::finite_a(2), &DimVec(vec![1, 1])), 2);
    }

    #[test]
    fn bar_examples() {
        let uq = UqMinus::new(CartanMatrix::finite_a(2), 6);
        let f01 = uq.monomial(&[0, 1]).unwrap();
        assert_eq!(f01.bar(), f01);
        let vf = uq.monomial(&[0]).unwrap().scale(&LaurentInt::v());
        assert_eq!(vf.bar(), uq.monomial(&[0]).unwrap().scale(&LaurentInt::monomial(1, -1)));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let word = random_word(&DimVec(vec![2, 2]), &mut rng);
            let e = uq.serre_normal_form(&word).unwrap().scale(&LaurentInt::from_terms(&[(rng.gen_range(-3..3), 2), (1, -1)]));
            assert_eq!(e.bar().bar(), e);
            // divided-power words are bar invariant
            assert_eq!(uq.serre_normal_form(&word).unwrap().bar(), uq.serre_normal_form(&word).unwrap());
        }
        // bar is a ring homomorphism
        let a = uq.monomial(&[0]).unwrap().scale(&LaurentInt::v());
        let b = uq.monomial(&[1, 0]).unwrap().scale(&LaurentInt::from_terms(&[(2, 1), (-1, 3)]));
        assert_eq!(uq.mul(&a, &b).unwrap().bar(), uq.mul(&a.bar(), &b.bar()).unwrap());
    }

    #[test]
    fn correction_examples() {
        let uq = UqMinus::new(CartanMatrix::finite_a(2), 6);
        let fam = vec![uq.monomial(&[0, 1]).unwrap(), uq.monomial(&[1, 0]).unwrap()];
        let c = lusztig_correction(&uq, &fam).unwrap();
        assert_eq!(c.elements, fam);
        let rank1 = UqMinus::new(CartanMatrix::new(vec![vec![2]]).unwrap(), 4);
        let f2 = vec![rank1.serre_normal_form(&w(&[(2, 0)])).unwrap()];
        assert_eq!(lusztig_correction(&rank1, &f2).unwrap().elements, f2);
        let mut pbw = pbw_a2(&uq, &DimVec(vec![1, 1])).unwrap();
        pbw.reverse();
        assert!(matches!(lusztig_correction(&uq, &pbw), Err(Error::Contract(_))));
    }

    /// Canonical basis of U⁻(A₂): F₀^(a)F₁^(b)F₀^(c), b ≥ a+c, and
    /// F₁^(a)F₀^(b)F₁^(c), b ≥ a+c.
    fn a2_canonical(uq: &UqMinus, nu: &DimVec) -> Vec<UElement> {
        let mut out = Vec::new();
        for (i, j) in [(0usize, 1usize), (1, 0)] {
            for a in 0..=nu.get(i) {
                let c = nu.get(i) - a;
                let b = nu.get(j);
                if b >= a + c {
                    out.push(uq.serre_normal_form(&w(&[(a as u32, i), (b as u32, j), (c as u32, i)])).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn pbw_correction_gives_canonical_basis() {
        let uq = UqMinus::new(CartanMatrix::finite_a(2), 6);
        for nu in DimVec(vec![4, 4]).below() {
            if nu.total() > 4 {
                continue;
            }
            let lattice = pbw_a2(&uq, &nu).unwrap();
            let c = lusztig_correction(&uq, &lattice).unwrap();
            assert!(check_correction(&c), "{nu}");
            let canon = a2_canonical(&uq, &nu);
            assert_eq!(c.elements.len(), uq.dim(&nu).unwrap());
            for b in &c.elements {
                assert!(canon.contains(b), "{nu}: {}", uq.display(b));
            }
        }
    }

    #[test]
    fn hall_side() {
        use std::sync::Arc;
        for q in [2usize, 3] {
            let kq = Arc::new(Quiver::kronecker());
            let cat = Arc::new(Catalog::build(kq.clone(), Field::new(q).unwrap(), &DimVec(vec![3, 1]), Exec::Sequential).unwrap());
            let hall = Hall::new(cat, Exec::Sequential);
            let uq = UqMinus::new(CartanMatrix::from_quiver(&kq), 8);
            let words: Vec<Word> = serre_words(&uq.cartan, 0, 1).into_iter().map(|(_, w)| w).collect();
            let r = hall_consistency(&uq, &hall, &words).unwrap();
            assert!(r.pass(), "{r:?}");
            assert_eq!((r.symbolic_rank, r.relations), (3, 1));
            let terms: Vec<(ScalarSqrtQ, Word)> = serre_words(&uq.cartan, 0, 1).into_iter().map(|(s, w)| (ScalarSqrtQ::int(q as u64, s), w)).collect();
            assert!(hall.combination(&terms).unwrap().is_zero());
        }
        let a3 = Arc::new(Quiver::affine_a(3));
        let cat = Arc::new(Catalog::build(a3.clone(), Field::new(2).unwrap(), &DimVec(vec![1, 0, 1, 0]), Exec::Sequential).unwrap());
        let hall = Hall::new(cat, Exec::Sequential);
        let uq = UqMinus::new(CartanMatrix::from_quiver(&a3), 4);
        let r = hall_consistency(&uq, &hall, &[w(&[(1, 0), (1, 2)]), w(&[(1, 2), (1, 0)])]).unwrap();
        assert!(r.pass() && r.relations == 1);
        assert_eq!(hall.evaluate_word(&w(&[(1, 0), (1, 2)])).unwrap(), hall.evaluate_word(&w(&[(1, 2), (1, 0)])).unwrap());
    }
}
