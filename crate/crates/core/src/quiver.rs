//! Affine quivers, their bilinear forms and root data.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Per-vertex integer vector; signed so that roots and reflections fit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DimVec(pub Vec<i64>);

impl DimVec {
    pub fn zero(n: usize) -> Self {
        DimVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &DimVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: i64) -> DimVec {
        DimVec(self.0.iter().map(|x| x * k).collect())
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn udim(&self, i: usize) -> usize {
        usize::try_from(self.0[i]).expect("negative dimension")
    }

    /// All nonnegative vectors componentwise ≤ self, in lexicographic order.
    pub fn below(&self) -> Vec<DimVec> {
        let mut out = vec![DimVec(Vec::new())];
        for &b in &self.0 {
            let mut next = Vec::new();
            for v in &out {
                for x in 0..=b {
                    let mut w = v.0.clone();
                    w.push(x);
                    next.push(DimVec(w));
                }
            }
            out = next;
        }
        out
    }
}

impl Add for &DimVec {
    type Output = DimVec;
    fn add(self, rhs: &DimVec) -> DimVec {
        DimVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DimVec {
    type Output = DimVec;
    fn sub(self, rhs: &DimVec) -> DimVec {
        DimVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for DimVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AffineType {
    Kronecker,
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::Kronecker => write!(f, "A1~"),
            AffineType::A(n) => write!(f, "A{n}~"),
            AffineType::D(n) => write!(f, "D{n}~"),
            AffineType::E(n) => write!(f, "E{n}~"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
    ty: AffineType,
    delta: DimVec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Root {
    pub real: bool,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Quiver> {
        let n = vertices.len();
        if arrows.iter().any(|&(s, t)| s >= n || t >= n) {
            return Err(Error::Domain("arrow endpoint out of range".into()));
        }
        if arrows.iter().any(|&(s, t)| s == t) {
            return Err(Error::Domain("loops are not allowed".into()));
        }
        let (ty, delta) = detect_type(n, &arrows)?;
        Ok(Quiver { vertices, arrows, ty, delta: DimVec(delta) })
    }

    pub fn from_spec(spec: &QuiverSpec) -> Result<Quiver> {
        let idx = |name: &str| {
            spec.vertices.iter().position(|v| v == name).ok_or_else(|| Error::Parse(format!("unknown vertex {name:?} in arrow list")))
        };
        let arrows = spec.arrows.iter().map(|(s, t)| Ok((idx(s)?, idx(t)?))).collect::<Result<Vec<_>>>()?;
        Quiver::new(spec.vertices.clone(), arrows)
    }

    pub fn from_json(text: &str) -> Result<Quiver> {
        let spec: QuiverSpec = serde_json::from_str(text).map_err(|e| {
            let at = format!(" at line {} column {}", e.line(), e.column());
            let msg = e.to_string();
            Error::Parse(format!("quiver JSON line {} column {}: {}", e.line(), e.column(), msg.strip_suffix(&at).unwrap_or(&msg)))
        })?;
        Quiver::from_spec(&spec)
    }

    pub fn spec(&self) -> QuiverSpec {
        QuiverSpec {
            vertices: self.vertices.clone(),
            arrows: self.arrows.iter().map(|&(s, t)| (self.vertices[s].clone(), self.vertices[t].clone())).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.spec()).expect("quiver serializes")
    }

    /// Hex digest of the canonical JSON form; arrow order matters.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Vertices `i` (index 0, the sink) and `j` (index 1) with two arrows j → i.
    pub fn kronecker() -> Quiver {
        Quiver::new(vec!["i".into(), "j".into()], vec![(1, 0), (1, 0)]).expect("Kronecker quiver")
    }

    /// Cycle of length n+1 with vertex 0 the only sink and vertex 1 the only
    /// source: arrows 1→0, then 1→2→…→n→0.
    pub fn affine_a(n: usize) -> Quiver {
        assert!(n >= 2);
        let vertices = (0..=n).map(|k| k.to_string()).collect();
        let mut arrows = vec![(1, 0)];
        for k in 1..n {
            arrows.push((k, k + 1));
        }
        arrows.push((n, 0));
        Quiver::new(vertices, arrows).expect("affine A quiver")
    }

    /// D₄ extended: center 0 and leaves 1..4, all arrows leaf → center.
    pub fn affine_d4() -> Quiver {
        let vertices = (0..5).map(|k| k.to_string()).collect();
        Quiver::new(vertices, vec![(1, 0), (2, 0), (3, 0), (4, 0)]).expect("affine D4 quiver")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn source(&self, h: usize) -> usize {
        self.arrows[h].0
    }

    pub fn target(&self, h: usize) -> usize {
        self.arrows[h].1
    }

    pub fn affine_type(&self) -> AffineType {
        self.ty
    }

    pub fn delta(&self) -> &DimVec {
        &self.delta
    }

    pub fn extending_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&i| self.delta.0[i] == 1).collect()
    }

    /// Number of arrows i → j.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.arrows.iter().filter(|&&(s, t)| s == i && t == j).count() as i64
    }

    pub fn unit(&self, i: usize) -> DimVec {
        DimVec::unit(self.num_vertices(), i)
    }

    pub fn zero_dim(&self) -> DimVec {
        DimVec::zero(self.num_vertices())
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.arrows.iter().all(|&(s, _)| s != i)
    }

    pub fn is_source(&self, i: usize) -> bool {
        self.arrows.iter().all(|&(_, t)| t != i)
    }

    pub fn arrows_into(&self, i: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&h| self.arrows[h].1 == i).collect()
    }

    pub fn arrows_out_of(&self, i: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&h| self.arrows[h].0 == i).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        seen == n
    }

    /// σ_i Q: the same arrows with those incident to i reversed.
    pub fn sigma(&self, i: usize) -> Quiver {
        let arrows = self.arrows.iter().map(|&(s, t)| if s == i || t == i { (t, s) } else { (s, t) }).collect();
        Quiver { vertices: self.vertices.clone(), arrows, ty: self.ty, delta: self.delta.clone() }
    }

    pub fn symmetric_form(&self, a: &DimVec, b: &DimVec) -> i64 {
        self.euler_form(a, b) + self.euler_form(b, a)
    }

    /// ⟨α,β⟩ = Σ α_i β_i − Σ_h α_{s(h)} β_{t(h)}.
    pub fn euler_form(&self, a: &DimVec, b: &DimVec) -> i64 {
        let diag: i64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| a.0[s] * b.0[t]).sum();
        diag - off
    }

    pub fn reflect(&self, i: usize, a: &DimVec) -> DimVec {
        let c = self.symmetric_form(a, &self.unit(i));
        let mut out = a.clone();
        out.0[i] -= c;
        out
    }

    /// Positive roots α ≤ bound, tagged real ((α,α)=2) or imaginary ((α,α)=0).
    pub fn positive_roots(&self, bound: &DimVec) -> Vec<(DimVec, Root)> {
        bound
            .below()
            .into_iter()
            .filter(|a| !a.is_zero())
            .filter_map(|a| {
                let n = self.symmetric_form(&a, &a);
                (n <= 2).then_some((a, Root { real: n == 2 }))
            })
            .collect()
    }

    /// Sinks-first sequence i₀,…,i_n with each i_k a sink of σ_{i_{k-1}}⋯σ_{i₀}Q.
    pub fn admissible_order(&self) -> Result<Vec<usize>> {
        if !self.is_acyclic() {
            return Err(Error::Unsupported("admissible order of a quiver with an oriented cycle".into()));
        }
        let mut cur = self.clone();
        let mut order = Vec::new();
        let mut used = vec![false; self.num_vertices()];
        for _ in 0..self.num_vertices() {
            let i = (0..self.num_vertices()).find(|&i| !used[i] && cur.is_sink(i)).ok_or_else(|| Error::Contract("no sink available".into()))?;
            used[i] = true;
            order.push(i);
            cur = cur.sigma(i);
        }
        debug_assert_eq!(cur.arrows, self.arrows);
        Ok(order)
    }
}

fn detect_type(n: usize, arrows: &[(usize, usize)]) -> Result<(AffineType, Vec<i64>)> {
    let reject = || Error::Domain("underlying graph is not of affine type".into());
    let mut adj = vec![vec![0usize; n]; n];
    for &(s, t) in arrows {
        adj[s][t] += 1;
        adj[t][s] += 1;
    }
    if !connected(&adj) {
        return Err(reject());
    }
    if n == 2 && arrows.len() == 2 {
        return Ok((AffineType::Kronecker, vec![1, 1]));
    }
    if adj.iter().flatten().any(|&m| m > 1) {
        return Err(reject());
    }
    let deg: Vec<usize> = adj.iter().map(|row| row.iter().sum()).collect();
    if arrows.len() == n && n >= 3 && deg.iter().all(|&d| d == 2) {
        return Ok((AffineType::A(n - 1), vec![1; n]));
    }
    if arrows.len() + 1 != n {
        return Err(reject());
    }
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    if deg.iter().any(|&d| d > 4) {
        return Err(reject());
    }
    let (adj_r, deg_r) = (&adj, &deg);
    let nbrs = move |v: usize| (0..n).filter(move |&w| adj_r[v][w] > 0);
    match branch.as_slice() {
        [c] if deg[*c] == 4 => {
            if n != 5 {
                return Err(reject());
            }
            let mut delta = vec![1; n];
            delta[*c] = 2;
            Ok((AffineType::D(4), delta))
        }
        [c] => {
            let mut arms: Vec<Vec<usize>> = nbrs(*c).map(|w| arm(&adj, *c, w)).collect();
            arms.sort_by_key(|a| a.len());
            let lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
            let (rank, center, arm_vals): (usize, i64, Vec<Vec<i64>>) = match lens.as_slice() {
                [2, 2, 2] => (6, 3, vec![vec![2, 1], vec![2, 1], vec![2, 1]]),
                [1, 3, 3] => (7, 4, vec![vec![2], vec![3, 2, 1], vec![3, 2, 1]]),
                [1, 2, 5] => (8, 6, vec![vec![3], vec![4, 2], vec![5, 4, 3, 2, 1]]),
                _ => return Err(reject()),
            };
            let mut delta = vec![0; n];
            delta[*c] = center;
            for (a, vals) in arms.iter().zip(arm_vals) {
                for (&v, x) in a.iter().zip(vals) {
                    delta[v] = x;
                }
            }
            Ok((AffineType::E(rank), delta))
        }
        [b1, b2] => {
            let leaves = |b: usize| nbrs(b).filter(|&w| deg_r[w] == 1).count();
            if deg[*b1] != 3 || deg[*b2] != 3 || leaves(*b1) != 2 || leaves(*b2) != 2 {
                return Err(reject());
            }
            let delta = (0..n).map(|v| if deg[v] == 1 { 1 } else { 2 }).collect();
            Ok((AffineType::D(n - 1), delta))
        }
        _ => Err(reject()),
    }
}

fn connected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if adj[v][w] > 0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Vertices of the arm starting at `first`, walking away from `center`.
fn arm(adj: &[Vec<usize>], center: usize, first: usize) -> Vec<usize> {
    let mut out = vec![first];
    let (mut prev, mut cur) = (center, first);
    loop {
        let next: Vec<usize> = (0..adj.len()).filter(|&w| adj[cur][w] > 0 && w != prev).collect();
        match next.as_slice() {
            [w] => {
                out.push(*w);
                prev = cur;
                cur = *w;
            }
            _ => return out,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[i64]) -> DimVec {
        DimVec(v.to_vec())
    }

    #[test]
    fn kronecker_forms() {
        let k = Quiver::kronecker();
        assert_eq!(k.symmetric_form(&k.unit(0), &k.unit(1)), -2);
        assert_eq!(k.symmetric_form(&dv(&[2, 1]), &dv(&[2, 1])), 2);
        assert_eq!(k.euler_form(k.delta(), k.delta()), 0);
        assert_eq!(k.euler_form(&dv(&[0, 1]), &dv(&[1, 0])), -2);
        assert_eq!(k.euler_form(&k.unit(0), &k.unit(0)), 1);
        assert_eq!(k.a(1, 0), 2);
    }

    #[test]
    fn kronecker_roots() {
        let k = Quiver::kronecker();
        let roots = k.positive_roots(&dv(&[2, 2]));
        let dims: Vec<DimVec> = roots.iter().map(|(d, _)| d.clone()).collect();
        let mut expected = vec![dv(&[1, 0]), dv(&[0, 1]), dv(&[1, 1]), dv(&[2, 1]), dv(&[1, 2]), dv(&[2, 2])];
        expected.sort();
        let mut got = dims.clone();
        got.sort();
        assert_eq!(got, expected);
        for (d, r) in roots {
            assert_eq!(r.real, !(d == dv(&[1, 1]) || d == dv(&[2, 2])));
        }
        assert!(!k.positive_roots(&dv(&[3, 1])).iter().any(|(d, _)| *d == dv(&[3, 1])));
    }

    #[test]
    fn reflections() {
        let k = Quiver::kronecker();
        assert_eq!(k.reflect(0, &k.unit(0)), dv(&[-1, 0]));
        assert_eq!(k.reflect(0, &k.unit(1)), dv(&[2, 1]));
        assert_eq!(k.reflect(0, k.delta()), *k.delta());
        assert_eq!(k.reflect(1, k.delta()), *k.delta());
    }

    #[test]
    fn admissible_orders() {
        assert_eq!(Quiver::kronecker().admissible_order().unwrap(), vec![0, 1]);
        let a = Quiver::affine_a(2);
        let order = a.admissible_order().unwrap();
        assert_eq!(order[0], 0);
        let back = order.iter().fold(a.clone(), |q, &i| q.sigma(i));
        assert_eq!(back, a);
        let cyc = Quiver::new(vec!["0".into(), "1".into(), "2".into()], vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(cyc.admissible_order().is_err());
    }

    fn chain(n: usize, edges: &[(usize, usize)]) -> Quiver {
        Quiver::new((0..n).map(|k| k.to_string()).collect(), edges.to_vec()).unwrap()
    }

    #[test]
    fn delta_is_radical_for_all_templates() {
        let quivers = [Quiver::kronecker(),
            Quiver::affine_a(2),
            Quiver::affine_a(4),
            Quiver::affine_d4(),
            chain(6, &[(0, 2), (1, 2), (2, 3), (4, 3), (5, 3)]),
            chain(7, &[(1, 0), (2, 1), (3, 0), (4, 3), (5, 0), (6, 5)]),
            chain(8, &[(1, 0), (2, 1), (3, 2), (4, 0), (5, 4), (6, 5), (7, 0)]),
            chain(9, &[(1, 0), (2, 0), (3, 2), (4, 0), (5, 4), (6, 5), (7, 6), (8, 7)])];
        let expect = [AffineType::Kronecker, AffineType::A(2), AffineType::A(4), AffineType::D(4), AffineType::D(5), AffineType::E(6), AffineType::E(7), AffineType::E(8)];
        for (q, ty) in quivers.iter().zip(expect) {
            assert_eq!(q.affine_type(), ty);
            for i in 0..q.num_vertices() {
                assert_eq!(q.symmetric_form(q.delta(), &q.unit(i)), 0, "{ty}");
            }
            assert!(!q.extending_vertices().is_empty());
            let roots = q.positive_roots(q.delta());
            let imag: Vec<_> = roots.iter().filter(|(_, r)| !r.real).collect();
            assert_eq!(imag.len(), 1);
            assert_eq!(&imag[0].0, q.delta());
        }
    }

    #[test]
    fn rejects_non_affine() {
        assert!(Quiver::new(vec!["0".into(), "1".into()], vec![(0, 1)]).is_err());
        assert!(Quiver::new(vec!["0".into(), "1".into()], vec![(0, 1), (0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"vertices":["0","1"],"arrows":[["1","0"],["1","0"]]}"#;
        let q = Quiver::from_json(text).unwrap();
        assert_eq!(q.affine_type(), AffineType::Kronecker);
        assert_eq!(q.to_json(), text);
        assert!(Quiver::from_json(r#"{"vertices":["0"],"arrows":[["1","0"]]}"#).is_err());
    }
}
