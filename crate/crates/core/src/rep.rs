//! Representations over F_q: Hom/Ext, sub and quotient representations,
//! extensions, BGP reflection and Coxeter functors.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mat::{self, Mat};
use crate::quiver::{DimVec, Quiver};

#[derive(Clone, Debug)]
pub struct FqRep {
    pub field: Arc<Field>,
    pub quiver: Arc<Quiver>,
    pub dims: Vec<usize>,
    /// One matrix per arrow h, of shape dim V_{t(h)} × dim V_{s(h)}.
    pub mats: Vec<Mat>,
}

/// A morphism between two representations: one matrix per vertex.
pub type Morphism = Vec<Mat>;

impl PartialEq for FqRep {
    /// Literal equality of the matrix data; isomorphism lives in `decompose`.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.quiver.arrows() == other.quiver.arrows() && self.dims == other.dims && self.mats == other.mats
    }
}
impl Eq for FqRep {}

impl FqRep {
    pub fn new(field: Arc<Field>, quiver: Arc<Quiver>, dims: Vec<usize>, mats: Vec<Mat>) -> Result<FqRep> {
        if dims.len() != quiver.num_vertices() || mats.len() != quiver.arrows().len() {
            return Err(Error::Domain("representation shape does not match quiver".into()));
        }
        for (h, m) in mats.iter().enumerate() {
            let (s, t) = quiver.arrows()[h];
            if m.rows != dims[t] || m.cols != dims[s] {
                return Err(Error::Domain(format!("matrix for arrow {h} has shape {}x{}", m.rows, m.cols)));
            }
            if m.data.iter().any(|&x| x as usize >= field.q()) {
                return Err(Error::Domain("matrix entry outside the field".into()));
            }
        }
        Ok(FqRep { field, quiver, dims, mats })
    }

    pub fn zero(field: Arc<Field>, quiver: Arc<Quiver>, dims: Vec<usize>) -> FqRep {
        let mats = quiver.arrows().iter().map(|&(s, t)| Mat::zeros(dims[t], dims[s])).collect();
        FqRep { field, quiver, dims, mats }
    }

    pub fn simple(field: Arc<Field>, quiver: Arc<Quiver>, i: usize) -> FqRep {
        let mut dims = vec![0; quiver.num_vertices()];
        dims[i] = 1;
        FqRep::zero(field, quiver, dims)
    }

    pub fn random<R: Rng>(field: Arc<Field>, quiver: Arc<Quiver>, dims: Vec<usize>, rng: &mut R) -> FqRep {
        let q = field.q();
        let mats = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let data = (0..dims[t] * dims[s]).map(|_| rng.gen_range(0..q) as u8).collect();
                Mat::from_rows(dims[t], dims[s], data)
            })
            .collect();
        FqRep { field, quiver, dims, mats }
    }

    pub fn dimvec(&self) -> DimVec {
        DimVec(self.dims.iter().map(|&d| d as i64).collect())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    fn check_compatible(&self, other: &FqRep) -> Result<()> {
        if self.field != other.field || self.quiver.arrows() != other.quiver.arrows() {
            return Err(Error::Domain("representations over different fields or quivers".into()));
        }
        Ok(())
    }

    /// Row-major encoding of all matrices, used as an orbit-independent key.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for m in &self.mats {
            out.extend_from_slice(&m.data);
        }
        out
    }

    pub fn direct_sum(&self, other: &FqRep) -> FqRep {
        self.check_compatible(other).expect("direct sum of incompatible representations");
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| Mat::block_diag(a, b)).collect();
        FqRep { field: self.field.clone(), quiver: self.quiver.clone(), dims, mats }
    }

    pub fn direct_sum_all(parts: &[FqRep], field: Arc<Field>, quiver: Arc<Quiver>) -> FqRep {
        let n = quiver.num_vertices();
        parts.iter().fold(FqRep::zero(field, quiver, vec![0; n]), |acc, p| acc.direct_sum(p))
    }

    /// Applies the base change g (one invertible matrix per vertex):
    /// x_h ↦ g_t x_h g_s⁻¹.
    pub fn conjugate(&self, g: &[Mat]) -> FqRep {
        let f = &self.field;
        let inv: Vec<Mat> = g.iter().map(|m| mat::inverse(f, m).expect("base change must be invertible")).collect();
        let mats = self.quiver.arrows().iter().enumerate().map(|(h, &(s, t))| g[t].mul(f, &self.mats[h]).mul(f, &inv[s])).collect();
        FqRep { field: self.field.clone(), quiver: self.quiver.clone(), dims: self.dims.clone(), mats }
    }

    /// Whether the graded subspace spanned by the columns of `bases` is x-stable.
    pub fn is_stable(&self, bases: &[Mat]) -> bool {
        let f = &self.field;
        self.quiver.arrows().iter().enumerate().all(|(h, &(s, t))| {
            if bases[s].cols == 0 {
                return true;
            }
            let img = self.mats[h].mul(f, &bases[s]);
            mat::rank(f, &Mat::hcat(&[&bases[t], &img], self.dims[t])) == bases[t].cols
        })
    }

    /// Restriction to an x-stable graded subspace with the given column bases.
    pub fn sub_rep(&self, bases: &[Mat]) -> FqRep {
        let f = &self.field;
        let dims: Vec<usize> = bases.iter().map(|b| b.cols).collect();
        let mats = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(h, &(s, t))| {
                let img = self.mats[h].mul(f, &bases[s]);
                mat::solve(f, &bases[t], &img).expect("subspace is not x-stable")
            })
            .collect();
        FqRep { field: self.field.clone(), quiver: self.quiver.clone(), dims, mats }
    }

    /// Quotient by an x-stable graded subspace with the given column bases.
    pub fn quotient_rep(&self, bases: &[Mat]) -> FqRep {
        let f = &self.field;
        let comps: Vec<Mat> = bases.iter().map(|b| mat::complement(f, b)).collect();
        let inv: Vec<Mat> =
            bases.iter().zip(&comps).enumerate().map(|(i, (b, c))| mat::inverse(f, &Mat::hcat(&[b, c], self.dims[i])).expect("basis")).collect();
        let dims: Vec<usize> = comps.iter().map(|c| c.cols).collect();
        let mats = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(h, &(s, t))| {
                // Coordinates of x_h(c) in the adapted basis of V_t, keeping the
                // complement part.
                let img = inv[t].mul(f, &self.mats[h].mul(f, &comps[s]));
                img.row_block(bases[t].cols, dims[t])
            })
            .collect();
        FqRep { field: self.field.clone(), quiver: self.quiver.clone(), dims, mats }
    }

    /// Returns `true` when every oriented cycle acts nilpotently; trivially
    /// true on acyclic quivers.
    pub fn is_nilpotent(&self) -> bool {
        if self.quiver.is_acyclic() {
            return true;
        }
        // Paths of length ≥ total dimension must vanish; test all of that length.
        let f = &self.field;
        let n = self.total_dim().max(1);
        let nv = self.quiver.num_vertices();
        let mut layer: Vec<Vec<Mat>> = (0..nv).map(|i| vec![Mat::identity(self.dims[i])]).collect();
        for _ in 0..n {
            let mut next: Vec<Vec<Mat>> = vec![Vec::new(); nv];
            for (h, &(s, t)) in self.quiver.arrows().iter().enumerate() {
                for p in &layer[s] {
                    let m = self.mats[h].mul(f, p);
                    if !m.is_zero() {
                        next[t].push(m);
                    }
                }
            }
            layer = next;
        }
        layer.iter().all(|v| v.is_empty())
    }
}

/// Index bookkeeping for the linear map b of Hom/Ext:
/// ⊕_i Hom(M_i, N_i) → ⊕_h Hom(M_{s(h)}, N_{t(h)}), φ ↦ φ_t x_h − y_h φ_s.
fn hom_map(m: &FqRep, n: &FqRep) -> (Mat, Vec<usize>) {
    let f = &m.field;
    let nv = m.quiver.num_vertices();
    let mut var_off = vec![0; nv + 1];
    for i in 0..nv {
        var_off[i + 1] = var_off[i] + n.dims[i] * m.dims[i];
    }
    let arrows = m.quiver.arrows();
    let mut eq_off = vec![0; arrows.len() + 1];
    for (h, &(s, t)) in arrows.iter().enumerate() {
        eq_off[h + 1] = eq_off[h] + n.dims[t] * m.dims[s];
    }
    let mut b = Mat::zeros(eq_off[arrows.len()], var_off[nv]);
    for (h, &(s, t)) in arrows.iter().enumerate() {
        let x = &m.mats[h];
        let y = &n.mats[h];
        let (ms, nt, mt, ns) = (m.dims[s], n.dims[t], m.dims[t], n.dims[s]);
        for r in 0..nt {
            for c in 0..ms {
                let row = eq_off[h] + r * ms + c;
                // (φ_t x)[r,c] = Σ_k φ_t[r,k] x[k,c]
                for k in 0..mt {
                    let coef = x.get(k, c);
                    if coef != 0 {
                        let col = var_off[t] + r * mt + k;
                        b.set(row, col, f.add(b.get(row, col), coef));
                    }
                }
                // −(y φ_s)[r,c] = −Σ_k y[r,k] φ_s[k,c]
                for k in 0..ns {
                    let coef = y.get(r, k);
                    if coef != 0 {
                        let col = var_off[s] + k * ms + c;
                        b.set(row, col, f.sub(b.get(row, col), coef));
                    }
                }
            }
        }
    }
    (b, var_off)
}

fn unpack_morphism(m: &FqRep, n: &FqRep, v: &[u8], var_off: &[usize]) -> Morphism {
    (0..m.quiver.num_vertices())
        .map(|i| Mat::from_rows(n.dims[i], m.dims[i], v[var_off[i]..var_off[i + 1]].to_vec()))
        .collect()
}

pub fn hom_dim(m: &FqRep, n: &FqRep) -> Result<usize> {
    m.check_compatible(n)?;
    let (b, _) = hom_map(m, n);
    Ok(b.cols - mat::rank(&m.field, &b))
}

pub fn ext_dim(m: &FqRep, n: &FqRep) -> Result<usize> {
    m.check_compatible(n)?;
    let (b, _) = hom_map(m, n);
    Ok(b.rows - mat::rank(&m.field, &b))
}

/// A basis of Hom(M, N).
pub fn hom_basis(m: &FqRep, n: &FqRep) -> Result<Vec<Morphism>> {
    m.check_compatible(n)?;
    let (b, var_off) = hom_map(m, n);
    let k = mat::kernel(&m.field, &b);
    Ok((0..k.cols)
        .map(|c| {
            let v: Vec<u8> = (0..k.rows).map(|r| k.get(r, c)).collect();
            unpack_morphism(m, n, &v, &var_off)
        })
        .collect())
}

/// Representatives ψ (per-arrow matrices N_t × M_s) of a basis of
/// Ext¹(M, N) = coker b.
pub fn ext_basis(m: &FqRep, n: &FqRep) -> Result<Vec<Vec<Mat>>> {
    m.check_compatible(n)?;
    let (b, _) = hom_map(m, n);
    let f = &m.field;
    let img = mat::column_basis(f, &b);
    let comp = mat::complement(f, &img);
    let arrows = m.quiver.arrows();
    Ok((0..comp.cols)
        .map(|c| {
            let mut off = 0;
            arrows
                .iter()
                .map(|&(s, t)| {
                    let len = n.dims[t] * m.dims[s];
                    let data = (off..off + len).map(|r| comp.get(r, c)).collect();
                    off += len;
                    Mat::from_rows(n.dims[t], m.dims[s], data)
                })
                .collect()
        })
        .collect())
}

/// The middle term E of 0 → N → E → M → 0 given by ψ: on N ⊕ M the arrow
/// h acts by [[y_h, ψ_h], [0, x_h]].
pub fn extension(quot: &FqRep, sub: &FqRep, psi: &[Mat]) -> FqRep {
    let arrows = quot.quiver.arrows();
    let dims: Vec<usize> = quot.dims.iter().zip(&sub.dims).map(|(a, b)| a + b).collect();
    let mats = arrows
        .iter()
        .enumerate()
        .map(|(h, &(s, t))| {
            let top = Mat::hcat(&[&sub.mats[h], &psi[h]], sub.dims[t]);
            let bottom = Mat::hcat(&[&Mat::zeros(quot.dims[t], sub.dims[s]), &quot.mats[h]], quot.dims[t]);
            Mat::vcat(&[&top, &bottom], dims[s])
        })
        .collect();
    FqRep { field: quot.field.clone(), quiver: quot.quiver.clone(), dims, mats }
}

pub fn compose(f: &Field, a: &Morphism, b: &Morphism) -> Morphism {
    a.iter().zip(b).map(|(x, y)| x.mul(f, y)).collect()
}

pub fn is_nilpotent_morphism(f: &Field, a: &Morphism) -> bool {
    a.iter().all(|m| mat::is_nilpotent(f, m))
}

pub fn is_invertible_morphism(f: &Field, a: &Morphism) -> bool {
    a.iter().all(|m| mat::is_invertible(f, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Arrow matrices at the reflected vertex, the first one negated.
///
/// With plain sums, every reflection at a vertex of a cycle multiplies the
/// cycle parameter of a module by −1, so on cycles of odd length Φ⁺ would
/// move homogeneous tubes. The sign undoes this; it cancels in Φ_i^-Φ_i^+
/// because the first arrow into i becomes the first arrow out of i.
fn signed_blocks(f: &Field, m: &FqRep, arrows: &[usize]) -> Vec<Mat> {
    arrows.iter().enumerate().map(|(k, &h)| if k == 0 { m.mats[h].scale(f, f.neg(1)) } else { m.mats[h].clone() }).collect()
}

/// Φ_i^±(M) on σ_i Q.
pub fn bgp_reflect(i: usize, sign: Sign, m: &FqRep) -> Result<FqRep> {
    let f = &m.field;
    let q = &m.quiver;
    let new_quiver = Arc::new(q.sigma(i));
    let mut dims = m.dims.clone();
    let mut mats = m.mats.clone();
    match sign {
        Sign::Plus => {
            if !q.is_sink(i) {
                return Err(Error::Domain(format!("vertex {i} is not a sink")));
            }
            let into = q.arrows_into(i);
            // x_i^+ : ⊕_h V_{s(h)} → V_i
            let signed = signed_blocks(f, m, &into);
            let blocks: Vec<&Mat> = signed.iter().collect();
            let xplus = Mat::hcat(&blocks, m.dims[i]);
            let k = mat::kernel(f, &xplus);
            dims[i] = k.cols;
            let mut off = 0;
            for &h in &into {
                let s = q.source(h);
                mats[h] = k.row_block(off, m.dims[s]);
                off += m.dims[s];
            }
        }
        Sign::Minus => {
            if !q.is_source(i) {
                return Err(Error::Domain(format!("vertex {i} is not a source")));
            }
            let out = q.arrows_out_of(i);
            // x_i^- : V_i → ⊕_h V_{t(h)}
            let signed = signed_blocks(f, m, &out);
            let blocks: Vec<&Mat> = signed.iter().collect();
            let total: usize = out.iter().map(|&h| m.dims[q.target(h)]).sum();
            let xminus = Mat::vcat(&blocks, m.dims[i]);
            debug_assert_eq!(xminus.rows, total);
            let coker = mat::left_kernel(f, &xminus);
            dims[i] = coker.rows;
            let mut off = 0;
            for &h in &out {
                let t = q.target(h);
                mats[h] = coker.col_block(off, m.dims[t]);
                off += m.dims[t];
            }
        }
    }
    Ok(FqRep { field: m.field.clone(), quiver: new_quiver, dims, mats })
}

/// M(i): the simple summand S_i^{dim V_i − rank x_i^+} split off at a sink.
pub fn sink_defect(i: usize, m: &FqRep) -> FqRep {
    let f = &m.field;
    let into = m.quiver.arrows_into(i);
    let blocks: Vec<&Mat> = into.iter().map(|&h| &m.mats[h]).collect();
    let r = if blocks.is_empty() { 0 } else { mat::rank(f, &Mat::hcat(&blocks, m.dims[i])) };
    let mut dims = vec![0; m.quiver.num_vertices()];
    dims[i] = m.dims[i] - r;
    FqRep::zero(m.field.clone(), m.quiver.clone(), dims)
}

/// Coxeter functor along the admissible order i₀,…,i_n.
/// Φ⁺ = Φ_{i_n}⁺∘⋯∘Φ_{i₀}⁺ and Φ⁻ = Φ_{i₀}⁻∘⋯∘Φ_{i_n}⁻.
pub fn coxeter(m: &FqRep, sign: Sign, order: &[usize]) -> Result<FqRep> {
    let mut cur = m.clone();
    match sign {
        Sign::Plus => {
            for &i in order {
                cur = bgp_reflect(i, Sign::Plus, &cur)?;
            }
        }
        Sign::Minus => {
            for &i in order.iter().rev() {
                cur = bgp_reflect(i, Sign::Minus, &cur)?;
            }
        }
    }
    // Reattach the original quiver handle so downstream compatibility checks
    // see the same orientation object.
    cur.quiver = m.quiver.clone();
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kron(q: usize) -> (Arc<Field>, Arc<Quiver>) {
        (Field::new(q).unwrap(), Arc::new(Quiver::kronecker()))
    }

    #[test]
    fn simples_hom_ext() {
        let (f, k) = kron(2);
        let si = FqRep::simple(f.clone(), k.clone(), 0);
        let sj = FqRep::simple(f, k, 1);
        assert_eq!(hom_dim(&sj, &si).unwrap(), 0);
        assert_eq!(ext_dim(&sj, &si).unwrap(), 2);
        assert_eq!(hom_dim(&si, &si).unwrap(), 1);
        assert_eq!(ext_basis(&sj, &si).unwrap().len(), 2);
    }

    #[test]
    fn euler_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3] {
            let (f, k) = kron(q);
            for _ in 0..40 {
                let d1 = vec![rng.gen_range(0..3), rng.gen_range(0..3)];
                let d2 = vec![rng.gen_range(0..3), rng.gen_range(0..3)];
                let m = FqRep::random(f.clone(), k.clone(), d1, &mut rng);
                let n = FqRep::random(f.clone(), k.clone(), d2, &mut rng);
                let lhs = hom_dim(&m, &n).unwrap() as i64 - ext_dim(&m, &n).unwrap() as i64;
                assert_eq!(lhs, k.euler_form(&m.dimvec(), &n.dimvec()));
            }
        }
    }

    #[test]
    fn hom_basis_elements_are_morphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (f, k) = kron(3);
        let m = FqRep::random(f.clone(), k.clone(), vec![2, 1], &mut rng);
        let n = FqRep::random(f.clone(), k.clone(), vec![2, 2], &mut rng);
        for phi in hom_basis(&m, &n).unwrap() {
            for (h, &(s, t)) in k.arrows().iter().enumerate() {
                assert_eq!(phi[t].mul(&f, &m.mats[h]), n.mats[h].mul(&f, &phi[s]));
            }
        }
    }

    #[test]
    fn sub_and_quotient_dimensions() {
        let (f, k) = kron(2);
        let x = FqRep::new(f.clone(), k.clone(), vec![1, 1], vec![Mat::from_rows(1, 1, vec![1]), Mat::from_rows(1, 1, vec![0])]).unwrap();
        let sink_line = vec![Mat::identity(1), Mat::zeros(1, 0)];
        assert!(x.is_stable(&sink_line));
        let j_line = vec![Mat::zeros(1, 0), Mat::identity(1)];
        assert!(!x.is_stable(&j_line));
        let sub = x.sub_rep(&sink_line);
        let quo = x.quotient_rep(&sink_line);
        assert_eq!(sub.dims, vec![1, 0]);
        assert_eq!(quo.dims, vec![0, 1]);
    }

    #[test]
    fn bgp_dimension_vectors() {
        let (f, k) = kron(2);
        assert!(bgp_reflect(0, Sign::Plus, &FqRep::simple(f.clone(), k.clone(), 0)).unwrap().is_zero());
        // Indecomposable of dim (2,1): x_a = e1, x_b = e2.
        let m = FqRep::new(f.clone(), k.clone(), vec![2, 1], vec![Mat::from_rows(2, 1, vec![1, 0]), Mat::from_rows(2, 1, vec![0, 1])]).unwrap();
        let r = bgp_reflect(0, Sign::Plus, &m).unwrap();
        assert_eq!(r.dims, vec![0, 1]);
        assert!(bgp_reflect(1, Sign::Plus, &m).is_err());
        let back = bgp_reflect(0, Sign::Minus, &r).unwrap();
        assert_eq!(back.dims, vec![2, 1]);
    }

    #[test]
    fn cyclic_nilpotency() {
        let f = Field::new(2).unwrap();
        let q = Arc::new(Quiver::new(vec!["0".into(), "1".into(), "2".into()], vec![(0, 1), (1, 2), (2, 0)]).unwrap());
        let one = || Mat::identity(1);
        let m = FqRep::new(f.clone(), q.clone(), vec![1, 1, 1], vec![one(), one(), one()]).unwrap();
        assert!(!m.is_nilpotent());
        let n = FqRep::new(f, q, vec![1, 1, 1], vec![one(), one(), Mat::zeros(1, 1)]).unwrap();
        assert!(n.is_nilpotent());
    }
}
