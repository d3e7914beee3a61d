//! Dense matrices over a small finite field.

use serde::{Deserialize, Serialize};

use crate::field::{Elt, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elt>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Elt>) -> Mat {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Mat { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elt {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shapes");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let idx = r * out.cols + c;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, f: &Field, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &Field, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &Field, c: Elt) -> Mat {
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    /// Columns `[start, start+len)` as a new matrix.
    pub fn col_block(&self, start: usize, len: usize) -> Mat {
        let mut out = Mat::zeros(self.rows, len);
        for r in 0..self.rows {
            for c in 0..len {
                out.set(r, c, self.get(r, start + c));
            }
        }
        out
    }

    pub fn row_block(&self, start: usize, len: usize) -> Mat {
        Mat { rows: len, cols: self.cols, data: self.data[start * self.cols..(start + len) * self.cols].to_vec() }
    }

    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Mat {
        let mut out = Mat::zeros(nr, nc);
        for r in 0..nr {
            for c in 0..nc {
                out.set(r, c, self.get(r0 + r, c0 + c));
            }
        }
        out
    }

    pub fn hcat(parts: &[&Mat], rows: usize) -> Mat {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            for r in 0..rows {
                for c in 0..m.cols {
                    out.set(r, off + c, m.get(r, c));
                }
            }
            off += m.cols;
        }
        out
    }

    pub fn vcat(parts: &[&Mat], cols: usize) -> Mat {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
        }
        Mat { rows, cols, data }
    }

    pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
        let mut out = Mat::zeros(a.rows + b.rows, a.cols + b.cols);
        for r in 0..a.rows {
            for c in 0..a.cols {
                out.set(r, c, a.get(r, c));
            }
        }
        for r in 0..b.rows {
            for c in 0..b.cols {
                out.set(a.rows + r, a.cols + c, b.get(r, c));
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, f: &Field, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, f.mul(a, other.get(r2, c2)));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, f: &Field, e: usize) -> Mat {
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(f: &Field, m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(pr) = (row..a.rows).find(|&r| a.get(r, col) != 0) else { continue };
        if pr != row {
            for c in 0..a.cols {
                a.data.swap(pr * a.cols + c, row * a.cols + c);
            }
        }
        let inv = f.inv(a.get(row, col));
        for c in 0..a.cols {
            let v = a.get(row, c);
            a.set(row, c, f.mul(v, inv));
        }
        for r in 0..a.rows {
            if r != row {
                let factor = a.get(r, col);
                if factor != 0 {
                    for c in 0..a.cols {
                        let v = f.sub(a.get(r, c), f.mul(factor, a.get(row, c)));
                        a.set(r, c, v);
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(f: &Field, m: &Mat) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    rref(f, m).1.len()
}

/// Basis of the right null space as the columns of a `cols × k` matrix.
pub fn kernel(f: &Field, m: &Mat) -> Mat {
    let n = m.cols;
    if m.rows == 0 {
        return Mat::identity(n);
    }
    let (r, pivots) = rref(f, m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut k = Mat::zeros(n, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k.set(fc, j, 1);
        for (pi, &pc) in pivots.iter().enumerate() {
            k.set(pc, j, f.neg(r.get(pi, fc)));
        }
    }
    k
}

/// Rows spanning the left null space: `rows × m.rows` with `L·m = 0`.
pub fn left_kernel(f: &Field, m: &Mat) -> Mat {
    kernel(f, &m.transpose()).transpose()
}

/// Basis of the column space, as a submatrix of columns of `m`.
pub fn column_basis(f: &Field, m: &Mat) -> Mat {
    if m.cols == 0 || m.rows == 0 {
        return Mat::zeros(m.rows, 0);
    }
    let (_, pivots) = rref(f, m);
    let mut out = Mat::zeros(m.rows, pivots.len());
    for (j, &c) in pivots.iter().enumerate() {
        for r in 0..m.rows {
            out.set(r, j, m.get(r, c));
        }
    }
    out
}

/// Columns of the identity completing the columns of `basis` to a basis.
pub fn complement(f: &Field, basis: &Mat) -> Mat {
    let n = basis.rows;
    let mut cur = basis.clone();
    let mut extra = Vec::new();
    let mut rk = rank(f, &cur);
    for e in 0..n {
        if rk == n {
            break;
        }
        let mut unit = Mat::zeros(n, 1);
        unit.set(e, 0, 1);
        let trial = Mat::hcat(&[&cur, &unit], n);
        let r2 = rank(f, &trial);
        if r2 > rk {
            cur = trial;
            rk = r2;
            extra.push(e);
        }
    }
    let mut out = Mat::zeros(n, extra.len());
    for (j, &e) in extra.iter().enumerate() {
        out.set(e, j, 1);
    }
    out
}

/// Solves `a · x = b`, returning one solution if it exists.
pub fn solve(f: &Field, a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows, b.rows);
    let aug = Mat::hcat(&[a, b], a.rows);
    let (r, pivots) = rref(f, &aug);
    if pivots.iter().any(|&p| p >= a.cols) {
        return None;
    }
    let mut x = Mat::zeros(a.cols, b.cols);
    for (pi, &pc) in pivots.iter().enumerate() {
        for c in 0..b.cols {
            x.set(pc, c, r.get(pi, a.cols + c));
        }
    }
    Some(x)
}

pub fn inverse(f: &Field, a: &Mat) -> Option<Mat> {
    if a.rows != a.cols {
        return None;
    }
    let x = solve(f, a, &Mat::identity(a.rows))?;
    (rank(f, a) == a.rows).then_some(x)
}

pub fn is_invertible(f: &Field, a: &Mat) -> bool {
    a.rows == a.cols && rank(f, a) == a.rows
}

pub fn is_nilpotent(f: &Field, a: &Mat) -> bool {
    a.rows == 0 || a.pow(f, a.rows).is_zero()
}

/// Every `k`-dimensional subspace of `F_q^n`, each as an `n × k` column basis
/// taken from its reduced echelon form.
pub fn subspaces(f: &Field, n: usize, k: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(f, n, k, 0, &mut pivots, &mut out);
    out
}

fn choose_pivots(f: &Field, n: usize, k: usize, start: usize, pivots: &mut Vec<usize>, out: &mut Vec<Mat>) {
    if pivots.len() == k {
        fill_free(f, n, pivots, out);
        return;
    }
    let remaining = k - pivots.len();
    for p in start..=n - remaining {
        pivots.push(p);
        choose_pivots(f, n, k, p + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free(f: &Field, n: usize, pivots: &[usize], out: &mut Vec<Mat>) {
    // Row r of the echelon form has a 1 at pivots[r], zeros at other pivots,
    // zeros left of pivots[r], and free entries elsewhere.
    let k = pivots.len();
    let mut slots = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                slots.push((r, c));
            }
        }
    }
    let q = f.q();
    let total = q.pow(slots.len() as u32);
    for code in 0..total {
        let mut m = Mat::zeros(n, k);
        for (r, &p) in pivots.iter().enumerate() {
            m.set(p, r, 1);
        }
        let mut x = code;
        for &(r, c) in &slots {
            m.set(c, r, (x % q) as Elt);
            x /= q;
        }
        out.push(m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank_agree() {
        let f = Field::new(3).unwrap();
        let m = Mat::from_rows(2, 3, vec![1, 2, 0, 2, 1, 0]);
        let k = kernel(&f, &m);
        assert_eq!(rank(&f, &m) + k.cols, 3);
        assert!(m.mul(&f, &k).is_zero());
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        let f = Field::new(2).unwrap();
        assert_eq!(subspaces(&f, 2, 1).len(), 3);
        assert_eq!(subspaces(&f, 3, 1).len(), 7);
        assert_eq!(subspaces(&f, 4, 2).len(), 35);
        let f3 = Field::new(3).unwrap();
        assert_eq!(subspaces(&f3, 3, 2).len(), 13);
        for s in subspaces(&f3, 3, 2) {
            assert_eq!(rank(&f3, &s), 2);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::new(5).unwrap();
        let a = Mat::from_rows(2, 2, vec![1, 2, 3, 4]);
        let inv = inverse(&f, &a).unwrap();
        assert_eq!(a.mul(&f, &inv), Mat::identity(2));
        assert!(inverse(&f, &Mat::from_rows(2, 2, vec![1, 2, 2, 4])).is_none());
    }

    #[test]
    fn complement_completes_basis() {
        let f = Field::new(2).unwrap();
        let b = Mat::from_rows(3, 1, vec![1, 1, 0]);
        let c = complement(&f, &b);
        assert_eq!(c.cols, 2);
        assert_eq!(rank(&f, &Mat::hcat(&[&b, &c], 3)), 3);
    }
}
