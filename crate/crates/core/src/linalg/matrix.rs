//! Sparse column-major matrices over an exact field.
//!
//! Elimination follows the persistence convention: a column's pivot is its
//! lowest nonzero row, and columns are only ever added to columns on the
//! right. That keeps the transform `V` upper unitriangular, which the kernel
//! and solve routines rely on.

use crate::field::Field;

pub type SparseVec<E> = Vec<(usize, E)>;

#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: Vec<SparseVec<F::El>>,
}

/// `a + coef * b` on sorted sparse vectors.
pub fn axpy<F: Field>(f: &F, a: &[(usize, F::El)], coef: &F::El, b: &[(usize, F::El)]) -> SparseVec<F::El> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(coef, &b[j].1)));
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(coef, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize<F: Field>(f: &F, mut v: SparseVec<F::El>) -> SparseVec<F::El> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::El> = Vec::with_capacity(v.len());
    for (r, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = f.add(&last.1, &x),
            _ => out.push((r, x)),
        }
    }
    out.retain(|e| !f.is_zero(&e.1));
    out
}

/// Result of column reduction `R = A V`.
pub struct Reduction<F: Field> {
    pub reduced: Vec<SparseVec<F::El>>,
    /// `pivot_of_row[r] = Some(j)` when reduced column `j` has lowest row `r`.
    pub pivot_of_row: Vec<Option<usize>>,
    pub transform: Option<Vec<SparseVec<F::El>>>,
}

impl<F: Field> Reduction<F> {
    pub fn rank(&self) -> usize {
        self.reduced.iter().filter(|c| !c.is_empty()).count()
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(f: &F, n: usize) -> Self {
        Matrix { rows: n, cols: (0..n).map(|i| vec![(i, f.one())]).collect() }
    }

    pub fn from_columns(f: &F, rows: usize, cols: Vec<SparseVec<F::El>>) -> Self {
        let cols: Vec<_> = cols.into_iter().map(|c| normalize(f, c)).collect();
        debug_assert!(cols.iter().all(|c| c.iter().all(|e| e.0 < rows)));
        Matrix { rows, cols }
    }

    pub fn from_entries(
        f: &F,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, F::El)>,
    ) -> Self {
        let mut cs: Vec<SparseVec<F::El>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of bounds {rows}x{cols}");
            cs[c].push((r, v));
        }
        Self::from_columns(f, rows, cs)
    }

    pub fn from_dense(f: &F, dense: &[Vec<F::El>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let entries = dense
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        Self::from_entries(f, rows, cols, entries)
    }

    pub fn from_i64(f: &F, dense: &[Vec<i64>]) -> Self {
        let d: Vec<Vec<F::El>> =
            dense.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
        Self::from_dense(f, &d)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, F::El)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec<F::El>] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, f: &F, i: usize, j: usize) -> F::El {
        match self.cols[j].binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.cols[j][k].1.clone(),
            Err(_) => f.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self, f: &F) -> Vec<Vec<F::El>> {
        let mut d = vec![vec![f.zero(); self.ncols()]; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                d[*i][j] = v.clone();
            }
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut cs: Vec<SparseVec<F::El>> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                cs[*i].push((j, v.clone()));
            }
        }
        Matrix { rows: self.ncols(), cols: cs }
    }

    pub fn mul(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.ncols(), other.rows, "dimension mismatch in product");
        let cols = other
            .cols
            .iter()
            .map(|oc| {
                let mut acc: SparseVec<F::El> = Vec::new();
                for (k, v) in oc {
                    acc = axpy(f, &acc, v, &self.cols[*k]);
                }
                acc
            })
            .collect();
        Matrix { rows: self.rows, cols }
    }

    pub fn apply(&self, f: &F, v: &[(usize, F::El)]) -> SparseVec<F::El> {
        let mut acc: SparseVec<F::El> = Vec::new();
        for (k, x) in v {
            acc = axpy(f, &acc, x, &self.cols[*k]);
        }
        acc
    }

    pub fn add(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.ncols()), (other.rows, other.ncols()));
        let one = f.one();
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| axpy(f, a, &one, b)).collect();
        Matrix { rows: self.rows, cols }
    }

    pub fn scale(&self, f: &F, c: &F::El) -> Self {
        if f.is_zero(c) {
            return Self::zeros(self.rows, self.ncols());
        }
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(i, v)| (*i, f.mul(c, v))).collect())
            .collect();
        Matrix { rows: self.rows, cols }
    }

    pub fn neg(&self, f: &F) -> Self {
        self.scale(f, &f.neg(&f.one()))
    }

    pub fn sub(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn equals(&self, f: &F, other: &Self) -> bool {
        self.rows == other.rows && self.ncols() == other.ncols() && self.sub(f, other).is_zero()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Matrix { rows: self.rows, cols }
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.ncols(), other.ncols());
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(i, v)| (i + self.rows, v.clone())));
                c
            })
            .collect();
        Matrix { rows: self.rows + other.rows, cols }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().map(|c| c.iter().map(|(i, v)| (i + self.rows, v.clone())).collect()));
        Matrix { rows: self.rows + other.rows, cols }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix { rows: self.rows, cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let cols = self
            .cols
            .iter()
            .map(|c| {
                let mut v: SparseVec<F::El> =
                    c.iter().filter(|(i, _)| pos[*i] != usize::MAX).map(|(i, x)| (pos[*i], x.clone())).collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        Matrix { rows: idx.len(), cols }
    }

    pub fn reduce(&self, f: &F, track: bool) -> Reduction<F> {
        let n = self.ncols();
        let mut reduced = self.cols.clone();
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; self.rows];
        let mut transform: Option<Vec<SparseVec<F::El>>> =
            track.then(|| (0..n).map(|j| vec![(j, f.one())]).collect());
        for j in 0..n {
            while let Some(&(low, ref lv)) = reduced[j].last() {
                match pivot_of_row[low] {
                    None => {
                        pivot_of_row[low] = Some(j);
                        break;
                    }
                    Some(k) => {
                        let pv = &reduced[k].last().expect("pivot column nonempty").1;
                        let coef = f.neg(&f.div(lv, pv).expect("pivot nonzero"));
                        let (head, tail) = reduced.split_at_mut(j);
                        tail[0] = axpy(f, &tail[0], &coef, &head[k]);
                        if let Some(t) = transform.as_mut() {
                            let (th, tt) = t.split_at_mut(j);
                            tt[0] = axpy(f, &tt[0], &coef, &th[k]);
                        }
                    }
                }
            }
        }
        Reduction { reduced, pivot_of_row, transform }
    }

    pub fn rank(&self, f: &F) -> usize {
        // Reducing the thinner orientation is cheaper.
        if self.rows < self.ncols() {
            self.transpose().reduce(f, false).rank()
        } else {
            self.reduce(f, false).rank()
        }
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self, f: &F) -> Self {
        let red = self.reduce(f, true);
        let t = red.transform.expect("tracked");
        let cols = red
            .reduced
            .iter()
            .zip(t)
            .filter(|(r, _)| r.is_empty())
            .map(|(_, v)| v)
            .collect();
        Matrix { rows: self.ncols(), cols }
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, f: &F, b: &[(usize, F::El)]) -> Option<SparseVec<F::El>> {
        let red = self.reduce(f, true);
        solve_with(f, &red, self.ncols(), b)
    }

    /// Is the square matrix invertible.
    pub fn is_invertible(&self, f: &F) -> bool {
        self.rows == self.ncols() && self.rank(f) == self.rows
    }
}

/// Solve against a precomputed tracked reduction of `A`.
pub fn solve_with<F: Field>(
    f: &F,
    red: &Reduction<F>,
    ncols: usize,
    b: &[(usize, F::El)],
) -> Option<SparseVec<F::El>> {
    let t = red.transform.as_ref().expect("tracked reduction required");
    let mut r: SparseVec<F::El> = b.to_vec();
    let mut x: SparseVec<F::El> = Vec::new();
    while let Some(&(low, ref lv)) = r.last() {
        let k = red.pivot_of_row[low]?;
        let pv = &red.reduced[k].last().expect("pivot").1;
        let c = f.div(lv, pv).expect("pivot nonzero");
        r = axpy(f, &r, &f.neg(&c), &red.reduced[k]);
        x = axpy(f, &x, &c, &t[k]);
    }
    debug_assert!(x.iter().all(|e| e.0 < ncols));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rank_kernel_solve() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(a.rank(&q), 2);
        let k = a.kernel(&q);
        assert_eq!(k.ncols(), 1);
        assert!(a.mul(&q, &k).is_zero());
        let b = vec![(0, q.from_i64(5)), (1, q.from_i64(10)), (2, q.from_i64(1))];
        let x = a.solve(&q, &b).unwrap();
        assert_eq!(a.apply(&q, &x), b);
        let bad = vec![(0, q.from_i64(1))];
        assert!(a.solve(&q, &bad).is_none());
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let m = [vec![1, 1], vec![1, -1]];
        assert_eq!(Matrix::from_i64(&Rationals, &m).rank(&Rationals), 2);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(Matrix::from_i64(&f2, &m).rank(&f2), 1);
    }

    #[test]
    fn transpose_and_blocks() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[vec![1, 0, 2], vec![0, 3, 0]]);
        let t = a.transpose();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.get(&q, 2, 0), q.from_i64(2));
        let s = a.direct_sum(&t);
        assert_eq!((s.nrows(), s.ncols()), (5, 5));
        assert_eq!(s.rank(&q), 4);
        let v = a.vcat(&a);
        assert_eq!(v.rank(&q), 2);
        assert_eq!(a.select_rows(&[1]).rank(&q), 1);
    }
}
