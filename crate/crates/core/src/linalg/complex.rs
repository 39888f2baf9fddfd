//! Bounded cochain complexes of finite-dimensional vector spaces.
//!
//! Grading is cohomological: `d: C^m -> C^{m+1}`.

use std::collections::BTreeMap;

use super::matrix::{solve_with, Matrix, Reduction};
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug)]
pub struct Complex<F: Field> {
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[i]` maps degree `lo + i` to `lo + i + 1`.
    diffs: Vec<Matrix<F>>,
}

impl<F: Field> Complex<F> {
    pub fn zero() -> Self {
        Complex { lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// A single space sitting in one degree.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        if dim == 0 {
            return Self::zero();
        }
        Complex { lo: degree, dims: vec![dim], diffs: Vec::new() }
    }

    /// Build from `(lo, dims, diffs)`; checks shapes and `d^2 = 0`.
    pub fn new(f: &F, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != diffs.len() + 1 && !(dims.is_empty() && diffs.is_empty()) {
            return Err(Error::NotChainMap(format!(
                "{} terms need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.ncols() != dims[i] || d.nrows() != dims[i + 1] {
                return Err(Error::NotChainMap(format!("differential {i} has wrong shape")));
            }
        }
        for w in diffs.windows(2) {
            if !w[1].mul(f, &w[0]).is_zero() {
                return Err(Error::NotChainMap("d^2 != 0".into()));
            }
        }
        Ok(Complex { lo, dims, diffs }.trimmed())
    }

    fn trimmed(mut self) -> Self {
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            self.diffs.pop();
        }
        while self.dims.first() == Some(&0) {
            self.dims.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.dims.is_empty() {
            return Self::zero();
        }
        self
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn is_zero_complex(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn dim(&self, m: i64) -> usize {
        if m < self.lo {
            return 0;
        }
        self.dims.get((m - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Degrees carrying a nonzero term.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.dims.len()).filter(|&i| self.dims[i] > 0).map(move |i| self.lo + i as i64)
    }

    /// `d: C^m -> C^{m+1}` (a zero matrix outside the stored range).
    pub fn d(&self, m: i64) -> Matrix<F> {
        if m >= self.lo && ((m - self.lo) as usize) < self.diffs.len() {
            return self.diffs[(m - self.lo) as usize].clone();
        }
        Matrix::zeros(self.dim(m + 1), self.dim(m))
    }

    pub fn d_ref(&self, m: i64) -> Option<&Matrix<F>> {
        if m >= self.lo && ((m - self.lo) as usize) < self.diffs.len() {
            Some(&self.diffs[(m - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn cohomology_dims(&self, f: &F) -> BTreeMap<i64, usize> {
        let ranks: Vec<usize> = (0..self.diffs.len()).map(|i| self.diffs[i].rank(f)).collect();
        let mut out = BTreeMap::new();
        for (i, &dim) in self.dims.iter().enumerate() {
            let out_rank = ranks.get(i).copied().unwrap_or(0);
            let in_rank = if i > 0 { ranks[i - 1] } else { 0 };
            let h = dim - out_rank - in_rank;
            if h > 0 {
                out.insert(self.lo + i as i64, h);
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if (self.lo + i as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// `X[k]^m = X^{m+k}`, with differential `(-1)^k d`.
    pub fn shift(&self, f: &F, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { f.one() } else { f.neg(&f.one()) };
        Complex {
            lo: self.lo - k,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(f, &sign)).collect(),
        }
    }

    /// Linear dual: `(V^)^m = (V^{-m})^`, differential the transpose.
    pub fn dual(&self) -> Self {
        if self.dims.is_empty() {
            return Self::zero();
        }
        let mut dims = self.dims.clone();
        dims.reverse();
        let mut diffs: Vec<Matrix<F>> = self.diffs.iter().map(Matrix::transpose).collect();
        diffs.reverse();
        Complex { lo: -self.hi(), dims, diffs }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        if self.dims.is_empty() {
            return other.clone();
        }
        if other.dims.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims = (lo..=hi).map(|m| self.dim(m) + other.dim(m)).collect();
        let diffs = (lo..hi).map(|m| self.d(m).direct_sum(&other.d(m))).collect();
        Complex { lo, dims, diffs }
    }

    /// Total complex of `Hom(X, Y)`: degree `n` is `prod_i Hom(X^i, Y^{i+n})`,
    /// `D f = d_Y f - (-1)^n f d_X`.
    pub fn hom(f: &F, x: &Self, y: &Self) -> Self {
        if x.dims.is_empty() || y.dims.is_empty() {
            return Self::zero();
        }
        let nlo = y.lo - x.hi();
        let nhi = y.hi() - x.lo;
        // basis of degree n: (i, row in Y^{i+n}, col in X^i), row-major per block
        let offsets = |n: i64| -> (Vec<(i64, usize)>, usize) {
            let mut v = Vec::new();
            let mut acc = 0;
            for i in x.lo..=x.hi() {
                v.push((i, acc));
                acc += y.dim(i + n) * x.dim(i);
            }
            (v, acc)
        };
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for n in nlo..=nhi {
            let (off_n, dim_n) = offsets(n);
            dims.push(dim_n);
            if n == nhi {
                break;
            }
            let (off_n1, dim_n1) = offsets(n + 1);
            let sign = if n.rem_euclid(2) == 0 { f.neg(&f.one()) } else { f.one() };
            let mut entries = Vec::new();
            for &(i, base) in &off_n {
                let (xr, yr) = (x.dim(i), y.dim(i + n));
                if xr == 0 || yr == 0 {
                    continue;
                }
                let dy = y.d(i + n);
                let dx_prev = x.d(i - 1);
                for r in 0..yr {
                    for c in 0..xr {
                        let col = base + r * xr + c;
                        // d_Y * E_{rc}: lands in block i of degree n+1
                        let b1 = off_n1.iter().find(|e| e.0 == i).expect("block").1;
                        for (rr, v) in dy.column(r) {
                            entries.push((b1 + rr * xr + c, col, v.clone()));
                        }
                        // -(-1)^n E_{rc} * d_X: block i-1 of degree n+1
                        if x.dim(i - 1) > 0 {
                            let b0 = off_n1.iter().find(|e| e.0 == i - 1).expect("block").1;
                            let xp = x.dim(i - 1);
                            for cc in 0..xp {
                                let v = dx_prev.get(f, c, cc);
                                if !f.is_zero(&v) {
                                    entries.push((b0 + r * xp + cc, col, f.mul(&sign, &v)));
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(Matrix::from_entries(f, dim_n1, dim_n, entries));
        }
        Complex { lo: nlo, dims, diffs }.trimmed()
    }
}

/// Offset of block `i` (maps `X^i -> Y^{i+n}`) in degree `n` of `Complex::hom(x, y)`.
fn hom_block<F: Field>(x: &Complex<F>, y: &Complex<F>, n: i64, i: i64) -> usize {
    (x.lo..i).map(|j| y.dim(j + n) * x.dim(j)).sum()
}

/// `Hom(X, Y) -> Hom(X, Y')`, `phi -> g phi`.
pub fn hom_post<F: Field>(f: &F, x: &Complex<F>, y: &Complex<F>, y2: &Complex<F>, g: &ChainMap<F>) -> ChainMap<F> {
    let (src, tgt) = (Complex::hom(f, x, y), Complex::hom(f, x, y2));
    let mut maps = BTreeMap::new();
    for n in src.degrees() {
        let mut entries = Vec::new();
        for i in x.degrees() {
            let (b, b2, xr) = (hom_block(x, y, n, i), hom_block(x, y2, n, i), x.dim(i));
            let gm = g.at(y, y2, i + n);
            for r in 0..y.dim(i + n) {
                for (rr, v) in gm.column(r) {
                    for c in 0..xr {
                        entries.push((b2 + rr * xr + c, b + r * xr + c, v.clone()));
                    }
                }
            }
        }
        maps.insert(n, Matrix::from_entries(f, tgt.dim(n), src.dim(n), entries));
    }
    ChainMap::from_degrees(maps)
}

/// `Hom(X, Y) -> Hom(X', Y)`, `phi -> phi h`.
pub fn hom_pre<F: Field>(f: &F, x2: &Complex<F>, x: &Complex<F>, y: &Complex<F>, h: &ChainMap<F>) -> ChainMap<F> {
    let (src, tgt) = (Complex::hom(f, x, y), Complex::hom(f, x2, y));
    let mut maps = BTreeMap::new();
    for n in src.degrees() {
        let mut entries = Vec::new();
        for i in x.degrees() {
            let (b, b2, xr, x2r) = (hom_block(x, y, n, i), hom_block(x2, y, n, i), x.dim(i), x2.dim(i));
            if x2r == 0 {
                continue;
            }
            let hm = h.at(x2, x, i);
            for cc in 0..x2r {
                for (c, v) in hm.column(cc) {
                    for r in 0..y.dim(i + n) {
                        entries.push((b2 + r * x2r + cc, b + r * xr + c, v.clone()));
                    }
                }
            }
        }
        maps.insert(n, Matrix::from_entries(f, tgt.dim(n), src.dim(n), entries));
    }
    ChainMap::from_degrees(maps)
}

/// Degree-preserving map between complexes.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    maps: BTreeMap<i64, Matrix<F>>,
}

impl<F: Field> ChainMap<F> {
    pub fn zero() -> Self {
        ChainMap { maps: BTreeMap::new() }
    }

    pub fn from_degrees(maps: BTreeMap<i64, Matrix<F>>) -> Self {
        ChainMap { maps: maps.into_iter().filter(|(_, m)| m.ncols() > 0 && m.nrows() > 0).collect() }
    }

    /// A map between complexes concentrated in a single degree.
    pub fn in_degree(degree: i64, m: Matrix<F>) -> Self {
        let mut maps = BTreeMap::new();
        maps.insert(degree, m);
        Self::from_degrees(maps)
    }

    pub fn identity(f: &F, x: &Complex<F>) -> Self {
        Self::from_degrees(x.degrees().map(|m| (m, Matrix::identity(f, x.dim(m)))).collect())
    }

    pub fn at(&self, src: &Complex<F>, tgt: &Complex<F>, m: i64) -> Matrix<F> {
        self.maps.get(&m).cloned().unwrap_or_else(|| Matrix::zeros(tgt.dim(m), src.dim(m)))
    }

    pub fn at_ref(&self, m: i64) -> Option<&Matrix<F>> {
        self.maps.get(&m)
    }

    pub fn check(&self, f: &F, src: &Complex<F>, tgt: &Complex<F>) -> Result<()> {
        for (m, a) in &self.maps {
            if a.ncols() != src.dim(*m) || a.nrows() != tgt.dim(*m) {
                return Err(Error::NotChainMap(format!("component in degree {m} has wrong shape")));
            }
        }
        let lo = src.lo().min(tgt.lo());
        let hi = src.hi().max(tgt.hi());
        for m in lo..=hi {
            let lhs = tgt.d(m).mul(f, &self.at(src, tgt, m));
            let rhs = self.at(src, tgt, m + 1).mul(f, &src.d(m));
            if !lhs.equals(f, &rhs) {
                return Err(Error::NotChainMap(format!("square in degree {m} does not commute")));
            }
        }
        Ok(())
    }

    /// `g . self`.
    pub fn then(&self, f: &F, g: &Self) -> Self {
        let mut maps = BTreeMap::new();
        for (m, a) in &self.maps {
            if let Some(b) = g.maps.get(m) {
                maps.insert(*m, b.mul(f, a));
            }
        }
        Self::from_degrees(maps)
    }

    pub fn equals(&self, f: &F, other: &Self, src: &Complex<F>, tgt: &Complex<F>) -> bool {
        let degs: std::collections::BTreeSet<i64> =
            self.maps.keys().chain(other.maps.keys()).copied().collect();
        degs.into_iter().all(|m| self.at(src, tgt, m).equals(f, &other.at(src, tgt, m)))
    }

    /// The same map between `X[k]` and `Y[k]`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_degrees(self.maps.iter().map(|(m, a)| (m - k, a.clone())).collect())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.maps.keys().copied()
    }

    /// Dual map `tgt^ -> src^`.
    pub fn dual(&self) -> Self {
        Self::from_degrees(self.maps.iter().map(|(m, a)| (-m, a.transpose())).collect())
    }

    /// Rank of the induced map on `H^m`.
    pub fn homology_rank(&self, f: &F, src: &Complex<F>, tgt: &Complex<F>, m: i64) -> usize {
        let z = src.d(m).kernel(f);
        if z.ncols() == 0 || tgt.dim(m) == 0 {
            return 0;
        }
        let image = self.at(src, tgt, m).mul(f, &z);
        let bnd = tgt.d(m - 1);
        bnd.hcat(&image).rank(f) - bnd.rank(f)
    }
}

/// Mapping cone of `phi: A -> B`: `C^m = A^{m+1} + B^m`,
/// `d(a, b) = (-d a, phi(a) + d b)`.
pub fn cone<F: Field>(f: &F, phi: &ChainMap<F>, a: &Complex<F>, b: &Complex<F>) -> Result<Complex<F>> {
    phi.check(f, a, b)?;
    let lo = (a.lo() - 1).min(b.lo());
    let hi = (a.hi() - 1).max(b.hi());
    if a.is_zero_complex() && b.is_zero_complex() {
        return Ok(Complex::zero());
    }
    let dims: Vec<usize> = (lo..=hi).map(|m| a.dim(m + 1) + b.dim(m)).collect();
    let mut diffs = Vec::new();
    for m in lo..hi {
        let top = a.d(m + 1).neg(f).hcat(&Matrix::zeros(a.dim(m + 2), b.dim(m)));
        let bottom = phi.at(a, b, m + 1).hcat(&b.d(m));
        diffs.push(top.vcat(&bottom));
    }
    Complex::new(f, lo, dims, diffs)
}

/// Explicit basis of `H^m` with a coordinate map, for computing induced maps
/// as honest matrices.
pub struct HomologyBasis<F: Field> {
    pub degree: i64,
    /// Cocycle representatives, as columns in `C^m`.
    pub reps: Matrix<F>,
    n_boundary: usize,
    red: Reduction<F>,
    ncols: usize,
}

impl<F: Field> HomologyBasis<F> {
    pub fn new(f: &F, c: &Complex<F>, m: i64) -> Self {
        let bnd = c.d(m - 1);
        let z = c.d(m).kernel(f);
        // a column survives reduction iff it is independent of those to its left
        let red = bnd.hcat(&z).reduce(f, false);
        let nb = bnd.ncols();
        let b_keep: Vec<usize> = (0..nb).filter(|&j| !red.reduced[j].is_empty()).collect();
        let z_keep: Vec<usize> = (0..z.ncols()).filter(|&j| !red.reduced[nb + j].is_empty()).collect();
        let b = bnd.select_columns(&b_keep);
        let reps = z.select_columns(&z_keep);
        let all = b.hcat(&reps);
        let red = all.reduce(f, true);
        HomologyBasis { degree: m, n_boundary: b.ncols(), ncols: all.ncols(), reps, red }
    }

    pub fn dim(&self) -> usize {
        self.reps.ncols()
    }

    /// Coordinates of the class of cocycle `z`.
    pub fn coords(&self, f: &F, z: &[(usize, F::El)]) -> Option<Vec<F::El>> {
        let x = solve_with(f, &self.red, self.ncols, z)?;
        let mut out = vec![f.zero(); self.dim()];
        for (i, v) in x {
            if i >= self.n_boundary {
                out[i - self.n_boundary] = v;
            }
        }
        Some(out)
    }

    /// Matrix of the map induced on `H^m` by `phi`, from `self` to `target`.
    pub fn induced(&self, f: &F, phi: &Matrix<F>, target: &HomologyBasis<F>) -> Matrix<F> {
        let mut entries = Vec::new();
        for j in 0..self.dim() {
            let img = phi.apply(f, self.reps.column(j));
            let co = target.coords(f, &img).expect("image of a cocycle is a cocycle");
            for (i, v) in co.into_iter().enumerate() {
                entries.push((i, j, v));
            }
        }
        Matrix::from_entries(f, target.dim(), self.dim(), entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn interval(q: &Rationals) -> Complex<Rationals> {
        // cochains of a closed interval: 2 vertices, 1 edge
        Complex::new(q, 0, vec![2, 1], vec![Matrix::from_i64(q, &[vec![-1, 1]])]).unwrap()
    }

    #[test]
    fn interval_cohomology() {
        let q = Rationals;
        let c = interval(&q);
        let h = c.cohomology_dims(&q);
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), None);
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let q = Rationals;
        let c = interval(&q);
        let id = ChainMap::identity(&q, &c);
        let k = cone(&q, &id, &c, &c).unwrap();
        assert!(k.cohomology_dims(&q).is_empty());
        assert_eq!(k.euler_characteristic(), 0);
    }

    #[test]
    fn hom_complex_euler_is_product() {
        let q = Rationals;
        let c = interval(&q);
        let s = Complex::concentrated(1, 2);
        let h = Complex::hom(&q, &c, &s);
        assert_eq!(h.euler_characteristic(), c.euler_characteristic() * s.euler_characteristic());
        let hh = Complex::hom(&q, &c, &c);
        assert_eq!(hh.cohomology_dims(&q).get(&0), Some(&1));
    }

    #[test]
    fn dual_and_shift() {
        let q = Rationals;
        let c = interval(&q);
        let d = c.dual();
        assert_eq!((d.lo(), d.hi()), (-1, 0));
        assert_eq!(d.cohomology_dims(&q).get(&0), Some(&1));
        let s = c.shift(&q, 2);
        assert_eq!(s.cohomology_dims(&q).get(&-2), Some(&1));
    }

    #[test]
    fn homology_basis_and_induced() {
        let q = Rationals;
        let c = interval(&q);
        let hb = HomologyBasis::new(&q, &c, 0);
        assert_eq!(hb.dim(), 1);
        let id = Matrix::identity(&q, 2);
        let ind = hb.induced(&q, &id, &hb);
        assert!(ind.equals(&q, &Matrix::identity(&q, 1)));
    }
}
