//! Explicit right modules over path algebras. Only used as an independent
//! check on the combinatorial shortcuts (Hom spaces, correspondence functors).

use crate::field::Field;
use crate::linalg::Matrix;
use crate::treecat::{Correspondence, RootedTree};

use super::algebra::PathAlgebra;

/// A finite-dimensional right module: `action[r]` is `v -> v . r` on column
/// vectors, one matrix per basis path `r`.
#[derive(Clone, Debug)]
pub struct RightModule<F: Field> {
    pub dim: usize,
    pub action: Vec<Matrix<F>>,
}

impl<F: Field> RightModule<F> {
    /// `P_a = |a><a| k[T]` with basis the paths starting at `a`.
    pub fn projective(f: &F, alg: &PathAlgebra, a: usize) -> Self {
        let basis = alg.projective_basis(a);
        let pos = |p: usize| basis.iter().position(|&q| q == p);
        let action = (0..alg.dim())
            .map(|r| {
                let entries: Vec<_> = basis
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &x)| alg.mul(x, r).map(|xr| (pos(xr).expect("closed under right mult"), j, f.one())))
                    .collect();
                Matrix::from_entries(f, basis.len(), basis.len(), entries)
            })
            .collect();
        RightModule { dim: basis.len(), action }
    }

    /// `(v . x) . y = v . (x y)`, and the idempotents sum to the identity.
    pub fn is_module(&self, f: &F, alg: &PathAlgebra) -> bool {
        for x in 0..alg.dim() {
            for y in 0..alg.dim() {
                let lhs = self.action[y].mul(f, &self.action[x]);
                let rhs = match alg.mul(x, y) {
                    Some(xy) => self.action[xy].clone(),
                    None => Matrix::zeros(self.dim, self.dim),
                };
                if !lhs.equals(f, &rhs) {
                    return false;
                }
            }
        }
        let mut sum = Matrix::zeros(self.dim, self.dim);
        for v in 0..alg.n_vertices() {
            sum = sum.add(f, &self.action[alg.idempotent(v)]);
        }
        sum.equals(f, &Matrix::identity(f, self.dim))
    }

    /// `dim M e_v`.
    pub fn dim_at(&self, f: &F, alg: &PathAlgebra, v: usize) -> usize {
        self.action[alg.idempotent(v)].rank(f)
    }
}

/// Basis of `Hom_A(M, N)` by solving `phi rho_M(r) = rho_N(r) phi` for every
/// basis path `r`. Each solution is a `dim N x dim M` matrix.
pub fn module_homs<F: Field>(f: &F, m: &RightModule<F>, n: &RightModule<F>) -> Vec<Matrix<F>> {
    let (dm, dn) = (m.dim, n.dim);
    let var = |i: usize, j: usize| i * dm + j;
    let mut rows = Vec::new();
    for (rm, rn) in m.action.iter().zip(&n.action) {
        let (rm, rn) = (rm.to_dense(f), rn.to_dense(f));
        // entry (i, j) of phi rm - rn phi
        for i in 0..dn {
            for j in 0..dm {
                let mut row = Vec::new();
                for k in 0..dm {
                    if !f.is_zero(&rm[k][j]) {
                        row.push((var(i, k), rm[k][j].clone()));
                    }
                }
                for k in 0..dn {
                    if !f.is_zero(&rn[i][k]) {
                        row.push((var(k, j), f.neg(&rn[i][k])));
                    }
                }
                rows.push(row);
            }
        }
    }
    let nrows = rows.len();
    let entries: Vec<_> = rows.into_iter().enumerate().flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v))).collect();
    let system = Matrix::from_entries(f, nrows, dm * dn, entries);
    let ker = system.kernel(f);
    (0..ker.ncols())
        .map(|c| {
            let entries: Vec<_> = ker.column(c).iter().map(|(k, v)| (k / dm, k % dm, v.clone())).collect();
            Matrix::from_entries(f, dn, dm, entries)
        })
        .collect()
}

/// Left multiplication by `|b><a|` as a map `P_a -> P_b`.
pub fn left_mult<F: Field>(f: &F, alg: &PathAlgebra, a: usize, b: usize) -> Option<Matrix<F>> {
    let h = alg.hom_basis(a, b)?;
    let src = alg.projective_basis(a);
    let tgt = alg.projective_basis(b);
    let entries: Vec<_> = src
        .iter()
        .enumerate()
        .filter_map(|(j, &x)| alg.mul(h, x).map(|hx| (tgt.iter().position(|&y| y == hx).expect("starts at b"), j, f.one())))
        .collect();
    Some(Matrix::from_entries(f, tgt.len(), src.len(), entries))
}

/// Dimension vector over `R` of `P_a (x)_{k[T]} k[S]`, computed as an explicit
/// quotient of `P_a (x) k[S]` by the balancing relations and read at the
/// lowest vertex of each class.
pub fn tensor_dimvec<F: Field>(f: &F, rt: &RootedTree, p: &Correspondence, a: usize) -> Vec<usize> {
    let alg_t = PathAlgebra::new(rt);
    let (rooted_r, real) = p.rooted_image(rt);
    let in_s = |v: usize| p.contains(v);
    // k[S] as the paths of k[T] with both ends in S; S is convex for the order
    let s_paths: Vec<usize> = (0..alg_t.dim()).filter(|&x| in_s(alg_t.left(x)) && in_s(alg_t.right(x))).collect();
    let s_pos = |x: usize| s_paths.iter().position(|&y| y == x);
    let pa = alg_t.projective_basis(a);
    let gen = |i: usize, j: usize| i * s_paths.len() + j;
    let ngen = pa.len() * s_paths.len();
    // group generators and relations by the right end of the k[S] factor
    let grade_of_gen: Vec<usize> = (0..ngen).map(|g| alg_t.right(s_paths[g % s_paths.len()])).collect();
    let mut rels: Vec<Vec<(usize, F::El)>> = Vec::new();
    for (i, &x) in pa.iter().enumerate() {
        for r in 0..alg_t.dim() {
            for (j, &y) in s_paths.iter().enumerate() {
                let mut rel = Vec::new();
                if let Some(xr) = alg_t.mul(x, r) {
                    let i2 = pa.iter().position(|&z| z == xr).expect("right ideal");
                    rel.push((gen(i2, j), f.one()));
                }
                if s_pos(r).is_some() {
                    if let Some(ry) = alg_t.mul(r, y) {
                        rel.push((gen(i, s_pos(ry).expect("k[S] is closed")), f.neg(&f.one())));
                    }
                }
                if !rel.is_empty() {
                    rels.push(rel);
                }
            }
        }
    }
    let mut by_vertex = vec![0usize; rt.n()];
    for v in 0..rt.n() {
        let gens: Vec<usize> = (0..ngen).filter(|&g| grade_of_gen[g] == v).collect();
        if gens.is_empty() {
            continue;
        }
        let cols: Vec<Vec<(usize, F::El)>> = rels
            .iter()
            .filter(|rel| grade_of_gen[rel[0].0] == v)
            .map(|rel| {
                let mut c: Vec<(usize, F::El)> = rel
                    .iter()
                    .map(|(g, val)| (gens.iter().position(|&h| h == *g).expect("homogeneous"), val.clone()))
                    .collect();
                c.sort_by_key(|e| e.0);
                c
            })
            .collect();
        let m = Matrix::from_columns(f, gens.len(), cols);
        by_vertex[v] = gens.len() - m.rank(f);
    }
    real.classes
        .iter()
        .map(|&cls| {
            let low = crate::treecat::iter_bits(cls).min_by_key(|&v| rt.depth(v)).expect("nonempty class");
            by_vertex[low]
        })
        .take(rooted_r.n())
        .collect()
}

/// Write a dimension vector over `R` in the basis of projectives,
/// `dimvec(P_m)(n) = 1` iff `m >= n`. `None` if the coefficients are not
/// integers.
pub fn decompose_projective<F: Field>(f: &F, r: &RootedTree, dimvec: &[usize]) -> Option<Vec<i64>> {
    let n = r.n();
    let entries = (0..n).flat_map(|m| (0..n).filter(move |&v| r.geq(m, v)).map(move |v| (v, m))).collect::<Vec<_>>();
    let entries: Vec<_> = entries.into_iter().map(|(v, m)| (v, m, f.one())).collect();
    let d = Matrix::from_entries(f, n, n, entries);
    let b: Vec<(usize, F::El)> =
        dimvec.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, f.from_i64(x as i64))).collect();
    let sol = d.solve(f, &b)?;
    let mut out = vec![0i64; n];
    for (i, v) in sol {
        out[i] = (-64..=64).find(|&k| f.from_i64(k) == v)?;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::treecat::Tree;

    #[test]
    fn projectives_are_modules_and_homs_match() {
        let f = Rationals;
        let rt = RootedTree::with_root_name(Tree::path(3), "b").unwrap();
        let alg = PathAlgebra::new(&rt);
        let ps: Vec<_> = (0..3).map(|a| RightModule::projective(&f, &alg, a)).collect();
        for a in 0..3 {
            assert!(ps[a].is_module(&f, &alg));
            for b in 0..3 {
                let homs = module_homs(&f, &ps[a], &ps[b]);
                assert_eq!(homs.len(), usize::from(rt.geq(b, a)));
            }
        }
    }
}
