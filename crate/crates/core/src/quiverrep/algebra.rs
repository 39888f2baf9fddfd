use std::collections::HashMap;

use crate::field::Field;
use crate::linalg::Matrix;
use crate::treecat::RootedTree;

/// Path algebra of a rooted tree quiver, arrows pointing toward the root.
///
/// Basis: `|a><b|` for `a >= b`, read left to right, so
/// `|a><b| . |b><c| = |a><c|` and every other product of basis paths is 0.
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    quiver: RootedTree,
    paths: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// `product[x * dim + y]`, `u16::MAX` for zero.
    product: Vec<u16>,
}

pub const ZERO_PATH: u16 = u16::MAX;

impl PathAlgebra {
    pub fn new(quiver: &RootedTree) -> Self {
        let n = quiver.n();
        let mut paths = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if quiver.geq(a, b) {
                    paths.push((a, b));
                }
            }
        }
        let index: HashMap<(usize, usize), usize> = paths.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let d = paths.len();
        assert!(d < ZERO_PATH as usize);
        let mut product = vec![ZERO_PATH; d * d];
        for (x, &(a, b)) in paths.iter().enumerate() {
            for (y, &(c, e)) in paths.iter().enumerate() {
                if b == c {
                    product[x * d + y] = index[&(a, e)] as u16;
                }
            }
        }
        PathAlgebra { quiver: quiver.clone(), paths, index, product }
    }

    pub fn quiver(&self) -> &RootedTree {
        &self.quiver
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.quiver.n()
    }

    /// `(left end, right end)` of a basis path.
    pub fn ends(&self, p: usize) -> (usize, usize) {
        self.paths[p]
    }

    pub fn left(&self, p: usize) -> usize {
        self.paths[p].0
    }

    pub fn right(&self, p: usize) -> usize {
        self.paths[p].1
    }

    pub fn path(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a, b)).copied()
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.index[&(v, v)]
    }

    pub fn is_idempotent(&self, p: usize) -> bool {
        self.paths[p].0 == self.paths[p].1
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        let p = self.product[x * self.paths.len() + y];
        (p != ZERO_PATH).then_some(p as usize)
    }

    /// Vertices strictly between and including the ends, from left to right.
    pub fn vertices_on(&self, p: usize) -> Vec<usize> {
        let (a, b) = self.paths[p];
        let mut out = vec![a];
        let mut cur = a;
        while cur != b {
            cur = self.quiver.parent(cur).expect("path runs toward the root");
            out.push(cur);
        }
        out
    }

    /// Length in arrows.
    pub fn length(&self, p: usize) -> usize {
        let (a, b) = self.paths[p];
        self.quiver.depth(a) - self.quiver.depth(b)
    }

    /// Basis of `P_a = |a><a| k[T]`: paths starting at `a`.
    pub fn projective_basis(&self, a: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&p| self.paths[p].0 == a).collect()
    }

    /// `Hom(P_a, P_b)` is spanned by left multiplication with `|b><a|` when `b >= a`.
    pub fn hom_basis(&self, a: usize, b: usize) -> Option<usize> {
        self.path(b, a)
    }

    /// Structure constants as a multiplication check on element vectors.
    pub fn mul_elements<F: Field>(&self, f: &F, x: &[(usize, F::El)], y: &[(usize, F::El)]) -> Vec<(usize, F::El)> {
        let mut acc: Vec<(usize, F::El)> = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(p) = self.mul(*i, *j) {
                    acc.push((p, f.mul(a, b)));
                }
            }
        }
        Matrix::<F>::from_columns(f, self.dim(), vec![acc]).column(0).to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecat::Tree;

    #[test]
    fn a3_middle_root() {
        let rt = RootedTree::with_root_name(Tree::path(3), "b").unwrap();
        let a = PathAlgebra::new(&rt);
        // e_a, e_b, e_c, |a><b|, |c><b|
        assert_eq!(a.dim(), 5);
        let ab = a.path(0, 1).unwrap();
        let eb = a.idempotent(1);
        assert_eq!(a.mul(ab, eb), Some(ab));
        assert_eq!(a.mul(eb, ab), None);
        assert!(a.hom_basis(1, 0).is_some());
        assert!(a.hom_basis(0, 1).is_none());
    }

    #[test]
    fn associativity_and_unit() {
        let rt = RootedTree::with_root_name(Tree::path(4), "a").unwrap();
        let a = PathAlgebra::new(&rt);
        assert_eq!(a.dim(), 10);
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                for z in 0..a.dim() {
                    let l = a.mul(x, y).and_then(|xy| a.mul(xy, z));
                    let r = a.mul(y, z).and_then(|yz| a.mul(x, yz));
                    assert_eq!(l, r);
                }
            }
            let units: Vec<usize> = (0..4).filter_map(|v| a.mul(a.idempotent(v), x)).collect();
            assert_eq!(units, vec![x]);
        }
    }
}
