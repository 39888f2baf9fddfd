//! Hochschild and truncated cyclic homology of tree path algebras.
//!
//! A chain `a_0 (x) ... (x) a_n` of basis paths splits its cyclic sequence of
//! junctions into matched ones (`right(a_i) = left(a_{i+1})`) and unmatched
//! ones. Faces only ever merge across matched junctions, so the composites of
//! the maximal matched runs ("segments"), read from the segment holding
//! `a_0`, are invariant under `b`. The complex splits into one block per such
//! segment word, plus one block `e_v (x) ... (x) e_v` per vertex where every
//! junction is matched.
//!
//! Inside a block the only data that matter are the segment lengths: a path
//! of length `L` factors into `k` composable paths in exactly as many ways as
//! there are weakly increasing cut sequences in `0..=L`, and matching is
//! decided by position alone. So block complexes are computed once per length
//! word and reused.

use std::collections::HashMap;

use crate::field::Field;
use crate::linalg::Matrix;

use super::algebra::PathAlgebra;

/// A factor inside a block: segment label, start and end cut.
type Factor = u16;

const CLOSED_LABEL: u16 = 0xff;

fn factor(label: u16, from: u8, to: u8) -> Factor {
    (label << 8) | ((from as u16) << 4) | to as u16
}

fn merge(a: Factor, b: Factor) -> Option<Factor> {
    let (la, fa, ta) = (a >> 8, (a >> 4) & 0xf, a & 0xf);
    let (lb, fb, tb) = (b >> 8, (b >> 4) & 0xf, b & 0xf);
    (la == lb && ta == fb).then(|| (la << 8) | (fa << 4) | tb)
}

/// Weakly increasing cut sequences `0 = p_0 <= ... <= p_k = len`.
fn factorizations(len: u8, k: usize) -> Vec<Vec<(u8, u8)>> {
    let mut out = Vec::new();
    let mut cuts = vec![0u8; k + 1];
    cuts[k] = len;
    fn rec(i: usize, k: usize, len: u8, cuts: &mut Vec<u8>, out: &mut Vec<Vec<(u8, u8)>>) {
        if i == k {
            out.push((0..k).map(|t| (cuts[t], cuts[t + 1])).collect());
            return;
        }
        for c in cuts[i - 1]..=len {
            cuts[i] = c;
            rec(i + 1, k, len, cuts, out);
        }
    }
    if k == 0 {
        return out;
    }
    rec(1, k, len, &mut cuts, &mut out);
    out
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < parts {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Chains of degree `n` (so `n + 1` factors) in the block of a linear
/// segment word with the given lengths and labels.
fn segment_tuples(lengths: &[u8], labels: &[u16], n: usize) -> Vec<Vec<Factor>> {
    let m = lengths.len();
    let mut out = Vec::new();
    for comp in compositions(n + 1, m) {
        let per_seg: Vec<Vec<Vec<(u8, u8)>>> = (0..m).map(|i| factorizations(lengths[i], comp[i])).collect();
        let mut choice = vec![0usize; m];
        loop {
            let mut x: Vec<Factor> = Vec::with_capacity(n + 1);
            for i in 0..m {
                for &(a, b) in &per_seg[i][choice[i]] {
                    x.push(factor(labels[i], a, b));
                }
            }
            for j in 0..comp[0] {
                let mut y = x[j..].to_vec();
                y.extend_from_slice(&x[..j]);
                out.push(y);
            }
            // odometer
            let mut i = 0;
            while i < m {
                choice[i] += 1;
                if choice[i] < per_seg[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    out
}

struct Level {
    tuples: Vec<Vec<Factor>>,
    index: HashMap<Vec<Factor>, usize>,
}

impl Level {
    fn new(tuples: Vec<Vec<Factor>>) -> Self {
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Level { tuples, index }
    }

    fn len(&self) -> usize {
        self.tuples.len()
    }
}

/// Block generator: either a cyclic family of segment words or a closed loop.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Shape {
    /// Linear segment word (one Hochschild block).
    Linear(Vec<u8>),
    /// All rotations of a segment word with `period` distinct rotations
    /// (one cyclic block). Lengths are given for the full word.
    Cyclic(Vec<u8>, usize),
    Closed,
}

fn level(shape: &Shape, n: usize) -> Level {
    match shape {
        Shape::Closed => Level::new(vec![vec![factor(CLOSED_LABEL, 0, 0); n + 1]]),
        Shape::Linear(lengths) => {
            let labels: Vec<u16> = (0..lengths.len() as u16).collect();
            Level::new(segment_tuples(lengths, &labels, n))
        }
        Shape::Cyclic(lengths, period) => {
            let m = lengths.len();
            let mut all = Vec::new();
            for r in 0..*period {
                let ls: Vec<u8> = (0..m).map(|i| lengths[(r + i) % m]).collect();
                let labels: Vec<u16> = (0..m).map(|i| ((r + i) % period) as u16).collect();
                all.extend(segment_tuples(&ls, &labels, n));
            }
            Level::new(all)
        }
    }
}

fn sign<F: Field>(f: &F, i: usize) -> F::El {
    if i % 2 == 0 {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

/// `b` (with the wrap-around face) or `b'` (without) from degree `n` to `n-1`.
fn bar_matrix<F: Field>(f: &F, src: &Level, tgt: &Level, n: usize, wrap: bool) -> Matrix<F> {
    let mut entries = Vec::new();
    for (col, x) in src.tuples.iter().enumerate() {
        for i in 0..n {
            if let Some(m) = merge(x[i], x[i + 1]) {
                let mut y = Vec::with_capacity(n);
                y.extend_from_slice(&x[..i]);
                y.push(m);
                y.extend_from_slice(&x[i + 2..]);
                entries.push((tgt.index[&y], col, sign(f, i)));
            }
        }
        if wrap && n > 0 {
            if let Some(m) = merge(x[n], x[0]) {
                let mut y = Vec::with_capacity(n);
                y.push(m);
                y.extend_from_slice(&x[1..n]);
                entries.push((tgt.index[&y], col, sign(f, n)));
            }
        }
    }
    Matrix::from_entries(f, tgt.len(), src.len(), entries)
}

/// The unsigned cyclic shift `(a_0, ..., a_n) -> (a_n, a_0, ..., a_{n-1})`
/// as `rot[col] = row`.
fn rotation(lvl: &Level, n: usize) -> Vec<usize> {
    lvl.tuples
        .iter()
        .map(|x| {
            let mut y = Vec::with_capacity(n + 1);
            y.push(x[n]);
            y.extend_from_slice(&x[..n]);
            lvl.index[&y]
        })
        .collect()
}

/// `1 - t` and `N = sum_i t^i` on degree `n`.
fn cyclic_ops<F: Field>(f: &F, lvl: &Level, n: usize) -> (Matrix<F>, Matrix<F>) {
    let rot = rotation(lvl, n);
    let s = sign(f, n);
    let mut one_minus_t = Vec::new();
    let mut norm = Vec::new();
    for col in 0..lvl.len() {
        one_minus_t.push((col, col, f.one()));
        one_minus_t.push((rot[col], col, f.neg(&s)));
        let mut cur = col;
        let mut c = f.one();
        for _ in 0..=n {
            norm.push((cur, col, c.clone()));
            cur = rot[cur];
            c = f.mul(&c, &s);
        }
    }
    (
        Matrix::from_entries(f, lvl.len(), lvl.len(), one_minus_t),
        Matrix::from_entries(f, lvl.len(), lvl.len(), norm),
    )
}

/// Sizes and ranks of a Hochschild block, degrees `0..=top`:
/// `ranks[n]` is the rank of `b: C_n -> C_{n-1}`.
fn hh_block<F: Field>(f: &F, shape: &Shape, top: usize) -> (Vec<usize>, Vec<usize>) {
    let levels: Vec<Level> = (0..=top).map(|n| level(shape, n)).collect();
    let sizes = levels.iter().map(Level::len).collect();
    let mut ranks = vec![0usize; top + 1];
    for n in 1..=top {
        if levels[n].len() > 0 && levels[n - 1].len() > 0 {
            ranks[n] = bar_matrix(f, &levels[n], &levels[n - 1], n, true).rank(f);
        }
    }
    (sizes, ranks)
}

/// Dimensions of `Tot_0..Tot_top` and ranks of `Tot_n -> Tot_{n-1}` for a
/// cyclic block, via the mixed complex `M_k = C_k + C_{k-1}`,
/// `b_M = [[b, 1-t], [0, -b']]`, `B(x, y) = (0, N x)`.
fn hc_block<F: Field>(f: &F, shape: &Shape, top: usize) -> (Vec<usize>, Vec<usize>) {
    let levels: Vec<Level> = (0..=top).map(|n| level(shape, n)).collect();
    let c = |k: i64| if k < 0 { 0 } else { levels[k as usize].len() };
    let b: Vec<Option<Matrix<F>>> =
        (0..=top).map(|k| (k > 0).then(|| bar_matrix(f, &levels[k], &levels[k - 1], k, true))).collect();
    let bp: Vec<Option<Matrix<F>>> =
        (0..=top).map(|k| (k > 0).then(|| bar_matrix(f, &levels[k], &levels[k - 1], k, false))).collect();
    let ops: Vec<(Matrix<F>, Matrix<F>)> = (0..=top).map(|k| cyclic_ops(f, &levels[k], k)).collect();
    let m_dim = |k: i64| c(k) + c(k - 1);
    // Tot_n = M_n + M_{n-2} + ...
    let tot_parts = |n: i64| -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        let mut k = n;
        while k >= 0 {
            out.push((k, off));
            off += m_dim(k);
            k -= 2;
        }
        out
    };
    let tot_dim = |n: i64| tot_parts(n).iter().map(|&(k, _)| m_dim(k)).sum::<usize>();
    let dims: Vec<usize> = (0..=top as i64).map(tot_dim).collect();
    let mut ranks = vec![0usize; top + 1];
    let mut prev: Option<Matrix<F>> = None;
    for n in 1..=top as i64 {
        let src = tot_parts(n);
        let tgt = tot_parts(n - 1);
        let tgt_off = |k: i64| tgt.iter().find(|e| e.0 == k).map(|e| e.1);
        let mut entries = Vec::new();
        for &(k, off) in &src {
            let ku = k as usize;
            // x in C_k at off, y in C_{k-1} at off + c(k)
            if let Some(to) = tgt_off(k - 1) {
                // b x -> C_{k-1} part of M_{k-1}
                if let Some(bk) = &b[ku] {
                    for col in 0..bk.ncols() {
                        for (r, v) in bk.column(col) {
                            entries.push((to + r, off + col, v.clone()));
                        }
                    }
                }
                if k >= 1 {
                    let (omt, _) = &ops[ku - 1];
                    for col in 0..omt.ncols() {
                        for (r, v) in omt.column(col) {
                            entries.push((to + r, off + c(k) + col, v.clone()));
                        }
                    }
                    if let Some(bpk) = bp.get(ku - 1).and_then(|x| x.as_ref()) {
                        for col in 0..bpk.ncols() {
                            for (r, v) in bpk.column(col) {
                                entries.push((to + c(k - 1) + r, off + c(k) + col, f.neg(v)));
                            }
                        }
                    }
                }
            }
            // B: (x, y) -> (0, N x) in M_{k+1}
            if let Some(to) = tgt_off(k + 1) {
                let (_, norm) = &ops[ku];
                for col in 0..norm.ncols() {
                    for (r, v) in norm.column(col) {
                        entries.push((to + c(k + 1) + r, off + col, v.clone()));
                    }
                }
            }
        }
        let d = Matrix::from_entries(f, tot_dim(n - 1), tot_dim(n), entries);
        ranks[n as usize] = d.rank(f);
        debug_assert!(prev.as_ref().map_or(true, |p| p.mul(f, &d).is_zero()), "mixed complex: d^2 != 0");
        prev = Some(d);
    }
    (dims, ranks)
}

/// Lexicographically least rotation and number of distinct rotations.
fn canonical_rotation<T: Ord + Clone>(w: &[T]) -> (Vec<T>, usize) {
    let m = w.len();
    let rots: Vec<Vec<T>> = (0..m).map(|r| w[r..].iter().chain(&w[..r]).cloned().collect()).collect();
    let period = (1..=m).find(|&d| m % d == 0 && rots[d % m] == rots[0]).unwrap_or(m);
    (rots.into_iter().min().expect("nonempty"), period)
}

/// Segment words of length `1..=max_m`: cyclic sequences of basis paths with
/// every cyclic junction unmatched.
fn segment_words(alg: &PathAlgebra, max_m: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(alg: &PathAlgebra, max_m: usize, w: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        let first = w[0];
        let last = *w.last().expect("nonempty");
        if alg.right(last) != alg.left(first) {
            visit(w);
        }
        if w.len() == max_m {
            return;
        }
        for p in 0..alg.dim() {
            if alg.right(last) != alg.left(p) {
                w.push(p);
                rec(alg, max_m, w, visit);
                w.pop();
            }
        }
    }
    let mut w = Vec::with_capacity(max_m);
    for p in 0..alg.dim() {
        w.push(p);
        rec(alg, max_m, &mut w, &mut visit);
        w.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildResult {
    pub bound: usize,
    /// `dim HH_n` for `n = 0..=bound`.
    pub dims: Vec<usize>,
    /// `dim C_n` summed over blocks; equals `(dim A)^{n+1}`.
    pub chain_dims: Vec<usize>,
    /// Whether the idempotent classes form a basis of `HH_0`.
    pub idempotent_basis: bool,
    pub n_blocks: usize,
    pub n_shapes: usize,
}

impl HochschildResult {
    /// `dim C_n = (dim A)^{n+1}` in every computed degree.
    pub fn block_count_consistent(&self, dim_a: usize) -> bool {
        self.chain_dims.iter().enumerate().all(|(n, &d)| Some(d) == dim_a.checked_pow(n as u32 + 1))
    }
}

/// `dim HH_n(A)` for `n <= bound` from the block-decomposed Hochschild complex.
pub fn hochschild<F: Field>(f: &F, alg: &PathAlgebra, bound: usize) -> HochschildResult {
    let top = bound + 1;
    let mut counts: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut n_blocks = alg.n_vertices();
    segment_words(alg, top, |w| {
        let lengths: Vec<u8> = w.iter().map(|&p| alg.length(p) as u8).collect();
        *counts.entry(lengths).or_default() += 1;
        n_blocks += 1;
    });
    let mut dims = vec![0usize; bound + 1];
    let mut chain_dims = vec![0usize; bound + 1];
    let mut add = |shape: &Shape, mult: usize| {
        let (sizes, ranks) = hh_block(f, shape, top);
        for n in 0..=bound {
            chain_dims[n] += mult * sizes[n];
            dims[n] += mult * (sizes[n] - ranks[n] - ranks[n + 1]);
        }
    };
    add(&Shape::Closed, alg.n_vertices());
    let mut shapes: Vec<(&Vec<u8>, &usize)> = counts.iter().collect();
    shapes.sort();
    for (lengths, &mult) in &shapes {
        add(&Shape::Linear((*lengths).clone()), mult);
    }
    HochschildResult {
        bound,
        dims,
        chain_dims,
        idempotent_basis: hh0_idempotent_basis(f, alg),
        n_blocks,
        n_shapes: shapes.len() + 1,
    }
}

/// Image of `b: A (x) A -> A`, `x (x) y -> xy - yx`, as columns.
fn hh0_boundaries<F: Field>(f: &F, alg: &PathAlgebra) -> Matrix<F> {
    let d = alg.dim();
    let mut cols = Vec::new();
    for x in 0..d {
        for y in 0..d {
            let mut c = Vec::new();
            if let Some(xy) = alg.mul(x, y) {
                c.push((xy, f.one()));
            }
            if let Some(yx) = alg.mul(y, x) {
                c.push((yx, f.neg(&f.one())));
            }
            cols.push(c);
        }
    }
    Matrix::from_columns(f, d, cols)
}

/// The classes `[e_v]` are a basis of `HH_0 = A / [A, A]`.
pub fn hh0_idempotent_basis<F: Field>(f: &F, alg: &PathAlgebra) -> bool {
    let bnd = hh0_boundaries(f, alg);
    let r = bnd.rank(f);
    let idem: Vec<Vec<(usize, F::El)>> = (0..alg.n_vertices()).map(|v| vec![(alg.idempotent(v), f.one())]).collect();
    let e = Matrix::from_columns(f, alg.dim(), idem);
    r + alg.n_vertices() == alg.dim() && bnd.hcat(&e).rank(f) == alg.dim()
}

/// Classes of all basis paths in the idempotent basis of `HH_0`, as the
/// columns of an `n_vertices x dim A` matrix.
pub fn trace_classes<F: Field>(f: &F, alg: &PathAlgebra) -> Matrix<F> {
    let nv = alg.n_vertices();
    let idem: Vec<Vec<(usize, F::El)>> = (0..nv).map(|v| vec![(alg.idempotent(v), f.one())]).collect();
    let sys = Matrix::from_columns(f, alg.dim(), idem).hcat(&hh0_boundaries(f, alg));
    let red = sys.reduce(f, true);
    let mut entries = Vec::new();
    for p in 0..alg.dim() {
        let x = crate::linalg::solve_with(f, &red, sys.ncols(), &[(p, f.one())]).expect("idempotents span HH_0");
        for (i, v) in x {
            if i < nv {
                entries.push((i, p, v));
            }
        }
    }
    Matrix::from_entries(f, nv, alg.dim(), entries)
}

/// Class of one basis path in the idempotent basis of `HH_0`.
pub fn trace_class<F: Field>(f: &F, alg: &PathAlgebra, p: usize) -> Vec<F::El> {
    let m = trace_classes(f, alg);
    (0..alg.n_vertices()).map(|i| m.get(f, i, p)).collect()
}

/// `dim HH_n` from the full, unblocked complex on `A^{(x)(n+1)}`. Only for
/// cross-checking on small algebras.
pub fn hochschild_unblocked<F: Field>(f: &F, alg: &PathAlgebra, bound: usize) -> Vec<usize> {
    let d = alg.dim();
    let decode = |mut idx: usize, len: usize| -> Vec<usize> {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    };
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &x| acc * d + x);
    let rank_b = |n: usize| -> usize {
        let ncols = d.pow(n as u32 + 1);
        let nrows = d.pow(n as u32);
        let mut entries = Vec::new();
        for col in 0..ncols {
            let x = decode(col, n + 1);
            for i in 0..n {
                if let Some(m) = alg.mul(x[i], x[i + 1]) {
                    let mut y = x[..i].to_vec();
                    y.push(m);
                    y.extend_from_slice(&x[i + 2..]);
                    entries.push((encode(&y), col, sign(f, i)));
                }
            }
            if let Some(m) = alg.mul(x[n], x[0]) {
                let mut y = vec![m];
                y.extend_from_slice(&x[1..n]);
                entries.push((encode(&y), col, sign(f, n)));
            }
        }
        Matrix::from_entries(f, nrows, ncols, entries).rank(f)
    };
    let ranks: Vec<usize> = (0..=bound + 1).map(|n| if n == 0 { 0 } else { rank_b(n) }).collect();
    (0..=bound).map(|n| d.pow(n as u32 + 1) - ranks[n] - ranks[n + 1]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicResult {
    pub bound: usize,
    /// `dim HC_n` for `n = 0..=bound`; the last entry is only the kernel
    /// dimension at the truncation edge.
    pub dims: Vec<usize>,
    pub n_classes: usize,
}

impl CyclicResult {
    /// Degrees below the truncation edge.
    pub fn trusted(&self) -> &[usize] {
        &self.dims[..self.bound]
    }

    /// `HC_n = HC_{n-2}` for `2 <= n < bound`.
    pub fn connes_periodic(&self) -> bool {
        (2..self.bound).all(|n| self.dims[n] == self.dims[n - 2])
    }
}

/// Truncated cyclic homology `HC_0..HC_bound` from the explicit mixed complex.
pub fn cyclic_truncated<F: Field>(f: &F, alg: &PathAlgebra, bound: usize) -> CyclicResult {
    let mut counts: HashMap<(Vec<u8>, usize), usize> = HashMap::new();
    let mut n_classes = alg.n_vertices();
    segment_words(alg, bound + 1, |w| {
        let (canon, period) = canonical_rotation(w);
        if canon != w {
            return;
        }
        let lengths: Vec<u8> = w.iter().map(|&p| alg.length(p) as u8).collect();
        let (lcanon, _) = canonical_rotation(&lengths);
        *counts.entry((lcanon, period)).or_default() += 1;
        n_classes += 1;
    });
    let mut dims = vec![0usize; bound + 1];
    let mut add = |shape: &Shape, mult: usize| {
        let (tot, ranks) = hc_block(f, shape, bound);
        for n in 0..=bound {
            let next = if n < bound { ranks[n + 1] } else { 0 };
            dims[n] += mult * (tot[n] - ranks[n] - next);
        }
    };
    add(&Shape::Closed, alg.n_vertices());
    let mut shapes: Vec<_> = counts.into_iter().collect();
    shapes.sort();
    for ((lengths, period), mult) in shapes {
        add(&Shape::Cyclic(lengths, period), mult);
    }
    CyclicResult { bound, dims, n_classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::treecat::{generate::rooted_trees_up_to, RootedTree, Tree};

    #[test]
    fn a2_and_point() {
        let f = Rationals;
        let pt = PathAlgebra::new(&RootedTree::new(Tree::single("a"), 0).unwrap());
        assert_eq!(hochschild(&f, &pt, 2).dims, vec![1, 0, 0]);
        assert_eq!(cyclic_truncated(&f, &pt, 2).dims, vec![1, 0, 1]);
        let a2 = PathAlgebra::new(&RootedTree::with_root_name(Tree::path(2), "b").unwrap());
        let h = hochschild(&f, &a2, 2);
        assert_eq!(h.dims, vec![2, 0, 0]);
        assert!(h.idempotent_basis);
        assert!(h.block_count_consistent(3));
        let c = cyclic_truncated(&f, &a2, 3);
        assert_eq!(c.trusted(), &[2, 0, 2]);
    }

    #[test]
    fn blocked_matches_unblocked() {
        let fp = PrimeField::new(101).unwrap();
        for rt in rooted_trees_up_to(3) {
            let alg = PathAlgebra::new(&rt);
            let h = hochschild(&fp, &alg, 2);
            assert!(h.block_count_consistent(alg.dim()));
            assert_eq!(h.dims, hochschild_unblocked(&fp, &alg, 2));
        }
    }

    #[test]
    fn mixed_complex_periodic() {
        let f = Rationals;
        let rt = RootedTree::with_root_name(Tree::path(3), "b").unwrap();
        let c = cyclic_truncated(&f, &PathAlgebra::new(&rt), 3);
        assert!(c.connes_periodic());
    }

    #[test]
    fn factorization_counts() {
        // weakly increasing sequences: C(L + k - 1, k - 1)
        assert_eq!(factorizations(2, 3).len(), 6);
        assert_eq!(factorizations(0, 4).len(), 1);
        assert_eq!(compositions(4, 2).len(), 3);
    }
}
