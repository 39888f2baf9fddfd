use std::collections::{BTreeMap, HashMap};

use crate::arbspace::{order_complex_betti, CellSet, Nerve, StratumSubset};
use crate::error::Result;
use crate::field::Field;
use crate::linalg::{ChainMap, Complex, Matrix};

use super::sheaf::{CellSheaf, CoarseSheaf};

/// Incrementally assembled cochain complex.
struct Builder<F: Field> {
    dims: BTreeMap<i64, usize>,
    entries: BTreeMap<i64, Vec<(usize, usize, F::El)>>,
}

impl<F: Field> Builder<F> {
    fn new() -> Self {
        Builder { dims: BTreeMap::new(), entries: BTreeMap::new() }
    }

    /// Reserve `n` basis vectors in degree `m`; returns the first index.
    fn reserve(&mut self, m: i64, n: usize) -> usize {
        let d = self.dims.entry(m).or_insert(0);
        let start = *d;
        *d += n;
        start
    }

    /// Entry of `d: C^m -> C^{m+1}`.
    fn push(&mut self, m: i64, row: usize, col: usize, v: F::El) {
        self.entries.entry(m).or_default().push((row, col, v));
    }

    fn build(mut self, f: &F) -> Complex<F> {
        let (lo, hi) = match (self.dims.keys().next(), self.dims.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Complex::zero(),
        };
        let dim = |m: i64, dims: &BTreeMap<i64, usize>| dims.get(&m).copied().unwrap_or(0);
        let dims: Vec<usize> = (lo..=hi).map(|m| dim(m, &self.dims)).collect();
        let diffs = (lo..hi)
            .map(|m| {
                Matrix::from_entries(f, dim(m + 1, &self.dims), dim(m, &self.dims), self.entries.remove(&m).unwrap_or_default())
            })
            .collect();
        Complex::new(f, lo, dims, diffs).expect("total complex squares to zero")
    }
}

fn sign<F: Field>(f: &F, k: i64) -> F::El {
    if k.rem_euclid(2) == 0 {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

/// Cellular cochains of a fine sheaf on a set of simplices, with a named
/// basis `(simplex, internal degree, index)`.
pub struct TotalCochains<F: Field> {
    pub complex: Complex<F>,
    /// `(simplex, internal degree) -> (total degree, offset)`.
    pub offsets: HashMap<(usize, i64), (i64, usize)>,
}

/// `C^m = sum_{s} F(s)^{m - dim s}`, `D = delta + (-1)^{dim s} d_F` with
/// `delta = sum [t : s] F(s < t)`. On a closed set this computes `H^*`, on
/// an open set `H^*_c`.
pub fn cellular_cochains<F: Field>(f: &F, sheaf: &CellSheaf<F>, cells: &CellSet) -> TotalCochains<F> {
    let nerve = sheaf.nerve();
    let mut b = Builder::<F>::new();
    let mut offsets = HashMap::new();
    for &s in cells {
        let st = sheaf.stalk(s);
        for j in st.degrees() {
            let m = nerve.dim(s) as i64 + j;
            offsets.insert((s, j), (m, b.reserve(m, st.dim(j))));
        }
    }
    for &s in cells {
        let st = sheaf.stalk(s);
        let ds = nerve.dim(s) as i64;
        for j in st.degrees() {
            let (m, off) = offsets[&(s, j)];
            // internal differential
            if let Some(&(_, off1)) = offsets.get(&(s, j + 1)) {
                let d = st.d(j);
                let sg = sign(f, ds);
                for c in 0..d.ncols() {
                    for (r, v) in d.column(c) {
                        b.push(m, off1 + r, off + c, f.mul(&sg, v));
                    }
                }
            }
            for &(t, inc) in nerve.cofaces(s) {
                if !cells.contains(&t) {
                    continue;
                }
                if let Some(&(_, offt)) = offsets.get(&(t, j)) {
                    let g = sheaf.cover(s, t).at(st, sheaf.stalk(t), j);
                    let sg = f.from_i64(inc);
                    for c in 0..g.ncols() {
                        for (r, v) in g.column(c) {
                            b.push(m, offt + r, off + c, f.mul(&sg, v));
                        }
                    }
                }
            }
        }
    }
    TotalCochains { complex: b.build(f), offsets }
}

/// Extension by zero `C_c(V) -> C_c(U)` for open `V` inside open `U`.
pub fn extension_by_zero<F: Field>(
    f: &F,
    sheaf: &CellSheaf<F>,
    small: &TotalCochains<F>,
    big: &TotalCochains<F>,
) -> ChainMap<F> {
    let mut entries: BTreeMap<i64, Vec<(usize, usize, F::El)>> = BTreeMap::new();
    for (&(s, j), &(m, off)) in &small.offsets {
        let (m2, off2) = big.offsets[&(s, j)];
        debug_assert_eq!(m, m2);
        for i in 0..sheaf.stalk(s).dim(j) {
            entries.entry(m).or_default().push((off2 + i, off + i, f.one()));
        }
    }
    ChainMap::from_degrees(
        entries
            .into_iter()
            .map(|(m, e)| (m, Matrix::from_entries(f, big.complex.dim(m), small.complex.dim(m), e)))
            .collect(),
    )
}

/// Chains `s_0 < ... < s_k` of the face order inside `cells`.
fn face_chains(nerve: &Nerve, cells: &CellSet) -> Vec<Vec<usize>> {
    let above: HashMap<usize, Vec<usize>> = cells
        .iter()
        .map(|&s| (s, nerve.star(s, cells).into_iter().filter(|&t| t != s).collect()))
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = cells.iter().map(|&s| vec![s]).collect();
    while let Some(c) = stack.pop() {
        for &t in &above[c.last().expect("nonempty")] {
            let mut c2 = c.clone();
            c2.push(t);
            stack.push(c2);
        }
        out.push(c);
    }
    out
}

/// Generic Roos complex: chains `x_0 < ... < x_k` with values in
/// `F(x_k)`, the last face acting by generization.
fn roos<F: Field>(
    f: &F,
    chains: Vec<Vec<usize>>,
    stalk: &dyn Fn(usize) -> Complex<F>,
    map: &mut dyn FnMut(usize, usize) -> ChainMap<F>,
) -> Complex<F> {
    let index: HashMap<Vec<usize>, usize> = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let stalks: HashMap<usize, Complex<F>> = chains.iter().map(|c| *c.last().expect("nonempty")).map(|x| (x, stalk(x))).collect();
    let mut b = Builder::<F>::new();
    let mut offsets: HashMap<(usize, i64), (i64, usize)> = HashMap::new();
    for (ci, c) in chains.iter().enumerate() {
        let k = c.len() as i64 - 1;
        let st = &stalks[c.last().expect("nonempty")];
        for j in st.degrees() {
            let m = k + j;
            offsets.insert((ci, j), (m, b.reserve(m, st.dim(j))));
        }
    }
    for (ci, c) in chains.iter().enumerate() {
        let k = c.len() as i64 - 1;
        let last = *c.last().expect("nonempty");
        let st = &stalks[&last];
        for j in st.degrees() {
            let (m, off) = offsets[&(ci, j)];
            if let Some(&(_, off1)) = offsets.get(&(ci, j + 1)) {
                let d = st.d(j);
                let sg = sign(f, k);
                for col in 0..d.ncols() {
                    for (r, v) in d.column(col) {
                        b.push(m, off1 + r, off + col, f.mul(&sg, v));
                    }
                }
            }
        }
        if k == 0 {
            continue;
        }
        // c is a coface of every chain obtained by deleting one element
        for i in 0..=k as usize {
            let mut face = c.clone();
            face.remove(i);
            let fi = index[&face];
            let flast = *face.last().expect("nonempty");
            let fst = &stalks[&flast];
            let g = if i == k as usize { Some(map(flast, last)) } else { None };
            for j in fst.degrees() {
                let (m, off) = offsets[&(fi, j)];
                let Some(&(_, offc)) = offsets.get(&(ci, j)) else { continue };
                let sg = sign(f, i as i64);
                match &g {
                    None => {
                        for r in 0..fst.dim(j) {
                            b.push(m, offc + r, off + r, sg.clone());
                        }
                    }
                    Some(g) => {
                        let gm = g.at(fst, st, j);
                        for col in 0..gm.ncols() {
                            for (r, v) in gm.column(col) {
                                b.push(m, offc + r, off + col, f.mul(&sg, v));
                            }
                        }
                    }
                }
            }
        }
    }
    b.build(f)
}

/// Sheaf cohomology on the sub-poset `cells` (the derived limit), through
/// the Roos complex. For an open set this is `H^*(U, F)`.
pub fn roos_complex<F: Field>(f: &F, sheaf: &CellSheaf<F>, cells: &CellSet) -> Complex<F> {
    let chains = face_chains(sheaf.nerve(), cells);
    let mut cache: HashMap<(usize, usize), ChainMap<F>> = HashMap::new();
    roos(f, chains, &|s| sheaf.stalk(s).clone(), &mut |s, t| {
        cache.entry((s, t)).or_insert_with(|| sheaf.map(f, s, t)).clone()
    })
}

/// Derived limit of a coarse sheaf over a set of strata.
pub fn coarse_roos_complex<F: Field>(f: &F, sheaf: &CoarseSheaf<F>, u: &StratumSubset) -> Complex<F> {
    let arb = sheaf.arb();
    let mut chains = Vec::new();
    let mut stack: Vec<Vec<usize>> = u.iter().map(|p| vec![p]).collect();
    while let Some(c) = stack.pop() {
        for &q in arb.above(*c.last().expect("nonempty")) {
            if u.contains(q) {
                let mut c2 = c.clone();
                c2.push(q);
                stack.push(c2);
            }
        }
        chains.push(c);
    }
    roos(f, chains, &|p| sheaf.stalk(p).clone(), &mut |p, q| sheaf.map(f, p, q))
}

/// `H^*(region, F)`: cellular cochains when the region is closed, otherwise
/// the derived limit over the region.
pub fn cohomology<F: Field>(f: &F, sheaf: &CellSheaf<F>, cells: &CellSet) -> BTreeMap<i64, usize> {
    if sheaf.nerve().is_closed(cells) {
        cellular_cochains(f, sheaf, cells).complex.cohomology_dims(f)
    } else {
        roos_complex(f, sheaf, cells).cohomology_dims(f)
    }
}

/// `H^*_c(U, F)` for open `U`.
pub fn compact_cohomology<F: Field>(f: &F, sheaf: &CellSheaf<F>, cells: &CellSet) -> Result<BTreeMap<i64, usize>> {
    sheaf.nerve().require_open(cells)?;
    Ok(cellular_cochains(f, sheaf, cells).complex.cohomology_dims(f))
}

pub fn euler(dims: &BTreeMap<i64, usize>) -> i64 {
    dims.iter().map(|(&m, &d)| if m.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// `chi H^*(U, F) = sum_{p in U} chi(F_p) (1 - chi(Delta(U_{<p})))`, with
/// `chi` of the empty complex 0.
pub fn coarse_euler<F: Field>(f: &F, sheaf: &CoarseSheaf<F>, u: &StratumSubset) -> i64 {
    let arb = sheaf.arb();
    u.iter()
        .map(|p| {
            let below = StratumSubset::from_indices(u.iter().filter(|&q| arb.lt(q, p)));
            let chi_below = if below.is_empty() {
                0
            } else {
                order_complex_betti(f, arb, &below)
                    .iter()
                    .map(|(&k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
                    .sum()
            };
            sheaf.stalk(p).euler_characteristic() * (1 - chi_below)
        })
        .sum()
}

/// `chi_c(U, F) = sum_p chi(F_p) (-1)^{rank p}` for `U` a set of strata of
/// the open part, whose cells there are open of dimension `rank p`.
pub fn coarse_compact_euler<F: Field>(sheaf: &CoarseSheaf<F>, u: &StratumSubset) -> i64 {
    let arb = sheaf.arb();
    u.iter()
        .map(|p| {
            let s = if arb.rank(p) % 2 == 0 { 1 } else { -1 };
            sheaf.stalk(p).euler_characteristic() * s
        })
        .sum()
}
