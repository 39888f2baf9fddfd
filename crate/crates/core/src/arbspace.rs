//! The arboreal singularity as the order complex of `Arb_T`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::treecat::{Arb, RootedTree, Tree};

/// Chains `p_0 < ... < p_k` of `Arb_T`, with face incidences.
#[derive(Debug)]
pub struct Nerve {
    arb: Arc<Arb>,
    simplices: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
    /// `faces[s]` = `(d_i s, (-1)^i)` for each `i`.
    faces: Vec<Vec<(usize, i64)>>,
    /// `cofaces[s]` = `(t, [t : s])` for codimension-one cofaces.
    cofaces: Vec<Vec<(usize, i64)>>,
}

/// A set of coarse strata, i.e. a set of correspondences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumSubset {
    members: BTreeSet<usize>,
}

impl StratumSubset {
    pub fn from_indices(it: impl IntoIterator<Item = usize>) -> Self {
        StratumSubset { members: it.into_iter().collect() }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        StratumSubset { members: self.members.intersection(&other.members).copied().collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        StratumSubset { members: self.members.union(&other.members).copied().collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        StratumSubset { members: self.members.difference(&other.members).copied().collect() }
    }

    /// Closed in the stratification: down-closed in `Arb_T`.
    pub fn is_closed(&self, arb: &Arb) -> bool {
        self.members.iter().all(|&p| (0..arb.len()).all(|q| !arb.leq(q, p) || self.members.contains(&q)))
    }

    /// Open: up-closed.
    pub fn is_open(&self, arb: &Arb) -> bool {
        self.members.iter().all(|&p| arb.above(p).iter().all(|q| self.members.contains(q)))
    }

    /// Locally closed: an up-set inside its own down-closure.
    pub fn is_locally_closed(&self, arb: &Arb) -> bool {
        let down: BTreeSet<usize> =
            (0..arb.len()).filter(|&q| self.members.iter().any(|&p| arb.leq(q, p))).collect();
        self.members.iter().all(|&p| arb.above(p).iter().all(|q| !down.contains(q) || self.members.contains(q)))
    }
}

/// A set of simplices of the nerve.
pub type CellSet = BTreeSet<usize>;

impl Nerve {
    pub fn new(tree: &Tree) -> Self {
        Self::from_arb(Arc::new(Arb::new(tree)))
    }

    pub fn from_arb(arb: Arc<Arb>) -> Self {
        let n = arb.len();
        assert!(n < u16::MAX as usize, "poset too large for the nerve");
        let mut simplices: Vec<Vec<u16>> = Vec::new();
        let mut stack: Vec<Vec<u16>> = (0..n).map(|i| vec![i as u16]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().expect("nonempty") as usize;
            for &j in arb.above(last) {
                let mut c = chain.clone();
                c.push(j as u16);
                stack.push(c);
            }
            simplices.push(chain);
        }
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Vec<u16>, usize> = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (s, chain) in simplices.iter().enumerate() {
            if chain.len() < 2 {
                continue;
            }
            for i in 0..chain.len() {
                let mut f = chain.clone();
                f.remove(i);
                let fi = index[&f];
                let sign = if i % 2 == 0 { 1 } else { -1 };
                faces[s].push((fi, sign));
                cofaces[fi].push((s, sign));
            }
        }
        for c in &mut cofaces {
            c.sort();
        }
        Nerve { arb, simplices, index, faces, cofaces }
    }

    pub fn arb(&self) -> &Arb {
        &self.arb
    }

    pub fn arb_arc(&self) -> Arc<Arb> {
        self.arb.clone()
    }

    pub fn tree(&self) -> &Tree {
        self.arb.tree()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn chain(&self, s: usize) -> &[u16] {
        &self.simplices[s]
    }

    pub fn dim(&self, s: usize) -> usize {
        self.simplices[s].len() - 1
    }

    pub fn index_of(&self, chain: &[u16]) -> Option<usize> {
        self.index.get(chain).copied()
    }

    pub fn vertex(&self, p: usize) -> usize {
        self.index[&vec![p as u16]]
    }

    /// The stratum label: the maximal element of the chain.
    pub fn label(&self, s: usize) -> usize {
        *self.simplices[s].last().expect("nonempty") as usize
    }

    pub fn faces(&self, s: usize) -> &[(usize, i64)] {
        &self.faces[s]
    }

    pub fn cofaces(&self, s: usize) -> &[(usize, i64)] {
        &self.cofaces[s]
    }

    pub fn max_dim(&self) -> usize {
        self.simplices.last().map_or(0, |s| s.len() - 1)
    }

    pub fn counts_by_dim(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for s in &self.simplices {
            *m.entry(s.len() - 1).or_insert(0) += 1;
        }
        m
    }

    pub fn all(&self) -> CellSet {
        (0..self.len()).collect()
    }

    /// The open part: chains starting at `p_T`. This is the open star of the
    /// cone point.
    pub fn open_part(&self) -> CellSet {
        let b = self.arb.bottom() as u16;
        (0..self.len()).filter(|&s| self.simplices[s][0] == b).collect()
    }

    /// The boundary: chains avoiding `p_T`, a closed subcomplex.
    pub fn boundary(&self) -> CellSet {
        let b = self.arb.bottom() as u16;
        (0..self.len()).filter(|&s| self.simplices[s][0] != b).collect()
    }

    /// Simplices whose label lies in `u`.
    pub fn cells_of(&self, u: &StratumSubset) -> CellSet {
        (0..self.len()).filter(|&s| u.contains(self.label(s))).collect()
    }

    pub fn is_closed(&self, cells: &CellSet) -> bool {
        cells.iter().all(|&s| self.faces[s].iter().all(|(f, _)| cells.contains(f)))
    }

    pub fn is_open(&self, cells: &CellSet) -> bool {
        cells.iter().all(|&s| self.cofaces[s].iter().all(|(c, _)| cells.contains(c)))
    }

    pub fn require_open(&self, cells: &CellSet) -> Result<()> {
        if self.is_open(cells) {
            Ok(())
        } else {
            Err(Error::NotOpen(format!("{} cells, not closed under cofaces", cells.len())))
        }
    }

    /// All simplices containing `s` (the open star), within `within`.
    pub fn star(&self, s: usize, within: &CellSet) -> CellSet {
        let mut out = CellSet::new();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if !within.contains(&x) || !out.insert(x) {
                continue;
            }
            for &(c, _) in &self.cofaces[x] {
                stack.push(c);
            }
        }
        out
    }

    /// `T(alpha)`: correspondences whose middle tree contains `alpha`.
    pub fn disc(&self, alpha: &str) -> Result<StratumSubset> {
        let a = self.tree().index_of(alpha)?;
        Ok(disc_of(&self.arb, a))
    }

    /// `T(alpha, beta)`: both in `S` and `q(alpha) <= q(beta)` in the rooted image.
    pub fn hom_support(&self, rt: &RootedTree, alpha: &str, beta: &str) -> Result<StratumSubset> {
        if rt.tree() != self.tree() {
            return Err(Error::InvalidConfig("rooted tree does not match the nerve".into()));
        }
        let a = self.tree().index_of(alpha)?;
        let b = self.tree().index_of(beta)?;
        Ok(hom_support_of(&self.arb, rt, a, b))
    }

    /// Integer boundary matrix `C_k -> C_{k-1}` as sparse columns.
    pub fn boundary_columns(&self, k: usize) -> Vec<Vec<(usize, i64)>> {
        (0..self.len()).filter(|&s| self.dim(s) == k).map(|s| self.faces[s].clone()).collect()
    }

    /// Check that the composite of consecutive boundary maps vanishes.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (0..self.len()).all(|s| {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(f, e1) in &self.faces[s] {
                for &(g, e2) in &self.faces[f] {
                    *acc.entry(g).or_insert(0) += e1 * e2;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }

    /// `sum over chains p_T = p_0 < ... < p_k = p of (-1)^k`: for an open cell
    /// of dimension `rank p` this is `(-1)^rank`.
    pub fn open_cell_euler(&self, p: usize) -> i64 {
        let b = self.arb.bottom() as u16;
        self.simplices
            .iter()
            .filter(|c| c[0] == b && *c.last().expect("nonempty") as usize == p)
            .map(|c| if (c.len() - 1) % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Labels met by the open stars of the simplices labelled `p`.
    pub fn exit_labels(&self, p: usize) -> BTreeSet<usize> {
        let all = self.all();
        let mut out = BTreeSet::new();
        for s in 0..self.len() {
            if self.label(s) == p {
                for t in self.star(s, &all) {
                    out.insert(self.label(t));
                }
            }
        }
        out
    }

    /// Betti numbers of the chain complex restricted to `cells`, which must
    /// be a subcomplex.
    pub fn subcomplex_betti<F: Field>(&self, f: &F, cells: &CellSet) -> BTreeMap<usize, usize> {
        let pos: HashMap<usize, usize> = {
            let mut per_dim: HashMap<usize, usize> = HashMap::new();
            cells
                .iter()
                .map(|&s| {
                    let c = per_dim.entry(self.dim(s)).or_insert(0);
                    *c += 1;
                    (s, *c - 1)
                })
                .collect()
        };
        let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
        for &s in cells {
            *dims.entry(self.dim(s)).or_insert(0) += 1;
        }
        let mut ranks: BTreeMap<usize, usize> = BTreeMap::new();
        for (&k, &n) in &dims {
            if k == 0 {
                continue;
            }
            let pos = &pos;
            let entries = cells.iter().filter(|&&s| self.dim(s) == k).flat_map(|&s| {
                let col = pos[&s];
                self.faces[s].iter().map(move |&(fc, e)| (pos[&fc], col, f.from_i64(e)))
            });
            let m = Matrix::from_entries(f, dims.get(&(k - 1)).copied().unwrap_or(0), n, entries);
            ranks.insert(k, m.rank(f));
        }
        dims.iter()
            .map(|(&k, &n)| (k, n - ranks.get(&k).copied().unwrap_or(0) - ranks.get(&(k + 1)).copied().unwrap_or(0)))
            .filter(|&(_, b)| b > 0)
            .collect()
    }

    /// Graphviz rendering of the 1-skeleton with stratum labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph nerve {\n");
        for v in 0..self.len() {
            if self.dim(v) == 0 {
                let p = self.label(v);
                let _ = writeln!(s, "  n{} [label=\"{}\"];", p, self.arb.label(p).replace('"', "\\\""));
            }
        }
        for e in 0..self.len() {
            if self.dim(e) == 1 {
                let c = &self.simplices[e];
                let _ = writeln!(s, "  n{} -- n{};", c[0], c[1]);
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn disc_of(arb: &Arb, a: usize) -> StratumSubset {
    StratumSubset::from_indices((0..arb.len()).filter(|&i| arb.get(i).contains(a)))
}

pub fn hom_support_of(arb: &Arb, rt: &RootedTree, a: usize, b: usize) -> StratumSubset {
    StratumSubset::from_indices((0..arb.len()).filter(|&i| {
        let p = arb.get(i);
        if !p.contains(a) || !p.contains(b) {
            return false;
        }
        let (rimg, real) = p.rooted_image(rt);
        let (qa, qb) = (real.class_of[a].expect("in S"), real.class_of[b].expect("in S"));
        rimg.leq(qa, qb)
    }))
}

/// Betti numbers of the order complex of a sub-poset of `Arb_T`.
pub fn order_complex_betti<F: Field>(f: &F, arb: &Arb, u: &StratumSubset) -> BTreeMap<usize, usize> {
    let members: Vec<usize> = u.iter().collect();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = members.iter().map(|&p| vec![p]).collect();
    while let Some(c) = stack.pop() {
        let last = *c.last().expect("nonempty");
        for &q in arb.above(last) {
            if u.contains(q) {
                let mut c2 = c.clone();
                c2.push(q);
                stack.push(c2);
            }
        }
        chains.push(c);
    }
    let mut by_dim: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for c in chains {
        by_dim.entry(c.len() - 1).or_default().push(c);
    }
    let index: HashMap<Vec<usize>, usize> = by_dim
        .values()
        .flat_map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)))
        .collect();
    let mut ranks: BTreeMap<usize, usize> = BTreeMap::new();
    for (&k, cs) in &by_dim {
        if k == 0 {
            continue;
        }
        let mut entries = Vec::new();
        for (j, c) in cs.iter().enumerate() {
            for i in 0..c.len() {
                let mut face = c.clone();
                face.remove(i);
                entries.push((index[&face], j, f.from_i64(if i % 2 == 0 { 1 } else { -1 })));
            }
        }
        let m = Matrix::from_entries(f, by_dim[&(k - 1)].len(), cs.len(), entries);
        ranks.insert(k, m.rank(f));
    }
    by_dim
        .iter()
        .map(|(&k, cs)| (k, cs.len() - ranks.get(&k).copied().unwrap_or(0) - ranks.get(&(k + 1)).copied().unwrap_or(0)))
        .filter(|&(_, b)| b > 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn a2_a3_counts() {
        let n2 = Nerve::new(&Tree::path(2));
        assert_eq!(n2.len(), 7);
        assert_eq!(n2.counts_by_dim(), BTreeMap::from([(0, 4), (1, 3)]));
        let n3 = Nerve::new(&Tree::path(3));
        assert_eq!(n3.counts_by_dim(), BTreeMap::from([(0, 11), (1, 22), (2, 12)]));
        assert_eq!(Nerve::new(&Tree::single("x")).len(), 1);
    }

    #[test]
    fn open_part_and_boundary_a2() {
        let n = Nerve::new(&Tree::path(2));
        let open = n.open_part();
        assert_eq!(open.len(), 4);
        assert!(n.is_open(&open));
        let bd = n.boundary();
        assert!(n.is_closed(&bd));
        assert_eq!(n.subcomplex_betti(&Rationals, &bd), BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn cone_is_contractible() {
        let n = Nerve::new(&Tree::path(3));
        assert_eq!(n.subcomplex_betti(&Rationals, &n.all()), BTreeMap::from([(0, 1)]));
        assert!(n.boundary_squares_to_zero());
    }

    #[test]
    fn disc_a2() {
        let n = Nerve::new(&Tree::path(2));
        let d = n.disc("a").unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.is_closed(n.arb()));
        assert!(n.disc("zz").is_err());
    }
}
