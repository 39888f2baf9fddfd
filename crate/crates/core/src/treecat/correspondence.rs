use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tree::{iter_bits, RootedTree, Tree};
use crate::error::{Error, Result};

/// A correspondence `R <<- S -> T` in canonical form.
///
/// `subtree` is the vertex mask of `S` inside `T`; `contract` is the mask of
/// edges of `S` collapsed by the quotient `S ->> R`. Two correspondences are
/// isomorphic iff these coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence {
    pub subtree: u64,
    pub contract: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorrespondenceSpec {
    pub subtree: Vec<String>,
    #[serde(default)]
    pub contract: Vec<[String; 2]>,
}

/// Materialized middle and image trees with their structure maps.
#[derive(Clone, Debug)]
pub struct Realized {
    pub middle: Tree,
    /// `S` index to `T` index.
    pub inclusion: Vec<usize>,
    pub image: Tree,
    /// `S` index to `R` index.
    pub quotient: Vec<usize>,
    /// `T` vertex to `R` index, `None` off `S`.
    pub class_of: Vec<Option<usize>>,
    /// `R` index to the vertex mask of its class in `T`.
    pub classes: Vec<u64>,
}

impl Correspondence {
    pub fn trivial(t: &Tree) -> Self {
        Correspondence { subtree: t.full_mask(), contract: 0 }
    }

    pub fn new(t: &Tree, subtree: u64, contract: u64) -> Result<Self> {
        let c = Correspondence { subtree, contract };
        c.validate(t)?;
        Ok(c)
    }

    pub fn validate(&self, t: &Tree) -> Result<()> {
        if self.subtree & !t.full_mask() != 0 || !t.is_connected(self.subtree) {
            return Err(Error::InvalidTree("middle is not a connected subtree".into()));
        }
        if self.contract & !t.edges_within(self.subtree) != 0 {
            return Err(Error::InvalidTree("contracted edges must lie in the middle tree".into()));
        }
        Ok(())
    }

    pub fn from_spec(t: &Tree, spec: &CorrespondenceSpec) -> Result<Self> {
        let mut s = 0u64;
        for v in &spec.subtree {
            s |= 1 << t.index_of(v)?;
        }
        let mut c = 0u64;
        for [a, b] in &spec.contract {
            let (ia, ib) = (t.index_of(a)?, t.index_of(b)?);
            let e = t.edge_index(ia, ib).ok_or_else(|| Error::InvalidTree(format!("`{a}-{b}` is not an edge")))?;
            c |= 1 << e;
        }
        Correspondence::new(t, s, c)
    }

    pub fn to_spec(&self, t: &Tree) -> CorrespondenceSpec {
        CorrespondenceSpec {
            subtree: iter_bits(self.subtree).map(|v| t.name(v).to_string()).collect(),
            contract: iter_bits(self.contract)
                .map(|e| {
                    let (a, b) = t.edge(e);
                    [t.name(a).to_string(), t.name(b).to_string()]
                })
                .collect(),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.subtree >> v & 1 == 1
    }

    /// Classes of the quotient as vertex masks, ordered by class name.
    pub fn classes(&self, t: &Tree) -> Vec<u64> {
        let mut left = self.subtree;
        let mut out = Vec::new();
        while left != 0 {
            let v = left.trailing_zeros() as usize;
            let cls = t.reach(v, self.subtree, self.contract);
            out.push(cls);
            left &= !cls;
        }
        out.sort_by_key(|&m| class_name(t, m));
        out
    }

    /// `|T| - |R|`.
    pub fn rank(&self, t: &Tree) -> usize {
        t.n() - self.subtree.count_ones() as usize + self.contract.count_ones() as usize
    }

    pub fn realize(&self, t: &Tree) -> Realized {
        let sv: Vec<usize> = iter_bits(self.subtree).collect();
        let s_names: Vec<&str> = sv.iter().map(|&v| t.name(v)).collect();
        let s_edges: Vec<(&str, &str)> = iter_bits(t.edges_within(self.subtree))
            .map(|e| {
                let (a, b) = t.edge(e);
                (t.name(a), t.name(b))
            })
            .collect();
        let middle = Tree::new(&s_names, &s_edges).expect("subtree is a tree");
        let inclusion: Vec<usize> = (0..middle.n()).map(|i| t.index_of(middle.name(i)).expect("vertex")).collect();
        let classes = self.classes(t);
        let mut class_of = vec![None; t.n()];
        for (k, &m) in classes.iter().enumerate() {
            for v in iter_bits(m) {
                class_of[v] = Some(k);
            }
        }
        let r_names: Vec<String> = classes.iter().map(|&m| class_name(t, m)).collect();
        let mut r_edges = Vec::new();
        for e in iter_bits(t.edges_within(self.subtree) & !self.contract) {
            let (a, b) = t.edge(e);
            let (ca, cb) = (class_of[a].expect("in S"), class_of[b].expect("in S"));
            r_edges.push((r_names[ca].clone(), r_names[cb].clone()));
        }
        let image = Tree::new(&r_names, &r_edges).expect("contraction of a tree is a tree");
        // class names are sorted, so R's index order matches `classes`
        debug_assert!((0..image.n()).all(|i| image.name(i) == r_names[i]));
        let quotient = inclusion.iter().map(|&v| class_of[v].expect("in S")).collect();
        Realized { middle, inclusion, image, quotient, class_of, classes }
    }

    /// Display as classes, e.g. `a (b c)`; multi-member classes in parens.
    pub fn label(&self, t: &Tree) -> String {
        let parts: Vec<String> = self
            .classes(t)
            .into_iter()
            .map(|m| {
                let names: Vec<&str> = iter_bits(m).map(|v| t.name(v)).collect();
                if names.len() == 1 {
                    names[0].to_string()
                } else {
                    format!("({})", names.join(" "))
                }
            })
            .collect();
        parts.join(" ")
    }

    /// Root of `S` (closest vertex to the root of `T`) and its class in `R`.
    pub fn induced_roots(&self, rt: &RootedTree) -> (usize, usize) {
        let t = rt.tree();
        let dist = t.distances(rt.root());
        let s_root = iter_bits(self.subtree).min_by_key(|&v| (dist[v], v)).expect("nonempty");
        let classes = self.classes(t);
        let r_root = classes.iter().position(|&m| m >> s_root & 1 == 1).expect("covered");
        (s_root, r_root)
    }

    /// The image tree rooted at the induced root.
    pub fn rooted_image(&self, rt: &RootedTree) -> (RootedTree, Realized) {
        let real = self.realize(rt.tree());
        let (_, r_root) = self.induced_roots(rt);
        (RootedTree::new(real.image.clone(), r_root).expect("root in range"), real)
    }
}

pub fn class_name(t: &Tree, m: u64) -> String {
    let names: Vec<&str> = iter_bits(m).map(|v| t.name(v)).collect();
    let mut names = names;
    names.sort();
    names.join("+")
}

/// `(P <<- Q -> R) o (R <<- S -> T) = (P <<- Q x_R S -> T)`.
///
/// `outer` lives on `r`, which must be the image tree of `inner` on `t`.
pub fn compose(outer: &Correspondence, r: &Tree, inner: &Correspondence, t: &Tree) -> Result<Correspondence> {
    let real = inner.realize(t);
    if &real.image != r {
        return Err(Error::CompositionDomain(format!("outer target {r} is not the inner image {}", real.image)));
    }
    outer.validate(r)?;
    Ok(compose_realized(outer, r, inner, t, &real))
}

pub(crate) fn compose_realized(
    outer: &Correspondence,
    r: &Tree,
    inner: &Correspondence,
    t: &Tree,
    real: &Realized,
) -> Correspondence {
    let mut n = 0u64;
    for v in iter_bits(inner.subtree) {
        if outer.contains(real.class_of[v].expect("in S")) {
            n |= 1 << v;
        }
    }
    let mut c = 0u64;
    for e in iter_bits(t.edges_within(n)) {
        if inner.contract >> e & 1 == 1 {
            c |= 1 << e;
            continue;
        }
        let (a, b) = t.edge(e);
        let (ca, cb) = (real.class_of[a].expect("in S"), real.class_of[b].expect("in S"));
        let re = r.edge_index(ca, cb).expect("uncontracted edge maps to an edge");
        if outer.contract >> re & 1 == 1 {
            c |= 1 << e;
        }
    }
    Correspondence { subtree: n, contract: c }
}

/// All correspondences on `t`, sorted by rank, then by masks.
pub fn enumerate_correspondences(t: &Tree) -> Vec<Correspondence> {
    let mut out = Vec::new();
    for s in t.connected_subtrees() {
        let es = t.edges_within(s);
        // iterate all submasks of es
        let mut sub = es;
        loop {
            out.push(Correspondence { subtree: s, contract: sub });
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & es;
        }
    }
    out.sort_by_key(|c| (c.rank(t), c.subtree, c.contract));
    out
}

/// Decide `p1 <= p2` (that is, `p2 = q o p1` for some `q`), returning the
/// witness `q` on the image of `p1`.
pub fn leq_witness(t: &Tree, p1: &Correspondence, p2: &Correspondence) -> Option<Correspondence> {
    leq_witness_realized(t, p1, &p1.realize(t), p2)
}

pub(crate) fn leq_witness_realized(
    t: &Tree,
    p1: &Correspondence,
    real1: &Realized,
    p2: &Correspondence,
) -> Option<Correspondence> {
    let n = p2.subtree;
    if n & !p1.subtree != 0 {
        return None;
    }
    // N must be a union of whole classes of p1
    let mut q = 0u64;
    for (k, &cls) in real1.classes.iter().enumerate() {
        let meet = cls & n;
        if meet == 0 {
            continue;
        }
        if meet != cls {
            return None;
        }
        q |= 1 << k;
    }
    let inside = t.edges_within(n);
    if p1.contract & inside & !p2.contract != 0 {
        return None;
    }
    let r = &real1.image;
    let mut qc = 0u64;
    for e in iter_bits(p2.contract & !p1.contract) {
        let (a, b) = t.edge(e);
        let (ca, cb) = (real1.class_of[a]?, real1.class_of[b]?);
        qc |= 1 << r.edge_index(ca, cb)?;
    }
    Some(Correspondence { subtree: q, contract: qc })
}

pub fn leq(t: &Tree, p1: &Correspondence, p2: &Correspondence) -> bool {
    leq_witness(t, p1, p2).is_some()
}

/// The poset `Arb_T` with cached realizations and the full order relation.
#[derive(Clone, Debug)]
pub struct Arb {
    tree: Tree,
    corrs: Vec<Correspondence>,
    index: HashMap<Correspondence, usize>,
    realized: Vec<Realized>,
    /// `less[i]` lists `j` with `corrs[i] < corrs[j]`.
    less: Vec<Vec<usize>>,
    leq_bits: Vec<Vec<u64>>,
}

impl Arb {
    pub fn new(tree: &Tree) -> Self {
        let corrs = enumerate_correspondences(tree);
        let index = corrs.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let realized: Vec<Realized> = corrs.iter().map(|c| c.realize(tree)).collect();
        let n = corrs.len();
        let words = n.div_ceil(64);
        let mut leq_bits = vec![vec![0u64; words]; n];
        let mut less = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if leq_witness_realized(tree, &corrs[i], &realized[i], &corrs[j]).is_some() {
                    leq_bits[i][j / 64] |= 1 << (j % 64);
                    if i != j {
                        less[i].push(j);
                    }
                }
            }
        }
        Arb { tree: tree.clone(), corrs, index, realized, less, leq_bits }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.corrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corrs.is_empty()
    }

    pub fn corrs(&self) -> &[Correspondence] {
        &self.corrs
    }

    pub fn get(&self, i: usize) -> &Correspondence {
        &self.corrs[i]
    }

    pub fn index_of(&self, c: &Correspondence) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn realized(&self, i: usize) -> &Realized {
        &self.realized[i]
    }

    /// Index of the trivial correspondence `p_T`.
    pub fn bottom(&self) -> usize {
        self.index[&Correspondence::trivial(&self.tree)]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq_bits[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn above(&self, i: usize) -> &[usize] {
        &self.less[i]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.corrs[i].rank(&self.tree)
    }

    /// Witness `q` with `corrs[j] = q o corrs[i]`.
    pub fn witness(&self, i: usize, j: usize) -> Option<Correspondence> {
        leq_witness_realized(&self.tree, &self.corrs[i], &self.realized[i], &self.corrs[j])
    }

    pub fn label(&self, i: usize) -> String {
        self.corrs[i].label(&self.tree)
    }

    /// Covering relations `i < j` with nothing strictly between.
    pub fn covers(&self, i: usize) -> Vec<usize> {
        self.less[i].iter().copied().filter(|&j| self.rank(j) == self.rank(i) + 1).collect()
    }
}

impl fmt::Display for Correspondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S={:#x} C={:#x}", self.subtree, self.contract)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_and_a3_counts() {
        assert_eq!(enumerate_correspondences(&Tree::path(2)).len(), 4);
        assert_eq!(enumerate_correspondences(&Tree::path(3)).len(), 11);
        assert_eq!(enumerate_correspondences(&Tree::single("x")).len(), 1);
    }

    #[test]
    fn trivial_is_minimum_and_identity() {
        let t = Tree::path(3);
        let arb = Arb::new(&t);
        let b = arb.bottom();
        for i in 0..arb.len() {
            assert!(arb.leq(b, i));
            let q = arb.witness(b, i).unwrap();
            // p = q o p_T, and q is p itself
            assert_eq!(q, arb.corrs[i]);
            let r = &arb.realized(i).image;
            assert_eq!(compose(&Correspondence::trivial(r), r, &arb.corrs[i], &t).unwrap(), arb.corrs[i]);
        }
    }

    #[test]
    fn a2_nontrivial_incomparable() {
        let t = Tree::path(2);
        let arb = Arb::new(&t);
        let b = arb.bottom();
        let others: Vec<usize> = (0..4).filter(|&i| i != b).collect();
        for &i in &others {
            for &j in &others {
                assert_eq!(arb.leq(i, j), i == j);
            }
        }
    }

    #[test]
    fn composition_domain_error() {
        let t = Tree::path(3);
        let p = Correspondence { subtree: 0b011, contract: 0 };
        let r = Tree::path(3);
        assert!(matches!(
            compose(&Correspondence::trivial(&r), &r, &p, &t),
            Err(Error::CompositionDomain(_))
        ));
    }

    #[test]
    fn induced_roots_examples() {
        let rt = RootedTree::with_root_name(Tree::path(3), "b").unwrap();
        let only_a = Correspondence { subtree: 0b001, contract: 0 };
        assert_eq!(only_a.induced_roots(&rt).0, 0);
        let rt_a = RootedTree::with_root_name(Tree::path(3), "a").unwrap();
        let ab = Correspondence { subtree: 0b111, contract: 0b01 };
        let (s, r) = ab.induced_roots(&rt_a);
        assert_eq!(s, 0);
        assert_eq!(ab.classes(rt_a.tree())[r], 0b011);
    }

    #[test]
    fn labels() {
        let t = Tree::path(3);
        let c = Correspondence { subtree: 0b111, contract: 0b10 };
        assert_eq!(c.label(&t), "a (b c)");
        let spec = c.to_spec(&t);
        assert_eq!(Correspondence::from_spec(&t, &spec).unwrap(), c);
    }
}
