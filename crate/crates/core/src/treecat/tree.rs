use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trees are small; vertex and edge subsets are bitmasks.
pub const MAX_VERTICES: usize = 63;

/// A finite tree with opaque string vertex names.
///
/// Vertices are indexed in lexicographic order of their names and edges are
/// stored as sorted index pairs, so structurally equal trees compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

/// The external JSON form of a tree, optionally rooted.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TreeSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

impl Tree {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        names.sort();
        if names.is_empty() {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        if names.len() > MAX_VERTICES {
            return Err(Error::InvalidTree(format!("at most {MAX_VERTICES} vertices supported")));
        }
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree(format!("duplicate vertex `{}`", w[0])));
        }
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index.get(a.as_ref()).ok_or_else(|| Error::UnknownVertex(a.as_ref().into()))?;
            let ib = *index.get(b.as_ref()).ok_or_else(|| Error::UnknownVertex(b.as_ref().into()))?;
            if ia == ib {
                return Err(Error::InvalidTree(format!("loop at `{}`", a.as_ref())));
            }
            es.push((ia.min(ib), ia.max(ib)));
        }
        es.sort();
        if es.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree("repeated edge".into()));
        }
        if es.len() + 1 != names.len() {
            return Err(Error::InvalidTree(format!(
                "{} vertices need {} edges, got {}",
                names.len(),
                names.len() - 1,
                es.len()
            )));
        }
        let mut adj = vec![Vec::new(); names.len()];
        for (k, &(a, b)) in es.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        let t = Tree { names, edges: es, adj };
        if !t.is_connected(t.full_mask()) {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }
        Ok(t)
    }

    pub fn single(name: &str) -> Self {
        Tree::new(&[name], &[]).expect("single vertex tree")
    }

    /// The path `A_n` on vertices `a, b, c, ...`.
    pub fn path(n: usize) -> Self {
        assert!((1..=26).contains(&n), "A_n supported for 1 <= n <= 26");
        let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let edges: Vec<(String, String)> = (1..n).map(|i| (names[i - 1].clone(), names[i].clone())).collect();
        Tree::new(&names, &edges).expect("path is a tree")
    }

    /// The star with center `o` and leaves `l1..lk`.
    pub fn star(k: usize) -> Self {
        let mut names = vec!["o".to_string()];
        names.extend((1..=k).map(|i| format!("l{i}")));
        let edges: Vec<(String, String)> = (1..=k).map(|i| ("o".to_string(), format!("l{i}"))).collect();
        Tree::new(&names, &edges).expect("star is a tree")
    }

    pub fn from_spec(spec: &TreeSpec) -> Result<(Self, Option<usize>)> {
        let edges: Vec<(String, String)> = spec.edges.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        let t = Tree::new(&spec.vertices, &edges)?;
        let root = match &spec.root {
            Some(r) => Some(t.index_of(r)?),
            None => None,
        };
        Ok((t, root))
    }

    pub fn to_spec(&self, root: Option<usize>) -> TreeSpec {
        TreeSpec {
            vertices: self.names.clone(),
            edges: self.edges.iter().map(|&(a, b)| [self.names[a].clone(), self.names[b].clone()]).collect(),
            root: root.map(|r| self.names[r].clone()),
        }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).map_err(|_| Error::UnknownVertex(name.into()))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn full_mask(&self) -> u64 {
        mask_below(self.n())
    }

    pub fn full_edge_mask(&self) -> u64 {
        mask_below(self.n_edges())
    }

    /// Edges with both endpoints in `vmask`.
    pub fn edges_within(&self, vmask: u64) -> u64 {
        let mut m = 0u64;
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if vmask >> a & 1 == 1 && vmask >> b & 1 == 1 {
                m |= 1 << k;
            }
        }
        m
    }

    pub fn is_connected(&self, vmask: u64) -> bool {
        if vmask == 0 {
            return false;
        }
        let start = vmask.trailing_zeros() as usize;
        self.reach(start, vmask, self.full_edge_mask()) == vmask
    }

    /// Vertices reachable from `start` inside `vmask` along edges in `emask`.
    pub fn reach(&self, start: usize, vmask: u64, emask: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(w, e) in &self.adj[v] {
                if vmask >> w & 1 == 1 && emask >> e & 1 == 1 && seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// All connected vertex subsets, in increasing mask order.
    pub fn connected_subtrees(&self) -> Vec<u64> {
        let mut out = Vec::new();
        // grow from each minimal vertex to avoid the full 2^n scan on larger trees
        let mut seen = std::collections::HashSet::new();
        let mut queue: VecDeque<u64> = (0..self.n()).map(|v| 1u64 << v).collect();
        while let Some(m) = queue.pop_front() {
            if !seen.insert(m) {
                continue;
            }
            out.push(m);
            for v in iter_bits(m) {
                for &(w, _) in &self.adj[v] {
                    if m >> w & 1 == 0 {
                        queue.push_back(m | 1 << w);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// BFS distances from `v`.
    pub fn distances(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[v] = 0;
        let mut q = VecDeque::from([v]);
        while let Some(x) = q.pop_front() {
            for &(w, _) in &self.adj[x] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices on the geodesic from `a` to `b`, in order.
    pub fn geodesic(&self, a: usize, b: usize) -> Vec<usize> {
        let dist = self.distances(b);
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = self.adj[cur].iter().map(|&(w, _)| w).find(|&w| dist[w] + 1 == dist[cur]).expect("tree path");
            path.push(cur);
        }
        path
    }

    /// Parse the compact notation `a(b,c(d))`: outermost vertex is the root.
    pub fn parse_compact(s: &str) -> Result<(Self, usize)> {
        let mut p = CompactParser { s: s.as_bytes(), pos: 0, names: Vec::new(), edges: Vec::new() };
        p.skip_ws();
        let root = p.node()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("unexpected `{}` at offset {}", p.s[p.pos] as char, p.pos)));
        }
        let root_name = p.names[root].clone();
        let t = Tree::new(&p.names, &p.edges)?;
        let r = t.index_of(&root_name)?;
        Ok((t, r))
    }

    /// Render in compact notation rooted at `root`, children in name order.
    pub fn to_compact(&self, root: usize) -> String {
        fn go(t: &Tree, v: usize, parent: Option<usize>, out: &mut String) {
            out.push_str(&t.names[v]);
            let kids: Vec<usize> = t.adj[v].iter().map(|&(w, _)| w).filter(|&w| Some(w) != parent).collect();
            let mut kids = kids;
            kids.sort();
            if !kids.is_empty() {
                out.push('(');
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    go(t, *k, Some(v), out);
                }
                out.push(')');
            }
        }
        let mut s = String::new();
        go(self, root, None, &mut s);
        s
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let es: Vec<String> =
            self.edges.iter().map(|&(a, b)| format!("{}-{}", self.names[a], self.names[b])).collect();
        write!(f, "{{{}}} [{}]", self.names.join(","), es.join(","))
    }
}

struct CompactParser<'a> {
    s: &'a [u8],
    pos: usize,
    names: Vec<String>,
    edges: Vec<(String, String)>,
}

impl CompactParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn node(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && !b"(),".contains(&self.s[self.pos]) && !self.s[self.pos].is_ascii_whitespace()
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a vertex name at offset {start}")));
        }
        let name = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        let me = self.names.len();
        self.names.push(name.clone());
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == b'(' {
            self.pos += 1;
            loop {
                let child = self.node()?;
                self.edges.push((name.clone(), self.names[child].clone()));
                self.skip_ws();
                match self.s.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(Error::Parse(format!("expected `,` or `)` at offset {}", self.pos))),
                }
            }
        }
        Ok(me)
    }
}

pub fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn iter_bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// A tree with a distinguished root; edges are directed toward the root.
///
/// The order has the root as minimum: `a >= b` iff `b` lies on the path from
/// `a` to the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    tree: Tree,
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl RootedTree {
    pub fn new(tree: Tree, root: usize) -> Result<Self> {
        if root >= tree.n() {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        let depth = tree.distances(root);
        let parent = (0..tree.n())
            .map(|v| {
                if v == root {
                    None
                } else {
                    tree.adj[v].iter().map(|&(w, _)| w).find(|&w| depth[w] + 1 == depth[v])
                }
            })
            .collect();
        Ok(RootedTree { tree, root, parent, depth })
    }

    pub fn with_root_name(tree: Tree, root: &str) -> Result<Self> {
        let r = tree.index_of(root)?;
        Self::new(tree, r)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// `a >= b`: `b` is on the path from `a` to the root.
    pub fn geq(&self, a: usize, b: usize) -> bool {
        let mut cur = a;
        loop {
            if cur == b {
                return true;
            }
            match self.parent[cur] {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.geq(b, a)
    }

    /// The lowest point of the geodesic between `a` and `b`.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let (mut x, mut y) = (a, b);
        while self.depth[x] > self.depth[y] {
            x = self.parent[x].expect("deeper vertex has a parent");
        }
        while self.depth[y] > self.depth[x] {
            y = self.parent[y].expect("deeper vertex has a parent");
        }
        while x != y {
            x = self.parent[x].expect("non-root");
            y = self.parent[y].expect("non-root");
        }
        x
    }

    pub fn to_compact(&self) -> String {
        self.tree.to_compact(self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Tree::new::<&str>(&[], &[]).is_err());
        assert!(Tree::new(&["a", "b", "c"], &[("a", "b")]).is_err());
        assert!(Tree::new(&["a", "b", "c"], &[("a", "b"), ("b", "a")]).is_err());
        assert!(Tree::new(&["a", "b"], &[("a", "x")]).is_err());
        let t = Tree::new(&["c", "a", "b"], &[("b", "c"), ("a", "b")]).unwrap();
        assert_eq!(t, Tree::path(3));
    }

    #[test]
    fn compact_round_trip() {
        let (t, r) = Tree::parse_compact("a(b, c(d))").unwrap();
        assert_eq!(t.n(), 4);
        assert_eq!(t.name(r), "a");
        assert_eq!(t.to_compact(r), "a(b,c(d))");
        assert!(Tree::parse_compact("a(b").is_err());
        assert!(Tree::parse_compact("a(b,b)").is_err());
    }

    #[test]
    fn rooted_order() {
        let rt = RootedTree::with_root_name(Tree::path(3), "b").unwrap();
        let (a, b, c) = (0, 1, 2);
        assert!(rt.geq(a, b) && rt.geq(c, b) && !rt.geq(a, c));
        assert_eq!(rt.meet(a, c), b);
        assert_eq!(rt.meet(a, b), b);
    }

    #[test]
    fn subtree_count_of_path() {
        // a path on n vertices has n(n+1)/2 connected subsets
        assert_eq!(Tree::path(5).connected_subtrees().len(), 15);
        assert_eq!(Tree::star(3).connected_subtrees().len(), 4 + 7);
    }
}
