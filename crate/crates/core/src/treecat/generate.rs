//! Trees up to isomorphism, via canonical AHU strings.

use std::collections::BTreeSet;

use super::tree::{RootedTree, Tree};

/// Canonical string of the subtree hanging at `v` (away from `parent`).
fn ahu(t: &Tree, v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> =
        t.neighbors(v).map(|(w, _)| w).filter(|&w| Some(w) != parent).map(|w| ahu(t, w, Some(v))).collect();
    kids.sort();
    format!("({})", kids.concat())
}

pub fn rooted_canonical(rt: &RootedTree) -> String {
    ahu(rt.tree(), rt.root(), None)
}

pub fn unrooted_canonical(t: &Tree) -> String {
    (0..t.n()).map(|r| ahu(t, r, None)).min().expect("nonempty tree")
}

/// Build a rooted tree from a canonical string, naming vertices `v0, v1, ...`
/// in preorder with `v0` the root.
pub fn from_canonical(code: &str) -> RootedTree {
    let bytes = code.as_bytes();
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &b in bytes {
        match b {
            b'(' => {
                let id = parents.len();
                parents.push(stack.last().copied());
                stack.push(id);
            }
            b')' => {
                stack.pop();
            }
            _ => panic!("bad canonical code"),
        }
    }
    let names: Vec<String> = (0..parents.len()).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String)> =
        parents.iter().enumerate().filter_map(|(i, p)| p.map(|p| (names[p].clone(), names[i].clone()))).collect();
    let t = Tree::new(&names, &edges).expect("canonical code encodes a tree");
    let root = t.index_of("v0").expect("root");
    RootedTree::new(t, root).expect("root")
}

/// All rooted trees with exactly `n` vertices, up to isomorphism.
pub fn rooted_trees(n: usize) -> Vec<RootedTree> {
    rooted_codes(n).iter().map(|c| from_canonical(c)).collect()
}

fn rooted_codes(n: usize) -> BTreeSet<String> {
    let mut level: BTreeSet<String> = BTreeSet::new();
    if n == 0 {
        return level;
    }
    level.insert("()".to_string());
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for code in &level {
            let rt = from_canonical(code);
            for v in 0..rt.n() {
                let mut names: Vec<String> = rt.tree().names().to_vec();
                let new = format!("v{}", rt.n());
                names.push(new.clone());
                let mut edges: Vec<(String, String)> = rt
                    .tree()
                    .edges()
                    .iter()
                    .map(|&(a, b)| (rt.tree().name(a).to_string(), rt.tree().name(b).to_string()))
                    .collect();
                edges.push((rt.tree().name(v).to_string(), new));
                let t = Tree::new(&names, &edges).expect("leaf extension");
                let root = t.index_of(rt.tree().name(rt.root())).expect("root");
                next.insert(rooted_canonical(&RootedTree::new(t, root).expect("root")));
            }
        }
        level = next;
    }
    level
}

/// All unrooted trees with exactly `n` vertices, up to isomorphism.
pub fn unrooted_trees(n: usize) -> Vec<Tree> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rt in rooted_trees(n) {
        let c = unrooted_canonical(rt.tree());
        if seen.insert(c.clone()) {
            out.push(from_canonical(&c).tree().clone());
        }
    }
    out
}

/// Rooted trees with `1..=max_n` vertices.
pub fn rooted_trees_up_to(max_n: usize) -> Vec<RootedTree> {
    (1..=max_n).flat_map(rooted_trees).collect()
}

pub fn unrooted_trees_up_to(max_n: usize) -> Vec<Tree> {
    (1..=max_n).flat_map(unrooted_trees).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequences() {
        let rooted: Vec<usize> = (1..=6).map(|n| rooted_trees(n).len()).collect();
        assert_eq!(rooted, vec![1, 1, 2, 4, 9, 20]);
        let free: Vec<usize> = (1..=6).map(|n| unrooted_trees(n).len()).collect();
        assert_eq!(free, vec![1, 1, 1, 2, 3, 6]);
    }

    #[test]
    fn canonical_is_rooting_invariant() {
        let a = Tree::path(4);
        let (b, _) = Tree::parse_compact("x(y(z(w)))").unwrap();
        assert_eq!(unrooted_canonical(&a), unrooted_canonical(&b));
    }
}
