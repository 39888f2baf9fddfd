use std::path::Path;

use arboreal::treecat::{RootedTree, Tree, TreeSpec};
use arboreal::{Error, Result};

/// A tree given inline (`a(b,c(d))`, `A3`) or as a JSON file; the root is
/// the outermost vertex of the compact form unless overridden.
pub fn parse_tree(arg: &str, root: Option<&str>) -> Result<RootedTree> {
    let (tree, default_root) = if arg.ends_with(".json") || Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        let spec: TreeSpec = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{arg}: line {} column {}: {e}", e.line(), e.column())))?;
        let (t, r) = Tree::from_spec(&spec)?;
        (t, r.unwrap_or(0))
    } else if let Some(n) = arg.strip_prefix(['A', 'a']).and_then(|d| d.parse::<usize>().ok()) {
        if n == 0 || n > 64 {
            return Err(Error::InvalidTree(format!("A{n}")));
        }
        (Tree::path(n), 0)
    } else {
        Tree::parse_compact(arg)?
    };
    let r = match root {
        Some(name) => tree.index_of(name)?,
        None => default_root,
    };
    RootedTree::new(tree, r)
}
