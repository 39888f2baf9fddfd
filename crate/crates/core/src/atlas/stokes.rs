use serde::Serialize;

use crate::error::{Error, Result};

/// Closure of a positive braid on `n` strands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidLink {
    pub strands: usize,
    /// Generators `sigma_i`, `0 <= i < n - 1`, all positive.
    pub word: Vec<usize>,
    /// Strand permutation of the braid: strand `i` ends at `permutation[i]`.
    pub permutation: Vec<usize>,
    pub components: usize,
}

impl BraidLink {
    pub fn from_word(strands: usize, word: Vec<usize>) -> Result<Self> {
        if strands == 0 || word.iter().any(|&g| g + 1 >= strands) {
            return Err(Error::InvalidConfig(format!("bad braid word on {strands} strands")));
        }
        // position -> strand, then invert
        let mut at: Vec<usize> = (0..strands).collect();
        for &g in &word {
            at.swap(g, g + 1);
        }
        let mut permutation = vec![0; strands];
        for (pos, &s) in at.iter().enumerate() {
            permutation[s] = pos;
        }
        let components = cycle_count(&permutation);
        Ok(BraidLink { strands, word, permutation, components })
    }
}

pub fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        cycles += 1;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
        }
    }
    cycles
}

/// The `(n, k)` torus braid `(sigma_0 ... sigma_{n-2})^k`.
pub fn torus_braid(n: usize, k: usize) -> Result<BraidLink> {
    let word = (0..k).flat_map(|_| 0..n.saturating_sub(1)).collect();
    BraidLink::from_word(n, word)
}

/// Legendrian link of the irregular type `A z^{-r}` (`A` regular
/// semisimple of rank `n`): the `(n, 2r)` torus braid closure, or `(n, r)`
/// for the half-integer slope `r/2`.
pub fn irregular_type_to_link(n: usize, r: usize, half_integer: bool) -> Result<BraidLink> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidConfig("rank and slope must be positive".into()));
    }
    torus_braid(n, if half_integer { r } else { 2 * r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_and_torus_links() {
        let t = irregular_type_to_link(2, 3, true).unwrap();
        assert_eq!((t.word.len(), t.components), (3, 1));
        assert_eq!(irregular_type_to_link(2, 3, false).unwrap().components, 2);
        assert_eq!(irregular_type_to_link(1, 5, false).unwrap().components, 1);
        // one full twist on three strands is a pure braid
        assert_eq!(torus_braid(3, 3).unwrap().permutation, vec![0, 1, 2]);
        assert_eq!(torus_braid(3, 1).unwrap().components, 1);
    }
}
