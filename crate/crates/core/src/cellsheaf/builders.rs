use std::collections::BTreeSet;
use std::sync::Arc;

use crate::arbspace::StratumSubset;
use crate::field::Field;
use crate::linalg::{ChainMap, Complex, Matrix};
use crate::quiverrep::{hom_complex_keyed, trace_classes, CorrFunctor, KeyedHom, PathAlgebra, ProjComplex};
use crate::treecat::{Arb, RootedTree};

use super::sheaf::CoarseSheaf;

/// Generating data of the sheaf of categories: the rooted quiver `R_p` at
/// each stratum and the correspondence functors between them.
#[derive(Clone, Debug)]
pub struct NadlerSheaf {
    rt: RootedTree,
    arb: Arc<Arb>,
    functors: Vec<CorrFunctor>,
    /// For each stratum, one `T` vertex in each class of `R_p`.
    reps: Vec<Vec<usize>>,
}

impl NadlerSheaf {
    pub fn new(rt: &RootedTree) -> Self {
        Self::from_arb(rt, Arc::new(Arb::new(rt.tree())))
    }

    pub fn from_arb(rt: &RootedTree, arb: Arc<Arb>) -> Self {
        assert!(arb.tree() == rt.tree(), "poset of a different tree");
        let functors: Vec<CorrFunctor> = (0..arb.len()).map(|p| CorrFunctor::new(rt, arb.get(p))).collect();
        let reps = functors
            .iter()
            .map(|c| {
                let mut r = vec![usize::MAX; c.target.n()];
                for (a, v) in c.vertex_map.iter().enumerate() {
                    if let Some(v) = v {
                        if r[*v] == usize::MAX {
                            r[*v] = a;
                        }
                    }
                }
                r
            })
            .collect();
        NadlerSheaf { rt: rt.clone(), arb, functors, reps }
    }

    pub fn rooted_tree(&self) -> &RootedTree {
        &self.rt
    }

    pub fn arb(&self) -> &Arb {
        &self.arb
    }

    pub fn arb_arc(&self) -> Arc<Arb> {
        self.arb.clone()
    }

    /// `R_p` with its induced root.
    pub fn quiver(&self, p: usize) -> &RootedTree {
        &self.functors[p].target
    }

    pub fn functor(&self, p: usize) -> &CorrFunctor {
        &self.functors[p]
    }

    /// The vertex map `R_p -> R_q` of the correspondence `q'` with
    /// `q = q' . p`; `None` for vertices it drops.
    pub fn transition(&self, p: usize, q: usize) -> Vec<Option<usize>> {
        debug_assert!(self.arb.leq(p, q));
        self.reps[p].iter().map(|&a| self.functors[q].vertex_map[a]).collect()
    }

    pub fn full_domain(&self) -> StratumSubset {
        StratumSubset::from_indices(0..self.arb.len())
    }

    /// `p -> Hom_{R_p}(c_p A, c_p B)`, generizations by the functors.
    pub fn hom_sheaf<F: Field>(&self, f: &F, a: &ProjComplex<F>, b: &ProjComplex<F>) -> CoarseSheaf<F> {
        let keyed: Vec<KeyedHom<F>> = self
            .functors
            .iter()
            .map(|c| {
                let (ap, ka) = c.push_forward(a);
                let (bp, kb) = c.push_forward(b);
                hom_complex_keyed(f, &c.target, &ap, &bp, Some(&ka), Some(&kb))
            })
            .collect();
        CoarseSheaf::from_fn(
            self.arb.clone(),
            self.full_domain(),
            |p| keyed[p].complex.clone(),
            |p, q, _, _| keyed_projection(f, &keyed[p], &keyed[q]),
        )
    }

    /// `p -> HH_0(k[R_p])` in the idempotent basis; the generization sends
    /// `[e_r]` to the class of its image path under the functor.
    pub fn hh_sheaf<F: Field>(&self, f: &F) -> CoarseSheaf<F> {
        let algs: Vec<PathAlgebra> = self.functors.iter().map(|c| PathAlgebra::new(&c.target)).collect();
        let classes: Vec<Matrix<F>> = algs.iter().map(|a| trace_classes(f, a)).collect();
        CoarseSheaf::from_fn(
            self.arb.clone(),
            self.full_domain(),
            |p| Complex::concentrated(0, self.quiver(p).n()),
            |p, q, _, _| {
                let trans = self.transition(p, q);
                let cols = trans
                    .iter()
                    .map(|t| match t {
                        Some(v) => classes[q].column(algs[q].idempotent(*v)).to_vec(),
                        None => Vec::new(),
                    })
                    .collect();
                ChainMap::in_degree(0, Matrix::from_columns(f, self.quiver(q).n(), cols))
            },
        )
    }

    /// Closed form of the dualizing complex: `k^{R_p}` in degree `-(n-1)`,
    /// `e_r -> e_{q(r)}` if `r` survives, else 0.
    pub fn omega<F: Field>(&self, f: &F) -> CoarseSheaf<F> {
        let deg = 1 - self.rt.n() as i64;
        CoarseSheaf::from_fn(
            self.arb.clone(),
            self.full_domain(),
            |p| Complex::concentrated(deg, self.quiver(p).n()),
            |p, q, _, _| ChainMap::in_degree(deg, self.class_matrix(f, p, q)),
        )
    }

    /// 0/1 matrix of [`Self::transition`].
    pub fn class_matrix<F: Field>(&self, f: &F, p: usize, q: usize) -> Matrix<F> {
        let entries: Vec<_> =
            self.transition(p, q).iter().enumerate().filter_map(|(r, t)| t.map(|v| (v, r, f.one()))).collect();
        Matrix::from_entries(f, self.quiver(q).n(), self.quiver(p).n(), entries)
    }
}

/// Coordinate projection between keyed Hom complexes: a basis morphism
/// survives iff both of its summands survive.
fn keyed_projection<F: Field>(f: &F, src: &KeyedHom<F>, tgt: &KeyedHom<F>) -> ChainMap<F> {
    let degs: BTreeSet<i64> = src.complex.degrees().chain(tgt.complex.degrees()).collect();
    let mut maps = std::collections::BTreeMap::new();
    for n in degs {
        let (ks, kt) = (src.keys_in(n), tgt.keys_in(n));
        if ks.is_empty() || kt.is_empty() {
            continue;
        }
        let entries: Vec<_> = ks
            .iter()
            .enumerate()
            .filter_map(|(c, k)| kt.iter().position(|x| x == k).map(|r| (r, c, f.one())))
            .collect();
        maps.insert(n, Matrix::from_entries(f, kt.len(), ks.len(), entries));
    }
    ChainMap::from_degrees(maps)
}

/// Constant sheaf `k^dim[-degree]` on a set of strata.
pub fn constant_sheaf<F: Field>(
    f: &F,
    arb: Arc<Arb>,
    domain: StratumSubset,
    dim: usize,
    degree: i64,
) -> CoarseSheaf<F> {
    CoarseSheaf::from_fn(
        arb,
        domain,
        |_| Complex::concentrated(degree, dim),
        |_, _, _, _| ChainMap::in_degree(degree, Matrix::identity(f, dim)),
    )
}
