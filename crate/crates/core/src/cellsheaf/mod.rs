//! Constructible sheaves on the arboreal singularity: coarse (per stratum)
//! and fine (per simplex of the nerve) models, cohomology and duality.

mod builders;
mod cohomology;
mod duality;
mod orientation;
mod sheaf;

pub use builders::{constant_sheaf, NadlerSheaf};
pub use cohomology::{
    cellular_cochains, coarse_compact_euler, coarse_euler, coarse_roos_complex, cohomology, compact_cohomology, euler,
    extension_by_zero, roos_complex, TotalCochains,
};
pub use duality::{omega_certificate, verdier_dual, OmegaCertificate};
pub use orientation::{
    canonical_orientation, endomorphism_dim, hom_support_check, orientation_report, pairing_reports, verify_nondegeneracy,
    Orientation, OrientationReport, PairEntry, PairingReport, PmaxCheck, SheafMorphism, StalkRow,
};
pub use sheaf::{CellSheaf, CoarseSheaf};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::arbspace::{Nerve, StratumSubset};
    use crate::field::{Field, PrimeField, Rationals};
    use crate::quiverrep::ProjComplex;
    use crate::treecat::generate::rooted_trees_up_to;
    use crate::treecat::{Correspondence, RootedTree, Tree};

    fn a2() -> (NadlerSheaf, Arc<Nerve>) {
        let rt = RootedTree::new(Tree::path(2), 0).unwrap();
        let ns = NadlerSheaf::new(&rt);
        let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
        (ns, nerve)
    }

    fn dims(v: &[(i64, usize)]) -> BTreeMap<i64, usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn constant_sheaf_on_cone_and_boundary() {
        let f = Rationals;
        let (ns, nerve) = a2();
        let k = constant_sheaf(&f, ns.arb_arc(), ns.full_domain(), 1, 0);
        let all = k.pullback(&f, &nerve, &nerve.all());
        assert_eq!(cohomology(&f, &all, &nerve.all()), dims(&[(0, 1)]));
        assert_eq!(cohomology(&f, &all, &nerve.boundary()), dims(&[(0, 3)]));
        // derived limit agrees with cellular cochains on a closed set
        assert_eq!(roos_complex(&f, &all, &nerve.boundary()).cohomology_dims(&f), dims(&[(0, 3)]));
    }

    #[test]
    fn compact_support_on_open_part() {
        let f = Rationals;
        let (ns, nerve) = a2();
        let open = nerve.open_part();
        assert_eq!(open.len(), 4);
        let k = constant_sheaf(&f, ns.arb_arc(), ns.full_domain(), 1, 0);
        let h = compact_cohomology(&f, &k.pullback(&f, &nerve, &open), &open).unwrap();
        assert_eq!(h, dims(&[(1, 2)]));
        assert_eq!(euler(&h), -2);
        assert_eq!(coarse_compact_euler(&k, &ns.full_domain()), -2);
        assert!(compact_cohomology(&f, &k.pullback(&f, &nerve, &nerve.boundary()), &nerve.boundary()).is_err());
    }

    #[test]
    fn global_homs_match_the_quiver() {
        let f = Rationals;
        for rt in rooted_trees_up_to(3) {
            let ns = NadlerSheaf::new(&rt);
            let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
            for a in 0..rt.n() {
                for b in 0..rt.n() {
                    let h = ns.hom_sheaf(&f, &ProjComplex::projective(a, 0), &ProjComplex::projective(b, 0));
                    h.check(&f).unwrap();
                    let got = cohomology(&f, &h.pullback(&f, &nerve, &nerve.all()), &nerve.all());
                    let want = if rt.geq(b, a) { dims(&[(0, 1)]) } else { BTreeMap::new() };
                    assert_eq!(got, want, "{} ({a}, {b})", rt.to_compact());
                }
            }
        }
    }

    #[test]
    fn omega_on_a2() {
        let f = Rationals;
        let (ns, _) = a2();
        let t = Tree::path(2);
        let arb = ns.arb();
        let collapse = arb.index_of(&Correspondence::new(&t, 0b11, 0b1).unwrap()).unwrap();
        let first = arb.index_of(&Correspondence::new(&t, 0b01, 0).unwrap()).unwrap();
        let p0 = arb.bottom();
        let add = ns.class_matrix(&f, p0, collapse).to_dense(&f);
        assert_eq!(add, vec![vec![f.one(), f.one()]]);
        let drop = ns.class_matrix(&f, p0, first).to_dense(&f);
        assert_eq!(drop, vec![vec![f.one(), f.zero()]]);
        let om = ns.omega(&f);
        om.check(&f).unwrap();
        assert_eq!(om.stalk(p0).cohomology_dims(&f), dims(&[(-1, 2)]));
        let hh = ns.hh_sheaf(&f);
        let pattern: Vec<usize> = (0..arb.len()).map(|p| hh.stalk(p).dim(0)).collect();
        let mut sorted = pattern.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 1, 2]);
    }

    #[test]
    fn dual_of_constant_on_interval_point() {
        let f = Rationals;
        let (ns, nerve) = a2();
        let open = nerve.open_part();
        let k = constant_sheaf(&f, ns.arb_arc(), ns.full_domain(), 1, 0).pullback(&f, &nerve, &open);
        let d = verdier_dual(&f, &k).unwrap();
        d.check(&f).unwrap();
        for &s in &open {
            if nerve.dim(s) == 1 {
                assert_eq!(d.stalk(s).cohomology_dims(&f), dims(&[(-1, 1)]));
            }
        }
    }

    /// `H^*(U, D F) = H^*_c(U, F)^dual` on stars, and `D D F` has the stalks of `F`.
    #[test]
    fn duality_on_stars_and_biduality() {
        let f = PrimeField::new(101).unwrap();
        for rt in rooted_trees_up_to(3) {
            let ns = NadlerSheaf::new(&rt);
            let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
            let open = nerve.open_part();
            for a in 0..rt.n() {
                for b in 0..rt.n() {
                    let h = ns
                        .hom_sheaf(&f, &ProjComplex::projective(a, 0), &ProjComplex::projective(b, 0))
                        .pullback(&f, &nerve, &open);
                    let d = verdier_dual(&f, &h).unwrap();
                    d.check(&f).unwrap();
                    for &s in &open {
                        let star = nerve.star(s, &open);
                        let lhs = roos_complex(&f, &d, &star).cohomology_dims(&f);
                        let rhs: BTreeMap<i64, usize> =
                            compact_cohomology(&f, &h, &star).unwrap().into_iter().map(|(m, x)| (-m, x)).collect();
                        assert_eq!(lhs, rhs);
                    }
                    let dd = verdier_dual(&f, &d).unwrap();
                    assert_eq!(dd.stalk_dims(&f), h.stalk_dims(&f));
                }
            }
        }
    }

    /// Fine Euler characteristic on up-closed sets of strata against the
    /// stratum-wise formulas.
    #[test]
    fn coarse_euler_calculus() {
        let f = PrimeField::new(101).unwrap();
        for rt in rooted_trees_up_to(3) {
            let ns = NadlerSheaf::new(&rt);
            let arb = ns.arb();
            let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
            let mut sheaves = vec![constant_sheaf(&f, ns.arb_arc(), ns.full_domain(), 1, 0), ns.hh_sheaf(&f)];
            for a in 0..rt.n() {
                for b in 0..rt.n() {
                    sheaves.push(ns.hom_sheaf(&f, &ProjComplex::projective(a, 0), &ProjComplex::projective(b, 0)));
                }
            }
            for p in 0..arb.len() {
                let u = StratumSubset::from_indices(std::iter::once(p).chain(arb.above(p).iter().copied()));
                let cells = nerve.cells_of(&u);
                assert!(nerve.is_open(&cells));
                let open_cells: crate::arbspace::CellSet = cells.intersection(&nerve.open_part()).copied().collect();
                for sh in &sheaves {
                    let fine = sh.pullback(&f, &nerve, &cells);
                    assert_eq!(euler(&cohomology(&f, &fine, &cells)), coarse_euler(&f, sh, &u));
                    assert_eq!(
                        euler(&coarse_roos_complex(&f, sh, &u).cohomology_dims(&f)),
                        euler(&cohomology(&f, &fine, &cells))
                    );
                    let fo = sh.pullback(&f, &nerve, &open_cells);
                    assert_eq!(euler(&compact_cohomology(&f, &fo, &open_cells).unwrap()), coarse_compact_euler(sh, &u));
                }
            }
        }
    }
}
