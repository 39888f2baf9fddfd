//! Per-tree verification routines shared by the command line sweeps.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::arbspace::Nerve;
use crate::cellsheaf::{hom_support_check, omega_certificate, orientation_report, pairing_reports, NadlerSheaf};
use crate::error::Result;
use crate::field::Field;
use crate::quiverrep::module::{decompose_projective, tensor_dimvec};
use crate::quiverrep::{cyclic_truncated, hochschild, CorrFunctor, PathAlgebra};
use crate::treecat::{enumerate_correspondences, RootedTree, Tree};

#[derive(Clone, Debug, Serialize)]
pub struct Verdict<T: Serialize> {
    pub pass: bool,
    pub detail: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountCheck {
    pub enumerated: usize,
    /// `sum over subtrees S of 2^{edges(S)}`.
    pub formula: usize,
}

pub fn correspondence_count(t: &Tree) -> Verdict<CountCheck> {
    let enumerated = enumerate_correspondences(t).len();
    let formula = t.connected_subtrees().iter().map(|&s| 1usize << t.edges_within(s).count_ones()).sum();
    Verdict { pass: enumerated == formula, detail: CountCheck { enumerated, formula } }
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveCheck {
    pub by_dim: BTreeMap<usize, usize>,
    pub total: usize,
    pub boundary_squares_to_zero: bool,
}

pub fn nerve_counts(t: &Tree) -> Verdict<NerveCheck> {
    let nerve = Nerve::new(t);
    let ok = nerve.boundary_squares_to_zero();
    Verdict { pass: ok, detail: NerveCheck { by_dim: nerve.counts_by_dim(), total: nerve.len(), boundary_squares_to_zero: ok } }
}

#[derive(Clone, Debug, Serialize)]
pub struct HochschildCheck {
    pub dims: Vec<usize>,
    pub chain_dims_consistent: bool,
    pub idempotent_basis: bool,
}

/// `HH_0 = k^n` spanned by the idempotents, `HH_1 .. HH_bound = 0`.
pub fn hochschild_vanishing<F: Field>(f: &F, rt: &RootedTree, bound: usize) -> Verdict<HochschildCheck> {
    let alg = PathAlgebra::new(rt);
    let h = hochschild(f, &alg, bound);
    let pass = h.dims.first() == Some(&rt.n())
        && h.dims[1..].iter().all(|&d| d == 0)
        && h.idempotent_basis
        && h.block_count_consistent(alg.dim());
    Verdict {
        pass,
        detail: HochschildCheck {
            chain_dims_consistent: h.block_count_consistent(alg.dim()),
            idempotent_basis: h.idempotent_basis,
            dims: h.dims,
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicCheck {
    pub trusted: Vec<usize>,
    pub connes_periodic: bool,
}

/// `HC_n = k^n` for even and 0 for odd `n` below the truncation edge.
pub fn cyclic_trivial_mixed<F: Field>(f: &F, rt: &RootedTree, bound: usize) -> Verdict<CyclicCheck> {
    let c = cyclic_truncated(f, &PathAlgebra::new(rt), bound);
    let trusted = c.trusted().to_vec();
    let pass = trusted.iter().enumerate().all(|(i, &d)| d == if i % 2 == 0 { rt.n() } else { 0 });
    Verdict { pass, detail: CyclicCheck { trusted, connes_periodic: c.connes_periodic() } }
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorialityCheck {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

/// The vertex map of every correspondence functor against the class of the
/// explicit tensor product `P_a (x) k[S]` in `K_0(R)`.
pub fn functoriality<F: Field>(f: &F, rt: &RootedTree) -> Verdict<FunctorialityCheck> {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for p in enumerate_correspondences(rt.tree()) {
        let fun = CorrFunctor::new(rt, &p);
        let hh = fun.hh_map(f).to_dense(f);
        for a in 0..rt.n() {
            checked += 1;
            let dv = tensor_dimvec(f, rt, &p, a);
            let want: Vec<i64> = (0..fun.target.n()).map(|r| i64::from(!f.is_zero(&hh[r][a]))).collect();
            match decompose_projective(f, &fun.target, &dv) {
                Some(cls) if cls == want => {}
                other => mismatches.push(format!("{} on P_{}: {other:?} vs {want:?}", p.label(rt.tree()), rt.tree().name(a))),
            }
        }
    }
    Verdict { pass: mismatches.is_empty(), detail: FunctorialityCheck { checked, mismatches } }
}

#[derive(Clone, Debug, Serialize)]
pub struct SheafChecks {
    pub omega: Verdict<crate::cellsheaf::OmegaCertificate>,
    pub orientation: Verdict<crate::cellsheaf::OrientationReport>,
    pub hom_support_failures: Vec<String>,
    pub nondegeneracy: Vec<Verdict<crate::cellsheaf::PairingReport>>,
}

/// Dualizing complex, orientation, Hom supports and nondegeneracy for one
/// rooted tree; nondegeneracy for each requested sign.
pub fn sheaf_checks<F: Field>(f: &F, rt: &RootedTree, signs: &[i64]) -> Result<SheafChecks> {
    let ns = NadlerSheaf::new(rt);
    let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
    let om = omega_certificate(f, &ns, &nerve)?;
    let or = orientation_report(f, &ns, signs.first().copied().unwrap_or(1));
    let nd = pairing_reports(f, &ns, &nerve, signs)?;
    Ok(SheafChecks {
        omega: Verdict { pass: om.passed(), detail: om },
        orientation: Verdict { pass: or.passed(), detail: or },
        hom_support_failures: hom_support_check(f, &ns),
        nondegeneracy: nd.into_iter().map(|r| Verdict { pass: r.verdict, detail: r }).collect(),
    })
}

impl SheafChecks {
    pub fn pass(&self) -> bool {
        self.omega.pass
            && self.orientation.pass
            && self.hom_support_failures.is_empty()
            && self.nondegeneracy.iter().all(|v| v.pass)
    }
}
