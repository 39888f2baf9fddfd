use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::arbspace::{hom_support_of, Nerve};
use crate::error::Result;
use crate::field::Field;
use crate::linalg::{ChainMap, Matrix};
use crate::quiverrep::{trace_class, PathAlgebra, ProjComplex};
use crate::treecat::Correspondence;

use super::builders::NadlerSheaf;
use super::duality::verdier_dual;
use super::sheaf::{CellSheaf, CoarseSheaf};

/// A map of coarse sheaves given stalkwise.
#[derive(Clone, Debug)]
pub struct SheafMorphism<F: Field> {
    pub maps: BTreeMap<usize, ChainMap<F>>,
}

impl<F: Field> SheafMorphism<F> {
    /// Failures of the chain map condition and of the naturality squares.
    pub fn check(&self, f: &F, src: &CoarseSheaf<F>, tgt: &CoarseSheaf<F>) -> Vec<String> {
        let arb = src.arb();
        let mut out = Vec::new();
        for p in src.domain().iter() {
            if let Err(e) = self.maps[&p].check(f, src.stalk(p), tgt.stalk(p)) {
                out.push(format!("stratum {}: {e}", arb.label(p)));
            }
            for &q in arb.above(p) {
                if !src.domain().contains(q) {
                    continue;
                }
                let lhs = src.map(f, p, q).then(f, &self.maps[&q]);
                let rhs = self.maps[&p].then(f, &tgt.map(f, p, q));
                if !lhs.equals(f, &rhs, src.stalk(p), tgt.stalk(q)) {
                    out.push(format!("square {} -> {} does not commute", arb.label(p), arb.label(q)));
                }
            }
        }
        out
    }

    /// Every component is an isomorphism in each degree.
    pub fn is_stalkwise_iso(&self, f: &F, src: &CoarseSheaf<F>, tgt: &CoarseSheaf<F>) -> bool {
        src.domain().iter().all(|p| {
            let (s, t) = (src.stalk(p), tgt.stalk(p));
            let degs: BTreeSet<i64> = s.degrees().chain(t.degrees()).collect();
            degs.into_iter().all(|m| s.dim(m) == t.dim(m) && self.maps[&p].at(s, t, m).is_invertible(f))
        })
    }
}

/// `HH -> omega[1-n]`: `[e_r] -> sign * 1_r` at every stratum.
pub struct Orientation<F: Field> {
    pub hh: CoarseSheaf<F>,
    pub omega_shifted: CoarseSheaf<F>,
    pub morphism: SheafMorphism<F>,
}

pub fn canonical_orientation<F: Field>(f: &F, nadler: &NadlerSheaf, sign: i64) -> Orientation<F> {
    let n = nadler.rooted_tree().n() as i64;
    let hh = nadler.hh_sheaf(f);
    let omega_shifted = nadler.omega(f).shift(f, 1 - n);
    let s = f.from_i64(sign);
    let maps = nadler
        .full_domain()
        .iter()
        .map(|p| (p, ChainMap::in_degree(0, Matrix::identity(f, nadler.quiver(p).n()).scale(f, &s))))
        .collect();
    Orientation { hh, omega_shifted, morphism: SheafMorphism { maps } }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationReport {
    pub tree: String,
    pub sign: i64,
    pub stalkwise_iso: bool,
    pub squares_commute: bool,
    pub end_omega_dim: usize,
    pub failures: Vec<String>,
}

impl OrientationReport {
    pub fn passed(&self) -> bool {
        self.stalkwise_iso && self.squares_commute && self.end_omega_dim == 1
    }
}

pub fn orientation_report<F: Field>(f: &F, nadler: &NadlerSheaf, sign: i64) -> OrientationReport {
    let o = canonical_orientation(f, nadler, sign);
    let mut failures: Vec<String> = Vec::new();
    for (name, sh) in [("HH", &o.hh), ("omega", &o.omega_shifted)] {
        if let Err(e) = sh.check(f) {
            failures.push(format!("{name}: {e}"));
        }
    }
    let squares = o.morphism.check(f, &o.hh, &o.omega_shifted);
    let squares_commute = squares.is_empty() && failures.is_empty();
    failures.extend(squares);
    let stalkwise_iso = o.morphism.is_stalkwise_iso(f, &o.hh, &o.omega_shifted);
    OrientationReport {
        tree: nadler.rooted_tree().to_compact(),
        sign,
        stalkwise_iso,
        squares_commute,
        end_omega_dim: endomorphism_dim(f, &o.omega_shifted, 0),
        failures,
    }
}

/// Dimension of the space of sheaf endomorphisms of a sheaf whose stalks
/// are concentrated in one degree: families `phi_p` with
/// `F(p < q) phi_p = phi_q F(p < q)`.
pub fn endomorphism_dim<F: Field>(f: &F, sheaf: &CoarseSheaf<F>, degree: i64) -> usize {
    let arb = sheaf.arb();
    let mut offset = BTreeMap::new();
    let mut total = 0;
    for p in sheaf.domain().iter() {
        offset.insert(p, total);
        total += sheaf.stalk(p).dim(degree).pow(2);
    }
    let mut entries = Vec::new();
    let mut row = 0;
    for p in sheaf.domain().iter() {
        let dp = sheaf.stalk(p).dim(degree);
        for &q in arb.above(p) {
            if !sheaf.domain().contains(q) {
                continue;
            }
            let dq = sheaf.stalk(q).dim(degree);
            let m = sheaf.map(f, p, q).at(sheaf.stalk(p), sheaf.stalk(q), degree).to_dense(f);
            // entry (a, b) of M phi_p - phi_q M, with phi stored row-major
            for a in 0..dq {
                for b in 0..dp {
                    for (i, ma) in m[a].iter().enumerate() {
                        if !f.is_zero(ma) {
                            entries.push((row, offset[&p] + i * dp + b, ma.clone()));
                        }
                    }
                    for (j, mj) in m.iter().enumerate() {
                        if !f.is_zero(&mj[b]) {
                            entries.push((row, offset[&q] + a * dq + j, f.neg(&mj[b])));
                        }
                    }
                    row += 1;
                }
            }
        }
    }
    Matrix::from_entries(f, row, total, entries).kernel(f).ncols()
}

/// The Hom sheaf of `P_a, P_b` is `k` in degree 0 exactly on the support of
/// `(a, b)`, with invertible generizations there. Returns the failures.
pub fn hom_support_check<F: Field>(f: &F, nadler: &NadlerSheaf) -> Vec<String> {
    let rt = nadler.rooted_tree();
    let arb = nadler.arb();
    let n = rt.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let h = nadler.hom_sheaf(f, &ProjComplex::projective(a, 0), &ProjComplex::projective(b, 0));
            let supp = hom_support_of(arb, rt, a, b);
            let tag = format!("({}, {})", rt.tree().name(a), rt.tree().name(b));
            for p in 0..arb.len() {
                let want: BTreeMap<i64, usize> =
                    if supp.contains(p) { [(0, 1)].into_iter().collect() } else { BTreeMap::new() };
                let got = h.stalk(p).cohomology_dims(f);
                if got != want {
                    out.push(format!("{tag} at {}: {got:?}", arb.label(p)));
                }
                if !supp.contains(p) {
                    continue;
                }
                for &q in arb.above(p) {
                    if supp.contains(q) && h.map(f, p, q).homology_rank(f, h.stalk(p), h.stalk(q), 0) != 1 {
                        out.push(format!("{tag}: generization {} -> {} not invertible", arb.label(p), arb.label(q)));
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct StalkRow {
    pub stratum: String,
    /// Cohomology of the Hom sheaf of `(alpha, beta)`.
    pub hom: BTreeMap<i64, usize>,
    /// Distinct cohomology tables of the shifted dual of the Hom sheaf of
    /// `(beta, alpha)` over the simplices of the stratum.
    pub dual: Vec<BTreeMap<i64, usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PmaxCheck {
    pub stratum: String,
    pub hom_iso: bool,
    pub adjoint_trace_injective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairEntry {
    pub alpha: String,
    pub beta: String,
    pub stalks: Vec<StalkRow>,
    pub dims_match: bool,
    pub generization_ranks_match: bool,
    /// Strata where both Hom sheaves are nonzero.
    pub trace_strata: usize,
    pub trace_nonzero: bool,
    pub trace_squares_commute: bool,
    pub pmax: Option<PmaxCheck>,
    /// For `alpha = beta`: the trace of the identity at the cone point is
    /// `sign` times the unit vector of `alpha`.
    pub identity_trace: Option<bool>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub tree: String,
    pub sign: i64,
    pub pairs: Vec<PairEntry>,
    pub verdict: bool,
}

/// Sign-independent part of the check for one ordered pair.
struct DualData {
    stalks: Vec<StalkRow>,
    dims_match: bool,
    ranks_match: bool,
}

fn dual_data<F: Field>(f: &F, nadler: &NadlerSheaf, nerve: &Arc<Nerve>, a: usize, b: usize) -> Result<DualData> {
    let arb = nadler.arb();
    let d = nadler.rooted_tree().n() as i64 - 1;
    let open = nerve.open_part();
    let pa = ProjComplex::projective(a, 0);
    let pb = ProjComplex::projective(b, 0);
    let hom_ab = nadler.hom_sheaf(f, &pa, &pb);
    let hom_ba: CellSheaf<F> = nadler.hom_sheaf(f, &pb, &pa).pullback(f, nerve, &open);
    let dual = verdier_dual(f, &hom_ba)?;
    let mut by_stratum: BTreeMap<usize, BTreeSet<BTreeMap<i64, usize>>> = BTreeMap::new();
    for &s in &open {
        let dims: BTreeMap<i64, usize> = dual.stalk(s).cohomology_dims(f).into_iter().map(|(m, x)| (m + d, x)).collect();
        by_stratum.entry(nerve.label(s)).or_default().insert(dims);
    }
    let mut dims_match = true;
    let stalks = by_stratum
        .into_iter()
        .map(|(p, duals)| {
            let hom = hom_ab.stalk(p).cohomology_dims(f);
            if duals.len() != 1 || !duals.contains(&hom) {
                dims_match = false;
            }
            StalkRow { stratum: arb.label(p), hom, dual: duals.into_iter().collect() }
        })
        .collect();
    let mut ranks_match = true;
    for &s in &open {
        for &(t, _) in nerve.cofaces(s) {
            let got = dual.cover(s, t).homology_rank(f, dual.stalk(s), dual.stalk(t), -d);
            let (p, q) = (nerve.label(s), nerve.label(t));
            let want = hom_ab.map(f, p, q).homology_rank(f, hom_ab.stalk(p), hom_ab.stalk(q), 0);
            ranks_match &= got == want;
        }
    }
    Ok(DualData { stalks, dims_match, ranks_match })
}

/// Nondegeneracy of the canonical orientation for every ordered pair of
/// indecomposable projectives, once per requested sign.
pub fn pairing_reports<F: Field>(
    f: &F,
    nadler: &NadlerSheaf,
    nerve: &Arc<Nerve>,
    signs: &[i64],
) -> Result<Vec<PairingReport>> {
    let rt = nadler.rooted_tree();
    let tree = rt.tree();
    let arb = nadler.arb();
    let n = rt.n();
    let hh = nadler.hh_sheaf(f);
    let algs: Vec<PathAlgebra> = (0..arb.len()).map(|p| PathAlgebra::new(nadler.quiver(p))).collect();
    let p0 = arb.bottom();

    let mut reports: Vec<PairingReport> = signs
        .iter()
        .map(|&sign| PairingReport { tree: rt.to_compact(), sign, pairs: Vec::new(), verdict: true })
        .collect();
    for a in 0..n {
        for b in 0..n {
            let dd = dual_data(f, nadler, nerve, a, b)?;
            // trace of |a><b| . |b><a| in HH_0(k[R_p]) where both Hom spaces are nonzero
            let mut classes: BTreeMap<usize, Vec<F::El>> = BTreeMap::new();
            for p in 0..arb.len() {
                let c = nadler.functor(p);
                let (Some(qa), Some(qb)) = (c.on_projective(a), c.on_projective(b)) else { continue };
                let alg = &algs[p];
                if let (Some(x), Some(y)) = (alg.hom_basis(qa, qb), alg.hom_basis(qb, qa)) {
                    let class = match alg.mul(y, x) {
                        Some(path) => trace_class(f, alg, path),
                        None => vec![f.zero(); alg.n_vertices()],
                    };
                    classes.insert(p, class);
                }
            }
            let trace_nonzero = classes.values().all(|c| c.iter().any(|x| !f.is_zero(x)));
            let mut trace_squares_commute = true;
            for (&p, c) in &classes {
                for &q in arb.above(p) {
                    if let Some(cq) = classes.get(&q) {
                        let m = hh.map(f, p, q).at(hh.stalk(p), hh.stalk(q), 0);
                        let src: Vec<(usize, F::El)> =
                            c.iter().cloned().enumerate().filter(|(_, x)| !f.is_zero(x)).collect();
                        let img = m.apply(f, &src);
                        let mut dense = vec![f.zero(); cq.len()];
                        for (i, v) in img {
                            dense[i] = v;
                        }
                        trace_squares_commute &= dense == *cq;
                    }
                }
            }

            let pmax_idx = if rt.geq(b, a) {
                let geo = tree.geodesic(b, a);
                let emask = geo
                    .windows(2)
                    .map(|w| 1u64 << tree.edge_index(w[0], w[1]).expect("adjacent on a geodesic"))
                    .fold(0, |x, y| x | y);
                let corr = Correspondence::new(tree, tree.full_mask(), emask)?;
                Some(arb.index_of(&corr).expect("enumerated"))
            } else {
                None
            };

            for (ri, &sign) in signs.iter().enumerate() {
                let s = f.from_i64(sign);
                let pmax = pmax_idx.map(|pm| {
                    let pa = ProjComplex::projective(a, 0);
                    let pb = ProjComplex::projective(b, 0);
                    let h = nadler.hom_sheaf(f, &pa, &pb);
                    let hom_iso = h.stalk(p0).cohomology_dims(f).get(&0) == Some(&1)
                        && h.stalk(pm).cohomology_dims(f).get(&0) == Some(&1)
                        && h.map(f, p0, pm).homology_rank(f, h.stalk(p0), h.stalk(pm), 0) == 1;
                    let adjoint_trace_injective =
                        classes.get(&pm).is_some_and(|c| c.iter().any(|x| !f.is_zero(&f.mul(&s, x))));
                    PmaxCheck { stratum: arb.label(pm), hom_iso, adjoint_trace_injective }
                });
                let identity_trace = (a == b).then(|| {
                    let c = nadler.functor(p0).on_projective(a).expect("cone point keeps every vertex");
                    classes.get(&p0).is_some_and(|cls| {
                        cls.iter().enumerate().all(|(i, x)| {
                            let want = if i == c { s.clone() } else { f.zero() };
                            f.mul(&s, x) == want
                        })
                    })
                });
                let ok = dd.dims_match
                    && dd.ranks_match
                    && trace_nonzero
                    && trace_squares_commute
                    && pmax.as_ref().is_none_or(|m| m.hom_iso && m.adjoint_trace_injective)
                    && identity_trace.unwrap_or(true);
                let rep = &mut reports[ri];
                rep.verdict &= ok;
                rep.pairs.push(PairEntry {
                    alpha: tree.name(a).to_string(),
                    beta: tree.name(b).to_string(),
                    stalks: dd.stalks.clone(),
                    dims_match: dd.dims_match,
                    generization_ranks_match: dd.ranks_match,
                    trace_strata: classes.len(),
                    trace_nonzero,
                    trace_squares_commute,
                    pmax,
                    identity_trace,
                    ok,
                });
            }
        }
    }
    Ok(reports)
}

pub fn verify_nondegeneracy<F: Field>(
    f: &F,
    nadler: &NadlerSheaf,
    nerve: &Arc<Nerve>,
    sign: i64,
) -> Result<PairingReport> {
    Ok(pairing_reports(f, nadler, nerve, &[sign])?.remove(0))
}
