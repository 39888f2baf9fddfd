use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::arbspace::Nerve;
use crate::error::Result;
use crate::field::Field;
use crate::linalg::{HomologyBasis, Matrix};

use super::builders::{constant_sheaf, NadlerSheaf};
use super::cohomology::{cellular_cochains, extension_by_zero, TotalCochains};
use super::sheaf::CellSheaf;

/// Verdier dual on an open set of simplices: `D F(s) = C_c(star s, F)^dual`,
/// generizations dual to extension by zero from the smaller star.
pub fn verdier_dual<F: Field>(f: &F, sheaf: &CellSheaf<F>) -> Result<CellSheaf<F>> {
    let nerve = sheaf.nerve().clone();
    let domain = sheaf.domain().clone();
    nerve.require_open(&domain)?;
    let stars: HashMap<usize, TotalCochains<F>> =
        domain.iter().map(|&s| (s, cellular_cochains(f, sheaf, &nerve.star(s, &domain)))).collect();
    Ok(CellSheaf::from_fn(
        nerve,
        domain,
        |s| stars[&s].complex.dual(),
        |s, t, _, _| extension_by_zero(f, sheaf, &stars[&t], &stars[&s]).dual(),
    ))
}

/// Comparison of the closed-form dualizing complex with `D(k)` on the open
/// part.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaCertificate {
    pub n_simplices: usize,
    /// Every stalk of `D(k)` is concentrated in degree `-(n-1)` with the
    /// closed-form dimension.
    pub stalk_dims_ok: bool,
    /// Homology ranks of the facet generizations match the closed form.
    pub generization_ranks_ok: bool,
    /// Generizations out of the cone point are onto in homology.
    pub surjective_from_cone_point: bool,
    /// Dimension of the space of stalk maps at the cone point intertwining
    /// both descriptions; 1 with an invertible solution certifies an
    /// isomorphism of sheaves.
    pub intertwiner_dim: usize,
    pub intertwiner_invertible: bool,
    pub mismatches: Vec<String>,
}

impl OmegaCertificate {
    pub fn passed(&self) -> bool {
        self.stalk_dims_ok
            && self.generization_ranks_ok
            && self.surjective_from_cone_point
            && self.intertwiner_dim == 1
            && self.intertwiner_invertible
    }
}

/// Check the closed form of the dualizing complex against the Verdier dual of
/// the constant sheaf on the open part.
///
/// On the open part every simplex lies in the star of the cone point, so both
/// sheaves are determined by their stalk at the cone point together with the
/// kernels of its generizations. An isomorphism is a map `phi` of cone point
/// stalks with `C_t phi K_t = 0` for every `t`, where `C_t` is the closed-form
/// generization and `K_t` spans the kernel of the oracle one.
pub fn omega_certificate<F: Field>(f: &F, nadler: &NadlerSheaf, nerve: &Arc<Nerve>) -> Result<OmegaCertificate> {
    let arb = nadler.arb();
    let n = nadler.rooted_tree().n();
    let deg = 1 - n as i64;
    let open = nerve.open_part();
    let k = constant_sheaf(f, nadler.arb_arc(), nadler.full_domain(), 1, 0).pullback(f, nerve, &open);
    let dk = verdier_dual(f, &k)?;
    let mut mismatches = Vec::new();

    let mut stalk_dims_ok = true;
    for &s in &open {
        let want: BTreeMap<i64, usize> = [(deg, nadler.quiver(nerve.label(s)).n())].into_iter().collect();
        let got = dk.stalk(s).cohomology_dims(f);
        if got != want {
            stalk_dims_ok = false;
            mismatches.push(format!("stalk {:?}: {got:?} vs {want:?}", nerve.chain(s)));
        }
    }

    let mut generization_ranks_ok = true;
    for &s in &open {
        for &(t, _) in nerve.cofaces(s) {
            let got = dk.cover(s, t).homology_rank(f, dk.stalk(s), dk.stalk(t), deg);
            let want = nadler.class_matrix(f, nerve.label(s), nerve.label(t)).rank(f);
            if got != want {
                generization_ranks_ok = false;
                mismatches.push(format!("generization {:?} -> {:?}: rank {got} vs {want}", nerve.chain(s), nerve.chain(t)));
            }
        }
    }

    let s0 = nerve.vertex(arb.bottom());
    let p0 = arb.bottom();
    let h0 = HomologyBasis::new(f, dk.stalk(s0), deg);
    let dim0 = h0.dim();
    let mut surjective = true;
    let mut rows: Vec<Vec<(usize, F::El)>> = Vec::new();
    if dim0 == n {
        for &t in &open {
            if t == s0 {
                continue;
            }
            let ht = HomologyBasis::new(f, dk.stalk(t), deg);
            let g = dk.map(f, s0, t).at(dk.stalk(s0), dk.stalk(t), deg);
            let g = h0.induced(f, &g, &ht);
            if g.rank(f) != ht.dim() {
                surjective = false;
                mismatches.push(format!("cone point -> {:?} not onto", nerve.chain(t)));
            }
            let kt = g.kernel(f).to_dense(f);
            let ct = nadler.class_matrix(f, p0, nerve.label(t)).to_dense(f);
            // (C phi K)[a][b] = sum_{i,j} C[a][i] phi[i][j] K[j][b]
            for a in 0..ct.len() {
                for b in 0..kt.first().map_or(0, |r| r.len()) {
                    let mut row = Vec::new();
                    for (i, cai) in ct[a].iter().enumerate() {
                        if f.is_zero(cai) {
                            continue;
                        }
                        for (j, kj) in kt.iter().enumerate() {
                            if !f.is_zero(&kj[b]) {
                                row.push((i * n + j, f.mul(cai, &kj[b])));
                            }
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    } else {
        surjective = false;
    }
    let (intertwiner_dim, intertwiner_invertible) = if dim0 == n {
        let nrows = rows.len();
        let entries: Vec<_> =
            rows.into_iter().enumerate().flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v))).collect();
        let ker = Matrix::from_entries(f, nrows, n * n, entries).kernel(f);
        let inv = ker.ncols() == 1 && {
            let phi: Vec<_> = ker.column(0).iter().map(|(x, v)| (x / n, x % n, v.clone())).collect();
            Matrix::from_entries(f, n, n, phi).is_invertible(f)
        };
        (ker.ncols(), inv)
    } else {
        (0, false)
    };
    Ok(OmegaCertificate {
        n_simplices: open.len(),
        stalk_dims_ok,
        generization_ranks_ok,
        surjective_from_cone_point: surjective,
        intertwiner_dim,
        intertwiner_invertible,
        mismatches,
    })
}
