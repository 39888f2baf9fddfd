//! `K_0` bookkeeping: Euler forms of the projectives and their invariants
//! under a change of root.

use crate::treecat::RootedTree;

/// `E[a][b] = chi Hom(P_a, P_b)`, which is 1 iff `b >= a`.
pub fn euler_form(rt: &RootedTree) -> Vec<Vec<i64>> {
    let n = rt.n();
    (0..n).map(|a| (0..n).map(|b| i64::from(rt.geq(b, a))).collect()).collect()
}

/// Dimension vectors of the projectives as columns: `D[v][a] = dim P_a e_v`.
pub fn projective_dimvecs(rt: &RootedTree) -> Vec<Vec<i64>> {
    let n = rt.n();
    (0..n).map(|v| (0..n).map(|a| i64::from(rt.geq(a, v))).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Inverse of a unitriangular (up to permutation) 0/1 order matrix, by the
/// Moebius function of the order: exact over the integers.
fn inverse_unimodular(a: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut inv: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] == 1 || m[r][col] == -1)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] *= p;
            inv[col][j] *= p;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let c = m[r][col];
                for j in 0..n {
                    m[r][j] -= c * m[col][j];
                    inv[r][j] -= c * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

/// Euler form rewritten in the basis of simples: `D^{-T} E D^{-1}`.
pub fn euler_form_simples(rt: &RootedTree) -> Vec<Vec<i64>> {
    let e = euler_form(rt);
    let dinv = inverse_unimodular(&projective_dimvecs(rt)).expect("dimension vectors of projectives are unimodular");
    mat_mul(&transpose(&dinv), &mat_mul(&e, &dinv))
}

/// Symmetrized Euler form on simples: `2` on the diagonal, `-1` per edge.
pub fn tits_form(rt: &RootedTree) -> Vec<Vec<i64>> {
    let s = euler_form_simples(rt);
    let n = s.len();
    (0..n).map(|i| (0..n).map(|j| s[i][j] + s[j][i]).collect()).collect()
}

/// Characteristic polynomial of `-E^{-1} E^T` (Faddeev-LeVerrier), leading
/// coefficient first.
pub fn coxeter_polynomial(rt: &RootedTree) -> Vec<i64> {
    let e = euler_form(rt);
    let einv = inverse_unimodular(&e).expect("unitriangular");
    let phi: Vec<Vec<i64>> = mat_mul(&einv, &transpose(&e)).into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
    char_poly(&phi)
}

fn char_poly(a: &[Vec<i64>]) -> Vec<i64> {
    let n = a.len();
    let mut coeffs = vec![1i64];
    let mut m: Vec<Vec<i64>> = vec![vec![0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        let c_prev = *coeffs.last().expect("nonempty");
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c_prev;
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr: i64 = (0..n).map(|i| am[i][i]).sum();
        debug_assert_eq!(tr % k as i64, 0);
        coeffs.push(-tr / k as i64);
    }
    coeffs
}

/// Root-independent `K_0` data of the projectives of one rooting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootingInvariants {
    pub tits_form: Vec<Vec<i64>>,
    pub coxeter_polynomial: Vec<i64>,
}

pub fn rooting_invariants(rt: &RootedTree) -> RootingInvariants {
    RootingInvariants { tits_form: tits_form(rt), coxeter_polynomial: coxeter_polynomial(rt) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecat::Tree;

    #[test]
    fn a2_coxeter() {
        let rt = RootedTree::with_root_name(Tree::path(2), "a").unwrap();
        // Coxeter polynomial of A2 is t^2 + t + 1
        assert_eq!(coxeter_polynomial(&rt), vec![1, 1, 1]);
        assert_eq!(tits_form(&rt), vec![vec![2, -1], vec![-1, 2]]);
    }
}
