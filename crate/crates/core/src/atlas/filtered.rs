use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::cellsheaf::euler;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{cone, hom_post, hom_pre, ChainMap, Complex, Matrix};

/// `F_0 -> F_1 -> ... -> F_n`, the global sections of a sheaf on the comb
/// with `n` spokes.
#[derive(Clone, Debug)]
pub struct FilteredComplex<F: Field> {
    pub pieces: Vec<Complex<F>>,
    /// `maps[i]: F_i -> F_{i+1}`.
    pub maps: Vec<ChainMap<F>>,
}

impl<F: Field> FilteredComplex<F> {
    pub fn new(f: &F, pieces: Vec<Complex<F>>, maps: Vec<ChainMap<F>>) -> Result<Self> {
        if pieces.is_empty() || maps.len() + 1 != pieces.len() {
            return Err(Error::InvalidConfig(format!("{} pieces need {} maps", pieces.len(), pieces.len().saturating_sub(1))));
        }
        for (i, m) in maps.iter().enumerate() {
            m.check(f, &pieces[i], &pieces[i + 1])?;
        }
        Ok(FilteredComplex { pieces, maps })
    }

    pub fn zero(n: usize) -> Self {
        FilteredComplex { pieces: vec![Complex::zero(); n + 1], maps: vec![ChainMap::zero(); n] }
    }

    pub fn steps(&self) -> usize {
        self.maps.len()
    }

    /// `(F_0, Cone(F_0 -> F_1), ..., Cone(F_{n-1} -> F_n))` and `F_n`.
    pub fn boundary(&self, f: &F) -> (Vec<Complex<F>>, Complex<F>) {
        let mut graded = vec![self.pieces[0].clone()];
        for (i, m) in self.maps.iter().enumerate() {
            graded.push(cone(f, m, &self.pieces[i], &self.pieces[i + 1]).expect("checked chain map"));
        }
        (graded, self.pieces.last().expect("nonempty").clone())
    }

    /// Graded dimensions of the boundary pieces.
    pub fn boundary_dims(&self, f: &F) -> (Vec<BTreeMap<i64, usize>>, BTreeMap<i64, usize>) {
        let (g, top) = self.boundary(f);
        (g.iter().map(|c| c.cohomology_dims(f)).collect(), top.cohomology_dims(f))
    }
}

/// `RHom(A, B)` in filtered complexes:
/// `Cone(prod_i Hom(A_i, B_i) -> prod_i Hom(A_i, B_{i+1}))[-1]`, the map being
/// `(phi_i) -> (g_i phi_i - phi_{i+1} f_i)`.
pub fn filtered_rhom<F: Field>(f: &F, a: &FilteredComplex<F>, b: &FilteredComplex<F>) -> Result<Complex<F>> {
    let (src, tgt, delta) = rhom_parts(f, a, b)?;
    Ok(cone(f, &delta, &src, &tgt)?.shift(f, -1))
}

/// Source, target and map of the two-term description of `RHom`, with the
/// summands laid out in order.
fn rhom_parts<F: Field>(
    f: &F,
    a: &FilteredComplex<F>,
    b: &FilteredComplex<F>,
) -> Result<(Complex<F>, Complex<F>, ChainMap<F>)> {
    if a.steps() != b.steps() {
        return Err(Error::InvalidConfig("filtrations of different lengths".into()));
    }
    let n = a.steps();
    let diag: Vec<Complex<F>> = (0..=n).map(|i| Complex::hom(f, &a.pieces[i], &b.pieces[i])).collect();
    let off: Vec<Complex<F>> = (0..n).map(|i| Complex::hom(f, &a.pieces[i], &b.pieces[i + 1])).collect();
    let src = diag.iter().fold(Complex::zero(), |acc, c| acc.direct_sum(c));
    let tgt = off.iter().fold(Complex::zero(), |acc, c| acc.direct_sum(c));
    let degs: std::collections::BTreeSet<i64> = src.degrees().chain(tgt.degrees()).collect();
    let mut blocks: BTreeMap<i64, Vec<(usize, usize, F::El)>> = BTreeMap::new();
    let starts = |cs: &[Complex<F>], m: i64| -> Vec<usize> {
        cs.iter().scan(0, |acc, c| {
            let s = *acc;
            *acc += c.dim(m);
            Some(s)
        })
        .collect()
    };
    for i in 0..n {
        let post = hom_post(f, &a.pieces[i], &b.pieces[i], &b.pieces[i + 1], &b.maps[i]);
        let pre = hom_pre(f, &a.pieces[i], &a.pieces[i + 1], &b.pieces[i + 1], &a.maps[i]);
        for &m in &degs {
            let (ss, ts) = (starts(&diag, m), starts(&off, m));
            let e = blocks.entry(m).or_default();
            let pm = post.at(&diag[i], &off[i], m);
            for c in 0..pm.ncols() {
                for (r, v) in pm.column(c) {
                    e.push((ts[i] + r, ss[i] + c, v.clone()));
                }
            }
            let qm = pre.at(&diag[i + 1], &off[i], m);
            for c in 0..qm.ncols() {
                for (r, v) in qm.column(c) {
                    e.push((ts[i] + r, ss[i + 1] + c, f.neg(v)));
                }
            }
        }
    }
    let delta = ChainMap::from_degrees(
        blocks.into_iter().map(|(m, e)| (m, Matrix::from_entries(f, tgt.dim(m), src.dim(m), e))).collect(),
    );
    Ok((src, tgt, delta))
}

/// Both sides of
/// `chi Hom(A, B) = (-1)^{d+1} (chi Hom_bd(bd B, bd A) - chi Hom(B, A))`.
#[derive(Clone, Debug, Serialize)]
pub struct RelativeEuler {
    pub hom_ab: BTreeMap<i64, usize>,
    pub hom_ba: BTreeMap<i64, usize>,
    pub boundary_hom_ba: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub passed: bool,
}

/// Relative orientation shadow on the comb (`d = 1`): every Hom complex is
/// computed and its cohomology taken; no Euler form shortcut.
pub fn relative_euler_check<F: Field>(f: &F, a: &FilteredComplex<F>, b: &FilteredComplex<F>) -> Result<RelativeEuler> {
    let d = 1i64;
    let hom_ab = filtered_rhom(f, a, b)?.cohomology_dims(f);
    let hom_ba = filtered_rhom(f, b, a)?.cohomology_dims(f);
    let (ga, ta) = a.boundary(f);
    let (gb, tb) = b.boundary(f);
    let boundary_hom_ba: i64 = gb
        .iter()
        .zip(&ga)
        .chain(std::iter::once((&tb, &ta)))
        .map(|(x, y)| euler(&Complex::hom(f, x, y).cohomology_dims(f)))
        .sum();
    let lhs = euler(&hom_ab);
    let sign = if (d + 1) % 2 == 0 { 1 } else { -1 };
    let rhs = sign * (boundary_hom_ba - euler(&hom_ba));
    Ok(RelativeEuler { hom_ab, hom_ba, boundary_hom_ba, lhs, rhs, passed: lhs == rhs })
}

/// A functor on the exit-path poset of a glued space, with generizations
/// that the microsupport condition forces to be quasi-isomorphisms.
#[derive(Clone, Debug)]
pub struct GlobalObject<F: Field> {
    pub strata: Vec<String>,
    pub stalks: Vec<Complex<F>>,
    pub maps: BTreeMap<(usize, usize), ChainMap<F>>,
    pub invertible: Vec<(usize, usize)>,
}

impl<F: Field> GlobalObject<F> {
    /// Chain maps, commuting triangles and invertibility constraints.
    pub fn check(&self, f: &F) -> Result<()> {
        for (&(s, t), m) in &self.maps {
            m.check(f, &self.stalks[s], &self.stalks[t])?;
        }
        for (&(s, t), m1) in &self.maps {
            for (&(t2, u), m2) in &self.maps {
                if t2 != t {
                    continue;
                }
                if let Some(direct) = self.maps.get(&(s, u)) {
                    if !m1.then(f, m2).equals(f, direct, &self.stalks[s], &self.stalks[u]) {
                        return Err(Error::Inconsistent(format!("triangle {s} -> {t} -> {u}")));
                    }
                }
            }
        }
        for &(s, t) in &self.invertible {
            let m = self.maps.get(&(s, t)).ok_or_else(|| Error::Inconsistent(format!("no map {s} -> {t}")))?;
            let c = cone(f, m, &self.stalks[s], &self.stalks[t])?;
            if !c.cohomology_dims(f).is_empty() {
                return Err(Error::Verification(format!(
                    "{} -> {} is not a quasi-isomorphism",
                    self.strata[s], self.strata[t]
                )));
            }
        }
        Ok(())
    }

    /// Exit-path functor on the line of the comb: strata
    /// `I_0, p_1, I_1, ..., p_n, I_n`; `F(p_i) -> F(I_{i-1})` is forced
    /// invertible, `F(p_i) -> F(I_i)` is the filtration step.
    pub fn from_filtration(f: &F, x: &FilteredComplex<F>) -> Self {
        let n = x.steps();
        let mut strata = vec!["I0".to_string()];
        let mut stalks = vec![x.pieces[0].clone()];
        let mut maps = BTreeMap::new();
        let mut invertible = Vec::new();
        for i in 1..=n {
            strata.push(format!("p{i}"));
            strata.push(format!("I{i}"));
            stalks.push(x.pieces[i - 1].clone());
            stalks.push(x.pieces[i].clone());
            let (p, left, right) = (2 * i - 1, 2 * i - 2, 2 * i);
            maps.insert((p, left), ChainMap::identity(f, &x.pieces[i - 1]));
            maps.insert((p, right), x.maps[i - 1].clone());
            invertible.push((p, left));
        }
        GlobalObject { strata, stalks, maps, invertible }
    }

    /// Inverse of [`Self::from_filtration`] for objects whose forced
    /// generizations are identities.
    pub fn to_filtration(&self, f: &F) -> Result<FilteredComplex<F>> {
        self.check(f)?;
        let n = (self.stalks.len() - 1) / 2;
        let pieces = (0..=n).map(|i| self.stalks[2 * i].clone()).collect();
        let maps = (1..=n).map(|i| self.maps[&(2 * i - 1, 2 * i)].clone()).collect();
        FilteredComplex::new(f, pieces, maps)
    }
}

fn random_matrix<F: Field, R: Rng>(f: &F, rng: &mut R, rows: usize, cols: usize) -> Matrix<F> {
    let entries: Vec<_> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .map(|(r, c)| (r, c, f.from_i64(rng.gen_range(-2..=2))))
        .collect();
    Matrix::from_entries(f, rows, cols, entries)
}

/// Random complex in degrees `-1..=1` with dimensions at most `max_dim`.
pub fn random_complex<F: Field, R: Rng>(f: &F, rng: &mut R, max_dim: usize) -> Complex<F> {
    let dims: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=max_dim)).collect();
    // d1 d0 = 0: take d0 random and d1 vanishing on its image
    let d0 = random_matrix(f, rng, dims[1], dims[0]);
    let ker = d0.transpose().kernel(f).transpose();
    let coeffs = random_matrix(f, rng, dims[2], ker.nrows());
    let d1 = if ker.nrows() == 0 { Matrix::zeros(dims[2], dims[1]) } else { coeffs.mul(f, &ker) };
    Complex::new(f, -1, dims, vec![d0, d1]).expect("d1 d0 = 0")
}

/// Random chain map `x -> y` as a composite through a random complex
/// would bias towards zero; instead solve for maps commuting with `d`.
pub fn random_chain_map<F: Field, R: Rng>(f: &F, rng: &mut R, x: &Complex<F>, y: &Complex<F>) -> ChainMap<F> {
    // the chain maps are the degree-0 cocycles of Hom(x, y)
    let h = Complex::hom(f, x, y);
    let z = h.d(0).kernel(f);
    let mut v: Vec<(usize, F::El)> = Vec::new();
    for c in 0..z.ncols() {
        let coef = f.from_i64(rng.gen_range(-2..=2));
        v = crate::linalg::axpy(f, &v, &coef, z.column(c));
    }
    let mut maps = BTreeMap::new();
    let mut dense = vec![f.zero(); h.dim(0)];
    for (i, val) in v {
        dense[i] = val;
    }
    let mut off = 0;
    for i in x.degrees() {
        let (xr, yr) = (x.dim(i), y.dim(i));
        if yr > 0 {
            let entries: Vec<_> = (0..yr)
                .flat_map(|r| (0..xr).map(move |c| (r, c)))
                .filter_map(|(r, c)| {
                    let val = &dense[off + r * xr + c];
                    (!f.is_zero(val)).then(|| (r, c, val.clone()))
                })
                .collect();
            maps.insert(i, Matrix::from_entries(f, yr, xr, entries));
        }
        off += yr * xr;
    }
    ChainMap::from_degrees(maps)
}

/// Random filtered complex with `n` steps.
pub fn random_filtered<F: Field, R: Rng>(f: &F, rng: &mut R, n: usize, max_dim: usize) -> FilteredComplex<F> {
    let pieces: Vec<Complex<F>> = (0..=n).map(|_| random_complex(f, rng, max_dim)).collect();
    let maps = (0..n).map(|i| random_chain_map(f, rng, &pieces[i], &pieces[i + 1])).collect();
    FilteredComplex::new(f, pieces, maps).expect("random chain maps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k_in_degree_0(f: &Rationals) -> FilteredComplex<Rationals> {
        let k = Complex::concentrated(0, 1);
        FilteredComplex::new(f, vec![Complex::zero(), k], vec![ChainMap::zero()]).unwrap()
    }

    #[test]
    fn zero_then_k() {
        let f = Rationals;
        let a = k_in_degree_0(&f);
        let r = relative_euler_check(&f, &a, &a).unwrap();
        assert_eq!(r.hom_ab, [(0, 1)].into_iter().collect());
        assert_eq!((r.lhs, r.rhs, r.boundary_hom_ba), (1, 1, 2));
        let z = FilteredComplex::zero(1);
        let r = relative_euler_check(&f, &z, &a).unwrap();
        assert_eq!((r.lhs, r.rhs), (0, 0));
    }

    #[test]
    fn filtered_hom_is_quiver_hom() {
        let f = Rationals;
        let k = Complex::concentrated(0, 1);
        let id = FilteredComplex::new(&f, vec![k.clone(), k.clone()], vec![ChainMap::identity(&f, &k)]).unwrap();
        let s = k_in_degree_0(&f);
        assert_eq!(filtered_rhom(&f, &s, &id).unwrap().cohomology_dims(&f), [(0, 1)].into_iter().collect());
        // k -> k is projective and has no maps to 0 -> k
        assert!(filtered_rhom(&f, &id, &s).unwrap().cohomology_dims(&f).is_empty());
        // Ext^1 from the simple at the top: 0 -> k -> (k -> k) -> (k -> 0) -> 0
        let top = FilteredComplex::new(&f, vec![k.clone(), Complex::zero()], vec![ChainMap::zero()]).unwrap();
        assert_eq!(filtered_rhom(&f, &top, &s).unwrap().cohomology_dims(&f), [(1, 1)].into_iter().collect());
    }

    #[test]
    fn random_objects_round_trip() {
        let f = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = random_filtered(&f, &mut rng, 2, 2);
            let g = GlobalObject::from_filtration(&f, &x);
            g.check(&f).unwrap();
            let y = g.to_filtration(&f).unwrap();
            assert_eq!(y.pieces.len(), 3);
            let (gr, top) = x.boundary_dims(&f);
            assert_eq!(gr.len(), 3);
            let chi = |d: &BTreeMap<i64, usize>| euler(d);
            assert_eq!(gr.iter().map(chi).sum::<i64>(), chi(&top));
        }
    }
}
