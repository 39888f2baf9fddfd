use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Complex, Matrix};
use crate::treecat::{Correspondence, RootedTree};

/// Bounded cochain complex of direct sums of indecomposable projectives.
///
/// `terms[i]` lists the vertices of the summands in degree `lo + i`. Since
/// every `Hom(P_a, P_b)` is at most one-dimensional, spanned by `|b><a|`, a
/// differential is a scalar matrix whose entry `(r, c)` is allowed only when
/// the target vertex of `r` is `>=` the source vertex of `c`.
#[derive(Clone, Debug)]
pub struct ProjComplex<F: Field> {
    lo: i64,
    terms: Vec<Vec<usize>>,
    diffs: Vec<Matrix<F>>,
}

/// Map of projective complexes, a scalar matrix per degree with the same
/// masking rule as the differentials.
#[derive(Clone, Debug)]
pub struct ProjMap<F: Field> {
    pub maps: BTreeMap<i64, Matrix<F>>,
}

fn entries_legit<F: Field>(rt: &RootedTree, m: &Matrix<F>, rows: &[usize], cols: &[usize]) -> bool {
    (0..m.ncols()).all(|c| m.column(c).iter().all(|(r, _)| rt.geq(rows[*r], cols[c])))
}

impl<F: Field> ProjComplex<F> {
    pub fn zero() -> Self {
        ProjComplex { lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// `P_v` in degree `degree`.
    pub fn projective(v: usize, degree: i64) -> Self {
        ProjComplex { lo: degree, terms: vec![vec![v]], diffs: Vec::new() }
    }

    pub fn new(f: &F, rt: &RootedTree, lo: i64, terms: Vec<Vec<usize>>, diffs: Vec<Matrix<F>>) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::zero());
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::NotChainMap(format!("{} terms need {} differentials", terms.len(), terms.len() - 1)));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.ncols() != terms[i].len() || d.nrows() != terms[i + 1].len() {
                return Err(Error::NotChainMap(format!("differential in degree {} has wrong shape", lo + i as i64)));
            }
            if !entries_legit(rt, d, &terms[i + 1], &terms[i]) {
                return Err(Error::NotChainMap(format!(
                    "differential in degree {} has an entry outside every Hom space",
                    lo + i as i64
                )));
            }
        }
        if terms.iter().flatten().any(|&v| v >= rt.n()) {
            return Err(Error::UnknownVertex("summand vertex out of range".into()));
        }
        for w in diffs.windows(2) {
            if !w[1].mul(f, &w[0]).is_zero() {
                return Err(Error::NotChainMap("d^2 != 0".into()));
            }
        }
        Ok(ProjComplex { lo, terms, diffs })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn is_zero_complex(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn term(&self, m: i64) -> &[usize] {
        if m < self.lo || m > self.hi() {
            return &[];
        }
        &self.terms[(m - self.lo) as usize]
    }

    pub fn rank(&self, m: i64) -> usize {
        self.term(m).len()
    }

    pub fn d(&self, m: i64) -> Matrix<F> {
        if m >= self.lo && m < self.hi() {
            self.diffs[(m - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.rank(m + 1), self.rank(m))
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (self.lo..=self.hi()).filter(|m| self.rank(*m) > 0)
    }

    /// Alternating count of summands per vertex: the class in `K_0` in the
    /// basis of projectives.
    pub fn k0_class(&self, n_vertices: usize) -> Vec<i64> {
        let mut out = vec![0i64; n_vertices];
        for m in self.lo..=self.hi() {
            let s = if m.rem_euclid(2) == 0 { 1 } else { -1 };
            for &v in self.term(m) {
                out[v] += s;
            }
        }
        out
    }

    /// `X[k]^m = X^{m+k}`, differential times `(-1)^k`.
    pub fn shift(&self, f: &F, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { f.one() } else { f.neg(&f.one()) };
        ProjComplex {
            lo: self.lo - k,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(f, &sign)).collect(),
        }
    }

    /// Apply a correspondence functor given as a vertex map `T -> R`
    /// (`None` off the middle tree). Returns the image together with, per
    /// degree, the original index of each surviving summand.
    pub fn push_forward(&self, vmap: &[Option<usize>]) -> (Self, Vec<Vec<usize>>) {
        let mut terms = Vec::new();
        let mut kept = Vec::new();
        for t in &self.terms {
            let k: Vec<usize> = (0..t.len()).filter(|&i| vmap[t[i]].is_some()).collect();
            terms.push(k.iter().map(|&i| vmap[t[i]].expect("kept")).collect());
            kept.push(k);
        }
        let diffs =
            self.diffs.iter().enumerate().map(|(i, d)| d.select_rows(&kept[i + 1]).select_columns(&kept[i])).collect();
        (ProjComplex { lo: self.lo, terms, diffs }, kept)
    }

    /// Direct sum with another complex over the same quiver.
    pub fn direct_sum(&self, other: &Self) -> Self {
        if self.is_zero_complex() {
            return other.clone();
        }
        if other.is_zero_complex() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let terms = (lo..=hi).map(|m| [self.term(m), other.term(m)].concat()).collect();
        let diffs = (lo..hi).map(|m| self.d(m).direct_sum(&other.d(m))).collect();
        ProjComplex { lo, terms, diffs }
    }

    pub fn to_spec(&self, f: &F, rt: &RootedTree) -> ProjComplexSpec {
        let t = rt.tree();
        let terms = self.terms.iter().map(|ts| ts.iter().map(|&v| t.name(v).to_string()).collect()).collect();
        let differentials = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut out = Vec::new();
                for c in 0..d.ncols() {
                    for (r, v) in d.column(c) {
                        out.push(DiffEntry {
                            from: c,
                            to: *r,
                            scalar: f.format(v),
                            path: Some([t.name(self.terms[i + 1][*r]).to_string(), t.name(self.terms[i][c]).to_string()]),
                        });
                    }
                }
                out
            })
            .collect();
        ProjComplexSpec { lo: self.lo, terms, differentials }
    }

    pub fn from_spec(f: &F, rt: &RootedTree, spec: &ProjComplexSpec) -> Result<Self> {
        let t = rt.tree();
        let terms: Vec<Vec<usize>> =
            spec.terms.iter().map(|ts| ts.iter().map(|s| t.index_of(s)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        if terms.is_empty() {
            return Ok(Self::zero());
        }
        if spec.differentials.len() + 1 != terms.len() {
            return Err(Error::Parse("number of differentials must be one less than number of terms".into()));
        }
        let mut diffs = Vec::new();
        for (i, es) in spec.differentials.iter().enumerate() {
            let (rows, cols) = (terms[i + 1].len(), terms[i].len());
            let mut entries = Vec::new();
            for e in es {
                if e.to >= rows || e.from >= cols {
                    return Err(Error::Parse(format!("entry ({}, {}) out of range", e.to, e.from)));
                }
                if let Some([a, b]) = &e.path {
                    if t.index_of(a)? != terms[i + 1][e.to] || t.index_of(b)? != terms[i][e.from] {
                        return Err(Error::Parse(format!("path |{a}><{b}| does not match the summands")));
                    }
                }
                entries.push((e.to, e.from, f.parse(&e.scalar)?));
            }
            diffs.push(Matrix::from_entries(f, rows, cols, entries));
        }
        Self::new(f, rt, spec.lo, terms, diffs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProjComplexSpec {
    pub lo: i64,
    pub terms: Vec<Vec<String>>,
    #[serde(default)]
    pub differentials: Vec<Vec<DiffEntry>>,
}

/// One nonzero entry `scalar * |to><from|` of a differential.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiffEntry {
    pub from: usize,
    pub to: usize,
    pub scalar: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<[String; 2]>,
}

impl<F: Field> ProjMap<F> {
    pub fn identity(f: &F, x: &ProjComplex<F>) -> Self {
        ProjMap { maps: x.degrees().map(|m| (m, Matrix::identity(f, x.rank(m)))).collect() }
    }

    pub fn at(&self, src: &ProjComplex<F>, tgt: &ProjComplex<F>, m: i64) -> Matrix<F> {
        self.maps.get(&m).cloned().unwrap_or_else(|| Matrix::zeros(tgt.rank(m), src.rank(m)))
    }

    pub fn check(&self, f: &F, rt: &RootedTree, src: &ProjComplex<F>, tgt: &ProjComplex<F>) -> Result<()> {
        let lo = src.lo.min(tgt.lo);
        let hi = src.hi().max(tgt.hi());
        for (m, a) in &self.maps {
            if a.ncols() != src.rank(*m) || a.nrows() != tgt.rank(*m) {
                return Err(Error::NotChainMap(format!("component in degree {m} has wrong shape")));
            }
            if !entries_legit(rt, a, tgt.term(*m), src.term(*m)) {
                return Err(Error::NotChainMap(format!("component in degree {m} is not a module map")));
            }
        }
        for m in lo..=hi {
            let l = tgt.d(m).mul(f, &self.at(src, tgt, m));
            let r = self.at(src, tgt, m + 1).mul(f, &src.d(m));
            if !l.equals(f, &r) {
                return Err(Error::NotChainMap(format!("does not commute with d in degree {m}")));
            }
        }
        Ok(())
    }
}

/// Mapping cone `C^m = A^{m+1} + B^m`, `d(a, b) = (-d a, phi a + d b)`.
pub fn cone<F: Field>(
    f: &F,
    rt: &RootedTree,
    phi: &ProjMap<F>,
    a: &ProjComplex<F>,
    b: &ProjComplex<F>,
) -> Result<ProjComplex<F>> {
    phi.check(f, rt, a, b)?;
    if a.is_zero_complex() && b.is_zero_complex() {
        return Ok(ProjComplex::zero());
    }
    let lo = (a.lo - 1).min(b.lo);
    let hi = (a.hi() - 1).max(b.hi());
    let terms: Vec<Vec<usize>> = (lo..=hi).map(|m| [a.term(m + 1), b.term(m)].concat()).collect();
    let mut diffs = Vec::new();
    for m in lo..hi {
        let top = a.d(m + 1).neg(f).hcat(&Matrix::zeros(a.rank(m + 2), b.rank(m)));
        let bottom = phi.at(a, b, m + 1).hcat(&b.d(m));
        diffs.push(top.vcat(&bottom));
    }
    ProjComplex::new(f, rt, lo, terms, diffs)
}

/// An object of `Filt_n`: a chain `F_0 -> F_1 -> ... -> F_n`.
#[derive(Clone, Debug)]
pub struct Filtration<F: Field> {
    pub objects: Vec<ProjComplex<F>>,
    pub maps: Vec<ProjMap<F>>,
}

/// `(F_0, Cone(F_0 -> F_1), ..., Cone(F_{n-1} -> F_n))` and the top piece `F_n`.
pub fn associated_graded<F: Field>(
    f: &F,
    rt: &RootedTree,
    filt: &Filtration<F>,
) -> Result<(Vec<ProjComplex<F>>, ProjComplex<F>)> {
    if filt.objects.is_empty() || filt.maps.len() + 1 != filt.objects.len() {
        return Err(Error::InvalidConfig("a filtration needs n+1 objects and n maps".into()));
    }
    let mut graded = vec![filt.objects[0].clone()];
    for (i, phi) in filt.maps.iter().enumerate() {
        graded.push(cone(f, rt, phi, &filt.objects[i], &filt.objects[i + 1])?);
    }
    Ok((graded, filt.objects.last().expect("nonempty").clone()))
}

/// Basis element of a Hom complex: the morphism `|y><x|` from summand `col`
/// of `X^i` to summand `row` of `Y^{i+n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomKey {
    pub i: i64,
    pub row: usize,
    pub col: usize,
}

/// Total Hom complex with named basis, degree `n` indexed by `keys[n - lo]`.
#[derive(Clone, Debug)]
pub struct KeyedHom<F: Field> {
    pub complex: Complex<F>,
    pub lo: i64,
    pub keys: Vec<Vec<HomKey>>,
}

impl<F: Field> KeyedHom<F> {
    pub fn keys_in(&self, n: i64) -> &[HomKey] {
        if n < self.lo || n >= self.lo + self.keys.len() as i64 {
            return &[];
        }
        &self.keys[(n - self.lo) as usize]
    }
}

/// `Hom^n(X, Y) = prod_i Hom(X^i, Y^{i+n})` with `D f = d_Y f - (-1)^n f d_X`.
///
/// `row_id`/`col_id` relabel summands (used to keep original indices after a
/// correspondence functor dropped some).
pub fn hom_complex_keyed<F: Field>(
    f: &F,
    rt: &RootedTree,
    x: &ProjComplex<F>,
    y: &ProjComplex<F>,
    x_ids: Option<&[Vec<usize>]>,
    y_ids: Option<&[Vec<usize>]>,
) -> KeyedHom<F> {
    if x.is_zero_complex() || y.is_zero_complex() {
        return KeyedHom { complex: Complex::zero(), lo: 0, keys: Vec::new() };
    }
    let nlo = y.lo - x.hi();
    let nhi = y.hi() - x.lo;
    let xid = |i: i64, c: usize| x_ids.map_or(c, |ids| ids[(i - x.lo) as usize][c]);
    let yid = |i: i64, r: usize| y_ids.map_or(r, |ids| ids[(i - y.lo) as usize][r]);
    // local (unrelabelled) keys per degree
    let mut local: Vec<Vec<(i64, usize, usize)>> = Vec::new();
    for n in nlo..=nhi {
        let mut v = Vec::new();
        for i in x.lo..=x.hi() {
            let (xs, ys) = (x.term(i), y.term(i + n));
            for (r, &yv) in ys.iter().enumerate() {
                for (c, &xv) in xs.iter().enumerate() {
                    if rt.geq(yv, xv) {
                        v.push((i, r, c));
                    }
                }
            }
        }
        local.push(v);
    }
    let mut diffs = Vec::new();
    for n in nlo..nhi {
        let src = &local[(n - nlo) as usize];
        let tgt = &local[(n + 1 - nlo) as usize];
        let index: HashMap<(i64, usize, usize), usize> = tgt.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let sign = if n.rem_euclid(2) == 0 { f.neg(&f.one()) } else { f.one() };
        let mut entries = Vec::new();
        for (col, &(i, r, c)) in src.iter().enumerate() {
            let dy = y.d(i + n);
            for (rr, v) in dy.column(r) {
                let k = index[&(i, *rr, c)];
                entries.push((k, col, v.clone()));
            }
            // (E d_X)[r, c'] = d_X[c, c'] for c' in X^{i-1}
            let dx = x.d(i - 1);
            for cc in 0..x.rank(i - 1) {
                let v = dx.get(f, c, cc);
                if !f.is_zero(&v) {
                    let k = index[&(i - 1, r, cc)];
                    entries.push((k, col, f.mul(&sign, &v)));
                }
            }
        }
        diffs.push(Matrix::from_entries(f, tgt.len(), src.len(), entries));
    }
    let dims = local.iter().map(|v| v.len()).collect();
    let complex = Complex::new(f, nlo, dims, diffs).expect("Hom complex squares to zero");
    let keys = local
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let n = nlo + k as i64;
            v.iter().map(|&(i, r, c)| HomKey { i, row: yid(i + n, r), col: xid(i, c) }).collect()
        })
        .collect();
    KeyedHom { lo: nlo, complex, keys }
}

pub fn hom_complex<F: Field>(f: &F, rt: &RootedTree, x: &ProjComplex<F>, y: &ProjComplex<F>) -> Complex<F> {
    hom_complex_keyed(f, rt, x, y, None, None).complex
}

/// The functor `c_p: Rep(T) -> Rep(R)` of a correspondence, as data on
/// vertices; the image quiver carries the induced root.
#[derive(Clone, Debug)]
pub struct CorrFunctor {
    pub source: RootedTree,
    pub target: RootedTree,
    pub corr: Correspondence,
    /// `T` vertex to `R` vertex, `None` off the middle tree.
    pub vertex_map: Vec<Option<usize>>,
}

impl CorrFunctor {
    pub fn new(rt: &RootedTree, p: &Correspondence) -> Self {
        let (target, real) = p.rooted_image(rt);
        CorrFunctor { source: rt.clone(), target, corr: *p, vertex_map: real.class_of }
    }

    /// `c_p(P_a)`.
    pub fn on_projective(&self, a: usize) -> Option<usize> {
        self.vertex_map[a]
    }

    /// Image of the basis morphism `|b><a|: P_a -> P_b` as `(q b, q a)`.
    pub fn on_hom(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        debug_assert!(self.source.geq(b, a));
        Some((self.vertex_map[b]?, self.vertex_map[a]?))
    }

    pub fn on_complex<F: Field>(&self, x: &ProjComplex<F>) -> ProjComplex<F> {
        self.push_forward(x).0
    }

    pub fn push_forward<F: Field>(&self, x: &ProjComplex<F>) -> (ProjComplex<F>, Vec<Vec<usize>>) {
        x.push_forward(&self.vertex_map)
    }

    /// `c_q . c_p` as a vertex map, for `q` a functor out of `self.target`.
    pub fn then_vertex_map(&self, q: &CorrFunctor) -> Vec<Option<usize>> {
        self.vertex_map.iter().map(|v| v.and_then(|v| q.vertex_map[v])).collect()
    }

    /// The 0/1 matrix `HH_0(k[T]) -> HH_0(k[R])` in idempotent bases.
    pub fn hh_map<F: Field>(&self, f: &F) -> Matrix<F> {
        let entries: Vec<_> = self.vertex_map.iter().enumerate().filter_map(|(a, v)| v.map(|r| (r, a, f.one()))).collect();
        Matrix::from_entries(f, self.target.n(), self.source.n(), entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::treecat::Tree;

    #[test]
    fn cone_of_identity_is_acyclic() {
        let f = Rationals;
        let rt = RootedTree::with_root_name(Tree::path(2), "b").unwrap();
        let a = ProjComplex::new(&f, &rt, 0, vec![vec![1], vec![0]], vec![Matrix::from_i64(&f, &[vec![1]])]).unwrap();
        let c = cone(&f, &rt, &ProjMap::identity(&f, &a), &a, &a).unwrap();
        for v in 0..2 {
            let h = hom_complex(&f, &rt, &c, &ProjComplex::projective(v, 0));
            assert!(h.cohomology_dims(&f).values().all(|&d| d == 0));
            let h = hom_complex(&f, &rt, &ProjComplex::projective(v, 0), &c);
            assert!(h.cohomology_dims(&f).values().all(|&d| d == 0));
        }
    }

    #[test]
    fn illegal_entry_rejected() {
        let f = Rationals;
        let rt = RootedTree::with_root_name(Tree::path(2), "b").unwrap();
        // P_a -> P_b needs b >= a, false with root b
        let r = ProjComplex::new(&f, &rt, 0, vec![vec![0], vec![1]], vec![Matrix::from_i64(&f, &[vec![1]])]);
        assert!(r.is_err());
    }
}
