use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::arbspace::{CellSet, Nerve, StratumSubset};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{ChainMap, Complex};
use crate::treecat::Arb;

/// A sheaf constructible along the coarse strata, as a functor on (a subset
/// of) `Arb_T`: a stalk complex per stratum and a chain map for every
/// comparable pair `p < p'`.
#[derive(Clone, Debug)]
pub struct CoarseSheaf<F: Field> {
    arb: Arc<Arb>,
    domain: StratumSubset,
    stalks: BTreeMap<usize, Complex<F>>,
    maps: HashMap<(usize, usize), ChainMap<F>>,
}

impl<F: Field> CoarseSheaf<F> {
    /// Build from a stalk function and a generization function, evaluated on
    /// every comparable pair of the domain.
    pub fn from_fn(
        arb: Arc<Arb>,
        domain: StratumSubset,
        mut stalk: impl FnMut(usize) -> Complex<F>,
        mut map: impl FnMut(usize, usize, &Complex<F>, &Complex<F>) -> ChainMap<F>,
    ) -> Self {
        let stalks: BTreeMap<usize, Complex<F>> = domain.iter().map(|p| (p, stalk(p))).collect();
        let mut maps = HashMap::new();
        for p in domain.iter() {
            for &q in arb.above(p) {
                if domain.contains(q) {
                    maps.insert((p, q), map(p, q, &stalks[&p], &stalks[&q]));
                }
            }
        }
        CoarseSheaf { arb, domain, stalks, maps }
    }

    pub fn arb(&self) -> &Arb {
        &self.arb
    }

    pub fn arb_arc(&self) -> Arc<Arb> {
        self.arb.clone()
    }

    pub fn domain(&self) -> &StratumSubset {
        &self.domain
    }

    pub fn stalk(&self, p: usize) -> &Complex<F> {
        &self.stalks[&p]
    }

    /// Generization `F(p) -> F(q)` for `p <= q`.
    pub fn map(&self, f: &F, p: usize, q: usize) -> ChainMap<F> {
        if p == q {
            return ChainMap::identity(f, &self.stalks[&p]);
        }
        self.maps.get(&(p, q)).cloned().unwrap_or_else(ChainMap::zero)
    }

    pub fn map_ref(&self, p: usize, q: usize) -> Option<&ChainMap<F>> {
        self.maps.get(&(p, q))
    }

    /// Every generization is a chain map and `F(q <= r) F(p <= q) = F(p <= r)`.
    pub fn check(&self, f: &F) -> Result<()> {
        for (&(p, q), m) in &self.maps {
            m.check(f, &self.stalks[&p], &self.stalks[&q])
                .map_err(|e| Error::Inconsistent(format!("generization {p} -> {q}: {e}")))?;
        }
        for (&(p, q), m1) in &self.maps {
            for &r in self.arb.above(q) {
                if let Some(m2) = self.maps.get(&(q, r)) {
                    let direct = &self.maps[&(p, r)];
                    if !m1.then(f, m2).equals(f, direct, &self.stalks[&p], &self.stalks[&r]) {
                        return Err(Error::Inconsistent(format!("square {p} -> {q} -> {r} does not commute")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Stalkwise cohomology dimensions.
    pub fn stalk_dims(&self, f: &F) -> BTreeMap<usize, BTreeMap<i64, usize>> {
        self.stalks.iter().map(|(&p, c)| (p, c.cohomology_dims(f))).collect()
    }

    /// Shift every stalk: `F[k]`.
    pub fn shift(&self, f: &F, k: i64) -> Self {
        let stalks = self.stalks.iter().map(|(&p, c)| (p, c.shift(f, k))).collect();
        let maps = self.maps.iter().map(|(&e, m)| (e, m.shift(k))).collect();
        CoarseSheaf { arb: self.arb.clone(), domain: self.domain.clone(), stalks, maps }
    }

    /// Restriction to a smaller set of strata.
    pub fn restrict(&self, u: &StratumSubset) -> Self {
        let domain = self.domain.intersect(u);
        let stalks = self.stalks.iter().filter(|(p, _)| domain.contains(**p)).map(|(&p, c)| (p, c.clone())).collect();
        let maps = self
            .maps
            .iter()
            .filter(|((p, q), _)| domain.contains(*p) && domain.contains(*q))
            .map(|(&e, m)| (e, m.clone()))
            .collect();
        CoarseSheaf { arb: self.arb.clone(), domain, stalks, maps }
    }

    /// Pull back to the simplices of the nerve whose labels lie in the domain,
    /// intersected with `cells`.
    pub fn pullback(&self, f: &F, nerve: &Arc<Nerve>, cells: &CellSet) -> CellSheaf<F> {
        let domain: CellSet = cells.iter().copied().filter(|&s| self.domain.contains(nerve.label(s))).collect();
        CellSheaf::from_fn(
            nerve.clone(),
            domain,
            |s| self.stalks[&nerve.label(s)].clone(),
            |s, t, _, _| self.map(f, nerve.label(s), nerve.label(t)),
        )
    }
}

/// A sheaf on the simplices of the nerve: stalk per simplex, generization
/// chain maps for every facet relation `s < t`.
#[derive(Clone, Debug)]
pub struct CellSheaf<F: Field> {
    nerve: Arc<Nerve>,
    domain: CellSet,
    stalks: HashMap<usize, Complex<F>>,
    covers: HashMap<(usize, usize), ChainMap<F>>,
}

impl<F: Field> CellSheaf<F> {
    pub fn from_fn(
        nerve: Arc<Nerve>,
        domain: CellSet,
        mut stalk: impl FnMut(usize) -> Complex<F>,
        mut map: impl FnMut(usize, usize, &Complex<F>, &Complex<F>) -> ChainMap<F>,
    ) -> Self {
        let stalks: HashMap<usize, Complex<F>> = domain.iter().map(|&s| (s, stalk(s))).collect();
        let mut covers = HashMap::new();
        for &s in &domain {
            for &(t, _) in nerve.cofaces(s) {
                if domain.contains(&t) {
                    covers.insert((s, t), map(s, t, &stalks[&s], &stalks[&t]));
                }
            }
        }
        CellSheaf { nerve, domain, stalks, covers }
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn domain(&self) -> &CellSet {
        &self.domain
    }

    pub fn stalk(&self, s: usize) -> &Complex<F> {
        &self.stalks[&s]
    }

    /// Generization along a facet relation `s < t`.
    pub fn cover(&self, s: usize, t: usize) -> &ChainMap<F> {
        &self.covers[&(s, t)]
    }

    /// Generization `F(s) -> F(t)` for any face `s` of `t`, composed along
    /// a chain of facets through the domain.
    pub fn map(&self, f: &F, s: usize, t: usize) -> ChainMap<F> {
        if s == t {
            return ChainMap::identity(f, &self.stalks[&s]);
        }
        let target = self.nerve.chain(t);
        let mut cur = s;
        let mut acc: Option<ChainMap<F>> = None;
        while cur != t {
            let chain = self.nerve.chain(cur);
            let &(next, _) = self
                .nerve
                .cofaces(cur)
                .iter()
                .find(|(c, _)| {
                    self.domain.contains(c) && self.nerve.chain(*c).iter().all(|v| target.contains(v))
                })
                .unwrap_or_else(|| panic!("no facet path from {chain:?} to {target:?} in the domain"));
            let step = &self.covers[&(cur, next)];
            acc = Some(match acc {
                None => step.clone(),
                Some(a) => a.then(f, step),
            });
            cur = next;
        }
        acc.expect("nonempty path")
    }

    /// Generizations are chain maps and the two routes around every
    /// codimension-two diamond agree.
    pub fn check(&self, f: &F) -> Result<()> {
        for (&(s, t), m) in &self.covers {
            m.check(f, &self.stalks[&s], &self.stalks[&t])
                .map_err(|e| Error::Inconsistent(format!("generization {s} -> {t}: {e}")))?;
        }
        for &s in &self.domain {
            let ups: Vec<usize> =
                self.nerve.cofaces(s).iter().map(|e| e.0).filter(|t| self.domain.contains(t)).collect();
            let mut via: HashMap<usize, ChainMap<F>> = HashMap::new();
            for &t in &ups {
                for &(u, _) in self.nerve.cofaces(t) {
                    if !self.domain.contains(&u) {
                        continue;
                    }
                    let route = self.covers[&(s, t)].then(f, &self.covers[&(t, u)]);
                    match via.get(&u) {
                        None => {
                            via.insert(u, route);
                        }
                        Some(other) => {
                            if !other.equals(f, &route, &self.stalks[&s], &self.stalks[&u]) {
                                return Err(Error::Inconsistent(format!("diamond {s} -> {u} does not commute")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn stalk_dims(&self, f: &F) -> BTreeMap<usize, BTreeMap<i64, usize>> {
        self.stalks.iter().map(|(&s, c)| (s, c.cohomology_dims(f))).collect()
    }

    pub fn shift(&self, f: &F, k: i64) -> Self {
        CellSheaf {
            nerve: self.nerve.clone(),
            domain: self.domain.clone(),
            stalks: self.stalks.iter().map(|(&s, c)| (s, c.shift(f, k))).collect(),
            covers: self.covers.iter().map(|(&e, m)| (e, m.shift(k))).collect(),
        }
    }
}
