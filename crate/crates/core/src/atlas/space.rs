use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local model of a chart: `Star_k x R^m`, or smooth `R^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartModel {
    /// Root `0` is the base disc, leaves `1..=k` the sheets.
    Star { leaves: usize, trivial_dim: usize },
    Smooth { dim: usize },
}

impl ChartModel {
    /// Disc labels, `k + 1` for `Star_k` and one for a smooth chart.
    pub fn n_discs(&self) -> usize {
        match self {
            ChartModel::Star { leaves, .. } => leaves + 1,
            ChartModel::Smooth { .. } => 1,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ChartModel::Star { trivial_dim, .. } => 1 + trivial_dim,
            ChartModel::Smooth { dim } => *dim,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub name: String,
    pub model: ChartModel,
    /// Sign of the local orientation relative to the reference one.
    pub sign: i64,
}

/// One connected component of `U_a cap U_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overlap {
    pub a: usize,
    pub b: usize,
    /// Disc labels of `a` seen in `b`, on the discs meeting the overlap;
    /// `None` if the disc of `a` does not reach it.
    pub discs: Vec<Option<usize>>,
    /// Whether the transition preserves the base orientation.
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedSpace {
    pub dim: usize,
    pub charts: Vec<Chart>,
    pub overlaps: Vec<Overlap>,
    /// Triples of overlaps `(ab, bc, ac)` over a common triple intersection.
    #[serde(default)]
    pub triples: Vec<[usize; 3]>,
    pub boundary: Vec<String>,
}

impl GluedSpace {
    pub fn validate(&self) -> Result<()> {
        for c in &self.charts {
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::InvalidConfig(format!("chart {}: sign must be +1 or -1", c.name)));
            }
            if c.model.dim() > 2 || c.model.dim() > self.dim {
                return Err(Error::InvalidConfig(format!("chart {}: dimension {} too large", c.name, c.model.dim())));
            }
        }
        for (i, o) in self.overlaps.iter().enumerate() {
            if o.a >= self.charts.len() || o.b >= self.charts.len() || o.a == o.b {
                return Err(Error::InvalidConfig(format!("overlap {i}: bad chart indices")));
            }
            if o.sign != 1 && o.sign != -1 {
                return Err(Error::InvalidConfig(format!("overlap {i}: sign must be +1 or -1")));
            }
            let (na, nb) = (self.charts[o.a].model.n_discs(), self.charts[o.b].model.n_discs());
            if o.discs.len() != na || o.discs.iter().flatten().any(|&d| d >= nb) {
                return Err(Error::InvalidConfig(format!("overlap {i}: disc map has the wrong shape")));
            }
            let mut seen = vec![false; nb];
            for &d in o.discs.iter().flatten() {
                if std::mem::replace(&mut seen[d], true) {
                    return Err(Error::InvalidConfig(format!("overlap {i}: disc map is not injective")));
                }
            }
            if o.discs[0].is_some_and(|d| d != 0) {
                return Err(Error::InvalidConfig(format!("overlap {i}: base disc must go to the base disc")));
            }
        }
        for (t, &[ab, bc, ac]) in self.triples.iter().enumerate() {
            let get = |k: usize| {
                self.overlaps.get(k).ok_or_else(|| Error::InvalidConfig(format!("triple {t}: no overlap {k}")))
            };
            let (ab, bc, ac) = (get(ab)?, get(bc)?, get(ac)?);
            if ab.b != bc.a || ab.a != ac.a || bc.b != ac.b {
                return Err(Error::InvalidConfig(format!("triple {t}: overlaps do not chain")));
            }
            let composed: Vec<Option<usize>> = ab.discs.iter().map(|d| d.and_then(|d| bc.discs[d])).collect();
            let agree = composed.iter().zip(&ac.discs).all(|(x, y)| x.is_none() || y.is_none() || x == y);
            if !agree || ab.sign * bc.sign != ac.sign {
                return Err(Error::Inconsistent(format!("triple {t}: transitions do not compose")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sp: GluedSpace = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        sp.validate()?;
        Ok(sp)
    }
}

fn chart(name: String, model: ChartModel) -> Chart {
    Chart { name, model, sign: 1 }
}

/// `R` with `n` spokes at contact infinity: intervals `I_0 .. I_n` of the
/// line alternating with `Star_1` charts at the points `p_1 .. p_n`.
pub fn build_comb(n: usize) -> GluedSpace {
    let mut charts = vec![chart("I0".into(), ChartModel::Smooth { dim: 1 })];
    let mut overlaps = Vec::new();
    for i in 1..=n {
        charts.push(chart(format!("p{i}"), ChartModel::Star { leaves: 1, trivial_dim: 0 }));
        charts.push(chart(format!("I{i}"), ChartModel::Smooth { dim: 1 }));
        let (prev, star, next) = (charts.len() - 3, charts.len() - 2, charts.len() - 1);
        overlaps.push(Overlap { a: prev, b: star, discs: vec![Some(0)], sign: 1 });
        overlaps.push(Overlap { a: star, b: next, discs: vec![Some(0), None], sign: 1 });
    }
    let mut boundary = vec!["-inf".to_string(), "+inf".to_string()];
    boundary.extend((1..=n).map(|i| format!("spoke{i}")));
    GluedSpace { dim: 1, charts, overlaps, triples: Vec::new(), boundary }
}

/// A spoke on the circle: position in `[0, 1)` and coorientation sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spoke {
    pub position: f64,
    pub coorientation: i64,
}

/// Circle with `Star_1` charts at the spokes and arcs between them. With no
/// spokes the circle is covered by two arcs meeting in two intervals.
pub fn build_circle(spokes: &[Spoke]) -> Result<GluedSpace> {
    let mut sorted: Vec<Spoke> = spokes.to_vec();
    for s in &sorted {
        if !(0.0..1.0).contains(&s.position) || s.coorientation.abs() != 1 {
            return Err(Error::InvalidConfig(format!("bad spoke {s:?}")));
        }
    }
    sorted.sort_by(|x, y| x.position.total_cmp(&y.position));
    if sorted.windows(2).any(|w| w[0].position == w[1].position) {
        return Err(Error::InvalidConfig("coincident spoke positions".into()));
    }
    let arc = |i: usize| chart(format!("arc{i}"), ChartModel::Smooth { dim: 1 });
    let (charts, overlaps) = if sorted.is_empty() {
        let o = |a, b| Overlap { a, b, discs: vec![Some(0)], sign: 1 };
        (vec![arc(0), arc(1)], vec![o(0, 1), o(1, 0)])
    } else {
        let n = sorted.len();
        let mut charts = Vec::new();
        for (i, s) in sorted.iter().enumerate() {
            charts.push(arc(i));
            let name = format!("spoke{i}{}", if s.coorientation > 0 { "+" } else { "-" });
            charts.push(chart(name, ChartModel::Star { leaves: 1, trivial_dim: 0 }));
        }
        let mut overlaps = Vec::new();
        for i in 0..n {
            let (a, s, next) = (2 * i, 2 * i + 1, (2 * i + 2) % (2 * n));
            overlaps.push(Overlap { a, b: s, discs: vec![Some(0)], sign: 1 });
            overlaps.push(Overlap { a: s, b: next, discs: vec![Some(0), None], sign: 1 });
        }
        (charts, overlaps)
    };
    let boundary = sorted.iter().enumerate().map(|(i, _)| format!("spoke{i}")).collect();
    Ok(GluedSpace { dim: 1, charts, overlaps, triples: Vec::new(), boundary })
}

/// The orientation cocycle on the chart graph.
#[derive(Clone, Debug, Serialize)]
pub struct W1 {
    /// `c(o) = sign_a * sign(o) * sign_b` per overlap.
    pub cocycle: Vec<i64>,
    /// Product of the cocycle around each fundamental cycle, keyed by the
    /// overlap closing it.
    pub cycle_products: BTreeMap<usize, i64>,
    pub trivial: bool,
}

/// Cocycle and cycle products, with the spanning forest grown from `start`.
pub fn w1_from(space: &GluedSpace, start: usize) -> Result<W1> {
    space.validate()?;
    let n = space.charts.len();
    let cocycle: Vec<i64> =
        space.overlaps.iter().map(|o| space.charts[o.a].sign * o.sign * space.charts[o.b].sign).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, o) in space.overlaps.iter().enumerate() {
        adj[o.a].push((o.b, k));
        adj[o.b].push((o.a, k));
    }
    // potential[v] = product of the cocycle along the tree path to the root
    let mut potential: Vec<Option<i64>> = vec![None; n];
    let mut tree_edge = vec![false; space.overlaps.len()];
    let order = (start..n).chain(0..start);
    for r in order {
        if potential[r].is_some() {
            continue;
        }
        potential[r] = Some(1);
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            for &(w, k) in &adj[v] {
                if potential[w].is_none() {
                    potential[w] = Some(potential[v].expect("visited") * cocycle[k]);
                    tree_edge[k] = true;
                    stack.push(w);
                }
            }
        }
    }
    let cycle_products: BTreeMap<usize, i64> = (0..space.overlaps.len())
        .filter(|&k| !tree_edge[k])
        .map(|k| {
            let o = &space.overlaps[k];
            (k, potential[o.a].expect("visited") * cocycle[k] * potential[o.b].expect("visited"))
        })
        .collect();
    let trivial = cycle_products.values().all(|&x| x == 1);
    Ok(W1 { cocycle, cycle_products, trivial })
}

pub fn w1(space: &GluedSpace) -> Result<W1> {
    w1_from(space, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_and_circle() {
        let comb = build_comb(3);
        comb.validate().unwrap();
        assert_eq!(comb.charts.len(), 7);
        assert!(w1(&comb).unwrap().trivial);
        let sp = [Spoke { position: 0.1, coorientation: 1 }, Spoke { position: 0.6, coorientation: -1 }];
        let mut c = build_circle(&sp).unwrap();
        let w = w1(&c).unwrap();
        assert!(w.trivial);
        assert_eq!(w.cycle_products.len(), 1);
        c.overlaps[1].sign = -1;
        assert!(!w1(&c).unwrap().trivial);
        for s in 0..c.charts.len() {
            assert!(!w1_from(&c, s).unwrap().trivial);
        }
        let dup = [Spoke { position: 0.1, coorientation: 1 }, Spoke { position: 0.1, coorientation: 1 }];
        assert!(build_circle(&dup).is_err());
        let empty = build_circle(&[]).unwrap();
        assert!(w1(&empty).unwrap().trivial);
        let back = GluedSpace::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn triple_overlaps_must_compose() {
        let mut sp = GluedSpace {
            dim: 1,
            charts: (0..3).map(|i| chart(format!("c{i}"), ChartModel::Smooth { dim: 1 })).collect(),
            overlaps: vec![
                Overlap { a: 0, b: 1, discs: vec![Some(0)], sign: 1 },
                Overlap { a: 1, b: 2, discs: vec![Some(0)], sign: -1 },
                Overlap { a: 0, b: 2, discs: vec![Some(0)], sign: -1 },
            ],
            triples: vec![[0, 1, 2]],
            boundary: Vec::new(),
        };
        sp.validate().unwrap();
        assert!(w1(&sp).unwrap().trivial);
        sp.overlaps[2].sign = 1;
        assert!(sp.validate().is_err());
    }
}
