//! Geometries stabilized by a dessin: points are edges, and a line is a
//! maximal set of points whose pairs all share one two-point stabilizer.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;

use super::IncidenceStructure;
use crate::dessin::Dessin;
use crate::perm::{StabilizerClass, DEFAULT_KEY_BOUND};

/// A two-point stabilizer, keyed by its fixed points. `G_pq` is the
/// pointwise stabilizer of its own fixed-point set, so two of them are
/// equal iff their fixed-point sets are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairStabilizer {
    pub order: BigUint,
    pub fixed: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct StabilizerGeometry {
    pub class: StabilizerClass,
    pub structure: IncidenceStructure,
    /// Distinct two-point stabilizers feeding this geometry.
    pub keys: Vec<PairStabilizer>,
    /// Index into `keys` for every unordered pair `(p, q)`, `p < q`, that
    /// lies on a line.
    pub pair_key: HashMap<(usize, usize), usize>,
}

impl StabilizerGeometry {
    /// Every pair on a line carries the key shared by the whole line.
    pub fn lines_share_keys(&self) -> bool {
        self.structure.lines().iter().all(|l| {
            let first = self.pair_key.get(&(l[0], l[1]));
            first.is_some()
                && l.iter().enumerate().all(|(i, &p)| {
                    l[i + 1..].iter().all(|&q| self.pair_key.get(&(p, q)) == first)
                })
        })
    }
}

/// One geometry per stabilizer order, in increasing order.
pub fn extract_geometries(d: &Dessin) -> Vec<StabilizerGeometry> {
    let n = d.degree();
    let group = d.group();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).collect();
    let keyed: Vec<((usize, usize), PairStabilizer)> = pairs
        .into_par_iter()
        .map(|(p, q)| {
            let stab = group.two_point_stabilizer(p, q).expect("distinct points in range");
            let fixed = (0..n)
                .filter(|&x| stab.generators().iter().all(|g| g.apply(x) == x))
                .collect();
            ((p, q), PairStabilizer { order: stab.order(), fixed })
        })
        .collect();

    let mut by_key: BTreeMap<PairStabilizer, Vec<(usize, usize)>> = BTreeMap::new();
    for (pair, key) in keyed {
        by_key.entry(key).or_default().push(pair);
    }

    // Classes are labelled from one representative stabilizer per order.
    let mut by_order: BTreeMap<BigUint, (StabilizerClass, Vec<PairStabilizer>, Vec<(Vec<usize>, usize)>)> = BTreeMap::new();
    for (key, pairs) in by_key {
        let entry = by_order.entry(key.order.clone()).or_insert_with(|| {
            let (p, q) = pairs[0];
            let class = group
                .two_point_stabilizer(p, q)
                .expect("distinct points in range")
                .class_label(DEFAULT_KEY_BOUND);
            (class, Vec::new(), Vec::new())
        });
        let k = entry.1.len();
        entry.1.push(key);
        for clique in maximal_cliques(n, &pairs) {
            entry.2.push((clique, k));
        }
    }

    by_order
        .into_values()
        .map(|(class, keys, lines)| {
            let mut pair_key = HashMap::new();
            for (l, k) in &lines {
                for (i, &p) in l.iter().enumerate() {
                    for &q in &l[i + 1..] {
                        pair_key.insert((p, q), *k);
                    }
                }
            }
            let name = format!("stabilizer {}", class.name());
            let structure = IncidenceStructure::new(n, lines.into_iter().map(|(l, _)| l).collect(), Some(name))
                .expect("cliques are distinct point sets");
            StabilizerGeometry {
                class,
                structure,
                keys,
                pair_key,
            }
        })
        .collect()
}

/// Maximal cliques (size ≥ 2) of the graph on `0..n` with the given edges,
/// each sorted; Bron–Kerbosch with pivoting.
fn maximal_cliques(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(p, q) in edges {
        adj[p].push(q);
        adj[q].push(p);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).collect();
    let mut out = Vec::new();
    bron_kerbosch(&adj, &mut Vec::new(), vertices, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort_unstable();
    out
}

fn bron_kerbosch(adj: &[Vec<usize>], r: &mut Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() && r.len() >= 2 {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|v| adj[u].binary_search(v).is_ok()).count())
        .expect("nonempty");
    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|v| adj[pivot].binary_search(v).is_err())
        .collect();
    for v in candidates {
        let nv = &adj[v];
        r.push(v);
        bron_kerbosch(
            adj,
            r,
            p.iter().copied().filter(|u| nv.binary_search(u).is_ok()).collect(),
            x.iter().copied().filter(|u| nv.binary_search(u).is_ok()).collect(),
            out,
        );
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}
