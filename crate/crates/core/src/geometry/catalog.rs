//! Named incidence structures with fixed point numbering.
//!
//! Numbering (0-based):
//! - `grid(3,3)`: point `3r + c`; rows then columns.
//! - `PG(n,2)`: point `v − 1` for each nonzero vector `v` of GF(2)^(n+1)
//!   read as a binary integer; lines `{u, v, u ⊕ v}`.
//! - `GQ(2,2)`: the 15 pairs of {1..6} in lexicographic order; lines are
//!   the synthemes.
//! - `GQ(2,4)`: singular vectors of `x0x1 + x2x3 + x4² + x4x5 + x5²` in
//!   increasing integer order (bit `i` is `x_i`).
//! - `GH(1,2)`, `GO(1,2)`: incidence graphs of the Fano plane and of
//!   `GQ(2,2)`; points first, then lines. `GH(2,1)`, `GO(2,1)` are their
//!   duals.
//! - `GH(2,2)` and `dual GH(2,2)`: stored geometries extracted from the
//!   stored index-63 dessins (see [`stored_dessin`]); points are the
//!   dessin's edges.
//! - Graphs have their edges as 2-point lines.

use super::IncidenceStructure;
use crate::dessin::Dessin;
use crate::error::{Error, Result};

const NAMES: &[&str] = &[
    "grid(3,3)",
    "GQ(2,1)",
    "triangle",
    "PG(1,2)",
    "Fano",
    "PG(2,2)",
    "PG(3,2)",
    "PG(4,2)",
    "GQ(2,2)",
    "doily",
    "GQ(2,4)",
    "GH(1,2)",
    "GH(2,1)",
    "GO(1,2)",
    "GO(2,1)",
    "GH(2,2)",
    "dual GH(2,2)",
    "K(3,3)",
    "K(4,4)",
    "K(5,5)",
    "K(3,3,3)",
    "Petersen",
    "Desargues",
    "Pappus",
    "Hesse",
    "pentagram",
    "octahedron",
];

pub fn catalog_names() -> &'static [&'static str] {
    NAMES
}

/// Builds a catalog structure by (case-insensitive, whitespace-free) name.
pub fn build(name: &str) -> Result<IncidenceStructure> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let s = match key.as_str() {
        "grid(3,3)" | "grid" | "gq(2,1)" => grid(),
        "triangle" | "pg(1,2)" => projective(1),
        "fano" | "pg(2,2)" => projective(2),
        "pg(3,2)" => projective(3),
        "pg(4,2)" => projective(4),
        "gq(2,2)" | "doily" => doily(),
        "gq(2,4)" => elliptic_quadric(),
        "gh(1,2)" => incidence_graph(&projective(2)?),
        "gh(2,1)" => incidence_graph(&projective(2)?)?.dual(),
        "go(1,2)" => incidence_graph(&doily()?),
        "go(2,1)" => incidence_graph(&doily()?)?.dual(),
        "gh(2,2)" => stored(GH22),
        "dualgh(2,2)" | "gh(2,2)dual" => stored(GH22_DUAL),
        "k(3,3)" => multipartite(&[3, 3]),
        "k(4,4)" => multipartite(&[4, 4]),
        "k(5,5)" => multipartite(&[5, 5]),
        "k(3,3,3)" => multipartite(&[3, 3, 3]),
        "petersen" => petersen(),
        "desargues" => desargues(),
        "pappus" => affine_plane_3(false),
        "hesse" => affine_plane_3(true),
        "pentagram" => pentagram(),
        "octahedron" => octahedron(),
        _ => return Err(Error::UnknownGeometry(name.to_string())),
    }?;
    Ok(s.with_name(name.trim()))
}

const GH22: &str = include_str!("../../data/gh22.json");
const GH22_DUAL: &str = include_str!("../../data/gh22_dual.json");

const GH22_DESSIN: &str = include_str!("../../data/gh22_dessin.json");
const GH22_DUAL_DESSIN: &str = include_str!("../../data/gh22_dual_dessin.json");

fn stored(text: &str) -> Result<IncidenceStructure> {
    IncidenceStructure::from_json(text)
}

/// The dessin a stored catalog geometry was extracted from, if any.
pub fn stored_dessin(name: &str) -> Result<Option<Dessin>> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let text = match key.as_str() {
        "gh(2,2)" => GH22_DESSIN,
        "dualgh(2,2)" | "gh(2,2)dual" => GH22_DUAL_DESSIN,
        _ => return Ok(None),
    };
    Ok(Some(Dessin::from_json(text)?.0))
}

fn grid() -> Result<IncidenceStructure> {
    let mut lines = Vec::new();
    for r in 0..3 {
        lines.push((0..3).map(|c| 3 * r + c).collect());
    }
    for c in 0..3 {
        lines.push((0..3).map(|r| 3 * r + c).collect());
    }
    IncidenceStructure::new(9, lines, None)
}

fn projective(n: u32) -> Result<IncidenceStructure> {
    let top = 1usize << (n + 1);
    let mut lines = Vec::new();
    for u in 1..top {
        for v in (u + 1)..top {
            let w = u ^ v;
            if w > v {
                lines.push(vec![u - 1, v - 1, w - 1]);
            }
        }
    }
    IncidenceStructure::new(top - 1, lines, None)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect()
}

fn doily() -> Result<IncidenceStructure> {
    let duads = pairs(6);
    let index = |d: (usize, usize)| duads.iter().position(|&e| e == d).expect("duad");
    let mut lines = Vec::new();
    for (i, &a) in duads.iter().enumerate() {
        for (j, &b) in duads.iter().enumerate().skip(i + 1) {
            for &c in &duads[j + 1..] {
                let mut all = [a.0, a.1, b.0, b.1, c.0, c.1];
                all.sort_unstable();
                if all == [0, 1, 2, 3, 4, 5] {
                    lines.push(vec![i, j, index(c)]);
                }
            }
        }
    }
    IncidenceStructure::new(15, lines, None)
}

fn elliptic_quadric() -> Result<IncidenceStructure> {
    let bit = |v: usize, i: usize| (v >> i) & 1;
    let q = |v: usize| (bit(v, 0) * bit(v, 1) + bit(v, 2) * bit(v, 3) + bit(v, 4) + bit(v, 4) * bit(v, 5) + bit(v, 5)) % 2;
    let singular: Vec<usize> = (1..64).filter(|&v| q(v) == 0).collect();
    let index = |v: usize| singular.iter().position(|&u| u == v);
    let mut lines = Vec::new();
    for (i, &u) in singular.iter().enumerate() {
        for (j, &v) in singular.iter().enumerate().skip(i + 1) {
            if let Some(k) = index(u ^ v) {
                if k > j {
                    lines.push(vec![i, j, k]);
                }
            }
        }
    }
    IncidenceStructure::new(singular.len(), lines, None)
}

/// Points of `s`, then its lines; each flag is a 2-point line.
fn incidence_graph(s: &IncidenceStructure) -> Result<IncidenceStructure> {
    let n = s.points();
    let lines = s
        .lines()
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().map(move |&p| vec![p, n + i]))
        .collect();
    IncidenceStructure::new(n + s.line_count(), lines, None)
}

fn multipartite(parts: &[usize]) -> Result<IncidenceStructure> {
    let mut start = Vec::new();
    let mut n = 0;
    for &k in parts {
        start.push(n);
        n += k;
    }
    let mut lines = Vec::new();
    for (i, &ki) in parts.iter().enumerate() {
        for (j, &kj) in parts.iter().enumerate().skip(i + 1) {
            for p in 0..ki {
                for q in 0..kj {
                    lines.push(vec![start[i] + p, start[j] + q]);
                }
            }
        }
    }
    IncidenceStructure::new(n, lines, None)
}

/// Points are the pairs of a 5-set; edges join disjoint pairs.
fn petersen() -> Result<IncidenceStructure> {
    let ps = pairs(5);
    let mut lines = Vec::new();
    for (i, a) in ps.iter().enumerate() {
        for (j, b) in ps.iter().enumerate().skip(i + 1) {
            if a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 {
                lines.push(vec![i, j]);
            }
        }
    }
    IncidenceStructure::new(10, lines, None)
}

/// Points are the pairs of a 5-set; each triple is the line of its pairs.
fn desargues() -> Result<IncidenceStructure> {
    let ps = pairs(5);
    let index = |a: usize, b: usize| ps.iter().position(|&e| e == (a, b)).expect("pair");
    let mut lines = Vec::new();
    for a in 0..5 {
        for b in (a + 1)..5 {
            for c in (b + 1)..5 {
                lines.push(vec![index(a, b), index(a, c), index(b, c)]);
            }
        }
    }
    IncidenceStructure::new(10, lines, None)
}

/// AG(2,3) on points `3x + y`; Pappus drops the vertical parallel class.
fn affine_plane_3(hesse: bool) -> Result<IncidenceStructure> {
    let mut lines = Vec::new();
    for m in 0..3 {
        for c in 0..3 {
            lines.push((0..3).map(|x| 3 * x + (m * x + c) % 3).collect());
        }
    }
    if hesse {
        for x in 0..3 {
            lines.push((0..3).map(|y| 3 * x + y).collect());
        }
    }
    IncidenceStructure::new(9, lines, None)
}

/// Five lines in general position; points are their pairwise meets.
fn pentagram() -> Result<IncidenceStructure> {
    let ps = pairs(5);
    let lines = (0..5)
        .map(|l| {
            ps.iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == l || b == l)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    IncidenceStructure::new(10, lines, None)
}

/// Vertices `±e_i` as points `2i` and `2i + 1`; lines are the 8 faces.
fn octahedron() -> Result<IncidenceStructure> {
    let lines = (0..8)
        .map(|m: usize| (0..3).map(|i| 2 * i + ((m >> i) & 1)).collect())
        .collect();
    IncidenceStructure::new(6, lines, None)
}
