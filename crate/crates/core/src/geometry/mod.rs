//! Point-line incidence structures.
//!
//! Points are 0-based internally and 1-based in JSON and DOT output. Lines
//! are stored sorted, and the line list is kept in lexicographic order so
//! equal structures compare equal.

mod catalog;
mod extract;
mod hyperplanes;
mod isomorphism;

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub use catalog::{build, catalog_names, stored_dessin};
pub use extract::{extract_geometries, PairStabilizer, StabilizerGeometry};
pub use hyperplanes::{Hyperplane, HyperplaneMode, MAX_HYPERPLANE_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceStructure {
    points: usize,
    lines: Vec<Vec<usize>>,
    name: Option<String>,
}

/// Generalized-polygon parameters: `gon`-gon of order `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonOrder {
    pub gon: usize,
    pub s: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonVerdict {
    pub passed: bool,
    /// Diameter and girth of the incidence graph.
    pub diameter: usize,
    pub girth: Option<usize>,
    pub violation: Option<String>,
}

impl IncidenceStructure {
    /// Validates and normalizes: every line has at least two distinct points
    /// in range and no line repeats.
    pub fn new(points: usize, lines: Vec<Vec<usize>>, name: Option<String>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(lines.len());
        for line in lines {
            let mut l = line;
            l.sort_unstable();
            if let Some(&p) = l.iter().find(|&&p| p >= points) {
                return Err(Error::PointOutOfRange { point: p + 1, degree: points });
            }
            if l.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Argument(format!("line {} repeats a point", one_based(&l))));
            }
            if l.len() < 2 {
                return Err(Error::Argument(format!("line {} has fewer than two points", one_based(&l))));
            }
            normalized.push(l);
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Argument(format!("duplicate line {}", one_based(&w[0]))));
        }
        Ok(IncidenceStructure {
            points,
            lines: normalized,
            name,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Indices of the lines through each point.
    pub fn lines_through(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.points];
        for (i, l) in self.lines.iter().enumerate() {
            for &p in l {
                out[p].push(i);
            }
        }
        out
    }

    /// Sorted distinct line sizes.
    pub fn line_sizes(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.lines.iter().map(Vec::len).collect();
        set.into_iter().collect()
    }

    /// Collinearity graph adjacency lists, each sorted.
    pub fn collinearity(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![BTreeSet::new(); self.points];
        for l in &self.lines {
            for &p in l {
                for &q in l {
                    if p != q {
                        adj[p].insert(q);
                    }
                }
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// BFS distance in the collinearity graph; `None` when unreachable.
    pub fn collinearity_distance(&self, p: usize, q: usize) -> Result<Option<usize>> {
        for x in [p, q] {
            if x >= self.points {
                return Err(Error::PointOutOfRange { point: x + 1, degree: self.points });
            }
        }
        Ok(bfs(&self.collinearity(), p)[q])
    }

    /// Connected components of the incidence graph restricted to points,
    /// 0-based, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.collinearity();
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for s in 0..self.points {
            if seen[s] {
                continue;
            }
            let mut comp: Vec<usize> = bfs(&adj, s)
                .iter()
                .enumerate()
                .filter_map(|(i, d)| d.map(|_| i))
                .collect();
            comp.sort_unstable();
            for &i in &comp {
                seen[i] = true;
            }
            out.push(comp);
        }
        out
    }

    fn require_connected(&self) -> Result<()> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(Error::Disconnected {
                components: comps.iter().map(|c| c.iter().map(|p| p + 1).collect()).collect(),
            });
        }
        Ok(())
    }

    /// Incidence graph: points `0..n`, then lines `n..n+l`.
    fn incidence_graph(&self) -> Vec<Vec<usize>> {
        let n = self.points;
        let mut adj = vec![Vec::new(); n + self.lines.len()];
        for (i, l) in self.lines.iter().enumerate() {
            for &p in l {
                adj[p].push(n + i);
                adj[n + i].push(p);
            }
        }
        adj
    }

    /// Diameter and girth (`None` for a forest) of the incidence graph.
    fn incidence_diameter_girth(&self) -> (usize, Option<usize>) {
        let adj = self.incidence_graph();
        let mut diameter = 0;
        let mut girth: Option<usize> = None;
        for s in 0..adj.len() {
            let mut dist = vec![usize::MAX; adj.len()];
            let mut parent = vec![usize::MAX; adj.len()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                diameter = diameter.max(dist[u]);
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let cycle = dist[u] + dist[w] + 1;
                        girth = Some(girth.map_or(cycle, |g| g.min(cycle)));
                    }
                }
            }
        }
        (diameter, girth)
    }

    /// Checks the `gon`-gon axioms for order `(s, t)`: `s+1` points per line,
    /// `t+1` lines per point, incidence-graph diameter `gon` and girth
    /// `2·gon`.
    pub fn polygon_check(&self, gon: usize, order: (usize, usize)) -> Result<PolygonVerdict> {
        self.require_connected()?;
        let (s, t) = order;
        let (diameter, girth) = self.incidence_diameter_girth();
        let mut violation = None;
        if let Some(l) = self.lines.iter().find(|l| l.len() != s + 1) {
            violation = Some(format!("line {} has {} points, expected {}", one_based(l), l.len(), s + 1));
        } else if let Some((p, ls)) = self.lines_through().iter().enumerate().find(|(_, ls)| ls.len() != t + 1) {
            violation = Some(format!("point {} lies on {} lines, expected {}", p + 1, ls.len(), t + 1));
        } else if diameter != gon {
            violation = Some(format!("incidence graph diameter {diameter}, expected {gon}"));
        } else if girth != Some(2 * gon) {
            let g = girth.map_or("infinite".to_string(), |g| g.to_string());
            violation = Some(format!("incidence graph girth {g}, expected {}", 2 * gon));
        }
        Ok(PolygonVerdict {
            passed: violation.is_none(),
            diameter,
            girth,
            violation,
        })
    }

    /// Detects whether the structure is a generalized polygon and of which
    /// order.
    pub fn polygon_order(&self) -> Option<PolygonOrder> {
        let first = self.lines.first()?;
        let s = first.len() - 1;
        let through = self.lines_through();
        let t = through.first()?.len().checked_sub(1)?;
        if self.lines.iter().any(|l| l.len() != s + 1) || through.iter().any(|ls| ls.len() != t + 1) {
            return None;
        }
        if self.components().len() != 1 {
            return None;
        }
        let (diameter, girth) = self.incidence_diameter_girth();
        (girth? == 2 * diameter && diameter >= 2).then_some(PolygonOrder { gon: diameter, s, t })
    }

    /// Points become lines and lines become points; line `i` of the dual is
    /// the set of original lines through point `i`.
    pub fn dual(&self) -> Result<IncidenceStructure> {
        let name = self.name.as_ref().map(|n| format!("dual of {n}"));
        IncidenceStructure::new(self.lines.len(), self.lines_through(), name)
    }

    /// Image under the point map `i ↦ sigma(i)`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<IncidenceStructure> {
        if sigma.degree() != self.points {
            return Err(Error::DegreeMismatch {
                left: self.points,
                right: sigma.degree(),
            });
        }
        let lines = self
            .lines
            .iter()
            .map(|l| l.iter().map(|&p| sigma.apply(p)).collect())
            .collect();
        IncidenceStructure::new(self.points, lines, self.name.clone())
    }

    /// Restriction to the given lines, keeping all points.
    pub fn with_lines(&self, lines: Vec<Vec<usize>>) -> Result<IncidenceStructure> {
        IncidenceStructure::new(self.points, lines, self.name.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = GeometryFile {
            points: self.points,
            lines: self.lines.iter().map(|l| l.iter().map(|p| p + 1).collect()).collect(),
            name: self.name.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GeometryFile = serde_json::from_str(text)?;
        let mut lines = Vec::with_capacity(file.lines.len());
        for l in file.lines {
            if l.contains(&0) {
                return Err(Error::PointOutOfRange { point: 0, degree: file.points });
            }
            lines.push(l.into_iter().map(|p| p - 1).collect());
        }
        IncidenceStructure::new(file.points, lines, file.name)
    }

    /// Bipartite point-line incidence graph in Graphviz format.
    pub fn to_dot_incidence(&self) -> String {
        let mut s = String::from("graph incidence {\n");
        for p in 0..self.points {
            let _ = writeln!(s, "  p{} [label=\"{}\", shape=circle];", p + 1, p + 1);
        }
        for (i, l) in self.lines.iter().enumerate() {
            let _ = writeln!(s, "  L{} [label=\"\", shape=box];", i + 1);
            for &p in l {
                let _ = writeln!(s, "  p{} -- L{};", p + 1, i + 1);
            }
        }
        s.push_str("}\n");
        s
    }

    /// Collinearity graph in Graphviz format.
    pub fn to_dot_collinearity(&self) -> String {
        let mut s = String::from("graph collinearity {\n");
        for p in 0..self.points {
            let _ = writeln!(s, "  {};", p + 1);
        }
        for (p, adj) in self.collinearity().iter().enumerate() {
            for &q in adj.iter().filter(|&&q| q > p) {
                let _ = writeln!(s, "  {} -- {};", p + 1, q + 1);
            }
        }
        s.push_str("}\n");
        s
    }

    /// Point bijection carrying lines onto lines, if one exists.
    pub fn isomorphism(&self, other: &IncidenceStructure) -> Option<Vec<usize>> {
        isomorphism::find(self, other)
    }

    pub fn is_isomorphic(&self, other: &IncidenceStructure) -> bool {
        self.isomorphism(other).is_some()
    }

    pub fn hyperplanes(&self, mode: HyperplaneMode) -> Result<Vec<Hyperplane>> {
        hyperplanes::enumerate(self, mode)
    }

    pub fn is_hyperplane(&self, h: &Hyperplane) -> bool {
        hyperplanes::is_hyperplane(self, h.bits())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GeometryFile {
    points: usize,
    lines: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued");
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn one_based(l: &[usize]) -> String {
    let inner: Vec<String> = l.iter().map(|p| (p + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}
