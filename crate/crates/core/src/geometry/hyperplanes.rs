//! Geometric hyperplanes: proper point sets meeting every line in exactly
//! one point or containing it.
//!
//! Point sets are `u128` bitsets, so structures are limited to
//! [`MAX_HYPERPLANE_POINTS`] points.

use std::collections::HashSet;

use super::IncidenceStructure;
use crate::error::{Error, Result};

pub const MAX_HYPERPLANE_POINTS: usize = 128;

/// Largest point count accepted by brute-force enumeration.
pub const MAX_BRUTE_POINTS: usize = 25;

/// Largest Veldkamp dimension enumerated by the span fast path.
const MAX_SPAN_DIMENSION: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane(u128);

impl Hyperplane {
    pub fn from_points(points: &[usize]) -> Self {
        Hyperplane(points.iter().fold(0, |acc, &p| acc | (1u128 << p)))
    }

    pub fn bits(&self) -> u128 {
        self.0
    }

    pub fn contains(&self, p: usize) -> bool {
        (self.0 >> p) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// 0-based points in increasing order.
    pub fn points(&self) -> Vec<usize> {
        (0..128).filter(|&p| self.contains(p)).collect()
    }

    /// Veldkamp sum: the complement of the symmetric difference, within a
    /// structure on `n` points.
    pub fn sum(&self, other: &Hyperplane, n: usize) -> Hyperplane {
        Hyperplane(!(self.0 ^ other.0) & full(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperplaneMode {
    /// Test every subset; at most [`MAX_BRUTE_POINTS`] points.
    Brute,
    /// Close the singular hyperplanes of a generalized polygon under the
    /// Veldkamp sum, keeping only sums that are hyperplanes. With 3-point
    /// lines the seeds also include complements of a basis of the even
    /// point sets, and the closure is enumerated as a GF(2) span.
    Veldkamp,
    /// As `Veldkamp`, but always by explicit pairwise closure.
    VeldkampPairwise,
}

fn full(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn line_masks(s: &IncidenceStructure) -> Vec<(u128, u32)> {
    s.lines()
        .iter()
        .map(|l| (Hyperplane::from_points(l).0, l.len() as u32))
        .collect()
}

fn satisfies(masks: &[(u128, u32)], n: usize, h: u128) -> bool {
    h != full(n) && masks.iter().all(|&(m, k)| {
        let c = (h & m).count_ones();
        c == 1 || c == k
    })
}

pub(super) fn is_hyperplane(s: &IncidenceStructure, h: u128) -> bool {
    s.points() <= MAX_HYPERPLANE_POINTS && h & !full(s.points()) == 0 && satisfies(&line_masks(s), s.points(), h)
}

pub(super) fn enumerate(s: &IncidenceStructure, mode: HyperplaneMode) -> Result<Vec<Hyperplane>> {
    let n = s.points();
    if n > MAX_HYPERPLANE_POINTS {
        return Err(Error::Argument(format!(
            "hyperplane bitsets hold at most {MAX_HYPERPLANE_POINTS} points, got {n}"
        )));
    }
    let mut out = match mode {
        HyperplaneMode::Brute => brute(s)?,
        HyperplaneMode::Veldkamp | HyperplaneMode::VeldkampPairwise => {
            let mut seeds = singular(s)?;
            if s.lines().iter().all(|l| l.len() == 3) {
                seeds.extend(even_set_basis(s).into_iter().map(|c| Hyperplane(!c & full(n))));
            }
            if mode == HyperplaneMode::Veldkamp && s.lines().iter().all(|l| l.len() == 3) {
                span(s, &seeds)?
            } else {
                pairwise_closure(s, &seeds)
            }
        }
    };
    out.sort_unstable();
    Ok(out)
}

fn brute(s: &IncidenceStructure) -> Result<Vec<Hyperplane>> {
    let n = s.points();
    if n > MAX_BRUTE_POINTS {
        return Err(Error::Argument(format!(
            "brute-force hyperplane search is limited to {MAX_BRUTE_POINTS} points, got {n}"
        )));
    }
    let masks = line_masks(s);
    Ok((0..(1u128 << n))
        .filter(|&h| satisfies(&masks, n, h))
        .map(Hyperplane)
        .collect())
}

/// Singular hyperplanes: collinearity balls of radius `gon/2 − 1`.
fn singular(s: &IncidenceStructure) -> Result<Vec<Hyperplane>> {
    let order = s
        .polygon_order()
        .ok_or_else(|| Error::NotPolygon(s.name().unwrap_or("structure").to_string()))?;
    let radius = order.gon / 2 - 1;
    let adj = s.collinearity();
    let seeds: HashSet<Hyperplane> = (0..s.points())
        .map(|p| {
            let dist = super::bfs(&adj, p);
            let ball: Vec<usize> = (0..s.points())
                .filter(|&q| dist[q].is_some_and(|d| d <= radius))
                .collect();
            Hyperplane::from_points(&ball)
        })
        .collect();
    let mut seeds: Vec<Hyperplane> = seeds.into_iter().collect();
    seeds.sort_unstable();
    Ok(seeds)
}

/// Basis of the nonempty point sets meeting every line evenly: the GF(2)
/// null space of the line-point incidence matrix. Singular hyperplanes alone
/// can span a proper subspace (the 15 perps of GQ(2,2) miss its ovoids and
/// grids), so these complete the seed set.
fn even_set_basis(s: &IncidenceStructure) -> Vec<u128> {
    let n = s.points();
    let mut rows: Vec<u128> = line_masks(s).into_iter().map(|(m, _)| m).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for bit in 0..n {
        let Some(i) = (rank..rows.len()).find(|&i| (rows[i] >> bit) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, i);
        for j in 0..rows.len() {
            if j != rank && (rows[j] >> bit) & 1 == 1 {
                rows[j] ^= rows[rank];
            }
        }
        pivots.push(bit);
        rank += 1;
    }
    // One basis vector per free column f: set f, then each pivot bit that
    // row r needs to cancel it.
    (0..n)
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut v = 1u128 << f;
            for (r, &p) in pivots.iter().enumerate() {
                if (rows[r] >> f) & 1 == 1 {
                    v |= 1u128 << p;
                }
            }
            v
        })
        .collect()
}

/// Fixpoint of `H1 ⊞ H2` over distinct pairs, discarding non-hyperplanes.
fn pairwise_closure(s: &IncidenceStructure, seeds: &[Hyperplane]) -> Vec<Hyperplane> {
    let n = s.points();
    let masks = line_masks(s);
    let mut found: Vec<Hyperplane> = Vec::new();
    let mut seen: HashSet<Hyperplane> = HashSet::new();
    for &h in seeds {
        if satisfies(&masks, n, h.0) && seen.insert(h) {
            found.push(h);
        }
    }
    let mut next = 0;
    while next < found.len() {
        let h = found[next];
        for i in 0..next {
            let sum = h.sum(&found[i], n);
            if satisfies(&masks, n, sum.0) && seen.insert(sum) {
                found.push(sum);
            }
        }
        next += 1;
    }
    found
}

/// With 3-point lines, `⊞` is addition of complements over GF(2), so the
/// closure is the span of the seed complements without zero.
fn span(s: &IncidenceStructure, seeds: &[Hyperplane]) -> Result<Vec<Hyperplane>> {
    let n = s.points();
    let all = full(n);
    let mut basis: Vec<u128> = Vec::new();
    for h in seeds {
        let mut v = !h.0 & all;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    if basis.len() > MAX_SPAN_DIMENSION {
        return Err(Error::ResourceLimit { limit: 1 << MAX_SPAN_DIMENSION });
    }
    let masks = line_masks(s);
    let mut out = Vec::with_capacity((1usize << basis.len()) - 1);
    let mut v = 0u128;
    for i in 1u64..(1u64 << basis.len()) {
        v ^= basis[i.trailing_zeros() as usize];
        let h = !v & all;
        if satisfies(&masks, n, h) {
            out.push(Hyperplane(h));
        }
    }
    Ok(out)
}
