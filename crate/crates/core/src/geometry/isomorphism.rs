//! Incidence-structure isomorphism by backtracking.
//!
//! Points of the source are visited in breadth-first collinearity order and
//! matched against targets with the same local invariant. A partial map is
//! kept only if it preserves the number of lines through every mapped pair
//! and the collinearity distance between every mapped pair, and sends
//! every fully mapped line onto a line.

use std::collections::{HashSet, VecDeque};

use super::IncidenceStructure;

type Invariant = (usize, Vec<usize>, usize);

struct Side {
    invariants: Vec<Invariant>,
    /// `shared[p][q]`: number of lines through both `p` and `q`.
    shared: Vec<Vec<u16>>,
    /// Collinearity distance, `u16::MAX` across components.
    dist: Vec<Vec<u16>>,
    adj: Vec<Vec<usize>>,
}

impl Side {
    fn new(s: &IncidenceStructure) -> Self {
        let n = s.points();
        let mut shared = vec![vec![0u16; n]; n];
        for l in s.lines() {
            for &p in l {
                for &q in l {
                    if p != q {
                        shared[p][q] += 1;
                    }
                }
            }
        }
        let adj = s.collinearity();
        let invariants = s
            .lines_through()
            .iter()
            .enumerate()
            .map(|(p, ls)| {
                let mut sizes: Vec<usize> = ls.iter().map(|&i| s.lines()[i].len()).collect();
                sizes.sort_unstable();
                (ls.len(), sizes, adj[p].len())
            })
            .collect();
        let dist = (0..n).map(|p| distances(&adj, p)).collect();
        Side { invariants, shared, dist, adj }
    }
}

fn distances(adj: &[Vec<usize>], source: usize) -> Vec<u16> {
    let mut dist = vec![u16::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w] == u16::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub(super) fn find(s1: &IncidenceStructure, s2: &IncidenceStructure) -> Option<Vec<usize>> {
    let n = s1.points();
    if n != s2.points() || s1.line_count() != s2.line_count() {
        return None;
    }
    let mut sizes1: Vec<usize> = s1.lines().iter().map(Vec::len).collect();
    let mut sizes2: Vec<usize> = s2.lines().iter().map(Vec::len).collect();
    sizes1.sort_unstable();
    sizes2.sort_unstable();
    if sizes1 != sizes2 {
        return None;
    }
    let a = Side::new(s1);
    let b = Side::new(s2);
    let mut inv1 = a.invariants.clone();
    let mut inv2 = b.invariants.clone();
    inv1.sort_unstable();
    inv2.sort_unstable();
    if inv1 != inv2 {
        return None;
    }

    let order = visit_order(&a);
    let mut position = vec![0; n];
    for (k, &p) in order.iter().enumerate() {
        position[p] = k;
    }
    // Lines of s1 grouped by the step at which their last point is mapped.
    let mut closing: Vec<Vec<&[usize]>> = vec![Vec::new(); n];
    for l in s1.lines() {
        let last = l.iter().map(|&p| position[p]).max().expect("nonempty line");
        closing[last].push(l);
    }
    let targets: HashSet<&[usize]> = s2.lines().iter().map(Vec::as_slice).collect();

    let mut search = Search {
        a: &a,
        b: &b,
        order: &order,
        closing: &closing,
        targets: &targets,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    search.extend(0).then_some(search.map)
}

/// Breadth-first over the collinearity graph, each component started at a
/// point with the rarest invariant.
fn visit_order(a: &Side) -> Vec<usize> {
    let n = a.invariants.len();
    let frequency = |p: usize| a.invariants.iter().filter(|&i| *i == a.invariants[p]).count();
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&p| (frequency(p), p));
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &a.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    a: &'a Side,
    b: &'a Side,
    order: &'a [usize],
    closing: &'a [Vec<&'a [usize]>],
    targets: &'a HashSet<&'a [usize]>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let x = self.order[k];
        let anchor = self.order[..k].iter().copied().find(|&p| self.a.shared[x][p] > 0);
        let candidates: Vec<usize> = match anchor {
            Some(p) => self.b.adj[self.map[p]].clone(),
            None => (0..self.map.len()).collect(),
        };
        for y in candidates {
            if self.used[y] || self.a.invariants[x] != self.b.invariants[y] {
                continue;
            }
            let consistent = self.order[..k]
                .iter()
                .all(|&p| {
                    let q = self.map[p];
                    self.a.shared[x][p] == self.b.shared[y][q] && self.a.dist[x][p] == self.b.dist[y][q]
                });
            if !consistent {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            if self.lines_close(k) && self.extend(k + 1) {
                return true;
            }
            self.used[y] = false;
            self.map[x] = usize::MAX;
        }
        false
    }

    fn lines_close(&self, k: usize) -> bool {
        self.closing[k].iter().all(|l| {
            let mut image: Vec<usize> = l.iter().map(|&p| self.map[p]).collect();
            image.sort_unstable();
            self.targets.contains(image.as_slice())
        })
    }
}
