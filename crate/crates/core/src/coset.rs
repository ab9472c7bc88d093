//! Coset tables: Todd–Coxeter enumeration (HLT strategy) and low-index
//! subgroup search by backtracking over partial tables.
//!
//! Columns are indexed by [`Letter::index`]: `a, a⁻¹, b, b⁻¹`. Cosets are
//! 0-based internally and always renumbered in breadth-first order from the
//! subgroup itself, scanning letters in that order, so coset `k` is reached
//! from coset 0 by `transversal[k]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::words::{Letter, Presentation, Word};

const NONE: u32 = u32::MAX;

/// Default bound on the number of coset rows Todd–Coxeter may allocate.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// A complete, consistent right-coset table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetTable {
    action: Vec<[u32; 4]>,
    transversal: Vec<Word>,
}

impl CosetTable {
    /// Renumbers a complete table breadth-first from `base`, dropping rows
    /// not reachable from it.
    pub fn from_raw(raw: &[[u32; 4]], base: usize) -> Result<Self> {
        let (order, words) = bfs_order(raw, base, &Letter::ALL)?;
        let mut new_index = vec![NONE; raw.len()];
        for (k, &old) in order.iter().enumerate() {
            new_index[old] = k as u32;
        }
        let action = order
            .iter()
            .map(|&old| {
                let mut row = [NONE; 4];
                for x in 0..4 {
                    row[x] = new_index[raw[old][x] as usize];
                }
                row
            })
            .collect();
        Ok(CosetTable {
            action,
            transversal: words,
        })
    }

    /// Coset table of the point stabilizer of point 0 in `⟨g0, g1⟩`.
    pub fn from_permutations(g0: &Permutation, g1: &Permutation) -> Result<Self> {
        if g0.degree() != g1.degree() {
            return Err(Error::DegreeMismatch {
                left: g0.degree(),
                right: g1.degree(),
            });
        }
        let (g0i, g1i) = (g0.inverse(), g1.inverse());
        let raw: Vec<[u32; 4]> = (0..g0.degree())
            .map(|c| {
                [
                    g0.apply(c) as u32,
                    g0i.apply(c) as u32,
                    g1.apply(c) as u32,
                    g1i.apply(c) as u32,
                ]
            })
            .collect();
        let table = CosetTable::from_raw(&raw, 0)?;
        if table.index() != g0.degree() {
            return Err(Error::Intransitive {
                orbits: crate::perm::orbits(g0.degree(), &[g0.clone(), g1.clone()])
                    .into_iter()
                    .map(|o| o.into_iter().map(|p| p + 1).collect())
                    .collect(),
            });
        }
        Ok(table)
    }

    pub fn index(&self) -> usize {
        self.action.len()
    }

    /// Image of the 0-based coset `c` under `x`.
    pub fn act(&self, c: usize, x: Letter) -> usize {
        self.action[c][x.index()] as usize
    }

    pub fn rows(&self) -> &[[u32; 4]] {
        &self.action
    }

    pub fn transversal(&self) -> &[Word] {
        &self.transversal
    }

    pub fn trace(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.act(c, l))
    }

    /// Right actions of `a` and `b` on the cosets.
    pub fn coset_action(&self) -> (Permutation, Permutation) {
        let col = |x: Letter| {
            Permutation::from_images_unchecked(self.action.iter().map(|r| r[x.index()]).collect())
        };
        (col(Letter::A), col(Letter::B))
    }

    /// True when every relator fixes every coset.
    pub fn satisfies(&self, p: &Presentation) -> bool {
        (0..self.index()).all(|c| p.relators().iter().all(|r| self.trace(c, r) == c))
    }

    /// Checks totality, inverse consistency, relators, transitivity and the
    /// transversal.
    pub fn validate(&self, p: &Presentation) -> Result<()> {
        let n = self.index();
        for c in 0..n {
            for x in Letter::ALL {
                let d = self.action[c][x.index()];
                if d as usize >= n {
                    return Err(Error::Invariant(format!("entry ({}, {}) undefined", c + 1, x.to_char())));
                }
                if self.act(d as usize, x.inverse()) != c {
                    return Err(Error::Invariant(format!("entry ({}, {}) not inverted", c + 1, x.to_char())));
                }
            }
        }
        if !self.satisfies(p) {
            return Err(Error::Invariant("a relator moves some coset".into()));
        }
        for (k, w) in self.transversal.iter().enumerate() {
            if self.trace(0, w) != k {
                return Err(Error::Invariant(format!("transversal word {w} does not reach coset {}", k + 1)));
            }
        }
        if self.transversal.len() != n {
            return Err(Error::Invariant("table is not transitive".into()));
        }
        Ok(())
    }

    /// Schreier generators `t_c · x · t_{c·x}⁻¹` of the subgroup, reduced
    /// with `p` and with trivial ones removed.
    pub fn schreier_generators(&self, p: &Presentation) -> Vec<Word> {
        let mut out = Vec::new();
        for c in 0..self.index() {
            for x in [Letter::A, Letter::B] {
                let d = self.act(c, x);
                let w = self.transversal[c]
                    .mul(&Word::from_letters([x]))
                    .mul(&self.transversal[d].inverse());
                let w = p.reduce(&w);
                if !w.is_identity() && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Flattened action rows, the order used to sort search output.
    pub fn flat(&self) -> Vec<u32> {
        self.action.iter().flatten().copied().collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CosetTableFile::from(self))?)
    }

    pub fn from_json(text: &str, p: &Presentation) -> Result<Self> {
        let file: CosetTableFile = serde_json::from_str(text)?;
        let n = file.n;
        let cols = [&file.action.a, &file.action.a_inv, &file.action.b, &file.action.b_inv];
        if cols.iter().any(|c| c.len() != n) || file.transversal.len() != n {
            return Err(Error::Format(format!("coset table columns must have length {n}")));
        }
        let mut action = vec![[NONE; 4]; n];
        for (x, col) in cols.iter().enumerate() {
            for (c, &d) in col.iter().enumerate() {
                if d == 0 || d > n {
                    return Err(Error::Format(format!("coset {d} out of range")));
                }
                action[c][x] = (d - 1) as u32;
            }
        }
        let table = CosetTable {
            action,
            transversal: file.transversal,
        };
        table.validate(p)?;
        Ok(table)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct ActionColumns {
    a: Vec<usize>,
    #[serde(rename = "A")]
    a_inv: Vec<usize>,
    b: Vec<usize>,
    #[serde(rename = "B")]
    b_inv: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CosetTableFile {
    n: usize,
    action: ActionColumns,
    transversal: Vec<Word>,
}

impl From<&CosetTable> for CosetTableFile {
    fn from(t: &CosetTable) -> Self {
        let col = |x: usize| t.action.iter().map(|r| r[x] as usize + 1).collect();
        CosetTableFile {
            n: t.index(),
            action: ActionColumns {
                a: col(0),
                a_inv: col(1),
                b: col(2),
                b_inv: col(3),
            },
            transversal: t.transversal.clone(),
        }
    }
}

/// Breadth-first order of the rows reachable from `base`, with the shortest
/// words under the letter priority `letters`.
pub(crate) fn bfs_order(raw: &[[u32; 4]], base: usize, letters: &[Letter]) -> Result<(Vec<usize>, Vec<Word>)> {
    let mut seen = vec![false; raw.len()];
    let mut order = vec![base];
    let mut words = vec![Word::identity()];
    seen[base] = true;
    let mut i = 0;
    while i < order.len() {
        let c = order[i];
        for &x in letters {
            let d = raw[c][x.index()];
            if d == NONE {
                return Err(Error::Invariant(format!("incomplete row {}", c + 1)));
            }
            let d = d as usize;
            if !seen[d] {
                seen[d] = true;
                order.push(d);
                let mut letters = words[i].letters().to_vec();
                letters.push(x);
                words.push(Word::from_letters_unreduced(letters));
            }
        }
        i += 1;
    }
    Ok((order, words))
}

/// Todd–Coxeter enumeration of the cosets of `⟨subgroup_generators⟩`.
pub fn todd_coxeter(p: &Presentation, subgroup_generators: &[Word], max_cosets: usize) -> Result<CosetTable> {
    let mut e = Enumerator::new(max_cosets);
    for w in subgroup_generators {
        e.scan_and_fill(0, w.letters())?;
    }
    let mut c = 0;
    while c < e.table.len() {
        if e.is_live(c) {
            for r in p.relators() {
                e.scan_and_fill(c, r.letters())?;
                if !e.is_live(c) {
                    break;
                }
            }
            if e.is_live(c) {
                for x in 0..4 {
                    if e.table[c][x] == NONE {
                        e.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    let mut raw = e.table.clone();
    for row in raw.iter_mut() {
        for entry in row.iter_mut() {
            if *entry != NONE {
                *entry = e.rep(*entry as usize) as u32;
            }
        }
    }
    CosetTable::from_raw(&raw, 0)
}

struct Enumerator {
    table: Vec<[u32; 4]>,
    parent: Vec<u32>,
    queue: std::collections::VecDeque<usize>,
    limit: usize,
}

impl Enumerator {
    fn new(limit: usize) -> Self {
        Enumerator {
            table: vec![[NONE; 4]],
            parent: vec![0],
            queue: Default::default(),
            limit,
        }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.table.len() >= self.limit {
            return Err(Error::ResourceLimit { limit: self.limit });
        }
        let d = self.table.len();
        self.table.push([NONE; 4]);
        self.parent.push(d as u32);
        self.table[c][x] = d as u32;
        self.table[d][x ^ 1] = c as u32;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut x = c;
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (mu, nu) = (k.min(l), k.max(l));
        self.parent[nu] = mu as u32;
        self.queue.push_back(nu);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(gamma) = self.queue.pop_front() {
            for x in 0..4 {
                let delta = self.table[gamma][x];
                if delta == NONE {
                    continue;
                }
                let delta = delta as usize;
                self.table[delta][x ^ 1] = NONE;
                let mu = self.rep(gamma);
                let nu = self.rep(delta);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x] as usize;
                    self.merge(nu, t);
                } else if self.table[nu][x ^ 1] != NONE {
                    let t = self.table[nu][x ^ 1] as usize;
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu as u32;
                    self.table[nu][x ^ 1] = mu as u32;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[Letter]) -> Result<()> {
        let len = w.len();
        let (mut f, mut i) = (c, 0);
        let (mut b, mut j) = (c, len);
        loop {
            while i < j && self.table[f][w[i].index()] != NONE {
                f = self.table[f][w[i].index()] as usize;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][w[j - 1].inverse().index()] != NONE {
                b = self.table[b][w[j - 1].inverse().index()] as usize;
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                let x = w[i].index();
                self.table[f][x] = b as u32;
                self.table[b][x ^ 1] = f as u32;
                return Ok(());
            }
            self.define(f, w[i].index())?;
        }
    }
}

/// Low-index subgroup search.
///
/// Emits every subgroup of index exactly `n` as its breadth-first coset
/// table, or one table per conjugacy class when `up_to_conjugacy` is set
/// (the lexicographically least renumbering over all base cosets). Output
/// is sorted by flattened table.
pub fn low_index_subgroups(p: &Presentation, n: usize, up_to_conjugacy: bool) -> Result<Vec<CosetTable>> {
    if n == 0 {
        return Err(Error::Argument("index must be at least 1".into()));
    }
    let search = LowIndex::new(p, n, up_to_conjugacy);
    let mut root = Node {
        table: vec![[NONE; 4]; n],
        count: 1,
    };
    let mut raws = Vec::new();
    if root.close(&search.conjugates) {
        raws = search.explore(root, 0);
    }
    raws.sort_unstable_by(|x, y| x.iter().flatten().cmp(y.iter().flatten()));
    raws.iter().map(|r| CosetTable::from_raw(r, 0)).collect()
}

struct LowIndex {
    n: usize,
    up_to_conjugacy: bool,
    /// Cyclic conjugates of every relator and its inverse, bucketed by first letter.
    conjugates: [Vec<Vec<usize>>; 4],
}

#[derive(Clone)]
struct Node {
    table: Vec<[u32; 4]>,
    count: usize,
}

/// Subtrees above this depth are explored in parallel.
const PARALLEL_DEPTH: usize = 4;

impl LowIndex {
    fn new(p: &Presentation, n: usize, up_to_conjugacy: bool) -> Self {
        let mut conjugates: [Vec<Vec<usize>>; 4] = Default::default();
        for r in p.relators() {
            for word in [r.clone(), r.inverse()] {
                let ls: Vec<usize> = word.letters().iter().map(|l| l.index()).collect();
                for s in 0..ls.len() {
                    let rot: Vec<usize> = ls[s..].iter().chain(ls[..s].iter()).copied().collect();
                    let bucket = &mut conjugates[rot[0]];
                    if !bucket.contains(&rot) {
                        bucket.push(rot);
                    }
                }
            }
        }
        LowIndex {
            n,
            up_to_conjugacy,
            conjugates,
        }
    }

    fn explore(&self, node: Node, depth: usize) -> Vec<Vec<[u32; 4]>> {
        let Some((c, x)) = node.first_undefined() else {
            return if node.count == self.n { vec![node.table] } else { Vec::new() };
        };
        let mut choices: Vec<u32> = (0..node.count as u32)
            .filter(|&d| node.table[d as usize][x ^ 1] == NONE)
            .collect();
        if node.count < self.n {
            choices.push(node.count as u32);
        }
        let child = |d: u32| -> Option<Node> {
            let mut next = node.clone();
            if d as usize == next.count {
                next.count += 1;
            }
            next.table[c][x] = d;
            next.table[d as usize][x ^ 1] = c as u32;
            let mut stack = vec![(c, x)];
            if !next.deduce(&self.conjugates, &mut stack) {
                return None;
            }
            if self.up_to_conjugacy && !next.is_canonical() {
                return None;
            }
            Some(next)
        };
        if depth < PARALLEL_DEPTH {
            choices
                .into_par_iter()
                .map(|d| child(d).map(|nx| self.explore(nx, depth + 1)).unwrap_or_default())
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        } else {
            let mut out = Vec::new();
            for d in choices {
                if let Some(nx) = child(d) {
                    out.extend(self.explore(nx, depth + 1));
                }
            }
            out
        }
    }
}

impl Node {
    fn first_undefined(&self) -> Option<(usize, usize)> {
        for c in 0..self.count {
            for x in 0..4 {
                if self.table[c][x] == NONE {
                    return Some((c, x));
                }
            }
        }
        None
    }

    /// Processes relator scans from coset 0 for every relator (the root).
    fn close(&mut self, conjugates: &[Vec<Vec<usize>>; 4]) -> bool {
        let mut stack = Vec::new();
        for bucket in conjugates {
            for w in bucket {
                if !self.scan(0, w, &mut stack) {
                    return false;
                }
            }
        }
        self.deduce(conjugates, &mut stack)
    }

    fn deduce(&mut self, conjugates: &[Vec<Vec<usize>>; 4], stack: &mut Vec<(usize, usize)>) -> bool {
        while let Some((c, x)) = stack.pop() {
            for w in &conjugates[x] {
                if !self.scan(c, w, stack) {
                    return false;
                }
            }
        }
        true
    }

    /// Scans `w` from `c`; fills a single-letter gap and reports conflicts.
    fn scan(&mut self, c: usize, w: &[usize], stack: &mut Vec<(usize, usize)>) -> bool {
        let len = w.len();
        let (mut f, mut i) = (c, 0);
        while i < len && self.table[f][w[i]] != NONE {
            f = self.table[f][w[i]] as usize;
            i += 1;
        }
        if i == len {
            return f == c;
        }
        let (mut b, mut j) = (c, len);
        while j > i && self.table[b][w[j - 1] ^ 1] != NONE {
            b = self.table[b][w[j - 1] ^ 1] as usize;
            j -= 1;
        }
        if j == i {
            return f == b;
        }
        if j == i + 1 {
            let x = w[i];
            self.table[f][x] = b as u32;
            self.table[b][x ^ 1] = f as u32;
            stack.push((f, x));
        }
        true
    }

    /// False when renumbering from some other base coset yields a
    /// lexicographically smaller table on the already-defined prefix.
    fn is_canonical(&self) -> bool {
        let mut map = vec![NONE; self.count];
        let mut inv: Vec<usize> = Vec::with_capacity(self.count);
        for base in 1..self.count {
            map.iter_mut().for_each(|m| *m = NONE);
            inv.clear();
            map[base] = 0;
            inv.push(base);
            let mut row = 0;
            'rows: while row < inv.len() {
                let old = inv[row];
                for x in 0..4 {
                    let v = self.table[old][x];
                    let orig = self.table[row][x];
                    if v == NONE || orig == NONE {
                        break 'rows;
                    }
                    if map[v as usize] == NONE {
                        map[v as usize] = inv.len() as u32;
                        inv.push(v as usize);
                    }
                    let w = map[v as usize];
                    if w < orig {
                        return false;
                    }
                    if w > orig {
                        break 'rows;
                    }
                }
                row += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn index_one_and_two() {
        let g = Presentation::modular();
        let whole = todd_coxeter(&g, &[w("a"), w("b")], DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(whole.index(), 1);
        let (g0, g1) = whole.coset_action();
        assert!(g0.is_identity() && g1.is_identity());

        // <a> itself has infinite index in the free product; its normal
        // closure <a, bab> is the index-2 kernel of a -> 0, b -> 1.
        assert!(todd_coxeter(&g, &[w("a")], 2000).is_err());
        let t = todd_coxeter(&g, &[w("a"), w("baB")], DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(t.index(), 2);
        assert_eq!(t.transversal(), &[Word::identity(), w("b")]);
        let (g0, g1) = t.coset_action();
        assert!(g0.is_identity());
        assert_eq!(g1.to_string(), "(1,2)");
        t.validate(&g).unwrap();
    }

    #[test]
    fn infinite_index_hits_limit() {
        let g = Presentation::modular();
        assert!(matches!(
            todd_coxeter(&g, &[w("b")], 500),
            Err(Error::ResourceLimit { limit: 500 })
        ));
    }

    #[test]
    fn coincidences_collapse_finite_groups() {
        // S3 = <a, b | a^3, b^2, (ab)^2>; trivial subgroup has index 6.
        let s3 = Presentation::custom(vec![w("aaa"), w("bb"), w("abab")]).unwrap();
        let t = todd_coxeter(&s3, &[], DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(t.index(), 6);
        t.validate(&s3).unwrap();
        assert_eq!(todd_coxeter(&s3, &[w("a")], DEFAULT_MAX_COSETS).unwrap().index(), 2);
        assert_eq!(todd_coxeter(&s3, &[w("b")], DEFAULT_MAX_COSETS).unwrap().index(), 3);
        // A5 as (2,3,5) triangle group.
        let a5 = Presentation::custom(vec![w("bb"), w("a^3"), w("(ab)^5")]).unwrap();
        assert_eq!(todd_coxeter(&a5, &[], DEFAULT_MAX_COSETS).unwrap().index(), 60);
    }

    #[test]
    fn p1_transversal_and_action() {
        let g0 = Permutation::parse("(1,2,3)(4,5,6)", Some(6)).unwrap();
        let g1 = Permutation::parse("(2,4)(3,5)", Some(6)).unwrap();
        let t = CosetTable::from_permutations(&g0, &g1).unwrap();
        let names: Vec<String> = t.transversal().iter().map(Word::to_string).collect();
        assert_eq!(names, ["e", "a", "A", "ab", "Ab", "abA"]);
        let (h0, h1) = t.coset_action();
        assert_eq!(h0.to_string(), "(1,2,3)(4,5,6)");
        assert_eq!(h1.to_string(), "(2,4)(3,5)");
    }

    #[test]
    fn schreier_round_trip() {
        let g = Presentation::modular();
        for t in low_index_subgroups(&g, 5, true).unwrap() {
            let gens = t.schreier_generators(&g);
            let back = todd_coxeter(&g, &gens, DEFAULT_MAX_COSETS).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn low_index_small_counts() {
        let g = Presentation::modular();
        assert_eq!(low_index_subgroups(&g, 1, false).unwrap().len(), 1);
        assert_eq!(low_index_subgroups(&g, 2, false).unwrap().len(), 3);
        assert!(low_index_subgroups(&g, 0, false).is_err());
        for n in 1..=5 {
            for t in low_index_subgroups(&g, n, false).unwrap() {
                t.validate(&g).unwrap();
                assert_eq!(t.index(), n);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = Presentation::modular();
        let t = todd_coxeter(&g, &[w("a"), w("bab")], DEFAULT_MAX_COSETS).unwrap();
        let json = t.to_json().unwrap();
        assert!(json.contains("\"transversal\""));
        assert_eq!(CosetTable::from_json(&json, &g).unwrap(), t);
        let bad = json.replace("\"b\": [\n      2,\n      1\n    ]", "\"b\": [\n      1,\n      1\n    ]");
        assert!(CosetTable::from_json(&bad, &g).is_err());
    }
}
