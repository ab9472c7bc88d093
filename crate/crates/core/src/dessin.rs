//! Dessins d'enfants (bicolored hypermaps) given by a transitive pair of
//! permutations on the edges.
//!
//! Black vertices are the cycles of `g0`, white vertices the cycles of `g1`
//! and faces the cycles of `g∞ = (g0·g1)⁻¹`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coset::{bfs_order, CosetTable};
use crate::error::{Error, Result};
use crate::perm::{evaluate, PermGroup, Permutation};
use crate::words::{Letter, Word};

/// Cycle-length multisets of `g0`, `g1` and `g∞`, each sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Passport {
    pub black: Vec<usize>,
    pub white: Vec<usize>,
    pub faces: Vec<usize>,
}

/// `(B, W, F, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub black: usize,
    pub white: usize,
    pub faces: usize,
    pub genus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dessin {
    g0: Permutation,
    g1: Permutation,
    g_inf: Permutation,
    labels: Vec<Word>,
    genus: usize,
}

/// Canonical form under simultaneous relabelling; equal iff isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u32>);

impl Dessin {
    pub fn from_pair(g0: Permutation, g1: Permutation) -> Result<Self> {
        // Rejects mismatched degrees and intransitive pairs.
        CosetTable::from_permutations(&g0, &g1)?;
        let g_inf = g0.then(&g1).inverse();
        let genus = genus_of(&g0, &g1, &g_inf)?;
        let labels = labels_by_edge(&raw_rows(&g0, &g1), &Letter::ALL);
        Ok(Dessin {
            labels,
            g0,
            g1,
            g_inf,
            genus,
        })
    }

    pub fn from_coset_table(t: &CosetTable) -> Result<Self> {
        let (g0, g1) = t.coset_action();
        Dessin::from_pair(g0, g1)
    }

    /// Parses a pair in cycle notation on `n` points.
    pub fn parse(n: usize, g0: &str, g1: &str) -> Result<Self> {
        Dessin::from_pair(Permutation::parse(g0, Some(n))?, Permutation::parse(g1, Some(n))?)
    }

    pub fn degree(&self) -> usize {
        self.g0.degree()
    }

    pub fn g0(&self) -> &Permutation {
        &self.g0
    }

    pub fn g1(&self) -> &Permutation {
        &self.g1
    }

    pub fn g_inf(&self) -> &Permutation {
        &self.g_inf
    }

    /// Default edge labels: breadth-first coset representatives with letter
    /// priority `a, a⁻¹, b, b⁻¹`.
    pub fn labels(&self) -> &[Word] {
        &self.labels
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn signature(&self) -> Signature {
        Signature {
            black: self.g0.cycle_count(),
            white: self.g1.cycle_count(),
            faces: self.g_inf.cycle_count(),
            genus: self.genus,
        }
    }

    pub fn passport(&self) -> Passport {
        Passport {
            black: self.g0.cycle_type(),
            white: self.g1.cycle_type(),
            faces: self.g_inf.cycle_type(),
        }
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.degree(), vec![self.g0.clone(), self.g1.clone()]).expect("equal degrees")
    }

    pub fn evaluate(&self, w: &Word) -> Permutation {
        evaluate(w, &self.g0, &self.g1).expect("equal degrees")
    }

    fn raw(&self) -> Vec<[u32; 4]> {
        raw_rows(&self.g0, &self.g1)
    }

    /// Least breadth-first renumbering over all base edges.
    pub fn canonical(&self) -> CanonicalForm {
        let raw = self.raw();
        let best = (0..self.degree())
            .map(|base| {
                CosetTable::from_raw(&raw, base)
                    .expect("transitive")
                    .flat()
            })
            .min()
            .unwrap_or_default();
        CanonicalForm(best)
    }

    pub fn is_isomorphic(&self, other: &Dessin) -> bool {
        self.degree() == other.degree()
            && self.passport() == other.passport()
            && self.canonical() == other.canonical()
    }

    /// Simultaneous conjugation: edge `i` becomes `sigma(i)`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Dessin> {
        Dessin::from_pair(self.g0.relabel(sigma), self.g1.relabel(sigma))
    }

    /// Breadth-first transversals for each of the six priority orders of
    /// `a, a⁻¹, b` (with `b⁻¹` last), deduplicated, default order first.
    pub fn labels_variants(&self) -> Vec<Vec<Word>> {
        let raw = self.raw();
        let mut out: Vec<Vec<Word>> = Vec::new();
        for order in PRIORITY_ORDERS {
            let labels = labels_by_edge(&raw, &[order[0], order[1], order[2], Letter::BInv]);
            if !out.contains(&labels) {
                out.push(labels);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let file = DessinFile {
            n: self.degree(),
            g0: self.g0.to_string(),
            g1: self.g1.to_string(),
            labels: Some(self.labels.clone()),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Reads `{"n", "g0", "g1", "labels"?}`; supplied labels must be sound
    /// and are returned alongside the dessin.
    pub fn from_json(text: &str) -> Result<(Dessin, Option<Vec<Word>>)> {
        let file: DessinFile = serde_json::from_str(text)?;
        let d = Dessin::parse(file.n, &file.g0, &file.g1)?;
        if let Some(labels) = &file.labels {
            d.check_labels(labels)?;
        }
        Ok((d, file.labels))
    }

    /// Every label must carry edge 1 to its own edge.
    pub fn check_labels(&self, labels: &[Word]) -> Result<()> {
        if labels.len() != self.degree() {
            return Err(Error::Argument(format!(
                "{} labels for {} edges",
                labels.len(),
                self.degree()
            )));
        }
        for (k, w) in labels.iter().enumerate() {
            if self.evaluate(w).apply(0) != k {
                return Err(Error::Argument(format!("label {w} does not map edge 1 to edge {}", k + 1)));
            }
        }
        Ok(())
    }

    /// Graphviz drawing: black and white vertices joined by labelled edges.
    pub fn to_dot(&self, labels: &[Word]) -> String {
        let mut s = String::from("graph dessin {\n  node [shape=circle, label=\"\"];\n");
        let black = self.g0.cycles();
        let white = self.g1.cycles();
        for i in 0..black.len() {
            let _ = writeln!(s, "  b{i} [style=filled, fillcolor=black];");
        }
        for i in 0..white.len() {
            let _ = writeln!(s, "  w{i} [style=filled, fillcolor=white];");
        }
        let owner = |cycles: &[Vec<usize>], e: usize| cycles.iter().position(|c| c.contains(&e)).expect("cycle");
        for e in 0..self.degree() {
            let label = labels.get(e).map(Word::to_string).unwrap_or_default();
            let _ = writeln!(
                s,
                "  b{} -- w{} [label=\"{}: {}\"];",
                owner(&black, e),
                owner(&white, e),
                e + 1,
                label
            );
        }
        s.push_str("}\n");
        s
    }
}

const PRIORITY_ORDERS: [[Letter; 3]; 6] = [
    [Letter::A, Letter::AInv, Letter::B],
    [Letter::A, Letter::B, Letter::AInv],
    [Letter::AInv, Letter::A, Letter::B],
    [Letter::AInv, Letter::B, Letter::A],
    [Letter::B, Letter::A, Letter::AInv],
    [Letter::B, Letter::AInv, Letter::A],
];

fn raw_rows(g0: &Permutation, g1: &Permutation) -> Vec<[u32; 4]> {
    let (i0, i1) = (g0.inverse(), g1.inverse());
    (0..g0.degree())
        .map(|c| [g0.apply(c) as u32, i0.apply(c) as u32, g1.apply(c) as u32, i1.apply(c) as u32])
        .collect()
}

/// Breadth-first words from edge 0, indexed by the edge they reach.
fn labels_by_edge(raw: &[[u32; 4]], letters: &[Letter]) -> Vec<Word> {
    let (edges, words) = bfs_order(raw, 0, letters).expect("complete transitive table");
    let mut labels = vec![Word::identity(); raw.len()];
    for (e, w) in edges.into_iter().zip(words) {
        labels[e] = w;
    }
    labels
}

/// `2 − 2g = B + W + F − n`.
fn genus_of(g0: &Permutation, g1: &Permutation, g_inf: &Permutation) -> Result<usize> {
    let n = g0.degree() as i64;
    let chi = (g0.cycle_count() + g1.cycle_count() + g_inf.cycle_count()) as i64 - n;
    let twice = 2 - chi;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Invariant(format!("Euler characteristic {chi} gives no integral genus")));
    }
    Ok((twice / 2) as usize)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DessinFile {
    n: usize,
    g0: String,
    g1: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Word>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;
    use proptest::prelude::*;

    fn p1() -> Dessin {
        Dessin::parse(6, "(1,2,3)(4,5,6)", "(2,4)(3,5)").unwrap()
    }

    fn p2() -> Dessin {
        Dessin::parse(6, "(1,2,4,6,5,3)", "(2,3)(4,5)").unwrap()
    }

    fn names(ws: &[Word]) -> Vec<String> {
        ws.iter().map(Word::to_string).collect()
    }

    #[test]
    fn p1_structure() {
        let d = p1();
        let s = d.signature();
        assert_eq!((d.degree(), s.black, s.white, s.faces, s.genus), (6, 2, 4, 2, 0));
        assert_eq!(names(d.labels()), ["e", "a", "A", "ab", "Ab", "abA"]);
        assert_eq!(
            d.passport(),
            Passport {
                black: vec![3, 3],
                white: vec![2, 2, 1, 1],
                faces: vec![3, 3]
            }
        );
        assert!(d.g0().then(d.g1()).then(d.g_inf()).is_identity());
    }

    #[test]
    fn p2_structure() {
        let d = p2();
        let s = d.signature();
        assert_eq!((s.black, s.white, s.faces, s.genus), (1, 4, 3, 0));
        assert_eq!(
            d.passport(),
            Passport {
                black: vec![6],
                white: vec![2, 2, 1, 1],
                faces: vec![2, 2, 2]
            }
        );
        assert!(!d.is_isomorphic(&p1()));
    }

    #[test]
    fn single_edge() {
        let d = Dessin::from_pair(Permutation::identity(1), Permutation::identity(1)).unwrap();
        let s = d.signature();
        assert_eq!((s.black, s.white, s.faces, s.genus), (1, 1, 1, 0));
        assert_eq!(
            d.passport(),
            Passport {
                black: vec![1],
                white: vec![1],
                faces: vec![1]
            }
        );
        assert_eq!(d.labels_variants(), vec![vec![Word::identity()]]);
    }

    #[test]
    fn intransitive_pair_is_rejected() {
        let err = Dessin::parse(4, "(1,2)", "(1,2)").unwrap_err();
        assert_eq!(
            err,
            Error::Intransitive {
                orbits: vec![vec![1, 2], vec![3], vec![4]]
            }
        );
    }

    #[test]
    fn variants_include_default_and_single_generator_labels() {
        let d = p1();
        let variants = d.labels_variants();
        assert_eq!(variants[0], d.labels());
        assert!(variants.len() > 1);
        // A 7-cycle with g1 fixing every point reached first by powers of a.
        let fano = Dessin::parse(7, "(1,2,3,4,5,6,7)", "(1,2)").unwrap();
        let labels = &fano.labels_variants()[0];
        assert!(labels.iter().all(Word::is_power_of_a));
        assert_eq!(names(labels), ["e", "a", "aa", "aaa", "AAA", "AA", "A"]);
    }

    #[test]
    fn json_and_dot() {
        let d = p1();
        let (back, labels) = Dessin::from_json(&d.to_json().unwrap()).unwrap();
        assert_eq!(back, d);
        assert_eq!(labels.unwrap(), d.labels());
        let bad = r#"{"n": 6, "g0": "(1,2,3)(4,5,6)", "g1": "(2,4)(3,5)", "labels": ["", "A", "a", "ab", "Ab", "abA"]}"#;
        assert!(Dessin::from_json(bad).is_err());
        let dot = d.to_dot(d.labels());
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert!(dot.contains("abA"));
    }

    #[test]
    fn self_isomorphic() {
        assert!(p1().is_isomorphic(&p1()));
        let label = parse_word("abA").unwrap();
        assert_eq!(p1().evaluate(&label).apply(0), 5);
    }

    fn arb_transitive(n: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
        let perm = move || {
            Just((0..n).collect::<Vec<usize>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::from_images(v).unwrap())
        };
        (perm(), perm()).prop_filter("transitive", move |(a, b)| {
            crate::perm::orbits(n, &[a.clone(), b.clone()]).len() == 1
        })
    }

    proptest! {
        #[test]
        fn dessin_invariants((g0, g1) in (1usize..=9).prop_flat_map(arb_transitive)) {
            let d = Dessin::from_pair(g0, g1).unwrap();
            let n = d.degree();
            prop_assert!(d.g0().then(d.g1()).then(d.g_inf()).is_identity());
            let s = d.signature();
            prop_assert_eq!((s.black + s.white + s.faces + n) % 2, 0);
            let pp = d.passport();
            for m in [&pp.black, &pp.white, &pp.faces] {
                prop_assert_eq!(m.iter().sum::<usize>(), n);
            }
            for (k, w) in d.labels().iter().enumerate() {
                prop_assert_eq!(d.evaluate(w).apply(0), k);
            }
            for variant in d.labels_variants() {
                d.check_labels(&variant).unwrap();
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn canonical_is_conjugation_invariant(
            ((g0, g1), sigma) in (2usize..=9).prop_flat_map(|n| (
                arb_transitive(n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap()),
            ))
        ) {
            let d = Dessin::from_pair(g0, g1).unwrap();
            let e = d.relabel(&sigma).unwrap();
            prop_assert_eq!(d.canonical(), e.canonical());
            prop_assert!(d.is_isomorphic(&e));
        }
    }
}
