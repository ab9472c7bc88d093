//! Produces the stored GH(2,2) artifacts by the dessin route.
//!
//! The split Cayley hexagon is built as a reference from the quadric
//! `x0x4 + x1x5 + x2x6 = x3²` in PG(6,2). Its automorphism group supplies
//! every generating pair `(g0, g1)` with `g0⁴ = g1² = (g0g1)⁷ = [g0,g1]⁶ = 1`.
//! Each pair acting on points or on lines is the coset action of an index-63
//! subgroup of `⟨a,b | b², a⁴, (ab)⁷, (a,b)⁶⟩`, so its dessin is one that a
//! complete low-index search would report. The hexagon and its dual are then
//! re-extracted from those dessins by two-point stabilizers.
//!
//! Usage: `cargo run --release -p cosetgeo --example hexagon [-- --write]`

use std::collections::HashSet;

use cosetgeo::{
    best_labeling, extract_geometries, Candidate, CommutationMode, Dessin, IncidenceStructure, PermGroup, Permutation,
    Presentation,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;

const ORDER: u64 = 12096;

fn hexagon() -> IncidenceStructure {
    let bit = |v: u32, i: u32| (v >> i) & 1;
    let q = |v: u32| (bit(v, 0) & bit(v, 4)) ^ (bit(v, 1) & bit(v, 5)) ^ (bit(v, 2) & bit(v, 6)) ^ bit(v, 3);
    let points: Vec<u32> = (1..128).filter(|&v| q(v) == 0).collect();
    let index = |v: u32| points.iter().position(|&p| p == v).expect("singular point");
    // Grassmann coordinate p_ij of the line through u and v.
    let p = |u: u32, v: u32, i: u32, j: u32| (bit(u, i) & bit(v, j)) ^ (bit(u, j) & bit(v, i));
    let mut lines = Vec::new();
    for (k, &u) in points.iter().enumerate() {
        for &v in &points[k + 1..] {
            let w = u ^ v;
            if q(w) != 0 || w < v {
                continue;
            }
            let on_hexagon = p(u, v, 1, 2) == p(u, v, 3, 4)
                && p(u, v, 4, 5) == p(u, v, 2, 3)
                && p(u, v, 0, 2) == p(u, v, 3, 5)
                && p(u, v, 5, 6) == p(u, v, 0, 3)
                && p(u, v, 0, 1) == p(u, v, 3, 6)
                && p(u, v, 4, 6) == p(u, v, 1, 3);
            if on_hexagon {
                lines.push(vec![index(u), index(v), index(w)]);
            }
        }
    }
    IncidenceStructure::new(points.len(), lines, None).expect("valid hexagon")
}

/// Automorphisms from isomorphisms onto randomly relabelled copies.
fn automorphism_group(s: &IncidenceStructure) -> PermGroup {
    let n = s.points();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut gens = Vec::new();
    loop {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        let sigma = Permutation::from_images(images).expect("bijection");
        let map = s.isomorphism(&s.relabel(&sigma).expect("same size")).expect("relabelled copy");
        let iso = Permutation::from_images(map).expect("bijection");
        gens.push(iso.then(&sigma.inverse()));
        let g = PermGroup::new(n, gens.clone()).expect("same degree");
        if g.order() >= ORDER.into() {
            return g;
        }
    }
}

/// Action of a point permutation on the lines of `s`.
fn line_action(s: &IncidenceStructure, g: &Permutation) -> Permutation {
    let images = s
        .lines()
        .iter()
        .map(|l| {
            let mut image: Vec<usize> = l.iter().map(|&p| g.apply(p)).collect();
            image.sort_unstable();
            s.lines().iter().position(|m| *m == image).expect("line image")
        })
        .collect();
    Permutation::from_images(images).expect("bijection")
}

/// One representative `(g0, g1)` per conjugacy class of generating pairs
/// satisfying the relators.
fn generating_pairs(g: &PermGroup) -> Vec<(Permutation, Permutation)> {
    let elements = g.elements();
    let involutions: Vec<&Permutation> = elements.iter().filter(|e| e.pow(2).is_identity()).collect();
    let mut seen_classes: HashSet<Permutation> = HashSet::new();
    let mut pairs = Vec::new();
    for x in elements.iter().filter(|e| e.pow(4).is_identity() && !e.pow(2).is_identity()) {
        if seen_classes.contains(x) {
            continue;
        }
        for h in &elements {
            seen_classes.insert(h.inverse().then(x).then(h));
        }
        let centralizer: Vec<&Permutation> = elements.iter().filter(|h| x.then(h) == h.then(x)).collect();
        let mut seen: HashSet<Permutation> = HashSet::new();
        for &y in &involutions {
            if seen.contains(y) {
                continue;
            }
            let relators = x.then(y).pow(7).is_identity() && x.commutator(y).pow(6).is_identity();
            if !relators {
                continue;
            }
            let sub = PermGroup::new(g.degree(), vec![x.clone(), y.clone()]).expect("same degree");
            if sub.order() != ORDER.into() {
                continue;
            }
            for h in &centralizer {
                seen.insert(h.inverse().then(y).then(h));
            }
            pairs.push((x.clone(), y.clone()));
        }
    }
    pairs
}

fn relators_hold(d: &Dessin) -> bool {
    let p = Presentation::g_double_prime();
    p.relators().iter().all(|r| d.evaluate(r).is_identity())
}

fn main() {
    let write = std::env::args().any(|a| a == "--write");
    let s = hexagon();
    let dual = s.dual().expect("dual");
    let verdict = s.polygon_check(6, (2, 2)).expect("connected");
    assert!(verdict.passed, "reference hexagon fails the polygon axioms");
    assert!(!s.is_isomorphic(&dual));
    let g = automorphism_group(&s);
    println!("reference hexagon: 63 points, 63 lines, |Aut| = {}", g.order());

    let pairs = generating_pairs(&g);
    println!("{} classes of generating pairs", pairs.len());
    let mut outputs = Vec::new();
    for (x, y) in &pairs {
        for on_lines in [false, true] {
            let (g0, g1) = if on_lines { (line_action(&s, x), line_action(&s, y)) } else { (x.clone(), y.clone()) };
            let d = Dessin::from_pair(g0, g1).expect("transitive");
            assert!(relators_hold(&d));
            let sig = d.signature();
            for geo in extract_geometries(&d) {
                let st = &geo.structure;
                let kind = if st.is_isomorphic(&s) {
                    "GH(2,2)"
                } else if st.is_isomorphic(&dual) {
                    "dual GH(2,2)"
                } else {
                    continue;
                };
                let candidates: Vec<Candidate> = d
                    .labels_variants()
                    .into_iter()
                    .enumerate()
                    .map(|(variant, labels)| Candidate {
                        dessin: d.clone(),
                        labels,
                        variant,
                        structure: st.clone(),
                    })
                    .collect();
                let (it, _) = best_labeling(st, &candidates, CommutationMode::Iterated).expect("scored");
                let (pw, _) = best_labeling(st, &candidates, CommutationMode::Pairwise).expect("scored");
                println!(
                    "{} on {}: order {} signature ({},{},{},{}) class {} -> {kind}, iterated u={} pairwise u={}",
                    if on_lines { "lines" } else { "points" },
                    d.degree(),
                    d.group().order(),
                    sig.black,
                    sig.white,
                    sig.faces,
                    sig.genus,
                    geo.class.name(),
                    it.u,
                    pw.u
                );
                outputs.push((kind, d.clone(), st.clone()));
            }
        }
    }
    if write {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
        for (kind, stem) in [("GH(2,2)", "gh22"), ("dual GH(2,2)", "gh22_dual")] {
            let (_, d, st) = outputs.iter().find(|(k, ..)| *k == kind).expect("found by the dessin route");
            std::fs::write(format!("{dir}/{stem}.json"), st.clone().with_name(kind).to_json().expect("json")).expect("write");
            std::fs::write(format!("{dir}/{stem}_dessin.json"), d.to_json().expect("json")).expect("write");
        }
        println!("wrote {dir}");
    }
}
