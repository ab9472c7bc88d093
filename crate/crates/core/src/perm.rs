//! Permutations acting on the right and permutation groups with a
//! deterministic Schreier–Sims stabilizer chain.
//!
//! Points are 0-based internally and 1-based in cycle notation. The product
//! `p.then(q)` applies `p` first, matching the right action of words on
//! cosets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// 0-based image list; rejects anything that is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Argument(format!("image list {images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    /// Builds a permutation of degree `n` from 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(Error::PointOutOfRange { point: p, degree: n });
                }
                if touched[p - 1] {
                    return Err(Error::Argument(format!("point {p} repeated in cycles")));
                }
                touched[p - 1] = true;
                images[p - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Permutation::from_images(images)
    }

    /// Parses cycle notation such as `(1,2,3)(4,5,6)`. With `degree = None`
    /// the degree is the largest point mentioned.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number = String::new();
        let mut number_start = 0;
        let flush = |number: &mut String, at: usize, cycle: &mut Vec<usize>| -> Result<()> {
            if !number.is_empty() {
                let v = number
                    .parse::<usize>()
                    .map_err(|_| Error::parse(at, format!("bad point {number:?}")))?;
                cycle.push(v);
                number.clear();
            }
            Ok(())
        };
        for (i, c) in text.char_indices() {
            match c {
                '(' if current.is_none() => current = Some(Vec::new()),
                ')' => {
                    let mut cycle = current
                        .take()
                        .ok_or_else(|| Error::parse(i, "unbalanced ')'"))?;
                    flush(&mut number, number_start, &mut cycle)?;
                    if !cycle.is_empty() {
                        cycles.push(cycle);
                    }
                }
                ',' => {
                    let cycle = current.as_mut().ok_or_else(|| Error::parse(i, "',' outside cycle"))?;
                    if number.is_empty() {
                        return Err(Error::parse(i, "empty point"));
                    }
                    flush(&mut number, number_start, cycle)?;
                }
                d if d.is_ascii_digit() && current.is_some() => {
                    if number.is_empty() {
                        number_start = i;
                    }
                    number.push(d);
                }
                w if w.is_whitespace() => {}
                other => return Err(Error::parse(i, format!("unexpected {other:?}"))),
            }
        }
        if current.is_some() {
            return Err(Error::parse(text.len(), "unclosed '('"));
        }
        let max = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = match degree {
            Some(d) if d < max => return Err(Error::PointOutOfRange { point: max, degree: d }),
            Some(d) => d,
            None => max,
        };
        Permutation::from_cycles(n, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Permutation::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    /// `x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &j)| i as u32 != j)
    }

    /// All cycles including fixed points, 0-based, each starting at its
    /// smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths (fixed points included), largest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Conjugate by relabelling: point `i` becomes `sigma(i)`.
    pub fn relabel(&self, sigma: &Permutation) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for i in 0..self.degree() {
            images[sigma.apply(i)] = sigma.images[self.apply(i)];
        }
        Permutation { images }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Image of a word under `a ↦ g0`, `b ↦ g1`, letters applied left to right.
pub fn evaluate(w: &Word, g0: &Permutation, g1: &Permutation) -> Result<Permutation> {
    if g0.degree() != g1.degree() {
        return Err(Error::DegreeMismatch {
            left: g0.degree(),
            right: g1.degree(),
        });
    }
    let g0i = g0.inverse();
    let g1i = g1.inverse();
    let mut images: Vec<u32> = (0..g0.degree() as u32).collect();
    for img in images.iter_mut() {
        *img = trace_point(*img as usize, w, [g0, &g0i, g1, &g1i]) as u32;
    }
    Ok(Permutation::from_images_unchecked(images))
}

/// Follows the 0-based point `p` through the letters of `w`.
pub fn trace_point(p: usize, w: &Word, gens: [&Permutation; 4]) -> usize {
    w.letters()
        .iter()
        .fold(p, |x, l: &Letter| gens[l.index()].apply(x))
}

/// One level of a stabilizer chain.
#[derive(Debug, Clone)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[β]` maps the base point to `β`.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; n],
        };
        level.recompute_orbit(n);
        level
    }

    fn recompute_orbit(&mut self, n: usize) {
        self.transversal = vec![None; n];
        self.transversal[self.base] = Some(Permutation::identity(n));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let beta = self.orbit[i];
            let u = self.transversal[beta].clone().expect("orbit point has a transversal");
            for s in &self.gens {
                let img = s.apply(beta);
                if self.transversal[img].is_none() {
                    self.transversal[img] = Some(u.then(s));
                    self.orbit.push(img);
                }
            }
            i += 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Deterministic Schreier–Sims. The base starts with `prefix` and is
    /// extended by the smallest point moved by each new strong generator.
    pub fn build(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                let p = g.first_moved_point().expect("non-identity");
                base.push(p);
            }
        }
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(b, degree)).collect();
        for (i, level) in levels.iter_mut().enumerate() {
            level.gens = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
            level.recompute_orbit(degree);
        }
        let mut chain = StabChain { degree, levels };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let n = self.degree;
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut jump: Option<usize> = None;
            'scan: for oi in 0..self.levels[lvl].orbit.len() {
                let beta = self.levels[lvl].orbit[oi];
                for gi in 0..self.levels[lvl].gens.len() {
                    let level = &self.levels[lvl];
                    let x = &level.gens[gi];
                    let u_beta = level.transversal[beta].as_ref().expect("orbit");
                    let img = x.apply(beta);
                    let u_img = level.transversal[img].as_ref().expect("orbit closed");
                    let h = u_beta.then(x).then(&u_img.inverse());
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.strip(h, lvl + 1);
                    if j < self.levels.len() || !residue.is_identity() {
                        if j == self.levels.len() {
                            let p = residue.first_moved_point().expect("non-identity residue");
                            self.levels.push(Level::new(p, n));
                        }
                        for l in lvl + 1..=j {
                            self.levels[l].gens.push(residue.clone());
                            self.levels[l].recompute_orbit(n);
                        }
                        jump = Some(j);
                        break 'scan;
                    }
                }
            }
            match jump {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` from level `start`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` when it went all the way).
    fn strip(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let beta = g.apply(level.base);
            match &level.transversal[beta] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    /// Strong generators of the stabilizer of the first `k` base points.
    fn level_gens(&self, k: usize) -> Vec<Permutation> {
        self.levels.get(k).map(|l| l.gens.clone()).unwrap_or_default()
    }

    fn suffix(&self, k: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels[k.min(self.levels.len())..].to_vec(),
        }
    }

    /// Every group element, as products of transversal elements.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut elems = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.orbit.len());
            for e in &elems {
                for &beta in &level.orbit {
                    next.push(e.then(level.transversal[beta].as_ref().expect("orbit")));
                }
            }
            elems = next;
        }
        elems
    }
}

/// A permutation group given by generators; its stabilizer chain is built
/// on first use.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

/// Default bound on the group order for element-list subgroup keys.
pub const DEFAULT_KEY_BOUND: u128 = 1_000_000;

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        Ok(PermGroup {
            degree,
            gens,
            chain: OnceLock::new(),
        })
    }

    fn with_chain(degree: usize, gens: Vec<Permutation>, chain: StabChain) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup { degree, gens, chain: cell }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.gens, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// The order when it fits in a `u128`.
    pub fn order_u128(&self) -> Option<u128> {
        self.order().to_u128()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn elements(&self) -> Vec<Permutation> {
        self.chain().elements()
    }

    /// Orbits on 0-based points, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.degree, &self.gens)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() <= 1
    }

    /// Stabilizer of the 0-based point `p`.
    pub fn point_stabilizer(&self, p: usize) -> Result<PermGroup> {
        self.check_point(p)?;
        let chain = StabChain::build(self.degree, &self.gens, &[p]);
        let gens = dedup(chain.level_gens(1));
        Ok(PermGroup::with_chain(self.degree, gens, chain.suffix(1)))
    }

    /// Pointwise stabilizer of the 0-based points `p ≠ q`.
    pub fn two_point_stabilizer(&self, p: usize, q: usize) -> Result<PermGroup> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p == q {
            return Err(Error::Argument(format!("two-point stabilizer needs distinct points, got {} twice", p + 1)));
        }
        let chain = StabChain::build(self.degree, &self.gens, &[p, q]);
        let gens = dedup(chain.level_gens(2));
        Ok(PermGroup::with_chain(self.degree, gens, chain.suffix(2)))
    }

    fn check_point(&self, p: usize) -> Result<()> {
        if p >= self.degree {
            return Err(Error::PointOutOfRange {
                point: p + 1,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// Key deciding equality of subgroups of a common parent: the sorted
    /// element list when the order is at most `bound`, otherwise the order
    /// together with the sorted generator cycle types.
    pub fn subgroup_key(&self, bound: u128) -> SubgroupKey {
        let order = self.order();
        if order <= BigUint::from(bound) {
            let mut elems = self.elements();
            elems.sort_unstable();
            SubgroupKey::Elements(elems)
        } else {
            let mut types: Vec<Vec<usize>> = self.gens.iter().map(Permutation::cycle_type).collect();
            types.sort_unstable();
            types.dedup();
            SubgroupKey::Coarse { order, types }
        }
    }

    /// Order plus the multiset of element cycle types (when enumerable).
    pub fn class_label(&self, bound: u128) -> StabilizerClass {
        let order = self.order();
        let mut profile = BTreeMap::new();
        if order <= BigUint::from(bound) {
            for e in self.elements() {
                *profile.entry(e.cycle_type()).or_insert(0usize) += 1;
            }
        }
        StabilizerClass { order, profile }
    }
}

fn dedup(mut gens: Vec<Permutation>) -> Vec<Permutation> {
    let mut seen = std::collections::HashSet::new();
    gens.retain(|g| seen.insert(g.clone()));
    gens
}

pub fn orbits(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubgroupKey {
    Elements(Vec<Permutation>),
    Coarse { order: BigUint, types: Vec<Vec<usize>> },
}

impl SubgroupKey {
    pub fn order(&self) -> BigUint {
        match self {
            SubgroupKey::Elements(e) => BigUint::from(e.len()),
            SubgroupKey::Coarse { order, .. } => order.clone(),
        }
    }
}

/// Coarse class of a stabilizer: abstract order, plus element cycle-type
/// counts for reporting. Geometries are grouped by order only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerClass {
    pub order: BigUint,
    pub profile: BTreeMap<Vec<usize>, usize>,
}

impl StabilizerClass {
    /// Conventional name for the orders that occur in this pipeline.
    pub fn name(&self) -> String {
        match self.order.to_u64() {
            Some(1) => "Z1".into(),
            Some(2) => "Z2".into(),
            Some(12) => "order 12 (A4 when isomorphic)".into(),
            Some(32) => "order 32 (Z2^3:Z2^2 or E32+)".into(),
            _ => format!("order {}", self.order),
        }
    }
}
