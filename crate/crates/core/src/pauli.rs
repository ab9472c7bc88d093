//! n-qubit Pauli operators `i^k X^x Z^z` with exact phases.
//!
//! Qubit `j` is bit `j` of `x` and `z`, and the leftmost letter of the text
//! form. `Y = iXZ`, so the letter `Y` contributes one to `k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{build, IncidenceStructure};

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliOp {
    n: u8,
    k: u8,
    x: u64,
    z: u64,
}

impl PauliOp {
    /// `i^k X^x Z^z` on `n` qubits.
    pub fn new(n: usize, k: u8, x: u64, z: u64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Argument(format!("at most {MAX_QUBITS} qubits, got {n}")));
        }
        let mask = mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::Argument(format!("bits beyond qubit {n}")));
        }
        Ok(PauliOp { n: n as u8, k: k % 4, x, z })
    }

    pub fn identity(n: usize) -> Self {
        PauliOp::new(n, 0, 0, 0).expect("valid size")
    }

    /// The Hermitian operator with displayed sign `+` and the given support.
    pub fn observable(n: usize, x: u64, z: u64) -> Result<Self> {
        PauliOp::new(n, ((x & z).count_ones() % 4) as u8, x, z)
    }

    pub fn qubits(&self) -> usize {
        self.n as usize
    }

    pub fn phase(&self) -> u8 {
        self.k
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Exponent of `i` in front of the letter string.
    pub fn displayed_phase(&self) -> u8 {
        ((self.k as u32 + 4 - self.y_count() % 4) % 4) as u8
    }

    fn check(&self, other: &PauliOp) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch {
                left: self.n as usize,
                right: other.n as usize,
            });
        }
        Ok(())
    }

    /// `Z^z1 X^x2 = (−1)^(z1·x2) X^x2 Z^z1`.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp> {
        self.check(other)?;
        let swap = 2 * ((self.z & other.x).count_ones() % 2);
        Ok(PauliOp {
            n: self.n,
            k: ((self.k as u32 + other.k as u32 + swap) % 4) as u8,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// Symplectic criterion `x1·z2 + z1·x2 ≡ 0 (mod 2)`.
    pub fn commutes(&self, other: &PauliOp) -> Result<bool> {
        self.check(other)?;
        Ok(((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.k as u32 % 2 == self.y_count() % 2
    }

    /// `Some(±1)` when the operator is `±I`.
    pub fn identity_sign(&self) -> Option<i8> {
        match (self.x, self.z, self.k) {
            (0, 0, 0) => Some(1),
            (0, 0, 2) => Some(-1),
            _ => None,
        }
    }

    /// The same support with displayed sign `+`.
    pub fn without_phase(&self) -> PauliOp {
        PauliOp::observable(self.n as usize, self.x, self.z).expect("same size")
    }

    /// Parses an optional `+`, `-`, `i`, `-i` prefix followed by letters from
    /// `IXYZ`.
    pub fn parse(text: &str) -> Result<PauliOp> {
        let t = text.trim();
        let (shown, rest) = if let Some(r) = t.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else {
            (0, t)
        };
        let offset = t.len() - rest.len();
        let n = rest.chars().count();
        if n == 0 {
            return Err(Error::parse(offset, "expected at least one of I, X, Y, Z"));
        }
        if n > MAX_QUBITS {
            return Err(Error::parse(offset, format!("at most {MAX_QUBITS} qubits")));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (j, c) in rest.chars().enumerate() {
            let (xb, zb) = match c {
                'I' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                other => return Err(Error::parse(offset + j, format!("unexpected {other:?}"))),
            };
            x |= xb << j;
            z |= zb << j;
        }
        let ys = (x & z).count_ones();
        PauliOp::new(n, ((shown + ys) % 4) as u8, x, z)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.displayed_phase() as usize];
        f.write_str(prefix)?;
        for j in 0..self.n {
            let c = match ((self.x >> j) & 1, (self.z >> j) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Product signs of a set of operator contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextVerdict {
    /// `±1` per line, in input order.
    pub signs: Vec<i8>,
    pub negative_lines: usize,
    /// True when the count of `−I` lines is odd, which no assignment of
    /// `±1` values can reproduce.
    pub valid: bool,
}

/// Checks that every line is mutually commuting with product `±I`.
fn verify_lines(ops: &[PauliOp], lines: &[Vec<usize>], describe: impl Fn(usize) -> String) -> Result<ContextVerdict> {
    let mut signs = Vec::with_capacity(lines.len());
    for (li, line) in lines.iter().enumerate() {
        for (i, &p) in line.iter().enumerate() {
            for &q in &line[i + 1..] {
                if !ops[p].commutes(&ops[q])? {
                    return Err(Error::Verification(format!(
                        "{}: {} and {} anticommute",
                        describe(li),
                        ops[p],
                        ops[q]
                    )));
                }
            }
        }
        let mut product = PauliOp::identity(ops[line[0]].qubits());
        for &p in line {
            product = product.multiply(&ops[p])?;
        }
        let sign = product.identity_sign().ok_or_else(|| {
            Error::Verification(format!("{}: product is {product}, not ±identity", describe(li)))
        })?;
        signs.push(sign);
    }
    let negative_lines = signs.iter().filter(|&&s| s < 0).count();
    Ok(ContextVerdict {
        signs,
        negative_lines,
        valid: negative_lines % 2 == 1,
    })
}

/// Rows then columns of a 3×3 grid of two-qubit operators.
pub fn verify_mermin_square(ops: &[[PauliOp; 3]; 3]) -> Result<ContextVerdict> {
    let flat: Vec<PauliOp> = ops.iter().flatten().copied().collect();
    if let Some(op) = flat.iter().find(|o| o.qubits() != 2) {
        return Err(Error::DegreeMismatch { left: 2, right: op.qubits() });
    }
    let mut lines: Vec<Vec<usize>> = (0..3).map(|r| (0..3).map(|c| 3 * r + c).collect()).collect();
    lines.extend((0..3).map(|c| (0..3).map(|r| 3 * r + c).collect()));
    verify_lines(&flat, &lines, |i| {
        if i < 3 {
            format!("row {}", i + 1)
        } else {
            format!("column {}", i - 2)
        }
    })
}

/// Ten three-qubit operators on five 4-point lines, each point on exactly
/// two lines.
pub fn verify_pentagram(ops: &[PauliOp; 10], lines: &[[usize; 4]; 5]) -> Result<ContextVerdict> {
    if let Some(op) = ops.iter().find(|o| o.qubits() != 3) {
        return Err(Error::DegreeMismatch { left: 3, right: op.qubits() });
    }
    let mut count = [0usize; 10];
    for line in lines {
        for &p in line {
            if p >= 10 {
                return Err(Error::PointOutOfRange { point: p + 1, degree: 10 });
            }
            count[p] += 1;
        }
    }
    if let Some(p) = count.iter().position(|&c| c != 2) {
        return Err(Error::Argument(format!("point {} lies on {} lines, expected 2", p + 1, count[p])));
    }
    let lines: Vec<Vec<usize>> = lines.iter().map(|l| l.to_vec()).collect();
    verify_lines(ops, &lines, |i| format!("line {}", i + 1))
}

/// Nonidentity Hermitian `n`-qubit operators with sign `+`, in `(x, z)`
/// order.
fn observables(n: usize) -> Vec<PauliOp> {
    let top = 1u64 << n;
    (0..top)
        .flat_map(|x| (0..top).map(move |z| (x, z)))
        .filter(|&(x, z)| x | z != 0)
        .map(|(x, z)| PauliOp::observable(n, x, z).expect("in range"))
        .collect()
}

/// First Mermin square in lexicographic search order over two-qubit
/// observables; the last entry of each row and column is fixed by the
/// other two.
pub fn find_mermin_square() -> Option<[[PauliOp; 3]; 3]> {
    let obs = observables(2);
    let third = |a: &PauliOp, b: &PauliOp| -> Option<PauliOp> {
        let c = a.multiply(b).ok()?.without_phase();
        (a.commutes(b).ok()? && c.identity_sign().is_none()).then_some(c)
    };
    for &a in &obs {
        for &b in &obs {
            let Some(c) = third(&a, &b) else { continue };
            for &d in &obs {
                for &e in &obs {
                    let Some(f) = third(&d, &e) else { continue };
                    let (Some(g), Some(h), Some(i)) = (third(&a, &d), third(&b, &e), third(&c, &f)) else {
                        continue;
                    };
                    let grid = [[a, b, c], [d, e, f], [g, h, i]];
                    let mut all: Vec<PauliOp> = grid.iter().flatten().copied().collect();
                    all.sort_unstable();
                    all.dedup();
                    if all.len() < 9 {
                        continue;
                    }
                    if matches!(verify_mermin_square(&grid), Ok(v) if v.valid) {
                        return Some(grid);
                    }
                }
            }
        }
    }
    None
}

/// Lines of the pentagram template: line `l` holds the points `{l, m}`,
/// numbered as pairs of `0..5` in lexicographic order.
pub fn pentagram_lines() -> [[usize; 4]; 5] {
    let s = build("pentagram").expect("catalog entry");
    let mut out = [[0; 4]; 5];
    for (i, l) in s.lines().iter().enumerate() {
        out[i].copy_from_slice(l);
    }
    out
}

/// First operator assignment to [`pentagram_lines`] that verifies with an
/// odd number of `−I` lines.
pub fn find_pentagram() -> Option<[PauliOp; 10]> {
    let lines = pentagram_lines();
    let obs = observables(3);
    let mut assignment: [Option<PauliOp>; 10] = [None; 10];
    pentagram_extend(&lines, &obs, &mut assignment, 0)
}

fn pentagram_extend(
    lines: &[[usize; 4]; 5],
    obs: &[PauliOp],
    assignment: &mut [Option<PauliOp>; 10],
    p: usize,
) -> Option<[PauliOp; 10]> {
    if p == 10 {
        let ops = assignment.map(|o| o.expect("assigned"));
        return matches!(verify_pentagram(&ops, lines), Ok(v) if v.valid).then_some(ops);
    }
    let on: Vec<&[usize; 4]> = lines.iter().filter(|l| l.contains(&p)).collect();
    for &op in obs {
        if assignment.iter().flatten().any(|o| *o == op) {
            continue;
        }
        let fits = on.iter().all(|line| {
            let others: Vec<PauliOp> = line.iter().filter(|&&q| q != p).filter_map(|&q| assignment[q]).collect();
            if !others.iter().all(|o| o.commutes(&op).expect("same size")) {
                return false;
            }
            if others.len() == 3 {
                let product = others.iter().fold(op, |acc, o| acc.multiply(o).expect("same size"));
                return product.identity_sign().is_some();
            }
            true
        });
        if fits {
            assignment[p] = Some(op);
            if let Some(found) = pentagram_extend(lines, obs, assignment, p + 1) {
                return Some(found);
            }
            assignment[p] = None;
        }
    }
    None
}

/// The `2ⁿ − 1` nontrivial products of `n` independent commuting generators,
/// with triads `{A, B, AB}`. Point `m − 1` is the product of the generators
/// selected by the bits of `m`, signed `+`.
pub fn max_commuting_geometry(generators: &[PauliOp]) -> Result<(IncidenceStructure, Vec<PauliOp>)> {
    let n = generators.len();
    if n == 0 || n > 16 {
        return Err(Error::Argument(format!("expected 1 to 16 generators, got {n}")));
    }
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[i + 1..] {
            if !a.commutes(b)? {
                return Err(Error::Verification(format!("generators {a} and {b} anticommute")));
            }
        }
    }
    let top = 1usize << n;
    let mut ops = Vec::with_capacity(top - 1);
    for m in 1..top {
        let mut product = PauliOp::identity(generators[0].qubits());
        for (j, g) in generators.iter().enumerate() {
            if (m >> j) & 1 == 1 {
                product = product.multiply(g)?;
            }
        }
        if product.identity_sign().is_some() {
            return Err(Error::Verification("generators are dependent over GF(2)".into()));
        }
        ops.push(product.without_phase());
    }
    let mut lines = Vec::new();
    for u in 1..top {
        for v in (u + 1)..top {
            let w = u ^ v;
            if w > v {
                let product = ops[u - 1].multiply(&ops[v - 1])?.multiply(&ops[w - 1])?;
                if product.identity_sign().is_none() {
                    return Err(Error::Invariant(format!("triad product {product} is not ±identity")));
                }
                lines.push(vec![u - 1, v - 1, w - 1]);
            }
        }
    }
    let s = IncidenceStructure::new(top - 1, lines, Some(format!("maximal commuting set, {n} qubits")))?;
    Ok((s, ops))
}
