//! The coset-commutator test on lines of a dessin-stabilized geometry.
//!
//! A line is good when its point labels, mapped to permutations through the
//! coset action, satisfy the commutation law. In iterated mode this means
//! the left-normed commutator `((x1, x2), …, xp)` is the identity for every
//! ordering; in pairwise mode every two labels commute.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::dessin::Dessin;
use crate::error::{Error, Result};
use crate::geometry::IncidenceStructure;
use crate::perm::Permutation;
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommutationMode {
    #[default]
    Iterated,
    Pairwise,
}

impl CommutationMode {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "iterated" => Ok(CommutationMode::Iterated),
            "pairwise" => Ok(CommutationMode::Pairwise),
            other => Err(Error::Argument(format!("unknown mode {other:?}; expected iterated or pairwise"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CommutationMode::Iterated => "iterated",
            CommutationMode::Pairwise => "pairwise",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineVerdict {
    pub commuting: bool,
    /// Positions (into the input words) of a violating ordering, or of a
    /// non-commuting pair in pairwise mode.
    pub witness: Option<Vec<usize>>,
}

/// Tests one line given its label words.
pub fn line_commuting(words: &[Word], d: &Dessin, mode: CommutationMode) -> Result<LineVerdict> {
    if words.len() < 2 {
        return Err(Error::Argument(format!("a line needs at least two labels, got {}", words.len())));
    }
    let images: Vec<Permutation> = words.iter().map(|w| d.evaluate(w)).collect();
    Ok(images_commuting(&images, mode))
}

fn images_commuting(images: &[Permutation], mode: CommutationMode) -> LineVerdict {
    let p = images.len();
    match mode {
        CommutationMode::Pairwise => {
            for i in 0..p {
                for j in (i + 1)..p {
                    if !images[i].commutator(&images[j]).is_identity() {
                        return LineVerdict {
                            commuting: false,
                            witness: Some(vec![i, j]),
                        };
                    }
                }
            }
        }
        CommutationMode::Iterated => {
            let mut order: Vec<usize> = (0..p).collect();
            loop {
                let mut acc = images[order[0]].clone();
                for &k in &order[1..] {
                    acc = acc.commutator(&images[k]);
                }
                if !acc.is_identity() {
                    return LineVerdict {
                        commuting: false,
                        witness: Some(order),
                    };
                }
                if !next_permutation(&mut order) {
                    break;
                }
            }
        }
    }
    LineVerdict {
        commuting: true,
        witness: None,
    }
}

/// Advances to the next ordering in lexicographic order; false after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualityReport {
    pub l: usize,
    pub u: usize,
    /// 0-based indices of the lines that fail the law.
    pub defective: Vec<usize>,
    pub mode: CommutationMode,
    pub labels: Vec<Word>,
    pub witnesses: Vec<Option<Vec<usize>>>,
}

impl ContextualityReport {
    /// `(l − u) / l`; zero for a structure without lines.
    pub fn c(&self) -> Rational64 {
        if self.l == 0 {
            return Rational64::from_integer(0);
        }
        Rational64::new((self.l - self.u) as i64, self.l as i64)
    }

    /// `l / u`, undefined when no line is good.
    pub fn l_over_u(&self) -> Option<Rational64> {
        (self.u > 0).then(|| Rational64::new(self.l as i64, self.u as i64))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let ratio = self.l_over_u();
        serde_json::json!({
            "l": self.l,
            "u": self.u,
            "c": self.c().to_string(),
            "l_over_u": ratio.map(|r| r.to_string()),
            "l_over_u_decimal": ratio.map(|r| *r.numer() as f64 / *r.denom() as f64),
            "mode": self.mode.as_str(),
            "defective_lines": self.defective.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "labels": self.labels.iter().map(Word::to_string).collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json_value())?)
    }
}

/// Scores every line of `g`, whose points are the edges of `d` labelled by
/// `labels`.
pub fn score(g: &IncidenceStructure, labels: &[Word], d: &Dessin, mode: CommutationMode) -> Result<ContextualityReport> {
    if labels.len() != g.points() || g.points() != d.degree() {
        return Err(Error::Argument(format!(
            "{} labels for a {}-point geometry on a degree-{} dessin",
            labels.len(),
            g.points(),
            d.degree()
        )));
    }
    let images: Vec<Permutation> = labels.iter().map(|w| d.evaluate(w)).collect();
    let verdicts: Vec<LineVerdict> = g
        .lines()
        .iter()
        .map(|line| {
            let on_line: Vec<Permutation> = line.iter().map(|&p| images[p].clone()).collect();
            images_commuting(&on_line, mode)
        })
        .collect();
    let defective: Vec<usize> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.commuting)
        .map(|(i, _)| i)
        .collect();
    Ok(ContextualityReport {
        l: g.line_count(),
        u: g.line_count() - defective.len(),
        defective,
        mode,
        labels: labels.to_vec(),
        witnesses: verdicts.into_iter().map(|v| v.witness).collect(),
    })
}

/// A dessin, one of its labelings, and the geometry it stabilizes on its
/// own edge numbering.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub dessin: Dessin,
    pub labels: Vec<Word>,
    pub variant: usize,
    pub structure: IncidenceStructure,
}

/// The candidate with the most good lines; ties go to the least canonical
/// dessin form, then the earliest labeling variant, then input order.
pub fn best_labeling(g: &IncidenceStructure, candidates: &[Candidate], mode: CommutationMode) -> Result<(ContextualityReport, usize)> {
    if candidates.is_empty() {
        return Err(Error::Argument("no candidate labelings".into()));
    }
    let mut best: Option<(ContextualityReport, usize, crate::dessin::CanonicalForm)> = None;
    for (i, cand) in candidates.iter().enumerate() {
        if !cand.structure.is_isomorphic(g) {
            return Err(Error::Argument(format!("candidate {} does not stabilize the target geometry", i + 1)));
        }
        let report = score(&cand.structure, &cand.labels, &cand.dessin, mode)?;
        let canon = cand.dessin.canonical();
        let better = match &best {
            None => true,
            Some((r, j, c)) => {
                report.u > r.u
                    || (report.u == r.u && (&canon, cand.variant) < (c, candidates[*j].variant))
            }
        };
        if better {
            best = Some((report, i, canon));
        }
    }
    let (report, i, _) = best.expect("nonempty");
    Ok((report, i))
}
