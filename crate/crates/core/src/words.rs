//! Words over the alphabet `{a, a⁻¹, b, b⁻¹}` and finite presentations on the
//! two generators.
//!
//! Text syntax: lowercase letters are generators, uppercase letters their
//! inverses, `^k` raises the preceding letter or parenthesised group to the
//! integer power `k`. `e`, `1` and the empty string denote the identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four letters. The discriminant doubles as the coset-table column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Letter {
        Letter::ALL[i]
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter::from_index(self.index() ^ 1)
    }

    pub fn is_inverse(self) -> bool {
        self.index() & 1 == 1
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

/// A word in the free group, kept freely reduced by every constructor except
/// [`Word::from_letters_unreduced`].
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn a() -> Self {
        Word(vec![Letter::A])
    }

    pub fn b() -> Self {
        Word(vec![Letter::B])
    }

    /// Freely reduces `letters`.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        free_reduce(letters, false)
    }

    /// Keeps `letters` verbatim; used for relators, which callers may want
    /// to see exactly as written.
    pub fn from_letters_unreduced(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Free product `self · other`, freely reduced.
    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        Word::from_letters(out)
    }

    /// True when every letter is `a` or `a⁻¹`.
    pub fn is_power_of_a(&self) -> bool {
        self.0.iter().all(|l| matches!(l, Letter::A | Letter::AInv))
    }

    pub fn parse(text: &str) -> Result<Word> {
        parse_word(text)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: String = self.0.iter().map(|l| l.to_char()).collect();
        s.serialize_str(&text)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_word(&text).map_err(serde::de::Error::custom)
    }
}

fn free_reduce(letters: impl IntoIterator<Item = Letter>, b_involution: bool) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for mut l in letters {
        if b_involution && l == Letter::BInv {
            l = Letter::B;
        }
        let cancels = match out.last() {
            Some(&top) if b_involution && top == Letter::B && l == Letter::B => true,
            Some(&top) => top == l.inverse(),
            None => false,
        };
        if cancels {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Presentation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// The free group `⟨a, b⟩`.
    F,
    /// `⟨a, b | b² = e⟩`.
    G,
    /// Any other relator set.
    #[serde(rename = "custom")]
    Custom,
}

/// A finite presentation on the generators `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    mode: Mode,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn free() -> Self {
        Presentation {
            mode: Mode::F,
            relators: Vec::new(),
        }
    }

    /// `⟨a, b | b²⟩`.
    pub fn modular() -> Self {
        Presentation {
            mode: Mode::G,
            relators: vec![word_unchecked("bb")],
        }
    }

    /// `⟨a, b | b², a⁸, (ba⁻¹)⁷⟩`.
    pub fn g_prime() -> Self {
        Presentation::custom(vec![
            word_unchecked("bb"),
            word_unchecked("a^8"),
            word_unchecked("(bA)^7"),
        ])
        .expect("static relators are valid")
    }

    /// `⟨a, b | b², a⁴, (ab)⁷, (a⁻¹b⁻¹ab)⁶⟩`.
    pub fn g_double_prime() -> Self {
        Presentation::custom(vec![
            word_unchecked("bb"),
            word_unchecked("a^4"),
            word_unchecked("(ab)^7"),
            word_unchecked("(ABab)^6"),
        ])
        .expect("static relators are valid")
    }

    pub fn custom(relators: Vec<Word>) -> Result<Self> {
        if let Some(r) = relators.iter().find(|r| r.is_empty()) {
            return Err(Error::Argument(format!("relator {r} is trivial")));
        }
        Ok(Presentation {
            mode: Mode::Custom,
            relators,
        })
    }

    /// Builds a presentation from a selector: `F`, `G`, `G'`/`Gp`, `G''`/`Gpp`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "F" => Ok(Presentation::free()),
            "G" => Ok(Presentation::modular()),
            "G'" | "Gp" | "G1" => Ok(Presentation::g_prime()),
            "G''" | "Gpp" | "G2" => Ok(Presentation::g_double_prime()),
            _ => Err(Error::Argument(format!("unknown presentation {name:?}"))),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// True when `b²` is among the relators, so `b` acts as an involution.
    pub fn b_is_involution(&self) -> bool {
        self.relators
            .iter()
            .any(|r| matches!(r.letters(), [Letter::B, Letter::B] | [Letter::BInv, Letter::BInv]))
    }

    /// Free reduction; in mode `G` also rewrites with `b² = e`. Custom relators
    /// are never used for rewriting.
    pub fn reduce(&self, w: &Word) -> Word {
        free_reduce(w.0.iter().copied(), self.mode == Mode::G)
    }

    /// Left-normed iterated commutator `((w1, w2), …, wp)` with
    /// `(x, y) = x⁻¹y⁻¹xy`.
    pub fn commutator(&self, ws: &[Word]) -> Result<Word> {
        if ws.len() < 2 {
            return Err(Error::Argument(format!(
                "commutator needs at least two words, got {}",
                ws.len()
            )));
        }
        let mut acc = self.reduce(&ws[0]);
        for w in &ws[1..] {
            let w = self.reduce(w);
            let c = acc.inverse().mul(&w.inverse()).mul(&acc).mul(&w);
            acc = self.reduce(&c);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PresentationFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PresentationFile {
    mode: Mode,
    relators: Vec<String>,
}

impl From<&Presentation> for PresentationFile {
    fn from(p: &Presentation) -> Self {
        PresentationFile {
            mode: p.mode,
            relators: p
                .relators
                .iter()
                .map(|r| r.letters().iter().map(|l| l.to_char()).collect())
                .collect(),
        }
    }
}

impl TryFrom<PresentationFile> for Presentation {
    type Error = Error;

    fn try_from(file: PresentationFile) -> Result<Self> {
        let relators = file
            .relators
            .iter()
            .map(|r| parse_letters(r).map(Word::from_letters_unreduced))
            .collect::<Result<Vec<_>>>()?;
        match file.mode {
            Mode::F if relators.is_empty() => Ok(Presentation::free()),
            Mode::G if relators.len() == 1 && relators[0] == word_unchecked("bb") => {
                Ok(Presentation::modular())
            }
            Mode::F | Mode::G => Err(Error::Format(format!(
                "mode {:?} does not take relators {:?}",
                file.mode, file.relators
            ))),
            Mode::Custom => Presentation::custom(relators),
        }
    }
}

fn word_unchecked(text: &str) -> Word {
    Word::from_letters_unreduced(parse_letters(text).expect("static word"))
}

/// Parses a word and freely reduces it.
pub fn parse_word(text: &str) -> Result<Word> {
    parse_letters(text).map(Word::from_letters)
}

/// Parses without reducing (relators keep their written form).
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut parser = Parser { chars, pos: 0 };
    let out = parser.sequence(0)?;
    if let Some((i, c)) = parser.peek() {
        return Err(Error::parse(i, format!("unexpected {c:?}")));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn peek(&mut self) -> Option<(usize, char)> {
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_whitespace() || c == '*' || c == '.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.chars.get(self.pos).copied()
    }

    fn sequence(&mut self, depth: usize) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        while let Some((i, c)) = self.peek() {
            let atom = match c {
                '(' => {
                    self.pos += 1;
                    let inner = self.sequence(depth + 1)?;
                    match self.peek() {
                        Some((_, ')')) => self.pos += 1,
                        Some((j, d)) => return Err(Error::parse(j, format!("expected ')', got {d:?}"))),
                        None => return Err(Error::parse(text_end(&self.chars), "unclosed '('")),
                    }
                    inner
                }
                ')' if depth > 0 => break,
                'e' | '1' => {
                    self.pos += 1;
                    Vec::new()
                }
                _ => match Letter::from_char(c) {
                    Some(l) => {
                        self.pos += 1;
                        vec![l]
                    }
                    None => return Err(Error::parse(i, format!("unknown token {c:?}"))),
                },
            };
            let k = self.exponent()?;
            let atom = if k < 0 {
                atom.iter().rev().map(|l| l.inverse()).collect()
            } else {
                atom
            };
            for _ in 0..k.unsigned_abs() {
                out.extend_from_slice(&atom);
            }
        }
        Ok(out)
    }

    fn exponent(&mut self) -> Result<i64> {
        match self.peek() {
            Some((_, '^')) => self.pos += 1,
            _ => return Ok(1),
        }
        let start = self.pos;
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_ascii_digit() || (c == '-' && digits.is_empty()) || (c == '+' && digits.is_empty()) {
                digits.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        let at = self.chars.get(start).map_or(text_end(&self.chars), |&(i, _)| i);
        digits
            .parse::<i64>()
            .map_err(|_| Error::parse(at, format!("bad exponent {digits:?}")))
    }
}

fn text_end(chars: &[(usize, char)]) -> usize {
    chars.last().map_or(0, |&(i, c)| i + c.len_utf8())
}
