//! Exact verification of candidate Belyi maps against dessin passports.
//!
//! Everything is rational arithmetic. Root multiplicities come from
//! square-free decomposition, so no root is ever located.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::dessin::{Dessin, Passport};
use crate::error::{Error, Result};

/// Dense polynomial in `x`, lowest degree first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn x() -> Self {
        Poly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coefficients(coefficients: Vec<BigRational>) -> Self {
        Poly(coefficients).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        let c = (0..len)
            .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
            .collect();
        Poly(c).trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly(c).trimmed()
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect()).trimmed()
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(BigRational::one()), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.deg();
        let lead = divisor.leading();
        let mut rem = self.0.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + d] / &lead;
            if !q.is_zero() {
                for (j, c) in divisor.0.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        rem.truncate(d);
        (Poly(quot).trimmed(), Poly(rem).trimmed())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lead = self.leading();
        Poly(self.0.iter().map(|c| c / &lead).collect())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
        .trimmed()
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &BigRational) -> Poly {
        let step = Poly(vec![c.clone(), BigRational::one()]);
        self.0
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, coef| acc.mul(&step).add(&Poly::constant(coef.clone())))
    }

    /// Yun's algorithm: `(m, f_m)` with `self = lead · Π f_m^m`, each `f_m`
    /// monic, square-free, nonconstant and pairwise coprime.
    pub fn square_free(&self) -> Vec<(usize, Poly)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut m = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((m, a.clone()));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            m += 1;
        }
        out
    }

    /// Root multiplicities over the algebraic closure, sorted descending.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .square_free()
            .into_iter()
            .flat_map(|(m, f)| std::iter::repeat(m).take(f.deg()))
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let coef = if a.is_integer() { a.to_string() } else { format!("({a})") };
            match (i, a.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coef}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coef}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `f = numerator / denominator`, coprime with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    numerator: Poly,
    denominator: Poly,
}

impl RationalMap {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Argument("zero denominator".into()));
        }
        let g = numerator.gcd(&denominator);
        let g = if g.is_zero() { Poly::constant(BigRational::one()) } else { g };
        let num = numerator.div_rem(&g).0;
        let den = denominator.div_rem(&g).0;
        let lead = den.leading();
        Ok(RationalMap {
            numerator: num.scale(&lead.recip()),
            denominator: den.monic(),
        })
    }

    /// Parses expressions such as `-(1/64)*(x-1)^3*(x+3)^2 / x^3` built from
    /// integers, `x`, `+ - * / ^` and parentheses. Juxtaposition multiplies.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { text: text.as_bytes(), pos: 0 };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.text.len() {
            return Err(Error::parse(p.pos, "unexpected trailing input"));
        }
        RationalMap::new(value.0, value.1)
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn degree(&self) -> usize {
        self.numerator.deg().max(self.denominator.deg())
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: &BigRational) -> RationalMap {
        RationalMap::new(self.numerator.shift(c), self.denominator.shift(c)).expect("nonzero denominator")
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

/// Preimage multiplicities of `0`, `1` and `∞` with consistency flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BelyiPassport {
    pub degree: usize,
    /// Sorted descending, `∞` included when it lies over the value.
    pub zeros: Vec<usize>,
    pub ones: Vec<usize>,
    pub poles: Vec<usize>,
    /// Each multiset sums to the degree.
    pub sums_ok: bool,
    /// `Σ (m − 1)` over the three multisets.
    pub ramification: usize,
    /// Finite critical points not lying over `0`, `1` or `∞`, as a monic
    /// polynomial; `None` when there are none.
    pub extra_critical_factor: Option<String>,
    /// No critical values outside `{0, 1, ∞}`: the ramification reaches the
    /// Riemann–Hurwitz total `2·degree − 2`.
    pub belyi: bool,
    /// `2 − 2g = B + W + F − degree` when `belyi`.
    pub genus: Option<usize>,
}

impl BelyiPassport {
    pub fn as_passport(&self) -> Passport {
        Passport {
            black: self.zeros.clone(),
            white: self.ones.clone(),
            faces: self.poles.clone(),
        }
    }
}

fn fibre(p: &Poly, degree: usize) -> Vec<usize> {
    let mut m = p.multiplicities();
    if degree > p.deg() {
        m.push(degree - p.deg());
    }
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Multiplicity structure of `f` over `0`, `1` and `∞`.
pub fn passport_of(f: &RationalMap) -> Result<BelyiPassport> {
    let degree = f.degree();
    let (p, q) = (&f.numerator, &f.denominator);
    let p_minus_q = p.sub(q);
    if degree == 0 || p_minus_q.is_zero() {
        return Err(Error::Argument(format!("constant map {f}")));
    }
    let zeros = fibre(p, degree);
    let ones = fibre(&p_minus_q, degree);
    let poles = fibre(q, degree);
    let sums_ok = [&zeros, &ones, &poles].iter().all(|m| m.iter().sum::<usize>() == degree);
    let ramification: usize = [&zeros, &ones, &poles].iter().flat_map(|m| m.iter()).map(|m| m - 1).sum();

    // Finite critical points are the roots of the Wronskian p'q − pq'. Each
    // root of multiplicity m over 0, 1 or ∞ accounts for a factor of order
    // m − 1; whatever survives sits over some other value.
    let mut residual = p.derivative().mul(q).sub(&p.mul(&q.derivative()));
    for r in [p, &p_minus_q, q] {
        for (m, factor) in r.square_free() {
            for _ in 1..m {
                residual = residual.div_rem(&factor).0;
            }
        }
    }
    let extra_critical_factor = (residual.deg() > 0).then(|| residual.monic().to_string());
    let belyi = sums_ok && ramification == 2 * degree - 2 && extra_critical_factor.is_none();
    let cycles = zeros.len() + ones.len() + poles.len();
    let genus = belyi.then(|| (2 + degree - cycles) / 2);
    Ok(BelyiPassport {
        degree,
        zeros,
        ones,
        poles,
        sums_ok,
        ramification,
        extra_critical_factor,
        belyi,
        genus,
    })
}

/// True iff the preimage multisets of `0`, `1`, `∞` equal the black, white
/// and face cycle types of `d`.
pub fn matches_dessin(f: &RationalMap, d: &Dessin) -> Result<bool> {
    Ok(passport_of(f)?.as_passport() == d.passport())
}

type Frac = (Poly, Poly);

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.text.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let rhs_num = if op == b'+' { rhs.0 } else { rhs.0.neg() };
            acc = (acc.0.mul(&rhs.1).add(&rhs_num.mul(&acc.1)), acc.1.mul(&rhs.1));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = (acc.0.mul(&rhs.0), acc.1.mul(&rhs.1));
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.0.is_zero() {
                        return Err(Error::parse(at, "division by zero"));
                    }
                    acc = (acc.0.mul(&rhs.1), acc.1.mul(&rhs.0));
                }
                Some(b'x' | b'(' | b'0'..=b'9') => {
                    let rhs = self.power()?;
                    acc = (acc.0.mul(&rhs.0), acc.1.mul(&rhs.1));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let (n, d) = self.unary()?;
                Ok((n.neg(), d))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let at = self.pos;
        let e = self
            .integer()?
            .to_u32()
            .filter(|&e| e <= 1024)
            .ok_or_else(|| Error::parse(at, "exponent out of range"))?;
        let (n, d) = (base.0.pow(e), base.1.pow(e));
        if negative {
            if n.is_zero() {
                return Err(Error::parse(at, "division by zero"));
            }
            Ok((d, n))
        } else {
            Ok((n, d))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.text.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Frac> {
        let one = Poly::constant(BigRational::one());
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok((Poly::x(), one))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'0'..=b'9') => Ok((Poly::constant(BigRational::from_integer(self.integer()?)), one)),
            Some(c) => Err(Error::parse(self.pos, format!("unexpected {:?}", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}
