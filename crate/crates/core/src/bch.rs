//! Truncated series in two non-commuting variables and the BCH series.
//!
//! `C(X, Y) = log(exp X · exp Y)` is computed in the free associative algebra
//! truncated at a degree bound, then rewritten as nested Lie brackets so it
//! can be evaluated in the Lie algebra of a pre-Lie algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::check::{CheckResult, Violation};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::flows::{circ, w_map};
use crate::linalg::Vector;
use crate::prelie::PreLieAlgebra;
use crate::sampling::Sampler;

/// A word in the letters `X` (0) and `Y` (1). Shorter words come first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                'X' => Ok(0),
                'Y' => Ok(1),
                _ => Err(Error::Parse(format!("unexpected letter {c:?} in {text:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn letter(l: u8) -> char {
    if l == 0 {
        'X'
    } else {
        'Y'
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        self.0.iter().try_for_each(|&l| write!(f, "{}", letter(l)))
    }
}

/// An element of the free associative algebra on `X`, `Y` modulo words
/// longer than `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: ScalarField,
    bound: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl TruncatedSeries {
    pub fn zero(field: ScalarField, bound: usize) -> Self {
        TruncatedSeries {
            field,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: ScalarField, bound: usize) -> Self {
        Self::monomial(field, bound, Word(vec![]), field.one())
    }

    pub fn x(field: ScalarField, bound: usize) -> Self {
        Self::monomial(field, bound, Word(vec![0]), field.one())
    }

    pub fn y(field: ScalarField, bound: usize) -> Self {
        Self::monomial(field, bound, Word(vec![1]), field.one())
    }

    pub fn monomial(field: ScalarField, bound: usize, w: Word, c: Scalar) -> Self {
        let mut s = Self::zero(field, bound);
        s.add_term(w, &c);
        s
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Word(vec![]))
    }

    /// Adds `c·w`; words beyond the bound are dropped.
    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if w.len() > self.bound || c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(w.clone())
            .or_insert_with(|| self.field.zero());
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.bound);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &(x * c));
        }
        out
    }

    /// The degree-`k` part.
    pub fn homogeneous(&self, k: usize) -> Self {
        let mut out = Self::zero(self.field, self.bound);
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == k) {
            out.add_term(w.clone(), c);
        }
        out
    }

    /// Exchange the letters `X` and `Y`.
    pub fn swap_letters(&self) -> Self {
        let mut out = Self::zero(self.field, self.bound);
        for (w, c) in &self.terms {
            out.add_term(Word(w.0.iter().map(|l| 1 - l).collect()), c);
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c} {w}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Concatenation product, truncated at the smaller bound.
pub fn ts_mul(u: &TruncatedSeries, v: &TruncatedSeries) -> Result<TruncatedSeries> {
    if u.field != v.field {
        return Err(Error::FieldMismatch(u.field, v.field));
    }
    let mut out = TruncatedSeries::zero(u.field, u.bound.min(v.bound));
    for (p, a) in &u.terms {
        for (q, b) in &v.terms {
            if p.len() + q.len() <= out.bound {
                let mut w = p.0.clone();
                w.extend_from_slice(&q.0);
                out.add_term(Word(w), &(a * b));
            }
        }
    }
    Ok(out)
}

/// `Σ_{k≤bound} u^k / k!` for `u` without constant term.
pub fn ts_exp(u: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !u.constant_term().is_zero() {
        return Err(Error::PreconditionViolated(
            "exp needs a zero constant term".into(),
        ));
    }
    let mut out = TruncatedSeries::one(u.field, u.bound);
    let mut power = out.clone();
    for k in 1..=u.bound {
        power = ts_mul(&power, u)?;
        if power.is_zero() {
            break;
        }
        out = out.add(&power.scale(&u.field.inverse_factorial(k)?));
    }
    Ok(out)
}

/// `Σ_{k≤bound} (−1)^{k+1} (v − 1)^k / k` for `v` with constant term 1.
pub fn ts_log(v: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !v.constant_term().is_one() {
        return Err(Error::PreconditionViolated(
            "log needs constant term 1".into(),
        ));
    }
    let field = v.field;
    let w = v.sub(&TruncatedSeries::one(field, v.bound));
    let mut out = TruncatedSeries::zero(field, v.bound);
    let mut power = TruncatedSeries::one(field, v.bound);
    for k in 1..=v.bound {
        power = ts_mul(&power, &w)?;
        if power.is_zero() {
            break;
        }
        let inv_k = field
            .from_i64(k as i64)
            .inverse()
            .ok_or(Error::CharacteristicTooSmall {
                characteristic: field.characteristic(),
                required: k,
            })?;
        let sign = if k % 2 == 1 {
            field.one()
        } else {
            -field.one()
        };
        out = out.add(&power.scale(&(&sign * &inv_k)));
    }
    Ok(out)
}

/// `log(exp X · exp Y)` up to degree `s`.
pub fn bch_series(field: ScalarField, s: usize) -> Result<TruncatedSeries> {
    if s == 0 {
        return Err(Error::PreconditionViolated(
            "degree bound must be positive".into(),
        ));
    }
    field.require_characteristic_above(s)?;
    let ex = ts_exp(&TruncatedSeries::x(field, s))?;
    let ey = ts_exp(&TruncatedSeries::y(field, s))?;
    ts_log(&ts_mul(&ex, &ey)?)
}

/// `coefficient · [[…[w_1, w_2], …], w_k]`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTerm {
    pub coefficient: Scalar,
    pub letters: Vec<u8>,
}

impl BracketTerm {
    fn bracket_string(&self) -> String {
        let mut s = letter(self.letters[0]).to_string();
        for &l in &self.letters[1..] {
            s = format!("[{s},{}]", letter(l));
        }
        s
    }

    /// The bracket written out as a sum of words.
    pub fn expand(&self, field: ScalarField, bound: usize) -> TruncatedSeries {
        let mut acc =
            TruncatedSeries::monomial(field, bound, Word(vec![self.letters[0]]), field.one());
        for &l in &self.letters[1..] {
            let gen = TruncatedSeries::monomial(field, bound, Word(vec![l]), field.one());
            acc = ts_mul(&acc, &gen)
                .expect("same field")
                .sub(&ts_mul(&gen, &acc).expect("same field"));
        }
        acc.scale(&self.coefficient)
    }

    /// Value in the Lie algebra of `alg` with `X ↦ a`, `Y ↦ b`.
    pub fn evaluate(&self, alg: &PreLieAlgebra, a: &Vector, b: &Vector) -> Result<Vector> {
        let pick = |l: u8| if l == 0 { a } else { b };
        let mut acc = pick(self.letters[0]).clone();
        for &l in &self.letters[1..] {
            acc = alg.lie_bracket(&acc, pick(l))?;
        }
        Ok(acc.scale(&self.coefficient))
    }
}

impl fmt::Display for BracketTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.coefficient, self.bracket_string())
    }
}

/// Left-normed bracket form of a Lie element, grouped by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSeries {
    pub field: ScalarField,
    pub terms: Vec<BracketTerm>,
}

impl LieSeries {
    pub fn expand(&self, bound: usize) -> TruncatedSeries {
        self.terms
            .iter()
            .fold(TruncatedSeries::zero(self.field, bound), |acc, t| {
                acc.add(&t.expand(self.field, bound))
            })
    }

    pub fn evaluate(&self, alg: &PreLieAlgebra, a: &Vector, b: &Vector) -> Result<Vector> {
        let mut out = Vector::zero(alg.field(), alg.dim());
        for t in &self.terms {
            out = &out + &t.evaluate(alg, a, b)?;
        }
        Ok(out)
    }
}

impl fmt::Display for LieSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(BracketTerm::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Replace each degree-`k` word `w` by `(1/k)[[…[w_1, w_2], …], w_k]` and
/// certify the result by expanding the brackets back into words.
pub fn dsw_project(u: &TruncatedSeries) -> Result<LieSeries> {
    if !u.constant_term().is_zero() {
        return Err(Error::PreconditionViolated(
            "a Lie element has no constant term".into(),
        ));
    }
    let field = u.field;
    let mut combined: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (w, c) in u.terms() {
        let k = w.len();
        let inv_k = field
            .from_i64(k as i64)
            .inverse()
            .ok_or(Error::CharacteristicTooSmall {
                characteristic: field.characteristic(),
                required: k,
            })?;
        let mut letters = w.0.clone();
        let mut coefficient = c * &inv_k;
        if k >= 2 {
            // [w1, w2] = −[w2, w1] and [w, w] = 0
            match letters[0].cmp(&letters[1]) {
                Ordering::Equal => continue,
                Ordering::Greater => {
                    letters.swap(0, 1);
                    coefficient = -coefficient;
                }
                Ordering::Less => {}
            }
        }
        let slot = combined
            .entry(Word(letters))
            .or_insert_with(|| field.zero());
        *slot += &coefficient;
    }
    let series = LieSeries {
        field,
        terms: combined
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, coefficient)| BracketTerm {
                coefficient,
                letters: w.0,
            })
            .collect(),
    };
    let expanded = series.expand(u.bound);
    for k in 1..=u.bound {
        if expanded.homogeneous(k) != u.homogeneous(k) {
            return Err(Error::NotLieElement(k));
        }
    }
    Ok(series)
}

/// Checks `W(a)∘W(b) = W(C(a, b))` on random pairs, with `C` evaluated
/// through Lie brackets in `alg`.
pub fn verify_flows_bch(alg: &PreLieAlgebra, trials: usize, seed: u64) -> Result<CheckResult> {
    let (field, d) = (alg.field(), alg.dim());
    let s = alg.class()?;
    let c = dsw_project(&bch_series(field, s)?)?;
    let mut rng = Sampler::new(seed);
    for _ in 0..trials {
        let (a, b) = (rng.vector(field, d), rng.vector(field, d));
        let lhs = circ(alg, &w_map(alg, &a)?, &w_map(alg, &b)?)?;
        let rhs = w_map(alg, &c.evaluate(alg, &a, &b)?)?;
        if lhs != rhs {
            return Ok(Err(Violation::FlowsBch { a, b }));
        }
    }
    Ok(Ok(()))
}
