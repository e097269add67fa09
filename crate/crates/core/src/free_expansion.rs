//! Formal star expressions and the `(a+b)*c` rewriting rule.
//!
//! In any brace,
//!
//! ```text
//! (a+b)*c = a*c + b*c + Σ_{i≥0} (−1)^{i+1} ((d_i*d_i')*c − d_i*(d_i'*c))
//! ```
//!
//! with `d_0 = a`, `d_0' = b`, `d_{i+1} = d_i + d_i'`, `d_{i+1}' = d_i*d_i'`.
//! Applying it until every left slot holds a single monomial turns any
//! expression into a combination of star words. Words longer than the
//! degree bound are dropped, since they vanish in braces of smaller class.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::{Signed, Zero};

use crate::brace::GradedBrace;
use crate::check::{CheckResult, Violation};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::linalg::{Matrix, Vector};

#[derive(Debug)]
enum Node {
    Leaf(char),
    Star(StarWord, StarWord),
}

/// A bracketed star product of generator symbols, e.g. `(x*(x*y))`.
///
/// Words compare by degree first, then by their serialization.
#[derive(Clone, Debug)]
pub struct StarWord {
    node: Rc<Node>,
    degree: usize,
    text: Rc<str>,
}

impl StarWord {
    pub fn leaf(symbol: char) -> Self {
        StarWord {
            node: Rc::new(Node::Leaf(symbol)),
            degree: 1,
            text: symbol.to_string().into(),
        }
    }

    pub fn star(left: &StarWord, right: &StarWord) -> Self {
        StarWord {
            degree: left.degree + right.degree,
            text: format!("({}*{})", left.text, right.text).into(),
            node: Rc::new(Node::Star(left.clone(), right.clone())),
        }
    }

    /// Number of leaves.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn symbol(&self) -> Option<char> {
        match &*self.node {
            Node::Leaf(c) => Some(*c),
            Node::Star(..) => None,
        }
    }

    pub fn children(&self) -> Option<(&StarWord, &StarWord)> {
        match &*self.node {
            Node::Leaf(_) => None,
            Node::Star(l, r) => Some((l, r)),
        }
    }

    /// How many leaves carry `symbol`.
    pub fn count(&self, symbol: char) -> usize {
        self.text.chars().filter(|&c| c == symbol).count()
    }

    /// The rightmost leaf.
    pub fn tail(&self) -> char {
        match &*self.node {
            Node::Leaf(c) => *c,
            Node::Star(_, r) => r.tail(),
        }
    }

    /// Parse the serialization produced by `Display`, e.g. `((x*x)*y)`.
    pub fn parse(text: &str) -> Result<Self> {
        fn go(s: &[u8], pos: &mut usize) -> Result<StarWord> {
            let bad = |at: usize| Error::Parse(format!("malformed star word at byte {at}"));
            match s.get(*pos) {
                Some(b'(') => {
                    *pos += 1;
                    let left = go(s, pos)?;
                    if s.get(*pos) != Some(&b'*') {
                        return Err(bad(*pos));
                    }
                    *pos += 1;
                    let right = go(s, pos)?;
                    if s.get(*pos) != Some(&b')') {
                        return Err(bad(*pos));
                    }
                    *pos += 1;
                    Ok(StarWord::star(&left, &right))
                }
                Some(c) if c.is_ascii_lowercase() => {
                    *pos += 1;
                    Ok(StarWord::leaf(*c as char))
                }
                _ => Err(bad(*pos)),
            }
        }
        let bytes = text.trim().as_bytes();
        let mut pos = 0;
        let word = go(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!(
                "trailing input in star word {text:?}"
            )));
        }
        Ok(word)
    }
}

/// Degree first, then serialization.
pub fn word_order(u: &StarWord, v: &StarWord) -> Ordering {
    u.degree.cmp(&v.degree).then_with(|| u.text.cmp(&v.text))
}

impl PartialEq for StarWord {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for StarWord {}

impl PartialOrd for StarWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StarWord {
    fn cmp(&self, other: &Self) -> Ordering {
        word_order(self, other)
    }
}

impl fmt::Display for StarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A finite rational combination of star words, without zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarExpr {
    terms: BTreeMap<StarWord, Scalar>,
}

impl StarExpr {
    pub fn zero() -> Self {
        StarExpr::default()
    }

    pub fn symbol(c: char) -> Self {
        Self::word(StarWord::leaf(c))
    }

    pub fn word(w: StarWord) -> Self {
        Self::term(w, ScalarField::Rationals.one())
    }

    pub fn term(w: StarWord, coefficient: Scalar) -> Self {
        let mut e = StarExpr::zero();
        e.add_term(w, &coefficient);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&StarWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &StarWord) -> Scalar {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| ScalarField::Rationals.zero())
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(StarWord::degree)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(StarWord::degree)
    }

    pub fn add_term(&mut self, w: StarWord, coefficient: &Scalar) {
        assert_eq!(
            coefficient.field(),
            ScalarField::Rationals,
            "star expressions are rational"
        );
        if coefficient.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(w.clone())
            .or_insert_with(|| ScalarField::Rationals.zero());
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &StarExpr) -> StarExpr {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &StarExpr) -> StarExpr {
        self.add(&other.scale(&-ScalarField::Rationals.one()))
    }

    pub fn scale(&self, c: &Scalar) -> StarExpr {
        if c.is_zero() {
            return StarExpr::zero();
        }
        StarExpr {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Terms of degree at most `bound`.
    pub fn truncate(&self, bound: usize) -> StarExpr {
        StarExpr {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree <= bound)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of exactly degree `k`.
    pub fn homogeneous(&self, k: usize) -> StarExpr {
        StarExpr {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for StarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let sep = match (n, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let magnitude = if negative { -c.clone() } else { c.clone() };
            if magnitude.is_one() {
                write!(f, "{sep}{w}")?;
            } else {
                write!(f, "{sep}{magnitude} {w}")?;
            }
        }
        Ok(())
    }
}

/// Memoized application of the rewriting rule at a fixed degree bound.
///
/// Every product is computed only up to a degree budget. Inside the
/// correction sum the `d_i`, `d_i'` are needed only below `budget − deg c`,
/// so each nested product has strictly less room than its caller; this is
/// what makes `(a+b)*(a*b)` well defined even though its expansion mentions
/// itself.
pub struct Expander {
    bound: usize,
    memo: HashMap<(String, String, usize), StarExpr>,
}

impl Expander {
    pub fn new(bound: usize) -> Self {
        Expander {
            bound,
            memo: HashMap::new(),
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// `left * right` as a combination of words of degree at most the bound.
    pub fn star(&mut self, left: &StarExpr, right: &StarExpr) -> Result<StarExpr> {
        self.star_within(left, right, self.bound)
    }

    fn star_within(
        &mut self,
        left: &StarExpr,
        right: &StarExpr,
        budget: usize,
    ) -> Result<StarExpr> {
        let (Some(dl), Some(dr)) = (left.min_degree(), right.min_degree()) else {
            return Ok(StarExpr::zero());
        };
        if dl + dr > budget {
            return Ok(StarExpr::zero());
        }
        // higher terms of either side only reach degrees beyond the budget
        let left = left.truncate(budget - dr);
        let right = right.truncate(budget - dl);
        let key = (left.to_string(), right.to_string(), budget);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let result = self.star_uncached(&left, &right, budget)?;
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    fn star_uncached(
        &mut self,
        left: &StarExpr,
        right: &StarExpr,
        budget: usize,
    ) -> Result<StarExpr> {
        let q = ScalarField::Rationals;
        if left.len() > 1 {
            let (w, c) = left.terms().next().expect("nonempty");
            let a = StarExpr::term(w.clone(), c.clone());
            let b = left.sub(&a);
            return self.sum_star_within(&a, &b, right, budget);
        }
        let (u, lambda) = left
            .terms()
            .next()
            .map(|(w, c)| (w.clone(), c.clone()))
            .expect("nonempty");
        if lambda.is_one() {
            // right-linear: u * Σ μ_w w = Σ μ_w (u*w)
            let mut out = StarExpr::zero();
            for (w, mu) in right.terms() {
                if u.degree + w.degree <= budget {
                    out.add_term(StarWord::star(&u, w), mu);
                }
            }
            return Ok(out);
        }
        let n = lambda
            .as_integer()
            .ok_or_else(|| Error::NonIntegralCoefficient(lambda.to_string()))?;
        let unit = StarExpr::word(u);
        if n.is_positive() {
            // (λu)*c with a = u, b = (λ−1)u
            let rest = unit.scale(&(&lambda - &q.one()));
            return self.sum_star_within(&unit, &rest, right, budget);
        }
        // With a = |λ|u and b = λu, a + b = 0 gives
        // b*c = −a*c + (a*b)*c − a*(b*c); iterate on the last occurrence.
        debug_assert!(!n.is_zero());
        let inner = budget - right.min_degree().expect("nonzero");
        let a = unit.scale(&-lambda.clone());
        let b = left.clone();
        let ac = self.star_within(&a, right, budget)?;
        let ab = self.star_within(&a, &b, inner)?;
        let abc = self.star_within(&ab, right, budget)?;
        let base = abc.sub(&ac);
        let mut x = StarExpr::zero();
        for _ in 0..=budget {
            let next = base.sub(&self.star_within(&a, &x, budget)?);
            if next == x {
                return Ok(x);
            }
            x = next;
        }
        Err(Error::ConvergenceFailure(budget + 1))
    }

    /// `a*c + b*c + F(a, b, c)`, the full expansion of `(a+b)*c`.
    pub fn sum_star(&mut self, a: &StarExpr, b: &StarExpr, c: &StarExpr) -> Result<StarExpr> {
        self.sum_star_within(a, b, c, self.bound)
    }

    fn sum_star_within(
        &mut self,
        a: &StarExpr,
        b: &StarExpr,
        c: &StarExpr,
        budget: usize,
    ) -> Result<StarExpr> {
        let ac = self.star_within(a, c, budget)?;
        let bc = self.star_within(b, c, budget)?;
        let f = self.correction_within(a, b, c, budget)?;
        Ok(ac.add(&bc).add(&f))
    }

    /// `Σ_{i=0}^{2·bound} (−1)^{i+1} ((d_i*d_i')*c − d_i*(d_i'*c))`
    pub fn correction(&mut self, a: &StarExpr, b: &StarExpr, c: &StarExpr) -> Result<StarExpr> {
        self.correction_within(a, b, c, self.bound)
    }

    fn correction_within(
        &mut self,
        a: &StarExpr,
        b: &StarExpr,
        c: &StarExpr,
        budget: usize,
    ) -> Result<StarExpr> {
        let mut out = StarExpr::zero();
        let Some(dc) = c.min_degree() else {
            return Ok(out);
        };
        let Some(inner) = budget.checked_sub(dc) else {
            return Ok(out);
        };
        let (mut d, mut dp) = (a.truncate(inner), b.truncate(inner));
        let minus_one = -ScalarField::Rationals.one();
        for i in 0..=2 * self.bound {
            if dp.is_zero() {
                break;
            }
            let ddp = self.star_within(&d, &dp, inner)?;
            let first = self.star_within(&ddp, c, budget)?;
            let dpc = self.star_within(&dp, c, budget)?;
            let second = self.star_within(&d, &dpc, budget)?;
            let term = first.sub(&second);
            out = if i % 2 == 0 {
                out.add(&term.scale(&minus_one))
            } else {
                out.add(&term)
            };
            d = d.add(&dp);
            dp = ddp;
        }
        Ok(out)
    }

    /// Replace each leaf by its binding and expand every star node.
    pub fn substitute(
        &mut self,
        w: &StarWord,
        bindings: &BTreeMap<char, StarExpr>,
    ) -> Result<StarExpr> {
        match w.children() {
            None => {
                let c = w.symbol().expect("leaf");
                bindings.get(&c).cloned().ok_or(Error::UnboundSymbol(c))
            }
            Some((l, r)) => {
                let l = self.substitute(l, bindings)?;
                let r = self.substitute(r, bindings)?;
                self.star(&l, &r)
            }
        }
    }
}

/// Full expansion of `(a+b)*c`, dropping words of degree above `degree_bound`.
pub fn sum_star_rhs(
    a: &StarExpr,
    b: &StarExpr,
    c: &StarExpr,
    degree_bound: usize,
) -> Result<StarExpr> {
    if degree_bound < 2 {
        return Err(Error::PreconditionViolated(
            "degree bound must be at least 2".into(),
        ));
    }
    Expander::new(degree_bound).sum_star(a, b, c)
}

/// `sum_star_rhs(x, y, z)` without its four leading terms
/// `x*z + y*z + x*(y*z) − (x*y)*z`.
pub fn sum_star_correction(x: char, y: char, z: char, degree_bound: usize) -> Result<StarExpr> {
    let (sx, sy, sz) = (StarWord::leaf(x), StarWord::leaf(y), StarWord::leaf(z));
    let full = sum_star_rhs(
        &StarExpr::symbol(x),
        &StarExpr::symbol(y),
        &StarExpr::symbol(z),
        degree_bound,
    )?;
    let yz = StarWord::star(&sy, &sz);
    let xy = StarWord::star(&sx, &sy);
    let mut lead = StarExpr::word(StarWord::star(&sx, &sz));
    lead.add_term(StarWord::star(&sy, &sz), &ScalarField::Rationals.one());
    lead.add_term(StarWord::star(&sx, &yz), &ScalarField::Rationals.one());
    lead.add_term(StarWord::star(&xy, &sz), &-ScalarField::Rationals.one());
    Ok(full.sub(&lead.truncate(degree_bound)))
}

/// All bracketings of `n` leaves equal to `x`.
fn all_x_words(n: usize, memo: &mut BTreeMap<usize, Vec<StarWord>>) -> Vec<StarWord> {
    if let Some(hit) = memo.get(&n) {
        return hit.clone();
    }
    let out = if n == 1 {
        vec![StarWord::leaf('x')]
    } else {
        let mut out = Vec::new();
        for k in 1..n {
            for l in all_x_words(k, memo) {
                for r in all_x_words(n - k, memo) {
                    out.push(StarWord::star(&l, &r));
                }
            }
        }
        out
    };
    memo.insert(n, out.clone());
    out
}

/// The words of `E_{x,y}`: every leaf is `x` except the rightmost, which is
/// `y`, with at least one `x`. Degrees `2..=degree_bound`, in word order.
pub fn e_xy_words(degree_bound: usize) -> Vec<StarWord> {
    let mut memo = BTreeMap::new();
    let mut by_degree: Vec<Vec<StarWord>> = vec![vec![], vec![StarWord::leaf('y')]];
    for n in 2..=degree_bound {
        let mut words = Vec::new();
        for k in 1..n {
            for l in all_x_words(k, &mut memo) {
                for r in &by_degree[n - k] {
                    words.push(StarWord::star(&l, r));
                }
            }
        }
        by_degree.push(words);
    }
    let mut out: Vec<StarWord> = by_degree.into_iter().skip(2).flatten().collect();
    out.sort();
    out
}

/// The doubling matrix together with the word basis indexing its rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingMatrix {
    pub words: Vec<StarWord>,
    pub matrix: Matrix,
}

/// Row `i` holds the expansion of word `i` with `x` replaced by `2x`, so that
/// `M·V_{x,y} = V_{2x,y}` in every brace of class at most `degree_bound + 1`.
pub fn doubling_matrix(degree_bound: usize) -> Result<DoublingMatrix> {
    if degree_bound < 2 {
        return Err(Error::PreconditionViolated(
            "degree bound must be at least 2".into(),
        ));
    }
    let q = ScalarField::Rationals;
    let words = e_xy_words(degree_bound);
    let index: BTreeMap<&StarWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let bindings = BTreeMap::from([
        ('x', StarExpr::symbol('x').scale(&q.from_i64(2))),
        ('y', StarExpr::symbol('y')),
    ]);
    let mut expander = Expander::new(degree_bound);
    let mut matrix = Matrix::zero(q, words.len(), words.len());
    for (i, w) in words.iter().enumerate() {
        for (u, c) in expander.substitute(w, &bindings)?.terms() {
            let j = *index.get(u).ok_or_else(|| {
                Error::InternalInconsistency(format!(
                    "doubling {w} produced {u}, outside the word basis"
                ))
            })?;
            matrix.set(i, j, c.clone());
        }
    }
    Ok(DoublingMatrix { words, matrix })
}

/// Value of a single word under the bindings, with subword values cached.
fn evaluate_word(
    w: &StarWord,
    bindings: &BTreeMap<char, Vector>,
    brace: &GradedBrace,
    cache: &mut HashMap<Rc<str>, Vector>,
) -> Result<Vector> {
    if let Some(hit) = cache.get(&w.text) {
        return Ok(hit.clone());
    }
    let value = match w.children() {
        None => {
            let c = w.symbol().expect("leaf");
            bindings.get(&c).cloned().ok_or(Error::UnboundSymbol(c))?
        }
        Some((l, r)) => {
            let l = evaluate_word(l, bindings, brace, cache)?;
            let r = evaluate_word(r, bindings, brace, cache)?;
            brace.star(&l, &r)?
        }
    };
    cache.insert(w.text.clone(), value.clone());
    Ok(value)
}

/// Substitute vectors for the symbols and evaluate every star in `brace`.
pub fn evaluate(
    e: &StarExpr,
    bindings: &BTreeMap<char, Vector>,
    brace: &GradedBrace,
) -> Result<Vector> {
    let field = brace.field();
    let mut cache = HashMap::new();
    let mut out = Vector::zero(field, brace.dim());
    for (w, c) in e.terms() {
        let value = evaluate_word(w, bindings, brace, &mut cache)?;
        out.add_scaled(
            &field.from_rational(c.as_rational().expect("rational coefficient"))?,
            &value,
        );
    }
    Ok(out)
}

/// The word vector `V_{a,b}` as a matrix with one row per word.
pub fn word_values(
    words: &[StarWord],
    a: &Vector,
    b: &Vector,
    brace: &GradedBrace,
) -> Result<Matrix> {
    let bindings = BTreeMap::from([('x', a.clone()), ('y', b.clone())]);
    let mut cache = HashMap::new();
    let rows = words
        .iter()
        .map(|w| Ok(evaluate_word(w, &bindings, brace, &mut cache)?.into_entries()))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(brace.field(), rows)
}

/// Degree bound used for the doubling matrix of a brace.
pub fn brace_degree_bound(brace: &GradedBrace) -> usize {
    brace.class_bound().saturating_sub(1).max(2)
}

/// Checks `2^n V_{2^{-n} a, b} = (2 M^{-1})^n V_{a,b}` for `n = 1..=n_max`.
pub fn scaling_matrix_check(
    brace: &GradedBrace,
    a: &Vector,
    b: &Vector,
    n_max: u32,
) -> Result<CheckResult> {
    let field = brace.field();
    let dm = doubling_matrix(brace_degree_bound(brace))?;
    let step = dm
        .matrix
        .to_field(field)?
        .inverse()?
        .scale(&field.from_i64(2));
    let v0 = word_values(&dm.words, a, b, brace)?;
    let mut rhs = v0;
    for n in 1..=n_max {
        rhs = step.mul(&rhs)?;
        let shrunk = a.scale(&field.pow2(-(n as i64)));
        let lhs = word_values(&dm.words, &shrunk, b, brace)?.scale(&field.pow2(n as i64));
        if lhs != rhs {
            return Ok(Err(Violation::ScalingIdentity { n }));
        }
    }
    Ok(Ok(()))
}

/// Convenience for symbolic coefficients.
pub fn rational(n: i64, d: i64) -> Scalar {
    let q = ScalarField::Rationals;
    q.from_i64(n) * q.from_i64(d).inverse().expect("nonzero denominator")
}
