//! Strongly nilpotent braces stored in graded multilinear form.
//!
//! The star operation `a*b = a∘b − a − b` of a brace coming from a
//! nilpotent pre-Lie algebra is a polynomial in `a` and linear in `b`:
//!
//! ```text
//! a*b = Σ_k Λ_k(a, …, a; b)
//! ```
//!
//! with each `Λ_k` symmetric in its `k` left slots. A [`GradedBrace`] stores
//! the nonzero entries of these tensors keyed by the sorted left multi-index.

use std::collections::BTreeMap;

use crate::check::{BraceLaw, CheckResult, Violation};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::linalg::{span, Subspace, Vector};
use crate::sampling::{Sampler, DEFAULT_SEED};

/// Random triples used by the validation performed on construction.
pub const VALIDATION_TRIALS: usize = 50;

/// One graded component `Λ_k`: `k` symmetric left slots and one right slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lambda {
    degree: usize,
    dim: usize,
    field: ScalarField,
    /// sorted left multi-index -> right index -> output vector (never zero)
    terms: BTreeMap<Vec<usize>, BTreeMap<usize, Vector>>,
}

impl Lambda {
    pub fn zero(field: ScalarField, dim: usize, degree: usize) -> Self {
        Lambda {
            degree,
            dim,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Λ_k(e_{left[0]}, …, e_{left[k-1]}; e_right)`, in any slot order.
    pub fn entry(&self, left: &[usize], right: usize) -> Vector {
        let mut key = left.to_vec();
        key.sort_unstable();
        self.terms
            .get(&key)
            .and_then(|row| row.get(&right))
            .cloned()
            .unwrap_or_else(|| Vector::zero(self.field, self.dim))
    }

    /// Set the entry for every ordering of `left`.
    pub fn set(&mut self, left: &[usize], right: usize, value: Vector) -> Result<()> {
        if left.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: left.len(),
            });
        }
        if let Some(&bad) = left.iter().chain([&right]).find(|&&i| i >= self.dim) {
            return Err(Error::Parse(format!(
                "index {bad} out of range for dimension {}",
                self.dim
            )));
        }
        if value.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: value.dim(),
            });
        }
        if value.field() != self.field {
            return Err(Error::FieldMismatch(self.field, value.field()));
        }
        let mut key = left.to_vec();
        key.sort_unstable();
        let row = self.terms.entry(key.clone()).or_default();
        if value.is_zero() {
            row.remove(&right);
            if row.is_empty() {
                self.terms.remove(&key);
            }
        } else {
            row.insert(right, value);
        }
        Ok(())
    }

    /// Nonzero entries as `(sorted left multi-index, right index, output)`.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize, &Vector)> {
        self.terms
            .iter()
            .flat_map(|(left, row)| row.iter().map(move |(j, v)| (left.as_slice(), *j, v)))
    }

    /// The diagonal value `Λ_k(a, …, a; b)`.
    pub fn diagonal(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::zero(self.field, self.dim);
        for (left, row) in &self.terms {
            let mut coef = self.field.from_i64(multinomial(left) as i64);
            for &i in left {
                coef *= a.get(i);
                if coef.is_zero() {
                    break;
                }
            }
            if coef.is_zero() {
                continue;
            }
            for (&j, v) in row {
                let bj = b.get(j);
                if !bj.is_zero() {
                    out.add_scaled(&(&coef * bj), v);
                }
            }
        }
        out
    }

    /// The multilinear value `Λ_k(xs[0], …, xs[k-1]; b)`.
    pub fn evaluate(&self, xs: &[&Vector], b: &Vector) -> Vector {
        assert_eq!(xs.len(), self.degree, "wrong number of left arguments");
        let mut out = Vector::zero(self.field, self.dim);
        let supports: Vec<Vec<usize>> = xs.iter().map(|x| x.support().collect()).collect();
        let mut tuple = Vec::with_capacity(self.degree);
        self.accumulate(xs, &supports, b, &mut tuple, self.field.one(), &mut out);
        out
    }

    fn accumulate(
        &self,
        xs: &[&Vector],
        supports: &[Vec<usize>],
        b: &Vector,
        tuple: &mut Vec<usize>,
        coef: Scalar,
        out: &mut Vector,
    ) {
        let m = tuple.len();
        if m == xs.len() {
            let mut key = tuple.clone();
            key.sort_unstable();
            if let Some(row) = self.terms.get(&key) {
                for (&j, v) in row {
                    let bj = b.get(j);
                    if !bj.is_zero() {
                        out.add_scaled(&(&coef * bj), v);
                    }
                }
            }
            return;
        }
        for &i in &supports[m] {
            tuple.push(i);
            self.accumulate(xs, supports, b, tuple, &coef * xs[m].get(i), out);
            tuple.pop();
        }
    }
}

/// Number of distinct orderings of a multi-index.
fn multinomial(sorted: &[usize]) -> u64 {
    let mut result: u64 = 1;
    let mut run = 0u64;
    for (n, w) in sorted.iter().enumerate() {
        run = if n > 0 && sorted[n - 1] == *w {
            run + 1
        } else {
            1
        };
        result = result * (n as u64 + 1) / run;
    }
    result
}

/// All non-decreasing sequences of length `k` over `0..n`.
pub(crate) fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A strongly nilpotent brace on `F^d` with `A^[class_bound] = 0`.
///
/// `lambdas[k-1]` holds `Λ_k` for `k = 1 .. class_bound - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBrace {
    field: ScalarField,
    dim: usize,
    class_bound: usize,
    lambdas: Vec<Lambda>,
    basis_names: Vec<String>,
}

/// The three radical chains of a brace, each listed from `A` down to its
/// last computed term (zero when the chain terminates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub left: Vec<Subspace>,
    pub right: Vec<Subspace>,
    pub strong: Vec<Subspace>,
    pub left_index: Option<usize>,
    pub right_index: Option<usize>,
    pub strong_index: Option<usize>,
}

impl ChainReport {
    pub fn left_nilpotent(&self) -> bool {
        self.left_index.is_some()
    }

    pub fn right_nilpotent(&self) -> bool {
        self.right_index.is_some()
    }

    pub fn strongly_nilpotent(&self) -> bool {
        self.strong_index.is_some()
    }
}

fn chain_index(chain: &[Subspace]) -> Option<usize> {
    chain.last().filter(|s| s.is_zero()).map(|_| chain.len())
}

impl GradedBrace {
    /// Build and validate: left-brace laws, group axioms and strong
    /// nilpotency within `class_bound`.
    pub fn new(
        field: ScalarField,
        dim: usize,
        class_bound: usize,
        lambdas: Vec<Lambda>,
    ) -> Result<Self> {
        let brace = Self::new_unchecked(field, dim, class_bound, lambdas)?;
        brace.validate()?;
        Ok(brace)
    }

    /// Shape checks only.
    pub fn new_unchecked(
        field: ScalarField,
        dim: usize,
        class_bound: usize,
        mut lambdas: Vec<Lambda>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::PreconditionViolated(
                "dimension must be positive".into(),
            ));
        }
        if class_bound < 2 {
            return Err(Error::PreconditionViolated(
                "class bound must be at least 2".into(),
            ));
        }
        if lambdas.len() > class_bound - 1 {
            return Err(Error::PreconditionViolated(format!(
                "{} graded components exceed class bound {class_bound}",
                lambdas.len()
            )));
        }
        for (n, lambda) in lambdas.iter().enumerate() {
            if lambda.degree != n + 1 || lambda.dim != dim || lambda.field != field {
                return Err(Error::PreconditionViolated(format!(
                    "component {} has the wrong shape",
                    n + 1
                )));
            }
        }
        while lambdas.len() < class_bound - 1 {
            lambdas.push(Lambda::zero(field, dim, lambdas.len() + 1));
        }
        Ok(GradedBrace {
            field,
            dim,
            class_bound,
            lambdas,
            basis_names: (1..=dim).map(|i| format!("e{i}")).collect(),
        })
    }

    /// The brace with `a∘b = a + b`.
    pub fn trivial(field: ScalarField, dim: usize) -> Self {
        Self::new_unchecked(field, dim, 2, vec![]).expect("trivial brace shape")
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: names.len(),
            });
        }
        self.basis_names = names;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.field.require_characteristic_above(self.class_bound)?;
        self.check_left_brace(VALIDATION_TRIALS, DEFAULT_SEED)
            .map_err(Error::InvalidBrace)?;
        self.check_group(VALIDATION_TRIALS, DEFAULT_SEED)
            .map_err(Error::InvalidBrace)?;
        let chains = self.radical_chains()?;
        match chains.strong_index {
            Some(n) if n <= self.class_bound => Ok(()),
            _ => Err(Error::InvalidBrace(Violation::NotStronglyNilpotent {
                class_bound: self.class_bound,
            })),
        }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class_bound(&self) -> usize {
        self.class_bound
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn lambdas(&self) -> &[Lambda] {
        &self.lambdas
    }

    /// `Λ_k`, or `None` when `k` is outside `1 .. class_bound`.
    pub fn lambda(&self, k: usize) -> Option<&Lambda> {
        k.checked_sub(1).and_then(|i| self.lambdas.get(i))
    }

    pub fn lambda_mut(&mut self, k: usize) -> Option<&mut Lambda> {
        k.checked_sub(1).and_then(move |i| self.lambdas.get_mut(i))
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.field, self.dim, i)
    }

    fn check_operand(&self, x: &Vector) -> Result<()> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch(self.field, x.field()));
        }
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// `a*b = Σ_k Λ_k(a, …, a; b)`
    pub fn star(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        self.check_operand(a)?;
        self.check_operand(b)?;
        Ok(self.star_unchecked(a, b))
    }

    pub(crate) fn star_unchecked(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::zero(self.field, self.dim);
        if a.is_zero() || b.is_zero() {
            return out;
        }
        for lambda in &self.lambdas {
            out = &out + &lambda.diagonal(a, b);
        }
        out
    }

    /// `a∘b = a + b + a*b`
    pub fn circ(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        Ok(&(a + b) + &self.star(a, b)?)
    }

    fn circ_unchecked(&self, a: &Vector, b: &Vector) -> Vector {
        &(a + b) + &self.star_unchecked(a, b)
    }

    /// The group inverse of `a` under `∘`.
    pub fn circ_inverse(&self, a: &Vector) -> Result<Vector> {
        self.check_operand(a)?;
        let neg = -a;
        let mut x = neg.clone();
        let steps = self.class_bound + 1;
        for _ in 0..steps {
            let next = &neg - &self.star_unchecked(a, &x);
            if next == x {
                if !self.circ_unchecked(a, &x).is_zero() || !self.circ_unchecked(&x, a).is_zero() {
                    return Err(Error::InvalidBrace(Violation::Inverse { a: a.clone() }));
                }
                return Ok(x);
            }
            x = next;
        }
        Err(Error::ConvergenceFailure(steps))
    }

    fn basis_triples(&self) -> Vec<(Vector, Vector, Vector)> {
        let d = self.dim;
        let mut out = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    out.push((
                        self.basis_vector(i),
                        self.basis_vector(j),
                        self.basis_vector(k),
                    ));
                }
            }
        }
        out
    }

    fn sample_triples(&self, trials: usize, seed: u64) -> Vec<(Vector, Vector, Vector)> {
        let mut rng = Sampler::new(seed);
        let (f, d) = (self.field, self.dim);
        (0..trials)
            .map(|_| (rng.vector(f, d), rng.vector(f, d), rng.vector(f, d)))
            .collect()
    }

    /// Both left-brace laws on all basis triples and `trials` random triples:
    /// `a∘(b+c) + a = a∘b + a∘c` and `(a∘b)*c = a*c + b*c + a*(b*c)`.
    pub fn check_left_brace(&self, trials: usize, seed: u64) -> CheckResult {
        let triples = self
            .basis_triples()
            .into_iter()
            .chain(self.sample_triples(trials, seed));
        for (a, b, c) in triples {
            let lhs = &self.circ_unchecked(&a, &(&b + &c)) + &a;
            let rhs = &self.circ_unchecked(&a, &b) + &self.circ_unchecked(&a, &c);
            if lhs != rhs {
                return Err(Violation::LeftBrace {
                    law: BraceLaw::Distributivity,
                    a,
                    b,
                    c,
                });
            }
            let lhs = self.star_unchecked(&self.circ_unchecked(&a, &b), &c);
            let rhs = &(&self.star_unchecked(&a, &c) + &self.star_unchecked(&b, &c))
                + &self.star_unchecked(&a, &self.star_unchecked(&b, &c));
            if lhs != rhs {
                return Err(Violation::LeftBrace {
                    law: BraceLaw::StarCompatibility,
                    a,
                    b,
                    c,
                });
            }
        }
        Ok(())
    }

    /// Associativity, two-sided identity and two-sided inverses of `∘`.
    pub fn check_group(&self, trials: usize, seed: u64) -> CheckResult {
        let zero = Vector::zero(self.field, self.dim);
        let triples: Vec<_> = self
            .basis_triples()
            .into_iter()
            .chain(self.sample_triples(trials, seed))
            .collect();
        for (a, b, c) in &triples {
            let lhs = self.circ_unchecked(&self.circ_unchecked(a, b), c);
            let rhs = self.circ_unchecked(a, &self.circ_unchecked(b, c));
            if lhs != rhs {
                return Err(Violation::Associativity {
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                });
            }
        }
        let singles = (0..self.dim)
            .map(|i| self.basis_vector(i))
            .chain(triples.iter().skip(self.dim.pow(3)).map(|t| t.0.clone()));
        for a in singles {
            if self.circ_unchecked(&zero, &a) != a || self.circ_unchecked(&a, &zero) != a {
                return Err(Violation::Identity { a });
            }
            if self.circ_inverse(&a).is_err() {
                return Err(Violation::Inverse { a });
            }
        }
        Ok(())
    }

    /// `a*(e b) = e (a*b)` for random scalars `e` and vectors `a`, `b`.
    pub fn check_fbrace(&self, trials: usize, seed: u64) -> CheckResult {
        let mut rng = Sampler::new(seed);
        let (f, d) = (self.field, self.dim);
        let fixed = [f.zero(), -f.one(), f.one()];
        for t in 0..trials.max(fixed.len()) {
            let e = fixed.get(t).cloned().unwrap_or_else(|| rng.scalar(f));
            let (a, b) = (rng.vector(f, d), rng.vector(f, d));
            if self.star_unchecked(&a, &b.scale(&e)) != self.star_unchecked(&a, &b).scale(&e) {
                return Err(Violation::FBrace { scalar: e, a, b });
            }
        }
        Ok(())
    }

    /// `span{ a*b : a ∈ left, b ∈ right }`, via the multilinear components
    /// evaluated on basis tuples of `left`.
    pub fn star_of_subspaces(&self, left: &Subspace, right: &Subspace) -> Result<Subspace> {
        let mut products = Vec::new();
        if !left.is_zero() && !right.is_zero() {
            for lambda in self.lambdas.iter().filter(|l| !l.is_zero()) {
                for tuple in multisets(left.dim(), lambda.degree) {
                    let xs: Vec<&Vector> = tuple.iter().map(|&i| &left.basis()[i]).collect();
                    for y in right.basis() {
                        let v = lambda.evaluate(&xs, y);
                        if !v.is_zero() {
                            products.push(v);
                        }
                    }
                }
            }
        }
        span(self.field, self.dim, &products)
    }

    /// `A^{i+1} = A * A^i`, `A^{(i+1)} = A^{(i)} * A` and
    /// `A^{[i]} = Σ_{0<j<i} A^{[j]} * A^{[i-j]}`.
    pub fn radical_chains(&self) -> Result<ChainReport> {
        let full = Subspace::full(self.field, self.dim);

        let descend = |step: &dyn Fn(&Subspace) -> Result<Subspace>| -> Result<Vec<Subspace>> {
            let mut chain = vec![full.clone()];
            loop {
                let last = chain.last().expect("nonempty");
                if last.is_zero() {
                    return Ok(chain);
                }
                let next = step(last)?;
                if &next == last {
                    // a fixed point repeats forever
                    return Ok(chain);
                }
                chain.push(next);
            }
        };
        let left = descend(&|s| self.star_of_subspaces(&full, s))?;
        let right = descend(&|s| self.star_of_subspaces(s, &full))?;

        let mut strong = vec![full.clone()];
        loop {
            let n = strong.len() + 1;
            let mut term = Subspace::zero(self.field, self.dim);
            for j in 1..n {
                let piece = self.star_of_subspaces(&strong[j - 1], &strong[n - j - 1])?;
                term = term.sum(&piece)?;
            }
            let done = term.is_zero();
            strong.push(term);
            if done {
                break;
            }
            let m0 = (1..=n)
                .find(|&m| strong[m - 1] == strong[n - 1])
                .unwrap_or(n);
            if n >= 2 * m0 {
                break;
            }
        }

        Ok(ChainReport {
            left_index: chain_index(&left),
            right_index: chain_index(&right),
            strong_index: chain_index(&strong),
            left,
            right,
            strong,
        })
    }

    /// All nonzero tensor entries as `(k, sorted left multi-index, right, out, value)`.
    pub fn entries(&self) -> Vec<(usize, Vec<usize>, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for lambda in &self.lambdas {
            for (left, j, v) in lambda.entries() {
                for (o, x) in v.entries().iter().enumerate() {
                    if !x.is_zero() {
                        out.push((lambda.degree, left.to_vec(), j, o, x.clone()));
                    }
                }
            }
        }
        out
    }

    /// Whether both braces carry identical `Λ_k` for every `k` (missing
    /// components count as zero).
    pub fn same_tensors(&self, other: &GradedBrace) -> bool {
        let n = self.lambdas.len().max(other.lambdas.len());
        self.field == other.field
            && self.dim == other.dim
            && (1..=n).all(|k| match (self.lambda(k), other.lambda(k)) {
                (Some(a), Some(b)) => a == b,
                (Some(x), None) | (None, Some(x)) => x.is_zero(),
                (None, None) => true,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::ScalarField::Rationals;
    use crate::flows::to_brace;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_i64s(Rationals, xs)
    }

    fn q(s: &str) -> Scalar {
        Rationals.parse(s).unwrap()
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[]), 1);
        assert_eq!(multinomial(&[0, 0, 1]), 3);
        assert_eq!(multinomial(&[0, 1, 2]), 6);
        assert_eq!(multinomial(&[2, 2, 2, 2]), 1);
        assert_eq!(multinomial(&[0, 0, 1, 1]), 6);
        assert_eq!(multisets(3, 2).len(), 6);
    }

    #[test]
    fn lambda_symmetric_storage() {
        let mut l = Lambda::zero(Rationals, 3, 2);
        l.set(&[2, 0], 1, v(&[0, 0, 5])).unwrap();
        assert_eq!(l.entry(&[0, 2], 1), v(&[0, 0, 5]));
        // Λ(a, a; b) with a = e1 + e3 counts both orderings
        assert_eq!(l.diagonal(&v(&[1, 0, 1]), &v(&[0, 1, 0])), v(&[0, 0, 10]));
        assert_eq!(
            l.evaluate(&[&v(&[1, 0, 0]), &v(&[0, 0, 1])], &v(&[0, 1, 0])),
            v(&[0, 0, 5])
        );
        l.set(&[0, 2], 1, v(&[0, 0, 0])).unwrap();
        assert!(l.is_zero());
        assert!(l.set(&[0], 1, v(&[1, 0, 0])).is_err());
    }

    #[test]
    fn trivial_brace() {
        let b = GradedBrace::trivial(Rationals, 2);
        let (x, y) = (v(&[1, 2]), v(&[3, -4]));
        assert!(b.star(&x, &y).unwrap().is_zero());
        assert_eq!(b.circ(&x, &y).unwrap(), v(&[4, -2]));
        assert_eq!(b.circ_inverse(&x).unwrap(), v(&[-1, -2]));
        assert_eq!(b.check_left_brace(10, 1), Ok(()));
        assert_eq!(b.check_fbrace(10, 1), Ok(()));
        let chains = b.radical_chains().unwrap();
        assert_eq!(
            chains.left.iter().map(Subspace::dim).collect::<Vec<_>>(),
            vec![2, 0]
        );
        assert_eq!(chains.strong_index, Some(2));
    }

    #[test]
    fn n2_brace_operations() {
        let b = to_brace(&corpus::n2(Rationals)).unwrap();
        assert_eq!(b.star(&v(&[3, 5]), &v(&[-2, 7])).unwrap(), v(&[0, -6]));
        assert_eq!(b.circ(&v(&[3, 5]), &v(&[-2, 7])).unwrap(), v(&[1, 6]));
        // (x, y)^{-1} = (-x, -y + x^2)
        assert_eq!(b.circ_inverse(&v(&[3, 5])).unwrap(), v(&[-3, 4]));
        assert!(b.circ_inverse(&v(&[0, 0])).unwrap().is_zero());
    }

    #[test]
    fn f4_brace_star_on_basis() {
        let b = to_brace(&corpus::f4(Rationals)).unwrap();
        let e1 = b.basis_vector(0);
        let expected = Vector::new(Rationals, vec![q("0"), q("1"), q("-1/2"), q("1/2")]).unwrap();
        assert_eq!(b.star(&e1, &e1).unwrap(), expected);
        assert_eq!(b.circ(&e1, &e1).unwrap(), &(&e1 + &e1) + &expected);
    }

    #[test]
    fn radical_chain_examples() {
        let n2 = to_brace(&corpus::n2(Rationals)).unwrap();
        let r = n2.radical_chains().unwrap();
        let dims = |c: &[Subspace]| c.iter().map(Subspace::dim).collect::<Vec<_>>();
        assert_eq!(dims(&r.left), vec![2, 1, 0]);
        assert_eq!(dims(&r.right), vec![2, 1, 0]);
        assert_eq!(dims(&r.strong), vec![2, 1, 0]);
        assert_eq!(r.left[1].basis()[0], v(&[0, 1]));
        assert_eq!(r.strong_index, Some(3));

        let f4 = to_brace(&corpus::f4(Rationals)).unwrap();
        let r = f4.radical_chains().unwrap();
        assert_eq!(r.strong_index, Some(4));
        assert!(r.strong[3].is_zero());
    }

    #[test]
    fn chain_containments_and_nilpotency_equivalence() {
        for (name, alg) in corpus::algebras(Rationals) {
            let b = to_brace(&alg).unwrap();
            let r = b.radical_chains().unwrap();
            for (i, s) in r.strong.iter().enumerate() {
                if let Some(l) = r.left.get(i) {
                    assert!(l.is_subspace_of(s), "{name} left {i}");
                }
                if let Some(rt) = r.right.get(i) {
                    assert!(rt.is_subspace_of(s), "{name} right {i}");
                }
            }
            assert_eq!(
                r.strongly_nilpotent(),
                r.left_nilpotent() && r.right_nilpotent(),
                "{name}"
            );
            assert_eq!(r.strong_index, Some(alg.class().unwrap()), "{name}");
        }
    }

    #[test]
    fn corrupted_lambda_breaks_the_brace() {
        let mut b = to_brace(&corpus::f4(Rationals)).unwrap();
        let lambda = b.lambda_mut(2).unwrap();
        let mut entry = lambda.entry(&[0, 0], 0);
        entry.set(3, &entry.get(3).clone() + &Rationals.one());
        lambda.set(&[0, 0], 0, entry).unwrap();
        match b.check_left_brace(50, DEFAULT_SEED) {
            Err(Violation::LeftBrace { law, a, b: bb, c }) => {
                assert_eq!(law, BraceLaw::StarCompatibility);
                // the perturbation adds 2 a_1 b_1 c_1 e4 to the defect
                assert!(!(a.get(0).is_zero() || bb.get(0).is_zero() || c.get(0).is_zero()));
            }
            other => panic!("expected a left-brace violation, got {other:?}"),
        }
        assert!(matches!(
            b.check_group(50, DEFAULT_SEED),
            Err(Violation::Associativity { .. })
        ));
        assert!(matches!(b.validate(), Err(Error::InvalidBrace(_))));
        // linearity in b is structural
        assert_eq!(b.check_fbrace(20, 3), Ok(()));
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        let l = Lambda::zero(Rationals, 2, 2);
        assert!(GradedBrace::new_unchecked(Rationals, 2, 3, vec![l]).is_err());
        assert!(GradedBrace::new_unchecked(Rationals, 2, 1, vec![]).is_err());
        let b = GradedBrace::trivial(Rationals, 2);
        assert!(matches!(
            b.star(&v(&[1]), &v(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn not_strongly_nilpotent_is_rejected() {
        // a*b = a_1 b_1 e1 is bilinear but e1*e1 = e1 never dies
        let mut l = Lambda::zero(Rationals, 1, 1);
        l.set(&[0], 0, v(&[1])).unwrap();
        let b = GradedBrace::new_unchecked(Rationals, 1, 3, vec![l]).unwrap();
        let r = b.radical_chains().unwrap();
        assert!(!r.strongly_nilpotent() && !r.left_nilpotent());
        assert!(GradedBrace::new(Rationals, 1, 3, b.lambdas().to_vec()).is_err());
    }
}
