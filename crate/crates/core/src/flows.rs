//! The group of flows of a nilpotent pre-Lie algebra.
//!
//! With `L_a(b) = a·b` and `s` the nilpotency index:
//!
//! * `exp_L(a, b) = Σ_{k<s} L_a^k(b) / k!`
//! * `W(a) = Σ_{k≥1} L_a^{k-1}(a) / k!`, with compositional inverse `Ω`
//! * `a∘b = a + exp_L(Ω(a), b)`
//!
//! [`to_brace`] turns the resulting star operation into a [`GradedBrace`].

use std::collections::BTreeMap;

use crate::brace::{multisets, GradedBrace, Lambda};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{interpolate_coefficients, interpolation_nodes, Matrix, Vector};
use crate::prelie::PreLieAlgebra;
use crate::sampling::{Sampler, DEFAULT_SEED};

/// Random pairs used by the postcondition of [`to_brace`].
pub const EXTRACTION_CHECK_PAIRS: usize = 20;

fn check_operands(alg: &PreLieAlgebra, xs: &[&Vector]) -> Result<()> {
    for x in xs {
        if x.field() != alg.field() {
            return Err(Error::FieldMismatch(alg.field(), x.field()));
        }
        if x.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: x.dim(),
            });
        }
    }
    Ok(())
}

/// `Σ_{k<s} L_a^k(b) / k!`
pub fn exp_l(alg: &PreLieAlgebra, a: &Vector, b: &Vector) -> Result<Vector> {
    check_operands(alg, &[a, b])?;
    let s = alg.class()?;
    let field = alg.field();
    let mut out = b.clone();
    let mut term = b.clone();
    for k in 1..s {
        term = alg.mul(a, &term);
        if term.is_zero() {
            break;
        }
        out.add_scaled(&field.inverse_factorial(k)?, &term);
    }
    Ok(out)
}

/// `W(a) = a + a·a/2! + a·(a·a)/3! + …`
pub fn w_map(alg: &PreLieAlgebra, a: &Vector) -> Result<Vector> {
    check_operands(alg, &[a])?;
    let s = alg.class()?;
    let field = alg.field();
    let mut out = a.clone();
    let mut term = a.clone();
    for k in 2..=s {
        term = alg.mul(a, &term);
        if term.is_zero() {
            break;
        }
        out.add_scaled(&field.inverse_factorial(k)?, &term);
    }
    Ok(out)
}

/// The unique `x` with `W(x) = a`.
pub fn omega(alg: &PreLieAlgebra, a: &Vector) -> Result<Vector> {
    check_operands(alg, &[a])?;
    let s = alg.class()?;
    let mut x = a.clone();
    for _ in 0..=s {
        let wx = w_map(alg, &x)?;
        if wx == *a {
            return Ok(x);
        }
        // each step fixes the next degree of the correction
        x = &(a - &wx) + &x;
    }
    Err(Error::ConvergenceFailure(s))
}

/// `a∘b = a + exp_L(Ω(a), b)`
pub fn circ(alg: &PreLieAlgebra, a: &Vector, b: &Vector) -> Result<Vector> {
    check_operands(alg, &[a, b])?;
    Ok(a + &exp_l(alg, &omega(alg, a)?, b)?)
}

/// `a*b = a∘b − a − b`
pub fn star(alg: &PreLieAlgebra, a: &Vector, b: &Vector) -> Result<Vector> {
    Ok(&(&circ(alg, a, b)? - a) - b)
}

/// The matrix of `b ↦ a*b`, namely `exp(L_{Ω(a)}) − I`.
pub fn star_matrix(alg: &PreLieAlgebra, a: &Vector) -> Result<Matrix> {
    check_operands(alg, &[a])?;
    let (field, d, s) = (alg.field(), alg.dim(), alg.class()?);
    let w = omega(alg, a)?;
    let columns: Vec<Vector> = (0..d).map(|j| alg.mul(&w, &alg.basis_vector(j))).collect();
    let left = Matrix::from_columns(field, d, &columns);
    let mut out = Matrix::zero(field, d, d);
    let mut power = Matrix::identity(field, d);
    for k in 1..s {
        power = left.mul(&power)?;
        out = out.add(&power.scale(&field.inverse_factorial(k)?));
    }
    Ok(out)
}

/// Coefficients `P_0..P_{s-1}` of `t ↦ S(t·x)`, each flattened column by column.
fn star_polynomial(alg: &PreLieAlgebra, x: &Vector) -> Result<Vec<Vector>> {
    let (field, d, s) = (alg.field(), alg.dim(), alg.class()?);
    let points = interpolation_nodes(field, s)?
        .into_iter()
        .map(|t| {
            let m = star_matrix(alg, &x.scale(&t))?;
            let flat = (0..d).flat_map(|j| m.column(j).into_entries()).collect();
            Ok((t, Vector::new(field, flat)?))
        })
        .collect::<Result<Vec<(Scalar, Vector)>>>()?;
    let coefficients = interpolate_coefficients(&points, s - 1)?;
    if !coefficients[0].is_zero() {
        return Err(Error::InternalInconsistency(
            "star(0, b) is not zero".into(),
        ));
    }
    Ok(coefficients)
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Extract the graded brace of `alg`: `Λ_1 .. Λ_{s-1}` by interpolation in
/// `t` followed by polarization, checked against [`circ`] afterwards.
pub fn to_brace(alg: &PreLieAlgebra) -> Result<GradedBrace> {
    let (field, d, s) = (alg.field(), alg.dim(), alg.class()?);
    field.require_characteristic_above(s)?;

    // diagonal polynomials keyed by count vectors, filled on demand
    let mut cache: BTreeMap<Vec<usize>, Vec<Vector>> = BTreeMap::new();
    let mut lambdas = Vec::with_capacity(s - 1);
    for k in 1..s {
        let mut lambda = Lambda::zero(field, d, k);
        let inv_fact = field.inverse_factorial(k)?;
        for key in multisets(d, k) {
            let mut counts = vec![0usize; d];
            for &i in &key {
                counts[i] += 1;
            }
            // Λ(x_1..x_k) = (1/k!) Σ_{S ⊆ [k]} (−1)^{k−|S|} P_k(Σ_{i∈S} x_i)
            let mut acc = Vector::zero(field, d * d);
            for sub in sub_counts(&counts) {
                let size: usize = sub.iter().sum();
                if size == 0 {
                    continue;
                }
                let weight: i64 = sub
                    .iter()
                    .zip(&counts)
                    .map(|(&c, &n)| binomial(n, c))
                    .product();
                let sign = if (k - size) % 2 == 0 { 1 } else { -1 };
                if !cache.contains_key(&sub) {
                    let x = Vector::new(
                        field,
                        sub.iter().map(|&c| field.from_i64(c as i64)).collect(),
                    )?;
                    cache.insert(sub.clone(), star_polynomial(alg, &x)?);
                }
                acc.add_scaled(&field.from_i64(sign * weight), &cache[&sub][k]);
            }
            let acc = acc.scale(&inv_fact);
            for j in 0..d {
                let column = Vector::new(field, acc.entries()[j * d..(j + 1) * d].to_vec())?;
                lambda.set(&key, j, column)?;
            }
        }
        lambdas.push(lambda);
    }
    let brace = GradedBrace::new_unchecked(field, d, s, lambdas)?
        .with_basis_names(alg.basis_names().to_vec())?;

    let mut rng = Sampler::new(DEFAULT_SEED);
    let basis_pairs = (0..d).flat_map(|i| (0..d).map(move |j| (i, j)));
    let pairs: Vec<(Vector, Vector)> = basis_pairs
        .map(|(i, j)| (alg.basis_vector(i), alg.basis_vector(j)))
        .chain((0..EXTRACTION_CHECK_PAIRS).map(|_| (rng.vector(field, d), rng.vector(field, d))))
        .collect();
    for (a, b) in &pairs {
        if brace.star(a, b)? != star(alg, a, b)? {
            return Err(Error::InternalInconsistency(format!(
                "extracted brace disagrees with the flow product at a={a}, b={b}"
            )));
        }
    }
    Ok(brace)
}

/// Every count vector bounded entrywise by `counts`.
fn sub_counts(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in counts {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=n).map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}
