//! From a brace back to its pre-Lie algebra.
//!
//! The product is `a·b = lim_{n→∞} 2^n (2^{-n} a) * b`. Since `t ↦ (t a) * b`
//! is a polynomial with zero constant term, the limit is exactly its linear
//! coefficient, which is what [`dot`] extracts.

use std::collections::BTreeMap;

use crate::brace::GradedBrace;
use crate::check::{CheckResult, Violation};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::flows::to_brace;
use crate::free_expansion::{brace_degree_bound, evaluate, sum_star_correction};
use crate::linalg::{interpolate_coefficients, interpolation_nodes, Vector};
use crate::prelie::PreLieAlgebra;
use crate::sampling::Sampler;

/// Coefficients of `t ↦ (t a) * b`, from `class_bound` interpolation nodes.
fn star_coefficients(brace: &GradedBrace, a: &Vector, b: &Vector) -> Result<Vec<Vector>> {
    let s = brace.class_bound();
    let points = interpolation_nodes(brace.field(), s)?
        .into_iter()
        .map(|t| Ok((t.clone(), brace.star(&a.scale(&t), b)?)))
        .collect::<Result<Vec<(Scalar, Vector)>>>()?;
    let coefficients = interpolate_coefficients(&points, s - 1)?;
    if !coefficients[0].is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "(t a) * b has a nonzero constant term at a={a}, b={b}"
        )));
    }
    Ok(coefficients)
}

/// `a·b`, the linear coefficient of `t ↦ (t a) * b`, cross-checked against `Λ_1(a; b)`.
pub fn dot(brace: &GradedBrace, a: &Vector, b: &Vector) -> Result<Vector> {
    let linear = star_coefficients(brace, a, b)?.swap_remove(1);
    let lambda1 = match brace.lambda(1) {
        Some(l) => l.diagonal(a, b),
        None => Vector::zero(brace.field(), brace.dim()),
    };
    if linear != lambda1 {
        return Err(Error::InternalInconsistency(format!(
            "interpolated product {linear} differs from the first graded component {lambda1}"
        )));
    }
    Ok(linear)
}

/// The sequence `2^n (2^{-n} a) * b` next to its graded decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitWitness {
    /// `2^n (2^{-n} a) * b` for `n = 0..=n_max`, by direct evaluation.
    pub sequence: Vec<Vector>,
    /// `Λ_k(a, …, a; b)` for `k = 1..class_bound`, index `k - 1`.
    pub components: Vec<Vector>,
    /// The limit `a·b`.
    pub limit: Vector,
}

impl LimitWitness {
    /// Deviation of step `n` from the limit, split by degree: entry `k - 2`
    /// is `2^{n(1-k)} Λ_k(a, …, a; b)`.
    pub fn deviation(&self, n: u32, field: ScalarField) -> Vec<Vector> {
        self.components
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&field.pow2(-(n as i64) * i as i64)))
            .collect()
    }

    /// Every step equals limit plus deviation, and each degree-`k` part of
    /// the deviation shrinks by exactly `2^{1-k}` from one step to the next.
    pub fn check(&self, field: ScalarField) -> CheckResult {
        for (n, value) in self.sequence.iter().enumerate() {
            let n = n as u32;
            let deviation = self.deviation(n, field);
            let total = deviation.iter().fold(self.limit.clone(), |acc, d| &acc + d);
            if &total != value {
                return Err(Violation::LimitLaw { n, degree: 0 });
            }
            if n == 0 {
                continue;
            }
            for (i, (now, before)) in deviation
                .iter()
                .zip(self.deviation(n - 1, field))
                .enumerate()
            {
                let k = i + 2;
                if *now != before.scale(&field.pow2(1 - k as i64)) {
                    return Err(Violation::LimitLaw { n, degree: k });
                }
            }
        }
        Ok(())
    }
}

/// Build the witness, with the graded components read off both from the
/// tensors and from interpolation in `t` (which must agree).
pub fn limit_witness(
    brace: &GradedBrace,
    a: &Vector,
    b: &Vector,
    n_max: u32,
) -> Result<LimitWitness> {
    let field = brace.field();
    let coefficients = star_coefficients(brace, a, b)?;
    let components: Vec<Vector> = (1..brace.class_bound())
        .map(|k| match brace.lambda(k) {
            Some(l) => l.diagonal(a, b),
            None => Vector::zero(field, brace.dim()),
        })
        .collect();
    if coefficients[1..] != components[..] {
        return Err(Error::InternalInconsistency(
            "graded components disagree with the interpolated polynomial".into(),
        ));
    }
    let sequence = (0..=n_max)
        .map(|n| {
            let shrunk = a.scale(&field.pow2(-(n as i64)));
            Ok(brace.star(&shrunk, b)?.scale(&field.pow2(n as i64)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitWitness {
        sequence,
        limit: components[0].clone(),
        components,
    })
}

/// `(αa + γb)·c = α(a·c) + γ(b·c)` and `a·(αb + γc) = α(a·b) + γ(a·c)` on random data.
pub fn check_bilinearity(brace: &GradedBrace, trials: usize, seed: u64) -> Result<CheckResult> {
    let (field, d) = (brace.field(), brace.dim());
    let mut rng = Sampler::new(seed);
    for _ in 0..trials {
        let (alpha, gamma) = (rng.scalar(field), rng.scalar(field));
        let (a, b, c) = (
            rng.vector(field, d),
            rng.vector(field, d),
            rng.vector(field, d),
        );
        let combo = &a.scale(&alpha) + &b.scale(&gamma);
        let lhs = dot(brace, &combo, &c)?;
        let rhs = &dot(brace, &a, &c)?.scale(&alpha) + &dot(brace, &b, &c)?.scale(&gamma);
        if lhs != rhs {
            return Ok(Err(Violation::Bilinearity {
                detail: format!("left slot at α={alpha}, γ={gamma}, a={a}, b={b}, c={c}"),
            }));
        }
        let combo = &b.scale(&alpha) + &c.scale(&gamma);
        let lhs = dot(brace, &a, &combo)?;
        let rhs = &dot(brace, &a, &b)?.scale(&alpha) + &dot(brace, &a, &c)?.scale(&gamma);
        if lhs != rhs {
            return Ok(Err(Violation::Bilinearity {
                detail: format!("right slot at α={alpha}, γ={gamma}, a={a}, b={b}, c={c}"),
            }));
        }
    }
    Ok(Ok(()))
}

/// The pre-Lie algebra with `e_i·e_j = dot(e_i, e_j)`, validated.
pub fn to_prelie(brace: &GradedBrace) -> Result<PreLieAlgebra> {
    let (field, d) = (brace.field(), brace.dim());
    let mut structure = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            structure
                .extend(dot(brace, &brace.basis_vector(i), &brace.basis_vector(j))?.into_entries());
        }
    }
    PreLieAlgebra::new(field, d, structure)?.with_basis_names(brace.basis_names().to_vec())
}

/// `to_prelie(to_brace(alg))` has the same structure constants as `alg`.
pub fn roundtrip_prelie(alg: &PreLieAlgebra) -> Result<CheckResult> {
    let back = to_prelie(&to_brace(alg)?)?;
    if back.structure() == alg.structure() {
        return Ok(Ok(()));
    }
    let (i, j, k, _) = alg
        .entries()
        .into_iter()
        .chain(back.entries())
        .find(|(i, j, k, _)| alg.constant(*i, *j, *k) != back.constant(*i, *j, *k))
        .expect("structures differ somewhere");
    Ok(Err(Violation::Mismatch {
        detail: format!(
            "coefficient of e{} in e{}·e{} is {} after the round trip, was {}",
            k + 1,
            i + 1,
            j + 1,
            back.constant(i, j, k),
            alg.constant(i, j, k)
        ),
    }))
}

/// `to_brace(to_prelie(brace))` has the same graded tensors as `brace`.
pub fn roundtrip_brace(brace: &GradedBrace) -> Result<CheckResult> {
    let back = to_brace(&to_prelie(brace)?)?;
    if back.same_tensors(brace) {
        return Ok(Ok(()));
    }
    let k = (1..=brace.class_bound().max(back.class_bound()))
        .find(|&k| brace.lambda(k) != back.lambda(k))
        .unwrap_or(0);
    Ok(Err(Violation::Mismatch {
        detail: format!("graded component of degree {k} changes in the round trip"),
    }))
}

/// Checks `x*(y*z) − (x*y)*z − y*(x*z) + (y*x)*z = d(y,x,z) − d(x,y,z)`, where
/// `d` is the part of the expanded `(x+y)*z` beyond its four leading terms.
pub fn prelie_identity_from_expansion(
    brace: &GradedBrace,
    trials: usize,
    seed: u64,
) -> Result<CheckResult> {
    let (field, dim) = (brace.field(), brace.dim());
    let bound = brace_degree_bound(brace);
    let dxyz = sum_star_correction('x', 'y', 'z', bound)?;
    let dyxz = sum_star_correction('y', 'x', 'z', bound)?;
    let mut rng = Sampler::new(seed);
    for _ in 0..trials {
        let (a, b, c) = (
            rng.vector(field, dim),
            rng.vector(field, dim),
            rng.vector(field, dim),
        );
        let st = |u: &Vector, v: &Vector| brace.star(u, v);
        let lhs = &(&(&st(&a, &st(&b, &c)?)? - &st(&st(&a, &b)?, &c)?) - &st(&b, &st(&a, &c)?)?)
            + &st(&st(&b, &a)?, &c)?;
        let bindings = BTreeMap::from([('x', a.clone()), ('y', b.clone()), ('z', c.clone())]);
        let rhs = &evaluate(&dyxz, &bindings, brace)? - &evaluate(&dxyz, &bindings, brace)?;
        if lhs != rhs {
            return Ok(Err(Violation::SumStar { a, b, c }));
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::ScalarField::Rationals;
    use crate::sampling::DEFAULT_SEED;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_i64s(Rationals, xs)
    }

    #[test]
    fn dot_examples() {
        let trivial = GradedBrace::trivial(Rationals, 2);
        assert!(dot(&trivial, &v(&[1, 2]), &v(&[3, 4])).unwrap().is_zero());
        let n2 = to_brace(&corpus::n2(Rationals)).unwrap();
        assert_eq!(dot(&n2, &v(&[3, 5]), &v(&[-2, 7])).unwrap(), v(&[0, -6]));
        let f4 = corpus::f4(Rationals);
        let brace = to_brace(&f4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (f4.basis_vector(i), f4.basis_vector(j));
                assert_eq!(dot(&brace, &a, &b).unwrap(), f4.multiply(&a, &b).unwrap());
            }
        }
    }

    #[test]
    fn witness_examples() {
        let trivial = GradedBrace::trivial(Rationals, 2);
        let w = limit_witness(&trivial, &v(&[1, 1]), &v(&[1, 0]), 3).unwrap();
        assert!(w.sequence.iter().all(Vector::is_zero));

        let n2 = to_brace(&corpus::n2(Rationals)).unwrap();
        let w = limit_witness(&n2, &v(&[3, 5]), &v(&[-2, 7]), 3).unwrap();
        assert!(w.sequence.iter().all(|x| *x == v(&[0, -6])));

        let f4 = to_brace(&corpus::f4(Rationals)).unwrap();
        let e1 = f4.basis_vector(0);
        let w = limit_witness(&f4, &e1, &e1, 6).unwrap();
        assert_eq!(w.check(Rationals), Ok(()));
        assert_eq!(w.limit, v(&[0, 1, 0, 0]));
        let tail = Vector::parse(Rationals, &["0", "0", "-1/2", "1/2"]).unwrap();
        for (n, x) in w.sequence.iter().enumerate() {
            let expected = &w.limit + &tail.scale(&Rationals.pow2(-(n as i64)));
            assert_eq!(*x, expected);
        }
    }

    #[test]
    fn tampered_witness_is_caught() {
        let f4 = to_brace(&corpus::f4(Rationals)).unwrap();
        let e1 = f4.basis_vector(0);
        let mut w = limit_witness(&f4, &e1, &e1, 3).unwrap();
        w.sequence[2] = &w.sequence[2] + &e1;
        assert!(matches!(
            w.check(Rationals),
            Err(Violation::LimitLaw { n: 2, .. })
        ));
    }

    #[test]
    fn bilinearity_and_roundtrips() {
        for (name, alg) in corpus::algebras(Rationals) {
            assert_eq!(roundtrip_prelie(&alg).unwrap(), Ok(()), "{name}");
            let brace = to_brace(&alg).unwrap();
            assert_eq!(roundtrip_brace(&brace).unwrap(), Ok(()), "{name}");
            assert_eq!(
                check_bilinearity(&brace, 5, DEFAULT_SEED).unwrap(),
                Ok(()),
                "{name}"
            );
            assert_eq!(
                prelie_identity_from_expansion(&brace, 5, DEFAULT_SEED).unwrap(),
                Ok(()),
                "{name}"
            );
        }
        let trivial = GradedBrace::trivial(Rationals, 3);
        assert_eq!(
            to_prelie(&trivial).unwrap(),
            corpus::zero_algebra(Rationals, 3)
        );
        assert_eq!(roundtrip_brace(&trivial).unwrap(), Ok(()));
    }

    #[test]
    fn corrupted_brace_has_no_prelie_algebra() {
        // Λ_1 of an algebra that fails the pre-Lie identity
        let bad = corpus::f4_corrupted(Rationals);
        let mut lambda = crate::brace::Lambda::zero(Rationals, 4, 1);
        for (i, j, k, c) in bad.entries() {
            let mut e = lambda.entry(&[i], j);
            e.set(k, c);
            lambda.set(&[i], j, e).unwrap();
        }
        let brace = GradedBrace::new_unchecked(Rationals, 4, 5, vec![lambda]).unwrap();
        match to_prelie(&brace) {
            Err(Error::NotPreLie(Violation::PreLieIdentity { i, j, k, .. })) => {
                assert_eq!((i, j, k), (0, 1, 0))
            }
            other => panic!("expected a pre-Lie violation, got {other:?}"),
        }
    }
}
