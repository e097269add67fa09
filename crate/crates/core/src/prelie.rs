//! Finite-dimensional pre-Lie algebras given by structure constants.

use crate::check::{CheckResult, Violation};
use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};
use crate::linalg::{span, Subspace, Vector};

/// `e_i · e_j = Σ_k c[i][j][k] e_k` over a [`ScalarField`].
///
/// Algebras built with [`PreLieAlgebra::new`] are validated: the pre-Lie
/// identity holds, the algebra is nilpotent, and a prime characteristic
/// exceeds the nilpotency index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreLieAlgebra {
    field: ScalarField,
    dim: usize,
    structure: Vec<Scalar>,
    basis_names: Vec<String>,
    class: Option<usize>,
}

impl PreLieAlgebra {
    pub fn new(field: ScalarField, dim: usize, structure: Vec<Scalar>) -> Result<Self> {
        let mut alg = Self::new_unchecked(field, dim, structure)?;
        alg.validate()?;
        Ok(alg)
    }

    /// Build from sparse `(i, j, k, c)` entries, then validate.
    pub fn from_entries(
        field: ScalarField,
        dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self> {
        let mut alg = Self::unchecked_from_entries(field, dim, entries)?;
        alg.validate()?;
        Ok(alg)
    }

    pub fn unchecked_from_entries(
        field: ScalarField,
        dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self> {
        let mut structure = vec![field.zero(); dim * dim * dim];
        for (i, j, k, c) in entries {
            let idx = [*i, *j, *k];
            if let Some(&bad) = idx.iter().find(|&&x| x >= dim) {
                return Err(Error::Parse(format!(
                    "index {bad} out of range for dimension {dim}"
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            structure[(i * dim + j) * dim + k] += c;
        }
        Self::new_unchecked(field, dim, structure)
    }

    /// Structure constants without the pre-Lie and nilpotency checks.
    pub fn new_unchecked(field: ScalarField, dim: usize, structure: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::PreconditionViolated(
                "dimension must be positive".into(),
            ));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: structure.len(),
            });
        }
        if let Some(bad) = structure.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(PreLieAlgebra {
            field,
            dim,
            structure,
            basis_names: (1..=dim).map(|i| format!("e{i}")).collect(),
            class: None,
        })
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

    /// Run the pre-Lie identity and nilpotency checks, caching the class.
    pub fn validate(&mut self) -> Result<()> {
        self.check_prelie_identity().map_err(Error::NotPreLie)?;
        let s = self.nilpotency_index()?;
        self.field.require_characteristic_above(s)?;
        self.class = Some(s);
        Ok(())
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn structure(&self) -> &[Scalar] {
        &self.structure
    }

    /// Coefficient of `e_k` in `e_i · e_j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero constants as `(i, j, k, c)`, in index order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Same constants over another field (e.g. the reduction mod p of an
    /// integral algebra), validated afresh.
    pub fn to_field(&self, field: ScalarField) -> Result<Self> {
        let structure = self
            .structure
            .iter()
            .map(|c| match c.as_rational() {
                Some(q) => field.from_rational(q),
                None if c.field() == field => Ok(c.clone()),
                None => Err(Error::FieldMismatch(field, c.field())),
            })
            .collect::<Result<Vec<_>>>()?;
        PreLieAlgebra::new(field, self.dim, structure)?.with_basis_names(self.basis_names.clone())
    }

    /// The nilpotency index `s`, computing it when the algebra was built unchecked.
    pub fn class(&self) -> Result<usize> {
        match self.class {
            Some(s) => Ok(s),
            None => self.nilpotency_index(),
        }
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

    pub fn multiply(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_operand(x)?;
        self.check_operand(y)?;
        Ok(self.mul(x, y))
    }

    /// Unchecked bilinear product for operands already known to fit.
    pub(crate) fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let d = self.dim;
        let mut out = Vector::zero(self.field, d);
        let ys: Vec<usize> = y.support().collect();
        for i in x.support() {
            for &j in &ys {
                let xy = x.get(i) * y.get(j);
                let base = (i * d + j) * d;
                for k in 0..d {
                    let c = &self.structure[base + k];
                    if !c.is_zero() {
                        let mut entry = out.get(k).clone();
                        entry += &(&xy * c);
                        out.set(k, entry);
                    }
                }
            }
        }
        out
    }

    /// `[x, y] = x·y − y·x`
    pub fn lie_bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        Ok(&self.multiply(x, y)? - &self.mul(y, x))
    }

    /// Checks `(e_i e_j)e_k − e_i(e_j e_k) = (e_j e_i)e_k − e_j(e_i e_k)` on all
    /// basis triples; by multilinearity this covers every triple.
    pub fn check_prelie_identity(&self) -> CheckResult {
        let d = self.dim;
        let basis: Vec<Vector> = (0..d).map(|i| self.basis_vector(i)).collect();
        let products: Vec<Vec<Vector>> = (0..d)
            .map(|i| (0..d).map(|j| self.mul(&basis[i], &basis[j])).collect())
            .collect();
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue; // the residual is antisymmetric in (i, j)
                }
                for k in 0..d {
                    let left = &self.mul(&products[i][j], &basis[k])
                        - &self.mul(&basis[i], &products[j][k]);
                    let right = &self.mul(&products[j][i], &basis[k])
                        - &self.mul(&basis[j], &products[i][k]);
                    let residual = &left - &right;
                    if !residual.is_zero() {
                        return Err(Violation::PreLieIdentity { i, j, k, residual });
                    }
                }
            }
        }
        Ok(())
    }

    /// `D_1 = A`, `D_n = span{ D_j · D_{n−j} }`: the spans of all products of
    /// exactly `n` elements, up to and including the first zero term.
    pub fn product_chain(&self) -> Result<Vec<Subspace>> {
        let mut chain = vec![Subspace::full(self.field, self.dim)];
        loop {
            let n = chain.len() + 1;
            let mut products = Vec::new();
            for j in 1..n {
                for u in chain[j - 1].basis() {
                    for v in chain[n - j - 1].basis() {
                        products.push(self.mul(u, v));
                    }
                }
            }
            let next = span(self.field, self.dim, &products)?;
            let done = next.is_zero();
            chain.push(next);
            if done {
                return Ok(chain);
            }
            // If D_m is constant on [m0, 2 m0] the chain is constant from m0 on.
            let m0 = (1..=n).find(|&m| chain[m - 1] == chain[n - 1]).unwrap_or(n);
            if n >= 2 * m0 {
                return Err(Error::NotNilpotent);
            }
        }
    }

    /// Smallest `s` such that every product of `s` elements vanishes.
    pub fn nilpotency_index(&self) -> Result<usize> {
        Ok(self.product_chain()?.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::ScalarField::Rationals;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_i64s(Rationals, xs)
    }

    #[test]
    fn multiply_examples() {
        let zero = corpus::zero_algebra(Rationals, 3);
        assert!(zero
            .multiply(&v(&[1, 2, 3]), &v(&[4, 5, 6]))
            .unwrap()
            .is_zero());

        let n2 = corpus::n2(Rationals);
        // (x,y)·(u,v) = (0, xu)
        assert_eq!(n2.multiply(&v(&[3, 5]), &v(&[-2, 7])).unwrap(), v(&[0, -6]));

        let f4 = corpus::f4(Rationals);
        assert_eq!(
            f4.multiply(&f4.basis_vector(0), &f4.basis_vector(1))
                .unwrap(),
            f4.basis_vector(3)
        );
    }

    #[test]
    fn multiply_rejects_bad_operands() {
        let n2 = corpus::n2(Rationals);
        assert!(matches!(
            n2.multiply(&v(&[1]), &v(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
        let wrong = Vector::from_i64s(ScalarField::Prime(7), &[1, 0]);
        assert!(matches!(
            n2.multiply(&wrong, &v(&[1, 2])),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn identity_holds_on_corpus() {
        for (name, alg) in corpus::algebras(Rationals) {
            assert_eq!(alg.check_prelie_identity(), Ok(()), "{name}");
        }
    }

    #[test]
    fn corrupted_f4_reports_site() {
        let bad = corpus::f4_corrupted(Rationals);
        match bad.check_prelie_identity() {
            Err(Violation::PreLieIdentity { i, j, k, residual }) => {
                assert_eq!((i, j, k), (0, 1, 0));
                assert_eq!(residual, v(&[0, 0, 0, -1]));
            }
            other => panic!("expected violation, got {other:?}"),
        }
        assert!(matches!(
            PreLieAlgebra::new(Rationals, 4, bad.structure().to_vec()),
            Err(Error::NotPreLie(Violation::PreLieIdentity { .. }))
        ));
    }

    #[test]
    fn doubled_e2e1_still_satisfies_identity() {
        // With a single generator below degree 4 the associator residual
        // only sees triples with i == j, where it vanishes identically.
        let mut entries = corpus::f4(Rationals).entries();
        for e in entries.iter_mut() {
            if (e.0, e.1, e.2) == (1, 0, 2) {
                e.3 = Rationals.from_i64(2);
            }
        }
        assert!(PreLieAlgebra::from_entries(Rationals, 4, &entries).is_ok());
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(
            corpus::zero_algebra(Rationals, 3)
                .nilpotency_index()
                .unwrap(),
            2
        );
        assert_eq!(corpus::n2(Rationals).nilpotency_index().unwrap(), 3);
        assert_eq!(corpus::f4(Rationals).nilpotency_index().unwrap(), 4);
        assert_eq!(corpus::h3(Rationals).nilpotency_index().unwrap(), 3);
        assert_eq!(
            corpus::grafting(Rationals, 4).nilpotency_index().unwrap(),
            5
        );
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        // e1·e1 = e1
        let one = Rationals.one();
        let alg =
            PreLieAlgebra::unchecked_from_entries(Rationals, 1, &[(0, 0, 0, one.clone())]).unwrap();
        assert!(matches!(alg.nilpotency_index(), Err(Error::NotNilpotent)));
        assert!(matches!(
            PreLieAlgebra::from_entries(Rationals, 1, &[(0, 0, 0, one)]),
            Err(Error::NotNilpotent)
        ));
    }

    #[test]
    fn small_characteristic_is_rejected() {
        // class 5 needs p > 5
        let alg = corpus::grafting(Rationals, 4);
        assert!(matches!(
            alg.to_field(ScalarField::Prime(5)),
            Err(Error::CharacteristicTooSmall {
                characteristic: 5,
                required: 5
            })
        ));
        assert!(alg.to_field(ScalarField::Prime(7)).is_ok());
    }

    #[test]
    fn bracket_examples() {
        let n2 = corpus::n2(Rationals);
        let x = v(&[2, -3]);
        assert!(n2.lie_bracket(&x, &x).unwrap().is_zero());
        assert!(n2
            .lie_bracket(&n2.basis_vector(0), &n2.basis_vector(1))
            .unwrap()
            .is_zero());
        let h3 = corpus::h3(Rationals);
        assert_eq!(
            h3.lie_bracket(&h3.basis_vector(0), &h3.basis_vector(1))
                .unwrap(),
            h3.basis_vector(2)
        );
    }

    /// All bracketings of `n` basis elements, products enumerated recursively.
    fn all_products(alg: &PreLieAlgebra, n: usize) -> Vec<Vector> {
        if n == 1 {
            return (0..alg.dim()).map(|i| alg.basis_vector(i)).collect();
        }
        let mut out = Vec::new();
        for left in 1..n {
            let ls = all_products(alg, left);
            let rs = all_products(alg, n - left);
            for l in &ls {
                for r in &rs {
                    out.push(alg.multiply(l, r).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn enumerated_products_vanish_at_index() {
        for (name, alg) in corpus::algebras(Rationals) {
            if alg.dim() > 4 {
                continue;
            }
            let s = alg.nilpotency_index().unwrap();
            assert!(all_products(&alg, s).iter().all(Vector::is_zero), "{name}");
            assert!(
                all_products(&alg, s - 1).iter().any(|p| !p.is_zero()) || s == 2,
                "{name}"
            );
        }
    }

    #[test]
    fn jacobi_identity_on_basis() {
        for (name, alg) in corpus::algebras(Rationals) {
            let d = alg.dim();
            let br = |x: &Vector, y: &Vector| alg.lie_bracket(x, y).unwrap();
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let (a, b, c) = (
                            alg.basis_vector(i),
                            alg.basis_vector(j),
                            alg.basis_vector(k),
                        );
                        let sum =
                            &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
                        assert!(sum.is_zero(), "{name} at ({i},{j},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn multiply_is_bilinear() {
        let mut rng = crate::sampling::Sampler::new(7);
        for (name, alg) in corpus::algebras(Rationals) {
            let d = alg.dim();
            for _ in 0..10 {
                let (x, x2, y) = (
                    rng.vector(Rationals, d),
                    rng.vector(Rationals, d),
                    rng.vector(Rationals, d),
                );
                let (a, b) = (rng.scalar(Rationals), rng.scalar(Rationals));
                let combo = &x.scale(&a) + &x2.scale(&b);
                let lhs = alg.multiply(&combo, &y).unwrap();
                let rhs = &alg.multiply(&x, &y).unwrap().scale(&a)
                    + &alg.multiply(&x2, &y).unwrap().scale(&b);
                assert_eq!(lhs, rhs, "{name} left");
                let lhs = alg.multiply(&y, &combo).unwrap();
                let rhs = &alg.multiply(&y, &x).unwrap().scale(&a)
                    + &alg.multiply(&y, &x2).unwrap().scale(&b);
                assert_eq!(lhs, rhs, "{name} right");
            }
        }
    }
}
