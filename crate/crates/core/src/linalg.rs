//! Dense exact linear algebra over a [`ScalarField`].

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};

/// An element of the coordinate space `F^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: ScalarField,
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: ScalarField, entries: Vec<Scalar>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Vector { field, entries })
    }

    pub fn zero(field: ScalarField, dim: usize) -> Self {
        Vector {
            field,
            entries: vec![field.zero(); dim],
        }
    }

    /// The standard basis vector `e_index`.
    pub fn unit(field: ScalarField, dim: usize, index: usize) -> Self {
        let mut v = Vector::zero(field, dim);
        v.entries[index] = field.one();
        v
    }

    pub fn from_i64s(field: ScalarField, values: &[i64]) -> Self {
        Vector {
            field,
            entries: values.iter().map(|&n| field.from_i64(n)).collect(),
        }
    }

    pub fn parse(field: ScalarField, values: &[&str]) -> Result<Self> {
        let entries = values
            .iter()
            .map(|s| field.parse(s))
            .collect::<Result<_>>()?;
        Ok(Vector { field, entries })
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: Scalar) {
        assert_eq!(value.field(), self.field, "scalar field mismatch");
        self.entries[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector {
            field: self.field,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Vector) {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (x, y) in self.entries.iter_mut().zip(&other.entries) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }

    /// Check that `other` lives in the same space as `self`.
    pub fn check_compatible(&self, other: &Vector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        &self + &rhs
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        &self - &rhs
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            field: self.field,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: ScalarField,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: ScalarField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: ScalarField, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: ScalarField, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|s| s.field() != field) {
                return Err(Error::FieldMismatch(field, bad.field()));
            }
            data.extend(row);
        }
        Ok(Matrix {
            field,
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(field: ScalarField, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&n| field.from_i64(n)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("rectangular integer rows")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: ScalarField, dim: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zero(field, dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in 0..dim {
                m.set(i, j, c.get(i).clone());
            }
        }
        m
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector {
            field: self.field,
            entries: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            field: self.field,
            entries: (0..self.rows).map(|i| self.get(i, j).clone()).collect(),
        }
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch(self.field, v.field()));
        }
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        let mut out = Vector::zero(self.field, self.rows);
        for j in v.support() {
            for i in 0..self.rows {
                let m = self.get(i, j);
                if !m.is_zero() {
                    out.entries[i] += &(m * v.get(j));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if other.field != self.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if other.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, n: u32) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    /// Re-express a rational matrix over another field.
    pub fn to_field(&self, field: ScalarField) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|x| match x.as_rational() {
                Some(q) => field.from_rational(q),
                None if x.field() == field => Ok(x.clone()),
                None => Err(Error::FieldMismatch(field, x.field())),
            })
            .collect::<Result<_>>()?;
        Ok(Matrix {
            field,
            data,
            ..self.clone()
        })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let pivots = aug.row_reduce(n);
        if pivots.len() < n {
            return Err(Error::NoSolution);
        }
        let mut inv = Matrix::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// In-place reduced row echelon form, pivoting only in the first
    /// `pivot_cols` columns. Returns the pivot columns in row order.
    fn row_reduce(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inverse().expect("pivot is nonzero");
            for j in c..self.cols {
                let x = self.get(r, j) * &inv;
                self.set(r, j, x);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let pivot_row = self.get(r, j);
                    if !pivot_row.is_zero() {
                        let x = self.get(i, j) - &(&factor * pivot_row);
                        self.set(i, j, x);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// Solve `m x = rhs` exactly. Free variables of an underdetermined
/// system are set to zero.
pub fn solve_linear(m: &Matrix, rhs: &Vector) -> Result<Vector> {
    if rhs.field() != m.field() {
        return Err(Error::FieldMismatch(m.field(), rhs.field()));
    }
    if rhs.dim() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: rhs.dim(),
        });
    }
    let columns: Vec<Vector> = vec![rhs.clone()];
    solve_many(m, &columns).map(|mut xs| xs.remove(0))
}

/// Solve `m x_i = rhs_i` for several right-hand sides with one elimination.
fn solve_many(m: &Matrix, rhs: &[Vector]) -> Result<Vec<Vector>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut aug = Matrix::zero(m.field(), rows, cols + rhs.len());
    for i in 0..rows {
        for j in 0..cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        for (k, b) in rhs.iter().enumerate() {
            aug.set(i, cols + k, b.get(i).clone());
        }
    }
    let pivots = aug.row_reduce(cols);
    // rows below the pivots must have a zero right-hand side
    for i in pivots.len()..rows {
        if (0..rhs.len()).any(|k| !aug.get(i, cols + k).is_zero()) {
            return Err(Error::NoSolution);
        }
    }
    Ok((0..rhs.len())
        .map(|k| {
            let mut x = Vector::zero(m.field(), cols);
            for (r, &c) in pivots.iter().enumerate() {
                x.set(c, aug.get(r, cols + k).clone());
            }
            x
        })
        .collect())
}

/// A linear subspace of `F^d`, stored as a reduced row-echelon basis so that
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: ScalarField,
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(field: ScalarField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: ScalarField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: (0..ambient)
                .map(|i| Vector::unit(field, ambient, i))
                .collect(),
        }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let mut vectors = self.basis.clone();
        vectors.push(v.clone());
        span(self.field, self.ambient, &vectors).is_ok_and(|s| s.dim() == self.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        span(self.field, self.ambient, &vectors)
    }
}

/// Canonical echelon basis of the span of `vectors` inside `F^ambient`.
pub fn span(field: ScalarField, ambient: usize, vectors: &[Vector]) -> Result<Subspace> {
    for v in vectors {
        if v.field() != field {
            return Err(Error::FieldMismatch(field, v.field()));
        }
        if v.dim() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: v.dim(),
            });
        }
    }
    let nonzero: Vec<&Vector> = vectors.iter().filter(|v| !v.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(Subspace::zero(field, ambient));
    }
    let mut m = Matrix::zero(field, nonzero.len(), ambient);
    for (i, v) in nonzero.iter().enumerate() {
        for j in 0..ambient {
            m.set(i, j, v.get(j).clone());
        }
    }
    let rank = m.row_reduce(ambient).len();
    Ok(Subspace {
        field,
        ambient,
        basis: (0..rank).map(|i| m.row(i)).collect(),
    })
}

/// Interpolation nodes used throughout: `1, 1/2, 1/4, ...` over the
/// rationals, `1, 2, 3, ...` over `F_p` (powers of 2 may repeat there).
pub fn interpolation_nodes(field: ScalarField, count: usize) -> Result<Vec<Scalar>> {
    match field {
        ScalarField::Rationals => Ok((0..count).map(|i| field.pow2(-(i as i64))).collect()),
        ScalarField::Prime(p) => {
            if count as u64 >= p {
                return Err(Error::CharacteristicTooSmall {
                    characteristic: p,
                    required: count,
                });
            }
            Ok((1..=count).map(|i| field.from_i64(i as i64)).collect())
        }
    }
}

/// Coefficients `c_0..c_deg` of the unique vector-valued polynomial of degree
/// at most `degree_bound` through the given points.
pub fn interpolate_coefficients(
    points: &[(Scalar, Vector)],
    degree_bound: usize,
) -> Result<Vec<Vector>> {
    let n = degree_bound + 1;
    if points.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: points.len(),
        });
    }
    let field = points[0].0.field();
    let dim = points[0].1.dim();
    for (i, (t, v)) in points.iter().enumerate() {
        if t.field() != field {
            return Err(Error::FieldMismatch(field, t.field()));
        }
        if v.field() != field {
            return Err(Error::FieldMismatch(field, v.field()));
        }
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
        if t.is_zero() {
            return Err(Error::ZeroNode);
        }
        if points[..i].iter().any(|(u, _)| u == t) {
            return Err(Error::DuplicateNode);
        }
    }
    let mut vandermonde = Matrix::zero(field, n, n);
    for (i, (t, _)) in points.iter().enumerate() {
        let mut power = field.one();
        for k in 0..n {
            vandermonde.set(i, k, power.clone());
            power = &power * t;
        }
    }
    // One right-hand side per output coordinate.
    let rhs: Vec<Vector> = (0..dim)
        .map(|c| Vector {
            field,
            entries: points.iter().map(|(_, v)| v.get(c).clone()).collect(),
        })
        .collect();
    let per_coordinate = solve_many(&vandermonde, &rhs)?;
    Ok((0..n)
        .map(|k| Vector {
            field,
            entries: per_coordinate.iter().map(|x| x.get(k).clone()).collect(),
        })
        .collect())
}

/// Evaluate `sum_k c_k t^k`.
pub fn evaluate_polynomial(coefficients: &[Vector], t: &Scalar) -> Vector {
    let mut acc = Vector::zero(t.field(), coefficients[0].dim());
    for c in coefficients.iter().rev() {
        acc = &acc.scale(t) + c;
    }
    acc
}
