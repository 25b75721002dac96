//! Exact integer and rational linear algebra. Everything here is
//! arbitrary-precision; no floating point is used anywhere in the crate.

mod hnf;
mod rational;
mod snf;

pub use hnf::{hermite_normal_form, integer_kernel, saturate, HermiteForm};
pub use rational::RationalMatrix;
pub use snf::{smith_normal_form, SmithForm};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use crate::error::{Error, Result};

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;
/// Exact rational scalar.
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// A point of a lattice Z^rank, written in the fixed standard basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![Int::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![Int::zero(); rank];
        v[i] = Int::one();
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// The pairing <self, other> in the standard dual bases.
    pub fn dot(&self, other: &LatticeVector) -> Int {
        debug_assert_eq!(self.rank(), other.rank());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scaled(&self, k: &Int) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    /// gcd of the coordinates; zero for the zero vector.
    pub fn content(&self) -> Int {
        self.0
            .iter()
            .fold(Int::zero(), |acc, c| acc.gcd(&c.abs()))
    }

    /// Divides out the content, keeping the direction. Errors on zero.
    pub fn primitive(&self) -> Result<LatticeVector> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(LatticeVector(self.0.iter().map(|c| c / &g).collect()))
    }

    pub fn max_abs(&self) -> Int {
        self.0
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Int::zero)
    }

    pub fn to_rational(&self) -> Vec<Rat> {
        self.0
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

/// Row-major integer matrix with exact entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Int>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| Int::from(v)))
            .collect();
        IntegerMatrix { rows: r, cols: c, entries }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[LatticeVector]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, LatticeVector::rank);
        let mut m = Self::zero(rows, cols);
        for (j, v) in columns.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = v.0[i].clone();
            }
        }
        m
    }

    pub fn from_rows(rows: &[LatticeVector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, LatticeVector::rank);
        let mut m = Self::zero(r, c);
        for (i, v) in rows.iter().enumerate() {
            for j in 0..c {
                m[(i, j)] = v.0[j].clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector((0..self.cols).map(|j| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<LatticeVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut p = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                p[(i, j)] = acc;
            }
        }
        p
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.rank(), "matrix/vector shape mismatch");
        LatticeVector(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| &self[(i, j)] * &v.0[j])
                        .sum::<Int>()
                })
                .collect(),
        )
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a: Vec<Vec<Int>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::from_int(self)
    }

    /// Inverse of a matrix with determinant ±1. Errors otherwise.
    pub fn inverse_unimodular(&self) -> Result<IntegerMatrix> {
        let det = self.determinant()?;
        if det.abs() != Int::one() {
            return Err(Error::Internal(format!(
                "inverse_unimodular on matrix with |det| = {}",
                det.abs()
            )));
        }
        let inv = self
            .to_rational()
            .inverse()
            .ok_or_else(|| Error::Internal("unimodular matrix not invertible".into()))?;
        inv.to_integer()
            .ok_or_else(|| Error::Internal("unimodular inverse not integral".into()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square()
            && self
                .determinant()
                .map(|d| d.abs() == Int::one())
                .unwrap_or(false)
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.entries[i * self.cols + j]
    }
}

/// A vector of exact rationals, kept in lowest terms by the `Rat` type.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalVector(pub Vec<Rat>);

impl RationalVector {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Clears denominators and divides by the content; preserves direction.
    pub fn to_primitive_lattice(&self) -> Result<LatticeVector> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let lcm = self
            .0
            .iter()
            .fold(Int::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<Int> = self.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        LatticeVector(ints).primitive()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.denom().is_one())
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if !self.is_integral() {
            return None;
        }
        Some(LatticeVector(self.0.iter().map(|c| c.numer().clone()).collect()))
    }
}

/// |det| of the square matrix with the given columns; 0 when dependent.
/// For independent columns this equals the index of their span in Z^n,
/// which the SNF route computes as the product of the invariant factors.
pub fn lattice_index(vectors: &[LatticeVector]) -> Result<Int> {
    let n = vectors.len();
    if n == 0 {
        return Ok(Int::one());
    }
    for v in vectors {
        if v.rank() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.rank(),
            });
        }
    }
    let det = IntegerMatrix::from_columns(vectors).determinant()?;
    Ok(det.abs())
}

/// The unique primitive vector on the same ray.
pub fn primitive_vector(v: &LatticeVector) -> Result<LatticeVector> {
    v.primitive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    #[test]
    fn determinant_identity() {
        let m = IntegerMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert_eq!(m.determinant().unwrap(), int(1));
    }

    #[test]
    fn determinant_hand_cofactor() {
        let m = IntegerMatrix::from_i64(&[&[1, 0], &[1, 2]]);
        assert_eq!(m.determinant().unwrap(), int(2));
        let m = IntegerMatrix::from_i64(&[&[-1, 0], &[-1, 3]]);
        assert_eq!(m.determinant().unwrap(), int(-3));
    }

    #[test]
    fn determinant_rejects_non_square() {
        let m = IntegerMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(m.determinant(), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn determinant_3x3() {
        let m = IntegerMatrix::from_i64(&[&[2, 1, 0], &[-1, 3, 2], &[0, 0, 1]]);
        // 2*3 - 1*(-1) = 7
        assert_eq!(m.determinant().unwrap(), int(7));
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_vector(&lv(&[4, -2])).unwrap(), lv(&[2, -1]));
        assert_eq!(primitive_vector(&lv(&[1, 0, 0])).unwrap(), lv(&[1, 0, 0]));
        assert_eq!(primitive_vector(&lv(&[0, -6])).unwrap(), lv(&[0, -1]));
        assert!(primitive_vector(&lv(&[0, 0])).is_err());
    }

    #[test]
    fn primitive_idempotent() {
        let v = lv(&[6, -9, 15]);
        let p = primitive_vector(&v).unwrap();
        assert_eq!(primitive_vector(&p).unwrap(), p);
    }

    #[test]
    fn lattice_index_examples() {
        assert_eq!(lattice_index(&[lv(&[1, 0]), lv(&[1, 2])]).unwrap(), int(2));
        assert_eq!(lattice_index(&[lv(&[1, 0]), lv(&[2, 0])]).unwrap(), int(0));
        assert_eq!(lattice_index(&[lv(&[-1, 0]), lv(&[0, -1])]).unwrap(), int(1));
    }

    #[test]
    fn unimodular_inverse_round_trip() {
        let m = IntegerMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), IntegerMatrix::identity(2));
    }
}
