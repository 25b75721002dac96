//! Dense exact-rational matrices: just enough Gaussian elimination for
//! ranks, solves, inverses and kernels at desk scale.

use num_traits::{One, Zero};

use super::{Int, IntegerMatrix, Rat, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Vec<Rat>>,
}

impl RationalMatrix {
    pub fn new(data: Vec<Vec<Rat>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        debug_assert!(data.iter().all(|r| r.len() == cols));
        RationalMatrix { rows, cols, data }
    }

    pub fn from_int(m: &IntegerMatrix) -> Self {
        let data = (0..m.rows)
            .map(|i| {
                (0..m.cols)
                    .map(|j| Rat::from_integer(m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        RationalMatrix::new(data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![vec![Rat::zero(); n]; n];
        for (i, row) in data.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        RationalMatrix::new(data)
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i][j]
    }

    /// Row-reduces in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].clone();
            for x in self.data[r].iter_mut() {
                *x = &*x / &inv;
            }
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for j in 0..self.cols {
                        let s = &self.data[r][j] * &f;
                        self.data[i][j] -= s;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Solves self * x = b; None when inconsistent. For underdetermined
    /// systems the free coordinates are set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RationalMatrix::new(
            (0..self.rows)
                .map(|i| {
                    let mut row = self.data[i].clone();
                    row.push(b[i].clone());
                    row
                })
                .collect(),
        );
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[r][self.cols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = RationalMatrix::new(
            (0..n)
                .map(|i| {
                    let mut row = self.data[i].clone();
                    for j in 0..n {
                        row.push(if i == j { Rat::one() } else { Rat::zero() });
                    }
                    row
                })
                .collect(),
        );
        let pivots = aug.rref();
        if pivots.len() != n {
            return None;
        }
        Some(RationalMatrix::new(
            (0..n)
                .map(|i| aug.data[i][n..].to_vec())
                .collect(),
        ))
    }

    /// Basis of the rational kernel {x : self x = 0}.
    pub fn kernel(&self) -> Vec<RationalVector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m.data[r][free].clone();
            }
            basis.push(RationalVector(v));
        }
        basis
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        RationalMatrix::new(
            (0..self.rows)
                .map(|i| {
                    (0..other.cols)
                        .map(|j| {
                            (0..self.cols)
                                .map(|k| &self.data[i][k] * &other.data[k][j])
                                .sum()
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self.data[i][j] * &v[j]).sum())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.data
            .iter()
            .all(|row| row.iter().all(|x| x.denom() == &Int::one()))
    }

    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        if !self.is_integral() {
            return None;
        }
        let entries = self
            .data
            .iter()
            .flat_map(|row| row.iter().map(|x| x.numer().clone()))
            .collect();
        IntegerMatrix::new(self.rows, self.cols, entries).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_int(&IntegerMatrix::from_i64(rows))
    }

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_integer(Int::from(x))).collect()
    }

    #[test]
    fn solve_square() {
        let m = rm(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&rv(&[3, 2])).unwrap();
        assert_eq!(x, rv(&[1, 1]));
    }

    #[test]
    fn solve_inconsistent() {
        let m = rm(&[&[1, 0], &[1, 0]]);
        assert!(m.solve(&rv(&[1, 2])).is_none());
    }

    #[test]
    fn rank_and_kernel() {
        let m = rm(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let img = m.apply(&v.0);
            assert!(img.iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = rm(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RationalMatrix::identity(2));
    }
}
