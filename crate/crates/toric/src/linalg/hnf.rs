//! Column-style Hermite normal form and the lattice routines built on it.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Int, IntegerMatrix, LatticeVector};
use crate::error::Result;

/// Column-style HNF of an integer matrix.
///
/// `basis` holds the nonzero columns of the normal form; they generate the
/// same lattice as the input columns. The form is canonical: pivot rows
/// strictly increase, pivots are positive, and in each pivot row the entries
/// of earlier columns are reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub basis: IntegerMatrix,
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        self.basis.columns()
    }

    /// Exact membership test for the lattice spanned by `basis`.
    pub fn contains(&self, v: &LatticeVector) -> bool {
        let mut rem = v.clone();
        for (j, &p) in self.pivots.iter().enumerate() {
            // Coordinates above the pivot row must already be zero.
            let pivot = &self.basis[(p, j)];
            let (q, r) = rem.0[p].div_rem(pivot);
            if !r.is_zero() {
                return false;
            }
            for i in 0..rem.rank() {
                let s = &self.basis[(i, j)] * &q;
                rem.0[i] -= s;
            }
        }
        rem.is_zero()
    }
}

/// Computes the canonical column HNF of the lattice generated by the columns
/// of `m`. Zero columns are dropped from the basis.
pub fn hermite_normal_form(m: &IntegerMatrix) -> HermiteForm {
    let rows = m.rows;
    let mut cols: Vec<Vec<Int>> = m.columns().into_iter().map(|c| c.0).collect();
    let mut pivots = Vec::new();
    let mut fixed = 0usize; // number of finished pivot columns

    for row in 0..rows {
        // Use extended gcd column operations to leave a single nonzero
        // entry in this row among the unfixed columns.
        let mut pivot_col: Option<usize> = None;
        for j in fixed..cols.len() {
            if cols[j][row].is_zero() {
                continue;
            }
            match pivot_col {
                None => pivot_col = Some(j),
                Some(p) => {
                    let (a, b) = (cols[p][row].clone(), cols[j][row].clone());
                    let eg = a.extended_gcd(&b);
                    let (g, x, y) = (eg.gcd, eg.x, eg.y);
                    let (ca, cb) = (&a / &g, &b / &g);
                    for i in 0..rows {
                        let new_p = &cols[p][i] * &x + &cols[j][i] * &y;
                        let new_j = &cols[j][i] * &ca - &cols[p][i] * &cb;
                        cols[p][i] = new_p;
                        cols[j][i] = new_j;
                    }
                }
            }
        }
        let Some(p) = pivot_col else { continue };
        cols.swap(fixed, p);
        if cols[fixed][row].is_negative() {
            for c in cols[fixed].iter_mut() {
                *c = -&*c;
            }
        }
        // Reduce this row of the earlier pivot columns into [0, pivot).
        let pivot = cols[fixed][row].clone();
        for j in 0..fixed {
            let q = cols[j][row].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for i in 0..rows {
                let s = &cols[fixed][i] * &q;
                cols[j][i] -= s;
            }
        }
        pivots.push(row);
        fixed += 1;
    }

    cols.truncate(fixed);
    let basis = IntegerMatrix::from_columns(
        &cols.into_iter().map(LatticeVector).collect::<Vec<_>>(),
    );
    HermiteForm {
        basis: if fixed == 0 {
            IntegerMatrix::zero(rows, 0)
        } else {
            basis
        },
        pivots,
    }
}

/// Basis of the integer kernel {x : m x = 0}, i.e. of the saturated lattice
/// of integer solutions. Uses the right transform of the Smith normal form.
pub fn integer_kernel(m: &IntegerMatrix) -> Result<Vec<LatticeVector>> {
    let n = m.cols;
    if m.rows == 0 {
        return Ok(hermite_normal_form(&IntegerMatrix::identity(n)).basis_vectors());
    }
    let snf = super::smith_normal_form(m)?;
    let rank = snf.diagonal.iter().filter(|d| !d.is_zero()).count();
    let kernel_cols: Vec<LatticeVector> = (rank..n).map(|j| snf.right.column(j)).collect();
    if kernel_cols.is_empty() {
        return Ok(Vec::new());
    }
    Ok(hermite_normal_form(&IntegerMatrix::from_columns(&kernel_cols)).basis_vectors())
}

/// HNF basis of the saturation of the lattice spanned by `vectors`: the
/// largest sublattice of Z^n with the same rational span. Computed as the
/// double annihilator.
pub fn saturate(rank: usize, vectors: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let ann = integer_kernel(&IntegerMatrix::from_rows(vectors))?;
    if ann.is_empty() {
        return Ok(hermite_normal_form(&IntegerMatrix::identity(rank)).basis_vectors());
    }
    integer_kernel(&IntegerMatrix::from_rows(&ann))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    #[test]
    fn hnf_hand_reduction() {
        // Columns (2,0),(1,1) generate the same lattice as (1,1),(0,2).
        let m = IntegerMatrix::from_columns(&[lv(&[2, 0]), lv(&[1, 1])]);
        let h = hermite_normal_form(&m);
        assert_eq!(h.basis_vectors(), vec![lv(&[1, 1]), lv(&[0, 2])]);
        assert_eq!(h.pivots, vec![0, 1]);
        assert_eq!(h.basis.determinant().unwrap().abs(), int(2));
    }

    #[test]
    fn hnf_identity_and_zero_column() {
        let id = IntegerMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id).basis, id);

        let m = IntegerMatrix::from_columns(&[lv(&[3, 0]), lv(&[0, 0])]);
        let h = hermite_normal_form(&m);
        assert_eq!(h.basis_vectors(), vec![lv(&[3, 0])]);
    }

    #[test]
    fn hnf_membership() {
        let m = IntegerMatrix::from_columns(&[lv(&[2, 0]), lv(&[1, 1])]);
        let h = hermite_normal_form(&m);
        assert!(h.contains(&lv(&[2, 0])));
        assert!(h.contains(&lv(&[3, 1])));
        assert!(!h.contains(&lv(&[1, 0])));
    }

    #[test]
    fn kernel_of_single_equation() {
        let m = IntegerMatrix::from_rows(&[lv(&[2, -1])]);
        let k = integer_kernel(&m).unwrap();
        assert_eq!(k, vec![lv(&[1, 2])]);
    }

    #[test]
    fn kernel_is_saturated() {
        let m = IntegerMatrix::from_rows(&[lv(&[2, 4])]);
        let k = integer_kernel(&m).unwrap();
        // (2,-1), not (4,-2)
        assert_eq!(k, vec![lv(&[2, -1])]);
    }

    #[test]
    fn saturation_of_non_primitive_span() {
        let s = saturate(2, &[lv(&[2, 4])]).unwrap();
        assert_eq!(s, vec![lv(&[1, 2])]);
    }
}
