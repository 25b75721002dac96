//! Smith normal form over the integers with both unimodular transforms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, IntegerMatrix};
use crate::error::{Error, Result};

/// U * A * V = diag(diagonal), with U, V unimodular and d_1 | d_2 | ...
/// Diagonal entries are non-negative.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<Int>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    /// Order of Z^rows / column span when the span has full rank: the
    /// product of the nonzero invariant factors.
    pub fn quotient_order(&self) -> Int {
        self.diagonal.iter().filter(|d| !d.is_zero()).product()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<Int>> = (0..rows)
        .map(|i| (0..cols).map(|j| m[(i, j)].clone()).collect())
        .collect();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    let nmin = rows.min(cols);
    for t in 0..nmin {
        if !move_pivot(&mut a, &mut u, &mut v, t) {
            break; // remaining block is zero
        }
        diagonalize_at(&mut a, &mut u, &mut v, t);
        if a[t][t].is_negative() {
            negate_row(&mut a, &mut u, t);
        }
    }

    // Fix the divisibility chain d_t | d_{t+1}.
    let mut t = 0;
    while t + 1 < nmin {
        let (dt, dn) = (a[t][t].clone(), a[t + 1][t + 1].clone());
        if dt.is_zero() || dn.is_zero() || (&dn % &dt).is_zero() {
            t += 1;
            continue;
        }
        add_col(&mut a, &mut v, t + 1, t, &Int::one());
        diagonalize_at(&mut a, &mut u, &mut v, t);
        for s in [t, t + 1] {
            if a[s][s].is_negative() {
                negate_row(&mut a, &mut u, s);
            }
        }
        // The new entry at t may break divisibility one step back.
        t = t.saturating_sub(1);
    }

    let diagonal: Vec<Int> = (0..nmin).map(|i| a[i][i].abs()).collect();
    let form = SmithForm {
        diagonal,
        left: u,
        right: v,
    };
    if !verify(m, &form) {
        return Err(Error::Internal(
            "smith normal form verification failed".into(),
        ));
    }
    Ok(form)
}

/// Clears row t and column t beyond the pivot. The pivot stays nonzero.
fn diagonalize_at(a: &mut [Vec<Int>], u: &mut IntegerMatrix, v: &mut IntegerMatrix, t: usize) {
    let rows = a.len();
    let cols = a[0].len();
    loop {
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                combine_cols(a, v, t, j, t);
            }
        }
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                combine_rows(a, u, t, i, t);
            }
        }
        let row_clear = (t + 1..cols).all(|j| a[t][j].is_zero());
        let col_clear = (t + 1..rows).all(|i| a[i][t].is_zero());
        if row_clear && col_clear {
            return;
        }
    }
}

fn verify(m: &IntegerMatrix, f: &SmithForm) -> bool {
    if !f.left.is_unimodular() || !f.right.is_unimodular() {
        return false;
    }
    for w in f.diagonal.windows(2) {
        if !w[0].is_zero() && !(&w[1] % &w[0]).is_zero() {
            return false;
        }
        if w[0].is_zero() && !w[1].is_zero() {
            return false;
        }
    }
    let prod = f.left.mul(m).mul(&f.right);
    for i in 0..prod.rows {
        for j in 0..prod.cols {
            let expect = if i == j && i < f.diagonal.len() {
                f.diagonal[i].clone()
            } else {
                Int::zero()
            };
            if prod[(i, j)] != expect {
                return false;
            }
        }
    }
    true
}

fn move_pivot(a: &mut Vec<Vec<Int>>, u: &mut IntegerMatrix, v: &mut IntegerMatrix, t: usize) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    for i in t..rows {
        for j in t..cols {
            if !a[i][j].is_zero() {
                if i != t {
                    a.swap(i, t);
                    swap_rows(u, i, t);
                }
                if j != t {
                    for row in a.iter_mut() {
                        row.swap(j, t);
                    }
                    swap_cols(v, j, t);
                }
                return true;
            }
        }
    }
    false
}

/// Column operation making a[row][q] zero. When a[row][p] divides a[row][q]
/// this is a shear that leaves column p untouched; otherwise a gcd combine
/// that strictly shrinks |a[row][p]|.
fn combine_cols(a: &mut [Vec<Int>], v: &mut IntegerMatrix, p: usize, q: usize, row: usize) {
    let (x0, x1) = (a[row][p].clone(), a[row][q].clone());
    if !x0.is_zero() && (&x1 % &x0).is_zero() {
        let k = &x1 / &x0;
        for r in a.iter_mut() {
            let s = &r[p] * &k;
            r[q] -= s;
        }
        for i in 0..v.rows {
            let s = &v[(i, p)] * &k;
            v[(i, q)] -= s;
        }
        return;
    }
    let eg = x0.extended_gcd(&x1);
    let (g, s, t) = (eg.gcd, eg.x, eg.y);
    let (ca, cb) = (&x0 / &g, &x1 / &g);
    for r in a.iter_mut() {
        let np = &r[p] * &s + &r[q] * &t;
        let nq = &r[q] * &ca - &r[p] * &cb;
        r[p] = np;
        r[q] = nq;
    }
    for i in 0..v.rows {
        let np = &v[(i, p)] * &s + &v[(i, q)] * &t;
        let nq = &v[(i, q)] * &ca - &v[(i, p)] * &cb;
        v[(i, p)] = np;
        v[(i, q)] = nq;
    }
}

fn combine_rows(a: &mut [Vec<Int>], u: &mut IntegerMatrix, p: usize, q: usize, col: usize) {
    let (x0, x1) = (a[p][col].clone(), a[q][col].clone());
    if !x0.is_zero() && (&x1 % &x0).is_zero() {
        let k = &x1 / &x0;
        let cols = a[0].len();
        for j in 0..cols {
            let s = &a[p][j] * &k;
            a[q][j] -= s;
        }
        for j in 0..u.cols {
            let s = &u[(p, j)] * &k;
            u[(q, j)] -= s;
        }
        return;
    }
    let eg = x0.extended_gcd(&x1);
    let (g, s, t) = (eg.gcd, eg.x, eg.y);
    let (ca, cb) = (&x0 / &g, &x1 / &g);
    let cols = a[0].len();
    for j in 0..cols {
        let np = &a[p][j] * &s + &a[q][j] * &t;
        let nq = &a[q][j] * &ca - &a[p][j] * &cb;
        a[p][j] = np;
        a[q][j] = nq;
    }
    for j in 0..u.cols {
        let np = &u[(p, j)] * &s + &u[(q, j)] * &t;
        let nq = &u[(q, j)] * &ca - &u[(p, j)] * &cb;
        u[(p, j)] = np;
        u[(q, j)] = nq;
    }
}

fn add_col(a: &mut [Vec<Int>], v: &mut IntegerMatrix, from: usize, to: usize, k: &Int) {
    for r in a.iter_mut() {
        let s = &r[from] * k;
        r[to] += s;
    }
    for i in 0..v.rows {
        let s = &v[(i, from)] * k;
        v[(i, to)] += s;
    }
}

fn negate_row(a: &mut [Vec<Int>], u: &mut IntegerMatrix, t: usize) {
    for x in a[t].iter_mut() {
        *x = -&*x;
    }
    for j in 0..u.cols {
        u[(t, j)] = -&u[(t, j)];
    }
}

fn swap_rows(m: &mut IntegerMatrix, i: usize, j: usize) {
    for c in 0..m.cols {
        let a = m[(i, c)].clone();
        let b = m[(j, c)].clone();
        m[(i, c)] = b;
        m[(j, c)] = a;
    }
}

fn swap_cols(m: &mut IntegerMatrix, i: usize, j: usize) {
    for r in 0..m.rows {
        let a = m[(r, i)].clone();
        let b = m[(r, j)].clone();
        m[(r, i)] = b;
        m[(r, j)] = a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn snf_hand_reduction() {
        let m = IntegerMatrix::from_i64(&[&[2, 4], &[0, 6]]);
        let f = smith_normal_form(&m).unwrap();
        assert_eq!(f.diagonal, vec![int(2), int(6)]);
    }

    #[test]
    fn snf_identity() {
        let m = IntegerMatrix::identity(2);
        let f = smith_normal_form(&m).unwrap();
        assert_eq!(f.diagonal, vec![int(1), int(1)]);
    }

    #[test]
    fn snf_with_zero_factor() {
        let m = IntegerMatrix::from_i64(&[&[2, 0], &[0, 0]]);
        let f = smith_normal_form(&m).unwrap();
        assert_eq!(f.diagonal, vec![int(2), int(0)]);
    }

    #[test]
    fn snf_divisibility_needs_work() {
        // diag(2,3) must become diag(1,6)
        let m = IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let f = smith_normal_form(&m).unwrap();
        assert_eq!(f.diagonal, vec![int(1), int(6)]);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntegerMatrix::from_i64(&[&[2, 4, 4]]);
        let f = smith_normal_form(&m).unwrap();
        assert_eq!(f.diagonal, vec![int(2)]);
    }

    #[test]
    fn snf_quotient_order_matches_det() {
        let m = IntegerMatrix::from_i64(&[&[3, 1], &[1, 3]]);
        let f = smith_normal_form(&m).unwrap();
        assert_eq!(f.quotient_order(), int(8));
        assert_eq!(m.determinant().unwrap().abs(), int(8));
    }
}
