//! Rational polyhedra given by integer constraints, with exact emptiness
//! testing, vertex enumeration and bounded lattice-point enumeration.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::RationalCone;
use crate::error::{Error, Result};
use crate::linalg::{Int, IntegerMatrix, LatticeVector, Rat, RationalMatrix, RationalVector};

/// {x : <h, x> >= c for all (h, c) in ineqs, <h, x> = c for all (h, c) in eqs}.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    rank: usize,
    ineqs: Vec<(LatticeVector, Int)>,
    eqs: Vec<(LatticeVector, Int)>,
}

impl Polyhedron {
    pub fn new(rank: usize) -> Self {
        Polyhedron {
            rank,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn with_ineq(mut self, normal: LatticeVector, bound: Int) -> Self {
        debug_assert_eq!(normal.rank(), self.rank);
        self.ineqs.push((normal, bound));
        self
    }

    pub fn with_eq(mut self, normal: LatticeVector, value: Int) -> Self {
        debug_assert_eq!(normal.rank(), self.rank);
        self.eqs.push((normal, value));
        self
    }

    /// Adds |x_i| <= bound for every coordinate.
    pub fn with_box(mut self, bound: &Int) -> Self {
        for i in 0..self.rank {
            let e = LatticeVector::unit(self.rank, i);
            self.ineqs.push((e.clone(), -bound.clone()));
            self.ineqs.push((-&e, -bound.clone()));
        }
        self
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.ineqs.iter().all(|(h, c)| h.dot(x) >= *c)
            && self.eqs.iter().all(|(h, c)| h.dot(x) == *c)
    }

    pub fn contains_rational(&self, x: &[Rat]) -> bool {
        let eval = |h: &LatticeVector| -> Rat {
            h.0.iter()
                .zip(x.iter())
                .map(|(a, b)| Rat::from_integer(a.clone()) * b)
                .sum()
        };
        self.ineqs
            .iter()
            .all(|(h, c)| eval(h) >= Rat::from_integer(c.clone()))
            && self
                .eqs
                .iter()
                .all(|(h, c)| eval(h) == Rat::from_integer(c.clone()))
    }

    /// Homogenized constraint cone {x : <h, x> >= 0, <e, x> = 0}.
    pub fn recession_cone(&self) -> Result<RationalCone> {
        let mut normals: Vec<LatticeVector> =
            self.ineqs.iter().map(|(h, _)| h.clone()).collect();
        for (h, _) in &self.eqs {
            normals.push(h.clone());
            normals.push(-h);
        }
        RationalCone::from_inequalities(self.rank, &normals)
    }

    /// Exact emptiness test by Fourier-Motzkin elimination.
    pub fn is_empty(&self) -> bool {
        // Rows encode sum(coeffs * x) + cst >= 0 over the integers.
        let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
        for (h, c) in &self.ineqs {
            rows.push((h.0.clone(), -c.clone()));
        }
        for (h, c) in &self.eqs {
            rows.push((h.0.clone(), -c.clone()));
            rows.push((h.0.iter().map(|a| -a).collect(), c.clone()));
        }
        for var in 0..self.rank {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut rest = Vec::new();
            for row in rows.drain(..) {
                match row.0[var].sign() {
                    num_bigint::Sign::Plus => pos.push(row),
                    num_bigint::Sign::Minus => neg.push(row),
                    num_bigint::Sign::NoSign => rest.push(row),
                }
            }
            for p in &pos {
                for q in &neg {
                    let (a, b) = (p.0[var].clone(), -q.0[var].clone());
                    let coeffs: Vec<Int> = p.0
                        .iter()
                        .zip(q.0.iter())
                        .map(|(x, y)| x * &b + y * &a)
                        .collect();
                    let cst = &p.1 * &b + &q.1 * &a;
                    rest.push(normalize_row(coeffs, cst));
                }
            }
            rest.sort();
            rest.dedup();
            rows = rest;
        }
        rows.iter().any(|(_, cst)| cst.is_negative())
    }

    /// All vertices (basic feasible solutions). A bounded nonempty
    /// polyhedron always has at least one.
    pub fn vertices(&self) -> Vec<RationalVector> {
        let n = self.rank;
        if n == 0 {
            return Vec::new();
        }
        let eq_normals: Vec<LatticeVector> = self.eqs.iter().map(|(h, _)| h.clone()).collect();
        let r_eq = if eq_normals.is_empty() {
            0
        } else {
            RationalMatrix::from_int(&IntegerMatrix::from_rows(&eq_normals)).rank()
        };
        if r_eq > n {
            return Vec::new();
        }
        let extra = n - r_eq;
        let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for combo in combinations(self.ineqs.len(), extra) {
            let mut normals = eq_normals.clone();
            let mut consts: Vec<Rat> = self
                .eqs
                .iter()
                .map(|(_, c)| Rat::from_integer(c.clone()))
                .collect();
            for &i in &combo {
                normals.push(self.ineqs[i].0.clone());
                consts.push(Rat::from_integer(self.ineqs[i].1.clone()));
            }
            let a = RationalMatrix::from_int(&IntegerMatrix::from_rows(&normals));
            if a.rank() != n {
                continue;
            }
            let Some(x) = a.solve(&consts) else { continue };
            if self.contains_rational(&x) {
                found.insert(x);
            }
        }
        found.into_iter().map(RationalVector).collect()
    }
}

fn normalize_row(coeffs: Vec<Int>, cst: Int) -> (Vec<Int>, Int) {
    let mut g = cst.abs();
    for c in &coeffs {
        g = num_integer::Integer::gcd(&g, &c.abs());
    }
    if g.is_zero() || g.is_one() {
        return (coeffs, cst);
    }
    (coeffs.iter().map(|c| c / &g).collect(), cst / g)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len();
        for i in start..=n.saturating_sub(remaining) {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut cur, &mut out);
    }
    out
}

/// A bounded polyhedron with its vertices cached. Construction verifies
/// boundedness (recession cone = {0}) unless the region is empty.
#[derive(Clone, Debug)]
pub struct Polytope {
    region: Polyhedron,
    vertices: Vec<RationalVector>,
}

impl Polytope {
    pub fn new(region: Polyhedron) -> Result<Self> {
        if region.is_empty() {
            return Ok(Polytope {
                region,
                vertices: Vec::new(),
            });
        }
        let rec = region.recession_cone()?;
        if !rec.is_zero() {
            let dir = rec
                .rays()
                .first()
                .or_else(|| rec.lineality().first())
                .cloned()
                .expect("nonzero cone has a generator");
            return Err(Error::Unbounded(dir));
        }
        let vertices = region.vertices();
        if vertices.is_empty() {
            return Err(Error::Internal(
                "nonempty bounded polyhedron without vertices".into(),
            ));
        }
        Ok(Polytope { region, vertices })
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Exactly the lattice points of the polytope, lex-sorted: integer
    /// bounding box from the vertices, then exact constraint filtering.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let n = self.region.rank();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for i in 0..n {
            let mut min = self.vertices[0].0[i].clone();
            let mut max = min.clone();
            for v in &self.vertices[1..] {
                if v.0[i] < min {
                    min = v.0[i].clone();
                }
                if v.0[i] > max {
                    max = v.0[i].clone();
                }
            }
            lo.push(min.ceil().to_integer());
            hi.push(max.floor().to_integer());
        }
        let mut out = Vec::new();
        let mut cur: Vec<Int> = lo.clone();
        if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
            return Vec::new();
        }
        loop {
            let point = LatticeVector(cur.clone());
            if self.region.contains(&point) {
                out.push(point);
            }
            // Odometer increment over the box.
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for j in i + 1..n {
                        cur[j] = lo[j].clone();
                    }
                    break;
                }
            }
        }
    }
}

/// Lattice points of a bounded region; unbounded input is rejected with a
/// recession direction as certificate.
pub fn lattice_points(region: &Polyhedron) -> Result<Vec<LatticeVector>> {
    Ok(Polytope::new(region.clone())?.lattice_points())
}
