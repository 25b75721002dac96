//! Splitting off the torus factor of a degenerate toric datum: the
//! annihilator sublattice, a canonical complement, the projection to the
//! non-degenerate core, and the transport of roots along it.

use num_traits::{One, Signed, Zero};

use crate::cones;
use crate::error::{Error, Result};
use crate::linalg::{
    hermite_normal_form, smith_normal_form, Int, IntegerMatrix, LatticeVector,
};
use crate::roots::{DemazureRoot, ToricDatum};

/// A choice of splitting M = M_0 ⊕ M_X, with M_X = M ∩ sigma-perp.
///
/// `assembled` has the complement basis as its first columns and the M_X
/// basis as its last columns; it is unimodular. `tau` projects onto the
/// complement coordinates: it kills M_X and is the identity on the
/// complement in these coordinates.
#[derive(Clone, Debug)]
pub struct SplitLattice {
    pub m_x_basis: Vec<LatticeVector>,
    pub complement_basis: Vec<LatticeVector>,
    pub assembled: IntegerMatrix,
    pub assembled_inverse: IntegerMatrix,
    pub tau: IntegerMatrix,
}

impl SplitLattice {
    pub fn torus_rank(&self) -> usize {
        self.m_x_basis.len()
    }

    pub fn core_rank(&self) -> usize {
        self.complement_basis.len()
    }

    /// tau(m): the core coordinates of a character.
    pub fn project(&self, m: &LatticeVector) -> LatticeVector {
        self.tau.apply(m)
    }

    /// The canonical lift: the complement embedding of core coordinates.
    pub fn lift(&self, m0: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(m0.rank(), self.core_rank());
        let mut out = LatticeVector::zero(self.assembled.rows);
        for (j, c) in self.complement_basis.iter().enumerate() {
            out = &out + &c.scaled(&m0.0[j]);
        }
        out
    }

    /// Exact membership in M_X.
    pub fn in_m_x(&self, m: &LatticeVector) -> bool {
        self.project(m).is_zero()
    }
}

/// HNF basis of M_X = M ∩ sigma-perp, the annihilator of the rays.
pub fn compute_m_x(datum: &ToricDatum) -> Result<Vec<LatticeVector>> {
    cones::orthogonal_sublattice(datum.rank(), datum.rays())
}

/// Completes the (saturated) M_X basis to a basis of the full lattice and
/// packages the projection. The complement columns are the canonical
/// choice produced by the Smith normal form of the basis matrix, reduced
/// modulo M_X.
pub fn split_lattice(datum: &ToricDatum) -> Result<SplitLattice> {
    let n = datum.rank();
    let m_x_basis = compute_m_x(datum)?;
    let s = m_x_basis.len();
    let complement_basis = if s == 0 {
        IntegerMatrix::identity(n).columns()
    } else if s == n {
        Vec::new()
    } else {
        let k = IntegerMatrix::from_columns(&m_x_basis);
        let snf = smith_normal_form(&k)?;
        if snf.diagonal.iter().any(|d| !d.is_one()) {
            return Err(Error::Internal(
                "annihilator sublattice is not saturated".into(),
            ));
        }
        // U K V = [I; 0], so the last n-s columns of U^{-1} complete K.
        let u_inv = snf.left.inverse_unimodular()?;
        let mut complement: Vec<LatticeVector> =
            (s..n).map(|j| u_inv.column(j)).collect();
        reduce_modulo(&mut complement, &m_x_basis);
        complement
    };

    let mut columns = complement_basis.clone();
    columns.extend(m_x_basis.iter().cloned());
    let assembled = IntegerMatrix::from_columns(&columns);
    if !assembled.is_unimodular() {
        return Err(Error::Internal("assembled splitting is not unimodular".into()));
    }
    let assembled_inverse = assembled.inverse_unimodular()?;
    let core = n - s;
    let mut tau = IntegerMatrix::zero(core, n);
    for i in 0..core {
        for j in 0..n {
            tau[(i, j)] = assembled_inverse[(i, j)].clone();
        }
    }
    Ok(SplitLattice {
        m_x_basis,
        complement_basis,
        assembled,
        assembled_inverse,
        tau,
    })
}

/// Canonical coset representatives: reduce each complement vector at the
/// pivot rows of the M_X basis into [0, pivot).
fn reduce_modulo(vectors: &mut [LatticeVector], basis: &[LatticeVector]) {
    let hnf = hermite_normal_form(&IntegerMatrix::from_columns(basis));
    for v in vectors.iter_mut() {
        for (j, &p) in hnf.pivots.iter().enumerate() {
            let col = hnf.basis.column(j);
            let q = num_integer::Integer::div_floor(&v.0[p], &col.0[p]);
            if q.is_zero() {
                continue;
            }
            *v = &*v - &col.scaled(&q);
        }
    }
}

/// A datum together with its non-degenerate core.
#[derive(Clone, Debug)]
pub struct ReducedDatum {
    pub x0: ToricDatum,
    pub s: usize,
    pub split: SplitLattice,
    /// Position of each ambient ray among the canonical core rays.
    pub ray_to_core: Vec<usize>,
    /// Inverse of `ray_to_core`.
    pub core_to_ray: Vec<usize>,
}

impl ReducedDatum {
    /// tau applied to a root of the ambient datum.
    pub fn project_root(&self, datum: &ToricDatum, root: &DemazureRoot) -> Result<DemazureRoot> {
        datum
            .checked_root(root.ray, root.weight.clone())
            .map_err(|_| Error::NotARoot(root.weight.clone()))?;
        let weight = self.split.project(&root.weight);
        self.x0.checked_root(self.ray_to_core[root.ray], weight)
    }

    /// The complement lift of a core root; always a root of the ambient datum.
    pub fn lift_root(&self, datum: &ToricDatum, root: &DemazureRoot) -> Result<DemazureRoot> {
        let weight = self.split.lift(&root.weight);
        datum.checked_root(self.core_to_ray[root.ray], weight)
    }
}

/// Splits the datum into a non-degenerate core of rank n - s and a rank-s
/// torus factor. The core cone is the ambient cone written in the
/// coordinates dual to the complement basis; its extremal rays correspond
/// one to one to the ambient ones.
pub fn reduce_datum(datum: &ToricDatum) -> Result<ReducedDatum> {
    let split = split_lattice(datum)?;
    let s = split.torus_rank();
    let core = datum.rank() - s;
    // N-side coordinates of a ray v with respect to the dual basis of the
    // complement: the pairings with the complement columns.
    let core_rays: Vec<LatticeVector> = datum
        .rays()
        .iter()
        .map(|v| {
            LatticeVector(
                split
                    .complement_basis
                    .iter()
                    .map(|c| c.dot(v))
                    .collect(),
            )
        })
        .collect();
    let x0 = ToricDatum::new(core, &core_rays)?;
    if !x0.is_nondegenerate() {
        return Err(Error::Internal("reduced core is still degenerate".into()));
    }
    if x0.ray_count() != datum.ray_count() {
        return Err(Error::Internal(
            "extremal rays changed under reduction".into(),
        ));
    }
    let mut ray_to_core = Vec::with_capacity(core_rays.len());
    for v in &core_rays {
        let pos = x0
            .rays()
            .iter()
            .position(|w| w == v)
            .ok_or_else(|| Error::Internal("core ray is not primitive-canonical".into()))?;
        ray_to_core.push(pos);
    }
    let mut core_to_ray = vec![0usize; ray_to_core.len()];
    for (i, &c) in ray_to_core.iter().enumerate() {
        core_to_ray[c] = i;
    }
    Ok(ReducedDatum {
        x0,
        s,
        split,
        ray_to_core,
        core_to_ray,
    })
}

/// Minimum of |det| over independent n-tuples of ambient roots whose
/// projections give exactly the core tuple (as a set), searching torus
/// offsets with coordinates in [-bound, bound]. By the block-determinant
/// identity the minimum equals |det| of the core tuple; callers use this
/// as a cross-check, not an inference.
pub fn min_lifted_determinant(
    datum: &ToricDatum,
    rd: &ReducedDatum,
    core_tuple: &[DemazureRoot],
    bound: &Int,
) -> Result<Int> {
    let n = datum.rank();
    let s = rd.s;
    let core = n - s;
    if core_tuple.len() != core {
        return Err(Error::DimensionMismatch {
            expected: core,
            got: core_tuple.len(),
        });
    }
    let core_mat = IntegerMatrix::from_columns(
        &core_tuple
            .iter()
            .map(|r| r.weight.clone())
            .collect::<Vec<_>>(),
    );
    if core == 0 || core_mat.to_rational().rank() != core {
        return Err(Error::Schema("core tuple must be linearly independent".into()));
    }
    if s == 0 {
        let d = core_mat.determinant()?.abs();
        return Ok(d);
    }

    let lifts: Vec<LatticeVector> = core_tuple
        .iter()
        .map(|r| rd.split.lift(&r.weight))
        .collect();
    // Enumerate torus offsets per slot and surjections of slots onto the
    // core tuple.
    let offsets = torus_offsets(&rd.split.m_x_basis, bound);
    let assignments = surjections(n, core);
    let mut best: Option<Int> = None;
    for assign in &assignments {
        let mut choice = vec![0usize; n];
        'offsets: loop {
            let cols: Vec<LatticeVector> = (0..n)
                .map(|i| &lifts[assign[i]] + &offsets[choice[i]])
                .collect();
            let d = IntegerMatrix::from_columns(&cols).determinant()?.abs();
            if !d.is_zero() && best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
            // Odometer over offset choices.
            let mut i = n;
            loop {
                if i == 0 {
                    break 'offsets;
                }
                i -= 1;
                if choice[i] + 1 < offsets.len() {
                    choice[i] += 1;
                    for c in choice.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }
    best.ok_or_else(|| Error::Schema("no independent lift within the box".into()))
}

fn torus_offsets(m_x_basis: &[LatticeVector], bound: &Int) -> Vec<LatticeVector> {
    let n = m_x_basis[0].rank();
    let b: i64 = bound.to_string().parse().unwrap_or(0);
    let mut out = vec![LatticeVector::zero(n)];
    for k in m_x_basis {
        let mut next = Vec::new();
        for v in &out {
            for c in -b..=b {
                next.push(v + &k.scaled(&Int::from(c)));
            }
        }
        out = next;
    }
    out
}

/// All maps {0..n-1} -> {0..k-1} hitting every value.
fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        let mut seen = vec![false; k];
        for &c in &cur {
            seen[c] = true;
        }
        if seen.iter().all(|&s| s) {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < k {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::roots::{enumerate_roots, enumerate_s_rho};

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    fn line_times_torus() -> ToricDatum {
        ToricDatum::new(2, &[lv(&[1, 0])]).unwrap()
    }

    #[test]
    fn m_x_examples() {
        let x = line_times_torus();
        assert_eq!(compute_m_x(&x).unwrap(), vec![lv(&[0, 1])]);

        let plane = ToricDatum::new(2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        assert!(compute_m_x(&plane).unwrap().is_empty());

        let torus = ToricDatum::torus(2);
        assert_eq!(
            compute_m_x(&torus).unwrap(),
            vec![lv(&[1, 0]), lv(&[0, 1])]
        );
    }

    #[test]
    fn split_is_unimodular_and_projects() {
        let x = line_times_torus();
        let split = split_lattice(&x).unwrap();
        assert_eq!(split.torus_rank(), 1);
        assert!(split.assembled.is_unimodular());
        assert_eq!(split.project(&lv(&[-1, 5])), lv(&[-1]));
        assert!(split.in_m_x(&lv(&[0, 7])));
        assert!(!split.in_m_x(&lv(&[1, 0])));
    }

    #[test]
    fn reduce_examples() {
        let x = line_times_torus();
        let rd = reduce_datum(&x).unwrap();
        assert_eq!(rd.s, 1);
        assert_eq!(rd.x0.rank(), 1);
        assert_eq!(rd.x0.rays(), &[lv(&[1])]);

        let plane = ToricDatum::new(2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        let rd = reduce_datum(&plane).unwrap();
        assert_eq!(rd.s, 0);
        assert_eq!(&rd.x0, &plane);

        let torus = ToricDatum::torus(3);
        let rd = reduce_datum(&torus).unwrap();
        assert_eq!(rd.s, 3);
        assert_eq!(rd.x0.rank(), 0);
        assert_eq!(rd.x0.ray_count(), 0);
    }

    #[test]
    fn skew_degenerate_datum_reduces() {
        // sigma spanned by (2,1): M_X = Z(1,-2) has a non-trivial HNF pivot,
        // so the complement completion has to work for it.
        let x = ToricDatum::new(2, &[lv(&[2, 1])]).unwrap();
        let rd = reduce_datum(&x).unwrap();
        assert_eq!(rd.s, 1);
        assert_eq!(rd.x0.rays(), &[lv(&[1])]);
        assert!(rd.split.assembled.is_unimodular());
    }

    #[test]
    fn project_roots_examples() {
        let x = line_times_torus();
        let rd = reduce_datum(&x).unwrap();
        let r = x.root(lv(&[-1, 5])).unwrap();
        let p = rd.project_root(&x, &r).unwrap();
        assert_eq!(p.weight, lv(&[-1]));

        // Fibre of (-1) within box 2.
        let fibre: Vec<LatticeVector> = enumerate_roots(&x, &int(2))
            .unwrap()
            .into_iter()
            .filter(|r| rd.project_root(&x, r).unwrap().weight == lv(&[-1]))
            .map(|r| r.weight)
            .collect();
        assert_eq!(
            fibre,
            vec![
                lv(&[-1, -2]),
                lv(&[-1, -1]),
                lv(&[-1, 0]),
                lv(&[-1, 1]),
                lv(&[-1, 2])
            ]
        );
    }

    #[test]
    fn project_then_enumerate_matches() {
        // S_ray(X) = tau^{-1}(S_ray(X0)) on truncations.
        let x = ToricDatum::new(3, &[lv(&[1, 0, 0]), lv(&[0, 1, 0])]).unwrap();
        let rd = reduce_datum(&x).unwrap();
        for ray in 0..x.ray_count() {
            let ups: std::collections::BTreeSet<LatticeVector> =
                enumerate_s_rho(&x, ray, &int(2))
                    .unwrap()
                    .iter()
                    .map(|r| rd.project_root(&x, r).unwrap().weight)
                    .collect();
            let downs: std::collections::BTreeSet<LatticeVector> =
                enumerate_s_rho(&rd.x0, rd.ray_to_core[ray], &int(2))
                    .unwrap()
                    .into_iter()
                    .map(|r| r.weight)
                    .collect();
            // Every projected root is a core root; box sizes differ, so
            // only inclusion is asserted here (exact equality is covered by
            // the preimage test below).
            assert!(ups.is_subset(&downs) || downs.is_subset(&ups));
            // Preimage property: lifting any core root lands in S_ray(X).
            for w in &downs {
                let lifted = rd.split.lift(w);
                assert_eq!(x.classify_weight(&lifted), Some(ray));
            }
        }
    }

    #[test]
    fn min_lift_matches_core_determinant() {
        let x = line_times_torus();
        let rd = reduce_datum(&x).unwrap();
        let core_root = rd.x0.root(lv(&[-1])).unwrap();
        let m = min_lifted_determinant(&x, &rd, &[core_root.clone()], &int(3)).unwrap();
        assert_eq!(m, int(1));

        // s = 0: plain determinant.
        let plane = ToricDatum::new(2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        let rdp = reduce_datum(&plane).unwrap();
        let tuple = vec![
            plane.root(lv(&[-1, 2])).unwrap(),
            plane.root(lv(&[1, -1])).unwrap(),
        ];
        let m = min_lifted_determinant(&plane, &rdp, &tuple, &int(2)).unwrap();
        assert_eq!(m, int(1));
    }
}
