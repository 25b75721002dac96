//! Slice coordinates on a root family: the determinant level sets, their
//! finiteness classification, points deep in every slice, and admissible
//! systems of reference tuples.

use num_traits::{One, Signed, Zero};

use super::{facet_cone, first_root, DemazureRoot, ToricDatum};
use crate::cones::{self, minimal_shift, Polyhedron, Polytope, RationalCone};
use crate::error::{Error, Result};
use crate::linalg::{Int, IntegerMatrix, LatticeVector, RationalMatrix};

/// Result of enumerating one determinant slice of S_ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceSet {
    Finite(Vec<DemazureRoot>),
    /// The slice recedes along a lattice direction: adding it preserves
    /// membership, so any nonempty slice at this level is infinite.
    Infinite { direction: LatticeVector },
    /// Span(E) is not a hyperplane.
    RankDefect { rank: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteSide {
    Plus,
    Minus,
    Both,
    Neither,
}

impl FiniteSide {
    pub fn signs(self) -> Vec<i8> {
        match self {
            FiniteSide::Plus => vec![1],
            FiniteSide::Minus => vec![-1],
            FiniteSide::Both => vec![1, -1],
            FiniteSide::Neither => vec![],
        }
    }
}

#[derive(Clone, Debug)]
pub struct SliceClassification {
    /// Condition for every individual slice to be finite:
    /// Span(E) ∩ ray-perp ∩ sigma_dual = {0}.
    pub all_finite: bool,
    pub finite_side: FiniteSide,
    /// Largest |d| carrying a nonempty slice on the finite side(s);
    /// zero when the finite side is empty or undefined.
    pub max_abs_d_on_finite_side: Int,
}

/// The linear functional x -> det(e_1, ..., e_{n-1}, x), written as the
/// vector of its cofactors.
pub fn det_functional(rank: usize, tuple: &[LatticeVector]) -> Result<LatticeVector> {
    if tuple.len() + 1 != rank {
        return Err(Error::DimensionMismatch {
            expected: rank - 1,
            got: tuple.len(),
        });
    }
    let mut cof = Vec::with_capacity(rank);
    for j in 0..rank {
        let mut cols = tuple.to_vec();
        cols.push(LatticeVector::unit(rank, j));
        cof.push(IntegerMatrix::from_columns(&cols).determinant()?);
    }
    Ok(LatticeVector(cof))
}

fn tuple_rank(tuple: &[LatticeVector]) -> usize {
    if tuple.is_empty() {
        return 0;
    }
    RationalMatrix::from_int(&IntegerMatrix::from_rows(tuple)).rank()
}

/// sigma_dual ∩ ray-perp ∩ {sign * f >= 0}; with `extra` normals appended.
fn side_cone(
    datum: &ToricDatum,
    ray: usize,
    extra: &[LatticeVector],
) -> Result<RationalCone> {
    let mut normals = datum.sigma_dual().inequalities().to_vec();
    let v = datum.v_rho(ray);
    normals.push(v.clone());
    normals.push(-v);
    normals.extend_from_slice(extra);
    RationalCone::from_inequalities(datum.rank(), &normals)
}

fn slab_polyhedron(datum: &ToricDatum, ray: usize) -> Polyhedron {
    let mut region = Polyhedron::new(datum.rank())
        .with_eq(datum.v_rho(ray).clone(), Int::from(-1));
    for (i, v) in datum.rays().iter().enumerate() {
        if i != ray {
            region = region.with_ineq(v.clone(), Int::zero());
        }
    }
    region
}

/// The slice {e in S_ray : det(E, e) = d}, enumerated exactly when finite.
pub fn h_set(
    datum: &ToricDatum,
    ray: usize,
    tuple: &[LatticeVector],
    d: &Int,
) -> Result<SliceSet> {
    let n = datum.rank();
    if tuple.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: tuple.len(),
        });
    }
    let r = tuple_rank(tuple);
    if r + 1 != n {
        return Ok(SliceSet::RankDefect { rank: r });
    }
    // Span(E) as an equality locus: a single primitive normal.
    let span_normals = cones::orthogonal_sublattice(n, tuple)?;
    let mut extra = Vec::new();
    for w in &span_normals {
        extra.push(w.clone());
        extra.push(-w);
    }
    let degeneracy = side_cone(datum, ray, &extra)?;
    if !degeneracy.is_zero() {
        let direction = degeneracy
            .rays()
            .first()
            .or_else(|| degeneracy.lineality().first())
            .cloned()
            .expect("nonzero cone has a generator");
        return Ok(SliceSet::Infinite { direction });
    }
    let f = det_functional(n, tuple)?;
    let region = slab_polyhedron(datum, ray).with_eq(f, d.clone());
    let points = Polytope::new(region)?.lattice_points();
    Ok(SliceSet::Finite(
        points
            .into_iter()
            .map(|weight| DemazureRoot { ray, weight })
            .collect(),
    ))
}

/// Decides the finiteness conditions for the slices of `tuple` exactly,
/// and fully enumerates the finite side when there is one.
pub fn classify_slices(
    datum: &ToricDatum,
    ray: usize,
    tuple: &[LatticeVector],
) -> Result<SliceClassification> {
    let n = datum.rank();
    let r = tuple_rank(tuple);
    if r + 1 != n {
        return Err(Error::Schema(format!(
            "reference tuple spans rank {r}, expected a hyperplane"
        )));
    }
    let span_normals = cones::orthogonal_sublattice(n, tuple)?;
    let mut extra = Vec::new();
    for w in &span_normals {
        extra.push(w.clone());
        extra.push(-w);
    }
    let all_finite = side_cone(datum, ray, &extra)?.is_zero();

    let f = det_functional(n, tuple)?;
    let plus_zero = side_cone(datum, ray, std::slice::from_ref(&f))?.is_zero();
    let minus_zero = side_cone(datum, ray, std::slice::from_ref(&-&f))?.is_zero();
    let finite_side = match (plus_zero, minus_zero) {
        (true, true) => FiniteSide::Both,
        (true, false) => FiniteSide::Plus,
        (false, true) => FiniteSide::Minus,
        (false, false) => FiniteSide::Neither,
    };

    let mut max_abs = Int::zero();
    for sign in finite_side.signs() {
        let dir = if sign > 0 { f.clone() } else { -&f };
        let region = slab_polyhedron(datum, ray).with_ineq(dir, Int::zero());
        let points = Polytope::new(region)?.lattice_points();
        for p in points {
            let v = p.dot(&f).abs();
            if v > max_abs {
                max_abs = v;
            }
        }
        if finite_side == FiniteSide::Both {
            break; // one pass enumerates the whole (finite) family
        }
    }

    Ok(SliceClassification {
        all_finite,
        finite_side,
        max_abs_d_on_finite_side: max_abs,
    })
}

/// An admissible system for a ray: n-1 reference tuples whose spans are
/// hyperplanes meeting sigma_dual ∩ ray-perp only at the origin and whose
/// common intersection meets ray-perp only at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSystem {
    pub ray: usize,
    pub tuples: Vec<Vec<LatticeVector>>,
    /// Primitive normal of Span(tuples[i]).
    pub normals: Vec<LatticeVector>,
}

impl AdmissibleSystem {
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Checks the three defining conditions.
pub fn verify_admissible(datum: &ToricDatum, sys: &AdmissibleSystem) -> Result<()> {
    let n = datum.rank();
    if n == 1 {
        if !sys.tuples.is_empty() {
            return Err(Error::Schema("rank-1 admissible system must be empty".into()));
        }
        return Ok(());
    }
    if sys.tuples.len() != n - 1 {
        return Err(Error::Schema(format!(
            "expected {} tuples, got {}",
            n - 1,
            sys.tuples.len()
        )));
    }
    for (i, tuple) in sys.tuples.iter().enumerate() {
        if tuple.len() != n - 1 {
            return Err(Error::Schema(format!("tuple {i} has wrong length")));
        }
        for e in tuple {
            if datum.classify_weight(e).is_none() {
                return Err(Error::Schema(format!("tuple {i} entry {e} is not a root weight")));
            }
        }
        if tuple_rank(tuple) != n - 1 {
            return Err(Error::Schema(format!("tuple {i} does not span a hyperplane")));
        }
        let mut extra = vec![sys.normals[i].clone(), -&sys.normals[i]];
        extra.push(datum.v_rho(sys.ray).clone());
        extra.push(-datum.v_rho(sys.ray));
        let mut normals = datum.sigma_dual().inequalities().to_vec();
        normals.append(&mut extra);
        let k = RationalCone::from_inequalities(n, &normals)?;
        if !k.is_zero() {
            return Err(Error::Schema(format!(
                "tuple {i} span meets sigma_dual ∩ ray-perp nontrivially"
            )));
        }
    }
    // Common intersection with ray-perp must be trivial.
    let mut stacked = sys.normals.clone();
    stacked.push(datum.v_rho(sys.ray).clone());
    if RationalMatrix::from_int(&IntegerMatrix::from_rows(&stacked)).rank() != n {
        return Err(Error::Schema(
            "tuple spans intersect ray-perp in a nonzero subspace".into(),
        ));
    }
    Ok(())
}

/// Builds an admissible system by the interior-element construction.
pub fn build_admissible_system(datum: &ToricDatum, ray: usize) -> Result<AdmissibleSystem> {
    build_admissible_system_variant(datum, ray, 0)
}

/// Same construction with deterministically perturbed choices; every
/// variant is admissible, different variants give different tuples.
pub fn build_admissible_system_variant(
    datum: &ToricDatum,
    ray: usize,
    variant: u64,
) -> Result<AdmissibleSystem> {
    let n = datum.rank();
    if !datum.is_nondegenerate() {
        return Err(Error::NotStronglyConvex);
    }
    if n == 1 {
        return Ok(AdmissibleSystem {
            ray,
            tuples: Vec::new(),
            normals: Vec::new(),
        });
    }
    let v_rho = datum.v_rho(ray);
    let facet = facet_cone(datum, v_rho)?;
    let perp_basis = cones::orthogonal_sublattice(n, std::slice::from_ref(v_rho))?;
    let basis_matrix = IntegerMatrix::from_columns(&perp_basis);
    let basis_rat = RationalMatrix::from_int(&basis_matrix);

    // The facet in ray-perp coordinates, and the dual cone there.
    let mut facet_coords = Vec::new();
    for r in facet.rays() {
        let sol = basis_rat
            .solve(&r.to_rational())
            .ok_or_else(|| Error::Internal("facet ray outside ray-perp".into()))?;
        let coords = crate::linalg::RationalVector(sol)
            .to_lattice()
            .ok_or_else(|| Error::Internal("facet ray has non-integral coordinates".into()))?;
        facet_coords.push(coords);
    }
    let facet_c = RationalCone::from_rays(n - 1, &facet_coords)?;
    let dual_c = facet_c.dual()?;
    let g0 = dual_c
        .relative_interior_point()?
        .scaled(&Int::from(1 + variant));

    // n-1 independent integral points inside the interior of the dual.
    let strict_inside = |w: &LatticeVector| {
        dual_c
            .inequalities()
            .iter()
            .all(|q| q.dot(w).is_positive())
    };
    let mut t = minimal_shift(&Int::one(), |t| {
        (0..n - 1).all(|i| {
            let w = &g0.scaled(t) + &LatticeVector::unit(n - 1, i);
            strict_inside(&w)
        })
    })?;
    let interior_points = |t: &Int| -> Vec<LatticeVector> {
        (0..n - 1)
            .map(|i| &g0.scaled(t) + &LatticeVector::unit(n - 1, i))
            .collect()
    };
    while IntegerMatrix::from_columns(&interior_points(&t))
        .determinant()?
        .is_zero()
    {
        t += 1;
    }
    let ws = interior_points(&t);

    let m0 = facet.relative_interior_point()?;
    let e0 = {
        let base = first_root(datum, ray)?;
        &base.weight + &m0.scaled(&Int::from(variant))
    };

    // Shift scale pushing every hyperplane basis vector into the facet.
    let mut offsets: Vec<Vec<LatticeVector>> = Vec::new();
    for w in &ws {
        let kernel = cones::orthogonal_sublattice(n - 1, std::slice::from_ref(w))?;
        offsets.push(kernel.iter().map(|a| basis_matrix.apply(a)).collect());
    }
    let t2 = minimal_shift(&Int::one(), |t| {
        offsets.iter().flatten().all(|a| {
            let candidate = &m0.scaled(t) + a;
            datum.sigma_dual().contains(&candidate)
        })
    })?;

    let base = &e0 + &m0.scaled(&t2);
    let mut tuples = Vec::new();
    let mut normals = Vec::new();
    for off in &offsets {
        let mut tuple = vec![base.clone()];
        for a in off {
            tuple.push(&base + a);
        }
        let span_normals = cones::orthogonal_sublattice(n, &tuple)?;
        if span_normals.len() != 1 {
            return Err(Error::Internal(
                "constructed tuple does not span a hyperplane".into(),
            ));
        }
        normals.push(span_normals.into_iter().next().unwrap());
        tuples.push(tuple);
    }
    let sys = AdmissibleSystem { ray, tuples, normals };
    verify_admissible(datum, &sys)
        .map_err(|e| Error::Internal(format!("admissible construction failed its own check: {e}")))?;
    Ok(sys)
}

/// A point of S_ray with |det(E_i, e)| >= D for every tuple: walk from the
/// canonical first root along the interior direction of the facet until
/// every determinant has escaped, doubling then refining to the first
/// admissible step.
pub fn find_point_in_b(
    datum: &ToricDatum,
    ray: usize,
    sys: &AdmissibleSystem,
    min_abs: &Int,
) -> Result<DemazureRoot> {
    let e0 = first_root(datum, ray)?;
    if sys.tuples.is_empty() {
        return Ok(e0);
    }
    let n = datum.rank();
    let mut lines = Vec::new();
    for tuple in &sys.tuples {
        let f = det_functional(n, tuple)?;
        lines.push(f);
    }
    if lines.iter().all(|f| e0.weight.dot(f).abs() >= *min_abs) {
        return Ok(e0);
    }
    let facet = facet_cone(datum, ray_vector(datum, ray))?;
    let m0 = facet.relative_interior_point()?;
    let lines: Vec<(Int, Int)> = lines
        .into_iter()
        .map(|f| (e0.weight.dot(&f), m0.dot(&f)))
        .collect();
    for (_, slope) in &lines {
        if slope.is_zero() {
            return Err(Error::Internal(
                "interior direction lies in a reference hyperplane".into(),
            ));
        }
    }
    let t = minimal_shift(&Int::zero(), |t| {
        lines.iter().all(|(value, slope)| {
            let v = value + &(slope * t);
            if slope.is_positive() {
                v >= *min_abs
            } else {
                v <= -min_abs.clone()
            }
        })
    })?;
    let weight = &e0.weight + &m0.scaled(&t);
    datum.checked_root(ray, weight)
}

fn ray_vector<'d>(datum: &'d ToricDatum, ray: usize) -> &'d LatticeVector {
    datum.v_rho(ray)
}

/// The intersection of the slices at levels `ds`, enumerated exactly.
/// Bounded whenever the system is admissible.
pub fn intersect_slices(
    datum: &ToricDatum,
    sys: &AdmissibleSystem,
    ds: &[Int],
) -> Result<Vec<DemazureRoot>> {
    if ds.len() != sys.tuples.len() {
        return Err(Error::DimensionMismatch {
            expected: sys.tuples.len(),
            got: ds.len(),
        });
    }
    let mut region = slab_polyhedron(datum, sys.ray);
    for (tuple, d) in sys.tuples.iter().zip(ds) {
        let f = det_functional(datum.rank(), tuple)?;
        region = region.with_eq(f, d.clone());
    }
    let points = Polytope::new(region)?.lattice_points();
    Ok(points
        .into_iter()
        .map(|weight| DemazureRoot {
            ray: sys.ray,
            weight,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::roots::enumerate_s_rho;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    fn affine_plane() -> ToricDatum {
        ToricDatum::new(2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap()
    }

    fn a1_datum() -> ToricDatum {
        ToricDatum::new(2, &[lv(&[0, 1]), lv(&[2, -1])]).unwrap()
    }

    fn affine_space3() -> ToricDatum {
        ToricDatum::new(3, &[lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]).unwrap()
    }

    #[test]
    fn h_set_affine_plane() {
        let x = affine_plane();
        // ray 1 is (1,0); S_ray = {(-1,k) : k >= 0}; det((-1,0),(-1,k)) = -k.
        let e = [lv(&[-1, 0])];
        match h_set(&x, 1, &e, &int(-3)).unwrap() {
            SliceSet::Finite(s) => {
                assert_eq!(s.len(), 1);
                assert_eq!(s[0].weight, lv(&[-1, 3]));
            }
            other => panic!("unexpected {other:?}"),
        }
        match h_set(&x, 1, &e, &int(2)).unwrap() {
            SliceSet::Finite(s) => assert!(s.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn h_set_degenerate_tuple_in_rank3() {
        let x = affine_space3();
        // ray of (1,0,0) paired with a tuple whose span contains the facet
        // direction (0,1,0).
        let ray = x
            .rays()
            .iter()
            .position(|v| v == &lv(&[1, 0, 0]))
            .unwrap();
        let e = [lv(&[-1, 1, 0]), lv(&[-1, 0, 0])];
        match h_set(&x, ray, &e, &int(1)).unwrap() {
            SliceSet::Infinite { direction } => {
                assert_eq!(direction, lv(&[0, 1, 0]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn h_set_rank_defect() {
        let x = affine_space3();
        let e = [lv(&[-1, 0, 0]), lv(&[-1, 0, 0])];
        match h_set(&x, 0, &e, &int(0)).unwrap() {
            SliceSet::RankDefect { rank } => assert_eq!(rank, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_affine_plane_axis_tuple() {
        let x = affine_plane();
        let c = classify_slices(&x, 1, &[lv(&[-1, 0])]).unwrap();
        assert!(c.all_finite);
        assert_eq!(c.finite_side, FiniteSide::Plus);
        assert_eq!(c.max_abs_d_on_finite_side, int(0));
    }

    #[test]
    fn classify_affine_plane_skew_tuple() {
        let x = affine_plane();
        let c = classify_slices(&x, 1, &[lv(&[-1, 1])]).unwrap();
        assert!(c.all_finite);
        // det((-1,1),(-1,k)) = 1-k, non-positive on S_ray beyond k=1.
        assert_eq!(c.finite_side, FiniteSide::Plus);
        assert_eq!(c.max_abs_d_on_finite_side, int(1));
    }

    #[test]
    fn classify_degenerate_side() {
        let x = affine_space3();
        let ray = x
            .rays()
            .iter()
            .position(|v| v == &lv(&[1, 0, 0]))
            .unwrap();
        let c = classify_slices(&x, ray, &[lv(&[-1, 1, 0]), lv(&[-1, 0, 0])]).unwrap();
        assert!(!c.all_finite);
        assert_eq!(c.finite_side, FiniteSide::Neither);
    }

    #[test]
    fn classify_torus_factor_both_sides_infinite() {
        // Degenerate datum: all slices finite but neither side is.
        let x = ToricDatum::new(2, &[lv(&[1, 0])]).unwrap();
        let c = classify_slices(&x, 0, &[lv(&[-1, 1])]).unwrap();
        assert!(c.all_finite);
        assert_eq!(c.finite_side, FiniteSide::Neither);
    }

    #[test]
    fn admissible_system_affine_plane() {
        let x = affine_plane();
        let sys = build_admissible_system(&x, 1).unwrap();
        assert_eq!(sys.tuples, vec![vec![lv(&[-1, 1])]]);
        verify_admissible(&x, &sys).unwrap();
    }

    #[test]
    fn admissible_system_rank1() {
        let x = ToricDatum::new(1, &[lv(&[1])]).unwrap();
        let sys = build_admissible_system(&x, 0).unwrap();
        assert!(sys.is_empty());
        verify_admissible(&x, &sys).unwrap();
    }

    #[test]
    fn admissible_system_a1() {
        let x = a1_datum();
        for ray in 0..2 {
            let sys = build_admissible_system(&x, ray).unwrap();
            assert_eq!(sys.tuples.len(), 1);
            verify_admissible(&x, &sys).unwrap();
        }
    }

    #[test]
    fn admissible_system_rank3_and_variants() {
        let x = affine_space3();
        for ray in 0..3 {
            for variant in 0..3 {
                let sys = build_admissible_system_variant(&x, ray, variant).unwrap();
                assert_eq!(sys.tuples.len(), 2);
                verify_admissible(&x, &sys).unwrap();
            }
        }
    }

    #[test]
    fn find_point_walk_matches_hand_computation() {
        let x = affine_plane();
        let sys = AdmissibleSystem {
            ray: 1,
            tuples: vec![vec![lv(&[-1, 1])]],
            normals: vec![cones::orthogonal_sublattice(2, &[lv(&[-1, 1])])
                .unwrap()
                .remove(0)],
        };
        verify_admissible(&x, &sys).unwrap();
        // |det((-1,1),(-1,k))| = |1-k| >= 2 within S_ray needs k >= 3.
        let e = find_point_in_b(&x, 1, &sys, &int(2)).unwrap();
        assert_eq!(e.weight, lv(&[-1, 3]));
        // D = 0 returns the canonical first root.
        let e = find_point_in_b(&x, 1, &sys, &int(0)).unwrap();
        assert_eq!(e.weight, lv(&[-1, 0]));
    }

    #[test]
    fn find_point_a1_example() {
        let x = a1_datum();
        // ray 1 is (2,-1); S_ray = {(k,2k+1) : k >= 0}.
        let sys = AdmissibleSystem {
            ray: 1,
            tuples: vec![vec![lv(&[0, 1])]],
            normals: vec![cones::orthogonal_sublattice(2, &[lv(&[0, 1])])
                .unwrap()
                .remove(0)],
        };
        verify_admissible(&x, &sys).unwrap();
        let e = find_point_in_b(&x, 1, &sys, &int(1)).unwrap();
        let f = det_functional(2, &[lv(&[0, 1])]).unwrap();
        assert!(e.weight.dot(&f).abs() >= int(1));
        assert!(enumerate_s_rho(&x, 1, &int(10)).unwrap().contains(&e));
    }

    #[test]
    fn slice_intersection_is_small() {
        let x = affine_space3();
        let ray = 0;
        let sys = build_admissible_system(&x, ray).unwrap();
        for d1 in -3i64..=3 {
            for d2 in -3i64..=3 {
                let hits = intersect_slices(&x, &sys, &[int(d1), int(d2)]).unwrap();
                assert!(hits.len() <= 1, "d=({d1},{d2}) gave {hits:?}");
            }
        }
    }
}
