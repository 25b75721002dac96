//! Rational convex polyhedral cones and polyhedra, with exact duality,
//! canonical forms, faces, and bounded lattice-point enumeration.

mod dd;
mod polyhedron;

pub use polyhedron::{lattice_points, Polyhedron, Polytope};

use num_traits::{Signed, Zero};
use crate::error::{Error, Result};
use crate::linalg::{
    hermite_normal_form, integer_kernel, saturate, Int, IntegerMatrix, LatticeVector, Rat,
    RationalMatrix, RationalVector,
};

/// A rational convex polyhedral cone, stored in canonical form.
///
/// `rays` are primitive, reduced modulo the lineality space, pairwise
/// distinct and lex-sorted; for a strongly convex cone they are exactly the
/// extremal rays. `lineality` is the saturated HNF basis of the largest
/// linear subspace contained in the cone. `inequalities` is the canonical
/// generator list of the dual cone, so that
/// cone = {x : <h, x> >= 0 for every h in inequalities}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    rank: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
    inequalities: Vec<LatticeVector>,
}

impl RationalCone {
    pub fn from_rays(rank: usize, generators: &[LatticeVector]) -> Result<Self> {
        for g in generators {
            if g.rank() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: g.rank(),
                });
            }
        }
        let gens: Vec<LatticeVector> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .cloned()
            .collect();
        // The dual's generators are this cone's canonical inequalities.
        let dual = dd::generators_from_inequalities(rank, &gens)?;
        let (dual_lin, dual_rays) = canonical_generators(rank, dual)?;
        let inequalities = inequality_list(&dual_rays, &dual_lin);
        let own = dd::generators_from_inequalities(rank, &inequalities)?;
        let (lineality, rays) = canonical_generators(rank, own)?;
        let cone = RationalCone {
            rank,
            rays,
            lineality,
            inequalities,
        };
        cone.cross_check(&gens)?;
        Ok(cone)
    }

    pub fn from_inequalities(rank: usize, normals: &[LatticeVector]) -> Result<Self> {
        let own = dd::generators_from_inequalities(rank, normals)?;
        let (lineality, rays) = canonical_generators(rank, own)?;
        let gens = inequality_list(&rays, &lineality);
        let dual = dd::generators_from_inequalities(rank, &gens)?;
        let (dual_lin, dual_rays) = canonical_generators(rank, dual)?;
        let inequalities = inequality_list(&dual_rays, &dual_lin);
        let cone = RationalCone {
            rank,
            rays,
            lineality,
            inequalities,
        };
        cone.cross_check(&[])?;
        Ok(cone)
    }

    pub fn zero(rank: usize) -> Self {
        RationalCone {
            rank,
            rays: Vec::new(),
            lineality: Vec::new(),
            inequalities: inequality_list(
                &[],
                &hermite_normal_form(&IntegerMatrix::identity(rank)).basis_vectors(),
            ),
        }
    }

    pub fn full_space(rank: usize) -> Self {
        RationalCone {
            rank,
            rays: Vec::new(),
            lineality: hermite_normal_form(&IntegerMatrix::identity(rank)).basis_vectors(),
            inequalities: Vec::new(),
        }
    }

    fn cross_check(&self, extra_members: &[LatticeVector]) -> Result<()> {
        for g in self
            .generator_list()
            .iter()
            .chain(extra_members.iter())
        {
            if !self.contains(g) {
                return Err(Error::Internal(format!(
                    "cone representations disagree: generator {g} violates an inequality"
                )));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn inequalities(&self) -> &[LatticeVector] {
        &self.inequalities
    }

    /// Lattice generators of the cone: rays plus both signs of the
    /// lineality basis.
    pub fn generator_list(&self) -> Vec<LatticeVector> {
        inequality_list(&self.rays, &self.lineality)
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.inequalities.iter().all(|h| !h.dot(v).is_negative())
    }

    pub fn contains_rational(&self, v: &[Rat]) -> bool {
        self.inequalities.iter().all(|h| {
            let s: Rat = h
                .0
                .iter()
                .zip(v.iter())
                .map(|(a, b)| Rat::from_integer(a.clone()) * b)
                .sum();
            !s.is_negative()
        })
    }

    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        other.generator_list().iter().all(|g| self.contains(g))
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        let gens = self.generator_list();
        if gens.is_empty() {
            return 0;
        }
        RationalMatrix::from_int(&IntegerMatrix::from_rows(&gens)).rank()
    }

    /// Primitive generators of the extremal rays, canonical order.
    pub fn extremal_rays(&self) -> Result<Vec<LatticeVector>> {
        if !self.is_strongly_convex() {
            return Err(Error::NotPointed(self.lineality[0].clone()));
        }
        Ok(self.rays.clone())
    }

    /// {u : <u, v> >= 0 for all v in self}.
    pub fn dual(&self) -> Result<RationalCone> {
        let gens = dd::generators_from_inequalities(self.rank, &self.generator_list())?;
        let (lineality, rays) = canonical_generators(self.rank, gens)?;
        let cone = RationalCone {
            rank: self.rank,
            inequalities: inequality_list(&self.rays, &self.lineality),
            rays,
            lineality,
        };
        cone.cross_check(&[])?;
        Ok(cone)
    }

    pub fn intersection(&self, other: &RationalCone) -> Result<RationalCone> {
        let mut normals = self.inequalities.clone();
        normals.extend_from_slice(&other.inequalities);
        RationalCone::from_inequalities(self.rank, &normals)
    }

    /// A lattice point in the relative interior: the sum of the canonical
    /// ray generators (the zero vector for a nonzero linear subspace).
    pub fn relative_interior_point(&self) -> Result<LatticeVector> {
        if self.is_zero() {
            return Err(Error::ZeroCone);
        }
        let mut sum = LatticeVector::zero(self.rank);
        for r in &self.rays {
            sum = &sum + r;
        }
        Ok(sum)
    }

    /// Saturated HNF basis of the lattice of the linear span.
    pub fn span_basis(&self) -> Result<Vec<LatticeVector>> {
        saturate(self.rank, &self.generator_list())
    }
}

/// A lattice slab: the points of a cone cut by affine equalities, together
/// with a distinguished base point inside the set.
///
/// Membership is decided directly: m belongs to the slab iff m satisfies
/// every inequality of `directions` and every equality. The recession
/// directions of the slab are `directions` intersected with the homogenized
/// equalities; `base` witnesses nonemptiness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSlab {
    pub base: LatticeVector,
    pub directions: RationalCone,
    pub equalities: Vec<(LatticeVector, Int)>,
}

impl AffineSlab {
    pub fn contains(&self, m: &LatticeVector) -> bool {
        self.directions.contains(m) && self.equalities.iter().all(|(h, c)| &h.dot(m) == c)
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// The polyhedron with the same point set.
    pub fn to_polyhedron(&self) -> Polyhedron {
        let mut p = Polyhedron::new(self.rank());
        for h in self.directions.inequalities() {
            p = p.with_ineq(h.clone(), Int::zero());
        }
        for (h, c) in &self.equalities {
            p = p.with_eq(h.clone(), c.clone());
        }
        p
    }

    /// Asymptotic cone of the slab.
    pub fn recession(&self) -> Result<RationalCone> {
        self.to_polyhedron().recession_cone()
    }
}

/// Reduces DD output to the canonical form: saturated lineality basis and
/// primitive rays reduced modulo the lineality space.
fn canonical_generators(
    rank: usize,
    gens: dd::Generators,
) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>)> {
    let lineality = saturate(rank, &gens.lineality)?;
    let hnf = hermite_normal_form(&IntegerMatrix::from_columns(&lineality));
    let mut rays = Vec::new();
    for r in &gens.rays {
        let mut coords: Vec<Rat> = r.to_rational();
        for (j, &p) in hnf.pivots.iter().enumerate() {
            let basis = hnf.basis.column(j);
            let factor = &coords[p] / Rat::from_integer(basis.0[p].clone());
            if factor.is_zero() {
                continue;
            }
            for i in 0..rank {
                let s = &factor * Rat::from_integer(basis.0[i].clone());
                coords[i] -= s;
            }
        }
        let reduced = RationalVector(coords);
        if reduced.is_zero() {
            continue; // the ray lies inside the lineality space
        }
        rays.push(reduced.to_primitive_lattice()?);
    }
    rays.sort();
    rays.dedup();
    Ok((lineality, rays))
}

fn inequality_list(rays: &[LatticeVector], lineality: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = rays.to_vec();
    for l in lineality {
        out.push(l.clone());
        out.push(-l);
    }
    out.sort();
    out.dedup();
    out
}

/// Dual cone; rejects ambient rank > 8 (guards the duality blow-up).
pub fn dual_cone(c: &RationalCone) -> Result<RationalCone> {
    c.dual()
}

pub fn is_strongly_convex(c: &RationalCone) -> bool {
    c.is_strongly_convex()
}

pub fn extremal_rays(c: &RationalCone) -> Result<Vec<LatticeVector>> {
    c.extremal_rays()
}

/// HNF basis of {m : <m, v> = 0 for all v in vs}.
pub fn orthogonal_sublattice(rank: usize, vs: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    if vs.is_empty() {
        return Ok(hermite_normal_form(&IntegerMatrix::identity(rank)).basis_vectors());
    }
    integer_kernel(&IntegerMatrix::from_rows(vs))
}

pub fn relative_interior_point(c: &RationalCone) -> Result<LatticeVector> {
    c.relative_interior_point()
}

/// Recession cone of a nonempty polyhedron: all constraints homogenized.
pub fn recession_cone(p: &Polyhedron) -> Result<RationalCone> {
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    p.recession_cone()
}

/// Finitely many elements of M ∩ sigma_dual ∩ rho-perp whose Z-span is the
/// whole group rho-perp ∩ M: an interior point of the facet together with
/// shifted copies of a basis of rho-perp ∩ M pushed into the cone.
pub fn facet_group_generators(
    sigma_dual: &RationalCone,
    v_rho: &LatticeVector,
) -> Result<Vec<LatticeVector>> {
    let rank = sigma_dual.rank();
    let mut normals = sigma_dual.inequalities().to_vec();
    normals.push(v_rho.clone());
    normals.push(-v_rho);
    let facet = RationalCone::from_inequalities(rank, &normals)?;
    let basis = orthogonal_sublattice(rank, std::slice::from_ref(v_rho))?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let m0 = if facet.is_zero() {
        LatticeVector::zero(rank)
    } else {
        facet.relative_interior_point()?
    };
    let mut out = Vec::new();
    if !m0.is_zero() {
        out.push(m0.clone());
    }
    for b in &basis {
        let t = minimal_shift(&Int::zero(), |t| {
            let candidate = &m0.scaled(t) + b;
            sigma_dual.contains(&candidate)
        })?;
        out.push(&m0.scaled(&t) + b);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Smallest integer t >= start satisfying a monotone predicate: doubling
/// walk followed by binary refinement. Errors if no t below 2^40 works.
pub(crate) fn minimal_shift(
    start: &Int,
    satisfied: impl Fn(&Int) -> bool,
) -> Result<Int> {
    let mut hi = start.clone();
    let mut step = Int::from(1);
    let limit = Int::from(1u64 << 40);
    while !satisfied(&hi) {
        hi += &step;
        step = &step * 2;
        if hi > limit {
            return Err(Error::Internal(
                "monotone shift walk exceeded its budget".into(),
            ));
        }
    }
    let mut lo = start.clone();
    while lo < hi {
        let mid = (&lo + &hi) / 2;
        if satisfied(&mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    fn cone(rank: usize, gens: &[&[i64]]) -> RationalCone {
        let v: Vec<LatticeVector> = gens.iter().map(|g| lv(g)).collect();
        RationalCone::from_rays(rank, &v).unwrap()
    }

    #[test]
    fn dual_of_orthant_is_orthant() {
        let c = cone(2, &[&[1, 0], &[0, 1]]);
        let d = dual_cone(&c).unwrap();
        assert_eq!(d, c);
    }

    #[test]
    fn dual_hand_example() {
        // Cone((0,1),(2,-1)) has dual Cone((1,0),(1,2)).
        let c = cone(2, &[&[0, 1], &[2, -1]]);
        let d = dual_cone(&c).unwrap();
        assert_eq!(d.rays(), &[lv(&[1, 0]), lv(&[1, 2])]);
    }

    #[test]
    fn dual_of_zero_cone_is_everything() {
        let c = RationalCone::zero(2);
        let d = dual_cone(&c).unwrap();
        assert_eq!(d.lineality().len(), 2);
        assert!(d.rays().is_empty());
    }

    #[test]
    fn double_dual_round_trip() {
        for gens in [
            vec![lv(&[1, 0]), lv(&[1, 2])],
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[1, 1])],
            vec![lv(&[2, -1]), lv(&[0, 1])],
            vec![lv(&[1, 0]), lv(&[-1, 0])],
        ] {
            let c = RationalCone::from_rays(2, &gens).unwrap();
            assert_eq!(dual_cone(&dual_cone(&c).unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn extremal_rays_drop_interior_generator() {
        let c = cone(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(c.extremal_rays().unwrap(), vec![lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn extremal_rays_single() {
        let c = cone(2, &[&[1, 0]]);
        assert_eq!(c.extremal_rays().unwrap(), vec![lv(&[1, 0])]);
    }

    #[test]
    fn extremal_rays_reject_halfplane() {
        let c = RationalCone::from_inequalities(2, &[lv(&[1, 0])]).unwrap();
        assert!(!c.is_strongly_convex());
        assert!(matches!(c.extremal_rays(), Err(Error::NotPointed(_))));
    }

    #[test]
    fn strong_convexity_examples() {
        assert!(cone(2, &[&[1, 0], &[0, 1]]).is_strongly_convex());
        let half = RationalCone::from_inequalities(2, &[lv(&[1, 0])]).unwrap();
        assert!(!half.is_strongly_convex());
        assert!(cone(2, &[&[1, 0], &[1, 2]]).is_strongly_convex());
    }

    #[test]
    fn orthogonal_sublattice_examples() {
        assert_eq!(
            orthogonal_sublattice(2, &[lv(&[1, 0])]).unwrap(),
            vec![lv(&[0, 1])]
        );
        assert_eq!(
            orthogonal_sublattice(2, &[lv(&[2, -1])]).unwrap(),
            vec![lv(&[1, 2])]
        );
        assert_eq!(
            orthogonal_sublattice(2, &[]).unwrap(),
            vec![lv(&[1, 0]), lv(&[0, 1])]
        );
    }

    #[test]
    fn relative_interior_examples() {
        assert_eq!(
            cone(2, &[&[1, 0], &[0, 1]]).relative_interior_point().unwrap(),
            lv(&[1, 1])
        );
        assert_eq!(
            cone(2, &[&[0, 1]]).relative_interior_point().unwrap(),
            lv(&[0, 1])
        );
        assert_eq!(
            cone(2, &[&[1, 0], &[1, 2]]).relative_interior_point().unwrap(),
            lv(&[2, 2])
        );
        assert!(RationalCone::zero(2).relative_interior_point().is_err());
    }

    #[test]
    fn facet_generators_plane() {
        // sigma = first orthant in N, rho = ray (1,0): facet of the dual is
        // the ray (0,1) and it already spans rho-perp as a group.
        let sigma = cone(2, &[&[1, 0], &[0, 1]]);
        let sigma_dual = dual_cone(&sigma).unwrap();
        let g = facet_group_generators(&sigma_dual, &lv(&[1, 0])).unwrap();
        assert_eq!(g, vec![lv(&[0, 1])]);
    }

    #[test]
    fn facet_generators_skew() {
        let sigma = cone(2, &[&[0, 1], &[2, -1]]);
        let sigma_dual = dual_cone(&sigma).unwrap();
        let g = facet_group_generators(&sigma_dual, &lv(&[2, -1])).unwrap();
        assert_eq!(g, vec![lv(&[1, 2])]);
    }

    #[test]
    fn facet_generators_rank3() {
        let sigma = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let sigma_dual = dual_cone(&sigma).unwrap();
        let g = facet_group_generators(&sigma_dual, &lv(&[1, 0, 0])).unwrap();
        assert_eq!(g, vec![lv(&[0, 0, 1]), lv(&[0, 1, 0]), lv(&[0, 1, 1])]);
        // Z-span equals rho-perp ∩ M.
        let hnf = hermite_normal_form(&IntegerMatrix::from_columns(&g));
        let expected = orthogonal_sublattice(3, &[lv(&[1, 0, 0])]).unwrap();
        assert_eq!(hnf.basis_vectors(), expected);
    }

    #[test]
    fn cone_equality_is_canonical() {
        let a = cone(2, &[&[2, 0], &[0, 3]]);
        let b = cone(2, &[&[1, 0], &[0, 1], &[3, 4]]);
        assert_eq!(a, b);
    }

    #[test]
    fn lineality_canonicalization() {
        // Two descriptions of the halfplane {x >= 0}.
        let a = RationalCone::from_rays(2, &[lv(&[1, 0]), lv(&[0, 1]), lv(&[0, -1])]).unwrap();
        let b = RationalCone::from_inequalities(2, &[lv(&[1, 0])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lineality().len(), 1);
        assert_eq!(a.rays(), &[lv(&[1, 0])]);
    }

    #[test]
    fn minimal_shift_finds_threshold() {
        let t = minimal_shift(&Int::zero(), |t| t >= &Int::from(23)).unwrap();
        assert_eq!(t, Int::from(23));
        let t = minimal_shift(&Int::from(1), |t| t >= &Int::from(1)).unwrap();
        assert_eq!(t, Int::from(1));
    }
}
