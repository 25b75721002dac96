//! Root data of an affine toric datum: the per-ray weight families, the
//! derivations they act by on the monomial algebra, commutation, slice
//! machinery, and the weight-monoid reconstruction from asymptotic data.

mod slices;

pub use slices::{
    build_admissible_system, build_admissible_system_variant, classify_slices, find_point_in_b,
    h_set, verify_admissible, AdmissibleSystem, FiniteSide, SliceClassification, SliceSet,
};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::cones::{self, AffineSlab, Polyhedron, RationalCone};
use crate::error::{Error, Result};
use crate::linalg::{Int, LatticeVector, Rat};

/// An affine toric variety of torus rank `rank`, described by the strongly
/// convex rational cone spanned by `rays` on the one-parameter-subgroup side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDatum {
    rank: usize,
    sigma: RationalCone,
    sigma_dual: RationalCone,
    rays: Vec<LatticeVector>,
}

impl ToricDatum {
    /// Builds the datum, canonicalizing the generators. Rejects cones that
    /// contain a line (the torus action would not be faithful).
    pub fn new(rank: usize, generators: &[LatticeVector]) -> Result<Self> {
        let sigma = RationalCone::from_rays(rank, generators)?;
        if !sigma.is_strongly_convex() {
            return Err(Error::NotStronglyConvex);
        }
        let sigma_dual = sigma.dual()?;
        let rays = sigma.rays().to_vec();
        Ok(ToricDatum {
            rank,
            sigma,
            sigma_dual,
            rays,
        })
    }

    /// The torus itself: the zero cone.
    pub fn torus(rank: usize) -> Self {
        ToricDatum::new(rank, &[]).expect("zero cone is strongly convex")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn sigma(&self) -> &RationalCone {
        &self.sigma
    }

    pub fn sigma_dual(&self) -> &RationalCone {
        &self.sigma_dual
    }

    /// Primitive generators of the extremal rays, canonical order.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn v_rho(&self, ray: usize) -> &LatticeVector {
        &self.rays[ray]
    }

    /// True iff the dual cone is strongly convex (no torus factor).
    pub fn is_nondegenerate(&self) -> bool {
        self.sigma_dual.is_strongly_convex()
    }

    /// The cone spanned by all extremal rays except `ray`, dualized:
    /// the inequality cone of the family S_ray.
    pub fn sigma_rho_dual(&self, ray: usize) -> Result<RationalCone> {
        let normals: Vec<LatticeVector> = self
            .rays
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != ray)
            .map(|(_, v)| v.clone())
            .collect();
        RationalCone::from_inequalities(self.rank, &normals)
    }

    /// Which family a weight belongs to, if any: the unique ray pairing to
    /// -1 while every other ray pairs non-negatively.
    pub fn classify_weight(&self, weight: &LatticeVector) -> Option<usize> {
        let mut hit = None;
        for (i, v) in self.rays.iter().enumerate() {
            let p = weight.dot(v);
            if p == Int::from(-1) {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            } else if p.is_negative() {
                return None;
            }
        }
        hit
    }

    pub fn root(&self, weight: LatticeVector) -> Result<DemazureRoot> {
        match self.classify_weight(&weight) {
            Some(ray) => Ok(DemazureRoot { ray, weight }),
            None => Err(Error::NotARoot(weight)),
        }
    }

    /// Validates a claimed (ray, weight) pair.
    pub fn checked_root(&self, ray: usize, weight: LatticeVector) -> Result<DemazureRoot> {
        match self.classify_weight(&weight) {
            Some(r) if r == ray => Ok(DemazureRoot { ray, weight }),
            _ => Err(Error::NotARoot(weight)),
        }
    }
}

/// A root weight e with <e, v_ray> = -1 and <e, v_mu> >= 0 for mu != ray.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DemazureRoot {
    pub ray: usize,
    pub weight: LatticeVector,
}

impl fmt::Debug for DemazureRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@ray{}", self.weight, self.ray)
    }
}

/// The family S_ray, held symbolically as a lattice slab together with a
/// distinguished smallest member.
#[derive(Clone, Debug)]
pub struct RootFamily {
    pub ray: usize,
    pub slab: AffineSlab,
}

impl RootFamily {
    pub fn contains(&self, weight: &LatticeVector) -> bool {
        self.slab.contains(weight)
    }

    pub fn truncation(&self, datum: &ToricDatum, bound: &Int) -> Result<Vec<DemazureRoot>> {
        enumerate_s_rho(datum, self.ray, bound)
    }
}

/// Symbolic description of S_ray: base point plus the defining constraints.
pub fn root_family(datum: &ToricDatum, ray: usize) -> Result<RootFamily> {
    let base = first_root(datum, ray)?;
    let directions = datum.sigma_rho_dual(ray)?;
    Ok(RootFamily {
        ray,
        slab: AffineSlab {
            base: base.weight,
            directions,
            equalities: vec![(datum.v_rho(ray).clone(), Int::from(-1))],
        },
    })
}

/// Canonical member of S_ray: the lex-smallest root in the smallest
/// power-of-two box containing any root. The family is nonempty for every
/// extremal ray, so the search terminates.
pub fn first_root(datum: &ToricDatum, ray: usize) -> Result<DemazureRoot> {
    let mut bound = Int::one();
    let limit = Int::from(1u64 << 20);
    loop {
        let found = enumerate_s_rho(datum, ray, &bound)?;
        if let Some(r) = found.into_iter().next() {
            return Ok(r);
        }
        bound = &bound * 2;
        if bound > limit {
            return Err(Error::Internal(format!(
                "no root found for ray {ray} within the search budget"
            )));
        }
    }
}

/// Exactly the members of S_ray with every coordinate in [-bound, bound].
pub fn enumerate_s_rho(
    datum: &ToricDatum,
    ray: usize,
    bound: &Int,
) -> Result<Vec<DemazureRoot>> {
    if ray >= datum.ray_count() {
        return Err(Error::Schema(format!("ray index {ray} out of range")));
    }
    let mut region = Polyhedron::new(datum.rank())
        .with_eq(datum.v_rho(ray).clone(), Int::from(-1))
        .with_box(bound);
    for (i, v) in datum.rays().iter().enumerate() {
        if i != ray {
            region = region.with_ineq(v.clone(), Int::zero());
        }
    }
    let points = cones::lattice_points(&region)?;
    Ok(points
        .into_iter()
        .map(|weight| DemazureRoot { ray, weight })
        .collect())
}

/// Disjoint union of the per-ray truncations, ordered by (ray, weight).
pub fn enumerate_roots(datum: &ToricDatum, bound: &Int) -> Result<Vec<DemazureRoot>> {
    let mut out = Vec::new();
    for ray in 0..datum.ray_count() {
        out.extend(enumerate_s_rho(datum, ray, bound)?);
    }
    Ok(out)
}

/// An element of the monomial algebra of the datum: a finite rational
/// combination of characters with exponents in the weight monoid.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MonomialPolynomial {
    terms: BTreeMap<LatticeVector, Rat>,
}

impl MonomialPolynomial {
    pub fn zero() -> Self {
        MonomialPolynomial::default()
    }

    pub fn monomial(datum: &ToricDatum, exponent: LatticeVector, coefficient: Rat) -> Result<Self> {
        if !datum.sigma_dual().contains(&exponent) {
            return Err(Error::Schema(format!(
                "exponent {exponent} lies outside the weight monoid"
            )));
        }
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(exponent, coefficient);
        }
        Ok(MonomialPolynomial { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &LatticeVector) -> Rat {
        self.terms.get(exponent).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, exponent: LatticeVector, coefficient: Rat) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coefficient;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn sub(&self, other: &MonomialPolynomial) -> MonomialPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

/// The locally nilpotent derivation attached to a root, applied to a
/// polynomial: each character of exponent m is sent to <m, v_ray> times the
/// character of exponent e + m. All output exponents are verified to stay
/// inside the weight monoid.
pub fn derivation_apply(
    datum: &ToricDatum,
    root: &DemazureRoot,
    p: &MonomialPolynomial,
) -> Result<MonomialPolynomial> {
    let v = datum.v_rho(root.ray);
    let mut out = MonomialPolynomial::zero();
    for (m, c) in p.terms() {
        let k = m.dot(v);
        if k.is_zero() {
            continue;
        }
        let exponent = &root.weight + m;
        if !datum.sigma_dual().contains(&exponent) {
            return Err(Error::Internal(format!(
                "derivation produced exponent {exponent} outside the weight monoid"
            )));
        }
        out.add_term(exponent, c * Rat::from_integer(k));
    }
    Ok(out)
}

/// Commutation of the two root subgroups: same ray, or each weight
/// annihilates the other ray.
pub fn roots_commute(datum: &ToricDatum, r1: &DemazureRoot, r2: &DemazureRoot) -> bool {
    if r1.ray == r2.ray {
        return true;
    }
    r1.weight.dot(datum.v_rho(r2.ray)).is_zero()
        && r2.weight.dot(datum.v_rho(r1.ray)).is_zero()
}

/// The convex-hull cone of the asymptotic directions of the root set: the
/// cone generated by every facet sigma_dual ∩ ray-perp.
pub fn asymptotic_root_cone(datum: &ToricDatum) -> Result<RationalCone> {
    let mut gens: Vec<LatticeVector> = Vec::new();
    for v in datum.rays() {
        let facet = facet_cone(datum, v)?;
        gens.extend(facet.generator_list());
    }
    RationalCone::from_rays(datum.rank(), &gens)
}

/// sigma_dual ∩ v-perp as a cone in M.
pub fn facet_cone(datum: &ToricDatum, v: &LatticeVector) -> Result<RationalCone> {
    let mut normals = datum.sigma_dual().inequalities().to_vec();
    normals.push(v.clone());
    normals.push(-v);
    RationalCone::from_inequalities(datum.rank(), &normals)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidCase {
    /// The hull of the asymptotic directions is full-dimensional.
    FullDimensional,
    /// The asymptotic directions form a hyperplane; the monoid is the side
    /// not containing the roots.
    HalfSpace,
    /// No roots at all: the monoid is the whole character lattice.
    FullLattice,
}

/// The weight monoid, described as (cone, case); the lattice points of the
/// cone are the monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMonoid {
    pub cone: RationalCone,
    pub case: MonoidCase,
}

/// Recovers the weight monoid from root data alone, by the asymptotic-cone
/// trichotomy. The result always equals sigma_dual ∩ M; the tests check
/// that equality independently.
pub fn weight_monoid_from_roots(datum: &ToricDatum) -> Result<WeightMonoid> {
    if datum.ray_count() == 0 {
        return Ok(WeightMonoid {
            cone: RationalCone::full_space(datum.rank()),
            case: MonoidCase::FullLattice,
        });
    }
    let hull = asymptotic_root_cone(datum)?;
    if hull.dim() == datum.rank() {
        return Ok(WeightMonoid {
            cone: hull,
            case: MonoidCase::FullDimensional,
        });
    }
    // Trichotomy: the hull must now be a full hyperplane.
    if !hull.rays().is_empty() || hull.lineality().len() + 1 != datum.rank() {
        return Err(Error::Internal(
            "asymptotic hull is neither full-dimensional nor a hyperplane".into(),
        ));
    }
    let normals = cones::orthogonal_sublattice(datum.rank(), hull.lineality())?;
    let mut w = normals
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("hyperplane without a normal".into()))?;
    // Orient the half space away from the roots.
    let witness = first_root(datum, 0)?;
    let s = witness.weight.dot(&w);
    if s.is_zero() {
        return Err(Error::Internal("root lies on the asymptotic hyperplane".into()));
    }
    if s.is_positive() {
        w = -&w;
    }
    Ok(WeightMonoid {
        cone: RationalCone::from_inequalities(datum.rank(), &[w])?,
        case: MonoidCase::HalfSpace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    pub(crate) fn affine_plane() -> ToricDatum {
        ToricDatum::new(2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap()
    }

    pub(crate) fn a1_datum() -> ToricDatum {
        ToricDatum::new(2, &[lv(&[0, 1]), lv(&[2, -1])]).unwrap()
    }

    pub(crate) fn line_times_torus() -> ToricDatum {
        ToricDatum::new(2, &[lv(&[1, 0])]).unwrap()
    }

    fn weights(roots: &[DemazureRoot]) -> Vec<LatticeVector> {
        roots.iter().map(|r| r.weight.clone()).collect()
    }

    #[test]
    fn datum_rejects_lines() {
        assert!(matches!(
            ToricDatum::new(2, &[lv(&[1, 0]), lv(&[-1, 0])]),
            Err(Error::NotStronglyConvex)
        ));
    }

    #[test]
    fn s_rho_affine_plane() {
        let x = affine_plane();
        // Ray order is canonical: ray 0 is (0,1), ray 1 is (1,0).
        assert_eq!(x.rays(), &[lv(&[0, 1]), lv(&[1, 0])]);
        let s = enumerate_s_rho(&x, 1, &int(3)).unwrap();
        assert_eq!(
            weights(&s),
            vec![lv(&[-1, 0]), lv(&[-1, 1]), lv(&[-1, 2]), lv(&[-1, 3])]
        );
    }

    #[test]
    fn s_rho_a1_datum() {
        let x = a1_datum();
        assert_eq!(x.rays(), &[lv(&[0, 1]), lv(&[2, -1])]);
        let s = enumerate_s_rho(&x, 1, &int(5)).unwrap();
        assert_eq!(weights(&s), vec![lv(&[0, 1]), lv(&[1, 3]), lv(&[2, 5])]);
    }

    #[test]
    fn s_rho_torus_is_empty() {
        let x = ToricDatum::torus(2);
        assert_eq!(x.ray_count(), 0);
        assert!(enumerate_roots(&x, &int(4)).unwrap().is_empty());
    }

    #[test]
    fn roots_box_one_affine_plane() {
        let x = affine_plane();
        let roots = enumerate_roots(&x, &int(1)).unwrap();
        let mut expected = vec![lv(&[0, -1]), lv(&[1, -1]), lv(&[-1, 0]), lv(&[-1, 1])];
        expected.sort();
        let mut got = weights(&roots);
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn roots_of_degenerate_datum() {
        let x = line_times_torus();
        let roots = enumerate_roots(&x, &int(2)).unwrap();
        assert_eq!(
            weights(&roots),
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
    fn family_slab_agrees_with_invariants() {
        let x = a1_datum();
        for ray in 0..x.ray_count() {
            let fam = root_family(&x, ray).unwrap();
            for r in enumerate_s_rho(&x, ray, &int(6)).unwrap() {
                assert!(fam.contains(&r.weight));
            }
            // A point from the other family must not be a member.
            let other = enumerate_s_rho(&x, 1 - ray, &int(6)).unwrap();
            assert!(!fam.contains(&other[0].weight));
        }
    }

    #[test]
    fn derivation_examples() {
        let x = affine_plane();
        let rho1 = x.root(lv(&[-1, 0])).unwrap(); // ray (1,0)
        assert_eq!(rho1.ray, 1);

        let p = MonomialPolynomial::monomial(&x, lv(&[2, 0]), Rat::one()).unwrap();
        let dp = derivation_apply(&x, &rho1, &p).unwrap();
        assert_eq!(dp.coefficient(&lv(&[1, 0])), Rat::from_integer(int(2)));
        assert_eq!(dp.terms().count(), 1);

        let q = MonomialPolynomial::monomial(&x, lv(&[0, 3]), Rat::one()).unwrap();
        assert!(derivation_apply(&x, &rho1, &q).unwrap().is_zero());
    }

    #[test]
    fn derivation_local_nilpotency() {
        let x = affine_plane();
        let rho1 = x.root(lv(&[-1, 0])).unwrap();
        let mut p = MonomialPolynomial::monomial(&x, lv(&[2, 0]), Rat::one()).unwrap();
        // <(2,0),(1,0)> + 1 = 3 applications kill the monomial
        for _ in 0..3 {
            assert!(!p.is_zero());
            p = derivation_apply(&x, &rho1, &p).unwrap();
        }
        assert!(p.is_zero());
    }

    #[test]
    fn commutation_criterion_examples() {
        let x = affine_plane();
        let a = x.root(lv(&[-1, 0])).unwrap();
        let b = x.root(lv(&[0, -1])).unwrap();
        assert!(roots_commute(&x, &a, &b));

        let c = x.root(lv(&[-1, 1])).unwrap();
        let d = x.root(lv(&[1, -1])).unwrap();
        assert!(!roots_commute(&x, &c, &d));

        // Same ray always commutes.
        let e = x.root(lv(&[-1, 5])).unwrap();
        assert!(roots_commute(&x, &c, &e));
    }

    #[test]
    fn asymptotic_cone_examples() {
        let x = affine_plane();
        let hull = asymptotic_root_cone(&x).unwrap();
        assert_eq!(&hull, x.sigma_dual());

        let y = line_times_torus();
        let hull = asymptotic_root_cone(&y).unwrap();
        assert!(hull.rays().is_empty());
        assert_eq!(hull.lineality(), &[lv(&[0, 1])]);

        let t = ToricDatum::torus(2);
        assert!(asymptotic_root_cone(&t).unwrap().is_zero());
    }

    #[test]
    fn weight_monoid_trichotomy() {
        let x = affine_plane();
        let m = weight_monoid_from_roots(&x).unwrap();
        assert_eq!(m.case, MonoidCase::FullDimensional);
        assert_eq!(&m.cone, x.sigma_dual());

        let y = line_times_torus();
        let m = weight_monoid_from_roots(&y).unwrap();
        assert_eq!(m.case, MonoidCase::HalfSpace);
        assert_eq!(&m.cone, y.sigma_dual());

        let t = ToricDatum::torus(2);
        let m = weight_monoid_from_roots(&t).unwrap();
        assert_eq!(m.case, MonoidCase::FullLattice);
        assert_eq!(&m.cone, t.sigma_dual());
    }

    #[test]
    fn s_rho_invariant_under_facet_shifts() {
        let x = a1_datum();
        for ray in 0..2 {
            let fam = root_family(&x, ray).unwrap();
            let gens =
                cones::facet_group_generators(x.sigma_dual(), x.v_rho(ray)).unwrap();
            for r in enumerate_s_rho(&x, ray, &int(4)).unwrap() {
                for g in &gens {
                    assert!(fam.contains(&(&r.weight + g)));
                }
            }
        }
    }
}
