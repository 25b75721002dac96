//! Double description: converts a homogeneous inequality system into a
//! minimal generator description (lineality basis plus extremal rays).
//!
//! Inequalities are processed one at a time. While a lineality vector still
//! pairs nonzero with the incoming normal, a lineality-reduction step is
//! taken; afterwards the usual positive/negative ray combination step runs,
//! with the combinatorial adjacency test keeping only extremal rays.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Int, LatticeVector};

const RANK_GUARD: usize = 8;

/// Minimal generator description of {x : <h, x> >= 0 for all h}.
#[derive(Clone, Debug)]
pub struct Generators {
    pub lineality: Vec<LatticeVector>,
    pub rays: Vec<LatticeVector>,
}

struct Ray {
    v: LatticeVector,
    active: Vec<u64>, // bitset over processed inequality indices
}

fn bitset_len(n: usize) -> usize {
    n.div_ceil(64)
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn and_sets(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub fn generators_from_inequalities(
    rank: usize,
    normals: &[LatticeVector],
) -> Result<Generators> {
    if rank > RANK_GUARD {
        return Err(Error::RankGuard(rank));
    }
    let mut normals: Vec<LatticeVector> = normals
        .iter()
        .filter(|h| !h.is_zero())
        .map(|h| h.primitive().expect("nonzero normal"))
        .collect();
    normals.sort();
    normals.dedup();
    let words = bitset_len(normals.len());

    let mut lineality: Vec<LatticeVector> =
        (0..rank).map(|i| LatticeVector::unit(rank, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (step, h) in normals.iter().enumerate() {
        let pairings: Vec<Int> = lineality.iter().map(|l| h.dot(l)).collect();
        if let Some(k) = pairings.iter().position(|p| !p.is_zero()) {
            // Lineality reduction: split off one generator along h.
            let mut pivot = lineality.remove(k);
            let mut pp = pairings[k].clone();
            if pp.is_negative() {
                pivot = -&pivot;
                pp = -pp;
            }
            for l in lineality.iter_mut() {
                let pl = h.dot(l);
                if !pl.is_zero() {
                    *l = (&l.scaled(&pp) - &pivot.scaled(&pl))
                        .primitive()
                        .expect("lineality combination is nonzero");
                }
            }
            for r in rays.iter_mut() {
                let pr = h.dot(&r.v);
                if !pr.is_zero() {
                    r.v = (&r.v.scaled(&pp) - &pivot.scaled(&pr))
                        .primitive()
                        .expect("adjusted ray is nonzero");
                }
            }
            rays.push(Ray {
                v: pivot,
                active: vec![0; words],
            });
        } else {
            // h vanishes on the lineality space; split the rays.
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut zero = Vec::new();
            for r in rays.drain(..) {
                let p = h.dot(&r.v);
                if p.is_zero() {
                    zero.push(r);
                } else if p.is_positive() {
                    pos.push(r);
                } else {
                    neg.push(r);
                }
            }
            let mut combos: Vec<Ray> = Vec::new();
            for rp in &pos {
                for rn in &neg {
                    let meet = and_sets(&rp.active, &rn.active);
                    let adjacent = pos
                        .iter()
                        .chain(neg.iter())
                        .chain(zero.iter())
                        .all(|other| {
                            std::ptr::eq(other, rp)
                                || std::ptr::eq(other, rn)
                                || !is_subset(&meet, &other.active)
                        });
                    if !adjacent {
                        continue;
                    }
                    let (a, b) = (h.dot(&rp.v), -h.dot(&rn.v));
                    let v = (&rn.v.scaled(&a) + &rp.v.scaled(&b))
                        .primitive()
                        .expect("combined ray is nonzero");
                    combos.push(Ray {
                        v,
                        active: vec![0; words],
                    });
                }
            }
            rays = pos;
            rays.extend(zero);
            rays.extend(combos);
        }
        // Recompute exact active sets against every processed normal.
        for r in rays.iter_mut() {
            let mut bits = vec![0u64; words];
            for (j, hj) in normals[..=step].iter().enumerate() {
                if hj.dot(&r.v).is_zero() {
                    set_bit(&mut bits, j);
                }
            }
            r.active = bits;
        }
    }

    let mut out_rays: Vec<LatticeVector> = rays.into_iter().map(|r| r.v).collect();
    out_rays.sort();
    out_rays.dedup();
    Ok(Generators {
        lineality,
        rays: out_rays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    #[test]
    fn orthant_from_inequalities() {
        let g = generators_from_inequalities(2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn halfplane_keeps_lineality() {
        let g = generators_from_inequalities(2, &[lv(&[1, 0])]).unwrap();
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays, vec![lv(&[1, 0])]);
    }

    #[test]
    fn no_constraints_is_everything() {
        let g = generators_from_inequalities(3, &[]).unwrap();
        assert_eq!(g.lineality.len(), 3);
        assert!(g.rays.is_empty());
    }

    #[test]
    fn opposite_halfspaces_give_hyperplane() {
        let g = generators_from_inequalities(2, &[lv(&[1, 0]), lv(&[-1, 0])]).unwrap();
        assert_eq!(g.lineality.len(), 1);
        assert!(g.rays.is_empty());
        assert!(g.lineality[0].dot(&lv(&[1, 0])).is_zero());
    }

    #[test]
    fn simplicial_three_dim() {
        let g = generators_from_inequalities(
            3,
            &[lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])],
        )
        .unwrap();
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 3);
    }

    #[test]
    fn redundant_inequality_is_harmless() {
        let g = generators_from_inequalities(
            2,
            &[lv(&[1, 0]), lv(&[0, 1]), lv(&[1, 1])],
        )
        .unwrap();
        assert_eq!(g.rays, vec![lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn non_simplicial_cross_section() {
        // x3 >= |x1| + |x2| style cone: four facets, four extremal rays.
        let g = generators_from_inequalities(
            3,
            &[
                lv(&[1, 0, 1]),
                lv(&[-1, 0, 1]),
                lv(&[0, 1, 1]),
                lv(&[0, -1, 1]),
            ],
        )
        .unwrap();
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert!(!r.0[2].is_negative());
        }
    }

    #[test]
    fn rank_guard() {
        assert!(matches!(
            generators_from_inequalities(9, &[]),
            Err(Error::RankGuard(9))
        ));
    }
}
