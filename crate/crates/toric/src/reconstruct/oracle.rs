//! Queryable root-data bijections. The reconstruction never trusts an
//! oracle: every answer is validated against the family structure on
//! arrival, and the induced core oracle cross-checks well-definedness on
//! two lifts per query.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::degeneration::ReducedDatum;
use crate::error::{Error, Result};
use crate::linalg::{IntegerMatrix, LatticeVector};
use crate::roots::{DemazureRoot, ToricDatum};

/// A bijection between the root data of two declared data, answered one
/// root at a time. `ray_map` is the claimed family correspondence.
pub trait UpsilonOracle: Sync {
    fn source(&self) -> &ToricDatum;
    fn target(&self) -> &ToricDatum;
    fn ray_map(&self, ray: usize) -> usize;
    fn raw_query(&self, root: &DemazureRoot) -> Result<DemazureRoot>;
    fn raw_inverse(&self, root: &DemazureRoot) -> Result<DemazureRoot>;
}

/// Forward query with the per-answer contract enforced: the answer must be
/// a root of the declared family, and the inverse must return the query.
pub fn checked_query(oracle: &dyn UpsilonOracle, root: &DemazureRoot) -> Result<DemazureRoot> {
    let answer = oracle.raw_query(root)?;
    let expected_ray = oracle.ray_map(root.ray);
    let answer = oracle
        .target()
        .checked_root(expected_ray, answer.weight)
        .map_err(|_| {
            Error::invalid_upsilon(
                "query",
                format!("image of {root:?} is not a root of family {expected_ray}"),
            )
        })?;
    let back = oracle.raw_inverse(&answer)?;
    if back != *root {
        return Err(Error::invalid_upsilon(
            "query",
            format!("inverse of image of {root:?} returned {back:?}"),
        ));
    }
    Ok(answer)
}

pub fn checked_inverse(oracle: &dyn UpsilonOracle, root: &DemazureRoot) -> Result<DemazureRoot> {
    let answer = oracle.raw_inverse(root)?;
    let answer_ray = answer.ray;
    let answer = oracle
        .source()
        .checked_root(answer_ray, answer.weight)
        .map_err(|_| {
            Error::invalid_upsilon(
                "inverse",
                format!("preimage of {root:?} is not a root of the source"),
            )
        })?;
    if oracle.ray_map(answer.ray) != root.ray {
        return Err(Error::invalid_upsilon(
            "inverse",
            format!("preimage of {root:?} lies in the wrong family"),
        ));
    }
    let fwd = oracle.raw_query(&answer)?;
    if fwd != *root {
        return Err(Error::invalid_upsilon(
            "inverse",
            format!("image of preimage of {root:?} returned {fwd:?}"),
        ));
    }
    Ok(answer)
}

/// The datum obtained by pushing a datum through a unimodular character
/// map: the dual cone is mapped by the matrix, the rays by the inverse
/// transpose.
pub fn image_datum(source: &ToricDatum, matrix: &IntegerMatrix) -> Result<ToricDatum> {
    if !matrix.is_unimodular() {
        return Err(Error::Schema("hidden map must be unimodular".into()));
    }
    let inv_t = matrix.inverse_unimodular()?.transpose();
    let rays: Vec<LatticeVector> = source.rays().iter().map(|v| inv_t.apply(v)).collect();
    ToricDatum::new(source.rank(), &rays)
}

/// The restriction of a unimodular map to the root data; the ground truth
/// oracle used by the harness.
pub struct LinearUpsilon {
    source: ToricDatum,
    target: ToricDatum,
    matrix: IntegerMatrix,
    inverse: IntegerMatrix,
    ray_map: Vec<usize>,
}

impl LinearUpsilon {
    pub fn new(source: ToricDatum, target: ToricDatum, matrix: IntegerMatrix) -> Result<Self> {
        if !matrix.is_unimodular() {
            return Err(Error::Schema("oracle matrix must be unimodular".into()));
        }
        let inverse = matrix.inverse_unimodular()?;
        let inv_t = inverse.transpose();
        let mut ray_map = Vec::with_capacity(source.ray_count());
        for v in source.rays() {
            let image = inv_t.apply(v);
            let pos = target
                .rays()
                .iter()
                .position(|w| w == &image)
                .ok_or_else(|| {
                    Error::Schema(format!(
                        "matrix does not map the source cone onto the target cone (ray {v})"
                    ))
                })?;
            ray_map.push(pos);
        }
        Ok(LinearUpsilon {
            source,
            target,
            matrix,
            inverse,
            ray_map,
        })
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }
}

impl UpsilonOracle for LinearUpsilon {
    fn source(&self) -> &ToricDatum {
        &self.source
    }

    fn target(&self) -> &ToricDatum {
        &self.target
    }

    fn ray_map(&self, ray: usize) -> usize {
        self.ray_map[ray]
    }

    fn raw_query(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        let weight = self.matrix.apply(&root.weight);
        self.target
            .root(weight)
            .map_err(|e| Error::Internal(format!("linear oracle produced a non-root: {e}")))
    }

    fn raw_inverse(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        let weight = self.inverse.apply(&root.weight);
        self.source
            .root(weight)
            .map_err(|e| Error::Internal(format!("linear oracle inverse produced a non-root: {e}")))
    }
}

/// A finite table of pairs; queries off the table are input errors.
pub struct TableUpsilon {
    source: ToricDatum,
    target: ToricDatum,
    ray_map: Vec<usize>,
    forward: BTreeMap<LatticeVector, DemazureRoot>,
    backward: BTreeMap<LatticeVector, DemazureRoot>,
}

impl TableUpsilon {
    pub fn new(
        source: ToricDatum,
        target: ToricDatum,
        ray_map: Vec<usize>,
        pairs: Vec<(LatticeVector, LatticeVector)>,
    ) -> Result<Self> {
        if ray_map.len() != source.ray_count() {
            return Err(Error::Schema("ray map length mismatch".into()));
        }
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for (from, to) in pairs {
            let from_root = source.root(from)?;
            let to_root = target.root(to)?;
            if forward
                .insert(from_root.weight.clone(), to_root.clone())
                .is_some()
            {
                return Err(Error::Schema(format!(
                    "duplicate table entry for {}",
                    from_root.weight
                )));
            }
            if backward
                .insert(to_root.weight.clone(), from_root.clone())
                .is_some()
            {
                return Err(Error::Schema(format!(
                    "table image {} listed twice",
                    to_root.weight
                )));
            }
        }
        Ok(TableUpsilon {
            source,
            target,
            ray_map,
            forward,
            backward,
        })
    }
}

impl UpsilonOracle for TableUpsilon {
    fn source(&self) -> &ToricDatum {
        &self.source
    }

    fn target(&self) -> &ToricDatum {
        &self.target
    }

    fn ray_map(&self, ray: usize) -> usize {
        self.ray_map[ray]
    }

    fn raw_query(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        self.forward
            .get(&root.weight)
            .cloned()
            .ok_or_else(|| Error::OutsideTable(root.weight.clone()))
    }

    fn raw_inverse(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        self.backward
            .get(&root.weight)
            .cloned()
            .ok_or_else(|| Error::OutsideTable(root.weight.clone()))
    }
}

/// Wraps an oracle and swaps the answers of two chosen roots: the standard
/// single-swap corruption for the mutation harness. The result is still a
/// bijection, so only the structural properties can betray it.
pub struct MutatedUpsilon<'a> {
    pub inner: &'a dyn UpsilonOracle,
    pub a: DemazureRoot,
    pub b: DemazureRoot,
}

impl<'a> MutatedUpsilon<'a> {
    fn swap(&self, root: &DemazureRoot) -> DemazureRoot {
        if *root == self.a {
            self.b.clone()
        } else if *root == self.b {
            self.a.clone()
        } else {
            root.clone()
        }
    }
}

impl<'a> UpsilonOracle for MutatedUpsilon<'a> {
    fn source(&self) -> &ToricDatum {
        self.inner.source()
    }

    fn target(&self) -> &ToricDatum {
        self.inner.target()
    }

    fn ray_map(&self, ray: usize) -> usize {
        self.inner.ray_map(ray)
    }

    fn raw_query(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        self.inner.raw_query(&self.swap(root))
    }

    fn raw_inverse(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        Ok(self.swap(&self.inner.raw_inverse(root)?))
    }
}

/// The oracle induced on the non-degenerate cores: queries lift along the
/// complement, pass through the inner oracle, and project. Every forward
/// query is answered twice (two different lifts) when there is a torus
/// factor; disagreement is a property-III violation with a witness.
pub struct ReducedUpsilon<'a> {
    inner: &'a dyn UpsilonOracle,
    rd: &'a ReducedDatum,
    rd_target: &'a ReducedDatum,
    cache: Mutex<BTreeMap<LatticeVector, DemazureRoot>>,
    cache_back: Mutex<BTreeMap<LatticeVector, DemazureRoot>>,
}

impl<'a> ReducedUpsilon<'a> {
    pub fn new(
        inner: &'a dyn UpsilonOracle,
        rd: &'a ReducedDatum,
        rd_target: &'a ReducedDatum,
    ) -> Self {
        ReducedUpsilon {
            inner,
            rd,
            rd_target,
            cache: Mutex::new(BTreeMap::new()),
            cache_back: Mutex::new(BTreeMap::new()),
        }
    }

    fn transport(
        &self,
        root: &DemazureRoot,
        forward: bool,
    ) -> Result<DemazureRoot> {
        let (from_rd, to_rd) = if forward {
            (self.rd, self.rd_target)
        } else {
            (self.rd_target, self.rd)
        };
        let (from_full, to_full) = if forward {
            (self.inner.source(), self.inner.target())
        } else {
            (self.inner.target(), self.inner.source())
        };
        let ask = |r: &DemazureRoot| -> Result<DemazureRoot> {
            if forward {
                checked_query(self.inner, r)
            } else {
                checked_inverse(self.inner, r)
            }
        };
        let lift = from_rd.lift_root(from_full, root)?;
        let image = ask(&lift)?;
        let projected = to_rd.project_root(to_full, &image)?;
        if from_rd.s > 0 {
            // Second lift along the first torus basis vector.
            let shifted = from_full.checked_root(
                lift.ray,
                &lift.weight + &from_rd.split.m_x_basis[0],
            )?;
            let image2 = ask(&shifted)?;
            let projected2 = to_rd.project_root(to_full, &image2)?;
            if projected2 != projected {
                return Err(Error::invalid_upsilon(
                    "induce",
                    format!(
                        "coset structure violated: lifts {:?} and {:?} of {root:?} project to {projected:?} and {projected2:?}",
                        lift, shifted
                    ),
                ));
            }
        }
        Ok(projected)
    }
}

impl<'a> UpsilonOracle for ReducedUpsilon<'a> {
    fn source(&self) -> &ToricDatum {
        &self.rd.x0
    }

    fn target(&self) -> &ToricDatum {
        &self.rd_target.x0
    }

    fn ray_map(&self, ray: usize) -> usize {
        let ambient = self.rd.core_to_ray[ray];
        self.rd_target.ray_to_core[self.inner.ray_map(ambient)]
    }

    fn raw_query(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        if let Some(hit) = self.cache.lock().unwrap().get(&root.weight) {
            return Ok(hit.clone());
        }
        let answer = self.transport(root, true)?;
        self.cache
            .lock()
            .unwrap()
            .insert(root.weight.clone(), answer.clone());
        Ok(answer)
    }

    fn raw_inverse(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        if let Some(hit) = self.cache_back.lock().unwrap().get(&root.weight) {
            return Ok(hit.clone());
        }
        let answer = self.transport(root, false)?;
        self.cache_back
            .lock()
            .unwrap()
            .insert(root.weight.clone(), answer.clone());
        Ok(answer)
    }
}

/// Records every raw query passing through it, for reproducibility of a
/// pipeline run.
pub struct Recorder<'a> {
    inner: &'a dyn UpsilonOracle,
    log: Mutex<Vec<(DemazureRoot, DemazureRoot)>>,
}

impl<'a> Recorder<'a> {
    pub fn new(inner: &'a dyn UpsilonOracle) -> Self {
        Recorder {
            inner,
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn transcript(&self) -> Vec<(DemazureRoot, DemazureRoot)> {
        self.log.lock().unwrap().clone()
    }
}

impl<'a> UpsilonOracle for Recorder<'a> {
    fn source(&self) -> &ToricDatum {
        self.inner.source()
    }

    fn target(&self) -> &ToricDatum {
        self.inner.target()
    }

    fn ray_map(&self, ray: usize) -> usize {
        self.inner.ray_map(ray)
    }

    fn raw_query(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        let answer = self.inner.raw_query(root)?;
        self.log.lock().unwrap().push((root.clone(), answer.clone()));
        Ok(answer)
    }

    fn raw_inverse(&self, root: &DemazureRoot) -> Result<DemazureRoot> {
        let answer = self.inner.raw_inverse(root)?;
        self.log.lock().unwrap().push((answer.clone(), root.clone()));
        Ok(answer)
    }
}
