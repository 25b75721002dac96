//! Reconstruction of a lattice isomorphism from an abstract root-data
//! bijection, plus the brute-force oracle it is checked against.

mod brute;
mod oracle;
mod pipeline;
mod validate;

pub use brute::brute_force_iso;
pub use oracle::{
    checked_inverse, checked_query, image_datum, LinearUpsilon, MutatedUpsilon, Recorder,
    ReducedUpsilon, TableUpsilon, UpsilonOracle,
};
pub use pipeline::{calibrate, glue_and_extend, psi_rho, Calibration, ReconstructionOutcome};
pub use validate::{validate_upsilon, ValidationReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Int, IntegerMatrix, LatticeVector};
use crate::roots::ToricDatum;

/// An integer matrix acting on characters, M -> M'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearLatticeMap {
    pub matrix: IntegerMatrix,
}

impl LinearLatticeMap {
    pub fn identity(n: usize) -> Self {
        LinearLatticeMap { matrix: IntegerMatrix::identity(n) }
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        self.matrix.apply(v)
    }

    pub fn is_unimodular(&self) -> bool {
        self.matrix.is_unimodular()
    }
}

/// Combinatorial test for a toric isomorphism: the map must be unimodular
/// and carry the dual cone of the source exactly onto that of the target.
pub fn verify_toric_iso(
    psi: &LinearLatticeMap,
    source: &ToricDatum,
    target: &ToricDatum,
) -> Result<bool> {
    if source.rank() != target.rank() {
        return Err(Error::RankMismatch { left: source.rank(), right: target.rank() });
    }
    if psi.matrix.rows != source.rank() || psi.matrix.cols != source.rank() {
        return Err(Error::RankMismatch { left: psi.matrix.rows, right: source.rank() });
    }
    if !psi.is_unimodular() {
        return Ok(false);
    }
    let gens: Vec<LatticeVector> = source
        .sigma_dual()
        .generator_list()
        .iter()
        .map(|g| psi.apply(g))
        .collect();
    let image = crate::cones::RationalCone::from_rays(source.rank(), &gens)?;
    Ok(&image == target.sigma_dual())
}

fn to_i64(v: &Int) -> i64 {
    i64::try_from(v).unwrap_or(if v.sign() == num_bigint::Sign::Minus {
        i64::MIN
    } else {
        i64::MAX
    })
}

pub(crate) fn vec_i64(v: &LatticeVector) -> Vec<i64> {
    v.0.iter().map(to_i64).collect()
}

pub(crate) fn matrix_i64(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| to_i64(&m[(i, j)])).collect())
        .collect()
}

/// A machine-readable witness: a short tag, a sentence, and the lattice
/// data involved as integer arrays.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub kind: String,
    pub detail: String,
    pub vectors: Vec<Vec<i64>>,
}

impl Witness {
    pub fn new(kind: &str, detail: impl Into<String>) -> Self {
        Witness { kind: kind.into(), detail: detail.into(), vectors: Vec::new() }
    }

    pub fn with_vectors(mut self, vectors: Vec<Vec<i64>>) -> Self {
        self.vectors = vectors;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageOutcome {
    pub stage: String,
    pub passed: bool,
    pub witness: Option<Witness>,
}

/// Per-stage record of a reconstruction run, with the full query
/// transcript and the assembled matrix when the run succeeds.
#[derive(Clone, Debug, Serialize, Default)]
pub struct ReconstructionReport {
    pub stages: Vec<StageOutcome>,
    pub transcript: Vec<(Vec<i64>, Vec<i64>)>,
    pub psi: Option<Vec<Vec<i64>>>,
}

impl ReconstructionReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub(crate) fn pass(&mut self, stage: &str) {
        self.stages.push(StageOutcome { stage: stage.into(), passed: true, witness: None });
    }

    pub(crate) fn fail(&mut self, stage: &str, witness: Witness) {
        self.stages.push(StageOutcome { stage: stage.into(), passed: false, witness: Some(witness) });
    }
}
