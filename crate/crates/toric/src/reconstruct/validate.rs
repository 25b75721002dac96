//! Structural validation of an oracle against the three bijection
//! properties, on a box truncation. Finite data can only sample the
//! properties; the report records witnesses for every violation found.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::oracle::UpsilonOracle;
use super::{vec_i64, Witness};
use crate::degeneration::compute_m_x;
use crate::error::{Error, Result};
use crate::linalg::{
    hermite_normal_form, Int, IntegerMatrix, LatticeVector, RationalMatrix,
};
use crate::roots::{enumerate_roots, DemazureRoot};

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    pub roots_checked: usize,
    pub det_tuples_checked: usize,
    pub coset_shifts_checked: usize,
    /// Box-asymmetry information: target-box roots whose preimage fell
    /// outside the source box. Reported, not failed.
    pub coverage_gaps: usize,
}

/// Checks property I on every root in the box, property II on the
/// deterministic coverage tuples plus `sample_size` seeded random tuples,
/// and property III on sampled torus-coset shifts.
pub fn validate_upsilon(
    oracle: &dyn UpsilonOracle,
    bound: &Int,
    sample_size: usize,
    seed: u64,
) -> Result<ValidationReport> {
    let source = oracle.source();
    let target = oracle.target();
    let n = source.rank();
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut coverage_gaps = 0usize;

    if source.ray_count() != target.ray_count() {
        witnesses.push(Witness::new(
            "family-count",
            format!(
                "source has {} families, target has {}",
                source.ray_count(),
                target.ray_count()
            ),
        ));
    }

    let roots = enumerate_roots(source, bound)?;
    let mut seen: BTreeMap<LatticeVector, LatticeVector> = BTreeMap::new();
    let mut usable: Vec<(DemazureRoot, DemazureRoot)> = Vec::new();

    for r in &roots {
        let y = match oracle.raw_query(r) {
            Ok(y) => y,
            Err(Error::OutsideTable(_)) => {
                coverage_gaps += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        // Property I: the image must be a root of the declared family.
        match target.checked_root(oracle.ray_map(r.ray), y.weight.clone()) {
            Ok(checked) => {
                // Bijection sanity on the answered pair.
                match oracle.raw_inverse(&checked) {
                    Ok(back) if back == *r => {}
                    Ok(back) => witnesses.push(
                        Witness::new(
                            "inverse-mismatch",
                            "inverse of the image differs from the query",
                        )
                        .with_vectors(vec![
                            vec_i64(&r.weight),
                            vec_i64(&checked.weight),
                            vec_i64(&back.weight),
                        ]),
                    ),
                    Err(Error::OutsideTable(_)) => coverage_gaps += 1,
                    Err(e) => return Err(e),
                }
                if let Some(prev) = seen.insert(checked.weight.clone(), r.weight.clone()) {
                    witnesses.push(
                        Witness::new("collision", "two roots share an image")
                            .with_vectors(vec![
                                vec_i64(&prev),
                                vec_i64(&r.weight),
                                vec_i64(&checked.weight),
                            ]),
                    );
                }
                usable.push((r.clone(), checked));
            }
            Err(_) => witnesses.push(
                Witness::new(
                    "family-violation",
                    format!(
                        "image of a family-{} root is not a root of family {}",
                        r.ray,
                        oracle.ray_map(r.ray)
                    ),
                )
                .with_vectors(vec![vec_i64(&r.weight), vec_i64(&y.weight)]),
            ),
        }
    }

    // Box-asymmetry statistics from the target side.
    for r in enumerate_roots(target, bound)? {
        match oracle.raw_inverse(&r) {
            Ok(x) => {
                if x.weight.max_abs() > *bound {
                    coverage_gaps += 1;
                }
            }
            Err(Error::OutsideTable(_)) => coverage_gaps += 1,
            Err(e) => return Err(e),
        }
    }

    // Property II on determinants of n-tuples.
    let mut det_tuples = 0usize;
    let mut check_tuple = |tuple: &[usize], witnesses: &mut Vec<Witness>| -> Result<()> {
        let cols: Vec<LatticeVector> = tuple
            .iter()
            .map(|&i| usable[i].0.weight.clone())
            .collect();
        let imgs: Vec<LatticeVector> = tuple
            .iter()
            .map(|&i| usable[i].1.weight.clone())
            .collect();
        let d = IntegerMatrix::from_columns(&cols).determinant()?.abs();
        let d_img = IntegerMatrix::from_columns(&imgs).determinant()?.abs();
        if d != d_img {
            let mut vectors: Vec<Vec<i64>> = cols.iter().map(vec_i64).collect();
            vectors.extend(imgs.iter().map(vec_i64));
            witnesses.push(
                Witness::new(
                    "determinant-mismatch",
                    format!("|det| changed from {d} to {d_img} across the bijection"),
                )
                .with_vectors(vectors),
            );
        }
        Ok(())
    };

    if usable.len() >= n && n > 0 {
        // Deterministic coverage: every root appears in a preferably
        // independent tuple, so a corrupted single answer is exercised.
        for k in 0..usable.len() {
            let mut tuple = vec![k];
            let mut chosen = vec![usable[k].0.weight.clone()];
            for j in 0..usable.len() {
                if tuple.len() == n {
                    break;
                }
                if j == k {
                    continue;
                }
                let mut candidate = chosen.clone();
                candidate.push(usable[j].0.weight.clone());
                if RationalMatrix::from_int(&IntegerMatrix::from_columns(&candidate)).rank()
                    == candidate.len()
                {
                    chosen = candidate;
                    tuple.push(j);
                }
            }
            // Fall back to arbitrary companions when the box is too thin.
            let mut j = 0;
            while tuple.len() < n {
                if !tuple.contains(&j) {
                    tuple.push(j);
                }
                j += 1;
                if j >= usable.len() {
                    break;
                }
            }
            if tuple.len() == n {
                det_tuples += 1;
                check_tuple(&tuple, &mut witnesses)?;
            }
        }
        // Seeded random tuples.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sample_size {
            let tuple: Vec<usize> = (0..n).map(|_| rng.gen_range(0..usable.len())).collect();
            det_tuples += 1;
            check_tuple(&tuple, &mut witnesses)?;
        }
    }

    // Property III: torus rank equality and coset coherence on samples.
    let mut coset_shifts = 0usize;
    let m_x = compute_m_x(source)?;
    let m_x_target = compute_m_x(target)?;
    if m_x.len() != m_x_target.len() {
        witnesses.push(Witness::new(
            "torus-rank",
            format!(
                "source torus rank {} differs from target {}",
                m_x.len(),
                m_x_target.len()
            ),
        ));
    } else if !m_x.is_empty() {
        let target_hnf = hermite_normal_form(&IntegerMatrix::from_columns(&m_x_target));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c05e);
        let picks = sample_size.min(usable.len());
        for _ in 0..picks {
            let (r, y) = &usable[rng.gen_range(0..usable.len())];
            for k in &m_x {
                let shifted = source
                    .checked_root(r.ray, &r.weight + k)
                    .expect("families are invariant under torus shifts");
                let y2 = match oracle.raw_query(&shifted) {
                    Ok(y2) => y2,
                    Err(Error::OutsideTable(_)) => {
                        coverage_gaps += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                coset_shifts += 1;
                let diff = &y2.weight - &y.weight;
                if diff.is_zero() || !target_hnf.contains(&diff) {
                    witnesses.push(
                        Witness::new(
                            "coset-violation",
                            "torus shift image collides or leaves the image coset",
                        )
                        .with_vectors(vec![
                            vec_i64(&r.weight),
                            vec_i64(k),
                            vec_i64(&y.weight),
                            vec_i64(&y2.weight),
                        ]),
                    );
                }
            }
        }
    }

    Ok(ValidationReport {
        passed: witnesses.is_empty(),
        witnesses,
        roots_checked: roots.len(),
        det_tuples_checked: det_tuples,
        coset_shifts_checked: coset_shifts,
        coverage_gaps,
    })
}
