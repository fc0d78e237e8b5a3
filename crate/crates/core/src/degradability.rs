//! Degradability of state sets and measurements, and stochastic pre/postprocessing.
//!
//! A set is degradable when a proper subset keeps its encoding power; a measurement
//! is degradable when merging outcomes keeps its decoding power. Stochastic
//! processings never increase either quantity, so the deterministic searches here
//! (subsets, merges) decide the general notion as well.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrimination::mu_max_of_states;
use crate::error::{Error, Result};
use crate::gpt::{hull_coefficients, Effect, Measurement, StateEnsemble, StateSpace};
use crate::settings::{Settings, Tolerances};

/// Which sufficient condition settled a set verdict without a subset search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precheck {
    /// More states than `dim(aff(S)) + 1`.
    TooManyStates,
    /// Some state is a mixture of the others.
    NotExtreme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DegradingWitness {
    /// Indices into the ensemble of a proper subset with the same encoding power.
    Subset(Vec<usize>),
    /// Outcome blocks whose merge keeps the decoding power.
    Partition(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradabilityVerdict {
    pub degradable: bool,
    pub witness: Option<DegradingWitness>,
    pub precheck: Option<Precheck>,
    /// `μ_max(X)`, when computed.
    pub encoding_power: Option<f64>,
    /// `μ_max(X) - max_Y μ_max(Y)` over subsets one smaller, when the exhaustive
    /// search ran; values near the comparison tolerance deserve a second look.
    pub margin: Option<f64>,
}

/// Exhaustive verdict for a finite state set.
///
/// Prechecks run first; otherwise subsets are scanned by decreasing size (each size
/// in lexicographic order) and the lexicographically first subset of the smallest
/// preserving size is returned.
pub fn is_degradable_set(
    space: &StateSpace,
    ensemble: &StateEnsemble,
    settings: &Settings,
) -> Result<DegradabilityVerdict> {
    let n = ensemble.len();
    if n > settings.caps.max_ensemble {
        return Err(Error::capacity(format!(
            "ensemble of {n} states exceeds the degradability cap {}",
            settings.caps.max_ensemble
        )));
    }
    if n == 0 {
        return Err(Error::input("empty ensemble"));
    }
    let tol = &settings.tol;
    if n == 1 {
        return Ok(DegradabilityVerdict {
            degradable: false,
            witness: None,
            precheck: None,
            encoding_power: Some(1.0),
            margin: None,
        });
    }

    if n > space.affine_dimension(tol) + 1 {
        return Ok(DegradabilityVerdict {
            degradable: true,
            witness: None,
            precheck: Some(Precheck::TooManyStates),
            encoding_power: None,
            margin: None,
        });
    }

    if let Some(ext) = extreme_subset(ensemble.states(), space.ambient_dim(), tol)? {
        return Ok(DegradabilityVerdict {
            degradable: true,
            witness: Some(DegradingWitness::Subset(ext)),
            precheck: Some(Precheck::NotExtreme),
            encoding_power: None,
            margin: None,
        });
    }

    let states = ensemble.states();
    let full = mu_max_of_states(space, states, settings)?.value;
    let mut witness: Option<Vec<usize>> = None;
    let mut margin = None;
    for k in (1..n).rev() {
        let combos: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let values = combos
            .par_iter()
            .map(|c| {
                let sub: Vec<Vec<f64>> = c.iter().map(|&i| states[i].clone()).collect();
                mu_max_of_states(space, &sub, settings).map(|r| r.value)
            })
            .collect::<Result<Vec<f64>>>()?;
        if k == n - 1 {
            let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            margin = Some(full - best);
        }
        let hit = combos
            .iter()
            .zip(&values)
            .find(|(_, v)| (full - **v).abs() <= tol.cmp);
        match hit {
            Some((c, _)) => witness = Some(c.clone()),
            // μ_max is monotone under inclusion: nothing smaller can hit either.
            None => break,
        }
    }
    Ok(DegradabilityVerdict {
        degradable: witness.is_some(),
        witness: witness.map(DegradingWitness::Subset),
        precheck: None,
        encoding_power: Some(full),
        margin,
    })
}

/// Indices of `ext(conv(X))` (one representative per repeated point) when that is a
/// proper subset of `X`; `None` when every state is extreme.
fn extreme_subset(states: &[Vec<f64>], dim: usize, tol: &Tolerances) -> Result<Option<Vec<usize>>> {
    let mut keep: Vec<usize> = (0..states.len()).collect();
    let mut removed = false;
    let mut i = 0;
    while i < keep.len() {
        let target = keep[i];
        let others: Vec<&[f64]> = keep
            .iter()
            .filter(|&&j| j != target)
            .map(|&j| states[j].as_slice())
            .collect();
        if hull_coefficients(&others, &states[target], dim, tol)?.is_some() {
            keep.remove(i);
            removed = true;
        } else {
            i += 1;
        }
    }
    Ok(removed.then_some(keep))
}

/// Merge outcomes block-wise: `B_j = Σ_{i ∈ block j} A_i`.
pub fn merge_measurement(
    measurement: &Measurement,
    partition: &[Vec<usize>],
) -> Result<Measurement> {
    let n = measurement.len();
    let mut seen = vec![false; n];
    for block in partition {
        if block.is_empty() {
            return Err(Error::input("partition contains an empty block"));
        }
        for &i in block {
            if i >= n {
                return Err(Error::input(format!("outcome {i} out of range 0..{n}")));
            }
            if seen[i] {
                return Err(Error::input(format!("outcome {i} appears in two blocks")));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::input(format!(
            "outcome {i} is not covered by the partition"
        )));
    }
    let dim = measurement.effects()[0].0.len();
    let effects = partition
        .iter()
        .map(|block| {
            block.iter().fold(Effect::zero(dim), |acc, &i| {
                acc.add(&measurement.effects()[i])
            })
        })
        .collect();
    Ok(Measurement::from_effects_unchecked(effects))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementVerdict {
    pub nondegradable: bool,
    /// Maximiser vertex indices of each effect.
    pub faces: Vec<Vec<usize>>,
    /// First pair of outcomes with intersecting maximiser faces.
    pub overlap: Option<(usize, usize)>,
}

impl MeasurementVerdict {
    /// Merge that keeps the decoding power, when the measurement is degradable.
    pub fn merge_witness(&self) -> Option<Vec<Vec<usize>>> {
        let (a, b) = self.overlap?;
        let n = self.faces.len();
        let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(n - 1);
        for i in 0..n {
            if i == a {
                blocks.push(vec![a, b]);
            } else if i != b {
                blocks.push(vec![i]);
            }
        }
        Some(blocks)
    }
}

/// A measurement is nondegradable iff the maximiser faces of its effects are
/// pairwise disjoint. Faces of a polytope meet in a face spanned by their common
/// vertices, so vertex-index sets suffice.
pub fn is_nondegradable_measurement(
    space: &StateSpace,
    measurement: &Measurement,
    tol: &Tolerances,
) -> Result<MeasurementVerdict> {
    for e in measurement.effects() {
        space.check_vector(&e.0, "effect")?;
    }
    let faces: Vec<Vec<usize>> = measurement
        .effects()
        .iter()
        .map(|e| space.maximizer_face(e, tol))
        .collect();
    let mut overlap = None;
    'outer: for a in 0..faces.len() {
        for b in a + 1..faces.len() {
            if faces[a].iter().any(|v| faces[b].contains(v)) {
                overlap = Some((a, b));
                break 'outer;
            }
        }
    }
    Ok(MeasurementVerdict {
        nondegradable: overlap.is_none(),
        faces,
        overlap,
    })
}

/// Row-stochastic matrix: nonnegative entries, each row summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticMatrix {
    entries: Vec<Vec<f64>>,
    cols: usize,
}

impl StochasticMatrix {
    pub fn new(entries: Vec<Vec<f64>>, tol: &Tolerances) -> Result<Self> {
        let cols = entries.first().map(Vec::len).unwrap_or(0);
        if entries.is_empty() || cols == 0 {
            return Err(Error::input("stochastic matrix must be nonempty"));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::input(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if row.iter().any(|x| *x < -tol.feas || !x.is_finite()) {
                return Err(Error::input(format!("row {i} has a negative entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol.feas {
                return Err(Error::input(format!("row {i} sums to {sum}")));
            }
        }
        Ok(StochasticMatrix { entries, cols })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        StochasticMatrix { entries, cols: n }
    }

    /// 0/1 matrix sending outcome `i` to the block containing it.
    pub fn from_partition(n: usize, partition: &[Vec<usize>]) -> Result<Self> {
        let mut entries = vec![vec![0.0; partition.len()]; n];
        let mut seen = vec![false; n];
        for (j, block) in partition.iter().enumerate() {
            for &i in block {
                if i >= n || seen[i] {
                    return Err(Error::input("invalid partition"));
                }
                seen[i] = true;
                entries[i][j] = 1.0;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::input("partition does not cover every outcome"));
        }
        Ok(StochasticMatrix {
            entries,
            cols: partition.len(),
        })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }
}

/// `t_j = Σ_i C_{ji} s_i`: each output state is a mixture of the inputs.
pub fn preprocess_states(
    space: &StateSpace,
    ensemble: &StateEnsemble,
    c: &StochasticMatrix,
) -> Result<StateEnsemble> {
    if c.cols() != ensemble.len() {
        return Err(Error::input(format!(
            "preprocessing has {} columns for {} states",
            c.cols(),
            ensemble.len()
        )));
    }
    let dim = space.ambient_dim();
    let states = (0..c.rows())
        .map(|j| {
            let mut t = vec![0.0; dim];
            for (i, s) in ensemble.states().iter().enumerate() {
                crate::linalg::axpy(&mut t, c.get(j, i), s);
            }
            t
        })
        .collect();
    Ok(StateEnsemble::from_trusted(space, states, true))
}

/// `B_j = Σ_i ν_{ij} A_i`: outcome `i` is relabelled to `j` with probability `ν_{ij}`.
pub fn postprocess_measurement(
    measurement: &Measurement,
    nu: &StochasticMatrix,
) -> Result<Measurement> {
    if nu.rows() != measurement.len() {
        return Err(Error::input(format!(
            "postprocessing has {} rows for {} outcomes",
            nu.rows(),
            measurement.len()
        )));
    }
    let dim = measurement.effects()[0].0.len();
    let effects = (0..nu.cols())
        .map(|j| {
            measurement
                .effects()
                .iter()
                .enumerate()
                .fold(Effect::zero(dim), |acc, (i, a)| {
                    acc.add(&a.scaled(nu.get(i, j)))
                })
        })
        .collect();
    Ok(Measurement::from_effects_unchecked(effects))
}
