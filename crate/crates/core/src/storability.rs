//! Information storability `IS`, its truncations `IS_n`, and the characteristic
//! numbers of a state space.
//!
//! `IS` is the value of a single LP over the extreme rays of the dual cone: write
//! `u = Σ_r α_r r` with `α >= 0` and maximise `Σ_r α_r` (each ray has sup-norm 1).
//!
//! `IS_n` is computed over vertex subsets of size `min(n, |V|)`: for a fixed
//! measurement each outcome's maximum is attained at a vertex, so pure states
//! suffice. Two independent routes evaluate the encoding power of a subset:
//! the effect-coordinate LP of [`crate::discrimination::mu_max`], and a ray LP in
//! which ray `r` is weighted by its maximum over the subset.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrimination::{lambda_max, mu_max, mu_max_of_states};
use crate::error::{Error, Result};
use crate::gpt::{Effect, Measurement, StateEnsemble, StateSpace};
use crate::lp::{self, LpProblem, LpStatus};
use crate::rays::{extreme_indecomposable_effects, RaySet};
use crate::settings::{IsAlgorithm, Settings};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Storability {
    pub value: f64,
    /// `{α_r r : α_r > 0}`, a measurement of indecomposable effects attaining `value`.
    pub witness_measurement: Measurement,
}

/// Weights of the optimal ray decomposition of `u`, maximising `Σ α_r w_r`.
struct RayLp {
    value: f64,
    alphas: Vec<f64>,
}

/// `max Σ_r α_r w_r  s.t.  Σ_r α_r r(v) = 1 on every vertex v, α >= 0`.
///
/// Functionals on the span of the states are fixed by their vertex values, so the
/// vertex equations are equivalent to `Σ_r α_r r = u` there.
fn ray_lp(values: &[Vec<f64>], weights: &[f64], settings: &Settings) -> Result<RayLp> {
    let nr = values.len();
    let nv = values.first().map(Vec::len).unwrap_or(0);
    let mut lp = LpProblem::maximize(nr);
    for (r, w) in weights.iter().enumerate() {
        lp.set_objective(r, *w);
    }
    for j in 0..nv {
        let row: Vec<(usize, f64)> = values.iter().enumerate().map(|(r, v)| (r, v[j])).collect();
        lp.add_eq(&row, 1.0);
    }
    let sol = lp::solve(&lp, settings.tol.feas)?;
    match sol.status {
        LpStatus::Optimal => Ok(RayLp {
            value: sol.value,
            alphas: sol.point,
        }),
        LpStatus::Infeasible => Err(Error::Infeasible(
            "unit effect is not in the ray cone".into(),
        )),
        LpStatus::Unbounded => Err(Error::Degenerate("ray LP reported unbounded".into())),
    }
}

/// `IS(S)` and a measurement attaining it.
pub fn information_storability(space: &StateSpace, settings: &Settings) -> Result<Storability> {
    let rays = extreme_indecomposable_effects(space, settings)?;
    storability_from_rays(space, &rays, settings)
}

fn storability_from_rays(
    space: &StateSpace,
    rays: &RaySet,
    settings: &Settings,
) -> Result<Storability> {
    let values = rays.vertex_values(space);
    let sol = ray_lp(&values, &vec![1.0; rays.len()], settings)?;
    let effects: Vec<Effect> = rays
        .rays
        .iter()
        .zip(&sol.alphas)
        .filter(|(_, a)| **a > settings.tol.feas)
        .map(|(r, a)| r.scaled(*a))
        .collect();
    Ok(Storability {
        value: sol.value,
        witness_measurement: Measurement::from_effects_unchecked(effects),
    })
}

/// One row of the `IS_n` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsLevel {
    pub n: usize,
    pub value: f64,
    /// Vertex indices of the witness ensemble (`min(n, |V|)` of them).
    pub vertices: Vec<usize>,
    pub witness_ensemble: StateEnsemble,
    /// Measurement aligned with the witness ensemble, attaining `value`.
    pub witness_measurement: Measurement,
}

/// `IS_n(S)` with witnesses.
pub fn is_n(space: &StateSpace, n: usize, settings: &Settings) -> Result<IsLevel> {
    let rays = match settings.is_algorithm {
        IsAlgorithm::EffectLp => None,
        _ => Some(extreme_indecomposable_effects(space, settings)?),
    };
    is_n_with(space, rays.as_ref(), n, settings)
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| {
        acc.saturating_mul((n - i) as u64) / (i as u64 + 1)
    })
}

fn is_n_with(
    space: &StateSpace,
    rays: Option<&RaySet>,
    n: usize,
    settings: &Settings,
) -> Result<IsLevel> {
    if n == 0 {
        return Err(Error::input("IS_n needs n >= 1"));
    }
    let nv = space.num_vertices();
    let k = n.min(nv);
    let count = binomial(nv, k);
    if count > settings.caps.max_subsets {
        return Err(Error::capacity(format!(
            "IS_{n} needs {count} vertex subsets, cap is {}",
            settings.caps.max_subsets
        )));
    }
    let ray_values = rays.map(|r| r.vertex_values(space));
    let algorithm = settings.is_algorithm;

    let combos: Vec<Vec<usize>> = (0..nv).combinations(k).collect();
    let values = combos
        .par_iter()
        .map(|c| subset_value(space, ray_values.as_deref(), c, algorithm, settings))
        .collect::<Result<Vec<f64>>>()?;

    let mut best = 0usize;
    for i in 1..values.len() {
        if values[i] > values[best] + 1e-12 {
            best = i;
        }
    }
    let vertices = combos[best].clone();
    let witness_ensemble = StateEnsemble::from_vertices(space, &vertices)?;
    let states = witness_ensemble.states();
    let witness_measurement = match (algorithm, rays, &ray_values) {
        (IsAlgorithm::RayLp, Some(r), Some(vals)) => {
            grouped_ray_measurement(r, vals, &vertices, settings)?
        }
        _ => mu_max_of_states(space, states, settings)?.optimal_measurement,
    };
    Ok(IsLevel {
        n,
        value: values[best],
        vertices,
        witness_ensemble,
        witness_measurement,
    })
}

/// Encoding power of the vertex subset `subset`, by the configured route(s).
fn subset_value(
    space: &StateSpace,
    ray_values: Option<&[Vec<f64>]>,
    subset: &[usize],
    algorithm: IsAlgorithm,
    settings: &Settings,
) -> Result<f64> {
    let effect = || -> Result<f64> {
        let states: Vec<Vec<f64>> = subset.iter().map(|&i| space.vertex(i).to_vec()).collect();
        Ok(mu_max_of_states(space, &states, settings)?.value)
    };
    let ray = || -> Result<f64> {
        let vals = ray_values
            .ok_or_else(|| Error::Inconsistent("ray route requested without rays".into()))?;
        Ok(ray_lp(vals, &subset_weights(vals, subset), settings)?.value)
    };
    match algorithm {
        IsAlgorithm::EffectLp => effect(),
        IsAlgorithm::RayLp => ray(),
        IsAlgorithm::Both => {
            let (a, b) = (effect()?, ray()?);
            if (a - b).abs() > settings.tol.cmp {
                return Err(Error::Inconsistent(format!(
                    "encoding power of vertices {subset:?}: effect LP {a}, ray LP {b}"
                )));
            }
            Ok(a)
        }
    }
}

fn subset_weights(values: &[Vec<f64>], subset: &[usize]) -> Vec<f64> {
    values
        .iter()
        .map(|row| {
            subset
                .iter()
                .map(|&j| row[j])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Outcome `i` collects the rays whose subset maximum is attained at `subset[i]`.
fn grouped_ray_measurement(
    rays: &RaySet,
    values: &[Vec<f64>],
    subset: &[usize],
    settings: &Settings,
) -> Result<Measurement> {
    let weights = subset_weights(values, subset);
    let sol = ray_lp(values, &weights, settings)?;
    let dim = rays.rays[0].0.len();
    let mut effects = vec![Effect::zero(dim); subset.len()];
    for (r, alpha) in sol.alphas.iter().enumerate() {
        if *alpha <= 0.0 {
            continue;
        }
        let slot = (0..subset.len())
            .max_by(|&a, &b| {
                values[r][subset[a]]
                    .total_cmp(&values[r][subset[b]])
                    .then(b.cmp(&a))
            })
            .expect("nonempty subset");
        effects[slot] = effects[slot].add(&rays.rays[r].scaled(*alpha));
    }
    Ok(Measurement::from_effects_unchecked(effects))
}

/// `IS`, the `IS_n` table up to its plateau, and the derived characteristic numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct StorabilityProfile {
    pub is_value: f64,
    /// `levels[i]` is `IS_{i+1}`, for `n = 1..=n_star`.
    pub levels: Vec<IsLevel>,
    /// Operational dimension: the most perfectly distinguishable states.
    pub d: usize,
    /// Least `n` with `IS_n > d`; absent without super information storability.
    pub m: Option<usize>,
    /// Least `n` with `IS_n = IS`.
    pub n_star: usize,
    pub witness_measurement: Measurement,
    pub witness_ensemble: StateEnsemble,
}

impl StorabilityProfile {
    /// `IS_n` for any `n >= 1`; constant past `n_star`.
    pub fn is_n(&self, n: usize) -> f64 {
        assert!(n >= 1, "IS_n is defined for n >= 1");
        if n >= self.n_star {
            self.levels[self.n_star - 1].value
        } else {
            self.levels[n - 1].value
        }
    }

    pub fn level(&self, n: usize) -> &IsLevel {
        &self.levels[n.min(self.n_star) - 1]
    }

    pub fn has_super_storability(&self) -> bool {
        self.m.is_some()
    }

    pub fn to_doc(&self) -> ProfileDoc {
        ProfileDoc {
            is: self.is_value,
            is_n: self.levels.iter().map(|l| (l.n, l.value)).collect(),
            d: self.d,
            m: self.m,
            n_star: self.n_star,
        }
    }

    /// Human-readable violations of the profile invariants (empty when consistent).
    pub fn invariant_violations(&self, cmp: f64) -> Vec<String> {
        let mut out = Vec::new();
        for w in self.levels.windows(2) {
            if w[1].value < w[0].value - cmp {
                out.push(format!("IS_{} < IS_{}", w[1].n, w[0].n));
            }
        }
        for l in &self.levels {
            if l.n <= self.d && (l.value - l.n as f64).abs() > cmp {
                out.push(format!("IS_{} = {} but n <= d", l.n, l.value));
            }
        }
        if (self.is_n(self.n_star) - self.is_value).abs() > cmp {
            out.push("IS_{n_star} differs from IS".into());
        }
        if self.d > self.n_star {
            out.push("d > n_star".into());
        }
        if let Some(m) = self.m {
            if self.is_n(m) <= self.d as f64 + cmp
                || (m > 1 && self.is_n(m - 1) > self.d as f64 + cmp)
            {
                out.push(format!("m = {m} is not the first super-storability level"));
            }
        }
        out
    }
}

/// Serialized form of a [`StorabilityProfile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub is: f64,
    pub is_n: BTreeMap<usize, f64>,
    pub d: usize,
    pub m: Option<usize>,
    pub n_star: usize,
}

pub fn characteristic_numbers(
    space: &StateSpace,
    settings: &Settings,
) -> Result<StorabilityProfile> {
    let rays = extreme_indecomposable_effects(space, settings)?;
    let is = storability_from_rays(space, &rays, settings)?;
    let cmp = settings.tol.cmp;
    let ray_ref = match settings.is_algorithm {
        IsAlgorithm::EffectLp => None,
        _ => Some(&rays),
    };

    let mut levels = Vec::new();
    let mut n_star = None;
    for n in 1..=space.num_vertices() {
        let level = is_n_with(space, ray_ref, n, settings)?;
        let reached = level.value >= is.value - cmp;
        if level.value > is.value + cmp {
            return Err(Error::Inconsistent(format!(
                "IS_{n} = {} exceeds IS = {}",
                level.value, is.value
            )));
        }
        levels.push(level);
        if reached {
            n_star = Some(n);
            break;
        }
    }
    let n_star = n_star.ok_or_else(|| {
        Error::Inconsistent(format!(
            "IS_n never reached IS = {} over all vertex subsets",
            is.value
        ))
    })?;
    let d = levels
        .iter()
        .filter(|l| (l.value - l.n as f64).abs() <= cmp)
        .map(|l| l.n)
        .max()
        .unwrap_or(1);
    let m = levels
        .iter()
        .find(|l| l.value > d as f64 + cmp)
        .map(|l| l.n);
    let top = &levels[n_star - 1];
    Ok(StorabilityProfile {
        is_value: is.value,
        witness_measurement: top.witness_measurement.clone(),
        witness_ensemble: top.witness_ensemble.clone(),
        levels,
        d,
        m,
        n_star,
    })
}

/// The data of a uniform-centre certificate: a state on which every indecomposable
/// extreme effect takes the same value `λ0`, forcing `IS = 1/λ0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop5Certificate {
    pub s0: Vec<f64>,
    pub lambda0: f64,
    pub condition_i: bool,
    /// Each ray is maximised on a single vertex, and those vertices are distinct;
    /// then only indecomposable measurements attain `IS`.
    pub condition_ii: bool,
    pub predicted_is: f64,
}

pub fn uniform_center_certificate(
    space: &StateSpace,
    settings: &Settings,
) -> Result<Option<Prop5Certificate>> {
    let rays = extreme_indecomposable_effects(space, settings)?;
    let values = rays.vertex_values(space);
    let nv = space.num_vertices();
    // Variables: mixture weights over vertices, then a free λ0.
    let mut lp = LpProblem::maximize(nv + 1);
    lp.set_free(nv);
    lp.add_eq(&(0..nv).map(|j| (j, 1.0)).collect::<Vec<_>>(), 1.0);
    for row in &values {
        let mut coeffs: Vec<(usize, f64)> = row.iter().enumerate().map(|(j, v)| (j, *v)).collect();
        coeffs.push((nv, -1.0));
        lp.add_eq(&coeffs, 0.0);
    }
    let sol = lp::solve(&lp, settings.tol.feas)?;
    if sol.status != LpStatus::Optimal {
        return Ok(None);
    }
    let lambda0 = sol.point[nv];
    if lambda0 <= settings.tol.feas {
        return Ok(None);
    }
    let mut s0 = vec![0.0; space.ambient_dim()];
    for (w, v) in sol.point[..nv].iter().zip(space.vertices()) {
        crate::linalg::axpy(&mut s0, *w, v);
    }
    let singletons = rays.maximizers.iter().all(|f| f.len() == 1);
    let distinct = rays.maximizers.iter().map(|f| f[0]).unique().count() == rays.len();
    let condition_i = rays
        .rays
        .iter()
        .all(|r| (r.raw(&s0) - lambda0).abs() <= settings.tol.cmp);
    Ok(Some(Prop5Certificate {
        s0,
        lambda0,
        condition_i,
        condition_ii: condition_i && singletons && distinct,
        predicted_is: 1.0 / lambda0,
    }))
}

/// `μ_max(X) = IS(S)`.
pub fn is_maximally_decodable(
    space: &StateSpace,
    ensemble: &StateEnsemble,
    settings: &Settings,
) -> Result<bool> {
    let is = information_storability(space, settings)?.value;
    let mu = mu_max(space, ensemble, settings)?.value;
    Ok((mu - is).abs() <= settings.tol.cmp)
}

/// `λ_max(A) = IS(S)`.
pub fn has_maximal_decoding_power(
    space: &StateSpace,
    measurement: &Measurement,
    settings: &Settings,
) -> Result<bool> {
    let is = information_storability(space, settings)?.value;
    let lambda = lambda_max(space, measurement)?.value;
    Ok((lambda - is).abs() <= settings.tol.cmp)
}

/// Minkowski asymmetry measure, `IS(S) - 1`.
pub fn minkowski_measure(space: &StateSpace, settings: &Settings) -> Result<f64> {
    Ok(information_storability(space, settings)?.value - 1.0)
}
