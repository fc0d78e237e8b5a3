//! Encoding power `μ_max(X)`, decoding power `λ_max(A)` and the game reward.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{Effect, Measurement, StateEnsemble, StateSpace};
use crate::linalg::dot;
use crate::lp::{self, LpProblem, LpStatus};
use crate::settings::Settings;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationResult {
    /// `μ_max(X)`: `n` times the optimal uniform-prior success probability.
    pub value: f64,
    /// Optimal measurement; outcome `i` guesses state `i`.
    pub optimal_measurement: Measurement,
    /// `A_i(s_i)` for each state.
    pub per_state_success: Vec<f64>,
}

/// Optimal minimum-error discrimination of `X` under a uniform prior.
///
/// Solves `max Σ_i A_i·s_i` over effect coordinates, subject to `A_i·v >= 0` on
/// every vertex and `Σ_i A_i = u`.
pub fn mu_max(
    space: &StateSpace,
    ensemble: &StateEnsemble,
    settings: &Settings,
) -> Result<DiscriminationResult> {
    mu_max_of_states(space, ensemble.states(), settings)
}

pub(crate) fn mu_max_of_states(
    space: &StateSpace,
    states: &[Vec<f64>],
    settings: &Settings,
) -> Result<DiscriminationResult> {
    let n = states.len();
    if n == 0 {
        return Err(Error::input("cannot discriminate an empty ensemble"));
    }
    let dim = space.ambient_dim();
    for s in states {
        space.check_vector(s, "state")?;
    }
    let var = |i: usize, k: usize| i * dim + k;

    let mut lp = LpProblem::maximize(n * dim);
    for (i, s) in states.iter().enumerate() {
        for (k, sk) in s.iter().enumerate() {
            lp.set_free(var(i, k));
            lp.set_objective(var(i, k), *sk);
        }
    }
    for i in 0..n {
        for v in space.vertices() {
            let row: Vec<(usize, f64)> = (0..dim).map(|k| (var(i, k), v[k])).collect();
            lp.add_ge(&row, 0.0);
        }
    }
    for k in 0..dim {
        let row: Vec<(usize, f64)> = (0..n).map(|i| (var(i, k), 1.0)).collect();
        lp.add_eq(&row, space.unit_effect()[k]);
    }

    let sol = lp::solve(&lp, settings.tol.feas)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Infeasible(
                "encoding-power LP has no measurement; corrupted space?".into(),
            ))
        }
        LpStatus::Unbounded => {
            return Err(Error::Degenerate(
                "encoding-power LP reported unbounded".into(),
            ))
        }
    }
    let effects: Vec<Effect> = (0..n)
        .map(|i| Effect(sol.point[var(i, 0)..var(i, 0) + dim].to_vec()))
        .collect();
    let per_state_success: Vec<f64> = effects
        .iter()
        .zip(states)
        .map(|(e, s)| dot(&e.0, s).clamp(0.0, 1.0))
        .collect();
    let value = per_state_success.iter().sum();
    Ok(DiscriminationResult {
        value,
        optimal_measurement: Measurement::from_effects_unchecked(effects),
        per_state_success,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodingPower {
    /// `λ_max(A) = Σ_i max_s A_i(s)`.
    pub value: f64,
    /// A maximising vertex index for each outcome.
    pub witnesses: Vec<usize>,
}

/// Decoding power of `A`; each maximum is attained at a vertex.
pub fn lambda_max(space: &StateSpace, measurement: &Measurement) -> Result<DecodingPower> {
    let mut value = 0.0;
    let mut witnesses = Vec::with_capacity(measurement.len());
    for (i, e) in measurement.effects().iter().enumerate() {
        space.check_vector(&e.0, &format!("outcome {i}"))?;
        let (best, top) = space
            .vertices()
            .iter()
            .enumerate()
            .map(|(j, v)| (j, dot(&e.0, v)))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (j, p)| if p > acc.1 { (j, p) } else { acc },
            );
        value += top;
        witnesses.push(best);
    }
    Ok(DecodingPower { value, witnesses })
}

/// `λ_max(A|X) = Σ_i max_{s ∈ X} A_i(s)`.
pub fn lambda_max_restricted(
    space: &StateSpace,
    measurement: &Measurement,
    ensemble: &StateEnsemble,
) -> Result<f64> {
    lambda_max_restricted_states(space, measurement, ensemble.states())
}

pub(crate) fn lambda_max_restricted_states(
    space: &StateSpace,
    measurement: &Measurement,
    states: &[Vec<f64>],
) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::input(
            "restricted decoding power needs a nonempty ensemble",
        ));
    }
    let mut total = 0.0;
    for e in measurement.effects() {
        space.check_vector(&e.0, "effect")?;
        total += states
            .iter()
            .map(|s| dot(&e.0, s))
            .fold(f64::NEG_INFINITY, f64::max);
    }
    Ok(total)
}

fn warn_positive(w: f64) {
    if w > 0.0 {
        log::warn!("penalty w = {w} > 0 is outside the studied regime (w <= 0)");
    }
}

/// `w + (1 - w/n)·x`, the game reward given a success sum `x` over `n` states.
pub fn reward_formula(success_sum: f64, n: usize, w: f64) -> f64 {
    w + (1.0 - w / n as f64) * success_sum
}

/// Expected reward `E_w(X, A)` of playing ensemble `X` with decoding measurement `A`.
pub fn expected_reward(
    space: &StateSpace,
    ensemble: &StateEnsemble,
    measurement: &Measurement,
    w: f64,
) -> Result<f64> {
    if ensemble.len() != measurement.len() {
        return Err(Error::input(format!(
            "{} states but {} outcomes",
            ensemble.len(),
            measurement.len()
        )));
    }
    warn_positive(w);
    let mut success = 0.0;
    for (e, s) in measurement.effects().iter().zip(ensemble.states()) {
        space.check_vector(&e.0, "effect")?;
        success += e.evaluate(s)?;
    }
    Ok(reward_formula(success, ensemble.len(), w))
}

/// Best reward achievable with the states `X`: `μ_max(X) + w(1 - μ_max(X)/n)`.
pub fn expected_reward_states(
    space: &StateSpace,
    ensemble: &StateEnsemble,
    w: f64,
    settings: &Settings,
) -> Result<f64> {
    warn_positive(w);
    let mu = mu_max(space, ensemble, settings)?.value;
    Ok(reward_formula(mu, ensemble.len(), w))
}

/// Best reward achievable with decoding measurement `A`: `λ_max(A) + w(1 - λ_max(A)/n)`.
pub fn expected_reward_measurement(
    space: &StateSpace,
    measurement: &Measurement,
    w: f64,
) -> Result<f64> {
    warn_positive(w);
    let lambda = lambda_max(space, measurement)?.value;
    Ok(reward_formula(lambda, measurement.len(), w))
}
