//! The information-storability game: choose `n` states, get `n` utiles for a
//! correct guess and `w <= 0` for a wrong one.
//!
//! Optimising over ensembles and measurements of size `n` leaves
//! `E_w(n) = w + IS_n - w·IS_n/n`, so everything here works from a precomputed
//! [`StorabilityProfile`]. Past `n_star` the curve strictly decreases, so the
//! search over `n` stops there.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{Measurement, StateEnsemble};
use crate::settings::{Caps, Tolerances};
use crate::storability::StorabilityProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyClass {
    /// `n* = d`: play a maximal set of perfectly distinguishable states.
    PerfectDiscrimination,
    /// `n* >= m`: more states than can be perfectly distinguished.
    SuperStorability,
    /// Another `n` is within the comparison tolerance of the optimum.
    Tie,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub w: f64,
    pub optimal_n: usize,
    pub expected_reward: f64,
    pub strategy_class: StrategyClass,
    /// The other `n` values tied with `optimal_n`, if any.
    pub tied_with: Vec<usize>,
    pub witness_ensemble: StateEnsemble,
    pub witness_measurement: Measurement,
    /// `E_w(n)` for `n = 1..=search_cap`.
    pub curve: BTreeMap<usize, f64>,
    pub search_cap: usize,
}

/// `E_w(n) = w + IS_n - w·IS_n/n`.
pub fn reward_at(is_n: f64, n: usize, w: f64) -> f64 {
    w + is_n - w * is_n / n as f64
}

/// `E_w(n)` for `n = 1..=n_star`.
pub fn reward_curve(profile: &StorabilityProfile, w: f64) -> BTreeMap<usize, f64> {
    (1..=profile.n_star)
        .map(|n| (n, reward_at(profile.is_n(n), n, w)))
        .collect()
}

struct Choice {
    n: usize,
    value: f64,
    class: StrategyClass,
    tied_with: Vec<usize>,
}

fn choose(profile: &StorabilityProfile, curve: &BTreeMap<usize, f64>, tol: &Tolerances) -> Choice {
    let mut best_n = 1;
    let mut best = f64::NEG_INFINITY;
    for (&n, &e) in curve {
        if e > best + tol.cmp {
            best = e;
            best_n = n;
        }
    }
    // Report the exact maximum among the near-equal candidates.
    let best_value = curve.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied_with: Vec<usize> = curve
        .iter()
        .filter(|(&n, &e)| n != best_n && (e - best).abs() <= tol.cmp)
        .map(|(&n, _)| n)
        .collect();
    let class = if !tied_with.is_empty() {
        StrategyClass::Tie
    } else if profile.m.is_some_and(|m| best_n >= m) {
        StrategyClass::SuperStorability
    } else {
        StrategyClass::PerfectDiscrimination
    };
    Choice {
        n: best_n,
        value: best_value.max(best),
        class,
        tied_with,
    }
}

/// Optimal `n` and strategy for penalty `w <= 0`; ties go to the smaller `n`.
pub fn optimal_strategy(
    profile: &StorabilityProfile,
    w: f64,
    tol: &Tolerances,
) -> Result<StrategyReport> {
    if w > 0.0 || !w.is_finite() {
        return Err(Error::input(format!(
            "penalty must be a finite w <= 0, got {w}"
        )));
    }
    let curve = reward_curve(profile, w);
    let choice = choose(profile, &curve, tol);
    let level = profile.level(choice.n);
    Ok(StrategyReport {
        w,
        optimal_n: choice.n,
        expected_reward: choice.value,
        strategy_class: choice.class,
        tied_with: choice.tied_with,
        witness_ensemble: level.witness_ensemble.clone(),
        witness_measurement: level.witness_measurement.clone(),
        curve,
        search_cap: profile.n_star,
    })
}

/// Largest penalty below which `n` states stop beating perfect discrimination:
/// `n(d - IS_n)/(n - IS_n)`. Absent when `n < m` or without super storability.
pub fn advantage_threshold(profile: &StorabilityProfile, n: usize) -> Option<f64> {
    let m = profile.m?;
    if n < m {
        return None;
    }
    let is = profile.is_n(n);
    let nf = n as f64;
    Some(nf * (profile.d as f64 - is) / (nf - is))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvantageRange {
    /// Every `n <= cap` with `E_w(n) > d`.
    pub ns: Vec<usize>,
    /// The set continues past `cap` (it contains every `n >= m`).
    pub unbounded: bool,
    pub cap: usize,
}

/// All `n` beating perfect discrimination at penalty `w < 0`, cross-checked against
/// the closed-form description: every `n >= m` when `IS_n - d >= -w`, otherwise
/// `m <= n < IS_n·w/(IS_n - d + w)`.
pub fn advantage_range_n(
    profile: &StorabilityProfile,
    w: f64,
    caps: &Caps,
    tol: &Tolerances,
) -> Result<AdvantageRange> {
    if w >= 0.0 || !w.is_finite() {
        return Err(Error::input(format!(
            "advantage ranges need w < 0, got {w}"
        )));
    }
    let cap = caps.max_n.max(profile.n_star);
    let Some(m) = profile.m else {
        return Ok(AdvantageRange {
            ns: Vec::new(),
            unbounded: false,
            cap,
        });
    };
    let d = profile.d as f64;
    let mut ns = Vec::new();
    for n in m..=cap {
        let is = profile.is_n(n);
        let e = reward_at(is, n, w);
        let numeric = e > d + tol.cmp;
        let closed = if is - d >= -w {
            true
        } else {
            (n as f64) < is * w / (is - d + w)
        };
        if numeric != closed && (e - d).abs() > tol.cmp {
            return Err(Error::Inconsistent(format!(
                "advantage at n = {n}, w = {w}: E_w(n) - d = {} but closed form says {closed}",
                e - d
            )));
        }
        if numeric {
            ns.push(n);
        }
    }
    let unbounded = profile.is_value - d >= -w;
    Ok(AdvantageRange { ns, unbounded, cap })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub w: f64,
    /// `E_w(n)` for each `n` in [`SweepTable::ns`].
    pub values: Vec<f64>,
    pub optimal_n: usize,
    pub class: StrategyClass,
    pub expected_reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub space: String,
    /// `d..=n_star`, the curves worth plotting.
    pub ns: Vec<usize>,
    pub rows: Vec<SweepRow>,
}

/// Evaluate the game on `steps` evenly spaced penalties in `[w_min, w_max]`
/// (endpoints included).
pub fn sweep(
    profile: &StorabilityProfile,
    space_name: &str,
    w_min: f64,
    w_max: f64,
    steps: usize,
    tol: &Tolerances,
) -> Result<SweepTable> {
    if !(w_min.is_finite() && w_max.is_finite()) || w_min > w_max || w_max > 0.0 {
        return Err(Error::input(format!(
            "sweep needs w_min <= w_max <= 0, got [{w_min}, {w_max}]"
        )));
    }
    if steps == 0 {
        return Err(Error::input("sweep needs at least one step"));
    }
    let ns: Vec<usize> = (profile.d..=profile.n_star).collect();
    let rows = (0..steps)
        .into_par_iter()
        .map(|i| {
            let w = if steps == 1 {
                w_min
            } else {
                w_min + (w_max - w_min) * i as f64 / (steps - 1) as f64
            };
            let curve = reward_curve(profile, w);
            let choice = choose(profile, &curve, tol);
            SweepRow {
                w,
                values: ns.iter().map(|n| curve[n]).collect(),
                optimal_n: choice.n,
                class: choice.class,
                expected_reward: choice.value,
            }
        })
        .collect();
    Ok(SweepTable {
        space: space_name.to_string(),
        ns,
        rows,
    })
}
