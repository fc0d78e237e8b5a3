//! Seeded random instances for property checks: stochastic matrices, mixtures,
//! ensembles and measurements on a given space.

use rand::Rng;

use crate::degradability::StochasticMatrix;
use crate::error::{Error, Result};
use crate::gpt::{Effect, Measurement, StateEnsemble, StateSpace};
use crate::lp::{self, LpProblem, LpStatus};
use crate::rays::RaySet;
use crate::settings::{Settings, Tolerances};

/// A random point of the probability simplex on `k` entries, flat Dirichlet.
pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `rows × cols` with each row a random probability vector.
pub fn stochastic_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> StochasticMatrix {
    let entries = (0..rows).map(|_| probability_vector(rng, cols)).collect();
    StochasticMatrix::new(entries, &Tolerances::default()).expect("rows sum to one")
}

/// `k` distinct random mixed states; each is a vertex with probability `1/3`.
pub fn ensemble<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    k: usize,
    tol: &Tolerances,
) -> Result<StateEnsemble> {
    let nv = space.num_vertices();
    for _ in 0..64 {
        let states: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let coeffs = if rng.gen_bool(1.0 / 3.0) {
                    let mut c = vec![0.0; nv];
                    c[rng.gen_range(0..nv)] = 1.0;
                    c
                } else {
                    probability_vector(rng, nv)
                };
                combine(space.vertices(), &coeffs)
            })
            .collect();
        if let Ok(e) = StateEnsemble::from_states(space, states, tol) {
            return Ok(e);
        }
    }
    Err(Error::input(format!("could not draw {k} distinct states")))
}

/// `k` distinct vertices chosen uniformly.
pub fn vertex_subset<R: Rng + ?Sized>(rng: &mut R, space: &StateSpace, k: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, space.num_vertices(), k.min(space.num_vertices())).into_vec()
}

/// A random decomposition `u = Σ α_r r` on the vertices: a vertex of the
/// decomposition polytope picked by a random objective, mixed with a second one.
fn unit_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    rays: &RaySet,
    settings: &Settings,
) -> Result<Vec<f64>> {
    let values = rays.vertex_values(space);
    let pick = |rng: &mut R| -> Result<Vec<f64>> {
        let mut lp = LpProblem::maximize(values.len());
        for r in 0..values.len() {
            lp.set_objective(r, rng.gen::<f64>());
        }
        for j in 0..space.num_vertices() {
            let row: Vec<(usize, f64)> =
                values.iter().enumerate().map(|(r, v)| (r, v[j])).collect();
            lp.add_eq(&row, 1.0);
        }
        let sol = lp::solve(&lp, settings.tol.feas)?;
        match sol.status {
            LpStatus::Optimal => Ok(sol.point),
            _ => Err(Error::Degenerate(
                "no decomposition of the unit effect".into(),
            )),
        }
    };
    let a = pick(rng)?;
    let b = pick(rng)?;
    let t: f64 = rng.gen();
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| t * x + (1.0 - t) * y)
        .collect())
}

/// A random measurement with `outcomes` effects, each a nonnegative combination of rays.
pub fn measurement<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    rays: &RaySet,
    outcomes: usize,
    settings: &Settings,
) -> Result<Measurement> {
    if outcomes == 0 {
        return Err(Error::input("a measurement needs at least one outcome"));
    }
    let alphas = unit_decomposition(rng, space, rays, settings)?;
    let dim = space.ambient_dim();
    let mut effects = vec![Effect::zero(dim); outcomes];
    for (alpha, ray) in alphas.iter().zip(&rays.rays) {
        if *alpha <= 0.0 {
            continue;
        }
        // Most rays go to a single outcome so that faces stay informative.
        let split = if rng.gen_bool(0.5) {
            let mut p = vec![0.0; outcomes];
            p[rng.gen_range(0..outcomes)] = 1.0;
            p
        } else {
            probability_vector(rng, outcomes)
        };
        for (e, p) in effects.iter_mut().zip(split) {
            *e = e.add(&ray.scaled(alpha * p));
        }
    }
    Measurement::new(space, effects, &settings.tol)
}

/// A measurement whose effects are single positive multiples of rays.
pub fn indecomposable_measurement<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    rays: &RaySet,
    settings: &Settings,
) -> Result<Measurement> {
    let alphas = unit_decomposition(rng, space, rays, settings)?;
    let effects = alphas
        .iter()
        .zip(&rays.rays)
        .filter(|(a, _)| **a > settings.tol.feas)
        .map(|(a, r)| r.scaled(*a))
        .collect();
    Measurement::new(space, effects, &settings.tol)
}

fn combine(points: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; points[0].len()];
    for (p, c) in points.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(p) {
            *o += c * x;
        }
    }
    out
}
