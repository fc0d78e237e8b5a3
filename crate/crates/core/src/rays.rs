//! Extreme rays of the positive dual cone `{f : f(v) >= 0 for every vertex v}`.
//!
//! Functionals are only determined up to the annihilator of the states, so the
//! enumeration runs in an orthonormal basis of the linear span of the vertices,
//! where the cone is pointed. The double description method starts from a
//! simplicial cone on a maximal independent set of vertex constraints and adds the
//! remaining constraints one at a time, combining adjacent ray pairs on opposite
//! sides of each new hyperplane. Adjacency uses the combinatorial test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{Effect, StateSpace};
use crate::linalg::{dot, rank, span_basis};
use crate::settings::Settings;

/// Sign threshold for constraint evaluations on unit-norm rays and constraints.
const ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySet {
    /// Ambient-coordinate functionals, each scaled so its maximum over the space is 1.
    pub rays: Vec<Effect>,
    /// Vertex indices attaining the maximum of each ray.
    pub maximizers: Vec<Vec<usize>>,
}

impl RaySet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// `values[r][j] = ray r evaluated on vertex j`.
    pub fn vertex_values(&self, space: &StateSpace) -> Vec<Vec<f64>> {
        self.rays
            .iter()
            .map(|r| space.vertices().iter().map(|v| r.raw(v)).collect())
            .collect()
    }
}

/// The indecomposable extreme effects of `space`, one per extreme ray of the dual cone.
pub fn extreme_indecomposable_effects(space: &StateSpace, settings: &Settings) -> Result<RaySet> {
    let dim = space.ambient_dim();
    if dim > settings.caps.max_dim {
        return Err(Error::capacity(format!(
            "ambient dimension {dim} exceeds the ray-enumeration cap {}",
            settings.caps.max_dim
        )));
    }
    let tol = &settings.tol;
    let basis = span_basis(space.vertices(), dim, 1e-10);
    let k = basis.len();
    let projected: Vec<Vec<f64>> = space
        .vertices()
        .iter()
        .map(|v| unit(basis.iter().map(|q| dot(q, v)).collect()))
        .collect();

    let local = double_description(&projected, k)?;

    let mut rays: Vec<Effect> = Vec::with_capacity(local.len());
    for r in local {
        let mut amb = vec![0.0; dim];
        for (q, c) in basis.iter().zip(&r) {
            crate::linalg::axpy(&mut amb, *c, q);
        }
        let e = Effect(amb);
        let top = space.sup(&e);
        if top <= ZERO_TOL {
            return Err(Error::Degenerate(
                "enumerated ray vanishes on every vertex".into(),
            ));
        }
        let mut e = e.scaled(1.0 / top);
        e.0.iter_mut()
            .filter(|x| x.abs() < 1e-12)
            .for_each(|x| *x = 0.0);
        let duplicate = rays
            .iter()
            .any(|f| f.0.iter().zip(&e.0).all(|(a, b)| (a - b).abs() <= tol.cmp));
        if !duplicate {
            rays.push(e);
        }
    }
    // Coordinates within tolerance count as equal so the order survives vertex relabelling.
    rays.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .find(|(x, y)| (*x - *y).abs() > tol.cmp)
            .map(|(x, y)| x.total_cmp(y))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let maximizers = rays.iter().map(|r| space.maximizer_face(r, tol)).collect();
    Ok(RaySet { rays, maximizers })
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let n = dot(&v, &v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    v
}

#[derive(Clone)]
struct Ray {
    dir: Vec<f64>,
    /// Indices of processed constraints on which the ray is tight.
    zeros: Vec<bool>,
}

/// Extreme rays of `{f in R^k : a·f >= 0 for a in constraints}`; the constraints
/// must span `R^k`.
fn double_description(constraints: &[Vec<f64>], k: usize) -> Result<Vec<Vec<f64>>> {
    let m = constraints.len();
    if k == 0 {
        return Ok(Vec::new());
    }

    // Greedy maximal independent subset, in input order.
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut chosen_rows: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (i, a) in constraints.iter().enumerate() {
        chosen_rows.push(a.clone());
        if rank(&chosen_rows, k, 1e-10) == chosen_rows.len() {
            chosen.push(i);
            if chosen.len() == k {
                break;
            }
        } else {
            chosen_rows.pop();
        }
    }
    if chosen.len() < k {
        return Err(Error::Degenerate(
            "vertex constraints do not span the functional space".into(),
        ));
    }

    // Rays of {f : M f >= 0} are the columns of M⁻¹.
    let mat = nalgebra::DMatrix::from_fn(k, k, |i, j| chosen_rows[i][j]);
    let inv = mat
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("initial constraint block is singular".into()))?;
    let mut processed = vec![false; m];
    for &i in &chosen {
        processed[i] = true;
    }
    let mut rays: Vec<Ray> = (0..k)
        .map(|c| {
            let dir = unit(inv.column(c).iter().copied().collect());
            let mut zeros = vec![false; m];
            for (r, &i) in chosen.iter().enumerate() {
                zeros[i] = r != c;
            }
            Ray { dir, zeros }
        })
        .collect();

    for i in 0..m {
        if processed[i] {
            continue;
        }
        let a = &constraints[i];
        let vals: Vec<f64> = rays.iter().map(|r| dot(a, &r.dir)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j] > ZERO_TOL).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j] < -ZERO_TOL).collect();

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for &p in &pos {
            for &n in &neg {
                if !adjacent(&rays, p, n, &processed, k) {
                    continue;
                }
                let dir: Vec<f64> = rays[n]
                    .dir
                    .iter()
                    .zip(&rays[p].dir)
                    .map(|(x, y)| vals[p] * x - vals[n] * y)
                    .collect();
                let mut zeros: Vec<bool> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[n].zeros)
                    .map(|(x, y)| *x && *y)
                    .collect();
                zeros[i] = true;
                next.push(Ray {
                    dir: unit(dir),
                    zeros,
                });
            }
        }
        for (j, mut r) in rays.into_iter().enumerate() {
            if vals[j] < -ZERO_TOL {
                continue;
            }
            if vals[j] <= ZERO_TOL {
                r.zeros[i] = true;
            }
            next.push(r);
        }
        rays = next;
        processed[i] = true;
    }

    Ok(rays.into_iter().map(|r| r.dir).collect())
}

/// Combinatorial adjacency: the common tight set is large enough and no third ray
/// is tight on all of it.
fn adjacent(rays: &[Ray], p: usize, n: usize, processed: &[bool], k: usize) -> bool {
    let common: Vec<usize> = (0..processed.len())
        .filter(|&i| processed[i] && rays[p].zeros[i] && rays[n].zeros[i])
        .collect();
    if common.len() + 2 < k {
        return false;
    }
    !rays
        .iter()
        .enumerate()
        .any(|(j, r)| j != p && j != n && common.iter().all(|&i| r.zeros[i]))
}
