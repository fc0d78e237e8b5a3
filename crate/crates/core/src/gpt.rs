//! The GPT data model: polytope state spaces, effects, measurements and ensembles.
//!
//! A state space is stored by its extreme points (pure states) in an ambient real
//! vector space together with the unit effect `u`, a linear functional with
//! `u·v = 1` on every vertex. Effects are linear functionals given by coefficient
//! vectors in the same ambient coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, rank};
use crate::lp::{self, LpProblem, LpStatus};
use crate::settings::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpace {
    name: String,
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
    unit_effect: Vec<f64>,
}

impl StateSpace {
    /// Checks shapes only; call [`StateSpace::validate`] for the geometric invariants.
    pub fn new(
        name: impl Into<String>,
        unit_effect: Vec<f64>,
        vertices: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let ambient_dim = unit_effect.len();
        if ambient_dim == 0 {
            return Err(Error::input("ambient dimension must be positive"));
        }
        if vertices.is_empty() {
            return Err(Error::input("a state space needs at least one vertex"));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::input(format!(
                    "vertex {i} has dimension {}, expected {ambient_dim}",
                    v.len()
                )));
            }
        }
        if !vertices
            .iter()
            .flatten()
            .chain(&unit_effect)
            .all(|x| x.is_finite())
        {
            return Err(Error::input("state space contains non-finite coordinates"));
        }
        Ok(StateSpace {
            name: name.into(),
            ambient_dim,
            vertices,
            unit_effect,
        })
    }

    /// Construct and reject if any invariant fails.
    pub fn new_validated(
        name: impl Into<String>,
        unit_effect: Vec<f64>,
        vertices: Vec<Vec<f64>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let space = Self::new(name, unit_effect, vertices)?;
        let report = space.validate(tol)?;
        if !report.is_valid() {
            return Err(Error::Input(format!(
                "invalid state space {}: {report}",
                space.name
            )));
        }
        Ok(space)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn unit_effect(&self) -> &[f64] {
        &self.unit_effect
    }

    pub fn unit(&self) -> Effect {
        Effect(self.unit_effect.clone())
    }

    pub fn check_vector(&self, v: &[f64], what: &str) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::input(format!(
                "{what} has dimension {}, space {} has {}",
                v.len(),
                self.name,
                self.ambient_dim
            )));
        }
        Ok(())
    }

    /// Dimension of the affine hull of the vertices.
    pub fn affine_dimension(&self, tol: &Tolerances) -> usize {
        let base = &self.vertices[0];
        let diffs: Vec<Vec<f64>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        rank(&diffs, self.ambient_dim, tol.cmp)
    }

    /// Indices of the vertices where `e` attains its maximum over the space.
    pub fn maximizer_face(&self, e: &Effect, tol: &Tolerances) -> Vec<usize> {
        let values: Vec<f64> = self.vertices.iter().map(|v| dot(&e.0, v)).collect();
        let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..values.len())
            .filter(|&i| values[i] >= top - tol.cmp)
            .collect()
    }

    /// Largest value of `e` over the space, attained at a vertex.
    pub fn sup(&self, e: &Effect) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(&e.0, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Convex coefficients over `pool` (vertex indices) expressing `s`, if `s` lies in
    /// the hull of those vertices.
    pub fn convex_coefficients(
        &self,
        s: &[f64],
        pool: &[usize],
        tol: &Tolerances,
    ) -> Result<Option<Vec<f64>>> {
        self.check_vector(s, "state")?;
        let points: Vec<&[f64]> = pool.iter().map(|&i| self.vertices[i].as_slice()).collect();
        hull_coefficients(&points, s, self.ambient_dim, tol)
    }

    /// Whether `s` is a state of this space (inside the hull, normalised).
    pub fn contains(&self, s: &[f64], tol: &Tolerances) -> Result<bool> {
        let all: Vec<usize> = (0..self.num_vertices()).collect();
        Ok(self.convex_coefficients(s, &all, tol)?.is_some())
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        for (i, v) in self.vertices.iter().enumerate() {
            let uv = dot(&self.unit_effect, v);
            if (uv - 1.0).abs() > tol.feas {
                report.normalization.push(NormalizationViolation {
                    vertex: i,
                    value: uv,
                });
            }
        }
        for i in 0..self.vertices.len() {
            let others: Vec<usize> = (0..self.vertices.len()).filter(|&j| j != i).collect();
            if others.is_empty() {
                continue;
            }
            if let Some(coeffs) = self.convex_coefficients(&self.vertices[i], &others, tol)? {
                let witness = others
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| *c > tol.feas)
                    .map(|(&j, c)| (j, c))
                    .collect();
                report
                    .non_extreme
                    .push(NonExtremeVertex { vertex: i, witness });
            }
        }
        Ok(report)
    }
}

/// Convex combination of `points` equal to `target`, found by a feasibility LP.
pub(crate) fn hull_coefficients(
    points: &[&[f64]],
    target: &[f64],
    dim: usize,
    tol: &Tolerances,
) -> Result<Option<Vec<f64>>> {
    if points.is_empty() {
        return Ok(None);
    }
    let mut lp = LpProblem::maximize(points.len());
    for k in 0..dim {
        let row: Vec<(usize, f64)> = points.iter().enumerate().map(|(j, p)| (j, p[k])).collect();
        lp.add_eq(&row, target[k]);
    }
    let ones: Vec<(usize, f64)> = (0..points.len()).map(|j| (j, 1.0)).collect();
    lp.add_eq(&ones, 1.0);
    let sol = lp::solve(&lp, tol.feas)?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.point),
        _ => None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationViolation {
    pub vertex: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonExtremeVertex {
    pub vertex: usize,
    /// `(vertex index, weight)` pairs whose mixture reproduces the vertex.
    pub witness: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub normalization: Vec<NormalizationViolation>,
    pub non_extreme: Vec<NonExtremeVertex>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.normalization.is_empty() && self.non_extreme.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let mut parts = Vec::new();
        for n in &self.normalization {
            parts.push(format!("vertex {} has u·v = {}", n.vertex, n.value));
        }
        for n in &self.non_extreme {
            parts.push(format!(
                "vertex {} is a mixture of {:?}",
                n.vertex, n.witness
            ));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// A linear functional on the ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Effect(pub Vec<f64>);

impl Effect {
    /// Checked constructor: `0 <= e·v <= 1` on every vertex.
    pub fn new(space: &StateSpace, coeffs: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        space.check_vector(&coeffs, "effect")?;
        for (i, v) in space.vertices().iter().enumerate() {
            let p = dot(&coeffs, v);
            if p < -tol.feas || p > 1.0 + tol.feas {
                return Err(Error::input(format!(
                    "effect takes value {p} on vertex {i}"
                )));
            }
        }
        Ok(Effect(coeffs))
    }

    pub fn zero(dim: usize) -> Self {
        Effect(vec![0.0; dim])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, alpha: f64) -> Effect {
        Effect(self.0.iter().map(|c| c * alpha).collect())
    }

    pub fn add(&self, other: &Effect) -> Effect {
        Effect(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Outcome probability on `s`, clamped into `[0, 1]`.
    pub fn evaluate(&self, s: &[f64]) -> Result<f64> {
        if s.len() != self.0.len() {
            return Err(Error::input(format!(
                "effect of dimension {} evaluated on vector of dimension {}",
                self.0.len(),
                s.len()
            )));
        }
        Ok(dot(&self.0, s).clamp(0.0, 1.0))
    }

    /// Unclamped `e·s`.
    pub fn raw(&self, s: &[f64]) -> f64 {
        dot(&self.0, s)
    }
}

/// Outcome probability of effect `e` on state `s`.
pub fn evaluate(e: &Effect, s: &[f64]) -> Result<f64> {
    e.evaluate(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    effects: Vec<Effect>,
}

impl Measurement {
    /// Checked constructor: each effect valid and the effects sum to `u`.
    pub fn new(space: &StateSpace, effects: Vec<Effect>, tol: &Tolerances) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::input("a measurement needs at least one outcome"));
        }
        for (i, e) in effects.iter().enumerate() {
            Effect::new(space, e.0.clone(), tol)
                .map_err(|err| Error::Input(format!("outcome {i}: {err}")))?;
        }
        let m = Measurement { effects };
        let total = m.total();
        let dev = total
            .0
            .iter()
            .zip(space.unit_effect())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        // Agreement on the vertices is what matters; coordinates may differ by a
        // functional vanishing on the span of the states.
        let on_vertices = space
            .vertices()
            .iter()
            .fold(0.0f64, |acc, v| acc.max((total.raw(v) - 1.0).abs()));
        if dev > tol.feas && on_vertices > tol.feas {
            return Err(Error::input(format!(
                "effects sum to u only within {dev:.3e}"
            )));
        }
        Ok(m)
    }

    pub(crate) fn from_effects_unchecked(effects: Vec<Effect>) -> Self {
        Measurement { effects }
    }

    /// The trivial one-outcome measurement `{u}`.
    pub fn trivial(space: &StateSpace) -> Self {
        Measurement {
            effects: vec![space.unit()],
        }
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn total(&self) -> Effect {
        let dim = self.effects[0].0.len();
        self.effects
            .iter()
            .fold(Effect::zero(dim), |acc, e| acc.add(e))
    }
}

/// An ordered list of states, stored by coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateEnsemble {
    space: String,
    states: Vec<Vec<f64>>,
    allow_repeats: bool,
}

impl StateEnsemble {
    /// Certifies membership of every state and rejects repeats.
    pub fn from_states(
        space: &StateSpace,
        states: Vec<Vec<f64>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        Self::build(space, states, false, tol)
    }

    /// Like [`StateEnsemble::from_states`] but permits repeated states.
    pub fn from_states_with_repeats(
        space: &StateSpace,
        states: Vec<Vec<f64>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        Self::build(space, states, true, tol)
    }

    /// States given by convex coefficients over the vertices of `space`.
    pub fn from_mixtures(
        space: &StateSpace,
        mixtures: &[Vec<f64>],
        tol: &Tolerances,
    ) -> Result<Self> {
        let states = mixtures
            .iter()
            .enumerate()
            .map(|(i, c)| {
                mixture(space, c, tol).map_err(|e| Error::Input(format!("mixture {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(space, states, false, tol)
    }

    /// The given vertices of `space`, in order.
    pub fn from_vertices(space: &StateSpace, indices: &[usize]) -> Result<Self> {
        let mut states = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= space.num_vertices() {
                return Err(Error::input(format!("vertex index {i} out of range")));
            }
            states.push(space.vertex(i).to_vec());
        }
        Ok(StateEnsemble {
            space: space.name().to_string(),
            states,
            allow_repeats: false,
        })
    }

    pub(crate) fn from_trusted(
        space: &StateSpace,
        states: Vec<Vec<f64>>,
        allow_repeats: bool,
    ) -> Self {
        StateEnsemble {
            space: space.name().to_string(),
            states,
            allow_repeats,
        }
    }

    fn build(
        space: &StateSpace,
        states: Vec<Vec<f64>>,
        allow_repeats: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::input("an ensemble needs at least one state"));
        }
        for (i, s) in states.iter().enumerate() {
            space.check_vector(s, "state")?;
            let norm = dot(space.unit_effect(), s);
            if (norm - 1.0).abs() > tol.feas {
                return Err(Error::input(format!("state {i} has u·s = {norm}")));
            }
            if !space.contains(s, tol)? {
                return Err(Error::input(format!(
                    "state {i} lies outside {}",
                    space.name()
                )));
            }
        }
        if !allow_repeats {
            for i in 0..states.len() {
                for j in 0..i {
                    let dist = states[i]
                        .iter()
                        .zip(&states[j])
                        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
                    if dist <= tol.cmp {
                        return Err(Error::input(format!("states {j} and {i} coincide")));
                    }
                }
            }
        }
        Ok(StateEnsemble {
            space: space.name().to_string(),
            states,
            allow_repeats,
        })
    }

    pub fn space_name(&self) -> &str {
        &self.space
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn allows_repeats(&self) -> bool {
        self.allow_repeats
    }

    /// The sub-ensemble at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> StateEnsemble {
        StateEnsemble {
            space: self.space.clone(),
            states: indices.iter().map(|&i| self.states[i].clone()).collect(),
            allow_repeats: self.allow_repeats,
        }
    }
}

/// Coordinates of the mixture with convex weights `coeffs` over the vertices.
pub fn mixture(space: &StateSpace, coeffs: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    if coeffs.len() != space.num_vertices() {
        return Err(Error::input(format!(
            "{} mixture weights for {} vertices",
            coeffs.len(),
            space.num_vertices()
        )));
    }
    if coeffs.iter().any(|c| *c < -tol.feas) {
        return Err(Error::input("mixture weights must be nonnegative"));
    }
    let total: f64 = coeffs.iter().sum();
    if (total - 1.0).abs() > tol.feas {
        return Err(Error::input(format!("mixture weights sum to {total}")));
    }
    let mut s = vec![0.0; space.ambient_dim()];
    for (c, v) in coeffs.iter().zip(space.vertices()) {
        crate::linalg::axpy(&mut s, *c, v);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{classical_simplex, polygon};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn unit_effect_is_one_on_vertices() {
        let s = polygon(5).unwrap();
        for v in s.vertices() {
            assert!((s.unit().evaluate(v).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(Effect::zero(3).evaluate(s.vertex(2)).unwrap(), 0.0);
    }

    #[test]
    fn classical_indicator_values() {
        let s = classical_simplex(3).unwrap();
        let b1 = Effect(vec![1.0, 0.0, 0.0]);
        assert_eq!(b1.evaluate(s.vertex(0)).unwrap(), 1.0);
        assert_eq!(b1.evaluate(s.vertex(1)).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        assert!(matches!(
            Effect(vec![1.0, 0.0]).evaluate(&[1.0, 0.0, 0.0]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn polygon_is_valid() {
        assert!(polygon(5).unwrap().validate(&tol()).unwrap().is_valid());
    }

    #[test]
    fn square_with_midpoint_is_invalid() {
        let sq = polygon(4).unwrap();
        let mut verts = sq.vertices().to_vec();
        let mid: Vec<f64> = verts[0]
            .iter()
            .zip(&verts[1])
            .map(|(a, b)| (a + b) / 2.0)
            .collect();
        verts.push(mid);
        let bad = StateSpace::new("bad", sq.unit_effect().to_vec(), verts).unwrap();
        let report = bad.validate(&tol()).unwrap();
        assert!(!report.is_valid());
        assert_eq!(report.non_extreme.len(), 1);
        let w = &report.non_extreme[0];
        assert_eq!(w.vertex, 4);
        let mut idx: Vec<usize> = w.witness.iter().map(|p| p.0).collect();
        idx.sort();
        assert_eq!(idx, vec![0, 1]);
        for (_, c) in &w.witness {
            assert!((c - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn unnormalized_vertex_reported() {
        let s = StateSpace::new("n", vec![1.0, 1.0], vec![vec![1.0, 0.0], vec![0.0, 0.9]]).unwrap();
        let report = s.validate(&tol()).unwrap();
        assert_eq!(report.normalization.len(), 1);
        assert_eq!(report.normalization[0].vertex, 1);
        assert!((report.normalization[0].value - 0.9).abs() < 1e-12);
    }

    #[test]
    fn affine_dimensions() {
        assert_eq!(classical_simplex(4).unwrap().affine_dimension(&tol()), 3);
        assert_eq!(polygon(7).unwrap().affine_dimension(&tol()), 2);
        assert_eq!(classical_simplex(1).unwrap().affine_dimension(&tol()), 0);
    }

    #[test]
    fn maximizer_faces() {
        let cl = classical_simplex(3).unwrap();
        assert_eq!(
            cl.maximizer_face(&Effect(vec![0.0, 1.0, 0.0]), &tol()),
            vec![1]
        );
        assert_eq!(cl.maximizer_face(&cl.unit(), &tol()), vec![0, 1, 2]);
    }

    #[test]
    fn ensemble_membership() {
        let cl = classical_simplex(2).unwrap();
        assert!(StateEnsemble::from_states(&cl, vec![vec![0.5, 0.5]], &tol()).is_ok());
        assert!(StateEnsemble::from_states(&cl, vec![vec![1.5, -0.5]], &tol()).is_err());
        assert!(
            StateEnsemble::from_states(&cl, vec![vec![1.0, 0.0], vec![1.0, 0.0]], &tol()).is_err()
        );
        assert!(StateEnsemble::from_states_with_repeats(
            &cl,
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            &tol()
        )
        .is_ok());
        let mix = StateEnsemble::from_mixtures(&cl, &[vec![0.25, 0.75]], &tol()).unwrap();
        assert_eq!(mix.states()[0], vec![0.25, 0.75]);
    }

    #[test]
    fn measurement_must_sum_to_unit() {
        let cl = classical_simplex(2).unwrap();
        let ok = Measurement::new(
            &cl,
            vec![Effect(vec![1.0, 0.0]), Effect(vec![0.0, 1.0])],
            &tol(),
        );
        assert!(ok.is_ok());
        let bad = Measurement::new(
            &cl,
            vec![Effect(vec![1.0, 0.0]), Effect(vec![0.0, 0.5])],
            &tol(),
        );
        assert!(bad.is_err());
        let neg = Measurement::new(
            &cl,
            vec![Effect(vec![1.5, 0.0]), Effect(vec![-0.5, 1.0])],
            &tol(),
        );
        assert!(neg.is_err());
    }
}
