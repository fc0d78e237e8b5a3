//! Catalog of constructible state spaces, and closed-form qubit fixtures.
//!
//! Catalog names compose: `classical:<d>`, `polygon:<n>`, `dsum:<a>,<b>` and
//! `ctensor:<space>,<d>`, e.g. `dsum:polygon:5,polygon:7` or
//! `ctensor:polygon:5,2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{Effect, StateSpace};
use crate::linalg::dot;
use crate::settings::Tolerances;

/// The `d`-outcome classical simplex: standard basis vertices, `u = (1, …, 1)`.
pub fn classical_simplex(d: usize) -> Result<StateSpace> {
    if d == 0 {
        return Err(Error::input("classical simplex needs d >= 1"));
    }
    let vertices = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    StateSpace::new(format!("classical:{d}"), vec![1.0; d], vertices)
}

/// Radius `sqrt(sec(π/n))` of the regular polygon model.
pub fn polygon_radius(n: usize) -> f64 {
    (1.0 / (PI / n as f64).cos()).sqrt()
}

/// Regular `n`-gon in the plane `z = 1` of `R^3`, vertex `k` (0-based) at angle
/// `2π(k+1)/n`, with `u = (0, 0, 1)`.
pub fn polygon(n: usize) -> Result<StateSpace> {
    if n < 3 {
        return Err(Error::input("polygon needs n >= 3"));
    }
    let r = polygon_radius(n);
    let vertices = (1..=n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            vec![r * t.cos(), r * t.sin(), 1.0]
        })
        .collect();
    StateSpace::new(format!("polygon:{n}"), vec![0.0, 0.0, 1.0], vertices)
}

/// Closed-form effects of the polygon model.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonEffects {
    /// `e_k` for even `n`, `g_k` for odd `n`, `k = 1..n`.
    pub indecomposable: Vec<Effect>,
    /// `f_k = u - g_k` for odd `n`; empty for even `n`.
    pub complements: Vec<Effect>,
}

pub fn polygon_effects(n: usize) -> Result<PolygonEffects> {
    if n < 3 {
        return Err(Error::input("polygon needs n >= 3"));
    }
    let r = polygon_radius(n);
    let nf = n as f64;
    if n.is_multiple_of(2) {
        let indecomposable = (1..=n)
            .map(|k| {
                let t = (2 * k - 1) as f64 * PI / nf;
                Effect(vec![0.5 * r * t.cos(), 0.5 * r * t.sin(), 0.5])
            })
            .collect();
        Ok(PolygonEffects {
            indecomposable,
            complements: Vec::new(),
        })
    } else {
        let c = 1.0 / (1.0 + r * r);
        let g: Vec<Effect> = (1..=n)
            .map(|k| {
                let t = 2.0 * k as f64 * PI / nf;
                Effect(vec![c * r * t.cos(), c * r * t.sin(), c])
            })
            .collect();
        let complements = g
            .iter()
            .map(|e| Effect(vec![-e.0[0], -e.0[1], 1.0 - e.0[2]]))
            .collect();
        Ok(PolygonEffects {
            indecomposable: g,
            complements,
        })
    }
}

/// Block-diagonal direct sum: vertices `(v, 0)` and `(0, w)`, unit `(u1, u2)`.
pub fn direct_sum(a: &StateSpace, b: &StateSpace) -> Result<StateSpace> {
    let (da, db) = (a.ambient_dim(), b.ambient_dim());
    let mut vertices = Vec::with_capacity(a.num_vertices() + b.num_vertices());
    for v in a.vertices() {
        let mut x = v.clone();
        x.resize(da + db, 0.0);
        vertices.push(x);
    }
    for w in b.vertices() {
        let mut x = vec![0.0; da];
        x.extend_from_slice(w);
        vertices.push(x);
    }
    let mut unit = a.unit_effect().to_vec();
    unit.extend_from_slice(b.unit_effect());
    StateSpace::new(format!("dsum:{},{}", a.name(), b.name()), unit, vertices)
}

/// Tensor product with the `d`-outcome classical simplex. Coordinates are
/// `x[a*d + j] = v[a]` for vertex `v ⊗ x_j`; vertices are ordered by `j`, then `v`.
pub fn tensor_with_classical(space: &StateSpace, d: usize) -> Result<StateSpace> {
    if d == 0 {
        return Err(Error::input("classical factor needs d >= 1"));
    }
    let dim = space.ambient_dim();
    let mut vertices = Vec::with_capacity(space.num_vertices() * d);
    for j in 0..d {
        for v in space.vertices() {
            let mut x = vec![0.0; dim * d];
            for (a, va) in v.iter().enumerate() {
                x[a * d + j] = *va;
            }
            vertices.push(x);
        }
    }
    let mut unit = vec![0.0; dim * d];
    for (a, ua) in space.unit_effect().iter().enumerate() {
        for j in 0..d {
            unit[a * d + j] = *ua;
        }
    }
    StateSpace::new(format!("ctensor:{},{d}", space.name()), unit, vertices)
}

/// Build a space from a catalog name; a leading `catalog:` is accepted.
pub fn from_catalog_name(name: &str) -> Result<StateSpace> {
    let body = name.strip_prefix("catalog:").unwrap_or(name);
    let mut parser = NameParser { src: body, pos: 0 };
    let space = parser.space()?;
    if parser.pos != body.len() {
        return Err(Error::input(format!(
            "trailing input in catalog name {name:?} at offset {}",
            parser.pos
        )));
    }
    Ok(space)
}

struct NameParser<'a> {
    src: &'a str,
    pos: usize,
}

impl NameParser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::input(format!(
                "expected {c:?} at offset {} of {:?}",
                self.pos, self.src
            )))
        }
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn int(&mut self) -> Result<usize> {
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(Error::input(format!(
                "expected an integer at offset {} of {:?}",
                self.pos, self.src
            )));
        }
        let v = self.rest()[..len]
            .parse()
            .map_err(|e| Error::input(format!("bad integer in {:?}: {e}", self.src)))?;
        self.pos += len;
        Ok(v)
    }

    fn space(&mut self) -> Result<StateSpace> {
        let kind = self.ident().to_string();
        self.expect(':')?;
        match kind.as_str() {
            "classical" => classical_simplex(self.int()?),
            "polygon" => polygon(self.int()?),
            "dsum" => {
                let a = self.space()?;
                self.expect(',')?;
                let b = self.space()?;
                direct_sum(&a, &b)
            }
            "ctensor" => {
                let a = self.space()?;
                self.expect(',')?;
                let d = self.int()?;
                tensor_with_classical(&a, d)
            }
            other => Err(Error::input(format!(
                "unknown catalog space kind {other:?}"
            ))),
        }
    }
}

/// Bloch vector of a qubit state `(1 + n·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn new(v: [f64; 3], tol: &Tolerances) -> Result<Self> {
        let b = BlochVector(v);
        if b.norm() > 1.0 + tol.cmp {
            return Err(Error::input(format!(
                "Bloch vector {v:?} has norm {} > 1",
                b.norm()
            )));
        }
        Ok(b)
    }

    pub fn norm(&self) -> f64 {
        dot(&self.0, &self.0).sqrt()
    }

    /// `tr(P Q)` for the states with Bloch vectors `self` and `other`.
    pub fn overlap(&self, other: &BlochVector) -> f64 {
        (1.0 + dot(&self.0, &other.0)) / 2.0
    }

    /// Unit vector at angle `theta` in the xy-plane.
    pub fn equatorial(theta: f64) -> Self {
        BlochVector([theta.cos(), theta.sin(), 0.0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricDecodableReport {
    pub count: usize,
    /// `Σ n_i`; zero iff `Σ P_i` is proportional to the identity.
    pub bloch_sum: [f64; 3],
    pub balanced: bool,
    /// `r` in `Σ P_i = r·1`, when balanced.
    pub r: Option<f64>,
    /// `Σ_i tr(P_i A_i)` with `A_i = P_i / r`, when balanced.
    pub decodable_sum: Option<f64>,
    /// `A_i = P_i / r` is a POVM: positive and summing to the identity.
    pub povm_valid: bool,
}

/// Check whether pure qubit states satisfy `Σ P_i = r·1`, and if so evaluate the
/// success sum of the pretty-good measurement `A_i = P_i / r`.
pub fn verify_symmetric_decodable(
    blochs: &[BlochVector],
    tol: &Tolerances,
) -> Result<SymmetricDecodableReport> {
    if blochs.is_empty() {
        return Err(Error::input("need at least one Bloch vector"));
    }
    for (i, b) in blochs.iter().enumerate() {
        if (b.norm() - 1.0).abs() > tol.cmp {
            return Err(Error::input(format!(
                "Bloch vector {i} has norm {}; pure states only",
                b.norm()
            )));
        }
    }
    let mut sum = [0.0; 3];
    for b in blochs {
        for (acc, x) in sum.iter_mut().zip(b.0) {
            *acc += x;
        }
    }
    let balanced = sum.iter().all(|x| x.abs() <= tol.cmp);
    let count = blochs.len();
    if !balanced {
        return Ok(SymmetricDecodableReport {
            count,
            bloch_sum: sum,
            balanced,
            r: None,
            decodable_sum: None,
            povm_valid: false,
        });
    }
    // Σ P_i = (n/2)·1 + (Σ n_i)·σ/2.
    let r = count as f64 / 2.0;
    let decodable_sum = blochs.iter().map(|b| b.overlap(b) / r).sum();
    // Σ A_i = (1/r)(n/2)·1 = 1; each A_i is a nonnegative multiple of a projector.
    let identity_part = count as f64 / (2.0 * r);
    let povm_valid = (identity_part - 1.0).abs() <= tol.cmp;
    Ok(SymmetricDecodableReport {
        count,
        bloch_sum: sum,
        balanced,
        r: Some(r),
        decodable_sum: Some(decodable_sum),
        povm_valid,
    })
}

/// Five pure states at the vertices of a regular pentagon on the equator.
pub fn pentagon_bloch() -> Vec<BlochVector> {
    (0..5)
        .map(|k| BlochVector::equatorial(2.0 * PI * k as f64 / 5.0))
        .collect()
}

/// Trine states `(|φ⟩ + e^{2πij/3}|φ⊥⟩)/√2`, which lie at 120° on the equator.
pub fn trine_bloch() -> Vec<BlochVector> {
    (0..3)
        .map(|k| BlochVector::equatorial(2.0 * PI * k as f64 / 3.0))
        .collect()
}

/// An orthogonal pair.
pub fn antipodal_bloch() -> Vec<BlochVector> {
    vec![BlochVector([0.0, 0.0, 1.0]), BlochVector([0.0, 0.0, -1.0])]
}

/// Trine POVM `A_j = (2/3) P_j`: validity and the success sum `Σ_j tr(P_j A_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrineReport {
    pub povm_weight: f64,
    pub povm_valid: bool,
    pub success_sum: f64,
}

pub fn trine_fixture(tol: &Tolerances) -> TrineReport {
    let states = trine_bloch();
    let w: f64 = 2.0 / 3.0;
    // Σ_j w P_j = w(3/2)·1 + w(Σ n_j)·σ/2.
    let mut sum = [0.0f64; 3];
    for b in &states {
        for (acc, x) in sum.iter_mut().zip(b.0) {
            *acc += x;
        }
    }
    let povm_valid =
        (w * 1.5 - 1.0).abs() <= tol.cmp && sum.iter().all(|x| (w * x / 2.0).abs() <= tol.cmp);
    let success_sum = states.iter().map(|b| w * b.overlap(b)).sum();
    TrineReport {
        povm_weight: w,
        povm_valid,
        success_sum,
    }
}

/// Four pure states from two orthonormal bases. Each basis alone reaches the qubit
/// storability 2, so the union is degradable. The storability value is an analytic
/// input here, not computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoBasesReport {
    pub qubit_storability: f64,
    /// `Σ tr(P A)` of each basis with its own projective measurement.
    pub basis_sums: [f64; 2],
    pub degradable: bool,
}

pub fn two_bases_fixture(angle: f64, tol: &Tolerances) -> TwoBasesReport {
    let qubit_storability = 2.0;
    let phi = BlochVector([0.0, 0.0, 1.0]);
    let phi_perp = BlochVector([0.0, 0.0, -1.0]);
    let psi = BlochVector([angle.sin(), 0.0, angle.cos()]);
    let psi_perp = BlochVector([-angle.sin(), 0.0, -angle.cos()]);
    let pair = |a: BlochVector, b: BlochVector| a.overlap(&a) + b.overlap(&b);
    let basis_sums = [pair(phi, phi_perp), pair(psi, psi_perp)];
    let degradable = basis_sums
        .iter()
        .any(|s| (s - qubit_storability).abs() <= tol.cmp);
    TwoBasesReport {
        qubit_storability,
        basis_sums,
        degradable,
    }
}
