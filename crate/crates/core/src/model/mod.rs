//! Two-band lattice models, their Bloch Hamiltonian and the symbol `Q(β)`.
//!
//! A model is defined by three families of hopping amplitudes entering the
//! real-space equations of motion
//!
//! ```text
//! i da_n/dt = Σ_l ρ_{n−l} a_l + Σ_l θ_{n−l} b_l
//! i db_n/dt = Σ_l φ_{n−l} a_l − Σ_l ρ_{n−l} b_l
//! ```
//!
//! With `β = e^{ik}` the plane-wave ansatz gives the Bloch Hamiltonian
//! `H(k) = d_x σ_x + d_y σ_y + d_z σ_z` where
//!
//! ```text
//! d_x = ½ Σ (θ_n + φ_n) β^{−n},   d_y = (1/2i) Σ (φ_n − θ_n) β^{−n},   d_z = Σ ρ_n β^{−n}
//! ```
//!
//! and both bands satisfy `E² = Q(β) = d_x² + d_y² + d_z²`.

mod file;
mod laurent;

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

pub use file::{load_model_file, named_from_params, parse_model_json, BuilderSpec, ExplicitSpec, ModelFile};
pub use laurent::LaurentPolynomial;

use crate::{Complex64, Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Hopping amplitudes `ρ_n`, `θ_n`, `φ_n` of a two-band chain.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoBandModel {
    pub label: String,
    /// Intra-sublattice hoppings; `±ρ₀` are the on-site potentials.
    pub rho: BTreeMap<i32, Complex64>,
    /// Hoppings from sublattice B into A.
    pub theta: BTreeMap<i32, Complex64>,
    /// Hoppings from sublattice A into B.
    pub phi: BTreeMap<i32, Complex64>,
    /// Named family and parameters when built by a builder.
    pub origin: Option<NamedModel>,
}

/// The named model families with their real parameters.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "builder", content = "params", rename_all = "snake_case")]
pub enum NamedModel {
    /// Alternating balanced gain and loss `±iδ`.
    ModelI { t: f64, tp: f64, delta: f64 },
    /// Asymmetric intra-dimer hoppings `t ± δ`.
    ModelIi { t: f64, tp: f64, delta: f64 },
    /// Rotated partner of model II (`d_y ↔ d_z`), same symbol `Q`.
    ModelIii { t: f64, tp: f64, delta: f64 },
    /// Next-nearest-neighbour chain with Bloch points.
    ModelIv { t1: f64, t2: f64, t3: f64, delta: f64 },
    /// Three-saddle model whose saddles can sit on the unit circle.
    ModelAppC { t: f64, delta: f64 },
}

impl NamedModel {
    /// Builder name as used on the command line and in model files.
    pub fn builder_name(&self) -> &'static str {
        match self {
            NamedModel::ModelI { .. } => "model_i",
            NamedModel::ModelIi { .. } => "model_ii",
            NamedModel::ModelIii { .. } => "model_iii",
            NamedModel::ModelIv { .. } => "model_iv",
            NamedModel::ModelAppC { .. } => "model_app_c",
        }
    }

    /// Constructs the hopping maps.
    pub fn build(self) -> TwoBandModel {
        match self {
            NamedModel::ModelI { t, tp, delta } => model_i(t, tp, delta),
            NamedModel::ModelIi { t, tp, delta } => model_ii(t, tp, delta),
            NamedModel::ModelIii { t, tp, delta } => model_iii(t, tp, delta),
            NamedModel::ModelIv { t1, t2, t3, delta } => model_iv(t1, t2, t3, delta),
            NamedModel::ModelAppC { t, delta } => model_app_c(t, delta),
        }
    }

    /// `(name, value)` pairs for provenance records.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            NamedModel::ModelI { t, tp, delta }
            | NamedModel::ModelIi { t, tp, delta }
            | NamedModel::ModelIii { t, tp, delta } => vec![("t", t), ("tp", tp), ("delta", delta)],
            NamedModel::ModelIv { t1, t2, t3, delta } => {
                vec![("t1", t1), ("t2", t2), ("t3", t3), ("delta", delta)]
            }
            NamedModel::ModelAppC { t, delta } => vec![("t", t), ("delta", delta)],
        }
    }
}

fn map(entries: &[(i32, Complex64)]) -> BTreeMap<i32, Complex64> {
    entries.iter().copied().filter(|(_, c)| *c != re(0.0)).collect()
}

/// Model I: `d_x = t + t′cos k`, `d_y = t′ sin k`, `d_z = iδ`.
pub fn model_i(t: f64, tp: f64, delta: f64) -> TwoBandModel {
    TwoBandModel {
        label: format!("model_i(t={t}, tp={tp}, delta={delta})"),
        rho: map(&[(0, I * delta)]),
        theta: map(&[(0, re(t)), (1, re(tp))]),
        phi: map(&[(0, re(t)), (-1, re(tp))]),
        origin: Some(NamedModel::ModelI { t, tp, delta }),
    }
}

/// Model II: `d_x = t + t′cos k`, `d_y = t′ sin k − iδ`, `d_z = 0`.
pub fn model_ii(t: f64, tp: f64, delta: f64) -> TwoBandModel {
    TwoBandModel {
        label: format!("model_ii(t={t}, tp={tp}, delta={delta})"),
        rho: BTreeMap::new(),
        theta: map(&[(0, re(t - delta)), (1, re(tp))]),
        phi: map(&[(0, re(t + delta)), (-1, re(tp))]),
        origin: Some(NamedModel::ModelIi { t, tp, delta }),
    }
}

/// Model III: `d_x = t + t′cos k`, `d_y = 0`, `d_z = t′ sin k − iδ`.
pub fn model_iii(t: f64, tp: f64, delta: f64) -> TwoBandModel {
    let half = re(0.5 * tp);
    TwoBandModel {
        label: format!("model_iii(t={t}, tp={tp}, delta={delta})"),
        rho: map(&[(0, -I * delta), (-1, -I * half), (1, I * half)]),
        theta: map(&[(0, re(t)), (1, half), (-1, half)]),
        phi: map(&[(0, re(t)), (1, half), (-1, half)]),
        origin: Some(NamedModel::ModelIii { t, tp, delta }),
    }
}

/// Model IV: `d_x = t₁ + (t₂+t₃)cos k + iδ sin k`, `d_y = (t₂−t₃) sin k + iδ cos k`.
pub fn model_iv(t1: f64, t2: f64, t3: f64, delta: f64) -> TwoBandModel {
    TwoBandModel {
        label: format!("model_iv(t1={t1}, t2={t2}, t3={t3}, delta={delta})"),
        rho: BTreeMap::new(),
        theta: map(&[(0, re(t1)), (-1, re(t3 + delta)), (1, re(t2))]),
        phi: map(&[(0, re(t1)), (-1, re(t2)), (1, re(t3 - delta))]),
        origin: Some(NamedModel::ModelIv { t1, t2, t3, delta }),
    }
}

/// Cusp model: `d_x = t e^{ik} + e^{−ik}/√2`, `d_y = 0`, `d_z = it e^{ik} + iδ`.
pub fn model_app_c(t: f64, delta: f64) -> TwoBandModel {
    TwoBandModel {
        label: format!("model_app_c(t={t}, delta={delta})"),
        rho: map(&[(0, I * delta), (-1, I * t)]),
        theta: map(&[(-1, re(t)), (1, re(1.0 / SQRT_2))]),
        phi: map(&[(-1, re(t)), (1, re(1.0 / SQRT_2))]),
        origin: Some(NamedModel::ModelAppC { t, delta }),
    }
}

/// A model from explicit hopping maps.
pub fn custom(
    label: impl Into<String>,
    rho: BTreeMap<i32, Complex64>,
    theta: BTreeMap<i32, Complex64>,
    phi: BTreeMap<i32, Complex64>,
) -> TwoBandModel {
    TwoBandModel {
        label: label.into(),
        rho,
        theta,
        phi,
        origin: None,
    }
}

/// Which square-root branch `E_± = ±√Q` (principal root for `+`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Band {
    Plus,
    Minus,
}

impl Band {
    pub fn sign(self) -> f64 {
        match self {
            Band::Plus => 1.0,
            Band::Minus => -1.0,
        }
    }
}

/// The three `d` components as Laurent polynomials in `β = e^{ik}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DVector {
    pub dx: LaurentPolynomial,
    pub dy: LaurentPolynomial,
    pub dz: LaurentPolynomial,
}

/// `Σ_n c_n β^{−n}` for a hopping map.
fn symbol_of(hops: &BTreeMap<i32, Complex64>) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(hops.iter().map(|(&n, &c)| (-n, c)))
}

impl TwoBandModel {
    /// `Θ(β) = Σ θ_n β^{−n} = d_x − i d_y`, the upper off-diagonal of `H`.
    pub fn theta_symbol(&self) -> LaurentPolynomial {
        symbol_of(&self.theta)
    }

    /// `Φ(β) = Σ φ_n β^{−n} = d_x + i d_y`, the lower off-diagonal of `H`.
    pub fn phi_symbol(&self) -> LaurentPolynomial {
        symbol_of(&self.phi)
    }

    /// `P(β) = Σ ρ_n β^{−n} = d_z`.
    pub fn rho_symbol(&self) -> LaurentPolynomial {
        symbol_of(&self.rho)
    }

    /// Hermiticity of the real-space Hamiltonian:
    /// `ρ_{−n} = ρ_n*` and `θ_{−n} = φ_n*` for all `n`.
    pub fn is_hermitian(&self) -> bool {
        self.is_hermitian_within(1e-12)
    }

    /// [`TwoBandModel::is_hermitian`] with an explicit tolerance.
    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        let get = |m: &BTreeMap<i32, Complex64>, n: i32| m.get(&n).copied().unwrap_or(re(0.0));
        let rho_ok = self
            .rho
            .keys()
            .all(|&n| (get(&self.rho, -n) - get(&self.rho, n).conj()).norm() <= tol);
        let keys: Vec<i32> = self.theta.keys().chain(self.phi.keys()).copied().collect();
        let off_ok = keys
            .iter()
            .all(|&n| (get(&self.theta, -n) - get(&self.phi, n).conj()).norm() <= tol);
        rho_ok && off_ok
    }

    /// Largest hopping range `max |n|` over all three maps.
    pub fn range(&self) -> i32 {
        self.rho
            .keys()
            .chain(self.theta.keys())
            .chain(self.phi.keys())
            .map(|n| n.abs())
            .max()
            .unwrap_or(0)
    }
}

/// The `d` vector of a model.
pub fn d_vector(model: &TwoBandModel) -> DVector {
    let theta = model.theta_symbol();
    let phi = model.phi_symbol();
    DVector {
        dx: (&theta + &phi).scale(re(0.5)),
        dy: (&phi - &theta).scale(Complex64::new(0.0, -0.5)),
        dz: model.rho_symbol(),
    }
}

/// The symbol `Q(β) = d_x² + d_y² + d_z²`.
///
/// Computed as `Θ Φ + d_z²`, which is algebraically identical and avoids
/// round-off residue from the cancellations in `d_x² + d_y²`.
pub fn q_polynomial(model: &TwoBandModel) -> LaurentPolynomial {
    let rho = model.rho_symbol();
    &(&model.theta_symbol() * &model.phi_symbol()) + &(&rho * &rho)
}

/// The 2×2 Bloch Hamiltonian `[[d_z, d_x − i d_y], [d_x + i d_y, −d_z]]` at `k`.
pub fn bloch_hamiltonian(model: &TwoBandModel, k: f64) -> [[Complex64; 2]; 2] {
    bloch_hamiltonian_at(model, Complex64::from_polar(1.0, k))
}

/// The Bloch Hamiltonian evaluated at arbitrary complex `β ≠ 0`.
pub fn bloch_hamiltonian_at(model: &TwoBandModel, beta: Complex64) -> [[Complex64; 2]; 2] {
    let dz = model.rho_symbol().eval(beta);
    [
        [dz, model.theta_symbol().eval(beta)],
        [model.phi_symbol().eval(beta), -dz],
    ]
}

/// Right eigenvector of `H(k)` for band `E_± = ±√Q(e^{ik})`.
///
/// Uses `(d_x − i d_y, E − d_z)/√(2E(E − d_z))`; when `E − d_z` is the
/// smaller of `E ∓ d_z` the equivalent form `(E + d_z, d_x + i d_y)/√(2E(E + d_z))`
/// is used instead, which stays regular where the first one degenerates.
pub fn bloch_eigenvector(model: &TwoBandModel, k: f64, band: Band) -> Result<[Complex64; 2]> {
    let beta = Complex64::from_polar(1.0, k);
    let h = bloch_hamiltonian_at(model, beta);
    let (dz, theta, phi) = (h[0][0], h[0][1], h[1][0]);
    // `E_+` is the principal root of the symbol evaluated exactly as in
    // `q_polynomial`, so that the branch matches other callers bit for bit.
    let q = q_polynomial(model).eval(beta);
    let hop_scale: f64 = model
        .rho
        .values()
        .chain(model.theta.values())
        .chain(model.phi.values())
        .map(|c| c.norm())
        .sum();
    if q.norm() <= 1e-12 * hop_scale * hop_scale {
        return Err(Error::ExceptionalPoint { re: beta.re, im: beta.im });
    }
    let e = q.sqrt() * band.sign();
    let (minus, plus) = (e - dz, e + dz);
    if minus.norm() >= plus.norm() {
        let norm = (e * minus * 2.0).sqrt();
        Ok([theta / norm, minus / norm])
    } else {
        let norm = (e * plus * 2.0).sqrt();
        Ok([plus / norm, phi / norm])
    }
}
