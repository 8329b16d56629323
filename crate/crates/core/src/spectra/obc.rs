//! Open-chain Hamiltonians and their spectra.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{edge_flags, Provenance, SpectrumSet, EDGE_FACTOR};
use crate::model::{q_polynomial, LaurentPolynomial, NamedModel, TwoBandModel};
use crate::numerics::{complex_eigenvalues, DenseComplexMatrix};
use crate::{Complex64, Error, Result};

/// How the open-chain spectrum is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObcMethod {
    /// Eigenvalues of the full `2N × 2N` block matrix.
    Full,
    /// `±√` of the eigenvalues of the `N × N` Toeplitz matrix with symbol `Q`.
    H0,
    /// Closed form for models II and III.
    ClosedForm,
}

fn toeplitz(hops: &BTreeMap<i32, Complex64>, sign: f64) -> impl Fn(usize, usize) -> Complex64 + '_ {
    move |i, j| {
        let d = i as i64 - j as i64;
        hops.get(&(d as i32))
            .map(|&c| c * sign)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// The open-chain Hamiltonian `[[𝓐, 𝓑₁], [𝓑₂, −𝓐]]` with Toeplitz blocks
/// `𝓐_{n,l} = ρ_{n−l}`, `(𝓑₁)_{n,l} = θ_{n−l}`, `(𝓑₂)_{n,l} = φ_{n−l}`.
///
/// Rows `0..N` hold the A sublattice, rows `N..2N` the B sublattice.
pub fn build_obc_hamiltonian(model: &TwoBandModel, cells: usize) -> Result<DenseComplexMatrix> {
    if cells < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 cells, got {cells}")));
    }
    let a = toeplitz(&model.rho, 1.0);
    let minus_a = toeplitz(&model.rho, -1.0);
    let b1 = toeplitz(&model.theta, 1.0);
    let b2 = toeplitz(&model.phi, 1.0);
    Ok(DenseComplexMatrix::from_fn(2 * cells, |i, j| {
        match (i < cells, j < cells) {
            (true, true) => a(i, j),
            (true, false) => b1(i, j - cells),
            (false, true) => b2(i - cells, j),
            (false, false) => minus_a(i - cells, j - cells),
        }
    }))
}

/// The `N × N` Toeplitz matrix `𝓗₀` whose symbol is `Q(β) = Σ σ_m β^m`.
///
/// Entry `(n, l)` is `σ_{l−n}`: the coefficient of `β` sits on the
/// superdiagonal and that of `β⁻¹` on the subdiagonal. Away from the two
/// ends this coincides with `𝓐² + 𝓑₁𝓑₂`; it is built directly from the
/// symbol rather than from products of truncated blocks.
pub fn build_h0(model: &TwoBandModel, cells: usize) -> Result<DenseComplexMatrix> {
    if cells < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 cells, got {cells}")));
    }
    let q = q_polynomial(model);
    Ok(DenseComplexMatrix::from_fn(cells, |i, j| q.coeff(j as i32 - i as i32)))
}

/// Radius `r` of the diagonal gauge `D = diag(rⁿ)` that balances the
/// outermost coefficients of `Q`: `|σ_min r^{n_min}| = |σ_max r^{n_max}|`.
///
/// The gauged Toeplitz matrices have symbol `Q(rβ)`; for tridiagonal `Q`
/// this is `r = √|σ₋₁/σ₁|`, which makes `𝓗₀` symmetric when the product of
/// the off-diagonals is positive. Returns `1` when `Q` has no negative or no
/// positive powers.
pub fn gauge_ratio(q: &LaurentPolynomial) -> f64 {
    let (lo, hi) = (q.n_min(), q.n_max());
    if lo >= 0 || hi <= 0 {
        return 1.0;
    }
    let r = (q.coeff(lo).norm() / q.coeff(hi).norm()).powf(1.0 / (hi - lo) as f64);
    if r.is_finite() && r > 0.0 {
        r
    } else {
        1.0
    }
}

fn gauge_vector(r: f64, cells: usize, copies: usize) -> Vec<f64> {
    // Center the exponent so neither end under- or overflows.
    let mid = (cells as f64 - 1.0) / 2.0;
    let one: Vec<f64> = (0..cells).map(|n| r.powf(n as f64 - mid)).collect();
    one.iter().copied().cycle().take(cells * copies).collect()
}

fn sort_energies(e: &mut [Complex64]) {
    e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Open-chain spectrum of an `N`-cell chain.
///
/// Dense methods apply the gauge of [`gauge_ratio`] before the eigensolver,
/// which tames the exponential non-normality of skin-effect matrices without
/// changing their spectrum. Isolated eigenvalues are flagged in
/// [`SpectrumSet::edge`].
pub fn obc_spectrum(model: &TwoBandModel, cells: usize, method: ObcMethod) -> Result<SpectrumSet> {
    if cells < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 cells, got {cells}")));
    }
    let (mut energies, provenance, parameter) = match method {
        ObcMethod::Full => {
            let r = gauge_ratio(&q_polynomial(model));
            let h = build_obc_hamiltonian(model, cells)?.diagonal_similarity(&gauge_vector(r, cells, 2));
            let mut e = complex_eigenvalues(&h)?;
            sort_energies(&mut e);
            let p = (0..e.len()).map(|i| i as f64).collect();
            (e, Provenance::ObcDenseFull, p)
        }
        ObcMethod::H0 => {
            let r = gauge_ratio(&q_polynomial(model));
            let h0 = build_h0(model, cells)?.diagonal_similarity(&gauge_vector(r, cells, 1));
            let sq = complex_eigenvalues(&h0)?;
            let mut e: Vec<Complex64> = sq.iter().flat_map(|z| [z.sqrt(), -z.sqrt()]).collect();
            sort_energies(&mut e);
            let p = (0..e.len()).map(|i| i as f64).collect();
            (e, Provenance::ObcDenseH0, p)
        }
        ObcMethod::ClosedForm => {
            let (e, p) = closed_form(model, cells)?;
            (e, Provenance::ObcClosedForm, p)
        }
    };
    let edge = match method {
        ObcMethod::ClosedForm => vec![false; energies.len()],
        _ => edge_flags(&energies, EDGE_FACTOR),
    };
    energies.shrink_to_fit();
    Ok(SpectrumSet {
        energies,
        provenance,
        parameter,
        cells: Some(cells),
        edge,
    })
}

/// `E² = t² + t′² − δ² + 2t′√(t² − δ²) cos θ_j`, `θ_j = jπ/(N+1)`.
///
/// For `|δ| > t` the square root is imaginary and the same expression gives
/// `t² + t′² − δ² + 2i t′√(δ² − t²) cos θ_j`, a vertical segment in the `E²`
/// plane. Both signs of `E` are listed; the parameter column holds `θ_j`.
fn closed_form(model: &TwoBandModel, cells: usize) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let (t, tp, delta) = match model.origin {
        Some(NamedModel::ModelIi { t, tp, delta }) | Some(NamedModel::ModelIii { t, tp, delta }) => (t, tp, delta),
        _ => {
            return Err(Error::UnsupportedModel(format!(
                "closed-form open-chain spectrum is only available for model_ii/model_iii, not `{}`",
                model.label
            )))
        }
    };
    let a = t * t + tp * tp - delta * delta;
    let root = Complex64::new(t * t - delta * delta, 0.0).sqrt();
    let mut energies = Vec::with_capacity(2 * cells);
    let mut parameter = Vec::with_capacity(2 * cells);
    for sign in [1.0, -1.0] {
        for j in 1..=cells {
            let theta = j as f64 * PI / (cells as f64 + 1.0);
            let e2 = a + root * (2.0 * tp * theta.cos());
            energies.push(e2.sqrt() * sign);
            parameter.push(theta);
        }
    }
    Ok((energies, parameter))
}
