//! Bloch (periodic) and non-Bloch (open-chain) energy spectra.
//!
//! - [`pbc_spectrum`]: `±√Q(e^{ik})` on a uniform `k` grid.
//! - [`obc_spectrum`]: eigenvalues of the open chain, either from the full
//!   `2N × 2N` block matrix, from the reduced `N × N` matrix `𝓗₀` whose
//!   symbol is `Q`, or from the closed form available for models II/III.
//! - [`obc_spectrum_gbz`]: generalized Brillouin zone samples.
//! - [`classify_pbc_geometry`], [`bloch_points`], [`edge_flags`]: diagnostics.
//!
//! Every [`SpectrumSet`] carries its provenance so that mixed outputs can be
//! written to a single table.

mod gbz;
mod obc;

use std::f64::consts::PI;

pub use gbz::{bloch_points, default_angle_grid, default_radius_grid, gbz_spectrum, obc_spectrum_gbz, GbzSample};
pub use obc::{build_h0, build_obc_hamiltonian, gauge_ratio, obc_spectrum, ObcMethod};

use crate::model::{q_polynomial, TwoBandModel};
use crate::numerics::hausdorff;
use crate::{Complex64, Error, Result};

/// Where a set of energies came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    PbcSampled,
    ObcDenseFull,
    ObcDenseH0,
    ObcClosedForm,
    ObcGbz,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::PbcSampled => "PBC_SAMPLED",
            Provenance::ObcDenseFull => "OBC_DENSE_FULL",
            Provenance::ObcDenseH0 => "OBC_DENSE_H0",
            Provenance::ObcClosedForm => "OBC_CLOSED_FORM",
            Provenance::ObcGbz => "OBC_GBZ",
        }
    }
}

/// A finite sample of complex energies.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectrumSet {
    pub energies: Vec<Complex64>,
    pub provenance: Provenance,
    /// Per-energy parameter: `k` (PBC), `θ` (closed form), `arg β` (GBZ) or
    /// the eigenvalue index (dense solves).
    pub parameter: Vec<f64>,
    /// Number of unit cells for open-chain spectra.
    pub cells: Option<usize>,
    /// Per-energy isolated-eigenvalue (edge state) flag.
    pub edge: Vec<bool>,
}

impl SpectrumSet {
    /// Squared energies `E²`.
    pub fn energies_sq(&self) -> Vec<Complex64> {
        self.energies.iter().map(|e| e * e).collect()
    }

    /// Energies not flagged as isolated edge states.
    pub fn bulk(&self) -> Vec<Complex64> {
        self.energies
            .iter()
            .zip(&self.edge)
            .filter(|(_, &edge)| !edge)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Energies flagged as isolated edge states.
    pub fn isolated(&self) -> Vec<Complex64> {
        self.energies
            .iter()
            .zip(&self.edge)
            .filter(|(_, &edge)| edge)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Hausdorff distance between the set and its mirror image `−E`.
    pub fn chiral_defect(&self) -> f64 {
        let mirrored: Vec<Complex64> = self.energies.iter().map(|e| -e).collect();
        hausdorff(&self.energies, &mirrored)
    }
}

/// `k_j = −π + 2πj/num_k`, `j = 0 … num_k−1`.
pub fn k_grid(num_k: usize) -> Vec<f64> {
    (0..num_k)
        .map(|j| -PI + 2.0 * PI * j as f64 / num_k as f64)
        .collect()
}

/// Periodic-chain energies `±√Q(e^{ik})` on a uniform grid.
///
/// The upper band is listed first, then the lower band. The square-root
/// branch of the upper band is continued along `k` (each value takes the
/// sign closest to its predecessor) so that plotted curves stay connected.
pub fn pbc_spectrum(model: &TwoBandModel, num_k: usize) -> Result<SpectrumSet> {
    if num_k < 8 {
        return Err(Error::InvalidInput(format!("num_k must be ≥ 8, got {num_k}")));
    }
    let q = q_polynomial(model);
    let ks = k_grid(num_k);
    let mut upper = Vec::with_capacity(num_k);
    let mut prev: Option<Complex64> = None;
    for &k in &ks {
        let root = q.eval_k(k).sqrt();
        let e = match prev {
            Some(p) if (p + root).norm() < (p - root).norm() => -root,
            _ => root,
        };
        upper.push(e);
        prev = Some(e);
    }
    let mut energies = upper.clone();
    energies.extend(upper.iter().map(|e| -e));
    let mut parameter = ks.clone();
    parameter.extend(&ks);
    Ok(SpectrumSet {
        edge: vec![false; energies.len()],
        energies,
        provenance: Provenance::PbcSampled,
        parameter,
        cells: None,
    })
}

/// Minimum of `|Q(e^{ik})|` over a uniform grid.
///
/// Values below `1e-9` indicate an exceptional point on (or very near) the
/// Brillouin zone, where the two bands are not separable.
pub fn separability_check(model: &TwoBandModel, num_k: usize) -> Result<f64> {
    if num_k < 64 {
        return Err(Error::InvalidInput(format!("num_k must be ≥ 64, got {num_k}")));
    }
    let q = q_polynomial(model);
    Ok(k_grid(num_k)
        .into_iter()
        .map(|k| q.eval_k(k).norm())
        .fold(f64::INFINITY, f64::min))
}

/// Shape of the periodic `E²` curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PbcGeometry {
    /// Arcs enclosing no area (no skin effect expected).
    OpenArcs,
    /// One or more loops enclosing a nonzero area.
    ClosedLoops,
}

/// Result of [`classify_pbc_geometry`].
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GeometryReport {
    pub geometry: PbcGeometry,
    /// Signed shoelace area enclosed by `k ↦ Q(e^{ik})`.
    pub loop_area: f64,
    /// Largest distance between two samples of the curve.
    pub diameter: f64,
}

/// Loop-versus-arc classification of the periodic `E²` curve.
///
/// The curve is `OPEN_ARCS` when `|area| ≤ area_tol · diameter²`; the default
/// relative tolerance is `1e-6`.
pub fn classify_pbc_geometry(model: &TwoBandModel, num_k: usize) -> Result<GeometryReport> {
    classify_pbc_geometry_with(model, num_k, 1e-6)
}

/// [`classify_pbc_geometry`] with an explicit relative area tolerance.
pub fn classify_pbc_geometry_with(model: &TwoBandModel, num_k: usize, area_tol: f64) -> Result<GeometryReport> {
    if num_k < 256 {
        return Err(Error::InvalidInput(format!("num_k must be ≥ 256, got {num_k}")));
    }
    let q = q_polynomial(model);
    let pts: Vec<Complex64> = k_grid(num_k).into_iter().map(|k| q.eval_k(k)).collect();
    let mut twice_area = 0.0;
    for i in 0..pts.len() {
        let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
        twice_area += a.re * b.im - b.re * a.im;
    }
    let area = 0.5 * twice_area;
    let mut diameter: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            diameter = diameter.max((pts[i] - pts[j]).norm());
        }
    }
    let geometry = if area.abs() <= area_tol * diameter * diameter {
        PbcGeometry::OpenArcs
    } else {
        PbcGeometry::ClosedLoops
    };
    Ok(GeometryReport { geometry, loop_area: area, diameter })
}

/// Flags isolated eigenvalues (boundary states) in an open-chain spectrum.
///
/// With `nn(i)` the nearest-neighbour distance of energy `i`, `j` its
/// nearest neighbour and `m` the median of `nn`, energy `i` is flagged when
///
/// - it belongs to a small cluster (at most `max(2, n/20)` members and less
///   than a quarter of the set) after linking all pairs closer than
///   `factor · m`, which catches degenerate pairs such as zero modes; or
/// - `nn(i)` exceeds `factor` times the local spacing `max(nn(j), m/factor)`
///   at its nearest neighbour, which catches edge states that sit close to a
///   dense bulk arc in absolute terms but far from it relative to the local
///   eigenvalue density.
pub fn edge_flags(energies: &[Complex64], factor: f64) -> Vec<bool> {
    let n = energies.len();
    if n < 3 {
        return vec![false; n];
    }
    let mut nn = vec![f64::INFINITY; n];
    let mut nearest = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = (energies[i] - energies[j]).norm();
                if d < nn[i] {
                    nn[i] = d;
                    nearest[i] = j;
                }
            }
        }
    }
    let mut sorted = nn.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[n / 2];
    if median == 0.0 {
        return vec![false; n];
    }
    // Single-linkage clusters at threshold factor · median.
    let link = factor * median;
    let mut cluster = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if cluster[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        cluster[start] = id;
        let mut stack = vec![start];
        let mut size = 0usize;
        while let Some(i) = stack.pop() {
            size += 1;
            for j in 0..n {
                if cluster[j] == usize::MAX && (energies[i] - energies[j]).norm() <= link {
                    cluster[j] = id;
                    stack.push(j);
                }
            }
        }
        sizes.push(size);
    }
    let small = (n / 20).max(2);
    (0..n)
        .map(|i| {
            let size = sizes[cluster[i]];
            let local = nn[nearest[i]].max(median / factor);
            (size <= small && 4 * size < n) || nn[i] > factor * local
        })
        .collect()
}

/// Default contrast factor for [`edge_flags`].
pub const EDGE_FACTOR: f64 = 5.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_flags_find_outlier_near_dense_line() {
        let mut e: Vec<Complex64> = (0..100).map(|i| Complex64::new(i as f64 * 0.01, 0.0)).collect();
        e.push(Complex64::new(0.5, 0.1));
        let flags = edge_flags(&e, EDGE_FACTOR);
        assert!(flags[100]);
        assert_eq!(flags.iter().filter(|&&f| f).count(), 1);
    }
}
