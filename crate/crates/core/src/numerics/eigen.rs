//! Eigenvalues of dense complex non-Hermitian matrices.
//!
//! Pipeline: diagonal balancing → Householder reduction to upper Hessenberg
//! form → single-shift complex QR with Wilkinson shifts and deflation. Only
//! eigenvalues are computed, so each QR sweep touches the active window only.

use super::DenseComplexMatrix;
use crate::{Complex64, Error, Result};

/// Tuning knobs for [`complex_eigenvalues_with`].
#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    /// Apply diagonal balancing before the reduction.
    pub balance: bool,
    /// Total QR iteration cap is `iterations_per_order · order`.
    pub iterations_per_order: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            balance: true,
            iterations_per_order: 100,
        }
    }
}

/// All eigenvalues of a square complex matrix (with multiplicity).
pub fn complex_eigenvalues(m: &DenseComplexMatrix) -> Result<Vec<Complex64>> {
    complex_eigenvalues_with(m, &EigenOptions::default())
}

/// [`complex_eigenvalues`] with explicit options.
pub fn complex_eigenvalues_with(m: &DenseComplexMatrix, opts: &EigenOptions) -> Result<Vec<Complex64>> {
    let n = m.order();
    if n == 0 {
        return Err(Error::DegenerateInput("matrix order must be positive".into()));
    }
    let mut h: Vec<Complex64> = m.as_slice().to_vec();
    if n == 1 {
        return Ok(h);
    }
    if opts.balance {
        balance(&mut h, n);
    }
    hessenberg(&mut h, n);
    hessenberg_qr(&mut h, n, opts.iterations_per_order * n)
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity scaling by powers of two (no permutations) so that
/// each row and its matching column have comparable norms.
fn balance(a: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(a[j * n + i]);
                    r += l1(a[i * n + j]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= SQRDX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[i * n + j] *= inv;
                    a[j * n + i] *= f;
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut [Complex64], n: usize) {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in &mut v[k + 1..n] {
            *vi /= vnorm;
        }
        // Left: A ← (I − 2vvᴴ) A on rows k+1.., columns k..
        for j in k..n {
            let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * a[i * n + j]).sum();
            let s = dot * 2.0;
            for i in k + 1..n {
                a[i * n + j] -= v[i] * s;
            }
        }
        // Right: A ← A (I − 2vvᴴ) on all rows, columns k+1..
        for i in 0..n {
            let dot: Complex64 = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum();
            let s = dot * 2.0;
            for j in k + 1..n {
                a[i * n + j] -= s * v[j].conj();
            }
        }
        for i in k + 2..n {
            a[i * n + k] = zero;
        }
    }
}

/// Rotation `[[c, s], [−s̄, c]]` (real `c`) mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

fn hessenberg_qr(h: &mut [Complex64], n: usize, max_iterations: usize) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut eig = vec![zero; n];
    let hnorm = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if hnorm == 0.0 {
        return Ok(eig);
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    loop {
        if hi == 0 {
            eig[0] = h[0];
            break;
        }
        // Locate the start `l` of the unreduced block ending at `hi`.
        let mut l = hi;
        while l > 0 {
            let sub = h[l * n + l - 1].norm();
            let mut diag = h[(l - 1) * n + l - 1].norm() + h[l * n + l].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= eps * diag || sub <= f64::MIN_POSITIVE {
                h[l * n + l - 1] = zero;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[hi * n + hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= max_iterations {
            return Err(Error::NoConvergence {
                method: "complex_eigenvalues",
                iterations: total,
                detail: format!("{} of {n} eigenvalues undeflated", hi + 1),
            });
        }
        total += 1;
        since_deflation += 1;

        let d = h[hi * n + hi];
        let mu = if since_deflation % 10 == 0 {
            // Exceptional shift to break cycles.
            let sub = h[hi * n + hi - 1];
            d + Complex64::new(0.75 * sub.re.abs() + sub.im.abs(), 0.0)
        } else {
            let a = h[(hi - 1) * n + hi - 1];
            let b = h[(hi - 1) * n + hi];
            let c = h[hi * n + hi - 1];
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let mid = (a + d) * 0.5;
            let (m1, m2) = (mid + disc, mid - disc);
            if (m1 - d).norm() <= (m2 - d).norm() { m1 } else { m2 }
        };

        for k in l..=hi {
            h[k * n + k] -= mu;
        }
        rots.clear();
        for k in l..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            for j in k..=hi {
                let x = h[k * n + j];
                let y = h[(k + 1) * n + j];
                h[k * n + j] = x * c + s * y;
                h[(k + 1) * n + j] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1) {
                let x = h[i * n + k];
                let y = h[i * n + k + 1];
                h[i * n + k] = x * c + y * s.conj();
                h[i * n + k + 1] = -x * s + y * c;
            }
        }
        for k in l..=hi {
            h[k * n + k] += mu;
        }
    }
    Ok(eig)
}
