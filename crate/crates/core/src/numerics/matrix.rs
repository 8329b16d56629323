//! Finite complex vectors and dense square matrices.

use crate::{Complex64, Error, Result};

/// A list of finite complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVec {
    entries: Vec<Complex64>,
}

impl ComplexVec {
    /// Wraps `entries`, rejecting NaN and infinite values.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::DegenerateInput(format!("non-finite entry at index {i}")));
        }
        Ok(Self { entries })
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseComplexMatrix {
    order: usize,
    entries: Vec<Complex64>,
}

impl DenseComplexMatrix {
    /// The `order × order` zero matrix.
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![Complex64::new(0.0, 0.0); order * order],
        }
    }

    /// The identity matrix.
    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_row_major(order: usize, entries: Vec<Complex64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::DegenerateInput("matrix order must be positive".into()));
        }
        if entries.len() != order * order {
            return Err(Error::DegenerateInput(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::DegenerateInput("non-finite matrix entry".into()));
        }
        Ok(Self { order, entries })
    }

    /// Builds a matrix from a closure `f(row, col)`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        Self { order, entries }
    }

    /// Companion matrix of a polynomial given highest degree first.
    ///
    /// The eigenvalues of the result are the roots of the polynomial.
    pub fn companion(coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::EmptyRoots);
        }
        let lead = coeffs[0];
        if lead == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateInput("zero leading coefficient".into()));
        }
        let n = coeffs.len() - 1;
        let mut m = Self::zeros(n);
        for j in 0..n {
            m[(0, j)] = -coeffs[j + 1] / lead;
        }
        for i in 1..n {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.order).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "order mismatch in matmul");
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "order mismatch in add");
        Self {
            order: self.order,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.order, "length mismatch in mul_vec");
        (0..self.order)
            .map(|i| {
                self.entries[i * self.order..(i + 1) * self.order]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// True when `self == selfᴴ` up to an absolute tolerance.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.order).all(|i| {
            (0..self.order).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol)
        })
    }

    /// Diagonal similarity `D⁻¹ M D` with `D = diag(d)`.
    ///
    /// Entry `(i, j)` becomes `M_ij · d_j / d_i`; the spectrum is unchanged.
    pub fn diagonal_similarity(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.order, "length mismatch in diagonal_similarity");
        Self::from_fn(self.order, |i, j| self[(i, j)] * (d[j] / d[i]))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DenseComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.order + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.order + j]
    }
}
