//! Finite two-sided power series `Σ_{n=n_min}^{n_max} c_n βⁿ` over ℂ.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::Complex64;

/// A Laurent polynomial with exact complex coefficient arithmetic.
///
/// The stored range is trimmed so that the extreme coefficients are nonzero;
/// the zero polynomial is represented by an empty coefficient list.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LaurentPolynomial {
    n_min: i32,
    coeffs: Vec<Complex64>,
}

impl LaurentPolynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self { n_min: 0, coeffs: Vec::new() }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    /// The monomial `c βⁿ`.
    pub fn monomial(n: i32, c: Complex64) -> Self {
        Self::new(n, vec![c])
    }

    /// Coefficients for powers `n_min, n_min+1, …`; exact zeros at either end
    /// are trimmed.
    pub fn new(n_min: i32, coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { n_min, coeffs };
        p.trim_exact();
        p
    }

    /// Builds `Σ c_n βⁿ` from a sparse power → coefficient map.
    pub fn from_terms<I: IntoIterator<Item = (i32, Complex64)>>(terms: I) -> Self {
        let mut map: BTreeMap<i32, Complex64> = BTreeMap::new();
        for (n, c) in terms {
            *map.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let (Some(&lo), Some(&hi)) = (map.keys().next(), map.keys().next_back()) else {
            return Self::zero();
        };
        let coeffs = (lo..=hi)
            .map(|n| map.get(&n).copied().unwrap_or(Complex64::new(0.0, 0.0)))
            .collect();
        Self::new(lo, coeffs)
    }

    fn trim_exact(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        while self.coeffs.last() == Some(&zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == zero).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.n_min += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.n_min = 0;
        }
    }

    /// Copy with coefficients of modulus `≤ rel_tol · max|c|` set to zero.
    ///
    /// Used to remove round-off residue left by cancellations before a
    /// polynomial is handed to the root finder.
    pub fn chopped(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_abs_coeff();
        Self::new(
            self.n_min,
            self.coeffs
                .iter()
                .map(|&c| if c.norm() <= cut { Complex64::new(0.0, 0.0) } else { c })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when the only power present is `β⁰`.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.n_min == 0 && self.coeffs.len() == 1)
    }

    /// Lowest power with a nonzero coefficient (0 for the zero polynomial).
    pub fn n_min(&self) -> i32 {
        self.n_min
    }

    /// Highest power with a nonzero coefficient (0 for the zero polynomial).
    pub fn n_max(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.n_min + self.coeffs.len() as i32 - 1
        }
    }

    /// Coefficient of `βⁿ` (zero outside the stored range).
    pub fn coeff(&self, n: i32) -> Complex64 {
        let idx = n - self.n_min;
        if idx < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs
            .get(idx as usize)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Coefficients from `n_min` to `n_max`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Iterator over `(power, coefficient)` for the stored range.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.n_min + i as i32, c))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates at `β ≠ 0` (Horner's rule on the polynomial part).
    pub fn eval(&self, beta: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let poly = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * beta + c);
        poly * beta.powi(self.n_min)
    }

    /// Evaluates at `β = e^{ik}`.
    pub fn eval_k(&self, k: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, k))
    }

    /// `dP/dβ`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms().map(|(n, c)| (n - 1, c * n as f64)))
    }

    /// Euler operator `β dP/dβ = Σ n c_n βⁿ`; `dP/dk = i·(β dP/dβ)` on `β = e^{ik}`.
    pub fn euler(&self) -> Self {
        Self::from_terms(self.terms().map(|(n, c)| (n, c * n as f64)))
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.n_min, self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `P(1/β)`: reflects powers `n → −n`.
    pub fn reflect(&self) -> Self {
        Self::from_terms(self.terms().map(|(n, c)| (-n, c)))
    }

    /// Ordinary polynomial `β^{−n_min} P(β)`, highest degree first.
    ///
    /// Its roots are the nonzero roots of `P` (the lowest coefficient is
    /// nonzero by the trimming invariant).
    pub fn numerator_highest_first(&self) -> Vec<Complex64> {
        self.coeffs.iter().rev().copied().collect()
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().chain(rhs.terms().map(|(n, c)| (n, -c))))
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPolynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPolynomial::new(self.n_min + rhs.n_min, out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $f(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn trims_and_tracks_range() {
        let p = LaurentPolynomial::new(-2, vec![c(0.0), c(1.0), c(2.0), c(0.0)]);
        assert_eq!((p.n_min(), p.n_max()), (-1, 0));
        assert_eq!(p.coeff(-1), c(1.0));
        assert!(LaurentPolynomial::new(3, vec![c(0.0)]).is_zero());
    }

    #[test]
    fn product_of_beta_plus_inverse() {
        // (β + 1/β)² = β² + 2 + β⁻²
        let p = LaurentPolynomial::from_terms([(1, c(1.0)), (-1, c(1.0))]);
        let sq = &p * &p;
        assert_eq!(sq, LaurentPolynomial::from_terms([(2, c(1.0)), (0, c(2.0)), (-2, c(1.0))]));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivative_and_euler() {
        let p = LaurentPolynomial::from_terms([(2, c(3.0)), (-1, c(2.0))]);
        assert_eq!(p.derivative(), LaurentPolynomial::from_terms([(1, c(6.0)), (-2, c(-2.0))]));
        assert_eq!(p.euler(), LaurentPolynomial::from_terms([(2, c(6.0)), (-1, c(-2.0))]));
        let beta = Complex64::new(0.3, -1.2);
        assert!((p.euler().eval(beta) - beta * p.derivative().eval(beta)).norm() < 1e-12);
    }
}
