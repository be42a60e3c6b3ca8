//! Dense complex polynomials and eigenvalue-based root finding.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 100_000;
/// Deflation tolerances, tried in order. Machine epsilon itself stalls on
/// the exactly repeated eigenvalues of identical dark modes.
const SCHUR_TOLERANCES: [f64; 2] = [1e-15, 1e-13];

/// Polynomial with coefficients in ascending order of power.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: Complex64, c1: Complex64) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::constant(Complex64::new(0.0, 0.0));
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).copied().unwrap_or(zero) + other.coeffs.get(k).copied().unwrap_or(zero))
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Product of the given factors; the empty product is one.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Poly>) -> Poly {
        factors.into_iter().fold(Poly::constant(Complex64::new(1.0, 0.0)), |acc, f| acc.mul(f))
    }

    /// Roots as eigenvalues of the companion matrix.
    ///
    /// The variable is rescaled by `scale` before forming the companion
    /// matrix so that its entries stay O(1), and each root is then refined by
    /// a few guarded Newton steps on the original polynomial.
    pub fn roots(&self, scale: f64) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        // q(y) = p(scale * y) / (lead * scale^n), monic.
        let lead = self.leading();
        let mut monic = Vec::with_capacity(n);
        let mut s_pow = 1.0;
        let s_n = scale.powi(n as i32);
        for c in &self.coeffs[..n] {
            monic.push(c * s_pow / (lead * s_n));
            s_pow *= scale;
        }
        let mut companion = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for (i, c) in monic.iter().enumerate() {
            companion[(i, n - 1)] = -c;
        }
        let mut roots: Vec<Complex64> = eigenvalues(companion)?.into_iter().map(|y| y * scale).collect();

        let deriv = self.derivative();
        for r in roots.iter_mut() {
            let mut res = self.eval(*r).norm();
            for _ in 0..3 {
                let d = deriv.eval(*r);
                if d.norm() == 0.0 {
                    break;
                }
                let cand = *r - self.eval(*r) / d;
                let cand_res = self.eval(cand).norm();
                if cand_res < res {
                    *r = cand;
                    res = cand_res;
                } else {
                    break;
                }
            }
        }
        Ok(roots)
    }
}

/// Eigenvalues of a complex square matrix via the Schur form.
pub fn eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    for eps in SCHUR_TOLERANCES {
        if let Some(schur) = Schur::try_new(m.clone(), eps, SCHUR_MAX_ITER) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|i| t[(i, i)]).collect());
        }
    }
    Err(Error::EigenFailure)
}

/// Sorts by real part, ties broken by imaginary part.
pub fn sort_by_real(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_and_derivative() {
        // (x - 1)(x + 2) = x^2 + x - 2
        let p = Poly::linear(c(-1.0, 0.0), c(1.0, 0.0)).mul(&Poly::linear(c(2.0, 0.0), c(1.0, 0.0)));
        assert_eq!(p.coeffs(), &[c(-2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.eval(c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(p.derivative().coeffs(), &[c(1.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn recovers_known_complex_roots() {
        // Centered cluster like the mechanical poles, plus a cavity-like root.
        let want = [c(0.0, -1e-4), c(0.0, -0.5e-4), c(1e-4, -0.7e-4), c(0.0, -1.0), c(3.0, 2.0)];
        let p = Poly::product(&want.iter().map(|r| Poly::linear(-r, c(1.0, 0.0))).collect::<Vec<_>>());
        let got = p.roots(1.0).unwrap();
        assert_eq!(got.len(), want.len());
        for w in &want {
            let nearest = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-12, "{w}: {nearest:e}");
        }
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(0.0, 3.0),
                c(0.0, 0.0),
                c(-2.0, 0.5),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, -4.0),
            ],
        );
        let mut ev = eigenvalues(m).unwrap();
        sort_by_real(&mut ev);
        assert!((ev[0] - c(-2.0, 0.5)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, -4.0)).norm() < 1e-12);
        assert!((ev[2] - c(1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_padding_trimmed() {
        let p = Poly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), 0);
        assert!(p.roots(1.0).unwrap().is_empty());
    }
}
