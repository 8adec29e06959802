//! Dense complex polynomials. These carry the operator's monomial images
//! `U_{n,q}(e_m; z)` and everything derived from them; Horner evaluation is
//! the contract for equality checks, and coefficient-wise equality holds in
//! exact-rational mode.

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::qcore::{ComplexEval, QContext};
use crate::scalar::Scalar;

/// A polynomial `c_0 + c_1 z + ... + c_d z^d` with dense coefficients.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly<S: Scalar> {
    coeffs: Vec<Cx<S>>,
}

impl<S: Scalar> ComplexPoly<S> {
    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ComplexPoly { coeffs: vec![Cx::one()] }
    }

    pub fn constant(c: Cx<S>) -> Self {
        let mut p = ComplexPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `z^m`.
    pub fn monomial(m: usize) -> Self {
        let mut coeffs = vec![Cx::zero(); m + 1];
        coeffs[m] = Cx::one();
        ComplexPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Cx<S>>) -> Self {
        let mut p = ComplexPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_real_coeffs(coeffs: Vec<S>) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(Cx::real).collect())
    }

    pub fn coeffs(&self) -> &[Cx<S>] {
        &self.coeffs
    }

    /// Coefficient of `z^j` (zero beyond the stored degree).
    pub fn coeff(&self, j: usize) -> Cx<S> {
        self.coeffs.get(j).cloned().unwrap_or_else(Cx::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree after trailing-zero trim; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Cx<S>) -> Cx<S> {
        let mut acc = Cx::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            coeffs.push(self.coeff(j) + rhs.coeff(j));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            coeffs.push(self.coeff(j) - rhs.coeff(j));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Cx::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    pub fn scale_cx(&self, s: &Cx<S>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        ComplexPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    /// Multiply by `z (1 - z)`.
    pub fn mul_z_one_minus_z(&self) -> Self {
        let mut coeffs = vec![Cx::zero(); self.coeffs.len() + 2];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j + 1] = coeffs[j + 1].clone() + c.clone();
            coeffs[j + 2] = coeffs[j + 2].clone() - c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// The q-derivative on coefficients: `z^j -> [j]_q z^(j-1)`, exact for
    /// every `q > 0` including `q = 1`, where it is the classical derivative.
    pub fn q_derivative(&self, q: &S) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() - 1);
        let mut qint = S::zero();
        let mut qpow = S::one();
        for c in &self.coeffs[1..] {
            qint = qint + qpow.clone();
            qpow = qpow.clone() * q.clone();
            coeffs.push(c.scale(&qint));
        }
        Self::from_coeffs(coeffs)
    }

    /// Drop coefficients above `deg`. They must be mathematically zero; in
    /// exact mode a nonzero drop is reported as an internal invariant
    /// violation, in float mode the rounding residue is discarded.
    pub fn truncate_degree(&mut self, deg: usize) -> Result<()> {
        if self.coeffs.len() <= deg + 1 {
            return Ok(());
        }
        if S::is_exact() {
            for (j, c) in self.coeffs[deg + 1..].iter().enumerate() {
                if !c.is_zero() {
                    return Err(Error::invariant(format!(
                        "expected zero coefficient at degree {} during cap to {deg}",
                        deg + 1 + j
                    )));
                }
            }
        }
        self.coeffs.truncate(deg + 1);
        self.trim();
        Ok(())
    }

    /// Largest coefficient modulus-squared, for scale-relative comparisons.
    pub fn max_coeff_modulus_sq(&self) -> S {
        let mut best = S::zero();
        for c in &self.coeffs {
            let m = c.modulus_sq();
            if m > best {
                best = m;
            }
        }
        best
    }
}

/// Polynomials evaluate everywhere and expose their derivative at 0.
impl<S: Scalar> ComplexEval<S> for ComplexPoly<S> {
    fn eval(&self, z: &Cx<S>) -> Result<Cx<S>> {
        Ok(ComplexPoly::eval(self, z))
    }

    fn derivative_at_zero(&self) -> Result<Cx<S>> {
        Ok(self.coeff(1))
    }
}

/// Free-function form of the spec's q-derivative on polynomials, matching
/// [`ComplexPoly::q_derivative`] but taking the context.
pub fn poly_q_derivative<S: Scalar>(p: &ComplexPoly<S>, ctx: &QContext<S>) -> ComplexPoly<S> {
    p.q_derivative(ctx.q())
}
