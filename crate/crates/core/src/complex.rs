//! Complex values over a generic [`Scalar`], used for disk variables and
//! polynomial coefficients.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::{Compensated, Scalar};

/// A complex number with scalar components.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx<S: Scalar> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Cx<S> {
    pub fn new(re: S, im: S) -> Self {
        Cx { re, im }
    }

    pub fn real(re: S) -> Self {
        Cx { re, im: S::zero() }
    }

    pub fn zero() -> Self {
        Cx { re: S::zero(), im: S::zero() }
    }

    pub fn one() -> Self {
        Cx { re: S::one(), im: S::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Cx::real(S::from_int(v))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|self|^2`, exact in rational mode.
    pub fn modulus_sq(&self) -> S {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// `|self|`. Exact when a component is zero or the squared modulus is a
    /// perfect square; otherwise follows [`Scalar::sqrt`] semantics.
    pub fn modulus(&self) -> S {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.modulus_sq().sqrt()
    }

    /// `|re| + |im|`, a cheap exact upper bound for `|self|`.
    pub fn modulus_upper(&self) -> S {
        self.re.abs() + self.im.abs()
    }

    pub fn scale(&self, s: &S) -> Self {
        Cx { re: self.re.clone() * s.clone(), im: self.im.clone() * s.clone() }
    }

    pub fn powu(&self, e: u32) -> Self {
        let mut acc = Cx::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<S: Scalar> Add for Cx<S> {
    type Output = Cx<S>;
    fn add(self, rhs: Cx<S>) -> Cx<S> {
        Cx { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<S: Scalar> Sub for Cx<S> {
    type Output = Cx<S>;
    fn sub(self, rhs: Cx<S>) -> Cx<S> {
        Cx { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<S: Scalar> Mul for Cx<S> {
    type Output = Cx<S>;
    fn mul(self, rhs: Cx<S>) -> Cx<S> {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Cx { re, im }
    }
}

impl<S: Scalar> Div for Cx<S> {
    type Output = Cx<S>;
    fn div(self, rhs: Cx<S>) -> Cx<S> {
        let d = rhs.modulus_sq();
        let re = (self.re.clone() * rhs.re.clone() + self.im.clone() * rhs.im.clone())
            / d.clone();
        let im = (self.im * rhs.re - self.re * rhs.im) / d;
        Cx { re, im }
    }
}

impl<S: Scalar> Neg for Cx<S> {
    type Output = Cx<S>;
    fn neg(self) -> Cx<S> {
        Cx { re: -self.re, im: -self.im }
    }
}

impl<S: Scalar> fmt::Display for Cx<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}, {})", self.re, self.im)
        }
    }
}

/// Componentwise compensated accumulator for complex sums.
#[derive(Clone, Debug)]
pub struct CompensatedCx<S: Scalar> {
    re: Compensated<S>,
    im: Compensated<S>,
}

impl<S: Scalar> CompensatedCx<S> {
    pub fn new() -> Self {
        CompensatedCx { re: Compensated::new(), im: Compensated::new() }
    }

    pub fn add(&mut self, v: Cx<S>) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn total(&self) -> Cx<S> {
        Cx { re: self.re.total(), im: self.im.total() }
    }
}

impl<S: Scalar> Default for CompensatedCx<S> {
    fn default() -> Self {
        Self::new()
    }
}
