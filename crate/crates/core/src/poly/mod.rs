//! Univariate and multivariate polynomial kernel.
//!
//! [`Poly`] stores coefficients in ascending order internally (`coeffs[i]`
//! multiplies `x^i`); the JSON format in [`json`] lists them with the
//! constant term last.

mod json;
mod multi;
mod newton;
mod resultant;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, C64};

pub use json::{AnyPoly, PolyJson};
pub use multi::{monomials, Monomial, MultiPoly};
pub use newton::{from_power_sums, power_sums};
pub use resultant::{discriminant, resultant, sylvester_matrix};
pub use roots::{roots, roots_with, RootOptions, RootSet, DEFAULT_TOL};

/// Dense univariate polynomial over a [`Scalar`] field.
#[derive(Clone, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

pub type RationalPoly = Poly<Rational>;
pub type ComplexPoly = Poly<C64>;

impl<S: Scalar> Poly<S> {
    /// Builds from ascending coefficients, trimming exact trailing zeros.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds from coefficients listed highest degree first.
    pub fn from_descending(mut coeffs: Vec<S>) -> Self {
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn from_i64s_descending(coeffs: &[i64]) -> Self {
        Self::from_descending(coeffs.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![S::zero(), S::one()] }
    }

    /// The monic polynomial with the given roots.
    pub fn from_roots(roots: &[S]) -> Self {
        roots
            .iter()
            .fold(Self::constant(S::one()), |acc, r| &acc * &Poly::new(vec![-r.clone(), S::one()]))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficients highest degree first.
    pub fn descending(&self) -> Vec<S> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// `a_k` in the monic convention `x^n + a_1 x^{n-1} + ... + a_n`.
    pub fn a(&self, k: usize) -> S {
        let n = self.degree();
        if k > n {
            S::zero()
        } else {
            self.coeff(n - k)
        }
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Result<Self> {
        let lc = self.leading();
        if lc.is_zero() {
            return Err(Error::invalid("zero polynomial has no monic form"));
        }
        Ok(self.map(|c| c.clone() / lc.clone()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_complex(&self) -> ComplexPoly {
        self.map(Scalar::to_c64)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &S) -> Self {
        // Horner with polynomial accumulator
        let lin = Poly::new(vec![c.clone(), S::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| &(&acc * &lin) + &Poly::constant(a.clone()))
    }

    /// `p(lambda * x)` scaled back to the original leading coefficient is
    /// `lambda^{-n} p(lambda x)`; this returns the polynomial whose roots are
    /// `lambda` times the roots of `self`, keeping the leading coefficient.
    pub fn scale_roots(&self, lambda: &S) -> Self {
        let n = self.degree();
        let mut pow = S::one();
        let mut out = vec![S::zero(); n + 1];
        for k in 0..=n {
            out[n - k] = self.coeff(n - k) * pow.clone();
            pow = pow * lambda.clone();
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(S::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::invalid("division by the zero polynomial"));
        }
        let dn = d.degree();
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![S::zero(); rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dn].clone() / lc.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dn);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Composition `self(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| &(&acc * q) + &Poly::constant(a.clone()))
    }
}

/// Lagrange interpolation through `(xs[i], ys[i])`; nodes must be distinct.
pub fn interpolate<S: Scalar>(xs: &[S], ys: &[S]) -> Poly<S> {
    let mut out = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let f = Poly::new(vec![-xj.clone(), S::one()]).scale(&(S::one() / (xi.clone() - xj.clone())));
                basis = &basis * &f;
            }
        }
        out = &out + &basis;
    }
    out
}

impl ComplexPoly {
    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Residual of `x` scaled by the magnitude of the evaluation terms,
    /// i.e. a backward error: `|p(x)| / max(1, sum |a_i| |x|^i)`.
    pub fn scaled_residual(&self, x: C64) -> f64 {
        let r = x.norm();
        let mut mag = 0.0;
        let mut pw = 1.0;
        for c in &self.coeffs {
            mag += c.norm() * pw;
            pw *= r;
        }
        self.eval(&x).norm() / mag.max(1.0)
    }

    /// Drops leading coefficients whose modulus is below `rel * max|a_i|`.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let m = self.max_abs_coeff();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= rel * m) {
            c.pop();
        }
        Poly::new(c)
    }

    /// Newton iterations on a root estimate; stops when the step stalls.
    pub fn newton_polish(&self, mut x: C64, iters: usize) -> C64 {
        let d = self.derivative();
        for _ in 0..iters {
            let fx = self.eval(&x);
            let dfx = d.eval(&x);
            if dfx.norm() == 0.0 {
                break;
            }
            let step = fx / dfx;
            let nx = x - step;
            if !nx.re.is_finite() || !nx.im.is_finite() {
                break;
            }
            if self.eval(&nx).norm() > fx.norm() {
                break;
            }
            x = nx;
            if step.norm() <= 1e-17 * x.norm().max(1.0) {
                break;
            }
        }
        x
    }
}

impl<'a, S: Scalar> Add<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.descending())
    }
}
