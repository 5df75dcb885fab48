//! Sparse multivariate polynomials.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{Scalar, C64};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u8>;

/// All monomials of total degree `degree` in `nvars` variables, in
/// descending lexicographic order of the exponent vector:
/// `x0^d, x0^{d-1} x1, ..., x_{n-1}^d`.
pub fn monomials(nvars: usize, degree: u8) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u8, prefix: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(nvars, degree, &mut Vec::new(), &mut out);
    out
}

/// Sparse polynomial in a fixed number of variables; zero terms are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<S> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, S::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Homogeneous form with coefficients listed in [`monomials`] order.
    pub fn from_dense_form(nvars: usize, degree: u8, coeffs: &[S]) -> Self {
        Self::from_terms(nvars, monomials(nvars, degree).into_iter().zip(coeffs.iter().cloned()))
    }

    pub fn add_term(&mut self, e: Monomial, c: S) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().clone() + c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u8]) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> usize {
        self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0)
    }

    pub fn dense_form(&self, degree: u8) -> Vec<S> {
        monomials(self.nvars, degree).iter().map(|e| self.coeff(e)).collect()
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())))
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::constant(self.nvars, S::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t * xi.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut f = e.clone();
                f[i] -= 1;
                (f, c.clone() * S::from_i64(e[i] as i64))
            }),
        )
    }

    /// Substitutes `x_i -> forms[i]` (each a polynomial in `forms[i].nvars()` variables).
    pub fn substitute(&self, forms: &[MultiPoly<S>]) -> MultiPoly<S> {
        let nv = forms.first().map(|f| f.nvars).unwrap_or(0);
        let mut out = MultiPoly::zero(nv);
        let mut cache: Vec<Vec<MultiPoly<S>>> = forms.iter().map(|f| vec![MultiPoly::constant(nv, S::one()), f.clone()]).collect();
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(nv, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while cache[i].len() <= k {
                    let next = &cache[i][cache[i].len() - 1] * &forms[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k];
            }
            out = &out + &t;
        }
        out
    }

    /// Maps coefficients into another scalar field.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiPoly<T> {
        MultiPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn to_complex(&self) -> MultiPoly<C64> {
        self.map(Scalar::to_c64)
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Self {
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; nvars];
                for (i, &k) in e.iter().enumerate() {
                    f[positions[i]] += k;
                }
                (f, c.clone())
            }),
        )
    }
}

impl MultiPoly<C64> {
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<'a, S: Scalar> Add<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn sub(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Mul<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn mul(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Zero for MultiPoly<S> {
    fn zero() -> Self {
        MultiPoly::zero(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> Add for MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(self, rhs: Self) -> Self {
        if self.nvars == 0 && self.terms.is_empty() {
            return rhs;
        }
        &self + &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rational};

    #[test]
    fn monomial_counts_and_order() {
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(3, 4).len(), 15);
        let m = monomials(3, 2);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[1], vec![1, 1, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
    }

    #[test]
    fn product_and_derivative() {
        let x = MultiPoly::<Rational>::var(2, 0);
        let y = MultiPoly::<Rational>::var(2, 1);
        let p = &(&x + &y) * &(&x - &y); // x^2 - y^2
        assert_eq!(p.coeff(&[2, 0]), rat_int(1));
        assert_eq!(p.coeff(&[0, 2]), rat_int(-1));
        assert_eq!(p.coeff(&[1, 1]), rat_int(0));
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.derivative(1), y.scale(&rat_int(-2)));
        assert_eq!(p.eval(&[rat_int(3), rat_int(1)]), rat_int(8));
    }

    #[test]
    fn substitution_composes() {
        // f(u, v) = u v with u = s + t, v = s - t
        let f = &MultiPoly::<Rational>::var(2, 0) * &MultiPoly::var(2, 1);
        let s = MultiPoly::var(2, 0);
        let t = MultiPoly::var(2, 1);
        let g = f.substitute(&[&s + &t, &s - &t]);
        assert_eq!(g, &(&s * &s) - &(&t * &t));
    }
}
