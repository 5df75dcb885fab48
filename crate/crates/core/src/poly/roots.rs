//! Simultaneous (Aberth–Ehrlich) root finding.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ComplexPoly, Poly};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, C64};

pub const DEFAULT_TOL: f64 = 1e-10;

/// All complex roots of a polynomial with their residuals.
///
/// Residuals are backward errors `|p(r)| / max(1, sum |a_i| |r|^i)`, which
/// coincide with `|p(r)|` for roots of modulus at most one and unit-size
/// coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<C64>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
}

impl RootSet {
    pub fn worst_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { tol: DEFAULT_TOL, max_iterations: 800 }
    }
}

/// Roots of `p` with default iteration limits.
pub fn roots<S: Scalar>(p: &Poly<S>, tol: f64) -> Result<RootSet> {
    roots_with(p, RootOptions { tol, ..RootOptions::default() })
}

pub fn roots_with<S: Scalar>(p: &Poly<S>, opts: RootOptions) -> Result<RootSet> {
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let p = p.to_complex();
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::invalid("root finding needs degree >= 1"));
    }
    let n = p.degree();
    let mut z = initial_guesses(&p);
    aberth(&p, &mut z, opts.max_iterations);
    for r in z.iter_mut() {
        *r = p.newton_polish(*r, 3);
    }
    sort_roots(&mut z);
    let residuals: Vec<f64> = z.iter().map(|r| p.scaled_residual(*r)).collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > opts.tol || z.len() != n {
        return Err(Error::NoConvergence { iterations: opts.max_iterations, worst_residual: worst });
    }
    Ok(RootSet { roots: z, residuals, tolerance: opts.tol })
}

/// Deterministic total order: by real part, then imaginary part.
pub fn sort_roots(z: &mut [C64]) {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Guesses on a circle whose radius is the geometric mean bound
/// `max_k |a_{n-k}/a_n|^{1/k}`, rotated off the real axis.
fn initial_guesses(p: &ComplexPoly) -> Vec<C64> {
    let n = p.degree();
    let lc = p.leading().norm();
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        let c = p.coeff(n - k).norm() / lc;
        if c > 0.0 {
            radius = radius.max(c.powf(1.0 / k as f64));
        }
    }
    if radius == 0.0 {
        radius = 1.0;
    }
    (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect()
}

fn aberth(p: &ComplexPoly, z: &mut [C64], max_iter: usize) {
    let n = z.len();
    let dp = p.derivative();
    let mut converged = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let zk = z[k];
            let f = p.eval(&zk);
            if f.norm() == 0.0 {
                converged[k] = true;
                continue;
            }
            let ratio = f / dp.eval(&zk);
            let mut sum = C64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    let d = zk - zj;
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - ratio * sum;
            let w = if denom.norm() == 0.0 || !denom.re.is_finite() { ratio } else { ratio / denom };
            if !w.re.is_finite() || !w.im.is_finite() {
                // nudge off a critical point deterministically
                z[k] = zk * C64::new(1.0, 1e-3) + C64::new(1e-3, 0.0);
                all = false;
                continue;
            }
            z[k] = zk - w;
            if w.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(1e-300) {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPoly;

    fn has_root(rs: &RootSet, x: C64, tol: f64) -> bool {
        rs.roots.iter().any(|r| (r - x).norm() < tol)
    }

    #[test]
    fn x_squared_plus_one() {
        let p = RationalPoly::from_i64s_descending(&[1, 0, 1]);
        let rs = roots(&p, 1e-10).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(has_root(&rs, C64::i(), 1e-12));
        assert!(has_root(&rs, -C64::i(), 1e-12));
    }

    #[test]
    fn fifth_roots_of_unity() {
        let p = RationalPoly::from_i64s_descending(&[1, 0, 0, 0, 0, -1]);
        let rs = roots(&p, 1e-10).unwrap();
        for k in 0..5 {
            assert!(has_root(&rs, C64::from_polar(1.0, 2.0 * PI * k as f64 / 5.0), 1e-12));
        }
    }

    #[test]
    fn factored_cubic() {
        let p = RationalPoly::from_i64s_descending(&[1, -6, 11, -6]);
        let rs = roots(&p, 1e-10).unwrap();
        for r in [1.0, 2.0, 3.0] {
            assert!(has_root(&rs, C64::new(r, 0.0), 1e-11));
        }
    }

    #[test]
    fn multiple_roots_converge_in_backward_error() {
        let p = RationalPoly::from_i64s_descending(&[1, -3, 3, -1]); // (x-1)^3
        let rs = roots(&p, 1e-10).unwrap();
        assert_eq!(rs.len(), 3);
        assert!(rs.roots.iter().all(|r| (r - C64::new(1.0, 0.0)).norm() < 1e-4));
    }

    #[test]
    fn constant_rejected() {
        let p = RationalPoly::from_i64s_descending(&[3]);
        assert!(matches!(roots(&p, 1e-10), Err(Error::InvalidInput(_))));
    }
}
