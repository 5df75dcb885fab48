//! The 28 bitangents of a smooth plane quartic: direct solving, completion
//! from two bitangents, projection of a cubic surface from one of its
//! points, and the syzygetic structure (Steiner complexes, Aronhold sets).

mod config;
mod cubic;
mod from_two;
mod solve;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::singular_point;
use crate::linalg::{complement_basis, norm};
use crate::poly::MultiPoly;
use crate::rng::SeedTree;
use crate::scalar::{rat_int, Num, Rational, Scalar, C64};

pub use config::{classify_configurations, syzygy_test, ConfigurationCounts, CountInterval, Syzygy, SyzygyReport};
pub use cubic::{point_on_surface, quartic_from_cubic_point, CubicProjection};
pub use from_two::{bitangents_from_two, from_two_pass, FromTwoPass, QuarticSplitForm};
pub use solve::{bitangents, polish_bitangent, square_conditions};

/// Largest coefficient of `C|_line - q^2` accepted for a bitangent.
pub const WITNESS_TOL: f64 = 1e-8;
/// Normalized line distance below which two bitangents coincide.
pub const DEDUP_TOL: f64 = 1e-6;

/// A plane quartic. Coefficients follow `monomials(3, 4)`:
/// `x^4, x^3 y, x^3 z, x^2 y^2, ..., z^4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuarticJson", into = "QuarticJson")]
pub struct PlaneQuartic {
    coeffs: Vec<Num>,
    smooth_checked: bool,
}

#[derive(Serialize, Deserialize)]
struct QuarticJson {
    coeffs15: Vec<Num>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    smooth_checked: bool,
}

impl TryFrom<QuarticJson> for PlaneQuartic {
    type Error = Error;
    fn try_from(j: QuarticJson) -> Result<Self> {
        let mut q = PlaneQuartic::new(j.coeffs15)?;
        q.smooth_checked = j.smooth_checked;
        Ok(q)
    }
}

impl From<PlaneQuartic> for QuarticJson {
    fn from(q: PlaneQuartic) -> Self {
        QuarticJson { coeffs15: q.coeffs, smooth_checked: q.smooth_checked }
    }
}

impl PlaneQuartic {
    pub fn new(coeffs: Vec<Num>) -> Result<Self> {
        if coeffs.len() != 15 {
            return Err(Error::invalid(format!("a plane quartic has 15 coefficients, got {}", coeffs.len())));
        }
        if coeffs.iter().all(|c| c.to_c64().norm() == 0.0) {
            return Err(Error::invalid("the zero form is not a curve"));
        }
        Ok(PlaneQuartic { coeffs, smooth_checked: false })
    }

    pub fn from_scalars<S: Scalar>(c: &[S]) -> Result<Self> {
        Self::new(c.iter().map(Scalar::to_num).collect())
    }

    pub fn from_poly<S: Scalar>(p: &MultiPoly<S>) -> Result<Self> {
        Self::from_scalars(&p.dense_form(4))
    }

    pub fn coeffs(&self) -> &[Num] {
        &self.coeffs
    }

    pub fn poly(&self) -> MultiPoly<C64> {
        MultiPoly::from_dense_form(3, 4, &self.coeffs.iter().map(Num::to_c64).collect::<Vec<_>>())
    }

    /// The form scaled to unit largest coefficient.
    pub fn normalized_poly(&self) -> MultiPoly<C64> {
        let p = self.poly();
        let m = p.max_abs_coeff();
        p.scale(&C64::new(1.0 / m, 0.0))
    }

    pub fn is_smooth_checked(&self) -> bool {
        self.smooth_checked
    }

    pub fn check_smooth(&mut self, seeds: &SeedTree) -> Result<()> {
        if self.smooth_checked {
            return Ok(());
        }
        if let Some(p) = singular_point(&self.normalized_poly(), &seeds.child("smooth")) {
            let pt: Vec<String> = p.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
            return Err(Error::invalid(format!("curve is singular at [{}]", pt.join(", "))));
        }
        self.smooth_checked = true;
        Ok(())
    }

    /// Integer coefficients uniform in `[-10, 10]`.
    pub fn random(seed: u64) -> Self {
        let mut rng = SeedTree::new(seed).child("plane-quartic").rng();
        let c: Vec<Rational> = (0..15).map(|_| rat_int(rng.random_range(-10..=10))).collect();
        Self::from_scalars(&c).unwrap_or_else(|_| Self::fermat())
    }

    pub fn fermat() -> Self {
        let p = (0..3).fold(MultiPoly::zero(3), |acc, i| &acc + &MultiPoly::<Rational>::var(3, i).pow(4));
        Self::from_poly(&p).expect("nonzero")
    }

    /// The quartic `X -> C(M X)`; a line `l` of `C` becomes `M^T l`.
    pub fn pullback(&self, m: &[[C64; 3]; 3]) -> Result<Self> {
        let forms: Vec<MultiPoly<C64>> = (0..3)
            .map(|i| (0..3).fold(MultiPoly::zero(3), |acc, j| &acc + &MultiPoly::var(3, j).scale(&m[i][j])))
            .collect();
        Self::from_poly(&self.poly().substitute(&forms))
    }

    /// Coefficients of `C(sP + uQ)` in `s^4, s^3 u, ..., u^4` for the
    /// normalized form.
    pub fn restricted(&self, p: &[C64; 3], q: &[C64; 3]) -> [C64; 5] {
        restrict(&self.normalized_poly(), p, q)
    }
}

pub(crate) fn restrict(f: &MultiPoly<C64>, p: &[C64; 3], q: &[C64; 3]) -> [C64; 5] {
    let forms: Vec<MultiPoly<C64>> = (0..3)
        .map(|i| &MultiPoly::var(2, 0).scale(&p[i]) + &MultiPoly::var(2, 1).scale(&q[i]))
        .collect();
    let g = f.substitute(&forms);
    std::array::from_fn(|k| g.coeff(&[(4 - k) as u8, k as u8]))
}

fn argmax(v: &[C64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap_or(0)
}

/// Line coordinates scaled so the largest-modulus entry is 1.
pub fn normalize_line(l: &[C64; 3]) -> Result<[C64; 3]> {
    let m = l[argmax(l)];
    if m.norm() == 0.0 || !m.norm().is_finite() {
        return Err(Error::invalid("degenerate line coordinates"));
    }
    Ok(l.map(|c| c / m))
}

/// Distance of normalized lines after rescaling on the pivot of `a`.
pub fn line_distance(a: &[C64; 3], b: &[C64; 3]) -> f64 {
    let k = argmax(a);
    if b[k].norm() < 1e-12 {
        return f64::INFINITY;
    }
    let s = a[k] / b[k];
    a.iter().zip(b).map(|(x, y)| (x - y * s).norm()).fold(0.0, f64::max)
}

/// Orthonormal points spanning the line `l . x = 0`.
pub fn line_points(l: &[C64; 3]) -> ([C64; 3], [C64; 3]) {
    let b = complement_basis(&[l.to_vec()], 3, 1);
    ([b[0][0], b[0][1], b[0][2]], [b[1][0], b[1][1], b[1][2]])
}

fn unit(v: [C64; 3]) -> [C64; 3] {
    let n = norm(&v);
    v.map(|c| c / n)
}

/// A bitangent line with its contact points and square witness: in the
/// basis `frame` of the line, `C(sP + uQ) = q(s, u)^2` up to `residual`,
/// where `q = witness[0] s^2 + witness[1] s u + witness[2] u^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bitangent {
    pub line: [C64; 3],
    pub contacts: [[C64; 3]; 2],
    pub witness: [C64; 3],
    pub frame: [[C64; 3]; 2],
    pub residual: f64,
}

/// Square root `q` of a binary quartic taken from its `s^4` end.
fn square_root(g: &[C64; 5]) -> ([C64; 3], f64) {
    let a = g[0].sqrt();
    let b = g[1] / (a * 2.0);
    let c = (g[2] - b * b) / (a * 2.0);
    let sq = [a * a, a * b * 2.0, b * b + a * c * 2.0, b * c * 2.0, c * c];
    let res = sq.iter().zip(g).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    ([a, b, c], res)
}

impl Bitangent {
    /// Witness and contacts of `line` on the normalized quartic `f`. The
    /// basis of the line is rotated so the leading coefficient is large.
    pub fn from_form(f: &MultiPoly<C64>, line: &[C64; 3]) -> Result<Self> {
        let line = normalize_line(line)?;
        let (p0, q0) = line_points(&line);
        let mut best: Option<([C64; 3], [C64; 3], [C64; 5])> = None;
        for k in 0..8 {
            let th = std::f64::consts::PI * k as f64 / 8.0;
            let (c, s) = (th.cos(), th.sin());
            let p: [C64; 3] = std::array::from_fn(|i| p0[i] * c + q0[i] * s);
            let q: [C64; 3] = std::array::from_fn(|i| -p0[i] * s + q0[i] * c);
            let g = restrict(f, &p, &q);
            if best.as_ref().is_none_or(|b| g[0].norm() > b.2[0].norm()) {
                best = Some((p, q, g));
            }
        }
        let (p, q, g) = best.expect("rotations tried");
        if g[0].norm() == 0.0 {
            return Err(Error::invalid("line is a component of the curve"));
        }
        let (w, residual) = square_root(&g);
        let disc = (w[1] * w[1] - w[0] * w[2] * 4.0).sqrt();
        let roots = [(-w[1] + disc) / (w[0] * 2.0), (-w[1] - disc) / (w[0] * 2.0)];
        let contacts = roots.map(|r| unit(std::array::from_fn(|i| p[i] * r + q[i])));
        Ok(Bitangent { line, contacts, witness: w, frame: [p, q], residual })
    }

    pub fn from_line(c: &PlaneQuartic, line: &[C64; 3]) -> Result<Self> {
        Self::from_form(&c.normalized_poly(), line)
    }

    pub fn distance(&self, other: &Bitangent) -> f64 {
        line_distance(&self.line, &other.line)
    }

    fn sort_key(&self) -> Vec<i64> {
        self.line.iter().flat_map(|c| [(c.re * 1e7).round() as i64, (c.im * 1e7).round() as i64]).collect()
    }
}

pub(crate) fn insert_distinct(set: &mut Vec<Bitangent>, b: Bitangent) -> bool {
    if set.iter().any(|m| m.distance(&b) < DEDUP_TOL) {
        return false;
    }
    set.push(b);
    true
}

pub(crate) fn sort_bitangents(set: &mut [Bitangent]) {
    set.sort_by_key(Bitangent::sort_key);
}

/// Whether both lists hold the same lines within `tol`.
pub fn same_bitangents(a: &[Bitangent], b: &[Bitangent], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| x.distance(y) < tol))
        && b.iter().all(|x| a.iter().any(|y| x.distance(y) < tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn witness_of_a_planted_bitangent() {
        // (x^2 - y^2)^2 + z (x^3 + y^3 + z^3): z = 0 is bitangent
        let x = MultiPoly::<Rational>::var(3, 0);
        let y = MultiPoly::<Rational>::var(3, 1);
        let z = MultiPoly::<Rational>::var(3, 2);
        let sq = &(&x * &x) - &(&y * &y);
        let cub = &(&x.pow(3) + &y.pow(3)) + &z.pow(3);
        let f = &(&sq * &sq) + &(&z * &cub);
        let q = PlaneQuartic::from_poly(&f).unwrap();
        let b = Bitangent::from_line(&q, &[c(0.0), c(0.0), c(1.0)]).unwrap();
        assert!(b.residual < 1e-14);
        // contacts are [1 : 1 : 0] and [1 : -1 : 0]
        for p in &b.contacts {
            assert!(p[2].norm() < 1e-14);
            assert!((p[0].norm() - p[1].norm()).abs() < 1e-12);
        }
        let nb = Bitangent::from_line(&q, &[c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(nb.residual > 1e-3);
    }

    #[test]
    fn json_shape() {
        let q = PlaneQuartic::random(1);
        let j = serde_json::to_string(&q).unwrap();
        assert!(j.starts_with(r#"{"coeffs15":["#));
        assert_eq!(serde_json::from_str::<PlaneQuartic>(&j).unwrap(), q);
        assert!(serde_json::from_str::<PlaneQuartic>(r#"{"coeffs15":["1","2"]}"#).is_err());
    }

    #[test]
    fn pullback_moves_lines() {
        let q = PlaneQuartic::fermat();
        let m = [[c(1.0), c(2.0), c(0.0)], [c(0.0), c(1.0), c(-1.0)], [c(3.0), c(0.0), c(1.0)]];
        let g = q.pullback(&m).unwrap();
        let x = [c(0.3), c(-0.7), c(1.1)];
        let mx: Vec<C64> = (0..3).map(|i| (0..3).map(|j| m[i][j] * x[j]).sum()).collect();
        assert!((g.poly().eval(&x) - q.poly().eval(&mx)).norm() < 1e-10);
    }
}
