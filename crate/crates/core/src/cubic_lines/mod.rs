//! The 27 lines on a smooth cubic surface: direct solving, completion from
//! one line through the pencil of planes, the blow-up model, and the
//! incidence structure (Schläfli graph, double-sixes).

mod blowup;
mod pencil;
mod solve;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::weyl::LineLabel;
use crate::homotopy::singular_point;
use crate::poly::MultiPoly;
use crate::rng::SeedTree;
use crate::scalar::{rat_int, Num, Rational, Scalar, C64};

pub use blowup::{blowup_cubic, check_general_position, random_six_points, BlowupModel, PlanePoint};
pub use pencil::{lines_from_one, pencil_pass, PencilPass};
pub use solve::{chart_equations, lines_on_cubic, polish_line};

/// Largest restricted-cubic coefficient accepted for a line on the surface.
pub const ON_SURFACE_TOL: f64 = 1e-9;
/// Normalized Plücker distance below which two lines are the same.
pub const DEDUP_TOL: f64 = 1e-6;
/// Normalized incidence form below which two lines meet.
pub const MEET_TOL: f64 = 1e-6;

/// A cubic surface in `P^3`. Coefficients follow [`monomials`]`(4, 3)`:
/// `x0^3, x0^2 x1, x0^2 x2, x0^2 x3, x0 x1^2, ..., x3^3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceJson", into = "SurfaceJson")]
pub struct CubicSurface {
    coeffs: Vec<Num>,
    smooth_checked: bool,
}

#[derive(Serialize, Deserialize)]
struct SurfaceJson {
    coeffs20: Vec<Num>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    smooth_checked: bool,
}

impl TryFrom<SurfaceJson> for CubicSurface {
    type Error = Error;
    fn try_from(j: SurfaceJson) -> Result<Self> {
        let mut s = CubicSurface::new(j.coeffs20)?;
        s.smooth_checked = j.smooth_checked;
        Ok(s)
    }
}

impl From<CubicSurface> for SurfaceJson {
    fn from(s: CubicSurface) -> Self {
        SurfaceJson { coeffs20: s.coeffs, smooth_checked: s.smooth_checked }
    }
}

impl CubicSurface {
    pub fn new(coeffs: Vec<Num>) -> Result<Self> {
        if coeffs.len() != 20 {
            return Err(Error::invalid(format!("a cubic surface has 20 coefficients, got {}", coeffs.len())));
        }
        if coeffs.iter().all(|c| c.to_c64().norm() == 0.0) {
            return Err(Error::invalid("the zero form is not a surface"));
        }
        Ok(CubicSurface { coeffs, smooth_checked: false })
    }

    pub fn from_scalars<S: Scalar>(c: &[S]) -> Result<Self> {
        Self::new(c.iter().map(Scalar::to_num).collect())
    }

    pub fn from_poly<S: Scalar>(p: &MultiPoly<S>) -> Result<Self> {
        Self::from_scalars(&p.dense_form(3))
    }

    pub fn coeffs(&self) -> &[Num] {
        &self.coeffs
    }

    pub fn coeffs_c64(&self) -> Vec<C64> {
        self.coeffs.iter().map(Num::to_c64).collect()
    }

    /// Exact coefficients when every entry is rational.
    pub fn exact(&self) -> Option<Vec<Rational>> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Num::Rational(q) => Some(q.clone()),
                Num::Complex(_) => None,
            })
            .collect()
    }

    pub fn poly(&self) -> MultiPoly<C64> {
        MultiPoly::from_dense_form(4, 3, &self.coeffs_c64())
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

    /// Runs the singular-point search; marks the surface on success.
    pub fn check_smooth(&mut self, seeds: &SeedTree) -> Result<()> {
        if self.smooth_checked {
            return Ok(());
        }
        if let Some(p) = singular_point(&self.normalized_poly(), &seeds.child("smooth")) {
            let pt: Vec<String> = p.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
            return Err(Error::invalid(format!("surface is singular at [{}]", pt.join(", "))));
        }
        self.smooth_checked = true;
        Ok(())
    }

    pub fn fermat() -> Self {
        let p = (0..4).fold(MultiPoly::zero(4), |acc, i| &acc + &MultiPoly::<Rational>::var(4, i).pow(3));
        Self::from_poly(&p).expect("nonzero")
    }

    /// The Clebsch diagonal surface, the pentahedral form with all `a_i = 1`.
    pub fn clebsch() -> Self {
        pentahedral_surface(&[rat_int(1), rat_int(1), rat_int(1), rat_int(1), rat_int(1)])
    }

    /// Integer coefficients uniform in `[-10, 10]`.
    pub fn random(seed: u64) -> Self {
        let mut rng = SeedTree::new(seed).child("cubic-surface").rng();
        let c: Vec<Rational> = (0..20).map(|_| rat_int(rng.random_range(-10..=10))).collect();
        Self::from_scalars(&c).unwrap_or_else(|_| Self::fermat())
    }

    /// Coefficients of `f(sP + uQ)` in `s^3, s^2 u, s u^2, u^3`, with `f`
    /// normalized and `P, Q` an orthonormal basis of the line.
    pub fn restricted(&self, line: &ProjLine) -> [C64; 4] {
        restrict(&self.normalized_poly(), line)
    }

    pub fn line_residual(&self, line: &ProjLine) -> f64 {
        self.restricted(line).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn restrict(f: &MultiPoly<C64>, line: &ProjLine) -> [C64; 4] {
    let (p, q) = line.points();
    let forms: Vec<MultiPoly<C64>> = (0..4)
        .map(|i| &MultiPoly::var(2, 0).scale(&p[i]) + &MultiPoly::var(2, 1).scale(&q[i]))
        .collect();
    let g = f.substitute(&forms);
    [g.coeff(&[3, 0]), g.coeff(&[2, 1]), g.coeff(&[1, 2]), g.coeff(&[0, 3])]
}

/// `sum a_i X_i^3` on the hyperplane `X_0 + ... + X_4 = 0`, eliminating `X_4`.
pub fn pentahedral_surface<S: Scalar>(a: &[S; 5]) -> CubicSurface {
    let mut x4 = MultiPoly::zero(4);
    for i in 0..4 {
        x4 = &x4 - &MultiPoly::var(4, i);
    }
    let mut f = x4.pow(3).scale(&a[4]);
    for (i, ai) in a.iter().take(4).enumerate() {
        f = &f + &MultiPoly::var(4, i).pow(3).scale(ai);
    }
    match CubicSurface::from_poly(&f) {
        Ok(s) => s,
        // all a_i = 0: keep the zero pattern representable
        Err(_) => CubicSurface { coeffs: vec![Num::from(rat_int(0)); 20], smooth_checked: false },
    }
}

/// Plücker index pairs in coordinate order.
pub const PLUCKER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Plücker coordinates of the line through two points.
pub fn plucker<S: Scalar>(p: &[S], q: &[S]) -> [S; 6] {
    PLUCKER_PAIRS.map(|(i, j)| p[i].clone() * q[j].clone() - p[j].clone() * q[i].clone())
}

/// The incidence form: zero exactly when the lines meet.
pub fn incidence<S: Scalar>(a: &[S; 6], b: &[S; 6]) -> S {
    a[0].clone() * b[5].clone() - a[1].clone() * b[4].clone() + a[2].clone() * b[3].clone()
        + a[3].clone() * b[2].clone()
        - a[4].clone() * b[1].clone()
        + a[5].clone() * b[0].clone()
}

/// A line in `P^3` by normalized Plücker coordinates `p01, p02, p03, p12,
/// p13, p23`; the largest-modulus coordinate is scaled to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjLine {
    pub plucker: [C64; 6],
}

impl ProjLine {
    pub fn from_plucker(raw: [C64; 6]) -> Result<Self> {
        let k = argmax(&raw);
        let m = raw[k];
        if m.norm() == 0.0 || !m.norm().is_finite() {
            return Err(Error::invalid("degenerate Plücker vector"));
        }
        Ok(ProjLine { plucker: raw.map(|c| c / m) })
    }

    pub fn from_points(p: &[C64], q: &[C64]) -> Result<Self> {
        Self::from_plucker(plucker(p, q))
    }

    /// Residual of the Plücker quadric relation.
    pub fn relation(&self) -> f64 {
        let p = &self.plucker;
        (p[0] * p[5] - p[1] * p[4] + p[2] * p[3]).norm()
    }

    pub fn meet_value(&self, other: &ProjLine) -> f64 {
        incidence(&self.plucker, &other.plucker).norm()
    }

    pub fn meets(&self, other: &ProjLine) -> bool {
        self.meet_value(other) < MEET_TOL
    }

    /// Distance after rescaling `other` to agree with `self` on its pivot.
    pub fn distance(&self, other: &ProjLine) -> f64 {
        let k = argmax(&self.plucker);
        let b = other.plucker[k];
        if b.norm() < 1e-12 {
            return f64::INFINITY;
        }
        let s = self.plucker[k] / b;
        self.plucker.iter().zip(&other.plucker).map(|(x, y)| (x - y * s).norm()).fold(0.0, f64::max)
    }

    /// Unitary frame `[P, Q, R1, R2]` with `P, Q` spanning the line.
    pub fn frame(&self) -> [[C64; 4]; 4] {
        let mut l = DMatrix::<C64>::zeros(4, 4);
        for (k, &(i, j)) in PLUCKER_PAIRS.iter().enumerate() {
            l[(i, j)] = self.plucker[k];
            l[(j, i)] = -self.plucker[k];
        }
        let svd = l.svd(true, false);
        let u = svd.u.expect("requested U");
        let mut idx: Vec<usize> = (0..4).collect();
        idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let col = |k: usize| [u[(0, k)], u[(1, k)], u[(2, k)], u[(3, k)]];
        [col(idx[0]), col(idx[1]), col(idx[2]), col(idx[3])]
    }

    /// Orthonormal points spanning the line.
    pub fn points(&self) -> ([C64; 4], [C64; 4]) {
        let f = self.frame();
        (f[0], f[1])
    }

    fn sort_key(&self) -> Vec<i64> {
        self.plucker.iter().flat_map(|c| [(c.re * 1e7).round() as i64, (c.im * 1e7).round() as i64]).collect()
    }
}

fn argmax(v: &[C64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap_or(0)
}

/// Adds `line` unless a line within [`DEDUP_TOL`] is present; returns
/// whether it was new.
pub(crate) fn insert_distinct(set: &mut Vec<ProjLine>, line: ProjLine) -> bool {
    if set.iter().any(|m| m.distance(&line) < DEDUP_TOL) {
        return false;
    }
    set.push(line);
    true
}

/// 27 lines with their incidence graph and optional blow-up labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineConfiguration {
    pub lines: Vec<ProjLine>,
    pub adjacency: Vec<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<LineLabel>>,
}

impl LineConfiguration {
    /// Sorts the lines and computes incidences numerically.
    pub fn from_lines(mut lines: Vec<ProjLine>) -> Self {
        lines.sort_by_key(ProjLine::sort_key);
        let adjacency = lines
            .iter()
            .enumerate()
            .map(|(i, a)| lines.iter().enumerate().map(|(j, b)| i != j && a.meets(b)).collect())
            .collect();
        LineConfiguration { lines, adjacency, labels: None }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Checks the Schläfli-graph invariants.
    pub fn validate(&self) -> Result<()> {
        validate_adjacency(&self.adjacency)
    }

    pub fn index_of(&self, line: &ProjLine) -> Option<usize> {
        self.lines.iter().position(|m| m.distance(line) < DEDUP_TOL)
    }

    /// Whether both configurations hold the same lines within `tol`.
    pub fn same_lines(&self, other: &LineConfiguration, tol: f64) -> bool {
        self.len() == other.len()
            && self.lines.iter().all(|a| other.lines.iter().any(|b| a.distance(b) < tol))
            && other.lines.iter().all(|a| self.lines.iter().any(|b| a.distance(b) < tol))
    }
}

/// Symmetric, zero diagonal, 27 vertices, 10-regular, and the complement
/// strongly regular with parameters `(27, 16, 10, 8)`.
pub fn validate_adjacency(adj: &[Vec<bool>]) -> Result<()> {
    let n = adj.len();
    if n != 27 || adj.iter().any(|r| r.len() != 27) {
        return Err(Error::invalid(format!("expected a 27 x 27 incidence matrix, got {n} rows")));
    }
    for i in 0..n {
        if adj[i][i] {
            return Err(Error::invalid(format!("line {i} meets itself")));
        }
        let deg = adj[i].iter().filter(|&&b| b).count();
        if deg != 10 {
            return Err(Error::invalid(format!("line {i} meets {deg} lines, expected 10")));
        }
        for j in 0..n {
            if adj[i][j] != adj[j][i] {
                return Err(Error::invalid(format!("incidence of lines {i}, {j} is not symmetric")));
            }
        }
    }
    let (k, lambda, mu) = srg_parameters(adj, true).ok_or_else(|| Error::invalid("skew graph is not strongly regular"))?;
    if (k, lambda, mu) != (16, 10, 8) {
        return Err(Error::invalid(format!("skew graph has parameters (27, {k}, {lambda}, {mu})")));
    }
    Ok(())
}

/// `(k, lambda, mu)` of the graph (or its complement) if strongly regular.
pub fn srg_parameters(adj: &[Vec<bool>], complement: bool) -> Option<(usize, usize, usize)> {
    let n = adj.len();
    let e = |i: usize, j: usize| i != j && (adj[i][j] != complement);
    let k = (0..n).filter(|&j| e(0, j)).count();
    let (mut lambda, mut mu) = (None, None);
    for i in 0..n {
        if (0..n).filter(|&j| e(i, j)).count() != k {
            return None;
        }
        for j in i + 1..n {
            let common = (0..n).filter(|&m| e(i, m) && e(j, m)).count();
            let slot = if e(i, j) { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return None,
                _ => {}
            }
        }
    }
    Some((k, lambda.unwrap_or(0), mu.unwrap_or(0)))
}

/// Two sixers with `first[i]` skew to `second[i]` and meeting every other
/// `second[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleSix {
    pub first: [usize; 6],
    pub second: [usize; 6],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleSixes {
    pub sixers: Vec<[usize; 6]>,
    pub double_sixes: Vec<DoubleSix>,
}

/// All sixers (6 pairwise skew lines) and the double-sixes they form.
pub fn double_sixes(cfg: &LineConfiguration) -> Result<DoubleSixes> {
    cfg.validate()?;
    let adj = &cfg.adjacency;
    let n = adj.len();
    let mut sixers = Vec::new();
    let mut stack = Vec::with_capacity(6);
    fn extend(adj: &[Vec<bool>], start: usize, stack: &mut Vec<usize>, out: &mut Vec<[usize; 6]>) {
        if stack.len() == 6 {
            out.push([stack[0], stack[1], stack[2], stack[3], stack[4], stack[5]]);
            return;
        }
        for v in start..adj.len() {
            if stack.iter().all(|&u| !adj[u][v]) {
                stack.push(v);
                extend(adj, v + 1, stack, out);
                stack.pop();
            }
        }
    }
    extend(adj, 0, &mut stack, &mut sixers);
    let mut double_sixes = Vec::new();
    for a in &sixers {
        let mut b = [0usize; 6];
        for (i, slot) in b.iter_mut().enumerate() {
            let cands: Vec<usize> = (0..n)
                .filter(|v| !a.contains(v))
                .filter(|&v| !adj[a[i]][v] && a.iter().enumerate().all(|(j, &u)| j == i || adj[u][v]))
                .collect();
            if cands.len() != 1 {
                return Err(Error::invalid("sixer without a unique Schläfli partner"));
            }
            *slot = cands[0];
        }
        let mut sorted_b = b;
        sorted_b.sort_unstable();
        if !sixers.contains(&sorted_b) {
            return Err(Error::invalid("partner of a sixer is not a sixer"));
        }
        // each double-six once: keep the pair with the smaller first sixer
        if *a < sorted_b {
            double_sixes.push(DoubleSix { first: *a, second: b });
        }
    }
    Ok(DoubleSixes { sixers, double_sixes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::monomials;
    use num_traits::Zero;

    #[test]
    fn plucker_basics() {
        let c = |x: f64| C64::new(x, 0.0);
        let l = ProjLine::from_points(&[c(1.0), c(0.0), c(0.0), c(0.0)], &[c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        let m = ProjLine::from_points(&[c(1.0), c(0.0), c(0.0), c(0.0)], &[c(0.0), c(0.0), c(1.0), c(0.0)]).unwrap();
        let k = ProjLine::from_points(&[c(0.0), c(0.0), c(1.0), c(0.0)], &[c(0.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        assert!(l.meets(&m));
        assert!(!l.meets(&k));
        assert!(l.relation() < 1e-15);
        let (p, q) = k.points();
        let again = ProjLine::from_points(&p, &q).unwrap();
        assert!(again.distance(&k) < 1e-12);
        assert!(ProjLine::from_points(&p, &p).is_err());
    }

    #[test]
    fn json_shape() {
        let s = CubicSurface::fermat();
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.starts_with(r#"{"coeffs20":["1","#));
        assert_eq!(serde_json::from_str::<CubicSurface>(&j).unwrap(), s);
        assert!(serde_json::from_str::<CubicSurface>(r#"{"coeffs20":["1"]}"#).is_err());
    }

    #[test]
    fn pentahedral_forms() {
        let one = rat_int(1);
        let s = pentahedral_surface(&[one.clone(), one.clone(), one.clone(), one.clone(), one.clone()]);
        let f = MultiPoly::<Rational>::from_dense_form(4, 3, &s.exact().unwrap());
        // sum X_i^3 vanishes at X = (1, -1, 0, 0, 0)
        assert!(f.eval(&[rat_int(1), rat_int(-1), rat_int(0), rat_int(0)]).is_zero());
        // a_4 = 0 leaves the Fermat-type part only
        let z = rat_int(0);
        let s = pentahedral_surface(&[one.clone(), one.clone(), one.clone(), one, z]);
        assert_eq!(s, CubicSurface::fermat());
    }

    #[test]
    fn singular_surface_is_rejected() {
        // Cayley's nodal cubic
        let v = |i| MultiPoly::<Rational>::var(4, i);
        let mut f = MultiPoly::zero(4);
        for skip in 0..4 {
            let t = (0..4).filter(|&i| i != skip).fold(MultiPoly::constant(4, rat_int(1)), |acc, i| &acc * &v(i));
            f = &f + &t;
        }
        let mut s = CubicSurface::from_poly(&f).unwrap();
        assert!(matches!(s.check_smooth(&SeedTree::new(0)), Err(Error::InvalidInput(_))));
        let mut s = CubicSurface::fermat();
        s.check_smooth(&SeedTree::new(0)).unwrap();
        assert!(s.is_smooth_checked());
    }

    #[test]
    fn srg_of_blowup_rules() {
        let adj = crate::groups::weyl::blowup_adjacency();
        validate_adjacency(&adj).unwrap();
        assert_eq!(srg_parameters(&adj, false), Some((10, 1, 5)));
    }

    #[test]
    fn monomial_order_is_documented_one() {
        let m = monomials(4, 3);
        assert_eq!(m[0], vec![3, 0, 0, 0]);
        assert_eq!(m[1], vec![2, 1, 0, 0]);
        assert_eq!(m[19], vec![0, 0, 0, 3]);
    }
}
