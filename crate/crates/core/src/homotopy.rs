//! Predictor–corrector path tracking for square polynomial systems.
//!
//! Two homotopies are provided: a projective total-degree homotopy with a
//! random `gamma` for solving from scratch, and a straight-line parameter
//! homotopy for moving a known fiber through parameter space.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::poly::MultiPoly;
use crate::rng::{gaussian_c64, unit_c64, SeedTree};
use crate::scalar::C64;

/// A polynomial flattened for fast evaluation with its gradient.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    max_deg: usize,
    terms: Vec<(C64, Vec<u8>)>,
}

impl CompiledPoly {
    pub fn new(p: &MultiPoly<C64>) -> Self {
        let terms: Vec<(C64, Vec<u8>)> = p.terms().map(|(e, c)| (*c, e.clone())).collect();
        let max_deg = terms.iter().flat_map(|(_, e)| e.iter().map(|&k| k as usize)).max().unwrap_or(0);
        CompiledPoly { nvars: p.nvars(), max_deg, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn powers(&self, x: &[C64]) -> Vec<Vec<C64>> {
        x.iter()
            .map(|&xi| {
                let mut v = Vec::with_capacity(self.max_deg + 1);
                v.push(C64::new(1.0, 0.0));
                for k in 0..self.max_deg {
                    v.push(v[k] * xi);
                }
                v
            })
            .collect()
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        let pw = self.powers(x);
        self.terms
            .iter()
            .map(|(c, e)| e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * pw[i][k as usize]))
            .sum()
    }

    /// Value and full gradient.
    pub fn eval_grad(&self, x: &[C64]) -> (C64, Vec<C64>) {
        let pw = self.powers(x);
        let zero = C64::new(0.0, 0.0);
        let mut val = zero;
        let mut grad = vec![zero; self.nvars];
        for (c, e) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                t *= pw[i][k as usize];
            }
            val += t;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut g = *c * k as f64 * pw[i][k as usize - 1];
                for (j, &kj) in e.iter().enumerate() {
                    if j != i {
                        g *= pw[j][kj as usize];
                    }
                }
                grad[i] += g;
            }
        }
        (val, grad)
    }

    /// Sum of absolute values of the terms, a scale for residuals.
    pub fn magnitude(&self, x: &[C64]) -> f64 {
        let pw = self.powers(x);
        self.terms
            .iter()
            .map(|(c, e)| e.iter().enumerate().fold(c.norm(), |acc, (i, &k)| acc * pw[i][k as usize].norm()))
            .sum()
    }
}

/// Homotopy value `H`, Jacobian `H_x` and `H_t` at `(x, t)`.
pub struct HEval {
    pub h: DVector<C64>,
    pub hx: DMatrix<C64>,
    pub ht: DVector<C64>,
}

pub trait Homotopy: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[C64], t: f64) -> HEval;
}

/// Adds a homogenizing variable in front: `p(x_1..x_n)` of total degree `d`
/// becomes `X_0^d p(X_1/X_0, ...)`.
pub fn homogenize(p: &MultiPoly<C64>) -> MultiPoly<C64> {
    let d = p.total_degree() as u8;
    MultiPoly::from_terms(
        p.nvars() + 1,
        p.terms().map(|(e, c)| {
            let mut f = Vec::with_capacity(e.len() + 1);
            f.push(d - e.iter().sum::<u8>());
            f.extend_from_slice(e);
            (f, *c)
        }),
    )
}

/// `(1 - t) gamma G + t F` on `P^n` with an affine patch `a . X = 1`, where
/// `G_i = X_i^{d_i} - X_0^{d_i}`.
pub struct TotalDegreeHomotopy {
    target: Vec<CompiledPoly>,
    degrees: Vec<u32>,
    gamma: C64,
    patch: Vec<C64>,
}

impl TotalDegreeHomotopy {
    pub fn new(eqs: &[MultiPoly<C64>], seeds: &SeedTree) -> Self {
        let mut rng = seeds.child("gamma").rng();
        let gamma = unit_c64(&mut rng);
        let mut rng = seeds.child("patch").rng();
        let patch = (0..=eqs.len()).map(|_| gaussian_c64(&mut rng)).collect();
        TotalDegreeHomotopy {
            target: eqs.iter().map(|p| CompiledPoly::new(&homogenize(p))).collect(),
            degrees: eqs.iter().map(|p| p.total_degree() as u32).collect(),
            gamma,
            patch,
        }
    }

    pub fn path_count(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).product()
    }

    /// Start points: all combinations of roots of unity, rescaled to the patch.
    pub fn starts(&self) -> Vec<Vec<C64>> {
        let n = self.degrees.len();
        let mut out = Vec::with_capacity(self.path_count());
        let mut idx = vec![0u32; n];
        loop {
            let mut x = vec![C64::new(1.0, 0.0)];
            for (i, &k) in idx.iter().enumerate() {
                let d = self.degrees[i] as f64;
                x.push(C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d));
            }
            let s: C64 = self.patch.iter().zip(&x).map(|(a, b)| a * b).sum();
            out.push(x.into_iter().map(|v| v / s).collect());
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                idx[i] += 1;
                if idx[i] < self.degrees[i] {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}

impl Homotopy for TotalDegreeHomotopy {
    fn dim(&self) -> usize {
        self.degrees.len() + 1
    }

    fn eval(&self, x: &[C64], t: f64) -> HEval {
        let m = self.dim();
        let n = m - 1;
        let mut h = DVector::zeros(m);
        let mut hx = DMatrix::zeros(m, m);
        let mut ht = DVector::zeros(m);
        let s = 1.0 - t;
        for i in 0..n {
            let (f, gf) = self.target[i].eval_grad(x);
            let d = self.degrees[i] as i32;
            let xi = x[i + 1];
            let g = xi.powi(d) - x[0].powi(d);
            h[i] = self.gamma * s * g + f * t;
            ht[i] = f - self.gamma * g;
            for j in 0..m {
                hx[(i, j)] = gf[j] * t;
            }
            hx[(i, i + 1)] += self.gamma * s * d as f64 * xi.powi(d - 1);
            hx[(i, 0)] -= self.gamma * s * d as f64 * x[0].powi(d - 1);
        }
        h[n] = self.patch.iter().zip(x).map(|(a, b)| a * b).sum::<C64>() - C64::new(1.0, 0.0);
        for j in 0..m {
            hx[(n, j)] = self.patch[j];
        }
        HEval { h, hx, ht }
    }
}

/// `F(x; p(t))` with `p` moving on a segment (or any piecewise-linear path
/// given as waypoints, traversed uniformly in `t`).
pub struct ParameterHomotopy<'a> {
    eqs: &'a [CompiledPoly],
    nvars: usize,
    waypoints: Vec<Vec<C64>>,
}

impl<'a> ParameterHomotopy<'a> {
    /// `eqs` are polynomials in the unknowns followed by the parameters.
    pub fn new(eqs: &'a [CompiledPoly], nvars: usize, waypoints: Vec<Vec<C64>>) -> Self {
        assert!(waypoints.len() >= 2, "a parameter path needs two waypoints");
        ParameterHomotopy { eqs, nvars, waypoints }
    }

    fn segment(&self, t: f64) -> (usize, f64) {
        let k = self.waypoints.len() - 1;
        let u = (t.clamp(0.0, 1.0) * k as f64).min(k as f64 - 1e-300);
        let i = (u.floor() as usize).min(k - 1);
        (i, u - i as f64)
    }

    pub fn params_at(&self, t: f64) -> Vec<C64> {
        let (i, s) = self.segment(t);
        let (a, b) = (&self.waypoints[i], &self.waypoints[i + 1]);
        a.iter().zip(b).map(|(p, q)| p + (q - p) * s).collect()
    }
}

impl Homotopy for ParameterHomotopy<'_> {
    fn dim(&self) -> usize {
        self.nvars
    }

    fn eval(&self, x: &[C64], t: f64) -> HEval {
        let n = self.nvars;
        let (i, _) = self.segment(t);
        let k = (self.waypoints.len() - 1) as f64;
        let dp: Vec<C64> = self.waypoints[i].iter().zip(&self.waypoints[i + 1]).map(|(p, q)| (q - p) * k).collect();
        let mut args = x.to_vec();
        args.extend(self.params_at(t));
        let mut h = DVector::zeros(n);
        let mut hx = DMatrix::zeros(n, n);
        let mut ht = DVector::zeros(n);
        for (r, e) in self.eqs.iter().enumerate() {
            let (v, g) = e.eval_grad(&args);
            h[r] = v;
            for j in 0..n {
                hx[(r, j)] = g[j];
            }
            ht[r] = g[n..].iter().zip(&dp).map(|(a, b)| a * b).sum();
        }
        HEval { h, hx, ht }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackOptions {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Relative Newton tolerance.
    pub newton_tol: f64,
    pub max_steps: usize,
    /// Norm beyond which a path is declared divergent.
    pub divergence: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            initial_step: 0.02,
            max_step: 0.05,
            min_step: 1e-13,
            newton_tol: 1e-10,
            max_steps: 20_000,
            divergence: 1e9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStatus {
    Success,
    Diverged,
    StepUnderflow,
    StepLimit,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub end: Vec<C64>,
    pub status: PathStatus,
    pub steps: usize,
    /// Last `t` reached.
    pub t: f64,
}

impl PathResult {
    pub fn ok(&self) -> bool {
        self.status == PathStatus::Success
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn tangent<H: Homotopy + ?Sized>(h: &H, x: &[C64], t: f64) -> Option<DVector<C64>> {
    let e = h.eval(x, t);
    e.hx.lu().solve(&(-e.ht))
}

fn axpy(x: &[C64], a: f64, v: &DVector<C64>) -> Vec<C64> {
    x.iter().zip(v.iter()).map(|(xi, vi)| xi + vi * a).collect()
}

/// Newton at fixed `t`. Returns the point if it converged within `iters`
/// contracting steps.
fn correct<H: Homotopy + ?Sized>(h: &H, mut x: Vec<C64>, t: f64, tol: f64, iters: usize) -> Option<Vec<C64>> {
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        let e = h.eval(&x, t);
        let dx = e.hx.lu().solve(&(-e.h))?;
        let d = dx.norm();
        for (xi, di) in x.iter_mut().zip(dx.iter()) {
            *xi += di;
        }
        if d <= tol * (1.0 + norm(&x)) {
            return Some(x);
        }
        if d > 0.5 * last {
            return None;
        }
        last = d;
    }
    None
}

/// Tracks one path from `t0` to `t1` (either direction).
pub fn track<H: Homotopy + ?Sized>(h: &H, start: &[C64], t0: f64, t1: f64, opts: &TrackOptions) -> PathResult {
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut x = start.to_vec();
    let mut t = t0;
    let mut step = opts.initial_step;
    let mut streak = 0;
    let mut steps = 0;
    let fail = |x: Vec<C64>, t: f64, steps: usize, status: PathStatus| PathResult { end: x, status, steps, t };
    while (t1 - t) * dir > 0.0 {
        if steps >= opts.max_steps {
            return fail(x, t, steps, PathStatus::StepLimit);
        }
        steps += 1;
        let hstep = step.min((t1 - t) * dir) * dir;
        // RK4 predictor on dx/dt = -H_x^{-1} H_t
        let predicted = (|| {
            let k1 = tangent(h, &x, t)?;
            let k2 = tangent(h, &axpy(&x, hstep / 2.0, &k1), t + hstep / 2.0)?;
            let k3 = tangent(h, &axpy(&x, hstep / 2.0, &k2), t + hstep / 2.0)?;
            let k4 = tangent(h, &axpy(&x, hstep, &k3), t + hstep)?;
            let v = (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(1.0 / 6.0, 0.0);
            Some(axpy(&x, hstep, &v))
        })();
        let tn = if (t1 - (t + hstep)) * dir <= 1e-15 { t1 } else { t + hstep };
        match predicted.and_then(|p| correct(h, p, tn, opts.newton_tol.max(1e-13) * 1e2, 3)) {
            Some(xn) => {
                if norm(&xn) > opts.divergence {
                    return fail(xn, tn, steps, PathStatus::Diverged);
                }
                x = xn;
                t = tn;
                streak += 1;
                if streak >= 3 {
                    step = (step * 2.0).min(opts.max_step);
                    streak = 0;
                }
            }
            None => {
                streak = 0;
                step /= 2.0;
                if step < opts.min_step {
                    return fail(x, t, steps, PathStatus::StepUnderflow);
                }
            }
        }
    }
    match correct(h, x.clone(), t1, opts.newton_tol, 8) {
        Some(xn) => PathResult { end: xn, status: PathStatus::Success, steps, t: t1 },
        None => fail(x, t1, steps, PathStatus::Singular),
    }
}

/// Tracks every start in parallel; results are in input order.
pub fn track_all<H: Homotopy>(h: &H, starts: &[Vec<C64>], t0: f64, t1: f64, opts: &TrackOptions) -> Vec<PathResult> {
    starts.par_iter().map(|s| track(h, s, t0, t1, opts)).collect()
}

/// Newton on a square affine system. Returns the refined point and its
/// scaled residual `max_i |f_i(x)| / magnitude_i(x)`.
pub fn newton_refine(eqs: &[CompiledPoly], x: &[C64], iters: usize) -> (Vec<C64>, f64) {
    let n = x.len();
    let mut x = x.to_vec();
    for _ in 0..iters {
        let mut f = DVector::zeros(eqs.len());
        let mut j = DMatrix::zeros(eqs.len(), n);
        for (r, e) in eqs.iter().enumerate() {
            let (v, g) = e.eval_grad(&x);
            f[r] = v;
            for c in 0..n {
                j[(r, c)] = g[c];
            }
        }
        let dx = if eqs.len() == n { j.lu().solve(&(-f)) } else { j.svd(true, true).solve(&(-f), 1e-14).ok() };
        let Some(dx) = dx else { break };
        for (xi, di) in x.iter_mut().zip(dx.iter()) {
            *xi += di;
        }
        if dx.norm() <= 1e-15 * (1.0 + norm(&x)) {
            break;
        }
    }
    let res = scaled_residual(eqs, &x);
    (x, res)
}

pub fn scaled_residual(eqs: &[CompiledPoly], x: &[C64]) -> f64 {
    eqs.iter().map(|e| e.eval(x).norm() / e.magnitude(x).max(1e-300)).fold(0.0, f64::max)
}

/// Finite solutions of a square affine system found by total-degree homotopy.
#[derive(Clone, Debug)]
pub struct Solutions {
    pub points: Vec<Vec<C64>>,
    pub residuals: Vec<f64>,
    pub paths: usize,
    pub failed: usize,
    pub at_infinity: usize,
}

/// Solves `eqs = 0` in `C^n` (`n = eqs.len()` unknowns). Endpoints with
/// homogenizing coordinate below `1e-8` of the norm count as infinite; the
/// others are polished by affine Newton and kept if their scaled residual is
/// below `accept`.
pub fn solve_total_degree(eqs: &[MultiPoly<C64>], seeds: &SeedTree, opts: &TrackOptions, accept: f64) -> Solutions {
    let h = TotalDegreeHomotopy::new(eqs, seeds);
    let starts = h.starts();
    let results = track_all(&h, &starts, 0.0, 1.0, opts);
    let affine: Vec<CompiledPoly> = eqs.iter().map(CompiledPoly::new).collect();
    let mut out = Solutions { points: Vec::new(), residuals: Vec::new(), paths: starts.len(), failed: 0, at_infinity: 0 };
    for r in results {
        let x0 = r.end[0];
        if x0.norm() < 1e-8 * norm(&r.end) {
            out.at_infinity += 1;
            continue;
        }
        let x: Vec<C64> = r.end[1..].iter().map(|v| v / x0).collect();
        let (x, res) = newton_refine(&affine, &x, 6);
        if res <= accept && x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            out.points.push(x);
            out.residuals.push(res);
        } else if r.ok() {
            out.at_infinity += 1;
        } else {
            out.failed += 1;
        }
    }
    out
}

/// A singular point of the projective hypersurface `form = 0`, if the
/// solver finds one. Solves `k - 1` random combinations of the `k` partials
/// in a random affine chart and tests all partials at each solution.
pub fn singular_point(form: &MultiPoly<C64>, seeds: &SeedTree) -> Option<Vec<C64>> {
    let k = form.nvars();
    let d = form.total_degree();
    let partials: Vec<MultiPoly<C64>> = (0..k).map(|i| form.derivative(i)).collect();
    let mut rng = seeds.child("singular").rng();
    let combos: Vec<MultiPoly<C64>> = (0..k - 1)
        .map(|_| {
            partials.iter().fold(MultiPoly::zero(k), |acc, p| &acc + &p.scale(&gaussian_c64(&mut rng)))
        })
        .collect();
    // X = M (1, y_1, ..., y_{k-1})
    let m: Vec<Vec<C64>> = (0..k).map(|_| random_point(&mut rng, k)).collect();
    let chart: Vec<MultiPoly<C64>> = (0..k)
        .map(|i| {
            let mut f = MultiPoly::constant(k - 1, m[i][0]);
            for j in 1..k {
                f = &f + &MultiPoly::var(k - 1, j - 1).scale(&m[i][j]);
            }
            f
        })
        .collect();
    let eqs: Vec<MultiPoly<C64>> = combos.iter().map(|c| c.substitute(&chart)).collect();
    let sols = solve_total_degree(&eqs, &seeds.child("singular-solve"), &TrackOptions::default(), 1e-8);
    let scale: f64 = form.terms().map(|(_, c)| c.norm()).sum();
    let grads: Vec<CompiledPoly> = partials.iter().map(CompiledPoly::new).collect();
    sols.points.into_iter().find_map(|y| {
        let x: Vec<C64> = (0..k)
            .map(|i| m[i][0] + (1..k).map(|j| m[i][j] * y[j - 1]).sum::<C64>())
            .collect();
        let nx = norm(&x);
        let worst = grads.iter().map(|g| g.eval(&x).norm()).fold(0.0, f64::max);
        (worst <= 1e-7 * scale * nx.powi(d as i32 - 1)).then_some(x)
    })
}

/// A random complex point with Gaussian coordinates.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian_c64(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn var(n: usize, i: usize) -> MultiPoly<C64> {
        MultiPoly::var(n, i)
    }

    #[test]
    fn compiled_gradient_matches_symbolic() {
        let x = var(2, 0);
        let y = var(2, 1);
        let p = &(&(&x * &x) * &y) - &(&y * &MultiPoly::constant(2, c(3.0)));
        let cp = CompiledPoly::new(&p);
        let pt = [C64::new(0.3, -1.2), C64::new(2.0, 0.5)];
        let (v, g) = cp.eval_grad(&pt);
        assert!((v - p.eval(&pt)).norm() < 1e-12);
        for i in 0..2 {
            assert!((g[i] - p.derivative(i).eval(&pt)).norm() < 1e-12);
        }
    }

    #[test]
    fn total_degree_finds_all_intersections() {
        // circle x^2 + y^2 = 5 and hyperbola xy = 2: (±1, ±2), (±2, ±1)
        let x = var(2, 0);
        let y = var(2, 1);
        let f1 = &(&(&x * &x) + &(&y * &y)) - &MultiPoly::constant(2, c(5.0));
        let f2 = &(&x * &y) - &MultiPoly::constant(2, c(2.0));
        let sols = solve_total_degree(&[f1, f2], &SeedTree::new(1), &TrackOptions::default(), 1e-12);
        assert_eq!(sols.points.len(), 4);
        for p in &sols.points {
            assert!((p[0] * p[1] - c(2.0)).norm() < 1e-10);
            assert!(p[0].im.abs() < 1e-10);
        }
    }

    #[test]
    fn solutions_at_infinity_are_separated() {
        // xy = 1, x = 0: both Bezout solutions lie at infinity
        let x = var(2, 0);
        let y = var(2, 1);
        let f1 = &(&x * &y) - &MultiPoly::constant(2, c(1.0));
        let f2 = x.clone();
        let sols = solve_total_degree(&[f1, f2], &SeedTree::new(2), &TrackOptions::default(), 1e-12);
        assert!(sols.points.is_empty());
        assert_eq!(sols.at_infinity + sols.failed, 2);
    }

    #[test]
    fn parameter_path_moves_square_roots() {
        // x^2 - s
        let n = 2;
        let x = var(n, 0);
        let s = var(n, 1);
        let eq = [CompiledPoly::new(&(&(&x * &x) - &s))];
        let h = ParameterHomotopy::new(&eq, 1, vec![vec![c(1.0)], vec![c(4.0)]]);
        let r = track(&h, &[c(1.0)], 0.0, 1.0, &TrackOptions::default());
        assert!(r.ok());
        assert!((r.end[0] - c(2.0)).norm() < 1e-10);
        // constant path
        let h = ParameterHomotopy::new(&eq, 1, vec![vec![c(1.0)], vec![c(1.0)]]);
        let r = track(&h, &[c(-1.0)], 0.0, 1.0, &TrackOptions::default());
        assert!((r.end[0] - c(-1.0)).norm() < 1e-14);
        // loop around the branch point swaps the roots
        let circle: Vec<Vec<C64>> =
            (0..=16).map(|k| vec![C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 16.0)]).collect();
        let h = ParameterHomotopy::new(&eq, 1, circle);
        let r = track(&h, &[c(1.0)], 0.0, 1.0, &TrackOptions::default());
        assert!(r.ok());
        assert!((r.end[0] - c(-1.0)).norm() < 1e-10);
    }
}
