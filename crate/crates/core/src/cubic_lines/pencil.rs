//! Lines from one line: the planes through a line `L` on `S` cut `S` in
//! `L` plus a residual conic, which degenerates for the 5 roots of a binary
//! quintic; each root gives a pair of new lines.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complement_basis, null_vector};
use crate::poly::{interpolate, roots, AnyPoly, MultiPoly};
use crate::scalar::C64;

use super::{insert_distinct, polish_line, CubicSurface, LineConfiguration, ProjLine, ON_SURFACE_TOL};

/// Relative root separation below which the quintic has a repeated root.
const DISTINCT_TOL: f64 = 1e-7;
/// Interpolation nodes for the discriminant; more than 6 so the degree is
/// measured rather than assumed.
const NODES: usize = 8;

/// One pass of the pencil construction from a single line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilPass {
    pub line: ProjLine,
    /// Discriminant of the residual conic in the pencil parameter `t` (the
    /// plane spanned by `L` and `R1 + t R2`).
    pub quintic: AnyPoly,
    pub degree: usize,
    pub roots: Vec<C64>,
    pub pairs: Vec<[ProjLine; 2]>,
}

/// Matrix of the residual conic `C` in `f(sP + uQ + wR) = w C(s, u, w)`.
fn residual_conic(f: &MultiPoly<C64>, p: &[C64; 4], q: &[C64; 4], r: &[C64; 4]) -> DMatrix<C64> {
    let v = |k| MultiPoly::<C64>::var(3, k);
    let forms: Vec<MultiPoly<C64>> =
        (0..4).map(|i| &(&v(0).scale(&p[i]) + &v(1).scale(&q[i])) + &v(2).scale(&r[i])).collect();
    let g = f.substitute(&forms);
    let c = |e: [u8; 3]| g.coeff(&e);
    let h = C64::new(0.5, 0.0);
    let m = [
        [c([2, 0, 1]), c([1, 1, 1]) * h, c([1, 0, 2]) * h],
        [c([1, 1, 1]) * h, c([0, 2, 1]), c([0, 1, 2]) * h],
        [c([1, 0, 2]) * h, c([0, 1, 2]) * h, c([0, 0, 3])],
    ];
    DMatrix::from_fn(3, 3, |i, j| m[i][j])
}

fn det3(m: &DMatrix<C64>) -> C64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]) - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// Vertex and one further point on each line of a rank-2 conic.
fn split_conic(m: &DMatrix<C64>) -> Result<([C64; 3], [[C64; 3]; 2])> {
    let (v, sv) = null_vector(m);
    if sv[1] < 1e-8 * sv[0] {
        return Err(Error::degenerate("lines-from-one", "residual conic is a double line"));
    }
    let vertex = [v[0], v[1], v[2]];
    let comp = complement_basis(&[vertex.iter().map(|c| c.conj()).collect()], 3, 1);
    let (a, b) = (&comp[0], &comp[1]);
    let form = |x: &[C64], y: &[C64]| -> C64 { (0..3).map(|i| (0..3).map(|j| x[i] * m[(i, j)] * y[j]).sum::<C64>()).sum() };
    let (qa, qab, qb) = (form(a, a), form(a, b), form(b, b));
    // Q(sigma a + tau b) = qa sigma^2 + 2 qab sigma tau + qb tau^2
    let disc = (qab * qab - qa * qb).sqrt();
    let comb = |s: C64, t: C64| [s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]];
    let one = C64::new(1.0, 0.0);
    let pts = if qb.norm() >= qa.norm() {
        [comb(one, (-qab + disc) / qb), comb(one, (-qab - disc) / qb)]
    } else {
        [comb((-qab + disc) / qa, one), comb((-qab - disc) / qa, one)]
    };
    Ok((vertex, pts))
}

fn to_space(p: &[C64; 4], q: &[C64; 4], r: &[C64; 4], x: &[C64; 3]) -> [C64; 4] {
    std::array::from_fn(|i| x[0] * p[i] + x[1] * q[i] + x[2] * r[i])
}

/// One pencil pass from `line`: the discriminant quintic, its roots and the
/// 10 lines they give.
pub fn pencil_pass(surface: &CubicSurface, line: &ProjLine) -> Result<PencilPass> {
    let f = surface.normalized_poly();
    let res = surface.line_residual(line);
    if res > ON_SURFACE_TOL {
        return Err(Error::invalid(format!("line is not on the surface (residual {res:.3e})")));
    }
    let frame = line.frame();
    let (p, q) = (frame[0], frame[1]);
    // rotate the complement until t = infinity is not a root
    let mut last_err = None;
    for turn in 0..3 {
        let th = 0.37 + 0.61 * turn as f64;
        let (c, s) = (C64::new(th.cos(), 0.0), C64::new(th.sin(), 0.0));
        let r1: [C64; 4] = std::array::from_fn(|i| c * frame[2][i] + s * frame[3][i]);
        let r2: [C64; 4] = std::array::from_fn(|i| -s * frame[2][i] + c * frame[3][i]);
        let plane = |t: C64| -> [C64; 4] { std::array::from_fn(|i| r1[i] + t * r2[i]) };
        let nodes: Vec<C64> =
            (0..NODES).map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / NODES as f64)).collect();
        let vals: Vec<C64> = nodes.iter().map(|&t| det3(&residual_conic(&f, &p, &q, &plane(t)))).collect();
        let full = interpolate(&nodes, &vals);
        let scale = full.max_abs_coeff();
        let quintic = full.trim_relative(1e-10);
        let degree = quintic.degree();
        if degree != 5 || quintic.leading().norm() < 1e-6 * scale {
            last_err = Some(Error::degenerate("lines-from-one", format!("pencil discriminant has degree {degree}")));
            continue;
        }
        let rs = roots(&quintic, 1e-12)?.roots;
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                if (rs[i] - rs[j]).norm() < DISTINCT_TOL * (1.0 + rs[i].norm()) {
                    return Err(Error::degenerate(
                        "lines-from-one",
                        format!("repeated discriminant root t = {:.6}{:+.6}i", rs[i].re, rs[i].im),
                    ));
                }
            }
        }
        let mut pairs = Vec::with_capacity(5);
        for &t in &rs {
            let r = plane(t);
            let (vertex, pts) = split_conic(&residual_conic(&f, &p, &q, &r))?;
            let v3 = to_space(&p, &q, &r, &vertex);
            let mut pair = Vec::with_capacity(2);
            for pt in &pts {
                let l = ProjLine::from_points(&v3, &to_space(&p, &q, &r, pt))?;
                pair.push(polish_line(&f, &l)?.0);
            }
            pairs.push([pair[0].clone(), pair[1].clone()]);
        }
        return Ok(PencilPass { line: line.clone(), quintic: quintic.into(), degree, roots: rs, pairs });
    }
    Err(last_err.expect("at least one rotation tried"))
}

/// All 27 lines from one: pencil passes from `line`, then from the new
/// lines, until 27 distinct lines are known. Returns the validated
/// configuration and the passes performed.
pub fn lines_from_one(surface: &CubicSurface, line: &ProjLine) -> Result<(LineConfiguration, Vec<PencilPass>)> {
    let mut found = vec![line.clone()];
    let mut passes = Vec::new();
    let mut next = 0;
    while found.len() < 27 && next < found.len() {
        let pass = pencil_pass(surface, &found[next])?;
        for pair in &pass.pairs {
            for l in pair {
                if surface.line_residual(l) < ON_SURFACE_TOL {
                    insert_distinct(&mut found, l.clone());
                }
            }
        }
        passes.push(pass);
        next += 1;
    }
    if found.len() != 27 {
        return Err(Error::numerical(format!("pencil construction reached {} of 27 lines", found.len())));
    }
    let cfg = LineConfiguration::from_lines(found);
    cfg.validate()?;
    Ok((cfg, passes))
}
