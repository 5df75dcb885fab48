use std::collections::BTreeMap;

use crate::cubic_lines::ProjLine;
use crate::error::{Error, Result};
use crate::poly::{monomials, MultiPoly};
use crate::scalar::C64;

use super::ParametricSystem;

fn one(n: usize) -> MultiPoly<C64> {
    MultiPoly::constant(n, C64::new(1.0, 0.0))
}

/// `sum_m c_m x^m` over `monomials(xs.len(), d)`, with `c_m` the variables
/// starting at `first_coeff`.
fn generic_form(xs: &[MultiPoly<C64>], d: u8, nvars: usize, first_coeff: usize) -> MultiPoly<C64> {
    monomials(xs.len(), d).iter().enumerate().fold(MultiPoly::zero(nvars), |acc, (j, m)| {
        let term = m.iter().zip(xs).fold(MultiPoly::var(nvars, first_coeff + j), |t, (&e, x)| &t * &x.pow(e as usize));
        &acc + &term
    })
}

/// Lines on the cubic surface with coefficients `c` (in the order of
/// `monomials(4, 3)`), in the chart of lines through `(1, 0, a0, a1)` and
/// `(0, 1, b0, b1)`. Unknowns `(a0, a1, b0, b1)`; 27 solutions.
pub fn lines27() -> ParametricSystem {
    // variables: a0 a1 b0 b1 | c_0..c_19 | s u
    let n = 4 + 20 + 2;
    let v = |i| MultiPoly::<C64>::var(n, i);
    let (s, u) = (v(24), v(25));
    let xs = [s.clone(), u.clone(), &(&s * &v(0)) + &(&u * &v(2)), &(&s * &v(1)) + &(&u * &v(3))];
    let f = generic_form(&xs, 3, n, 4);
    let mut parts: BTreeMap<u8, Vec<(Vec<u8>, C64)>> = BTreeMap::new();
    for (e, c) in f.terms() {
        parts.entry(e[25]).or_default().push((e[..24].to_vec(), *c));
    }
    let eqs = (0..4u8).map(|k| MultiPoly::from_terms(24, parts.remove(&k).unwrap_or_default())).collect();
    ParametricSystem::new("lines27", eqs, 4, 27).expect("square by construction")
}

/// The line of a `lines27` fiber point.
pub fn lines27_line(x: &[C64]) -> Result<ProjLine> {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    ProjLine::from_points(&[o, z, x[0], x[1]], &[z, o, x[2], x[3]])
}

/// Two affine plane curves of degrees `r` and `s` with all coefficients
/// as parameters; `rs` intersection points.
pub fn bezout_system(r: u8, s: u8) -> Result<ParametricSystem> {
    if r == 0 || s == 0 {
        return Err(Error::invalid(format!("curve degrees must be positive, got ({r}, {s})")));
    }
    let nr = (r as usize + 1) * (r as usize + 2) / 2;
    let ns = (s as usize + 1) * (s as usize + 2) / 2;
    let n = 2 + nr + ns;
    let xs = [MultiPoly::var(n, 0), MultiPoly::var(n, 1), one(n)];
    let f = generic_form(&xs, r, n, 2);
    let g = generic_form(&xs, s, n, 2 + nr);
    ParametricSystem::new(format!("bezout:{r},{s}"), vec![f, g], 2, r as usize * s as usize)
}

/// Flexes of a plane curve of degree `d`: the curve and its Hessian in the
/// chart `z = 1`, coefficients as parameters; `3d(d - 2)` solutions.
pub fn flex_system(d: u8) -> Result<ParametricSystem> {
    if d < 3 {
        return Err(Error::invalid(format!("flexes need degree at least 3, got {d}")));
    }
    let nc = (d as usize + 1) * (d as usize + 2) / 2;
    // homogeneous in x y z | c
    let n = 3 + nc;
    let xs: Vec<MultiPoly<C64>> = (0..3).map(|i| MultiPoly::var(n, i)).collect();
    let c = generic_form(&xs, d, n, 3);
    let h: Vec<Vec<MultiPoly<C64>>> =
        (0..3).map(|i| (0..3).map(|j| c.derivative(i).derivative(j)).collect()).collect();
    let minor = |a: usize, b: usize, p: usize, q: usize| &(&h[a][p] * &h[b][q]) - &(&h[a][q] * &h[b][p]);
    let hess = &(&(&h[0][0] * &minor(1, 2, 1, 2)) - &(&h[0][1] * &minor(1, 2, 0, 2))) + &(&h[0][2] * &minor(1, 2, 0, 1));
    // z = 1, then x y | c
    let m = 2 + nc;
    let chart: Vec<MultiPoly<C64>> = [MultiPoly::var(m, 0), MultiPoly::var(m, 1), one(m)]
        .into_iter()
        .chain((0..nc).map(|j| MultiPoly::var(m, 2 + j)))
        .collect();
    let eqs = vec![c.substitute(&chart), hess.substitute(&chart)];
    let du = d as usize;
    ParametricSystem::new(format!("flex:{d}"), eqs, 2, 3 * du * (du - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic_lines::{lines_on_cubic, CubicSurface};
    use crate::rng::SeedTree;

    #[test]
    fn fiber_degrees() {
        assert_eq!(flex_system(3).unwrap().fiber_degree, 9);
        assert_eq!(flex_system(4).unwrap().fiber_degree, 24);
        assert!(flex_system(2).is_err());
        assert_eq!(bezout_system(2, 2).unwrap().fiber_degree, 4);
        assert_eq!(bezout_system(2, 3).unwrap().fiber_degree, 6);
        assert_eq!(bezout_system(1, 1).unwrap().fiber_degree, 1);
        assert!(bezout_system(0, 2).is_err());
        let l = lines27();
        assert_eq!((l.unknowns, l.params), (4, 20));
    }

    #[test]
    fn generic_fibers_are_full() {
        for sys in [bezout_system(2, 3).unwrap(), flex_system(3).unwrap(), lines27()] {
            let seeds = SeedTree::new(11);
            let p = sys.random_parameters(&seeds);
            assert_eq!(sys.solve_fiber(&p, &seeds).len(), sys.fiber_degree, "{}", sys.name);
        }
    }

    #[test]
    fn lines27_fiber_matches_line_solver() {
        let s = CubicSurface::random(4);
        let p = s.coeffs_c64();
        let sys = lines27();
        let fiber = sys.solve_fiber(&p, &SeedTree::new(4));
        let cfg = lines_on_cubic(&s, 4).unwrap();
        assert_eq!(fiber.len(), 27);
        for x in &fiber {
            let l = lines27_line(x).unwrap();
            assert!(cfg.lines.iter().any(|m| m.distance(&l) < 1e-7));
        }
    }
}
