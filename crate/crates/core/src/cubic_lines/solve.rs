use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::homotopy::{newton_refine, random_point, solve_total_degree, CompiledPoly, TrackOptions};
use crate::poly::MultiPoly;
use crate::rng::SeedTree;
use crate::scalar::C64;

use super::{insert_distinct, restrict, CubicSurface, LineConfiguration, ProjLine, ON_SURFACE_TOL};

/// Charts tried before giving up: the coordinate chart and three random ones.
const CHARTS: u64 = 4;

/// The four coefficient equations in `(alpha, beta, gamma, delta)` for lines
/// `x = c0 s + c1 u + c2 (alpha s + beta u) + c3 (gamma s + delta u)`, where
/// `c0..c3` are the columns of `frame`.
pub fn chart_equations(f: &MultiPoly<C64>, frame: &[[C64; 4]; 4]) -> Vec<MultiPoly<C64>> {
    let v = |i| MultiPoly::<C64>::var(6, i);
    let y = [v(0), v(1), &(&v(2) * &v(0)) + &(&v(3) * &v(1)), &(&v(4) * &v(0)) + &(&v(5) * &v(1))];
    let x: Vec<MultiPoly<C64>> = (0..4)
        .map(|i| (0..4).fold(MultiPoly::zero(6), |acc, k| &acc + &y[k].scale(&frame[k][i])))
        .collect();
    let g = f.substitute(&x);
    let mut parts: BTreeMap<(u8, u8), Vec<(Vec<u8>, C64)>> = BTreeMap::new();
    for (e, c) in g.terms() {
        parts.entry((e[0], e[1])).or_default().push((e[2..].to_vec(), *c));
    }
    [(3, 0), (2, 1), (1, 2), (0, 3)]
        .iter()
        .map(|k| MultiPoly::from_terms(4, parts.remove(k).unwrap_or_default()))
        .collect()
}

fn chart_line(frame: &[[C64; 4]; 4], a: &[C64]) -> Result<ProjLine> {
    let p: Vec<C64> = (0..4).map(|i| frame[0][i] + a[0] * frame[2][i] + a[2] * frame[3][i]).collect();
    let q: Vec<C64> = (0..4).map(|i| frame[1][i] + a[1] * frame[2][i] + a[3] * frame[3][i]).collect();
    ProjLine::from_points(&p, &q)
}

/// Newton-polishes a line on `f = 0` in the chart adapted to the line.
/// Returns the refined line and its restricted-cubic residual.
pub fn polish_line(f: &MultiPoly<C64>, line: &ProjLine) -> Result<(ProjLine, f64)> {
    let frame = line.frame();
    let eqs: Vec<CompiledPoly> = chart_equations(f, &frame).iter().map(CompiledPoly::new).collect();
    let (a, _) = newton_refine(&eqs, &[C64::new(0.0, 0.0); 4], 8);
    let polished = chart_line(&frame, &a)?;
    let r_old = max_norm(&restrict(f, line));
    let r_new = max_norm(&restrict(f, &polished));
    Ok(if r_new <= r_old { (polished, r_new) } else { (line.clone(), r_old) })
}

fn max_norm(c: &[C64]) -> f64 {
    c.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The 27 lines by total-degree homotopy (81 paths per chart), with up to
/// three seeded fallback charts for lines the coordinate chart misses.
pub fn lines_on_cubic(surface: &CubicSurface, seed: u64) -> Result<LineConfiguration> {
    let seeds = SeedTree::new(seed).child("lines-on-cubic");
    let mut s = surface.clone();
    s.check_smooth(&seeds)?;
    let f = s.normalized_poly();
    let mut found: Vec<ProjLine> = Vec::new();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    for chart in 0..CHARTS {
        let frame = if chart == 0 {
            std::array::from_fn(|k| std::array::from_fn(|i| if i == k { one } else { zero }))
        } else {
            let mut rng = seeds.child("frame").index(chart).rng();
            std::array::from_fn(|_| {
                let v = random_point(&mut rng, 4);
                [v[0], v[1], v[2], v[3]]
            })
        };
        let eqs = chart_equations(&f, &frame);
        let sols = solve_total_degree(&eqs, &seeds.child("chart").index(chart), &TrackOptions::default(), 1e-8);
        for a in &sols.points {
            let Ok(line) = chart_line(&frame, a) else { continue };
            let (line, res) = polish_line(&f, &line)?;
            if res < ON_SURFACE_TOL {
                insert_distinct(&mut found, line);
            }
        }
        if found.len() >= 27 {
            break;
        }
    }
    if found.len() != 27 {
        return Err(Error::numerical(format!("found {} of 27 lines after {CHARTS} charts", found.len())));
    }
    let cfg = LineConfiguration::from_lines(found);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic_lines::double_sixes;

    /// The 27 Fermat lines `x_a = -z x_b, x_c = -z' x_d` for the three
    /// pairings of coordinates and cube roots of unity `z, z'`.
    fn fermat_lines() -> Vec<ProjLine> {
        let w: Vec<C64> = (0..3).map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0)).collect();
        let mut out = Vec::new();
        for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
            for z in &w {
                for zz in &w {
                    let mut p = [C64::new(0.0, 0.0); 4];
                    let mut q = p;
                    p[a] = -z;
                    p[b] = C64::new(1.0, 0.0);
                    q[c] = -zz;
                    q[d] = C64::new(1.0, 0.0);
                    out.push(ProjLine::from_points(&p, &q).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn fermat_lines_match_closed_form() {
        let s = CubicSurface::fermat();
        let oracle = fermat_lines();
        for l in &oracle {
            assert!(s.line_residual(l) < 1e-14);
        }
        let cfg = lines_on_cubic(&s, 0).unwrap();
        assert_eq!(cfg.len(), 27);
        for l in &oracle {
            assert!(cfg.index_of(l).is_some(), "missing {l:?}");
        }
    }

    #[test]
    fn random_cubic_has_schlafli_configuration() {
        let s = CubicSurface::random(11);
        let cfg = lines_on_cubic(&s, 11).unwrap();
        for l in &cfg.lines {
            assert!(s.line_residual(l) < ON_SURFACE_TOL);
            assert!(l.relation() < 1e-10);
        }
        let d = double_sixes(&cfg).unwrap();
        assert_eq!(d.sixers.len(), 72);
        assert_eq!(d.double_sixes.len(), 36);
    }
}
