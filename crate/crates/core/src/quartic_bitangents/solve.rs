use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::homotopy::{newton_refine, random_point, solve_total_degree, CompiledPoly, TrackOptions};
use crate::linalg::cross;
use crate::poly::MultiPoly;
use crate::rng::SeedTree;
use crate::scalar::C64;

use super::{insert_distinct, sort_bitangents, Bitangent, PlaneQuartic, WITNESS_TOL};

/// Charts tried before giving up: the coordinate chart and three random ones.
const CHARTS: u64 = 4;

/// The two perfect-square conditions on `C(s(P + aR) + u(Q + bR))` as
/// polynomials in `(a, b)`, where `frame = [P, Q, R]`. With `c_k` the
/// coefficient of `s^{4-k} u^k`, a quartic with `c_0 != 0` is a square iff
/// `8 c0^2 c3 - 4 c0 c1 c2 + c1^3 = 0` and `64 c0^3 c4 = (4 c0 c2 - c1^2)^2`.
pub fn square_conditions(f: &MultiPoly<C64>, frame: &[[C64; 3]; 3]) -> [MultiPoly<C64>; 2] {
    let v = |i| MultiPoly::<C64>::var(4, i);
    let [p, q, r] = frame;
    let x: Vec<MultiPoly<C64>> = (0..3)
        .map(|i| {
            let pa = &MultiPoly::constant(4, p[i]) + &v(2).scale(&r[i]);
            let qb = &MultiPoly::constant(4, q[i]) + &v(3).scale(&r[i]);
            &(&v(0) * &pa) + &(&v(1) * &qb)
        })
        .collect();
    let g = f.substitute(&x);
    let mut parts: BTreeMap<(u8, u8), Vec<(Vec<u8>, C64)>> = BTreeMap::new();
    for (e, c) in g.terms() {
        parts.entry((e[0], e[1])).or_default().push((e[2..].to_vec(), *c));
    }
    let c: Vec<MultiPoly<C64>> =
        (0..5u8).map(|k| MultiPoly::from_terms(2, parts.remove(&(4 - k, k)).unwrap_or_default())).collect();
    let k = |x: f64| MultiPoly::constant(2, C64::new(x, 0.0));
    let c0sq = &c[0] * &c[0];
    let cond1 = &(&(&(&k(8.0) * &c0sq) * &c[3]) - &(&(&k(4.0) * &c[0]) * &(&c[1] * &c[2]))) + &c[1].pow(3);
    let inner = &(&(&k(4.0) * &c[0]) * &c[2]) - &(&c[1] * &c[1]);
    let cond2 = &(&(&k(64.0) * &(&c0sq * &c[0])) * &c[4]) - &(&inner * &inner);
    [cond1, cond2]
}

fn chart_line(frame: &[[C64; 3]; 3], ab: &[C64]) -> [C64; 3] {
    let [p, q, r] = frame;
    let pa: [C64; 3] = std::array::from_fn(|i| p[i] + ab[0] * r[i]);
    let qb: [C64; 3] = std::array::from_fn(|i| q[i] + ab[1] * r[i]);
    cross(&pa, &qb)
}

/// Newton on the square conditions in a frame adapted to `line`; keeps the
/// better of the old and new line by witness residual.
pub fn polish_bitangent(f: &MultiPoly<C64>, line: &[C64; 3]) -> Result<Bitangent> {
    let start = Bitangent::from_form(f, line)?;
    let (p, q) = (start.frame[0], start.frame[1]);
    let n = crate::linalg::norm(&start.line);
    let r: [C64; 3] = start.line.map(|c| c.conj() / n);
    let frame = [p, q, r];
    let eqs: Vec<CompiledPoly> = square_conditions(f, &frame).iter().map(CompiledPoly::new).collect();
    let (ab, _) = newton_refine(&eqs, &[C64::new(0.0, 0.0); 2], 8);
    let polished = Bitangent::from_form(f, &chart_line(&frame, &ab));
    Ok(match polished {
        Ok(b) if b.residual <= start.residual => b,
        _ => start,
    })
}

/// The 28 bitangents by total-degree homotopy on the square conditions,
/// keeping solutions whose witness residual is below [`WITNESS_TOL`].
pub fn bitangents(curve: &PlaneQuartic, seed: u64) -> Result<Vec<Bitangent>> {
    let seeds = SeedTree::new(seed).child("bitangents");
    let mut c = curve.clone();
    c.check_smooth(&seeds)?;
    let f = c.normalized_poly();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut found: Vec<Bitangent> = Vec::new();
    for chart in 0..CHARTS {
        // lines y = m x + c z: P = e0, Q = e2, R = e1
        let frame = if chart == 0 {
            [[one, zero, zero], [zero, zero, one], [zero, one, zero]]
        } else {
            let mut rng = seeds.child("frame").index(chart).rng();
            std::array::from_fn(|_| {
                let v = random_point(&mut rng, 3);
                [v[0], v[1], v[2]]
            })
        };
        let eqs = square_conditions(&f, &frame);
        let sols = solve_total_degree(&eqs, &seeds.child("chart").index(chart), &TrackOptions::default(), 1e-6);
        for ab in &sols.points {
            let l = chart_line(&frame, ab);
            let Ok(b) = polish_bitangent(&f, &l) else { continue };
            if b.residual < WITNESS_TOL {
                insert_distinct(&mut found, b);
            }
        }
        if found.len() >= 28 {
            break;
        }
    }
    if found.len() != 28 {
        return Err(Error::numerical(format!("found {} of 28 bitangents after {CHARTS} charts", found.len())));
    }
    sort_bitangents(&mut found);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_quartics_have_28() {
        for seed in [1, 2] {
            let q = PlaneQuartic::random(seed);
            let b = bitangents(&q, seed).unwrap();
            assert_eq!(b.len(), 28);
            for t in &b {
                assert!(t.residual < WITNESS_TOL);
            }
        }
    }
}
