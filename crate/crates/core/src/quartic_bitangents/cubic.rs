//! Projection of a cubic surface from a point on it: the branch curve is a
//! plane quartic, the 27 lines map to bitangents and the tangent plane at
//! the point gives the 28th.

use serde::{Deserialize, Serialize};

use crate::cubic_lines::{lines_on_cubic, CubicSurface};
use crate::error::{Error, Result};
use crate::homotopy::random_point;
use crate::linalg::{complement_basis, cross, hdot, norm};
use crate::poly::{roots, MultiPoly, Poly};
use crate::rng::SeedTree;
use crate::scalar::C64;

use super::{Bitangent, PlaneQuartic};

/// `|f(p)|` (normalized form, unit point) accepted for a point on the surface.
const ON_SURFACE_TOL: f64 = 1e-10;
/// Distance from the point to a line below which the point is on it.
const ON_LINE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicProjection {
    pub point: [C64; 4],
    /// Orthonormal basis of the directions: `y` is the point `sum y_k e_k`.
    pub directions: [[C64; 4]; 3],
    pub quartic: PlaneQuartic,
    /// Images of the 27 lines in the order of `lines_on_cubic`, then the
    /// tangent-plane line.
    pub bitangents: Vec<Bitangent>,
}

fn unit4(v: &[C64]) -> [C64; 4] {
    let n = norm(v);
    std::array::from_fn(|i| v[i] / n)
}

/// A point of `surface` on a random line through it; seeded.
pub fn point_on_surface(surface: &CubicSurface, seed: u64) -> Result<[C64; 4]> {
    let f = surface.normalized_poly();
    let mut rng = SeedTree::new(seed).child("surface-point").rng();
    let a = random_point(&mut rng, 4);
    let b = random_point(&mut rng, 4);
    // f(a + t b) as a cubic in t
    let forms: Vec<MultiPoly<C64>> = (0..4)
        .map(|i| &MultiPoly::constant(1, a[i]) + &MultiPoly::var(1, 0).scale(&b[i]))
        .collect();
    let g = f.substitute(&forms);
    let cubic = Poly::new((0..4u8).map(|k| g.coeff(&[k])).collect());
    let t = roots(&cubic, 1e-12)?.roots[0];
    let p: Vec<C64> = (0..4).map(|i| a[i] + t * b[i]).collect();
    Ok(unit4(&p))
}

/// The branch quartic `B^2 - 4AC` of the projection from `point`, where
/// `f(p + tv) = A(v) t + B(v) t^2 + C(v) t^3`, and its 28 bitangents. The
/// lines of the surface are computed with `seed`.
pub fn quartic_from_cubic_point(surface: &CubicSurface, point: &[C64; 4], seed: u64) -> Result<CubicProjection> {
    let f = surface.normalized_poly();
    let p = unit4(point);
    let res = f.eval(&p).norm();
    if res > ON_SURFACE_TOL {
        return Err(Error::invalid(format!("point is not on the surface (|f| = {res:.3e})")));
    }
    let cfg = lines_on_cubic(surface, seed)?;
    for (k, l) in cfg.lines.iter().enumerate() {
        let (a, b) = l.points();
        let pa = hdot(&a, &p);
        let pb = hdot(&b, &p);
        let off: Vec<C64> = (0..4).map(|i| p[i] - a[i] * pa - b[i] * pb).collect();
        if norm(&off) < ON_LINE_TOL {
            return Err(Error::invalid(format!("point lies on line {k} of the surface")));
        }
    }
    let e = complement_basis(&[p.iter().map(|c| c.conj()).collect()], 4, 1);
    let dirs: [[C64; 4]; 3] = std::array::from_fn(|k| std::array::from_fn(|i| e[k][i]));
    // f(T p + sum y_k e_k) = T^2 A(y) + T B(y) + C(y) in variables (y0, y1, y2, T)
    let forms: Vec<MultiPoly<C64>> = (0..4)
        .map(|i| {
            (0..3).fold(MultiPoly::var(4, 3).scale(&p[i]), |acc, k| &acc + &MultiPoly::var(4, k).scale(&dirs[k][i]))
        })
        .collect();
    let h = f.substitute(&forms);
    let part = |deg_t: u8| MultiPoly::from_terms(3, h.terms().filter(|(e, _)| e[3] == deg_t).map(|(e, c)| (e[..3].to_vec(), *c)));
    let (a, b, c) = (part(2), part(1), part(0));
    let branch = &(&b * &b) - &(&(&a * &c).scale(&C64::new(4.0, 0.0)));
    let quartic = PlaneQuartic::from_poly(&branch)?;
    let g = quartic.normalized_poly();
    let coords = |x: &[C64; 4]| -> [C64; 3] { std::array::from_fn(|k| hdot(&dirs[k], x)) };
    let mut out = Vec::with_capacity(28);
    for l in &cfg.lines {
        let (u, v) = l.points();
        out.push(Bitangent::from_form(&g, &cross(&coords(&u), &coords(&v)))?);
    }
    let tangent: [C64; 3] = std::array::from_fn(|k| a.coeff(&[(k == 0) as u8, (k == 1) as u8, (k == 2) as u8]));
    out.push(Bitangent::from_form(&g, &tangent)?);
    Ok(CubicProjection { point: p, directions: dirs, quartic, bitangents: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartic_bitangents::{bitangents, same_bitangents, DEDUP_TOL};

    #[test]
    fn projection_matches_direct_solver() {
        let s = CubicSurface::random(5);
        let p = point_on_surface(&s, 5).unwrap();
        let proj = quartic_from_cubic_point(&s, &p, 5).unwrap();
        assert_eq!(proj.bitangents.len(), 28);
        for b in &proj.bitangents {
            assert!(b.residual < 1e-7, "{}", b.residual);
        }
        for i in 0..28 {
            for j in i + 1..28 {
                assert!(proj.bitangents[i].distance(&proj.bitangents[j]) > DEDUP_TOL);
            }
        }
        let mut q = proj.quartic.clone();
        q.check_smooth(&SeedTree::new(0)).unwrap();
        let direct = bitangents(&q, 0).unwrap();
        assert!(same_bitangents(&direct, &proj.bitangents, 1e-6));
    }

    #[test]
    fn rejects_points_on_lines_and_off_surface() {
        let s = CubicSurface::fermat();
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        // [1 : -1 : 0 : 0] lies on the line x0 + x1 = x2 + x3 = 0
        assert!(matches!(quartic_from_cubic_point(&s, &[one, -one, z, z], 0), Err(Error::InvalidInput(_))));
        assert!(matches!(quartic_from_cubic_point(&s, &[one, z, z, z], 0), Err(Error::InvalidInput(_))));
    }
}
