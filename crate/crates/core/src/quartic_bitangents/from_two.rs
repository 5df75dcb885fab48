//! Completion of the bitangents from two of them: with the two lines at
//! `x = 0` and `y = 0` the quartic reads `xy (U + 2tV + t^2 xy) - (V + txy)^2`,
//! and the conic `U + 2tV + t^2 xy` splits into two bitangents for the five
//! roots of a quintic in `t`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complement_basis, cross, inverse_c64, norm, null_vector};
use crate::poly::{roots, AnyPoly, ComplexPoly, MultiPoly, Poly};
use crate::scalar::C64;

use super::{insert_distinct, polish_bitangent, sort_bitangents, Bitangent, PlaneQuartic, WITNESS_TOL};

/// `|C(T1 ∩ T2)|` (normalized form, unit point) below which the pair is rejected.
const MEET_ON_CURVE_TOL: f64 = 1e-8;
/// Relative separation below which two `t`-roots count as repeated.
const DISTINCT_TOL: f64 = 1e-7;
/// Cap on passes when completing to 28.
const MAX_PASSES: usize = 40;

/// Conic coefficients in the order `x^2, xy, xz, y^2, yz, z^2`.
pub type Conic = [C64; 6];

/// `C = xy (U + 2kV + t^2 xy) - W^2` with `W = V + t xy`, in the
/// coordinates where the two starting bitangents are `x = 0` and `y = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticSplitForm {
    pub u: Conic,
    pub v: Conic,
    pub k: C64,
    pub t: C64,
    pub w: Conic,
    /// Largest coefficient of the form minus the quartic.
    pub residual: f64,
}

/// One pass of the construction from an ordered pair of bitangents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FromTwoPass {
    pub pair: [Bitangent; 2],
    /// Rows are the linear forms of the new coordinates `x, y, z`.
    pub transform: [[C64; 3]; 3],
    pub quintic: AnyPoly,
    pub roots: Vec<C64>,
    pub forms: Vec<QuarticSplitForm>,
    pub pairs: Vec<[Bitangent; 2]>,
    /// Per root, the largest value of the normalized conic `W` on the eight
    /// contacts of `x, y, p, q`.
    pub conic_residuals: Vec<f64>,
}

fn conic_matrix(c: &Conic) -> [[C64; 3]; 3] {
    let h = |z: C64| z * 0.5;
    [[c[0], h(c[1]), h(c[2])], [h(c[1]), c[3], h(c[4])], [h(c[2]), h(c[4]), c[5]]]
}

fn conic_eval(c: &Conic, p: &[C64; 3]) -> C64 {
    let [x, y, z] = *p;
    c[0] * x * x + c[1] * x * y + c[2] * x * z + c[3] * y * y + c[4] * y * z + c[5] * z * z
}

fn conic_poly(c: &Conic) -> MultiPoly<C64> {
    MultiPoly::from_dense_form(3, 2, c)
}

/// `sqrt` of a binary quartic `h0 a^4 + ... + h4 b^4` from its `b^4` end.
fn binary_sqrt(h: [C64; 5]) -> [C64; 3] {
    let c = h[4].sqrt();
    let b = h[3] / (c * 2.0);
    let a = (h[2] - b * b) / (c * 2.0);
    [a, b, c]
}

fn apply(m: &[[C64; 3]; 3], x: &[C64; 3]) -> [C64; 3] {
    std::array::from_fn(|i| (0..3).map(|j| m[i][j] * x[j]).sum())
}

fn unit(v: [C64; 3]) -> [C64; 3] {
    let n = norm(&v);
    v.map(|c| c / n)
}

/// Lines (in the current coordinates) whose product is the rank-2 conic `m`.
fn split_conic(m: &DMatrix<C64>) -> Result<[[C64; 3]; 2]> {
    let (v, sv) = null_vector(m);
    if sv[1] < 1e-8 * sv[0] {
        return Err(Error::degenerate("bitangents-from-two", "split conic is a double line"));
    }
    let vertex = [v[0], v[1], v[2]];
    let comp = complement_basis(&[vertex.iter().map(|c| c.conj()).collect()], 3, 1);
    let (a, b) = (&comp[0], &comp[1]);
    let form = |x: &[C64], y: &[C64]| -> C64 { (0..3).map(|i| (0..3).map(|j| x[i] * m[(i, j)] * y[j]).sum::<C64>()).sum() };
    let (qa, qab, qb) = (form(a, a), form(a, b), form(b, b));
    let disc = (qab * qab - qa * qb).sqrt();
    let comb = |s: C64, t: C64| [s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]];
    let one = C64::new(1.0, 0.0);
    let pts = if qb.norm() >= qa.norm() {
        [comb(one, (-qab + disc) / qb), comb(one, (-qab - disc) / qb)]
    } else {
        [comb((-qab + disc) / qa, one), comb((-qab - disc) / qa, one)]
    };
    Ok(pts.map(|p| cross(&vertex, &p)))
}

/// One pass from `(t1, t2)`: the quintic in `t`, its roots, and the five
/// bitangent pairs they give.
pub fn from_two_pass(curve: &PlaneQuartic, t1: &Bitangent, t2: &Bitangent) -> Result<FromTwoPass> {
    let f = curve.normalized_poly();
    for t in [t1, t2] {
        if t.residual > WITNESS_TOL {
            return Err(Error::invalid(format!("input line is not a bitangent (residual {:.3e})", t.residual)));
        }
    }
    let meet = cross(&t1.line, &t2.line);
    if norm(&meet) < 1e-12 {
        return Err(Error::invalid("the two bitangents coincide"));
    }
    let meet = unit(meet);
    let on_curve = f.eval(&meet).norm();
    if on_curve < MEET_ON_CURVE_TOL {
        return Err(Error::invalid(format!("the bitangents meet on the curve (|C| = {on_curve:.3e})")));
    }
    let a = [unit(t1.line), unit(t2.line), meet.map(|c| c.conj())];
    let inv = inverse_c64(&a.iter().map(|r| r.to_vec()).collect()).ok_or_else(|| Error::numerical("singular frame"))?;
    // g(X) = f(A^{-1} X)
    let forms: Vec<MultiPoly<C64>> = (0..3)
        .map(|i| (0..3).fold(MultiPoly::zero(3), |acc, j| &acc + &MultiPoly::var(3, j).scale(&inv[i][j])))
        .collect();
    let g = f.substitute(&forms);
    let g = g.scale(&C64::new(1.0 / g.max_abs_coeff(), 0.0));
    let coef = |e: [u8; 3]| g.coeff(&e);
    // V on x = 0 and y = 0 from -g(0, y, z) and -g(x, 0, z)
    let vy = binary_sqrt(std::array::from_fn(|k| -coef([0, (4 - k) as u8, k as u8])));
    let vx = binary_sqrt(std::array::from_fn(|k| -coef([(4 - k) as u8, 0, k as u8])));
    let zero = C64::new(0.0, 0.0);
    let v: Conic = [vx[0], zero, vx[1], vy[0], vy[1], vy[2]];
    let vp = conic_poly(&v);
    let n = &g + &(&vp * &vp);
    let mut u: Conic = [zero; 6];
    let quad = crate::poly::monomials(3, 2);
    for (e, c) in n.terms() {
        if e[0] >= 1 && e[1] >= 1 {
            let r = [e[0] - 1, e[1] - 1, e[2]];
            let idx = quad.iter().position(|m| m[..] == r[..]).expect("degree-2 monomial");
            u[idx] = *c;
        }
    }
    let xy: Conic = [zero, C64::new(1.0, 0.0), zero, zero, zero, zero];
    // det(U + 2tV + t^2 xy) as a polynomial in t
    let (mu, mv, mxy) = (conic_matrix(&u), conic_matrix(&v), conic_matrix(&xy));
    let entry = |i: usize, j: usize| Poly::new(vec![mu[i][j], mv[i][j] * 2.0, mxy[i][j]]);
    let e: Vec<Vec<ComplexPoly>> = (0..3).map(|i| (0..3).map(|j| entry(i, j)).collect()).collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&e[1][a] * &e[2][b]) - &(&e[1][c] * &e[2][d]);
    let det = &(&(&e[0][0] * &minor(1, 2, 2, 1)) - &(&e[0][1] * &minor(0, 2, 2, 0))) + &(&e[0][2] * &minor(0, 1, 1, 0));
    let quintic = det.trim_relative(1e-12);
    if quintic.degree() != 5 {
        return Err(Error::degenerate("bitangents-from-two", format!("split condition has degree {}", quintic.degree())));
    }
    let rs = roots(&quintic, 1e-12)?.roots;
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if (rs[i] - rs[j]).norm() < DISTINCT_TOL * (1.0 + rs[i].norm()) {
                return Err(Error::degenerate(
                    "bitangents-from-two",
                    format!("repeated root t = {:.6}{:+.6}i", rs[i].re, rs[i].im),
                ));
            }
        }
    }
    let at = [[a[0][0], a[1][0], a[2][0]], [a[0][1], a[1][1], a[2][1]], [a[0][2], a[1][2], a[2][2]]];
    let mut pairs = Vec::with_capacity(5);
    let mut forms_out = Vec::with_capacity(5);
    let mut conic_residuals = Vec::with_capacity(5);
    for &t in &rs {
        let m = DMatrix::from_fn(3, 3, |i, j| mu[i][j] + mv[i][j] * t * 2.0 + mxy[i][j] * t * t);
        let lines = split_conic(&m)?;
        let pair = lines.map(|l| polish_bitangent(&f, &apply(&at, &l)));
        let [p, q] = pair;
        let pair = [p?, q?];
        let w: Conic = std::array::from_fn(|i| v[i] + xy[i] * t);
        let wn = w.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let contacts = [t1, t2, &pair[0], &pair[1]].into_iter().flat_map(|b| b.contacts);
        let worst = contacts.map(|c| conic_eval(&w, &unit(apply(&a, &c))).norm() / wn).fold(0.0, f64::max);
        conic_residuals.push(worst);
        let wp = conic_poly(&w);
        let inner = &(&conic_poly(&u) + &vp.scale(&(t * 2.0))) + &conic_poly(&xy).scale(&(t * t));
        let rebuilt = &(&(&MultiPoly::var(3, 0) * &MultiPoly::var(3, 1)) * &inner) - &(&wp * &wp);
        let residual = (&rebuilt - &g).max_abs_coeff();
        forms_out.push(QuarticSplitForm { u, v, k: t, t, w, residual });
        pairs.push(pair);
    }
    Ok(FromTwoPass {
        pair: [t1.clone(), t2.clone()],
        transform: a,
        quintic: quintic.into(),
        roots: rs,
        forms: forms_out,
        pairs,
        conic_residuals,
    })
}

/// All 28 bitangents from two: passes from the starting pair, then from
/// pairs of known bitangents not yet used together, until 28 are known.
pub fn bitangents_from_two(curve: &PlaneQuartic, t1: &Bitangent, t2: &Bitangent) -> Result<(Vec<Bitangent>, Vec<FromTwoPass>)> {
    let first = from_two_pass(curve, t1, t2)?;
    let mut found = vec![t1.clone(), t2.clone()];
    let mut used: Vec<(usize, usize)> = Vec::new();
    let mut passes = Vec::new();
    let record = |found: &mut Vec<Bitangent>, used: &mut Vec<(usize, usize)>, pass: &FromTwoPass| {
        let mut group = vec![pass.pair[0].clone(), pass.pair[1].clone()];
        for p in &pass.pairs {
            group.extend(p.iter().cloned());
        }
        for b in group.iter() {
            insert_distinct(found, b.clone());
        }
        // pairs of the complex are spent
        let idx = |b: &Bitangent| found.iter().position(|m| m.distance(b) < super::DEDUP_TOL);
        for k in 0..6 {
            if let (Some(i), Some(j)) = (idx(&group[2 * k]), idx(&group[2 * k + 1])) {
                used.push((i.min(j), i.max(j)));
            }
        }
    };
    record(&mut found, &mut used, &first);
    passes.push(first);
    'outer: while found.len() < 28 && passes.len() < MAX_PASSES {
        for i in 0..found.len() {
            for j in i + 1..found.len() {
                if used.contains(&(i, j)) {
                    continue;
                }
                used.push((i, j));
                match from_two_pass(curve, &found[i].clone(), &found[j].clone()) {
                    Ok(pass) => {
                        record(&mut found, &mut used, &pass);
                        passes.push(pass);
                        continue 'outer;
                    }
                    Err(e) if e.is_input_error() => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        break;
    }
    if found.len() != 28 {
        return Err(Error::numerical(format!("completion from two reached {} of 28 bitangents", found.len())));
    }
    sort_bitangents(&mut found);
    Ok((found, passes))
}
