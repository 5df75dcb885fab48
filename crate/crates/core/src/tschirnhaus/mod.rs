//! Tschirnhaus transformations and solution towers.
//!
//! A map `T = (b_0, ..., b_{n-1})` sends each root `x_i` of a degree-`n`
//! polynomial to `b_0 x_i^{n-1} + ... + b_{n-1}`; [`apply`] returns the
//! monic polynomial of the image roots without finding any roots.

mod reduce;
mod tower;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, det, Mat};
use crate::poly::{interpolate, roots, AnyPoly, ComplexPoly, Poly};
use crate::scalar::{Scalar, C64};

pub use reduce::{bring_hamilton_reduce, congruence_diagonalize, kill_two, BringHamiltonOptions, NormalFormTarget};
pub use tower::{solve_via_tower, Expr, SolutionTower, StepKind, TowerSolution, TowerStep, TOWER_TOL};

/// Tschirnhaus substitution of context degree `n`; `b[0]` multiplies `x^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TschirnhausMap<S> {
    pub n: usize,
    pub b: Vec<S>,
}

impl<S: Scalar> TschirnhausMap<S> {
    pub fn new(n: usize, b: Vec<S>) -> Result<Self> {
        if b.len() != n {
            return Err(Error::invalid(format!("Tschirnhaus map needs {n} parameters, got {}", b.len())));
        }
        Ok(TschirnhausMap { n, b })
    }

    pub fn identity(n: usize) -> Self {
        let mut b = vec![S::zero(); n];
        if n >= 2 {
            b[n - 2] = S::one();
        }
        TschirnhausMap { n, b }
    }

    /// Map from a polynomial of degree below `n`.
    pub fn from_poly(n: usize, t: &Poly<S>) -> Result<Self> {
        if !t.is_zero() && t.degree() >= n {
            return Err(Error::invalid("Tschirnhaus polynomial degree must be below n"));
        }
        Ok(TschirnhausMap { n, b: (0..n).map(|j| t.coeff(n - 1 - j)).collect() })
    }

    /// `T` as a polynomial in `x`.
    pub fn poly(&self) -> Poly<S> {
        Poly::from_descending(self.b.clone())
    }

    pub fn to_complex(&self) -> TschirnhausMap<C64> {
        TschirnhausMap { n: self.n, b: self.b.iter().map(Scalar::to_c64).collect() }
    }
}

/// Companion matrix of a monic polynomial (acts on `1, x, ..., x^{n-1}` by
/// multiplication by `x`).
pub fn companion<S: Scalar>(p: &Poly<S>) -> Mat<S> {
    let n = p.degree();
    let mut m = vec![vec![S::zero(); n]; n];
    for i in 1..n {
        m[i][i - 1] = S::one();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i);
    }
    m
}

/// `prod_i (x - T(x_i))` over the roots `x_i` of `p`: the characteristic
/// polynomial of `T(companion(p))`.
pub fn apply<S: Scalar>(p: &Poly<S>, t: &TschirnhausMap<S>) -> Result<Poly<S>> {
    let n = p.degree();
    if p.is_zero() || n != t.n {
        return Err(Error::invalid(format!("degree mismatch: polynomial {n}, map {}", t.n)));
    }
    if !p.is_monic() {
        return Err(Error::invalid("apply needs a monic polynomial"));
    }
    let c = companion(p);
    // Horner in the matrix algebra
    let mut m: Mat<S> = vec![vec![S::zero(); n]; n];
    for bj in &t.b {
        m = linalg::mat_mul(&m, &c);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = row[i].clone() + bj.clone();
        }
    }
    Ok(char_poly(m))
}

/// Characteristic polynomial `det(xI - M)`: reduction to upper Hessenberg
/// form by pivoted elimination, then the Hessenberg recurrence.
pub fn char_poly<S: Scalar>(mut a: Mat<S>) -> Poly<S> {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let mut best = k + 1;
        for i in k + 2..n {
            if a[i][k].pivot_score() > a[best][k].pivot_score() {
                best = i;
            }
        }
        if a[best][k].is_zero() {
            continue;
        }
        if best != k + 1 {
            a.swap(best, k + 1);
            for row in a.iter_mut() {
                row.swap(best, k + 1);
            }
        }
        let piv = a[k + 1][k].clone();
        for i in k + 2..n {
            let f = a[i][k].clone() / piv.clone();
            if f.is_zero() {
                continue;
            }
            let r = a[k + 1].clone();
            for (x, y) in a[i].iter_mut().zip(r) {
                *x = x.clone() - f.clone() * y;
            }
            for row in a.iter_mut() {
                let v = row[k + 1].clone() + f.clone() * row[i].clone();
                row[k + 1] = v;
            }
        }
    }
    let mut p: Vec<Poly<S>> = vec![Poly::constant(S::one())];
    for i in 1..=n {
        let lin = Poly::new(vec![-a[i - 1][i - 1].clone(), S::one()]);
        let mut pi = &lin * &p[i - 1];
        let mut prod = S::one();
        for m in 1..i {
            prod = prod * a[i - m][i - m - 1].clone();
            let coef = a[i - m - 1][i - 1].clone() * prod.clone();
            pi = &pi - &p[i - m - 1].scale(&coef);
        }
        p.push(pi);
    }
    p.pop().expect("nonempty")
}

/// A root of `p` recovered from a root of a transformed polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recovered {
    pub root: C64,
    /// The fiber `{x : p(x) = 0, T(x) = y}` had more than one point.
    pub degenerate: bool,
}

/// Coefficients `(A, B)` of the first subresultant `A x + B` of `p(x)` and
/// `T(x) - y`; when the two share exactly one root it is `-B/A`.
pub fn first_subresultant<S: Scalar>(p: &Poly<S>, t: &Poly<S>, y: &S) -> (S, S) {
    let q = t - &Poly::constant(y.clone());
    let n = p.degree();
    let m = q.degree();
    if m == 0 || n == 0 {
        return (S::zero(), S::zero());
    }
    let cols = n + m - 1;
    let rows = n + m - 2;
    let pd = p.descending();
    let qd = q.descending();
    let mut mat: Mat<S> = Vec::with_capacity(rows);
    for i in 0..m.saturating_sub(1) {
        let mut r = vec![S::zero(); cols];
        for (j, c) in pd.iter().enumerate() {
            r[i + j] = c.clone();
        }
        mat.push(r);
    }
    for i in 0..n - 1 {
        let mut r = vec![S::zero(); cols];
        for (j, c) in qd.iter().enumerate() {
            r[i + j] = c.clone();
        }
        mat.push(r);
    }
    let minor = |last: usize| -> S {
        let sub: Mat<S> = mat
            .iter()
            .map(|r| {
                let mut v: Vec<S> = r[..rows - 1].to_vec();
                v.push(r[last].clone());
                v
            })
            .collect();
        det(&sub)
    };
    (minor(cols - 2), minor(cols - 1))
}

/// Recovers a root `x` of `p` with `T(x) = y`, for `y` a root of `apply(p, T)`.
///
/// Generic fibers are a single point, found as the common root of `p` and
/// `T - y` (the null direction of their Sylvester matrix). Larger fibers
/// return one of their points with `degenerate` set.
pub fn recover_root<S: Scalar>(p: &Poly<S>, t: &TschirnhausMap<S>, y: C64) -> Result<Recovered> {
    let pc = p.to_complex();
    let tc = t.to_complex();
    let transformed = apply(&pc, &tc)?;
    if transformed.scaled_residual(y) > 1e-7 {
        return Err(Error::invalid(format!(
            "{y} is not a root of the transformed polynomial (residual {:e})",
            transformed.scaled_residual(y)
        )));
    }
    let q = &tc.poly() - &Poly::constant(y);
    let scale = pc.max_abs_coeff().max(tc.poly().max_abs_coeff()).max(1.0);
    let q = q.trim_relative(1e-13 * scale);
    if q.is_zero() {
        return Ok(Recovered { root: any_root(&pc, &tc, y)?, degenerate: true });
    }
    if q.degree() == 0 {
        return Err(Error::invalid("map is constant and misses y"));
    }
    let syl = linalg::to_dmatrix(&crate::poly::sylvester_matrix(&pc, &q));
    let (v, sv) = linalg::null_vector(&syl);
    let k = sv.len();
    let gcd_degree = sv.iter().filter(|&&s| s <= 1e-8 * sv[0]).count().max(1);
    if k >= 2 && sv[k - 2] <= 1e-7 * sv[0] || gcd_degree > 1 {
        return Ok(Recovered { root: any_root(&pc, &tc, y)?, degenerate: true });
    }
    // v is proportional to (x^{N-1}, ..., x, 1)
    let (mut num, mut den) = (C64::new(0.0, 0.0), 0.0);
    for i in 0..v.len() - 1 {
        num += v[i + 1].conj() * v[i];
        den += v[i + 1].norm_sqr();
    }
    let x = pc.newton_polish(num / den, 2);
    Ok(Recovered { root: x, degenerate: false })
}

fn any_root(p: &ComplexPoly, t: &TschirnhausMap<C64>, y: C64) -> Result<C64> {
    let rs = roots(p, 1e-6)?;
    let tp = t.poly();
    Ok(rs
        .roots
        .iter()
        .copied()
        .min_by(|a, b| (tp.eval(a) - y).norm().total_cmp(&(tp.eval(b) - y).norm()))
        .expect("degree >= 1"))
}

/// Translates the roots so the `x^{n-1}` coefficient vanishes. The step is
/// a linear shift by `s = -a_1/n`, with `x_old = x_new + s`.
pub fn depress<S: Scalar>(p: &Poly<S>) -> Result<(Poly<S>, TowerStep)>
where
    Poly<S>: Into<AnyPoly>,
{
    let n = p.degree();
    if n < 2 || !p.is_monic() {
        return Err(Error::invalid("depress needs a monic polynomial of degree >= 2"));
    }
    let s = -(p.a(1) / S::from_i64(n as i64));
    let d = p.shift(&s);
    let step = TowerStep::transform(
        StepKind::LinearShift,
        BTreeMap::from([("shift".to_string(), vec![s.to_num()])]),
        Expr::affine(S::one().to_num(), (-s.clone()).to_num()),
        Expr::affine(S::one().to_num(), s.to_num()),
        d.clone().into(),
    );
    Ok((d, step))
}

/// Tschirnhaus-substitution step from `p` to `target = apply(p, t)`. The
/// inverse is `x = -B(y)/A(y)` for the first subresultant `A x + B`, whose
/// coefficients are interpolated at `nodes` (at least `n` distinct points).
pub(crate) fn substitution_step<S: Scalar>(p: &Poly<S>, t: &TschirnhausMap<S>, target: Poly<S>, nodes: &[S]) -> TowerStep
where
    Poly<S>: Into<AnyPoly>,
{
    let tp = t.poly();
    let (a, b): (Vec<S>, Vec<S>) = nodes.iter().map(|y| first_subresultant(p, &tp, y)).unzip();
    let a = interpolate(nodes, &a);
    let b = interpolate(nodes, &b);
    let nums = |q: &Poly<S>| q.descending().iter().map(Scalar::to_num).collect::<Vec<_>>();
    TowerStep::transform(
        StepKind::TschirnhausSubstitution,
        BTreeMap::from([("b".to_string(), t.b.iter().map(Scalar::to_num).collect())]),
        Expr::poly(t.b.iter().map(Scalar::to_num).collect()),
        Expr::ratio(Expr::neg(Expr::poly(nums(&b))), Expr::poly(nums(&a))),
        target.into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPoly;
    use crate::rng::SeedTree;
    use crate::scalar::{rat_int, Rational};

    fn q(desc: &[i64]) -> RationalPoly {
        Poly::from_i64s_descending(desc)
    }

    #[test]
    fn identity_map_is_identity() {
        let p = q(&[1, -2, 7, 3, -5]);
        assert_eq!(apply(&p, &TschirnhausMap::identity(4)).unwrap(), p);
    }

    #[test]
    fn squaring_roots_one_and_two() {
        // roots 1, 2 -> 1, 4
        let p = q(&[1, -3, 2]);
        let t = TschirnhausMap::new(2, vec![rat_int(0), rat_int(0)]).unwrap();
        // x^2 is degree 2 = n, so reduce mod p first: x^2 = 3x - 2
        let t_sq = TschirnhausMap::new(2, vec![rat_int(3), rat_int(-2)]).unwrap();
        assert_eq!(apply(&p, &t_sq).unwrap(), q(&[1, -5, 4]));
        assert_eq!(apply(&p, &t).unwrap(), q(&[1, 0, 0]));
    }

    #[test]
    fn shift_of_i() {
        // x^2+1 with T = x + c -> x^2 - 2cx + c^2 + 1
        let p = q(&[1, 0, 1]);
        for c in [-3i64, 0, 5] {
            let t = TschirnhausMap::new(2, vec![rat_int(1), rat_int(c)]).unwrap();
            assert_eq!(apply(&p, &t).unwrap(), q(&[1, -2 * c, c * c + 1]));
        }
    }

    #[test]
    fn degree_mismatch_rejected() {
        let p = q(&[1, 0, 1]);
        assert!(apply(&p, &TschirnhausMap::<Rational>::identity(3)).is_err());
    }

    #[test]
    fn subresultant_recovers_two() {
        // p = x^2-3x+2, T = x^2 reduced to 3x-2, y = 4
        let p = q(&[1, -3, 2]);
        let t = q(&[1, 0, 0]);
        let (a, b) = first_subresultant(&p, &t, &rat_int(4));
        assert_eq!(-b / a, rat_int(2));
    }

    #[test]
    fn recover_roots() {
        let p = q(&[1, -3, 2]);
        let t_sq = TschirnhausMap::new(2, vec![rat_int(3), rat_int(-2)]).unwrap();
        let r = recover_root(&p, &t_sq, C64::new(4.0, 0.0)).unwrap();
        assert!(!r.degenerate);
        assert!((r.root - C64::new(2.0, 0.0)).norm() < 1e-12);

        let ident = TschirnhausMap::identity(2);
        let r = recover_root(&p, &ident, C64::new(1.0, 0.0)).unwrap();
        assert!((r.root - C64::new(1.0, 0.0)).norm() < 1e-12);

        let zero = TschirnhausMap::new(2, vec![rat_int(0), rat_int(0)]).unwrap();
        let r = recover_root(&p, &zero, C64::new(0.0, 0.0)).unwrap();
        assert!(r.degenerate);
        assert!(p.to_complex().eval(&r.root).norm() < 1e-9);

        assert!(recover_root(&p, &t_sq, C64::new(3.0, 0.0)).is_err());
    }

    fn shift_of(step: &TowerStep) -> Rational {
        assert_eq!(step.kind, StepKind::LinearShift);
        match &step.forward["shift"][0] {
            crate::scalar::Num::Rational(r) => r.clone(),
            other => panic!("inexact shift {other:?}"),
        }
    }

    #[test]
    fn depress_examples() {
        let (d, st) = depress(&q(&[1, 2, 2])).unwrap();
        assert_eq!((d, shift_of(&st)), (q(&[1, 0, 1]), rat_int(-1)));
        let (d, st) = depress(&q(&[1, 0, 4, 1])).unwrap();
        assert_eq!((d, shift_of(&st)), (q(&[1, 0, 4, 1]), rat_int(0)));
        let (d, st) = depress(&q(&[1, 3, 3, 1])).unwrap();
        assert_eq!((d, shift_of(&st)), (q(&[1, 0, 0, 0]), rat_int(-1)));
    }

    #[test]
    fn depress_tower_solves() {
        let p = q(&[1, 2, 2]);
        let (_, st) = depress(&p).unwrap();
        let mut tower = SolutionTower::new(p.into());
        tower.push(st);
        let sol = solve_via_tower(&tower).unwrap();
        let want = [C64::new(-1.0, -1.0), C64::new(-1.0, 1.0)];
        for (r, w) in sol.roots.roots.iter().zip(want) {
            assert!((r - w).norm() < 1e-12);
        }
    }

    #[test]
    fn substitution_recipe_inverts_map() {
        // roots 1, 2, 3 under T = x^2 + x
        let p = q(&[1, -6, 11, -6]);
        let t = TschirnhausMap::new(3, vec![rat_int(1), rat_int(1), rat_int(0)]).unwrap();
        let target = apply(&p, &t).unwrap();
        assert_eq!(target, Poly::from_roots(&[rat_int(2), rat_int(6), rat_int(12)]));
        let nodes: Vec<Rational> = (0..3).map(rat_int).collect();
        let st = substitution_step(&p, &t, target, &nodes);
        for (y, x) in [(2.0, 1.0), (6.0, 2.0), (12.0, 3.0)] {
            assert!((st.inverse.eval(C64::new(y, 0.0)) - C64::new(x, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_matches_root_transform_oracle() {
        use crate::rng::gaussian_c64;
        use rand::Rng;
        let mut rng = SeedTree::new(3).rng();
        for trial in 0..200 {
            let n = 3 + trial % 6;
            let rs: Vec<C64> = (0..n).map(|_| gaussian_c64(&mut rng)).collect();
            let p = Poly::from_roots(&rs);
            let b: Vec<C64> = (0..n).map(|_| C64::new(rng.random_range(-3..=3) as f64, 0.0)).collect();
            let t = TschirnhausMap::new(n, b).unwrap();
            let got = apply(&p, &t).unwrap();
            assert_eq!(got.degree(), n);
            let found = roots(&p, 1e-9).unwrap();
            let tp = t.poly();
            let want = Poly::from_roots(&found.roots.iter().map(|r| tp.eval(r)).collect::<Vec<_>>());
            let scale = want.max_abs_coeff().max(1.0);
            for k in 0..=n {
                assert!((got.coeff(k) - want.coeff(k)).norm() <= 1e-9 * scale, "trial {trial} k {k} err {:e} scale {scale:e}", (got.coeff(k) - want.coeff(k)).norm());
            }
        }
    }

    #[test]
    fn apply_is_exact_on_rational_roots() {
        use rand::Rng;
        let mut rng = SeedTree::new(4).rng();
        for trial in 0..100 {
            let n = 3 + trial % 6;
            let rs: Vec<Rational> = (0..n).map(|_| rat_int(rng.random_range(-4..=4))).collect();
            let b: Vec<Rational> = (0..n).map(|_| rat_int(rng.random_range(-3..=3))).collect();
            let t = TschirnhausMap::new(n, b).unwrap();
            let tp = t.poly();
            let want = Poly::from_roots(&rs.iter().map(|r| tp.eval(r)).collect::<Vec<_>>());
            assert_eq!(apply(&Poly::from_roots(&rs), &t).unwrap(), want);
        }
    }
}
