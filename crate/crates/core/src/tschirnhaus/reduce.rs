//! Reductions to normal forms: killing `a_1, a_2` with one square root, and
//! the Bring–Hamilton reduction killing `a_1, a_2, a_3`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::tower::{Expr, SolutionTower, StepKind, TowerStep};
use super::{apply, depress, substitution_step, TschirnhausMap};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::poly::{power_sums, roots, AnyPoly, ComplexPoly, Poly};
use crate::scalar::{rational_sqrt, Num, Rational, Scalar, C64};

/// Relative size below which a coefficient that should vanish is snapped to zero.
const SNAP_TOL: f64 = 1e-8;

/// Coefficient pattern of a normal form, on the monic indices `a_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormTarget {
    pub zero: BTreeSet<usize>,
    pub equal: Vec<(usize, usize)>,
    pub unit: BTreeSet<usize>,
}

impl NormalFormTarget {
    pub fn new(zero: BTreeSet<usize>, equal: Vec<(usize, usize)>, unit: BTreeSet<usize>) -> Result<Self> {
        if let Some(k) = zero.intersection(&unit).next() {
            return Err(Error::invalid(format!("a_{k} cannot be both 0 and 1")));
        }
        for &(i, j) in &equal {
            let zi = zero.contains(&i) || zero.contains(&j);
            let ui = unit.contains(&i) || unit.contains(&j);
            if i == j || zi || ui {
                return Err(Error::invalid(format!("equality a_{i} = a_{j} overlaps another pattern")));
            }
        }
        Ok(NormalFormTarget { zero, equal, unit })
    }

    /// `a_1 = a_2 = 0`.
    pub fn kill_two() -> Self {
        NormalFormTarget { zero: BTreeSet::from([1, 2]), ..Default::default() }
    }

    /// `a_1 = a_2 = a_3 = 0` and either `a_{n-1} = a_n` or `a_n = 1`.
    pub fn bring_hamilton(n: usize, unit_constant: bool) -> Self {
        let zero = BTreeSet::from([1, 2, 3]);
        if unit_constant {
            NormalFormTarget { zero, equal: Vec::new(), unit: BTreeSet::from([n]) }
        } else {
            NormalFormTarget { zero, equal: vec![(n - 1, n)], unit: BTreeSet::new() }
        }
    }

    /// Whether a monic `p` fits the pattern; exact comparisons over exact
    /// scalars, otherwise relative to the root scale within `tol`.
    pub fn matches<S: Scalar>(&self, p: &Poly<S>, tol: f64) -> bool {
        if !p.is_monic() {
            return false;
        }
        let n = p.degree();
        if self.zero.iter().chain(&self.unit).chain(self.equal.iter().flat_map(|(i, j)| [i, j])).any(|&k| k == 0 || k > n) {
            return false;
        }
        if S::EXACT {
            return self.zero.iter().all(|&k| p.a(k).is_zero())
                && self.unit.iter().all(|&k| p.a(k).is_one())
                && self.equal.iter().all(|&(i, j)| p.a(i) == p.a(j));
        }
        let c = p.to_complex();
        let r = root_scale(&c);
        let small = |k: usize, v: C64| v.norm() <= tol * r.powi(k as i32).max(1.0);
        self.zero.iter().all(|&k| small(k, c.a(k)))
            && self.unit.iter().all(|&k| small(k, c.a(k) - 1.0))
            && self.equal.iter().all(|&(i, j)| small(i.max(j), c.a(i) - c.a(j)))
    }
}

/// `max_k |a_k|^{1/k}` for a monic polynomial, at least 1e-300.
fn root_scale(p: &ComplexPoly) -> f64 {
    let n = p.degree();
    (1..=n).map(|k| p.a(k).norm().powf(1.0 / k as f64)).fold(1e-300, f64::max)
}

/// Bound on `|T(x)|` over the roots of `p`, from the root scale of `p`.
fn image_scale<S: Scalar>(p: &Poly<S>, t: &TschirnhausMap<S>) -> f64 {
    let x = root_scale(&p.to_complex());
    let tp = t.poly();
    tp.coeffs().iter().enumerate().map(|(k, c)| c.magnitude() * x.powi(k as i32)).sum()
}

/// Sets the listed `a_k` to zero when they are negligible against `scale^k`,
/// `scale` bounding the root moduli of `p`.
fn snap_zero<S: Scalar>(p: Poly<S>, idx: &[usize], stage: &str, scale: f64) -> Result<Poly<S>> {
    let n = p.degree();
    let r = scale.max(root_scale(&p.to_complex()));
    let mut c = p.coeffs().to_vec();
    for &k in idx {
        let v = p.a(k);
        if v.is_zero() {
            continue;
        }
        if !S::EXACT && v.magnitude() <= SNAP_TOL * r.powi(k as i32) {
            c[n - k] = S::zero();
        } else {
            return Err(Error::numerical(format!(
                "{stage}: coefficient a_{k} should vanish but has size {:e} at root scale {r:e}",
                v.magnitude()
            )));
        }
    }
    Ok(Poly::new(c))
}

/// The roots of `z^d - c` sorted by (re, im); `branch` selects one.
fn radical_branch(c: C64, d: u32, branch: usize) -> C64 {
    let base = c.powf(1.0 / d as f64);
    let mut all: Vec<C64> = (0..d).map(|k| base * C64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)).collect();
    all.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    all[branch]
}

fn radical_step(radicand: Num, root: Num, degree: u32, branch: usize) -> TowerStep {
    TowerStep::record(
        StepKind::RadicalAdjunction { degree },
        BTreeMap::from([("radicand".to_string(), vec![radicand]), ("root".to_string(), vec![root])]),
        Some(branch),
    )
}

/// Interpolation nodes for complex recipes: `n` points on a circle at the
/// root scale of `target`.
fn circle_nodes(target: &ComplexPoly, n: usize) -> Vec<C64> {
    let r = root_scale(target).max(1.0);
    (0..n).map(|j| C64::from_polar(r, 2.0 * PI * j as f64 / n as f64 + 0.3)).collect()
}

fn integer_nodes(n: usize) -> Vec<Rational> {
    (0..n as i64).map(Rational::from_i64).collect()
}

fn monic_source<S: Scalar>(p: &Poly<S>, min_degree: usize, what: &str) -> Result<Poly<S>> {
    if p.is_zero() || p.degree() < min_degree {
        return Err(Error::invalid(format!("{what} needs degree >= {min_degree}")));
    }
    p.monic()
}

/// `s_0 = n, s_1, ..., s_m`.
fn sums_from_zero<S: Scalar>(p: &Poly<S>, m: usize) -> Result<Vec<S>> {
    let mut s = vec![S::from_i64(p.degree() as i64)];
    s.extend(power_sums(p, m)?);
    Ok(s)
}

/// Quadratic Tschirnhaus transformation making `a_1 = a_2 = 0`, adjoining
/// one square root. Returns the target and the tower.
pub fn kill_two(p: &AnyPoly) -> Result<(AnyPoly, SolutionTower)> {
    match p {
        AnyPoly::Rational(q) => {
            let q = monic_source(q, 3, "kill_two")?;
            let (mut tower, pd) = match kill_two_prefix(&q)? {
                Prefix::Done(t) => return Ok((t.target.clone(), t)),
                Prefix::Depressed(t, pd) => (t, pd),
            };
            let (d, q01, q11, s) = kill_two_quadric(&pd)?;
            match rational_sqrt(&d) {
                Some(r) => {
                    // sorted roots of z^2 - d are (-r, r)
                    tower.push(radical_step(d.to_num(), (-r.clone()).to_num(), 2, 0));
                    let nodes = integer_nodes(pd.degree());
                    kill_two_finish(tower, &pd, &s, &q01, &q11, -r, &nodes)
                }
                None => {
                    let dc = d.to_c64();
                    let r = radical_branch(dc, 2, 0);
                    tower.push(radical_step(d.to_num(), r.to_num(), 2, 0));
                    let pc = pd.to_complex();
                    let sc: Vec<C64> = s.iter().map(Scalar::to_c64).collect();
                    let nodes = circle_nodes(&pc, pc.degree());
                    kill_two_finish(tower, &pc, &sc, &q01.to_c64(), &q11.to_c64(), r, &nodes)
                }
            }
        }
        AnyPoly::Complex(c) => {
            let c = monic_source(c, 3, "kill_two")?;
            let (mut tower, pd) = match kill_two_prefix(&c)? {
                Prefix::Done(t) => return Ok((t.target.clone(), t)),
                Prefix::Depressed(t, pd) => (t, pd),
            };
            let (d, q01, q11, s) = kill_two_quadric(&pd)?;
            let r = radical_branch(d, 2, 0);
            tower.push(radical_step(d.to_num(), r.to_num(), 2, 0));
            let nodes = circle_nodes(&pd, pd.degree());
            kill_two_finish(tower, &pd, &s, &q01, &q11, r, &nodes)
        }
    }
}

enum Prefix<S> {
    Done(SolutionTower),
    Depressed(SolutionTower, Poly<S>),
}

fn kill_two_prefix<S: Scalar>(p: &Poly<S>) -> Result<Prefix<S>>
where
    Poly<S>: Into<AnyPoly>,
{
    let mut tower = SolutionTower::new(p.clone().into());
    if p.a(1).is_zero() && p.a(2).is_zero() {
        return Ok(Prefix::Done(tower));
    }
    let (pd, step) = depress(p)?;
    tower.push(step);
    if pd.a(2).is_zero() {
        return Ok(Prefix::Done(tower));
    }
    Ok(Prefix::Depressed(tower, pd))
}

/// For `y = x^2 + b_1 x + b_2` with `sum y = 0`, `sum y^2` is the binary
/// quadric `q00 + 2 q01 b_1 + q11 b_1^2`; returns its discriminant
/// `q01^2 - q00 q11`, `q01`, `q11` and the power sums `s_0..s_4`.
fn kill_two_quadric<S: Scalar>(pd: &Poly<S>) -> Result<(S, S, S, Vec<S>)> {
    let s = sums_from_zero(pd, 4)?;
    let n = s[0].clone();
    let q00 = s[4].clone() - s[2].clone() * s[2].clone() / n.clone();
    let q01 = s[3].clone() - s[1].clone() * s[2].clone() / n.clone();
    let q11 = s[2].clone() - s[1].clone() * s[1].clone() / n;
    if q11.is_zero() {
        return Err(Error::degenerate("kill-two quadratic", "q11 = s2 - s1^2/n vanishes"));
    }
    let d = q01.clone() * q01.clone() - q00 * q11.clone();
    Ok((d, q01, q11, s))
}

fn kill_two_finish<S: Scalar>(
    mut tower: SolutionTower,
    pd: &Poly<S>,
    s: &[S],
    q01: &S,
    q11: &S,
    root: S,
    nodes: &[S],
) -> Result<(AnyPoly, SolutionTower)>
where
    Poly<S>: Into<AnyPoly>,
{
    let n = pd.degree();
    let b1 = (root - q01.clone()) / q11.clone();
    let b2 = -(s[2].clone() + b1.clone() * s[1].clone()) / s[0].clone();
    let t = TschirnhausMap::from_poly(n, &Poly::new(vec![b2, b1, S::one()]))?;
    let target = snap_zero(apply(pd, &t)?, &[1, 2], "kill-two substitution", image_scale(pd, &t))?;
    tower.push(substitution_step(pd, &t, target.clone(), nodes));
    Ok((target.into(), tower))
}

/// Options for [`bring_hamilton_reduce`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BringHamiltonOptions {
    /// Rescale once more (adjoining an `n`-th root) so the constant term is 1.
    pub unit_constant: bool,
}

/// Reduces a degree `n >= 5` polynomial to `x^n + c_4 x^{n-4} + ... + c x + c`
/// (or, with `unit_constant`, to constant term 1) by a quartic Tschirnhaus
/// transformation: linear section, diagonalized quadric with four square
/// roots, a line on the quadric, one auxiliary cubic, then a scaling.
pub fn bring_hamilton_reduce(p: &AnyPoly, opts: BringHamiltonOptions) -> Result<(AnyPoly, SolutionTower)> {
    match p {
        AnyPoly::Rational(q) => bring_hamilton_in(&monic_source(q, 5, "Bring-Hamilton reduction")?, opts),
        AnyPoly::Complex(c) => bring_hamilton_in(&monic_source(c, 5, "Bring-Hamilton reduction")?, opts),
    }
}

fn bring_hamilton_in<S: Scalar>(p: &Poly<S>, opts: BringHamiltonOptions) -> Result<(AnyPoly, SolutionTower)>
where
    Poly<S>: Into<AnyPoly>,
{
    let n = p.degree();
    let mut tower = SolutionTower::new(p.clone().into());
    let (pd, step) = depress(p)?;
    tower.push(step);
    let s = sums_from_zero(&pd, 12)?;
    let nn = s[0].clone();

    // sum y^2 on the hyperplane sum y = 0, in the coordinates b_0..b_3
    let q: Mat<S> = (0..4)
        .map(|j| {
            (0..4)
                .map(|k| {
                    let (a, b) = (4 - j, 4 - k);
                    s[a + b].clone() - s[a].clone() * s[b].clone() / nn.clone()
                })
                .collect()
        })
        .collect();
    let (pm, d) = congruence_diagonalize(&q);
    if let Some(i) = d.iter().position(|x| x.is_zero()) {
        return Err(Error::degenerate("quadric-diagonalization", format!("diagonal entry d_{i} vanishes (singular quadric)")));
    }
    tower.push(TowerStep::record(
        StepKind::QuadricDiagonalization,
        BTreeMap::from([
            ("d".to_string(), d.iter().map(Scalar::to_num).collect()),
            ("P".to_string(), pm.iter().flatten().map(Scalar::to_num).collect()),
        ]),
        None,
    ));

    let r: Vec<C64> = d
        .iter()
        .map(|di| {
            let root = radical_branch(di.to_c64(), 2, 0);
            tower.push(radical_step(di.to_num(), root.to_num(), 2, 0));
            root
        })
        .collect();
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    let ca = [-i * r[1], r[0], zero, zero];
    let cb = [zero, zero, -i * r[3], r[2]];
    let pc: Mat<C64> = pm.iter().map(|row| row.iter().map(Scalar::to_c64).collect()).collect();
    let ba = linalg::mat_vec(&pc, &ca);
    let bb = linalg::mat_vec(&pc, &cb);
    tower.push(TowerStep::record(
        StepKind::LineOnQuadric,
        BTreeMap::from([
            ("bA".to_string(), ba.iter().map(Scalar::to_num).collect()),
            ("bB".to_string(), bb.iter().map(Scalar::to_num).collect()),
        ]),
        None,
    ));

    // sum (u yA + v yB)^3 as a binary cubic in (u, v)
    let sc: Vec<C64> = s.iter().map(Scalar::to_c64).collect();
    let n_c = sc[0];
    let centered = |b: &[C64]| -> ComplexPoly {
        let mut c = vec![zero; 5];
        for (j, bj) in b.iter().enumerate() {
            let a = 4 - j;
            c[a] += bj;
            c[0] -= bj * sc[a] / n_c;
        }
        Poly::new(c)
    };
    let ya = centered(&ba);
    let yb = centered(&bb);
    let functional = |f: &ComplexPoly| -> C64 { f.coeffs().iter().zip(&sc).map(|(c, s)| c * s).sum() };
    let ya2 = &ya * &ya;
    let yb2 = &yb * &yb;
    let cubic = [
        functional(&(&ya2 * &ya)),
        functional(&(&ya2 * &yb)) * 3.0,
        functional(&(&ya * &yb2)) * 3.0,
        functional(&(&yb2 * &yb)),
    ];
    let cmax = cubic.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if cmax == 0.0 {
        return Err(Error::degenerate("auxiliary-cubic", "the line lies on the cubic sum y^3 = 0"));
    }
    let (u, v) = if cubic[0].norm() >= cubic[3].norm() {
        let rs = roots(&Poly::from_descending(cubic.to_vec()), 1e-9)?;
        (rs.roots[0], C64::new(1.0, 0.0))
    } else {
        let rs = roots(&Poly::from_descending(cubic.iter().rev().copied().collect()), 1e-9)?;
        (C64::new(1.0, 0.0), rs.roots[0])
    };
    tower.push(TowerStep::record(
        StepKind::AuxiliaryCubic,
        BTreeMap::from([
            ("cubic".to_string(), cubic.iter().map(Scalar::to_num).collect()),
            ("point".to_string(), vec![u.to_num(), v.to_num()]),
        ]),
        Some(0),
    ));

    let mut b: Vec<C64> = (0..4).map(|j| u * ba[j] + v * bb[j]).collect();
    let b4 = -(0..4).map(|j| b[j] * sc[4 - j]).sum::<C64>() / n_c;
    b.push(b4);
    let bmax = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if bmax == 0.0 {
        return Err(Error::degenerate("line-on-quadric", "the chosen point of the line gives the zero transformation"));
    }
    let mut full = vec![zero; n - 5];
    full.extend(b.iter().map(|c| c / bmax));
    let t = TschirnhausMap::new(n, full)?;
    let pdc = pd.to_complex();
    let target = snap_zero(apply(&pdc, &t)?, &[1, 2, 3], "quartic Tschirnhaus substitution", image_scale(&pdc, &t))?;
    let nodes = circle_nodes(&target, n);
    tower.push(substitution_step::<C64>(&pdc, &t, target.clone(), &nodes));

    let an1 = target.a(n - 1);
    let an = target.a(n);
    let scale = root_scale(&target);
    if an1.norm() <= SNAP_TOL * scale.powi(n as i32 - 1) {
        return Err(Error::degenerate("coefficient-scaling", "a_{n-1} vanishes"));
    }
    if an.norm() <= SNAP_TOL * scale.powi(n as i32) {
        return Err(Error::degenerate("coefficient-scaling", "a_n vanishes"));
    }
    let mut target = scaling_step(&mut tower, &target, an1 / an, |c| c[0] = c[1]);

    if opts.unit_constant {
        let c = target.a(n);
        let mu = radical_branch(c.inv(), n as u32, 0);
        tower.push(radical_step(c.inv().to_num(), mu.to_num(), n as u32, 0));
        target = scaling_step(&mut tower, &target, mu, |c| c[0] = C64::new(1.0, 0.0));
    }
    Ok((target.into(), tower))
}

/// Pushes `y -> lambda y` and returns the rescaled polynomial after `fix`
/// has adjusted its ascending coefficients.
fn scaling_step(tower: &mut SolutionTower, p: &ComplexPoly, lambda: C64, fix: impl Fn(&mut Vec<C64>)) -> ComplexPoly {
    let mut c = p.scale_roots(&lambda).coeffs().to_vec();
    fix(&mut c);
    let out = Poly::new(c);
    tower.push(TowerStep::transform(
        StepKind::CoefficientScaling,
        BTreeMap::from([("lambda".to_string(), vec![lambda.to_num()])]),
        Expr::affine(lambda, C64::new(0.0, 0.0)),
        Expr::affine(lambda.inv(), C64::new(0.0, 0.0)),
        out.clone().into(),
    ));
    out
}

/// Symmetric congruence diagonalization: returns `(P, d)` with
/// `P^T Q P = diag(d)`. When every remaining diagonal entry vanishes an
/// off-diagonal pivot is folded in with `e_k + e_j`.
pub fn congruence_diagonalize<S: Scalar>(q: &Mat<S>) -> (Mat<S>, Vec<S>) {
    let n = q.len();
    let mut a = q.clone();
    let mut p: Mat<S> = linalg::identity(n);
    for k in 0..n {
        let mut best = k;
        for i in k + 1..n {
            if a[i][i].pivot_score() > a[best][best].pivot_score() {
                best = i;
            }
        }
        if best != k {
            a.swap(best, k);
            for row in a.iter_mut() {
                row.swap(best, k);
            }
            for row in p.iter_mut() {
                row.swap(best, k);
            }
        }
        if a[k][k].is_zero() {
            let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) else { continue };
            // column k += column j, row k += row j
            for row in a.iter_mut() {
                let v = row[k].clone() + row[j].clone();
                row[k] = v;
            }
            let rj = a[j].clone();
            for (x, y) in a[k].iter_mut().zip(rj) {
                *x = x.clone() + y;
            }
            for row in p.iter_mut() {
                let v = row[k].clone() + row[j].clone();
                row[k] = v;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_zero() {
            continue;
        }
        for i in k + 1..n {
            let f = a[i][k].clone() / piv.clone();
            if f.is_zero() {
                continue;
            }
            let rk = a[k].clone();
            for (x, y) in a[i].iter_mut().zip(rk) {
                *x = x.clone() - f.clone() * y;
            }
            for row in a.iter_mut() {
                let v = row[i].clone() - f.clone() * row[k].clone();
                row[i] = v;
            }
            for row in p.iter_mut() {
                let v = row[i].clone() - f.clone() * row[k].clone();
                row[i] = v;
            }
        }
    }
    let d = (0..n).map(|i| a[i][i].clone()).collect();
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPoly;
    use crate::rng::{small_rational, SeedTree};
    use crate::scalar::rat_int;
    use crate::tschirnhaus::solve_via_tower;
    use num_traits::Zero;

    fn q(desc: &[i64]) -> RationalPoly {
        Poly::from_i64s_descending(desc)
    }

    fn random_monic(seed: u64, n: usize) -> RationalPoly {
        let mut rng = SeedTree::new(seed).child("poly").rng();
        let mut c = vec![rat_int(1)];
        c.extend((0..n).map(|_| small_rational(&mut rng, 10, 1)));
        Poly::from_descending(c)
    }

    fn assert_roots_match(sol: &[C64], p: &RationalPoly, tol: f64) {
        let want = roots(p, 1e-9).unwrap().roots;
        let mut used = vec![false; want.len()];
        for r in sol {
            let j = (0..want.len()).filter(|&j| !used[j]).min_by(|&a, &b| (want[a] - r).norm().total_cmp(&(want[b] - r).norm())).unwrap();
            assert!((want[j] - r).norm() < tol, "{r} vs {}", want[j]);
            used[j] = true;
        }
    }

    #[test]
    fn congruence_is_exact() {
        let m: Mat<Rational> = [[0, 1, 2], [1, 0, 3], [2, 3, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect();
        let (p, d) = congruence_diagonalize(&m);
        let ptqp = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&p), &m), &p);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d[i].clone() } else { rat_int(0) };
                assert_eq!(ptqp[i][j], want);
            }
        }
        assert!(d.iter().all(|x| !x.is_zero()));
    }

    #[test]
    fn kill_two_identity_when_already_reduced() {
        let p = q(&[1, 0, 0, 5, -1]);
        let (t, tower) = kill_two(&p.clone().into()).unwrap();
        assert!(tower.steps.is_empty());
        assert_eq!(t, AnyPoly::Rational(p));
    }

    #[test]
    fn kill_two_cubic_with_double_root() {
        // roots -1, 2, 2: the only admissible target is x^3
        let p = q(&[1, -3, 0, 4]);
        let (t, tower) = kill_two(&p.clone().into()).unwrap();
        assert_eq!(t, AnyPoly::Rational(q(&[1, 0, 0, 0])));
        assert_eq!(tower.count(StepKind::RadicalAdjunction { degree: 2 }), 1);
        let sol = solve_via_tower(&tower).unwrap();
        let want = [-1.0, 2.0, 2.0];
        for (r, w) in sol.roots.roots.iter().zip(want) {
            assert!((r - C64::new(w, 0.0)).norm() < 1e-7, "{r}");
        }
    }

    #[test]
    fn kill_two_random_quintic() {
        let p = random_monic(7, 5);
        let (t, tower) = kill_two(&p.clone().into()).unwrap();
        assert!(NormalFormTarget::kill_two().matches(&t.to_complex(), 1e-12));
        assert_eq!(tower.count(StepKind::RadicalAdjunction { degree: 2 }), 1);
        let sol = solve_via_tower(&tower).unwrap();
        assert!(sol.roots.worst_residual() < 1e-9);
        assert_roots_match(&sol.roots.roots, &p, 1e-6);
    }

    #[test]
    fn bring_hamilton_quintic_seed_42() {
        let p = random_monic(42, 5);
        let (t, tower) = bring_hamilton_reduce(&p.clone().into(), BringHamiltonOptions::default()).unwrap();
        assert!(NormalFormTarget::bring_hamilton(5, false).matches(&t.to_complex(), 0.0));
        assert_eq!(tower.count(StepKind::RadicalAdjunction { degree: 2 }), 4);
        assert_eq!(tower.count(StepKind::AuxiliaryCubic), 1);
        let sol = solve_via_tower(&tower).unwrap();
        let pc = p.to_complex();
        for r in &sol.roots.roots {
            assert!(pc.eval(r).norm() < 1e-8);
        }
        assert_roots_match(&sol.roots.roots, &p, 1e-6);

        let (t, tower) = bring_hamilton_reduce(&p.into(), BringHamiltonOptions { unit_constant: true }).unwrap();
        assert!(NormalFormTarget::bring_hamilton(5, true).matches(&t.to_complex(), 0.0));
        assert_eq!(tower.count(StepKind::RadicalAdjunction { degree: 5 }), 1);
        assert!(solve_via_tower(&tower).is_ok());
    }

    #[test]
    fn bring_hamilton_higher_degrees() {
        for n in 6..=8 {
            let p = random_monic(100 + n as u64, n);
            let (t, tower) = bring_hamilton_reduce(&p.clone().into(), BringHamiltonOptions::default()).unwrap();
            assert!(NormalFormTarget::bring_hamilton(n, false).matches(&t.to_complex(), 0.0), "n = {n}");
            let sol = solve_via_tower(&tower).unwrap();
            assert_roots_match(&sol.roots.roots, &p, 1e-6);
        }
    }

    #[test]
    fn tower_json_roundtrip() {
        let p = random_monic(42, 5);
        let (_, tower) = bring_hamilton_reduce(&p.into(), BringHamiltonOptions::default()).unwrap();
        let s = tower.to_json();
        let back: SolutionTower = serde_json::from_str(&s).unwrap();
        assert_eq!(back.steps.len(), tower.steps.len());
        assert_eq!(back.count(StepKind::AuxiliaryCubic), 1);
    }

    #[test]
    fn normal_form_patterns_validate() {
        assert!(NormalFormTarget::new(BTreeSet::from([1]), vec![], BTreeSet::from([1])).is_err());
        assert!(NormalFormTarget::new(BTreeSet::from([1]), vec![(1, 2)], BTreeSet::new()).is_err());
        assert!(NormalFormTarget::new(BTreeSet::from([1, 2, 3]), vec![(4, 5)], BTreeSet::new()).is_ok());
    }
}
