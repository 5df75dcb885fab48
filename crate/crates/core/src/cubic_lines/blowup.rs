//! The cubic surface as the blow-up of `P^2` at six points, with its 27
//! lines computed exactly and labelled by divisor class.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::weyl::{all_labels, LineLabel};
use crate::linalg::{det, kernel, Mat};
use crate::poly::{monomials, MultiPoly};
use crate::rng::{small_rational, SeedTree};
use crate::scalar::{rat_int, Num, Rational, Scalar};

use super::{incidence, plucker, CubicSurface, LineConfiguration, ProjLine};

/// Image points sampled for the implicit-equation fit.
const FIT_SAMPLES: usize = 30;

pub type PlanePoint = [Rational; 3];

/// Surface, labelled lines and the data they were built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupModel {
    pub points: Vec<[Num; 3]>,
    pub surface: CubicSurface,
    pub configuration: LineConfiguration,
    /// Exact Plücker coordinates in label order.
    pub exact_plucker: Vec<[Num; 6]>,
}

fn eval_monomial(e: &[u8], x: &[Rational]) -> Rational {
    e.iter().zip(x).fold(Rational::one(), |acc, (&k, v)| acc * num_traits::pow(v.clone(), k as usize))
}

fn eval_row(degree: u8, nvars: usize, x: &[Rational]) -> Vec<Rational> {
    monomials(nvars, degree).iter().map(|e| eval_monomial(e, x)).collect()
}

fn det3(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> Rational {
    det(&vec![a.to_vec(), b.to_vec(), c.to_vec()])
}

/// Rejects collinear triples and a conic through all six points.
pub fn check_general_position(points: &[PlanePoint; 6]) -> Result<()> {
    for i in 0..6 {
        if points[i].iter().all(Zero::is_zero) {
            return Err(Error::invalid(format!("point {i} is the zero vector")));
        }
        for j in i + 1..6 {
            for k in j + 1..6 {
                if det3(&points[i], &points[j], &points[k]).is_zero() {
                    return Err(Error::degenerate(
                        "blow-up genericity",
                        format!("points {i}, {j}, {k} are collinear (3 x 3 determinant vanishes)"),
                    ));
                }
            }
        }
    }
    let conics: Mat<Rational> = points.iter().map(|p| eval_row(2, 3, p)).collect();
    if det(&conics).is_zero() {
        return Err(Error::degenerate(
            "blow-up genericity",
            "a conic passes through all six points (6 x 6 conic matrix has rank < 6)",
        ));
    }
    Ok(())
}

/// Six points with small rational coordinates in general position.
pub fn random_six_points(seed: u64) -> [PlanePoint; 6] {
    let mut rng = SeedTree::new(seed).child("six-points").rng();
    loop {
        let pts: [PlanePoint; 6] = std::array::from_fn(|_| {
            let z = if rng.random_bool(0.8) { rat_int(1) } else { small_rational(&mut rng, 5, 3) };
            [small_rational(&mut rng, 6, 3), small_rational(&mut rng, 6, 3), z]
        });
        if check_general_position(&pts).is_ok() {
            return pts;
        }
    }
}

struct CubicMap {
    forms: Vec<MultiPoly<Rational>>,
}

impl CubicMap {
    /// Basis of the cubics through the six points.
    fn new(points: &[PlanePoint; 6]) -> Result<Self> {
        let rows: Mat<Rational> = points.iter().map(|p| eval_row(3, 3, p)).collect();
        let basis = kernel(&rows, 10);
        if basis.len() != 4 {
            return Err(Error::degenerate(
                "blow-up cubic system",
                format!("cubics through the points form a space of dimension {}", basis.len()),
            ));
        }
        let forms = basis.iter().map(|v| MultiPoly::from_dense_form(3, 3, v)).collect();
        Ok(CubicMap { forms })
    }

    fn apply(&self, z: &[Rational]) -> [Rational; 4] {
        std::array::from_fn(|k| self.forms[k].eval(z))
    }

    /// The differential at `z`: `v -> (grad f_k(z) . v)_k`.
    fn differential(&self, z: &[Rational], v: &[Rational]) -> [Rational; 4] {
        std::array::from_fn(|k| {
            (0..3).fold(Rational::zero(), |acc, i| acc + self.forms[k].derivative(i).eval(z) * v[i].clone())
        })
    }
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Implicit cubic through sampled images of the map; the fit must have a
/// one-dimensional solution space.
fn fit_surface(map: &CubicMap, seeds: &SeedTree) -> Result<Vec<Rational>> {
    let mut rng = seeds.child("fit").rng();
    let mut rows: Mat<Rational> = Vec::with_capacity(FIT_SAMPLES);
    while rows.len() < FIT_SAMPLES {
        let z: Vec<Rational> = (0..3).map(|_| rat_int(rng.random_range(-9..=9))).collect();
        let y = map.apply(&z);
        if !is_zero_vec(&y) {
            rows.push(eval_row(3, 4, &y));
        }
    }
    let ker = kernel(&rows, 20);
    if ker.len() != 1 {
        return Err(Error::degenerate("blow-up implicit fit", format!("fit kernel has dimension {}", ker.len())));
    }
    Ok(ker.into_iter().next().expect("one kernel vector"))
}

fn exact_line(p: &[Rational; 4], q: &[Rational; 4]) -> Option<[Rational; 6]> {
    let l = plucker(p, q);
    (!is_zero_vec(&l)).then_some(l)
}

/// First two candidates whose images span a line.
fn span_line(images: impl IntoIterator<Item = [Rational; 4]>) -> Option<[Rational; 6]> {
    let mut first: Option<[Rational; 4]> = None;
    for y in images {
        if is_zero_vec(&y) {
            continue;
        }
        match &first {
            None => first = Some(y),
            Some(p) => {
                if let Some(l) = exact_line(p, &y) {
                    return Some(l);
                }
            }
        }
    }
    None
}

fn directions() -> Vec<PlanePoint> {
    [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 2, 3], [3, -1, 2], [2, 5, -1], [-4, 1, 3]]
        .iter()
        .map(|d| d.map(rat_int))
        .collect()
}

fn combine(a: &PlanePoint, s: &Rational, b: &PlanePoint) -> PlanePoint {
    std::array::from_fn(|i| a[i].clone() + s.clone() * b[i].clone())
}

/// Conic through five points as a symmetric matrix.
fn conic_through(points: &[&PlanePoint]) -> Result<[[Rational; 3]; 3]> {
    let rows: Mat<Rational> = points.iter().map(|p| eval_row(2, 3, &p[..])).collect();
    let ker = kernel(&rows, 6);
    if ker.len() != 1 {
        return Err(Error::degenerate("blow-up conic", format!("conics through 5 points: dimension {}", ker.len())));
    }
    // monomials(3, 2): x^2, xy, xz, y^2, yz, z^2
    let c = &ker[0];
    let h = |v: &Rational| v.clone() / rat_int(2);
    Ok([
        [c[0].clone(), h(&c[1]), h(&c[2])],
        [h(&c[1]), c[3].clone(), h(&c[4])],
        [h(&c[2]), h(&c[4]), c[5].clone()],
    ])
}

fn bilinear(m: &[[Rational; 3]; 3], x: &[Rational], y: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for i in 0..3 {
        for j in 0..3 {
            s += x[i].clone() * m[i][j].clone() * y[j].clone();
        }
    }
    s
}

/// Points of the conic `m` by projection from its point `base`.
fn conic_points(m: &[[Rational; 3]; 3], base: &PlanePoint) -> Vec<PlanePoint> {
    directions()
        .into_iter()
        .filter_map(|d| {
            let qd = bilinear(m, &d, &d);
            let bd = bilinear(m, base, &d);
            if qd.is_zero() || bd.is_zero() {
                return None;
            }
            let t = -(rat_int(2) * bd) / qd;
            Some(combine(base, &t, &d))
        })
        .collect()
}

fn line_for(map: &CubicMap, points: &[PlanePoint; 6], label: LineLabel) -> Result<[Rational; 6]> {
    let found = match label {
        LineLabel::A(i) => {
            let z = &points[i as usize];
            span_line(directions().iter().map(|v| map.differential(z, v)))
        }
        LineLabel::B(i) => {
            let others: Vec<&PlanePoint> = (0..6).filter(|&k| k != i as usize).map(|k| &points[k]).collect();
            let m = conic_through(&others)?;
            span_line(conic_points(&m, others[0]).iter().map(|z| map.apply(z)))
        }
        LineLabel::C(i, j) => {
            let (a, b) = (&points[i as usize], &points[j as usize]);
            span_line((1..=6).map(|s| map.apply(&combine(a, &rat_int(s), b))))
        }
    };
    found.ok_or_else(|| Error::degenerate("blow-up lines", format!("could not span the line {label}")))
}

/// Whether `f` vanishes identically on the line: it vanishes at four
/// distinct points of it.
fn line_on_surface(f: &MultiPoly<Rational>, l: &[Rational; 6]) -> bool {
    // rows of the skew matrix p q^T - q p^T lie on the line
    let mut skew = vec![vec![Rational::zero(); 4]; 4];
    for (k, &(i, j)) in super::PLUCKER_PAIRS.iter().enumerate() {
        skew[i][j] = l[k].clone();
        skew[j][i] = -l[k].clone();
    }
    let rows: Vec<&Vec<Rational>> = skew.iter().filter(|r| !is_zero_vec(r)).collect();
    let (p, q) = match rows.iter().enumerate().find_map(|(a, r)| {
        rows.iter().skip(a + 1).find(|s| exact_line(&arr4(r), &arr4(s)).is_some()).map(|s| (arr4(r), arr4(s)))
    }) {
        Some(pq) => pq,
        None => return false,
    };
    (0..4).all(|s| {
        let x: Vec<Rational> = (0..4).map(|i| p[i].clone() + rat_int(s) * q[i].clone()).collect();
        f.eval(&x).is_zero()
    })
}

fn arr4(v: &[Rational]) -> [Rational; 4] {
    std::array::from_fn(|i| v[i].clone())
}

/// Blows up six points in general position: the cubic surface cut out by
/// the image of the cubics through them, and its 27 lines in label order
/// with exact incidences.
pub fn blowup_cubic(points: &[PlanePoint; 6]) -> Result<BlowupModel> {
    check_general_position(points)?;
    let map = CubicMap::new(points)?;
    let coeffs = fit_surface(&map, &SeedTree::new(0).child("blowup"))?;
    let f = MultiPoly::from_dense_form(4, 3, &coeffs);
    let labels = all_labels();
    let mut exact = Vec::with_capacity(27);
    for &label in &labels {
        let l = line_for(&map, points, label)?;
        if !line_on_surface(&f, &l) {
            return Err(Error::numerical(format!("line {label} is not on the fitted surface")));
        }
        exact.push(l);
    }
    let adjacency: Vec<Vec<bool>> = (0..27)
        .map(|i| (0..27).map(|j| i != j && incidence(&exact[i], &exact[j]).is_zero()).collect())
        .collect();
    let lines = exact
        .iter()
        .map(|l| ProjLine::from_plucker(l.clone().map(|c| c.to_c64())))
        .collect::<Result<Vec<_>>>()?;
    let configuration = LineConfiguration { lines, adjacency, labels: Some(labels) };
    configuration.validate()?;
    let surface = CubicSurface::from_scalars(&coeffs)?;
    Ok(BlowupModel {
        points: points.iter().map(|p| p.clone().map(|c| c.to_num())).collect(),
        surface,
        configuration,
        exact_plucker: exact.into_iter().map(|l| l.map(|c| c.to_num())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic_lines::{double_sixes, ON_SURFACE_TOL};
    use crate::groups::weyl::{blowup_adjacency, we6_generators};

    #[test]
    fn adjacency_matches_blowup_rules() {
        for seed in [3, 4] {
            let m = blowup_cubic(&random_six_points(seed)).unwrap();
            assert_eq!(m.configuration.adjacency, blowup_adjacency());
            for l in &m.configuration.lines {
                assert!(m.surface.line_residual(l) < ON_SURFACE_TOL);
            }
        }
    }

    #[test]
    fn rows_a_and_b_form_a_double_six() {
        let m = blowup_cubic(&random_six_points(3)).unwrap();
        let ds = double_sixes(&m.configuration).unwrap();
        let a: [usize; 6] = std::array::from_fn(|i| LineLabel::A(i as u8).index());
        let b: [usize; 6] = std::array::from_fn(|i| LineLabel::B(i as u8).index());
        assert!(ds.double_sixes.iter().any(|d| d.first == a && d.second == b));
        for g in we6_generators() {
            let adj = &m.configuration.adjacency;
            assert!((0..27).all(|i| (0..27).all(|j| adj[i][j] == adj[g.apply(i)][g.apply(j)])));
        }
    }

    #[test]
    fn rejects_special_positions() {
        let p = |x: i64, y: i64, z: i64| [rat_int(x), rat_int(y), rat_int(z)];
        // six points on x^2 + y^2 = z^2
        let conic = [p(1, 0, 1), p(0, 1, 1), p(-1, 0, 1), p(0, -1, 1), p(3, 4, 5), p(4, -3, 5)];
        assert!(matches!(blowup_cubic(&conic), Err(Error::Degenerate { .. })));
        let collinear = [p(0, 0, 1), p(1, 1, 1), p(2, 2, 1), p(0, 1, 1), p(5, -2, 1), p(1, 7, 3)];
        let err = blowup_cubic(&collinear).unwrap_err();
        assert!(err.to_string().contains("collinear"), "{err}");
    }
}
