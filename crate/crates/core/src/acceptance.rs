//! The acceptance criteria as runnable checks, at full or reduced scale.

use std::fmt;
use std::time::Instant;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cubic_lines::{
    blowup_cubic, double_sixes, lines_from_one, lines_on_cubic, random_six_points, srg_parameters, CubicSurface,
    ON_SURFACE_TOL,
};
use crate::error::{Error, Result};
use crate::groups::weyl::{blowup_adjacency, we6};
use crate::groups::{composition_factors, FactorLabel, PermGroup};
use crate::monodromy::{bezout_system, certify, flex_system, kontsevich_nd, lines27, MonodromyOptions};
use crate::poly::{AnyPoly, Poly, RationalPoly};
use crate::quartic_bitangents::{
    bitangents, bitangents_from_two, classify_configurations, point_on_surface, quartic_from_cubic_point,
    same_bitangents, PlaneQuartic, WITNESS_TOL,
};
use crate::rd_bounds::{best_classical_bound, brauer_bound, hamilton_h};
use crate::rng::{small_rational, SeedTree};
use crate::scalar::{rat_int, C64};
use crate::tschirnhaus::{bring_hamilton_reduce, solve_via_tower, BringHamiltonOptions, NormalFormTarget, StepKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Full,
    Reduced,
}

impl Scale {
    fn pick(self, full: u64, reduced: u64) -> u64 {
        match self {
            Scale::Full => full,
            Scale::Reduced => reduced,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2} {:<28} {:>8.2}s  {}", self.id, self.name, self.seconds, self.detail)
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "bring-hamilton reduction"),
    (2, "hamilton normal forms"),
    (3, "bound tables"),
    (4, "group engine"),
    (5, "27 lines"),
    (6, "line from line"),
    (7, "blow-up model"),
    (8, "bitangents"),
    (9, "cubic to quartic"),
    (10, "monodromy certificates"),
    (11, "kontsevich"),
    (12, "determinism"),
];

/// Outcome of a check: `Ok(detail)` passes, `Err(detail)` fails.
type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

/// Runs criterion `id`.
pub fn run(id: u8, scale: Scale, seed: u64) -> Result<CriterionReport> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1.to_string())
        .ok_or_else(|| Error::invalid(format!("no criterion {id}")))?;
    let start = Instant::now();
    let out = match id {
        1 => reduction(scale, seed),
        2 => normal_forms(scale, seed),
        3 => bound_tables(),
        4 => group_engine(),
        5 => lines27_corpus(scale, seed),
        6 => line_from_line(scale, seed),
        7 => blowup(scale, seed),
        8 => bitangent_corpus(scale, seed),
        9 => projection(scale, seed),
        10 => monodromy(seed),
        11 => kontsevich(),
        _ => determinism(seed),
    };
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Ok(CriterionReport { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all(scale: Scale, seed: u64) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|c| run(c.0, scale, seed).expect("known criterion")).collect()
}

/// Monic polynomial of degree `n` with rational coefficients of height at
/// most 10 and denominators at most 4.
pub fn random_monic(seed: u64, n: usize) -> RationalPoly {
    let mut rng = SeedTree::new(seed).child("monic").rng();
    let mut c = vec![rat_int(1)];
    c.extend((0..n).map(|_| small_rational(&mut rng, 10, 4)));
    Poly::from_descending(c)
}

/// Roots as eigenvalues of the companion matrix.
pub fn companion_roots(p: &RationalPoly) -> Vec<C64> {
    let c: Vec<f64> = p.to_complex().coeffs().iter().map(|z| z.re).collect();
    let n = c.len() - 1;
    let lead = c[n];
    let m = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().copied().collect()
}

fn matches_roots(found: &[C64], want: &[C64], tol: f64) -> bool {
    let mut used = vec![false; want.len()];
    found.len() == want.len()
        && found.iter().all(|r| {
            let best = (0..want.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| (want[a] - r).norm().total_cmp(&(want[b] - r).norm()));
            match best {
                Some(j) if (want[j] - r).norm() < tol * (1.0 + want[j].norm()) => {
                    used[j] = true;
                    true
                }
                _ => false,
            }
        })
}

fn reduction(scale: Scale, seed: u64) -> Check {
    let count = scale.pick(100, 20);
    let mut ok = 0;
    let mut named = Vec::new();
    let mut worst: f64 = 0.0;
    let start = Instant::now();
    for k in 0..count {
        let s = seed * 1000 + k;
        let p = random_monic(s, 5);
        let (_, tower) = match bring_hamilton_reduce(&AnyPoly::Rational(p.clone()), BringHamiltonOptions::default()) {
            Ok(t) => t,
            Err(e) if matches!(e, Error::Degenerate { .. }) => {
                named.push(format!("seed {s}: {e}"));
                continue;
            }
            Err(e) => return Err(format!("seed {s}: {e}")),
        };
        let sol = solve_via_tower(&tower).map_err(|e| format!("seed {s}: tower solve: {e}"))?;
        let pc = p.to_complex();
        let res = sol.roots.roots.iter().map(|r| pc.eval(r).norm()).fold(0.0, f64::max);
        worst = worst.max(res);
        ensure(res < 1e-8, || format!("seed {s}: residual {res:.3e}"))?;
        ensure(matches_roots(&sol.roots.roots, &companion_roots(&p), 1e-6), || format!("seed {s}: roots differ from companion eigenvalues"))?;
        ok += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(ok * 100 >= 95 * count, || format!("{ok}/{count} reduced; failures: {}", named.join("; ")))?;
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    let failures = if named.is_empty() { String::new() } else { format!(" (genericity failures: {})", named.join("; ")) };
    Ok(format!("{ok}/{count} reduced, worst residual {worst:.1e}{failures}"))
}

fn normal_forms(scale: Scale, seed: u64) -> Check {
    let per = scale.pick(20, 5);
    for n in 6..=8usize {
        for k in 0..per {
            let s = seed * 1000 + 100 * n as u64 + k;
            let p = random_monic(s, n);
            let (t, tower) = lift(bring_hamilton_reduce(&AnyPoly::Rational(p), BringHamiltonOptions::default()), &format!("n = {n}, seed {s}"))?;
            ensure(NormalFormTarget::bring_hamilton(n, false).matches(&t.to_complex(), 0.0), || format!("n = {n}, seed {s}: target pattern"))?;
            let sq = tower.count(StepKind::RadicalAdjunction { degree: 2 });
            let cubic = tower.count(StepKind::AuxiliaryCubic);
            let radicals = tower.steps.iter().filter(|s| matches!(s.kind, StepKind::RadicalAdjunction { .. })).count();
            ensure(sq == 4 && cubic == 1 && radicals == 4, || format!("n = {n}, seed {s}: census {sq} square roots, {cubic} cubics, {radicals} radicals"))?;
        }
    }
    Ok(format!("{} towers, 4 square roots + 1 cubic each", 3 * per))
}

fn bound_tables() -> Check {
    let best: Vec<u64> = (5..=9).map(|n| best_classical_bound(n).map(|r| r.bound)).collect::<Result<_>>().map_err(|e| e.to_string())?;
    ensure(best == [1, 2, 3, 4, 5], || format!("best classical bounds {best:?}"))?;
    let first = (5..200u64).find(|&n| brauer_bound(n).map(|b| b < n - 4).unwrap_or(false));
    ensure(first == Some(25), || format!("Brauer first beats n - 4 at {first:?}"))?;
    let h: Vec<u64> = (4..=9).map(hamilton_h).collect::<Result<_>>().map_err(|e| e.to_string())?;
    ensure(h == [5, 11, 47, 923, 409_619, 83_763_206_255], || format!("H table {h:?}"))?;
    Ok("bounds (1,2,3,4,5); Brauer crossover 25; H(4..9) exact".into())
}

fn group_engine() -> Check {
    let g = we6();
    ensure(g.order() == 51840, || format!("|W(E6)| = {}", g.order()))?;
    let d = g.derived_subgroup();
    ensure(d.order() == 25920, || format!("derived order {}", d.order()))?;
    let f = lift(composition_factors(&d), "derived subgroup")?;
    ensure(f == [FactorLabel::WE6Plus], || format!("derived subgroup factors {f:?}"))?;
    let s6 = lift(composition_factors(&PermGroup::symmetric(6)), "S6")?;
    ensure(s6 == [FactorLabel::Cyclic(2), FactorLabel::Alternating(6)], || format!("S6 factors {s6:?}"))?;
    Ok("51840, derived 25920 simple, S6 = {C2, A6}".into())
}

fn corpus(scale: Scale, seed: u64) -> Vec<(String, CubicSurface)> {
    let mut v = vec![("fermat".to_string(), CubicSurface::fermat()), ("clebsch".to_string(), CubicSurface::clebsch())];
    for k in 0..scale.pick(10, 2) {
        let s = seed * 1000 + k;
        v.push((format!("random {s}"), CubicSurface::random(s)));
    }
    v
}

fn lines27_corpus(scale: Scale, seed: u64) -> Check {
    let mut slowest: f64 = 0.0;
    let surfaces = corpus(scale, seed);
    for (name, s) in &surfaces {
        let t = Instant::now();
        let cfg = lift(lines_on_cubic(s, seed), name)?;
        let secs = t.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        ensure(cfg.lines.len() == 27, || format!("{name}: {} lines", cfg.lines.len()))?;
        let res = cfg.lines.iter().map(|l| s.line_residual(l)).fold(0.0, f64::max);
        ensure(res < ON_SURFACE_TOL, || format!("{name}: residual {res:.2e}"))?;
        ensure(cfg.adjacency.iter().all(|r| r.iter().filter(|&&b| b).count() == 10), || format!("{name}: not 10-regular"))?;
        let srg = srg_parameters(&cfg.adjacency, true);
        ensure(srg == Some((16, 10, 8)), || format!("{name}: complement parameters {srg:?}"))?;
        let ds = lift(double_sixes(&cfg), name)?;
        ensure(ds.double_sixes.len() == 36 && ds.sixers.len() == 72, || format!("{name}: {} double-sixes, {} sixers", ds.double_sixes.len(), ds.sixers.len()))?;
        ensure(secs < 30.0, || format!("{name}: {secs:.1}s"))?;
    }
    Ok(format!("{} surfaces, slowest {slowest:.2}s", surfaces.len()))
}

fn distinct(roots: &[C64]) -> bool {
    roots.iter().enumerate().all(|(i, a)| roots[i + 1..].iter().all(|b| (a - b).norm() > 1e-6 * (1.0 + a.norm())))
}

fn line_from_line(scale: Scale, seed: u64) -> Check {
    let surfaces = corpus(scale, seed);
    for (name, s) in &surfaces {
        let generic = name.starts_with("random");
        let cfg = lift(lines_on_cubic(s, seed), name)?;
        let (rebuilt, passes) = lift(lines_from_one(s, &cfg.lines[0]), name)?;
        ensure(rebuilt.same_lines(&cfg, 1e-7), || format!("{name}: line sets differ"))?;
        let first = &passes[0];
        ensure(first.pairs.len() == 5, || format!("{name}: first pass gives {} lines", 1 + 2 * first.pairs.len()))?;
        if generic {
            for p in &passes {
                ensure(p.degree == 5 && p.roots.len() == 5 && distinct(&p.roots), || format!("{name}: pencil quintic of degree {} with {} roots", p.degree, p.roots.len()))?;
            }
        }
    }
    Ok(format!("{} surfaces rebuilt from one line; first pass 11 lines", surfaces.len()))
}

fn blowup(scale: Scale, seed: u64) -> Check {
    let want = blowup_adjacency();
    let count = scale.pick(10, 3);
    for k in 0..count {
        let s = seed * 1000 + k;
        let m = lift(blowup_cubic(&random_six_points(s)), &format!("seed {s}"))?;
        let labels = m.configuration.labels.as_ref().ok_or(format!("seed {s}: unlabelled"))?;
        let mut mismatches = 0;
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                if i != j && m.configuration.adjacency[i][j] != want[a.index()][b.index()] {
                    mismatches += 1;
                }
            }
        }
        ensure(mismatches == 0, || format!("seed {s}: {mismatches} mismatches"))?;
    }
    Ok(format!("{count} six-point tuples, zero mismatches"))
}

fn bitangent_corpus(scale: Scale, seed: u64) -> Check {
    let count = scale.pick(20, 3);
    let mut flagged = 0;
    for k in 0..count {
        let s = seed * 1000 + k;
        let q = PlaneQuartic::random(s);
        let all = lift(bitangents(&q, s), &format!("quartic {s}"))?;
        let worst = all.iter().map(|b| b.residual).fold(0.0, f64::max);
        ensure(all.len() == 28 && worst < WITNESS_TOL, || format!("quartic {s}: {} bitangents, worst {worst:.1e}", all.len()))?;
        let mut rng = SeedTree::new(s).child("pairs").rng();
        let mut pairs = vec![(0usize, 1usize)];
        while pairs.len() < 2 {
            let i = rand::Rng::random_range(&mut rng, 0..28);
            let j = rand::Rng::random_range(&mut rng, 0..28);
            if i != j {
                pairs.push((i, j));
            }
        }
        for (i, j) in pairs {
            let (set, passes) = match bitangents_from_two(&q, &all[i], &all[j]) {
                Err(Error::InvalidInput(_)) => continue,
                r => lift(r, &format!("quartic {s}, pair ({i}, {j})"))?,
            };
            ensure(same_bitangents(&set, &all, 1e-6), || format!("quartic {s}: pair ({i}, {j}) gives another set"))?;
            let conic = passes.iter().flat_map(|p| p.conic_residuals.iter()).copied().fold(0.0, f64::max);
            ensure(conic < 1e-7, || format!("quartic {s}: contact conic residual {conic:.1e}"))?;
        }
        let c = lift(classify_configurations(&all), &format!("quartic {s}"))?;
        if c.flagged {
            flagged += 1;
            continue;
        }
        ensure(c.steiner.exact() == Some(63) && c.aronhold.exact() == Some(288), || format!("quartic {s}: steiner {:?}, aronhold {:?}", c.steiner, c.aronhold))?;
    }
    Ok(format!("{count} quartics x 28, from-two reproduced, 63/288 ({flagged} flagged)"))
}

fn projection(scale: Scale, seed: u64) -> Check {
    let count = scale.pick(10, 2);
    for k in 0..count {
        let s = seed * 1000 + k;
        let surface = CubicSurface::random(s);
        let p = lift(point_on_surface(&surface, s), &format!("seed {s}"))?;
        let proj = lift(quartic_from_cubic_point(&surface, &p, s), &format!("seed {s}"))?;
        let mut q = proj.quartic.clone();
        lift(q.check_smooth(&SeedTree::new(s)), &format!("seed {s}: quartic"))?;
        let direct = lift(bitangents(&q, s), &format!("seed {s}: direct"))?;
        ensure(same_bitangents(&direct, &proj.bitangents, 1e-6), || format!("seed {s}: projected lines differ from the direct solve"))?;
    }
    Ok(format!("{count} projections match the direct solver"))
}

fn monodromy(seed: u64) -> Check {
    let runs = [
        (lines27(), Some(51840u128), 200usize),
        (lift(bezout_system(2, 3), "bezout")?, Some(720), 100),
        (lift(flex_system(3), "flex")?, None, 200),
    ];
    let mut parts = Vec::new();
    for (sys, target, loops) in runs {
        let t = Instant::now();
        let opts = MonodromyOptions { target, max_loops: loops, ..MonodromyOptions::default() };
        let c = lift(certify(&sys, &opts, seed), &sys.name)?;
        let secs = t.elapsed().as_secs_f64();
        ensure(c.complete, || format!("{}: fiber of {} points", sys.name, c.fiber.len()))?;
        if let Some(t) = target {
            ensure(c.order == t, || format!("{}: order {} after {} loops", sys.name, c.order, c.permutations.len()))?;
        } else {
            ensure(c.solvable, || format!("{}: order {} not solvable", sys.name, c.order))?;
        }
        ensure(secs < 300.0, || format!("{}: {secs:.0}s", sys.name))?;
        parts.push(format!("{} order {} ({} loops)", sys.name, c.order, c.permutations.len()));
    }
    Ok(parts.join(", "))
}

/// Kontsevich's numbers by a straight-line evaluation in `i128`, summing
/// over ordered splittings with factorial-based binomials.
pub fn kontsevich_oracle(d: usize) -> Vec<i128> {
    let fact = |n: usize| (1..=n as i128).product::<i128>();
    let choose = |n: usize, k: usize| if k > n { 0 } else { (n - k + 1..=n).map(|x| x as i128).product::<i128>() / fact(k) };
    let mut n = vec![0i128, 1];
    for e in 2..=d {
        let mut s = 0i128;
        for a in 1..e {
            let b = (e - a) as i128;
            let ai = a as i128;
            s += n[a] * n[e - a] * ai * ai * b * (b * choose(3 * e - 4, 3 * a - 2) - ai * choose(3 * e - 4, 3 * a - 1));
        }
        n.push(s);
    }
    n
}

fn kontsevich() -> Check {
    let v: Vec<BigInt> = (1..=12).map(kontsevich_nd).collect::<Result<_>>().map_err(|e| e.to_string())?;
    ensure(v[1] == BigInt::from(1) && v[2] == BigInt::from(12) && v[3] == BigInt::from(620), || format!("n2..n4 = {:?}", &v[1..4]))?;
    ensure(v.iter().all(|x| *x > BigInt::from(0)), || "non-positive value".into())?;
    let oracle = kontsevich_oracle(8);
    for d in 1..=8 {
        ensure(v[d - 1] == BigInt::from(oracle[d]), || format!("n{d}: {} vs oracle {}", v[d - 1], oracle[d]))?;
    }
    Ok(format!("n2=1, n3=12, n4=620, n12={}", v[11]))
}

fn fingerprint(seed: u64) -> std::result::Result<String, String> {
    let p = random_monic(seed, 5);
    let (_, tower) = lift(bring_hamilton_reduce(&AnyPoly::Rational(p), BringHamiltonOptions::default()), "tower")?;
    let lines = lift(lines_on_cubic(&CubicSurface::random(seed), seed), "lines")?;
    let bits = lift(bitangents(&PlaneQuartic::random(seed), seed), "bitangents")?;
    let opts = MonodromyOptions { target: Some(720), max_loops: 100, ..MonodromyOptions::default() };
    let cert = lift(certify(&lift(bezout_system(2, 3), "bezout")?, &opts, seed), "monodromy")?;
    let j = |v: serde_json::Result<String>| v.map_err(|e| e.to_string());
    Ok([j(serde_json::to_string(&tower))?, j(serde_json::to_string(&lines))?, j(serde_json::to_string(&bits))?, j(serde_json::to_string(&cert))?].join("\n"))
}

fn determinism(seed: u64) -> Check {
    let a = fingerprint(seed)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let b = pool.install(|| fingerprint(seed))?;
    let c = fingerprint(seed)?;
    ensure(a == b && a == c, || "outputs differ between runs".into())?;
    Ok(format!("tower, lines, bitangents and certificate identical over 3 runs ({} bytes)", a.len()))
}
