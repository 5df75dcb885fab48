//! Numerical monodromy of parametrized polynomial systems and the
//! Kontsevich count of rational plane curves.

mod families;
mod kontsevich;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Perm, PermGroup};
use crate::homotopy::{
    newton_refine, random_point, scaled_residual, solve_total_degree, track_all, CompiledPoly, ParameterHomotopy,
    PathResult, TrackOptions,
};
use crate::poly::MultiPoly;
use crate::rng::SeedTree;
use crate::scalar::C64;

pub use families::{bezout_system, flex_system, lines27, lines27_line};
pub use kontsevich::kontsevich_nd;

/// Scaled residual required of fiber points.
pub const FIBER_TOL: f64 = 1e-10;
/// Affine norm beyond which a fiber point is taken to be at infinity.
pub const MAX_FIBER_NORM: f64 = 1e4;
/// Second-nearest over nearest distance required when matching endpoints.
pub const MATCH_RATIO: f64 = 10.0;

/// Square system in `unknowns` variables followed by `params` parameters.
#[derive(Clone, Debug)]
pub struct ParametricSystem {
    pub name: String,
    pub equations: Vec<MultiPoly<C64>>,
    pub unknowns: usize,
    pub params: usize,
    pub fiber_degree: usize,
    compiled: Vec<CompiledPoly>,
}

impl ParametricSystem {
    pub fn new(name: impl Into<String>, equations: Vec<MultiPoly<C64>>, unknowns: usize, fiber_degree: usize) -> Result<Self> {
        let Some(first) = equations.first() else {
            return Err(Error::invalid("empty system"));
        };
        let nvars = first.nvars();
        if equations.len() != unknowns || nvars < unknowns || equations.iter().any(|e| e.nvars() != nvars) {
            return Err(Error::invalid(format!(
                "{} equations in {nvars} variables with {unknowns} unknowns is not square",
                equations.len()
            )));
        }
        let compiled = equations.iter().map(CompiledPoly::new).collect();
        Ok(ParametricSystem { name: name.into(), params: nvars - unknowns, equations, unknowns, fiber_degree, compiled })
    }

    /// The system at fixed parameters, in the unknowns only.
    pub fn specialize(&self, p: &[C64]) -> Vec<MultiPoly<C64>> {
        let n = self.unknowns;
        let forms: Vec<MultiPoly<C64>> = (0..n)
            .map(|i| MultiPoly::var(n, i))
            .chain(p.iter().map(|c| MultiPoly::constant(n, *c)))
            .collect();
        self.equations.iter().map(|e| e.substitute(&forms)).collect()
    }

    pub fn residual(&self, x: &[C64], p: &[C64]) -> f64 {
        let mut args = x.to_vec();
        args.extend_from_slice(p);
        scaled_residual(&self.compiled, &args)
    }

    pub fn random_parameters(&self, seeds: &SeedTree) -> Vec<C64> {
        random_point(&mut seeds.child("parameters").rng(), self.params)
    }

    /// Finite isolated solutions at `p` by total-degree homotopy, merged
    /// over up to three start systems until the fiber degree is reached.
    pub fn solve_fiber(&self, p: &[C64], seeds: &SeedTree) -> Vec<Vec<C64>> {
        let eqs = self.specialize(p);
        let compiled: Vec<CompiledPoly> = eqs.iter().map(CompiledPoly::new).collect();
        let mut out: Vec<Vec<C64>> = Vec::new();
        for attempt in 0..3 {
            let sols = solve_total_degree(&eqs, &seeds.child("fiber").index(attempt), &TrackOptions::default(), 1e-8);
            for x in sols.points {
                let (x, res) = newton_refine(&compiled, &x, 4);
                let nx = norm(&x);
                if res < FIBER_TOL && nx < MAX_FIBER_NORM && !out.iter().any(|y| distance(y, &x) < 1e-6 * (1.0 + nx)) {
                    out.push(x);
                }
            }
            if out.len() >= self.fiber_degree {
                break;
            }
        }
        out
    }
}

fn norm(v: &[C64]) -> f64 {
    crate::linalg::norm(v)
}

fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Tracks `starts` along the piecewise-linear parameter `path`. Every start
/// gets a result; failures are reported in its status.
pub fn track(system: &ParametricSystem, path: &[Vec<C64>], starts: &[Vec<C64>], opts: &TrackOptions) -> Result<Vec<PathResult>> {
    if path.len() < 2 || path.iter().any(|p| p.len() != system.params) {
        return Err(Error::invalid(format!("a path needs at least two points with {} parameters", system.params)));
    }
    for (k, s) in starts.iter().enumerate() {
        if s.len() != system.unknowns {
            return Err(Error::invalid(format!("start {k} has {} coordinates, expected {}", s.len(), system.unknowns)));
        }
        let r = system.residual(s, &path[0]);
        if !(r < FIBER_TOL) {
            return Err(Error::invalid(format!("start {k} is not a solution at the path start (residual {r:.3e})")));
        }
    }
    let h = ParameterHomotopy::new(&system.compiled, system.unknowns, path.to_vec());
    Ok(track_all(&h, starts, 0.0, 1.0, opts))
}

/// The permutation `i -> j` sending fiber point `i` to the fiber point its
/// path ends at, if every endpoint matches a distinct point unambiguously.
pub fn match_endpoints(fiber: &[Vec<C64>], ends: &[Vec<C64>]) -> Option<Perm> {
    let mut images = Vec::with_capacity(ends.len());
    let mut used = vec![false; fiber.len()];
    for e in ends {
        let mut d: Vec<(f64, usize)> = fiber.iter().enumerate().map(|(j, f)| (distance(e, f), j)).collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (best, j) = d[0];
        if d.len() > 1 && d[1].0 < MATCH_RATIO * best {
            return None;
        }
        if best > 1e-6 * (1.0 + norm(&fiber[j])) || used[j] {
            return None;
        }
        used[j] = true;
        images.push(j as u32);
    }
    Perm::new(images).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyOptions {
    /// Accepted loops at most.
    pub max_loops: usize,
    /// Waypoint distance from the basepoint relative to its norm.
    pub radius: f64,
    /// Stop once the order is unchanged for this many accepted loops.
    pub stable_loops: usize,
    /// Stop once this order is reached.
    pub target: Option<u128>,
    /// Loop attempts allowed per accepted loop before giving up.
    pub attempts_per_loop: usize,
    pub track: TrackOptions,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions {
            max_loops: 200,
            radius: 1.0,
            stable_loops: 25,
            target: None,
            attempts_per_loop: 3,
            track: TrackOptions { max_step: 0.01, ..TrackOptions::default() },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopStatus {
    Accepted,
    PathFailure,
    Mismatch,
}

/// A loop is regenerated from `(seed, index, radius)` by [`loop_waypoints`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopRecord {
    pub index: u64,
    pub status: LoopStatus,
    pub failed_paths: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyCertificate {
    pub family: String,
    pub seed: u64,
    pub radius: f64,
    pub basepoint: Vec<C64>,
    pub fiber: Vec<Vec<C64>>,
    pub loops: Vec<LoopRecord>,
    /// Permutations of the accepted loops, in order.
    pub permutations: Vec<Perm>,
    pub order: u128,
    pub derived_orders: Vec<u128>,
    pub solvable: bool,
    pub target: Option<u128>,
    pub target_reached: bool,
    /// False when the fiber at the basepoint had the wrong size.
    pub complete: bool,
}

/// Closed path `basepoint, w1, .., w4, basepoint` for loop `index`.
pub fn loop_waypoints(basepoint: &[C64], radius: f64, seed: u64, index: u64) -> Vec<Vec<C64>> {
    let mut rng = SeedTree::new(seed).child("loop").index(index).rng();
    let scale = radius * norm(basepoint).max(1.0);
    let mut path = vec![basepoint.to_vec()];
    for _ in 0..4 {
        let g = random_point(&mut rng, basepoint.len());
        let k = scale / norm(&g);
        path.push(basepoint.iter().zip(&g).map(|(b, x)| b + x * k).collect());
    }
    path.push(basepoint.to_vec());
    path
}

fn group_facts(degree: usize, perms: &[Perm]) -> Result<(u128, Vec<u128>, bool)> {
    let g = PermGroup::new(degree, perms.to_vec())?;
    let s = g.derived_series();
    Ok((g.order(), s.orders, s.solvable))
}

/// Monodromy group of `system` over `basepoint` generated by random loops.
pub fn monodromy_group(
    system: &ParametricSystem,
    basepoint: &[C64],
    fiber: Vec<Vec<C64>>,
    opts: &MonodromyOptions,
    seed: u64,
) -> Result<MonodromyCertificate> {
    let n = fiber.len();
    let mut cert = MonodromyCertificate {
        family: system.name.clone(),
        seed,
        radius: opts.radius,
        basepoint: basepoint.to_vec(),
        fiber,
        loops: Vec::new(),
        permutations: Vec::new(),
        order: 1,
        derived_orders: vec![1],
        solvable: true,
        target: opts.target,
        target_reached: opts.target == Some(1),
        complete: n == system.fiber_degree,
    };
    if !cert.complete || n == 0 {
        return Ok(cert);
    }
    let mut gens: Vec<Perm> = Vec::new();
    let mut group = PermGroup::trivial(n);
    let mut stable = 0;
    let attempts = (opts.max_loops * opts.attempts_per_loop) as u64;
    for index in 0..attempts {
        if cert.permutations.len() >= opts.max_loops || cert.target_reached || stable >= opts.stable_loops {
            break;
        }
        let path = loop_waypoints(basepoint, opts.radius, seed, index);
        let results = track(system, &path, &cert.fiber, &opts.track)?;
        let failed = results.iter().filter(|r| !r.ok()).count();
        if failed > 0 {
            cert.loops.push(LoopRecord { index, status: LoopStatus::PathFailure, failed_paths: failed });
            continue;
        }
        let ends: Vec<Vec<C64>> = results.into_iter().map(|r| r.end).collect();
        let Some(perm) = match_endpoints(&cert.fiber, &ends) else {
            cert.loops.push(LoopRecord { index, status: LoopStatus::Mismatch, failed_paths: 0 });
            continue;
        };
        cert.loops.push(LoopRecord { index, status: LoopStatus::Accepted, failed_paths: 0 });
        cert.permutations.push(perm.clone());
        if group.contains(&perm)? {
            stable += 1;
        } else {
            gens.push(perm);
            group = PermGroup::new(n, gens.clone())?;
            stable = 0;
            cert.target_reached = opts.target.is_some_and(|t| group.order() >= t);
        }
    }
    let (order, derived, solvable) = group_facts(n, &gens)?;
    cert.order = order;
    cert.derived_orders = derived;
    cert.solvable = solvable;
    Ok(cert)
}

/// Random basepoint, its fiber, then [`monodromy_group`].
pub fn certify(system: &ParametricSystem, opts: &MonodromyOptions, seed: u64) -> Result<MonodromyCertificate> {
    let seeds = SeedTree::new(seed);
    let p = system.random_parameters(&seeds);
    let fiber = system.solve_fiber(&p, &seeds);
    monodromy_group(system, &p, fiber, opts, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// `x^2 - s` in (x, s).
    fn square_root_system() -> ParametricSystem {
        let x = MultiPoly::<C64>::var(2, 0);
        let s = MultiPoly::<C64>::var(2, 1);
        ParametricSystem::new("sqrt", vec![&(&x * &x) - &s], 1, 2).unwrap()
    }

    #[test]
    fn constant_path_is_identity() {
        let sys = square_root_system();
        let starts = vec![vec![c(1.0, 0.0)], vec![c(-1.0, 0.0)]];
        let r = track(&sys, &[vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]], &starts, &TrackOptions::default()).unwrap();
        for (a, b) in r.iter().zip(&starts) {
            assert!(a.ok());
            assert!((a.end[0] - b[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn square_root_continues() {
        let sys = square_root_system();
        let starts = vec![vec![c(1.0, 0.0)], vec![c(-1.0, 0.0)]];
        let r = track(&sys, &[vec![c(1.0, 0.0)], vec![c(4.0, 0.0)]], &starts, &TrackOptions::default()).unwrap();
        assert!((r[0].end[0] - c(2.0, 0.0)).norm() < 1e-10);
        assert!((r[1].end[0] - c(-2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn square_root_loop_swaps() {
        let sys = square_root_system();
        let fiber = vec![vec![c(1.0, 0.0)], vec![c(-1.0, 0.0)]];
        let circle: Vec<Vec<C64>> =
            (0..=32).map(|k| vec![C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 32.0)]).collect();
        let r = track(&sys, &circle, &fiber, &TrackOptions::default()).unwrap();
        let ends: Vec<Vec<C64>> = r.into_iter().map(|r| r.end).collect();
        let p = match_endpoints(&fiber, &ends).unwrap();
        assert_eq!(p.images(), &[1, 0]);
    }

    #[test]
    fn rejects_bad_starts() {
        let sys = square_root_system();
        let r = track(&sys, &[vec![c(1.0, 0.0)], vec![c(4.0, 0.0)]], &[vec![c(3.0, 0.0)]], &TrackOptions::default());
        assert!(matches!(r, Err(Error::InvalidInput(_))));
        assert!(ParametricSystem::new("bad", vec![MultiPoly::var(3, 0)], 2, 1).is_err());
    }

    #[test]
    fn ambiguous_matches_are_rejected() {
        let fiber = vec![vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]];
        assert!(match_endpoints(&fiber, &[vec![c(0.5, 0.0)], vec![c(1.0, 0.0)]]).is_none());
        assert!(match_endpoints(&fiber, &[vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]]).is_none());
    }
}
