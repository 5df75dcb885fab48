use rdlab_core::groups::Perm;
use rdlab_core::monodromy::{
    bezout_system, flex_system, lines27, lines27_line, loop_waypoints, match_endpoints, track, MonodromyOptions,
    ParametricSystem,
};
use rdlab_core::rng::SeedTree;
use rdlab_core::C64;

struct Based {
    system: ParametricSystem,
    basepoint: Vec<C64>,
    fiber: Vec<Vec<C64>>,
}

impl Based {
    fn new(system: ParametricSystem, seed: u64) -> Self {
        let seeds = SeedTree::new(seed);
        let basepoint = system.random_parameters(&seeds);
        let fiber = system.solve_fiber(&basepoint, &seeds);
        assert_eq!(fiber.len(), system.fiber_degree, "{}", system.name);
        Based { system, basepoint, fiber }
    }

    fn permutation(&self, path: &[Vec<C64>]) -> Option<Perm> {
        let opts = MonodromyOptions::default().track;
        let results = track(&self.system, path, &self.fiber, &opts).unwrap();
        if results.iter().any(|r| !r.ok()) {
            return None;
        }
        let ends: Vec<Vec<C64>> = results.into_iter().map(|r| r.end).collect();
        match_endpoints(&self.fiber, &ends)
    }

    /// The first `count` loops that track cleanly, with their permutations.
    fn loops(&self, seed: u64, count: usize) -> Vec<(Vec<Vec<C64>>, Perm)> {
        let radius = MonodromyOptions::default().radius;
        let out: Vec<_> = (0..20 * count as u64)
            .filter_map(|i| {
                let path = loop_waypoints(&self.basepoint, radius, seed, i);
                self.permutation(&path).map(|p| (path, p))
            })
            .take(count)
            .collect();
        assert_eq!(out.len(), count, "{}: not enough clean loops", self.system.name);
        out
    }
}

fn concat(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    a.iter().chain(&b[1..]).cloned().collect()
}

fn check_composition_and_inverses(b: &Based, seed: u64) {
    let loops = b.loops(seed, 5);
    let mut pairs = 0;
    'outer: for (i, (pa, a)) in loops.iter().enumerate() {
        for (pb, p) in loops.iter().skip(i + 1).take(1).chain(loops.iter().take(i).rev().take(1)) {
            if let Some(q) = b.permutation(&concat(pa, pb)) {
                assert_eq!(q, a.then(p), "{}: composition", b.system.name);
                pairs += 1;
            }
            if pairs == 10 {
                break 'outer;
            }
        }
        let back: Vec<Vec<C64>> = pa.iter().rev().cloned().collect();
        if let Some(q) = b.permutation(&back) {
            assert_eq!(q, a.inverse(), "{}: inverse", b.system.name);
        }
    }
    assert!(pairs >= 8, "{}: only {pairs} composite loops tracked", b.system.name);
}

#[test]
fn bezout_loops_compose() {
    check_composition_and_inverses(&Based::new(bezout_system(2, 2).unwrap(), 1), 1);
}

#[test]
fn flex_loops_compose() {
    check_composition_and_inverses(&Based::new(flex_system(3).unwrap(), 2), 2);
}

#[test]
fn lines27_loops_compose_and_preserve_incidence() {
    let b = Based::new(lines27(), 3);
    check_composition_and_inverses(&b, 3);
    let lines: Vec<_> = b.fiber.iter().map(|x| lines27_line(x).unwrap()).collect();
    let meets: Vec<Vec<bool>> = lines.iter().enumerate().map(|(i, l)| lines.iter().enumerate().map(|(j, m)| i != j && l.meets(m)).collect()).collect();
    assert!(meets.iter().all(|row| row.iter().filter(|&&m| m).count() == 10));
    for (_, p) in b.loops(3, 5) {
        for i in 0..27 {
            for j in 0..27 {
                assert_eq!(meets[i][j], meets[p.apply(i)][p.apply(j)]);
            }
        }
    }
}
