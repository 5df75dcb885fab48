use rdlab_core::acceptance::random_monic;
use rdlab_core::poly::{roots, AnyPoly, Poly, RationalPoly};
use rdlab_core::rng::{small_rational, SeedTree};
use rdlab_core::tschirnhaus::{
    apply, bring_hamilton_reduce, kill_two, solve_via_tower, BringHamiltonOptions, SolutionTower, StepKind,
    TschirnhausMap,
};
use rdlab_core::C64;

/// Greedy multiset match; largest distance between paired points.
fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm() / x.norm().max(1.0)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn source_residual(tower: &SolutionTower) -> f64 {
    let sol = solve_via_tower(tower).unwrap();
    let src = tower.source.to_complex();
    sol.roots.roots.iter().map(|r| src.scaled_residual(*r)).fold(0.0, f64::max)
}

#[test]
fn apply_matches_brute_force_oracle() {
    let seeds = SeedTree::new(5).child("apply");
    for k in 0..200u64 {
        let n = 3 + (k % 6) as usize;
        let p = random_monic(1000 + k, n);
        let mut rng = seeds.index(k).rng();
        let b: Vec<_> = (0..n).map(|_| small_rational(&mut rng, 3, 2)).collect();
        let t = TschirnhausMap::new(n, b).unwrap();
        let image: RationalPoly = apply(&p, &t).unwrap();
        assert_eq!(image.degree(), n, "case {k}");
        let tc = t.to_complex().poly();
        let mapped: Vec<C64> = roots(&p, 1e-12).unwrap().roots.iter().map(|r| tc.eval(r)).collect();
        let oracle = Poly::from_roots(&mapped);
        let ic = image.to_complex();
        let scale = ic.max_abs_coeff().max(1.0);
        let err = (0..=n).map(|i| (oracle.coeff(i) - ic.coeff(i)).norm()).fold(0.0, f64::max) / scale;
        assert!(err < 1e-9, "case {k}: relative error {err:e}");
    }
}

#[test]
fn towers_pull_back_to_source_roots() {
    for seed in 0..100u64 {
        let p: AnyPoly = random_monic(seed, 5 + (seed % 4) as usize).into();
        let (_, t) = kill_two(&p).unwrap();
        let r = source_residual(&t);
        assert!(r < 1e-8, "kill_two seed {seed}: {r:e}");
        let (_, t) = bring_hamilton_reduce(&p, BringHamiltonOptions::default()).unwrap();
        let r = source_residual(&t);
        assert!(r < 1e-8, "bring_hamilton seed {seed}: {r:e}");
    }
}

#[test]
fn bring_hamilton_step_census() {
    for seed in 0..30u64 {
        let p: AnyPoly = random_monic(seed, 5 + (seed % 4) as usize).into();
        let (_, t) = bring_hamilton_reduce(&p, BringHamiltonOptions::default()).unwrap();
        assert_eq!(t.count(StepKind::RadicalAdjunction { degree: 2 }), 4, "seed {seed}");
        assert_eq!(t.count(StepKind::AuxiliaryCubic), 1, "seed {seed}");
    }
}

#[test]
fn scaling_step_maps_root_multisets() {
    for seed in 0..20u64 {
        let p: AnyPoly = random_monic(seed, 5 + (seed % 4) as usize).into();
        let (_, t) = bring_hamilton_reduce(&p, BringHamiltonOptions { unit_constant: true }).unwrap();
        let i = t.steps.iter().position(|s| s.kind == StepKind::CoefficientScaling).expect("scaling step");
        let pre = t.steps[..i].iter().rev().find_map(|s| s.result.clone()).unwrap_or(t.source.clone());
        let post = t.steps[i].result.clone().unwrap();
        let map = t.steps[i].map.clone().unwrap();
        let pre_roots: Vec<C64> = roots(&pre.to_complex(), 1e-12).unwrap().roots.iter().map(|r| map.eval(*r)).collect();
        let post_roots = roots(&post.to_complex(), 1e-12).unwrap().roots;
        let d = multiset_distance(&pre_roots, &post_roots);
        assert!(d < 1e-6, "seed {seed}: {d:e}");
    }
}
