use rdlab_core::cubic_lines::{blowup_cubic, lines_from_one, lines_on_cubic, random_six_points, CubicSurface};
use rdlab_core::groups::weyl::{blowup_adjacency, we6_generators};
use rdlab_core::quartic_bitangents::{
    bitangents, bitangents_from_two, classify_configurations, point_on_surface, quartic_from_cubic_point,
    same_bitangents, syzygy_test, Bitangent, PlaneQuartic, Syzygy,
};
use rdlab_core::rng::{gaussian_c64, SeedTree};
use rdlab_core::C64;
use rand::Rng;

#[test]
fn pencil_solver_matches_direct_solver() {
    for seed in 0..20u64 {
        let s = CubicSurface::random(100 + seed);
        let direct = lines_on_cubic(&s, seed).unwrap();
        let (pencil, _) = lines_from_one(&s, &direct.lines[0]).unwrap();
        assert_eq!(pencil.lines.len(), 27, "seed {seed}");
        for l in &direct.lines {
            assert!(pencil.lines.iter().any(|m| m.distance(l) < 1e-7), "seed {seed}");
        }
    }
}

#[test]
fn we6_generators_preserve_labelled_adjacency() {
    let adj = blowup_adjacency();
    for g in we6_generators() {
        for i in 0..27 {
            for j in 0..27 {
                assert_eq!(adj[i][j], adj[g.apply(i)][g.apply(j)]);
            }
        }
    }
    let model = blowup_cubic(&random_six_points(3)).unwrap();
    assert_eq!(model.configuration.adjacency, adj);
}

#[test]
fn three_bitangent_pipelines_agree() {
    for seed in 0..3u64 {
        let s = CubicSurface::random(200 + seed);
        let p = point_on_surface(&s, seed).unwrap();
        let proj = quartic_from_cubic_point(&s, &p, seed).unwrap();
        let direct = bitangents(&proj.quartic, seed).unwrap();
        assert_eq!(direct.len(), 28);
        assert!(same_bitangents(&direct, &proj.bitangents, 1e-6), "cubic vs direct, seed {seed}");
        let (two, _) = bitangents_from_two(&proj.quartic, &direct[0], &direct[1]).unwrap();
        assert!(same_bitangents(&direct, &two, 1e-6), "from-two vs direct, seed {seed}");
    }
}

fn random_projectivity(seeds: &SeedTree) -> [[C64; 3]; 3] {
    let mut rng = seeds.rng();
    std::array::from_fn(|_| std::array::from_fn(|_| gaussian_c64(&mut rng)))
}

fn transport(c: &PlaneQuartic, m: &[[C64; 3]; 3], b: &Bitangent) -> Bitangent {
    let l: [C64; 3] = std::array::from_fn(|j| (0..3).map(|i| m[i][j] * b.line[i]).sum());
    Bitangent::from_line(c, &l).unwrap()
}

#[test]
fn syzygy_verdicts_survive_projectivities() {
    let curve = PlaneQuartic::random(21);
    let all = bitangents(&curve, 21).unwrap();
    let mut rng = SeedTree::new(21).child("subsets").rng();
    let subsets: Vec<Vec<usize>> = (0..40)
        .map(|k| {
            let size = 3 + k % 2;
            let mut s: Vec<usize> = Vec::new();
            while s.len() < size {
                let i = rng.random_range(0..28);
                if !s.contains(&i) {
                    s.push(i);
                }
            }
            s
        })
        .collect();
    let verdict = |set: &[Bitangent], s: &[usize]| {
        let pick: Vec<Bitangent> = s.iter().map(|&i| set[i].clone()).collect();
        syzygy_test(&pick).unwrap().verdict
    };
    let base: Vec<Syzygy> = subsets.iter().map(|s| verdict(&all, s)).collect();
    assert!(base.contains(&Syzygy::Syzygetic) && base.contains(&Syzygy::Asyzygetic));
    for k in 0..10u64 {
        let m = random_projectivity(&SeedTree::new(21).child("projectivity").index(k));
        let moved_curve = curve.pullback(&m).unwrap();
        let moved: Vec<Bitangent> = all.iter().map(|b| transport(&moved_curve, &m, b)).collect();
        assert!(moved.iter().all(|b| b.residual < 1e-8), "projectivity {k}");
        for (s, v) in subsets.iter().zip(&base) {
            if *v != Syzygy::Ambiguous {
                assert_eq!(verdict(&moved, s), *v, "projectivity {k}, subset {s:?}");
            }
        }
    }
}

#[test]
fn configuration_counts_do_not_depend_on_the_seed() {
    let curve = PlaneQuartic::random(33);
    let counts: Vec<_> =
        (0..3u64).map(|seed| classify_configurations(&bitangents(&curve, seed).unwrap()).unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(counts[0].steiner.exact(), Some(63));
    assert_eq!(counts[0].aronhold.exact(), Some(288));
}
