//! Percolation sampling, sweeps and threshold estimates.

use pclocal::generators::tree_ball;
use pclocal::percolation::{
    clusters, estimate_pc, estimate_pc_tree_exact, exhaustive_oracle, giant_sweep, root_survival_prob, sample,
    tree_survival_exact, Observable, OracleEvent, PcOptions, SurvivalCriterion,
};
use pclocal::{Family, GeneratorSpec, Graph};

/// Root-to-sphere probability on the d-regular tree ball by the branching
/// recursion, leaves upward.
fn tree_recursion(d: usize, p: f64, radius: usize) -> f64 {
    let mut h = 1.0;
    for _ in 1..radius {
        h = 1.0 - (1.0 - p * h).powi(d as i32 - 1);
    }
    1.0 - (1.0 - p * h).powi(d as i32)
}

#[test]
fn exact_tree_survival_matches_recursion() {
    for (d, r) in [(3usize, 1usize), (3, 8), (4, 5), (5, 3)] {
        for p in [0.1, 0.4, 0.75, 1.0] {
            let got = tree_survival_exact(d, p, r).unwrap();
            assert!((got - tree_recursion(d, p, r)).abs() < 1e-12, "d={d} r={r} p={p}");
        }
    }
}

#[test]
fn monte_carlo_survival_agrees_with_oracle() {
    let b = tree_ball(4, 2).unwrap();
    let event = OracleEvent::root_to_boundary(&b);
    let p = 0.6;
    let exact = exhaustive_oracle(b.graph(), p, &event).unwrap();
    assert!((exact - tree_recursion(4, p, 2)).abs() < 1e-12);
    let mc = root_survival_prob(&b, p, 20_000, 11).unwrap();
    assert!(
        (mc.estimate - exact).abs() <= 4.0 * mc.stderr,
        "{} vs {exact}",
        mc.estimate
    );
}

#[test]
fn samples_are_monotone_in_p() {
    let edges: Vec<_> = (0..12).flat_map(|u| (u + 1..12).map(move |v| (u, v))).collect();
    let g = Graph::from_edges(12, &edges).unwrap();
    let lo = sample(&g, 0.2, 3).unwrap();
    let hi = sample(&g, 0.7, 3).unwrap();
    for e in 0..g.edge_count() {
        assert!(!lo.is_open(e) || hi.is_open(e));
    }
    assert!(lo.open_count() <= hi.open_count());
    let c = clusters(&hi, Some(0)).unwrap();
    assert_eq!(c.sizes.iter().sum::<usize>(), 12);
    assert!(c.largest >= c.second);
    assert_eq!(c.root_size, Some(c.sizes[c.component_of[0] as usize]));
}

#[test]
fn sweep_is_monotone_and_bounded() {
    let spec = GeneratorSpec::new(Family::Torus, vec![24, 24], 0);
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    let s = giant_sweep(&spec, &grid, 40, 0.5, 8).unwrap();
    assert_eq!(s.rows.len(), grid.len());
    for w in s.rows.windows(2) {
        assert!(w[0].mean_largest_frac <= w[1].mean_largest_frac);
        assert!(w[0].prob_giant <= w[1].prob_giant);
    }
    assert_eq!(s.rows[0].prob_giant, 0.0);
    assert_eq!(s.rows[4].prob_giant, 1.0);
    assert!(giant_sweep(&spec, &[0.5], 10, 1.0, 0).is_err());
}

#[test]
fn tree_threshold_is_one_over_d_minus_one() {
    for d in [3usize, 4, 5] {
        let est = estimate_pc_tree_exact(d, 200, SurvivalCriterion::ScalingRatio, 1e-3).unwrap();
        let want = 1.0 / (d as f64 - 1.0);
        assert!((est.value - want).abs() < 0.005, "d={d}: {}", est.value);
        assert!(est.ci_low <= est.value && est.value <= est.ci_high);
    }
}

#[test]
fn square_lattice_threshold_near_half() {
    let spec = GeneratorSpec::new(Family::Torus, vec![64, 64], 0);
    let mut opts = PcOptions::new(Observable::GiantFraction, 60, 5);
    opts.alpha = 0.5;
    opts.tol = 0.01;
    let est = estimate_pc(&spec, &opts).unwrap();
    assert!((est.value - 0.5).abs() < 0.04, "{}", est.value);
}

#[test]
fn estimates_are_reproducible() {
    let spec = GeneratorSpec::new(Family::TreeBall, vec![3, 8], 0);
    let opts = PcOptions::new(Observable::RootSurvival, 200, 21);
    let a = estimate_pc(&spec, &opts).unwrap();
    let b = estimate_pc(&spec, &opts).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.bisection.steps.len(), b.bisection.steps.len());
}
