//! Escape probabilities and spectral estimates.

use pclocal::generators::{free_product_ball, torus, tree_ball};
use pclocal::spectral::{cheeger_bracket, lambda1_dirichlet, spectral_gap};
use pclocal::walks::{escape_exact, escape_mc, lemma_check, EscapeQuery};
use pclocal::{Graph, VertexSet};

fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

#[test]
fn root_escape_on_tree_is_gamblers_ruin() {
    // distance to the root is a walk with drift (d-2)/d towards the sphere
    for (d, r) in [(3usize, 4usize), (4, 5), (5, 3)] {
        let b = tree_ball(d, r).unwrap();
        let q = EscapeQuery::new(&b, VertexSet::from_vertices(b.graph().vertex_count(), [b.root()]));
        let ratio = 1.0 / (d as f64 - 1.0);
        // first step always goes out; ruin from level 1 with up/down odds (d-1):1
        let from_one = (1.0 - ratio) / (1.0 - ratio.powi(r as i32));
        assert!((escape_exact(&q).unwrap() - from_one).abs() < 1e-9, "d={d} r={r}");
    }
}

#[test]
fn monte_carlo_escape_within_four_sigma() {
    let b = free_product_ball(5, 4).unwrap();
    let n = b.graph().vertex_count();
    let mut q = EscapeQuery::new(&b, VertexSet::from_vertices(n, [b.root()]));
    q.trials = 20_000;
    q.seed = 3;
    let exact = escape_exact(&q).unwrap();
    let mc = escape_mc(&q).unwrap();
    assert_eq!(mc.censored, 0);
    assert!(
        (mc.estimate - exact).abs() <= 4.0 * mc.stderr.max(1e-9),
        "{} vs {exact}",
        mc.estimate
    );
}

#[test]
fn escape_dominates_lambda1() {
    let b = tree_ball(4, 5).unwrap();
    let lam = lambda1_dirichlet(&b, 1e-10).unwrap();
    let n = b.graph().vertex_count();
    for set in [
        vec![b.root()],
        (0..5).collect::<Vec<_>>(),
        b.inner_ball(2).iter().collect(),
    ] {
        let q = EscapeQuery::new(&b, VertexSet::from_vertices(n, set));
        let rep = lemma_check(&q, &lam).unwrap();
        assert!(rep.escape >= rep.lambda1_lower);
    }
}

/// `1 - rho` for the distance-from-root chain killed at level `r`, by lazy
/// power iteration. The bottom eigenvector of a tree ball is radial.
fn radial_lambda1(d: usize, r: usize) -> f64 {
    let out = (d as f64 - 1.0) / d as f64;
    let mut x = vec![1.0; r];
    let mut rho = 0.0;
    for _ in 0..200_000 {
        let mut y = vec![0.0; r];
        for j in 0..r {
            let (up, down) = if j == 0 { (1.0, 0.0) } else { (out, 1.0 - out) };
            if j + 1 < r {
                y[j] += up * x[j + 1];
            }
            if j > 0 {
                y[j] += down * x[j - 1];
            }
            y[j] = 0.5 * (y[j] + x[j]);
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        rho = 2.0 * norm - 1.0;
        x = y.iter().map(|v| v / norm).collect();
    }
    1.0 - rho
}

#[test]
fn dirichlet_lambda1_matches_radial_chain() {
    // bottom of the spectrum of the 3-regular tree is 1 - 2 sqrt(2) / 3
    let limit = 1.0 - 2.0 * 2f64.sqrt() / 3.0;
    let mut prev = 1.0;
    for (d, r) in [(3usize, 2usize), (3, 4), (3, 8), (3, 12), (4, 6), (6, 4)] {
        let v = lambda1_dirichlet(&tree_ball(d, r).unwrap(), 1e-10).unwrap().value;
        let want = radial_lambda1(d, r);
        assert!((v - want).abs() < 1e-6, "d={d} r={r}: {v} vs {want}");
        if d == 3 {
            assert!(v < prev && v > limit, "r={r}: {v}");
            prev = v;
        }
    }
}

#[test]
fn cycle_and_torus_gaps() {
    // P on C_n has eigenvalues cos(2 pi j / n); C_9 is not bipartite
    let n = 9;
    let gap = spectral_gap(&cycle(n), 1e-10).unwrap().value;
    let want = 1.0 - (2.0 * std::f64::consts::PI / n as f64).cos();
    assert!((gap - want).abs() < 1e-6, "{gap} vs {want}");
    let t = torus(&[5, 5]).unwrap();
    let gap = spectral_gap(&t, 1e-10).unwrap().value;
    let want = (1.0 - (2.0 * std::f64::consts::PI / 5.0).cos()) / 2.0;
    assert!((gap - want).abs() < 1e-6, "{gap} vs {want}");
}

#[test]
fn cheeger_inequality_holds() {
    // d gap / 2 <= h <= d sqrt(2 gap) for d-regular graphs
    for g in [cycle(10), torus(&[4, 4]).unwrap()] {
        let d = g.regular_degree().unwrap() as f64;
        let h = cheeger_bracket(&g).unwrap().value;
        let gap = spectral_gap(&g, 1e-10).unwrap().value;
        assert!(
            d * gap / 2.0 <= h + 1e-9 && h <= d * (2.0 * gap).sqrt() + 1e-9,
            "h={h} gap={gap}"
        );
    }
    // C_10: cutting two edges isolates a path of five vertices
    assert!((cheeger_bracket(&cycle(10)).unwrap().value - 0.4).abs() < 1e-12);
}
