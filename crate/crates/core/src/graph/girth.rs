use super::Graph;
use crate::par;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};

/// Length of the shortest cycle, or `Acyclic` for forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth {
    Finite(usize),
    Acyclic,
}

impl Girth {
    pub fn length(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Acyclic => None,
        }
    }

    /// Largest `L` such that every `L`-ball is a tree: `ceil(g/2) - 1`.
    /// `None` means unbounded.
    pub fn tree_radius(self) -> Option<usize> {
        self.length().map(|g| g.div_ceil(2) - 1)
    }
}

/// Exact girth by breadth-first search from every vertex.
///
/// A non-tree edge met between BFS levels `a` and `b` closes a walk of length
/// `a + b + 1` through the source; minimizing over all sources gives the
/// girth. Each search stops once `2 * level + 1` reaches the best cycle found
/// so far.
pub fn girth(g: &Graph) -> Girth {
    let n = g.vertex_count();
    let best = AtomicUsize::new(usize::MAX);
    const CHUNK: usize = 256;
    par::map_range(n.div_ceil(CHUNK), |c| {
        let mut dist = vec![u32::MAX; n];
        let mut via = vec![u32::MAX; n];
        let mut queue: Vec<usize> = Vec::new();
        for s in c * CHUNK..((c + 1) * CHUNK).min(n) {
            queue.clear();
            queue.push(s);
            dist[s] = 0;
            let mut head = 0;
            'search: while head < queue.len() {
                let u = queue[head];
                head += 1;
                let du = dist[u] as usize;
                if 2 * du + 1 >= best.load(Ordering::Relaxed) {
                    break;
                }
                for a in g.neighbors(u) {
                    if a.edge == via[u] {
                        continue;
                    }
                    let w = a.vertex as usize;
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = a.edge;
                        queue.push(w);
                    } else {
                        let len = du + dist[w] as usize + 1;
                        best.fetch_min(len, Ordering::Relaxed);
                        if len == 2 * du + 1 {
                            break 'search;
                        }
                    }
                }
            }
            for &u in &queue {
                dist[u] = u32::MAX;
                via[u] = u32::MAX;
            }
        }
    });
    match best.into_inner() {
        usize::MAX => Girth::Acyclic,
        len => Girth::Finite(len),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    /// Shortest cycle by exhaustive DFS over simple paths.
    fn brute_girth(g: &Graph) -> Option<usize> {
        fn dfs(g: &Graph, start: usize, u: usize, via: u32, len: usize, on: &mut [bool], best: &mut Option<usize>) {
            for a in g.neighbors(u) {
                if a.edge == via {
                    continue;
                }
                let w = a.vertex as usize;
                if w == start {
                    let c = len + 1;
                    if best.is_none_or(|b| c < b) {
                        *best = Some(c);
                    }
                } else if !on[w] && w > start {
                    on[w] = true;
                    dfs(g, start, w, a.edge, len + 1, on, best);
                    on[w] = false;
                }
            }
        }
        let mut best = None;
        let mut on = vec![false; g.vertex_count()];
        for s in 0..g.vertex_count() {
            on[s] = true;
            dfs(g, s, s, u32::MAX, 0, &mut on, &mut best);
            on[s] = false;
        }
        best
    }

    #[test]
    fn small_examples() {
        assert_eq!(girth(&complete(4)), Girth::Finite(3));
        assert_eq!(girth(&cycle(4)), Girth::Finite(4));
        assert_eq!(girth(&cycle(9)), Girth::Finite(9));
        assert_eq!(girth(&path(6)), Girth::Acyclic);
        assert_eq!(girth(&Graph::from_edges(0, &[]).unwrap()), Girth::Acyclic);
        let multi = Graph::from_edges_multi(3, &[(0, 1), (1, 2), (0, 1)]).unwrap();
        assert_eq!(girth(&multi), Girth::Finite(2));
    }

    #[test]
    fn tree_radius() {
        assert_eq!(Girth::Finite(7).tree_radius(), Some(3));
        assert_eq!(Girth::Finite(8).tree_radius(), Some(3));
        assert_eq!(Girth::Finite(3).tree_radius(), Some(1));
        assert_eq!(Girth::Acyclic.tree_radius(), None);
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (1usize..=12).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            proptest::collection::vec(any::<bool>(), m).prop_map(move |mask| {
                let edges: Vec<_> = pairs
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &keep)| keep)
                    .map(|(&e, _)| e)
                    .collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn agrees_with_brute_force(g in small_graph()) {
            prop_assert_eq!(girth(&g).length(), brute_girth(&g));
        }
    }
}
