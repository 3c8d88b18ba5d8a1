use crate::error::{Error, Result};
use crate::graph::{Graph, RootedBall};

/// The radius-`R` ball of the `d`-regular tree.
///
/// The root has `d` children and every other non-leaf vertex `d - 1`.
/// Vertices are numbered level by level, children in order of their parent.
pub fn tree_ball(d: usize, radius: usize) -> Result<RootedBall> {
    if d < 3 {
        return Err(Error::param("d", format!("tree degree must be >= 3, got {d}")));
    }
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut next_id = 1;
    for depth in 0..radius {
        let kids = if depth == 0 { d } else { d - 1 };
        let mut next = Vec::with_capacity(level.len() * kids);
        for &p in &level {
            for _ in 0..kids {
                edges.push((p, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        level = next;
    }
    RootedBall::from_bfs_graph(Graph::from_edges(next_id, &edges)?, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{girth, Girth};

    #[test]
    fn sizes() {
        let b = tree_ball(3, 1).unwrap();
        assert_eq!(b.graph().vertex_count(), 4);
        assert_eq!(b.graph().edge_count(), 3);
        assert_eq!(tree_ball(3, 2).unwrap().graph().vertex_count(), 10);
        assert_eq!(tree_ball(4, 3).unwrap().graph().vertex_count(), 53);
        for (d, r) in [(3usize, 6u32), (5, 4), (6, 3)] {
            let n = 1 + d * ((d - 1).pow(r) - 1) / (d - 2);
            assert_eq!(tree_ball(d, r as usize).unwrap().graph().vertex_count(), n);
        }
        assert!(tree_ball(2, 3).is_err());
    }

    #[test]
    fn acyclic_with_full_interior_degree() {
        let b = tree_ball(3, 4).unwrap();
        assert_eq!(girth(b.graph()), Girth::Acyclic);
        assert_eq!(b.interior_degree(), Some(3));
        assert_eq!(b.boundary().len(), 3 * 8);
        assert_eq!(tree_ball(3, 0).unwrap().boundary().len(), 1);
    }
}
