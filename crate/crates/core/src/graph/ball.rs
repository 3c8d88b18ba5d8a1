use super::{Graph, VertexSet};
use crate::error::{Error, Result};
use crate::par;

/// A radius-`R` ball with its root, distance labels and boundary sphere.
///
/// The root is always vertex `0` of [`RootedBall::graph`] and vertices are
/// numbered in BFS order, so `dist` is non-decreasing in the vertex id.
#[derive(Clone, Debug)]
pub struct RootedBall {
    graph: Graph,
    radius: usize,
    dist: Vec<u32>,
    boundary: VertexSet,
    origin: Vec<usize>,
}

impl RootedBall {
    /// Wraps a connected graph whose vertices all lie within `radius` of
    /// vertex 0. The vertex numbering must already be BFS order from 0.
    pub(crate) fn from_bfs_graph(graph: Graph, radius: usize) -> Result<Self> {
        let dist = graph.bfs_distances(0);
        if dist.iter().any(|&d| d as usize > radius) {
            return Err(Error::param("radius", "vertex beyond radius"));
        }
        if dist.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("graph", "vertices not numbered in BFS order"));
        }
        let boundary = VertexSet::from_vertices(
            graph.vertex_count(),
            dist.iter()
                .enumerate()
                .filter(|&(_, &d)| d as usize == radius)
                .map(|(v, _)| v),
        );
        let origin = (0..graph.vertex_count()).collect();
        Ok(RootedBall {
            graph,
            radius,
            dist,
            boundary,
            origin,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn dist(&self, v: usize) -> usize {
        self.dist[v] as usize
    }

    pub fn distances(&self) -> &[u32] {
        &self.dist
    }

    pub fn boundary(&self) -> &VertexSet {
        &self.boundary
    }

    pub fn is_interior(&self, v: usize) -> bool {
        (self.dist[v] as usize) < self.radius
    }

    /// Number of vertices at distance `< radius`.
    pub fn interior_count(&self) -> usize {
        self.dist.partition_point(|&d| (d as usize) < self.radius)
    }

    /// Vertex id in the graph the ball was cut from.
    pub fn origin(&self, v: usize) -> usize {
        self.origin[v]
    }

    /// All vertices within distance `r` of the root, as a set.
    pub fn inner_ball(&self, r: usize) -> VertexSet {
        VertexSet::from_vertices(
            self.graph.vertex_count(),
            0..self.dist.partition_point(|&d| d as usize <= r),
        )
    }

    /// Degree shared by all interior vertices, if there is one.
    pub fn interior_degree(&self) -> Option<usize> {
        let k = self.interior_count();
        if k == 0 {
            return None;
        }
        let d = self.graph.degree(0);
        (1..k).all(|v| self.graph.degree(v) == d).then_some(d)
    }
}

/// The ball `B(v, R)`: the subgraph induced on vertices within distance `R`.
pub fn ball(g: &Graph, v: usize, radius: usize) -> Result<RootedBall> {
    g.check_vertex(v)?;
    let n = g.vertex_count();
    let mut local = vec![u32::MAX; n];
    let mut order = vec![v];
    let mut dist = vec![0u32];
    local[v] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        let du = dist[head];
        head += 1;
        if du as usize == radius {
            continue;
        }
        for a in g.neighbors(u) {
            let w = a.vertex as usize;
            if local[w] == u32::MAX {
                local[w] = order.len() as u32;
                order.push(w);
                dist.push(du + 1);
            }
        }
    }
    let mut edges = Vec::new();
    for (i, &u) in order.iter().enumerate() {
        for a in g.neighbors(u) {
            let j = local[a.vertex as usize];
            if j != u32::MAX && (i as u32) < j {
                edges.push((i, j as usize));
            }
        }
    }
    edges.sort_unstable();
    let graph = Graph::from_edges_multi(order.len(), &edges)?;
    let boundary = VertexSet::from_vertices(
        order.len(),
        dist.iter()
            .enumerate()
            .filter(|&(_, &d)| d as usize == radius)
            .map(|(i, _)| i),
    );
    Ok(RootedBall {
        graph,
        radius,
        dist,
        boundary,
        origin: order,
    })
}

/// Whether the induced ball `B(v, R)` is a tree, checked by counting edges.
/// `scratch` must be all `u32::MAX` on entry and is restored on exit.
fn ball_is_tree(g: &Graph, v: usize, radius: usize, scratch: &mut [u32]) -> bool {
    let mut order = vec![v];
    scratch[v] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let du = scratch[u];
        if du as usize == radius {
            continue;
        }
        for a in g.neighbors(u) {
            let w = a.vertex as usize;
            if scratch[w] == u32::MAX {
                scratch[w] = du + 1;
                order.push(w);
            }
        }
    }
    // each induced edge is seen once from each endpoint
    let twice_edges: usize = order
        .iter()
        .map(|&u| {
            g.neighbors(u)
                .iter()
                .filter(|a| scratch[a.vertex as usize] != u32::MAX)
                .count()
        })
        .sum();
    for &u in &order {
        scratch[u] = u32::MAX;
    }
    twice_edges == 2 * (order.len() - 1)
}

/// Fraction of vertices whose radius-`R` ball is acyclic.
///
/// For a `d`-regular graph an acyclic `R`-ball is exactly the `R`-ball of the
/// `d`-regular tree, so this is the local-convergence statistic towards
/// `T_d`.
pub fn local_tree_fraction(g: &Graph, radius: usize) -> Result<f64> {
    if g.regular_degree().is_none() {
        return Err(Error::NotRegular);
    }
    let n = g.vertex_count();
    const CHUNK: usize = 1024;
    let counts = par::map_range(n.div_ceil(CHUNK), |c| {
        let mut scratch = vec![u32::MAX; n];
        (c * CHUNK..((c + 1) * CHUNK).min(n))
            .filter(|&v| ball_is_tree(g, v, radius, &mut scratch))
            .count()
    });
    Ok(counts.iter().sum::<usize>() as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn ball_radius_zero_is_root_only() {
        let b = ball(&cycle(4), 2, 0).unwrap();
        assert_eq!(b.graph().vertex_count(), 1);
        assert_eq!(b.boundary().iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(b.origin(0), 2);
    }

    #[test]
    fn ball_of_k4() {
        let b = ball(&complete(4), 1, 1).unwrap();
        assert_eq!(b.graph().vertex_count(), 4);
        assert_eq!(b.graph().edge_count(), 6);
        assert_eq!(b.boundary().len(), 3);
        assert_eq!(b.interior_count(), 1);
    }

    #[test]
    fn ball_invariants_on_cycle() {
        let b = ball(&cycle(20), 5, 3).unwrap();
        assert_eq!(b.graph().vertex_count(), 7);
        for v in 1..7 {
            let dv = b.dist(v);
            assert!(dv <= 3);
            assert!(b
                .graph()
                .neighbors(v)
                .iter()
                .any(|a| b.dist(a.vertex as usize) + 1 == dv));
        }
        assert!(ball(&cycle(4), 9, 1).is_err());
    }

    #[test]
    fn local_tree_fraction_examples() {
        assert_eq!(local_tree_fraction(&cycle(12), 5).unwrap(), 1.0);
        assert_eq!(local_tree_fraction(&cycle(11), 5).unwrap(), 0.0);
        assert_eq!(local_tree_fraction(&cycle(11), 2).unwrap(), 1.0);
        assert_eq!(local_tree_fraction(&cycle(10), 5).unwrap(), 0.0);
        assert_eq!(local_tree_fraction(&complete(4), 1).unwrap(), 0.0);
        assert!(matches!(local_tree_fraction(&path(5), 1), Err(Error::NotRegular)));
    }
}
