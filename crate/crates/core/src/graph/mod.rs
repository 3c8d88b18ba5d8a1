//! Immutable undirected graphs and the structural queries built on them.

mod ball;
mod girth;
pub mod io;
mod iso;
mod paths;

pub use ball::{ball, local_tree_fraction, RootedBall};
pub use girth::{girth, Girth};
pub use iso::rooted_isomorphic;
pub use paths::{count_nb_paths_avoiding, count_nb_paths_avoiding_checked, PathCount};

use crate::error::{Error, Result};
use bitvec::prelude::*;
use std::collections::VecDeque;

/// One adjacency entry: the neighbor and the id of the connecting edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Adj {
    pub vertex: u32,
    pub edge: u32,
}

/// Undirected graph in compressed adjacency form.
///
/// Vertices are `0..n`, edges `0..m`. Each adjacency list is sorted by
/// neighbor id (then edge id), and every edge is stored with canonical
/// endpoints `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<Adj>,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Builds a simple graph. Self-loops and parallel edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let g = Self::build(n, edges)?;
        for v in 0..n {
            let nb = g.neighbors(v);
            if let Some(w) = nb.windows(2).find(|w| w[0].vertex == w[1].vertex) {
                return Err(Error::ParallelEdge(v, w[0].vertex as usize));
            }
        }
        Ok(g)
    }

    /// Builds a multigraph; parallel edges are kept, self-loops still rejected.
    pub fn from_edges_multi(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, edges)
    }

    fn build(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > u32::MAX as usize || edges.len() > u32::MAX as usize {
            return Err(Error::TooLarge {
                what: "graph",
                size: n.max(edges.len()),
                limit: u32::MAX as usize,
            });
        }
        let mut degree = vec![0usize; n];
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            degree[u] += 1;
            degree[v] += 1;
            canon.push((u.min(v) as u32, u.max(v) as u32));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut adj = vec![Adj { vertex: 0, edge: 0 }; offsets[n]];
        for (e, &(u, v)) in canon.iter().enumerate() {
            let e = e as u32;
            adj[fill[u as usize]] = Adj { vertex: v, edge: e };
            fill[u as usize] += 1;
            adj[fill[v as usize]] = Adj { vertex: u, edge: e };
            fill[v as usize] += 1;
        }
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok(Graph {
            offsets,
            adj,
            edges: canon,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[Adj] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Canonical endpoints `(u, v)` with `u <= v`.
    #[inline]
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        (u as usize, v as usize)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    /// Id of some edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let nb = self.neighbors(u);
        let i = nb.partition_point(|a| (a.vertex as usize) < v);
        nb.get(i).filter(|a| a.vertex as usize == v).map(|a| a.edge as usize)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }

    /// Common degree if the graph is regular (and non-empty).
    pub fn regular_degree(&self) -> Option<usize> {
        if self.vertex_count() == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.vertex_count()).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// BFS distances from `source`; unreachable vertices get `u32::MAX`.
    pub fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for a in self.neighbors(u) {
                let w = a.vertex as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs_distances(0).iter().all(|&d| d != u32::MAX)
    }

    /// Two-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for a in self.neighbors(u) {
                    let w = a.vertex as usize;
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }
}

/// Dense bit set over the vertices `0..capacity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    bits: BitVec,
    len: usize,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet {
            bits: bitvec![0; capacity],
            len: 0,
        }
    }

    pub fn from_vertices(capacity: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(capacity);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.bits[v];
        if fresh {
            self.bits.set(v, true);
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.bits[v];
        if present {
            self.bits.set(v, false);
            self.len -= 1;
        }
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.bits.len() && self.bits[v]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }
}
