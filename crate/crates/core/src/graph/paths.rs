use super::{Girth, Graph, VertexSet};
use crate::error::{Error, Result};

/// Non-backtracking path census from one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathCount {
    /// Paths whose vertices after the start all avoid the given set.
    pub count: u64,
    /// All non-backtracking paths of the requested length; `(d-1)^L` in a
    /// `d`-regular graph.
    pub total: u64,
}

/// Counts non-backtracking paths of length `len` from `u` whose first step is
/// not `forbidden_first`, and how many of them avoid `avoid`.
///
/// `u` itself is not tested against `avoid`; callers that need `u` outside
/// the set check it separately. The enumeration is a plain depth-first walk.
pub fn count_nb_paths_avoiding(
    g: &Graph,
    u: usize,
    forbidden_first: usize,
    len: usize,
    avoid: &VertexSet,
) -> Result<PathCount> {
    g.check_vertex(u)?;
    if !g.has_edge(u, forbidden_first) {
        return Err(Error::NotAdjacent(u, forbidden_first));
    }
    let mut count = 0u64;
    let mut total = 0u64;
    if len == 0 {
        return Ok(PathCount { count: 1, total: 1 });
    }
    // (vertex, previous vertex, depth, all vertices so far avoid the set)
    let mut stack: Vec<(usize, usize, usize, bool)> = vec![(u, forbidden_first, 0, true)];
    while let Some((v, prev, depth, clean)) = stack.pop() {
        if depth == len {
            total += 1;
            count += clean as u64;
            continue;
        }
        for a in g.neighbors(v) {
            let w = a.vertex as usize;
            if w == prev {
                continue;
            }
            stack.push((w, v, depth + 1, clean && !avoid.contains(w)));
        }
    }
    Ok(PathCount { count, total })
}

/// As [`count_nb_paths_avoiding`], refusing lengths beyond the tree radius
/// `ceil(g/2) - 1` implied by the girth.
pub fn count_nb_paths_avoiding_checked(
    g: &Graph,
    u: usize,
    forbidden_first: usize,
    len: usize,
    avoid: &VertexSet,
    girth: Girth,
) -> Result<PathCount> {
    if let Some(limit) = girth.tree_radius() {
        if len > limit {
            return Err(Error::BeyondTreeRadius { len, limit });
        }
    }
    count_nb_paths_avoiding(g, u, forbidden_first, len, avoid)
}
