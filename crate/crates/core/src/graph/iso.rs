use super::RootedBall;
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Colors for the vertices of both balls, refined jointly so that equal
/// colors mean equal local views. Starts from `(distance, degree)` and
/// iterates neighbor-multiset refinement until the partition is stable.
fn refine(a: &RootedBall, b: &RootedBall) -> (Vec<u32>, Vec<u32>) {
    let seed = |r: &RootedBall| -> Vec<(u32, u32)> {
        (0..r.graph().vertex_count())
            .map(|v| (r.dist(v) as u32, r.graph().degree(v) as u32))
            .collect()
    };
    let mut table: HashMap<(u32, u32), u32> = HashMap::new();
    let mut intern = |key: (u32, u32)| {
        let next = table.len() as u32;
        *table.entry(key).or_insert(next)
    };
    let mut ca: Vec<u32> = seed(a).into_iter().map(&mut intern).collect();
    let mut cb: Vec<u32> = seed(b).into_iter().map(&mut intern).collect();
    let mut classes = table.len();
    loop {
        let mut table: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
        let mut step = |r: &RootedBall, colors: &[u32]| -> Vec<u32> {
            (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<u32> = r
                        .graph()
                        .neighbors(v)
                        .iter()
                        .map(|x| colors[x.vertex as usize])
                        .collect();
                    nb.sort_unstable();
                    let next = table.len() as u32;
                    *table.entry((colors[v], nb)).or_insert(next)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let now = table.len();
        ca = na;
        cb = nb;
        if now == classes {
            return (ca, cb);
        }
        classes = now;
    }
}

/// Whether two balls are isomorphic as rooted graphs.
///
/// Exact backtracking search over BFS order, pruned by jointly refined
/// `(distance, degree)` colors. Meant for balls up to roughly `10^4`
/// vertices; color refinement settles trees without any backtracking.
pub fn rooted_isomorphic(a: &RootedBall, b: &RootedBall) -> Result<bool> {
    if a.radius() != b.radius() {
        return Err(Error::RadiusMismatch(a.radius(), b.radius()));
    }
    let (ga, gb) = (a.graph(), b.graph());
    let n = ga.vertex_count();
    if n != gb.vertex_count() || ga.edge_count() != gb.edge_count() {
        return Ok(false);
    }
    let (ca, cb) = refine(a, b);
    let histogram = |c: &[u32]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    if histogram(&ca) != histogram(&cb) || ca[0] != cb[0] {
        return Ok(false);
    }
    let mut map = vec![usize::MAX; n];
    let mut inv = vec![usize::MAX; n];
    map[0] = 0;
    inv[0] = 0;
    Ok(extend(a, b, &ca, &cb, 1, &mut map, &mut inv))
}

fn consistent(a: &RootedBall, b: &RootedBall, map: &[usize], inv: &[usize], v: usize, x: usize) -> bool {
    // every already-mapped neighbor of v must map to a neighbor of x, with
    // matching multiplicity, and x must have no extra mapped neighbors
    let (ga, gb) = (a.graph(), b.graph());
    let mut mapped_a: Vec<usize> = ga
        .neighbors(v)
        .iter()
        .map(|n| map[n.vertex as usize])
        .filter(|&m| m != usize::MAX)
        .collect();
    let inverse_mapped = gb
        .neighbors(x)
        .iter()
        .filter(|n| inv[n.vertex as usize] != usize::MAX)
        .count();
    if mapped_a.len() != inverse_mapped {
        return false;
    }
    mapped_a.sort_unstable();
    let mut nb: Vec<usize> = gb.neighbors(x).iter().map(|n| n.vertex as usize).collect();
    nb.sort_unstable();
    mapped_a.iter().all(|m| nb.binary_search(m).is_ok())
}

/// Depth-first extension of the partial map, one BFS-ordered vertex per
/// level, with an explicit stack of remaining candidates per level.
fn extend(
    a: &RootedBall,
    b: &RootedBall,
    ca: &[u32],
    cb: &[u32],
    start: usize,
    map: &mut [usize],
    inv: &mut [usize],
) -> bool {
    let n = a.graph().vertex_count();
    let candidates = |v: usize, map: &[usize], inv: &[usize]| -> Vec<usize> {
        // BFS order: v has a parent among 0..v, already mapped
        let parent = a
            .graph()
            .neighbors(v)
            .iter()
            .map(|x| x.vertex as usize)
            .find(|&p| p < v)
            .expect("BFS-ordered ball");
        let mut c: Vec<usize> = b
            .graph()
            .neighbors(map[parent])
            .iter()
            .map(|x| x.vertex as usize)
            .filter(|&x| inv[x] == usize::MAX && cb[x] == ca[v])
            .collect();
        c.dedup();
        c.reverse();
        c
    };
    if start == n {
        return true;
    }
    let mut stack: Vec<Vec<usize>> = vec![candidates(start, map, inv)];
    loop {
        let v = start + stack.len() - 1;
        // undo the previous choice at this level, if any
        if map[v] != usize::MAX {
            inv[map[v]] = usize::MAX;
            map[v] = usize::MAX;
        }
        let level = stack.last_mut().unwrap();
        let mut placed = false;
        while let Some(x) = level.pop() {
            if consistent(a, b, map, inv, v, x) {
                map[v] = x;
                inv[x] = v;
                placed = true;
                break;
            }
        }
        if !placed {
            stack.pop();
            if stack.is_empty() {
                return false;
            }
            continue;
        }
        if v + 1 == n {
            return true;
        }
        let next = candidates(v + 1, map, inv);
        stack.push(next);
    }
}
