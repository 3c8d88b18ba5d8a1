use crate::error::{Error, Result};
use crate::graph::Graph;

/// Mixed-radix indexing, first coordinate fastest.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = Vec::with_capacity(dims.len());
    let mut acc = 1;
    for &d in dims {
        s.push(acc);
        acc *= d;
    }
    s
}

fn coords(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (c, &d) in out.iter_mut().zip(dims) {
        *c = index % d;
        index /= d;
    }
}

/// How one axis is closed up.
#[derive(Clone, Copy)]
enum Axis {
    /// Path of the given length.
    Open(usize),
    /// Cycle of the given length; lengths 1 and 2 degenerate to a point and a
    /// single edge.
    Periodic(usize),
}

impl Axis {
    fn len(self) -> usize {
        match self {
            Axis::Open(n) | Axis::Periodic(n) => n,
        }
    }
}

fn product(axes: &[Axis]) -> Result<Graph> {
    let dims: Vec<usize> = axes.iter().map(|a| a.len()).collect();
    let n: usize = dims.iter().product();
    let st = strides(&dims);
    let mut c = vec![0; dims.len()];
    let mut edges = Vec::new();
    for v in 0..n {
        coords(v, &dims, &mut c);
        for (i, axis) in axes.iter().enumerate() {
            match *axis {
                Axis::Open(len) | Axis::Periodic(len) if c[i] + 1 < len => {
                    edges.push((v, v + st[i]));
                }
                Axis::Periodic(len) if len >= 3 => {
                    // wrap from the last coordinate back to 0
                    edges.push((v - c[i] * st[i], v));
                }
                _ => {}
            }
        }
    }
    edges.sort_unstable();
    Graph::from_edges(n, &edges)
}

/// Cartesian product of cycles `C_{s_1} x ... x C_{s_k}`.
pub fn torus(sides: &[usize]) -> Result<Graph> {
    if sides.is_empty() {
        return Err(Error::param("sides", "at least one side required"));
    }
    if let Some(&s) = sides.iter().find(|&&s| s < 3) {
        return Err(Error::param("sides", format!("torus side must be >= 3, got {s}")));
    }
    let axes: Vec<Axis> = sides.iter().map(|&s| Axis::Periodic(s)).collect();
    product(&axes)
}

/// Free-boundary box `{0..L-1}^k` times cycles of the given sides: a finite
/// window of `Z^k x Z_{s_1} x ...`. A side of 1 adds nothing and a side of 2
/// adds a single edge.
pub fn slab(k: usize, side: usize, periodic_sides: &[usize]) -> Result<Graph> {
    if k < 1 {
        return Err(Error::param("k", "need at least one free dimension"));
    }
    if side < 2 {
        return Err(Error::param("L", format!("box side must be >= 2, got {side}")));
    }
    if periodic_sides.contains(&0) {
        return Err(Error::param("periodic_sides", "sides must be >= 1"));
    }
    let mut axes = vec![Axis::Open(side); k];
    axes.extend(periodic_sides.iter().map(|&s| Axis::Periodic(s)));
    product(&axes)
}

/// Vertices on the two faces `x_0 = 0` and `x_0 = L - 1` of a slab.
pub fn slab_faces(k: usize, side: usize, periodic_sides: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut dims = vec![side; k];
    dims.extend_from_slice(periodic_sides);
    let n: usize = dims.iter().product();
    let low = (0..n).filter(|v| v % side == 0).collect();
    let high = (0..n).filter(|v| v % side == side - 1).collect();
    (low, high)
}

/// Triangular lattice on an `n x n` torus: offsets `(±1, 0)`, `(0, ±1)` and
/// `±(1, 1)`.
pub fn triangular_torus(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("n", format!("side must be >= 3, got {n}")));
    }
    let id = |x: usize, y: usize| (x % n) + n * (y % n);
    let mut edges = Vec::with_capacity(3 * n * n);
    for y in 0..n {
        for x in 0..n {
            let v = id(x, y);
            for w in [id(x + 1, y), id(x, y + 1), id(x + 1, y + 1)] {
                edges.push((v.min(w), v.max(w)));
            }
        }
    }
    edges.sort_unstable();
    Graph::from_edges(n * n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{girth, Girth};

    #[test]
    fn tori() {
        let c5 = torus(&[5]).unwrap();
        assert_eq!((c5.vertex_count(), c5.edge_count()), (5, 5));
        assert_eq!(girth(&c5), Girth::Finite(5));
        let t = torus(&[4, 4]).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (16, 32));
        assert_eq!(t.regular_degree(), Some(4));
        let t3 = torus(&[3, 3, 3]).unwrap();
        assert_eq!(t3.vertex_count(), 27);
        assert_eq!(t3.regular_degree(), Some(6));
        assert_eq!(girth(&torus(&[5, 5]).unwrap()), Girth::Finite(4));
        assert_eq!(girth(&torus(&[7, 6]).unwrap()), Girth::Finite(4));
        assert!(torus(&[2, 5]).is_err());
        assert!(torus(&[]).is_err());
    }

    #[test]
    fn slabs() {
        let grid = slab(2, 3, &[]).unwrap();
        assert_eq!((grid.vertex_count(), grid.edge_count()), (9, 12));
        let cyl = slab(1, 4, &[3]).unwrap();
        // 4x3 cylinder: 3 paths of 3 edges plus 4 triangles
        assert_eq!((cyl.vertex_count(), cyl.edge_count()), (12, 9 + 12));
        let thin = slab(2, 3, &[2]).unwrap();
        assert_eq!(thin.edge_count(), 2 * 12 + 9);
        assert_eq!(slab(2, 3, &[1]).unwrap(), grid);
        let big = slab(2, 64, &[8]).unwrap();
        assert_eq!(big.vertex_count(), 64 * 64 * 8);
        assert_eq!(big.max_degree(), 6);
        let interior = 10 + 64 * 10 + 64 * 64 * 3;
        assert_eq!(big.degree(interior), 6);
        assert!(slab(0, 3, &[]).is_err());
        assert!(slab(2, 1, &[]).is_err());
    }

    #[test]
    fn slab_faces_are_opposite() {
        let (lo, hi) = slab_faces(2, 4, &[3]);
        assert_eq!(lo.len(), 12);
        assert_eq!(hi.len(), 12);
        assert!(lo.iter().all(|v| v % 4 == 0));
    }

    #[test]
    fn triangular() {
        let t3 = triangular_torus(3).unwrap();
        assert_eq!((t3.vertex_count(), t3.edge_count()), (9, 27));
        assert_eq!(t3.regular_degree(), Some(6));
        assert_eq!(triangular_torus(4).unwrap().edge_count(), 48);
        assert_eq!(girth(&triangular_torus(5).unwrap()), Girth::Finite(3));
        assert!(triangular_torus(2).is_err());
    }
}
