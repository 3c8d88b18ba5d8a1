//! Dense symmetric eigensolver (cyclic Jacobi) and dense operator builders.
//!
//! Independent of the iterative estimators; intended for graphs with at most
//! a few hundred vertices.

use crate::graph::{Graph, RootedBall};

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }
}

/// Simple-random-walk transition matrix of a regular graph.
pub fn transition_matrix(g: &Graph) -> DenseMatrix {
    let n = g.vertex_count();
    let mut m = DenseMatrix::zeros(n);
    for u in 0..n {
        let w = 1.0 / g.degree(u) as f64;
        for a in g.neighbors(u) {
            let v = a.vertex as usize;
            m.set(u, v, m.get(u, v) + w);
        }
    }
    m
}

/// Symmetrized transition matrix `D^{1/2} P D^{-1/2}` (same spectrum as `P`).
pub fn symmetric_transition_matrix(g: &Graph) -> DenseMatrix {
    let n = g.vertex_count();
    let mut m = DenseMatrix::zeros(n);
    for u in 0..n {
        for a in g.neighbors(u) {
            let v = a.vertex as usize;
            let w = 1.0 / ((g.degree(u) * g.degree(v)) as f64).sqrt();
            m.set(u, v, m.get(u, v) + w);
        }
    }
    m
}

/// Walk matrix restricted to the interior of a ball (boundary absorbing).
pub fn dirichlet_matrix(b: &RootedBall) -> DenseMatrix {
    let k = b.interior_count();
    let g = b.graph();
    let mut m = DenseMatrix::zeros(k);
    for u in 0..k {
        for a in g.neighbors(u) {
            let v = a.vertex as usize;
            if v < k {
                let w = 1.0 / ((g.degree(u) * g.degree(v)) as f64).sqrt();
                m.set(u, v, m.get(u, v) + w);
            }
        }
    }
    m
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations.
pub fn symmetric_eigenvalues(mut a: DenseMatrix) -> Vec<f64> {
    let n = a.n;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).powi(2))
            .sum();
        let scale: f64 = a.data.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn complete_graph_spectrum() {
        let ev = symmetric_eigenvalues(transition_matrix(&complete(4)));
        assert_abs_diff_eq!(ev[3], 1.0, epsilon = 1e-12);
        for &x in &ev[..3] {
            assert_abs_diff_eq!(x, -1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cycle_spectrum_closed_form() {
        for n in 3..=20 {
            let ev = symmetric_eigenvalues(transition_matrix(&cycle(n)));
            let mut expect: Vec<f64> = (0..n)
                .map(|j| (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
                .collect();
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in ev.iter().zip(&expect) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn path_dirichlet_closed_form() {
        // interior of a radius-r ball in a long cycle is a path of 2r - 1
        // vertices; its walk matrix has top eigenvalue cos(pi / 2r)
        for r in 2..=8 {
            let b = crate::graph::ball(&cycle(4 * r), 0, r).unwrap();
            let ev = symmetric_eigenvalues(dirichlet_matrix(&b));
            let top = *ev.last().unwrap();
            assert_abs_diff_eq!(top, (std::f64::consts::PI / (2 * r) as f64).cos(), epsilon = 1e-12);
        }
    }
}
