use crate::error::{Error, Result};
use crate::graph::{Graph, RootedBall};
use crate::rng;
use std::collections::HashMap;

/// Vertex cap for Cayley balls; the ball grows like `5^R`.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// Element of `Z * Z * Z_k = <a, b, c | c^k = 1>` in normal form.
///
/// A normal form is a sequence of syllables `(factor, exponent)` with
/// consecutive syllables from different factors and non-zero exponents;
/// `c`-exponents are reduced into `(-k/2, k/2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    syllables: Vec<(u8, i32)>,
}

/// Generators in a fixed order: `a, a^-1, b, b^-1, c, c^-1`.
pub const GENERATORS: [(u8, i32); 6] = [(0, 1), (0, -1), (1, 1), (1, -1), (2, 1), (2, -1)];

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn syllables(&self) -> &[(u8, i32)] {
        &self.syllables
    }

    /// Word length in the generators `a^±1, b^±1, c^±1`.
    pub fn length(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    fn reduce_c(e: i32, k: u32) -> i32 {
        let k = k as i32;
        let r = e.rem_euclid(k);
        if r > k / 2 {
            r - k
        } else {
            r
        }
    }

    /// Right multiplication by the power `x^exp` of factor `x`.
    pub fn mul_syllable(&mut self, factor: u8, exp: i32, k: u32) {
        let exp = if factor == 2 { Self::reduce_c(exp, k) } else { exp };
        if exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.0 == factor => {
                let e = last.1 + exp;
                let e = if factor == 2 { Self::reduce_c(e, k) } else { e };
                if e == 0 {
                    self.syllables.pop();
                } else {
                    last.1 = e;
                }
            }
            _ => self.syllables.push((factor, exp)),
        }
    }

    pub fn mul(&self, other: &Word, k: u32) -> Word {
        let mut w = self.clone();
        for &(f, e) in &other.syllables {
            w.mul_syllable(f, e, k);
        }
        w
    }

    pub fn inverse(&self, k: u32) -> Word {
        let mut w = Word::identity();
        for &(f, e) in self.syllables.iter().rev() {
            w.mul_syllable(f, -e, k);
        }
        w
    }
}

/// Upper bound on the `R`-ball of the 6-regular tree, saturating.
fn tree_ball_size(radius: usize) -> usize {
    let mut total: usize = 1;
    let mut sphere: usize = 6;
    for _ in 0..radius {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(5);
    }
    total
}

/// Radius-`R` ball around the identity in the Cayley graph of
/// `Z * Z * Z_k` with generators `a^±1, b^±1, c^±1`.
///
/// The full Cayley graph is 6-regular with girth `k`; its only short cycles
/// are the `c`-cycles.
pub fn free_product_ball(k: usize, radius: usize) -> Result<RootedBall> {
    free_product_ball_capped(k, radius, DEFAULT_BALL_CAP)
}

pub fn free_product_ball_capped(k: usize, radius: usize, cap: usize) -> Result<RootedBall> {
    Ok(free_product_ball_keyed(k, radius, cap)?.0)
}

/// Stable key of the Cayley edge `{w, w s}` for a positive generator of
/// factor `f`: a hash of the normal form of `w` and `f`. The same edge gets
/// the same key for every `k` in which `w` has the same normal form.
fn edge_key(w: &Word, f: u8) -> u64 {
    let mut h = rng::derive(rng::label("free-product-edge"), f as u64);
    for &(factor, exp) in &w.syllables {
        h = rng::mix64(h ^ ((factor as u64) << 32 | exp as u32 as u64));
    }
    rng::mix64(h.wrapping_add(w.syllables.len() as u64))
}

/// As [`free_product_ball_capped`], also returning one word-derived key per
/// edge id (see [`edge_key`]) for coupling coins across different `k`.
pub fn free_product_ball_keyed(k: usize, radius: usize, cap: usize) -> Result<(RootedBall, Vec<u64>)> {
    if k < 3 {
        return Err(Error::param("k", format!("need k >= 3 so that c != c^-1, got {k}")));
    }
    let bound = tree_ball_size(radius);
    if bound > cap {
        return Err(Error::TooLarge {
            what: "free-product ball",
            size: bound,
            limit: cap,
        });
    }
    let k32 = k as u32;
    let mut index: HashMap<Word, u32> = HashMap::new();
    let mut words = vec![Word::identity()];
    let mut dist = vec![0usize];
    index.insert(Word::identity(), 0);
    let mut head = 0;
    while head < words.len() {
        let d = dist[head];
        if d < radius {
            for &(f, e) in &GENERATORS {
                let mut w = words[head].clone();
                w.mul_syllable(f, e, k32);
                if !index.contains_key(&w) {
                    index.insert(w.clone(), words.len() as u32);
                    words.push(w);
                    dist.push(d + 1);
                }
            }
        }
        head += 1;
    }
    let mut keyed = Vec::with_capacity(3 * words.len());
    for (i, w) in words.iter().enumerate() {
        for &(f, e) in &GENERATORS {
            let mut nb = w.clone();
            nb.mul_syllable(f, e, k32);
            if let Some(&j) = index.get(&nb) {
                if (i as u32) < j {
                    let key = if e > 0 { edge_key(w, f) } else { edge_key(&nb, f) };
                    keyed.push(((i, j as usize), key));
                }
            }
        }
    }
    keyed.sort_unstable();
    let edges: Vec<(usize, usize)> = keyed.iter().map(|&(e, _)| e).collect();
    let keys = keyed.into_iter().map(|(_, key)| key).collect();
    let ball = RootedBall::from_bfs_graph(Graph::from_edges(words.len(), &edges)?, radius)?;
    Ok((ball, keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{girth, Girth};
    use proptest::prelude::*;

    #[test]
    fn radius_one() {
        let b = free_product_ball(5, 1).unwrap();
        assert_eq!(b.graph().vertex_count(), 7);
        assert_eq!(b.graph().edge_count(), 6);
    }

    #[test]
    fn girth_is_k_once_the_c_cycle_fits() {
        // c^5 lies within radius ceil(5/2) = 3
        let b = free_product_ball(5, 3).unwrap();
        assert_eq!(girth(b.graph()), Girth::Finite(5));
        let b = free_product_ball(6, 3).unwrap();
        assert_eq!(girth(b.graph()), Girth::Finite(6));
        let b = free_product_ball(100, 2).unwrap();
        assert_eq!(girth(b.graph()), Girth::Acyclic);
    }

    #[test]
    fn growth_is_at_most_fivefold() {
        let sizes: Vec<usize> = (0..=6)
            .map(|r| free_product_ball(7, r).unwrap().graph().vertex_count())
            .collect();
        assert_eq!(sizes[0], 1);
        for r in 1..=6 {
            assert!(sizes[r] <= tree_ball_size(r));
            let sphere = sizes[r] - sizes[r - 1];
            let prev = if r == 1 { 1 } else { sizes[r - 1] - sizes[r - 2] };
            assert!(sphere <= 6 * prev && (r == 1 || sphere <= 5 * prev));
        }
        // below the c-cycle radius the ball is the 6-regular tree ball
        assert_eq!(sizes[3], tree_ball_size(3));
        assert!(sizes[4] < tree_ball_size(4));
    }

    #[test]
    fn edge_keys_are_shared_across_k() {
        let (b11, k11) = free_product_ball_keyed(11, 3, DEFAULT_BALL_CAP).unwrap();
        let (b9, k9) = free_product_ball_keyed(9, 3, DEFAULT_BALL_CAP).unwrap();
        // both radius-3 balls are the 6-regular tree ball with equal words
        assert!(b11.graph() == b9.graph());
        assert_eq!(k11, k9);
        let mut sorted = k9.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), k9.len());
        let (_, k5) = free_product_ball_keyed(5, 3, DEFAULT_BALL_CAP).unwrap();
        let shared = k5.iter().filter(|k| k9.contains(k)).count();
        assert!(shared > k5.len() / 2 && shared < k5.len());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            free_product_ball_capped(7, 10, 1_000_000),
            Err(Error::TooLarge { .. })
        ));
        assert!(free_product_ball(2, 1).is_err());
    }

    fn word(k: u32) -> impl Strategy<Value = Word> {
        proptest::collection::vec((0u8..3, -4i32..=4), 0..8).prop_map(move |syl| {
            let mut w = Word::identity();
            for (f, e) in syl {
                w.mul_syllable(f, e, k);
            }
            w
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(
            (a, b, c) in (word(5), word(5), word(5))
        ) {
            prop_assert_eq!(a.mul(&b, 5).mul(&c, 5), a.mul(&b.mul(&c, 5), 5));
        }

        #[test]
        fn inverses_cancel(a in word(7)) {
            prop_assert_eq!(a.mul(&a.inverse(7), 7), Word::identity());
            prop_assert_eq!(a.inverse(7).mul(&a, 7), Word::identity());
        }

        #[test]
        fn normal_form_invariants(a in word(6)) {
            let s = a.syllables();
            prop_assert!(s.windows(2).all(|w| w[0].0 != w[1].0));
            prop_assert!(s.iter().all(|&(f, e)| e != 0 && (f != 2 || (e > -3 && e <= 3))));
        }
    }
}
