//! Fixed-universe vertex sets backed by bit words.

use super::Vertex;
use std::fmt;

/// Set of vertices from a fixed universe `0..n`. Equality and hashing are
/// canonical because bits above `n` are never set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for w in 0..s.words.len() {
            s.words[w] = !0;
        }
        s.clear_tail();
        s
    }

    pub fn from_iter(n: usize, it: impl IntoIterator<Item = Vertex>) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    fn clear_tail(&mut self) {
        let tail = self.n % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    pub fn insert(&mut self, v: Vertex) {
        debug_assert!((v as usize) < self.n);
        self.words[v as usize / 64] |= 1 << (v as usize % 64);
    }

    pub fn remove(&mut self, v: Vertex) {
        debug_assert!((v as usize) < self.n);
        self.words[v as usize / 64] &= !(1 << (v as usize % 64));
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.n && self.words[v as usize / 64] >> (v as usize % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some((i * 64) as u32 + b)
                }
            })
        })
    }

    pub fn first(&self) -> Option<Vertex> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Stable byte encoding, used for memoization keys.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.words.len() * 8);
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.len(), 3);
        assert!(s.contains(64));
        assert!(!s.contains(63));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        s.remove(64);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn full_is_canonical() {
        let f = VertexSet::full(70);
        assert_eq!(f.len(), 70);
        let g = VertexSet::from_iter(70, 0..70);
        assert_eq!(f, g);
    }

    #[test]
    fn subset_and_union() {
        let a = VertexSet::from_iter(10, [1, 3, 5]);
        let mut b = VertexSet::from_iter(10, [1, 3]);
        assert!(b.is_subset_of(&a));
        b.union_with(&a);
        assert_eq!(b, a);
    }
}
