//! Fixed-width bitsets used for neighbourhood rows and vertex masks.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Size of the intersection without materialising it.
    #[inline]
    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    /// Clears every index `<= i`.
    pub fn clear_through(&mut self, i: usize) {
        let w = i >> 6;
        for word in self.words.iter_mut().take(w) {
            *word = 0;
        }
        if w < self.words.len() {
            let keep = if (i & 63) == 63 {
                0
            } else {
                !0u64 << ((i & 63) + 1)
            };
            self.words[w] &= keep;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iter_count() {
        let s = BitSet::from_indices(130, [0, 5, 63, 64, 129]);
        assert_eq!(s.count(), 5);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 129]);
        assert!(s.contains(64));
        assert!(!s.contains(65));
        assert!(!s.contains(500));
    }

    #[test]
    fn clear_through_boundaries() {
        let mut s = BitSet::full(130);
        s.clear_through(63);
        assert_eq!(s.iter().next(), Some(64));
        s.clear_through(64);
        assert_eq!(s.iter().next(), Some(65));
        s.clear_through(129);
        assert!(s.is_empty());
    }

    #[test]
    fn intersection_count_matches_materialised() {
        let a = BitSet::from_indices(100, (0..100).filter(|i| i % 3 == 0));
        let b = BitSet::from_indices(100, (0..100).filter(|i| i % 2 == 0));
        assert_eq!(a.intersection_count(&b), a.intersection(&b).count());
        assert_eq!(a.intersection_count(&b), 17);
    }
}
