//! Fixed-width bitset over algebra elements.

use std::fmt;

/// Largest carrier any algebra may have.
pub const MAX_ELEMS: usize = 256;

/// Set of element indices below [`MAX_ELEMS`], stored as four machine words.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet([u64; 4]);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet([0; 4]);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> ElemSet {
        let mut s = ElemSet::EMPTY;
        for w in 0..4 {
            let lo = w * 64;
            if n >= lo + 64 {
                s.0[w] = u64::MAX;
            } else if n > lo {
                s.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn singleton(i: usize) -> ElemSet {
        let mut s = ElemSet::EMPTY;
        s.insert(i);
        s
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let was = self.contains(i);
        self.0[i >> 6] |= 1 << (i & 63);
        !was
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    #[inline]
    pub fn and(&self, o: &ElemSet) -> ElemSet {
        ElemSet([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2], self.0[3] & o.0[3]])
    }

    #[inline]
    pub fn or(&self, o: &ElemSet) -> ElemSet {
        ElemSet([self.0[0] | o.0[0], self.0[1] | o.0[1], self.0[2] | o.0[2], self.0[3] | o.0[3]])
    }

    #[inline]
    pub fn minus(&self, o: &ElemSet) -> ElemSet {
        ElemSet([self.0[0] & !o.0[0], self.0[1] & !o.0[1], self.0[2] & !o.0[2], self.0[3] & !o.0[3]])
    }

    #[inline]
    pub fn is_subset(&self, o: &ElemSet) -> bool {
        self.minus(o).is_empty()
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        for w in 0..4 {
            if self.0[w] != 0 {
                return Some(w * 64 + self.0[w].trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> ElemIter {
        ElemIter { words: self.0, w: 0 }
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for i in it {
            s.insert(i);
        }
        s
    }
}

pub struct ElemIter {
    words: [u64; 4],
    w: usize,
}

impl Iterator for ElemIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.w < 4 {
            let word = self.words[self.w];
            if word != 0 {
                self.words[self.w] = word & (word - 1);
                return Some(self.w * 64 + word.trailing_zeros() as usize);
            }
            self.w += 1;
        }
        None
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterate the members of a point mask.
pub fn mask_iter(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_iter() {
        assert_eq!(ElemSet::full(0).len(), 0);
        assert_eq!(ElemSet::full(70).len(), 70);
        assert_eq!(ElemSet::full(256).len(), 256);
        let s: ElemSet = [3, 64, 200].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 64, 200]);
        assert_eq!(s.first(), Some(3));
        assert!(s.is_subset(&ElemSet::full(201)));
        assert!(!s.is_subset(&ElemSet::full(200)));
    }
}
