//! Fixed-length bit vectors over `F_2` and the small elimination kit used for
//! Reed-Muller generator matrices and coset enumeration.

use std::fmt;

/// A fixed-length bit vector, stored as 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of positions where both vectors are 1.
    pub fn overlap(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn overlap_is_odd(&self, other: &BitVec) -> bool {
        self.overlap(other) % 2 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some((w << 6) + word.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Reduces `rows` to an independent echelon basis, sorted by pivot position.
pub fn f2_row_reduce(rows: impl IntoIterator<Item = BitVec>) -> Vec<BitVec> {
    let mut basis: Vec<BitVec> = Vec::new();
    for mut row in rows {
        while let Some(pivot) = row.first_one() {
            match basis.binary_search_by_key(&pivot, |b| b.first_one().unwrap()) {
                Ok(i) => row.xor_assign(&basis[i]),
                Err(i) => {
                    basis.insert(i, row);
                    break;
                }
            }
        }
    }
    basis
}

pub fn f2_rank(rows: impl IntoIterator<Item = BitVec>) -> usize {
    f2_row_reduce(rows).len()
}

/// Membership of `v` in the span of an echelon `basis` from [`f2_row_reduce`].
pub fn f2_in_span(v: &BitVec, basis: &[BitVec]) -> bool {
    let mut v = v.clone();
    for b in basis {
        let pivot = b.first_one().unwrap();
        if v.get(pivot) {
            v.xor_assign(b);
        }
    }
    v.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_toggle() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.toggle(129);
        assert!(v.get(0) && v.get(64) && v.get(129));
        assert_eq!(v.count_ones(), 3);
        v.toggle(64);
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.first_one(), Some(0));
    }

    #[test]
    fn reduce_and_span() {
        let rows = vec![
            BitVec::from_ones(4, [0, 1]),
            BitVec::from_ones(4, [1, 2]),
            BitVec::from_ones(4, [0, 2]), // dependent
        ];
        let basis = f2_row_reduce(rows.clone());
        assert_eq!(basis.len(), 2);
        assert!(f2_in_span(&BitVec::from_ones(4, [0, 2]), &basis));
        assert!(!f2_in_span(&BitVec::from_ones(4, [3]), &basis));
        assert_eq!(f2_rank(rows), 2);
    }
}
