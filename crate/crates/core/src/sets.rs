//! Small helpers over `FixedBitSet`.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;

/// Orders two equal-length bit sets as binary numbers, highest index most
/// significant.
pub fn mask_cmp(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    a.as_slice().iter().rev().cmp(b.as_slice().iter().rev())
}

pub fn from_iter(len: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(len);
    for i in items {
        set.insert(i);
    }
    set
}

pub fn full(len: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(len);
    set.insert_range(..);
    set
}

pub fn to_vec(set: &FixedBitSet) -> Vec<usize> {
    set.ones().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_order_is_numeric() {
        let a = from_iter(70, [0, 1, 2]);
        let b = from_iter(70, [3]);
        let c = from_iter(70, [65]);
        assert_eq!(mask_cmp(&a, &b), Ordering::Less);
        assert_eq!(mask_cmp(&b, &c), Ordering::Less);
        assert_eq!(mask_cmp(&c, &c), Ordering::Equal);
    }
}
