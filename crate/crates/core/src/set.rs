use bitvec::prelude::*;
use serde::{Serialize, Serializer};

use crate::ElementId;

/// A subset of the elements of a ring or module, stored as a bit vector over `ElementId`s.
///
/// Serializes as the sorted array of member ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: BitVec<u64, Lsb0>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            bits: bitvec![u64, Lsb0; 0; universe],
        }
    }

    pub fn full(universe: usize) -> Self {
        Self {
            bits: bitvec![u64, Lsb0; 1; universe],
        }
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = ElementId>) -> Self {
        let mut set = Self::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn from_predicate(universe: usize, pred: impl Fn(ElementId) -> bool) -> Self {
        let mut set = Self::empty(universe);
        for id in 0..universe {
            if pred(id) {
                set.insert(id);
            }
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, id: ElementId) -> bool {
        let was = self.bits[id];
        self.bits.set(id, true);
        !was
    }

    #[inline]
    pub fn contains(&self, id: ElementId) -> bool {
        self.bits[id]
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn is_full(&self) -> bool {
        self.bits.all()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.bits.iter_ones()
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|id| other.contains(id))
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.iter().all(|id| !other.contains(id))
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_and_order() {
        let set = ElementSet::from_ids(10, [7, 2, 2, 9]);
        assert_eq!(set.to_vec(), vec![2, 7, 9]);
        assert_eq!(set.len(), 3);
        assert!(set.contains(7) && !set.contains(3));
        assert_eq!(serde_json::to_string(&set).unwrap(), "[2,7,9]");
    }

    #[test]
    fn subset_relations() {
        let small = ElementSet::from_ids(5, [1]);
        let big = ElementSet::from_ids(5, [0, 1, 4]);
        assert!(small.is_subset(&big));
        assert!(!big.is_subset(&small));
        assert!(ElementSet::empty(5).is_empty());
        assert!(ElementSet::full(5).is_full());
    }
}
