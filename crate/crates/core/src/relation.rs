//! Partial equivalence relations on a finite set of worlds.

use std::collections::HashMap;

const NONE: u32 = u32::MAX;

/// A symmetric and transitive relation on `0..n`.
///
/// Stored as a class label per world; worlds outside the field of the
/// relation (not even related to themselves) carry no class. Labels are
/// normalised by first occurrence so structurally equal relations compare
/// equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Per {
    class: Vec<u32>,
}

impl Per {
    /// The empty relation.
    pub fn empty(n: usize) -> Self {
        Per { class: vec![NONE; n] }
    }

    /// `W × W`.
    pub fn universal(n: usize) -> Self {
        Per { class: vec![0; n] }
    }

    /// Equality on the worlds marked in `field`.
    pub fn identity_on(field: &[bool]) -> Self {
        let mut next = 0;
        let class = field
            .iter()
            .map(|&f| {
                if f {
                    next += 1;
                    next - 1
                } else {
                    NONE
                }
            })
            .collect();
        Per { class }
    }

    /// The symmetric-transitive closure of a set of pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (a, b) in pairs {
            touched[a] = true;
            touched[b] = true;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let keys: Vec<Option<usize>> = (0..n)
            .map(|w| touched[w].then(|| find(&mut parent, w)))
            .collect();
        Per::from_keys(&keys)
    }

    /// Worlds with equal `Some` keys are related; `None` worlds are outside
    /// the field.
    pub fn from_keys<K: Eq + std::hash::Hash>(keys: &[Option<K>]) -> Self {
        let mut ids: HashMap<&K, u32> = HashMap::new();
        let class = keys
            .iter()
            .map(|k| match k {
                None => NONE,
                Some(k) => {
                    let next = ids.len() as u32;
                    *ids.entry(k).or_insert(next)
                }
            })
            .collect();
        Per { class }
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.iter().all(|&c| c == NONE)
    }

    pub fn class_of(&self, w: usize) -> Option<u32> {
        let c = self.class[w];
        (c != NONE).then_some(c)
    }

    pub fn related(&self, w: usize, v: usize) -> bool {
        let c = self.class[w];
        c != NONE && c == self.class[v]
    }

    /// Whether `w` is related to itself.
    pub fn in_field(&self, w: usize) -> bool {
        self.class[w] != NONE
    }

    pub fn field(&self) -> Vec<bool> {
        self.class.iter().map(|&c| c != NONE).collect()
    }

    /// The worlds related to `w`, ascending.
    pub fn class_members(&self, w: usize) -> Vec<usize> {
        match self.class_of(w) {
            None => Vec::new(),
            Some(c) => (0..self.len()).filter(|&v| self.class[v] == c).collect(),
        }
    }

    /// All classes, each ascending, ordered by least member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (w, &c) in self.class.iter().enumerate() {
            if c == NONE {
                continue;
            }
            let c = c as usize;
            if c >= out.len() {
                out.resize_with(c + 1, Vec::new);
            }
            out[c].push(w);
        }
        out
    }

    /// All related pairs `(w, v)` with `w <= v`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for class in self.classes() {
            for (k, &w) in class.iter().enumerate() {
                for &v in &class[k..] {
                    out.push((w, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `None` if `self ⊆ other`, else a related pair of `self` missing from
    /// `other`.
    pub fn subset_witness(&self, other: &Per) -> Option<(usize, usize)> {
        let n = self.len();
        let mut image: HashMap<u32, (usize, u32)> = HashMap::new();
        for w in 0..n {
            let c = self.class[w];
            if c == NONE {
                continue;
            }
            let o = other.class[w];
            if o == NONE {
                return Some((w, w));
            }
            match image.get(&c) {
                None => {
                    image.insert(c, (w, o));
                }
                Some(&(first, oc)) if oc != o => return Some((first, w)),
                Some(_) => {}
            }
        }
        None
    }

    pub fn is_subset(&self, other: &Per) -> bool {
        self.subset_witness(other).is_none()
    }

    pub fn intersect(&self, other: &Per) -> Per {
        let keys: Vec<Option<(u32, u32)>> = self
            .class
            .iter()
            .zip(&other.class)
            .map(|(&a, &b)| (a != NONE && b != NONE).then_some((a, b)))
            .collect();
        Per::from_keys(&keys)
    }

    /// The relation restricted to worlds marked in `scope`.
    pub fn restrict(&self, scope: &[bool]) -> Per {
        let keys: Vec<Option<u32>> = self
            .class
            .iter()
            .zip(scope)
            .map(|(&c, &s)| (s && c != NONE).then_some(c))
            .collect();
        Per::from_keys(&keys)
    }

    /// Least pair `(w, v)`, `w <= v`, on which the relations differ.
    pub fn first_difference(&self, other: &Per) -> Option<(usize, usize)> {
        let n = self.len();
        for w in 0..n {
            for v in w..n {
                if self.related(w, v) != other.related(w, v) {
                    return Some((w, v));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_pairs() {
        let r = Per::from_pairs(5, [(0, 1), (1, 2), (4, 4)]);
        assert!(r.related(0, 2) && r.related(2, 0) && r.related(1, 1));
        assert!(!r.in_field(3));
        assert!(r.related(4, 4) && !r.related(3, 3));
        assert_eq!(r.classes(), vec![vec![0, 1, 2], vec![4]]);
    }

    #[test]
    fn subset_and_intersection() {
        let a = Per::from_pairs(4, [(0, 1), (2, 3)]);
        let b = Per::from_pairs(4, [(0, 1), (1, 2), (3, 3)]);
        assert_eq!(a.subset_witness(&b), Some((2, 3)));
        let i = a.intersect(&b);
        assert_eq!(i.pairs(), vec![(0, 0), (0, 1), (1, 1), (2, 2), (3, 3)]);
        assert!(i.is_subset(&a) && i.is_subset(&b));
        assert_eq!(Per::from_pairs(4, [(1, 0)]), Per::from_pairs(4, [(0, 1)]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn brute(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
            let mut m = vec![vec![false; n]; n];
            for &(a, b) in pairs {
                m[a][b] = true;
                m[b][a] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if m[i][k] && m[k][j] {
                            m[i][j] = true;
                        }
                    }
                }
            }
            m
        }

        proptest! {
            #[test]
            fn from_pairs_is_symmetric_transitive_closure(
                pairs in proptest::collection::vec((0usize..6, 0usize..6), 0..8)
            ) {
                let r = Per::from_pairs(6, pairs.iter().copied());
                let m = brute(6, &pairs);
                for i in 0..6 {
                    for j in 0..6 {
                        prop_assert_eq!(r.related(i, j), m[i][j]);
                    }
                }
            }
        }
    }
}
