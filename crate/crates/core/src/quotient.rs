//! Union-find over `0..n` with order-minimal representatives.

/// Mutable build phase of a quotient. Roots are always the least element of
/// their class, so the partition's canonical form does not depend on the
/// order in which unions were performed.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the classes of `x` and `y`. Returns false if already merged.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }

    pub fn seal(mut self) -> Partition {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if r == x {
                class_of[x] = representatives.len();
                representatives.push(x);
            } else {
                // r < x, so its class id is already assigned
                class_of[x] = class_of[r];
            }
        }
        Partition {
            class_of,
            representatives,
        }
    }
}

/// A sealed partition of `0..n`. Class ids are numbered in increasing order
/// of their (least) representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    representatives: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        UnionFind::new(n).seal()
    }

    pub fn element_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn representative(&self, class: usize) -> usize {
        self.representatives[class]
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c == class)
            .map(|(x, _)| x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn representatives_are_minimal() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 2);
        uf.union(3, 4);
        let p = uf.seal();
        assert_eq!(p.class_count(), 3);
        assert_eq!(p.representative(p.class_of(3)), 2);
        assert_eq!(p.members(p.class_of(4)).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(p.class_of(0), 0);
        assert_eq!(p.class_of(1), 1);
    }

    proptest! {
        #[test]
        fn union_order_does_not_matter(
            n in 1usize..40,
            pairs in proptest::collection::vec((0usize..40, 0usize..40), 0..60),
        ) {
            let pairs: Vec<_> = pairs.into_iter().map(|(x, y)| (x % n, y % n)).collect();
            let mut fwd = UnionFind::new(n);
            for &(x, y) in &pairs {
                fwd.union(x, y);
            }
            let mut rev = UnionFind::new(n);
            for &(x, y) in pairs.iter().rev() {
                rev.union(y, x);
            }
            let (p, q) = (fwd.seal(), rev.seal());
            prop_assert_eq!(&p, &q);
            for c in 0..p.class_count() {
                let rep = p.representative(c);
                prop_assert_eq!(p.class_of(rep), c);
                prop_assert!(p.members(c).all(|x| x >= rep));
            }
        }
    }
}
