/// Disjoint-set forest with path compression. Unions are directed: the
/// caller chooses which root survives, so that per-root payload maps can
/// be merged smaller-into-larger.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    pub fn find(&mut self, mut id: usize) -> usize {
        let mut root = id;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[id] != root {
            let next = self.parent[id];
            self.parent[id] = root;
            id = next;
        }
        root
    }

    /// Attaches the root `gone` under the root `keep`. Both arguments must
    /// already be roots.
    pub fn union_into(&mut self, keep: usize, gone: usize) {
        debug_assert_eq!(self.parent[keep], keep);
        debug_assert_eq!(self.parent[gone], gone);
        self.parent[gone] = keep;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_union_keeps_the_chosen_root() {
        let mut uf = UnionFind::new(4);
        uf.union_into(1, 0);
        uf.union_into(1, 3);
        assert_eq!(uf.find(0), 1);
        assert_eq!(uf.find(3), 1);
        assert_eq!(uf.find(2), 2);
        uf.union_into(2, 1);
        assert_eq!(uf.find(0), 2);
    }
}
