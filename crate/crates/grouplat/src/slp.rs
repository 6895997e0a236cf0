//! Straight-line programs: append-only DAGs of concatenation nodes over
//! signed terminal symbols, representing possibly enormous words in
//! linear space. Lengths are cached per node and count formal symbols;
//! concatenation never cancels. Inversion is a lazy flag on references,
//! so it costs nothing and keeps the arena shareable.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::words::Letter;
use crate::Error;

static NEXT_ARENA_ID: AtomicU64 = AtomicU64::new(1);

const EMPTY_NODE: u32 = u32::MAX;

/// Reference to a program in some arena: node id plus an inversion flag.
/// The empty program belongs to every arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlpRef {
    arena: u64,
    node: u32,
    inverted: bool,
}

impl SlpRef {
    pub const EMPTY: SlpRef = SlpRef {
        arena: 0,
        node: EMPTY_NODE,
        inverted: false,
    };

    pub fn is_empty(self) -> bool {
        self.node == EMPTY_NODE
    }

    /// Inversion is an involution and costs O(1).
    pub fn inverse(self) -> SlpRef {
        SlpRef {
            arena: self.arena,
            node: self.node,
            inverted: !self.inverted,
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Terminal(Letter),
    Concat(SlpRef, SlpRef),
}

/// Append-only arena of straight-line program nodes with cached lengths.
///
/// `Clone` forks the arena: refs issued before the fork stay valid in the
/// fork, which is how a completed graph serves concurrent queries that
/// each extend a private copy.
#[derive(Debug, Clone)]
pub struct SlpArena {
    id: u64,
    nodes: Vec<Node>,
    lens: Vec<BigUint>,
}

impl SlpArena {
    pub fn new() -> SlpArena {
        SlpArena {
            id: NEXT_ARENA_ID.fetch_add(1, Ordering::Relaxed),
            nodes: Vec::new(),
            lens: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn check(&self, r: SlpRef) -> Result<(), Error> {
        if r.is_empty() {
            return Ok(());
        }
        if r.arena != self.id || r.node as usize >= self.nodes.len() {
            return Err(Error::ArenaMismatch);
        }
        Ok(())
    }

    /// A length-1 program expanding to the single symbol.
    pub fn terminal(&mut self, sym: Letter) -> SlpRef {
        self.nodes.push(Node::Terminal(sym));
        self.lens.push(BigUint::from(1u32));
        SlpRef {
            arena: self.id,
            node: (self.nodes.len() - 1) as u32,
            inverted: false,
        }
    }

    /// Formal concatenation: the expansion of `a` followed by the
    /// expansion of `b`, with no free reduction. Length is additive.
    pub fn concat(&mut self, a: SlpRef, b: SlpRef) -> Result<SlpRef, Error> {
        self.check(a)?;
        self.check(b)?;
        if a.is_empty() {
            return Ok(b);
        }
        if b.is_empty() {
            return Ok(a);
        }
        let len = self.len(a) + self.len(b);
        self.nodes.push(Node::Concat(a, b));
        self.lens.push(len);
        Ok(SlpRef {
            arena: self.id,
            node: (self.nodes.len() - 1) as u32,
            inverted: false,
        })
    }

    /// Cached expansion length, invariant under inversion.
    pub fn len(&self, r: SlpRef) -> BigUint {
        if r.is_empty() {
            BigUint::zero()
        } else {
            self.lens[r.node as usize].clone()
        }
    }

    /// Full expansion when it fits in `budget` symbols; otherwise
    /// [`Error::BudgetExceeded`] carrying the exact length, so callers can
    /// still answer length-only questions about pathological compression.
    pub fn expand(&self, r: SlpRef, budget: usize) -> Result<Vec<Letter>, Error> {
        self.check(r).expect("ref from another arena");
        let total = self.len(r);
        if total > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                length: total,
                budget,
            });
        }
        let mut out = Vec::new();
        let mut stack = vec![r];
        while let Some(cur) = stack.pop() {
            if cur.is_empty() {
                continue;
            }
            match &self.nodes[cur.node as usize] {
                Node::Terminal(sym) => {
                    out.push(if cur.inverted { sym.inv() } else { *sym });
                }
                Node::Concat(left, right) => {
                    let (first, second) = if cur.inverted {
                        (right.inverse(), left.inverse())
                    } else {
                        (*left, *right)
                    };
                    stack.push(second);
                    stack.push(first);
                }
            }
        }
        Ok(out)
    }
}

impl Default for SlpArena {
    fn default() -> Self {
        SlpArena::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::test_support::Rng;

    fn h(i: usize) -> Letter {
        Letter::positive(i)
    }

    #[test]
    fn terminal_examples() {
        let mut arena = SlpArena::new();
        let t = arena.terminal(h(1));
        assert_eq!(arena.len(t), BigUint::from(1u32));
        assert_eq!(arena.expand(t, 10).unwrap(), vec![h(1)]);
        let inv = arena.terminal(h(0)).inverse();
        assert_eq!(arena.expand(inv, 10).unwrap(), vec![h(0).inv()]);
        assert_eq!(arena.len(SlpRef::EMPTY), BigUint::zero());
        assert_eq!(arena.expand(SlpRef::EMPTY, 0).unwrap(), vec![]);
    }

    #[test]
    fn concat_examples() {
        let mut arena = SlpArena::new();
        let h1 = arena.terminal(h(0));
        let h2 = arena.terminal(h(1));
        let both = arena.concat(h1, h2).unwrap();
        assert_eq!(arena.len(both), BigUint::from(2u32));
        assert_eq!(arena.expand(both, 10).unwrap(), vec![h(0), h(1)]);

        let with_empty = arena.concat(SlpRef::EMPTY, h1).unwrap();
        assert_eq!(arena.len(with_empty), BigUint::from(1u32));
        assert_eq!(arena.expand(with_empty, 10).unwrap(), vec![h(0)]);

        // Formal concatenation: h1 · h1⁻¹ does NOT cancel.
        let formal = arena.concat(h1, h1.inverse()).unwrap();
        assert_eq!(arena.len(formal), BigUint::from(2u32));
        assert_eq!(arena.expand(formal, 10).unwrap(), vec![h(0), h(0).inv()]);
    }

    #[test]
    fn concat_rejects_foreign_refs() {
        let mut arena = SlpArena::new();
        let mut other = SlpArena::new();
        let ours = arena.terminal(h(0));
        let theirs = other.terminal(h(0));
        assert_eq!(arena.concat(ours, theirs), Err(Error::ArenaMismatch));
    }

    #[test]
    fn invert_examples() {
        let mut arena = SlpArena::new();
        let h1 = arena.terminal(h(0));
        let h2 = arena.terminal(h(1));
        let both = arena.concat(h1, h2).unwrap();
        assert_eq!(
            arena.expand(both.inverse(), 10).unwrap(),
            vec![h(1).inv(), h(0).inv()]
        );
        assert_eq!(SlpRef::EMPTY.inverse(), SlpRef::EMPTY.inverse());
        assert_eq!(
            arena.expand(SlpRef::EMPTY.inverse(), 10).unwrap(),
            Vec::<Letter>::new()
        );
        assert_eq!(
            arena.expand(both.inverse().inverse(), 10).unwrap(),
            arena.expand(both, 10).unwrap()
        );
    }

    #[test]
    fn budget_exceeded_reports_exact_length() {
        let mut arena = SlpArena::new();
        // Doubling chain: length 2^50.
        let mut cur = arena.terminal(h(0));
        for _ in 0..50 {
            cur = arena.concat(cur, cur).unwrap();
        }
        let err = arena.expand(cur, 1_000_000).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                length: BigUint::from(1u64 << 50),
                budget: 1_000_000
            }
        );
    }

    #[test]
    fn random_dags_invert_and_add_lengths() {
        let mut rng = Rng::new(0xdead);
        for _ in 0..200 {
            let mut arena = SlpArena::new();
            let mut refs: Vec<SlpRef> = (0..4)
                .map(|i| {
                    let t = arena.terminal(Letter::new(i % 3, false));
                    if i % 2 == 0 {
                        t.inverse()
                    } else {
                        t
                    }
                })
                .collect();
            for _ in 0..20 {
                let a = refs[rng.below(refs.len())];
                let b = refs[rng.below(refs.len())];
                let c = arena.concat(a, b).unwrap();
                assert_eq!(arena.len(c), arena.len(a) + arena.len(b));
                refs.push(if rng.below(2) == 0 { c.inverse() } else { c });
            }
            let last = *refs.last().unwrap();
            let forward = arena.expand(last, 1 << 24).unwrap();
            let backward = arena.expand(last.inverse(), 1 << 24).unwrap();
            let mut flipped: Vec<Letter> = forward.iter().rev().map(|l| l.inv()).collect();
            assert_eq!(backward, flipped);
            flipped.reverse();
            assert_eq!(BigUint::from(forward.len()), arena.len(last));
        }
    }
}
