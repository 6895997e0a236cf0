//! Labeled inverse graphs and Stallings foldings.
//!
//! A [`LabeledGraph`] is a based multigraph whose edges carry signed
//! letters and are implicitly closed under involution: an edge `u → v`
//! labeled `x` is the same datum as `v → u` labeled `x⁻¹`; we store the
//! positive direction. Folding a wedge of subgroup generator loops yields
//! the [`FoldedGraph`] (Stallings graph) of the subgroup, which drives
//! membership, shortest coset representatives, the closest-element solver
//! and the shortest-nontrivial-element solver.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::union_find::UnionFind;
use crate::words::{Alphabet, Letter, Word};

/// Based multigraph over signed letters, stored as positive-letter arcs.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    alphabet: Arc<Alphabet>,
    vertex_count: usize,
    base: usize,
    edges: Vec<(usize, Letter, usize)>,
}

impl LabeledGraph {
    /// Builds a graph from explicit arcs. Arcs with inverse letters are
    /// canonicalized to their positive direction.
    pub fn from_edges(
        alphabet: &Arc<Alphabet>,
        vertex_count: usize,
        base: usize,
        edges: impl IntoIterator<Item = (usize, Letter, usize)>,
    ) -> LabeledGraph {
        assert!(base < vertex_count, "base vertex must exist");
        let mut graph = LabeledGraph {
            alphabet: Arc::clone(alphabet),
            vertex_count,
            base,
            edges: Vec::new(),
        };
        for (u, x, v) in edges {
            graph.push_edge(u, x, v);
        }
        graph
    }

    fn push_edge(&mut self, u: usize, x: Letter, v: usize) {
        assert!(u < self.vertex_count && v < self.vertex_count);
        if x.is_inverse() {
            self.edges.push((v, x.inv(), u));
        } else {
            self.edges.push((u, x, v));
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Positive-letter arcs.
    pub fn edges(&self) -> &[(usize, Letter, usize)] {
        &self.edges
    }

    /// Deterministic DOT text; the base vertex is drawn as a double
    /// circle and every positive-letter edge becomes one arc.
    pub fn dot(&self) -> String {
        let mut sorted = self.edges.clone();
        sorted.sort();
        render_dot(
            self.vertex_count,
            self.base,
            sorted
                .iter()
                .map(|&(u, x, v)| (u, self.alphabet.name(x.index()).to_string(), v)),
        )
    }

    /// Stallings folding; see [`LabeledGraph::fold_with_map`].
    pub fn fold(&self) -> FoldedGraph {
        self.fold_with_map().0
    }

    /// Folds the graph by merging same-labeled edges out of a common
    /// vertex until the result is deterministic, then renumbers vertices
    /// canonically by a breadth-first search from the base in letter
    /// order. Returns the folded graph and the map from original vertex
    /// ids to canonical ids (meaningful for vertices connected to base).
    ///
    /// The subgroup of loop labels at the base is unchanged, and the
    /// canonical numbering makes the result independent of the edge
    /// processing order.
    pub fn fold_with_map(&self) -> (FoldedGraph, Vec<usize>) {
        let n = self.vertex_count;
        let mut uf = UnionFind::new(n);
        let mut slots: Vec<HashMap<Letter, usize>> = vec![HashMap::new(); n];
        let mut queue: VecDeque<(usize, Letter, usize)> = VecDeque::new();
        for &(u, x, v) in &self.edges {
            queue.push_back((u, x, v));
            queue.push_back((v, x.inv(), u));
        }
        while let Some((u, x, v)) = queue.pop_front() {
            let ru = uf.find(u);
            let rv = uf.find(v);
            match slots[ru].get(&x).copied() {
                None => {
                    slots[ru].insert(x, rv);
                }
                Some(t) => {
                    let rt = uf.find(t);
                    if rt != rv {
                        // Fold rt and rv; keep the root with more
                        // transitions so maps merge small-into-large.
                        let (keep, gone) = if slots[rt].len() >= slots[rv].len() {
                            (rt, rv)
                        } else {
                            (rv, rt)
                        };
                        uf.union_into(keep, gone);
                        let moved = std::mem::take(&mut slots[gone]);
                        for (y, tgt) in moved {
                            queue.push_back((keep, y, tgt));
                        }
                    }
                }
            }
        }

        // Canonical renumbering: BFS from the base exploring slots in
        // letter order. Only the base component is kept.
        let slot_count = self.alphabet.slot_count();
        let root = uf.find(self.base);
        let mut new_id: HashMap<usize, usize> = HashMap::new();
        let mut order: Vec<usize> = Vec::new();
        new_id.insert(root, 0);
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let rep = order[head];
            head += 1;
            for slot in 0..slot_count {
                if let Some(&t) = slots[rep].get(&Letter::from_slot(slot)) {
                    let rt = uf.find(t);
                    if !new_id.contains_key(&rt) {
                        new_id.insert(rt, order.len());
                        order.push(rt);
                    }
                }
            }
        }
        let mut transitions = vec![vec![None; slot_count]; order.len()];
        for (id, &rep) in order.iter().enumerate() {
            for (&x, &t) in &slots[rep] {
                transitions[id][x.slot()] = Some(new_id[&uf.find(t)] as u32);
            }
        }
        let map = (0..n)
            .map(|v| new_id.get(&uf.find(v)).copied().unwrap_or(usize::MAX))
            .collect();
        (
            FoldedGraph {
                alphabet: Arc::clone(&self.alphabet),
                transitions,
            },
            map,
        )
    }
}

/// Builds the wedge of loops for a list of subgroup generators: one loop
/// at the base per generator that is nontrivial after free reduction.
pub fn wedge(alphabet: &Arc<Alphabet>, gens: &[Word]) -> LabeledGraph {
    let mut graph = LabeledGraph {
        alphabet: Arc::clone(alphabet),
        vertex_count: 1,
        base: 0,
        edges: Vec::new(),
    };
    for gen in gens {
        assert!(
            gen.alphabet() == alphabet,
            "generator over a different alphabet"
        );
        let gen = gen.reduce();
        let letters = gen.letters();
        if letters.is_empty() {
            continue;
        }
        let mut prev = 0;
        for (i, &x) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                graph.vertex_count += 1;
                graph.vertex_count - 1
            };
            graph.push_edge(prev, x, next);
            prev = next;
        }
    }
    graph
}

/// Convenience: the Stallings graph of the subgroup generated by `gens`.
pub fn stallings(alphabet: &Arc<Alphabet>, gens: &[Word]) -> FoldedGraph {
    wedge(alphabet, gens).fold()
}

/// A folded, deterministic, based inverse graph. Vertices are numbered
/// canonically with the base at 0; `transitions[v][slot]` is the target of
/// the unique `slot`-labeled edge out of `v`, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedGraph {
    alphabet: Arc<Alphabet>,
    transitions: Vec<Vec<Option<u32>>>,
}

pub const BASE: usize = 0;

impl FoldedGraph {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.transitions.len()
    }

    /// Positive-letter arc count.
    pub fn edge_count(&self) -> usize {
        self.transitions
            .iter()
            .flat_map(|row| row.iter().enumerate())
            .filter(|(slot, t)| slot % 2 == 0 && t.is_some())
            .count()
    }

    pub fn step(&self, v: usize, x: Letter) -> Option<usize> {
        self.transitions[v][x.slot()].map(|t| t as usize)
    }

    /// Follows `letters` from `from`; `None` if some step is undefined.
    pub fn trace(&self, from: usize, letters: &[Letter]) -> Option<usize> {
        let mut v = from;
        for &x in letters {
            v = self.step(v, x)?;
        }
        Some(v)
    }

    /// Subgroup membership: true iff the free reduction of `w` labels a
    /// loop at the base.
    pub fn contains(&self, w: &Word) -> bool {
        assert!(
            w.alphabet() == &self.alphabet,
            "word over a different alphabet"
        );
        let w = w.reduce();
        self.trace(BASE, w.letters()) == Some(BASE)
    }

    /// The transition table, row per vertex, column per letter slot.
    pub fn transitions(&self) -> &[Vec<Option<u32>>] {
        &self.transitions
    }

    /// Attaches a fresh path spelling `g` at the base and folds. Returns
    /// the folded graph together with the canonical id of the image of the
    /// path's terminus.
    pub fn with_path(&self, g: &Word) -> (FoldedGraph, usize) {
        assert!(
            g.alphabet() == &self.alphabet,
            "word over a different alphabet"
        );
        let g = g.reduce();
        let n = self.vertex_count();
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        for (v, row) in self.transitions.iter().enumerate() {
            for (slot, t) in row.iter().enumerate() {
                if slot % 2 == 0 {
                    if let Some(&t) = t.as_ref() {
                        edges.push((v, Letter::from_slot(slot), t as usize));
                    }
                }
            }
        }
        // Path vertices stay distinct from graph vertices; identification
        // happens only through folding.
        let mut prev = BASE;
        for (i, &x) in g.letters().iter().enumerate() {
            let next = n + i;
            edges.push(if x.is_inverse() {
                (next, x.inv(), prev)
            } else {
                (prev, x, next)
            });
            prev = next;
        }
        let graph = LabeledGraph::from_edges(&self.alphabet, n + g.len(), BASE, edges);
        let (folded, map) = graph.fold_with_map();
        let term = map[prev];
        (folded, term)
    }

    /// Label of the breadth-first shortest path from `from` to `to`,
    /// exploring letters in slot order. The label of a shortest path in a
    /// folded graph is always freely reduced, which is asserted.
    fn shortest_path_label(&self, from: usize, to: usize) -> Word {
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for slot in 0..self.alphabet.slot_count() {
                let x = Letter::from_slot(slot);
                if let Some(t) = self.step(v, x) {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((v, x));
                        queue.push_back(t);
                    }
                }
            }
        }
        assert!(seen[to], "target not reachable from source");
        let mut letters = Vec::new();
        let mut v = to;
        while v != from {
            let (p, x) = parent[v].expect("parent chain broken");
            letters.push(x);
            v = p;
        }
        letters.reverse();
        let word = Word::from_letters(&self.alphabet, letters).unwrap();
        assert!(word.is_reduced(), "shortest path label must be reduced");
        word
    }

    /// Shortest representative of the coset `Hg`: attaches a path spelling
    /// `g`, folds, and returns the label of a shortest path from the base
    /// to the image of the path terminus.
    pub fn shortest_coset_rep(&self, g: &Word) -> Word {
        let (folded, term) = self.with_path(g);
        let rep = folded.shortest_path_label(BASE, term);
        debug_assert!(rep.len() <= g.reduce().len());
        rep
    }

    /// Closest element of the subgroup to `g` in the word metric, together
    /// with the distance. Computed through the shortest coset
    /// representative `g'`: the witness is `reduce(g·g'⁻¹)` and the
    /// distance is `|g'|`.
    pub fn closest_element(&self, g: &Word) -> (Word, usize) {
        let rep = self.shortest_coset_rep(g);
        let witness = g.concat_reduce(&rep.invert()).unwrap();
        debug_assert!(self.contains(&witness));
        (witness, rep.len())
    }

    /// A shortest nontrivial element of the subgroup, or `None` when the
    /// subgroup is trivial. Found by a breadth-first search over
    /// `(vertex, last letter)` states so the returned loop label is
    /// reduced by construction.
    pub fn shortest_element(&self) -> Option<(Word, usize)> {
        let slot_count = self.alphabet.slot_count();
        let states = self.vertex_count() * (slot_count + 1);
        let encode =
            |v: usize, last: Option<Letter>| v * (slot_count + 1) + last.map_or(0, |l| l.slot() + 1);
        let mut parent: Vec<Option<usize>> = vec![None; states];
        let mut seen = vec![false; states];
        let start = encode(BASE, None);
        seen[start] = true;
        let mut queue = VecDeque::from([(BASE, None::<Letter>)]);
        while let Some((v, last)) = queue.pop_front() {
            for slot in 0..slot_count {
                let x = Letter::from_slot(slot);
                if last == Some(x.inv()) {
                    continue;
                }
                if let Some(t) = self.step(v, x) {
                    let state = encode(t, Some(x));
                    if seen[state] {
                        continue;
                    }
                    seen[state] = true;
                    parent[state] = Some(encode(v, last));
                    if t == BASE {
                        // First arrival back at the base wins: unwind.
                        let mut letters = Vec::new();
                        let mut cur = state;
                        while cur != start {
                            letters.push(Letter::from_slot(cur % (slot_count + 1) - 1));
                            cur = parent[cur].unwrap();
                        }
                        letters.reverse();
                        let word = Word::from_letters(&self.alphabet, letters).unwrap();
                        assert!(word.is_reduced() && !word.is_empty());
                        let len = word.len();
                        return Some((word, len));
                    }
                    queue.push_back((t, Some(x)));
                }
            }
        }
        None
    }

    /// Deterministic DOT text, one arc per positive-letter edge.
    pub fn dot(&self) -> String {
        let mut arcs = Vec::new();
        for (v, row) in self.transitions.iter().enumerate() {
            for (slot, t) in row.iter().enumerate() {
                if slot % 2 == 0 {
                    if let Some(&t) = t.as_ref() {
                        let name = self.alphabet.name(slot / 2).to_string();
                        arcs.push((v, name, t as usize));
                    }
                }
            }
        }
        render_dot(self.vertex_count(), BASE, arcs.into_iter())
    }
}

fn render_dot(
    vertex_count: usize,
    base: usize,
    arcs: impl Iterator<Item = (usize, String, usize)>,
) -> String {
    let mut out = String::new();
    out.push_str("digraph stallings {\n  rankdir=LR;\n");
    for v in 0..vertex_count {
        let shape = if v == base { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {v} [shape={shape}];");
    }
    for (u, label, v) in arcs {
        let _ = writeln!(out, "  {u} -> {v} [label=\"{label}\"];");
    }
    out.push_str("}\n");
    out
}
