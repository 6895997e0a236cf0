//! Geodesics of a free-group element in given subgroup generators.
//!
//! The pipeline has three stages. [`bouquet`] merges one labeled cycle
//! per generator at a root vertex; each edge carries a letter-or-ε label
//! `μ` and a factorization label `ν` stored as a straight-line program.
//! [`BouquetGraph::complete`] repeatedly materializes the cheapest
//! "potential bypass" — a consecutive edge pair whose `μ`-labels multiply
//! to a word of length ≤ 1 with no equally-labeled edge present yet — as
//! a new edge whose `ν` is the formal concatenation. [`geodesic_in`] then
//! runs a per-letter dynamic program over the completed graph, keeping one
//! minimum-`|ν|` candidate per vertex, and the entry that survives at the
//! root is a shortest factorization.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::slp::{SlpArena, SlpRef};
use crate::words::{Alphabet, Letter, Word};
use crate::Error;

/// Default cap on the number of symbols a factorization may expand to.
pub const DEFAULT_EXPAND_BUDGET: usize = 1_000_000;

/// The formal alphabet `h1, …, hm` of subgroup generator symbols.
pub fn factor_alphabet(m: usize) -> Arc<Alphabet> {
    Alphabet::new((1..=m).map(|i| format!("h{i}"))).expect("factor names are valid")
}

/// One directed edge of a bouquet graph. Edges come in inverse pairs
/// (`inv` is the partner id); ε-self-loops are their own inverse.
#[derive(Debug, Clone)]
pub struct BouquetEdge {
    pub from: u32,
    pub to: u32,
    /// Letter label, `None` for ε.
    pub mu: Option<Letter>,
    /// Factorization label.
    pub nu: SlpRef,
    pub nu_len: BigUint,
    pub inv: u32,
    /// For completed edges, the consecutive pair this edge bypasses.
    pub derived: Option<(u32, u32)>,
}

#[derive(Debug, Clone)]
pub struct BouquetGraph {
    alphabet: Arc<Alphabet>,
    factors: Arc<Alphabet>,
    generators: Vec<Word>,
    vertex_count: usize,
    edges: Vec<BouquetEdge>,
    out: Vec<Vec<u32>>,
    out_by_mu: Vec<Vec<Vec<u32>>>,
    dedup: HashSet<(u32, u32, u8)>,
    arena: SlpArena,
    initial_edge_count: usize,
    added_events: usize,
    completed: bool,
}

/// Builds `Bouquet(h₁,…,h_m)`: for each generator `hᵢ = y₁…y_n` a cycle
/// through fresh vertices whose edges carry `(y_j, ε)` except the closing
/// edge, which carries `(y_n, hᵢ)`; all cycles share the root 0, every
/// edge has its inverse, and every vertex carries an ε-self-loop.
/// Generators are freely reduced first and must be nontrivial.
pub fn bouquet(alphabet: &Arc<Alphabet>, gens: &[Word]) -> Result<BouquetGraph, Error> {
    let mut generators = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        assert!(
            g.alphabet() == alphabet,
            "generator over a different alphabet"
        );
        let g = g.reduce();
        if g.is_empty() {
            return Err(Error::TrivialGenerator(i));
        }
        generators.push(g);
    }
    let factors = factor_alphabet(generators.len());
    let mut graph = BouquetGraph {
        alphabet: Arc::clone(alphabet),
        factors,
        generators: generators.clone(),
        vertex_count: 1,
        edges: Vec::new(),
        out: vec![Vec::new()],
        out_by_mu: Vec::new(),
        dedup: HashSet::new(),
        arena: SlpArena::new(),
        initial_edge_count: 0,
        added_events: 0,
        completed: false,
    };
    graph.out_by_mu = vec![vec![Vec::new(); graph.mu_keys()]];
    for (i, g) in generators.iter().enumerate() {
        let nu = graph.arena.terminal(Letter::positive(i));
        let letters = g.letters();
        let mut prev = 0u32;
        for (j, &y) in letters.iter().enumerate() {
            let (next, label) = if j + 1 == letters.len() {
                (0u32, nu)
            } else {
                (graph.new_vertex(), SlpRef::EMPTY)
            };
            graph.add_edge_pair(prev, next, Some(y), label, None);
            prev = next;
        }
    }
    for v in 0..graph.vertex_count as u32 {
        graph.add_epsilon_loop(v);
    }
    graph.initial_edge_count = graph.edges.len();
    Ok(graph)
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Bypass {
    cost: BigUint,
    from: u32,
    to: u32,
    mu_key: u8,
    first: u32,
    second: u32,
}

impl BouquetGraph {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// The formal alphabet of the `ν` labels.
    pub fn factor_alphabet(&self) -> &Arc<Alphabet> {
        &self.factors
    }

    /// The freely reduced subgroup generators, indexed like the factors.
    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[BouquetEdge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[u32] {
        &self.out[v]
    }

    pub fn arena(&self) -> &SlpArena {
        &self.arena
    }

    pub fn initial_edge_count(&self) -> usize {
        self.initial_edge_count
    }

    /// Number of completion events; each adds one edge and its inverse.
    pub fn added_edges(&self) -> usize {
        self.added_events
    }

    pub fn is_completed(&self) -> bool {
        self.completed
    }

    fn mu_keys(&self) -> usize {
        self.alphabet.slot_count() + 1
    }

    fn mu_key(&self, mu: Option<Letter>) -> u8 {
        mu.map_or(self.alphabet.slot_count() as u8, |l| l.slot() as u8)
    }

    fn new_vertex(&mut self) -> u32 {
        let keys = self.mu_keys();
        self.vertex_count += 1;
        self.out.push(Vec::new());
        self.out_by_mu.push(vec![Vec::new(); keys]);
        (self.vertex_count - 1) as u32
    }

    fn push_edge(&mut self, edge: BouquetEdge) -> u32 {
        let id = self.edges.len() as u32;
        let key = self.mu_key(edge.mu);
        self.out[edge.from as usize].push(id);
        self.out_by_mu[edge.from as usize][key as usize].push(id);
        self.dedup.insert((edge.from, edge.to, key));
        self.edges.push(edge);
        id
    }

    fn add_edge_pair(
        &mut self,
        from: u32,
        to: u32,
        mu: Option<Letter>,
        nu: SlpRef,
        derived: Option<(u32, u32)>,
    ) -> u32 {
        let nu_len = self.arena.len(nu);
        let id = self.push_edge(BouquetEdge {
            from,
            to,
            mu,
            nu,
            nu_len: nu_len.clone(),
            inv: 0,
            derived,
        });
        let inv_derived = derived.map(|(a, b)| (self.edges[b as usize].inv, self.edges[a as usize].inv));
        let inv_id = self.push_edge(BouquetEdge {
            from: to,
            to: from,
            mu: mu.map(Letter::inv),
            nu: nu.inverse(),
            nu_len,
            inv: id,
            derived: inv_derived,
        });
        self.edges[id as usize].inv = inv_id;
        id
    }

    fn add_epsilon_loop(&mut self, v: u32) {
        let id = self.push_edge(BouquetEdge {
            from: v,
            to: v,
            mu: None,
            nu: SlpRef::EMPTY,
            nu_len: BigUint::zero(),
            inv: 0,
            derived: None,
        });
        self.edges[id as usize].inv = id;
    }

    /// Reduced product of two μ labels, `None` when it has length 2 and
    /// the pair therefore cannot be a bypass.
    fn mu_product(a: Option<Letter>, b: Option<Letter>) -> Option<Option<Letter>> {
        match (a, b) {
            (None, None) => Some(None),
            (None, Some(y)) => Some(Some(y)),
            (Some(x), None) => Some(Some(x)),
            (Some(x), Some(y)) => {
                if y == x.inv() {
                    Some(None)
                } else {
                    None
                }
            }
        }
    }

    fn try_push(&self, heap: &mut BinaryHeap<Reverse<Bypass>>, first: u32, second: u32) {
        let e1 = &self.edges[first as usize];
        let e2 = &self.edges[second as usize];
        debug_assert_eq!(e1.to, e2.from);
        let Some(mu) = Self::mu_product(e1.mu, e2.mu) else {
            return;
        };
        let key = self.mu_key(mu);
        if self.dedup.contains(&(e1.from, e2.to, key)) {
            return;
        }
        heap.push(Reverse(Bypass {
            cost: e1.nu_len.clone() + &e2.nu_len,
            from: e1.from,
            to: e2.to,
            mu_key: key,
            first,
            second,
        }));
    }

    fn push_pairs_of(&self, heap: &mut BinaryHeap<Reverse<Bypass>>, id: u32) {
        let (from, to) = {
            let e = &self.edges[id as usize];
            (e.from, e.to)
        };
        for &f in &self.out[to as usize] {
            self.try_push(heap, id, f);
        }
        for &g in &self.out[from as usize] {
            self.try_push(heap, self.edges[g as usize].inv, id);
        }
    }

    /// Runs the completion to saturation: while potential bypasses exist,
    /// the one with the least `|ν(e₁)ν(e₂)|` (ties broken by origin,
    /// target, μ, then edge ids) is added together with its inverse edge.
    ///
    /// A pending-pair heap replaces the naive rescan; since a new edge's
    /// `ν`-length equals the cost of the pair that produced it, the pop
    /// sequence is non-decreasing and the heap always selects a least
    /// valid bypass. Validity is rechecked at pop time because an earlier
    /// addition may have claimed the same `(origin, target, μ)` triple.
    pub fn complete(mut self) -> BouquetGraph {
        let mut heap: BinaryHeap<Reverse<Bypass>> = BinaryHeap::new();
        for id in 0..self.edges.len() as u32 {
            let to = self.edges[id as usize].to;
            for i in 0..self.out[to as usize].len() {
                let f = self.out[to as usize][i];
                self.try_push(&mut heap, id, f);
            }
        }
        while let Some(Reverse(bypass)) = heap.pop() {
            if self.dedup.contains(&(bypass.from, bypass.to, bypass.mu_key)) {
                continue;
            }
            let e1 = &self.edges[bypass.first as usize];
            let e2 = &self.edges[bypass.second as usize];
            let mu = Self::mu_product(e1.mu, e2.mu).expect("queued pair composes");
            let nu = self.arena.concat(e1.nu, e2.nu).expect("same arena");
            let id = self.add_edge_pair(
                bypass.from,
                bypass.to,
                mu,
                nu,
                Some((bypass.first, bypass.second)),
            );
            self.added_events += 1;
            let inv_id = self.edges[id as usize].inv;
            self.push_pairs_of(&mut heap, id);
            self.push_pairs_of(&mut heap, inv_id);
        }
        debug_assert!(
            self.added_events
                <= self.vertex_count * self.vertex_count * (self.alphabet.slot_count() + 1)
        );
        self.completed = true;
        self
    }

    /// Deterministic DOT text of the graph: one arc per inverse pair of
    /// edges, labeled with μ and the ν length; ε-self-loops are omitted.
    pub fn dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph bouquet {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {v} [shape={shape}];");
        }
        for (id, e) in self.edges.iter().enumerate() {
            let id = id as u32;
            if e.inv < id || (e.inv == id && e.mu.is_none() && e.derived.is_none()) {
                continue;
            }
            let label = match e.mu {
                Some(l) if l.is_inverse() => format!("{}^-1", self.alphabet.name(l.index())),
                Some(l) => self.alphabet.name(l.index()).to_string(),
                None => "eps".to_string(),
            };
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{} ({})\"];",
                e.from, e.to, label, e.nu_len
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The value homomorphism γ: substitutes the subgroup generator words for
/// the factor symbols and freely reduces.
pub fn evaluate_factorization(
    alphabet: &Arc<Alphabet>,
    gens: &[Word],
    factorization: &Word,
) -> Word {
    let mut acc = Word::empty(alphabet);
    for &f in factorization.letters() {
        let gen = &gens[f.index()];
        let factor = if f.is_inverse() { gen.invert() } else { gen.clone() };
        acc = acc.concat_reduce(&factor).expect("same alphabet");
    }
    acc
}

/// A shortest factorization of `w` in the subgroup generators: the word
/// over the factor alphabet plus its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geodesic {
    pub factorization: Word,
    pub length: usize,
}

/// Solves the subgroup geodesic problem for `w` over generators `gens`.
pub fn geodesic(
    alphabet: &Arc<Alphabet>,
    gens: &[Word],
    w: &Word,
    expand_budget: usize,
) -> Result<Geodesic, Error> {
    let graph = bouquet(alphabet, gens)?.complete();
    geodesic_in(&graph, w, expand_budget)
}

/// The dynamic program of the geodesic solver, reusing a completed graph.
///
/// `w` is freely reduced first; the program scans its letters keeping at
/// most one state per vertex, the one with the shortest `ν` so far, and
/// consumes only letter-labeled edges. The returned factorization `u`
/// always satisfies γ(u) = w, which is asserted. If the factorization is
/// longer than `expand_budget` symbols, [`Error::BudgetExceeded`] reports
/// its exact length.
pub fn geodesic_in(
    graph: &BouquetGraph,
    w: &Word,
    expand_budget: usize,
) -> Result<Geodesic, Error> {
    assert!(graph.completed, "graph must be completed first");
    assert!(
        w.alphabet() == &graph.alphabet,
        "word over a different alphabet"
    );
    let w = w.reduce();
    if w.is_empty() {
        return Ok(Geodesic {
            factorization: Word::empty(&graph.factors),
            length: 0,
        });
    }
    let mut arena = graph.arena.clone();
    let mut frontier: Vec<Option<(SlpRef, BigUint)>> = vec![None; graph.vertex_count];
    frontier[0] = Some((SlpRef::EMPTY, BigUint::zero()));
    for &x in w.letters() {
        let mut next: Vec<Option<(SlpRef, BigUint)>> = vec![None; graph.vertex_count];
        for v in 0..graph.vertex_count {
            let Some((u, u_len)) = frontier[v].clone() else {
                continue;
            };
            for &eid in &graph.out_by_mu[v][x.slot()] {
                let e = &graph.edges[eid as usize];
                let cand_len = u_len.clone() + &e.nu_len;
                let slot = &mut next[e.to as usize];
                let better = slot.as_ref().map_or(true, |(_, best)| cand_len < *best);
                if better {
                    let nu = arena.concat(u, e.nu).expect("same arena family");
                    *slot = Some((nu, cand_len));
                }
            }
        }
        frontier = next;
        if frontier.iter().all(Option::is_none) {
            return Err(Error::NotInSubgroup);
        }
    }
    let Some((u, u_len)) = frontier[0].clone() else {
        return Err(Error::NotInSubgroup);
    };
    let letters = arena.expand(u, expand_budget)?;
    let factorization = Word::from_letters(&graph.factors, letters).unwrap();
    let value = evaluate_factorization(&graph.alphabet, &graph.generators, &factorization);
    assert_eq!(value, w, "factorization must evaluate to the input word");
    let length = factorization.len();
    debug_assert_eq!(BigUint::from(length), u_len);
    Ok(Geodesic {
        factorization,
        length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x12() -> Arc<Alphabet> {
        Alphabet::new(["x1", "x2"]).unwrap()
    }

    fn w(alphabet: &Arc<Alphabet>, text: &str) -> Word {
        Word::parse(alphabet, text).unwrap()
    }

    fn gens(alphabet: &Arc<Alphabet>, texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| w(alphabet, t)).collect()
    }

    #[test]
    fn bouquet_of_x1_and_x1x2() {
        let a = x12();
        let graph = bouquet(&a, &gens(&a, &["x1", "x1 x2"])).unwrap();
        assert_eq!(graph.vertex_count(), 2);
        // Positive data: loop (x1, h1) at 0; 0→1 (x1, ε); 1→0 (x2, h2);
        // plus inverse edges and one ε-loop per vertex.
        assert_eq!(graph.edges().len(), 3 * 2 + 2);
        let x1 = Letter::positive(0);
        let loops: Vec<_> = graph
            .edges()
            .iter()
            .filter(|e| e.from == 0 && e.to == 0 && e.mu == Some(x1))
            .collect();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].nu_len, BigUint::from(1u32));
        let inner: Vec<_> = graph
            .edges()
            .iter()
            .filter(|e| e.from == 0 && e.to == 1 && e.mu == Some(x1))
            .collect();
        assert_eq!(inner.len(), 1);
        assert!(inner[0].nu.is_empty());
    }

    #[test]
    fn bouquet_single_letter_and_trivial() {
        let a = x12();
        let graph = bouquet(&a, &gens(&a, &["x1"])).unwrap();
        assert_eq!(graph.vertex_count(), 1);
        assert_eq!(graph.edges().len(), 3); // loop, its inverse, ε-loop
        assert_eq!(
            bouquet(&a, &[Word::empty(&a)]).unwrap_err(),
            Error::TrivialGenerator(0)
        );
    }

    #[test]
    fn completion_finds_the_x2_shortcut() {
        let a = x12();
        let graph = bouquet(&a, &gens(&a, &["x1", "x1 x2"])).unwrap().complete();
        let x2 = Letter::positive(1);
        let shortcut: Vec<_> = graph
            .edges()
            .iter()
            .filter(|e| e.from == 0 && e.to == 0 && e.mu == Some(x2))
            .collect();
        assert_eq!(shortcut.len(), 1);
        assert_eq!(shortcut[0].nu_len, BigUint::from(2u32));
        let letters = graph.arena().expand(shortcut[0].nu, 16).unwrap();
        assert_eq!(letters, vec![Letter::negative(0), Letter::positive(1)]);
    }

    #[test]
    fn completion_on_single_loop_adds_nothing() {
        let a = x12();
        let graph = bouquet(&a, &gens(&a, &["x1"])).unwrap().complete();
        assert_eq!(graph.added_edges(), 0);
        assert_eq!(graph.edges().len(), graph.initial_edge_count());
    }

    #[test]
    fn completion_respects_dedup_bound() {
        let a = x12();
        for texts in [
            vec!["x1", "x1 x2"],
            vec!["x1 x2 x1^-1", "x2"],
            vec!["x1 x1", "x2 x1", "x1 x2 x2"],
        ] {
            let graph = bouquet(&a, &gens(&a, &texts)).unwrap().complete();
            let v = graph.vertex_count();
            let bound = v * v * (graph.alphabet().slot_count() + 1);
            assert!(graph.added_edges() <= bound);
            // No duplicate (origin, target, μ) among completed edges.
            let mut seen = HashSet::new();
            for e in graph.edges().iter().filter(|e| e.derived.is_some()) {
                assert!(seen.insert((e.from, e.to, graph.mu_key(e.mu))));
            }
            // One arena node per generator terminal plus at most one per
            // completion event; inverse partners share nodes via flags.
            assert!(graph.arena().node_count() <= graph.initial_edge_count() + graph.added_edges());
        }
    }

    #[test]
    fn geodesic_examples() {
        let a = x12();
        let gs = gens(&a, &["x1", "x1 x2"]);
        let factors = factor_alphabet(2);

        let result = geodesic(&a, &gs, &w(&a, "x2"), DEFAULT_EXPAND_BUDGET).unwrap();
        assert_eq!(result.length, 2);
        assert_eq!(result.factorization, w(&factors, "h1^-1 h2"));

        let result = geodesic(&a, &gs, &w(&a, "x1 x2"), DEFAULT_EXPAND_BUDGET).unwrap();
        assert_eq!(result.length, 1);
        assert_eq!(result.factorization, w(&factors, "h2"));

        assert_eq!(
            geodesic(&a, &gens(&a, &["x1"]), &w(&a, "x2"), DEFAULT_EXPAND_BUDGET).unwrap_err(),
            Error::NotInSubgroup
        );

        let ab = Alphabet::new(["a", "b"]).unwrap();
        let result = geodesic(
            &ab,
            &gens(&ab, &["a b a^-1"]),
            &w(&ab, "a b b a^-1"),
            DEFAULT_EXPAND_BUDGET,
        )
        .unwrap();
        assert_eq!(result.length, 2);
        assert_eq!(result.factorization, w(&factor_alphabet(1), "h1^2"));
    }

    #[test]
    fn geodesic_of_empty_word() {
        let a = x12();
        let result = geodesic(&a, &gens(&a, &["x1"]), &Word::empty(&a), 10).unwrap();
        assert_eq!(result.length, 0);
        assert!(result.factorization.is_empty());
    }

    /// The DP decides membership through a completely different engine
    /// than the folded-graph tracer; the two must agree word for word.
    #[test]
    fn geodesic_membership_matches_stallings_membership() {
        let a = x12();
        let mut rng = crate::words::test_support::Rng::new(0x60d);
        for _ in 0..40 {
            let count = 1 + rng.below(3);
            let gs: Vec<Word> = (0..count)
                .map(|_| {
                    let len = 1 + rng.below(4);
                    let letters = (0..len)
                        .map(|_| Letter::from_slot(rng.below(a.slot_count())))
                        .collect();
                    Word::from_letters(&a, letters).unwrap()
                })
                .collect();
            if gs.iter().any(|g| g.reduce().is_empty()) {
                continue;
            }
            let h = crate::graph::stallings(&a, &gs);
            let graph = bouquet(&a, &gs).unwrap().complete();
            for _ in 0..25 {
                let len = rng.below(7);
                let letters = (0..len)
                    .map(|_| Letter::from_slot(rng.below(a.slot_count())))
                    .collect();
                let word = Word::from_letters(&a, letters).unwrap();
                let via_dp = match geodesic_in(&graph, &word, DEFAULT_EXPAND_BUDGET) {
                    Ok(_) => true,
                    Err(Error::NotInSubgroup) => false,
                    Err(other) => panic!("unexpected: {other}"),
                };
                assert_eq!(h.contains(&word), via_dp, "disagree on {word} in {gs:?}");
            }
        }
    }

    #[test]
    fn completed_circuits_satisfy_label_homomorphism() {
        let a = x12();
        let graph = bouquet(&a, &gens(&a, &["x1 x2", "x2 x2 x1"]))
            .unwrap()
            .complete();
        let mut rng = crate::words::test_support::Rng::new(0xabcd);
        for _ in 0..200 {
            // Random walk from the root, then walk back along the inverse
            // edges: a circuit by construction.
            let mut path: Vec<u32> = Vec::new();
            let mut v = 0usize;
            for _ in 0..rng.below(8) {
                let out = graph.out_edges(v);
                let eid = out[rng.below(out.len())];
                path.push(eid);
                v = graph.edges()[eid as usize].to as usize;
            }
            for &eid in path.clone().iter().rev() {
                path.push(graph.edges()[eid as usize].inv);
            }
            let mut mu = Word::empty(&a);
            let mut arena = graph.arena().clone();
            let mut nu = SlpRef::EMPTY;
            for &eid in &path {
                let e = &graph.edges()[eid as usize];
                if let Some(x) = e.mu {
                    mu = mu
                        .concat(&Word::from_letters(&a, vec![x]).unwrap())
                        .unwrap();
                }
                nu = arena.concat(nu, e.nu).unwrap();
            }
            let nu_word =
                Word::from_letters(&graph.factor_alphabet(), arena.expand(nu, 1 << 20).unwrap())
                    .unwrap();
            let value = evaluate_factorization(&a, graph.generators(), &nu_word);
            assert_eq!(mu.reduce(), value);
        }
    }

    #[test]
    fn completed_edges_unfold_to_bouquet_paths() {
        let a = x12();
        let graph = bouquet(&a, &gens(&a, &["x1", "x1 x2"])).unwrap().complete();
        // Recursively replacing a completed edge by its generating pair
        // must reach initial edges forming a path with the same endpoints
        // and labels.
        fn unfold(graph: &BouquetGraph, eid: u32, out: &mut Vec<u32>) {
            let e = &graph.edges()[eid as usize];
            match e.derived {
                None => out.push(eid),
                Some((a, b)) => {
                    unfold(graph, a, out);
                    unfold(graph, b, out);
                }
            }
        }
        for (eid, e) in graph.edges().iter().enumerate() {
            if e.derived.is_none() {
                continue;
            }
            let mut path = Vec::new();
            unfold(&graph, eid as u32, &mut path);
            let mut v = e.from;
            let mut mu = Word::empty(&a);
            let mut arena = graph.arena().clone();
            let mut nu = SlpRef::EMPTY;
            for &step in &path {
                let se = &graph.edges()[step as usize];
                assert!(se.derived.is_none());
                assert_eq!(se.from, v);
                v = se.to;
                if let Some(x) = se.mu {
                    mu = mu.concat(&Word::from_letters(&a, vec![x]).unwrap()).unwrap();
                }
                nu = arena.concat(nu, se.nu).unwrap();
            }
            assert_eq!(v, e.to);
            let mu_edge = match e.mu {
                None => Word::empty(&a),
                Some(x) => Word::from_letters(&a, vec![x]).unwrap(),
            };
            assert_eq!(mu.reduce(), mu_edge);
            assert_eq!(
                arena.expand(nu, 1 << 20).unwrap(),
                graph.arena().expand(e.nu, 1 << 20).unwrap()
            );
        }
    }
}
