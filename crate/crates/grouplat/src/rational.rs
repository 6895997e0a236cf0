//! Distances between rational subsets, subgroups and cosets of a free
//! group, computed on products of deterministic acceptors.
//!
//! A [`ReducedAcceptor`] is a deterministic partial automaton over signed
//! letters whose reduced accepted words are the set of interest. Subgroup
//! and coset acceptors come straight from folded Stallings graphs, whose
//! readable words are closed under free reduction; user-supplied automata
//! must accept only freely reduced words, which [`ReducedAcceptor::from_parts`]
//! checks exactly.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::graph::{FoldedGraph, BASE};
use crate::words::{Alphabet, Letter, Word};
use crate::Error;

/// Deterministic acceptor over `X ∪ X⁻¹` with one initial state and a set
/// of accepting states.
#[derive(Debug, Clone)]
pub struct ReducedAcceptor {
    alphabet: Arc<Alphabet>,
    transitions: Vec<Vec<Option<u32>>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl ReducedAcceptor {
    /// Acceptor of the reduced words of the subgroup: states are the
    /// folded graph's vertices, the base is both initial and accepting.
    pub fn from_subgroup(h: &FoldedGraph) -> ReducedAcceptor {
        let mut accepting = vec![false; h.vertex_count()];
        accepting[BASE] = true;
        ReducedAcceptor {
            alphabet: Arc::clone(h.alphabet()),
            transitions: h.transitions().to_vec(),
            initial: BASE,
            accepting,
        }
    }

    /// Acceptor of the reduced words of the coset `Hg`: a path spelling
    /// `g` is attached at the base and folded, and the image of its
    /// terminus becomes the accepting state.
    pub fn from_coset(h: &FoldedGraph, g: &Word) -> ReducedAcceptor {
        let (folded, term) = h.with_path(g);
        let mut accepting = vec![false; folded.vertex_count()];
        accepting[term] = true;
        ReducedAcceptor {
            alphabet: Arc::clone(folded.alphabet()),
            transitions: folded.transitions().to_vec(),
            initial: BASE,
            accepting,
        }
    }

    /// Builds an acceptor from explicit parts, validating determinism and
    /// that every accepted word is freely reduced. Rejects rather than
    /// determinizes or normalizes.
    pub fn from_parts(
        alphabet: &Arc<Alphabet>,
        states: usize,
        initial: usize,
        accepting: &[usize],
        transitions: &[(usize, Letter, usize)],
    ) -> Result<ReducedAcceptor, Error> {
        if states == 0 {
            return Err(Error::InvalidAcceptor(
                "acceptor needs at least one state".into(),
            ));
        }
        if initial >= states {
            return Err(Error::InvalidAcceptor(format!(
                "initial state {initial} out of range"
            )));
        }
        let slot_count = alphabet.slot_count();
        let mut table = vec![vec![None; slot_count]; states];
        for &(from, x, to) in transitions {
            if from >= states || to >= states {
                return Err(Error::InvalidAcceptor(format!(
                    "transition ({from}, {to}) out of range"
                )));
            }
            if x.index() >= alphabet.rank() {
                return Err(Error::LetterOutOfRange {
                    index: x.index(),
                    rank: alphabet.rank(),
                });
            }
            let cell = &mut table[from][x.slot()];
            if let Some(prev) = *cell {
                if prev as usize != to {
                    let mut name = alphabet.name(x.index()).to_string();
                    if x.is_inverse() {
                        name.push_str("^-1");
                    }
                    return Err(Error::Nondeterministic {
                        state: from,
                        letter: name,
                    });
                }
            }
            *cell = Some(to as u32);
        }
        let mut accept_flags = vec![false; states];
        for &s in accepting {
            if s >= states {
                return Err(Error::InvalidAcceptor(format!(
                    "accepting state {s} out of range"
                )));
            }
            accept_flags[s] = true;
        }
        let acceptor = ReducedAcceptor {
            alphabet: Arc::clone(alphabet),
            transitions: table,
            initial,
            accepting: accept_flags,
        };
        acceptor.check_reduced_language()?;
        Ok(acceptor)
    }

    /// An accepted word is unreduced iff some reachable state can read
    /// `x x⁻¹` and then still reach acceptance. Checking that pattern over
    /// all states decides reducedness of the whole language exactly.
    fn check_reduced_language(&self) -> Result<(), Error> {
        let reach = self.reachable();
        let coreach = self.dist_to_accept();
        for q in 0..self.state_count() {
            if !reach[q] {
                continue;
            }
            for slot in 0..self.alphabet.slot_count() {
                let x = Letter::from_slot(slot);
                if let Some(q1) = self.step(q, x) {
                    if let Some(q2) = self.step(q1, x.inv()) {
                        if coreach[q2].is_some() {
                            return Err(Error::UnreducedLanguage);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn step(&self, state: usize, x: Letter) -> Option<usize> {
        self.transitions[state][x.slot()].map(|t| t as usize)
    }

    /// Exact word acceptance (no free reduction of the input).
    pub fn accepts(&self, w: &Word) -> bool {
        assert!(
            w.alphabet() == &self.alphabet,
            "word over a different alphabet"
        );
        let mut state = self.initial;
        for &x in w.letters() {
            match self.step(state, x) {
                Some(t) => state = t,
                None => return false,
            }
        }
        self.accepting[state]
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for slot in 0..self.alphabet.slot_count() {
                if let Some(t) = self.step(q, Letter::from_slot(slot)) {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// Distance from every state to the nearest accepting state, by a
    /// multi-source breadth-first search over reversed transitions.
    pub fn dist_to_accept(&self) -> Vec<Option<u32>> {
        let n = self.state_count();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for slot in 0..self.alphabet.slot_count() {
                if let Some(t) = self.step(q, Letter::from_slot(slot)) {
                    rev[t].push(q);
                }
            }
        }
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for q in 0..n {
            if self.accepting[q] {
                dist[q] = Some(0);
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            let d = dist[q].unwrap();
            for &p in &rev[q] {
                if dist[p].is_none() {
                    dist[p] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    pub fn language_is_empty(&self) -> bool {
        self.dist_to_accept()[self.initial].is_none()
    }

    /// Letters of a shortest word accepted from `state`, following the
    /// distance table in slot order.
    fn shortest_completion(&self, dist: &[Option<u32>], mut state: usize) -> Vec<Letter> {
        let mut letters = Vec::new();
        let mut d = dist[state].expect("state must reach acceptance");
        while d > 0 {
            let mut advanced = false;
            for slot in 0..self.alphabet.slot_count() {
                let x = Letter::from_slot(slot);
                if let Some(t) = self.step(state, x) {
                    if dist[t] == Some(d - 1) {
                        letters.push(x);
                        state = t;
                        d -= 1;
                        advanced = true;
                        break;
                    }
                }
            }
            assert!(advanced, "distance table inconsistent");
        }
        letters
    }
}

/// Breadth-first exploration of the synchronized product of two acceptors
/// starting at a pair of states. Records tree words and the first
/// non-tree edge (which witnesses a cycle in the component).
struct Product {
    states: Vec<(usize, usize)>,
    parent: Vec<Option<(usize, Letter)>>,
    chord: Option<(usize, Letter, usize)>,
}

impl Product {
    fn explore<FA, FB>(slot_count: usize, start: (usize, usize), step_a: FA, step_b: FB) -> Product
    where
        FA: Fn(usize, Letter) -> Option<usize>,
        FB: Fn(usize, Letter) -> Option<usize>,
    {
        let mut index: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
        let mut product = Product {
            states: vec![start],
            parent: vec![None],
            chord: None,
        };
        let mut head = 0;
        while head < product.states.len() {
            let sid = head;
            let (p, q) = product.states[sid];
            head += 1;
            for slot in 0..slot_count {
                let x = Letter::from_slot(slot);
                let (Some(p2), Some(q2)) = (step_a(p, x), step_b(q, x)) else {
                    continue;
                };
                match index.get(&(p2, q2)).copied() {
                    None => {
                        let tid = product.states.len();
                        product.states.push((p2, q2));
                        index.insert((p2, q2), tid);
                        product.parent.push(Some((sid, x)));
                    }
                    Some(tid) => {
                        // Ignore re-traversals of tree edges; anything else
                        // is a chord closing a cycle.
                        if product.parent[sid] == Some((tid, x.inv()))
                            || product.parent[tid] == Some((sid, x))
                        {
                            continue;
                        }
                        if product.chord.is_none() {
                            product.chord = Some((sid, x, tid));
                        }
                    }
                }
            }
        }
        product
    }

    /// Letters of the tree path from the start pair to `sid`.
    fn tree_word(&self, mut sid: usize) -> Vec<Letter> {
        let mut letters = Vec::new();
        while let Some((parent, x)) = self.parent[sid] {
            letters.push(x);
            sid = parent;
        }
        letters.reverse();
        letters
    }
}

/// Distance between two nonempty rational subsets given by deterministic
/// acceptors of reduced words: the minimum of `|reduce(r⁻¹ s)|` over
/// accepted pairs, together with a witnessing pair.
///
/// Over the reachable product, the minimum of (distance to acceptance in
/// the first factor) + (distance in the second) is exactly the subset
/// distance, realized by completing the common prefix on both sides.
pub fn rational_distance(
    a: &ReducedAcceptor,
    b: &ReducedAcceptor,
) -> Result<(Word, Word, usize), Error> {
    assert!(
        a.alphabet() == b.alphabet(),
        "acceptors over different alphabets"
    );
    let alphabet = a.alphabet();
    let dist_a = a.dist_to_accept();
    let dist_b = b.dist_to_accept();
    if dist_a[a.initial].is_none() || dist_b[b.initial].is_none() {
        return Err(Error::EmptyLanguage);
    }

    let product = Product::explore(
        alphabet.slot_count(),
        (a.initial, b.initial),
        |p, x| a.step(p, x),
        |q, x| b.step(q, x),
    );
    let mut best: Option<(usize, usize)> = None; // (distance, product state)
    for (sid, &(p, q)) in product.states.iter().enumerate() {
        if let (Some(da), Some(db)) = (dist_a[p], dist_b[q]) {
            let sum = (da + db) as usize;
            if best.map_or(true, |(d, _)| sum < d) {
                best = Some((sum, sid));
            }
        }
    }
    let (d, sid) = best.expect("initial pair always has completions");

    let (p, q) = product.states[sid];
    let prefix = product.tree_word(sid);
    let mut r_letters = prefix.clone();
    r_letters.extend(a.shortest_completion(&dist_a, p));
    let mut s_letters = prefix;
    s_letters.extend(b.shortest_completion(&dist_b, q));
    let r = Word::from_letters(alphabet, r_letters).unwrap();
    let s = Word::from_letters(alphabet, s_letters).unwrap();
    assert!(a.accepts(&r) && b.accepts(&s));
    let realized = r.invert().concat_reduce(&s).unwrap().len();
    assert_eq!(realized, d, "witness pair must realize the distance");
    Ok((r.reduce(), s.reduce(), d))
}

/// Per-vertex table of shortest reduced completions to the base, indexed
/// by a banned first letter (`None` = unconstrained). Entry `(v, ban)` is
/// the length of a shortest reduced word readable from `v` to the base
/// whose first letter differs from `ban`.
struct CompletionTable {
    slot_count: usize,
    dist: Vec<Option<u32>>,
}

impl CompletionTable {
    fn build(h: &FoldedGraph) -> CompletionTable {
        let slot_count = h.alphabet().slot_count();
        let bans = slot_count + 1;
        let mut dist: Vec<Option<u32>> = vec![None; h.vertex_count() * bans];
        let mut queue = VecDeque::new();
        for ban in 0..bans {
            dist[BASE * bans + ban] = Some(0);
            queue.push_back(BASE * bans + ban);
        }
        while let Some(state) = queue.pop_front() {
            let (v, ban) = (state / bans, state % bans);
            let d = dist[state].unwrap();
            // Bans encode the inverse of the letter just read, so a move
            // into (v, ban) read ban⁻¹ and originated at the vertex one
            // ban-step away, under any ban that allowed that letter.
            if ban == 0 {
                continue;
            }
            let g = Letter::from_slot(ban - 1);
            let Some(u) = h.step(v, g) else { continue };
            let read = g.inv();
            for prev_ban in 0..bans {
                if prev_ban > 0 && Letter::from_slot(prev_ban - 1) == read {
                    continue;
                }
                let prev = u * bans + prev_ban;
                if dist[prev].is_none() {
                    dist[prev] = Some(d + 1);
                    queue.push_back(prev);
                }
            }
        }
        CompletionTable { slot_count, dist }
    }

    fn get(&self, v: usize, ban: Option<Letter>) -> Option<u32> {
        let bans = self.slot_count + 1;
        self.dist[v * bans + ban.map_or(0, |l| l.slot() + 1)]
    }

    /// Extracts a shortest reduced completion from `v` under `ban` by
    /// walking the distance decrements in slot order.
    fn extract(&self, h: &FoldedGraph, mut v: usize, mut ban: Option<Letter>) -> Vec<Letter> {
        let mut d = self.get(v, ban).expect("no completion to extract");
        let mut letters = Vec::new();
        while d > 0 {
            let mut advanced = false;
            for slot in 0..self.slot_count {
                let x = Letter::from_slot(slot);
                if Some(x) == ban {
                    continue;
                }
                if let Some(t) = h.step(v, x) {
                    if self.get(t, Some(x.inv())) == Some(d - 1) {
                        letters.push(x);
                        v = t;
                        ban = Some(x.inv());
                        d -= 1;
                        advanced = true;
                        break;
                    }
                }
            }
            assert!(advanced, "completion table inconsistent");
        }
        assert_eq!(v, BASE);
        letters
    }
}

/// First-letter options for completions out of one factor state: `None`
/// stands for the empty completion (available at the base only).
fn completion_options(
    h: &FoldedGraph,
    table: &CompletionTable,
    v: usize,
) -> Vec<(Option<Letter>, usize)> {
    let mut options = Vec::new();
    if v == BASE {
        options.push((None, 0));
    }
    for slot in 0..h.alphabet().slot_count() {
        let x = Letter::from_slot(slot);
        if let Some(t) = h.step(v, x) {
            if let Some(d) = table.get(t, Some(x.inv())) {
                options.push((Some(x), 1 + d as usize));
            }
        }
    }
    options
}

enum DistancePlan {
    GirthFirst(Word),
    GirthSecond(Word),
    Pair {
        sid: usize,
        first: Option<Letter>,
        second: Option<Letter>,
    },
}

/// Distance between two subgroups: elements `h ∈ H`, `k ∈ K`, not both
/// trivial, minimizing `|reduce(h⁻¹k)|`.
///
/// If the base component of the product contains a cycle the intersection
/// is nontrivial and the cycle label is a common element at distance 0.
/// Otherwise the component is a tree and the minimum is taken over the
/// girth of either factor and, per product state, over pairs of reduced
/// completions with distinct first letters — the distinctness keeps the
/// excluded pair `(ε, ε)` and its conjugated disguises out of the
/// candidate set and makes every candidate sum exactly realizable.
pub fn subgroup_distance(h: &FoldedGraph, k: &FoldedGraph) -> Result<(Word, Word, usize), Error> {
    assert!(
        h.alphabet() == k.alphabet(),
        "subgroups over different alphabets"
    );
    let alphabet = h.alphabet();
    let girth_h = h.shortest_element();
    let girth_k = k.shortest_element();
    if girth_h.is_none() && girth_k.is_none() {
        return Err(Error::BothTrivial);
    }

    let product = Product::explore(
        alphabet.slot_count(),
        (BASE, BASE),
        |p, x| h.step(p, x),
        |q, x| k.step(q, x),
    );

    if let Some((sid, x, tid)) = product.chord {
        let f_s = Word::from_letters(alphabet, product.tree_word(sid)).unwrap();
        let f_t = Word::from_letters(alphabet, product.tree_word(tid)).unwrap();
        let step = Word::from_letters(alphabet, vec![x]).unwrap();
        let witness = f_s
            .concat_reduce(&step)
            .unwrap()
            .concat_reduce(&f_t.invert())
            .unwrap();
        assert!(!witness.is_empty(), "cycle label is a nontrivial element");
        assert!(h.contains(&witness) && k.contains(&witness));
        return Ok((witness.clone(), witness, 0));
    }

    let table_h = CompletionTable::build(h);
    let table_k = CompletionTable::build(k);
    let mut best: Option<(usize, DistancePlan)> = None;
    let consider = |d: usize, plan: DistancePlan, best: &mut Option<(usize, DistancePlan)>| {
        if best.as_ref().map_or(true, |(b, _)| d < *b) {
            *best = Some((d, plan));
        }
    };
    if let Some((w, len)) = girth_h {
        consider(len, DistancePlan::GirthFirst(w), &mut best);
    }
    if let Some((w, len)) = girth_k {
        consider(len, DistancePlan::GirthSecond(w), &mut best);
    }
    for (sid, &(p, q)) in product.states.iter().enumerate().skip(1) {
        let options_h = completion_options(h, &table_h, p);
        let options_k = completion_options(k, &table_k, q);
        for &(fh, dh) in &options_h {
            for &(fk, dk) in &options_k {
                let compatible = fh.is_none() || fk.is_none() || fh != fk;
                if compatible {
                    consider(
                        dh + dk,
                        DistancePlan::Pair {
                            sid,
                            first: fh,
                            second: fk,
                        },
                        &mut best,
                    );
                }
            }
        }
    }

    let (d, plan) = best.expect("some candidate always exists");
    let (h_word, k_word) = match plan {
        DistancePlan::GirthFirst(w) => (w, Word::empty(alphabet)),
        DistancePlan::GirthSecond(w) => (Word::empty(alphabet), w),
        DistancePlan::Pair { sid, first, second } => {
            let (p, q) = product.states[sid];
            let prefix = product.tree_word(sid);
            let mut u = prefix.clone();
            if let Some(x) = first {
                u.push(x);
                u.extend(table_h.extract(h, h.step(p, x).unwrap(), Some(x.inv())));
            }
            let mut t = prefix;
            if let Some(x) = second {
                t.push(x);
                t.extend(table_k.extract(k, k.step(q, x).unwrap(), Some(x.inv())));
            }
            (
                Word::from_letters(alphabet, u).unwrap().reduce(),
                Word::from_letters(alphabet, t).unwrap().reduce(),
            )
        }
    };
    assert!(
        !(h_word.is_empty() && k_word.is_empty()),
        "witness pair may not be (identity, identity)"
    );
    assert!(h.contains(&h_word) && k.contains(&k_word));
    let realized = h_word.invert().concat_reduce(&k_word).unwrap().len();
    assert_eq!(realized, d, "witness pair must realize the distance");
    Ok((h_word, k_word, d))
}
