//! Deliberately naive exponential-time references for every solver.
//!
//! Each oracle enumerates candidates directly — reduced words by a
//! prefix tree without immediate backtracking, factorizations breadth
//! first — and settles questions by membership tests alone, never by the
//! search machinery it is checking. Budgets bound the enumeration and
//! are enforced exactly.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::graph::{stallings, FoldedGraph};
use crate::nilpotent::{MalcevVector, NilpotentPresentation};
use crate::rational::ReducedAcceptor;
use crate::words::{Alphabet, Letter, Word};
use crate::Error;

/// Enumeration bounds; every oracle halts exactly at its budget.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub max_word_len: usize,
    pub max_factorization_len: usize,
    pub max_candidates: usize,
}

impl SearchBudget {
    pub fn new(max_word_len: usize, max_factorization_len: usize) -> SearchBudget {
        SearchBudget {
            max_word_len,
            max_factorization_len,
            max_candidates: 50_000_000,
        }
    }
}

/// Calls `visit` on every freely reduced word of length `exact_len`, in
/// lexicographic slot order. Returns the flow state of the last call.
fn for_each_reduced_word<F>(
    alphabet: &Arc<Alphabet>,
    exact_len: usize,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Letter]) -> ControlFlow<()>,
{
    fn recurse<F>(slot_count: usize, prefix: &mut Vec<Letter>, left: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Letter]) -> ControlFlow<()>,
    {
        if left == 0 {
            return visit(prefix);
        }
        for slot in 0..slot_count {
            let x = Letter::from_slot(slot);
            if prefix.last() == Some(&x.inv()) {
                continue;
            }
            prefix.push(x);
            recurse(slot_count, prefix, left - 1, visit)?;
            prefix.pop();
        }
        ControlFlow::Continue(())
    }
    let mut prefix = Vec::with_capacity(exact_len);
    recurse(alphabet.slot_count(), &mut prefix, exact_len, visit)
}

/// Distance from `g` to the subgroup: the least length of a reduced word
/// in the coset `Hg`, found by enumerating all reduced words of length
/// at most `|g|` (the identity always realizes distance `|g|`).
pub fn oracle_closest_free(
    alphabet: &Arc<Alphabet>,
    gens: &[Word],
    g: &Word,
    budget: &SearchBudget,
) -> Result<usize, Error> {
    let g = g.reduce();
    if g.len() > budget.max_word_len {
        return Err(Error::BudgetExceeded {
            length: BigUint::from(g.len()),
            budget: budget.max_word_len,
        });
    }
    let h = stallings(alphabet, gens);
    let g_inv = g.invert();
    let mut candidates = 0usize;
    for len in 0..=g.len() {
        let mut found = false;
        let _ = for_each_reduced_word(alphabet, len, &mut |letters| {
            candidates += 1;
            let u = Word::from_letters(alphabet, letters.to_vec()).unwrap();
            // u ∈ Hg iff u·g⁻¹ ∈ H.
            if h.contains(&u.concat_reduce(&g_inv).unwrap()) {
                found = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if found {
            return Ok(len);
        }
        if candidates > budget.max_candidates {
            return Err(Error::BudgetExceeded {
                length: BigUint::from(candidates),
                budget: budget.max_candidates,
            });
        }
    }
    unreachable!("g itself lies in the coset Hg");
}

/// Least length of a nonempty reduced word in the subgroup, up to the
/// budget; `None` means nothing was found within it.
pub fn oracle_shortest_free(
    alphabet: &Arc<Alphabet>,
    gens: &[Word],
    budget: &SearchBudget,
) -> Option<usize> {
    let h = stallings(alphabet, gens);
    let mut candidates = 0usize;
    for len in 1..=budget.max_word_len {
        let mut found = false;
        let _ = for_each_reduced_word(alphabet, len, &mut |letters| {
            candidates += 1;
            if candidates > budget.max_candidates {
                return ControlFlow::Break(());
            }
            let u = Word::from_letters(alphabet, letters.to_vec()).unwrap();
            if h.contains(&u) {
                found = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if found {
            return Some(len);
        }
        if candidates > budget.max_candidates {
            return None;
        }
    }
    None
}

fn members_up_to(
    alphabet: &Arc<Alphabet>,
    h: &FoldedGraph,
    max_len: usize,
    max_candidates: usize,
) -> Result<Vec<Word>, Error> {
    let mut members = Vec::new();
    let mut candidates = 0usize;
    for len in 0..=max_len {
        let mut overflow = false;
        let _ = for_each_reduced_word(alphabet, len, &mut |letters| {
            candidates += 1;
            if candidates > max_candidates {
                overflow = true;
                return ControlFlow::Break(());
            }
            let u = Word::from_letters(alphabet, letters.to_vec()).unwrap();
            if h.contains(&u) {
                members.push(u);
            }
            ControlFlow::Continue(())
        });
        if overflow {
            return Err(Error::BudgetExceeded {
                length: BigUint::from(candidates),
                budget: max_candidates,
            });
        }
    }
    Ok(members)
}

/// Subgroup distance by exhaustion: the minimum of `|reduce(h⁻¹k)|` over
/// membership-filtered reduced words within the budget, excluding the
/// pair of identities.
pub fn oracle_distance_free(
    alphabet: &Arc<Alphabet>,
    gens1: &[Word],
    gens2: &[Word],
    budget: &SearchBudget,
) -> Result<usize, Error> {
    let h = stallings(alphabet, gens1);
    let k = stallings(alphabet, gens2);
    let hs = members_up_to(alphabet, &h, budget.max_word_len, budget.max_candidates)?;
    let ks = members_up_to(alphabet, &k, budget.max_word_len, budget.max_candidates)?;
    let mut best: Option<usize> = None;
    for hw in &hs {
        for kw in &ks {
            if hw.is_empty() && kw.is_empty() {
                continue;
            }
            let d = hw.invert().concat_reduce(kw).unwrap().len();
            if best.map_or(true, |b| d < b) {
                best = Some(d);
            }
        }
    }
    best.ok_or(Error::BothTrivial)
}

/// Distance between the languages of two acceptors by enumerating all
/// accepted words within the budget; `None` when either side has no
/// accepted word that short.
pub fn oracle_rational(
    a: &ReducedAcceptor,
    b: &ReducedAcceptor,
    budget: &SearchBudget,
) -> Option<usize> {
    fn accepted_up_to(acc: &ReducedAcceptor, max_len: usize, max_candidates: usize) -> Option<Vec<Word>> {
        let alphabet = acc.alphabet();
        let mut found = Vec::new();
        // Plain word enumeration (not only reduced): user acceptors may
        // accept any words, though validated ones are reduced anyway.
        let mut layer: Vec<(usize, Vec<Letter>)> = vec![(acc.initial(), Vec::new())];
        if acc.is_accepting(acc.initial()) {
            found.push(Word::empty(alphabet));
        }
        let mut candidates = 0usize;
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (state, letters) in &layer {
                for slot in 0..alphabet.slot_count() {
                    let x = Letter::from_slot(slot);
                    if let Some(t) = acc.step(*state, x) {
                        candidates += 1;
                        if candidates > max_candidates {
                            return None;
                        }
                        let mut ext = letters.clone();
                        ext.push(x);
                        if acc.is_accepting(t) {
                            found.push(Word::from_letters(alphabet, ext.clone()).unwrap());
                        }
                        next.push((t, ext));
                    }
                }
            }
            layer = next;
        }
        Some(found)
    }
    let left = accepted_up_to(a, budget.max_word_len, budget.max_candidates)?;
    let right = accepted_up_to(b, budget.max_word_len, budget.max_candidates)?;
    let mut best: Option<usize> = None;
    for r in &left {
        for s in &right {
            let d = r.invert().concat_reduce(s).unwrap().len();
            if best.map_or(true, |b| d < b) {
                best = Some(d);
            }
        }
    }
    best
}

/// Least number of factors expressing `w` in the generators, by
/// breadth-first search over reduced factorization words; `None` if not
/// expressible within the budget.
pub fn oracle_geodesic(
    alphabet: &Arc<Alphabet>,
    gens: &[Word],
    w: &Word,
    budget: &SearchBudget,
) -> Option<usize> {
    let w = w.reduce();
    let reduced: Vec<Word> = gens.iter().map(Word::reduce).collect();
    if w.is_empty() {
        return Some(0);
    }
    // Values of all factorizations of the current length; a factorization
    // with an adjacent inverse pair is never shorter than one without, so
    // enumerating reduced factor sequences suffices.
    let mut layer: Vec<(Word, Option<Letter>)> = vec![(Word::empty(alphabet), None)];
    for k in 1..=budget.max_factorization_len {
        let mut next = Vec::new();
        for (value, last) in &layer {
            for slot in 0..2 * reduced.len() {
                let f = Letter::from_slot(slot);
                if *last == Some(f.inv()) {
                    continue;
                }
                let factor = if f.is_inverse() {
                    reduced[f.index()].invert()
                } else {
                    reduced[f.index()].clone()
                };
                let extended = value.concat_reduce(&factor).unwrap();
                if extended == w {
                    return Some(k);
                }
                next.push((extended, Some(f)));
                if next.len() > budget.max_candidates {
                    return None;
                }
            }
        }
        layer = next;
    }
    None
}

/// All subgroup elements expressible as products of at most
/// `max_factorization_len` generator powers with exponents in `[-2, 2]`,
/// as Malcev vectors.
pub fn oracle_nilpotent_subgroup(
    p: &NilpotentPresentation,
    gens: &[Word],
    budget: &SearchBudget,
) -> Result<Vec<MalcevVector>, Error> {
    let gen_vecs = p.collect_all(gens);
    let mut seen: HashSet<MalcevVector> = HashSet::new();
    let mut out = vec![MalcevVector::zero(p.basis())];
    seen.insert(out[0].clone());
    let mut layer = out.clone();
    let mut candidates = 0usize;
    for _ in 0..budget.max_factorization_len {
        let mut next = Vec::new();
        for element in &layer {
            for g in &gen_vecs {
                for exp in [-2i64, -1, 1, 2] {
                    candidates += 1;
                    if candidates > budget.max_candidates {
                        return Err(Error::BudgetExceeded {
                            length: BigUint::from(candidates),
                            budget: budget.max_candidates,
                        });
                    }
                    let stepped =
                        p.multiply(element, &p.power(g, &num_bigint::BigInt::from(exp)));
                    if seen.insert(stepped.clone()) {
                        out.push(stepped.clone());
                        next.push(stepped);
                    }
                }
            }
        }
        layer = next;
    }
    Ok(out)
}

/// Independent normal form for free class-2 presentations: generator
/// exponents are signed letter counts, and the coefficient of the
/// commutator `c_{ij}` (`i < j`) counts sign-weighted inversions — pairs
/// of positions where `x_j` precedes `x_i`.
pub fn oracle_collect_class2(r: usize, w: &Word) -> MalcevVector {
    let m = r + r * (r - 1) / 2;
    let mut entries = vec![num_bigint::BigInt::from(0); m];
    let letters = w.letters();
    for l in letters {
        let s = if l.is_inverse() { -1 } else { 1 };
        entries[l.index()] += s;
    }
    let mut commutator = r;
    for i in 0..r {
        for j in (i + 1)..r {
            let mut total = num_bigint::BigInt::from(0);
            for p in 0..letters.len() {
                if letters[p].index() != j {
                    continue;
                }
                let sp = if letters[p].is_inverse() { -1 } else { 1 };
                for q in (p + 1)..letters.len() {
                    if letters[q].index() == i {
                        let sq = if letters[q].is_inverse() { -1 } else { 1 };
                        total += sp * sq;
                    }
                }
            }
            entries[commutator] = total;
            commutator += 1;
        }
    }
    MalcevVector::from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::test_support::Rng;

    fn ab() -> Arc<Alphabet> {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(alphabet: &Arc<Alphabet>, text: &str) -> Word {
        Word::parse(alphabet, text).unwrap()
    }

    fn gens(alphabet: &Arc<Alphabet>, texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| w(alphabet, t)).collect()
    }

    #[test]
    fn oracle_closest_examples() {
        let a = ab();
        let budget = SearchBudget::new(8, 8);
        assert_eq!(
            oracle_closest_free(&a, &gens(&a, &["a b a^-1"]), &w(&a, "a b"), &budget).unwrap(),
            1
        );
        assert_eq!(
            oracle_closest_free(&a, &gens(&a, &["a b"]), &w(&a, "a b a b"), &budget).unwrap(),
            0
        );
        assert_eq!(
            oracle_closest_free(&a, &[], &w(&a, "a b"), &budget).unwrap(),
            2
        );
        let tiny = SearchBudget::new(1, 1);
        assert!(matches!(
            oracle_closest_free(&a, &[], &w(&a, "a b"), &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn oracle_shortest_examples() {
        let a = ab();
        let budget = SearchBudget::new(8, 8);
        assert_eq!(
            oracle_shortest_free(&a, &gens(&a, &["a a", "a b a^-1"]), &budget),
            Some(2)
        );
        assert_eq!(oracle_shortest_free(&a, &[], &budget), None);
        assert_eq!(
            oracle_shortest_free(&a, &gens(&a, &["a b a^-1"]), &budget),
            Some(3)
        );
    }

    #[test]
    fn oracle_distance_examples() {
        let a = ab();
        let budget = SearchBudget::new(6, 6);
        assert_eq!(
            oracle_distance_free(&a, &gens(&a, &["a"]), &gens(&a, &["a b"]), &budget).unwrap(),
            1
        );
        assert_eq!(
            oracle_distance_free(&a, &gens(&a, &["a"]), &gens(&a, &["a"]), &budget).unwrap(),
            0
        );
        assert_eq!(
            oracle_distance_free(&a, &gens(&a, &["a b"]), &gens(&a, &["b a"]), &budget).unwrap(),
            2
        );
    }

    #[test]
    fn oracle_geodesic_examples() {
        let x = Alphabet::new(["x1", "x2"]).unwrap();
        let budget = SearchBudget::new(8, 8);
        assert_eq!(
            oracle_geodesic(&x, &gens(&x, &["x1", "x1 x2"]), &w(&x, "x2"), &budget),
            Some(2)
        );
        assert_eq!(
            oracle_geodesic(&x, &gens(&x, &["x1"]), &w(&x, "x1"), &budget),
            Some(1)
        );
        assert_eq!(
            oracle_geodesic(&x, &gens(&x, &["x1"]), &w(&x, "x2"), &budget),
            None
        );
    }

    #[test]
    fn oracle_nilpotent_subgroup_examples() {
        let p = NilpotentPresentation::free_class2(2).unwrap();
        let budget = SearchBudget::new(4, 4);
        let xw = |t: &str| Word::parse(p.alphabet(), t).unwrap();

        let single = oracle_nilpotent_subgroup(&p, &[xw("x1")], &SearchBudget::new(2, 2)).unwrap();
        let expected: HashSet<MalcevVector> =
            (-4..=4).map(|k| MalcevVector::from_i64s(&[k, 0, 0])).collect();
        assert_eq!(single.iter().cloned().collect::<HashSet<_>>(), expected);

        let h = oracle_nilpotent_subgroup(&p, &[xw("x1 x1"), xw("x2")], &budget).unwrap();
        assert!(h.contains(&MalcevVector::from_i64s(&[0, 0, 2])));

        let trivial = oracle_nilpotent_subgroup(&p, &[], &budget).unwrap();
        assert_eq!(trivial, vec![MalcevVector::zero(3)]);
    }

    #[test]
    fn class2_formula_matches_collection() {
        let p = NilpotentPresentation::free_class2(3).unwrap();
        let mut rng = Rng::new(0x31337);
        for _ in 0..300 {
            let letters: Vec<Letter> = (0..rng.below(12))
                .map(|_| Letter::from_slot(rng.below(p.alphabet().slot_count())))
                .collect();
            let word = Word::from_letters(p.alphabet(), letters).unwrap();
            assert_eq!(p.collect(&word), oracle_collect_class2(3, &word));
        }
    }

    #[test]
    fn oracles_are_deterministic() {
        let a = ab();
        let budget = SearchBudget::new(5, 5);
        let g1 = gens(&a, &["a b", "b a^-1"]);
        let g2 = gens(&a, &["b b"]);
        let first = oracle_distance_free(&a, &g1, &g2, &budget).unwrap();
        for _ in 0..3 {
            assert_eq!(oracle_distance_free(&a, &g1, &g2, &budget).unwrap(), first);
        }
    }
}
