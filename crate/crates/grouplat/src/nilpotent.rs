//! Finitely generated nilpotent groups through Malcev normal forms.
//!
//! A [`NilpotentPresentation`] fixes a basis `y₁,…,y_m` (the first `r`
//! marked as group generators) and, for every pair `j > i`, a tail rule
//! `y_j·y_i = y_i·y_j·t_{ji}` whose tail is a word in strictly later
//! basis symbols; that ordering is what makes collection terminate. All
//! arithmetic — collection of words, multiplication, powers — runs
//! through the collection process; no symbolic Hall polynomials are ever
//! built. Exponents are arbitrary-precision throughout, since powering
//! overflows machine integers quickly.
//!
//! Subgroup membership uses the noncommutative Gauss elimination over the
//! triangular full form of a coordinate matrix, and the closest/shortest
//! element solvers brute-force over Cayley balls, which are polynomially
//! big in these groups.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::words::{Alphabet, Letter, Word};
use crate::Error;

/// Malcev exponent tuple `[α₁,…,α_m]`, the canonical form of one group
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MalcevVector(Vec<BigInt>);

impl MalcevVector {
    pub fn zero(m: usize) -> MalcevVector {
        MalcevVector(vec![BigInt::zero(); m])
    }

    pub fn from_entries(entries: Vec<BigInt>) -> MalcevVector {
        MalcevVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> MalcevVector {
        MalcevVector(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|e| !e.is_zero())
    }
}

impl fmt::Display for MalcevVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// A nilpotent group presentation over a Malcev basis with later-index
/// tails.
#[derive(Debug, Clone)]
pub struct NilpotentPresentation {
    basis: usize,
    rank: usize,
    class: u32,
    /// `(j, i)` with `j > i` maps to the tail word of `y_j·y_i = y_i·y_j·t`;
    /// absent pairs commute. Symbols are 0-based and strictly exceed `j`.
    tails: HashMap<(usize, usize), Vec<(usize, BigInt)>>,
    alphabet: Arc<Alphabet>,
}

impl NilpotentPresentation {
    /// The free class-2 nilpotent presentation of rank `r`: basis
    /// `x₁,…,x_r` followed by the commutators `c_{ij} = [x_j, x_i]` for
    /// `i < j` in lexicographic order, all central.
    pub fn free_class2(r: usize) -> Result<NilpotentPresentation, Error> {
        if r == 0 {
            return Err(Error::InvalidPresentation("rank must be at least 1".into()));
        }
        let m = r + r * (r - 1) / 2;
        let mut tails = HashMap::new();
        let mut next = r;
        for i in 0..r {
            for j in (i + 1)..r {
                tails.insert((j, i), vec![(next, BigInt::one())]);
                next += 1;
            }
        }
        debug_assert_eq!(next, m);
        Ok(NilpotentPresentation {
            basis: m,
            rank: r,
            class: 2,
            tails,
            alphabet: generator_alphabet(r),
        })
    }

    /// Builds a presentation from explicit data. `rules` holds 1-based
    /// `(j, i, tail)` triples with `i < j` and tail symbols strictly
    /// greater than `j`.
    pub fn from_rules(
        basis: usize,
        rank: usize,
        class: u32,
        rules: &[(usize, usize, Vec<(usize, BigInt)>)],
    ) -> Result<NilpotentPresentation, Error> {
        if basis == 0 || rank == 0 || rank > basis {
            return Err(Error::InvalidPresentation(format!(
                "need 1 <= generators <= basis, got generators {rank}, basis {basis}"
            )));
        }
        let mut tails = HashMap::new();
        for (j, i, tail) in rules {
            let (j, i) = (*j, *i);
            if i == 0 || j <= i || j > basis {
                return Err(Error::InvalidPresentation(format!(
                    "rule needs 1 <= i < j <= basis, got j {j}, i {i}"
                )));
            }
            let mut chunks = Vec::new();
            for (sym, exp) in tail {
                if *sym <= j || *sym > basis {
                    return Err(Error::InvalidPresentation(format!(
                        "tail symbol {sym} of rule ({j}, {i}) must lie in {}..={basis}",
                        j + 1
                    )));
                }
                if !exp.is_zero() {
                    chunks.push((*sym - 1, exp.clone()));
                }
            }
            if tails.insert((j - 1, i - 1), chunks).is_some() {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate rule for pair ({j}, {i})"
                )));
            }
        }
        Ok(NilpotentPresentation {
            basis,
            rank,
            class,
            tails,
            alphabet: generator_alphabet(rank),
        })
    }

    pub fn basis(&self) -> usize {
        self.basis
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    /// The word alphabet `x1,…,xr` of the marked group generators.
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn tail(&self, j: usize, i: usize) -> &[(usize, BigInt)] {
        self.tails.get(&(j, i)).map_or(&[], Vec::as_slice)
    }

    fn zero_vec(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.basis]
    }

    fn basis_power(&self, sym: usize, exp: BigInt) -> Vec<BigInt> {
        let mut v = self.zero_vec();
        v[sym] = exp;
        v
    }

    /// Normal form of a chunk word, all of whose symbols are >= `lo`.
    fn chunks_to_nf(&self, lo: usize, chunks: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut acc = self.zero_vec();
        for (sym, exp) in chunks {
            debug_assert!(*sym >= lo);
            acc = self.mul_from(lo, acc, self.basis_power(*sym, exp.clone()));
        }
        acc
    }

    /// Product of two normal forms supported on symbols >= `lo`.
    ///
    /// Splitting off the lowest symbol `y_j` on both sides reduces the
    /// product to `y_j^{a+b} · ((u')^{y_j^b} · v')`, and conjugation by
    /// `y_j` maps the subgroup of later symbols to itself, so the
    /// recursion descends strictly in the lowest occupied symbol.
    fn mul_from(&self, lo: usize, u: Vec<BigInt>, v: Vec<BigInt>) -> Vec<BigInt> {
        let m = self.basis;
        let mut j = lo;
        while j < m && u[j].is_zero() && v[j].is_zero() {
            j += 1;
        }
        if j == m {
            return u;
        }
        let a = u[j].clone();
        let b = v[j].clone();
        let mut u_rest = u;
        u_rest[j] = BigInt::zero();
        let mut v_rest = v;
        v_rest[j] = BigInt::zero();
        let conjugated = self.conj_by_power(j, &b, u_rest);
        let mut result = self.mul_from(j + 1, conjugated, v_rest);
        result[j] = a + b;
        result
    }

    /// `u^{y_j^e}` for `u` supported on symbols > `j`, by binary powering
    /// of the conjugation automorphism.
    fn conj_by_power(&self, j: usize, e: &BigInt, u: Vec<BigInt>) -> Vec<BigInt> {
        if e.is_zero() || u.iter().all(Zero::is_zero) {
            return u;
        }
        let base = self.conj_images(j, e.is_positive());
        let mut result: Option<Vec<Vec<BigInt>>> = None;
        let mut square = base;
        let mut n = e.abs().to_biguint().expect("nonzero magnitude");
        loop {
            if n.bit(0) {
                result = Some(match result {
                    None => square.clone(),
                    Some(acc) => self.compose(j, &square, &acc),
                });
            }
            n >>= 1;
            if n.is_zero() {
                break;
            }
            square = self.compose(j, &square.clone(), &square);
        }
        self.apply(j, &result.expect("e is nonzero"), u)
    }

    /// Images of `y_t` for `t > j` under conjugation by `y_j^{±1}`.
    ///
    /// `y_t^{y_j} = y_t·t_{tj}` straight from the rule. For the inverse
    /// direction, writing `y_t^{y_j⁻¹} = y_t·w` forces
    /// `w = (t_{tj}⁻¹)^{y_j⁻¹}`, whose symbols all exceed `t`, so the
    /// images are computable from the top symbol downward.
    fn conj_images(&self, j: usize, positive: bool) -> Vec<Vec<BigInt>> {
        let m = self.basis;
        let width = m - j - 1;
        let mut images: Vec<Vec<BigInt>> = vec![Vec::new(); width];
        for t in (j + 1..m).rev() {
            let tail_nf = self.chunks_to_nf(t + 1, self.tail(t, j));
            let correction = if positive {
                tail_nf
            } else {
                let inv = self.inv_from(t + 1, tail_nf);
                // Apply the already-computed images for symbols > t.
                let mut acc = self.zero_vec();
                for s in t + 1..m {
                    if !inv[s].is_zero() {
                        let img = images[s - j - 1].clone();
                        let powed = self.pow_from(j + 1, img, &inv[s]);
                        acc = self.mul_from(j + 1, acc, powed);
                    }
                }
                acc
            };
            let base = self.basis_power(t, BigInt::one());
            images[t - j - 1] = self.mul_from(j + 1, base, correction);
        }
        images
    }

    /// Applies an automorphism given by basis images to a normal form
    /// supported on symbols > `j`.
    fn apply(&self, j: usize, images: &[Vec<BigInt>], u: Vec<BigInt>) -> Vec<BigInt> {
        let mut acc = self.zero_vec();
        for t in j + 1..self.basis {
            if !u[t].is_zero() {
                let powed = self.pow_from(j + 1, images[t - j - 1].clone(), &u[t]);
                acc = self.mul_from(j + 1, acc, powed);
            }
        }
        acc
    }

    /// Composition `a ∘ b` of two automorphisms given by images.
    fn compose(&self, j: usize, a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        b.iter()
            .map(|img| self.apply(j, a, img.clone()))
            .collect()
    }

    /// Inverse of a normal form supported on symbols >= `lo`: the basis
    /// powers multiplied back in reverse order with negated exponents.
    fn inv_from(&self, lo: usize, u: Vec<BigInt>) -> Vec<BigInt> {
        let mut acc = self.zero_vec();
        for t in (lo..self.basis).rev() {
            if !u[t].is_zero() {
                acc = self.mul_from(lo, acc, self.basis_power(t, -u[t].clone()));
            }
        }
        acc
    }

    /// Binary powering over [`Self::mul_from`].
    fn pow_from(&self, lo: usize, base: Vec<BigInt>, n: &BigInt) -> Vec<BigInt> {
        if n.is_zero() {
            return self.zero_vec();
        }
        let base = if n.is_negative() {
            self.inv_from(lo, base)
        } else {
            base
        };
        let mut result: Option<Vec<BigInt>> = None;
        let mut square = base;
        let mut k = n.abs().to_biguint().expect("nonzero magnitude");
        loop {
            if k.bit(0) {
                result = Some(match result {
                    None => square.clone(),
                    Some(acc) => self.mul_from(lo, acc, square.clone()),
                });
            }
            k >>= 1;
            if k.is_zero() {
                break;
            }
            square = self.mul_from(lo, square.clone(), square);
        }
        result.expect("n is nonzero")
    }

    /// Malcev normal form of a word in the marked generators.
    pub fn collect(&self, w: &Word) -> MalcevVector {
        assert!(
            w.alphabet() == &self.alphabet,
            "word over a different alphabet"
        );
        let mut acc = self.zero_vec();
        for &l in w.letters() {
            let exp = if l.is_inverse() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            acc = self.mul_from(0, acc, self.basis_power(l.index(), exp));
        }
        MalcevVector(acc)
    }

    pub fn multiply(&self, u: &MalcevVector, v: &MalcevVector) -> MalcevVector {
        MalcevVector(self.mul_from(0, u.0.clone(), v.0.clone()))
    }

    pub fn inverse(&self, u: &MalcevVector) -> MalcevVector {
        MalcevVector(self.inv_from(0, u.0.clone()))
    }

    /// `u^n` by binary powering; `power(u, -1)` is the group inverse.
    pub fn power(&self, u: &MalcevVector, n: &BigInt) -> MalcevVector {
        if n.is_zero() {
            return MalcevVector::zero(self.basis);
        }
        MalcevVector(self.pow_from(0, u.0.clone(), n))
    }

    /// Normal form of `g₁^{k₁}⋯g_n^{k_n}`.
    pub fn product_of_powers(
        &self,
        gs: &[MalcevVector],
        ks: &[BigInt],
    ) -> Result<MalcevVector, Error> {
        if gs.len() != ks.len() {
            return Err(Error::LengthMismatch);
        }
        let mut acc = MalcevVector::zero(self.basis);
        for (g, k) in gs.iter().zip(ks) {
            acc = self.multiply(&acc, &self.power(g, k));
        }
        Ok(acc)
    }

    /// Triangular full form of the subgroup generated by `rows`: pivots
    /// strictly increase, every pivot entry is positive, and the row set
    /// is closed under conjugation as required for left-to-right
    /// membership elimination.
    ///
    /// Each round combines the current rows into a gcd pivot row via a
    /// Bezout product, clears the pivot column, and appends the conjugate
    /// rows `h^{h_new^{±ℓ}}` for `1 ≤ ℓ ≤ m − pivot`; exact duplicates
    /// and zero rows are dropped between rounds.
    pub fn full_form(&self, rows: &[MalcevVector]) -> CoordinateMatrix {
        let m = self.basis;
        let mut working: Vec<MalcevVector> = Vec::new();
        let mut seen: HashSet<MalcevVector> = HashSet::new();
        for row in rows {
            if !row.is_zero() && seen.insert(row.clone()) {
                working.push(row.clone());
            }
        }
        let mut done_rows = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        while let Some(pivot) = (0..m).find(|&c| working.iter().any(|r| !r.0[c].is_zero())) {
            assert!(
                pivots.last().map_or(true, |&p| pivot > p),
                "pivots must strictly increase"
            );
            // Bezout combination: d = gcd of the pivot column, expressed
            // over the current rows.
            let mut d = BigInt::zero();
            let mut coeffs = vec![BigInt::zero(); working.len()];
            for (i, row) in working.iter().enumerate() {
                let entry = &row.0[pivot];
                if entry.is_zero() {
                    continue;
                }
                if d.is_zero() {
                    d = entry.clone();
                    coeffs[i] = BigInt::one();
                } else if !(entry % &d).is_zero() {
                    let eg = d.extended_gcd(entry);
                    for c in coeffs.iter_mut() {
                        *c *= &eg.x;
                    }
                    coeffs[i] = eg.y;
                    d = eg.gcd;
                }
            }
            if d.is_negative() {
                d = -d;
                for c in coeffs.iter_mut() {
                    *c = -c.clone();
                }
            }
            let new_row = self
                .product_of_powers(&working, &coeffs)
                .expect("lengths match");
            assert_eq!(new_row.first_nonzero(), Some(pivot));
            assert_eq!(new_row.0[pivot], d);

            for row in working.iter_mut() {
                if !row.0[pivot].is_zero() {
                    let q = &row.0[pivot] / &d;
                    *row = self.multiply(row, &self.power(&new_row, &-q));
                    assert!(row.first_nonzero().map_or(true, |p| p > pivot));
                }
            }
            // Conjugate closure: conjugates of the remaining rows by
            // h_new^{±ℓ}, ℓ up to the number of columns past the pivot.
            let mut closure = Vec::new();
            let reach = m - pivot - 1;
            for row in &working {
                if row.is_zero() {
                    continue;
                }
                for l in 1..=reach {
                    for sign in [1i64, -1] {
                        let exp = BigInt::from(sign) * BigInt::from(l);
                        let conj = self.multiply(
                            &self.power(&new_row, &-exp.clone()),
                            &self.multiply(row, &self.power(&new_row, &exp)),
                        );
                        assert!(conj.first_nonzero().map_or(true, |p| p > pivot));
                        closure.push(conj);
                    }
                }
            }
            working.extend(closure);
            let mut seen: HashSet<MalcevVector> = HashSet::new();
            working.retain(|row| !row.is_zero() && seen.insert(row.clone()));
            done_rows.push(new_row);
            pivots.push(pivot);
        }
        CoordinateMatrix {
            rows: done_rows,
            pivots,
        }
    }

    /// Left-to-right elimination of `h` against a full form: returns the
    /// exponents `l₁,…,l_s` with `h = h₁^{l₁}⋯h_s^{l_s}`, or `None` when
    /// a divisibility check fails. Positive answers are reverified by
    /// multiplying back.
    pub fn membership(&self, matrix: &CoordinateMatrix, h: &MalcevVector) -> Option<Vec<BigInt>> {
        let mut cur = h.clone();
        let mut exps = Vec::with_capacity(matrix.rows.len());
        for (row, &pivot) in matrix.rows.iter().zip(&matrix.pivots) {
            match cur.first_nonzero() {
                None => exps.push(BigInt::zero()),
                Some(p) if p < pivot => return None,
                Some(p) if p > pivot => exps.push(BigInt::zero()),
                Some(_) => {
                    let (q, rem) = cur.0[pivot].div_rem(&row.0[pivot]);
                    if !rem.is_zero() {
                        return None;
                    }
                    cur = self.multiply(&self.power(row, &-q.clone()), &cur);
                    exps.push(q);
                }
            }
        }
        if !cur.is_zero() {
            return None;
        }
        let rebuilt = self
            .product_of_powers(&matrix.rows, &exps)
            .expect("lengths match");
        assert_eq!(&rebuilt, h, "factorization must rebuild the element");
        Some(exps)
    }

    /// All distinct group elements of word length at most `n`, each with
    /// its breadth-first geodesic witness word.
    pub fn ball(&self, n: usize) -> Vec<(MalcevVector, Word)> {
        let mut out: Vec<(MalcevVector, Word)> =
            vec![(MalcevVector::zero(self.basis), Word::empty(&self.alphabet))];
        let mut seen: HashSet<MalcevVector> = HashSet::new();
        seen.insert(out[0].0.clone());
        let mut layer_start = 0;
        for _ in 0..n {
            let layer_end = out.len();
            for idx in layer_start..layer_end {
                let (vec, word) = out[idx].clone();
                for slot in 0..self.alphabet.slot_count() {
                    let l = Letter::from_slot(slot);
                    let exp = if l.is_inverse() {
                        -BigInt::one()
                    } else {
                        BigInt::one()
                    };
                    let stepped =
                        MalcevVector(self.mul_from(0, vec.0.clone(), self.basis_power(l.index(), exp)));
                    if seen.insert(stepped.clone()) {
                        let extended = word
                            .concat(&Word::from_letters(&self.alphabet, vec![l]).unwrap())
                            .unwrap();
                        out.push((stepped, extended));
                    }
                }
            }
            layer_start = layer_end;
        }
        out
    }

    /// Closest subgroup element to `g`: brute force over `g·b` for `b` in
    /// the ball of radius `|g|`, in increasing depth. The distance from
    /// `g` to the subgroup never exceeds `|g|` because the identity is a
    /// member.
    pub fn closest_element(&self, sub_gens: &[Word], g: &Word) -> (Word, usize) {
        let matrix = self.full_form(&self.collect_all(sub_gens));
        let g = g.reduce();
        let g_vec = self.collect(&g);
        for (b_vec, b_word) in self.ball(g.len()) {
            let candidate = self.multiply(&g_vec, &b_vec);
            if self.membership(&matrix, &candidate).is_some() {
                let witness = g.concat_reduce(&b_word).unwrap();
                return (witness, b_word.len());
            }
        }
        unreachable!("the ball of radius |g| always contains g^-1");
    }

    /// Shortest nontrivial subgroup element, by scanning the ball of
    /// radius equal to the total generator length; `None` iff every
    /// generator freely reduces to the identity.
    pub fn shortest_element(&self, sub_gens: &[Word]) -> Option<(Word, usize)> {
        let reduced: Vec<Word> = sub_gens.iter().map(Word::reduce).collect();
        if reduced.iter().all(Word::is_empty) {
            return None;
        }
        let radius = reduced.iter().map(Word::len).sum();
        let matrix = self.full_form(&self.collect_all(&reduced));
        for (b_vec, b_word) in self.ball(radius) {
            if b_word.is_empty() {
                continue;
            }
            if self.membership(&matrix, &b_vec).is_some() {
                let len = b_word.len();
                return Some((b_word, len));
            }
        }
        unreachable!("a nontrivial generator fits inside the ball");
    }

    pub fn collect_all(&self, words: &[Word]) -> Vec<MalcevVector> {
        words.iter().map(|w| self.collect(w)).collect()
    }
}

fn generator_alphabet(r: usize) -> Arc<Alphabet> {
    Alphabet::new((1..=r).map(|i| format!("x{i}"))).expect("generator names are valid")
}

/// Rows of Malcev vectors in triangular full form, with their pivots.
#[derive(Debug, Clone)]
pub struct CoordinateMatrix {
    rows: Vec<MalcevVector>,
    pivots: Vec<usize>,
}

impl CoordinateMatrix {
    pub fn rows(&self) -> &[MalcevVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}
