// Offline stress run (not part of the test suite): large randomized
// cross-check of the geodesic DP and the subgroup distance against their
// oracles, at sizes beyond the acceptance criteria.
use std::sync::Arc;
use grouplat::geodesic::{geodesic, DEFAULT_EXPAND_BUDGET};
use grouplat::graph::stallings;
use grouplat::oracles::{oracle_distance_free, oracle_geodesic, SearchBudget};
use grouplat::rational::subgroup_distance;
use grouplat::words::{Alphabet, Letter, Word};

struct Rng(u64);
impl Rng {
    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13; x ^= x >> 7; x ^= x << 17;
        self.0 = x; x
    }
    fn below(&mut self, n: usize) -> usize { (self.next_u64() % n as u64) as usize }
}

fn reduced_word(rng: &mut Rng, a: &Arc<Alphabet>, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    for _ in 0..len {
        loop {
            let x = Letter::from_slot(rng.below(a.slot_count()));
            if letters.last() != Some(&x.inv()) { letters.push(x); break; }
        }
    }
    Word::from_letters(a, letters).unwrap()
}

fn main() {
    let mut rng = Rng(0xfeedbeef);
    let names = ["a", "b", "c"];
    let mut geodesic_mismatches = 0;
    for round in 0..2000 {
        let a = Alphabet::new(names[..1 + rng.below(3)].iter().copied()).unwrap();
        let count = 1 + rng.below(3);
        let gens: Vec<Word> = (0..count).map(|_| { let l = 1 + rng.below(5); reduced_word(&mut rng, &a, l) }).collect();
        let mut w = Word::empty(&a);
        for _ in 0..rng.below(7) {
            let pick = &gens[rng.below(gens.len())];
            let f = if rng.below(2) == 0 { pick.clone() } else { pick.invert() };
            w = w.concat_reduce(&f).unwrap();
        }
        let solved = geodesic(&a, &gens, &w, DEFAULT_EXPAND_BUDGET).expect("member");
        let oracle = oracle_geodesic(&a, &gens, &w, &SearchBudget::new(20, 6));
        if oracle != Some(solved.length) {
            geodesic_mismatches += 1;
            println!("geodesic mismatch at round {round}: solver {} oracle {:?} gens {:?} w {}", solved.length, oracle, gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(), w);
        }
    }
    println!("geodesic: 2000 rounds, {geodesic_mismatches} mismatches");

    let mut dist_mismatches = 0;
    let mut dist_tested = 0;
    let mut r = Rng(0xabcdef12);
    while dist_tested < 1000 {
        let a = Alphabet::new(names[..1 + r.below(3)].iter().copied()).unwrap();
        let g1: Vec<Word> = (0..r.below(4)).map(|_| { let l = r.below(7); reduced_word(&mut r, &a, l) }).collect();
        let g2: Vec<Word> = (0..r.below(4)).map(|_| { let l = r.below(7); reduced_word(&mut r, &a, l) }).collect();
        let h = stallings(&a, &g1);
        let k = stallings(&a, &g2);
        match subgroup_distance(&h, &k) {
            Err(_) => continue,
            Ok((hw, kw, d)) => {
                dist_tested += 1;
                if d == 0 {
                    assert!(hw == kw && !hw.is_empty() && h.contains(&hw) && k.contains(&kw));
                } else {
                    let oracle = oracle_distance_free(&a, &g1, &g2, &SearchBudget::new(7, 7)).unwrap();
                    if oracle != d {
                        dist_mismatches += 1;
                        println!("distance mismatch: solver {d} oracle {oracle} H {:?} K {:?}",
                            g1.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                            g2.iter().map(|g| g.to_string()).collect::<Vec<_>>());
                    }
                }
            }
        }
    }
    println!("subgroup distance: {dist_tested} rounds, {dist_mismatches} mismatches");
}
