//! Stabilizer chains with the fixed base `1, 2, ..., n`, built by the
//! incremental Schreier-Sims procedure (sift every Schreier generator into
//! the next level). No randomization, so orders, bases and transversals are
//! reproducible bit-for-bit.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combin::factorial;
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    /// `reps[j] = Some((u, u⁻¹))` with `u(base) = j`.
    reps: Vec<Option<(Permutation, Permutation)>>,
    orbit: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let mut builder = Builder::new(degree, None);
        for g in gens {
            builder.add_generator(0, g.clone());
        }
        Ok(builder.chain)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// 1-based base points (always `1..=n`).
    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base + 1).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && sift(&self.levels, 0, g)
    }
}

fn sift(levels: &[Level], from: usize, g: &Permutation) -> bool {
    let mut h = g.clone();
    for level in &levels[from..] {
        let j = h.at(level.base) as usize;
        match &level.reps[j] {
            None => return false,
            Some((_, inv)) => h = inv.compose_unchecked(&h),
        }
    }
    h.is_identity()
}

struct Builder {
    chain: StabilizerChain,
    /// Stop as soon as the product of orbit lengths reaches this value. The
    /// product never exceeds the order of the generated group, so reaching it
    /// proves `|G| >= target`.
    target: Option<(BigUint, f64)>,
    log2_product: f64,
    halted: bool,
}

impl Builder {
    fn new(degree: usize, target: Option<BigUint>) -> Self {
        let levels = (0..degree as u32)
            .map(|b| {
                let mut reps = vec![None; degree];
                let id = Permutation::identity(degree);
                reps[b as usize] = Some((id.clone(), id));
                Level {
                    base: b,
                    gens: Vec::new(),
                    reps,
                    orbit: vec![b],
                }
            })
            .collect();
        let target = target.map(|t| {
            let l = log2_big(&t);
            (t, l)
        });
        Builder {
            chain: StabilizerChain { degree, levels },
            target,
            log2_product: 0.0,
            halted: false,
        }
    }

    fn add_generator(&mut self, k: usize, g: Permutation) {
        if self.halted || sift(&self.chain.levels, k, &g) {
            return;
        }
        self.chain.levels[k].gens.push(g.clone());
        let reps: Vec<Permutation> = {
            let level = &self.chain.levels[k];
            level
                .orbit
                .iter()
                .map(|&p| level.reps[p as usize].as_ref().unwrap().0.clone())
                .collect()
        };
        for u in reps {
            if self.halted {
                return;
            }
            self.extend(k, g.compose_unchecked(&u));
        }
    }

    fn extend(&mut self, k: usize, h: Permutation) {
        if self.halted {
            return;
        }
        let base = self.chain.levels[k].base;
        let j = h.at(base) as usize;
        if self.chain.levels[k].reps[j].is_none() {
            let inv = h.inverse();
            let level = &mut self.chain.levels[k];
            let old = level.orbit.len();
            level.reps[j] = Some((h.clone(), inv));
            level.orbit.push(j as u32);
            self.note_growth(old);
            let gens = self.chain.levels[k].gens.clone();
            for s in gens {
                if self.halted {
                    return;
                }
                self.extend(k, s.compose_unchecked(&h));
            }
        } else {
            let inv = &self.chain.levels[k].reps[j].as_ref().unwrap().1;
            let residue = inv.compose_unchecked(&h);
            if !residue.is_identity() {
                self.add_generator(k + 1, residue);
            }
        }
    }

    fn note_growth(&mut self, old: usize) {
        let Some((target, target_log2)) = &self.target else {
            return;
        };
        self.log2_product += ((old + 1) as f64 / old as f64).log2();
        if self.log2_product + 1e-6 >= *target_log2 && self.chain.order() >= *target {
            self.halted = true;
        }
    }
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

/// Order of the group generated by `gens`; the empty set generates the trivial group.
pub fn group_order(gens: &[Permutation]) -> Result<BigUint> {
    match gens.first() {
        None => Ok(BigUint::one()),
        Some(g) => Ok(StabilizerChain::new(g.degree(), gens)?.order()),
    }
}

/// How much of `Sₙ` a pair generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenerationClass {
    /// `⟨x, y⟩ = Sₙ`.
    FullSymmetric,
    /// `⟨x, y⟩ = Aₙ` (both generators even).
    Alternating,
    Proper,
}

impl GenerationClass {
    pub fn is_full(self) -> bool {
        self == GenerationClass::FullSymmetric
    }

    /// `⟨x, y⟩ ⊇ Aₙ`.
    pub fn contains_alternating(self) -> bool {
        self != GenerationClass::Proper
    }
}

/// Classifies `⟨x, y⟩` by exact order comparison against `n!` and `n!/2`.
pub fn generation_class(x: &Permutation, y: &Permutation) -> Result<GenerationClass> {
    let n = x.degree();
    if y.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: y.degree(),
        });
    }
    Ok(classify(n, &[x, y]))
}

pub(crate) fn classify(n: usize, gens: &[&Permutation]) -> GenerationClass {
    if n <= 1 {
        return GenerationClass::FullSymmetric;
    }
    if n >= 3 && !is_transitive(n, gens) {
        return GenerationClass::Proper;
    }
    let all_even = gens.iter().all(|g| g.is_even());
    if n >= 5 {
        if !is_primitive(n, gens) {
            return GenerationClass::Proper;
        }
        if has_jordan_witness(n, gens) {
            return if all_even {
                GenerationClass::Alternating
            } else {
                GenerationClass::FullSymmetric
            };
        }
    }
    classify_by_chain(n, gens, all_even)
}

pub(crate) fn classify_by_chain(
    n: usize,
    gens: &[&Permutation],
    all_even: bool,
) -> GenerationClass {
    let half = factorial(n) / 2u32;
    let mut builder = Builder::new(n, Some(half.clone()));
    for g in gens {
        builder.add_generator(0, (*g).clone());
    }
    // Once the order reaches n!/2 the group is Aₙ or Sₙ; parity of the
    // generators decides which.
    let reached = builder.halted || builder.chain.order() >= half;
    match (reached, all_even) {
        (true, true) => GenerationClass::Alternating,
        (true, false) => GenerationClass::FullSymmetric,
        (false, _) => GenerationClass::Proper,
    }
}

/// For a transitive group: no block `{1, b, ...}` other than the whole set.
/// The smallest block containing `1` and `b` comes from merging images of
/// merged pairs until stable.
fn is_primitive(n: usize, gens: &[&Permutation]) -> bool {
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while parent[r as usize] != r {
            r = parent[r as usize];
        }
        let mut y = x;
        while parent[y as usize] != r {
            let next = parent[y as usize];
            parent[y as usize] = r;
            y = next;
        }
        r
    }
    let mut parent: Vec<u32> = Vec::with_capacity(n);
    for b in 1..n as u32 {
        parent.clear();
        parent.extend(0..n as u32);
        parent[b as usize] = 0;
        let mut pending = vec![(0u32, b)];
        let mut classes = n - 1;
        while let Some((x, y)) = pending.pop() {
            for g in gens {
                let rx = find(&mut parent, g.at(x));
                let ry = find(&mut parent, g.at(y));
                if rx != ry {
                    parent[ry as usize] = rx;
                    classes -= 1;
                    pending.push((rx, ry));
                }
            }
        }
        if classes > 1 {
            return false;
        }
    }
    true
}

/// Looks for an element some power of which is a single `p`-cycle with `p`
/// prime and `p ≤ n − 3`; a primitive group containing one contains `Aₙ`
/// (Jordan). Only a fixed list of short words is tried.
fn has_jordan_witness(n: usize, gens: &[&Permutation]) -> bool {
    const PRIMES: [usize; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let usable = |ct: &[usize]| {
        PRIMES.iter().take_while(|&&p| p + 3 <= n).any(|&p| {
            let mut divisible = ct.iter().filter(|&&l| l % p == 0);
            matches!((divisible.next(), divisible.next()), (Some(&l), None) if l == p)
        })
    };
    let mut word = gens[0].clone();
    for step in 0..24usize {
        if usable(word.cycle_type().lengths()) {
            return true;
        }
        let g = gens[(step * 7 / 3 + 1) % gens.len()];
        word = word.compose_unchecked(g);
    }
    false
}

fn is_transitive(n: usize, gens: &[&Permutation]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.at(x) as usize;
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y as u32);
            }
        }
    }
    count == n
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::combin::next_permutation;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    /// Breadth-first closure under right multiplication by the generators.
    fn closure_order(n: usize, gens: &[Permutation]) -> usize {
        let mut seen: HashSet<Permutation> = HashSet::new();
        let id = Permutation::identity(n);
        let mut queue = vec![id.clone()];
        seen.insert(id);
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.compose(g).unwrap();
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen.len()
    }

    fn all_perms(n: usize) -> Vec<Permutation> {
        let mut v: Vec<u32> = (0..n as u32).collect();
        let mut out = vec![Permutation::from_images(v.clone()).unwrap()];
        while next_permutation(&mut v) {
            out.push(Permutation::from_images(v.clone()).unwrap());
        }
        out
    }

    #[test]
    fn empty_set_generates_trivial_group() {
        assert_eq!(group_order(&[]).unwrap(), BigUint::one());
    }

    #[test]
    fn standard_generators_of_s4() {
        let order = group_order(&[p(4, "(1 2)"), p(4, "(1 2 3 4)")]).unwrap();
        assert_eq!(order, BigUint::from(24u32));
    }

    #[test]
    fn two_three_cycles_give_a4() {
        let gens = [p(4, "(1 2 3)"), p(4, "(2 3 4)")];
        assert_eq!(closure_order(4, &gens), 12);
        assert_eq!(group_order(&gens).unwrap(), BigUint::from(12u32));
    }

    #[test]
    fn membership() {
        let chain = StabilizerChain::new(4, &[p(4, "(1 2 3)"), p(4, "(2 3 4)")]).unwrap();
        assert!(chain.contains(&p(4, "(1 2)(3 4)")));
        assert!(!chain.contains(&p(4, "(1 2)")));
        assert_eq!(chain.base(), vec![1, 2, 3, 4]);
        assert_eq!(chain.transversal_sizes(), vec![4, 3, 1, 1]);
    }

    #[test]
    fn larger_groups() {
        let s10 = group_order(&[p(10, "(1 2)"), p(10, "(1 2 3 4 5 6 7 8 9 10)")]).unwrap();
        assert_eq!(s10, factorial(10));
        // the wreath product S4 wr S2 preserving {1..4}|{5..8}
        let w = group_order(&[
            p(8, "(1 2)"),
            p(8, "(1 2 3 4)"),
            p(8, "(1 5)(2 6)(3 7)(4 8)"),
        ])
        .unwrap();
        assert_eq!(w, BigUint::from(24u32 * 24 * 2));
    }

    #[test]
    fn classification_examples() {
        let c = generation_class(&p(6, "(1 2)"), &p(6, "(1 2 3 4 5 6)")).unwrap();
        assert_eq!(c, GenerationClass::FullSymmetric);
        let c = generation_class(&p(6, "(1 2 3)"), &p(6, "(1 2 3)")).unwrap();
        assert_eq!(c, GenerationClass::Proper);
        let c = generation_class(&p(5, "(1 2 3)"), &p(5, "(1 2 3 4 5)")).unwrap();
        assert_eq!(c, GenerationClass::Alternating);
        assert!(generation_class(&p(5, "(1 2)"), &p(6, "(1 2)")).is_err());
    }

    #[test]
    fn s4_pairs_match_closure_oracle() {
        let elems = all_perms(4);
        let mut tally = [0usize; 3];
        for x in &elems {
            for y in &elems {
                let order = closure_order(4, &[x.clone(), y.clone()]);
                let expected = if order == 24 {
                    GenerationClass::FullSymmetric
                } else if order == 12 && x.is_even() && y.is_even() {
                    GenerationClass::Alternating
                } else {
                    GenerationClass::Proper
                };
                let got = generation_class(x, y).unwrap();
                assert_eq!(got, expected, "{x} {y}");
                assert_eq!(got, generation_class(y, x).unwrap());
                tally[got as usize] += 1;
            }
        }
        assert_eq!(tally.iter().sum::<usize>(), 576);
    }

    #[test]
    fn orders_match_closure_up_to_degree_five() {
        for n in 1..=5 {
            let elems = all_perms(n);
            for x in &elems {
                for y in &elems {
                    let gens = [x.clone(), y.clone()];
                    assert_eq!(
                        group_order(&gens).unwrap(),
                        BigUint::from(closure_order(n, &gens))
                    );
                }
            }
        }
    }

    #[test]
    fn shortcut_matches_chain_on_s5() {
        let elems = all_perms(5);
        for x in &elems {
            for y in &elems {
                let even = x.is_even() && y.is_even();
                assert_eq!(
                    classify(5, &[x, y]),
                    classify_by_chain(5, &[x, y], even),
                    "{x} {y}"
                );
            }
        }
    }

    #[test]
    fn imprimitive_pair_is_proper() {
        // both preserve {1,2,3,4} | {5,6,7,8}
        let x = p(8, "(1 5 2 6 3 7 4 8)");
        let y = p(8, "(1 2)(5 6 7)");
        assert_eq!(classify(8, &[&x, &y]), GenerationClass::Proper);
        assert!(!is_primitive(8, &[&x, &y]));
        assert!(is_primitive(
            8,
            &[&p(8, "(1 2)"), &p(8, "(1 2 3 4 5 6 7 8)")]
        ));
    }

    proptest::proptest! {
        #[test]
        fn shortcut_matches_chain(n in 5usize..16, seed in proptest::prelude::any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut draw = || {
                let mut v: Vec<u32> = (0..n as u32).collect();
                v.shuffle(&mut rng);
                Permutation::from_images(v).unwrap()
            };
            let (x, y) = (draw(), draw());
            let even = x.is_even() && y.is_even();
            proptest::prop_assert_eq!(classify(n, &[&x, &y]), classify_by_chain(n, &[&x, &y], even));
        }
    }
}
