//! The pools `C(Δ) = M_Δ ∩ Π(i)`.
//!
//! For a bisection Δ (`|Δ| = n/2`), `C(Δ)` is the set of n-cycles that
//! alternate between Δ and its complement. For odd `a = |Δ| < n/2` it is the
//! set of elements with one `a`-cycle on Δ and one `(n-a)`-cycle on the
//! complement. Every element of `Π(i)` lies in exactly one pool.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::combin::{factorial, for_each_combination, next_permutation};
use crate::error::{Error, Result};
use crate::families::{all_block_systems, DeltaIndex, Family, SubgroupDescriptor};
use crate::perm::Permutation;

/// Largest degree for which pools are enumerated element by element.
pub const MAX_ENUMERATION_DEGREE: usize = 12;

/// Largest degree for the exhaustive conjugate count.
pub const MAX_CONJUGATE_DEGREE: usize = 10;

/// Domain tag mixed into every per-Δ stream seed.
pub const STREAM_TAG: &[u8] = b"symgen/cdelta-stream/v1";

/// `|C(Δ)|`: `(n/2 - 1)!·(n/2)!` for bisections, `(a-1)!·(n-a-1)!` otherwise.
pub fn cdelta_size(d: &DeltaIndex) -> BigUint {
    let n = d.n();
    let a = d.size();
    if d.is_bisection() {
        factorial(a - 1) * factorial(a)
    } else {
        factorial(a - 1) * factorial(n - a - 1)
    }
}

/// The uniform lower bound `(2/n)²·(n/2)!²` on every pool size.
pub fn min_cdelta_size(n: usize) -> BigRational {
    let h = factorial(n / 2);
    BigRational::new((h.clone() * h * 4u32).into(), BigUint::from(n * n).into())
}

/// Why an element is outside `C(Δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotMember {
    DegreeMismatch,
    NotFullCycle,
    DoesNotAlternate,
    WrongCycleType,
    WrongSupport,
}

impl fmt::Display for NotMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotMember::DegreeMismatch => "degree mismatch",
            NotMember::NotFullCycle => "not an n-cycle / not in C(Δ)",
            NotMember::DoesNotAlternate => {
                "n-cycle does not alternate between Δ and its complement"
            }
            NotMember::WrongCycleType => "cycle type is not (|Δ|, n-|Δ|) / not in C(Δ)",
            NotMember::WrongSupport => "the |Δ|-cycle is not supported on Δ",
        })
    }
}

pub fn check_membership(g: &Permutation, d: &DeltaIndex) -> std::result::Result<(), NotMember> {
    if g.degree() != d.n() {
        return Err(NotMember::DegreeMismatch);
    }
    check_images(g.images(), d)
}

pub fn contains(d: &DeltaIndex, g: &Permutation) -> bool {
    check_membership(g, d).is_ok()
}

fn check_images(images: &[u32], d: &DeltaIndex) -> std::result::Result<(), NotMember> {
    let mask = d.mask();
    let inside = |x: u32| mask & (1u64 << x) != 0;
    let n = images.len();
    if d.is_bisection() {
        let mut x = 0u32;
        for step in 0..n {
            if step > 0 && x == 0 {
                return Err(NotMember::NotFullCycle);
            }
            let y = images[x as usize];
            if inside(x) == inside(y) {
                // the cycle check must win when both fail, so finish walking
                return if cycle_len_from(images, 0) == n {
                    Err(NotMember::DoesNotAlternate)
                } else {
                    Err(NotMember::NotFullCycle)
                };
            }
            x = y;
        }
        if x == 0 {
            Ok(())
        } else {
            Err(NotMember::NotFullCycle)
        }
    } else {
        let a = d.size();
        let mut lens = cycle_lengths(images);
        lens.sort_unstable();
        if lens != [a, n - a] {
            return Err(NotMember::WrongCycleType);
        }
        let first_in = d.points()[0] - 1;
        let mut x = first_in;
        for _ in 0..a {
            if !inside(x) {
                return Err(NotMember::WrongSupport);
            }
            x = images[x as usize];
        }
        if x == first_in {
            Ok(())
        } else {
            Err(NotMember::WrongSupport)
        }
    }
}

fn cycle_lengths(images: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out
}

fn cycle_len_from(images: &[u32], start: u32) -> usize {
    let mut len = 1;
    let mut x = images[start as usize];
    while x != start {
        x = images[x as usize];
        len += 1;
    }
    len
}

/// The unique pool of `Π(i)` containing `g`, if any.
pub fn pool_of(g: &Permutation, family: Family) -> Option<DeltaIndex> {
    let n = g.degree();
    if n % 2 == 1 || n < 4 || n > crate::families::MAX_SET_DEGREE {
        return None;
    }
    if g.is_full_cycle() {
        // points at even distance from 1 along the cycle
        let mut pts = Vec::with_capacity(n / 2);
        let mut x = 0u32;
        for step in 0..n {
            if step % 2 == 0 {
                pts.push(x + 1);
            }
            x = g.images()[x as usize];
        }
        return DeltaIndex::new(n, pts, family).ok();
    }
    if family == Family::One {
        return None;
    }
    let cycles = g.cycles();
    if cycles.len() != 2 {
        return None;
    }
    let small = cycles.iter().min_by_key(|c| c.len()).unwrap();
    if small.len() % 2 == 0 || 2 * small.len() >= n {
        return None;
    }
    DeltaIndex::new(n, small.clone(), family).ok()
}

/// Calls `f` on the 0-based image table of every member of `C(Δ)`.
pub fn for_each_member(d: &DeltaIndex, mut f: impl FnMut(&[u32])) -> Result<()> {
    let n = d.n();
    if n > MAX_ENUMERATION_DEGREE {
        return Err(Error::DegreeOutOfRange {
            what: "pool enumeration",
            n,
            min: 4,
            max: MAX_ENUMERATION_DEGREE,
        });
    }
    let inside: Vec<u32> = d.points().iter().map(|p| p - 1).collect();
    let outside: Vec<u32> = d.complement().iter().map(|p| p - 1).collect();
    let mut images = vec![0u32; n];
    if d.is_bisection() {
        // cycle word 0, o1, i1, o2, i2, ...
        let mut rest_in: Vec<u32> = inside[1..].to_vec();
        let mut word = vec![0u32; n];
        loop {
            let mut out = outside.clone();
            loop {
                for k in 0..n / 2 {
                    word[2 * k + 1] = out[k];
                    if k > 0 {
                        word[2 * k] = rest_in[k - 1];
                    }
                }
                for k in 0..n {
                    images[word[k] as usize] = word[(k + 1) % n];
                }
                f(&images);
                if !next_permutation(&mut out) {
                    break;
                }
            }
            if !next_permutation(&mut rest_in) {
                break;
            }
        }
    } else {
        let mut tail_in: Vec<u32> = inside[1..].to_vec();
        loop {
            write_cycle(&mut images, inside[0], &tail_in);
            let mut tail_out: Vec<u32> = outside[1..].to_vec();
            loop {
                write_cycle(&mut images, outside[0], &tail_out);
                f(&images);
                if !next_permutation(&mut tail_out) {
                    break;
                }
            }
            if !next_permutation(&mut tail_in) {
                break;
            }
        }
    }
    Ok(())
}

fn write_cycle(images: &mut [u32], head: u32, tail: &[u32]) {
    let mut prev = head;
    for &x in tail {
        images[prev as usize] = x;
        prev = x;
    }
    images[prev as usize] = head;
}

pub fn enumerate(d: &DeltaIndex) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    for_each_member(d, |img| {
        out.push(Permutation::from_images_unchecked(img.to_vec()))
    })?;
    Ok(out)
}

/// A uniform element of `C(Δ)`, built directly from uniform shuffles.
///
/// The only inputs are Δ and the stream, so pools never influence each other.
pub fn sample_uniform<R: Rng + ?Sized>(d: &DeltaIndex, rng: &mut R) -> Permutation {
    let n = d.n();
    let mut inside: Vec<u32> = d.points().iter().map(|p| p - 1).collect();
    let mut outside: Vec<u32> = d.complement().iter().map(|p| p - 1).collect();
    let mut images = vec![0u32; n];
    if d.is_bisection() {
        inside[1..].shuffle(rng);
        outside.shuffle(rng);
        let word: Vec<u32> = inside
            .iter()
            .zip(&outside)
            .flat_map(|(&x, &y)| [x, y])
            .collect();
        for k in 0..n {
            images[word[k] as usize] = word[(k + 1) % n];
        }
    } else {
        inside[1..].shuffle(rng);
        outside[1..].shuffle(rng);
        write_cycle(&mut images, inside[0], &inside[1..]);
        write_cycle(&mut images, outside[0], &outside[1..]);
    }
    Permutation::from_images_unchecked(images)
}

/// The stream for Δ: ChaCha8 seeded with
/// `SHA-256(STREAM_TAG || master_seed as 8 little-endian bytes || key(Δ))`,
/// where `key(Δ)` is the comma-separated sorted point list, e.g. `"1,2,3"`.
pub fn derive_stream(master_seed: u64, d: &DeltaIndex) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(STREAM_TAG);
    hasher.update(master_seed.to_le_bytes());
    hasher.update(d.key().as_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// An exact fraction `|C(Δ) ∩ H| / |C(Δ)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionValue {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl FractionValue {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Self {
        FractionValue {
            numerator,
            denominator,
        }
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(
            self.numerator.clone().into(),
            self.denominator.clone().into(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for FractionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// `f_Δ(H)` by enumerating `C(Δ)`.
pub fn f_delta(d: &DeltaIndex, h: &SubgroupDescriptor) -> Result<FractionValue> {
    if h.degree() != d.n() {
        return Err(Error::DegreeMismatch {
            left: d.n(),
            right: h.degree(),
        });
    }
    let matcher = h.matcher()?;
    let mut hits = 0u64;
    for_each_member(d, |img| hits += matcher.contains(img) as u64)?;
    Ok(FractionValue::new(BigUint::from(hits), cdelta_size(d)))
}

/// `|C(Δ) ∩ H|` for every Δ of the family at once, by sorting the elements of
/// `H` into their pools.
pub fn pool_counts(h: &SubgroupDescriptor, family: Family) -> Result<BTreeMap<DeltaIndex, u64>> {
    let n = h.degree();
    if n > MAX_ENUMERATION_DEGREE {
        return Err(Error::DegreeOutOfRange {
            what: "pool counts",
            n,
            min: 4,
            max: MAX_ENUMERATION_DEGREE,
        });
    }
    crate::families::require_even(n)?;
    let mut counts = BTreeMap::new();
    h.for_each_element(|img| {
        let g = Permutation::from_images_unchecked(img.to_vec());
        if let Some(d) = pool_of(&g, family) {
            *counts.entry(d).or_insert(0u64) += 1;
        }
    })?;
    Ok(counts)
}

/// Whether `g` is an n-cycle or has exactly two cycles.
pub fn is_admissible(g: &Permutation) -> bool {
    g.is_full_cycle() || g.cycles().len() == 2
}

/// Number of distinct subgroups conjugate to `m` that contain `g`.
///
/// Conjugates of a set stabilizer are the stabilizers of sets of the same
/// size; `Stab(X) = Stab(Ω∖X)`, so for `|X| = n/2` each subgroup is counted
/// once. Conjugates of a block stabilizer are the stabilizers of partitions of
/// the same shape.
pub fn conjugate_count(g: &Permutation, m: &SubgroupDescriptor) -> Result<usize> {
    let n = g.degree();
    if m.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: m.degree(),
        });
    }
    if !is_admissible(g) {
        return Err(Error::InadmissibleElement(g.to_string()));
    }
    if n > MAX_CONJUGATE_DEGREE {
        return Err(Error::DegreeOutOfRange {
            what: "conjugate count",
            n,
            min: 2,
            max: MAX_CONJUGATE_DEGREE,
        });
    }
    match m {
        SubgroupDescriptor::Intransitive { delta, .. } => {
            let k = delta.len();
            let pool: Vec<u32> = (1..=n as u32).collect();
            let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
            for_each_combination(&pool, k, |xs| {
                if 2 * k == n && xs[0] != 1 {
                    return;
                }
                if xs.iter().all(|&x| xs.binary_search(&g.image(x)).is_ok()) {
                    seen.insert(xs.to_vec());
                }
            });
            Ok(seen.len())
        }
        SubgroupDescriptor::Imprimitive { blocks, .. } => {
            let d = blocks[0].len();
            let systems = all_block_systems(n, d, blocks.len())?;
            let mut count = 0;
            for w in &systems {
                if w.matcher()?.contains(g.images()) {
                    count += 1;
                }
            }
            Ok(count)
        }
        SubgroupDescriptor::PrimitiveBound { .. } => Err(Error::NoElementMembership),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::catalog;
    use num_traits::One;

    fn delta(n: usize, pts: &[u32], fam: Family) -> DeltaIndex {
        DeltaIndex::new(n, pts.to_vec(), fam).unwrap()
    }

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    #[test]
    fn closed_form_sizes() {
        assert_eq!(
            cdelta_size(&delta(6, &[1, 2, 3], Family::One)),
            BigUint::from(12u32)
        );
        assert_eq!(
            cdelta_size(&delta(8, &[1, 2, 3], Family::Two)),
            BigUint::from(48u32)
        );
        assert_eq!(
            cdelta_size(&delta(4, &[1, 2], Family::One)),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn four_point_pool() {
        let d = delta(4, &[1, 2], Family::One);
        let mut got: Vec<String> = enumerate(&d)
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        got.sort();
        assert_eq!(got, vec!["(1 3 2 4)", "(1 4 2 3)"]);
        // oracle: all six 4-cycles, filtered by partition swapping
        let blocks = d.subgroup();
        let mut v = vec![0u32, 1, 2, 3];
        let mut hits = 0;
        loop {
            let g = Permutation::from_images(v.clone()).unwrap();
            if g.is_full_cycle() && blocks.contains(&g).unwrap() && g.image(1) > 2 {
                hits += 1;
            }
            if !next_permutation(&mut v) {
                break;
            }
        }
        assert_eq!(hits, 2);
    }

    #[test]
    fn membership_examples() {
        let d = delta(4, &[1, 2], Family::One);
        assert!(contains(&d, &p(4, "(1 3 2 4)")));
        assert_eq!(
            check_membership(&p(4, "(1 2 3 4)"), &d),
            Err(NotMember::DoesNotAlternate)
        );
        assert_eq!(
            check_membership(&Permutation::identity(4), &d),
            Err(NotMember::NotFullCycle)
        );
        let d = delta(8, &[1, 2, 3], Family::Two);
        assert!(contains(&d, &p(8, "(1 2 3)(4 5 6 7 8)")));
        assert_eq!(
            check_membership(&p(8, "(1 2 4)(3 5 6 7 8)"), &d),
            Err(NotMember::WrongSupport)
        );
        assert_eq!(
            check_membership(&p(8, "(1 2 3)(4 5 6 7)"), &d),
            Err(NotMember::WrongCycleType)
        );
        assert_eq!(
            check_membership(&Permutation::identity(8), &d),
            Err(NotMember::WrongCycleType)
        );
        assert_eq!(
            check_membership(&p(8, "(1 2 3 4 5 6 7 8)"), &d),
            Err(NotMember::WrongCycleType)
        );
        assert_eq!(
            check_membership(&p(6, "(1 2 3)"), &d),
            Err(NotMember::DegreeMismatch)
        );
    }

    #[test]
    fn enumeration_matches_closed_form_and_membership() {
        for n in [4, 6, 8] {
            for d in catalog(n, Family::Two).unwrap() {
                let members = enumerate(&d).unwrap();
                assert_eq!(BigUint::from(members.len()), cdelta_size(&d), "{d}");
                let distinct: BTreeSet<&Permutation> = members.iter().collect();
                assert_eq!(distinct.len(), members.len());
                for g in &members {
                    assert!(contains(&d, g), "{g} not in C({d})");
                    assert_eq!(pool_of(g, Family::Two).as_ref(), Some(&d));
                }
            }
        }
    }

    /// Membership oracle straight from the definition, over all of S_6.
    #[test]
    fn membership_agrees_with_definition() {
        let n = 6;
        let pools: Vec<DeltaIndex> = catalog(n, Family::Two).unwrap().collect();
        let mut v: Vec<u32> = (0..n as u32).collect();
        loop {
            let g = Permutation::from_images(v.clone()).unwrap();
            for d in &pools {
                let expected = if d.is_bisection() {
                    g.is_full_cycle()
                        && d.points()
                            .iter()
                            .all(|&x| !d.points().contains(&g.image(x)))
                } else {
                    let cycles = g.cycles();
                    cycles.len() == 2
                        && cycles.iter().any(|c| {
                            let mut c = c.clone();
                            c.sort();
                            c == d.points()
                        })
                };
                assert_eq!(contains(d, &g), expected, "{g} vs {d}");
            }
            if !next_permutation(&mut v) {
                break;
            }
        }
    }

    #[test]
    fn pools_are_disjoint() {
        for n in [4, 6, 8] {
            for fam in [Family::One, Family::Two] {
                let mut seen = BTreeSet::new();
                for d in catalog(n, fam).unwrap() {
                    for g in enumerate(&d).unwrap() {
                        assert!(seen.insert(g), "pools overlap at n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn inequality_one_holds() {
        for n in (4..=16).step_by(2) {
            let floor = min_cdelta_size(n);
            for d in catalog(n, Family::Two).unwrap() {
                let size = BigRational::from_integer(cdelta_size(&d).into());
                assert!(size >= floor, "{d}");
            }
        }
    }

    #[test]
    fn sampler_hits_both_four_point_members_evenly() {
        let d = delta(4, &[1, 2], Family::One);
        let mut rng = derive_stream(7, &d);
        let trials = 10_000;
        let mut a = 0;
        for _ in 0..trials {
            let g = sample_uniform(&d, &mut rng);
            assert!(contains(&d, &g));
            if g.to_string() == "(1 3 2 4)" {
                a += 1;
            }
        }
        // chi-square with one degree of freedom, 99.9% critical value 10.83
        let e = trials as f64 / 2.0;
        let chi2 = 2.0 * (a as f64 - e).powi(2) / e;
        assert!(chi2 < 10.83, "chi2 = {chi2}");
    }

    #[test]
    fn sampler_support_is_whole_pool() {
        for (n, pts, fam) in [
            (6, vec![1, 2, 3], Family::One),
            (8, vec![2, 5, 7], Family::Two),
        ] {
            let d = delta(n, &pts, fam);
            let mut rng = derive_stream(1, &d);
            let mut seen = BTreeSet::new();
            for _ in 0..5_000 {
                let g = sample_uniform(&d, &mut rng);
                assert!(contains(&d, &g));
                seen.insert(g);
            }
            assert_eq!(BigUint::from(seen.len()), cdelta_size(&d));
        }
    }

    #[test]
    fn streams_depend_on_seed_and_delta() {
        let d1 = delta(8, &[1, 2, 3, 4], Family::One);
        let d2 = delta(8, &[1, 2, 3, 5], Family::One);
        let draw = |s, d: &DeltaIndex| sample_uniform(d, &mut derive_stream(s, d));
        assert_eq!(draw(3, &d1), draw(3, &d1));
        let many: BTreeSet<Permutation> = (0..20).map(|s| draw(s, &d1)).collect();
        assert!(many.len() > 1);
        assert_ne!(
            derive_stream(3, &d1).random::<u64>(),
            derive_stream(3, &d2).random::<u64>()
        );
    }

    #[test]
    fn fractions() {
        let d = delta(6, &[1, 2, 3], Family::One);
        let w =
            SubgroupDescriptor::imprimitive(6, vec![vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        assert!(f_delta(&d, &w).unwrap().is_zero());
        assert_eq!(
            f_delta(&d, &d.subgroup()).unwrap().value(),
            BigRational::one()
        );
        let d = delta(6, &[1, 3, 5], Family::One);
        let f = f_delta(&d, &w).unwrap();
        let hits = enumerate(&d)
            .unwrap()
            .iter()
            .filter(|g| w.contains(g).unwrap())
            .count();
        assert_eq!(f.numerator, BigUint::from(hits));
        assert_eq!(f.denominator, BigUint::from(12u32));
        assert!(!f.is_zero());
        assert!(matches!(
            f_delta(&d, &SubgroupDescriptor::primitive_bound(6)),
            Err(Error::NoElementMembership)
        ));
    }

    #[test]
    fn pool_counts_match_single_fractions() {
        let w = SubgroupDescriptor::imprimitive(
            8,
            vec![vec![1, 2], vec![3, 4], vec![5, 6], vec![7, 8]],
        )
        .unwrap();
        let counts = pool_counts(&w, Family::Two).unwrap();
        for d in catalog(8, Family::Two).unwrap() {
            let f = f_delta(&d, &w).unwrap();
            assert_eq!(
                f.numerator,
                BigUint::from(counts.get(&d).copied().unwrap_or(0)),
                "{d}"
            );
        }
    }

    #[test]
    fn conjugate_counts() {
        let g = p(6, "(1 2 3 4 5 6)");
        let m = SubgroupDescriptor::imprimitive(6, vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!(conjugate_count(&g, &m).unwrap(), 1);
        let g = p(6, "(1 2 3)(4 5 6)");
        let m = SubgroupDescriptor::intransitive(6, vec![1, 2, 3]).unwrap();
        assert_eq!(conjugate_count(&g, &m).unwrap(), 1);
        let m = SubgroupDescriptor::intransitive(6, vec![1]).unwrap();
        assert_eq!(conjugate_count(&g, &m).unwrap(), 0);
        assert!(matches!(
            conjugate_count(&p(6, "(1 2)"), &m),
            Err(Error::InadmissibleElement(_))
        ));
    }
}
