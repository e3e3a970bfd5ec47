//! Symbolic maximal subgroups of `Sₙ` and the two families used to build
//! pairwise generating sets.
//!
//! For even `n`, `M(1)` consists of the stabilizers of bisections
//! `{Δ, Ω∖Δ}` with `|Δ| = n/2`; `M(2)` adds the set stabilizers
//! `S_a × S_{n-a}` with `a` odd and `a < n/2`. Members are indexed by the
//! subsets Δ of `S(1)` (size `n/2`, containing 1) and `S(2)` (additionally
//! every odd-size subset below `n/2`).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{
    binomial, equal_block_partitions, factorial, factorial_u64, integer_partitions, lehmer_rank,
    lehmer_unrank, next_permutation, subset_sums,
};
use crate::error::{Error, Result};
use crate::perm::{CycleType, Permutation};

/// Largest degree for which point subsets are materialized (bitmask width).
pub const MAX_SET_DEGREE: usize = 64;

/// Largest degree for exhaustive element-by-element checks.
pub const MAX_EXHAUSTIVE_DEGREE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Family {
    /// Bisection stabilizers only; generation means `⟨x, y⟩ = Sₙ`.
    One,
    /// Bisection stabilizers and odd set stabilizers; generation means `⟨x, y⟩ ⊇ Aₙ`.
    Two,
}

impl Family {
    pub fn tag(self) -> u8 {
        match self {
            Family::One => 1,
            Family::Two => 2,
        }
    }
}

impl TryFrom<u8> for Family {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Family::One),
            2 => Ok(Family::Two),
            other => Err(Error::UnknownFamily(other)),
        }
    }
}

impl From<Family> for u8 {
    fn from(f: Family) -> u8 {
        f.tag()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

pub fn require_even(n: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::OddDegree { n });
    }
    if n < 4 {
        return Err(Error::DegreeOutOfRange {
            what: "family",
            n,
            min: 4,
            max: usize::MAX,
        });
    }
    Ok(())
}

fn points_mask(points: &[u32]) -> u64 {
    points.iter().fold(0u64, |m, &p| m | (1u64 << (p - 1)))
}

/// A member of `S(i)`: a point subset indexing both `M_Δ` and `C(Δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaIndex {
    n: usize,
    points: Vec<u32>,
    mask: u64,
    family: Family,
}

impl DeltaIndex {
    pub fn new(n: usize, points: impl Into<Vec<u32>>, family: Family) -> Result<Self> {
        require_even(n)?;
        if n > MAX_SET_DEGREE {
            return Err(Error::DegreeOutOfRange {
                what: "delta index",
                n,
                min: 4,
                max: MAX_SET_DEGREE,
            });
        }
        let mut points = points.into();
        points.sort_unstable();
        let bad = |why: &str| Error::InvalidDelta(format!("{points:?} in degree {n}: {why}"));
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("repeated point"));
        }
        if points.iter().any(|&p| p == 0 || p as usize > n) {
            return Err(bad("point outside 1..=n"));
        }
        let k = points.len();
        let bisection = k == n / 2 && points.first() == Some(&1);
        let odd_small = k % 2 == 1 && k < n / 2;
        let ok = match family {
            Family::One => bisection,
            Family::Two => bisection || odd_small,
        };
        if !ok {
            return Err(bad(match family {
                Family::One => "family 1 needs |Δ| = n/2 with 1 ∈ Δ",
                Family::Two => "family 2 needs |Δ| = n/2 with 1 ∈ Δ, or |Δ| odd and < n/2",
            }));
        }
        let mask = points_mask(&points);
        Ok(DeltaIndex {
            n,
            points,
            mask,
            family,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Sorted 1-based points.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Bit `p - 1` set for every point `p ∈ Δ`.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn is_bisection(&self) -> bool {
        self.size() == self.n / 2
    }

    pub fn complement(&self) -> Vec<u32> {
        (1..=self.n as u32)
            .filter(|p| self.mask & (1 << (p - 1)) == 0)
            .collect()
    }

    /// Canonical serialization, e.g. `"1,2,3"`; keys RNG streams and certificates.
    pub fn key(&self) -> String {
        self.points
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// The subgroup `M_Δ`.
    pub fn subgroup(&self) -> SubgroupDescriptor {
        if self.is_bisection() {
            SubgroupDescriptor::Imprimitive {
                n: self.n,
                blocks: vec![self.points.clone(), self.complement()],
            }
        } else {
            SubgroupDescriptor::Intransitive {
                n: self.n,
                delta: self.points.clone(),
            }
        }
    }
}

impl fmt::Display for DeltaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Set stabilizer of a `k`-set.
    Intransitive {
        k: usize,
    },
    /// Stabilizer of `m` blocks of size `d`.
    Imprimitive {
        d: usize,
        m: usize,
    },
    Primitive,
}

/// A maximal subgroup of `Sₙ` given symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SubgroupDescriptor {
    Intransitive {
        n: usize,
        delta: Vec<u32>,
    },
    Imprimitive {
        n: usize,
        blocks: Vec<Vec<u32>>,
    },
    /// Only an order bound; no element-level membership.
    PrimitiveBound {
        n: usize,
        order_bound: BigUint,
    },
}

impl SubgroupDescriptor {
    pub fn intransitive(n: usize, delta: impl Into<Vec<u32>>) -> Result<Self> {
        let mut delta = delta.into();
        delta.sort_unstable();
        delta.dedup();
        if n > MAX_SET_DEGREE
            || delta.is_empty()
            || delta.len() >= n
            || delta.iter().any(|&p| p == 0 || p as usize > n)
        {
            return Err(Error::InvalidDescriptor(format!(
                "intransitive subset {delta:?} must be a proper non-empty subset of 1..={n}"
            )));
        }
        Ok(SubgroupDescriptor::Intransitive { n, delta })
    }

    /// Canonicalizes the blocks (sorted, ordered by minimum).
    pub fn imprimitive(n: usize, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let m = blocks.len();
        let bad = |why: &str| Error::InvalidDescriptor(format!("blocks {blocks:?}: {why}"));
        if m < 2 || n > MAX_SET_DEGREE {
            return Err(bad("need at least two blocks"));
        }
        let d = blocks[0].len();
        if d < 2 || blocks.iter().any(|b| b.len() != d) || d * m != n {
            return Err(bad("need m > 1 blocks of equal size d > 1 with dm = n"));
        }
        let mut seen = 0u64;
        for &p in blocks.iter().flatten() {
            if p == 0 || p as usize > n || seen & (1 << (p - 1)) != 0 {
                return Err(bad("blocks must partition 1..=n"));
            }
            seen |= 1 << (p - 1);
        }
        let mut blocks: Vec<Vec<u32>> = blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SubgroupDescriptor::Imprimitive { n, blocks })
    }

    /// A primitive maximal subgroup, known only through the `4ⁿ` order bound.
    pub fn primitive_bound(n: usize) -> Self {
        SubgroupDescriptor::PrimitiveBound {
            n,
            order_bound: BigUint::from(4u32).pow(n as u32),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            SubgroupDescriptor::Intransitive { n, .. }
            | SubgroupDescriptor::Imprimitive { n, .. }
            | SubgroupDescriptor::PrimitiveBound { n, .. } => *n,
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            SubgroupDescriptor::Intransitive { delta, .. } => {
                Shape::Intransitive { k: delta.len() }
            }
            SubgroupDescriptor::Imprimitive { blocks, .. } => Shape::Imprimitive {
                d: blocks[0].len(),
                m: blocks.len(),
            },
            SubgroupDescriptor::PrimitiveBound { .. } => Shape::Primitive,
        }
    }

    /// Exact order (the bound itself for primitive descriptors).
    pub fn order(&self) -> BigUint {
        match self {
            SubgroupDescriptor::Intransitive { n, delta } => {
                factorial(delta.len()) * factorial(n - delta.len())
            }
            SubgroupDescriptor::Imprimitive { blocks, .. } => {
                factorial(blocks[0].len()).pow(blocks.len() as u32) * factorial(blocks.len())
            }
            SubgroupDescriptor::PrimitiveBound { order_bound, .. } => order_bound.clone(),
        }
    }

    pub fn matcher(&self) -> Result<Matcher> {
        match self {
            SubgroupDescriptor::Intransitive { delta, .. } => Ok(Matcher::SetStabilizer {
                points: delta.iter().map(|p| p - 1).collect(),
                mask: points_mask(delta),
            }),
            SubgroupDescriptor::Imprimitive { n, blocks } => {
                let mut block_of = vec![0u8; *n];
                for (b, block) in blocks.iter().enumerate() {
                    for &p in block {
                        block_of[p as usize - 1] = b as u8;
                    }
                }
                Ok(Matcher::BlockStabilizer {
                    block_of,
                    blocks: blocks
                        .iter()
                        .map(|b| b.iter().map(|p| p - 1).collect())
                        .collect(),
                })
            }
            SubgroupDescriptor::PrimitiveBound { .. } => Err(Error::NoElementMembership),
        }
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: g.degree(),
            });
        }
        Ok(self.matcher()?.contains(g.images()))
    }

    /// Calls `f` on the 0-based image table of every element.
    pub fn for_each_element(&self, mut f: impl FnMut(&[u32])) -> Result<()> {
        match self {
            SubgroupDescriptor::Intransitive { n, delta } => {
                let inside: Vec<u32> = delta.iter().map(|p| p - 1).collect();
                let outside: Vec<u32> = (0..*n as u32).filter(|x| !inside.contains(x)).collect();
                let mut img_in = inside.clone();
                let mut images = vec![0u32; *n];
                loop {
                    for (&x, &y) in inside.iter().zip(&img_in) {
                        images[x as usize] = y;
                    }
                    let mut img_out = outside.clone();
                    loop {
                        for (&x, &y) in outside.iter().zip(&img_out) {
                            images[x as usize] = y;
                        }
                        f(&images);
                        if !next_permutation(&mut img_out) {
                            break;
                        }
                    }
                    if !next_permutation(&mut img_in) {
                        break;
                    }
                }
                Ok(())
            }
            SubgroupDescriptor::Imprimitive { n, blocks } => {
                let m = blocks.len();
                let blocks0: Vec<Vec<u32>> = blocks
                    .iter()
                    .map(|b| b.iter().map(|p| p - 1).collect())
                    .collect();
                let mut images = vec![0u32; *n];
                let mut sigma: Vec<usize> = (0..m).collect();
                loop {
                    // block i goes to block sigma[i]; each block bijection runs
                    // through all d! orderings of its target block (odometer)
                    let mut targets: Vec<Vec<u32>> =
                        sigma.iter().map(|&s| blocks0[s].clone()).collect();
                    loop {
                        for (src, tgt) in blocks0.iter().zip(&targets) {
                            for (&x, &y) in src.iter().zip(tgt) {
                                images[x as usize] = y;
                            }
                        }
                        f(&images);
                        let mut wheel = 0;
                        while wheel < m && !next_permutation(&mut targets[wheel]) {
                            wheel += 1;
                        }
                        if wheel == m {
                            break;
                        }
                    }
                    if !next_permutation(&mut sigma) {
                        break;
                    }
                }
                Ok(())
            }
            SubgroupDescriptor::PrimitiveBound { .. } => Err(Error::NoElementMembership),
        }
    }
}

impl fmt::Display for SubgroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |pts: &[u32]| pts.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            SubgroupDescriptor::Intransitive { delta, .. } => write!(f, "Stab{{{}}}", list(delta)),
            SubgroupDescriptor::Imprimitive { blocks, .. } => {
                let parts: Vec<String> = blocks.iter().map(|b| list(b)).collect();
                write!(f, "Stab[{}]", parts.join("|"))
            }
            SubgroupDescriptor::PrimitiveBound { n, .. } => {
                write!(f, "Primitive(n={n}, |H| <= 4^{n})")
            }
        }
    }
}

/// Precomputed membership test over 0-based image tables.
#[derive(Debug, Clone)]
pub enum Matcher {
    SetStabilizer {
        points: Vec<u32>,
        mask: u64,
    },
    BlockStabilizer {
        block_of: Vec<u8>,
        blocks: Vec<Vec<u32>>,
    },
}

impl Matcher {
    #[inline]
    pub fn contains(&self, images: &[u32]) -> bool {
        match self {
            Matcher::SetStabilizer { points, mask } => points
                .iter()
                .all(|&x| mask & (1u64 << images[x as usize]) != 0),
            Matcher::BlockStabilizer { block_of, blocks } => blocks.iter().all(|block| {
                let target = block_of[images[block[0] as usize] as usize];
                block[1..]
                    .iter()
                    .all(|&x| block_of[images[x as usize] as usize] == target)
            }),
        }
    }
}

/// `|M(1)| = ½·C(n, n/2)`; `|M(2)| = ½·C(n, n/2) + 2ⁿ⁻² if n/2 is even, 2ⁿ⁻² if n/2 is odd`.
pub fn family_size(n: usize, family: Family) -> Result<BigUint> {
    require_even(n)?;
    let half = binomial(n, n / 2) / 2u32;
    Ok(match family {
        Family::One => half,
        Family::Two => {
            let pow = BigUint::one() << (n - 2);
            if (n / 2) % 2 == 0 {
                half + pow
            } else {
                pow
            }
        }
    })
}

/// Iterates `S(i)` in lexicographic order of the sorted point lists, without
/// materializing it.
pub fn catalog(n: usize, family: Family) -> Result<Catalog> {
    require_even(n)?;
    if n > MAX_SET_DEGREE {
        return Err(Error::DegreeOutOfRange {
            what: "catalog",
            n,
            min: 4,
            max: MAX_SET_DEGREE,
        });
    }
    Ok(Catalog {
        n,
        family,
        current: Vec::new(),
        started: false,
    })
}

pub struct Catalog {
    n: usize,
    family: Family,
    current: Vec<u32>,
    started: bool,
}

impl Catalog {
    /// Preorder step in the tree of increasing sequences, depth at most n/2.
    fn advance(&mut self) -> bool {
        let n = self.n as u32;
        let max_len = self.n / 2;
        if !self.started {
            self.started = true;
            self.current.push(1);
            return true;
        }
        if self.current.len() < max_len {
            if let Some(&last) = self.current.last() {
                if last < n {
                    self.current.push(last + 1);
                    return true;
                }
            }
        }
        while let Some(last) = self.current.pop() {
            if last < n {
                if self.family == Family::One && self.current.is_empty() {
                    // every member contains 1
                    return false;
                }
                self.current.push(last + 1);
                return true;
            }
        }
        false
    }

    fn admissible(&self) -> bool {
        let k = self.current.len();
        let bisection = k == self.n / 2 && self.current[0] == 1;
        match self.family {
            Family::One => bisection,
            Family::Two => bisection || (k % 2 == 1 && k < self.n / 2),
        }
    }
}

impl Iterator for Catalog {
    type Item = DeltaIndex;

    fn next(&mut self) -> Option<DeltaIndex> {
        while self.advance() {
            if self.admissible() {
                let points = self.current.clone();
                let mask = points_mask(&points);
                return Some(DeltaIndex {
                    n: self.n,
                    points,
                    mask,
                    family: self.family,
                });
            }
        }
        None
    }
}

/// The members of `M(i)` in catalog order.
pub fn family_descriptors(n: usize, family: Family) -> Result<Vec<SubgroupDescriptor>> {
    Ok(catalog(n, family)?.map(|d| d.subgroup()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMode {
    /// Decide per cycle type which family members can contain such elements.
    CycleType,
    /// Mark every element of every family member.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub n: usize,
    pub i: Family,
    pub mode: CoverMode,
    pub covered: bool,
    pub uncovered_cycle_types: Vec<CycleType>,
}

/// Why the covering argument places a cycle type inside `M(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverReason {
    /// Swaps the halves of some bisection.
    AllCyclesEven,
    /// Each of the two cycles is one half of a bisection.
    TwoEqualCycles,
    /// Stabilizes the support of an odd cycle of length `< n/2`.
    OddCycleBelowHalf,
}

/// The covering argument for `M(2)`: a sufficient reason, if any.
pub fn covering_reason(ct: &CycleType, family: Family) -> Option<CoverReason> {
    let n = ct.degree();
    let lens = ct.lengths();
    if lens.iter().all(|l| l % 2 == 0) {
        return Some(CoverReason::AllCyclesEven);
    }
    if lens.len() == 2 && lens[0] == lens[1] {
        return Some(CoverReason::TwoEqualCycles);
    }
    if family == Family::Two && lens.iter().any(|&l| l % 2 == 1 && 2 * l < n) {
        return Some(CoverReason::OddCycleBelowHalf);
    }
    None
}

/// Whether some member of `M(i)` contains elements of cycle type `ct`.
///
/// An element stabilizes Δ setwise iff Δ is a union of its cycles, and swaps
/// Δ with its complement iff every cycle alternates between them (so all
/// cycles have even length and any such element swaps some bisection).
pub fn family_meets_cycle_type(ct: &CycleType, family: Family) -> bool {
    let n = ct.degree();
    let lens = ct.lengths();
    let reach = subset_sums(lens, n);
    if lens.iter().all(|l| l % 2 == 0) || reach[n / 2] {
        return true;
    }
    family == Family::Two && (1..n.div_ceil(2)).step_by(2).any(|a| 2 * a < n && reach[a])
}

pub fn covers(n: usize, family: Family, mode: CoverMode) -> Result<CoverReport> {
    require_even(n)?;
    let uncovered = match mode {
        CoverMode::CycleType => integer_partitions(n)
            .into_iter()
            .map(CycleType::new)
            .filter(|ct| !family_meets_cycle_type(ct, family))
            .collect(),
        CoverMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_DEGREE {
                return Err(Error::DegreeOutOfRange {
                    what: "exhaustive cover",
                    n,
                    min: 4,
                    max: MAX_EXHAUSTIVE_DEGREE,
                });
            }
            exhaustive_uncovered(n, &family_descriptors(n, family)?)?
        }
    };
    Ok(CoverReport {
        n,
        i: family,
        mode,
        covered: uncovered.is_empty(),
        uncovered_cycle_types: uncovered,
    })
}

/// Marks every element of every descriptor in a bitset over `Sₙ` (indexed by
/// Lehmer rank) and returns the cycle types of the unmarked elements.
pub fn exhaustive_uncovered(
    n: usize,
    descriptors: &[SubgroupDescriptor],
) -> Result<Vec<CycleType>> {
    if n > MAX_EXHAUSTIVE_DEGREE {
        return Err(Error::DegreeOutOfRange {
            what: "exhaustive cover",
            n,
            min: 1,
            max: MAX_EXHAUSTIVE_DEGREE,
        });
    }
    let total = factorial_u64(n);
    let words: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    descriptors.par_iter().try_for_each(|desc| {
        if desc.degree() != n {
            return Err(Error::DegreeMismatch {
                left: n,
                right: desc.degree(),
            });
        }
        desc.for_each_element(|images| {
            let r = lehmer_rank(images);
            words[(r / 64) as usize].fetch_or(1 << (r % 64), Ordering::Relaxed);
        })
    })?;
    let mut uncovered = BTreeSet::new();
    for (w, word) in words.iter().enumerate() {
        let mut free = !word.load(Ordering::Relaxed);
        while free != 0 {
            let bit = free.trailing_zeros() as u64;
            free &= free - 1;
            let r = w as u64 * 64 + bit;
            if r >= total {
                break;
            }
            let g = Permutation::from_images_unchecked(lehmer_unrank(n, r));
            uncovered.insert(g.cycle_type());
        }
    }
    Ok(uncovered.into_iter().collect())
}

/// `½·C(n, n/2) + Σ_{k=1}^{⌊n/3⌋} C(n, k)`.
pub fn sigma_upper_bound(n: usize) -> Result<BigUint> {
    let base = family_size(n, Family::One)?;
    Ok((1..=n / 3).fold(base, |acc, k| acc + binomial(n, k)))
}

/// `M(1)` together with every set stabilizer of size `1..=⌊n/3⌋`, the family
/// counted by [`sigma_upper_bound`]. Not a cover for every `n`: at `n = 8` it
/// misses cycle type `(5, 3)`.
pub fn sigma_upper_descriptors(n: usize) -> Result<Vec<SubgroupDescriptor>> {
    let mut out = family_descriptors(n, Family::One)?;
    let pool: Vec<u32> = (1..=n as u32).collect();
    for k in 1..=n / 3 {
        crate::combin::for_each_combination(&pool, k, |c| {
            out.push(SubgroupDescriptor::Intransitive {
                n,
                delta: c.to_vec(),
            });
        });
    }
    Ok(out)
}

/// Shapes `(d, m)` of imprimitive maximal subgroups: `m` blocks of size `d`,
/// `d, m > 1`, `dm = n`.
pub fn imprimitive_shapes(n: usize) -> Vec<(usize, usize)> {
    (2..n)
        .filter(|m| n % m == 0 && n / m > 1)
        .map(|m| (n / m, m))
        .collect()
}

/// Every partition of `1..=n` into `m` blocks of size `d`, as descriptors.
pub fn all_block_systems(n: usize, d: usize, m: usize) -> Result<Vec<SubgroupDescriptor>> {
    let pts: Vec<u32> = (1..=n as u32).collect();
    equal_block_partitions(&pts, d, m)
        .into_iter()
        .map(|blocks| SubgroupDescriptor::imprimitive(n, blocks))
        .collect()
}

/// Class counts for the families `H_j` of maximal subgroups outside `M(i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HFamilyConstants {
    pub n: usize,
    pub i: Family,
    /// Primitive classes meeting both pools; taken as `n` (rests on the
    /// classification of finite simple groups, and only for large `n`).
    pub c2: usize,
    pub c2_assumed: bool,
    /// 3-block classes (0 or 1).
    pub c3: usize,
    /// 4-block classes (0 or 1).
    pub c4: usize,
    /// Classes with at least 5 blocks: `#{m : m | n, m >= 5, n/m >= 2}`.
    pub c5: usize,
    pub c5_bound: f64,
    pub c5_within_bound: bool,
    /// Members of `H_4` meeting two bisection pools.
    pub s4: usize,
    /// The `(d, m)` shapes counted by `c5`.
    pub many_block_shapes: Vec<(usize, usize)>,
}

pub fn hfamily_constants(n: usize, family: Family) -> Result<HFamilyConstants> {
    require_even(n)?;
    let shapes = imprimitive_shapes(n);
    let has = |m: usize| shapes.iter().any(|&(_, mm)| mm == m);
    let many: Vec<(usize, usize)> = shapes.iter().copied().filter(|&(_, m)| m >= 5).collect();
    let c5_bound = 2.0 * (n as f64).sqrt();
    Ok(HFamilyConstants {
        n,
        i: family,
        c2: n,
        c2_assumed: true,
        c3: has(3) as usize,
        c4: has(4) as usize,
        c5: many.len(),
        c5_bound,
        c5_within_bound: many.len() as f64 <= c5_bound,
        s4: 1,
        many_block_shapes: many,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    #[test]
    fn family_sizes() {
        assert_eq!(family_size(6, Family::One).unwrap(), BigUint::from(10u32));
        assert_eq!(family_size(6, Family::Two).unwrap(), BigUint::from(16u32));
        assert_eq!(family_size(8, Family::Two).unwrap(), BigUint::from(99u32));
        assert!(matches!(
            family_size(7, Family::One),
            Err(Error::OddDegree { n: 7 })
        ));
    }

    #[test]
    fn catalog_matches_closed_form() {
        for n in (4..=16).step_by(2) {
            for fam in [Family::One, Family::Two] {
                let count = catalog(n, fam).unwrap().count();
                assert_eq!(
                    BigUint::from(count),
                    family_size(n, fam).unwrap(),
                    "n={n} i={fam}"
                );
            }
        }
    }

    #[test]
    fn catalog_is_lexicographic_and_valid() {
        let all: Vec<DeltaIndex> = catalog(8, Family::Two).unwrap().collect();
        for w in all.windows(2) {
            assert!(w[0].points() < w[1].points());
        }
        for d in &all {
            assert!(DeltaIndex::new(8, d.points().to_vec(), Family::Two).is_ok());
        }
        assert_eq!(all[0].points(), &[1]);
    }

    #[test]
    fn delta_validation() {
        assert!(DeltaIndex::new(6, vec![1, 2, 3], Family::One).is_ok());
        assert!(DeltaIndex::new(6, vec![2, 3, 4], Family::One).is_err());
        assert!(DeltaIndex::new(8, vec![2, 4, 6], Family::One).is_err());
        assert!(DeltaIndex::new(8, vec![2, 4, 6], Family::Two).is_ok());
        assert!(DeltaIndex::new(8, vec![2, 4], Family::Two).is_err());
        assert!(DeltaIndex::new(7, vec![1], Family::Two).is_err());
    }

    #[test]
    fn delta_to_subgroup() {
        let d = DeltaIndex::new(6, vec![1, 2, 3], Family::One).unwrap();
        assert_eq!(
            d.subgroup(),
            SubgroupDescriptor::Imprimitive {
                n: 6,
                blocks: vec![vec![1, 2, 3], vec![4, 5, 6]]
            }
        );
        assert!(d.subgroup().contains(&p(6, "(1 4)(2 5)(3 6)")).unwrap());
        let d = DeltaIndex::new(8, vec![2, 4, 6], Family::Two).unwrap();
        assert_eq!(
            d.subgroup(),
            SubgroupDescriptor::Intransitive {
                n: 8,
                delta: vec![2, 4, 6]
            }
        );
    }

    #[test]
    fn primitive_has_no_membership() {
        let h = SubgroupDescriptor::primitive_bound(6);
        assert_eq!(
            h.contains(&Permutation::identity(6)),
            Err(Error::NoElementMembership)
        );
        assert_eq!(h.order(), BigUint::from(4096u32));
    }

    #[test]
    fn element_enumeration_sizes_and_membership() {
        let descs = [
            SubgroupDescriptor::intransitive(6, vec![1, 4]).unwrap(),
            SubgroupDescriptor::imprimitive(6, vec![vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap(),
            SubgroupDescriptor::imprimitive(6, vec![vec![4, 5, 6], vec![1, 2, 3]]).unwrap(),
        ];
        for desc in &descs {
            let matcher = desc.matcher().unwrap();
            let mut seen = BTreeSet::new();
            desc.for_each_element(|img| {
                assert!(matcher.contains(img));
                seen.insert(img.to_vec());
            })
            .unwrap();
            assert_eq!(BigUint::from(seen.len()), desc.order());
        }
    }

    /// Orbit-based oracle: g stabilizes Δ iff g(Δ) = Δ; g preserves blocks iff
    /// the image of every block is some block.
    #[test]
    fn membership_agrees_with_orbit_oracle() {
        let n = 6;
        let mut descs = family_descriptors(n, Family::Two).unwrap();
        descs.extend(all_block_systems(n, 2, 3).unwrap());
        descs.push(SubgroupDescriptor::intransitive(n, vec![2, 5]).unwrap());
        let mut v: Vec<u32> = (0..n as u32).collect();
        loop {
            let g = Permutation::from_images(v.clone()).unwrap();
            for desc in &descs {
                let expected = match desc {
                    SubgroupDescriptor::Intransitive { delta, .. } => {
                        let img: BTreeSet<u32> = delta.iter().map(|&x| g.image(x)).collect();
                        img == delta.iter().copied().collect()
                    }
                    SubgroupDescriptor::Imprimitive { blocks, .. } => {
                        let set: BTreeSet<BTreeSet<u32>> =
                            blocks.iter().map(|b| b.iter().copied().collect()).collect();
                        blocks
                            .iter()
                            .all(|b| set.contains(&b.iter().map(|&x| g.image(x)).collect()))
                    }
                    _ => unreachable!(),
                };
                assert_eq!(desc.contains(&g).unwrap(), expected, "{g} in {desc}");
            }
            if !next_permutation(&mut v) {
                break;
            }
        }
    }

    #[test]
    fn cover_small_degrees() {
        let r = covers(6, Family::Two, CoverMode::CycleType).unwrap();
        assert!(r.covered && r.uncovered_cycle_types.is_empty());
        let r = covers(6, Family::Two, CoverMode::Exhaustive).unwrap();
        assert!(r.covered);
        // (1 2 3)(4 5) fixes {1,2,3} and so lies in Stab[1,2,3|4,5,6]; the
        // cycle types missed by M(1) at n = 6 are exactly those with no
        // union of cycles of size 3 and some odd cycle.
        let expect = vec![CycleType::new(vec![4, 1, 1]), CycleType::new(vec![5, 1])];
        for mode in [CoverMode::CycleType, CoverMode::Exhaustive] {
            let r = covers(6, Family::One, mode).unwrap();
            assert!(!r.covered);
            let mut got = r.uncovered_cycle_types.clone();
            got.sort();
            assert_eq!(got, expect, "{mode:?}");
        }
        assert!(covers(7, Family::One, CoverMode::CycleType).is_err());
    }

    #[test]
    fn covering_argument_is_complete_for_family_two() {
        for n in (4..=30).step_by(2) {
            for parts in integer_partitions(n) {
                let ct = CycleType::new(parts);
                let reason = covering_reason(&ct, Family::Two);
                assert!(reason.is_some(), "{ct} has no covering reason");
                assert!(family_meets_cycle_type(&ct, Family::Two));
            }
        }
    }

    #[test]
    fn covering_reason_implies_membership() {
        for n in (4..=20).step_by(2) {
            for parts in integer_partitions(n) {
                let ct = CycleType::new(parts);
                for fam in [Family::One, Family::Two] {
                    if covering_reason(&ct, fam).is_some() {
                        assert!(family_meets_cycle_type(&ct, fam), "{ct} i={fam}");
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_upper_values() {
        assert_eq!(sigma_upper_bound(6).unwrap(), BigUint::from(31u32));
        assert_eq!(sigma_upper_bound(8).unwrap(), BigUint::from(71u32));
        let descs = sigma_upper_descriptors(6).unwrap();
        assert_eq!(descs.len(), 31);
        assert!(exhaustive_uncovered(6, &descs).unwrap().is_empty());
        // invariant sets of (5,3) have sizes 3 and 5 only, and 3 > ⌊8/3⌋
        let missed = exhaustive_uncovered(8, &sigma_upper_descriptors(8).unwrap()).unwrap();
        assert_eq!(missed, vec![CycleType::new(vec![5, 3])]);
    }

    #[test]
    fn h_family_constants() {
        let c = hfamily_constants(20, Family::One).unwrap();
        assert_eq!(c.c5, 2);
        assert_eq!(c.many_block_shapes, vec![(4, 5), (2, 10)]);
        assert!(c.c5_within_bound);
        let c = hfamily_constants(6, Family::One).unwrap();
        assert_eq!((c.c3, c.c4, c.c5), (1, 0, 0));
        let c = hfamily_constants(12, Family::Two).unwrap();
        assert_eq!((c.c3, c.c4, c.c5), (1, 1, 1));
        for n in (4..=400).step_by(2) {
            assert!(
                hfamily_constants(n, Family::One).unwrap().c5_within_bound,
                "n={n}"
            );
        }
    }
}
