//! Local-lemma bookkeeping for the random choice of one element per pool.
//!
//! Vertices are unordered pairs `{Δ₁, Δ₂}` of pool indices; two vertices are
//! adjacent when they share an index. The bad event for a vertex splits by the
//! kind of maximal subgroup `H` outside the family containing both chosen
//! elements:
//!
//! | j | subgroups                        |
//! |---|----------------------------------|
//! | 1 | intransitive                     |
//! | 2 | primitive                        |
//! | 3 | imprimitive, 3 blocks            |
//! | 4 | imprimitive, 4 blocks            |
//! | 5 | imprimitive, at least 5 blocks   |
//!
//! Two bound chains are provided. The exact chain (`n <= 64`) evaluates
//! closed forms as rationals and uses the true class counts for `n`. The
//! explicit chain works at any `n` in the log domain and uses only the uniform
//! estimates: class counts `n, 1, 1, 2√n`, Stirling-explicit fractions, the
//! explicit wreath order bound and the minimum pool size. Threshold decisions
//! use the explicit chain, whose satisfaction is monotone in `n`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{
    e_upper, four_block_fraction, four_block_fraction_log2, log2_biguint, log2_rational, log2_sum,
    max_wreath_order, min_pool_size_log2_lower, round_down, round_up, three_block_fraction,
    three_block_fraction_log2, wreath_order_log2_bound, BoundValue, Provenance,
};
use crate::cdelta::{cdelta_size, enumerate, min_cdelta_size};
use crate::combin::factorial;
use crate::error::{Error, Result};
use crate::families::{
    all_block_systems, family_size, hfamily_constants, imprimitive_shapes, require_even,
    DeltaIndex, Family, Matcher, SubgroupDescriptor,
};
use crate::perm::Permutation;

/// Largest degree evaluated with exact rationals.
pub const EXACT_DOMAIN_MAX: usize = 64;

/// Event indices.
pub const EVENTS: [u8; 5] = [1, 2, 3, 4, 5];

pub const CFSG_ASSUMPTION: &str = "c2<=n via CFSG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    n: usize,
    family: Family,
    pools: BigUint,
}

impl DependencyGraph {
    pub fn new(n: usize, family: Family) -> Result<Self> {
        let pools = family_size(n, family)?;
        Ok(DependencyGraph { n, family, pools })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn pool_count(&self) -> &BigUint {
        &self.pools
    }

    pub fn vertex_count(&self) -> BigUint {
        let p = &self.pools;
        if p < &BigUint::from(2u32) {
            return BigUint::zero();
        }
        p * (p - 1u32) / 2u32
    }

    /// `2(|S| - 2)`.
    pub fn valency(&self) -> BigUint {
        (&self.pools - 2u32) * 2u32
    }

    /// Distinct vertices sharing a pool index.
    pub fn adjacent(v: (&DeltaIndex, &DeltaIndex), w: (&DeltaIndex, &DeltaIndex)) -> bool {
        let same = (v.0 == w.0 && v.1 == w.1) || (v.0 == w.1 && v.1 == w.0);
        !same && (v.0 == w.0 || v.0 == w.1 || v.1 == w.0 || v.1 == w.1)
    }
}

fn admissible_size(n: usize, family: Family, s: usize) -> bool {
    2 * s == n || (family == Family::Two && s % 2 == 1 && 2 * s < n)
}

/// Size pairs `(|Δ₁|, |Δ₂|)` with `|Δ₁| >= |Δ₂|` realized by some vertex.
pub fn size_pairs(n: usize, family: Family) -> Result<Vec<(usize, usize)>> {
    require_even(n)?;
    let mut sizes = vec![n / 2];
    if family == Family::Two {
        sizes.extend((1..n / 2).rev().filter(|s| s % 2 == 1));
    }
    let mut out = Vec::new();
    for (x, &s1) in sizes.iter().enumerate() {
        for &s2 in &sizes[x..] {
            out.push((s1, s2));
        }
    }
    Ok(out)
}

fn check_args(n: usize, family: Family, j: u8, sizes: (usize, usize)) -> Result<()> {
    require_even(n)?;
    if !(1..=5).contains(&j) {
        return Err(Error::InvalidDescriptor(format!(
            "event index {j} outside 1..=5"
        )));
    }
    for s in [sizes.0, sizes.1] {
        if !admissible_size(n, family, s) {
            return Err(Error::InvalidDelta(format!(
                "size {s} is not a pool size of family {family} at n={n}"
            )));
        }
    }
    Ok(())
}

fn rat(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn pool_size_by_size(n: usize, s: usize) -> BigUint {
    if 2 * s == n {
        factorial(s - 1) * factorial(s)
    } else {
        factorial(s - 1) * factorial(n - s - 1)
    }
}

/// The tightest available bound on `P(E_v^j)`: exact chain for `n <= 64`,
/// explicit chain beyond.
pub fn event_bound(n: usize, family: Family, j: u8, sizes: (usize, usize)) -> Result<BoundValue> {
    if n <= EXACT_DOMAIN_MAX {
        exact_event_bound(n, family, j, sizes)
    } else {
        explicit_event_bound(n, family, j, sizes)
    }
}

/// Exact chain. Zero for `j = 1`; for `j = 2` the primitive estimate
/// `n³·4ⁿ / ((2/n)²(n/2)!²)`; for `j = 3, 4, 5` the true class counts with the
/// exact fractions, and for `j = 4` with two bisections the single-member
/// product `f₁·f₂`.
pub fn exact_event_bound(
    n: usize,
    family: Family,
    j: u8,
    sizes: (usize, usize),
) -> Result<BoundValue> {
    check_args(n, family, j, sizes)?;
    if n > EXACT_DOMAIN_MAX {
        return Err(Error::DegreeOutOfRange {
            what: "exact bound chain",
            n,
            min: 4,
            max: EXACT_DOMAIN_MAX,
        });
    }
    let (s1, s2) = sizes;
    let n2 = rat(BigUint::from(n * n));
    let consts = hfamily_constants(n, family)?;
    let half = |s: usize| 2 * s == n;
    Ok(match j {
        1 => BoundValue::exact(BigRational::zero(), Provenance::IntransitiveExcluded),
        2 => {
            let num = rat(BigUint::from(n).pow(3) * BigUint::from(4u32).pow(n as u32));
            BoundValue::exact(num / min_cdelta_size(n), Provenance::PrimitiveOrder)
        }
        3 => {
            let f = three_block_fraction(n, s1).min(three_block_fraction(n, s2));
            BoundValue::exact(
                rat(BigUint::from(consts.c3)) * n2 * f,
                Provenance::ThreeBlockClasses,
            )
        }
        4 if half(s1) && half(s2) => {
            let f = four_block_fraction(n, s1);
            let s4 = rat(BigUint::from(consts.s4 * consts.c4));
            BoundValue::exact(s4 * &f * &f, Provenance::FourBlockSingleMember)
        }
        4 => {
            let f = four_block_fraction(n, s1).min(four_block_fraction(n, s2));
            BoundValue::exact(
                rat(BigUint::from(consts.c4)) * n2 * f,
                Provenance::FourBlockClasses,
            )
        }
        _ => {
            let value = match max_wreath_order(n) {
                None => BigRational::zero(),
                Some(order) => {
                    let big = pool_size_by_size(n, s1).max(pool_size_by_size(n, s2));
                    rat(BigUint::from(consts.c5)) * n2 * rat(order) / rat(big)
                }
            };
            BoundValue::exact(value, Provenance::ManyBlockOrder)
        }
    })
}

/// Explicit chain in the log domain, valid for every even `n`.
pub fn explicit_event_bound(
    n: usize,
    family: Family,
    j: u8,
    sizes: (usize, usize),
) -> Result<BoundValue> {
    check_args(n, family, j, sizes)?;
    let (s1, s2) = sizes;
    let nf = n as f64;
    let log_n2 = 2.0 * nf.log2();
    let half = |s: usize| 2 * s == n;
    let v = match j {
        1 => {
            return Ok(BoundValue::log2(
                f64::NEG_INFINITY,
                Provenance::IntransitiveExcluded,
            ))
        }
        2 => BoundValue::log2(
            round_up(3.0 * nf.log2() + 2.0 * nf - min_pool_size_log2_lower(n)),
            Provenance::PrimitiveOrder,
        ),
        3 => BoundValue::log2(
            round_up(
                log_n2 + three_block_fraction_log2(n, s1).min(three_block_fraction_log2(n, s2)),
            ),
            Provenance::ThreeBlockClasses,
        ),
        4 if half(s1) && half(s2) => BoundValue::log2(
            round_up(2.0 * four_block_fraction_log2(n, s1)),
            Provenance::FourBlockSingleMember,
        ),
        4 => BoundValue::log2(
            round_up(log_n2 + four_block_fraction_log2(n, s1).min(four_block_fraction_log2(n, s2))),
            Provenance::FourBlockClasses,
        ),
        _ => BoundValue::log2(
            round_up(
                1.0 + 0.5 * nf.log2() + log_n2 + wreath_order_log2_bound(n)
                    - min_pool_size_log2_lower(n),
            ),
            Provenance::ManyBlockOrder,
        ),
    };
    Ok(v)
}

/// The five bounds for one size pair and their log-sum.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexBound {
    pub sizes: (usize, usize),
    pub per_event: Vec<BoundValue>,
    pub total_log2: f64,
}

fn explicit_vertex(n: usize, family: Family, sizes: (usize, usize)) -> Result<VertexBound> {
    let per_event: Vec<BoundValue> = EVENTS
        .iter()
        .map(|&j| explicit_event_bound(n, family, j, sizes))
        .collect::<Result<_>>()?;
    let logs: Vec<f64> = per_event.iter().map(BoundValue::log2_upper).collect();
    Ok(VertexBound {
        sizes,
        per_event,
        total_log2: log2_sum(&logs),
    })
}

/// Size pairs that can maximize the explicit chain. Odd sizes enter the chain
/// only through the 3-block term, which grows with `a(n-a)`, so the largest odd
/// size dominates every other one.
fn explicit_candidate_pairs(n: usize, family: Family) -> Vec<(usize, usize)> {
    let h = n / 2;
    let mut out = vec![(h, h)];
    if family == Family::Two {
        let top = if h % 2 == 1 { h - 2 } else { h - 1 };
        if top >= 1 {
            out.push((h, top));
            out.push((top, top));
        }
    }
    out
}

/// Worst size pair under the explicit chain.
pub fn explicit_worst(n: usize, family: Family) -> Result<VertexBound> {
    require_even(n)?;
    let mut best: Option<VertexBound> = None;
    for sizes in explicit_candidate_pairs(n, family) {
        let v = explicit_vertex(n, family, sizes)?;
        if best.as_ref().is_none_or(|b| v.total_log2 > b.total_log2) {
            best = Some(v);
        }
    }
    Ok(best.expect("at least one size pair"))
}

/// Worst size pair under the exact chain and the exact total.
pub fn exact_worst(n: usize, family: Family) -> Result<(VertexBound, BigRational)> {
    let mut best: Option<(VertexBound, BigRational)> = None;
    for sizes in size_pairs(n, family)? {
        let per_event: Vec<BoundValue> = EVENTS
            .iter()
            .map(|&j| exact_event_bound(n, family, j, sizes))
            .collect::<Result<_>>()?;
        let total: BigRational = per_event
            .iter()
            .map(|b| b.as_exact().unwrap().clone())
            .sum();
        if best.as_ref().is_none_or(|(_, t)| &total > t) {
            let total_log2 = round_up(log2_rational(&total));
            best = Some((
                VertexBound {
                    sizes,
                    per_event,
                    total_log2,
                },
                total,
            ));
        }
    }
    Ok(best.expect("at least one size pair"))
}

/// `log2(1/(e(d+1)))`, rounded down.
pub fn lll_target_log2(valency: &BigUint) -> f64 {
    let e = log2_rational(&e_upper());
    round_down(-(e + log2_biguint(&(valency + 1u32))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `total <= 2^{-(n+3)}`.
    pub two_pow: bool,
    /// `total <= 1/(e(d+1))`.
    pub lll: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSummary {
    pub worst_sizes: [usize; 2],
    /// Event index to the bound as `p/q`.
    pub bounds: BTreeMap<String, String>,
    pub total: String,
    pub total_log2: f64,
    pub thresholds: Thresholds,
}

/// Result of the local-lemma check at one degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LllReport {
    pub n: usize,
    pub i: Family,
    /// Valency `2(|S| - 2)` in decimal.
    pub d: String,
    pub worst_sizes: [usize; 2],
    /// Event index to `log2` of its bound in the explicit chain; `null` for zero.
    pub bounds: BTreeMap<String, Option<f64>>,
    pub provenance: BTreeMap<String, Provenance>,
    pub total_log2: f64,
    pub two_pow_target_log2: f64,
    pub lll_target_log2: f64,
    pub thresholds: Thresholds,
    /// `2^{-(n+3)} <= 1/(e(d+1))`, checked exactly.
    pub two_pow_implies_lll: bool,
    /// Exact-chain evaluation, for `n <= 64`.
    pub exact: Option<ExactSummary>,
    pub cfsg_assumed: bool,
    pub assumptions: Vec<String>,
}

/// `2^{-(n+3)} <= 1/(e(d+1))`, i.e. `e_hi·(d+1) <= 2^{n+3}` with a rational `e_hi > e`.
pub fn two_pow_implies_lll(n: usize, valency: &BigUint) -> bool {
    let lhs = e_upper() * rat(valency + 1u32);
    lhs <= rat(BigUint::one() << (n + 3))
}

pub fn lll_report(n: usize, family: Family) -> Result<LllReport> {
    require_even(n)?;
    if n < 6 {
        return Err(Error::DegreeOutOfRange {
            what: "local lemma report",
            n,
            min: 6,
            max: usize::MAX,
        });
    }
    let graph = DependencyGraph::new(n, family)?;
    let d = graph.valency();
    let worst = explicit_worst(n, family)?;
    let lll_target = lll_target_log2(&d);
    let two_pow_target = -((n + 3) as f64);
    let thresholds = Thresholds {
        two_pow: worst.total_log2 <= two_pow_target,
        lll: worst.total_log2 <= lll_target,
    };
    let bounds = EVENTS
        .iter()
        .zip(&worst.per_event)
        .map(|(&j, b)| {
            (
                j.to_string(),
                Some(b.log2_upper()).filter(|x| x.is_finite()),
            )
        })
        .collect();
    let provenance = EVENTS
        .iter()
        .zip(&worst.per_event)
        .map(|(&j, b)| (j.to_string(), b.provenance))
        .collect();
    let exact = if n <= EXACT_DOMAIN_MAX {
        let (v, total) = exact_worst(n, family)?;
        let two_pow =
            total <= BigRational::new(BigInt::one(), BigInt::from(BigUint::one() << (n + 3)));
        let lll = &total * e_upper() * rat(&d + 1u32) <= BigRational::one();
        Some(ExactSummary {
            worst_sizes: [v.sizes.0, v.sizes.1],
            bounds: EVENTS
                .iter()
                .zip(&v.per_event)
                .map(|(&j, b)| (j.to_string(), b.as_exact().unwrap().to_string()))
                .collect(),
            total: total.to_string(),
            total_log2: v.total_log2,
            thresholds: Thresholds { two_pow, lll },
        })
    } else {
        None
    };
    Ok(LllReport {
        n,
        i: family,
        d: d.to_string(),
        worst_sizes: [worst.sizes.0, worst.sizes.1],
        bounds,
        provenance,
        total_log2: worst.total_log2,
        two_pow_target_log2: two_pow_target,
        lll_target_log2: lll_target,
        thresholds,
        two_pow_implies_lll: two_pow_implies_lll(n, &d),
        exact,
        cfsg_assumed: true,
        assumptions: vec![CFSG_ASSUMPTION.to_string()],
    })
}

/// Recomputes a report and lists the fields that differ.
pub fn verify_report(report: &LllReport) -> Result<Vec<String>> {
    let fresh = lll_report(report.n, report.i)?;
    let mut diffs = Vec::new();
    macro_rules! cmp {
        ($($field:ident),*) => {$(
            if fresh.$field != report.$field {
                diffs.push(format!(
                    "{}: recorded {:?}, recomputed {:?}",
                    stringify!($field), report.$field, fresh.$field
                ));
            }
        )*};
    }
    cmp!(
        d,
        worst_sizes,
        bounds,
        provenance,
        total_log2,
        two_pow_target_log2,
        lll_target_log2,
        thresholds,
        two_pow_implies_lll,
        exact,
        cfsg_assumed,
        assumptions
    );
    Ok(diffs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub total_log2: f64,
    pub two_pow_target_log2: f64,
    pub lll_target_log2: f64,
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub i: Family,
    pub n_min: usize,
    pub n_max: usize,
    pub rows: Vec<SweepRow>,
    /// Smallest `n` in range with `total <= 1/(e(d+1))`.
    pub lll_threshold: Option<usize>,
    /// Smallest `n` in range with `total <= 2^{-(n+3)}`.
    pub two_pow_threshold: Option<usize>,
    /// Every row from `lll_threshold` on satisfies the local lemma.
    pub lll_monotone: bool,
    pub two_pow_monotone: bool,
}

/// Explicit-chain table over even `n` in `[n_min, n_max]`.
pub fn sweep(family: Family, n_min: usize, n_max: usize) -> Result<Sweep> {
    use rayon::prelude::*;
    let lowest = n_min.max(6);
    let start = lowest + lowest % 2;
    let ns: Vec<usize> = (start..=n_max).step_by(2).collect();
    let rows: Vec<SweepRow> = ns
        .par_iter()
        .map(|&n| {
            let worst = explicit_worst(n, family)?;
            let d = DependencyGraph::new(n, family)?.valency();
            let lll_target = lll_target_log2(&d);
            let two_pow_target = -((n + 3) as f64);
            Ok(SweepRow {
                n,
                total_log2: worst.total_log2,
                two_pow_target_log2: two_pow_target,
                lll_target_log2: lll_target,
                thresholds: Thresholds {
                    two_pow: worst.total_log2 <= two_pow_target,
                    lll: worst.total_log2 <= lll_target,
                },
            })
        })
        .collect::<Result<_>>()?;
    let first =
        |pick: fn(&Thresholds) -> bool| rows.iter().find(|r| pick(&r.thresholds)).map(|r| r.n);
    let monotone = |from: Option<usize>, pick: fn(&Thresholds) -> bool| match from {
        None => true,
        Some(n0) => rows
            .iter()
            .filter(|r| r.n >= n0)
            .all(|r| pick(&r.thresholds)),
    };
    let lll_threshold = first(|t| t.lll);
    let two_pow_threshold = first(|t| t.two_pow);
    Ok(Sweep {
        i: family,
        n_min: start,
        n_max,
        lll_monotone: monotone(lll_threshold, |t| t.lll),
        two_pow_monotone: monotone(two_pow_threshold, |t| t.two_pow),
        rows,
        lll_threshold,
        two_pow_threshold,
    })
}

/// Largest degree for the exhaustive event probabilities.
pub const MAX_EVENT_ENUMERATION_DEGREE: usize = 10;

/// Exact `P(E_v^j)` for `j ∈ {1, 3, 4, 5}` by enumerating `C(Δ₁) × C(Δ₂)`
/// against every member of each class. Primitive subgroups (`j = 2`) are not
/// materialized and map to `None`.
pub fn event_probabilities(
    d1: &DeltaIndex,
    d2: &DeltaIndex,
) -> Result<BTreeMap<u8, Option<BigRational>>> {
    let n = d1.n();
    if d2.n() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: d2.n(),
        });
    }
    if n > MAX_EVENT_ENUMERATION_DEGREE {
        return Err(Error::DegreeOutOfRange {
            what: "event enumeration",
            n,
            min: 4,
            max: MAX_EVENT_ENUMERATION_DEGREE,
        });
    }
    if d1 == d2 {
        return Err(Error::InvalidDelta(format!(
            "vertex needs two distinct pools, got {d1} twice"
        )));
    }
    let family = d1.family();
    let pools = [enumerate(d1)?, enumerate(d2)?];
    let denom = rat(cdelta_size(d1) * cdelta_size(d2));
    let mut out = BTreeMap::new();
    for j in EVENTS {
        if j == 2 {
            out.insert(j, None);
            continue;
        }
        let tagger = MemberTagger::new(n, family, j)?;
        let groups: Vec<HashMap<Vec<u64>, u64>> = pools
            .iter()
            .map(|pool| {
                let mut g: HashMap<Vec<u64>, u64> = HashMap::new();
                for x in pool {
                    *g.entry(tagger.tags(x)).or_insert(0) += 1;
                }
                g
            })
            .collect();
        let mut hits = 0u64;
        for (t1, c1) in &groups[0] {
            if t1.is_empty() {
                continue;
            }
            for (t2, c2) in &groups[1] {
                if sorted_intersect(t1, t2) {
                    hits += c1 * c2;
                }
            }
        }
        out.insert(j, Some(rat(BigUint::from(hits)) / &denom));
    }
    Ok(out)
}

fn sorted_intersect(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut k) = (0, 0);
    while i < a.len() && k < b.len() {
        match a[i].cmp(&b[k]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => k += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Labels each element with the members of one class `H_j` containing it.
struct MemberTagger {
    n: usize,
    family: Family,
    j: u8,
    /// Block systems per block count, keyed by their canonical label.
    systems: Vec<(usize, HashMap<Vec<u8>, u64>, Vec<(u64, Matcher)>)>,
}

impl MemberTagger {
    fn new(n: usize, family: Family, j: u8) -> Result<Self> {
        let wanted = |m: usize| match j {
            3 => m == 3,
            4 => m == 4,
            5 => m >= 5,
            _ => false,
        };
        let mut systems = Vec::new();
        let mut next_id = 0u64;
        for (d, m) in imprimitive_shapes(n) {
            if !wanted(m) {
                continue;
            }
            let descs = all_block_systems(n, d, m)?;
            let mut ids = HashMap::new();
            let mut matchers = Vec::new();
            for desc in &descs {
                if let SubgroupDescriptor::Imprimitive { blocks, .. } = desc {
                    ids.insert(block_label(n, blocks), next_id);
                    matchers.push((next_id, desc.matcher()?));
                    next_id += 1;
                }
            }
            systems.push((m, ids, matchers));
        }
        Ok(MemberTagger {
            n,
            family,
            j,
            systems,
        })
    }

    fn tags(&self, g: &Permutation) -> Vec<u64> {
        let mut out = Vec::new();
        if self.j == 1 {
            // intransitive maximal subgroups outside the family: Stab(X) with
            // X a union of cycles and |X| < n/2, unless X indexes M(2)
            let cycles = g.cycles();
            let k = cycles.len();
            for pick in 1u32..(1 << k) - 1 {
                let mut mask = 0u64;
                let mut size = 0;
                for (c, cycle) in cycles.iter().enumerate() {
                    if pick & (1 << c) != 0 {
                        size += cycle.len();
                        for &p in cycle {
                            mask |= 1 << (p - 1);
                        }
                    }
                }
                let (mask, size) = if 2 * size > self.n {
                    (!mask & ((1u64 << self.n) - 1), self.n - size)
                } else {
                    (mask, size)
                };
                if 2 * size == self.n {
                    continue;
                }
                if self.family == Family::Two && size % 2 == 1 {
                    continue;
                }
                out.push(mask);
            }
        } else {
            for (m, ids, matchers) in &self.systems {
                if g.is_full_cycle() {
                    // an n-cycle preserves exactly one system with m blocks:
                    // the orbits of its m-th power
                    let label = power_orbit_label(g, *m);
                    out.push(ids[&label]);
                } else {
                    for (id, matcher) in matchers {
                        if matcher.contains(g.images()) {
                            out.push(*id);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Block index of each point, with blocks numbered by first appearance.
fn block_label(n: usize, blocks: &[Vec<u32>]) -> Vec<u8> {
    let mut owner = vec![0u8; n];
    for (b, block) in blocks.iter().enumerate() {
        for &p in block {
            owner[p as usize - 1] = b as u8;
        }
    }
    canonical_label(&owner)
}

fn canonical_label(owner: &[u8]) -> Vec<u8> {
    let mut map: HashMap<u8, u8> = HashMap::new();
    owner
        .iter()
        .map(|b| {
            let next = map.len() as u8;
            *map.entry(*b).or_insert(next)
        })
        .collect()
}

fn power_orbit_label(g: &Permutation, m: usize) -> Vec<u8> {
    let n = g.degree();
    let mut owner = vec![u8::MAX; n];
    let mut x = 0usize;
    for step in 0..n {
        owner[x] = (step % m) as u8;
        x = g.images()[x] as usize;
    }
    canonical_label(&owner)
}

/// Representative vertices of two bisections, one per value of
/// `min(k, n/2 - k)` with `k = |Δ₁ ∩ Δ₂|`; every bisection vertex is in the
/// orbit of one of these.
pub fn bisection_vertex_representatives(n: usize) -> Result<Vec<(DeltaIndex, DeltaIndex)>> {
    require_even(n)?;
    let h = n / 2;
    let d1 = DeltaIndex::new(n, (1..=h as u32).collect::<Vec<_>>(), Family::One)?;
    let mut out = Vec::new();
    for k in 1..=h / 2 {
        let mut pts: Vec<u32> = (1..=k as u32).collect();
        pts.extend((h as u32 + 1)..=(h + h - k) as u32);
        out.push((d1.clone(), DeltaIndex::new(n, pts, Family::One)?));
    }
    Ok(out)
}

/// Explicit-chain totals never fall below exact-chain totals where both exist.
pub fn explicit_dominates_exact(n: usize, family: Family) -> Result<bool> {
    for sizes in size_pairs(n, family)? {
        for j in EVENTS {
            let exact = exact_event_bound(n, family, j, sizes)?;
            let explicit = explicit_event_bound(n, family, j, sizes)?;
            if exact.log2_upper() > explicit.log2_upper() + 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
