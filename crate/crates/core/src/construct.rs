//! Resampling construction of pairwise generating sets, and certificates.
//!
//! One element is drawn from each pool `C(Δ)` with the pool's own stream.
//! While some pair fails to generate, the first failing pair (pools in
//! catalog order, i.e. lexicographic by sorted point list) has both of its
//! elements redrawn. A pool's stream is only ever read when that pool is
//! redrawn, so the outcome depends on the master seed alone.
//!
//! [`Strategy::MinConflicts`] is an opt-in alternative for small degrees,
//! where the local lemma gives no guarantee and plain resampling stalls.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cdelta::{check_membership, derive_stream, sample_uniform};
use crate::chain::{classify, GenerationClass};
use crate::error::{Error, Result};
use crate::families::{catalog, family_size, DeltaIndex, Family};
use crate::lll::{lll_report, verify_report, LllReport};
use crate::perm::Permutation;
use crate::VERSION;

/// Default cap on the number of pairs checked per construction.
pub const DEFAULT_MAX_PAIRS: u64 = 2_000_000;

/// `1000·|S(i)|`.
pub fn default_max_rounds(n: usize, family: Family) -> Result<u64> {
    let size = family_size(n, family)?;
    Ok(size
        .to_u64()
        .unwrap_or(u64::MAX / 1000)
        .saturating_mul(1000))
}

/// Whether a pair is good for the family: `Sₙ` for family 1, at least `Aₙ`
/// for family 2.
pub fn pair_ok(class: GenerationClass, family: Family) -> bool {
    match family {
        Family::One => class.is_full(),
        Family::Two => class.contains_alternating(),
    }
}

/// Candidates drawn per step by [`Strategy::MinConflicts`].
pub const MIN_CONFLICT_CANDIDATES: usize = 16;
/// Probability that [`Strategy::MinConflicts`] keeps its first candidate
/// regardless of score.
pub const MIN_CONFLICT_NOISE: f64 = 0.1;
const CONTROL_TAG: &[u8] = b"symgen/construct-control/v1";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Redraw both members of the first bad pair from their own streams.
    #[default]
    MoserTardos,
    /// Redraw one member of the first bad pair: draw several candidates from
    /// its stream and keep the one in the fewest bad pairs. Not a local-lemma
    /// resampling, since the choice reads the other pools' elements.
    MinConflicts,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::MoserTardos => "moser-tardos",
            Strategy::MinConflicts => "min-conflicts",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructConfig {
    pub n: usize,
    pub i: Family,
    pub seed: u64,
    pub max_rounds: u64,
    pub max_pairs: u64,
    #[serde(default)]
    pub strategy: Strategy,
}

impl ConstructConfig {
    pub fn new(n: usize, family: Family, seed: u64) -> Result<Self> {
        Ok(ConstructConfig {
            n,
            i: family,
            seed,
            max_rounds: default_max_rounds(n, family)?,
            max_pairs: DEFAULT_MAX_PAIRS,
            strategy: Strategy::default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub delta: Vec<u32>,
    pub g: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub version: String,
    pub n: usize,
    pub i: Family,
    pub seed: u64,
    pub max_rounds: u64,
    #[serde(default)]
    pub strategy: Strategy,
    /// Resampling steps performed.
    pub rounds: u64,
    pub assignment: Vec<AssignmentEntry>,
    /// Unix seconds; excluded from the checksum and absent unless requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LllCertificate {
    pub version: String,
    pub n: usize,
    pub i: Family,
    pub seed: u64,
    pub report: LllReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    #[serde(rename = "CONSTRUCTION")]
    Construction(ConstructionCertificate),
    #[serde(rename = "LLL_THRESHOLD")]
    LllThreshold(LllCertificate),
}

impl Certificate {
    pub fn n(&self) -> usize {
        match self {
            Certificate::Construction(c) => c.n,
            Certificate::LllThreshold(c) => c.n,
        }
    }

    pub fn checksum(&self) -> &str {
        match self {
            Certificate::Construction(c) => &c.checksum,
            Certificate::LllThreshold(c) => &c.checksum,
        }
    }

    /// SHA-256 over the canonical JSON with `checksum` emptied and
    /// `timestamp` removed.
    pub fn compute_checksum(&self) -> String {
        let mut blank = self.clone();
        match &mut blank {
            Certificate::Construction(c) => {
                c.checksum.clear();
                c.timestamp = None;
            }
            Certificate::LllThreshold(c) => {
                c.checksum.clear();
                c.timestamp = None;
            }
        }
        let bytes = serde_json::to_vec(&blank).expect("certificates serialize");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn seal(mut self) -> Self {
        let sum = self.compute_checksum();
        match &mut self {
            Certificate::Construction(c) => c.checksum = sum,
            Certificate::LllThreshold(c) => c.checksum = sum,
        }
        self
    }

    pub fn with_timestamp(mut self, unix_seconds: u64) -> Self {
        match &mut self {
            Certificate::Construction(c) => c.timestamp = Some(unix_seconds),
            Certificate::LllThreshold(c) => c.timestamp = Some(unix_seconds),
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureReport {
    pub n: usize,
    pub i: Family,
    pub seed: u64,
    pub strategy: Strategy,
    pub max_rounds: u64,
    pub rounds: u64,
    pub residual_bad_pairs: usize,
    pub first_bad_pair: Option<[Vec<u32>; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Success { certificate: Certificate },
    Failure { report: FailureReport },
}

impl Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Success { certificate } => Some(certificate),
            Outcome::Failure { .. } => None,
        }
    }
}

struct State {
    family: Family,
    pools: Vec<DeltaIndex>,
    streams: Vec<ChaCha8Rng>,
    chosen: Vec<Permutation>,
}

impl State {
    fn good(&self, a: usize, b: usize) -> bool {
        self.compatible(&self.chosen[a], b)
    }

    fn compatible(&self, g: &Permutation, b: usize) -> bool {
        pair_ok(
            classify(self.pools[0].n(), &[g, &self.chosen[b]]),
            self.family,
        )
    }

    fn conflicts(&self, g: &Permutation, k: usize) -> usize {
        (0..self.pools.len())
            .filter(|&j| j != k && !self.compatible(g, j))
            .count()
    }

    fn redraw(&mut self, k: usize) {
        self.chosen[k] = sample_uniform(&self.pools[k], &mut self.streams[k]);
    }
}

pub fn construct(config: &ConstructConfig) -> Result<Outcome> {
    let n = config.n;
    let family = config.i;
    if n < 6 {
        return Err(Error::DegreeOutOfRange {
            what: "construct",
            n,
            min: 6,
            max: usize::MAX,
        });
    }
    let size = family_size(n, family)?;
    let pairs = &size * (&size - 1u32) / 2u32;
    if pairs > BigUint::from(config.max_pairs) {
        return Err(Error::LimitExceeded(format!(
            "{pairs} pairs at n={n}, i={family} exceeds the cap of {}",
            config.max_pairs
        )));
    }
    let pools: Vec<DeltaIndex> = catalog(n, family)?.collect();
    let mut streams: Vec<ChaCha8Rng> = pools
        .iter()
        .map(|d| derive_stream(config.seed, d))
        .collect();
    let chosen: Vec<Permutation> = pools
        .iter()
        .zip(streams.iter_mut())
        .map(|(d, s)| sample_uniform(d, s))
        .collect();
    let mut state = State {
        family,
        pools,
        streams,
        chosen,
    };
    let count = state.pools.len();

    let all_pairs: Vec<(usize, usize)> = (0..count)
        .flat_map(|a| (a + 1..count).map(move |b| (a, b)))
        .collect();
    let mut bad: BTreeSet<(usize, usize)> = all_pairs
        .par_iter()
        .filter(|&&(a, b)| !state.good(a, b))
        .copied()
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut control = {
        let mut hasher = Sha256::new();
        hasher.update(CONTROL_TAG);
        hasher.update(config.seed.to_le_bytes());
        ChaCha8Rng::from_seed(hasher.finalize().into())
    };
    let mut rounds = 0u64;
    while let Some(&(a, b)) = bad.iter().next() {
        if rounds >= config.max_rounds {
            return Ok(Outcome::Failure {
                report: FailureReport {
                    n,
                    i: family,
                    seed: config.seed,
                    strategy: config.strategy,
                    max_rounds: config.max_rounds,
                    rounds,
                    residual_bad_pairs: bad.len(),
                    first_bad_pair: Some([
                        state.pools[a].points().to_vec(),
                        state.pools[b].points().to_vec(),
                    ]),
                },
            });
        }
        rounds += 1;
        let redrawn = match config.strategy {
            Strategy::MoserTardos => {
                state.redraw(a);
                state.redraw(b);
                vec![a, b]
            }
            Strategy::MinConflicts => {
                let k = if control.random_bool(0.5) { a } else { b };
                let candidates: Vec<Permutation> = (0..MIN_CONFLICT_CANDIDATES)
                    .map(|_| sample_uniform(&state.pools[k], &mut state.streams[k]))
                    .collect();
                let pick = if control.random_bool(MIN_CONFLICT_NOISE) {
                    0
                } else {
                    let scores: Vec<usize> = candidates
                        .par_iter()
                        .map(|g| state.conflicts(g, k))
                        .collect();
                    (0..scores.len()).min_by_key(|&c| scores[c]).unwrap_or(0)
                };
                state.chosen[k] = candidates.into_iter().nth(pick).expect("candidate exists");
                vec![k]
            }
        };
        let touched: Vec<(usize, usize)> = (0..count)
            .flat_map(|k| redrawn.iter().map(move |&x| (x, k)))
            .filter(|&(x, k)| x != k)
            .map(|(x, k)| (x.min(k), x.max(k)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let verdicts: Vec<bool> = touched.par_iter().map(|&(x, y)| state.good(x, y)).collect();
        for (pair, ok) in touched.into_iter().zip(verdicts) {
            if ok {
                bad.remove(&pair);
            } else {
                bad.insert(pair);
            }
        }
    }

    let assignment = state
        .pools
        .iter()
        .zip(&state.chosen)
        .map(|(d, g)| AssignmentEntry {
            delta: d.points().to_vec(),
            g: g.to_string(),
        })
        .collect();
    let cert = Certificate::Construction(ConstructionCertificate {
        version: VERSION.to_string(),
        n,
        i: family,
        seed: config.seed,
        max_rounds: config.max_rounds,
        strategy: config.strategy,
        rounds,
        assignment,
        timestamp: None,
        checksum: String::new(),
    })
    .seal();
    Ok(Outcome::Success { certificate: cert })
}

pub fn lll_certificate(n: usize, family: Family) -> Result<Certificate> {
    Ok(Certificate::LllThreshold(LllCertificate {
        version: VERSION.to_string(),
        n,
        i: family,
        seed: 0,
        report: lll_report(n, family)?,
        timestamp: None,
        checksum: String::new(),
    })
    .seal())
}

/// One failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Violation {
    Checksum {
        recorded: String,
        computed: String,
    },
    InvalidDelta {
        delta: Vec<u32>,
        reason: String,
    },
    DuplicateDelta {
        delta: Vec<u32>,
    },
    UnparsableElement {
        delta: Vec<u32>,
        g: String,
        reason: String,
    },
    NotInPool {
        delta: Vec<u32>,
        g: String,
        reason: String,
    },
    DuplicateElement {
        g: String,
    },
    Cardinality {
        expected: String,
        found: usize,
    },
    PairNotGenerating {
        first: Vec<u32>,
        second: Vec<u32>,
        class: GenerationClass,
    },
    BoundMismatch {
        detail: String,
    },
    Unsupported {
        reason: String,
    },
}

fn fmt_pts(p: &[u32]) -> String {
    format!(
        "{{{}}}",
        p.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    )
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Checksum { recorded, computed } => {
                write!(
                    f,
                    "checksum mismatch: recorded {recorded}, computed {computed}"
                )
            }
            Violation::InvalidDelta { delta, reason } => {
                write!(f, "Δ={}: {reason}", fmt_pts(delta))
            }
            Violation::DuplicateDelta { delta } => write!(f, "Δ={} appears twice", fmt_pts(delta)),
            Violation::UnparsableElement { delta, g, reason } => {
                write!(f, "Δ={}: cannot parse {g:?}: {reason}", fmt_pts(delta))
            }
            Violation::NotInPool { delta, g, reason } => {
                write!(f, "Δ={}: g={g}: {reason}", fmt_pts(delta))
            }
            Violation::DuplicateElement { g } => write!(f, "element {g} assigned twice"),
            Violation::Cardinality { expected, found } => {
                write!(f, "expected {expected} assignments, found {found}")
            }
            Violation::PairNotGenerating {
                first,
                second,
                class,
            } => write!(
                f,
                "pair Δ={} / Δ={} generates a {} subgroup",
                fmt_pts(first),
                fmt_pts(second),
                match class {
                    GenerationClass::FullSymmetric => "full symmetric",
                    GenerationClass::Alternating => "alternating",
                    GenerationClass::Proper => "proper",
                }
            ),
            Violation::BoundMismatch { detail } => write!(f, "bound mismatch: {detail}"),
            Violation::Unsupported { reason } => write!(f, "{reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub kind: String,
    pub n: usize,
    pub violations: Vec<Violation>,
}

/// Checks a certificate from scratch.
pub fn verify(cert: &Certificate) -> VerifyReport {
    let mut violations = Vec::new();
    let computed = cert.compute_checksum();
    if computed != cert.checksum() {
        violations.push(Violation::Checksum {
            recorded: cert.checksum().to_string(),
            computed,
        });
    }
    let kind = match cert {
        Certificate::Construction(c) => {
            verify_construction(c, &mut violations);
            "CONSTRUCTION"
        }
        Certificate::LllThreshold(c) => {
            if c.report.n != c.n || c.report.i != c.i {
                violations.push(Violation::BoundMismatch {
                    detail: "report degree or family differs from the certificate header".into(),
                });
            }
            match verify_report(&c.report) {
                Ok(diffs) => violations.extend(
                    diffs
                        .into_iter()
                        .map(|detail| Violation::BoundMismatch { detail }),
                ),
                Err(e) => violations.push(Violation::Unsupported {
                    reason: e.to_string(),
                }),
            }
            "LLL_THRESHOLD"
        }
    };
    VerifyReport {
        valid: violations.is_empty(),
        kind: kind.to_string(),
        n: cert.n(),
        violations,
    }
}

fn verify_construction(c: &ConstructionCertificate, violations: &mut Vec<Violation>) {
    let n = c.n;
    let expected = match family_size(n, c.i) {
        Ok(s) => s,
        Err(e) => {
            violations.push(Violation::Unsupported {
                reason: e.to_string(),
            });
            return;
        }
    };
    if BigUint::from(c.assignment.len()) != expected {
        violations.push(Violation::Cardinality {
            expected: expected.to_string(),
            found: c.assignment.len(),
        });
    }
    let mut seen_delta = HashSet::new();
    let mut seen_g = HashSet::new();
    let mut members: Vec<(&[u32], Permutation)> = Vec::new();
    for entry in &c.assignment {
        let delta = match DeltaIndex::new(n, entry.delta.clone(), c.i) {
            Ok(d) => d,
            Err(e) => {
                violations.push(Violation::InvalidDelta {
                    delta: entry.delta.clone(),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if !seen_delta.insert(delta.points().to_vec()) {
            violations.push(Violation::DuplicateDelta {
                delta: entry.delta.clone(),
            });
        }
        let g = match Permutation::parse(n, &entry.g) {
            Ok(g) => g,
            Err(e) => {
                violations.push(Violation::UnparsableElement {
                    delta: entry.delta.clone(),
                    g: entry.g.clone(),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if let Err(why) = check_membership(&g, &delta) {
            violations.push(Violation::NotInPool {
                delta: entry.delta.clone(),
                g: entry.g.clone(),
                reason: why.to_string(),
            });
            continue;
        }
        if !seen_g.insert(g.clone()) {
            violations.push(Violation::DuplicateElement { g: entry.g.clone() });
        }
        members.push((&entry.delta, g));
    }
    let pairs: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|a| (a + 1..members.len()).map(move |b| (a, b)))
        .collect();
    let bad: Vec<(usize, usize, GenerationClass)> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let class = classify(n, &[&members[a].1, &members[b].1]);
            (!pair_ok(class, c.i)).then_some((a, b, class))
        })
        .collect();
    for (a, b, class) in bad {
        violations.push(Violation::PairNotGenerating {
            first: members[a].0.to_vec(),
            second: members[b].0.to_vec(),
            class,
        });
    }
}
