//! Generation probabilities `p(n)`, `a(n)`, `b(n)`, `c(n)`:
//!
//! * `p`: a random pair from `Sₙ` generates `Aₙ` or `Sₙ`;
//! * `a`: a random pair from `Aₙ` generates `Aₙ`;
//! * `b`: a random pair from `Sₙ ∖ Aₙ` generates `Sₙ`;
//! * `c`: a random even and a random odd element generate `Sₙ`.
//!
//! Pairs are ordered and drawn with replacement.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::check_range;
use super::clique::{vertex_elements, VertexSet};
use crate::chain::{classify, GenerationClass};
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub const MAX_EXACT_DEGREE: usize = 6;
/// Degrees above this need `allow_long`.
pub const MAX_QUICK_EXACT_DEGREE: usize = 5;
pub const MAX_MC_DEGREE: usize = 40;
pub const MIN_MC_TRIALS: u64 = 1000;
/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489;
const CHUNK: u64 = 4096;
const STREAM_TAG: &[u8] = b"symgen/probgen-stream/v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub generating: u64,
    pub pairs: u64,
}

impl PairCount {
    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.generating), BigInt::from(self.pairs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactGenerationStats {
    pub n: usize,
    pub p: PairCount,
    pub a: PairCount,
    pub b: PairCount,
    pub c: PairCount,
}

impl ExactGenerationStats {
    /// `p = (a + b + 2c)/4`.
    pub fn mixture_identity_holds(&self) -> bool {
        let four = BigRational::from_integer(BigInt::from(4));
        let two = BigRational::from_integer(BigInt::from(2));
        self.p.ratio() * four == self.a.ratio() + self.b.ratio() + two * self.c.ratio()
    }

    /// `b = c`.
    pub fn coset_identity_holds(&self) -> bool {
        self.b.ratio() == self.c.ratio()
    }
}

/// Exact counts by enumerating all ordered pairs; `n = 6` needs `allow_long`.
pub fn generation_counts_exact(n: usize, allow_long: bool) -> Result<ExactGenerationStats> {
    let max = if allow_long {
        MAX_EXACT_DEGREE
    } else {
        MAX_QUICK_EXACT_DEGREE
    };
    check_range("generation_counts_exact", n, 3, max)?;
    let elements = vertex_elements(n, VertexSet::Symmetric);
    // [both even → Aₙ, both odd → Sₙ, even/odd → Sₙ, any → ⊇ Aₙ]
    let hits = elements
        .par_iter()
        .map(|x| {
            let mut local = [0u64; 4];
            for y in &elements {
                let class = classify(n, &[x, y]);
                match (x.is_even(), y.is_even()) {
                    (true, true) => local[0] += (class == GenerationClass::Alternating) as u64,
                    (false, false) => local[1] += class.is_full() as u64,
                    (true, false) => local[2] += class.is_full() as u64,
                    (false, true) => {}
                }
                local[3] += class.contains_alternating() as u64;
            }
            local
        })
        .reduce(
            || [0; 4],
            |l, r| [l[0] + r[0], l[1] + r[1], l[2] + r[2], l[3] + r[3]],
        );
    let total = elements.len() as u64;
    let half = total / 2;
    Ok(ExactGenerationStats {
        n,
        p: PairCount {
            generating: hits[3],
            pairs: total * total,
        },
        a: PairCount {
            generating: hits[0],
            pairs: half * half,
        },
        b: PairCount {
            generating: hits[1],
            pairs: half * half,
        },
        c: PairCount {
            generating: hits[2],
            pairs: half * half,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    fn new(successes: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z_99);
        Estimate {
            successes,
            trials,
            estimate: successes as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Wilson score interval.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let phat = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let centre = (phat + z2 / (2.0 * t)) / denom;
    let spread = z * (phat * (1.0 - phat) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    ((centre - spread).max(0.0), (centre + spread).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloStats {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub p: Estimate,
    pub a: Estimate,
    pub b: Estimate,
    pub c: Estimate,
    /// `1 − 1/n`.
    pub asymptotic: f64,
}

#[derive(Clone, Copy)]
enum Quantity {
    P,
    A,
    B,
    C,
}

impl Quantity {
    fn tag(self) -> &'static [u8] {
        match self {
            Quantity::P => b"p",
            Quantity::A => b"a",
            Quantity::B => b"b",
            Quantity::C => b"c",
        }
    }
}

fn chunk_stream(seed: u64, q: Quantity, chunk: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(STREAM_TAG);
    hasher.update(seed.to_le_bytes());
    hasher.update(q.tag());
    hasher.update(chunk.to_le_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Uniform element of `Sₙ`, or of the requested coset of `Aₙ`.
fn random_element(n: usize, parity: Option<bool>, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    let g = Permutation::from_images_unchecked(images);
    match parity {
        Some(even) if g.is_even() != even => {
            // right-multiplying by a transposition is a bijection between cosets
            let mut images = g.images().to_vec();
            images.swap(0, 1);
            Permutation::from_images_unchecked(images)
        }
        _ => g,
    }
}

fn estimate(n: usize, trials: u64, seed: u64, q: Quantity) -> Estimate {
    let chunks = trials.div_ceil(CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_stream(seed, q, k);
            let count = CHUNK.min(trials - k * CHUNK);
            (0..count)
                .filter(|_| {
                    let (px, py) = match q {
                        Quantity::P => (None, None),
                        Quantity::A => (Some(true), Some(true)),
                        Quantity::B => (Some(false), Some(false)),
                        Quantity::C => (Some(true), Some(false)),
                    };
                    let x = random_element(n, px, &mut rng);
                    let y = random_element(n, py, &mut rng);
                    let class = classify(n, &[&x, &y]);
                    match q {
                        Quantity::P | Quantity::A => class.contains_alternating(),
                        Quantity::B | Quantity::C => class.is_full(),
                    }
                })
                .count() as u64
        })
        .sum();
    Estimate::new(successes, trials)
}

/// Monte Carlo estimates with 99% Wilson intervals. Trials run in fixed
/// chunks with their own streams, so results do not depend on thread count.
pub fn generation_prob_mc(n: usize, trials: u64, seed: u64) -> Result<MonteCarloStats> {
    check_range("generation_prob_mc", n, 2, MAX_MC_DEGREE)?;
    if trials < MIN_MC_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_MC_TRIALS} trials, got {trials}"
        )));
    }
    Ok(MonteCarloStats {
        n,
        trials,
        seed,
        p: estimate(n, trials, seed, Quantity::P),
        a: estimate(n, trials, seed, Quantity::A),
        b: estimate(n, trials, seed, Quantity::B),
        c: estimate(n, trials, seed, Quantity::C),
        asymptotic: 1.0 - 1.0 / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn identities_exact() {
        for n in 3..=5 {
            let s = generation_counts_exact(n, false).unwrap();
            assert!(s.mixture_identity_holds(), "n={n}");
            assert!(s.coset_identity_holds(), "n={n}");
        }
    }

    #[test]
    fn s3_by_hand() {
        let s = generation_counts_exact(3, false).unwrap();
        // A₃ is cyclic of order 3: every pair except (1, 1) generates it.
        assert_eq!((s.a.generating, s.a.pairs), (8, 9));
        // two distinct transpositions generate S₃
        assert_eq!((s.b.generating, s.b.pairs), (6, 9));
        assert_eq!(s.p.pairs, 36);
    }

    #[test]
    fn s4_pair_total() {
        let s = generation_counts_exact(4, false).unwrap();
        assert_eq!(s.p.pairs, 576);
        assert!(generation_counts_exact(6, false).is_err());
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let exact = generation_counts_exact(4, false).unwrap();
        let mc = generation_prob_mc(4, 100_000, 7).unwrap();
        for (e, m) in [
            (&exact.p, &mc.p),
            (&exact.a, &mc.a),
            (&exact.b, &mc.b),
            (&exact.c, &mc.c),
        ] {
            let v = e.ratio().to_f64().unwrap();
            assert!(m.contains(v), "{v} outside [{}, {}]", m.ci_low, m.ci_high);
        }
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = generation_prob_mc(8, 5000, 3).unwrap();
        let b = generation_prob_mc(8, 5000, 3).unwrap();
        assert_eq!(a, b);
        assert!(generation_prob_mc(8, 999, 3).is_err());
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(50, 100, Z_99);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12);
        let (lo, hi) = wilson_interval(0, 100, Z_99);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
    }
}
