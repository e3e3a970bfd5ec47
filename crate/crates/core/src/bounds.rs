//! Explicit numeric bounds: Stirling, closed forms for the fractions of a pool
//! inside 3- and 4-block stabilizers, their Stirling-explicit upper bounds, and
//! the explicit wreath-product order bound.
//!
//! Log-domain values are base 2. Anything used as an upper bound goes through
//! [`round_up`] so that floating-point error can only loosen it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combin::factorial;

/// `e < 27182818284590453 / 10^16`.
pub fn e_upper() -> BigRational {
    BigRational::new(
        BigInt::from(27_182_818_284_590_453u64),
        BigInt::from(10_000_000_000_000_000u64),
    )
}

/// Relative slack added by [`round_up`]; orders of magnitude above the error
/// of the f64 expressions evaluated here.
pub const ROUNDING_SLACK: f64 = 1e-9;

pub fn round_up(x: f64) -> f64 {
    x + ROUNDING_SLACK * (1.0 + x.abs())
}

pub fn round_down(x: f64) -> f64 {
    x - ROUNDING_SLACK * (1.0 + x.abs())
}

/// `log2(Σ 2^xs)`, rounded up. Empty or all `-inf` gives `-inf`.
pub fn log2_sum(xs: &[f64]) -> f64 {
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    let s: f64 = xs.iter().map(|&x| (x - top).exp2()).sum();
    round_up(top + s.log2())
}

/// `log2 x` from the top 64 bits; error below 1e-15 relative.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).log2() + shift as f64
}

/// `log2 q` for `q > 0`; `-inf` for zero.
pub fn log2_rational(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    assert!(q.is_positive(), "log of a negative rational");
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    log2_biguint(num) - log2_biguint(den)
}

pub fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

pub fn log2_factorial(m: usize) -> f64 {
    ln_factorial(m) / std::f64::consts::LN_2
}

/// `ln(√(2πm)·(m/e)^m)`, the Stirling lower bound for `m!`.
pub fn stirling_lower_ln(m: f64) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * m).ln() + m * m.ln() - m
}

/// `ln(e·√m·(m/e)^m)`, the Stirling upper bound for `m!`.
pub fn stirling_upper_ln(m: f64) -> f64 {
    1.0 + 0.5 * m.ln() + m * m.ln() - m
}

/// Both Stirling inequalities at `m`, with `ln m!` summed directly.
pub fn stirling_holds(m: usize) -> bool {
    let exact = ln_factorial(m);
    let x = m as f64;
    stirling_lower_ln(x) <= exact && exact <= stirling_upper_ln(x)
}

/// Lower bound on `log2((2/n)²·(n/2)!²)`, the smallest pool size.
pub fn min_pool_size_log2_lower(n: usize) -> f64 {
    let h = (n / 2) as f64;
    let ln = 2.0 * (2.0 / n as f64).ln() + 2.0 * stirling_lower_ln(h);
    round_down(ln / std::f64::consts::LN_2)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Exact `f_Δ(W)` for a 3-block stabilizer `W` that meets `C(Δ)`, as a function
/// of `n` and `|Δ|` alone; zero when no 3-block stabilizer meets `C(Δ)`.
///
/// Bisection: `6·(n/6)!⁶ / (n/2)!²` when `6 | n`.
/// Odd `a` (with `b = n - a`): `18·(a/3)!³·(b/3)!³ / (a!·b!)` when `3 | a`.
pub fn three_block_fraction(n: usize, size: usize) -> BigRational {
    if n % 3 != 0 {
        return BigRational::zero();
    }
    if 2 * size == n {
        if n % 6 != 0 {
            return BigRational::zero();
        }
        let s = factorial(n / 6);
        let h = factorial(n / 2);
        return ratio(s.pow(6) * 6u32, h.clone() * h);
    }
    if size % 3 != 0 {
        return BigRational::zero();
    }
    let (a, b) = (size, n - size);
    ratio(
        factorial(a / 3).pow(3) * factorial(b / 3).pow(3) * 18u32,
        factorial(a) * factorial(b),
    )
}

/// Exact `f_Δ(W)` for a 4-block stabilizer meeting `C(Δ)`; zero when none does.
///
/// Bisection: `4·(n/4)!⁴ / (n/2)!²` when `4 | n` (Δ a union of two blocks).
/// Odd `a = n/4` (Δ a block, `b = 3n/4`): `6·(b/3)!³ / b!`.
pub fn four_block_fraction(n: usize, size: usize) -> BigRational {
    if n % 4 != 0 {
        return BigRational::zero();
    }
    if 2 * size == n {
        let q = factorial(n / 4);
        let h = factorial(n / 2);
        return ratio(q.pow(4) * 4u32, h.clone() * h);
    }
    if 4 * size != n {
        return BigRational::zero();
    }
    let b = n - size;
    ratio(factorial(b / 3).pow(3) * 6u32, factorial(b))
}

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Explicit upper bound on [`three_block_fraction`], valid for every `n` and
/// size: from `(x/k)!^k / x! <= e^k·x^{k/2}·k^{-x}`,
/// bisection `6e⁶(n/2)³·3^{-n}`, odd `a` `18e⁶(ab)^{3/2}·3^{-n}`.
pub fn three_block_fraction_log2(n: usize, size: usize) -> f64 {
    let nf = n as f64;
    let v = if 2 * size == n {
        6f64.log2() + 6.0 * LOG2_E + 3.0 * (nf / 2.0).log2() - nf * 3f64.log2()
    } else {
        let (a, b) = (size as f64, (n - size) as f64);
        18f64.log2() + 6.0 * LOG2_E + 1.5 * (a * b).log2() - nf * 3f64.log2()
    };
    round_up(v)
}

/// Explicit upper bound on [`four_block_fraction`] for every `n` and size:
/// bisection `4e⁴(n/2)²·2^{-n}`, odd `6e³·b^{3/2}·3^{-b}` with `b = 3n/4`.
pub fn four_block_fraction_log2(n: usize, size: usize) -> f64 {
    let nf = n as f64;
    let v = if 2 * size == n {
        2.0 + 4.0 * LOG2_E + 2.0 * (nf / 2.0).log2() - nf
    } else {
        let b = 0.75 * nf;
        6f64.log2() + 3.0 * LOG2_E + 1.5 * b.log2() - b * 3f64.log2()
    };
    round_up(v)
}

/// Constant `κ` in `d!^m·m! <= e^κ·(n/5)^{5/2}·(n/5e)^n` for `dm = n`, `d >= 2`,
/// `m >= 5`. The largest excess up to `n = 4000` is about `e^10.84`, at `d = 2`,
/// `m = 10`.
pub const WREATH_EXP_SLACK: f64 = 11.0;

pub fn wreath_order_log2_bound(n: usize) -> f64 {
    let nf = n as f64;
    let ln =
        WREATH_EXP_SLACK + 2.5 * (nf / 5.0).ln() + nf * (nf / (5.0 * std::f64::consts::E)).ln();
    round_up(ln * LOG2_E)
}

/// `ln(d!^m·m!)` with factorials summed directly.
pub fn wreath_order_ln(d: usize, m: usize) -> f64 {
    m as f64 * ln_factorial(d) + ln_factorial(m)
}

/// Largest `d!^m·m!` over shapes with at least five blocks of size at least two.
pub fn max_wreath_order(n: usize) -> Option<BigUint> {
    crate::families::imprimitive_shapes(n)
        .into_iter()
        .filter(|&(_, m)| m >= 5)
        .map(|(d, m)| factorial(d).pow(m as u32) * factorial(m))
        .max()
}

/// Which part of the bound chain a value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// No intransitive subgroup outside the family meets a pool.
    IntransitiveExcluded,
    /// Primitive groups: class count `<= n`, order `<= 4ⁿ`, at most `n²`
    /// conjugates through an element, pool size `>= (2/n)²(n/2)!²`.
    PrimitiveOrder,
    /// 3-block stabilizers via class count and conjugates.
    ThreeBlockClasses,
    /// 4-block stabilizers via class count and conjugates.
    FourBlockClasses,
    /// 4-block stabilizers for two bisections: at most one member meets both
    /// pools, so the bound is the product of the two fractions.
    FourBlockSingleMember,
    /// Stabilizers of at least five blocks: order bound over pool size.
    ManyBlockOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Exact(BigRational),
    Log2(f64),
}

/// An upper bound with its origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub magnitude: Magnitude,
    pub provenance: Provenance,
}

impl BoundValue {
    pub fn exact(q: BigRational, provenance: Provenance) -> Self {
        BoundValue {
            magnitude: Magnitude::Exact(q),
            provenance,
        }
    }

    pub fn log2(x: f64, provenance: Provenance) -> Self {
        BoundValue {
            magnitude: Magnitude::Log2(x),
            provenance,
        }
    }

    /// Base-2 logarithm, rounded up; `-inf` for zero.
    pub fn log2_upper(&self) -> f64 {
        match &self.magnitude {
            Magnitude::Exact(q) => round_up(log2_rational(q)),
            Magnitude::Log2(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match &self.magnitude {
            Magnitude::Exact(q) => Some(q),
            Magnitude::Log2(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.magnitude {
            Magnitude::Exact(q) => q.is_zero(),
            Magnitude::Log2(x) => *x == f64::NEG_INFINITY,
        }
    }
}
