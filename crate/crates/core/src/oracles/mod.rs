//! Ground truth at tiny degrees: subgroup lattices, covering numbers, clique
//! numbers of generation graphs, generation probabilities and Turán bounds.

pub mod clique;
pub mod generation;
pub mod lattice;
pub mod setcover;
pub mod turan;

use num_bigint::BigUint;

use crate::combin::{factorial_u64, lehmer_rank, lehmer_unrank};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `σ(Sₙ) = 2ⁿ⁻¹` for odd `n ≥ 3`.
pub fn odd_degree_sigma(n: usize) -> Result<BigUint> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "odd-degree covering formula needs odd n >= 3, got {n}"
        )));
    }
    Ok(BigUint::from(1u32) << (n - 1))
}

pub(crate) fn check_range(what: &'static str, n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::DegreeOutOfRange { what, n, min, max });
    }
    Ok(())
}

/// `Sₙ` as an explicit multiplication table, elements indexed by Lehmer rank.
#[derive(Debug, Clone)]
pub(crate) struct GroupTable {
    pub n: usize,
    pub elements: Vec<Permutation>,
    /// `mul[a * order + b]` is the index of `elements[a] ∘ elements[b]`.
    pub mul: Vec<u16>,
}

impl GroupTable {
    pub fn new(n: usize) -> Self {
        assert!(n <= 6, "group tables are only built for n <= 6");
        let order = factorial_u64(n) as usize;
        let elements: Vec<Permutation> = (0..order as u64)
            .map(|r| Permutation::from_images_unchecked(lehmer_unrank(n, r)))
            .collect();
        let mut mul = vec![0u16; order * order];
        for (a, x) in elements.iter().enumerate() {
            for (b, y) in elements.iter().enumerate() {
                mul[a * order + b] = lehmer_rank(x.compose_unchecked(y).images()) as u16;
            }
        }
        GroupTable { n, elements, mul }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_sigma() {
        assert_eq!(odd_degree_sigma(3).unwrap(), BigUint::from(4u32));
        assert_eq!(odd_degree_sigma(5).unwrap(), BigUint::from(16u32));
        assert!(odd_degree_sigma(4).is_err());
        assert!(odd_degree_sigma(1).is_err());
    }

    #[test]
    fn table_is_a_group() {
        let t = GroupTable::new(4);
        assert_eq!(t.order(), 24);
        assert!(t.elements[0].is_identity());
        for a in 0..24 {
            assert_eq!(t.product(0, a), a);
            assert_eq!(t.product(a, 0), a);
            for b in 0..24 {
                for c in 0..24 {
                    assert_eq!(t.product(t.product(a, b), c), t.product(a, t.product(b, c)));
                }
            }
        }
    }
}
