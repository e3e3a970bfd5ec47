//! Exact covering numbers `σ(Sₙ)` for `n ≤ 5` by minimum set cover over the
//! maximal subgroups.

use serde::{Deserialize, Serialize};

use super::check_range;
use super::lattice::SubgroupLattice;
use crate::combin::for_each_combination;
use crate::error::Result;

pub const MAX_SIGMA_DEGREE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMember {
    pub order: usize,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaResult {
    pub n: usize,
    pub sigma: usize,
    pub maximal_subgroups: usize,
    pub cover: Vec<CoverMember>,
}

/// Maximal subgroups of `Sₙ` as element masks (`n! ≤ 120` bits).
fn maximal_masks(lattice: &SubgroupLattice) -> (Vec<usize>, Vec<u128>) {
    let ids = lattice.maximal_indices();
    let masks = ids
        .iter()
        .map(|&k| {
            lattice.subgroups()[k]
                .elements
                .ones()
                .fold(0u128, |m, e| m | (1u128 << e))
        })
        .collect();
    (ids, masks)
}

fn full_mask(order: usize) -> u128 {
    if order == 128 {
        u128::MAX
    } else {
        (1u128 << order) - 1
    }
}

struct Search<'a> {
    sets: &'a [u128],
    /// `holders[e]`: sets containing element `e`, in canonical order.
    holders: Vec<Vec<usize>>,
    largest: u32,
    best: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, uncovered: u128, chosen: &mut Vec<usize>) {
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let lower = chosen.len() + uncovered.count_ones().div_ceil(self.largest) as usize;
        if lower >= self.best.len() {
            return;
        }
        let mut pick = None;
        let mut fewest = usize::MAX;
        let mut rest = uncovered;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let count = self.holders[e].len();
            if count < fewest {
                fewest = count;
                pick = Some(e);
            }
        }
        let e = pick.expect("uncovered is non-empty");
        for k in self.holders[e].clone() {
            chosen.push(k);
            self.run(uncovered & !self.sets[k], chosen);
            chosen.pop();
        }
    }
}

/// Branch-and-bound minimum cover; branches on the element lying in the
/// fewest maximal subgroups.
pub fn sigma_exact(n: usize) -> Result<SigmaResult> {
    check_range("sigma_exact", n, 3, MAX_SIGMA_DEGREE)?;
    let lattice = SubgroupLattice::build(n)?;
    let (ids, sets) = maximal_masks(&lattice);
    let order = lattice.group_order();
    let holders = (0..order)
        .map(|e| (0..sets.len()).filter(|&k| sets[k] >> e & 1 == 1).collect())
        .collect();
    let largest = sets.iter().map(|s| s.count_ones()).max().unwrap_or(1);
    let mut search = Search {
        sets: &sets,
        holders,
        largest,
        best: (0..=sets.len()).collect(),
    };
    search.run(full_mask(order), &mut Vec::new());
    let mut best = search.best;
    best.sort_unstable();
    let cover = best
        .iter()
        .map(|&k| CoverMember {
            order: sets[k].count_ones() as usize,
            generators: lattice
                .generators(ids[k])
                .iter()
                .map(|g| g.to_string())
                .collect(),
        })
        .collect();
    Ok(SigmaResult {
        n,
        sigma: best.len(),
        maximal_subgroups: sets.len(),
        cover,
    })
}

/// Smallest `k` such that some `k` maximal subgroups cover `Sₙ`, by trying
/// every `k`-subset for increasing `k`.
pub fn sigma_by_exhaustion(n: usize) -> Result<usize> {
    check_range("sigma_by_exhaustion", n, 3, MAX_SIGMA_DEGREE)?;
    let lattice = SubgroupLattice::build(n)?;
    let (_, sets) = maximal_masks(&lattice);
    let full = full_mask(lattice.group_order());
    let indices: Vec<usize> = (0..sets.len()).collect();
    for k in 1..=sets.len() {
        let mut found = false;
        for_each_combination(&indices, k, |combo| {
            if !found && combo.iter().fold(0u128, |m, &i| m | sets[i]) == full {
                found = true;
            }
        });
        if found {
            return Ok(k);
        }
    }
    unreachable!("the maximal subgroups always cover the group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn odd_degrees_match_formula() {
        assert_eq!(sigma_exact(3).unwrap().sigma, 4);
        assert_eq!(sigma_exact(5).unwrap().sigma, 16);
    }

    #[test]
    fn solvers_agree() {
        for n in 3..=4 {
            assert_eq!(
                sigma_exact(n).unwrap().sigma,
                sigma_by_exhaustion(n).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn witness_covers() {
        for n in 3..=5 {
            let result = sigma_exact(n).unwrap();
            let groups: Vec<Vec<Permutation>> = result
                .cover
                .iter()
                .map(|m| {
                    m.generators
                        .iter()
                        .map(|g| Permutation::parse(n, g).unwrap())
                        .collect()
                })
                .collect();
            let chains: Vec<_> = groups
                .iter()
                .map(|g| crate::chain::StabilizerChain::new(n, g).unwrap())
                .collect();
            let lattice = SubgroupLattice::build(n).unwrap();
            for x in lattice.elements() {
                assert!(chains.iter().any(|c| c.contains(x)), "n={n}: {x} uncovered");
            }
        }
    }

    #[test]
    fn range() {
        assert!(sigma_exact(2).is_err());
        assert!(sigma_exact(6).is_err());
    }
}
