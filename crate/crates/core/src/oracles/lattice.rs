//! All subgroups of `Sₙ` for `n ≤ 6`, found by closing the set of cyclic
//! subgroups under joins.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{check_range, GroupTable};
use crate::error::Result;
use crate::perm::Permutation;

pub const MAX_LATTICE_DEGREE: usize = 6;

#[derive(Debug, Clone)]
pub struct Subgroup {
    pub elements: FixedBitSet,
    /// Generating set, as indices into the group table.
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.count_ones(..)
    }
}

#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    table: GroupTable,
    subgroups: Vec<Subgroup>,
    maximal: Vec<bool>,
}

/// Subgroup generated by `gens`, seeded with `base`; `gens` must generate `base` too.
fn closure(table: &GroupTable, base: &FixedBitSet, gens: &[usize]) -> FixedBitSet {
    let mut seen = base.clone();
    seen.insert(0);
    let mut stack: Vec<usize> = seen.ones().collect();
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = table.product(x, g);
            if !seen.put(y) {
                stack.push(y);
            }
        }
    }
    seen
}

impl SubgroupLattice {
    pub fn build(n: usize) -> Result<Self> {
        check_range("subgroup lattice", n, 1, MAX_LATTICE_DEGREE)?;
        let table = GroupTable::new(n);
        let order = table.order();
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut subgroups: Vec<Subgroup> = Vec::new();
        let mut cyclic: Vec<usize> = Vec::new();

        let empty = FixedBitSet::with_capacity(order);
        for g in 0..order {
            let elements = closure(&table, &empty, &[g]);
            if !index.contains_key(&elements) {
                index.insert(elements.clone(), subgroups.len());
                cyclic.push(g);
                subgroups.push(Subgroup {
                    elements,
                    generators: if g == 0 { vec![] } else { vec![g] },
                });
            }
        }

        let mut next = 0;
        while next < subgroups.len() {
            let current = subgroups[next].clone();
            for &g in &cyclic {
                if current.elements.contains(g) {
                    continue;
                }
                let mut gens = current.generators.clone();
                gens.push(g);
                let elements = closure(&table, &current.elements, &gens);
                if !index.contains_key(&elements) {
                    index.insert(elements.clone(), subgroups.len());
                    subgroups.push(Subgroup {
                        elements,
                        generators: gens,
                    });
                }
            }
            next += 1;
        }

        subgroups.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.ones().cmp(b.elements.ones()))
        });
        let maximal = (0..subgroups.len())
            .map(|k| {
                let h = &subgroups[k].elements;
                let proper = subgroups[k].order() < order;
                proper
                    && !subgroups.iter().any(|o| {
                        let size = o.order();
                        size > subgroups[k].order() && size < order && h.is_subset(&o.elements)
                    })
            })
            .collect();
        Ok(SubgroupLattice {
            table,
            subgroups,
            maximal,
        })
    }

    pub fn degree(&self) -> usize {
        self.table.n
    }

    pub fn group_order(&self) -> usize {
        self.table.order()
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Subgroups sorted by order, then by element list.
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn is_maximal(&self, k: usize) -> bool {
        self.maximal[k]
    }

    pub fn maximal_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.maximal[k]).collect()
    }

    pub fn element(&self, idx: usize) -> &Permutation {
        &self.table.elements[idx]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.table.elements
    }

    pub fn generators(&self, k: usize) -> Vec<Permutation> {
        self.subgroups[k]
            .generators
            .iter()
            .map(|&g| self.table.elements[g].clone())
            .collect()
    }

    /// Recounts subgroups by checking that every stored set is a subgroup,
    /// that the list has no duplicates and that it is closed under joins.
    pub fn recount(&self) -> usize {
        let table = &self.table;
        let mut distinct: HashMap<&FixedBitSet, ()> = HashMap::new();
        for s in &self.subgroups {
            let elems: Vec<usize> = s.elements.ones().collect();
            for &a in &elems {
                for &b in &elems {
                    assert!(
                        s.elements.contains(table.product(a, b)),
                        "stored set is not closed"
                    );
                }
            }
            distinct.insert(&s.elements, ());
        }
        for a in &self.subgroups {
            for b in &self.subgroups {
                let gens: Vec<usize> = a.elements.ones().chain(b.elements.ones()).collect();
                let join = closure(table, &a.elements, &gens);
                assert!(
                    distinct.contains_key(&join),
                    "join missing from the lattice"
                );
            }
        }
        distinct.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        for (n, count) in [(1, 1), (2, 2), (3, 6), (4, 30), (5, 156)] {
            let lattice = SubgroupLattice::build(n).unwrap();
            assert_eq!(lattice.len(), count, "n={n}");
        }
    }

    #[test]
    fn recount_small() {
        for n in 3..=4 {
            let lattice = SubgroupLattice::build(n).unwrap();
            assert_eq!(lattice.recount(), lattice.len());
        }
    }

    #[test]
    fn maximal_subgroups_of_s4_and_s5() {
        let s4 = SubgroupLattice::build(4).unwrap();
        let mut orders: Vec<usize> = s4
            .maximal_indices()
            .iter()
            .map(|&k| s4.subgroups()[k].order())
            .collect();
        orders.sort();
        assert_eq!(orders, vec![6, 6, 6, 6, 8, 8, 8, 12]);

        let s5 = SubgroupLattice::build(5).unwrap();
        let mut orders: Vec<usize> = s5
            .maximal_indices()
            .iter()
            .map(|&k| s5.subgroups()[k].order())
            .collect();
        orders.sort();
        let mut expected = vec![12; 10];
        expected.extend([20; 6]);
        expected.extend([24; 5]);
        expected.push(60);
        assert_eq!(orders, expected);
    }

    #[test]
    fn generators_generate() {
        let lattice = SubgroupLattice::build(4).unwrap();
        for (k, s) in lattice.subgroups().iter().enumerate() {
            let order = crate::chain::group_order(&lattice.generators(k)).unwrap();
            assert_eq!(order, num_bigint::BigUint::from(s.order().max(1)));
        }
    }

    #[test]
    fn out_of_range() {
        assert!(SubgroupLattice::build(7).is_err());
        assert!(SubgroupLattice::build(0).is_err());
    }
}
