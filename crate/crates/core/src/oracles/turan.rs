//! Turán's theorem read backwards: many edges force a large clique.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuranBound {
    pub m: u64,
    pub edges: u64,
    /// Largest `r` with `edges > (1 − 1/r)·m²/2`, or 0 if there is none.
    pub r: u64,
    /// `r + 1`: every graph with these parameters has a clique this large.
    pub clique_lower_bound: u64,
}

/// Clique size forced by `edges` edges on `m` vertices.
pub fn turan_lower_bound(m: u64, edges: u64) -> Result<TuranBound> {
    let max_edges = (m as u128) * (m.saturating_sub(1) as u128) / 2;
    if edges as u128 > max_edges {
        return Err(Error::InvalidArgument(format!(
            "{edges} edges exceed the {max_edges} possible on {m} vertices"
        )));
    }
    if edges == 0 {
        return Ok(TuranBound {
            m,
            edges,
            r: 0,
            clique_lower_bound: m.min(1),
        });
    }
    // edges > (1 − 1/r)·m²/2  ⇔  r·(m² − 2·edges) < m²
    let square = (m as u128) * (m as u128);
    let slack = square - 2 * edges as u128;
    let r = ((square - 1) / slack) as u64;
    Ok(TuranBound {
        m,
        edges,
        r,
        clique_lower_bound: r + 1,
    })
}

/// `n − c₁·n^ε`.
pub fn proposition_bound(n: f64, epsilon: f64, c1: f64) -> Result<f64> {
    if !(c1 > 0.0) || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need c1 > 0 and 0 < epsilon < 1, got c1={c1}, epsilon={epsilon}"
        )));
    }
    Ok(n - c1 * n.powf(epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let b = turan_lower_bound(4, 5).unwrap();
        assert_eq!((b.r, b.clique_lower_bound), (2, 3));
        let b = turan_lower_bound(4, 4).unwrap();
        assert_eq!((b.r, b.clique_lower_bound), (1, 2));
        assert_eq!(turan_lower_bound(4, 6).unwrap().clique_lower_bound, 4);
        assert_eq!(turan_lower_bound(4, 0).unwrap().clique_lower_bound, 1);
        assert_eq!(turan_lower_bound(0, 0).unwrap().clique_lower_bound, 0);
        assert!(turan_lower_bound(4, 7).is_err());
    }

    #[test]
    fn proposition_examples() {
        assert!((proposition_bound(100.0, 0.5, 1.0).unwrap() - 90.0).abs() < 1e-12);
        assert!(proposition_bound(100.0, 1.0, 1.0).is_err());
        assert!(proposition_bound(100.0, 0.5, 0.0).is_err());
        let mut last = f64::MIN;
        for n in 10..1000 {
            let v = proposition_bound(n as f64, 0.5, 3.0).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    proptest! {
        #[test]
        fn r_is_largest(m in 1u64..200, frac in 0.0f64..=1.0) {
            let max = m * (m - 1) / 2;
            let edges = (max as f64 * frac) as u64;
            let b = turan_lower_bound(m, edges).unwrap();
            let holds = |r: u64| r >= 1 && (edges as u128) * 2 * (r as u128) > (r as u128 - 1) * (m as u128) * (m as u128);
            if b.r > 0 {
                prop_assert!(holds(b.r));
            }
            prop_assert!(!holds(b.r + 1));
            prop_assert!(b.clique_lower_bound <= m);
        }
    }
}
