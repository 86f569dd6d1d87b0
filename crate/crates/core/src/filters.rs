//! Cheap necessary conditions for a match. Each filter that fires returns a
//! certificate that no match exists; a filter that passes asserts nothing.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::model::{Game, PairSystem, TriSystem};

/// Per-letter count in the first word minus count in the second word of one
/// pair, indexed by alphabet position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BalanceVector(pub Vec<i64>);

/// Evidence that a system has no match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Every pair shortens (or every pair lengthens) the first track relative
    /// to the second.
    LengthImbalance,
    /// The zero vector is outside the convex hull of the balance vectors.
    LetterImbalance { vectors: Vec<BalanceVector> },
    /// No pair is prefix-comparable, so no list can start.
    NoStarter,
    /// No pair is suffix-comparable, so no list can end.
    NoEnder,
    /// The whole reachable configuration graph was explored without pruning.
    ClosedStateGraph {
        states_explored: usize,
        depth_reached: usize,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::LengthImbalance => "length_imbalance",
            Certificate::LetterImbalance { .. } => "letter_imbalance",
            Certificate::NoStarter => "no_starter",
            Certificate::NoEnder => "no_ender",
            Certificate::ClosedStateGraph { .. } => "closed_state_graph",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::ClosedStateGraph {
                states_explored,
                depth_reached,
            } => write!(
                f,
                "closed_state_graph ({states_explored} states, depth {depth_reached})"
            ),
            other => f.write_str(other.kind()),
        }
    }
}

pub fn length_filter(system: &PairSystem) -> Option<Certificate> {
    let diffs = system
        .pairs()
        .iter()
        .map(|(a, b)| a.len() as i64 - b.len() as i64);
    let (mut pos, mut neg) = (true, true);
    for d in diffs {
        pos &= d > 0;
        neg &= d < 0;
    }
    (pos || neg).then_some(Certificate::LengthImbalance)
}

pub fn balance_vectors(system: &PairSystem) -> Vec<BalanceVector> {
    let alphabet = system.alphabet();
    system
        .pairs()
        .iter()
        .map(|(a, b)| {
            let mut v = vec![0i64; alphabet.len()];
            for &l in a.as_bytes() {
                v[alphabet.rank(l).expect("validated")] += 1;
            }
            for &l in b.as_bytes() {
                v[alphabet.rank(l).expect("validated")] -= 1;
            }
            BalanceVector(v)
        })
        .collect()
}

/// A match uses each pair `c_i >= 0` times, not all zero, with
/// `sum c_i v_i = 0`. Scaling, that is the zero vector lying in the convex
/// hull of the `v_i`.
pub fn balance_filter(system: &PairSystem) -> Option<Certificate> {
    let vectors = balance_vectors(system);
    if zero_in_hull(&vectors).contains {
        None
    } else {
        Some(Certificate::LetterImbalance { vectors })
    }
}

pub fn boundary_filter(system: &PairSystem) -> Option<Certificate> {
    let pairs = system.pairs();
    let starter = pairs.iter().any(|(a, b)| {
        let (a, b) = (a.as_bytes(), b.as_bytes());
        a.starts_with(b) || b.starts_with(a)
    });
    if !starter {
        return Some(Certificate::NoStarter);
    }
    let ender = pairs.iter().any(|(a, b)| {
        let (a, b) = (a.as_bytes(), b.as_bytes());
        a.ends_with(b) || b.ends_with(a)
    });
    (!ender).then_some(Certificate::NoEnder)
}

/// Runs the length, boundary and balance filters in that order and returns
/// the first certificate.
pub fn filter_pair(system: &PairSystem) -> Option<Certificate> {
    length_filter(system)
        .or_else(|| boundary_filter(system))
        .or_else(|| balance_filter(system))
}

/// A certificate for any projection also refutes the threefold game.
pub fn filter_triple(system: &TriSystem) -> Option<(Game, Certificate)> {
    Game::PAIRS.into_iter().find_map(|g| {
        let projection = system.project(g).expect("pair game");
        filter_pair(&projection).map(|c| (g, c))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct HullCheck {
    pub contains: bool,
    pub subsets_examined: usize,
}

/// Decides `0 ∈ conv(vectors)` exactly.
///
/// If zero is in the hull it is in the hull of an affinely independent subset
/// of at most `dim + 1` points with unique barycentric weights, so it
/// suffices to solve `[v; 1] λ = [0; 1]` on every such subset and look for a
/// nonnegative solution.
pub(crate) fn zero_in_hull(vectors: &[BalanceVector]) -> HullCheck {
    let points: Vec<&BalanceVector> = vectors
        .iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut subsets_examined = 0;
    if points.is_empty() {
        return HullCheck {
            contains: false,
            subsets_examined,
        };
    }
    let dim = points[0].0.len();
    let max_support = (dim + 1).min(points.len());
    for size in 1..=max_support {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            subsets_examined += 1;
            let chosen: Vec<&BalanceVector> = subset.iter().map(|&i| points[i]).collect();
            if let Some(weights) = barycentric_weights(&chosen) {
                if weights.iter().all(|w| !w.is_negative()) {
                    return HullCheck {
                        contains: true,
                        subsets_examined,
                    };
                }
            }
            if !next_combination(&mut subset, points.len()) {
                break;
            }
        }
    }
    HullCheck {
        contains: false,
        subsets_examined,
    }
}

/// Advances `subset` (strictly increasing indices below `n`) to the next
/// combination in lexicographic order.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for pos in (0..k).rev() {
        if subset[pos] < n - k + pos {
            subset[pos] += 1;
            for j in pos + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Unique solution of `sum λ_j p_j = 0, sum λ_j = 1`, or `None` when the
/// system is inconsistent or the points are affinely dependent.
fn barycentric_weights(points: &[&BalanceVector]) -> Option<Vec<BigRational>> {
    let k = points.len();
    let dim = points[0].0.len();
    let rat = |x: i64| BigRational::from_integer(BigInt::from(x));
    // augmented (dim + 1) x (k + 1) matrix
    let mut rows: Vec<Vec<BigRational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<BigRational> = points.iter().map(|p| rat(p.0[r])).collect();
            row.push(BigRational::zero());
            row
        })
        .collect();
    rows.push(vec![BigRational::one(); k + 1]);

    // full column rank is required, so column `col` always pivots on row `col`
    for col in 0..k {
        let found = (col..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, found);
        let pivot_row = rows[col].clone();
        let pivot = pivot_row[col].clone();
        let pivot_row: Vec<BigRational> = pivot_row.iter().map(|x| x / &pivot).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
        rows[col] = pivot_row;
    }
    if rows[k..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(rows[..k].iter().map(|row| row[k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{single, sys1};
    use crate::model::{Alphabet, Word};
    use proptest::prelude::*;

    fn pairs(p: &[(&str, &str)]) -> PairSystem {
        PairSystem::from_strs(p).unwrap()
    }

    fn over_ab(p: &[(&str, &str)]) -> PairSystem {
        PairSystem::new(
            Alphabet::new("ab").unwrap(),
            p.iter()
                .map(|&(a, b)| (Word::from(a), Word::from(b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn length_filter_examples() {
        assert_eq!(
            length_filter(&pairs(&[("a", "aa")])),
            Some(Certificate::LengthImbalance)
        );
        assert_eq!(
            length_filter(&sys1().project(Game::TopMiddle).unwrap()),
            None
        );
        assert_eq!(length_filter(&pairs(&[("ab", "ab")])), None);
    }

    #[test]
    fn balance_filter_examples() {
        assert_eq!(
            balance_filter(&over_ab(&[("ab", "b")])),
            Some(Certificate::LetterImbalance {
                vectors: vec![BalanceVector(vec![1, 0])]
            })
        );
        assert_eq!(balance_filter(&over_ab(&[("ab", "b"), ("b", "ab")])), None);
        assert!(matches!(
            balance_filter(&over_ab(&[("aa", "a"), ("b", "bb")])),
            Some(Certificate::LetterImbalance { .. })
        ));
    }

    #[test]
    fn balance_needs_more_than_pairwise_support() {
        // zero needs all three vectors; no two of them balance
        let s = over_ab(&[("aab", "bbb"), ("b", "abbb"), ("bbb", "b")]);
        assert_eq!(
            balance_vectors(&s),
            vec![
                BalanceVector(vec![2, -2]),
                BalanceVector(vec![-1, -2]),
                BalanceVector(vec![0, 2])
            ]
        );
        // weights 1, 2, 3 over 6: (2-2+0, -2-4+6) = 0
        assert_eq!(balance_filter(&s), None);
    }

    #[test]
    fn boundary_filter_examples() {
        assert_eq!(
            boundary_filter(&pairs(&[("ab", "ba")])),
            Some(Certificate::NoStarter)
        );
        assert_eq!(
            boundary_filter(&sys1().project(Game::TopMiddle).unwrap()),
            None
        );
        assert_eq!(
            boundary_filter(&pairs(&[("ab", "b")])),
            Some(Certificate::NoStarter)
        );
        assert_eq!(
            boundary_filter(&pairs(&[("ab", "a")])),
            Some(Certificate::NoEnder)
        );
    }

    #[test]
    fn filter_pair_examples() {
        assert_eq!(
            filter_pair(&pairs(&[("a", "aa")])),
            Some(Certificate::LengthImbalance)
        );
        assert_eq!(
            filter_pair(&pairs(&[("ab", "ba")])),
            Some(Certificate::NoStarter)
        );
        assert_eq!(
            filter_pair(&sys1().project(Game::MiddleBottom).unwrap()),
            None
        );
    }

    #[test]
    fn filter_triple_examples() {
        assert_eq!(
            filter_triple(&single("a", "a", "b")),
            Some((Game::TopBottom, Certificate::NoStarter))
        );
        assert_eq!(filter_triple(&sys1()), None);
        assert_eq!(
            filter_triple(&single("ab", "a", "ab")),
            Some((Game::TopMiddle, Certificate::LengthImbalance))
        );
    }

    #[test]
    fn certificates_serialize_with_kind_tag() {
        let c = Certificate::ClosedStateGraph {
            states_explored: 3,
            depth_reached: 2,
        };
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"closed_state_graph","states_explored":3,"depth_reached":2}"#
        );
        let c = Certificate::LetterImbalance {
            vectors: vec![BalanceVector(vec![1, 0])],
        };
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"letter_imbalance","vectors":[[1,0]]}"#
        );
    }

    /// Nonnegative integer combination summing to zero, found by trying
    /// every coefficient vector with entries up to `max_coeff`.
    fn small_combination_exists(vectors: &[BalanceVector], max_coeff: i64) -> bool {
        let n = vectors.len();
        let dim = vectors[0].0.len();
        let mut coeffs = vec![0i64; n];
        loop {
            let mut pos = 0;
            while pos < n && coeffs[pos] == max_coeff {
                coeffs[pos] = 0;
                pos += 1;
            }
            if pos == n {
                return false;
            }
            coeffs[pos] += 1;
            if (0..dim).all(|d| {
                vectors
                    .iter()
                    .zip(&coeffs)
                    .map(|(v, c)| v.0[d] * c)
                    .sum::<i64>()
                    == 0
            }) {
                return true;
            }
        }
    }

    fn random_pairs() -> impl Strategy<Value = PairSystem> {
        let word = proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b'), Just(b'c')], 1..4);
        proptest::collection::vec((word.clone(), word), 1..5).prop_map(|p| {
            PairSystem::new(
                Alphabet::new("abc").unwrap(),
                p.into_iter()
                    .map(|(a, b)| (Word::new(a), Word::new(b)))
                    .collect(),
            )
            .unwrap()
        })
    }

    fn random_pairs_ab() -> impl Strategy<Value = PairSystem> {
        let word = proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b')], 1..4);
        proptest::collection::vec((word.clone(), word), 1..5).prop_map(|p| {
            PairSystem::new(
                Alphabet::new("ab").unwrap(),
                p.into_iter()
                    .map(|(a, b)| (Word::new(a), Word::new(b)))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn hull_agrees_with_coefficient_enumeration(s in random_pairs_ab()) {
            // Entries lie in [-3, 3] in two dimensions. A minimal support has
            // at most three points and Cramer's rule bounds its scaled integer
            // weights by the largest 2x2 minor, 18.
            let vectors = balance_vectors(&s);
            prop_assert_eq!(zero_in_hull(&vectors).contains, small_combination_exists(&vectors, 18));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn length_implies_balance(s in random_pairs()) {
            if length_filter(&s).is_some() {
                prop_assert!(balance_filter(&s).is_some());
            }
        }

        #[test]
        fn verdicts_ignore_pair_order(s in random_pairs(), rot in 0usize..5) {
            let mut p = s.pairs().to_vec();
            let r = rot % p.len();
            p.rotate_left(r);
            p.reverse();
            let permuted = PairSystem::new(s.alphabet().clone(), p).unwrap();
            let kind = |c: Option<Certificate>| c.map(|c| c.kind());
            prop_assert_eq!(kind(length_filter(&s)), kind(length_filter(&permuted)));
            prop_assert_eq!(kind(balance_filter(&s)), kind(balance_filter(&permuted)));
            prop_assert_eq!(boundary_filter(&s), boundary_filter(&permuted));
            prop_assert_eq!(kind(filter_pair(&s)), kind(filter_pair(&permuted)));
        }

        #[test]
        fn hull_work_is_bounded(s in random_pairs()) {
            let vectors = balance_vectors(&s);
            let n = vectors.len() as u64;
            let dim = vectors[0].0.len() as u64;
            let binom = |n: u64, k: u64| -> u64 {
                if k > n { 0 } else { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) }
            };
            let ceiling: u64 = (1..=dim + 1).map(|k| binom(n, k)).sum();
            prop_assert!(zero_in_hull(&vectors).subsets_examined as u64 <= ceiling);
        }
    }
}
