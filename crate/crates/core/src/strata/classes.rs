//! The nine S4-invariant codimension-2 cycle classes on the moduli space of
//! stable 4-pointed genus-1 curves.
//!
//! Each class is a formal sum of stable-graph strata with unit coefficients;
//! the intersection calculus in [`super::intersect`] works with these
//! orbifold classes directly. The `normalization` field records the factor
//! `1/e` relating the orbifold class to the scheme-theoretic fundamental
//! class (`e = 2` exactly for `d23`, `d24` and `d04`, where the generic curve
//! has an involution); it is bookkeeping for that comparison, not an input to
//! the intersection numbers.

use crate::rat::Rat;
use crate::strata::graph::{complement, tails_at, StableGraph};

#[derive(Clone, Debug)]
pub struct StratumCycle {
    pub name: &'static str,
    /// Graph summands with rational coefficients (all 1 for the nine named
    /// classes).
    pub terms: Vec<(StableGraph, Rat)>,
    /// `1/e`: orbifold class relative to the scheme class of the stratum.
    pub normalization: Rat,
}

impl StratumCycle {
    fn from_graphs(name: &'static str, graphs: Vec<StableGraph>, e: i64) -> Self {
        StratumCycle {
            name,
            terms: graphs.into_iter().map(|g| (g, Rat::one())).collect(),
            normalization: Rat::new(1, e),
        }
    }

    /// Every summand is a tree (all genus on vertices): the stratum embeds
    /// regularly and the excess intersection formula applies directly.
    pub fn is_tree_type(&self) -> bool {
        self.terms.iter().all(|(g, _)| g.is_tree())
    }

    /// Supported inside the irreducible boundary divisor (every summand has
    /// a cycle or loop).
    pub fn in_irreducible_boundary(&self) -> bool {
        self.terms.iter().all(|(g, _)| g.betti() == 1)
    }

    /// A multiple of the irreducible boundary class (every summand contains
    /// an actual loop).
    pub fn is_irreducible_multiple(&self) -> bool {
        self.terms.iter().all(|(g, _)| g.has_loop())
    }
}

const PAIRINGS: [([usize; 2], [usize; 2]); 3] =
    [([1, 2], [3, 4]), ([1, 3], [2, 4]), ([1, 4], [2, 3])];

fn two_subsets() -> Vec<Vec<usize>> {
    vec![
        vec![1, 2],
        vec![1, 3],
        vec![1, 4],
        vec![2, 3],
        vec![2, 4],
        vec![3, 4],
    ]
}

fn three_subsets() -> Vec<Vec<usize>> {
    vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]
}

/// Genus-1 vertex joined to two genus-0 leaves carrying the pair and its
/// complement.
fn graph_22(pair: &[usize], other: &[usize]) -> StableGraph {
    StableGraph::new(
        vec![1, 0, 0],
        tails_at(&[(1, pair), (2, other)]),
        vec![(0, 1), (0, 2)],
    )
}

/// Chain: genus-1 vertex with the leftover tail, middle vertex with the tail
/// in `t` but not in `s`, leaf with `s`.
fn graph_23(s: &[usize], t: &[usize]) -> StableGraph {
    let ell = complement(t);
    let mid: Vec<usize> = t.iter().copied().filter(|x| !s.contains(x)).collect();
    StableGraph::new(
        vec![1, 0, 0],
        tails_at(&[(0, &ell), (1, &mid), (2, s)]),
        vec![(0, 1), (1, 2)],
    )
}

/// Chain: bare genus-1 vertex, middle vertex with the complement pair, leaf
/// with `s`.
fn graph_24(s: &[usize]) -> StableGraph {
    let mid = complement(s);
    StableGraph::new(
        vec![1, 0, 0],
        tails_at(&[(1, &mid), (2, s)]),
        vec![(0, 1), (1, 2)],
    )
}

/// Chain: bare genus-1 vertex, middle vertex with the leftover tail, leaf
/// with the triple `t`.
fn graph_34(t: &[usize]) -> StableGraph {
    let mid = complement(t);
    StableGraph::new(
        vec![1, 0, 0],
        tails_at(&[(1, &mid), (2, t)]),
        vec![(0, 1), (1, 2)],
    )
}

/// Loop vertex carrying the complement of `s`, joined to a leaf carrying `s`.
fn graph_0s(s: &[usize]) -> StableGraph {
    let rest = complement(s);
    StableGraph::new(
        vec![0, 0],
        tails_at(&[(0, &rest), (1, s)]),
        vec![(0, 0), (0, 1)],
    )
}

/// Two genus-0 vertices joined by a double edge, tails split 3 | 1.
fn graph_alpha(i: usize) -> StableGraph {
    let rest = complement(&[i]);
    StableGraph::new(
        vec![0, 0],
        tails_at(&[(0, &rest), (1, &[i])]),
        vec![(0, 1), (0, 1)],
    )
}

/// Two genus-0 vertices joined by a double edge, tails split 2 | 2.
fn graph_beta(pair: &[usize], other: &[usize]) -> StableGraph {
    StableGraph::new(
        vec![0, 0],
        tails_at(&[(0, pair), (1, other)]),
        vec![(0, 1), (0, 1)],
    )
}

/// The nine invariant classes, in the fixed order
/// `d22, d23, d24, d34, d02, d03, d04, alpha, beta`
/// used by the intersection matrix.
pub fn invariant_classes() -> Vec<StratumCycle> {
    let d22 = StratumCycle::from_graphs(
        "d22",
        PAIRINGS.iter().map(|(p, q)| graph_22(p, q)).collect(),
        1,
    );
    let mut g23 = Vec::new();
    for s in two_subsets() {
        for t in three_subsets() {
            if s.iter().all(|x| t.contains(x)) {
                g23.push(graph_23(&s, &t));
            }
        }
    }
    let d23 = StratumCycle::from_graphs("d23", g23, 2);
    let d24 =
        StratumCycle::from_graphs("d24", two_subsets().iter().map(|s| graph_24(s)).collect(), 2);
    let d34 =
        StratumCycle::from_graphs("d34", three_subsets().iter().map(|t| graph_34(t)).collect(), 1);
    let d02 =
        StratumCycle::from_graphs("d02", two_subsets().iter().map(|s| graph_0s(s)).collect(), 1);
    let d03 =
        StratumCycle::from_graphs("d03", three_subsets().iter().map(|t| graph_0s(t)).collect(), 1);
    let d04 = StratumCycle::from_graphs("d04", vec![graph_0s(&[1, 2, 3, 4])], 2);
    let alpha =
        StratumCycle::from_graphs("alpha", (1..=4).map(graph_alpha).collect(), 1);
    let beta = StratumCycle::from_graphs(
        "beta",
        PAIRINGS.iter().map(|(p, q)| graph_beta(p, q)).collect(),
        1,
    );
    vec![d22, d23, d24, d34, d02, d03, d04, alpha, beta]
}

pub fn class_names() -> [&'static str; 9] {
    ["d22", "d23", "d24", "d34", "d02", "d03", "d04", "alpha", "beta"]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_counts() {
        let cs = invariant_classes();
        let counts: Vec<usize> = cs.iter().map(|c| c.terms.len()).collect();
        assert_eq!(counts, vec![3, 12, 6, 4, 6, 4, 1, 4, 3]);
    }

    #[test]
    fn normalizations_match_involution_list() {
        let cs = invariant_classes();
        for c in &cs {
            let expected = if matches!(c.name, "d23" | "d24" | "d04") {
                Rat::new(1, 2)
            } else {
                Rat::one()
            };
            assert_eq!(c.normalization, expected, "class {}", c.name);
        }
    }

    #[test]
    fn support_classification() {
        let cs = invariant_classes();
        for c in &cs {
            match c.name {
                "d22" | "d23" | "d24" | "d34" => {
                    assert!(c.is_tree_type());
                    assert!(!c.in_irreducible_boundary());
                }
                "d02" | "d03" | "d04" => {
                    assert!(c.in_irreducible_boundary());
                    assert!(c.is_irreducible_multiple());
                }
                _ => {
                    assert!(c.in_irreducible_boundary());
                    assert!(!c.is_irreducible_multiple());
                }
            }
        }
    }

    #[test]
    fn all_summands_distinct_and_codim_two() {
        let cs = invariant_classes();
        let mut keys = std::collections::BTreeSet::new();
        for c in &cs {
            for (g, _) in &c.terms {
                assert_eq!(g.codim(), 2);
                assert!(keys.insert(g.canon_key()), "duplicate stratum in {}", c.name);
            }
        }
        // together the nine classes cover every codim-2 stratum exactly once
        assert_eq!(keys.len(), 43);
    }
}
