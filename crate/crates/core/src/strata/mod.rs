//! Stable-graph strata of the moduli of 4-pointed genus-1 curves: graph
//! enumeration, the nine invariant codimension-2 classes, excess
//! intersection numbers, and the relation extraction that completes the
//! intersection matrix.

pub mod classes;
pub mod graph;
pub mod intersect;

pub use classes::{class_names, invariant_classes, StratumCycle};
pub use graph::{enumerate_strata, StableGraph};
pub use intersect::{
    canonical_relations, complete_matrix, full_intersection_theory, nullspace_relations,
    psi_integral, rank, Component, DecoratedGraph, Strata, StrataError,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    /// Independent psi-integral oracle: string and dilaton reduction down to
    /// the base cases (the one-point genus-1 integral and the three-point
    /// genus-0 moduli point).
    fn psi_oracle(g: u32, n: u32, exps: &[u32]) -> Rat {
        let dim = 3 * (g as i64 - 1) + n as i64;
        let total: i64 = exps.iter().map(|&e| e as i64).sum();
        if dim < 0 || total != dim {
            return Rat::zero();
        }
        match (g, n) {
            (0, 3) => return Rat::one(),
            (1, 1) => return Rat::new(1, 24), // integral of psi over the 1-pointed space
            _ => {}
        }
        if let Some(i) = exps.iter().position(|&e| e == 0) {
            // string equation: drop the point, lower one exponent each way
            let rest: Vec<u32> =
                exps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
            let mut acc = Rat::zero();
            for j in 0..rest.len() {
                if rest[j] > 0 {
                    let mut lowered = rest.clone();
                    lowered[j] -= 1;
                    acc += psi_oracle(g, n - 1, &lowered);
                }
            }
            return acc;
        }
        if let Some(i) = exps.iter().position(|&e| e == 1) {
            // dilaton equation
            let rest: Vec<u32> =
                exps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
            let factor = Rat::int(2 * (g as i64) - 2 + (n as i64) - 1);
            return factor * psi_oracle(g, n - 1, &rest);
        }
        unreachable!("all exponents >= 2 cannot reach the dimension in genus <= 1");
    }

    #[test]
    fn psi_table_matches_string_dilaton_oracle() {
        // the table cases
        assert_eq!(psi_integral(1, 1, &[1]).unwrap(), r(1, 24));
        assert_eq!(psi_integral(1, 2, &[1, 1]).unwrap(), psi_oracle(1, 2, &[1, 1]));
        assert_eq!(psi_integral(1, 2, &[2, 0]).unwrap(), psi_oracle(1, 2, &[2, 0]));
        assert_eq!(psi_integral(1, 2, &[2, 0]).unwrap(), r(1, 24));
        assert_eq!(psi_integral(0, 4, &[1, 0, 0, 0]).unwrap(), Rat::one());
        assert_eq!(psi_integral(0, 3, &[0, 0, 0]).unwrap(), Rat::one());
        // genus-0 closed form against the oracle on every 5- and 6-point case
        for n in [5u32, 6] {
            let dim = n - 3;
            let mut stack = vec![vec![]];
            for _ in 0..n {
                let mut next = Vec::new();
                for pre in &stack {
                    for e in 0..=dim {
                        let mut q: Vec<u32> = pre.clone();
                        q.push(e);
                        next.push(q);
                    }
                }
                stack = next;
            }
            for exps in stack {
                assert_eq!(
                    psi_integral(0, n, &exps).unwrap(),
                    psi_oracle(0, n, &exps),
                    "g=0 n={n} exps={exps:?}"
                );
            }
        }
        // dimension-mismatch cases return zero by the arrow rule
        assert_eq!(psi_integral(1, 2, &[1, 0]).unwrap(), Rat::zero());
        assert_eq!(psi_integral(0, 4, &[1, 1, 0, 0]).unwrap(), Rat::zero());
        // outside the genus-1 table: loud error
        assert!(psi_integral(1, 3, &[1, 1, 1]).is_err());
        assert!(psi_integral(2, 1, &[4]).is_err());
    }

    #[test]
    fn worked_self_intersection_of_d24() {
        // the self-intersection of one 2|4-type stratum expands into four
        // decorated graphs of which exactly one survives the arrow rule,
        // contributing 1/24
        let ctx = Strata::new();
        let classes = invariant_classes();
        let d24 = &classes[2];
        let (g, _) = &d24.terms[0];
        let comps = ctx.pair_components(g, g).unwrap();
        assert_eq!(comps.len(), 1);
        let decs = comps[0].decorations();
        assert_eq!(decs.len(), 4);
        let values: Vec<Rat> = decs.iter().map(|d| d.evaluate().unwrap()).collect();
        let nonzero: Vec<&Rat> = values.iter().filter(|v| !v.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(*nonzero[0], r(1, 24));
    }

    #[test]
    fn structurally_disjoint_pairs_have_no_components() {
        let ctx = Strata::new();
        let classes = invariant_classes();
        let idx = |name: &str| classes.iter().position(|c| c.name == name).unwrap();
        // the pairs that vanish because the strata do not even meet
        for (a, b) in [
            ("d22", "d23"),
            ("d22", "d34"),
            ("d22", "d03"),
            ("d22", "alpha"),
            ("d23", "beta"),
            ("d24", "alpha"),
            ("d24", "beta"),
            ("d34", "alpha"),
            ("d34", "beta"),
        ] {
            let (ca, cb) = (&classes[idx(a)], &classes[idx(b)]);
            for (ga, _) in &ca.terms {
                for (gb, _) in &cb.terms {
                    assert!(
                        ctx.pair_components(ga, gb).unwrap().is_empty(),
                        "{a}.{b} should be structurally disjoint"
                    );
                }
            }
        }
        // d23.d24 also sits in the zero list, but the closed strata do meet:
        // every component dies by the arrow rule
        let (c23, c24x) = (&classes[idx("d23")], &classes[idx("d24")]);
        let mut n = 0usize;
        for (ga, _) in &c23.terms {
            for (gb, _) in &c24x.terms {
                n += ctx.pair_components(ga, gb).unwrap().len();
            }
        }
        assert!(n > 0);
        assert_eq!(ctx.intersect(c23, c24x).unwrap(), Rat::zero());
        // d22.d24 vanishes too, but through the arrow rule, not disjointness
        let (c22, c24) = (&classes[idx("d22")], &classes[idx("d24")]);
        let mut total_components = 0usize;
        for (ga, _) in &c22.terms {
            for (gb, _) in &c24.terms {
                total_components += ctx.pair_components(ga, gb).unwrap().len();
            }
        }
        assert!(total_components > 0);
        assert_eq!(ctx.intersect(c22, c24).unwrap(), Rat::zero());
    }

    #[test]
    fn intersect_is_symmetric() {
        let ctx = Strata::new();
        let classes = invariant_classes();
        for a in &classes[..7] {
            for b in &classes[..7] {
                let ab = ctx.intersect(a, b);
                let ba = ctx.intersect(b, a);
                match (ab, ba) {
                    (Ok(x), Ok(y)) => assert_eq!(x, y, "{} . {}", a.name, b.name),
                    (Err(_), Err(_)) => {}
                    _ => panic!("computability must be symmetric for {} . {}", a.name, b.name),
                }
            }
        }
    }

    #[test]
    fn vanishing_rule_applies_inside_irreducible_boundary() {
        let ctx = Strata::new();
        let classes = invariant_classes();
        let d02 = &classes[4];
        let d03 = &classes[5];
        let alpha = &classes[7];
        assert_eq!(ctx.intersect(d02, d03).unwrap(), Rat::zero());
        assert_eq!(ctx.intersect(d03, alpha).unwrap(), Rat::zero());
        // alpha . beta is outside both the regular-embedding route and the
        // vanishing rule
        assert!(ctx.intersect(alpha, &classes[8]).is_err());
    }

    #[test]
    fn matrix_rows_match_known_values() {
        let ctx = Strata::new();
        let m = ctx.intersection_matrix().unwrap();
        let expect = |row: usize, vals: &[Rat]| {
            assert_eq!(m[row], vals, "row {row}");
        };
        expect(
            0,
            &[r(1, 8), r(0, 1), r(0, 1), r(0, 1), r(-3, 1), r(0, 1), r(3, 2), r(0, 1), r(3, 2)],
        );
        expect(
            1,
            &[r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(-6, 1), r(6, 1), r(6, 1), r(0, 1)],
        );
        expect(
            2,
            &[r(0, 1), r(0, 1), r(0, 1), r(-1, 2), r(0, 1), r(6, 1), r(-3, 1), r(0, 1), r(0, 1)],
        );
        expect(
            3,
            &[r(0, 1), r(0, 1), r(-1, 2), r(1, 6), r(6, 1), r(-2, 1), r(0, 1), r(0, 1), r(0, 1)],
        );
        expect(
            4,
            &[r(-3, 1), r(0, 1), r(0, 1), r(6, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)],
        );
        expect(
            5,
            &[r(0, 1), r(-6, 1), r(6, 1), r(-2, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)],
        );
        expect(
            6,
            &[r(3, 2), r(6, 1), r(-3, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)],
        );
    }

    #[test]
    fn relations_and_completion() {
        let (_, m, (known, new), completed) = full_intersection_theory().unwrap();
        assert_eq!(rank(&m), 7);
        let known_expect: Vec<Rat> =
            [0, 0, 0, 0, 1, 3, 6, -3, -4].iter().map(|&x| Rat::int(x)).collect();
        let new_expect: Vec<Rat> =
            [12, -4, -2, 6, 0, 1, 1, 0, -2].iter().map(|&x| Rat::int(x)).collect();
        assert_eq!(known, known_expect);
        assert_eq!(new, new_expect);
        // both annihilate the 7x9 matrix
        for r in [&known, &new] {
            for row in &m {
                let dot: Rat = row.iter().zip(r.iter()).map(|(a, b)| a.clone() * b.clone()).sum();
                assert!(dot.is_zero());
            }
        }
        assert_eq!(completed[7][7], Rat::int(16));
        assert_eq!(completed[7][8], Rat::int(-12));
        assert_eq!(completed[8][8], Rat::int(9));
        // symmetric
        for (i, row) in completed.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, completed[j][i]);
            }
        }
    }
}
