//! Invariants on random digraphs, checked against the brute-force oracles.

mod common;

use dgexcess::analysis::Analysis;
use dgexcess::classify::odd_girth_spectral;
use dgexcess::excess::{upper_projection_sum, wdr_projection_sum};
use dgexcess::io::{parse_adjmatrix, parse_edgelist, write_adjmatrix, write_edgelist};
use dgexcess::Digraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n)
            .prop_map(move |bits| Digraph::from_adjacency(n, |u, v| u != v && bits[u * n + v]).unwrap())
    })
}

/// Biased towards strong connectivity by adding a Hamiltonian cycle.
fn connected_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    digraph(max_n).prop_map(|g| {
        let n = g.n();
        Digraph::from_adjacency(n, |u, v| g.has_arc(u, v) || (n > 1 && v == (u + 1) % n)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_formats_round_trip(g in digraph(7)) {
        prop_assert_eq!(parse_edgelist(&write_edgelist(&g)).unwrap(), g.clone());
        prop_assert_eq!(parse_adjmatrix(&write_adjmatrix(&g)).unwrap(), g);
    }

    #[test]
    fn strong_connectivity_matches_bfs(g in digraph(6)) {
        prop_assert_eq!(g.is_strongly_connected(), common::strongly_connected(&g));
    }

    #[test]
    fn predistance_norms_match_matrix_gram_schmidt(g in connected_digraph(6)) {
        let a = Analysis::with_defaults(g.clone()).unwrap();
        prop_assert_eq!(&a.basis().norms2, &common::predistance_norms(&g));
        prop_assert_eq!(a.hat_d() + 1, a.minimal_polynomial().degree().unwrap());
    }

    #[test]
    fn minimal_polynomial_annihilates(g in connected_digraph(6)) {
        let a = Analysis::with_defaults(g).unwrap();
        prop_assert!(a.with_cache(|c| c.eval(a.minimal_polynomial())).is_zero());
    }

    #[test]
    fn projection_sums_are_bounded_by_n(g in connected_digraph(6)) {
        let a = Analysis::with_defaults(g.clone()).unwrap();
        let n = BigRational::from_integer(BigInt::from(a.n()));
        let wdr = common::weakly_distance_regular(&g);
        for sum in [wdr_projection_sum(a.projection_table()), upper_projection_sum(a.projection_table())] {
            prop_assert!(sum.total <= n);
            prop_assert_eq!(sum.total == n, wdr);
        }
    }

    #[test]
    fn simple_excess_is_at_most_spectral(g in connected_digraph(6)) {
        let a = Analysis::with_defaults(g.clone()).unwrap();
        prop_assert!(a.simple_excess() <= a.spectral_excess());
        if common::normal(&g) {
            prop_assert_eq!(a.simple_excess() == a.spectral_excess(), common::distance_regular(&g));
        }
    }

    #[test]
    fn odd_girth_from_traces_matches_cycles(g in connected_digraph(6)) {
        let a = Analysis::with_defaults(g.clone()).unwrap();
        prop_assert_eq!(odd_girth_spectral(a.traces()).finite(), common::odd_girth(&g));
        prop_assert_eq!(g.girth_and_odd_girth().1.finite(), common::odd_girth(&g));
    }
}
