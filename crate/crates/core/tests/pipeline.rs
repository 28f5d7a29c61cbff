use graphseq::cycles::{cycle_rank, cyclomatic_number, s_q, FieldSpec};
use graphseq::graph::random::{random_connected, random_tree, rng};
use graphseq::graph::{families, parse_edge_list, write_edge_list};
use graphseq::hyperfinite::{min_small_set_expansion, tree_partition};
use graphseq::invariants::{beta_estimate, cost_upper_bound, CellOptions, CostStrategy, GraphSequence};
use graphseq::towers::{cayley_graph, schreier_homology_dim, TowerSpec};
use graphseq::Exact;
use proptest::prelude::*;

const FIELDS: [FieldSpec; 4] = [FieldSpec::Rationals, FieldSpec::Prime(2), FieldSpec::Prime(3), FieldSpec::Prime(5)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn all_cycles_span_the_cycle_space(seed in any::<u64>(), n in 3usize..12, extra in 0usize..10) {
        let g = random_connected(&mut rng(seed), n, 4, extra);
        for field in FIELDS {
            prop_assert_eq!(cycle_rank(&g, n, field), cyclomatic_number(&g));
        }
    }

    #[test]
    fn prime_ranks_never_exceed_rational_ranks(seed in any::<u64>(), n in 4usize..14, extra in 0usize..14, q in 3usize..9) {
        let g = random_connected(&mut rng(seed), n, 4, extra);
        let over_q = cycle_rank(&g, q, FieldSpec::Rationals);
        for p in [2, 3, 5] {
            prop_assert!(cycle_rank(&g, q, FieldSpec::Prime(p)) <= over_q);
        }
    }

    #[test]
    fn edge_lists_round_trip(seed in any::<u64>(), n in 1usize..40, extra in 0usize..20) {
        let g = random_connected(&mut rng(seed), n, 5, extra);
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn tree_partitions_respect_the_cut_bound(seed in any::<u64>(), n in 2usize..300, q in 2usize..20) {
        let t = random_tree(&mut rng(seed), n);
        let p = tree_partition(&t, q).unwrap();
        prop_assert!(p.partition.cut_edges.len() * q <= n);
        prop_assert!(p.partition.blocks_connected(&t));
    }
}

#[test]
fn tower_graphs_match_hand_built_families() {
    for n in 3..9 {
        assert_eq!(cayley_graph(&TowerSpec::torus2(), n).unwrap().graph.edge_set(), families::torus2(n as usize).edge_set());
        assert_eq!(cayley_graph(&TowerSpec::cyclic(), n).unwrap().graph.edge_set(), families::cycle(n as usize).edge_set());
    }
}

#[test]
fn torus_numbers_line_up_across_modules() {
    let seq = GraphSequence::named("torus2", vec![5, 6, 7], 0).unwrap();
    let beta = beta_estimate(&seq, FieldSpec::Prime(3), 4, CellOptions::default()).unwrap();
    let cost = cost_upper_bound(&seq, &CostStrategy::Identity).unwrap();
    for n in [5u64, 6, 7] {
        let g = seq.graph(n).unwrap();
        assert_eq!(beta.cell(n, 4).unwrap().s, Some(s_q(&g, 4, FieldSpec::Prime(3))));
        assert_eq!(schreier_homology_dim(&TowerSpec::torus2(), n, 3).unwrap().dim_p, 2);
    }
    assert_eq!(cost.bound, Some(Exact::from_int(2)));
    // β proxy sits below cost - 1.
    assert!(beta.beta_proxy.unwrap() <= Exact::one());
}

#[test]
fn expansion_on_small_cayley_graphs() {
    let c = cayley_graph(&TowerSpec::free2_sl2(), 3).unwrap();
    let r = min_small_set_expansion(&c.graph, 4).unwrap();
    assert!(r.delta > Exact::zero());
    let torus = min_small_set_expansion(&families::torus2(6), 4).unwrap();
    assert_eq!(torus.delta, Exact::from_int(2));
}
