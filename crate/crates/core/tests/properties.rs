//! Randomized and property-based checks of the library invariants, all
//! seeded for reproducibility.

mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use psys_core::chem::{self, reorient_attribute};
use psys_core::hypergraph::{
    are_equal, are_equivalent, find_isomorphism, is_sub_hypergraph, Hypergraph, IsomorphismWitness,
};
use psys_core::num::{Decimal, Ratio};
use psys_core::order::{
    comparability_stats, covers, down_set, incomparables, product_order, quotient_by_equivalence,
    spearman, up_set, AttributeSpec, AttributeTable, Orientation,
};
use psys_core::system::{
    dominance_degree, dominance_profile, hyperedge_chain_order, inter_hyperedge_dominance,
    relate_systems, within_hyperedge_dominance, SystemRelation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use psys_core::order::is_chain;
use psys_core::system::build_periodic_system;

#[test]
fn poset_axioms_hold_on_random_posets() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    for _ in 0..300 {
        let n = rng.gen_range(1..=10);
        let p = random_poset(&mut rng, n);
        for i in 0..n {
            assert!(p.leq_idx(i, i));
            for j in 0..n {
                if i != j {
                    assert!(!(p.leq_idx(i, j) && p.leq_idx(j, i)));
                }
                for k in 0..n {
                    if p.leq_idx(i, j) && p.leq_idx(j, k) {
                        assert!(p.leq_idx(i, k));
                    }
                }
            }
        }
    }
}

#[test]
fn covers_closure_identity_and_minimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(402);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let p = random_poset(&mut rng, n);
        let edges: BTreeSet<(usize, usize)> = covers(&p).edge_indices().collect();
        assert_eq!(edges, brute_force_covers(&p));
        assert_eq!(closure_of(&edges, n), leq_matrix(&p), "closure identity");
        for e in &edges {
            let mut pruned = edges.clone();
            pruned.remove(e);
            assert_ne!(closure_of(&pruned, n), leq_matrix(&p), "cover {e:?} is redundant");
        }
    }
}

#[test]
fn down_up_incomparable_partition_the_ground_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(403);
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let p = random_poset(&mut rng, n);
        for x in p.ground() {
            let total = down_set(&p, x).unwrap().len()
                + up_set(&p, x).unwrap().len()
                + incomparables(&p, x).unwrap().len();
            assert_eq!(total, n + 1, "x is counted in both its down and up set");
        }
        let stats = comparability_stats(&p);
        assert_eq!(stats.pairs, n * (n - 1) / 2);
        assert_eq!(stats.comparable + stats.incomparable, stats.pairs);
    }
}

/// Strictly increasing per-column maps leave the product order unchanged,
/// and a strictly decreasing map turns a descending attribute into an
/// equivalent ascending one.
#[test]
fn product_order_is_invariant_under_monotone_maps() {
    let increasing = |v: i64| v * v + 3 * v + 1;
    let decreasing = |v: i64| 50 - v;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let width = rng.gen_range(1..=3);
        let table = random_table(&mut rng, n, width);
        let base = product_order(&table).unwrap();

        let raw = |row: usize, col: usize| -> i64 {
            table.value(row, col).to_string().parse().unwrap()
        };
        let stretched = AttributeTable::new(
            table.attributes().to_vec(),
            (0..n)
                .map(|r| {
                    let id = table.elements()[r].clone();
                    (id, (0..width).map(|c| dec(increasing(raw(r, c)))).collect())
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(
            leq_matrix(&base),
            leq_matrix(&product_order(&stretched).unwrap())
        );

        let reoriented = AttributeTable::new(
            table
                .attributes()
                .iter()
                .map(|a| AttributeSpec::ascending(&*a.name))
                .collect(),
            (0..n)
                .map(|r| {
                    let id = table.elements()[r].clone();
                    let values = (0..width)
                        .map(|c| match table.attributes()[c].orientation {
                            Orientation::Ascending => dec(raw(r, c)),
                            Orientation::Descending => dec(decreasing(raw(r, c))),
                        })
                        .collect();
                    (id, values)
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(
            leq_matrix(&base),
            leq_matrix(&product_order(&reoriented).unwrap())
        );
    }
}

#[test]
fn orientation_flip_equals_column_negation() {
    let mut rng = ChaCha8Rng::seed_from_u64(405);
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let width = rng.gen_range(1..=3);
        let table = random_table(&mut rng, n, width);
        let flip = rng.gen_range(0..width);
        let specs = table
            .attributes()
            .iter()
            .enumerate()
            .map(|(c, a)| {
                let mut spec = a.clone();
                if c == flip {
                    spec.orientation = match spec.orientation {
                        Orientation::Ascending => Orientation::Descending,
                        Orientation::Descending => Orientation::Ascending,
                    };
                }
                spec
            })
            .collect();
        let rows = (0..n)
            .map(|r| {
                let id = table.elements()[r].clone();
                let values = (0..width)
                    .map(|c| {
                        let v = table.value(r, c);
                        if c == flip {
                            v.neg()
                        } else {
                            v
                        }
                    })
                    .collect();
                (id, values)
            })
            .collect();
        let negated = AttributeTable::new(specs, rows).unwrap();
        assert_eq!(
            leq_matrix(&product_order(&table).unwrap()),
            leq_matrix(&product_order(&negated).unwrap())
        );
    }
}

#[test]
fn quotient_removes_exactly_the_duplicate_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(406);
    for _ in 0..300 {
        // narrow value range to force collisions
        let n = rng.gen_range(1..=8);
        let specs = vec![AttributeSpec::ascending("a0"), AttributeSpec::descending("a1")];
        let rows: Vec<_> = labels("e", n)
            .into_iter()
            .map(|id| {
                (
                    id,
                    vec![dec(rng.gen_range(0..3)), dec(rng.gen_range(0..2))],
                )
            })
            .collect();
        let table = AttributeTable::new(specs, rows).unwrap();
        let (quotient, map) = quotient_by_equivalence(&table);

        let mut rows_seen = BTreeSet::new();
        for r in 0..quotient.len() {
            assert!(rows_seen.insert(quotient.row(r).to_vec()), "duplicate row kept");
        }
        assert_eq!(map.len(), table.len(), "the map is total");
        for (from, to) in &map {
            assert!(to <= from, "representative is the smallest label");
            assert!(quotient.element_index(to).is_some());
            assert_eq!(quotient.element_index(from).is_some(), from == to);
            let (i, j) = (
                table.element_index(from).unwrap(),
                table.element_index(to).unwrap(),
            );
            assert_eq!(table.row(i), table.row(j), "only equal rows fold");
        }
        let reps: BTreeSet<_> = map.values().collect();
        assert_eq!(quotient.len(), reps.len());
    }
}

#[test]
fn hypergraph_relations_imply_one_another() {
    let mut rng = ChaCha8Rng::seed_from_u64(407);
    let mut equal_seen = 0;
    let mut equivalent_seen = 0;
    let mut isomorphic_seen = 0;
    for _ in 0..1000 {
        let h1 = random_hypergraph(&mut rng, 6, 4);
        let h2 = match rng.gen_range(0..4) {
            0 => h1.clone(),
            1 => permuted_indices(&mut rng, &h1),
            2 => relabelled_copy(&mut rng, &h1, "w").0,
            _ => random_hypergraph(&mut rng, 6, 4),
        };
        let equal = are_equal(&h1, &h2);
        let equivalent = are_equivalent(&h1, &h2);
        let witness = find_isomorphism(&h1, &h2);
        if equal {
            equal_seen += 1;
            assert!(equivalent, "equal implies equivalent");
        }
        if equivalent {
            equivalent_seen += 1;
            assert!(witness.is_some(), "equivalent implies isomorphic");
        }
        if let Some(w) = &witness {
            isomorphic_seen += 1;
            assert!(witness_is_valid(&h1, &h2, w));
        }
        assert_eq!(
            witness.is_some(),
            isomorphic_by_brute_force(&h1, &h2),
            "search must agree with the exhaustive oracle"
        );
    }
    assert!(equal_seen > 100, "generator exercised equality {equal_seen}");
    assert!(equivalent_seen > 200, "generator exercised equivalence");
    assert!(isomorphic_seen > 400, "generator exercised isomorphism");
}

#[test]
fn isomorphism_witnesses_invert_and_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(408);
    for _ in 0..300 {
        let h1 = random_hypergraph(&mut rng, 6, 4);
        assert!(
            find_isomorphism(&h1, &h1).is_some(),
            "isomorphism is reflexive"
        );

        let (h2, _) = relabelled_copy(&mut rng, &h1, "w");
        let (h3, _) = relabelled_copy(&mut rng, &h2, "u");
        let w12 = find_isomorphism(&h1, &h2).expect("relabelled copy is isomorphic");
        let w23 = find_isomorphism(&h2, &h3).expect("relabelled copy is isomorphic");

        let inverted = IsomorphismWitness {
            vertex_map: w12.vertex_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            edge_permutation: w12.edge_permutation.iter().map(|(&a, &b)| (b, a)).collect(),
        };
        assert!(witness_is_valid(&h2, &h1, &inverted), "witnesses invert");

        let composed = IsomorphismWitness {
            vertex_map: w12
                .vertex_map
                .iter()
                .map(|(a, b)| (a.clone(), w23.vertex_map[b].clone()))
                .collect(),
            edge_permutation: w12
                .edge_permutation
                .iter()
                .map(|(&a, &b)| (a, w23.edge_permutation[&b]))
                .collect(),
        };
        assert!(witness_is_valid(&h1, &h3, &composed), "witnesses compose");
    }
}

#[test]
fn sub_hypergraph_is_reflexive_and_transitive() {
    let mut rng = ChaCha8Rng::seed_from_u64(409);
    for _ in 0..300 {
        let h = random_hypergraph(&mut rng, 7, 5);
        assert!(is_sub_hypergraph(&h, &h));
        let mid = random_restriction(&mut rng, &h);
        let low = random_restriction(&mut rng, &mid);
        assert!(is_sub_hypergraph(&mid, &h));
        assert!(is_sub_hypergraph(&low, &mid));
        assert!(is_sub_hypergraph(&low, &h), "sub-hypergraph is transitive");
    }
}

#[test]
fn dominance_degree_is_strictly_monotone_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(410);
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let ps = random_system(&mut rng, n, 2, 4);
        let order = ps.order();
        let degrees: Vec<Ratio> = order
            .ground()
            .iter()
            .map(|x| dominance_degree(&ps, x).unwrap())
            .collect();
        for d in &degrees {
            assert!(Ratio::ZERO <= *d && *d <= Ratio::ONE);
        }
        assert!(
            degrees.contains(&Ratio::ZERO),
            "some minimal element dominates nothing"
        );
        for i in 0..order.len() {
            for j in 0..order.len() {
                if order.lt_idx(j, i) {
                    assert!(degrees[j] < degrees[i], "strict monotonicity");
                }
            }
        }
    }
}

#[test]
fn within_degree_is_one_exactly_on_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(411);
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let ps = random_system(&mut rng, n, 2, 4);
        for edge in ps.hypergraph().edges() {
            if edge.len() < 2 {
                continue;
            }
            let members: Vec<_> = edge.members().iter().cloned().collect();
            let chain = is_chain(ps.order(), &members).unwrap();
            let degree = within_hyperedge_dominance(&ps, edge.index()).unwrap();
            assert_eq!(degree == Ratio::ONE, chain);
            let order = hyperedge_chain_order(&ps, edge.index()).unwrap();
            assert_eq!(order.is_some(), chain);
            if let Some(sorted) = order {
                assert_eq!(
                    sorted.iter().cloned().collect::<BTreeSet<_>>(),
                    edge.members().clone()
                );
                for pair in sorted.windows(2) {
                    let (hi, lo) = (
                        ps.order().index_of(&pair[0]).unwrap(),
                        ps.order().index_of(&pair[1]).unwrap(),
                    );
                    assert!(ps.order().lt_idx(lo, hi), "most dominant first");
                }
            }
        }
    }
}

#[test]
fn inter_dominance_of_a_pair_sums_to_at_most_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(412);
    for _ in 0..300 {
        let n = rng.gen_range(2..=7);
        let ps = random_system(&mut rng, n, 2, 4);
        let indices: Vec<usize> = ps.hypergraph().edges().iter().map(|e| e.index()).collect();
        for &i in &indices {
            for &j in &indices {
                if i == j {
                    continue;
                }
                let forward = inter_hyperedge_dominance(&ps, i, j).unwrap();
                let backward = inter_hyperedge_dominance(&ps, j, i).unwrap();
                assert!(forward.checked_add(backward).unwrap() <= Ratio::ONE);
            }
        }
    }
}

#[test]
fn metrics_ignore_deleted_hyperedges() {
    let mut rng = ChaCha8Rng::seed_from_u64(413);
    for _ in 0..200 {
        let n = rng.gen_range(2..=7);
        let table = random_table(&mut rng, n, 2);
        let vertices = table.elements().to_vec();
        let edge_count = rng.gen_range(2..=4);
        let edges: Vec<(usize, BTreeSet<_>)> = (0..edge_count)
            .map(|i| {
                let members: BTreeSet<_> = loop {
                    let m: BTreeSet<_> = vertices
                        .iter()
                        .filter(|_| rng.gen_bool(0.5))
                        .cloned()
                        .collect();
                    if !m.is_empty() {
                        break m;
                    }
                };
                (i, members)
            })
            .collect();
        let full = build_periodic_system(
            &table,
            &Hypergraph::new(vertices.clone(), edges.clone()).unwrap(),
        )
        .unwrap();

        let dropped = rng.gen_range(0..edge_count);
        let remaining: Vec<_> = edges
            .iter()
            .filter(|(i, _)| *i != dropped)
            .cloned()
            .collect();
        let reduced = build_periodic_system(
            &table,
            &Hypergraph::new(vertices.clone(), remaining.clone()).unwrap(),
        )
        .unwrap();

        for x in reduced.order().ground() {
            assert_eq!(
                dominance_degree(&full, x).unwrap(),
                dominance_degree(&reduced, x).unwrap()
            );
        }
        for (i, members) in &remaining {
            if members.len() >= 2 {
                assert_eq!(
                    within_hyperedge_dominance(&full, *i).unwrap(),
                    within_hyperedge_dominance(&reduced, *i).unwrap()
                );
            }
            for (j, _) in &remaining {
                if i != j {
                    assert_eq!(
                        inter_hyperedge_dominance(&full, *i, *j).unwrap(),
                        inter_hyperedge_dominance(&reduced, *i, *j).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn every_system_equals_itself() {
    let mut rng = ChaCha8Rng::seed_from_u64(414);
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let ps = random_system(&mut rng, n, 2, 4);
        assert_eq!(relate_systems(&ps, &ps), SystemRelation::Equal);
    }
}

#[test]
fn profile_degrees_respect_the_diagonal_bound_at_majority_thresholds() {
    // below 1/2 both directions of a pair can clear the cut, so the bound
    // in + out <= edges - 1 is only claimed for thresholds >= 1/2
    let mut rng = ChaCha8Rng::seed_from_u64(415);
    for _ in 0..200 {
        let n = rng.gen_range(2..=7);
        let ps = random_system(&mut rng, n, 2, 5);
        let bound = ps.hypergraph().edges().len() - 1;
        for threshold in ["0.5", "0.75", "1"] {
            let entries = dominance_profile(&ps, threshold.parse::<Decimal>().unwrap()).unwrap();
            for entry in entries {
                assert!(entry.in_degree + entry.out_degree <= bound);
            }
        }
    }
}

#[test]
fn inversion_pairs_are_the_only_incomparable_ones() {
    let table = chem::load_inversions(chem::data::INVERSIONS_CSV).unwrap();
    let order = product_order(&table).unwrap();
    for (a, b) in [("Ar", "K"), ("Co", "Ni"), ("Te", "I")] {
        assert!(!order.leq(&el(a), &el(b)).unwrap(), "{a} vs {b}");
        assert!(!order.leq(&el(b), &el(a)).unwrap(), "{b} vs {a}");
    }
    assert_eq!(comparability_stats(&order).incomparable, 3);
}

/// The shipped radius column, declared descending, must give the same
/// order as the explicitly reoriented ascending column.
#[test]
fn declared_orientation_matches_explicit_reorientation() {
    let full = chem::load_bond_dataset(chem::data::BONDS_CSV).unwrap();
    let (table, _) = quotient_by_equivalence(&full);
    let radius = reorient_attribute(&table.column(1)).unwrap();
    let rows = table
        .elements()
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), vec![table.value(i, 0), radius[i]]))
        .collect();
    let reoriented = AttributeTable::new(
        vec![
            AttributeSpec::ascending("electronegativity"),
            AttributeSpec::ascending("radius_pm"),
        ],
        rows,
    )
    .unwrap();
    assert_eq!(
        leq_matrix(&product_order(&table).unwrap()),
        leq_matrix(&product_order(&reoriented).unwrap())
    );
}

proptest! {
    #[test]
    fn reorienting_twice_preserves_the_ranking(values in proptest::collection::vec(0u32..1000, 1..30)) {
        let decimals: Vec<Decimal> = values.iter().map(|v| dec(v)).collect();
        let twice = reorient_attribute(&reorient_attribute(&decimals).unwrap()).unwrap();
        for i in 0..decimals.len() {
            for j in 0..decimals.len() {
                prop_assert_eq!(decimals[i] < decimals[j], twice[i] < twice[j]);
            }
        }
    }

    #[test]
    fn spearman_is_symmetric_and_bounded(rows in proptest::collection::vec((0i32..50, 0i32..50), 3..20)) {
        prop_assume!(rows.iter().any(|r| r.0 != rows[0].0));
        prop_assume!(rows.iter().any(|r| r.1 != rows[0].1));
        let table = AttributeTable::new(
            vec![AttributeSpec::ascending("a"), AttributeSpec::ascending("b")],
            rows.iter()
                .enumerate()
                .map(|(i, (a, b))| (el(&format!("e{i}")), vec![dec(a), dec(b)]))
                .collect(),
        ).unwrap();
        let ab = spearman(&table, "a", "b").unwrap();
        let ba = spearman(&table, "b", "a").unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ab.abs() <= 1.0 + 1e-12);
    }
}
