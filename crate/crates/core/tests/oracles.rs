//! Library output checked against hand computation and brute-force
//! references.

mod common;

use common::*;
use promoscan::community::{adjusted_rand_index, louvain, louvain_with_trace, modularity};
use promoscan::corpus::{Lexicon, Safety};
use promoscan::features::{extract, extract_batch, FEATURE_NAMES, N_FEATURES};
use promoscan::learn::{evaluate, train_knn, train_tree, Classifier, Dataset, TreeParams};
use promoscan::netgraph::{transitions, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn feature_names_follow_table_order() {
    assert_eq!(N_FEATURES, 34);
    assert_eq!(FEATURE_NAMES, TABLE_FEATURES);
}

#[test]
fn fixture_features_match_hand_computation() {
    let corpus = fixture_corpus();
    let lex = Lexicon::builtin();
    let ids: Vec<&str> = corpus.videos().keys().map(String::as_str).collect();
    let rows = extract_batch(&ids, &corpus, &lex, 50).unwrap();
    for ((id, got), (want_id, want)) in rows.iter().zip(fixture_expected()) {
        assert_eq!(id, want_id);
        for (j, (g, w)) in got.values().iter().zip(want).enumerate() {
            assert!(
                (g - w).abs() < 1e-12,
                "{id} {}: got {g}, want {w}",
                FEATURE_NAMES[j]
            );
        }
    }
}

#[test]
fn comment_cap_takes_a_prefix() {
    let corpus = fixture_corpus();
    let lex = Lexicon::builtin();
    let v1 = corpus.video("v1").unwrap();
    let f = extract(v1, &corpus, &lex, 1).unwrap();
    assert_eq!(&f.values()[28..], &[3.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn tree_matches_exhaustive_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let dim = rng.random_range(1..=4);
        let levels = rng.random_range(2..=6);
        let (rows, labels) = random_points(&mut rng, 20, dim, levels);
        let min_leaf = if case % 4 == 0 { 2 } else { 1 };
        let data = Dataset::dense(rows.clone(), labels.clone()).unwrap();
        let tree = train_tree(
            &data,
            TreeParams {
                max_depth: None,
                min_leaf,
            },
        );
        let reference = ref_tree(&rows, &labels, &(0..20).collect::<Vec<_>>(), min_leaf);
        for _ in 0..50 {
            let q: Vec<f64> = (0..dim)
                .map(|_| rng.random_range(-1.0..levels as f64))
                .collect();
            assert_eq!(tree.predict(&q), reference.predict(&q), "case {case}");
        }
        for r in &rows {
            assert_eq!(tree.predict(r), reference.predict(r), "case {case}");
        }
    }
}

#[test]
fn knn_matches_all_pairs_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..50 {
        let dim = rng.random_range(1..=5);
        let (rows, labels) = random_points(&mut rng, 50, dim, 5);
        let k = [1, 3, 5, 7][case % 4];
        let model = train_knn(&Dataset::dense(rows.clone(), labels.clone()).unwrap(), k).unwrap();
        for _ in 0..40 {
            let q: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..6.0)).collect();
            assert_eq!(
                model.predict(&q),
                ref_knn(&rows, &labels, k, &q),
                "case {case}"
            );
        }
    }
}

/// Classifier that replays a fixed answer per row, keyed by the row's only
/// feature.
struct Replay(Vec<Safety>);

impl Classifier for Replay {
    fn predict(&self, x: &[f64]) -> Safety {
        self.0[x[0] as usize]
    }

    fn n_features(&self) -> usize {
        1
    }
}

#[test]
fn evaluate_matches_confusion_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 1000;
    let pred: Vec<Safety> = (0..n)
        .map(|_| Safety::from_bool(rng.random_bool(0.4)))
        .collect();
    let actual: Vec<Safety> = (0..n)
        .map(|_| Safety::from_bool(rng.random_bool(0.3)))
        .collect();
    let data = Dataset::dense((0..n).map(|i| vec![i as f64]).collect(), actual.clone()).unwrap();
    let report = evaluate(&Replay(pred.clone()), &data).unwrap();
    let pairs: Vec<_> = pred.iter().copied().zip(actual.iter().copied()).collect();
    let (tp, fp, fn_, tn) = ref_confusion(&pairs);
    assert_eq!(
        (report.tp, report.fp, report.fn_, report.tn),
        (tp, fp, fn_, tn)
    );
    let (tp, fp, fn_, tn) = (tp as f64, fp as f64, fn_ as f64, tn as f64);
    assert!((report.accuracy - (tp + tn) / n as f64).abs() < 1e-12);
    assert!((report.precision - tp / (tp + fp)).abs() < 1e-12);
    assert!((report.recall - tp / (tp + fn_)).abs() < 1e-12);
}

#[test]
fn modularity_matches_pairwise_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let n = rng.random_range(2..30);
        let m = rng.random_range(1..80);
        let rel = if rng.random_bool(0.5) {
            Relation::Comment
        } else {
            Relation::Like
        };
        let g = random_graph(&mut rng, n, m, rel);
        let k = rng.random_range(1..=n);
        let comm: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let got = modularity(&g, &comm).unwrap();
        assert!((got - ref_modularity(&g, &comm)).abs() < 1e-12);
    }
}

#[test]
fn triangle_fixtures_are_exact() {
    let tri = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
    let g = graph_from_edges(6, &tri, Relation::Comment, &[false; 6]);
    assert_eq!(modularity(&g, &[0, 0, 0, 1, 1, 1]).unwrap(), 0.5);
    let mut bridged = tri.to_vec();
    bridged.push((2, 3));
    let g = graph_from_edges(6, &bridged, Relation::Comment, &[false; 6]);
    let q = modularity(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
    assert!((q - 5.0 / 14.0).abs() < 1e-15, "{q}");
    assert!((louvain(&g, 0).unwrap().modularity - 5.0 / 14.0).abs() < 1e-12);
}

/// Louvain is a local heuristic: on tiny random graphs it lands in a poor
/// local optimum a few percent of the time, as other implementations do.
/// Checked here is that such misses stay rare and that the result never
/// drops below the singleton partition.
#[test]
fn louvain_is_usually_near_optimal_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let (mut scored, mut near) = (0, 0);
    for case in 0..300 {
        let g = small_gnp(&mut rng);
        let singletons: Vec<usize> = (0..g.node_count()).collect();
        let (p, trace) = louvain_with_trace(&g, case).unwrap();
        assert!(p.modularity >= ref_modularity(&g, &singletons) - 1e-12);
        assert!(trace.sweeps.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        let best = brute_best_modularity(&g);
        assert!(p.modularity <= best + 1e-12);
        if best > 1e-12 {
            scored += 1;
            near += usize::from(p.modularity >= 0.95 * best - 1e-12);
        }
    }
    assert!(near * 10 >= scored * 9, "{near} of {scored} near optimal");
}

#[test]
fn ari_matches_pair_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..100 {
        let n = rng.random_range(2..40);
        let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
        assert!((adjusted_rand_index(&a, &b) - ref_ari(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn transitions_match_per_edge_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let g = random_graph(&mut rng, 40, 200, Relation::Like);
        let t = transitions(&g);
        assert_eq!([t.ss, t.su, t.us, t.uu], ref_transitions(&g));
        assert_eq!(t.total(), g.edge_count());
    }
}
