//! Examples checked against independently coded brute-force oracles.

use acng_core::construction::{build_cng, generate_candidates, select_navigating_node, CngParams};
use acng_core::eval::{compute_ground_truth, sweep, tune_tau, TuneConfig};
use acng_core::exact::{
    build_exact, medoid, verify_alpha_reducible, verify_shortcut_reachable, ExactBuildParams,
};
use acng_core::knn::{build_knn_graph, KnnParams};
use acng_core::pruning::{
    adaptive_prune, prune_candidates, AdaptiveSchedule, CacheMode, PruneRule,
};
use acng_core::search::{beam_search, SearchParams};
use acng_core::stats::compute_stats;
use acng_core::synth::{perturbed_queries, uniform};
use acng_core::{Dataset, Neighbor, ProximityGraph};

fn line(xs: &[f32]) -> Dataset {
    let rows: Vec<[f32; 1]> = xs.iter().map(|&x| [x]).collect();
    Dataset::from_rows(&rows).unwrap()
}

/// Plain scan of the candidates in (distance, id) order, written without any
/// of the library's pruning code.
fn naive_shortcuts(data: &Dataset, p: u32, holds: impl Fn(f64, f64) -> bool) -> Vec<u32> {
    let mut order: Vec<u32> = (0..data.len() as u32).filter(|&q| q != p).collect();
    order.sort_by(|&a, &b| {
        data.distance(p, a)
            .partial_cmp(&data.distance(p, b))
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut kept: Vec<u32> = Vec::new();
    for u in order {
        let d_pu = f64::from(data.distance(p, u));
        if kept
            .iter()
            .all(|&v| !holds(d_pu, f64::from(data.distance(u, v))))
        {
            kept.push(u);
        }
    }
    kept
}

fn brute_knn(data: &Dataset, query: &[f32], k: usize) -> Vec<u32> {
    let mut all: Vec<(f32, u32)> = (0..data.len() as u32)
        .map(|p| (data.distance_to(p, query), p))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    all.into_iter().take(k).map(|(_, id)| id).collect()
}

#[test]
fn stats_match_a_separate_pair_scan() {
    let data = uniform(500, 8, 0.0, 1.0, 11).unwrap();
    let stats = compute_stats(&data).unwrap();
    let mut all = Vec::new();
    for a in 0..500u32 {
        for b in 0..500u32 {
            if a != b {
                all.push(f64::from(data.distance(a, b)));
            }
        }
    }
    let max = all.iter().cloned().fold(f64::MIN, f64::max);
    let min = all.iter().cloned().fold(f64::MAX, f64::min);
    assert_eq!(stats.diameter, max);
    assert_eq!(stats.min_dist, min);
    assert_eq!(stats.aspect_ratio, max / min);
}

#[test]
fn one_dimensional_shortcut_example() {
    // p = 0 and candidates at 1, 1.5, 10
    let data = line(&[0.0, 1.0, 1.5, 10.0]);
    let rule = PruneRule::ShiftedScaled {
        alpha: 2.0,
        tau: 0.1,
    };
    let cands: Vec<Neighbor> = (1..4)
        .map(|q| Neighbor::new(q, data.distance(0, q)))
        .collect();
    let s: Vec<u32> = prune_candidates(&data, 0, &cands, &rule, None)
        .iter()
        .map(|n| n.id)
        .collect();
    assert_eq!(
        s,
        naive_shortcuts(&data, 0, |d_pu, d_uv| d_pu > 2.0 * d_uv + 3.0 * 0.1)
    );
    assert_eq!(s, vec![1, 3]);
}

#[test]
fn exact_graph_matches_naive_scan() {
    let data = line(&[0.0, 1.0, 2.0, 4.0, 8.0]);
    let g = build_exact(
        &data,
        &ExactBuildParams::new(PruneRule::ShiftedScaled {
            alpha: 1.2,
            tau: 0.0,
        }),
    )
    .unwrap();
    for p in 0..5u32 {
        assert_eq!(
            g.neighbors(p),
            &naive_shortcuts(&data, p, |d_pu, d_uv| d_pu > 1.2 * d_uv)[..]
        );
    }
    assert_eq!(g.neighbors(0), &[1, 4]);

    let data = uniform(150, 3, 0.0, 1.0, 5).unwrap();
    for (rule, holds) in [
        (
            PruneRule::Triangle,
            Box::new(|a: f64, b: f64| a > b) as Box<dyn Fn(f64, f64) -> bool>,
        ),
        (
            PruneRule::Scaled { alpha: 1.3 },
            Box::new(|a, b| a > 1.3 * b),
        ),
        (
            PruneRule::Shifted { tau: 0.05 },
            Box::new(|a, b| a - 0.15 > b),
        ),
        (
            PruneRule::ShiftedScaled {
                alpha: 1.1,
                tau: 0.05,
            },
            Box::new(|a, b| a > 1.1 * b + 2.1 * 0.05),
        ),
    ] {
        let g = build_exact(&data, &ExactBuildParams::new(rule)).unwrap();
        for p in 0..150u32 {
            assert_eq!(
                g.neighbors(p),
                &naive_shortcuts(&data, p, &holds)[..],
                "{rule:?} vertex {p}"
            );
        }
    }
}

#[test]
fn shortcut_set_size_is_not_monotone_in_alpha() {
    // Each pair's predicate is monotone in alpha, but a larger alpha can
    // admit an early candidate that then prunes two later ones.
    let data = uniform(14, 2, 0.0, 10.0, 1970).unwrap();
    let cands: Vec<Neighbor> = (1..14)
        .map(|q| Neighbor::new(q, data.distance(0, q)))
        .collect();
    let tau = 0.2620437983159417;
    let size = |alpha| {
        prune_candidates(
            &data,
            0,
            &cands,
            &PruneRule::ShiftedScaled { alpha, tau },
            None,
        )
        .len()
    };
    assert!(size(1.2288242675141787) > size(1.279422243170471));
}

#[test]
fn shifted_scaled_graphs_have_at_least_as_many_edges_as_scaled() {
    for seed in 0..50 {
        let data = uniform(60, 2, 0.0, 10.0, seed).unwrap();
        let a = build_exact(
            &data,
            &ExactBuildParams::new(PruneRule::ShiftedScaled {
                alpha: 1.2,
                tau: 0.3,
            }),
        )
        .unwrap();
        let b = build_exact(
            &data,
            &ExactBuildParams::new(PruneRule::Scaled { alpha: 1.2 }),
        )
        .unwrap();
        assert!(a.edge_count() >= b.edge_count(), "seed {seed}");
    }
}

#[test]
fn adaptive_prune_round_counts() {
    // Points on a rough circle around the owner.
    let mut rows = vec![[0.0f32, 0.0]];
    for i in 0..12 {
        let t = i as f32 * std::f32::consts::TAU / 12.0;
        rows.push([
            t.cos() * (1.0 + i as f32 * 0.01),
            t.sin() * (1.0 + i as f32 * 0.01),
        ]);
    }
    let data = Dataset::from_rows(&rows).unwrap();
    let cands: Vec<Neighbor> = (1..13)
        .map(|q| Neighbor::new(q, data.distance(0, q)))
        .collect();
    let sched = AdaptiveSchedule {
        max_degree: 8,
        ..Default::default()
    };
    let first = naive_shortcuts(&data, 0, |a, b| a > 0.9 * b);
    assert!(first.len() >= 4);
    let out = adaptive_prune(&data, 0, &cands, &sched, 0.0, CacheMode::Memoized);
    assert_eq!(out.rounds, 1);
    let ids: Vec<u32> = out.neighbors.iter().map(|n| n.id).collect();
    assert_eq!(ids, first[..first.len().min(8)]);

    // Too few candidates to ever reach M / 2: the whole schedule runs.
    let small = &cands[..3];
    let out = adaptive_prune(&data, 0, small, &sched, 0.0, CacheMode::Memoized);
    assert_eq!(out.rounds, 15);
    assert!(out.exhausted);
    assert!((out.final_alpha - 1.6).abs() < 1e-9);
}

#[test]
fn removing_a_nearest_edge_breaks_reducibility() {
    let data = uniform(300, 4, 0.0, 1.0, 3).unwrap();
    let alpha = 1.2;
    let mut g = build_exact(
        &data,
        &ExactBuildParams::new(PruneRule::ShiftedScaled { alpha, tau: 0.0 }),
    )
    .unwrap();
    let at_points = data.subset(&[0, 1, 2, 3, 4]).unwrap();
    assert!(verify_alpha_reducible(&g, &data, &at_points, 0.0, alpha)
        .unwrap()
        .is_empty());

    // Every other out-neighbor v of p survived z, so δ(v, z) ≥ δ(p, v) / α
    // ≥ δ(p, z) / α; without the edge, nothing brings p closer to z.
    let p = 10u32;
    let z = g.neighbors(p)[0];
    let rest: Vec<u32> = g.neighbors(p)[1..].to_vec();
    g.set_neighbors(p, rest);
    let q = data.subset(&[z]).unwrap();
    let found = verify_alpha_reducible(&g, &data, &q, 0.0, alpha).unwrap();
    assert!(found.iter().any(|v| v.vertex == p));
}

#[test]
fn scaled_graph_is_shortcut_reachable() {
    let data = uniform(300, 4, 0.0, 1.0, 9).unwrap();
    let g = build_exact(
        &data,
        &ExactBuildParams::new(PruneRule::Scaled { alpha: 1.2 }),
    )
    .unwrap();
    assert!(verify_shortcut_reachable(&g, &data, 1.2)
        .unwrap()
        .is_empty());
}

#[test]
fn navigating_node_is_near_the_centroid() {
    let data = uniform(1000, 8, 0.0, 1.0, 21).unwrap();
    let base = build_knn_graph(
        &data,
        &KnnParams {
            k: 20,
            ..Default::default()
        },
    )
    .unwrap();
    let top5 = brute_knn(&data, &data.centroid(), 5);
    for seed in 0..5 {
        let s = select_navigating_node(&base, &data, 60, seed).unwrap();
        assert!(top5.contains(&s), "seed {seed}: {s} not in {top5:?}");
    }
    assert_eq!(medoid(&data), top5[0]);

    let two = line(&[0.0, 1.0]);
    let base = ProximityGraph::complete(&two);
    let a = select_navigating_node(&base, &two, 4, 7).unwrap();
    assert_eq!(select_navigating_node(&base, &two, 4, 7).unwrap(), a);
}

#[test]
fn candidates_on_a_complete_graph_are_exact() {
    let data = uniform(40, 3, 0.0, 1.0, 4).unwrap();
    let base = ProximityGraph::complete(&data);
    let c = generate_candidates(&base, &data, 7, 0, 5, 100).unwrap();
    let ids: Vec<u32> = c.iter().map(|n| n.id).collect();
    let truth: Vec<u32> = brute_knn(&data, data.row(7), 40)[1..].to_vec();
    assert_eq!(ids, truth);
}

#[test]
fn candidates_overlap_the_true_neighborhood() {
    let data = uniform(5000, 8, 0.0, 1.0, 8).unwrap();
    let base = build_knn_graph(
        &data,
        &KnnParams {
            k: 200,
            ..Default::default()
        },
    )
    .unwrap();
    let s = select_navigating_node(&base, &data, 60, 0).unwrap();
    let mut overlap = 0.0;
    let sample: Vec<u32> = (0..5000).step_by(50).collect();
    for &p in &sample {
        let c = generate_candidates(&base, &data, p, s, 60, 200).unwrap();
        let truth = brute_knn(&data, data.row(p), 201);
        let hits = c.iter().filter(|n| truth[1..].contains(&n.id)).count();
        overlap += hits as f64 / 200.0;
    }
    let mean = overlap / sample.len() as f64;
    // measured at about 0.99 on this data
    assert!(mean >= 0.6, "mean overlap {mean}");
}

#[test]
fn nn_descent_recall_on_twenty_thousand_points() {
    let data = uniform(20_000, 8, 0.0, 1.0, 2).unwrap();
    let params = KnnParams {
        k: 10,
        ..Default::default()
    };
    let g = build_knn_graph(&data, &params).unwrap();
    let sample: Vec<u32> = (0..20_000).step_by(40).collect();
    let mut recall = 0.0;
    for &p in &sample {
        let truth = brute_knn(&data, data.row(p), 11);
        let hits = g
            .neighbors(p)
            .iter()
            .filter(|v| truth[1..].contains(v))
            .count();
        recall += hits as f64 / 10.0;
    }
    let mean = recall / sample.len() as f64;
    assert!(mean >= 0.90, "mean recall {mean}");
}

#[test]
fn fixed_alpha_at_zero_tau_equals_the_scaled_rule() {
    let data = uniform(800, 6, 0.0, 1.0, 13).unwrap();
    let base = CngParams {
        knn: KnnParams {
            k: 30,
            ..Default::default()
        },
        max_degree: 16,
        candidate_size: 100,
        queue_size: 30,
        ..Default::default()
    };
    let fixed = CngParams {
        fixed_alpha: Some(1.2),
        ..base
    };
    let scaled = CngParams {
        rule_override: Some(PruneRule::Scaled { alpha: 1.2 }),
        ..base
    };
    let (a, _) = build_cng(&data, &fixed).unwrap();
    let (b, _) = build_cng(&data, &scaled).unwrap();
    assert_eq!(a, b);
}

#[test]
fn default_build_on_ten_thousand_points_is_connected() {
    let data = uniform(10_000, 16, 0.0, 1.0, 17).unwrap();
    let (g, report) = build_cng(&data, &CngParams::default()).unwrap();
    assert!(g.reachable_from(g.entry_point()).iter().all(|&r| r));
    assert!(g.observed_max_degree() <= 70);
    assert!(report.phase3_adaptive_prunes <= 10_000);
    assert!(g.validate().is_ok());
}

#[test]
fn ground_truth_matches_a_second_scan() {
    let data = uniform(2000, 8, 0.0, 1.0, 30).unwrap();
    let queries = uniform(100, 8, 0.0, 1.0, 31).unwrap();
    let gt = compute_ground_truth(&data, &queries, 10).unwrap();
    for qi in 0..100u32 {
        assert_eq!(
            gt.neighbors(qi as usize),
            &brute_knn(&data, queries.row(qi), 10)[..]
        );
    }
    // a query sitting on a data point ranks it first
    let on_point = data.subset(&[42]).unwrap();
    assert_eq!(
        compute_ground_truth(&data, &on_point, 1)
            .unwrap()
            .neighbors(0),
        &[42]
    );
}

#[test]
fn beam_search_with_full_queue_on_complete_graph_is_brute_force() {
    let data = uniform(300, 5, 0.0, 1.0, 40).unwrap();
    let queries = uniform(100, 5, 0.0, 1.0, 41).unwrap();
    let g = ProximityGraph::complete(&data);
    for k in [1, 10, 100] {
        for qi in 0..100u32 {
            let q = queries.row(qi);
            let out = beam_search(
                &g,
                &data,
                q,
                &SearchParams::new(300, k).with_entry(qi % 300),
            )
            .unwrap();
            let ids: Vec<u32> = out.results.iter().map(|n| n.id).collect();
            assert_eq!(ids, brute_knn(&data, q, k));
        }
    }
}

#[test]
fn sweep_recall_grows_with_queue_size_and_is_reproducible() {
    let data = uniform(3000, 8, 0.0, 1.0, 50).unwrap();
    let (queries, _) = perturbed_queries(&data, 200, 0.05, 51).unwrap();
    let params = CngParams {
        knn: KnnParams {
            k: 40,
            ..Default::default()
        },
        max_degree: 24,
        candidate_size: 100,
        ..Default::default()
    };
    let (g, _) = build_cng(&data, &params).unwrap();
    let gt = compute_ground_truth(&data, &queries, 10).unwrap();
    let ls = [10, 15, 20, 40, 80];
    let recs = sweep(&g, &data, &queries, &gt, 10, &ls).unwrap();
    for w in recs.windows(2) {
        assert!(w[1].recall_at_k + 1e-3 >= w[0].recall_at_k, "{recs:?}");
    }
    assert_eq!(sweep(&g, &data, &queries, &gt, 10, &ls).unwrap(), recs);

    let complete = ProximityGraph::complete(&data.subset(&(0..200).collect::<Vec<_>>()).unwrap());
    let small = data.subset(&(0..200).collect::<Vec<_>>()).unwrap();
    let gt = compute_ground_truth(&small, &queries, 10).unwrap();
    let recs = sweep(&complete, &small, &queries, &gt, 10, &[200]).unwrap();
    assert_eq!(recs[0].recall_at_k, 1.0);
}

#[test]
fn tau_tuning_finds_the_dominant_decade() {
    // The "build" returns a K-NN graph whose degree is smallest, and so whose
    // search cost is lowest, when tau sits at 0.1.
    let data = uniform(1500, 4, 0.0, 1.0, 60).unwrap();
    let queries = uniform(60, 4, 0.0, 1.0, 61).unwrap();
    let gt = compute_ground_truth(&data, &queries, 1).unwrap();
    let degree = |tau: f64| -> usize {
        if tau == 0.0 {
            40
        } else {
            8 + (8.0 * (tau / 0.1).log10().abs()).round() as usize
        }
    };
    let build = |tau: f64| {
        build_knn_graph(
            &data,
            &KnnParams {
                k: degree(tau),
                ..Default::default()
            },
        )
    };
    let config = TuneConfig {
        k: 1,
        queue_sizes: vec![1, 2, 4, 8, 16, 32],
        ..Default::default()
    };
    let choice = tune_tau(&data, &queries, &gt, &config, build).unwrap();
    assert!(choice.target_reached);

    // Exhaustive check of the coarse curve: 0.1 has the lowest cost.
    let coarse: Vec<_> = choice
        .evaluations
        .iter()
        .filter(|e| [0.0, 10.0, 1.0, 0.1, 0.01, 0.001].contains(&e.tau))
        .collect();
    let best = coarse
        .iter()
        .min_by(|a, b| {
            a.ndc_at_target
                .unwrap()
                .partial_cmp(&b.ndc_at_target.unwrap())
                .unwrap()
        })
        .unwrap();
    assert_eq!(best.tau, 0.1);
    assert!((0.05..=0.5).contains(&choice.tau), "chose {}", choice.tau);
}
