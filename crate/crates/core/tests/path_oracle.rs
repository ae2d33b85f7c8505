use std::collections::BTreeSet;

use gretl_core::query::{
    all_packages, parse_query, EmptyScope, Environment, Expr, PathExpr, Repeat, Restriction,
};
use gretl_core::testkit::{oracle_reachable, random_graph, random_path};
use gretl_core::VertexId;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn case(seed: u64) -> (gretl_core::Graph, BTreeSet<VertexId>, PathExpr) {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_graph(&mut rng, 30, 60);
    let start: BTreeSet<VertexId> = g.vertex_ids().filter(|_| rng.gen_bool(0.3)).collect();
    let path = random_path(&mut rng, 4);
    (g, start, path)
}

fn image(g: &gretl_core::Graph, start: &BTreeSet<VertexId>, p: &PathExpr) -> BTreeSet<VertexId> {
    let imports = all_packages(g.schema());
    Environment::new(g, &imports, &EmptyScope)
        .eval_path(start, p)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn evaluator_matches_product_automaton(seed in any::<u64>()) {
        let (g, start, path) = case(seed);
        prop_assert!(path.depth() <= 4);
        prop_assert_eq!(image(&g, &start, &path), oracle_reachable(&g, &start, &path), "path {}", path);
    }

    #[test]
    fn printed_paths_parse_back(seed in any::<u64>()) {
        let (_, _, path) = case(seed);
        let text = format!("x & ({path})");
        let parsed = parse_query(&text).unwrap();
        let Expr::Path { path: PathExpr::Group(inner), .. } = parsed else {
            panic!("not a path: {text}");
        };
        prop_assert_eq!(*inner, path);
    }

    #[test]
    fn star_and_plus_algebra(seed in any::<u64>()) {
        let (g, start, body) = case(seed);
        let star = image(&g, &start, &PathExpr::Iterate(Box::new(PathExpr::Group(Box::new(body.clone()))), Repeat::Star));
        let plus = image(&g, &start, &PathExpr::Iterate(Box::new(PathExpr::Group(Box::new(body.clone()))), Repeat::Plus));
        // p* = {start} ∪ p+, and p+ = p p*.
        let mut union = start.clone();
        union.extend(plus.iter().copied());
        prop_assert_eq!(&star, &union);
        let then_star = image(&g, &image(&g, &start, &body), &PathExpr::Iterate(Box::new(PathExpr::Group(Box::new(body.clone()))), Repeat::Star));
        prop_assert_eq!(&plus, &then_star);
    }

    #[test]
    fn image_is_monotone_in_the_start_set(seed in any::<u64>()) {
        let (g, start, path) = case(seed);
        let mut bigger = start.clone();
        bigger.extend(g.vertex_ids().step_by(3));
        let small = image(&g, &start, &path);
        let large = image(&g, &bigger, &path);
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn type_filters_only_shrink_results(seed in any::<u64>(), ty in 0usize..4, name in 0usize..3) {
        let (g, start, path) = case(seed);
        let ty = gretl_core::testkit::TYPE_NAMES[ty].to_string();
        let base = image(&g, &start, &path);
        let typed = PathExpr::Seq(vec![PathExpr::Group(Box::new(path.clone())), PathExpr::restrict(&[&ty])]);
        let typed_set = image(&g, &start, &typed);
        let pred = parse_query(&format!("thisVertex.name = {:?}", gretl_core::testkit::NAMES[name])).unwrap();
        let with_pred = PathExpr::Seq(vec![
            PathExpr::Group(Box::new(path.clone())),
            PathExpr::Restrict(Restriction { types: vec![ty], predicate: Some(Box::new(pred)) }),
        ]);
        let pred_set = image(&g, &start, &with_pred);
        prop_assert!(typed_set.is_subset(&base));
        prop_assert!(pred_set.is_subset(&typed_set));
    }
}

#[test]
fn every_instance_is_fast() {
    for seed in 0..100u64 {
        let (g, start, path) = case(seed);
        let t = std::time::Instant::now();
        image(&g, &start, &path);
        oracle_reachable(&g, &start, &path);
        assert!(
            t.elapsed() < std::time::Duration::from_millis(100),
            "seed {seed}"
        );
    }
}
