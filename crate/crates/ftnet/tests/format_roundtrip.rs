use ftnet::format::{parse_instance, parse_solution, serialize_instance, serialize_solution, Document, Solution};
use ftnet_core::testkit::{generate, ArcParams, GenSpec};
use ftnet_core::{Mode, Weight};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = GenSpec> {
    let params = (0u32..=100, 0i64..=3, 0i64..=20)
        .prop_map(|(pct, lo, span)| ArcParams { vulnerable_pct: pct, min_weight: lo, max_weight: lo + span });
    let mode = prop_oneof![(0usize..=3).prop_map(|k| Mode::Ftp { k }), (1usize..=3).prop_map(|ell| Mode::Ftf { ell })];
    prop_oneof![
        (2usize..=9, 0usize..=12, params.clone(), mode.clone(), any::<bool>(), any::<u64>())
            .prop_map(|(n, extra, params, mode, directed, seed)| GenSpec::Random { n, arcs: n + extra, params, mode, directed, seed }),
        (3usize..=9, 2usize..=4, 0usize..=10, params.clone(), mode.clone(), any::<u64>()).prop_map(
            |(n, layers, extra, params, mode, seed)| GenSpec::RandomDag { n, layers, arcs: n + extra, params, mode, seed }
        ),
        (1usize..=5, 2usize..=14, params, mode, any::<u64>())
            .prop_map(|(depth, max_arcs, params, mode, seed)| GenSpec::RandomSp { depth, max_arcs, params, mode, seed }),
        (1usize..=20, 0usize..=3).prop_map(|(extra, k)| GenSpec::Parallel { p: k + extra, k }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn instance_round_trip(spec in spec_strategy(), scale in 1i64..=4) {
        let Ok(g) = generate(&spec) else { return Ok(()) };
        // exercise rational weights too
        let inst = g.instance;
        let arcs = inst.arcs().iter().map(|a| ftnet_core::Arc { weight: a.weight / Weight::from_integer(scale), ..a.clone() }).collect();
        let inst = ftnet_core::Instance::new(inst.name(), inst.directed(), inst.mode(), inst.vertices().to_vec(), arcs, inst.source(), inst.sink()).unwrap();
        let doc = Document { instance: inst, annotations: g.annotations };
        let text = serialize_instance(&doc);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn solution_round_trip(arcs in prop::collection::vec(0usize..50, 0..10), num in 0i64..100, den in 1i64..6,
                           feasible in any::<bool>(), witness in prop::option::of(prop::collection::vec(0usize..50, 0..4))) {
        let sol = Solution { arcs, cost: Weight::new(num, den), feasible, witness_scenario: witness };
        prop_assert_eq!(parse_solution(&serialize_solution(&sol)).unwrap(), sol);
    }
}

#[test]
fn vertex_names_needing_quotes_survive() {
    let text = r#"name = "odd \"names\""
mode = "ftp"
k = 1
source = "s"
sink = "t t"
vertices = ["s", "t t", "a\\b"]
arcs = [
  { tail = "s", head = "a\\b", weight = 1, vulnerable = true },
  { tail = "a\\b", head = "t t", weight = "1/3" },
]
"#;
    let doc = parse_instance(text).unwrap();
    assert_eq!(doc.instance.vertices()[2], "a\\b");
    assert!(!doc.instance.is_vulnerable(1));
    let again = parse_instance(&serialize_instance(&doc)).unwrap();
    assert_eq!(again, doc);
}
