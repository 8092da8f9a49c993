use eif_core::forest::grow_forest_tree;
use eif_core::io::{load_forest, model_from_str, model_to_string, save_forest, FORMAT_VERSION};
use eif_core::synth::gen_gaussian_blob;
use eif_core::{
    build_forest, build_rotated_forest, height_limit, make_rng, Dataset, EifError, Forest, Model, Model32, Scorer,
};
use serde_json::Value;

fn blob(n: usize, dim: usize, seed: u64) -> Dataset {
    gen_gaussian_blob(n, dim, &vec![0.0; dim], 1.0, seed).unwrap()
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

#[test]
fn round_trip_preserves_scores_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let probes = blob(100, 3, 2);
    for ext in 0..3 {
        let model: Model = build_forest(&blob(800, 3, 1), 60, 128, ext, 5).unwrap().into();
        let path = dir.path().join(format!("ext{ext}.json"));
        save_forest(&model, &path).unwrap();
        let loaded: Model = load_forest(&path).unwrap();
        assert!(same_bits(
            &model.score_batch(&probes).unwrap(),
            &loaded.score_batch(&probes).unwrap()
        ));
        assert_eq!(model_to_string(&model), model_to_string(&loaded));
    }
}

#[test]
fn rotated_round_trip_keeps_angles() {
    let data = blob(500, 2, 3);
    let model: Model = build_rotated_forest(&data, 25, 64, 4).unwrap().into();
    let text = model_to_string(&model);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["variant"], "rotated");
    let trees = doc["trees"].as_array().unwrap();
    assert_eq!(trees.len(), 25);
    assert!(trees.iter().all(|t| t["angle"].is_f64()));

    let loaded: Model = model_from_str(&text).unwrap();
    let probes = blob(100, 2, 4);
    assert!(same_bits(
        &model.score_batch(&probes).unwrap(),
        &loaded.score_batch(&probes).unwrap()
    ));
}

#[test]
fn f32_models_round_trip_and_refuse_f64_loading() {
    let data: eif_core::Dataset32 = blob(300, 2, 6).cast();
    let model: Model32 = build_forest(&data, 20, 64, 1, 6).unwrap().into();
    let text = model_to_string(&model);
    let back: Model32 = model_from_str(&text).unwrap();
    let probe = [0.25f32, -1.5];
    assert_eq!(model.score(&probe).unwrap().to_bits(), back.score(&probe).unwrap().to_bits());
    assert!(matches!(model_from_str::<f64>(&text), Err(EifError::Schema(_))));
}

#[test]
fn document_starts_with_format_and_version() {
    let model: Model = build_forest(&blob(100, 2, 7), 3, 16, 1, 7).unwrap().into();
    let text = model_to_string(&model);
    assert!(text.starts_with(r#"{"format":"eif-model","version":1"#), "{}", &text[..60]);
}

#[test]
fn truncated_file_is_a_corrupt_model() {
    let model: Model = build_forest(&blob(200, 2, 8), 10, 32, 1, 8).unwrap().into();
    let text = model_to_string(&model);
    for cut in [1, text.len() / 3, text.len() - 1] {
        assert!(matches!(model_from_str::<f64>(&text[..cut]), Err(EifError::CorruptModel(_))));
    }
}

#[test]
fn newer_version_names_both_versions() {
    let model: Model = build_forest(&blob(200, 2, 9), 4, 32, 1, 9).unwrap().into();
    let text = model_to_string(&model).replacen(r#""version":1"#, r#""version":2"#, 1);
    let err = model_from_str::<f64>(&text).unwrap_err();
    assert!(matches!(err, EifError::UnsupportedVersion { found: 2, supported: FORMAT_VERSION }));
    let msg = err.to_string();
    assert!(msg.contains('2') && msg.contains('1'), "{msg}");
}

fn edit_first_tree(text: &str, f: impl Fn(&mut Value)) -> String {
    let mut doc: Value = serde_json::from_str(text).unwrap();
    f(&mut doc["trees"][0]);
    serde_json::to_string(&doc).unwrap()
}

#[test]
fn structural_damage_is_rejected() {
    let model: Model = build_forest(&blob(300, 3, 10), 4, 64, 2, 10).unwrap().into();
    let text = model_to_string(&model);
    let damaged = [
        edit_first_tree(&text, |t| t["nodes"][0]["left_index"] = Value::from(10_000)),
        edit_first_tree(&text, |t| t["nodes"][0]["right_index"] = Value::from(0)),
        edit_first_tree(&text, |t| {
            let nodes = t["nodes"].as_array_mut().unwrap();
            let leaf = nodes.iter_mut().find(|n| n["kind"] == "external").unwrap();
            leaf["size"] = Value::from(leaf["size"].as_u64().unwrap() + 1);
        }),
        edit_first_tree(&text, |t| t["nodes"][0]["normal"][0] = Value::from(0.0)),
        edit_first_tree(&text, |t| t["nodes"].as_array_mut().unwrap().pop().map(|_| ()).unwrap()),
    ];
    for (k, doc) in damaged.iter().enumerate() {
        match model_from_str::<f64>(doc) {
            Err(EifError::CorruptModel(msg)) => assert!(!msg.is_empty()),
            other => panic!("case {k}: expected corrupt-model, got {other:?}"),
        }
    }
}

#[test]
fn trees_do_not_depend_on_build_order() {
    let data = blob(1000, 3, 11);
    let forest: Forest = build_forest(&data, 30, 128, 2, 12).unwrap();
    let root = make_rng(12);
    for i in (0..30).rev() {
        let tree = grow_forest_tree(&data, 128, height_limit(128), 2, &root, i).unwrap();
        assert_eq!(&tree, &forest.trees()[i], "tree {i}");
    }
}

#[test]
fn thread_count_does_not_change_the_model() {
    let data = blob(1500, 4, 13);
    let build = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let model: Model = pool.install(|| build_forest(&data, 50, 256, 3, 14).unwrap()).into();
        model_to_string(&model)
    };
    let one = build(1);
    assert_eq!(one, build(4));
    assert_eq!(one, build(7));
}
