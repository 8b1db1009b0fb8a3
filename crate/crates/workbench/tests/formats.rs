use std::fs;

use qubo_core::bpgnn::{forward, BpgnnConfig, BpgnnModel};
use qubo_core::data::{generate_dataset, DataGenParams};
use qubo_core::qubo::{gen_lattice_laplacian, gen_random_dense, InstanceMeta, ObservedVector, QuboInstance};
use qubo_core::solvers::{tabu_solve, TabuParams};
use qubo_workbench::io::{self, FormatError};
use tempfile::tempdir;

fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[test]
fn bundled_fixture_parses() {
    let inst = io::read_instance(&fixture("k2.mtx")).unwrap();
    assert_eq!(inst.k(), 2);
    assert_eq!(inst.entries(), &[(0, 1, 1.0)]);
    assert_eq!(inst.meta().generator, "fixture");
    assert_eq!(io::read_vector(&fixture("k2.b.txt")).unwrap().to_vec(), vec![-1.0, 0.5]);
}

#[test]
fn instance_round_trip_is_exact() {
    let dir = tempdir().unwrap();
    for inst in [gen_random_dense(9, 4, 0.37), gen_lattice_laplacian(4)] {
        let path = dir.path().join("a.mtx");
        io::write_instance(&inst, &path).unwrap();
        assert!(io::meta_path(&path).exists());
        assert_eq!(io::read_instance(&path).unwrap(), inst);
    }
}

#[test]
fn malformed_instances_name_the_line() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.mtx");
    let header = "%%MatrixMarket matrix coordinate real general\n";
    let cases = [
        (format!("{header}% c\n3 3 2\n1 1 1.0\n4 1 2.0\n"), 5),
        (format!("{header}3 3 1\n1 x 1.0\n"), 3),
        (format!("{header}3 2 0\n"), 2),
        ("%%MatrixMarket matrix array real general\n".to_string(), 1),
    ];
    for (text, line) in cases {
        fs::write(&path, text).unwrap();
        match io::read_instance(&path) {
            Err(FormatError::Parse { line: l, .. }) => assert_eq!(l, line),
            other => panic!("{other:?}"),
        }
    }
    fs::write(&path, format!("{header}3 3 2\n1 1 1.0\n")).unwrap();
    assert!(matches!(io::read_instance(&path), Err(FormatError::Invalid { .. })));
    fs::write(&path, format!("{header}2 2 2\n1 1 1.0\n1 1 2.0\n")).unwrap();
    assert!(io::read_instance(&path).unwrap_err().to_string().contains("duplicate"));
}

#[test]
fn meta_k_must_match() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("m.mtx");
    io::write_instance(&gen_random_dense(3, 0, 1.0), &path).unwrap();
    fs::write(io::meta_path(&path), r#"{"k": 4, "generator": "x", "seed": null}"#).unwrap();
    assert!(io::read_instance(&path).unwrap_err().to_string().contains("k = 4"));
}

#[test]
fn vector_round_trip() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("b.txt");
    let v = vec![0.1, -1e-300, 3.0e12, 1.0 / 3.0];
    io::write_vector(&v, &path).unwrap();
    assert_eq!(io::read_vector(&path).unwrap().to_vec(), v);
    fs::write(&path, "1.0\n\nnope\n").unwrap();
    assert!(matches!(io::read_vector(&path), Err(FormatError::Parse { line: 3, .. })));
}

fn small_dataset() -> (QuboInstance, qubo_core::data::Dataset) {
    let inst = gen_random_dense(10, 2, 0.2);
    let params = DataGenParams {
        sigma: 0.5,
        seed: 11,
        ..DataGenParams::default()
    };
    let ds = generate_dataset(&inst, "inst.mtx", 25, &params, 0.8).unwrap();
    (inst, ds)
}

#[test]
fn dataset_round_trip_and_errors() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("d.jsonl");
    let (_, ds) = small_dataset();
    io::write_dataset(&ds, &path).unwrap();
    assert_eq!(io::read_dataset(&path).unwrap(), ds);

    let text = fs::read_to_string(&path).unwrap();
    let mut bad_x: Vec<String> = text.lines().map(String::from).collect();
    let mut rec: serde_json::Value = serde_json::from_str(&bad_x[3]).unwrap();
    rec["x"][0] = 2.into();
    bad_x[3] = rec.to_string();
    fs::write(&path, bad_x.join("\n")).unwrap();
    match io::read_dataset(&path) {
        Err(FormatError::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }

    let mut short_b: Vec<String> = text.lines().map(String::from).collect();
    let mut rec: serde_json::Value = serde_json::from_str(&short_b[1]).unwrap();
    rec["b"].as_array_mut().unwrap().pop();
    short_b[1] = rec.to_string();
    fs::write(&path, short_b.join("\n")).unwrap();
    let err = io::read_dataset(&path).unwrap_err();
    assert!(matches!(err, FormatError::Parse { line: 2, .. }), "{err}");
    assert!(err.to_string().contains("k = 10"));

    fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert!(matches!(io::read_dataset(&path), Err(FormatError::Parse { .. })));
}

#[test]
fn dataset_bytes_are_deterministic() {
    let (_, a) = small_dataset();
    let (_, b) = small_dataset();
    let mut wa = Vec::new();
    let mut wb = Vec::new();
    io::write_dataset_to(&a, &mut wa).unwrap();
    io::write_dataset_to(&b, &mut wb).unwrap();
    assert_eq!(wa, wb);
}

#[test]
fn checkpoint_round_trip_is_bitwise() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("ck.json");
    let cfg = BpgnnConfig {
        d: 4,
        layers: 2,
        seed: 9,
        ..BpgnnConfig::default()
    };
    let model = BpgnnModel::new(cfg.clone()).unwrap();
    io::save_checkpoint(&model, &path).unwrap();
    let back = io::load_checkpoint(&path).unwrap();
    assert_eq!(back, model);
    let (inst, ds) = small_dataset();
    let b: &ObservedVector = &ds.pairs[0].b;
    let y0 = forward(&model, &inst, b).unwrap();
    let y1 = forward(&back, &inst, b).unwrap();
    assert!(y0.data().iter().zip(y1.data()).all(|(a, b)| a.to_bits() == b.to_bits()));

    let wide = BpgnnConfig { d: 8, ..cfg };
    let err = io::load_checkpoint_as(&path, wide).unwrap_err().to_string();
    assert!(err.contains("enc.w1"), "{err}");

    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, &text[..text.len() - 40]).unwrap();
    assert!(matches!(io::load_checkpoint(&path), Err(FormatError::Parse { .. })));
}

#[test]
fn solver_result_round_trip() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("r.json");
    let inst = QuboInstance::new(2, vec![(0, 1, 1.0)], InstanceMeta::default()).unwrap();
    let b = ObservedVector::new(vec![-1.0, 0.5]).unwrap();
    let res = tabu_solve(&inst, &b, &TabuParams::new(2)).unwrap();
    io::write_solver_result(&res, &path).unwrap();
    assert_eq!(io::read_solver_result(&path).unwrap(), res);
}
