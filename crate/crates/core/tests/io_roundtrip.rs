use chancal::channel::NoiseKind;
use chancal::io::{
    dataset_to_string, evaluate, load_config, parse_config, parse_dataset, run_pipeline,
    save_config, NoiseSpec,
};
use chancal::sim::{simulate_run, EmpiricalDataset, SettingRecord};
use chancal::Error;

const CONFIG: &str = r#"{
  "scenario": {"xi": 0.092, "tau_ch": 0.85},
  "noise": {"kind": "thermal", "mean": 1.78},
  "plan": {"eta_tot": 0.509, "settings": [0.2, 0.6, 1.0]},
  "shots_per_setting": 5000,
  "seed": 3
}"#;

#[test]
fn config_save_load_round_trip() {
    let cfg = parse_config(CONFIG).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    save_config(&cfg, &path).unwrap();
    assert_eq!(load_config(&path).unwrap(), cfg);
    let saved = std::fs::read_to_string(&path).unwrap();
    for key in ["\"lambda\"", "\"tau_range\"", "\"grad_tol\"", "\"cutoff\"", "\"dir\""] {
        assert!(saved.contains(key), "default {key} not recorded");
    }
}

#[test]
fn explicit_noise_config() {
    let text = CONFIG.replace(
        r#"{"kind": "thermal", "mean": 1.78}"#,
        r#"{"kind": "explicit", "probs": [0.5, 0.3, 0.2]}"#,
    );
    let cfg = parse_config(&text).unwrap();
    assert_eq!(cfg.reconstruction.cutoff, Some(2));
    assert!(matches!(cfg.noise, NoiseSpec::Explicit { .. }));
    let bad = text.replace("0.2]", "0.3]");
    let err = parse_config(&bad).unwrap_err().to_string();
    assert!(err.contains("noise.probs"), "{err}");
}

#[test]
fn thermal_cutoff_default() {
    let cfg = parse_config(CONFIG).unwrap();
    let m = chancal::channel::truncation_bound(NoiseKind::Thermal, 1.78, 1e-8).unwrap();
    assert_eq!(cfg.noise.cutoff(), Some(m));
}

#[test]
fn dataset_text_round_trip() {
    let cfg = parse_config(CONFIG).unwrap();
    let ds = simulate_run(&cfg.simulation().unwrap()).unwrap();
    let text = dataset_to_string(&ds).unwrap();
    assert!(text.contains("# rng: ChaCha8"));
    let back = parse_dataset(&text).unwrap();
    assert_eq!(back, ds);
    assert_eq!(dataset_to_string(&back).unwrap(), text);
}

#[test]
fn awkward_floats_survive() {
    let ds = EmpiricalDataset {
        records: vec![
            SettingRecord::new(0.1 + 0.2, vec![1, 2, 3], 6).unwrap(),
            SettingRecord::new(1e-7 / 3.0, vec![4], 4).unwrap(),
        ],
        provenance: vec![("note".into(), "hand made".into())],
    };
    let back = parse_dataset(&dataset_to_string(&ds).unwrap()).unwrap();
    assert_eq!(back, ds);
}

#[test]
fn dataset_rows_with_gaps_and_shuffled_columns() {
    let text = "k,shots,eta,counts,setting_index\n2,10,0.5,4,0\n0,10,0.5,6,0\n0,7,1,7,1\n";
    let ds = parse_dataset(text).unwrap();
    assert_eq!(ds.records[0].counts, vec![6, 0, 4]);
    assert_eq!(ds.records[1].eta, 1.0);
}

#[test]
fn dataset_settings_must_be_contiguous() {
    let text = "setting_index,eta,k,counts,shots\n0,0.5,0,1,1\n2,1,0,1,1\n";
    assert!(matches!(parse_dataset(text), Err(Error::Schema { .. })));
}

#[test]
fn report_body_is_reproducible() {
    let cfg = parse_config(CONFIG).unwrap();
    let a = run_pipeline(&cfg).unwrap();
    let b = run_pipeline(&cfg).unwrap();
    assert_eq!(a.comparable_bytes().unwrap(), b.comparable_bytes().unwrap());
    assert!(evaluate(&a).unwrap().is_empty());

    let json = serde_json::to_string(&a).unwrap();
    let back: chancal::io::RunReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
    assert!(!String::from_utf8(a.comparable_bytes().unwrap())
        .unwrap()
        .contains("wall_clock"));
}

#[test]
fn evaluate_detects_tampering() {
    let cfg = parse_config(CONFIG).unwrap();
    let mut r = run_pipeline(&cfg).unwrap();
    r.comparable_body.result.objective *= 1.0 + 1e-15;
    r.comparable_body.settings[1].p_expected[0] += 1e-16;
    let bad = evaluate(&r).unwrap();
    assert!(bad.contains(&"result.objective".to_string()), "{bad:?}");
    assert!(bad.contains(&"settings".to_string()), "{bad:?}");
}
