//! Acceptance suite for the command line layer: instance round trips,
//! canonical report determinism, and exit codes.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use opframe::harness::{random_frame, random_frame_sharing_measure, run_campaign, CampaignConfig};
use opframe::perturbation::TheoremId;
use opframe::{KOperator, Tolerance};

use opframe_cli::instance::{emit_instance, parse_instance, Instance};
use opframe_cli::report::campaign_json;

fn corpus_instance(i: usize) -> Instance {
    let d = 1 + i % 3;
    let n = 1 + (i / 3) % 3;
    let m = 1 + i % 4;
    let seed = 1000 + i as u64;
    let frame = random_frame(seed, d, n, m, 1.0 + (i % 7) as f64).unwrap();

    let k = i.is_multiple_of(2).then(|| {
        let donor = random_frame(seed ^ 0xabcd, d, n, 1, 2.0).unwrap();
        KOperator::new(donor.operators()[0].clone())
    });

    let mut families = BTreeMap::new();
    if i % 3 != 2 {
        families.insert(
            "r".to_string(),
            random_frame_sharing_measure(seed ^ 0x1111, &frame, 3.0).unwrap(),
        );
    }
    if i % 4 == 3 {
        families.insert(
            "t2".to_string(),
            random_frame_sharing_measure(seed ^ 0x2222, &frame, 2.0).unwrap(),
        );
    }

    Instance { frame, k, families }
}

#[test]
fn criterion_8_round_trip_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..20 {
        let original = corpus_instance(i);
        let text = emit_instance(&original);
        let path = dir.path().join(format!("instance_{i:02}.json"));
        std::fs::write(&path, &text).unwrap();

        let loaded = std::fs::read_to_string(&path).unwrap();
        let first = parse_instance(&loaded).unwrap();
        assert_eq!(first, original, "file {i}: parse(emit(x)) == x");

        let re_emitted = emit_instance(&first);
        assert_eq!(re_emitted, text, "file {i}: canonical emission is stable");
        let second = parse_instance(&re_emitted).unwrap();
        assert_eq!(second, first, "file {i}: parse(emit(parse(x))) == parse(x)");
    }
    println!("criterion 8 PASS: 20-file corpus round trips");
}

#[test]
fn criterion_8_campaign_determinism() {
    let cfg = CampaignConfig {
        seed: 99,
        trials: 3,
        dims: vec![(1, 2, 2), (2, 1, 3)],
        theorems: TheoremId::ALL.to_vec(),
        tolerance: Tolerance::default(),
    };
    let a = campaign_json(&cfg, &run_campaign(&cfg).unwrap());
    let b = campaign_json(&cfg, &run_campaign(&cfg).unwrap());
    assert_eq!(
        a.as_bytes(),
        b.as_bytes(),
        "canonical campaign json must be byte-identical"
    );
    println!("criterion 8 PASS: identical campaign reports for identical seeds");
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opframe"))
}

fn write_instance(dir: &tempfile::TempDir, name: &str, inst: &Instance) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, emit_instance(inst)).unwrap();
    path
}

#[test]
fn criterion_8_binary_determinism_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // Two identical campaign invocations give byte-identical json.
    let run_campaign_cmd = || {
        bin()
            .args([
                "campaign",
                "--seed",
                "7",
                "--trials",
                "2",
                "--dims",
                "1x2x2,2x1x2",
                "--format",
                "json",
            ])
            .output()
            .unwrap()
    };
    let first = run_campaign_cmd();
    let second = run_campaign_cmd();
    assert!(
        first.status.success(),
        "campaign failed: {}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(first.stdout, second.stdout);

    // Exit 0: a certificate that encloses.
    let good = corpus_instance(0); // has family "r" and a K operator
    let good_path = write_instance(&dir, "good.json", &good);
    let status = bin()
        .args(["certify", "min-condition", good_path.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // Exit 2: hypothesis unsatisfied (Bessel bound not below the frame bound).
    let mut self_pert = corpus_instance(0);
    self_pert
        .families
        .insert("r".to_string(), self_pert.frame.clone());
    let bad_hyp_path = write_instance(&dir, "self.json", &self_pert);
    let status = bin()
        .args(["certify", "bessel-sum", bad_hyp_path.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // Exit 1: malformed file.
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ this is not json").unwrap();
    let status = bin()
        .args(["analyze", broken.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    // Exit 1: usage error.
    let status = bin()
        .args(["certify", "no-such-theorem", good_path.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    // Oracle agrees with the pencil on a well-posed instance, exit 0.
    let status = bin()
        .args(["oracle", good_path.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    println!("criterion 8 PASS: binary determinism and exit codes");
}
