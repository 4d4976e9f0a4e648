//! End-to-end tests driving the compiled binary: exit codes, report
//! shapes, and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minigen_core::construct::LConditionData;
use minigen_core::{MealyAutomorphism, Permutation, PermutationGroup, Portrait};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minigen"))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn ps_check_positive_and_negative() {
    let dir = tempfile::tempdir().unwrap();
    let s5 = write_json(dir.path(), "s5.json", &PermutationGroup::symmetric(5));
    let s4 = write_json(dir.path(), "s4.json", &PermutationGroup::symmetric(4));

    let out = run(&["ps-check", s5.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["x1"], serde_json::json!([0, 1]));
    assert_eq!(report["x2"], serde_json::json!([2, 3, 4]));

    let out = run(&["ps-check", s4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["satisfied"], serde_json::json!(false));
    assert!(report["reason"]
        .as_str()
        .unwrap()
        .contains("no disjoint subsets of required sizes"));
}

#[test]
fn ps_check_resource_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let s13 = write_json(dir.path(), "s13.json", &PermutationGroup::symmetric(13));
    let out = run(&["ps-check", s13.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let s5 = write_json(dir.path(), "s5.json", &PermutationGroup::symmetric(5));
    let out = run(&["ps-check", s5.to_str().unwrap(), "--cap", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_input_exits_64() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"degree\": 3, \"generators\": [[0, 0, 1]]}").unwrap();
    let out = run(&["ps-check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));

    let missing = dir.path().join("missing.json");
    let out = run(&["ps-check", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));

    let out = run(&["ps-check"]);
    assert_eq!(out.status.code(), Some(64));

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn lemma_replay_runs_all_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let c2 = PermutationGroup::cyclic(2);
    let data = LConditionData {
        a_group: PermutationGroup::symmetric(5),
        h_group: c2.clone(),
        h0_generators: vec![],
        k: 2,
        f: vec![c2.generators()[0].clone()],
        i2: vec![0],
        phi: vec![Permutation::identity(2)],
    };
    let instance = write_json(dir.path(), "instance.json", &data);
    for lemma in ["t", "u", "comm", "closure", "minimal"] {
        let out = run(&[
            "lemma-replay",
            instance.to_str().unwrap(),
            "--lemma",
            lemma,
            "--trials",
            "20",
            "--seed",
            "5",
            "--cap",
            "10000",
        ]);
        assert_eq!(out.status.code(), Some(0), "lemma {lemma}");
        let report = stdout_json(&out);
        assert_eq!(report["lemmas"][0]["all_passed"], serde_json::json!(true));
    }

    let out = run(&[
        "lemma-replay",
        instance.to_str().unwrap(),
        "--lemma",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn lemma_replay_on_non_ps_group_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let c2 = PermutationGroup::cyclic(2);
    let data = LConditionData {
        a_group: PermutationGroup::symmetric(4),
        h_group: c2.clone(),
        h0_generators: vec![],
        k: 2,
        f: vec![c2.generators()[0].clone()],
        i2: vec![0],
        phi: vec![Permutation::identity(2)],
    };
    let instance = write_json(dir.path(), "bad.json", &data);
    let out = run(&["lemma-replay", instance.to_str().unwrap(), "--lemma", "t"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lemma_replay_power_branch() {
    let dir = tempfile::tempdir().unwrap();
    let h = PermutationGroup::new(
        6,
        vec![
            Permutation::from_cycles(6, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(6, &[&[2, 3, 4, 5]]).unwrap(),
        ],
    )
    .unwrap();
    let s = Permutation::from_cycles(6, &[&[0, 1]]).unwrap();
    let r = Permutation::from_cycles(6, &[&[2, 3, 4, 5]]).unwrap();
    let r2 = r.compose(&r).unwrap();
    let sr2 = s.compose(&r2).unwrap();
    let data = LConditionData {
        a_group: PermutationGroup::symmetric(5),
        h_group: h,
        h0_generators: vec![r2.clone()],
        k: 2,
        f: vec![r, s, sr2],
        i2: vec![1, 2],
        phi: vec![Permutation::identity(6), r2],
    };
    let instance = write_json(dir.path(), "power.json", &data);
    let out = run(&[
        "lemma-replay",
        instance.to_str().unwrap(),
        "--lemma",
        "power",
        "--trials",
        "50",
        "--seed",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let report = stdout_json(&out);
    assert_eq!(report["validation"]["branch"], serde_json::json!("B"));
    assert_eq!(
        report["lemmas"][0]["instances_checked"],
        serde_json::json!(50)
    );
}

#[test]
fn lemma_replay_assertion_failures_exit_2() {
    // phi is not surjective onto H0 = A_3, so most commutator inputs are
    // not expressible as g * phi(i): the replay fails and exits 2
    let dir = tempfile::tempdir().unwrap();
    let s3 = PermutationGroup::symmetric(3);
    let data = LConditionData {
        a_group: PermutationGroup::symmetric(5),
        h_group: s3,
        h0_generators: vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
        k: 2,
        f: vec![Permutation::from_cycles(3, &[&[0, 1]]).unwrap()],
        i2: vec![0],
        phi: vec![Permutation::identity(3)],
    };
    let instance = write_json(dir.path(), "partial.json", &data);
    let out = run(&[
        "lemma-replay",
        instance.to_str().unwrap(),
        "--lemma",
        "comm",
        "--trials",
        "50",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert_eq!(report["lemmas"][0]["all_passed"], serde_json::json!(false));
    assert!(report["lemmas"][0]["first_failure"]
        .as_str()
        .unwrap()
        .contains("not expressible"));
    assert_eq!(
        report["validation"]["essential_passed"],
        serde_json::json!(false)
    );
}

#[test]
fn theta_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let machine = write_json(dir.path(), "odometer.json", &MealyAutomorphism::odometer());
    let out = run(&["theta", machine.to_str().unwrap(), "-N", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["counts"], serde_json::json!([1, 1, 1, 1, 1, 1, 1]));

    let out = run(&["classify", machine.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["classification"], serde_json::json!("Bounded"));
}

#[test]
fn parity_flags_non_squares() {
    let dir = tempfile::tempdir().unwrap();
    let obstructed = write_json(
        dir.path(),
        "spine.json",
        &MealyAutomorphism::spine_swap(1).to_portrait(6).unwrap(),
    );
    let out = run(&["parity", obstructed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(
        report["obstruction"],
        serde_json::json!({ "NotASquare": 2 })
    );

    let square = {
        let g = Portrait::random(vec![2; 6], 3).unwrap();
        g.product(&g).unwrap()
    };
    let square = write_json(dir.path(), "square.json", &square);
    let out = run(&["parity", square.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["obstruction"], serde_json::json!("Inconclusive"));
}

#[test]
fn decompose_emits_both_parts() {
    let dir = tempfile::tempdir().unwrap();
    let portrait = Portrait::random(vec![2; 4], 11).unwrap();
    let path = write_json(dir.path(), "portrait.json", &portrait);
    let out = run(&["decompose", path.to_str().unwrap(), "-k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let top: Portrait = serde_json::from_value(report["top"].clone()).unwrap();
    let rest: Portrait = serde_json::from_value(report["rest"].clone()).unwrap();
    assert_eq!(top.product(&rest).unwrap(), portrait);
}

#[test]
fn compose_writes_the_product_machine() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", &MealyAutomorphism::odometer());
    let out_path = dir.path().join("product.json");
    let out = run(&[
        "compose",
        a.to_str().unwrap(),
        a.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written: MealyAutomorphism =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let expected = MealyAutomorphism::odometer()
        .product(&MealyAutomorphism::odometer())
        .unwrap();
    assert_eq!(written, expected);
}

#[test]
fn suite_passes_and_is_deterministic() {
    let first = run(&["suite", "--seed", "7"]);
    assert_eq!(first.status.code(), Some(0));
    let report = stdout_json(&first);
    assert_eq!(report["all_passed"], serde_json::json!(true));
    assert_eq!(report["criteria"].as_array().unwrap().len(), 9);

    let second = run(&["suite", "--seed", "7"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn text_format_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let s5 = write_json(dir.path(), "s5.json", &PermutationGroup::symmetric(5));
    let out = run(&["--format", "text", "ps-check", s5.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PS satisfied"));
}
