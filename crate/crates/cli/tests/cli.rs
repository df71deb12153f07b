use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bisim_cli::MdpDocument;
use bisim_core::{block_center, toy_mdp, toy_value_exact, FiniteMdp};
use proptest::prelude::*;
use tempfile::TempDir;

fn bisim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bisim"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, mdp: &FiniteMdp) -> PathBuf {
    let path = dir.path().join(name);
    MdpDocument::from_mdp(mdp).write(&path).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn absorbing_pair() -> FiniteMdp {
    FiniteMdp::with_default_labels(
        vec![vec![0.0], vec![1.0]],
        vec![vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]],
    )
    .unwrap()
}

fn table(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with("certified_error"))
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn csv(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", &absorbing_pair());
    assert_eq!(bisim(&["validate", s(&good)]).status.code(), Some(0));

    let short_row = dir.path().join("short.json");
    std::fs::write(
        &short_row,
        r#"{"format_version":1,"n_states":2,"actions":["go"],"rewards":[[0],[1]],
            "transitions":[[[0.5,0.4]],[[1.0,0.0]]]}"#,
    )
    .unwrap();
    let o = bisim(&["validate", s(&short_row)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("state 0, action 0"), "{}", stdout(&o));

    let malformed = dir.path().join("bad.json");
    std::fs::write(&malformed, "{ \"format_version\": 1, ").unwrap();
    assert_eq!(bisim(&["validate", s(&malformed)]).status.code(), Some(2));
    assert_eq!(
        bisim(&["validate", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(bisim(&["metric", s(&short_row)]).status.code(), Some(1));
}

#[test]
fn metric_tables() {
    let dir = TempDir::new().unwrap();
    let pair = write(&dir, "pair.json", &absorbing_pair());
    let o = bisim(&["metric", s(&pair), "-c", "0.5", "-e", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("certified_error ≤ "));
    let t = table(&text);
    assert!((t[0][1] - 2.0).abs() <= 1e-6 && (t[1][0] - 2.0).abs() <= 1e-6);

    let single = FiniteMdp::with_default_labels(vec![vec![3.0]], vec![vec![vec![1.0]]]).unwrap();
    let single = write(&dir, "single.json", &single);
    assert_eq!(
        table(&stdout(&bisim(&["metric", s(&single)]))),
        vec![vec![0.0]]
    );

    let toy = write(&dir, "toy.json", &toy_mdp(10).unwrap());
    let t = table(&stdout(&bisim(&[
        "metric",
        s(&toy),
        "-c",
        "0.5",
        "-e",
        "1e-6",
    ])));
    for (k, row) in t.iter().enumerate() {
        for (l, d) in row.iter().enumerate() {
            assert!((d - (k as f64 - l as f64).abs() / 5.0).abs() <= 1e-6);
        }
    }
}

#[test]
fn solve_values_and_policy() {
    let dir = TempDir::new().unwrap();
    let pair = write(&dir, "pair.json", &absorbing_pair());
    let rows = csv(&stdout(&bisim(&["solve", s(&pair), "-g", "0.5"])));
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(values[0].abs() < 1e-8 && (values[1] - 2.0).abs() < 1e-8);

    let n = 100;
    let toy = write(&dir, "toy.json", &toy_mdp(n).unwrap());
    let rows = csv(&stdout(&bisim(&["solve", s(&toy), "-g", "0.5"])));
    let bound = 1.0 / (n as f64 * 0.5);
    for x in [0.25, 0.75] {
        let k = (0..n)
            .min_by(|&a, &b| {
                (block_center(a, n) - x)
                    .abs()
                    .total_cmp(&(block_center(b, n) - x).abs())
            })
            .unwrap();
        let v: f64 = rows[k][1].parse().unwrap();
        assert!((v - toy_value_exact(block_center(k, n), 0.5).unwrap()).abs() <= bound);
    }
    let v75: f64 = rows[75][1].parse().unwrap();
    assert!((v75 - 1.5).abs() <= bound);
    assert_eq!(rows[10][2], "a");
    assert_eq!(rows[90][2], "b");
}

#[test]
fn aggregate_extremes_and_diameters() {
    let dir = TempDir::new().unwrap();
    let toy = write(&dir, "toy.json", &toy_mdp(100).unwrap());
    let quotient = dir.path().join("q.json");
    let o = bisim(&[
        "aggregate",
        s(&toy),
        "-c",
        "0.5",
        "-g",
        "0.5",
        "-t",
        "0.1",
        "-o",
        s(&quotient),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&stdout(&o));
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap() <= 0.1));
    let q = MdpDocument::read(&quotient).unwrap();
    assert_eq!(q.n_states, rows.len());

    let coarse = bisim(&[
        "aggregate",
        s(&toy),
        "-c",
        "0.5",
        "-g",
        "0.5",
        "-t",
        "10",
        "-o",
        s(&quotient),
    ]);
    assert_eq!(csv(&stdout(&coarse)).len(), 1);
    assert_eq!(MdpDocument::read(&quotient).unwrap().n_states, 1);

    let fine = bisim(&[
        "aggregate",
        s(&toy),
        "-c",
        "0.5",
        "-g",
        "0.5",
        "-t",
        "0.01",
        "-o",
        s(&quotient),
    ]);
    assert_eq!(csv(&stdout(&fine)).len(), 100);
    let q = MdpDocument::read(&quotient).unwrap().to_mdp().unwrap();
    assert_eq!(q, toy_mdp(100).unwrap());
}

#[test]
fn toy_csv() {
    let dir = TempDir::new().unwrap();
    let base = dir.path().join("toy.json");
    let o = bisim(&["toy", "1,4", "-g", "0.5", "-c", "0.5", "-o", s(&base)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next(),
        Some("n,max_metric_dev,max_value_dev,certified_bound")
    );
    let rows = csv(&text);
    assert_eq!(
        rows[0],
        vec!["1", "0.000000000", "0.000000001", "2.000000000"]
    );
    assert!(rows[1][1].parse::<f64>().unwrap() <= 1e-6);
    let four = MdpDocument::read(&dir.path().join("toy-n4.json")).unwrap();
    assert_eq!(four.to_mdp().unwrap(), toy_mdp(4).unwrap());
    assert!(dir.path().join("toy-n1.json").exists());

    let rows = csv(&stdout(&bisim(&[
        "toy",
        "10,100,1000",
        "-g",
        "0.5",
        "-c",
        "0.5",
    ])));
    let bounds: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    assert_eq!(bounds, ["0.200000000", "0.020000000", "0.002000000"]);
}

#[test]
fn perturbation_cases() {
    let dir = TempDir::new().unwrap();
    let base = toy_mdp(5).unwrap();
    let a = write(&dir, "a.json", &base);
    let lines = |o: Output| csv(&stdout(&o)).remove(0);

    assert_eq!(
        lines(bisim(&["perturb", s(&a), s(&a), "-c", "0.5"])),
        ["0.000000000", "0.000000000", "true"]
    );

    let mut shifted = base.clone();
    shifted.set_reward(2, 1, base.reward(2, 1) + 0.05);
    let b = write(&dir, "b.json", &shifted);
    let o = bisim(&["perturb", s(&a), s(&b), "-c", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let row = lines(o);
    assert_eq!(row[1], "0.200000000");
    assert_eq!(row[2], "true");

    let mut transitions = base.transitions();
    transitions[1][0] = vec![0.1, 0.3, 0.2, 0.2, 0.2];
    transitions[3][1] = vec![0.0, 0.0, 0.05, 0.95, 0.0];
    let mut rewards = base.rewards();
    rewards[4][0] += 0.01;
    let moved = FiniteMdp::new(base.actions().to_vec(), rewards, transitions).unwrap();
    let m = write(&dir, "m.json", &moved);
    let o = bisim(&["perturb", s(&a), s(&m), "-c", "0.7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(o)[2], "true");
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let toy = write(&dir, "toy.json", &toy_mdp(12).unwrap());
    for args in [
        vec!["metric", s(&toy), "-c", "0.6"],
        vec!["solve", s(&toy), "-g", "0.6"],
        vec!["aggregate", s(&toy), "-c", "0.6", "-g", "0.6", "-t", "0.3"],
        vec!["toy", "3,7"],
    ] {
        let first = bisim(&args);
        let second = bisim(&args);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

fn document() -> impl Strategy<Value = MdpDocument> {
    (1usize..5, 1usize..4).prop_flat_map(|(n, na)| {
        let rewards = prop::collection::vec(prop::collection::vec(-1e6f64..1e6, na), n);
        let weights = prop::collection::vec(
            prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), na),
            n,
        );
        let labelled = any::<bool>();
        (rewards, weights, labelled).prop_map(move |(rewards, weights, labelled)| {
            let transitions = weights
                .into_iter()
                .map(|rows| {
                    rows.into_iter()
                        .map(|w| {
                            let total: f64 = w.iter().sum();
                            if total > 0.0 {
                                w.iter().map(|x| x / total).collect()
                            } else {
                                let mut r = vec![0.0; n];
                                r[0] = 1.0;
                                r
                            }
                        })
                        .collect()
                })
                .collect();
            MdpDocument {
                format_version: 1,
                n_states: n,
                actions: (0..na).map(|a| format!("act{a}")).collect(),
                rewards,
                transitions,
                state_labels: labelled.then(|| (0..n).map(|s| format!("s{s}")).collect()),
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip(doc in document()) {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("doc.json");
        doc.write(&path).unwrap();
        let back = MdpDocument::read(&path).unwrap();
        prop_assert_eq!(&back.actions, &doc.actions);
        prop_assert_eq!(&back.state_labels, &doc.state_labels);
        let (m1, m2) = (doc.to_mdp().unwrap(), back.to_mdp().unwrap());
        for (x, y) in m1.rewards().concat().iter().zip(m2.rewards().concat()) {
            prop_assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
        }
        for (x, y) in m1.transitions().concat().concat().iter().zip(m2.transitions().concat().concat()) {
            prop_assert!((x - y).abs() <= 1e-15);
        }
    }
}
