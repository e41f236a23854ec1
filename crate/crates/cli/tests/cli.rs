//! End-to-end runs of the `srint` binary: exit codes, report schema and
//! output files.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn srint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srint"))
        .args(args)
        .env_remove("SRINT_ALLOW_LONG")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    srint(args).status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const REPORT_KEYS: [&str; 17] = [
    "system",
    "D",
    "degree",
    "prolongations",
    "num_equations",
    "num_unknowns",
    "v_spfl",
    "v_mon",
    "v_bimon",
    "v_red",
    "rank_red",
    "delta",
    "lambda0",
    "modulus",
    "verdict",
    "elapsed_s",
    "tool_version",
];

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "ell6"]), 0);
    assert_eq!(code(&["verify", "dim8_23568"]), 0);
    assert_eq!(code(&["verify", "nosuch"]), 3);
    assert_eq!(code(&["verify", "gen6"]), 4);
    assert_eq!(code(&["verify", "gen6", "--params", "a=1,b=2"]), 0);
}

#[test]
fn verify_algebra_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("heis.txt");
    fs::write(
        &good,
        "# Heisenberg\ndim 3\ngrading 2 1\nbracket 1 2 3 1\nomega 1 = p1 + x2 p3\nomega 2 = p2\n",
    )
    .unwrap();
    let out = dir.path().join("v.json");
    assert_eq!(
        code(&[
            "verify",
            good.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(json(&out)["outputs"]["passed"], true);
    // not nilpotent-graded: the bracket lands in the first layer
    let bad = dir.path().join("bad.txt");
    fs::write(
        &bad,
        "dim 3\ngrading 2 1\nbracket 1 2 1 1\nomega 1 = p1\nomega 2 = p2\n",
    )
    .unwrap();
    assert_ne!(code(&["verify", bad.to_str().unwrap()]), 0);
}

#[test]
fn obstruct_par6_degree_six() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = [
        "obstruct",
        "par6",
        "-d",
        "6",
        "--exact",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 4, "long runs are gated");
    let o = Command::new(env!("CARGO_BIN_EXE_srint"))
        .args(args)
        .env("SRINT_ALLOW_LONG", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = REPORT_KEYS.to_vec();
    want.sort_unstable();
    let mut got = keys.clone();
    got.sort_unstable();
    assert_eq!(got, want);
    assert_eq!(v["delta"], 130);
    assert_eq!(v["lambda0"], 130);
    assert_eq!(v["verdict"], "NoFinalIntegral(6)");
    assert_eq!(v["num_equations"], 28512);
    assert_eq!(v["num_unknowns"], 20790);
}

#[test]
fn obstruct_dim7_mod_101() {
    let o = srint(&[
        "obstruct",
        "dim7",
        "-d",
        "6",
        "--mod",
        "101",
        "--allow-long",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("delta=296"), "{}", stdout(&o));
}

#[test]
fn obstruct_verdicts_and_preconditions() {
    assert_eq!(code(&["obstruct", "ell6", "-d", "2", "--exact"]), 1);
    assert_eq!(code(&["obstruct", "par6", "-d", "3", "--auto-primes"]), 0);
    assert_eq!(code(&["obstruct", "engel", "-d", "2"]), 4);
    assert_eq!(code(&["obstruct", "par6", "-d", "2", "--mod", "100"]), 4);
    assert_eq!(code(&["obstruct", "nosuch", "-d", "2"]), 3);
    assert_eq!(
        code(&["obstruct", "par6", "-d", "2", "--mod", "101", "--exact"]),
        4
    );
}

#[test]
fn obstruct_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        assert_eq!(
            code(&[
                "obstruct",
                "par6",
                "-d",
                "3",
                "--mod",
                "101",
                "--out",
                p.to_str().unwrap()
            ]),
            0
        );
        let mut v = json(&p);
        v.as_object_mut().unwrap().remove("elapsed_s");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn reduce_examples() {
    let o = srint(&["reduce", "par6", "--c", "c5=-1/10,c6=20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("kind Q1; a=10; b=-1/10;"),
        "{}",
        stdout(&o)
    );
    assert!(stdout(&srint(&["reduce", "heis3", "--c", "c3=1"])).starts_with("kind constant"));
    let o = srint(&["reduce", "par6", "--c", "c5=0,c6=2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("kind degenerate"));
    assert_eq!(code(&["reduce", "engel"]), 4);
    assert_eq!(code(&["reduce", "par6", "--c", "c9=1"]), 4);
}

#[test]
fn section_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let svg = dir.path().join("s.svg");
    let args = [
        "section",
        "--Q",
        "Q1:10,-0.1",
        "--ic",
        "0,0,0",
        "--surface",
        "z=0:+",
        "--count",
        "500",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 500);
    assert!(rows.iter().all(|r| 10.0 * r[0] * r[0] - 0.1 * r[1] > 0.0));
    assert_eq!(
        fs::read_to_string(&svg).unwrap().matches("<circle").count(),
        500
    );
    let meta = json(&dir.path().join("s.json"));
    assert_eq!(meta["outputs"]["counts"][0], 500);
    assert_eq!(meta["exit_status"], 0);

    let xcsv = dir.path().join("x.csv");
    let xargs = [
        "section",
        "--Q",
        "Q1:10,0.1",
        "--ic",
        "0,-20,0",
        "--ic",
        "0,-25,0",
        "--surface",
        "x=0:+",
        "--count",
        "50",
        "--out",
        xcsv.to_str().unwrap(),
    ];
    assert_eq!(code(&xargs), 0);
    for i in 0..2 {
        let t = fs::read_to_string(dir.path().join(format!("x_{i}.csv"))).unwrap();
        assert!(t.starts_with("z,y\n"));
        assert_eq!(t.lines().count(), 51);
    }
}

#[test]
fn integrate_outputs_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let args = [
        "integrate",
        "--Q",
        "Q1:10,1",
        "--ic",
        "0,0,0",
        "--tmax",
        "20",
        "--window",
        "0:1",
        "--out",
        csv.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,x,y,z\n"));
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 20.0);
    let win = fs::read_to_string(dir.path().join("t.window.csv")).unwrap();
    assert!(win
        .lines()
        .skip(1)
        .all(|l| l.split(',').next().unwrap().parse::<f64>().unwrap() <= 1.0));

    let fail = [
        "integrate",
        "--Q",
        "Q1:10,1",
        "--ic",
        "0,0,0",
        "--tmax",
        "20",
        "--max-steps",
        "10",
        "--out",
        csv.to_str().unwrap(),
    ];
    assert_eq!(code(&fail), 5);
    assert_eq!(json(&dir.path().join("t.json"))["exit_status"], 5);
    assert!(
        fs::read_to_string(&csv).unwrap().lines().count() > 1,
        "partial output is kept"
    );

    assert_eq!(
        code(&["integrate", "--Q", "Q2:1,2", "--ic", "0,0,0", "--tmax", "1"]),
        4
    );
    assert_eq!(
        code(&["integrate", "--Q", "Q1:1,2", "--ic", "0,0", "--tmax", "1"]),
        4
    );
    assert_eq!(
        code(&[
            "section",
            "--Q",
            "Q1:1,2",
            "--ic",
            "0,0,0",
            "--surface",
            "w=0:+",
            "--count",
            "1"
        ]),
        4
    );
    assert_eq!(code(&["frobnicate"]), 4);
}

#[test]
fn quick_figure_datasets() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["1", "4", "5"] {
        assert_eq!(
            code(&[
                "figure",
                n,
                "--out-dir",
                dir.path().to_str().unwrap(),
                "--quick"
            ]),
            0
        );
    }
    let f4 = json(&dir.path().join("fig4.json"));
    assert_eq!(f4["entries"][0]["points"].as_array().unwrap().len(), 7);
    assert!(dir.path().join("fig1_left.window.csv").exists());
    assert!(dir.path().join("fig5_y.csv").exists());
}
