use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tchlab(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tchlab"))
        .args(args)
        .arg("--out-dir")
        .arg(out_dir)
        .env_remove("TCHLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn summary(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn resonance_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = tchlab(&["resonance", "--n-max", "10", "--top", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n1 n2 residual\n4 6 0.014718625761430763\n");
    let one = tchlab(&["resonance", "--n-max", "1"], dir.path());
    assert!(stdout(&one).lines().nth(1).unwrap().starts_with("1 1 1.08578"));
    let empty = tchlab(&["resonance", "--top", "0"], dir.path());
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).lines().count(), 1);
    let s = summary(&dir.path().join("resonance_summary.json"));
    assert_eq!(s["parameters"]["top"], 0);
    assert_eq!(tchlab(&["resonance", "--n-max", "0"], dir.path()).status.code(), Some(2));
}

#[test]
fn flag_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["gate", "--bogus"],
        vec!["gate", "--alpha-grid", "0:2"],
        vec!["gate", "--alpha-grid", "2:0:0.1"],
        vec!["gate", "--input", "ab"],
        vec!["gate", "--pair", "4:6", "--sigma", "300"],
        vec!["walk", "--n", "1"],
        vec!["walk", "--mass", "-1"],
        vec!["dark", "--atoms", "3"],
        vec!["dark", "--trials", "0"],
        vec!["dark", "--epsilon", "2"],
        vec!["dark", "--state", "triplet", "--atoms", "4"],
        vec!["frobnicate"],
    ] {
        let o = tchlab(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn thread_count_comes_from_flag_or_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_tchlab"));
        c.args(["resonance", "--top", "1"]).args(extra).arg("--out-dir").arg(dir.path());
        match env {
            Some(v) => c.env("TCHLAB_THREADS", v),
            None => c.env_remove("TCHLAB_THREADS"),
        };
        c.output().unwrap().status.code()
    };
    assert_eq!(run(Some("0"), &[]), Some(2));
    assert_eq!(run(Some("2"), &[]), Some(0));
    assert_eq!(run(Some("0"), &["--threads", "1"]), Some(0));
    assert_eq!(run(None, &["--threads", "x"]), Some(2));
}

#[test]
fn minimal_walk() {
    let dir = tempfile::tempdir().unwrap();
    let o = tchlab(&["walk", "--n", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for f in ["walk_amplitude.csv", "kernel.csv", "network.csv", "walk_summary.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn walk_grids_have_stated_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let o = tchlab(&["walk", "--n", "32", "--mass", "1", "--t-max", "10", "--steps", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let lines = |f: &str| fs::read_to_string(dir.path().join(f)).unwrap().lines().map(String::from).collect::<Vec<_>>();
    let amp = lines("walk_amplitude.csv");
    assert_eq!(amp[0], "cavity,time,re,im");
    assert_eq!(amp.len(), 1 + 32 * 21);
    let kernel = lines("kernel.csv");
    assert_eq!(kernel[0], "x,time,re,im");
    assert_eq!(kernel.len(), 1 + 32 * 20);
    let net = lines("network.csv");
    assert_eq!(net[0], "q,p,r,phi");
    assert_eq!(net.len(), 1 + 32 * 31 / 2);
    for field in amp[1].split(',') {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{field}");
        assert_eq!(field.parse::<f64>().unwrap().to_string().parse::<f64>().unwrap(), field.parse::<f64>().unwrap());
    }
    let s = summary(&dir.path().join("walk_summary.json"));
    assert!(s["summary"]["momentum_conservation"].as_f64().unwrap() < 1e-10);
    assert_eq!(s["parameters"]["n"], 32);
    assert_eq!(s["parameters"]["t_max"], 10.0);
}

#[test]
fn dark_selection_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["dark", "--atoms", "2", "--state", "singlet", "--kappa", "0.0001", "--trials", "10000", "--seed", "7"];
    let o = tchlab(&args, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&dir.path().join("classify.json"));
    assert_eq!(s["summary"]["decision"], "dark");
    assert_eq!(s["summary"]["n_trials"], 10000);
    assert_eq!(s["summary"]["seed"], 7);
    assert!(s["summary"]["z_score"].as_f64().unwrap() > 3.0);
    assert_eq!(s["parameters"]["kappa"], 0.0001);
    let header = fs::read_to_string(dir.path().join("emission_density.csv")).unwrap();
    assert!(header.starts_with("t,p_dark,p_light,p_state,"));

    let light = tchlab(&["dark", "--state", "ground", "--seed", "7"], dir.path());
    assert_eq!(light.status.code(), Some(0));
    assert_eq!(summary(&dir.path().join("classify.json"))["summary"]["decision"], "light");
}

#[test]
fn dark_runs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["dark", "--atoms", "2", "--g", "1", "--trials", "2000", "--seed", "3", "--grid-points", "801"];
    assert_eq!(tchlab(&args, a.path()).status.code(), Some(0));
    let mut with_threads = args.to_vec();
    with_threads.extend(["--threads", "1"]);
    assert_eq!(tchlab(&with_threads, b.path()).status.code(), Some(0));
    for f in ["emission_density.csv", "classify.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let c = tempfile::tempdir().unwrap();
    let mut reseeded = args.to_vec();
    reseeded[8] = "4";
    tchlab(&reseeded, c.path());
    assert_ne!(fs::read(a.path().join("classify.json")).unwrap(), fs::read(c.path().join("classify.json")).unwrap());
}

#[test]
fn empty_cavity_cannot_tell_dark_from_light() {
    let dir = tempfile::tempdir().unwrap();
    let o = tchlab(&["dark", "--atoms", "0", "--g", "1", "--kappa", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let rows: Vec<Vec<f64>> = fs::read_to_string(dir.path().join("emission_density.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    for r in rows {
        let expected = 0.5 * (-0.5 * r[0]).exp();
        assert!((r[1] - expected).abs() < 1e-3 * 0.5);
        assert_eq!(r[1], r[2]);
    }
    let s = summary(&dir.path().join("classify.json"));
    assert_eq!(s["summary"]["decision"], Value::Null);
    assert_eq!(s["summary"]["distinguishable"], false);
}

#[test]
fn gate_branch_phase_for_basis_input() {
    let dir = tempfile::tempdir().unwrap();
    let o = tchlab(&["gate", "--input", "01", "--pair", "4:6", "--alpha", "1.2533141373155001"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&dir.path().join("gate_summary.json"));
    let re = s["summary"]["branch_phase"]["re"].as_f64().unwrap();
    assert!((re + 1.0).abs() < 0.01, "{re}");
    assert!(s["summary"]["best"]["d_mod"].as_f64().unwrap() < 0.01);
    assert_eq!(s["parameters"]["input"], "01");
}

#[test]
fn gate_sweep_over_alpha_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = tchlab(&["gate", "--n-max", "10", "--alpha-grid", "1.15:1.35:0.1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("gate_sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,sigma,n1,n2,d_tr,d_mod"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[2] == 4.0 && r[3] == 6.0 && r[1] == 0.5));
    let s = summary(&dir.path().join("gate_summary.json"));
    assert_eq!(s["summary"]["resonance"]["n1"], 4);
    assert_eq!(s["summary"]["points"], 3);
    assert_eq!(s["parameters"]["g"], 0.001);
}
