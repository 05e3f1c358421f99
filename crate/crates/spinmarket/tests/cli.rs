use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spinmarket::output::{emit_plot_data, parse_intervals_csv};
use spinmarket::reanalyze::{reanalyze, ReanalyzeOptions};
use spinmarket_core::ModelParams;

fn spinmarket(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinmarket"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn small_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn simulate_writes_trajectory_network_and_intervals() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), r#"{"params":{"steps":300}}"#);
    let out = tmp.path().join("sim");
    let o = spinmarket(
        &[
            "simulate",
            "--model",
            "moore8-minus2",
            "--config",
            &cfg,
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let traj = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let mut lines = traj.lines();
    assert_eq!(lines.next(), Some("t,h,m"));
    assert_eq!(lines.count(), 300);
    assert!(!traj.contains('\r'));

    let net = fs::read_to_string(out.join("network.txt")).unwrap();
    assert_eq!(net.lines().count(), 16);
    for (i, line) in net.lines().enumerate() {
        let (head, rest) = line.split_once(':').unwrap();
        assert_eq!(head.parse::<usize>().unwrap(), i);
        let nbrs: Vec<usize> = rest
            .split_whitespace()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(nbrs.len(), 6);
        assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
    }

    let dump = fs::read_to_string(out.join("intervals.csv")).unwrap();
    assert!(parse_intervals_csv(&dump).is_ok());
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["model"], "moore8-minus2");
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = small_config(
        tmp.path(),
        r#"{"models":[{"topology":"ring2","depletion":1}]}"#,
    );
    let o = spinmarket(&["experiment", "--config", &bad], tmp.path());
    assert_eq!(o.status.code(), Some(2));

    let o = spinmarket(&["experiment", "--config", "missing.json"], tmp.path());
    assert_eq!(o.status.code(), Some(4));

    let o = spinmarket(&["simulate", "--model", "hex6"], tmp.path());
    assert_eq!(o.status.code(), Some(2));

    // output directory blocked by a regular file
    let blocker = tmp.path().join("blocked");
    fs::write(&blocker, "x").unwrap();
    let ok = small_config(
        tmp.path(),
        r#"{"models":[{"topology":"ring2"}],"replicates":1,"params":{"steps":50}}"#,
    );
    let o = spinmarket(
        &[
            "experiment",
            "--config",
            &ok,
            "--out",
            blocker.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(4));

    // intervals longer than the run
    let dump = tmp.path().join("iv.csv");
    fs::write(
        &dump,
        "replicate,model,start,duration,censored\n0,ring2,0,900,false\n",
    )
    .unwrap();
    let cfg = small_config(tmp.path(), r#"{"params":{"steps":100}}"#);
    let o = spinmarket(
        &[
            "stats",
            "--intervals",
            dump.to_str().unwrap(),
            "--config",
            &cfg,
            "--out",
            "st",
        ],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn experiment_then_stats_reproduces_ratios() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(
        tmp.path(),
        r#"{"models":[{"topology":"ring2"},{"topology":"moore8"},{"topology":"moore8","depletion":3}],
            "replicates":4,"params":{"steps":2000},"seed":5}"#,
    );
    let o = spinmarket(
        &["experiment", "--config", &cfg, "--out", "exp"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let exp = tmp.path().join("exp");

    let survival: Vec<_> = fs::read_dir(&exp)
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.starts_with("survival_").then_some(name)
        })
        .collect();
    assert_eq!(survival.len(), 3);
    for f in [
        "ratios.csv",
        "rates.csv",
        "powerlaw.csv",
        "intervals.csv",
        "report.json",
    ] {
        assert!(exp.join(f).is_file(), "{f}");
    }
    let ratios = fs::read_to_string(exp.join("ratios.csv")).unwrap();
    assert_eq!(ratios.lines().next(), Some("model,degree,replicate,ratio"));
    assert_eq!(ratios.lines().count(), 1 + 12);
    assert!(ratios.lines().skip(1).all(|l| l.split(',').count() == 4));
    assert!(ratios.contains("moore8-minus3,5,"));

    let o = spinmarket(
        &[
            "stats",
            "--intervals",
            "exp/intervals.csv",
            "--config",
            &cfg,
            "--replicates",
            "4",
            "--out",
            "re",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let again = fs::read_to_string(tmp.path().join("re/ratios.csv")).unwrap();
    assert_eq!(again, ratios);
    let rates = fs::read_to_string(exp.join("rates.csv")).unwrap();
    assert_eq!(
        fs::read_to_string(tmp.path().join("re/rates.csv")).unwrap(),
        rates
    );
}

#[test]
fn empty_duration_sample_gives_header_only_survival() {
    let rows = parse_intervals_csv(
        "replicate,model,start,duration,censored\n0,vn4,4,5,true\n0,ring2,0,1,false\n0,ring2,2,1,false\n",
    )
    .unwrap();
    let opts = ReanalyzeOptions {
        params: ModelParams {
            steps: 10,
            ..ModelParams::default()
        },
        replicates: Some(1),
        min_count: 5,
        seed: 0,
    };
    let report = reanalyze(&rows, &opts).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    emit_plot_data(&report, tmp.path()).unwrap();
    assert_eq!(
        fs::read_to_string(tmp.path().join("survival_vn4.csv")).unwrap(),
        "t,log_survival\n"
    );
    let doc = report.to_json();
    assert_eq!(doc["models"][0]["pooled_fit"]["error"], "insufficient-data");

    let first: Vec<_> = [
        "survival_vn4.csv",
        "ratios.csv",
        "intervals.csv",
        "powerlaw.csv",
    ]
    .iter()
    .map(|f| fs::read(tmp.path().join(f)).unwrap())
    .collect();
    emit_plot_data(&report, tmp.path()).unwrap();
    let second: Vec<_> = [
        "survival_vn4.csv",
        "ratios.csv",
        "intervals.csv",
        "powerlaw.csv",
    ]
    .iter()
    .map(|f| fs::read(tmp.path().join(f)).unwrap())
    .collect();
    assert_eq!(first, second);
}
