use std::path::Path;
use std::process::{Command, Output};

fn eif(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eif"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn eif")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = eif(dir, args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn synth_train_score_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--kind", "blob", "--n", "2000", "--dim", "2", "--seed", "7", "--out", "blob.csv"]);
    assert_eq!(lines(&d.join("blob.csv")).len(), 2001);
    ok(d, &["train", "--data", "blob.csv", "--trees", "100", "--psi", "256", "--extension", "full", "--seed", "7", "--out", "model.json"]);
    ok(d, &["score", "--model", "model.json", "--data", "blob.csv", "--out", "scores.csv"]);
    let rows = lines(&d.join("scores.csv"));
    assert_eq!(rows[0], "index,score");
    assert_eq!(rows.len(), 2001);
    for (i, row) in rows[1..].iter().enumerate() {
        let (idx, score) = row.split_once(',').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), i);
        let s: f64 = score.parse().unwrap();
        assert!(s > 0.0 && s < 1.0);
    }
}

#[test]
fn every_synth_kind_writes_the_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: [&[&str]; 7] = [
        &["--kind", "blob", "--n", "30", "--dim", "3"],
        &["--kind", "double_blob", "--n", "15"],
        &["--kind", "sinusoid", "--n", "30"],
        &["--kind", "uniform_box", "--n", "30", "--lo", "0,0", "--hi", "1,2"],
        &["--kind", "sphere", "--n", "30", "--radius", "2", "--dim", "4"],
        &["--kind", "line", "--n", "30", "--offset", "1.5"],
        &["--kind", "ring", "--n", "30"],
    ];
    for case in cases {
        let mut args = vec!["synth"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["--out", "out.csv"]);
        ok(d, &args);
        assert_eq!(lines(&d.join("out.csv")).len(), 31, "{case:?}");
    }
}

#[test]
fn bench_matches_pairwise_and_step_sum_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // 14 points near the origin, 6 labelled anomalies further out, one of
    // them placed inside the cloud so the ranking is imperfect
    let mut csv = String::from("a,b,label\n");
    let pts = [
        (0.1, 0.2, 0), (-0.3, 0.1, 0), (0.2, -0.4, 0), (0.5, 0.5, 0), (-0.6, -0.2, 0), (0.0, 0.7, 0), (0.3, 0.0, 0),
        (-0.1, -0.5, 0), (0.6, -0.1, 0), (-0.4, 0.4, 0), (0.2, 0.3, 0), (-0.2, -0.1, 0), (0.1, -0.2, 0), (-0.5, 0.6, 0),
        (4.0, 4.0, 1), (-3.5, 2.0, 1), (3.0, -4.5, 1), (-4.0, -4.0, 1), (0.05, 0.1, 1), (6.0, 0.5, 1),
    ];
    for (a, b, l) in pts {
        csv.push_str(&format!("{a},{b},{l}\n"));
    }
    std::fs::write(d.join("labeled.csv"), csv).unwrap();
    ok(d, &["train", "--data", "labeled.csv", "--label-column", "label", "--trees", "50", "--psi", "16", "--seed", "3", "--out", "m.json"]);
    ok(d, &["score", "--model", "m.json", "--data", "labeled.csv", "--label-column", "label", "--out", "s.csv"]);
    let scores: Vec<f64> = lines(&d.join("s.csv"))[1..]
        .iter()
        .map(|r| r.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    let labels: Vec<u8> = pts.iter().map(|p| p.2).collect();

    let mut concordant = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            if labels[i] == 1 && labels[j] == 0 {
                concordant += if scores[i] > scores[j] { 1.0 } else if scores[i] == scores[j] { 0.5 } else { 0.0 };
            }
        }
    }
    let roc = concordant / (6.0 * 14.0);
    let mut thresholds = scores.clone();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let (mut prc, mut prev) = (0.0, 0);
    for th in thresholds {
        let tp = (0..20).filter(|&k| scores[k] >= th && labels[k] == 1).count();
        let k = scores.iter().filter(|&&s| s >= th).count();
        prc += tp as f64 / k as f64 * (tp - prev) as f64 / 6.0;
        prev = tp;
    }

    let stdout = ok(d, &["bench", "--model", "m.json", "--data", "labeled.csv", "--label-column", "label"]);
    let fields: Vec<(&str, f64)> = stdout
        .split_whitespace()
        .map(|f| {
            let (k, v) = f.split_once('=').unwrap();
            (k, v.parse().unwrap())
        })
        .collect();
    assert_eq!(fields[0].0, "auroc");
    assert_eq!(fields[1].0, "auprc");
    // bench prints 9 significant digits; scores read back from CSV are rounded the same way
    assert!((fields[0].1 - roc).abs() < 1e-8, "{} vs {roc}", fields[0].1);
    assert!((fields[1].1 - prc).abs() < 1e-8, "{} vs {prc}", fields[1].1);
    assert!(roc < 1.0);
}

#[test]
fn usage_errors_exit_one_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--kind", "blob", "--n", "50", "--dim", "3", "--out", "b3.csv"]);
    let cases: [&[&str]; 7] = [
        &["frobnicate"],
        &["train", "--data", "b3.csv", "--bogus", "--out", "x.json"],
        &["train", "--data", "b3.csv", "--variant", "rotated", "--out", "x.json"],
        &["train", "--data", "b3.csv", "--extension", "3", "--out", "x.json"],
        &["train", "--data", "b3.csv", "--trees", "0", "--out", "x.json"],
        &["levelset", "--model", "x.json", "--out", "x.json"],
        &["synth", "--kind", "blob", "--n", "10", "--sigma", "-1", "--out", "x.json"],
    ];
    for args in cases {
        let out = eif(d, args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
        assert!(!d.join("x.json").exists(), "{args:?} left a file behind");
    }
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("ragged.csv"), "x,y\n1,2\n3\n").unwrap();
    std::fs::write(d.join("bad.json"), "{\"format\":\"eif-model\",\"version\":99}").unwrap();
    ok(d, &["synth", "--kind", "blob", "--n", "50", "--dim", "3", "--out", "b3.csv"]);
    let cases: [&[&str]; 4] = [
        &["train", "--data", "missing.csv", "--out", "x.json"],
        &["train", "--data", "ragged.csv", "--out", "x.json"],
        &["score", "--model", "bad.json", "--data", "b3.csv", "--out", "x.csv"],
        &["bench", "--model", "bad.json", "--data", "b3.csv", "--label-column", "label"],
    ];
    for args in cases {
        let out = eif(d, args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let err = String::from_utf8(eif(d, &["train", "--data", "ragged.csv", "--out", "x.json"]).stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn help_and_version() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["--version"]);
    assert!(out.starts_with("eif "), "{out}");
    for sub in ["synth", "train", "score", "scoremap", "levelset", "converge", "bench"] {
        let help = ok(dir.path(), &[sub, "--help"]);
        assert!(help.contains("--"), "{sub}");
    }
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--kind", "sinusoid", "--n", "1000", "--seed", "4", "--out", "s.csv"]);
    for threads in ["1", "0", "3"] {
        ok(d, &["--threads", threads, "train", "--data", "s.csv", "--trees", "80", "--seed", "4", "--out", &format!("m{threads}.json")]);
        ok(d, &["score", "--threads", threads, "--model", &format!("m{threads}.json"), "--data", "s.csv", "--out", &format!("s{threads}.csv")]);
    }
    let read = |f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read("m1.json"), read("m0.json"));
    assert_eq!(read("m1.json"), read("m3.json"));
    assert_eq!(read("s1.csv"), read("s0.csv"));
    assert_eq!(read("s1.csv"), read("s3.csv"));
}

#[test]
fn extension_zero_and_full_agree_in_one_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--kind", "blob", "--n", "300", "--dim", "1", "--out", "one.csv"]);
    ok(d, &["train", "--data", "one.csv", "--extension", "0", "--out", "zero.json"]);
    ok(d, &["train", "--data", "one.csv", "--extension", "full", "--out", "full.json"]);
    assert_eq!(std::fs::read(d.join("zero.json")).unwrap(), std::fs::read(d.join("full.json")).unwrap());
}

#[test]
fn rotated_models_feed_scoremap_and_levelset() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--kind", "double_blob", "--n", "300", "--out", "db.csv"]);
    ok(d, &["train", "--data", "db.csv", "--variant", "rotated", "--trees", "30", "--out", "rot.json"]);
    ok(d, &["scoremap", "--model", "rot.json", "--xmin", "-5", "--xmax", "15", "--ymin", "-5", "--ymax", "15", "--nx", "7", "--ny", "5", "--out", "grid.csv"]);
    let grid = lines(&d.join("grid.csv"));
    assert_eq!(grid[0], "x,y,score");
    assert_eq!(grid.len(), 36);
    ok(d, &["levelset", "--model", "rot.json", "--offsets", "-2,0,2", "--n-probe", "40", "--out", "lv.csv"]);
    let lv = lines(&d.join("lv.csv"));
    assert_eq!(lv[0], "level,mean,variance,n_probe");
    assert_eq!(lv.len(), 4);
    assert!(lv[1].starts_with("-2,") && lv[1].ends_with(",40"), "{}", lv[1]);
}
