use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SWEEP_HEADER: &str = "eta,beta,r0,rho,n,k,trials,p_fc,p_fc_lo,p_fc_hi,p_md,p_md_lo,p_md_hi,p_fc_edge,p_fc_edge_lo,p_fc_edge_hi,delta,mean_degree,mean_degree_se,isolated_pair_freq";

fn geonet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geonet"))
        .args(args)
        .env_remove("GEONET_PARALLELISM")
        .output()
        .expect("failed to start geonet")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn simulate(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["simulate", "--config", s(config), "--out", s(out)];
    args.extend_from_slice(extra);
    geonet(&args)
}

#[test]
fn minimal_sweep_has_header_and_one_row() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"domain": {"dimension": 2, "side": 5}, "eta": [2], "density_grid": [2], "k_max": 1, "trials": 100}"#,
    );
    let out = dir.path().join("out");
    assert_exit(&simulate(&cfg, &out, &["--parallelism", "2"]), 0);
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], SWEEP_HEADER);
    assert!(!csv.contains('\r'));
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 20);
    assert_eq!(&fields[..7], &["2", "1", "1", "2", "50", "1", "100"]);
    for name in ["sweep.json", "simulate-manifest.json"] {
        assert!(out.join(name).exists(), "{name}");
    }
}

#[test]
fn grid_row_count_and_disk_fields() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2, "inf"], "beta": 1,
            "density_grid": {"start": 1, "stop": 8, "step": 0.25}, "k_max": 4, "trials": 2,
            "observables": ["mean_degree"]}"#,
    );
    let out = dir.path().join("out");
    assert_exit(&simulate(&cfg, &out, &[]), 0);
    let mut r = csv::Reader::from_path(out.join("sweep.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2 * 29 * 4);
    for k in 1..=4 {
        assert_eq!(
            rows.iter()
                .filter(|row| &row[5] == k.to_string().as_str())
                .count(),
            2 * 29
        );
    }
    let disk: Vec<_> = rows.iter().filter(|row| &row[0] == "inf").collect();
    assert_eq!(disk.len(), 29 * 4);
    assert!(disk.iter().all(|row| row[1].is_empty() && &row[2] == "1"));
    assert!(rows
        .iter()
        .all(|row| row[7].is_empty() && !row[17].is_empty()));
    assert!(rows.iter().any(|row| &row[3] == "1.75"));
}

#[test]
fn reruns_and_thread_counts_give_identical_results() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"domain": {"dimension": 2, "side": 6}, "eta": [3, "inf"], "density_grid": [1, 3], "k_max": 2,
            "trials": 150, "master_seed": 11}"#,
    );
    let runs: Vec<PathBuf> = ["1", "1", "4"]
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let out = dir.path().join(format!("run{i}"));
            assert_exit(&simulate(&cfg, &out, &["--parallelism", p]), 0);
            out
        })
        .collect();
    for file in ["sweep.csv", "sweep.json"] {
        let first = fs::read(runs[0].join(file)).unwrap();
        for r in &runs[1..] {
            assert_eq!(first, fs::read(r.join(file)).unwrap(), "{file}");
        }
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(runs[0].join("simulate-manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cells"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
    assert!(manifest["started"].is_string() && manifest["rng"].is_string());
    let digest = manifest["outputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}

#[test]
fn overrides_and_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"domain": {"dimension": 2, "side": 5}, "eta": [2], "density_grid": [2], "k_max": 1, "trials": 100}"#,
    );
    let a = dir.path().join("a");
    assert_exit(&simulate(&cfg, &a, &["--trials", "120", "--seed", "5"]), 0);
    let csv = fs::read_to_string(a.join("sweep.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",120,"));

    let b = dir.path().join("b");
    let out = Command::new(env!("CARGO_BIN_EXE_geonet"))
        .args([
            "simulate",
            "--config",
            s(&cfg),
            "--out",
            s(&b),
            "--trials",
            "120",
            "--seed",
            "5",
        ])
        .env("GEONET_PARALLELISM", "3")
        .output()
        .unwrap();
    assert_exit(&out, 0);
    assert_eq!(csv, fs::read_to_string(b.join("sweep.csv")).unwrap());

    let c = dir.path().join("c");
    assert_exit(&simulate(&cfg, &c, &["--trials", "120", "--seed", "6"]), 0);
    assert_ne!(csv, fs::read_to_string(c.join("sweep.csv")).unwrap());
}

#[test]
fn configuration_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let cases = [
        (
            r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [1],"#,
            "line",
        ),
        (
            r#"{"domain": {"dimension": 4, "side": 10}, "eta": [2], "density_grid": [1]}"#,
            "dimension",
        ),
        (
            r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [1], "trails": 3}"#,
            "trails",
        ),
        (
            r#"{"domain": {"dimension": 2, "side": 10}, "eta": [-1], "density_grid": [1]}"#,
            "eta",
        ),
        (
            r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [0.001]}"#,
            "density_grid",
        ),
        (
            r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [1], "k_max": 0}"#,
            "k_max",
        ),
        (
            r#"{"domain": {"dimension": 2, "side": 10}, "density_grid": [1]}"#,
            "model_grid",
        ),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("c{i}.json"), text);
        let o = simulate(&cfg, &out, &["--trials", "1"]);
        assert_exit(&o, 2);
        assert!(stderr(&o).contains(needle), "case {i}: {}", stderr(&o));
    }
    assert_exit(&simulate(&dir.path().join("missing.json"), &out, &[]), 2);
}

#[test]
fn oversized_cells_exit_3() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [50000], "trials": 1}"#,
    );
    let o = simulate(&cfg, &dir.path().join("out"), &[]);
    assert_exit(&o, 3);
    assert!(stderr(&o).contains("limit"));
}

fn analytic(dir: &Path, text: &str) -> (Output, PathBuf) {
    let cfg = write(dir, "a.json", text);
    let out = dir.join("analytic");
    (
        geonet(&["analytic", "--config", s(&cfg), "--out", s(&out)]),
        out,
    )
}

fn read_values(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn analytic_mean_degree_minimum() {
    let dir = TempDir::new().unwrap();
    let etas: Vec<String> = (0..=1850)
        .map(|i| format!("{}", 1.5 + i as f64 * 0.01))
        .collect();
    let text = format!(
        r#"{{"formula": "mean_degree", "domain": {{"dimension": 2, "side": 10}}, "eta": [{}], "beta": 1,
            "density_grid": [1], "density_convention": "nominal"}}"#,
        etas.join(",")
    );
    let (o, out) = analytic(dir.path(), &text);
    assert_exit(&o, 0);
    let rows = read_values(&out.join("analytic.csv"));
    assert_eq!(rows.len(), etas.len());
    let (eta, mu) = rows
        .iter()
        .map(|r| (r[3].parse::<f64>().unwrap(), r[10].parse::<f64>().unwrap()))
        .fold((0.0, f64::INFINITY), |b, p| if p.1 < b.1 { p } else { b });
    assert!((eta - 4.33).abs() < 0.05, "{eta}");
    // Gamma(1 + d/eta) at its minimum, times pi
    assert!((mu - std::f64::consts::PI * 0.885_603_194_410_888_7).abs() < 1e-4);
    // the crossover with the disk at eta = d
    let at2 = rows.iter().find(|r| &r[3] == "2").unwrap()[10]
        .parse::<f64>()
        .unwrap();
    assert!((at2 - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn analytic_pi1_curves_decrease() {
    let dir = TempDir::new().unwrap();
    let (o, out) = analytic(
        dir.path(),
        r#"{"formula": ["pi1"], "domain": {"dimension": 2, "side": 10}, "eta": [2, 4, 6, "inf"],
            "density_grid": {"start": 1, "stop": 8, "step": 0.5}}"#,
    );
    assert_exit(&o, 0);
    let rows = read_values(&out.join("analytic.csv"));
    assert_eq!(rows.len(), 4 * 15);
    for eta in ["2", "4", "6", "inf"] {
        let v: Vec<f64> = rows
            .iter()
            .filter(|r| &r[3] == eta)
            .map(|r| r[10].parse().unwrap())
            .collect();
        assert_eq!(v.len(), 15);
        assert!(v.windows(2).all(|w| w[1] < w[0]), "eta = {eta}: {v:?}");
    }
    // rho_eff = (N - 1) / V
    assert_eq!(&rows[0][7], "0.99");
}

#[test]
fn analytic_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        r#"{"formula": "pi2", "domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [1]}"#,
        r#"{"formula": "pi1", "domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": []}"#,
        r#"{"formula": [], "domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [1]}"#,
        r#"{"formula": "pi1", "domain": {"dimension": 3, "side": 10}, "eta": [2], "density_grid": [1]}"#,
        r#"{"formula": "p_md", "domain": {"dimension": 2, "side": 10}, "eta": [2], "density_grid": [1], "k": [0]}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        let (o, _) = analytic(dir.path(), text);
        assert_exit(&o, 2);
        if i == 0 {
            assert!(stderr(&o).contains("pi2"));
        }
    }
}

#[test]
fn self_compare_is_exact() {
    let dir = TempDir::new().unwrap();
    let (o, out) = analytic(
        dir.path(),
        r#"{"formula": ["pi1", "mean_degree", "p_md"], "domain": {"dimension": 2, "side": 10}, "eta": [2, "inf"],
            "density_grid": [2, 4], "k": [1, 2]}"#,
    );
    assert_exit(&o, 0);
    let table = out.join("analytic.csv");
    let cmp = dir.path().join("cmp");
    let o = geonet(&[
        "compare",
        "--sim",
        s(&table),
        "--analytic",
        s(&table),
        "--out",
        s(&cmp),
    ]);
    assert_exit(&o, 0);
    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(cmp.join("compare-summary.json")).unwrap()).unwrap();
    assert_eq!(summary["overall"]["points"], 2 * 2 * 4);
    assert_eq!(summary["overall"]["fraction"], 1.0);
    assert_eq!(summary["overall"]["max_abs_residual"], 0.0);
    assert!(cmp.join("compare-manifest.json").exists());
}

#[test]
fn compare_against_sweep_and_mismatch() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"domain": {"dimension": 2, "side": 10}, "eta": ["inf"], "density_grid": [6, 7], "k_max": 1,
            "trials": 200, "master_seed": 2}"#,
    );
    let sim = dir.path().join("sim");
    assert_exit(&simulate(&cfg, &sim, &[]), 0);
    let (o, out) = analytic(
        dir.path(),
        r#"{"formula": ["pi1", "p_md", "isolated_node"], "domain": {"dimension": 2, "side": 10}, "eta": ["inf"],
            "density_grid": [6, 7]}"#,
    );
    assert_exit(&o, 0);
    let cmp = dir.path().join("cmp");
    let sweep = sim.join("sweep.csv");
    let table = out.join("analytic.csv");
    let o = geonet(&[
        "compare",
        "--sim",
        s(&sweep),
        "--analytic",
        s(&table),
        "--out",
        s(&cmp),
    ]);
    assert_exit(&o, 0);
    let rows = read_values(&cmp.join("compare.csv"));
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let (sim, lo, hi) = (
            r[5].parse::<f64>().unwrap(),
            r[7].parse::<f64>().unwrap(),
            r[8].parse::<f64>().unwrap(),
        );
        assert!(lo <= sim && sim <= hi);
    }

    let (o, out) = analytic(
        dir.path(),
        r#"{"formula": "pi1", "domain": {"dimension": 2, "side": 10}, "eta": [2, "inf"], "density_grid": [6, 8]}"#,
    );
    assert_exit(&o, 0);
    let table = out.join("analytic.csv");
    let o = geonet(&[
        "compare",
        "--sim",
        s(&sweep),
        "--analytic",
        s(&table),
        "--out",
        s(&cmp),
    ]);
    assert_exit(&o, 2);
    let err = stderr(&o);
    assert!(err.contains("3 analytic grid point"), "{err}");
    assert!(
        err.contains("(eta=2, beta=1, rho=6, k=1)")
            && err.contains("(eta=inf, beta=-, rho=8, k=1)"),
        "{err}"
    );
}

fn render(dir: &Path, name: &str, text: &str) -> (Output, PathBuf) {
    let cfg = write(dir, &format!("{name}.json"), text);
    let out = dir.join(name);
    (
        geonet(&[
            "render-sample",
            "--config",
            s(&cfg),
            "--out",
            s(&out),
            "--seed",
            "17",
        ]),
        out,
    )
}

#[test]
fn render_sample_exports_components() {
    let dir = TempDir::new().unwrap();
    let (o, soft) = render(
        dir.path(),
        "soft",
        r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2], "beta": 1, "nodes": 150}"#,
    );
    assert_exit(&o, 0);
    let (o, disk) = render(
        dir.path(),
        "disk",
        r#"{"domain": {"dimension": 2, "side": 10}, "eta": ["inf"], "nodes": 150}"#,
    );
    assert_exit(&o, 0);

    let soft_rows = read_values(&soft.join("positions.csv"));
    let disk_rows = read_values(&disk.join("positions.csv"));
    assert_eq!(soft_rows.len(), 150);
    for (a, b) in soft_rows.iter().zip(&disk_rows) {
        assert_eq!((&a[0], &a[1], &a[2]), (&b[0], &b[1], &b[2]));
    }
    let labels: Vec<usize> = soft_rows.iter().map(|r| r[3].parse().unwrap()).collect();
    let count = labels.iter().max().unwrap() + 1;
    assert!((0..count).all(|c| labels.contains(&c)));

    // components of the edge list agree with the labels
    let edges = fs::read_to_string(soft.join("edges.txt")).unwrap();
    for line in edges.lines() {
        let mut it = line.split(' ').map(|x| x.parse::<usize>().unwrap());
        let (u, v) = (it.next().unwrap(), it.next().unwrap());
        assert!(u < v && labels[u] == labels[v]);
    }
}

#[test]
fn render_single_node_and_multi_cell() {
    let dir = TempDir::new().unwrap();
    let (o, out) = render(
        dir.path(),
        "one",
        r#"{"domain": {"dimension": 3, "side": 4}, "eta": [2], "nodes": 1}"#,
    );
    assert_exit(&o, 0);
    let positions = fs::read_to_string(out.join("positions.csv")).unwrap();
    let lines: Vec<&str> = positions.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "id,x,y,z,component");
    assert!(lines[1].starts_with("0,") && lines[1].ends_with(",0"));
    assert_eq!(fs::read_to_string(out.join("edges.txt")).unwrap(), "");

    let (o, _) = render(
        dir.path(),
        "many",
        r#"{"domain": {"dimension": 2, "side": 10}, "eta": [2, 4], "density_grid": [1]}"#,
    );
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("single cell"));
}
