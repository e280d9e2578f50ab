use std::path::Path;
use std::process::{Command, Output};

use degcorr::degree_sequences::sample_iid_degrees;
use degcorr::graphs::pair_stubs;
use degcorr::measures::mixing_curves;
use degcorr::seeding::stream;
use degcorr::{FloorParetoLaw, MeasureKind, MultiGraph};
use tempfile::TempDir;

fn degcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degcorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Parses `k,value,present` rows.
fn read_curve(text: &str) -> Vec<(u64, f64, bool)> {
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn limits_table_rows() {
    let o = degcorr(&["limits", "--gamma", "2.5,2.2,2.0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("2.5, 2.894745, 0.706480"), "{out}");
    assert!(out.contains("2.2, 6.502744, 0.658515"), "{out}");
    assert!(out.contains("2, -, 0.625324"), "{out}");
}

#[test]
fn limits_reports_unreachable_precision_at_gamma_one_and_a_half() {
    let o = degcorr(&["limits", "--gamma", "1.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("1.5, -, 0.5455±"), "{}", stdout(&o));
}

#[test]
fn limits_rejects_gamma_one() {
    let o = degcorr(&["limits", "--gamma", "1.0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gamma"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(degcorr(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(degcorr(&["ensemble", "--n", "ten"]).status.code(), Some(1));
    assert_eq!(degcorr(&["generate", "--seed", "1"]).status.code(), Some(1));
    assert_eq!(degcorr(&["--help"]).status.code(), Some(0));
}

#[test]
fn generate_from_degree_file() {
    let dir = TempDir::new().unwrap();
    let seq = dir.path().join("seq.txt");
    std::fs::write(&seq, "# n=3\n1\n2\n1\n").unwrap();
    let out = dir.path().join("g.txt");
    let o = degcorr(&[
        "generate",
        "--degrees-file",
        path_str(&seq),
        "--seed",
        "11",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let edges: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(edges.len(), 2, "{text}");
    assert!(text.starts_with("# n=3 L=4 seed=11"));
    let meta = std::fs::read_to_string(dir.path().join("g.txt.meta.json")).unwrap();
    assert!(meta.contains("\"seed\": 11"));
}

#[test]
fn generate_rejects_odd_degree_file() {
    let dir = TempDir::new().unwrap();
    let seq = dir.path().join("odd.txt");
    std::fs::write(&seq, "1\n2\n").unwrap();
    let o = degcorr(&["generate", "--degrees-file", path_str(&seq), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("odd"));
}

#[test]
fn generate_is_deterministic_and_draws_a_seed_when_absent() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = degcorr(&[
            "generate", "--n", "500", "--gamma", "2.2", "--model", "ecm", "--seed", "42", "--out",
            path_str(out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let o = degcorr(&["generate", "--n", "20", "--gamma", "2.5"]);
    assert!(o.status.success());
    let err = stderr(&o);
    let seed: u64 = err
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .expect("drawn seed is printed")
        .parse()
        .unwrap();
    assert!(stdout(&o).starts_with(&format!("# n=20 L=")));
    assert!(stdout(&o).lines().next().unwrap().ends_with(&format!("seed={seed}")));
}

#[test]
fn repeated_model_exhaustion_is_a_runtime_failure() {
    let dir = TempDir::new().unwrap();
    let seq = dir.path().join("loop.txt");
    // A single node of degree 2 can only pair with itself.
    std::fs::write(&seq, "2\n").unwrap();
    let o = degcorr(&[
        "generate", "--degrees-file", path_str(&seq), "--model", "rcm", "--max-attempts", "3",
        "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn measure_path_and_regular_graphs() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("path.txt");
    std::fs::write(&path, "0 1\n1 2\n").unwrap();
    let o = degcorr(&["measure", path_str(&path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_curve(&stdout(&o)), vec![(1, 2.0, true), (2, 1.0, true)]);

    let cycle = dir.path().join("cycle.txt");
    std::fs::write(&cycle, "0 1\n1 2\n2 3\n3 0\n").unwrap();
    let o = degcorr(&["measure", path_str(&cycle), "--measure", "annr"]);
    assert_eq!(read_curve(&stdout(&o)), vec![(1, 0.0, false), (2, 1.0, true)]);
}

#[test]
fn measure_reports_malformed_lines_and_missing_files() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "# n=3\n0 1\n1 two\n").unwrap();
    let o = degcorr(&["measure", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = degcorr(&["measure", path_str(&dir.path().join("missing.txt"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_edge_list_remeasures_to_the_in_memory_curves() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.txt");
    let (n, gamma, seed) = (3000usize, 1.8, 77u64);
    let o = degcorr(&[
        "generate",
        "--n",
        &n.to_string(),
        "--gamma",
        &gamma.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        path_str(&graph),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));

    let mut rng = stream(seed);
    let seq = sample_iid_degrees(n, &FloorParetoLaw::new(gamma).unwrap(), &mut rng).unwrap();
    let matching = pair_stubs(&seq, &mut rng).unwrap();
    let in_memory = mixing_curves(&matching);
    let as_multigraph = mixing_curves(&MultiGraph::from_matching(&matching));
    assert_eq!(in_memory, as_multigraph);

    for kind in [MeasureKind::Annd, MeasureKind::Annr] {
        let o = degcorr(&["measure", path_str(&graph), "--measure", &kind.to_string()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let rows = read_curve(&stdout(&o));
        let curve = in_memory.get(kind);
        assert_eq!(rows.len() as u64, curve.max_degree());
        for (k, value, present) in rows {
            assert_eq!(curve.get(k), (value, present), "{kind} k={k}");
        }
    }
}

#[test]
fn ensemble_rejects_repeated_model_below_gamma_two() {
    let o = degcorr(&[
        "ensemble", "--gamma", "1.5", "--model", "rcm", "--n", "100", "--replicas", "2", "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gamma > 2"), "{}", stderr(&o));
}

#[test]
fn ensemble_smoke_run_is_fast() {
    let start = std::time::Instant::now();
    let o = degcorr(&["ensemble", "--n", "10000", "--replicas", "1", "--seed", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(start.elapsed().as_secs_f64() < 10.0);
    let out = stdout(&o);
    assert!(out.starts_with(
        "k,measure,zero_filled_mean,corrected_mean,presence_count,presence_fraction\n1,annd,"
    ));
}

#[test]
fn ensemble_output_is_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("e{threads}.json"));
        let o = degcorr(&[
            "ensemble", "--gamma", "2.2", "--n", "2000", "--replicas", "12", "--model", "ecm",
            "--seed", "9", "--threads", threads, "--format", "json", "--out", path_str(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        outputs.push(v["result"].clone());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_file_with_flag_overrides_and_echo_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "gamma = 2.5\nn = 1500\nreplicas = 4\nmodel = \"ecm\"\nseed = 3\nmeasures = [\"annr\"]\n",
    )
    .unwrap();
    let first = dir.path().join("first.csv");
    let o = degcorr(&[
        "ensemble", "--config", path_str(&cfg), "--replicas", "6", "--out", path_str(&first),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("first.csv.meta.json")).unwrap(),
    )
    .unwrap();
    let config = &meta["config"];
    assert_eq!(config["replicas"], 6);
    assert_eq!(config["n"], 1500);
    assert_eq!(config["model"], "ecm");

    // Feed the echoed config back in as the only input.
    let echoed = dir.path().join("echo.toml");
    std::fs::write(&echoed, toml::to_string(config).unwrap()).unwrap();
    let second = dir.path().join("second.csv");
    let o = degcorr(&["ensemble", "--config", path_str(&echoed), "--out", path_str(&second)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let a = std::fs::read_to_string(&first).unwrap();
    assert_eq!(a, std::fs::read_to_string(&second).unwrap());
    assert!(a.lines().skip(1).all(|l| l.split(',').nth(1) == Some("annr")));
}

#[test]
fn config_file_unknown_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "gama = 2.5\n").unwrap();
    let o = degcorr(&["gap", "--config", path_str(&cfg), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gama"));
}

#[test]
fn experiment_subcommands_write_their_tables() {
    let o = degcorr(&["presence", "--n", "1000,4000", "--a", "0.2", "--replicas", "10", "--seed", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().nth(1).unwrap().starts_with("1000,0.2,4,"));

    let o = degcorr(&["clt", "--n", "2000", "--replicas", "30", "--seed", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 31);
    assert!(stderr(&o).contains("theoretical_index=0.75"));

    let o = degcorr(&["clt", "--gamma", "2.5", "--n", "2000", "--replicas", "3", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(1));

    let o = degcorr(&[
        "gap", "--n", "2000", "--replicas", "5", "--seed", "4", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metadata"]["config"]["seed"], 4);
    assert_eq!(v["result"]["annd_gaps"].as_array().unwrap().len(), 5);
}
