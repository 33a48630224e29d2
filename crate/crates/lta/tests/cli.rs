use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lta::format::{read_directions, read_q_history, read_solution_csv};
use lta_core::directions::gen_unv;
use rand::SeedableRng;

fn lta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lta")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = lta(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_dirs_examples() {
    let dir = tempfile::tempdir().unwrap();
    let das = dir.path().join("das.json");
    ok(&["gen-dirs", "--method", "das", "--m", "3", "--H", "12", "--out", p(&das)]);
    assert_eq!(read_directions(&das).unwrap().len(), 91);

    let unv = dir.path().join("unv.json");
    ok(&["gen-dirs", "--method", "unv", "--m", "5", "--n", "105", "--seed", "1", "--out", p(&unv)]);
    let set = read_directions(&unv).unwrap();
    assert_eq!(set.len(), 105);
    assert_eq!(set.provenance().seed, Some(1));

    let mss = dir.path().join("mss.json");
    ok(&["gen-dirs", "--method", "mss-u", "--m", "3", "--n", "10", "--pool", "1000", "--seed", "2", "--out", p(&mss)]);
    let set = read_directions(&mss).unwrap();
    assert_eq!(&set.as_flat()[..9], &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);

    let seeded = dir.path().join("jas.json");
    ok(&["gen-dirs", "--method", "jas", "--m", "3", "--n", "4", "--out", p(&seeded)]);
    assert!(read_directions(&seeded).unwrap().provenance().seed.is_some());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(lta(&["gen-dirs", "--method", "spiral", "--m", "3", "--n", "5", "--out", p(&out)]).status.code(), Some(2));
    assert_eq!(lta(&["gen-dirs", "--method", "das", "--m", "3", "--out", p(&out)]).status.code(), Some(2));
    assert_eq!(lta(&["gen-dirs", "--method", "das", "--m", "3", "--H", "0", "--out", p(&out)]).status.code(), Some(2));
    assert_eq!(lta(&["gen-dirs", "--method", "unv", "--m", "3", "--n", "0", "--out", p(&out)]).status.code(), Some(2));
    assert_eq!(lta(&["--threads", "0", "hv", "--set", "a.csv", "--ref", "1,1"]).status.code(), Some(2));
}

#[test]
fn corpus_files_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        ok(&["gen-corpus", "--m", "3", "--L", "4", "--N", "10", "--seed", "9", "--out", p(out)]);
    }
    let mut names: Vec<String> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.iter().filter(|n| n.ends_with(".hvc.csv")).count(), 4);
    assert_eq!(names.iter().filter(|n| n.starts_with("set_") && !n.ends_with(".hvc.csv")).count(), 4);
    assert_eq!(names.iter().filter(|n| *n == "manifest.json").count(), 1);
    for name in names {
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name}");
    }
}

#[test]
fn training_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    ok(&["gen-corpus", "--m", "3", "--L", "4", "--N", "12", "--seed", "3", "--out", p(&corpus)]);

    let zero = dir.path().join("zero");
    ok(&["train", "--corpus", p(&corpus), "--n", "6", "--max-iterations", "0", "--seed", "5", "--out", p(&zero)]);
    let learned = read_directions(&zero.join("directions.json")).unwrap();
    let unv = gen_unv(3, 6, &mut rand_chacha::ChaCha8Rng::seed_from_u64(5)).unwrap();
    assert_eq!(learned.as_flat(), unv.as_flat());
    assert_eq!(read_q_history(&zero.join("q_history.csv")).unwrap().len(), 1);

    let run = dir.path().join("run");
    ok(&["train", "--corpus", p(&corpus), "--n", "6", "--max-iterations", "40", "--seed", "5", "--out", p(&run)]);
    let text = fs::read_to_string(run.join("q_history.csv")).unwrap();
    assert!(text.starts_with("iteration,Q\n"));
    let history = read_q_history(&run.join("q_history.csv")).unwrap();
    assert_eq!(history.len(), 41);
    assert!(history.windows(2).all(|w| w[1].1 >= w[0].1));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(run.join("directions.json")).unwrap()).unwrap();
    assert_eq!(json["generator"], "lta");
    assert_eq!(json["params"]["maxIteration"], 40);
    assert_eq!(json["seed"], 5);
    assert!(json["tool_version"].is_string());
}

#[test]
fn corrupt_cache_is_a_validation_error_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    ok(&["gen-corpus", "--m", "2", "--L", "2", "--N", "8", "--seed", "1", "--out", p(&corpus)]);
    let hvc = corpus.join("set_0001.hvc.csv");
    let text = fs::read_to_string(&hvc).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[1] = "0.5".into();
    fs::write(&hvc, lines.join("\n") + "\n").unwrap();
    let out = lta(&["train", "--corpus", p(&corpus), "--n", "4", "--max-iterations", "3", "--seed", "1", "--out", p(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("set_0001.hvc.csv"));
}

#[test]
fn hv_and_hvc_print_values() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.csv");
    fs::write(&set, "f1,f2\n0.5,0.5\n").unwrap();
    let out = ok(&["hv", "--set", p(&set), "--ref", "1,1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.25\n");

    let three = dir.path().join("three.csv");
    fs::write(&three, "f1,f2\n0.25,0.75\n0.5,0.5\n0.75,0.25\n").unwrap();
    let out = ok(&["hvc", "--set", p(&three), "--ref", "1,1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "hvc\n0.0625\n0.0625\n0.0625\n");

    assert_eq!(lta(&["hv", "--set", p(&set), "--ref", "1,1,1"]).status.code(), Some(3));
    assert_eq!(lta(&["hv", "--set", p(&set), "--ref", "0.4,1"]).status.code(), Some(3));
    assert_eq!(lta(&["hv", "--set", p(&dir.path().join("missing.csv")), "--ref", "1,1"]).status.code(), Some(3));
}

#[test]
fn self_check_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["eval-cir", "--self-check", "--m", "3", "--M", "5", "--N", "12", "--seed", "4", "--out", p(dir.path())]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("cir.json")).unwrap()).unwrap();
    let exact = &json["methods"][0];
    assert_eq!(exact["name"], "exact");
    for v in exact["mean"].as_array().unwrap() {
        assert_eq!(v.as_f64(), Some(1.0));
    }
    let csv = fs::read_to_string(dir.path().join("cir.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
}

#[test]
fn cir_rejects_mismatched_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let dirs = dir.path().join("d.json");
    ok(&["gen-dirs", "--method", "das", "--m", "2", "--H", "5", "--out", p(&dirs)]);
    let out = lta(&["eval-cir", "--dirs", p(&dirs), "--m", "3", "--M", "2", "--N", "5", "--seed", "1", "--out", p(dir.path())]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gahss_subset_has_k_rows() {
    let dir = tempfile::tempdir().unwrap();
    let dirs = dir.path().join("d.json");
    ok(&["gen-dirs", "--method", "das", "--m", "3", "--H", "6", "--out", p(&dirs)]);
    let out = dir.path().join("g");
    ok(&["gahss", "--dirs", p(&dirs), "--k", "50", "--front", "concave-triangular", "--size", "200", "--seed", "3", "--out", p(&out)]);
    let subset = read_solution_csv(&out.join("subset.csv")).unwrap();
    assert_eq!(subset.len(), 50);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("gahss.json")).unwrap()).unwrap();
    assert_eq!(json["selected"].as_array().unwrap().len(), 50);
    assert!(json["hypervolume"].as_f64().unwrap() > 0.0);

    let cands = dir.path().join("cands.csv");
    fs::write(&cands, "f1,f2,f3\n0.2,0.3,0.5\n0.5,0.3,0.2\n").unwrap();
    assert_eq!(lta(&["gahss", "--dirs", p(&dirs), "--k", "3", "--candidates", p(&cands), "--out", p(&out)]).status.code(), Some(2));
    let dominated = dir.path().join("dom.csv");
    fs::write(&dominated, "f1,f2,f3\n0.2,0.3,0.5\n0.3,0.4,0.6\n").unwrap();
    assert_eq!(lta(&["gahss", "--dirs", p(&dirs), "--k", "1", "--candidates", p(&dominated), "--out", p(&out)]).status.code(), Some(3));
}

#[test]
fn plots_render() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("q_history.csv");
    fs::write(&hist, "iteration,Q\n0,0.5\n1,0.7\n").unwrap();
    let svg = dir.path().join("q.svg");
    ok(&["plot", "--history", p(&hist), "--out", p(&svg)]);
    assert!(fs::read_to_string(&svg).unwrap().contains("<polyline"));

    ok(&["eval-cir", "--self-check", "--m", "2", "--M", "2", "--N", "6", "--seed", "1", "--out", p(dir.path())]);
    let bars = dir.path().join("cir.svg");
    ok(&["plot", "--cir", p(&dir.path().join("cir.csv")), "--out", p(&bars)]);
    assert!(fs::read_to_string(&bars).unwrap().contains("<rect"));
}
