use std::path::PathBuf;

use regfree::cli::run;

fn regfree(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("regfree").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("regfree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn graph(sizes: &str, seed: &str, name: &str) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap();
    let (code, _, err) = regfree(&["--seed", seed, "construct", "--sizes", sizes, "--out", p]);
    assert_eq!(code, 0, "{err}");
    p.to_string()
}

#[test]
fn construct_is_deterministic() {
    let (c1, a, _) = regfree(&["--seed", "5", "construct", "--sizes", "16,4,2"]);
    let (c2, b, _) = regfree(&["--seed", "5", "construct", "--sizes", "16,4,2"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("{\"n\":22,\"layers\":[16,4,2],\"edges\":"));
}

#[test]
fn certify_reports_and_sets_exit_code() {
    let g = graph("32,8,2", "0", "cert.json");
    let (code, out, _) = regfree(&["certify", "--in", &g]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "certified");
    assert_eq!(v["threshold"], "11/10");
    let big = graph("256,64,16,4", "0", "big.json");
    let (code, out, _) = regfree(&["certify", "--in", &big, "--format", "csv"]);
    assert_eq!(code, 2);
    assert!(out.starts_with("i,prefix_vertices,active"));
}

#[test]
fn detect_chif_degeneracy_subsample() {
    let g = graph("32,8,2", "1", "misc.json");
    let (code, out, _) = regfree(&["detect-regular", "--in", &g, "--k", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"not_found\""));
    let (code, out, _) = regfree(&["chif", "--in", &g, "--exact"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"chi_f\""));
    let (code, out, _) = regfree(&["chif", "--in", &g, "--exact", "--column-limit", "1"]);
    assert_eq!(code, 2, "{out}");
    let (code, out, _) = regfree(&["chif", "--in", &g, "--lower-bound", "--weights", "paper"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"total_weight\": \"3/1\""));
    let (code, out, _) = regfree(&["degeneracy", "--in", &g]);
    assert_eq!(code, 0);
    assert!(out.contains("\"degeneracy\": 2"));
    let (code, out, _) = regfree(&[
        "--seed",
        "3",
        "subsample",
        "--in",
        &g,
        "--trials",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn bounds_subcommands() {
    let (code, out, _) = regfree(&["bounds", "reg", "--n", "e^e^40", "--i", "2", "--x", "10"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["all_hold"], true);
    let (code, _, _) = regfree(&["bounds", "frac", "--n", "e^e^40", "--i", "2", "--p", "min"]);
    assert_eq!(code, 0);
    let (code, out, _) = regfree(&["bounds", "union", "--n", "e^e^40", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("label,kind,scale,left,right,holds"));
}

#[test]
fn sweep_writes_records_and_replays() {
    let records = scratch("sweep.ndjson");
    let _ = std::fs::remove_file(&records);
    let summary = scratch("sweep.csv");
    let r = records.to_str().unwrap();
    let (code, _, err) = regfree(&[
        "sweep",
        "--sizes",
        "32,8,2",
        "--seeds",
        "0..5",
        "--checks",
        "certify4,degeneracy,subsample",
        "--out",
        r,
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        std::fs::read_to_string(&records).unwrap().lines().count(),
        5
    );
    assert!(std::fs::read_to_string(&summary)
        .unwrap()
        .starts_with("check,runs"));
    let (code, out, _) = regfree(&["sweep", "--replay", r]);
    assert_eq!(code, 0);
    assert!(out.contains("\"reproduced\": true"));
}

#[test]
fn errors_exit_with_one() {
    assert_eq!(regfree(&["certify"]).0, 1);
    assert_eq!(regfree(&["nonsense"]).0, 1);
    assert_eq!(regfree(&["construct", "--sizes", "4,0"]).0, 1);
    let (code, _, err) = regfree(&["construct", "--paper-n", "e^e^40"]);
    assert_eq!(code, 1);
    assert!(err.contains("ln_layer_sizes"));
    assert_eq!(regfree(&["--help"]).0, 0);
}
