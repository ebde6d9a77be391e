use std::process::{Command, Output};

use toricfan::bipartite::{family_instance, gale_transform};

fn toricfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricfan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("toricfan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(toricfan(&[]).status.code(), Some(2));
    assert_eq!(toricfan(&["report"]).status.code(), Some(2));
    assert_eq!(toricfan(&["report", "--k", "0"]).status.code(), Some(2));
    assert_eq!(
        toricfan(&["report", "--k", "2", "--n", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        toricfan(&["report", "--k", "2", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        toricfan(&["report", "--k", "1", "--jobs", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(toricfan(&["--help"]).status.code(), Some(0));
}

#[test]
fn k1_report_passes_all_checks() {
    let out = toricfan(&["report", "--k", "1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["codimension"], 3);
    assert_eq!(r["facet_total"], 3);
    assert_eq!(r["gb_size"], 3);
    assert_eq!(r["num_primitive_collections"], 3);
    assert_eq!(r["check_results"]["facets_at_least_4k"], "skipped");
    assert!(r["notes"]["facets_at_least_4k"].is_string());
    assert!(r.get("timings").is_none());
}

#[test]
fn non_coprime_instance_fails_the_center_check() {
    let out = toricfan(&["report", "--n", "2", "--m", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["check_results"]["center_generic"], "fail");
}

#[test]
fn general_coprime_instance() {
    let out = toricfan(&["report", "--n", "2", "--m", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r,s,size,is_facet\n"));
}

#[test]
fn facets_and_primitives_commands() {
    let out = toricfan(&["facets", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let f = json(&out);
    assert_eq!(f["facet_total"], 30);
    assert_eq!(f["facets"].as_array().unwrap().len(), 30);
    assert!(f["facets"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["r"] == 2 && e["s"] == 3));

    let full = json(&toricfan(&["facets", "--k", "2", "--no-symmetry"]));
    assert_eq!(full["facets"], f["facets"]);
    assert_eq!(full["num_lps"], 98);

    let p = json(&toricfan(&["primitives", "--k", "2"]));
    assert_eq!(p.as_array().unwrap().len(), 50);
    let t = json(&toricfan(&["primitives", "--k", "2", "--triangulation"]));
    assert_eq!(t.as_array().unwrap().len(), 360);
}

#[test]
fn groebner_file_header() {
    let path = temp_file("gb.json", "");
    let out = toricfan(&["groebner", "--k", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let gb: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(gb["header"]["order"], "deglex");
    assert_eq!(gb["header"]["n_vars"], 15);
    assert_eq!(gb["header"]["count"], 50);
    assert_eq!(
        gb["header"]["variable_priority"].as_array().unwrap().len(),
        15
    );
    assert_eq!(gb["binomials"].as_array().unwrap().len(), 50);
}

#[test]
fn ip_command() {
    let gale = gale_transform(&family_instance(2).unwrap());
    let matrix = temp_file(
        "k35.txt",
        &format!("# Gale dual of K_{{3,5}}\n{}", gale.matrix()),
    );
    let m = matrix.to_str().unwrap();
    let zero = ["0"; 15].join(",");
    let ones = ["1"; 15].join(",");

    // b = 0 has the zero vector as its optimum
    let out = toricfan(&["ip", "--matrix", m, "--c", &ones, "--start", &zero]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["point"], serde_json::json!(vec![0; 15]));

    let start = "2,0,1,3,0,1,1,0,2,0,0,3,1,0,2";
    let cost = "1,2,1,3,1,2,1,1,2,3,1,1,2,1,1";
    let out = toricfan(&[
        "ip", "--matrix", m, "--c", cost, "--start", start, "--oracle",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sol = json(&out);
    assert_eq!(sol["oracle"]["matches"], true);
    assert_eq!(sol["objective"], sol["oracle"]["objective"]);

    // start not in the fiber of b
    let b = ["1"; 8].join(",");
    assert_eq!(
        toricfan(&["ip", "--matrix", m, "--b", &b, "--c", &ones, "--start", &zero])
            .status
            .code(),
        Some(2)
    );
    let negative = format!("-1{}", ",0".repeat(14));
    assert_eq!(
        toricfan(&["ip", "--matrix", m, "--c", &ones, "--start", &negative])
            .status
            .code(),
        Some(2)
    );
    let bad = temp_file("bad.txt", "2 2\n1 x\n");
    assert_eq!(
        toricfan(&[
            "ip",
            "--matrix",
            bad.to_str().unwrap(),
            "--c",
            "1,1",
            "--start",
            "0,0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        toricfan(&["ip", "--matrix", "/nonexistent", "--c", "1", "--start", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn ip_on_a_pointed_matrix() {
    let matrix = temp_file("pointed.txt", "1 3\n1 1 1\n");
    let out = toricfan(&[
        "ip",
        "--matrix",
        matrix.to_str().unwrap(),
        "--c",
        "3,1,2",
        "--start",
        "2,0,1",
        "--oracle",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sol = json(&out);
    assert_eq!(sol["point"], serde_json::json!([0, 3, 0]));
    assert_eq!(sol["objective"], "3");
}
