//! End-to-end tests of the binary: report shapes, exit codes, and
//! reproducibility of identical invocations.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pqforms"))
}

fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("pqforms-test-{}-{}", std::process::id(), name));
    std::fs::write(&path, content).unwrap();
    path
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report must be a single JSON document")
}

const W32_FORM: &str = "\
ring = field(2, 1)
pair = pair(sigma = id, eps = 1)
dim = 4
gram = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
values = [0, 0, 0, 0]
codefect = codefect(full)
";

const FUNCFIELD_FORM: &str = "\
ring = funcfield2(t)
pair = pair(sigma = id, eps = 1)
dim = 2
gram = [[0, 1], [1, 0]]
values = [0, 0]
codefect = codefect(gens = [1])
";

#[test]
fn pair_info_reports_trace_type_and_subgroup_size() {
    let out = bin()
        .args([
            "pair-info",
            "--ring",
            "field(2, 2)",
            "--sigma",
            "frob^1",
            "--eps",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["trace_type"], true);
    assert_eq!(v["lower_subgroup"]["size"], "2");
}

#[test]
fn enumerate_w32_has_15_points_and_lines() {
    let form = write_temp("w32.pqf", W32_FORM);
    let out = bin()
        .args(["enumerate", "--form"])
        .arg(&form)
        .args(["--source", "f"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["space"]["points"].as_array().unwrap().len(), 15);
    assert_eq!(v["space"]["lines"].as_array().unwrap().len(), 15);
    assert_eq!(v["space"]["rank"], 2);
}

#[test]
fn identical_invocations_produce_identical_reports() {
    let form = write_temp("repro.pqf", FUNCFIELD_FORM);
    let run = || {
        bin()
            .args(["dominant-cover", "--form"])
            .arg(&form)
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_keys_are_sorted() {
    let form = write_temp("sorted.pqf", FUNCFIELD_FORM);
    let out = bin()
        .args(["form-eval", "--form"])
        .arg(&form)
        .args(["--vector", "1, t^2"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let form_pos = text.find("\"form\"").unwrap();
    let singular_pos = text.find("\"singular\"").unwrap();
    let value_pos = text.find("\"value\"").unwrap();
    let vector_pos = text.find("\"vector\"").unwrap();
    assert!(form_pos < singular_pos && singular_pos < value_pos && value_pos < vector_pos);
}

#[test]
fn domain_errors_exit_1_with_code() {
    let form = write_temp("dom.pqf", FUNCFIELD_FORM);
    let out = bin()
        .args(["quotient", "--form"])
        .arg(&form)
        .args(["--subspace", "1, 0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["error"]["code"], "quotient-not-defined");
}

#[test]
fn parse_errors_exit_2() {
    let form = write_temp("bad.pqf", "ring = bogus(1)\n");
    let out = bin()
        .args(["form-eval", "--form"])
        .arg(&form)
        .args(["--vector", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["error"]["code"], "parse-error");
}

#[test]
fn classify_and_hull_pipeline() {
    // geometry straight from the symplectic enumeration
    let form = write_temp("w32-geom-src.pqf", W32_FORM);
    let out = bin()
        .args(["enumerate", "--form"])
        .arg(&form)
        .args(["--source", "f"])
        .output()
        .unwrap();
    let v = json_of(&out);
    let mut geom = String::from("ambient = field(2, 1)\ndim = 4\n");
    for p in v["space"]["points"].as_array().unwrap() {
        let coords: Vec<String> = p
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().to_string())
            .collect();
        geom.push_str(&format!("point {}\n", coords.join(" ")));
    }
    for l in v["space"]["lines"].as_array().unwrap() {
        let idx: Vec<String> = l
            .as_array()
            .unwrap()
            .iter()
            .map(|i| i.as_u64().unwrap().to_string())
            .collect();
        geom.push_str(&format!("line {}\n", idx.join(" ")));
    }
    let geom_path = write_temp("w32.pqg", &geom);
    let out = bin()
        .args(["hull", "--geometry"])
        .arg(&geom_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["classification"]["verdict"], "alternating");
    assert_eq!(v["hull"]["branch"], "char2-extension");
    assert_eq!(v["hull"]["dim"], 5);
    assert_eq!(v["hull"]["lifted_points"].as_array().unwrap().len(), 15);
}

#[test]
fn verify_subcommand_reports_per_criterion() {
    let out = bin()
        .args(["verify", "--suite", "c5", "--seed", "42"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["results"][0]["id"], "C5");
    assert_eq!(v["results"][0]["passed"], true);
}

#[test]
fn worker_count_does_not_change_reports() {
    let form = write_temp("workers.pqf", W32_FORM);
    let run = |workers: &str| {
        bin()
            .env("PQFORMS_WORKERS", workers)
            .args(["enumerate", "--form"])
            .arg(&form)
            .args(["--source", "f"])
            .output()
            .unwrap()
    };
    let seq = run("1");
    let par = run("4");
    assert!(seq.status.success());
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn out_flag_writes_the_report_file() {
    let form = write_temp("outflag.pqf", FUNCFIELD_FORM);
    let out_path = std::env::temp_dir().join(format!("pqforms-out-{}.json", std::process::id()));
    let out = bin()
        .args(["form-eval", "--form"])
        .arg(&form)
        .args(["--vector", "1, t^2"])
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["singular"], true);
    std::fs::remove_file(&out_path).ok();
}

#[test]
fn classify_with_reference_reports_witness() {
    const Q32_FORM: &str = "\
ring = field(2, 1)
pair = pair(sigma = id, eps = 1)
dim = 4
gram = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
values = [0, 0, 0, 0]
codefect = codefect(zero)
";
    let form = write_temp("q32ref.pqf", Q32_FORM);
    let out = bin()
        .args(["enumerate", "--form"])
        .arg(&form)
        .output()
        .unwrap();
    let v = json_of(&out);
    let mut geom = String::from("ambient = field(2, 1)\ndim = 4\n");
    for p in v["space"]["points"].as_array().unwrap() {
        let coords: Vec<String> = p
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().to_string())
            .collect();
        geom.push_str(&format!("point {}\n", coords.join(" ")));
    }
    for l in v["space"]["lines"].as_array().unwrap() {
        let idx: Vec<String> = l
            .as_array()
            .unwrap()
            .iter()
            .map(|i| i.as_u64().unwrap().to_string())
            .collect();
        geom.push_str(&format!("line {}\n", idx.join(" ")));
    }
    let geom_path = write_temp("q32ref.pqg", &geom);
    let out = bin()
        .args(["classify", "--geometry"])
        .arg(&geom_path)
        .args(["--reference"])
        .arg(&form)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["verdict"], "generalized-pseudo-quadratic");
    assert_eq!(v["proportionality_witness"], "1");
}

#[test]
fn cover_with_explicit_generators() {
    let form = write_temp("cover.pqf", FUNCFIELD_FORM);
    let out = bin()
        .args(["cover", "--form"])
        .arg(&form)
        .args(["--s-gens", "1", "--t-gens", ""])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["op"], "cover");
    assert_eq!(v["form"]["dim"], 3);
    assert_eq!(v["form"]["codefect"]["kind"], "zero");
}
