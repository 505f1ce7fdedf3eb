use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phylomso"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Files {
        Files {
            dir: TempDir::new().unwrap(),
        }
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

fn quartet_pair(f: &Files) -> (String, String) {
    (f.put("q1.nwk", "(u,v,(w,y));\n"), f.put("q2.nwk", "(u,w,(v,y));\n"))
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn tbr_distance_of_quartet_pair() {
    let f = Files::new();
    let (a, b) = quartet_pair(&f);
    let v = json(&run(&["dist", "--measure", "tbr", &a, &b, "--json", "--dual-certify"]));
    assert_eq!(v["value"], 1);
    assert_eq!(v["forest_size"], 2);
    assert_eq!(v["certificate"]["method"], "move_search");
}

#[test]
fn json_is_deterministic_apart_from_timing() {
    let f = Files::new();
    let (a, b) = quartet_pair(&f);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms").unwrap();
        serde_json::to_string(&v).unwrap()
    };
    for m in ["tbr", "mp2"] {
        let args = ["dist", "--measure", m, &a, &b, "--json"];
        assert_eq!(strip(json(&run(&args))), strip(json(&run(&args))));
    }
}

#[test]
fn hybridization_number_of_identical_trees_is_zero() {
    let f = Files::new();
    let t = f.put("t1.nwk", "((a,b),(c,d));");
    let o = run(&["dist", "--measure", "hn", &t, &t]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("hn 0\n"));
    let u = f.put("t2.nwk", "((a,c),(b,d));");
    let v = json(&run(&["dist", "--measure", "hn", &t, &u, "--json", "--dual-certify", "--msol-check"]));
    assert_eq!(v["value"], 2);
    assert_eq!(v["msol_check"], true);
}

#[test]
fn parsimony_distance_is_below_tbr() {
    let f = Files::new();
    let a = f.put("a.nwk", "(a,b,(c,(d,(e,f))));");
    let b = f.put("b.nwk", "(a,d,(f,(b,(c,e))));");
    let mp = json(&run(&["dist", "--measure", "mp2", &a, &b, "--json", "--dual-certify"]));
    let tbr = json(&run(&["dist", "--measure", "tbr", &a, &b, "--json"]));
    assert!(mp["value"].as_u64().unwrap() <= tbr["value"].as_u64().unwrap());
    assert_eq!(mp["certificate"]["tbr"], tbr["value"]);
}

#[test]
fn display_gr_header() {
    let f = Files::new();
    let (a, b) = quartet_pair(&f);
    let o = run(&["display", "--gr", &a, &b]);
    assert!(stdout(&o).starts_with("p tw 8 10\n"));
    let dot = stdout(&run(&["display", "--dot", &a, &b]));
    assert!(dot.contains("graph"));
}

#[test]
fn decomposition_from_forest_roundtrip() {
    let f = Files::new();
    let (a, b) = quartet_pair(&f);
    let td = f.path("pair.td");
    let gr = f.path("pair.gr");
    assert!(run(&["td", "--from-forest", &a, &b, "-o", &td]).status.success());
    assert!(run(&["display", "--gr", &a, &b, "-o", &gr]).status.success());
    let text = fs::read_to_string(&td).unwrap();
    let width: usize = text.lines().next().unwrap().split_whitespace().nth(3).unwrap().parse::<usize>().unwrap() - 1;
    assert!(width <= 3);
    let o = run(&["td", "--validate", &gr, &td, "--json"]);
    assert_eq!(json(&o)["valid"], true);
}

#[test]
fn invalid_decomposition_exits_with_three() {
    let f = Files::new();
    let gr = f.put("path.gr", "p tw 3 2\n1 2\n2 3\n");
    let td = f.put("bad.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n");
    let o = run(&["td", "--validate", &gr, &td]);
    assert_eq!(o.status.code(), Some(3));
    let ok = f.put("ok.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    assert!(stdout(&run(&["td", "--validate", &gr, &ok])).contains("width 1"));
}

#[test]
fn input_errors_exit_with_two() {
    let f = Files::new();
    let (a, _) = quartet_pair(&f);
    let bad = f.put("bad.nwk", "(a,b");
    let other = f.put("other.nwk", "(a,b,(c,d));");
    assert_eq!(run(&["dist", "--measure", "tbr", &bad, &a]).status.code(), Some(2));
    assert_eq!(run(&["dist", "--measure", "tbr", &a, &other]).status.code(), Some(2));
    assert_eq!(run(&["dist", "--measure", "tbr", &a, "/nonexistent.nwk"]).status.code(), Some(2));
    assert_eq!(run(&["msol", "--suite", "predicates", "--max-taxa", "0"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "--measure", "nope", &a, &a]).status.code(), Some(2));
}

#[test]
fn predicate_suite_reports_no_mismatches() {
    let o = run(&["msol", "--suite", "predicates", "--max-taxa", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("\n0 mismatches\n"));
}

#[test]
fn predicate_suite_json_with_threads() {
    let o = bin()
        .args(["msol", "--suite", "predicates", "--max-taxa", "3", "--json"])
        .env("PHYLOMSO_THREADS", "2")
        .output()
        .unwrap();
    let v = json(&o);
    assert_eq!(v["mismatches"], 0);
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["predicate"].as_str().unwrap()).collect();
    assert_eq!(names[0], "Union");
    assert_eq!(names.last(), Some(&"CPS[1]"));
}

#[test]
fn formula_inspection() {
    let f = Files::new();
    let (a, b) = quartet_pair(&f);
    let def = stdout(&run(&["msol", "--define", "PAC"]));
    assert!(def.starts_with("PAC(Z,x1,x2,K) := "));
    assert_eq!(run(&["msol", "--define", "Nope"]).status.code(), Some(2));
    let dump = json(&run(&["msol", "--dump", &a, &b]));
    assert_eq!(dump["universe"].as_array().unwrap().len(), 18);
    let yes = stdout(&run(&["msol", "--check", "umaf", "--k", "2", &a, &b]));
    let no = stdout(&run(&["msol", "--check", "umaf", "--k", "1", &a, &b]));
    assert_eq!((yes.trim(), no.trim()), ("true", "false"));
    let traced = json(&run(&["msol", "--check", "umaf", "--k", "2", "--trace", "1", "--json", &a, &b]));
    assert!(!traced["trace"].as_array().unwrap().is_empty());
    let fitch = stdout(&run(&["msol", "--check", "fitch", &a, &b]));
    assert_eq!(fitch.trim(), "1");
}

#[test]
fn size_guard_must_be_raised() {
    let f = Files::new();
    let a = f.put("a.nwk", "(a,b,(c,(d,e)));");
    let b = f.put("b.nwk", "(a,c,(b,(d,e)));");
    let o = run(&["msol", "--check", "umaf", "--k", "2", &a, &b]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("5"));
}

#[test]
fn output_flag_writes_file() {
    let f = Files::new();
    let (a, b) = quartet_pair(&f);
    let out = f.path("out.json");
    let o = run(&["dist", "--measure", "tbr", &a, &b, "--json", "-o", &out]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(Path::new(&out)).unwrap()).unwrap();
    assert_eq!(v["value"], 1);
}
