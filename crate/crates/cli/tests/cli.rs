use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn hc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hc"))
        .args(args)
        .output()
        .expect("hc runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn source(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".hc").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn parallel_composition_has_the_parametric_type() {
    let p = example("parallel.hc");
    let o = hc(&["check", p.to_str().unwrap(), "--theory", "circuit"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(
        stdout(&o)
            .contains("Proof(Bit, Bit) -> Proof(Bit, Bit) -> Proof(Bit (x) Bit, Bit (x) Bit)"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn duplicated_core_variable_needs_the_cartesian_flag() {
    let p = example("nonlinear.hc");
    let linear = hc(&["check", p.to_str().unwrap()]);
    assert_eq!(code(&linear), 1);
    assert!(stdout(&linear).contains("a0"), "{}", stdout(&linear));
    let cartesian = hc(&["check", p.to_str().unwrap(), "--cartesian-core"]);
    assert_eq!(code(&cartesian), 0, "{}", stdout(&cartesian));
    assert!(stdout(&cartesian).contains("Bit (x) Bit"));
}

#[test]
fn associativity_holds_by_normalization() {
    let p = example("assoc.hc");
    let o = hc(&["eq", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("equal (normalization)"));
    let lines = hc(&["eq", p.to_str().unwrap(), "--format", "lines"]);
    let record: Vec<String> = stdout(&lines)
        .lines()
        .next()
        .unwrap()
        .split('\t')
        .map(String::from)
        .collect();
    assert_eq!(record[..4], ["eq", "4", "equal", "normalization"]);
}

#[test]
fn distinct_gates_are_unequal() {
    let f = source("import circuit\neq |- promote(core a:Bit. not(a)) = id[Bit]\n");
    let o = hc(&["eq", path(&f)]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let m = hc(&["eq", path(&f), "--model", "finrel"]);
    assert_eq!(code(&m), 1);
    assert!(stdout(&m).contains("witness"), "{}", stdout(&m));
}

#[test]
fn unfaithful_models_leave_equality_open() {
    let f = source("import circuit\neq |- comp(promote(core a:Bit. not(a)), promote(core a:Bit. not(a))) = id[Bit]\n");
    let o = hc(&["eq", path(&f), "--model", "finrel"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    assert!(stdout(&o).contains("unknown"));
}

#[test]
fn budget_and_trace() {
    let f = source(
        "import circuit\nnorm |- comp(promote(core a:Bit. not(a)), promote(core a:Bit. not(a)))\n",
    );
    let o = hc(&["norm", path(&f), "--trace"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l.starts_with("dual-der-prom: ") && l.contains(" ~> ")),
        "{out}"
    );
    assert!(out.contains("promote(core a:Bit. not(not(a)))"));
    let short = hc(&["norm", path(&f), "--max-steps", "1"]);
    assert_eq!(code(&short), 3);
    assert!(stdout(&short).contains("budget"));
}

#[test]
fn interpretation_tables() {
    let f = source("import circuit\ncheck |- promote(core a:Bit (x) Bit. nand(a))\ncheck x:bool |- if x then true else false\n");
    let o = hc(&["interp", path(&f), "--format", "lines"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(
        out.contains("interp\t2\trow\t\t{((0,0),1),((0,1),1),((1,0),1),((1,1),0)}"),
        "{out}"
    );
    assert!(out.contains("interp\t3\trow\tx = true\ttrue"), "{out}");
}

#[test]
fn lint_passes_on_finite_relations_and_fails_on_a_broken_table() {
    let o = hc(&["lint", "--model", "finrel:2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS pentagon"));

    let mut model = hc_core::semantics::TableModel::trivial();
    let key = model.homs.keys().next().unwrap().clone();
    model.homs.get_mut(&key).unwrap().push("extra".into());
    let file = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    std::fs::write(file.path(), model.to_json()).unwrap();
    let bad = hc(&["lint", "--model", file.path().to_str().unwrap()]);
    assert_eq!(code(&bad), 1, "{}", stdout(&bad));
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn syntaxgen_writes_a_loadable_theory() {
    let out = tempfile::Builder::new().suffix(".hc").tempfile().unwrap();
    let o = hc(&["syntaxgen", "--model", "finrel:0,1", "-o", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let check = hc(&["check", path(&out)]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
    assert!(!stdout(&check).is_empty());
}

#[test]
fn caps_overflow_is_inconclusive() {
    let o = hc(&["syntaxgen", "--model", "finrel:0,2"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn roundtrip_on_the_trivial_model() {
    let o = hc(&["roundtrip", "--model", "trivial"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("round trip holds\n"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let f = source("check |- (");
    assert_eq!(code(&hc(&["check", path(&f)])), 2);
    assert_eq!(code(&hc(&["check", "/nonexistent/file.hc"])), 2);
    assert_eq!(
        code(&hc(&["check", path(&f), "--theory", "no_such_theory"])),
        2
    );
    assert_eq!(code(&hc(&["lint", "--model", "finrel:3"])), 2);
    assert_eq!(code(&hc(&["roundtrip", "--caps", "depth=3"])), 2);
    assert_eq!(code(&hc(&["frobnicate"])), 2);
}

#[test]
fn output_is_deterministic() {
    let a = hc(&["syntaxgen", "--model", "finrel:0,1"]);
    let b = hc(&["syntaxgen", "--model", "finrel:0,1"]);
    assert_eq!(a.stdout, b.stdout);
}
