use std::process::{Command, Output};

fn prosol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prosol")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("prosol-cmd-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn abelianize_baumslag() {
    let o = prosol(&["abelianize", "<a, b | a = [a, a^b]>", "--word", "[a, b]"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("abelianization: Z\n"), "{s}");
    assert!(s.contains("generator_images: [[\"0\"],[\"1\"]]"), "{s}");
    assert!(s.contains("expanded: [\"a^-1 b^-1 a b\"]"), "{s}");
}

#[test]
fn series_of_s4() {
    let o = prosol(&["series", "--degree", "4", "(0 1)", "(0 1 2 3)"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("derived_orders: [\"24\",\"12\",\"4\",\"1\"]"));
}

#[test]
fn tree_quotients_default_is_grigorchuk() {
    let o = prosol(&["tree-quotients", "--levels", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("log2_orders: [1,3,7]"));
}

#[test]
fn congruence_single_variant() {
    let o = prosol(&["congruence", "--d", "2", "--p", "3", "--max-a", "2", "--variant", "gl"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("gl_layer_orders: [\"81\"]"), "{s}");
    assert!(!s.contains("sl_layer_orders"));
    assert_eq!(prosol(&["congruence", "--d", "2", "--p", "4"]).status.code(), Some(1));
}

#[test]
fn metric_on_cyclic_and_free_towers() {
    let o = prosol(&["metric", "--moduli", "2,4,8,16", "0,4", "3,3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("distances: [\"1/4\",\"0 up to stage 4\"]"));
    let o = prosol(&["metric", "--presentation", "<x, y | >", "--prime", "2", "--max-a", "3", "x,x y^2"]);
    assert!(stdout(&o).contains("word_distances: [\"1/2\"]"));
    assert_eq!(prosol(&["metric", "--moduli", "2,4", "0;4"]).status.code(), Some(2));
}

#[test]
fn compare_integers() {
    let o = prosol(&["compare", "<t | >", "--primes", "2", "--stages", "4"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("differs_from_finite_soluble: true"), "{s}");
    assert!(s.contains("p_tower_orders: {\"2\":[\"2\",\"4\",\"8\",\"16\"]}"), "{s}");
}

#[test]
fn kernel_with_certificate_file() {
    let good = temp("good.toml", "target = \"a\"\nw1 = \"g\"\nw2 = \"g^(b)\"\npi = [[0, \"1\", 1]]\n");
    let o = prosol(&["kernel", "<a, b | a = [a, a^b]>", "--cert", good.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("status: kernel_contains"));
    let json = temp("good.json", r#"{"target": "a", "w1": "g", "w2": "g^(b)", "pi": [[0, "1", 1]]}"#);
    assert!(prosol(&["kernel", "<a, b | a = [a, a^b]>", "--cert", json.to_str().unwrap()]).status.success());
    let bad = temp("bad.toml", "target = \"a\"\nw1 = \"g\"\nw2 = \"g^(b)\"\npi = [[0, \"1\", -1]]\n");
    let o = prosol(&["kernel", "<a, b | a = [a, a^b]>", "--cert", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("certificate_accepted: false"));
    let garbage = temp("garbage.toml", "target = ");
    let o = prosol(&["kernel", "<a, b | a = [a, a^b]>", "--cert", garbage.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn nilpotent_depth_and_subgroup() {
    let o = prosol(&["nilpotent-depth", "--rank", "2", "--class", "4", "x", "[x, y]", "[[x, y], y]"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("lcs_depths: [\"1\",\"2\",\"3\"]"), "{s}");
    assert!(s.contains("layer_ranks: [2,1,2,3]"), "{s}");
    let o = prosol(&["subgroup", "--gen", "x", "--gen", "y x y x^-1 y^-1", "--query", "y", "--query", "x"]);
    let s = stdout(&o);
    assert!(s.contains("membership: [false,true]"), "{s}");
    assert!(s.contains("subgroup_rank: 2"), "{s}");
}

#[test]
fn run_exit_codes() {
    let empty = temp("empty.corpus", "");
    assert_eq!(prosol(&["run", "--corpus", empty.to_str().unwrap()]).status.code(), Some(0));
    let failing = temp(
        "failing.corpus",
        "[[entry]]\nname = \"s3\"\nkind = \"permutation-group\"\ndegree = 3\ngenerators = [\"(0 1)\", \"(0 1 2)\"]\nexpect = { order = \"7\" }\n",
    );
    let o = prosol(&["run", "--corpus", failing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL s3"));
    let broken = temp("broken.corpus", "[[entry]\n");
    let o = prosol(&["run", "--corpus", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(prosol(&["run", "--only", "missing"]).status.code(), Some(2));
    assert_eq!(prosol(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(prosol(&["explain", "missing"]).status.code(), Some(2));
}

#[test]
fn config_file_is_applied() {
    let cfg = temp("cfg.toml", "[caps]\nmax_level = 2\n");
    let o = prosol(&["--config", cfg.to_str().unwrap(), "tree-quotients", "--levels", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let bad = temp("bad-cfg.toml", "[caps]\nmax_lvl = 2\n");
    let o = prosol(&["--config", bad.to_str().unwrap(), "run", "--only", "s3"]);
    assert_eq!(o.status.code(), Some(2));
}
