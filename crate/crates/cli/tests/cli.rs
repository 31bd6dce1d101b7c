use std::path::PathBuf;
use std::process::{Command, Output};

fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name)
}

fn kgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn delay_of_loop_is_a_three_cycle() {
    let o = kgraph(&["delay", sample("loop.graph").to_str().unwrap(), "--n", "3", "--depth", "3", "--verify-min"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("3 vertices"), "{text}");
    assert!(text.contains("shape: 3-cycle"), "{text}");
    assert!(text.contains("PASS delayed_min_check"), "{text}");
}

#[test]
fn defect_prints_exact_values() {
    let o = kgraph(&["defect", "--a", "0,0", "--b", "0,0", "--n", "4,4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("defect=0 "), "{text}");
    assert!(text.contains("bound=1/3 "), "{text}");
    assert!(text.contains("ok=true"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kgraph(&["kappa", "--m", "0"]).status.code(), Some(2));
    assert_eq!(kgraph(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kgraph(&["tck", sample("loop.graph").to_str().unwrap(), "--depth", "4,4"]).status.code(), Some(2));
    assert_eq!(kgraph(&["check-axioms", "/nonexistent/graph"]).status.code(), Some(2));
    assert_eq!(kgraph(&["defect", "--a", "0", "--b", "0,0", "--n", "4,4"]).status.code(), Some(2));
}

#[test]
fn kappa_four() {
    let o = kgraph(&["kappa", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "kappa m=4 Z=3\n  1/3 1/3 1/3 1/3\n  1/3 2/3 2/3 1/3\n  1/3 2/3 2/3 1/3\n  1/3 1/3 1/3 1/3\npsd=true\n"
    );
}

#[test]
fn corrupted_inputs_exit_one_with_witness() {
    for name in ["corrupt/redirected.skel", "corrupt/sink.graph"] {
        let o = kgraph(&["check-axioms", sample(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(stdout(&o).lines().any(|l| l.starts_with("  witness ")), "{name}");
    }
}

#[test]
fn check_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |file: &str| {
        let out = dir.path().join(file);
        let o = kgraph(&["tck", sample("free.skel").to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        (stdout(&o), std::fs::read(out).unwrap())
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let csv = String::from_utf8(a.1).unwrap();
    assert!(csv.starts_with("check,instance,n,bound,passed,witness\ntck_check,free.skel,,"), "{csv}");
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = kgraph(&["sweep", "--a", "2,1", "--b", "0,0", "--n-list", "40,40", "4,4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n1,n2,a1,a2,b1,b2,defect,bound,ok,defect_exact,bound_exact");
    assert!(lines[1].starts_with("40,40,2,1,0,0,"));
    assert!(lines[1].ends_with(",0.190476190476,true,") || lines[1].contains(",0.190476190476,true,"));
    assert_eq!(lines.len(), 3);

    let empty = dir.path().join("e.csv");
    let o = kgraph(&["sweep", "--a", "0,0", "--b", "0,0", "--n-list", "--out", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&empty).unwrap().lines().count(), 1);
}

#[test]
fn all_reports_every_suite() {
    let o = kgraph(&["all", sample("loop.graph").to_str().unwrap(), sample("free.skel").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for check in [
        "verify_axioms",
        "range_set_check",
        "bracket_tail_check",
        "delayed_min_check",
        "unit_delay_iso_check",
        "tck_check",
        "iota_tck_check",
        "equiv_exprs_check",
        "gamma_matrix_unit_check",
        "j_ck_check",
        "pn_qn_check",
        "delay_path_iso_check",
        "rout_equivalence_check",
        "product_delay_compat_check",
        "prodgraph_generator_check",
        "psd_check",
        "schur_contraction_check",
        "phi_decomposition_check",
        "defect_bound",
    ] {
        assert!(text.contains(&format!("PASS {check} ")), "missing {check}");
    }
    assert!(!text.contains("FAIL"));
}
