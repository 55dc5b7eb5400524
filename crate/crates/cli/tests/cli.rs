//! End-to-end tests for the `hhgft` binary: reference homology tables,
//! document-driven operate/verify runs, reproduction suites, exit codes,
//! and byte-level determinism.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hhgft"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

/// A document declaring a circle cylinder (trivial family), a two-vertex
/// circle cylinder, and the order-two reflection family on the point.
const DOCUMENT: &str = "
group Z2 cyclic 2
group triv cyclic 1

graph pt
  vertices 1
end

graph circle
  vertices 1
  edge 0 0
end

graph circle2
  vertices 2
  edge 0 1
  edge 1 0
end

# reflection core: two parallel edges swapped by the involution, plus a tail
graph refl_core
  vertices 3
  edge 0 1
  edge 1 0
  edge 1 2
end

cobordism cyl
  x circle
  y circle
  core circle
  phix_vertices 0
  phix_edge 0 : 0+
  phiy_vertices 0
  phiy_edge 0 : 0+
  mode checked
end

cobordism cyl2
  x circle2
  y circle2
  core circle2
  phix_vertices 0 1
  phix_edge 0 : 0+
  phix_edge 1 : 1+
  phiy_vertices 0 1
  phiy_edge 0 : 0+
  phiy_edge 1 : 1+
  mode checked
end

cobordism refl
  x pt
  y pt
  core refl_core
  phix_vertices 0
  phiy_vertices 2
  mode checked
end

family cylfam
  cobordism cyl
  group triv
end

family cyl2fam
  cobordism cyl2
  group triv
end

family reflfam
  cobordism refl
  group Z2
  auto 1
    vertex_perm 0 1 2
    edge_perm 1- 0- 2+
  end
end

request operate cylfam Z2 in 0 out 0 beta 0 theta 2
request operate reflfam Z2 in 0 out 0 beta 2 theta 2
request identity circle Z2 basepoints 0 degree 2
request gluing cylfam cylfam Z2 p 0 mid 0 q 0 degree 2
request rebase cyl2fam Z2 p 0 q 0 pnew 0 1 qnew 0 1 degree 2
";

fn write_document(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("doc.txt");
    std::fs::write(&path, text).expect("write document");
    path.to_str().expect("utf-8 path").to_owned()
}

#[test]
fn homology_matches_reference_tables() {
    let (code, stdout, _) = run(&["homology", "cyclic", "2", "--max-degree", "6"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("group cyclic 2: order 2"));
    assert!(stdout.contains("dims: 1,1,1,1,1,1,1"));

    let (code, stdout, _) = run(&[
        "homology", "product", "cyclic", "2", "cyclic", "2", "--max-degree", "4",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("dims: 1,2,3,4,5"));

    let (code, stdout, _) = run(&["homology", "cyclic", "3", "--max-degree", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("dims: 1,0,0,0"));

    let (code, stdout, _) = run(&["homology", "cyclic", "4", "--max-degree", "5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("dims: 1,1,1,1,1,1"));
}

#[test]
fn homology_output_is_deterministic_across_cache_states() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache = dir.path().join("cache");
    let args = [
        "--cache-dir",
        cache.to_str().expect("utf-8 path"),
        "homology",
        "product",
        "cyclic",
        "2",
        "cyclic",
        "2",
        "--max-degree",
        "4",
    ];
    let (code1, cold, _) = run(&args);
    assert_eq!(code1, 0);
    assert!(cache.read_dir().expect("cache dir").next().is_some(), "cache was populated");
    let (code2, warm, _) = run(&args);
    assert_eq!(code2, 0);
    assert_eq!(cold, warm, "cold and warm runs agree byte for byte");
}

#[test]
fn operate_prints_identity_blocks_for_the_cylinder() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_document(&dir, DOCUMENT);
    let (code, stdout, _) = run(&["operate", &path]);
    assert_eq!(code, 0);
    // The circle over Z/2 has two orbits (conjugacy classes), each of
    // homology dimension one per degree, so every cylinder block is a
    // 2x2 identity grid.
    assert!(stdout.contains("operate cylfam group=Z2 in=[0] out=[0] beta<=0 theta<=2"));
    for theta in 0..=2 {
        let block = format!(
            "block beta=0 theta={theta} out={theta} size 2x2\ncols: b0*o0#0 b0*o1#0\no0#0 | 1 0\no1#0 | 0 1"
        );
        assert!(stdout.contains(&block), "identity block at theta degree {theta}");
    }
}

#[test]
fn operate_grid_for_the_reflection_family_follows_binomial_parity() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_document(&dir, DOCUMENT);
    let (code, stdout, _) = run(&["operate", &path]);
    assert_eq!(code, 0);
    // One orbit of dimension one on each side, so each block is the single
    // parity binom(i + j, i) for beta degree i >= 1, and zero for i = 0.
    let entry = |i: usize, j: usize| -> String {
        format!("block beta={i} theta={j} out={} size 1x1\ncols: b0*o0#0\no0#0 | ", i + j)
    };
    let binom_parity = |i: usize, j: usize| (i + j) & i == i;
    for i in 0..=2usize {
        for j in 0..=2usize {
            let expected = if i >= 1 && binom_parity(i, j) { "1" } else { "0" };
            let block = format!("{}{expected}\n", entry(i, j));
            assert!(stdout.contains(&block), "reflection block ({i},{j}) is {expected}");
        }
    }
}

#[test]
fn verify_reports_passing_axiom_checks() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_document(&dir, DOCUMENT);
    let (code, stdout, _) = run(&["verify", &path]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS identity circle/Z2 degrees<=2 (6 cases)"));
    assert!(stdout.contains("PASS gluing cylfam∘cylfam/Z2 degrees<=2"));
    assert!(stdout.contains("PASS rebase cyl2fam/Z2 degrees<=2 (6 cases)"));
    assert!(stdout.contains("all axioms hold"));
}

#[test]
fn malformed_documents_fail_with_line_numbers() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_document(
        &dir,
        "group Z2 cyclic 2\nrequest identity nosuch Z2 basepoints 0 degree 2\n",
    );
    let (code, _, stderr) = run(&["verify", &path]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error[validation]"), "stderr: {stderr}");
    assert!(stderr.contains("line 2"), "stderr: {stderr}");

    let path = write_document(&dir, "group Z2 cyclic 2\ngraph g\n  vertices 1\n  edge 0 7\nend\n");
    let (code, _, stderr) = run(&["operate", &path]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error[validation]"), "stderr: {stderr}");
    assert!(stderr.contains("out of range"), "stderr: {stderr}");
}

#[test]
fn cap_violations_exit_with_the_cap_code() {
    let (code, _, stderr) = run(&["homology", "cyclic", "99999"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("error[cap]"), "stderr: {stderr}");

    let (code, _, stderr) = run(&["homology", "cyclic", "2", "--max-degree", "9"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("error[cap]"), "stderr: {stderr}");

    // A tiny tuple budget collapses the degree cap for larger groups.
    let (code, _, stderr) = run(&["--cap", "10", "homology", "cyclic", "16", "--max-degree", "3"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("error[cap]"), "stderr: {stderr}");
}

#[test]
fn reproduce_suites_pass() {
    let (code, stdout, _) = run(&["reproduce", "thm9_1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS thm9_1 (25 cases)"), "stdout: {stdout}");

    let (code, stdout, _) = run(&["reproduce", "cor9_7", "--max-degree", "4"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS cor9_7"), "stdout: {stdout}");

    let (code, stdout, _) =
        run(&["reproduce", "frobenius", "--group", "cyclic", "2", "--max-degree", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("counit 4 cases (0 failed)"), "stdout: {stdout}");
    assert!(stdout.contains("PASS frobenius"), "stdout: {stdout}");

    let (code, stdout, _) = run(&["reproduce", "loop_product", "--max-degree", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS loop_product"), "stdout: {stdout}");
}

#[test]
fn unsupported_reproduction_scale_is_a_validation_error() {
    let (code, _, stderr) = run(&["reproduce", "cor9_7", "--n", "3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error[validation]"), "stderr: {stderr}");
}

#[test]
fn global_flags_are_accepted() {
    let (code, stdout, _) =
        run(&["--seed", "7", "--format", "text", "homology", "cyclic", "3", "--max-degree", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("dims: 1,0,0"));
}
