//! End-to-end tests running the installed binary: exit codes, output
//! formats, document round-trips, and the frozen oracle counts.

use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Stdio};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nijlie")
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(args: &[&str], stdin: Option<&str>, envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    cmd.env_remove("NIJLIE_BUDGET");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.stdin(if stdin.is_some() {
        Stdio::piped()
    } else {
        Stdio::null()
    });
    cmd.stdout(Stdio::piped());
    cmd.stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    let out = child.wait_with_output().expect("binary finishes");
    Run {
        code: out.status.code().expect("binary exits normally"),
        stdout: String::from_utf8(out.stdout).expect("stdout is utf-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is utf-8"),
    }
}

fn run(args: &[&str]) -> Run {
    run_with(args, None, &[])
}

fn write_doc(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// A trivially-acted one-dimensional module over the abelian line,
/// all operators zero — the smallest context with H^2 of dimension 1.
const LINE_CONTEXT_DOC: &str = "schema_version 1\nfield Fp 2\n\nbegin lie_algebra g\ndim 1\nend\n\nbegin linear_map z\nrows 1\ncols 1\nrow 0\nend\n\nbegin nijenhuis gn\nalgebra g\noperator z\nend\n\nbegin representation rho\nalgebra g\ndim_v 1\naction 1 z\nend\n\nbegin nij_representation ctx\nbase gn\nrep rho\noperator z\nend\n";

/// Two line-by-line cocycles differing only in the operator component:
/// c0 has f = [0] (the zero cocycle) and c1 has f = [1].
const COCYCLE_PAIR_DOC: &str = "schema_version 1\nfield Fp 2\n\nbegin lie_algebra g\ndim 1\nend\n\nbegin lie_algebra v\ndim 1\nend\n\nbegin linear_map o\nrows 1\ncols 1\nrow 1\nend\n\nbegin linear_map z\nrows 1\ncols 1\nrow 0\nend\n\nbegin nijenhuis gn\nalgebra g\noperator z\nend\n\nbegin nijenhuis vn\nalgebra v\noperator z\nend\n\nbegin cocycle_nab c0\nsource gn\ntarget vn\npsi 1 z\nf z\nend\n\nbegin cocycle_nab c1\nsource gn\ntarget vn\npsi 1 z\nf o\nend\n";

/// The two-dimensional non-abelian algebra and the Heisenberg algebra
/// over the two-element field, for exhaustive operator sweeps.
const SWEEP_DOC: &str = "schema_version 1\nfield Fp 2\n\nbegin lie_algebra aff\ndim 2\nbracket 1 2 2 1\nend\n\nbegin lie_algebra heis\ndim 3\nbracket 1 2 3 1\nend\n";

/// A bracket violating the Jacobi identity, next to an unrelated valid
/// module context.
const BAD_OBJECT_DOC: &str = "schema_version 1\nfield Fp 2\n\nbegin lie_algebra bad\ndim 3\nbracket 1 2 3 1\nbracket 1 3 1 1\nbracket 2 3 1 1\nend\n\nbegin lie_algebra g\ndim 1\nend\n\nbegin linear_map z\nrows 1\ncols 1\nrow 0\nend\n\nbegin nijenhuis gn\nalgebra g\noperator z\nend\n\nbegin representation rho\nalgebra g\ndim_v 1\naction 1 z\nend\n\nbegin nij_representation ctx\nbase gn\nrep rho\noperator z\nend\n";

#[test]
fn catalog_identity_document_passes_its_own_check() {
    let cat = run(&["catalog", "identity-nijenhuis", "--dim", "2"]);
    assert_eq!(cat.code, 0, "catalog failed: {}", cat.stderr);
    assert!(
        cat.stdout.contains("begin nijenhuis"),
        "got:\n{}",
        cat.stdout
    );
    let check = run_with(&["check", "-"], Some(&cat.stdout), &[]);
    assert_eq!(
        check.code, 0,
        "emitted document fails check:\n{}",
        check.stdout
    );
    assert!(check.stdout.contains("all pass"));
}

#[test]
fn check_reports_failing_objects_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "bad.doc", BAD_OBJECT_DOC);
    let check = run(&["check", &path]);
    assert_eq!(check.code, 1);
    assert!(
        check.stdout.contains("bad (lie_algebra): FAIL"),
        "got:\n{}",
        check.stdout
    );
    assert!(check.stdout.contains("gn (nijenhuis): pass"));
    let data = run(&["check", &path, "--format", "data"]);
    assert_eq!(data.code, 1);
    assert!(data.stdout.contains("check bad lie_algebra fail"));
}

#[test]
fn malformed_documents_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "not a document",
        "schema_version 2\nfield Q\n",
        "schema_version 1\nfield Fp 6\n",
        "schema_version 1\nfield Q\n\nbegin lie_algebra g\ndim 1\n", // unclosed
        "schema_version 1\nfield Q\n\nbegin lie_algebra g\ndim 1\nbracket 1 1 1 1\nend\n",
    ] {
        let path = write_doc(dir.path(), "bad.doc", text);
        let out = run(&["check", &path]);
        assert_eq!(
            out.code, 3,
            "expected parse failure for:\n{text}\nstderr: {}",
            out.stderr
        );
        assert!(out.stderr.contains("error:"));
    }
    let missing = run(&["check", "/nonexistent/file.doc"]);
    assert_eq!(missing.code, 3);
}

#[test]
fn unresolved_references_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        "schema_version 1\nfield Q\n\nbegin nijenhuis gn\nalgebra ghost\noperator ghost_op\nend\n";
    let path = write_doc(dir.path(), "dangling.doc", text);
    let out = run(&["check", &path]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("ghost"), "stderr: {}", out.stderr);
}

#[test]
fn h2_of_the_line_context_prints_dimension_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "ctx.doc", LINE_CONTEXT_DOC);
    let report = run(&["h2", &path, "--context", "ctx"]);
    assert_eq!(report.code, 0, "stderr: {}", report.stderr);
    assert!(
        report.stdout.contains("cohomology dimension: 1"),
        "got:\n{}",
        report.stdout
    );
    let data = run(&["h2", &path, "--context", "ctx", "--format", "data"]);
    assert!(data.stdout.starts_with("dim 1\n"), "got:\n{}", data.stdout);
}

#[test]
fn extract_then_extend_round_trips_through_documents() {
    let dir = tempfile::tempdir().unwrap();
    let cat = run(&["catalog", "nonsplit-extension"]);
    assert_eq!(cat.code, 0);
    let ext_path = write_doc(dir.path(), "ext.doc", &cat.stdout);

    let extracted = run(&["extract", &ext_path, "--extension", "nonsplit_ext"]);
    assert_eq!(extracted.code, 0, "stderr: {}", extracted.stderr);
    let c_path = write_doc(dir.path(), "cocycle.doc", &extracted.stdout);
    assert_eq!(run(&["check", &c_path]).code, 0);

    let rebuilt = run(&["extend", &c_path, "--cocycle", "nonsplit_ext_cocycle"]);
    assert_eq!(rebuilt.code, 0, "stderr: {}", rebuilt.stderr);
    let e2_path = write_doc(dir.path(), "rebuilt.doc", &rebuilt.stdout);
    assert_eq!(run(&["check", &e2_path]).code, 0);
}

#[test]
fn deform_emits_a_document_that_validates() {
    let cat = run(&["catalog", "diagonal-weights"]);
    assert_eq!(cat.code, 0);
    let deformed = run_with(
        &["deform", "-", "--object", "aff1_nij"],
        Some(&cat.stdout),
        &[],
    );
    assert_eq!(deformed.code, 0, "stderr: {}", deformed.stderr);
    let check = run_with(&["check", "-"], Some(&deformed.stdout), &[]);
    assert_eq!(
        check.code, 0,
        "deformed document fails check:\n{}",
        check.stdout
    );
}

#[test]
fn equiv_distinguishes_the_two_line_cocycle_classes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "cocycles.doc", COCYCLE_PAIR_DOC);

    let same = run(&["equiv", &path, "--a", "c0", "--b", "c0"]);
    assert_eq!(same.code, 0, "stderr: {}", same.stderr);
    assert!(same.stdout.contains("equivalent"), "got:\n{}", same.stdout);

    // The spelled-out aliases name the same flags.
    let diff = run(&["equiv", &path, "--first", "c0", "--second", "c1"]);
    assert_eq!(diff.code, 1);
    assert!(
        diff.stdout.contains("not equivalent"),
        "got:\n{}",
        diff.stdout
    );

    let data = run(&["equiv", &path, "--a", "c0", "--b", "c1", "--format", "data"]);
    assert_eq!(data.stdout, "equivalent false\n");
}

#[test]
fn wells_der_on_the_split_extension_reports_a_lift() {
    let dir = tempfile::tempdir().unwrap();
    let cat = run(&["catalog", "split-extension"]);
    assert_eq!(cat.code, 0);
    let path = write_doc(dir.path(), "split.doc", &cat.stdout);
    let out = run(&[
        "wells",
        "der",
        &path,
        "--extension",
        "split_ext",
        "--pair",
        "unit_pair",
    ]);
    assert_eq!(
        out.code, 0,
        "stdout:\n{}\nstderr: {}",
        out.stdout, out.stderr
    );
    assert!(out.stdout.contains("verdict: inducible"));
    assert!(
        out.stdout.contains("lift:"),
        "lift missing from:\n{}",
        out.stdout
    );
    let data = run(&[
        "wells",
        "der",
        &path,
        "--extension",
        "split_ext",
        "--pair",
        "unit_pair",
        "--format",
        "data",
    ]);
    assert!(data.stdout.contains("inducible true"));
    assert!(data.stdout.contains("lift 2 2"), "got:\n{}", data.stdout);
}

#[test]
fn wells_aut_rejects_a_non_automorphism_pair() {
    let dir = tempfile::tempdir().unwrap();
    let cat = run(&["catalog", "split-extension", "--field", "F2"]);
    assert_eq!(cat.code, 0);
    // The zero map on the kernel is not invertible, so the pair below
    // is not an automorphism pair. Blocks may appear in any order.
    let doc = format!(
        "{}\nbegin pair bad_pair\nkernel_map g_op\nbase_map v_op\nend\n",
        cat.stdout
    );
    let path = write_doc(dir.path(), "split.doc", &doc);

    let good = run(&[
        "wells",
        "aut",
        &path,
        "--extension",
        "split_ext",
        "--pair",
        "unit_pair",
    ]);
    assert_eq!(
        good.code, 0,
        "stdout:\n{}\nstderr: {}",
        good.stdout, good.stderr
    );
    assert!(good.stdout.contains("verdict: inducible"));

    let bad = run(&[
        "wells",
        "aut",
        &path,
        "--extension",
        "split_ext",
        "--pair",
        "bad_pair",
    ]);
    assert_eq!(
        bad.code, 1,
        "stdout:\n{}\nstderr: {}",
        bad.stdout, bad.stderr
    );
    assert!(bad.stderr.contains("error:"));
}

#[test]
fn sequence_commands_certify_the_split_extension() {
    let dir = tempfile::tempdir().unwrap();
    let cat = run(&["catalog", "split-extension", "--field", "F2"]);
    let path = write_doc(dir.path(), "split.doc", &cat.stdout);

    let aut = run(&[
        "sequence",
        "aut",
        &path,
        "--extension",
        "split_ext",
        "--format",
        "data",
    ]);
    assert_eq!(
        aut.code, 0,
        "stdout:\n{}\nstderr: {}",
        aut.stdout, aut.stderr
    );
    assert!(aut.stdout.contains("passed true"));
    assert!(aut.stdout.contains("split true"));

    let der = run(&[
        "sequence",
        "der",
        &path,
        "--extension",
        "split_ext",
        "--format",
        "data",
    ]);
    assert_eq!(
        der.code, 0,
        "stdout:\n{}\nstderr: {}",
        der.stdout, der.stderr
    );
    assert!(der.stdout.contains("passed true"));
    assert!(der.stdout.contains("split true"));

    let cat_n = run(&["catalog", "nonsplit-extension", "--field", "F2"]);
    let path_n = write_doc(dir.path(), "nonsplit.doc", &cat_n.stdout);
    let der_n = run(&[
        "sequence",
        "der",
        &path_n,
        "--extension",
        "nonsplit_ext",
        "--format",
        "data",
    ]);
    assert_eq!(der_n.code, 0);
    assert!(
        der_n.stdout.contains("split false"),
        "got:\n{}",
        der_n.stdout
    );
}

#[test]
fn oracle_nijenhuis_counts_match_the_frozen_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "sweep.doc", SWEEP_DOC);

    let aff = run(&[
        "oracle",
        "nijenhuis",
        &path,
        "--algebra",
        "aff",
        "--format",
        "data",
    ]);
    assert_eq!(aff.code, 0, "stderr: {}", aff.stderr);
    assert!(aff.stdout.starts_with("count 16\n"), "got:\n{}", aff.stdout);

    let heis = run(&["oracle", "nijenhuis", &path, "--algebra", "heis"]);
    assert_eq!(heis.code, 0, "stderr: {}", heis.stderr);
    assert!(heis.stdout.contains("80 of 2^9"), "got:\n{}", heis.stdout);
}

#[test]
fn oracle_cocycles_and_correspondence_agree_with_the_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let ctx_path = write_doc(dir.path(), "ctx.doc", LINE_CONTEXT_DOC);
    let coc = run(&[
        "oracle",
        "cocycles",
        &ctx_path,
        "--context",
        "ctx",
        "--format",
        "data",
    ]);
    assert_eq!(
        coc.code, 0,
        "stdout:\n{}\nstderr: {}",
        coc.stdout, coc.stderr
    );
    assert!(coc.stdout.contains("agree true"));

    let pair_path = write_doc(dir.path(), "pair.doc", COCYCLE_PAIR_DOC);
    let corr = run(&[
        "oracle",
        "correspondence",
        &pair_path,
        "--source",
        "gn",
        "--target",
        "vn",
        "--format",
        "data",
    ]);
    assert_eq!(
        corr.code, 0,
        "stdout:\n{}\nstderr: {}",
        corr.stdout, corr.stderr
    );
    assert!(corr.stdout.contains("agree true"));
}

#[test]
fn oracle_crosschecks_agree_on_the_split_extension() {
    let dir = tempfile::tempdir().unwrap();
    let cat = run(&["catalog", "split-extension", "--field", "F2"]);
    let path = write_doc(dir.path(), "split.doc", &cat.stdout);
    for kind in ["aut", "der"] {
        let out = run(&[
            "oracle",
            "crosscheck",
            kind,
            &path,
            "--extension",
            "split_ext",
            "--pair",
            "unit_pair",
            "--format",
            "data",
        ]);
        assert_eq!(
            out.code, 0,
            "{kind}: stdout:\n{}\nstderr: {}",
            out.stdout, out.stderr
        );
        assert!(
            out.stdout.contains("agree true"),
            "{kind}: got:\n{}",
            out.stdout
        );
    }
}

#[test]
fn exhausted_budgets_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "sweep.doc", SWEEP_DOC);
    let out = run(&[
        "oracle",
        "nijenhuis",
        &path,
        "--algebra",
        "heis",
        "--budget",
        "100",
    ]);
    assert_eq!(
        out.code, 2,
        "stdout:\n{}\nstderr: {}",
        out.stdout, out.stderr
    );

    let via_env = run_with(
        &["oracle", "nijenhuis", &path, "--algebra", "heis"],
        None,
        &[("NIJLIE_BUDGET", "100")],
    );
    assert_eq!(via_env.code, 2);

    let flag_overrides_env = run_with(
        &[
            "oracle",
            "nijenhuis",
            &path,
            "--algebra",
            "heis",
            "--budget",
            "1000",
        ],
        None,
        &[("NIJLIE_BUDGET", "100")],
    );
    assert_eq!(flag_overrides_env.code, 0);

    let bad_env = run_with(
        &["oracle", "nijenhuis", &path, "--algebra", "heis"],
        None,
        &[("NIJLIE_BUDGET", "many")],
    );
    assert_eq!(bad_env.code, 3);
}

#[test]
fn load_validation_gates_commands_unless_disabled() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "mixed.doc", BAD_OBJECT_DOC);
    // The context is fine, but the document carries a failing algebra.
    let gated = run(&["h2", &path, "--context", "ctx"]);
    assert_eq!(gated.code, 1);
    assert!(gated.stderr.contains("bad"), "stderr: {}", gated.stderr);

    let allowed = run(&["h2", &path, "--context", "ctx", "--no-validate"]);
    assert_eq!(allowed.code, 0, "stderr: {}", allowed.stderr);
    assert!(allowed.stdout.contains("cohomology dimension: 1"));
}

#[test]
fn field_flag_must_match_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "ctx.doc", LINE_CONTEXT_DOC);
    let ok = run(&["check", &path, "--field", "F2"]);
    assert_eq!(ok.code, 0);
    let mismatch = run(&["check", &path, "--field", "Q"]);
    assert_eq!(mismatch.code, 3);
    assert!(
        mismatch.stderr.contains("F2"),
        "stderr: {}",
        mismatch.stderr
    );
    let nonsense = run(&["check", &path, "--field", "F6"]);
    assert_eq!(nonsense.code, 3);
}

#[test]
fn usage_errors_exit_three_and_help_exits_zero() {
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("catalog"));

    let unknown = run(&["frobnicate"]);
    assert_eq!(unknown.code, 3);

    let bad_entry = run(&["catalog", "no-such-entry"]);
    assert_eq!(bad_entry.code, 3);
    assert!(
        bad_entry.stderr.contains("identity-nijenhuis"),
        "stderr: {}",
        bad_entry.stderr
    );
}
