//! End-to-end checks of the command surface: output formats, exit codes,
//! determinism, and round-trips.

use circpeak_cli::{run, EXIT_OK, EXIT_SCALE, EXIT_USAGE};

fn run_capture(argv: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn count_single_route() {
    let (code, out, _) = run_capture(&["count", "--n", "8", "--set", "6,7,8", "--method", "paths"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "2880\n");
}

#[test]
fn count_each_method_agrees() {
    for method in ["oracle", "closed", "dp", "genfunc", "paths"] {
        let (code, out, _) =
            run_capture(&["count", "--n", "7", "--set", "6,7", "--method", method]);
        assert_eq!(code, EXIT_OK, "method {method}");
        assert_eq!(out, "1200\n", "method {method}");
    }
}

#[test]
fn count_all_routes() {
    let (code, out, _) = run_capture(&["count", "--n", "5", "--set", "4,5", "--method", "all"]);
    assert_eq!(code, EXIT_OK);
    for route in [
        "oracle: 12",
        "closed: 12",
        "dp: 12",
        "genfunc: 12",
        "paths: 12",
    ] {
        assert!(out.contains(route), "missing {route:?} in {out}");
    }
    assert!(out.contains("agreement: 5 routes"));
}

#[test]
fn count_all_on_infeasible_set() {
    let (code, out, _) = run_capture(&["count", "--n", "6", "--set", "3,4", "--method", "all"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.lines().filter(|l| l.ends_with(": 0")).count() >= 4,
        "{out}"
    );
}

#[test]
fn count_closed_inapplicable() {
    let (code, _, err) =
        run_capture(&["count", "--n", "8", "--set", "3,5,8", "--method", "closed"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("closed forms"), "stderr: {err}");
}

#[test]
fn count_scale_limits() {
    let (code, _, err) = run_capture(&["count", "--n", "13", "--set", "", "--method", "oracle"]);
    assert_eq!(code, EXIT_SCALE);
    assert!(err.contains("oracle scale exceeded"));
    let (code, _, _) = run_capture(&["count", "--n", "40", "--set", "", "--method", "dp"]);
    assert_eq!(code, EXIT_SCALE);
    // the paths dispatcher has no such limit
    let (code, out, _) = run_capture(&["count", "--n", "40", "--set", "", "--method", "paths"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "549755813888"); // 2^39
}

#[test]
fn enumerate_lists_class_with_summary() {
    let (code, out, _) = run_capture(&["enumerate", "--n", "5", "--set", "4,5"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0], "1 4 2 5 3");
    assert_eq!(lines[12], "# total: 12");
}

#[test]
fn enumerate_empty_set_and_infeasible() {
    let (code, out, _) = run_capture(&["enumerate", "--n", "3", "--set", ""]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1 2 3\n2 1 3\n3 1 2\n3 2 1\n# total: 4\n");

    let (code, out, _) = run_capture(&["enumerate", "--n", "4", "--set", "3,4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "# total: 0\n");
}

#[test]
fn table_text_layout() {
    let (code, out, _) = run_capture(&["table", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("{}"));
    assert!(out.contains("4"));
    assert!(out.contains("{3}"));
    assert!(out.contains("# classes: 2, total: 6"));
}

#[test]
fn table_csv_sums_to_factorial() {
    let (code, out, _) = run_capture(&["table", "--n", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,S,count"));
    let mut total = 0u64;
    let mut rows = 0;
    for line in lines {
        total += line.rsplit(',').next().unwrap().parse::<u64>().unwrap();
        rows += 1;
    }
    assert_eq!(rows, 6);
    assert_eq!(total, 120);
}

#[test]
fn table_json_round_trips() {
    let (code, out, _) = run_capture(&["table", "--n", "8", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let table = circpeak::CountTable::from_json(&out).unwrap();
    assert_eq!(table.get(&[3, 5, 8]).to_string(), "48");
    assert_eq!(table.total().to_string(), "40320");
}

#[test]
fn coeffs_outputs() {
    let (code, out, _) = run_capture(&["coeffs", "--kind", "b", "--k", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("k=4: 768 486 96 3"), "out: {out}");
    assert!(out.contains("k=3:  27  12  1"), "out: {out}");

    let (code, out, _) = run_capture(&["coeffs", "--kind", "a", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("k=2:   9 12 3"), "out: {out}");

    let (code, out, _) = run_capture(&["coeffs", "--kind", "b", "--k", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "k=1: 1/2\n");

    let (code, out, _) = run_capture(&["coeffs", "--kind", "a", "--k", "1", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "k,i,value\n0,0,1/2\n1,0,1\n1,1,1\n");
}

#[test]
fn paths_reports_both_routes() {
    let (code, out, _) = run_capture(&["paths", "--i", "0", "--r", "4", "--n", "6", "--k", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "w_enumeration: 2\nw_closed: 2\n");

    let (code, out, _) = run_capture(&["paths", "--i", "1", "--r", "4", "--n", "5", "--k", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("w_closed: 4"));

    let (code, out, _) = run_capture(&["paths", "--i", "0", "--r", "3", "--n", "4", "--k", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("w_closed: 0"));
}

#[test]
fn paths_listing_shows_per_step_weights() {
    let (code, out, _) = run_capture(&[
        "paths", "--i", "0", "--r", "3", "--n", "7", "--k", "1", "--list",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("HHR: 2*2*2 = 8"));
    assert!(out.contains("RHH: 2*4*4 = 32"));
    assert!(out.contains("w_enumeration: 56"));
}

#[test]
fn paths_grid_csv() {
    let (code, out, _) = run_capture(&[
        "paths", "--i", "1", "--r", "4", "--n", "8", "--k", "1", "--grid",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("i,r,n,k,w\n"));
    assert!(out.contains("0,4,6,1,2\n"));
    assert!(out.contains("1,4,5,0,4\n"));
}

#[test]
fn peaks_command() {
    let (code, out, _) = run_capture(&["peaks", "--perm", "4 8 3 6 2 5 1 7"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "{5,6,8}\n");

    let (code, out, _) = run_capture(&["peaks", "--perm", "1,2,3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "{}\n");

    let (code, _, err) = run_capture(&["peaks", "--perm", "1 1 2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("invalid permutation"));
}

#[test]
fn verify_passes_and_scales_down() {
    let (code, out, _) = run_capture(&["verify", "--max-n", "6", "--threads", "2"]);
    assert_eq!(code, EXIT_OK, "output: {out}");
    assert!(out.contains("PASS table3-all-routes"));
    assert!(out.contains("all 13 checks passed"));

    let (code, out, _) = run_capture(&["verify", "--max-n", "3"]);
    assert_eq!(code, EXIT_OK, "output: {out}");
}

#[test]
fn verify_rejects_overscale() {
    let (code, _, err) = run_capture(&["verify", "--max-n", "13"]);
    assert_eq!(code, EXIT_SCALE);
    assert!(err.contains("oracle scale exceeded"));
}

#[test]
fn usage_errors() {
    let (code, _, _) = run_capture(&["count", "--n", "5", "--set", "4,5", "--method", "bogus"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = run_capture(&["nonsense"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, err) = run_capture(&["count", "--n", "5", "--set", "4,x"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("invalid peak set"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["table", "--n", "7", "--format", "json"],
        vec!["table", "--n", "7", "--format", "csv"],
        vec!["count", "--n", "7", "--set", "3,5,7", "--method", "all"],
        vec!["coeffs", "--kind", "a", "--k", "6", "--format", "json"],
    ] {
        let first = run_capture(&args);
        let second = run_capture(&args);
        assert_eq!(first, second, "args: {args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = run_capture(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("count"));
    assert!(out.contains("verify"));
}
