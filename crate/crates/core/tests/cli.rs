use std::path::{Path, PathBuf};
use std::process::Command;

use steiner_circles::cli::{Shape, SolutionReport};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn steiner(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_steiner"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Numbers following `key` on the line that starts with `key`.
fn numbers(text: &str, key: &str) -> Vec<f64> {
    let line = text
        .lines()
        .find(|l| l.starts_with(key))
        .unwrap_or_else(|| panic!("no `{key}` line in\n{text}"));
    line.split_whitespace()
        .filter_map(|t| t.parse::<f64>().ok())
        .collect()
}

#[test]
fn orthogonal_reference_gives_the_radical_center_circle() {
    let (code, out, _) = steiner(&["solve", path(&golden("reference_orthogonal.toml"))]);
    assert_eq!(code, 0);
    let report = SolutionReport::parse(&out).unwrap();
    assert_eq!(report.solutions.len(), 1);
    let s = &report.solutions[0];
    let Shape::Circle { center, radius } = s.shape else {
        panic!("expected a circle");
    };
    assert!((center.x - 2.0).abs() < 1e-9 && (center.y - 1.5).abs() < 1e-9);
    assert!((radius - 2.29129).abs() < 1e-5);
    assert!(s.residuals_deg.iter().all(|r| *r < 1e-5));
}

#[test]
fn tangent_reference_with_all_variants() {
    let (code, out, _) = steiner(&["solve", path(&golden("reference_tangent.toml")), "--all"]);
    assert_eq!(code, 0);
    let report = SolutionReport::parse(&out).unwrap();
    assert!(report.enumerate_all);
    assert!(!report.solutions.is_empty());
    for s in &report.solutions {
        assert!(s.residuals_deg.iter().all(|r| r.to_radians() <= 1e-7));
    }
}

#[test]
fn invalid_inputs_exit_1_with_diagnostics() {
    let (code, _, err) = steiner(&["solve", path(&golden("overlapping.toml"))]);
    assert_eq!(code, 1);
    assert!(
        err.contains("OverlappingCircles: circles 1 and 2 overlap"),
        "{err}"
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(golden("reference_orthogonal.toml"))
        .unwrap()
        .replace("[90.0, 90.0, 90.0]", "[90.0, 91.0, 90.0]");
    std::fs::write(&bad, text).unwrap();
    let (code, _, err) = steiner(&["solve", path(&bad)]);
    assert_eq!(code, 1);
    assert!(
        err.contains("line 2: angles_deg[2]: 91 is outside [0, 90]"),
        "{err}"
    );

    let (code, _, err) = steiner(&[
        "solve",
        path(&golden("reference_orthogonal.toml")),
        "--pair",
        "14",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown pair"), "{err}");
}

#[test]
fn no_solution_writes_an_explicit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let (code, _, _) = steiner(&[
        "solve",
        path(&golden("reference_orthogonal.toml")),
        "--tol",
        "1e-20",
        "-o",
        path(&out),
    ]);
    assert_eq!(code, 2);
    let report = SolutionReport::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.solutions.is_empty());
    assert_eq!(report.status(), "no_solution");
}

fn count(svg: &str, needle: &str) -> usize {
    svg.matches(needle).count()
}

#[test]
fn render_structure() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let svg = dir.path().join("figure.svg");
    let problem = golden("reference_tangent.toml");
    let (code, _, _) = steiner(&["solve", path(&problem), "--all", "-o", path(&report)]);
    assert_eq!(code, 0);
    let n = SolutionReport::parse(&std::fs::read_to_string(&report).unwrap())
        .unwrap()
        .solutions
        .len();

    let (code, _, _) = steiner(&["render", path(&problem), path(&report), "-o", path(&svg)]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains(r#"version="1.1""#));
    assert_eq!(count(&text, "<circle "), 3 + n);
    assert_eq!(count(&text, r#"class="given""#), 3);
    assert_eq!(count(&text, r#"class="solution""#), n);

    let (code, _, _) = steiner(&[
        "render",
        path(&problem),
        path(&report),
        "-o",
        path(&svg),
        "--show-inversion",
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(count(&text, r#"class="inversion""#), 1);
    assert_eq!(count(&text, r#"class="image""#), 3);

    // an empty report draws the given circles only
    let (code, _, _) = steiner(&[
        "solve",
        path(&golden("reference_orthogonal.toml")),
        "--tol",
        "1e-20",
        "-o",
        path(&report),
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = steiner(&[
        "render",
        path(&golden("reference_orthogonal.toml")),
        path(&report),
        "-o",
        path(&svg),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(count(&text, "<circle "), 3);
}

#[test]
fn render_viewbox_has_a_ten_percent_margin() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let svg = dir.path().join("figure.svg");
    let problem = golden("reference_orthogonal.toml");
    steiner(&["solve", path(&problem), "-o", path(&report)]);
    steiner(&["render", path(&problem), path(&report), "-o", path(&svg)]);
    let text = std::fs::read_to_string(&svg).unwrap();
    let start = text.find("viewBox=\"").unwrap() + 9;
    let end = start + text[start..].find('"').unwrap();
    let v: Vec<f64> = text[start..end]
        .split(' ')
        .map(|t| t.parse().unwrap())
        .collect();
    // the given circles reach x in [-1, 5] and y in [-1, 5]; the solution
    // circle about (2, 1.5) with radius sqrt(5.25) stays inside that box
    let pad = 0.1 * 6.0;
    let expected = [-1.0 - pad, -5.0 - pad, 6.0 + 2.0 * pad, 6.0 + 2.0 * pad];
    for (got, want) in v.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{v:?}");
    }
}

#[test]
fn invert_pair_gives_limiting_points() {
    let (code, out, _) = steiner(&["invert", path(&golden("pair.toml"))]);
    assert_eq!(code, 0);
    let lp = numbers(&out, "limiting_points");
    let s3 = 3f64.sqrt();
    assert!((lp[0] - (2.0 - s3)).abs() < 1e-12 && lp[1].abs() < 1e-12);
    assert!((lp[2] - (2.0 + s3)).abs() < 1e-12 && lp[3].abs() < 1e-12);
    assert!(numbers(&out, "concentricity_residual")[0] < 1e-9);
}

#[test]
fn invert_reports_lines_and_errors() {
    let (code, out, _) = steiner(&["invert", path(&golden("explicit_inversion.toml"))]);
    assert_eq!(code, 0);
    // the circle through the centre: the line x = R^2 / (2r) = 2
    assert_eq!(
        numbers(&out, "image circle 1 -> line"),
        vec![1.0, 1.0, 0.0, 2.0]
    );
    assert!(out.contains("image point 1 -> point 1.0000000000000000e0 0.0000000000000000e0"));

    let (code, _, err) = steiner(&["invert", path(&golden("tangent_pair.toml"))]);
    assert_eq!(code, 1);
    assert!(err.contains("TangentPair"), "{err}");
}

#[test]
fn trace_subcommands() {
    let (code, out, _) = steiner(&["trace", "legs", "2", "30"]);
    assert_eq!(code, 0);
    assert!((numbers(&out, "opposite")[0] - 1.0).abs() < 1e-12);
    assert!((numbers(&out, "adjacent")[0] - 3f64.sqrt()).abs() < 1e-12);

    let (code, text, _) = steiner(&["trace", "show", "circumcircle"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("trace v1 circumcircle\n"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("circumcircle.trace");
    std::fs::write(&file, &text).unwrap();
    let by_name = steiner(&["trace", "replay", "circumcircle", "0,0", "2,0", "1,1"]);
    let by_file = steiner(&["trace", "replay", path(&file), "0,0", "2,0", "1,1"]);
    assert_eq!(by_name.0, 0);
    assert_eq!(by_name.1, by_file.1);

    let (code, _, err) = steiner(&["trace", "replay", "circumcircle", "0,0", "1,0", "2,0"]);
    assert_eq!(code, 1);
    assert!(err.contains("BranchMiss"), "{err}");
}
