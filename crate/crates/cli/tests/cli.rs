use std::process::Command;

use biharmonic_cli::{recheck, run};

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_biharm")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn argv<'a>(args: &[&'a str]) -> Vec<&'a str> {
    std::iter::once("biharm").chain(args.iter().copied()).collect()
}

#[test]
fn binary_matches_library_and_exit_codes() {
    let args = ["solve", "zhang", "--n", "2"];
    let (code, stdout, stderr) = bin(&args);
    assert_eq!(code, 0);
    assert!(stderr.is_empty());
    assert_eq!(stdout, run(argv(&args)).stdout);
    let r = recheck(&stdout).unwrap();
    assert_eq!(r.roots.len(), 2);
    assert!(r.roots.iter().all(|x| x.residual <= 1e-12));

    assert_eq!(bin(&["solve", "zhang", "--n", "1"]).0, 3);
    assert_eq!(bin(&["solve", "nothing"]).0, 2);
    assert_eq!(bin(&["solve", "clifford", "--m1", "1"]).0, 2);
    assert_eq!(bin(&["--tol", "-1", "solve", "zhang", "--n", "2"]).0, 2);
    let (code, _, err) = bin(&["verify", "torus", "--radii-sq", "0.5,0.6"]);
    assert_eq!(code, 3);
    assert!(err.contains("Σ a_k² - 1"));
    let (code, out, _) = bin(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("solve"));
}

#[test]
fn integer_flags_accept_integral_reals() {
    let a = run(argv(&["solve", "clifford", "--m1", "1.0", "--m2", "3"]));
    let b = run(argv(&["solve", "clifford", "--m1", "1", "--m2", "3"]));
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout.replace("1.0", "1"), b.stdout.replace("1.0", "1"));
    assert_eq!(run(argv(&["solve", "clifford", "--m1", "-1", "--m2", "3"])).code, 2);
}

#[test]
fn grid_output_is_ordered_and_stable() {
    let args = ["solve", "clifford", "--grid", "6"];
    let first = run(argv(&args)).stdout;
    for _ in 0..3 {
        assert_eq!(run(argv(&args)).stdout, first);
    }
    let r = recheck(&first).unwrap();
    let labels: Vec<&str> = r.roots.iter().map(|x| x.label.as_str()).collect();
    assert!(labels[0].starts_with("m1=1,m2=1"));
    assert!(labels.last().unwrap().starts_with("m1=6,m2=6"));
}

#[test]
fn sample_csv_layout() {
    let out = run(argv(&["sample", "curve", "--family", "tau12-pm1", "--n", "2", "--count", "5", "--ds", "0.25"]));
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "s,x1,x2,x3,x4,x5,x6");
    assert_eq!(lines.len(), 6);
    for (i, l) in lines[1..].iter().enumerate() {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.25 * i as f64);
        let norm: f64 = v[1..].iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }
    assert_eq!(run(argv(&["sample", "curve", "--family", "sphere-helix", "--k1", "1"])).code, 2);
}

#[test]
fn verdicts_for_each_family() {
    let cases = [
        (vec!["--family", "tau12-pm1"], "lambda-biharmonic(-4)"),
        (vec!["--family", "tau12-zero-circle"], "proper-biharmonic"),
        (vec!["--family", "tau12-zero-helix", "--k1", "0.3"], "proper-biharmonic"),
        (vec!["--family", "holomorphic-circle", "--k1", "0.5"], "not-biharmonic"),
        (vec!["--family", "sphere-helix", "--k1", "0.6", "--k2", "0.8"], "proper-biharmonic"),
        (vec!["--family", "horizontal-geodesic", "--n", "2"], "harmonic"),
    ];
    for (extra, want) in cases {
        let mut args = vec!["verify", "curve", "--samples", "12"];
        args.extend(extra);
        let out = run(argv(&args));
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(recheck(&out.stdout).unwrap().verdict, want, "{args:?}");
    }
}

#[test]
fn classify_reports_unclassified_and_interval_warning() {
    let out = run(argv(&[
        "classify", "helix", "--k1", "1", "--k2", "2", "--k3", "0.5", "--torsions", "0.3,0.3,0.3,0.3,0.3,0.3",
    ]));
    let r = recheck(&out.stdout).unwrap();
    assert_eq!(r.verdict, "unclassified");
    assert_eq!(r.annotations["rows"].as_array().unwrap().len(), 4);

    // cos²α₀ between (7-4√3)/3 and (7-4√3)/2
    let c2: f64 = 0.5 * ((7.0 - 4.0 * 3f64.sqrt()) / 3.0 + (7.0 - 4.0 * 3f64.sqrt()) / 2.0);
    let alpha = format!("{}", (-c2.sqrt()).acos());
    let out = run(argv(&["solve", "helix", "--alpha0", &alpha]));
    let r = recheck(&out.stdout).unwrap();
    assert_eq!(r.verdict, "no-solution");
    assert_eq!(r.warnings.len(), 1);
    assert_eq!(run(argv(&["solve", "helix", "--alpha0", "0"])).code, 3);
}
