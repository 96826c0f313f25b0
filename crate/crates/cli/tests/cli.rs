use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn curvcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvcx"))
        .args(args)
        .env_remove("CURVCX_BUDGET")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("curvcx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn h73(name: &str) -> PathBuf {
    let path = scratch(name);
    let o = curvcx(&[
        "generate",
        "--family",
        "regular_pq",
        "--p",
        "7",
        "--q",
        "3",
        "--radius",
        "3",
        "--out",
        s(&path),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn generated_heptagonal_ball_validates() {
    let path = h73("h73-validate.cx");
    let o = curvcx(&["validate", "--in", s(&path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn heptagonal_corners_are_minus_one_over_42() {
    let path = h73("h73-curvature.cx");
    let o = curvcx(&["curvature", "--in", s(&path)]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("apartment,vertex,face,kappa_c_num,kappa_c_den,kappa_c")
    );
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(&cols[3..], ["-1", "42", "-1/42"], "{line}");
        rows += 1;
    }
    // 85 heptagons of B_3, seven corners each
    assert_eq!(rows, 85 * 7);
}

#[test]
fn malformed_file_is_a_usage_error() {
    let path = scratch("bad.cx");
    std::fs::write(&path, "{\"version\": 1, \"faces\": [[0, 1").unwrap();
    let o = curvcx(&["validate", "--in", s(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read complex"));
    let missing = curvcx(&["curvature", "--in", s(&scratch("missing.cx"))]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(curvcx(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        curvcx(&["generate", "--family", "regular_pq", "--out", "x.cx"])
            .status
            .code(),
        Some(2)
    );
    let path = h73("h73-same.cx");
    assert_eq!(
        curvcx(&["curvature", "--in", s(&path), "--out", s(&path)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        curvcx(&["eigenfunctions", "--in", s(&path)]).status.code(),
        Some(2)
    );
}

#[test]
fn broken_tessellation_fails_validation() {
    // two faces of a tetrahedron: the open edges break the tessellation axioms
    let path = scratch("pair.cx");
    let o = curvcx(&[
        "generate",
        "--family",
        "spherical",
        "--kind",
        "tetrahedron",
        "--out",
        s(&path),
    ]);
    assert!(o.status.success());
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let faces = doc["faces"].as_array_mut().unwrap();
    faces.truncate(2);
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = curvcx(&["validate", "--in", s(&path)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = scratch("trees-a.cx");
    let b = scratch("trees-b.cx");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let o = curvcx(&[
            "--threads",
            threads,
            "generate",
            "--family",
            "product_trees",
            "--r",
            "3",
            "--s",
            "3",
            "--radius",
            "2",
            "--seed",
            "7",
            "--out",
            s(path),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    for cmd in [
        &["curvature"][..],
        &["cheeger"],
        &["spectrum", "--radius", "1"],
        &["report"],
    ] {
        let run = |threads: &str| {
            let mut args = vec!["--threads", threads];
            args.extend_from_slice(cmd);
            args.extend_from_slice(&["--in", s(&a)]);
            let o = curvcx(&args);
            assert!(
                o.status.success(),
                "{cmd:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            o.stdout
        };
        assert_eq!(run("1"), run("3"), "{cmd:?}");
    }
}

#[test]
fn seed_changes_only_product_tree_sampling() {
    let gen = |family: &[&str], seed: &str, name: &str| {
        let path = scratch(name);
        let mut args = vec!["generate"];
        args.extend_from_slice(family);
        args.extend_from_slice(&["--radius", "2", "--seed", seed, "--out", s(&path)]);
        assert!(curvcx(&args).status.success());
        std::fs::read(path).unwrap()
    };
    let pq = ["--family", "regular_pq", "--p", "5", "--q", "4"];
    assert_eq!(gen(&pq, "0", "pq0.cx"), gen(&pq, "9", "pq9.cx"));
    let trees = [
        "--family",
        "product_trees",
        "--r",
        "3",
        "--s",
        "4",
        "--apartment-budget",
        "3",
    ];
    assert_ne!(gen(&trees, "0", "t0.cx"), gen(&trees, "9", "t9.cx"));
}

#[test]
fn budget_env_caps_generation() {
    let path = scratch("capped.cx");
    let o = Command::new(env!("CARGO_BIN_EXE_curvcx"))
        .args([
            "generate",
            "--family",
            "regular_pq",
            "--p",
            "7",
            "--q",
            "3",
            "--radius",
            "6",
            "--out",
            s(&path),
        ])
        .env("CURVCX_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn analysis_commands_produce_tables() {
    let path = h73("h73-tables.cx");
    let p = s(&path);
    let geo = stdout(&curvcx(&[
        "geodesics",
        "--in",
        p,
        "--from",
        "1",
        "--to",
        "30",
        "--enumerate",
    ]));
    assert!(geo.starts_with("distance,2\n"), "{geo}");
    let hyp = stdout(&curvcx(&["hyperbolicity", "--in", p]));
    assert!(hyp.starts_with("radius,sample,delta\n1,8,1/2\n"), "{hyp}");
    let ch = stdout(&curvcx(&[
        "cheeger", "--in", p, "--exact", "--region", "ball:1",
    ]));
    assert!(
        ch.contains("bound1,1/7\n") && ch.contains("min_ratio,1/2\n"),
        "{ch}"
    );
    let sp = stdout(&curvcx(&[
        "spectrum",
        "--in",
        p,
        "--radius",
        "2",
        "--operator",
        "degree",
    ]));
    assert_eq!(sp.lines().count(), 1 + 29);
    let ef = curvcx(&["eigenfunctions", "--in", p, "--radius", "2", "--search"]);
    assert!(ef.status.success());
    assert_eq!(
        stdout(&ef).lines().count(),
        1,
        "no finitely supported eigenfunctions expected"
    );

    let boundary = scratch("boundary.csv");
    let sphere: Vec<String> = (8..29).map(|f| format!("{f},1")).collect();
    std::fs::write(&boundary, format!("face,value\n{}\n", sphere.join("\n"))).unwrap();
    let d = curvcx(&[
        "dirichlet",
        "--in",
        p,
        "--radius",
        "2",
        "--boundary",
        s(&boundary),
    ]);
    assert!(d.status.success(), "{}", String::from_utf8_lossy(&d.stderr));
    for line in stdout(&d).lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{line}");
    }

    let rep = curvcx(&["report", "--in", p, "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&rep.stdout).unwrap();
    for row in json["rows"].as_array().unwrap() {
        let status = row["status"]["status"].as_str().unwrap();
        assert!(
            ["verified-at-scale", "hypothesis-not-met", "skipped-budget"].contains(&status),
            "{row}"
        );
    }
}
