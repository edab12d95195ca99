use std::path::PathBuf;
use std::process::Command;

use toric_embed::charts::build_atlas;
use toric_embed::cli::run;
use toric_embed::report::parse_equations_json;
use toric_embed::scene::parse_scene;
use toric_embed::subtorus::{defining_equations, validate_subspace, BinomialEquation};

fn scene(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenes")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("toric-embed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(["toric-embed", "smoothness", &scene("cp2_p11")]).code,
        0
    );
    let singular = run(["toric-embed", "smoothness", &scene("cp2_p31")]);
    assert_eq!(singular.code, 1);
    assert!(singular.stdout.contains("verdict: SINGULAR"));
    assert!(singular
        .stdout
        .contains("witness: chart (2,0), support {}, point (0,0), rank 0 < 1"));
    assert_eq!(
        run(["toric-embed", "verify", &scene("bad_triangle")]).code,
        2
    );
    assert_eq!(run(["toric-embed", "moment", &scene("cp2_p31")]).code, 1);
    assert_eq!(
        run(["toric-embed", "moment", "--unchecked", &scene("cp2_p31")]).code,
        0
    );
    assert_eq!(run(["toric-embed", "frobnicate"]).code, 2);
    let help = run(["toric-embed", "--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("classify-directions"));
}

#[test]
fn bad_scenes_exit_2() {
    let cases = [
        (
            "zero_offset.json",
            r#"{"dimension": 2, "polytope": [[0,0],[2,0],[0,2]], "subspace": [[1,1]], "offset_exp": [0, 1]}"#,
        ),
        ("syntax.json", "{\"dimension\": 2,\n \"polytope\": [[0,0]"),
        (
            "unknown.json",
            r#"{"dimension": 2, "polytope": [[0,0],[2,0],[0,2]], "colour": "red"}"#,
        ),
        (
            "dependent.json",
            r#"{"dimension": 2, "polytope": [[0,0],[2,0],[0,2]], "subspace": [[1,0],[2,0]]}"#,
        ),
        (
            "not_primitive.json",
            r#"{"dimension": 2, "polytope": [[0,0],[2,0],[0,2]], "subspace": [[2,2]]}"#,
        ),
    ];
    for (name, text) in cases {
        let path = temp_file(name, text);
        let out = run(["toric-embed", "smoothness", path.to_str().unwrap()]);
        assert_eq!(out.code, 2, "{name}: {out:?}");
        assert!(out.stderr.starts_with("error: "), "{name}");
    }
    let syntax = run([
        "toric-embed",
        "verify",
        temp_file("syntax2.json", "{\"dimension\": 2,\n \"polytope\": [[0,0]")
            .to_str()
            .unwrap(),
    ]);
    assert!(syntax.stderr.contains("line 2"), "{}", syntax.stderr);
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["verify", "equations", "smoothness", "moment"] {
        for json in [false, true] {
            let mut args = vec!["toric-embed", cmd];
            if json {
                args.push("--json");
            }
            let path = scene("cp3_blowup_p");
            args.push(&path);
            let a = run(args.clone());
            let b = run(args);
            assert_eq!(a, b);
            assert_eq!(a.code, 0);
            if json {
                serde_json::from_str::<serde_json::Value>(&a.stdout).unwrap();
            }
        }
    }
}

#[test]
fn equations_json_round_trips() {
    for name in ["cp2_p10_shifted", "cp2_p31", "f1_p10", "cp3_blowup_p"] {
        let out = run(["toric-embed", "equations", "--json", &scene(name)]);
        assert_eq!(out.code, 0);
        let parsed = parse_equations_json(&out.stdout).unwrap();
        let doc = parse_scene(&std::fs::read_to_string(scene(name)).unwrap()).unwrap();
        let d = toric_embed::polytope::verify_delzant(&doc.polytope).unwrap();
        let atlas = build_atlas(&d);
        let sub = validate_subspace(&doc.subspace, &doc.offset_exp).unwrap();
        let direct: Vec<BinomialEquation> = atlas
            .labels()
            .flat_map(|l| defining_equations(&atlas, &sub, l).unwrap())
            .collect();
        assert_eq!(parsed, direct, "{name}");
    }
}

#[test]
fn shifted_equations_carry_the_offset() {
    let out = run(["toric-embed", "equations", &scene("cp2_p10_shifted")]);
    assert_eq!(
        out.stdout,
        "n = 2, k = 1, q = (0,1)\nchart (0,0):\n  f2 = z2 - 2\nchart (0,2):\n  f2 = 1 - 2*z1\nchart (2,0):\n  f2 = z1 - 2*z2\n"
    );
}

#[test]
fn moment_reports_the_interval() {
    let out = run(["toric-embed", "moment", &scene("cp2_p11")]);
    assert_eq!(out.code, 0);
    assert!(out
        .stdout
        .contains("image polytope in R^1: vertices (0) (2)"));
    assert!(out
        .stdout
        .contains("theorem check (hull vertices = certified vertex images): PASS"));
}

#[test]
fn figures_need_a_planar_polytope() {
    let svg = std::env::temp_dir().join(format!("toric-embed-cli-{}-3d.svg", std::process::id()));
    let out = run([
        "toric-embed",
        "figure",
        &scene("cp3_blowup_p"),
        "-o",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("dimension 3"));
}

#[test]
fn binary_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_toric-embed");
    let out = Command::new(bin)
        .args(["smoothness", &scene("cp2_p31")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("SINGULAR"));
    let out = Command::new(bin)
        .args(["classify-directions", &scene("cp2_p11"), "--box", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.ends_with("6 of 8 directions SMOOTH\n"), "{text}");
}
