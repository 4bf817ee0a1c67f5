use std::process::{Command, Output};

use ncformal::quiver::Quiver;
use ncformal::sample;
use serde_json::Value;

fn ncformal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncformal")).args(args).output().expect("spawn ncformal")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn output_is_deterministic() {
    let loops = Quiver::loops(2).to_json();
    let cases: Vec<Vec<&str>> = vec![
        vec!["hall-basis", "--d", "3", "--weight", "4"],
        vec!["pbw-normalize", "--d", "2", "x2*x1*x2 + 3*x1"],
        vec!["root-roundtrip", "--free", "2", "2", "--algebra", "upper", "--samples", "10", "--seed", "7"],
        vec!["strata", "--quiver", &loops, "--n", "2", "--m", "3", "--local-quiver", "1"],
    ];
    for args in cases {
        let a = ncformal(&args);
        let b = ncformal(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(json(&a)["schema"], "ncformal/1");
    }
}

#[test]
fn exit_codes_and_diagnostics() {
    let o = ncformal(&["pbw-normalize", "--d", "2", "x1*+"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[Parse]"));
    let o = ncformal(&["pbw-normalize", "--d", "2", "x3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[GeneratorOutOfRange]"));
    let o = ncformal(&["hall-basis", "--d", "2", "--weight", "30"]);
    assert_eq!(o.status.code(), Some(3));
    let o = ncformal(&["check-localization", "--quiver", r#"{"vertices":1,"arrows":[]}"#, "--n", "2", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    assert_eq!(ncformal(&["--version"]).status.code(), Some(0));
    assert_eq!(ncformal(&["euler"]).status.code(), Some(1));
}

#[test]
fn file_and_inline_inputs_agree() {
    let dir = std::env::temp_dir().join(format!("ncformal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let q = Quiver::new(2, vec![(1, 2), (2, 2)]).unwrap().to_json();
    let path = dir.join("q.json");
    std::fs::write(&path, &q).unwrap();
    let from_file = ncformal(&["rep-decompose", "--quiver", path.to_str().unwrap(), "--n", "3"]);
    let inline = ncformal(&["rep-decompose", "--quiver", &q, "--n", "3"]);
    assert_eq!(json(&from_file), json(&inline));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn normal_forms_survive_the_cli_round_trip() {
    let mut rng = sample::rng(4);
    for _ in 0..8 {
        let p = sample::ncpoly(&mut rng, 2, 4, 4).to_string();
        let nf = ncformal(&["pbw-normalize", "--d", "2", &p]);
        let text = String::from_utf8(nf.stdout.clone()).unwrap();
        let prod = ncformal(&["trunc-mul", "--d", "2", "--K", "4", &text, "1"]);
        assert_eq!(json(&nf)["terms"], json(&prod)["terms"], "{p}");
    }
}

#[test]
fn text_format_is_plain() {
    let o = ncformal(&["hall-basis", "--d", "2", "--weight", "3", "--format", "text"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s.lines().count(), 5);
    assert!(s.starts_with("   1  w=1  ord=0"));
    let o = ncformal(&["selftest", "--only", "11"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("PASS"));
}

#[test]
fn extended_quiver_feeds_back_in() {
    let ext = ncformal(&["extend", "--quiver", &Quiver::loops(1).to_json(), "--n", "2", "--inverse"]);
    let v = json(&ext);
    let q = Quiver::from_json(&v.to_string()).unwrap();
    assert_eq!(q.vertices(), 2);
    assert_eq!(q.num_arrows(), 5);
}
