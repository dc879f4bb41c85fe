use std::path::Path;
use std::process::{Command, Output};

use wsuper::io::{from_json, AlgebraArtifact, NilpotentArtifact, WPresentationArtifact};

fn wsuper(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsuper"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("WSUPER_OUT")
        .output()
        .expect("binary runs")
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = match std::fs::read_dir(dir) {
        Ok(rd) => rd.map(|e| e.unwrap().file_name().into_string().unwrap()).collect(),
        Err(_) => Vec::new(),
    };
    v.sort();
    v
}

const ALL_FOUR: [&str; 4] = ["algebra.json", "modp_report.csv", "nilpotent.json", "wpresentation.json"];

#[test]
fn osp12_full_pipeline_writes_all_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["verify", "all", "--family", "osp", "--m", "1", "--n", "2", "--max-degree", "10", "--primes", "3,5"];
    let o = wsuper(&args, tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(files(tmp.path()), ALL_FOUR);

    let alg: AlgebraArtifact = from_json(&std::fs::read_to_string(tmp.path().join("algebra.json")).unwrap()).unwrap();
    assert_eq!(alg.to_algebra().unwrap().sdim(), (3, 2));
    let nil: NilpotentArtifact =
        from_json(&std::fs::read_to_string(tmp.path().join("nilpotent.json")).unwrap()).unwrap();
    assert!(nil.nilpotent.checks.all_ok());
    let w: WPresentationArtifact =
        from_json(&std::fs::read_to_string(tmp.path().join("wpresentation.json")).unwrap()).unwrap();
    assert_eq!(w.generators.len(), 3);
    assert!(w.report.all_ok());
    assert!(w.graded.as_ref().unwrap().all_ok());
    let pres = w.to_presentation().unwrap();
    assert_eq!(pres.generators.len(), 3);

    let csv = std::fs::read_to_string(tmp.path().join("modp_report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("osp,1,2,regular,3,chi,36,3,12,true,true,true"));
    assert!(lines[2].starts_with("osp,1,2,regular,5,chi,100,5,20,true,true,true"));
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify", "all", "--family", "sl", "--m", "2", "--n", "1", "--nilpotent", "E12", "--primes", "3"];
    assert_eq!(wsuper(&args, a.path()).status.code(), Some(0));
    assert_eq!(wsuper(&args, b.path()).status.code(), Some(0));
    for name in ALL_FOUR {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn zero_nilpotent_gives_trivial_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wsuper(&["verify", "all", "--family", "gl", "--m", "1", "--n", "1", "--nilpotent", "zero", "--primes", "3"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let w: WPresentationArtifact =
        from_json(&std::fs::read_to_string(tmp.path().join("wpresentation.json")).unwrap()).unwrap();
    // For e = 0 the centralizer is everything: W is the whole enveloping
    // algebra and the reduced module is U_chi itself (delta = 1).
    assert_eq!(w.generators.len(), 4);
    assert!(w.frame_labels.iter().all(|l| l.starts_with('x') || l.starts_with('y')));
    let csv = std::fs::read_to_string(tmp.path().join("modp_report.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",3,chi,36,1,36,"), "{csv}");
}

#[test]
fn characteristic_two_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    let o = wsuper(&["modp", "suite", "--family", "osp", "--m", "1", "--n", "2", "--primes", "2,3"], &dir);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("restriction") && msg.contains("odd prime"), "{msg}");
    assert!(files(&dir).is_empty(), "no partial output on config errors");
    let stdout = String::from_utf8_lossy(&o.stdout);
    let summary: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(summary["status"], "error");
}

#[test]
fn sl_prime_dividing_m_minus_n_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wsuper(&["modp", "suite", "--family", "sl", "--m", "4", "--n", "1", "--primes", "3"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_max_degree_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wsuper(
        &["w", "relations", "--family", "sl", "--m", "2", "--n", "1", "--nilpotent", "E12", "--max-degree", "5"],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_nilpotent_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wsuper(&["nilpotent", "analyze", "--family", "gl", "--m", "1", "--n", "1", "--nilpotent", "E77"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_stages_write_only_their_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 3] = [
        (&["algebra", "build"], "algebra.json"),
        (&["nilpotent", "analyze"], "nilpotent.json"),
        (&["w", "solve"], "wpresentation.json"),
    ];
    for (cmd, file) in cases {
        let dir = tmp.path().join(file);
        let mut args = cmd.to_vec();
        args.extend(["--family", "gl", "--m", "2", "--n", "1"]);
        let o = wsuper(&args, &dir);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
        assert_eq!(files(&dir), vec![file.to_string()]);
    }
}

#[test]
fn env_var_sets_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_wsuper"))
        .args(["algebra", "build", "--family", "gl", "--m", "1", "--n", "1"])
        .env("WSUPER_OUT", tmp.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(files(tmp.path()), vec!["algebra.json".to_string()]);
}
