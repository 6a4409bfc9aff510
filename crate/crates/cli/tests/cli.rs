use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kldiv::format::{OutputDocument, Payload};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn kldiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kldiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> OutputDocument {
    let out = kldiv(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    OutputDocument::from_slice(&out.stdout).expect("output parses")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn kld_scalar_fixture() {
    let doc = run_ok(&["kld", &path("scalar.json")]);
    assert_eq!(doc.command, "kld");
    assert_eq!(doc.instance.as_deref(), Some("scalar"));
    match doc.payload {
        Payload::Scalar { value, .. } => {
            let expected = 0.5 * (2f64.ln() - 0.5);
            assert!((value - expected).abs() < 1e-15);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn kld_identical_is_zero() {
    match run_ok(&["kld", &path("identical.json")]).payload {
        Payload::Scalar { value, .. } => assert_eq!(value, 0.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn jacobian_blocks_and_lengths() {
    let doc = run_ok(&["jacobian", &path("valid.json"), "--basis", "vech"]);
    let Payload::Jacobian { blocks, assembled } = doc.payload else {
        panic!("wrong payload");
    };
    let lens: Vec<_> = blocks.iter().map(|b| (b.block.as_str(), b.len)).collect();
    assert_eq!(lens, [("m", 2), ("w", 2), ("S", 3), ("V", 3)]);
    assert_eq!(assembled.unwrap().len, 10);

    let doc = run_ok(&["jacobian", &path("valid.json"), "--basis", "vec", "--block", "S"]);
    let Payload::Jacobian { blocks, assembled } = doc.payload else {
        panic!("wrong payload");
    };
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0].len, 4);
    assert!(assembled.is_none());
}

#[test]
fn hessian_all_is_symmetric_with_eigenvalue() {
    let doc = run_ok(&["hessian", &path("valid.json")]);
    assert_eq!(doc.basis, Some(kldiv::Basis::Vech));
    let Payload::Hessian { blocks, assembled, symmetry_residual, min_eigenvalue } = doc.payload
    else {
        panic!("wrong payload");
    };
    assert_eq!(blocks.len(), 16);
    let h = assembled.unwrap().to_matrix().unwrap();
    assert_eq!(h.shape(), (10, 10));
    assert_eq!(symmetry_residual, 0.0);
    assert!(min_eigenvalue.is_some());
}

#[test]
fn hessian_single_block_pairs_with_transpose() {
    let mv = run_ok(&["hessian", &path("valid.json"), "--block", "mV"]);
    let vm = run_ok(&["hessian", &path("valid.json"), "--block", "Vm"]);
    let get = |doc: OutputDocument| match doc.payload {
        Payload::Hessian { blocks, symmetry_residual, .. } => {
            assert_eq!(symmetry_residual, 0.0);
            blocks[0].to_matrix().unwrap()
        }
        other => panic!("{other:?}"),
    };
    let (a, b) = (get(mv), get(vm));
    assert_eq!(a.shape(), (2, 3));
    assert_eq!(a.transpose(), b);
}

#[test]
fn check_passes_on_fixtures() {
    for (name, count) in [("valid.json", 7), ("identical.json", 9)] {
        let doc = run_ok(&["check", &path(name)]);
        let Payload::Reports { all_passed, passed, reports, .. } = doc.payload else {
            panic!("wrong payload");
        };
        assert!(all_passed, "{reports:?}");
        assert_eq!(passed, count);
    }
}

#[test]
fn check_fails_with_exit_one() {
    let out = kldiv(&["check", &path("valid.json"), "--tol-hess", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = OutputDocument::from_slice(&out.stdout).unwrap();
    let Payload::Reports { all_passed, failed, .. } = doc.payload else {
        panic!("wrong payload");
    };
    assert!(!all_passed);
    assert_eq!(failed, 1);
}

#[test]
fn random_check_echoes_config() {
    let doc = run_ok(&["check", "--random", "2", "--seed", "9", "--trials", "3"]);
    assert_eq!(doc.config.seed, Some(9));
    assert_eq!(doc.config.random_n, Some(2));
    assert_eq!(doc.config.trials, Some(3));
    let Payload::Reports { reports, .. } = doc.payload else {
        panic!("wrong payload");
    };
    assert_eq!(reports.len(), 21);
    assert!(reports[20].name.starts_with("random[2]/"));
}

#[test]
fn identities_small_run() {
    let doc = run_ok(&["identities", "--seed", "3", "--dims", "1,3", "--trials", "4"]);
    assert_eq!(doc.config.dims, Some(vec![1, 3]));
    let Payload::Reports { all_passed, .. } = doc.payload else {
        panic!("wrong payload");
    };
    assert!(all_passed);
}

#[test]
fn error_exit_codes() {
    for (file, code) in [
        ("malformed_shape.json", 2),
        ("truncated.json", 2),
        ("no_such_file.json", 2),
        ("not_spd.json", 3),
        ("not_symmetric.json", 3),
    ] {
        let out = kldiv(&["kld", &path(file)]);
        assert_eq!(out.status.code(), Some(code), "{file}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    }
    let out = kldiv(&["kld", &path("malformed_shape.json")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`S[0]`"));
    assert_eq!(kldiv(&["check", "a.json", "--random", "2"]).status.code(), Some(2));
    assert_eq!(kldiv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kldiv(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("kldiv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("out.json");
    let out = kldiv(&["kld", &path("valid.json"), "--output", &target.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&target).unwrap();
    assert_eq!(written, kldiv(&["kld", &path("valid.json")]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
