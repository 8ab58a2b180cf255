use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use firmlab::cli::{run_from_path, Subcommand, EXIT_IO, EXIT_MODEL, EXIT_USAGE, MANIFEST};
use firmlab::report::read_csv;

fn calibration(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("calibrations").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_firmlab"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path
}

const BASE: &str = "[tech]\nalpha = 0.5\n[supply]\nb = 1.0\neta = 1.4\n[population]\nmu = 0.0\nsigma = 1.0\nk = 16\n";

#[test]
fn simulate_writes_row_count_contract() {
    let out = tempfile::tempdir().unwrap();
    let report =
        run_from_path(Subcommand::Simulate, &calibration("reference.toml"), Some(out.path())).unwrap();
    assert_eq!(report.files, ["firms.csv", "aggregate.csv", MANIFEST]);
    let firms = read_csv(&out.path().join("firms.csv")).unwrap();
    assert_eq!(firms.header, ["a", "status", "employment", "wage", "profit", "regime", "taxonomy"]);
    assert_eq!(firms.rows.len(), 512);
    let agg = read_csv(&out.path().join("aggregate.csv")).unwrap();
    assert_eq!(agg.rows.len(), 1);
    assert_eq!(agg.header.len(), 9);
    let manifest = fs::read_to_string(out.path().join(MANIFEST)).unwrap();
    assert!(manifest.contains("# subcommand: simulate"));
    assert!(manifest.contains("# seed: 42"));
    assert!(manifest.contains("eta = 1.4"));
}

#[test]
fn manifest_reproduces_the_run() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    run_from_path(Subcommand::Sweep, &calibration("reference.toml"), Some(first.path())).unwrap();
    let manifest = first.path().join(MANIFEST);
    run_from_path(Subcommand::Sweep, &manifest, Some(second.path())).unwrap();
    for f in ["sweep.csv", MANIFEST] {
        assert_eq!(
            fs::read(first.path().join(f)).unwrap(),
            fs::read(second.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let sweep = read_csv(&first.path().join("sweep.csv")).unwrap();
    assert_eq!(sweep.header[0], "phi");
    assert_eq!(sweep.rows.len(), 7);
}

#[test]
fn owe_single_firm_end_to_end() {
    let out = tempfile::tempdir().unwrap();
    run_from_path(Subcommand::Owe, &calibration("single_firm.toml"), Some(out.path())).unwrap();
    let t = read_csv(&out.path().join("owe.csv")).unwrap();
    assert_eq!(t.header, ["owe", "pct_demployment", "pct_dwage", "affected_employment_share"]);
    let owe: f64 = t.rows[0][0].parse().unwrap();
    assert!((owe - 1.46).abs() < 0.01, "{owe}");
}

#[test]
fn threshold_and_classify_outputs() {
    let out = tempfile::tempdir().unwrap();
    run_from_path(Subcommand::Threshold, &calibration("reference.toml"), Some(out.path())).unwrap();
    let t = read_csv(&out.path().join("threshold.csv")).unwrap();
    assert_eq!(t.rows[0][2], "interior");
    let a: f64 = t.rows[0][3].parse().unwrap();
    assert!(a > 1.0 && a < 1.5);

    run_from_path(Subcommand::Classify, &calibration("reference.toml"), Some(out.path())).unwrap();
    let s = read_csv(&out.path().join("taxonomy_summary.csv")).unwrap();
    let total: usize = s.rows.iter().map(|r| r[1].parse::<usize>().unwrap()).sum();
    assert_eq!(total, 512);
}

#[test]
fn biasdemo_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        run_from_path(Subcommand::Biasdemo, &calibration("bias_demo.toml"), Some(d.path())).unwrap();
    }
    for f in ["studies.csv", "funnel.csv", "metareg.csv", MANIFEST] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
    let studies = read_csv(&a.path().join("studies.csv")).unwrap();
    assert_eq!(studies.header, ["effect", "se"]);
    assert_eq!(studies.rows.len(), 2000);
    let m = read_csv(&a.path().join("metareg.csv")).unwrap();
    assert_eq!(m.header, ["pet", "fat", "se_pet", "se_fat", "n", "naive_mean"]);
}

#[test]
fn metareg_reads_study_file_without_touching_it() {
    let dir = tempfile::tempdir().unwrap();
    let studies = "effect,se\n1,1\n2,2\n1.5,1.5\n";
    fs::write(dir.path().join("studies.csv"), studies).unwrap();
    let cfg = write_config(dir.path(), &format!("{BASE}[metareg]\ninput = \"studies.csv\"\n"));
    let before = fs::read(&cfg).unwrap();
    run_from_path(Subcommand::Metareg, &cfg, Some(&dir.path().join("out"))).unwrap();
    assert_eq!(fs::read_to_string(dir.path().join("studies.csv")).unwrap(), studies);
    assert_eq!(fs::read(&cfg).unwrap(), before);
    let m = read_csv(&dir.path().join("out/metareg.csv")).unwrap();
    let pet: f64 = m.rows[0][0].parse().unwrap();
    let fat: f64 = m.rows[0][1].parse().unwrap();
    assert!(pet.abs() < 1e-10 && (fat - 1.0).abs() < 1e-10);
    let f = fs::read_to_string(dir.path().join("out/funnel.csv")).unwrap();
    assert_eq!(f, "effect,precision\n1,1\n2,0.5\n1.5,0.6666666666666666\n");
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), BASE);

    let st = bin().args(["simulate", "--config"]).arg(&good).arg("--out").arg(dir.path().join("o")).status().unwrap();
    assert_eq!(st.code(), Some(0));

    let st = bin().args(["plot", "--config"]).arg(&good).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE));

    let st = bin().args(["simulate"]).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE));

    let st = bin().args(["simulate", "--config", "/no/such/file.toml"]).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_IO));

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, BASE.replace("alpha = 0.5", "alpha = 1.2")).unwrap();
    let out = bin().args(["simulate", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_MODEL));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tech.alpha"));

    let typo = dir.path().join("typo.toml");
    fs::write(&typo, format!("{BASE}[policy]\ntua = 0.1\n")).unwrap();
    let out = bin().args(["simulate", "--config"]).arg(&typo).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tua"));

    // sweep without a [sweep] block
    let st = bin().args(["sweep", "--config"]).arg(&good).arg("--out").arg(dir.path().join("o")).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE));
}

#[test]
fn non_monotone_crossing_exits_2_with_brackets() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            "{BASE}[policy]\ntau = 0.3\nphi = 0.5\n[policy.detection]\nl_bar = 0.5\ngamma = 1.0\n[threshold]\na_lo = 0.05\na_hi = 200.0\n"
        ),
    );
    let out = bin().args(["threshold", "--config"]).arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_MODEL));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("non-monotone") && err.contains('['), "{err}");
}

#[test]
fn owe_without_affected_workers_is_model_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{BASE}[owe]\nw_min_new = 0.01\n"));
    let out = bin().args(["owe", "--config"]).arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_MODEL));
}
