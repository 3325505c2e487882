use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use xcs2d::io::{parse_spectrum, SpectrumFile};

const BIN: &str = env!("CARGO_BIN_EXE_xcs2d");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn toy(dir: &Path, kind: &str, extra: &[&str]) -> String {
    let out = path(dir, &format!("{kind}.txt"));
    let mut args = vec![
        "toy",
        kind,
        "--edge-a",
        "401:0.1:0.1",
        "--edge-b",
        "535:0.1:0.1",
        "-o",
        &out,
    ];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn read_2d(file: &str) -> xcs2d::Spectrum2D {
    match parse_spectrum(&std::fs::read_to_string(file).unwrap()).unwrap() {
        SpectrumFile::TwoD(s) => s,
        other => panic!("expected 2D, got {other:?}"),
    }
}

#[test]
fn coupled_toy_gives_displaced_esa_peak() {
    let dir = tempfile::tempdir().unwrap();
    let m = toy(dir.path(), "coupled", &["--shift", "1"]);
    let prefix = path(dir.path(), "cp");
    let o = run(&[
        "xcs2d",
        &m,
        "--carrier1",
        "401",
        "--carrier3",
        "535",
        "-o",
        &prefix,
    ]);
    assert!(o.status.success());
    let gsb = read_2d(&format!("{prefix}.gsb.tsv"));
    let esa = read_2d(&format!("{prefix}.esa.tsv"));
    let argmax = |s: &xcs2d::Spectrum2D| {
        let (mut best, mut at) = (0.0, (0, 0));
        for ((r, c), v) in s.values.indexed_iter() {
            if v.abs() > best {
                best = v.abs();
                at = (r, c);
            }
        }
        (s.grid1.value(at.1), s.grid3.value(at.0))
    };
    let (g1, g3) = argmax(&gsb);
    let (e1, e3) = argmax(&esa);
    assert!(g1.abs() < 0.02 && g3.abs() < 0.02, "{g1} {g3}");
    assert!(e1.abs() < 0.02 && (e3 - 1.0).abs() < 0.02, "{e1} {e3}");
    let pathways = std::fs::read_to_string(format!("{prefix}.pathways.tsv")).unwrap();
    assert_eq!(pathways.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn invalid_manifold_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(dir.path(), "bad.txt");
    std::fs::write(
        &m,
        "STATES\n0 G 0\n1 EA 401\n2 EB 535\nTRANSITIONS\n0 1 0.1 0.1\n1 2 0.1 0.1\n",
    )
    .unwrap();
    let prefix = path(dir.path(), "out");
    let o = run(&[
        "xcs2d",
        &m,
        "--carrier1",
        "401",
        "--carrier3",
        "535",
        "-o",
        &prefix,
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonzero dipole between"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let v = run(&["validate", &m]);
    assert_eq!(v.status.code(), Some(2));
    assert!(!v.stdout.is_empty());
}

#[test]
fn parse_errors_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(dir.path(), "bad.txt");
    std::fs::write(&m, "STATES\n0 G 0\n1 X 401\n").unwrap();
    let o = run(&["validate", &m]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(run(&["xcs2d"]).status.code(), Some(1));
    assert_eq!(
        run(&["toy", "product", "--edge-a", "401:0.1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn xanes_and_fft_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = toy(dir.path(), "coupled", &["--shift", "1"]);
    let x = path(dir.path(), "x.tsv");
    let o = run(&[
        "xanes",
        &m,
        "--carrier",
        "401",
        "--halfwidth",
        "5",
        "--grid",
        "-1,0.01,201",
        "-o",
        &x,
    ]);
    assert!(o.status.success());
    match parse_spectrum(&std::fs::read_to_string(&x).unwrap()).unwrap() {
        SpectrumFile::OneD(s) => {
            let peak = s.values.iter().cloned().fold(0.0, f64::max);
            assert!((peak - 0.1).abs() < 1e-12, "{peak}");
        }
        _ => panic!("expected 1D"),
    }

    let prefix = path(dir.path(), "f");
    let o = run(&[
        "xcs2d-fft",
        &m,
        "--carrier1",
        "401",
        "--carrier3",
        "535",
        "--step",
        "0.04",
        "--n1",
        "256",
        "--n3",
        "256",
        "-o",
        &prefix,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let re = read_2d(&format!("{prefix}.fft.re.tsv"));
    let im = read_2d(&format!("{prefix}.fft.im.tsv"));
    assert_eq!(re.values.dim(), (256, 256));
    assert_eq!(re.metadata["part"], "re");
    assert_eq!(im.metadata["part"], "im");
    assert!(re.metadata.contains_key("time_grid"));
}

#[test]
fn pipeline_through_stdin_and_stdout() {
    let toy = run(&[
        "toy",
        "product",
        "--edge-a",
        "401:0.1:0.1,402:0.2:0.2",
        "--edge-b",
        "535:0.1:0.1",
    ]);
    assert!(toy.status.success());
    let dir = tempfile::tempdir().unwrap();
    let prefix = path(dir.path(), "p");
    let mut child = Command::new(BIN)
        .args([
            "xcs2d",
            "-",
            "--carrier1",
            "401",
            "--carrier3",
            "535",
            "--components",
            "total",
            "-o",
            &prefix,
        ])
        .stdin(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&toy.stdout).unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert!(!Path::new(&format!("{prefix}.gsb.tsv")).exists());
    let total = read_2d(&format!("{prefix}.total.tsv"));
    assert_eq!(total.max_abs(), 0.0);

    let plot = run(&["plotdata", &format!("{prefix}.total.tsv")]);
    assert!(plot.status.success());
    let text = String::from_utf8(plot.stdout).unwrap();
    assert_eq!(text.matches("\n\n").count(), 501);
}

#[test]
fn yield_prints_key_values() {
    let o = run(&["yield", "--linewidth", "10"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let p: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("p_abs = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(p > 0.0);
    assert!(text.contains("signal_ratio = "));
}
