//! End-to-end checks of the `gtac` binary: subcommands, file formats, and
//! exit codes (0 success, 1 usage, 2 I/O, 3 data/format).

use std::path::Path;
use std::process::{Command, Output};

use gtac::audio_io::{read_wav, write_wav, Signal};

fn gtac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtac"))
        .args(args)
        .output()
        .expect("spawn gtac")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn write_test_wav(path: &Path, len: usize) {
    let samples: Vec<f64> = (0..len)
        .map(|i| {
            let t = i as f64;
            0.5 * (0.04 * t).sin() + 0.2 * (0.23 * t).cos() * (0.002 * t).sin()
        })
        .collect();
    write_wav(path, &Signal::new(samples, 8000).unwrap()).unwrap();
}

#[test]
fn compress_decompress_metrics_flow() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.wav");
    let container = dir.path().join("out.gtac");
    let output = dir.path().join("out.wav");
    write_test_wav(&input, 2000);

    let out = gtac(&[
        "compress",
        "--in",
        input.to_str().unwrap(),
        "--out",
        container.to_str().unwrap(),
        "--kind",
        "gt1",
        "--frame",
        "64",
        "--cr",
        "4",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&container).unwrap();
    assert_eq!(&bytes[0..4], b"GTAC");
    // 26-byte header + 2000/64 -> 32 frames x 16 records x 10 bytes.
    assert_eq!(bytes.len(), 26 + 32 * 16 * 10);

    let out = gtac(&[
        "decompress",
        "--in",
        container.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let reconstructed = read_wav(&output).unwrap();
    assert_eq!(reconstructed.len(), 2000);
    assert_eq!(reconstructed.sample_rate(), 8000);

    let out = gtac(&[
        "metrics",
        "--ref",
        input.to_str().unwrap(),
        "--test",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("PSNR:"), "unexpected output: {text}");
    assert!(text.contains("MSE:"));
    let psnr: f64 = text
        .lines()
        .find(|l| l.starts_with("PSNR:"))
        .and_then(|l| l.split_whitespace().nth(1))
        .and_then(|v| v.parse().ok())
        .unwrap();
    assert!(psnr > 20.0, "implausibly low PSNR {psnr}");
}

#[test]
fn metrics_of_identical_files_is_infinite() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.wav");
    write_test_wav(&a, 500);
    let out = gtac(&["metrics", "--ref", a.to_str().unwrap(), "--test", a.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("PSNR: inf dB"), "{text}");
}

#[test]
fn basis_subcommand_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.csv");
    let out = gtac(&[
        "basis", "--kind", "dct2", "--n", "4", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == 4));
    // First column is the DC vector 1/sqrt(4) = 0.5.
    for row in &rows {
        assert!((row[0] - 0.5).abs() < 1e-12);
    }

    // Stdout emission too.
    let out = gtac(&["basis", "--kind", "fwht", "--n", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);
}

#[test]
fn bench_subcommand_writes_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for i in 0..2 {
        write_test_wav(&corpus.join(format!("f{i}.wav")), 700 + i * 50);
    }
    let csv = dir.path().join("grid.csv");
    let out = gtac(&[
        "bench",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--frames",
        "16,64",
        "--crs",
        "2,4",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "file,transform,frame_size,cr,psnr_db,erp_pct");
    // 2 files x 7 kinds x 2 frames x 2 crs + 28 mean rows, plus header.
    assert_eq!(lines.len(), 1 + 2 * 7 * 2 * 2 + 7 * 2 * 2);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 6));
}

#[test]
fn usage_errors_exit_one() {
    let out = gtac(&["compress", "--bogus"]);
    assert_eq!(exit_code(&out), 1);

    let out = gtac(&["nonsense"]);
    assert_eq!(exit_code(&out), 1);

    // Unknown transform kind.
    let out = gtac(&[
        "basis", "--kind", "mdct", "--n", "8",
    ]);
    assert_eq!(exit_code(&out), 1);

    // CR does not divide the frame size.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.wav");
    write_test_wav(&input, 100);
    let out = gtac(&[
        "compress",
        "--in",
        input.to_str().unwrap(),
        "--out",
        dir.path().join("x.gtac").to_str().unwrap(),
        "--kind",
        "gt2",
        "--frame",
        "16",
        "--cr",
        "5",
    ]);
    assert_eq!(exit_code(&out), 1);

    // FWHT over a non-power-of-two frame.
    let out = gtac(&[
        "compress",
        "--in",
        input.to_str().unwrap(),
        "--out",
        dir.path().join("x.gtac").to_str().unwrap(),
        "--kind",
        "fwht",
        "--frame",
        "24",
        "--cr",
        "2",
    ]);
    assert_eq!(exit_code(&out), 1);

    // Help still exits zero.
    let out = gtac(&["--help"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn io_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = gtac(&[
        "compress",
        "--in",
        dir.path().join("missing.wav").to_str().unwrap(),
        "--out",
        dir.path().join("x.gtac").to_str().unwrap(),
        "--kind",
        "gt2",
        "--frame",
        "16",
        "--cr",
        "2",
    ]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let out = gtac(&[
        "decompress",
        "--in",
        dir.path().join("missing.gtac").to_str().unwrap(),
        "--out",
        dir.path().join("y.wav").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn data_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();

    // Not a RIFF file.
    let fake_wav = dir.path().join("fake.wav");
    std::fs::write(&fake_wav, b"definitely not audio").unwrap();
    let out = gtac(&[
        "compress",
        "--in",
        fake_wav.to_str().unwrap(),
        "--out",
        dir.path().join("x.gtac").to_str().unwrap(),
        "--kind",
        "gt2",
        "--frame",
        "16",
        "--cr",
        "2",
    ]);
    assert_eq!(exit_code(&out), 3);

    // Bad container magic.
    let fake_container = dir.path().join("fake.gtac");
    std::fs::write(&fake_container, b"XXXX_not_a_container").unwrap();
    let out = gtac(&[
        "decompress",
        "--in",
        fake_container.to_str().unwrap(),
        "--out",
        dir.path().join("y.wav").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);

    // Mismatched lengths for metrics.
    let a = dir.path().join("a.wav");
    let b = dir.path().join("b.wav");
    write_test_wav(&a, 300);
    write_test_wav(&b, 301);
    let out = gtac(&["metrics", "--ref", a.to_str().unwrap(), "--test", b.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);

    // Empty corpus directory.
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let out = gtac(&[
        "bench",
        "--corpus",
        empty.to_str().unwrap(),
        "--out",
        dir.path().join("grid.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn compress_decompress_lossless_at_cr_one() {
    // Full-fidelity configuration straight through the binary.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.wav");
    let container = dir.path().join("c.gtac");
    let output = dir.path().join("out.wav");
    write_test_wav(&input, 512);

    let out = gtac(&[
        "compress",
        "--in",
        input.to_str().unwrap(),
        "--out",
        container.to_str().unwrap(),
        "--kind",
        "dct2",
        "--frame",
        "16",
        "--cr",
        "1",
    ]);
    assert_eq!(exit_code(&out), 0);
    let out = gtac(&[
        "decompress",
        "--in",
        container.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);

    let a = read_wav(&input).unwrap();
    let b = read_wav(&output).unwrap();
    // Only PCM16 quantization separates the two files.
    for (x, y) in a.samples().iter().zip(b.samples()) {
        assert!((x - y).abs() <= 1.0 / 32768.0 + 1e-9);
    }
}
