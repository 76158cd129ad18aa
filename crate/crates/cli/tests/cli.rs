use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sadt::pgm::{read_pgm_file, write_pgm_file};
use sadt::{Image, PgmEncoding};

fn sadt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sadt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_cover(dir: &Path, name: &str, size: usize, seed: u64) -> PathBuf {
    let path = dir.join(name);
    write_pgm_file(
        &path,
        &sadt::synth::natural_like(size, size, seed),
        PgmEncoding::Binary,
    )
    .unwrap();
    path
}

#[test]
fn embed_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write_cover(dir.path(), "cover.pgm", 128, 1);
    let stego = dir.path().join("stego.pgm");
    let report = dir.path().join("report.csv");
    let o = sadt(&["embed", s(&cover), s(&stego), "--report", s(&report)]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("1024 secret bytes (0.5 bpB)"));

    let img = read_pgm_file(&stego).unwrap();
    assert_eq!((img.width(), img.height()), (128, 128));
    let csv = std::fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("image,mode,mse,psnr_db,if,match_fraction")
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&fields[..2], &["cover.pgm", "set1"]);
    let psnr: f64 = fields[3].parse().unwrap();
    assert!(psnr >= 45.0, "psnr {psnr}");

    // The metrics command reports exactly what embed measured.
    let m = sadt(&["metrics", s(&cover), s(&stego)]);
    assert_eq!(m.status.code(), Some(0));
    let expected = format!("stego.pgm,{},{},{}\n", fields[2], fields[3], fields[4]);
    assert_eq!(stdout(&m), expected);

    let v = sadt(&["verify", s(&stego)]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("verdict=Authentic"));
}

#[test]
fn dual_mode_and_plain_output() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write_cover(dir.path(), "cover.pgm", 64, 2);
    let stego = dir.path().join("stego.pgm");
    let o = sadt(&[
        "embed",
        s(&cover),
        s(&stego),
        "--mode",
        "set1set2",
        "--plain",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("512 secret bytes (1 bpB)"));
    assert!(std::fs::read(&stego).unwrap().starts_with(b"P2\n"));
    assert_eq!(
        sadt(&["verify", s(&stego), "--mode", "set1set2"])
            .status
            .code(),
        Some(0)
    );
    // Reading with the wrong mode is a failed verification, not a crash.
    let wrong = sadt(&["verify", s(&stego), "--mode", "set1"]);
    assert_eq!(wrong.status.code(), Some(1));
    assert!(stdout(&wrong).contains("verdict=Tampered"));
}

#[test]
fn tampered_region_flags_tamper_map() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write_cover(dir.path(), "cover.pgm", 128, 3);
    let stego = dir.path().join("stego.pgm");
    let attacked = dir.path().join("attacked.pgm");
    let map = dir.path().join("map.pgm");
    assert_eq!(
        sadt(&["embed", s(&cover), s(&stego)]).status.code(),
        Some(0)
    );
    let a = sadt(&[
        "attack",
        s(&stego),
        s(&attacked),
        "--kind",
        "zero-region",
        "--x",
        "32",
        "--y",
        "64",
        "--w",
        "32",
        "--h",
        "32",
    ]);
    assert_eq!(a.status.code(), Some(0));
    // A 32x32 hole is 64 of 1024 masks, so lower the threshold to see it.
    let v = sadt(&[
        "verify",
        s(&attacked),
        "--tamper-map",
        s(&map),
        "--threshold",
        "0.99",
    ]);
    assert_eq!(v.status.code(), Some(1));
    let tamper = read_pgm_file(&map).unwrap();
    assert_eq!((tamper.width(), tamper.height()), (32, 32));
    for my in 16..24 {
        for mx in 8..16 {
            assert_eq!(tamper.get(mx, my), 255, "mask ({my}, {mx})");
        }
    }
    let flagged = tamper.pixels().iter().filter(|&&p| p == 255).count();
    assert_eq!(flagged, 64);
}

#[test]
fn attack_noise_is_deterministic_and_empty_region_is_noop() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("gradient-32.pgm");
    let (a, b, c) = (
        dir.path().join("a.pgm"),
        dir.path().join("b.pgm"),
        dir.path().join("c.pgm"),
    );
    for out in [&a, &b] {
        let o = sadt(&[
            "attack",
            s(&src),
            s(out),
            "--kind",
            "noise",
            "--x",
            "4",
            "--y",
            "4",
            "--w",
            "8",
            "--h",
            "8",
            "--seed",
            "9",
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = sadt(&[
        "attack",
        s(&src),
        s(&c),
        "--kind",
        "zero-region",
        "--x",
        "4",
        "--y",
        "4",
        "--w",
        "0",
        "--h",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_pgm_file(&c).unwrap(), read_pgm_file(&src).unwrap());
    let oob = sadt(&[
        "attack",
        s(&src),
        s(&c),
        "--kind",
        "noise",
        "--x",
        "30",
        "--y",
        "0",
        "--w",
        "8",
        "--h",
        "1",
    ]);
    assert_eq!(oob.status.code(), Some(2));
}

#[test]
fn metrics_fixtures() {
    let zeros = fixture("zeros-1x2.pgm");
    let o = sadt(&["metrics", s(&zeros), s(&fixture("three-four-1x2.pgm"))]);
    // Fidelity is undefined against an all-black reference.
    assert_eq!(o.status.code(), Some(2));

    let o = sadt(&["metrics", s(&fixture("three-four-1x2.pgm")), s(&zeros)]);
    assert_eq!(o.status.code(), Some(0));
    let fields: Vec<String> = stdout(&o).trim().split(',').map(String::from).collect();
    assert_eq!(fields[0], "zeros-1x2.pgm");
    assert_eq!(fields[1], "12.5");

    let flat = fixture("flat-16.pgm");
    let o = sadt(&["metrics", s(&flat), s(&flat)]);
    assert_eq!(stdout(&o), "flat-16.pgm,0,inf,1.0\n");

    let o = sadt(&["metrics", s(&flat), s(&fixture("gradient-32.pgm"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn embed_constant_image() {
    let dir = tempfile::tempdir().unwrap();
    let stego = dir.path().join("flat.pgm");
    let o = sadt(&["embed", s(&fixture("flat-16.pgm")), s(&stego)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("NaN"));
    assert_eq!(sadt(&["verify", s(&stego)]).status.code(), Some(0));
}

#[test]
fn operational_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.pgm");
    let o = sadt(&["embed", s(&dir.path().join("missing.pgm")), s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert!(!o.stderr.is_empty());

    let garbage = dir.path().join("garbage.pgm");
    std::fs::write(&garbage, b"not an image").unwrap();
    assert_eq!(sadt(&["verify", s(&garbage)]).status.code(), Some(2));
    assert_eq!(
        sadt(&[
            "embed",
            s(&fixture("flat-16.pgm")),
            s(&out),
            "--mode",
            "set1set2",
            "--max-lsb",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(sadt(&["bench", s(dir.path())]).status.code(), Some(2));
}

#[test]
fn bench_writes_rows_average_and_baselines() {
    let dir = tempfile::tempdir().unwrap();
    for (i, name) in ["b.pgm", "a.pgm", "c.pgm"].iter().enumerate() {
        write_cover(dir.path(), name, 64, 10 + i as u64);
    }
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let csv_path = dir.path().join("bench.csv");
    let o = sadt(&["bench", s(dir.path()), "--out", s(&csv_path)]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with("3 images, mode set1"));

    let text = std::fs::read_to_string(&csv_path).unwrap();
    let (rows, baselines) = text.split_once("\n\n").unwrap();
    let rows: Vec<Vec<&str>> = rows.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(
        rows[0],
        ["image", "mode", "mse", "psnr_db", "if", "match_fraction"]
    );
    let names: Vec<&str> = rows[1..].iter().map(|r| r[0]).collect();
    assert_eq!(names, ["a.pgm", "b.pgm", "c.pgm", "Average"]);
    for col in 2..6 {
        let vals: Vec<f64> = rows[1..4].iter().map(|r| r[col].parse().unwrap()).collect();
        let avg: f64 = rows[4][col].parse().unwrap();
        assert!((avg - vals.iter().sum::<f64>() / 3.0).abs() < 1e-9);
    }
    assert!(baselines.starts_with("technique,capacity_bytes,cover_size,bpb,psnr_db\n"));
    assert!(baselines.contains("Region-Based,16384,512x512,0.5,40.79"));
    assert!(baselines.contains("SAWT,131072,512x512,1.3,36.62"));

    // Same inputs, same bytes.
    let again = dir.path().join("again.csv");
    let dir_arg = dir.path().to_str().unwrap();
    assert_eq!(
        sadt(&["bench", dir_arg, "--out", s(&again)]).status.code(),
        Some(0)
    );
    // The second run also sees the first CSV in the directory; it is not a PGM.
    assert_eq!(
        std::fs::read(&csv_path).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn fixtures_command_writes_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let o = sadt(&["fixtures", s(dir.path()), "--count", "2", "--size", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let img: Image = read_pgm_file(dir.path().join("synthetic-01.pgm")).unwrap();
    assert_eq!(img, sadt::synth::natural_like(32, 32, 1));
}
