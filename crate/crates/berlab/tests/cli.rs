//! End-to-end runs of the `berlab` binary.

use std::path::Path;
use std::process::{Command, Output};

use viterbi::channel::modulate_bpsk;
use viterbi::codec::{encode, puncture};
use viterbi::{CodeSpec, PuncturePattern, Trellis};

fn berlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berlab"))
        .args(args)
        .output()
        .expect("spawn berlab")
}

fn ok(args: &[&str]) -> String {
    let out = berlab(args);
    assert!(
        out.status.success(),
        "berlab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SWEEP: &[&str] = &[
    "ber",
    "--ebn0",
    "2:1:3",
    "--bits",
    "30000",
    "--seed",
    "3",
    "--f",
    "32",
    "--v2",
    "20",
    "--reference",
];

#[test]
fn ber_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    ok(&[SWEEP, &["--out", path_str(&a)]].concat());
    ok(&[SWEEP, &["--out", path_str(&b)]].concat());
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "mode,k,polys,rate,f,v1,v2,f0,ebn0_db,bits,errors,ber,valid,seed"
    );
    // two curves, two points each, ordered by Eb/N0
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("framed,7,171/133,r12,32,20,20,0,2.000000,"));
    assert!(lines[2].starts_with("serial,7,171/133,r12,0,0,0,0,2.000000,"));
    assert!(lines[3].contains(",3.000000,"));
}

#[test]
fn stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.csv");
    ok(&[SWEEP, &["--out", path_str(&f)]].concat());
    assert_eq!(ok(SWEEP), std::fs::read_to_string(f).unwrap());
}

#[test]
fn noiseless_sweep() {
    let out = ok(&[
        "ber", "--ebn0", "0:1:2", "--bits", "10000", "--sigma", "0", "--rate", "r34", "--f", "36",
        "--v1", "24", "--v2", "24", "--tb", "parallel", "--f0", "12",
    ]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols[0], "parallel");
        assert_eq!(cols[3], "r34");
        assert_eq!(cols[10], "0", "{r}");
        assert_eq!(cols[12], "false");
    }
}

#[test]
fn gap_between_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    let r = dir.path().join("r.csv");
    let common = ["--ebn0", "1:0.5:4", "--bits", "400000", "--seed", "9"];
    ok(&[
        &["ber", "--f", "32", "--v2", "10"],
        &common[..],
        &["--out", path_str(&m)],
    ]
    .concat());
    ok(&[&["ber"], &common[..], &["--out", path_str(&r)]].concat());
    let report = ok(&["gap", path_str(&m), path_str(&r), "--target-ber", "1e-3"]);
    let gap: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("gap_db"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    // short right overlap costs a clearly positive margin
    assert!(gap > 0.1 && gap < 2.0, "{report}");

    let out = berlab(&["gap", path_str(&m), path_str(&r), "--target-ber", "1e-9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no bracket"));
}

#[test]
fn decode_text_llrs() {
    let dir = tempfile::tempdir().unwrap();
    let t = Trellis::new(CodeSpec::k7_171_133());
    let bits: Vec<u8> = (0..240).map(|i| ((i * 7 + i / 5) % 3 % 2) as u8).collect();
    let want: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
    for (rate, pattern) in [
        ("r12", PuncturePattern::identity(2)),
        ("r34", PuncturePattern::rate_3_4()),
    ] {
        let tx = modulate_bpsk(&puncture(&encode(&bits, &t), &pattern));
        let text: Vec<String> = tx.iter().map(|x| format!("{:.3}", x * 0.8)).collect();
        let input = dir.path().join(format!("{rate}.txt"));
        std::fs::write(&input, text.join(" ")).unwrap();
        for extra in [
            &[][..],
            &[
                "--f", "60", "--v1", "24", "--v2", "30", "--tb", "parallel", "--f0", "12",
            ],
        ] {
            let out = ok(&[&["decode", path_str(&input), "--rate", rate], extra].concat());
            assert_eq!(out.trim_end(), want, "{rate} {extra:?}");
        }
    }
}

#[test]
fn bench_table() {
    let out = ok(&[
        "bench", "--k", "5", "--polys", "23,35", "--bits", "20000", "--reps", "1", "--v2", "10,20",
        "--f0", "0,8",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "f,v1,v2,f0,workers,stages,seconds,mbps,speedup_single,speedup_serial_tb"
    );
    assert_eq!(lines.len(), 5);
    for l in &lines[1..] {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols[9].is_empty(), cols[3] == "0");
    }
}

#[test]
fn bad_arguments_fail() {
    for args in [
        &["ber", "--ebn0", "x"][..],
        &["ber", "--ebn0", "1", "--polys", "9"],
        &["ber", "--ebn0", "1", "--rate", "10;10"],
        &["ber", "--ebn0", "1", "--rate", "r34", "--f", "32"],
        &["decode", "/nonexistent/llr.txt"],
    ] {
        let out = berlab(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("berlab"),
            "{args:?}"
        );
    }
}
