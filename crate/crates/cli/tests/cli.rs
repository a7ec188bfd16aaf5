//! Black-box tests of the latdist binary: the CLI self-hosts the service
//! and talks to it over HTTP, so these exercise the whole stack.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use latdist_api::RunReport;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn latdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report_from(output: &Output) -> RunReport {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report: {e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&output.stdout),
            String::from_utf8_lossy(&output.stderr)
        )
    })
}

#[test]
fn distance_golay_certified() {
    let out = latdist(&[
        "distance",
        data("golay11.txt").to_str().unwrap(),
        "--field",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = report_from(&out);
    assert_eq!(report.result.d_best, 5);
    assert_eq!(report.result.status, "certified");
    assert_eq!(report.result.witness.iter().filter(|&&s| s != 0).count(), 5);
}

#[test]
fn distance_no_certify_exits_2() {
    let out = latdist(&[
        "distance",
        data("golay11.txt").to_str().unwrap(),
        "--field",
        "3",
        "--no-certify",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let report = report_from(&out);
    assert_eq!(report.result.status, "heuristic");
    assert!(report.result.d_best >= 5);
}

#[test]
fn distance_parse_failure_exits_3() {
    let out = latdist(&["distance", data("bad.txt").to_str().unwrap(), "--field", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "diagnostic names the line: {stderr}");
}

#[test]
fn distance_missing_file_exits_3() {
    let out = latdist(&["distance", "no_such_file.txt"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn distance_text_format_and_out_file() {
    let dir = std::env::temp_dir().join(format!("latdist-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("golay_report.json");
    let out = latdist(&[
        "distance",
        data("golay11.txt").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // the written report re-parses and echoes the config
    let text = std::fs::read_to_string(&out_path).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.config.beta, 20);
    assert_eq!(report.config.delta, 0.99);
    assert_eq!(report.config.threads, 1);
    assert!(report.config.certify);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap(), text);

    // text format renders the distance line
    let out = latdist(&[
        "distance",
        data("golay11.txt").to_str().unwrap(),
        "--format",
        "text",
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("d_best = 5 (certified)"), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn distance_threads_env_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_latdist"))
        .args(["distance", data("golay11.txt").to_str().unwrap()])
        .env("LATDIST_THREADS", "3")
        .output()
        .expect("binary runs");
    let report = report_from(&out);
    assert_eq!(report.config.threads, 3);
    assert_eq!(report.result.d_best, 5);
}

#[test]
fn distance_binary_image_gf64_toy() {
    let out = latdist(&[
        "distance",
        data("gf64_toy.txt").to_str().unwrap(),
        "--binary-image",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = report_from(&out);
    assert_eq!(report.stats.image, Some((12, 6)));
    // oracle agreement on the expanded code
    let oracle = latdist(&[
        "oracle",
        data("gf64_toy.txt").to_str().unwrap(),
        "--binary-image",
    ]);
    let oracle_report = report_from(&oracle);
    assert_eq!(report.result.d_best, oracle_report.result.d_best);
}

#[test]
fn oracle_golay_and_hamming() {
    let out = latdist(&["oracle", data("golay11.txt").to_str().unwrap(), "--field", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report_from(&out).result.d_best, 5);

    let out = latdist(&["oracle", data("hamming74.alist").to_str().unwrap(), "--field", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = report_from(&out);
    assert_eq!(report.result.d_best, 3);
    assert_eq!(report.input.format, "alist");
}

#[test]
fn oracle_budget_refusal_exits_4() {
    let dir = std::env::temp_dir().join(format!("latdist-big-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("big.txt");
    let mut text = String::from("30 60 2\n");
    for i in 0..30 {
        let row: Vec<&str> = (0..60).map(|j| if j == i || j == i + 30 { "1" } else { "0" }).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(&path, text).unwrap();
    let out = latdist(&["oracle", path.to_str().unwrap(), "--field", "2"]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("1073741824"), "q^k in diagnostic: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reduce_identity_and_check() {
    let out = latdist(&["reduce", data("id3.txt").to_str().unwrap(), "--beta", "2", "--check"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut rows: Vec<Vec<i64>> = stdout
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|t| t.parse::<i64>().unwrap().abs()).collect())
        .collect();
    rows.sort();
    assert_eq!(rows, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("size-reduced: ok"));
    assert!(stderr.contains("lovasz"));
    assert!(stderr.contains("block condition"));
}

#[test]
fn reduce_golay_embedding_yields_weight5_words() {
    let out = latdist(&["reduce", data("golay_embed.txt").to_str().unwrap(), "--beta", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<i64>> = stdout
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|t| t.parse::<i64>().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 17);
    // extract codewords: code part = first 11 coordinates / 6 mod 3
    let golay = latdist_core::code::ternary_golay();
    let mut weight5 = 0;
    for row in &rows {
        if row[..11].iter().any(|&v| v % 6 != 0) {
            continue;
        }
        let symbols: Vec<u64> = row[..11].iter().map(|&v| (v / 6).rem_euclid(3) as u64).collect();
        let w = latdist_core::code::Codeword::new(symbols);
        if w.is_zero() {
            continue;
        }
        assert!(golay.contains(&w), "extracted word is a member");
        if w.weight() == 5 {
            weight5 += 1;
        }
    }
    assert!(weight5 >= 1, "reduced embedding exposes weight-5 words, got {weight5}");
}

#[test]
fn reduce_parse_failure_exits_3() {
    let out = latdist(&["reduce", data("bad.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bound_hand_value_and_validation() {
    let out = latdist(&[
        "bound", "--m", "1", "--n", "1", "--M", "1", "--rmax", "1", "--delta", "1", "--beta", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = String::from_utf8_lossy(&out.stdout);
    let resp: latdist_api::BoundResponse = serde_json::from_str(&body).unwrap();
    assert_eq!(resp.lll_bound, "5");

    let out = latdist(&[
        "bound", "--m", "1", "--n", "1", "--M", "1", "--rmax", "1", "--delta", "0.3",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = latdist(&[
        "bound", "--m", "1", "--n", "1", "--M", "1", "--rmax", "1", "--beta", "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn serve_and_remote_client_roundtrip() {
    use std::io::Read;
    // start `latdist serve` on an ephemeral port, then run a distance
    // command against it with --server.
    let mut serve = Command::new(env!("CARGO_BIN_EXE_latdist"))
        .args(["serve", "--addr", "127.0.0.1:0"])
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("serve starts");
    let mut stderr = serve.stderr.take().expect("stderr piped");
    let mut buf = Vec::new();
    let mut byte = [0u8; 1];
    // read the announcement line
    while stderr.read(&mut byte).unwrap_or(0) == 1 {
        if byte[0] == b'\n' {
            break;
        }
        buf.push(byte[0]);
    }
    let line = String::from_utf8_lossy(&buf);
    let url = line.split("listening on ").nth(1).expect("announced url").trim().to_string();
    let out = latdist(&[
        "distance",
        data("golay11.txt").to_str().unwrap(),
        "--server",
        &url,
    ]);
    serve.kill().ok();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report_from(&out).result.d_best, 5);
}
