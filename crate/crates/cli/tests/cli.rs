use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use monoclinic::catalog::{serialize_catalog, Format};
use monoclinic::exactmath::BivariatePoly;
use monoclinic::families::{family, FamilyId, Length};
use monoclinic::search::brute_force_at;
use monoclinic_cli::identities_table;

const FIXTURE: [&str; 9] = [
    "6188", "4641", "6240", "7735", "8788", "10659", "2709", "12325", "6755",
];

fn monopiped(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monopiped"))
        .args(args)
        .output()
        .unwrap()
}

fn monopiped_with_stdin(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_monopiped"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_fixture_is_valid() {
    let out = monopiped(&["gen", "P1", "1", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with(r#"{"family":"P1","m":"1","n":"4","x":"49504","#));
    assert!(text.contains(r#""content":"8","primitive_x":"6188""#));
    assert!(text.trim_end().ends_with(r#""classification":"Valid"}"#));
}

#[test]
fn gen_degenerate_point_still_prints_record() {
    let out = monopiped(&["gen", "P1", "0", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains(r#""classification":"DegenerateParameter""#));
}

#[test]
fn gen_out_of_range_exits_two() {
    let out = monopiped(&["gen", "P1", "1", "3"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains(r#""classification":"OutOfRange""#));
}

#[test]
fn gen_usage_errors_exit_one() {
    for args in [
        &["gen", "P9", "1", "4"][..],
        &["gen", "P1", "1", "0"],
        &["gen", "P1", "one", "4"],
        &["gen", "P1", "0", "0", "--force"],
        &["gen", "P1", "1"],
    ] {
        let out = monopiped(args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!stderr(&out).is_empty(), "{args:?}");
    }
}

#[test]
fn gen_force_allows_zero_n() {
    let out = monopiped(&["gen", "P1", "3", "0", "--force"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains(r#""classification":"UndefinedRatio""#));
}

#[test]
fn gen_accepts_negative_and_large_parameters() {
    let out = monopiped(&["gen", "P3", "-1", "5"]);
    assert_eq!(code(&out), 0);
    let big = "123456789012345678901234567890";
    let out = monopiped(&["gen", "P2", big, "7"]);
    assert!(matches!(code(&out), 0 | 2));
    assert!(stdout(&out).contains(&format!(r#""m":"{big}""#)));
}

#[test]
fn gen_csv_has_header_row() {
    let out = monopiped(&["gen", "P1", "1", "4", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("family,m,n,x,y,z,a,b,c1,c2,d1,d2,content,primitive_x"));
    assert!(lines[0].ends_with(",classification"));
    assert!(lines[1].starts_with("P1,1,4,49504,"));
}

#[test]
fn gen_then_verify_round_trips() {
    for format in ["jsonl", "csv"] {
        let generated = monopiped(&["gen", "P1", "1", "4", "--format", format]);
        assert_eq!(code(&generated), 0);
        let verified = monopiped_with_stdin(&["verify"], &generated.stdout);
        assert_eq!(code(&verified), 0, "{}", stderr(&verified));
        assert!(stdout(&verified).contains("realizable: yes"));
    }
}

#[test]
fn round_trip_holds_on_the_first_and_fourth_families() {
    let mut checked = 0;
    for id in ["P1", "P4"] {
        for (m, n) in [(2, 1), (1, 4), (3, 1), (-4, 5), (-5, 6), (5, 2)] {
            let (m, n) = (m.to_string(), n.to_string());
            let generated = monopiped(&["gen", id, &m, &n]);
            if code(&generated) != 0 {
                continue;
            }
            let verified = monopiped_with_stdin(&["verify", "--in", "-"], &generated.stdout);
            assert_eq!(code(&verified), 0, "{id}({m}, {n})");
            checked += 1;
        }
    }
    assert!(checked >= 6, "{checked}");
}

/// The third family's listed range admits m/n = -1, where the tuple has a
/// degenerate parallelogram face; gen says valid but verify rejects it.
#[test]
fn third_family_range_admits_an_unrealizable_point() {
    let generated = monopiped(&["gen", "P3", "-1", "1"]);
    assert_eq!(code(&generated), 0);
    let verified = monopiped_with_stdin(&["verify"], &generated.stdout);
    assert_eq!(code(&verified), 2);
    assert!(stdout(&verified).contains("realizable: no"));
}

#[test]
fn verify_examples() {
    let out = monopiped(&[&["verify"][..], &FIXTURE].concat());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).matches(" pass").count(), 7);

    let out = monopiped(&["verify", "4", "3", "0", "5", "4", "3", "3", "5", "5"]);
    assert_eq!(code(&out), 2);
    assert_eq!(stdout(&out).matches(" pass").count(), 7);
    assert!(stdout(&out).contains("realizable: no"));

    let out = monopiped(&["verify", "1", "2", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("nine"));
}

#[test]
fn verify_reports_failing_equations() {
    let mut perturbed = FIXTURE;
    perturbed[8] = "6756";
    let out = monopiped(&[&["verify"][..], &perturbed].concat());
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    let failing: Vec<&str> = text.lines().filter(|l| l.ends_with("FAIL")).collect();
    assert_eq!(failing.len(), 3);
    assert!(failing[0].contains("(4)") && failing[1].contains("(6)") && failing[2].contains("(7)"));
}

#[test]
fn verify_rejects_negative_lengths() {
    let out = monopiped(&["verify", "-4", "3", "0", "5", "4", "3", "3", "5", "5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_reads_integer_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tuples.txt");
    std::fs::write(
        &path,
        format!("{}\n\n{}\n", FIXTURE.join(" "), FIXTURE.join(", ")),
    )
    .unwrap();
    let out = monopiped(&["verify", "--in", path_arg(&path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).matches("realizable: yes").count(), 2);

    std::fs::write(&path, format!("{}\n1 2 3\n", FIXTURE.join(" "))).unwrap();
    let out = monopiped(&["verify", "--in", path_arg(&path)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"));

    let out = monopiped(&["verify", "--in", path_arg(&dir.path().join("missing.txt"))]);
    assert_eq!(code(&out), 1);
}

#[test]
fn identities_all_pass() {
    let out = monopiped(&["identities"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("32/32 checks pass"));
    assert!(!text.contains("FAIL"));
    assert_eq!(text.lines().filter(|l| l.starts_with('P')).count(), 4);

    let out = monopiped(&["identities", "--family", "P2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("8/8 checks pass"));
}

#[test]
fn identities_name_the_failing_residual() {
    let mut mutated = family(FamilyId::P1).clone();
    let d2 = Length::D2.index();
    mutated.polys[d2] = &mutated.polys[d2] + &BivariatePoly::homogeneous(&[0, 0, 0, 0, 0, 0, 1]);
    let mut buf = Vec::new();
    assert!(!identities_table(&[&mutated, family(FamilyId::P2)], &mut buf).unwrap());
    let text = String::from_utf8(buf).unwrap();
    assert!(text.contains("13/16 checks pass"), "{text}");
    assert!(text.contains("P1 (4) x^2 + c2^2 = d2^2: residual"));
    assert!(text.contains("P1 (6) 2y^2 + 2b^2 = d1^2 + d2^2: residual"));
    assert!(text.contains("P1 (7) 2a^2 + 2z^2 = d1^2 + d2^2: residual"));
    assert!(!text.contains("P1 (5)") && !text.contains("P2 ("));
}

#[test]
fn ranges_print_intervals_and_self_check() {
    let out = monopiped(&["ranges", "P1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let intervals: Vec<&str> = text.lines().filter(|l| l.starts_with("  (")).collect();
    assert_eq!(intervals.len(), 4);
    for anchor in [
        "0.28126795021",
        "1.77766432195",
        "-0.60976156477",
        "-0.81999264776",
    ] {
        assert!(text.contains(anchor), "{anchor}");
    }
    assert!(text.contains("self-check passed"));
}

#[test]
fn ranges_classify_points() {
    let out = monopiped(&["ranges", "P1", "1", "3"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("OutOfRange"));

    let out = monopiped(&["ranges", "P3", "-1", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Valid"));

    let out = monopiped(&["ranges", "P1", "2", "0"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("UndefinedRatio"));

    let out = monopiped(&["ranges", "P1", "2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn scan_height_four_contains_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p1.jsonl");
    let out = monopiped(&["scan", "P1", "--height", "4", "--out", path_arg(&path)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("pairs tried"));
    let text = std::fs::read_to_string(&path).unwrap();
    let fixture = text
        .lines()
        .find(|l| l.contains(r#""primitive_x":"6188""#))
        .expect("fixture entry");
    // the first pair in (n, m) order with this primitive is (2, 1)
    assert!(fixture.contains(r#""m":"2","n":"1""#));
}

#[test]
fn scan_all_at_height_one() {
    let out = monopiped(&["scan", "all", "--height", "1"]);
    assert_eq!(code(&out), 0);
    let summary = stderr(&out);
    assert!(summary.contains("P1: 3 pairs tried, 0 valid, 0 unique primitives"));
    assert_eq!(summary.lines().count(), 4);
    assert!(!stdout(&out).contains(r#""family":"P1""#));
}

#[test]
fn scan_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (k, threads) in ["1", "1", "2", "8"].iter().enumerate() {
        for format in ["jsonl", "csv"] {
            let path = dir.path().join(format!("run{k}.{format}"));
            let out = monopiped(&[
                "scan",
                "all",
                "--height",
                "12",
                "--threads",
                threads,
                "--format",
                format,
                "--out",
                path_arg(&path),
            ]);
            assert_eq!(code(&out), 0);
            files.push((format, std::fs::read(&path).unwrap()));
        }
    }
    for (format, bytes) in &files {
        let first = &files.iter().find(|(f, _)| f == format).unwrap().1;
        assert_eq!(bytes, first, "{format}");
        assert!(!bytes.is_empty());
    }
}

#[test]
fn scan_unwritable_destination_exits_one() {
    let out = monopiped(&[
        "scan",
        "P1",
        "--height",
        "2",
        "--out",
        "/nonexistent-dir/scan.jsonl",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("/nonexistent-dir/scan.jsonl"));

    let out = monopiped(&["scan", "P1", "--height", "0"]);
    assert_eq!(code(&out), 1);
    let out = monopiped(&["scan", "P7", "--height", "2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn search_small_bound_is_empty() {
    let out = monopiped(&["search", "--x-max", "5"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(stderr(&out).trim(), "0 found");

    let out = monopiped(&["search", "--x-max", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn search_output_ignores_thread_count() {
    let runs: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|t| monopiped(&["search", "--x-max", "2000", "--threads", t]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(String::from_utf8(runs[0].clone())
        .unwrap()
        .contains(r#""x":"1120""#));
}

fn write_scan(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("scan.jsonl");
    let out = monopiped(&["scan", "P1", "--height", "4", "--out", path_arg(&path)]);
    assert_eq!(code(&out), 0);
    path
}

#[test]
fn coverage_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dir.path().join("oracle.jsonl");
    let items: Vec<_> = brute_force_at(6188)
        .into_iter()
        .map(|e| (e, None))
        .collect();
    std::fs::write(&oracle, serialize_catalog(&items, Format::Jsonl)).unwrap();
    let scan = write_scan(dir.path());
    let out = monopiped(&[
        "coverage",
        "--oracle",
        path_arg(&oracle),
        "--scan",
        path_arg(&scan),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().last(), Some("1 matched, 0 unmatched"));
    assert!(text.contains("<- P1(2, 1)"));
}

#[test]
fn coverage_with_empty_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dir.path().join("oracle.jsonl");
    std::fs::write(&oracle, "").unwrap();
    let scan = write_scan(dir.path());
    let out = monopiped(&[
        "coverage",
        "--oracle",
        path_arg(&oracle),
        "--scan",
        path_arg(&scan),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "0 matched, 0 unmatched");
}

#[test]
fn coverage_reports_unmatched_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dir.path().join("oracle.jsonl");
    let out = monopiped(&["search", "--x-max", "7000", "--out", path_arg(&oracle)]);
    assert_eq!(code(&out), 0);
    let scan = write_scan(dir.path());
    let out = monopiped(&[
        "coverage",
        "--oracle",
        path_arg(&oracle),
        "--scan",
        path_arg(&scan),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().last(), Some("1 matched, 6 unmatched"));
}

#[test]
fn coverage_parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let scan = write_scan(dir.path());
    let text = std::fs::read_to_string(&scan).unwrap();
    let broken = dir.path().join("broken.jsonl");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[1] = lines[1].replacen(r#""x":""#, r#""x":"1"#, 1);
    std::fs::write(&broken, lines.join("\n")).unwrap();
    let out = monopiped(&[
        "coverage",
        "--oracle",
        path_arg(&broken),
        "--scan",
        path_arg(&scan),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = monopiped(&[
        "coverage",
        "--oracle",
        "/nonexistent/oracle.jsonl",
        "--scan",
        path_arg(&scan),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_and_unknown_commands() {
    assert_eq!(code(&monopiped(&["--help"])), 0);
    assert_eq!(code(&monopiped(&["--version"])), 0);
    assert_eq!(code(&monopiped(&["frobnicate"])), 1);
    assert_eq!(code(&monopiped(&[])), 1);
}
