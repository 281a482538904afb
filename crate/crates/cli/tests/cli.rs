use std::fs;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rauzy-squares"));
    c.env_remove("SQUARE_CENSUS_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn squares_reports() {
    let o = run(&["squares", "aabaabaa"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("total 4\n"));
    assert!(text.contains("root a (1): aa\n"));
    assert!(text.contains("root aab (3): aabaab abaaba baabaa\n"));

    assert_eq!(stdout(&run(&["squares", "ab"])), "total 0\n");

    let v = json(&run(&["squares", "aaaa", "--format", "json"]));
    assert_eq!(v["total"], 2);
    assert_eq!(v["roots"][0]["root"], "a");
    assert_eq!(v["roots"][0]["stats"]["r"], 2);
    assert_eq!(v["roots"][0]["stats"]["s"], 1);
    assert_eq!(v["roots"][0]["stats"]["M"], 4);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(code(&run(&["squares", "a b"])), 2);
    assert_eq!(code(&run(&["squares", "--hex", "0g"])), 2);
    assert_eq!(code(&run(&["squares", "ab", "--format", "dot"])), 2);
    assert_eq!(code(&run(&["lyndon", ""])), 2);
    assert_eq!(code(&run(&["conjecture", "0"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
}

#[test]
fn hex_words() {
    let v = json(&run(&["squares", "--hex", "00ff00ff", "--format", "json"]));
    assert_eq!(v["total"], 1);
    assert_eq!(v["word"], "0x00ff00ff");
}

#[test]
fn lyndon_text() {
    let o = run(&["lyndon", "abaab", "--power", "0", "--power", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("lyndon false\n"));
    assert!(text.contains("lyndon_root aabab rotation 4\n"), "{text}");
    assert!(text.contains("[aabab]_0 = {ε}\n"));
    let v = json(&run(&["lyndon", "aab", "--power", "2", "--format", "json"]));
    assert_eq!(v["conj_powers"][0]["members"], serde_json::json!(["aa", "ab", "ba"]));
    assert_eq!(v["lyndon_factors"], serde_json::json!(["a", "b", "ab", "aab"]));
}

#[test]
fn rauzy_outputs() {
    let dot = stdout(&run(&["rauzy", "aabaabaa", "--order", "1", "--dot"]));
    assert_eq!(dot.matches(" -> ").count(), 3);
    assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with("\";")).count(), 2);

    let v = json(&run(&["rauzy", "a", "--all"]));
    let orders: Vec<u64> = v["graphs"].as_array().unwrap().iter().map(|g| g["order"].as_u64().unwrap()).collect();
    assert_eq!(orders, [0, 1]);
    assert_eq!(v["cyclomatic_number"], 1);

    let dot = stdout(&run(&["rauzy", "aabaabaa", "--all", "--mark-cs", "--dot"]));
    assert_eq!(dot.matches("style=dashed").count(), 8);
    let v = json(&run(&["rauzy", "aabaabaa", "--all", "--mark-cs"]));
    assert_eq!(v["cs_smallest_arcs"].as_array().unwrap().len(), 8);
    assert_eq!(v["cyclomatic_number"], 8);

    assert_eq!(code(&run(&["rauzy", "ab", "--order", "3"])), 2);
    assert_eq!(code(&run(&["rauzy", "ab"])), 2);
}

#[test]
fn verify_single_words() {
    let o = run(&["verify", "aabaabaa"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["pass"], true);
    let counting = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "long_square_bound[L=3]").unwrap();
    assert_eq!(counting["rhs"], "83/12");

    let o = run(&["verify", ""]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["pass"], true);

    // A letter squared violates the literal n - sqrt(n) bound.
    let o = run(&["verify", "aa"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("short_square_bound") && err.contains("witness"), "{err}");
}

#[test]
fn verify_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut text = String::from("# random words, lengths 3..=40\n\n");
    for _ in 0..10_000 {
        let n = rng.gen_range(3..=40);
        let sigma = rng.gen_range(1..=4u8);
        text.extend((0..n).map(|_| (b'a' + rng.gen_range(0..sigma)) as char));
        text.push('\n');
    }
    fs::write(&corpus, text).unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--file", corpus.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["words"], 10_000);
    assert_eq!(v["passed"], 10_000);
    assert_eq!(v["reports"].as_array().unwrap().len(), 0);

    fs::write(&corpus, "ab\naa\n").unwrap();
    let o = run(&["verify", "--file", corpus.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["passed"], 1);
    assert_eq!(v["reports"][0]["word"], "aa");

    fs::write(&corpus, "ab\na b\n").unwrap();
    assert_eq!(code(&run(&["verify", "--file", corpus.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["verify", "--file", dir.path().join("missing").to_str().unwrap()])), 3);
    assert_eq!(code(&run(&["verify", "ab", "--out", dir.path().join("no/such/dir").to_str().unwrap()])), 3);
}

#[test]
fn census_rows() {
    let o = run(&["census", "--n-max", "12", "--sigma", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n\tsigma\tmax_sq\tconjecture_rhs\tpass\twitness_count\tfirst_witness");
    assert_eq!(lines.len(), 13);
    assert!(lines[1..].iter().all(|l| l.split('\t').nth(4) == Some("true")));

    let text = stdout(&run(&["census", "--n-max", "1", "--sigma", "1"]));
    assert_eq!(text.lines().nth(1).unwrap(), "1\t1\t0\t1\ttrue\t1\ta");
}

#[test]
fn census_cap() {
    let o = run(&["census", "--n-max", "23"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    let o = bin().args(["census", "--n-max", "6"]).env("SQUARE_CENSUS_CAP", "5").output().unwrap();
    assert_eq!(code(&o), 2);
    let o = bin().args(["census", "--n-max", "5"]).env("SQUARE_CENSUS_CAP", "5").output().unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn census_resume_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("census.json");
    let cp = cp.to_str().unwrap();
    let full = stdout(&run(&["census", "--n-max", "14"]));

    let first = run(&["census", "--n-max", "14", "--checkpoint", cp, "--stop-after-partitions", "50"]);
    assert_eq!(code(&first), 0);
    assert!(stdout(&first).lines().count() < 15);
    let second = run(&["census", "--n-max", "14", "--checkpoint", cp, "--jobs", "3"]);
    assert_eq!(code(&second), 0);
    assert_eq!(stdout(&second), full);

    fs::write(dir.path().join("census.json"), "{\"version\": 1").unwrap();
    assert_eq!(code(&run(&["census", "--n-max", "4", "--checkpoint", cp])), 3);
}

#[test]
fn conjecture_values() {
    let o = run(&["conjecture", "1", "--to", "16"]);
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows[7], "8\t5");
    assert_eq!(rows[15], "16\t11");
    let v = json(&run(&["conjecture", "4", "--format", "json"]));
    assert_eq!(v[0]["rhs"], 2);
}
