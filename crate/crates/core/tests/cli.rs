use std::io::Write;
use std::process::{Command, Output, Stdio};

use egz::cli::{generate_egz, Distribution};

fn egz(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_egz"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn egz");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_single_value() {
    let o = egz(&["solve"], "1\n42\n");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn solve_json_is_flat() {
    let o = egz(&["solve", "--json", "--verify"], "3\n5 5 5 5 5\n");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["sum_mod_n"], 0);
    let idx: Vec<u64> = v["indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(idx.len(), 3);
    assert!(idx.windows(2).all(|w| w[0] < w[1]));
    assert!(idx.iter().all(|&i| (1..=5).contains(&i)));
}

#[test]
fn prime_target_examples() {
    let o = egz(
        &["prime-target", "--p", "3", "--d", "1 2", "--tau", "2"],
        "",
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\n");
    let o = egz(&["prime-target", "--p", "2", "--d", "1", "--tau", "0"], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "\n");
    let o = egz(
        &[
            "prime-target",
            "--p",
            "5",
            "--d",
            "2,2,2,2",
            "--tau",
            "1",
            "--debug-audit",
        ],
        "",
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 2 3\n");
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let a = egz(
        &[
            "gen",
            "--n",
            "50",
            "--seed",
            "9",
            "--dist",
            "adversarial-few-residues",
        ],
        "",
    );
    let b = egz(
        &[
            "gen",
            "--n",
            "50",
            "--seed",
            "9",
            "--dist",
            "adversarial-few-residues",
        ],
        "",
    );
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let expected = egz::cli::format_instance(
        &generate_egz(50, 9, Distribution::AdversarialFewResidues).unwrap(),
    );
    assert_eq!(stdout(&a), expected);
    let solved = egz(&["solve", "--verify", "--debug-audit"], &stdout(&a));
    assert!(
        solved.status.success(),
        "{}",
        String::from_utf8_lossy(&solved.stderr)
    );
    assert_eq!(stdout(&solved).split_whitespace().count(), 50);
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let good = dir.path().join("good.json");
    let bad = dir.path().join("bad.txt");
    std::fs::write(&inst, "3\n1 1 2 5 7\n").unwrap();
    let o = egz(&["solve", "--json", inst.to_str().unwrap()], "");
    assert!(o.status.success());
    std::fs::write(&good, o.stdout).unwrap();
    std::fs::write(&bad, "1 2 3\n").unwrap();

    let ok = egz(
        &["verify", inst.to_str().unwrap(), good.to_str().unwrap()],
        "",
    );
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "valid\n");
    let rejected = egz(
        &["verify", inst.to_str().unwrap(), bad.to_str().unwrap()],
        "",
    );
    assert_eq!(rejected.status.code(), Some(1));
    assert!(stdout(&rejected).contains("sum"));
}

#[test]
fn malformed_input_exits_with_two() {
    for text in ["", "2\n1 2", "abc", "0\n"] {
        let o = egz(&["solve"], text);
        assert_eq!(o.status.code(), Some(2), "input {text:?}");
    }
    let big = egz::cli::format_instance(&generate_egz(2001, 1, Distribution::Uniform).unwrap());
    assert_eq!(
        egz(&["solve", "--debug-audit"], &big).status.code(),
        Some(2)
    );
    assert_eq!(
        egz(&["prime-egz"], "4\n1 2 3 4 5 6 7\n").status.code(),
        Some(2)
    );
    assert_eq!(egz(&["frobnicate"], "").status.code(), Some(2));
}

#[test]
fn prime_egz_subcommand() {
    let o = egz(&["prime-egz", "--verify"], "5\n0 1 2 0 1 3 3 4 4\n");
    assert!(o.status.success());
    assert_eq!(stdout(&o).split_whitespace().count(), 5);
}

#[test]
fn oracle_subcommands() {
    let o = egz(
        &[
            "oracle", "sumset", "--p", "13", "--ap", "3:2", "--ap", "2:3",
        ],
        "",
    );
    assert_eq!(stdout(&o), "0 2 3 4 5 6 7 8 9 10 12\n");
    let o = egz(
        &[
            "oracle",
            "subset-sum",
            "--p",
            "5",
            "--d",
            "2 2 2 2",
            "--tau",
            "1",
        ],
        "",
    );
    assert_eq!(stdout(&o), "1 2 3\n");
    let o = egz(&["oracle", "egz"], "2\n1 1 1\n");
    assert_eq!(stdout(&o), "1 2\n");
}

#[test]
fn bench_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let o = egz(
        &[
            "bench",
            "--sizes",
            "101,211",
            "--seeds",
            "2",
            "--mode",
            "prime-target",
            "--csv",
            csv.to_str().unwrap(),
        ],
        "",
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,wall_time_ns,owner_reads,owner_writes,owner_clears,cells_scanned,merges,extensions,recon_nodes,touches_per_p"
    );
    assert_eq!(lines.count(), 4);
    let o = egz(
        &[
            "bench",
            "--sizes",
            "100",
            "--seeds",
            "1",
            "--mode",
            "prime-target",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_solve_round_trip_200_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(200);
    let mut sizes: Vec<u64> = vec![1, 1_000_000];
    while sizes.len() < 200 {
        sizes.push(10f64.powf(rng.gen_range(0.0..6.0)).round().max(1.0) as u64);
    }
    for (k, n) in sizes.into_iter().enumerate() {
        let seed = rng.gen::<u64>().to_string();
        let dist = [
            "uniform",
            "adversarial-few-residues",
            "single-residue-heavy",
        ][k % 3];
        let gen = egz(
            &[
                "gen",
                "--n",
                &n.to_string(),
                "--seed",
                &seed,
                "--dist",
                dist,
            ],
            "",
        );
        assert!(gen.status.success());
        let text = stdout(&gen);
        let first = egz(&["solve", "--verify"], &text);
        assert!(
            first.status.success(),
            "n={n} seed={seed}: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        assert_eq!(stdout(&first).split_whitespace().count() as u64, n);
        if n <= 1000 {
            assert_eq!(
                egz(&["solve", "--verify"], &text).stdout,
                first.stdout,
                "nondeterministic output"
            );
        }
    }
}
