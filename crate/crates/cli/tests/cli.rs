use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn o2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_o2"))
        .args(args)
        .env_remove("O2_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// In-process run, returning (exit code, stdout, stderr).
fn run(args: &[&str]) -> (u8, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("o2").chain(args.iter().copied());
    let c = o2_cli::run(argv, &mut out, &mut err);
    (
        c,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("o2-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn check() {
    assert_eq!(code(&o2(&["check", "abAB"])), 0);
    assert_eq!(code(&o2(&["check", "ab"])), 1);
    assert_eq!(
        run(&["check", "ab", "-v"]),
        (1, String::new(), "(1,1)\n".into())
    );
    assert_eq!(run(&["check", "a3bA3B", "--n", "3"]).0, 0);
    assert_eq!(run(&["check", "a3A3"]).0, 64);
    assert_eq!(run(&["check", ""]).0, 0);
}

#[test]
fn parse() {
    let o = o2(&["parse", "aA", "--format", "sexp"]);
    assert_eq!(
        (code(&o), stdout(&o)),
        (0, "(r_z \"aA\" (r_a \"a\" \"A\"))\n".into())
    );
    let (c, out, _) = run(&["parse", "aA"]);
    assert_eq!(c, 0);
    assert_eq!(out, "{\"rule\": \"r_z\", \"args\": [\"aA\"], \"children\": [{\"rule\": \"r_a\", \"args\": [\"a\", \"A\"], \"children\": []}]}\n");
    assert_eq!(run(&["parse", "ab"]).0, 2);
    assert_eq!(run(&["parse", "xy"]).0, 64);
    assert_eq!(run(&["parse", "abAB", "--strategy", "bogus"]).0, 64);
}

#[test]
fn usage() {
    assert_eq!(run(&[]).0, 64);
    assert_eq!(run(&["frobnicate"]).0, 64);
    let (c, out, _) = run(&["--help"]);
    assert_eq!(c, 0);
    assert!(out.contains("Usage"));
    assert_eq!(run(&["gen", "--length", "5"]).0, 64);
}

#[test]
fn verify() {
    for strategy in ["guided", "search"] {
        for format in ["json", "sexp"] {
            let (_, tree, _) = run(&[
                "parse",
                "abbABaAB",
                "--format",
                format,
                "--strategy",
                strategy,
            ]);
            let p = scratch(&format!("{strategy}.{format}"), &tree);
            let path = p.to_str().unwrap();
            assert_eq!(
                run(&["verify", path]),
                (0, "ok \"abbABaAB\"\n".into(), String::new())
            );
            assert_eq!(run(&["verify", path, "--word", "abbABaAB"]).0, 0);
            assert_eq!(run(&["verify", path, "--word", "abbABABa"]).0, 3);
            std::fs::remove_file(p).unwrap();
        }
    }
    let bad = scratch("bad.sexp", "(r_z \"aA\" (r_a \"a\" \"a\"))");
    assert_eq!(run(&["verify", bad.to_str().unwrap()]).0, 3);
    let junk = scratch("junk", "not a tree");
    assert_eq!(run(&["verify", junk.to_str().unwrap()]).0, 3);
    assert_eq!(run(&["verify", "/nonexistent/o2/tree.json"]).0, 74);
    std::fs::remove_file(bad).unwrap();
    std::fs::remove_file(junk).unwrap();
}

#[test]
fn gen_is_seeded() {
    let a = o2(&["gen", "--length", "12", "--count", "20", "--seed", "7"]);
    let b = o2(&["gen", "--length", "12", "--count", "20", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 20);
    let c = o2(&["gen", "--length", "12", "--count", "20", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_o2"))
        .args(["gen", "--length", "12", "--count", "20"])
        .env("O2_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn gen_parse_verify_round_trip() {
    for seed in 0..5 {
        let (_, words, _) = run(&[
            "gen",
            "--length",
            "30",
            "--count",
            "8",
            "--seed",
            &seed.to_string(),
        ]);
        for word in words.lines() {
            assert_eq!(run(&["check", word]).0, 0);
            let (c, tree, _) = run(&["parse", word, "--format", "sexp"]);
            assert_eq!(c, 0);
            let p = scratch(&format!("rt-{seed}"), &tree);
            assert_eq!(run(&["verify", p.to_str().unwrap(), "--word", word]).0, 0);
            std::fs::remove_file(p).unwrap();
        }
    }
}

#[test]
fn fuzz() {
    let (c, out, _) = run(&["fuzz", "--max-len", "30", "--count", "100", "--seed", "4"]);
    assert_eq!(c, 0);
    assert_eq!(out, "fuzz: 100 words passed (seed 4, max length 30)\n");
}

#[test]
fn bumps() {
    assert_eq!(run(&["bumps", "abbAaB"]).1, "a:[0,3]\nA:[3,4]\n");
    assert_eq!(run(&["bumps", "abAB"]).1, "a:[0,2]\nb:[1,3]\n");
    assert_eq!(run(&["bumps", "abbaa"]).1, "");
    assert_eq!(run(&["bumps", "a3a3A3", "--n", "3"]).1, "a3:[1,2]\n");
    let mut child = Command::new(env!("CARGO_BIN_EXE_o2"))
        .args(["bumps", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"bAab\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "A:[1,2]\n");
}
