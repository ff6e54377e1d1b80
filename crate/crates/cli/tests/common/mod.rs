//! Shared helpers for the CLI integration tests.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> PathBuf {
    crate_dir()
        .join("tests/fixtures")
        .join(format!("{name}.toml"))
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modroots"))
        .args(args)
        .output()
        .expect("binary runs")
}

type FixtureArgs<'a> = (
    &'a str,
    &'a [&'a str],
    &'a [&'a str],
    &'a [&'a str],
    &'a [&'a str],
);

/// (golden file stem, CLI arguments) for every subcommand.
pub fn golden_cases() -> Vec<(String, Vec<String>)> {
    let mut cases = Vec::new();
    let per_fixture: [FixtureArgs; 3] = [
        (
            "prime",
            &["--k", "2", "--j", "3"],
            &["--k", "1", "--j", "2"],
            &[],
            &["--k", "2"],
        ),
        (
            "extension",
            &["--k", "1", "--j", "2"],
            &["--k", "1", "--j", "2"],
            &[],
            &["--k", "1"],
        ),
        (
            "rational",
            &["--k", "1", "--j", "2"],
            &["--k", "1", "--j", "2", "--max-m", "4"],
            &[],
            &["--k", "1"],
        ),
    ];
    for (name, bkj, dseq, table, reflect) in per_fixture {
        let input = fixture(name).display().to_string();
        for (command, extra) in [
            ("bkj", bkj),
            ("dseq", dseq),
            ("table", table),
            ("reflect", reflect),
        ] {
            let mut args = vec![command.to_string(), "--input".into(), input.clone()];
            args.extend(extra.iter().map(|s| s.to_string()));
            cases.push((format!("{command}_{name}"), args));
        }
    }
    for (name, primes, degrees) in [
        ("primes", "2,3,5,7,11", "1"),
        ("f9", "3", "2"),
        ("char2", "2", "1,2,3"),
    ] {
        cases.push((
            format!("selfcheck_{name}"),
            ["selfcheck", "--primes", primes, "--degrees", degrees]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ));
    }
    cases
}
