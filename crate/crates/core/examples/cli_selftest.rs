//! Driving the command-line front end in-process and running the built-in
//! self test.

use factorx::cli::run_with;
use factorx::selftest::run_selftest;

fn main() {
    let report = run_selftest();
    println!(
        "self test: {} passed, {} failed",
        report.passed, report.failed
    );

    for args in [
        vec!["factorx", "exact", "--kn", "8", "--regular", "3"],
        vec!["factorx", "regular", "--n", "100", "--d", "10"],
        vec![
            "factorx",
            "--output",
            "tsv",
            "beta",
            "--kn",
            "6",
            "--regular",
            "2",
        ],
    ] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(args.iter().copied(), &mut out, &mut err);
        println!("$ {} -> exit {code}", args[1..].join(" "));
        print!("{}", String::from_utf8_lossy(&out));
    }
}
