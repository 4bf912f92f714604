//! Driving the command layer in-process to produce JSON / CSV reports.

use clap::Parser;
use tridiag::cli::{execute, Cli};

pub fn run() -> tridiag::Result<()> {
    let spec = r#"{"a": {"power": 1}, "b": {"base": [0.5, 0]}}"#;
    for args in [
        vec!["tridiag", "describe"],
        vec!["tridiag", "classify", "--lambda", "1,0"],
        vec!["tridiag", "spectrum", "--n", "10", "--horizon", "100"],
        vec!["tridiag", "matrix", "--n", "4", "--csv"],
    ] {
        let cli = Cli::parse_from(&args);
        let out = execute(&cli, spec, "inline.json").expect("valid inline spec");
        println!("$ {}", args[1..].join(" "));
        print!("{}", out.stdout);
        for (name, contents) in &out.files {
            println!("  [{name}: {} bytes]", contents.len());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tridiag::Result<()> {
    run()
}
