//! Drive the command pipeline from code: build a config, run a command and
//! read the report, as `fjohn` does from the shell.

use clap::Parser;
use funjohn::cli::{run, Cli};
use funjohn::config::{FunctionSpec, ProblemConfig};

fn main() -> funjohn::Result<()> {
    let cfg = ProblemConfig {
        seed: Some(5),
        f: Some(FunctionSpec::CorpusBump { dim: 2, seed: 5 }),
        ..Default::default()
    };
    let text = cfg.to_json();
    println!("{text}");
    assert_eq!(ProblemConfig::from_json(&text)?, cfg);

    let cli = Cli::parse_from(["fjohn", "john-check"]);
    let out = run(&cli.command, cfg)?;
    println!("{} passed: {}, hash {}", out.report.command, out.report.passed, out.report.determinism_hash);
    for line in out.lines {
        println!("{line}");
    }
    Ok(())
}
