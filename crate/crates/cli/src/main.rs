use std::process::ExitCode;

use qtraj::experiments::ExperimentKind;
use qtraj_cli::config::{expected_keys, required_keys};
use qtraj_cli::{execute, parse_args, run_selftest};

fn usage() -> String {
    let mut s = String::from(
        "usage: qtraj <subcommand> [--config <file>] [--out <dir>] [--seed <u64>] [--threads <n|auto>] [--<key> <value>]...\n\nsubcommands:\n",
    );
    for kind in ExperimentKind::ALL {
        s.push_str(&format!(
            "  {:<15} required: {}\n  {:<15} keys: {}\n",
            kind.name(),
            required_keys(kind).join(", "),
            "",
            expected_keys(kind).join(", ")
        ));
    }
    s.push_str("  selftest        run the analytic-oracle suite\n");
    s
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(sub) = args.first() else {
        eprint!("{}", usage());
        return ExitCode::from(2);
    };
    if sub == "--help" || sub == "-h" || sub == "help" {
        print!("{}", usage());
        return ExitCode::SUCCESS;
    }
    if sub == "selftest" {
        let checks = run_selftest();
        for c in &checks {
            println!("{c}");
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        println!("{} checks, {failed} failed", checks.len());
        return if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE };
    }
    let Some(kind) = ExperimentKind::from_name(sub) else {
        eprintln!("unknown subcommand `{sub}`\n");
        eprint!("{}", usage());
        return ExitCode::from(2);
    };
    let cfg = match parse_args(kind, &args[1..]) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(&cfg) {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
