//! Command-line interface: `superbgg check | cohomology | resolve` with the
//! canonical spec-string flags, structured JSON reports, and exit statuses
//! 0 (all pass), 1 (a mathematical check failed), 2 (usage error),
//! 3 (truncation/window insufficiency).

use std::fs;
use std::process::ExitCode;

use superbgg_core::pipeline::{cmd_check, cmd_cohomology, cmd_resolve, Outcome, RunConfig};

const USAGE: &str = "usage: superbgg <check|cohomology|resolve> [options]
options:
  --algebra gl:M|N      the algebra (default gl:1|1)
  --levi i1,i2,...      Levi simple roots; empty list means the Borel
  --module SPEC         natural | trivial | dual | tensor:natural^k |
                        cyclic:tensor:natural^k@hw=w1,w2,...
  --star SPEC           natural | dual | dualized:<star>
  --variant V           neccond | neccond2 (check command)
  -N NUM                jet truncation degree
  --kmax NUM            top cohomology degree
  --box LO,HI           weight box for the Euler verification
  --out PATH            write the report to a file instead of stdout
  --config PATH         read key=value lines (same keys as the flags)
  -v                    increase verbosity";

fn parse_args(args: &[String]) -> Result<(String, RunConfig), String> {
    if args.is_empty() {
        return Err("missing command".into());
    }
    let command = args[0].clone();
    if !matches!(command.as_str(), "check" | "cohomology" | "resolve") {
        return Err(format!("unknown command {command:?}"));
    }
    let mut cfg = RunConfig::default();
    let mut i = 1;
    while i < args.len() {
        let arg = &args[i];
        let (key, value) = match arg.as_str() {
            "-v" => {
                cfg.verbosity += 1;
                i += 1;
                continue;
            }
            "-N" => {
                i += 1;
                ("N", args.get(i).ok_or("missing value for -N")?.clone())
            }
            "--config" => {
                i += 1;
                let path = args.get(i).ok_or("missing value for --config")?;
                let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
                for line in text.lines() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let (k, v) = line
                        .split_once('=')
                        .ok_or_else(|| format!("bad config line {line:?}"))?;
                    cfg.assign(k.trim(), v.trim()).map_err(|e| e.to_string())?;
                }
                i += 1;
                continue;
            }
            flag if flag.starts_with("--") => {
                let body = flag.trim_start_matches("--");
                let (key, inline) = match body.split_once('=') {
                    Some((k, v)) => (k.to_string(), Some(v.to_string())),
                    None => (body.to_string(), None),
                };
                let value = match inline {
                    Some(v) => v,
                    None => {
                        i += 1;
                        args.get(i)
                            .ok_or_else(|| format!("missing value for {flag}"))?
                            .clone()
                    }
                };
                (
                    match key.as_str() {
                        "algebra" => "algebra",
                        "levi" => "levi",
                        "module" => "module",
                        "star" => "star",
                        "variant" => "variant",
                        "kmax" => "kmax",
                        "box" => "box",
                        "out" => "out",
                        _ => return Err(format!("unknown flag {flag}")),
                    },
                    value,
                )
            }
            other => return Err(format!("unexpected argument {other:?}")),
        };
        cfg.assign(key, &value).map_err(|e| e.to_string())?;
        i += 1;
    }
    Ok((command, cfg))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (command, cfg) = match parse_args(&args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    let result = match command.as_str() {
        "check" => cmd_check(&cfg),
        "cohomology" => cmd_cohomology(&cfg),
        "resolve" => cmd_resolve(&cfg),
        _ => unreachable!(),
    };
    let (report, outcome) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    let text = if cfg.verbosity > 0 {
        report.full_string()
    } else {
        report.body_string()
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text + "\n") {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(match outcome {
        Outcome::AllPass => 0u8,
        Outcome::CheckFailed => 1,
        Outcome::UsageError => 2,
        Outcome::TruncationInsufficient => 3,
    })
}
