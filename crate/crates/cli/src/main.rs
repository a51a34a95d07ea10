mod args;
mod commands;
mod config;
mod manifest;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use args::{Cli, Command};
use manifest::{digest_all, sha256_hex, Manifest};

const THREADS_VAR: &str = "XFERVOCAB_THREADS";

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let argv = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::try_parse_from(&argv).unwrap_or_else(|e| e.exit());
    let result = match cli.command {
        Command::Replay(r) => replay(&r.manifest),
        command => execute(command, &argv, cli.manifest.as_deref(), cli.no_manifest),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if commands::is_usage_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_VAR}={v} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

/// `argv` without the flags that only control where the manifest goes.
fn recorded_argv(argv: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--manifest" {
            it.next();
        } else if !(a.starts_with("--manifest=") || a == "--no-manifest") {
            out.push(a.clone());
        }
    }
    out
}

fn execute(command: Command, argv: &[String], manifest_path: Option<&Path>, no_manifest: bool) -> Result<()> {
    let o = commands::run(command)?;
    std::io::stdout().write_all(o.stdout.as_bytes())?;
    if no_manifest {
        return Ok(());
    }
    let target = match (manifest_path, o.outputs.first()) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(first)) => manifest::default_path(first),
        (None, None) => return Ok(()),
    };
    let m = Manifest {
        tool: manifest::TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        format: xfervocab::FORMAT_VERSION.into(),
        argv: recorded_argv(argv),
        cwd: std::env::current_dir()?,
        seed: o.seed,
        inputs: digest_all(&o.inputs)?,
        outputs: digest_all(&o.outputs)?,
        stdout_sha256: sha256_hex(o.stdout.as_bytes()),
    };
    m.save(&target)
}

fn replay(path: &Path) -> Result<()> {
    let m = Manifest::load(path)?;
    if m.tool != manifest::TOOL {
        bail!("{} was not written by {}", path.display(), manifest::TOOL);
    }
    if m.format != xfervocab::FORMAT_VERSION {
        log::warn!(
            "manifest format {} differs from {}",
            m.format,
            xfervocab::FORMAT_VERSION
        );
    }
    std::env::set_current_dir(&m.cwd).with_context(|| format!("entering {}", m.cwd.display()))?;
    let inputs = digest_all(&m.inputs.iter().map(|d| d.path.clone()).collect::<Vec<_>>())?;
    let changed = manifest::diff("input", &m.inputs, &inputs);
    if !changed.is_empty() {
        bail!("inputs changed since the recorded run:\n  {}", changed.join("\n  "));
    }
    let cli = Cli::try_parse_from(&m.argv).context("recorded command line no longer parses")?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("a manifest cannot record a replay");
    }
    let o = commands::run(cli.command)?;
    let outputs = digest_all(&o.outputs)?;
    let mut diffs = manifest::diff("output", &m.outputs, &outputs);
    if sha256_hex(o.stdout.as_bytes()) != m.stdout_sha256 {
        diffs.push("standard output differs".into());
    }
    if !diffs.is_empty() {
        bail!("replay differs from the recorded run:\n  {}", diffs.join("\n  "));
    }
    println!("replay matches: {} outputs identical", outputs.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_flags_are_not_recorded() {
        let argv: Vec<String> = [
            "x",
            "--manifest",
            "m.json",
            "eval",
            "--no-manifest",
            "--manifest=y",
            "stop",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(recorded_argv(&argv), ["x", "eval", "stop"]);
    }
}
