//! `--config` files: `key = value` lines, `#` comments. A key names a long
//! flag of the invoked subcommand and is only used when that flag is absent
//! from the command line.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Command, CommandFactory};

use crate::args::Cli;

pub fn parse(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), i + 1);
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            bail!("{}:{}: empty key", path.display(), i + 1);
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Returns `argv` with `--config FILE` removed and config entries appended.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            match it.next() {
                Some(p) => config = Some(p),
                None => rest.push(a),
            }
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(config) = config else { return Ok(rest) };
    let path = Path::new(&config);
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let entries = parse(&text, path)?;

    let root = Cli::command();
    let leaf = leaf_command(&root, &rest);
    for (key, value) in entries {
        let given = rest.iter().any(|a| {
            a.strip_prefix("--")
                .is_some_and(|f| f == key || f.starts_with(&format!("{key}=")))
        });
        if given {
            continue;
        }
        let arg = leaf
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()));
        let Some(arg) = arg else {
            log::warn!("config key `{key}` is not a flag of this command; ignored");
            continue;
        };
        let takes_value = !matches!(
            arg.get_action(),
            ArgAction::SetTrue | ArgAction::SetFalse | ArgAction::Count
        );
        if !takes_value {
            match value.as_str() {
                "true" | "yes" | "1" => rest.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => bail!("config key `{key}` expects true or false, got `{value}`"),
            }
            continue;
        }
        let multiple = arg.get_num_args().is_some_and(|r| r.max_values() > 1);
        rest.push(format!("--{key}"));
        if multiple {
            rest.extend(value.split_whitespace().map(str::to_string));
        } else {
            rest.push(value);
        }
    }
    Ok(rest)
}

fn leaf_command<'a>(root: &'a Command, argv: &[String]) -> &'a Command {
    let mut cmd = root;
    for a in argv.iter().skip(1) {
        if let Some(sub) = cmd.find_subcommand(OsString::from(a)) {
            cmd = sub;
        }
    }
    cmd
}
