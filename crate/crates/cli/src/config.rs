//! `key = value` configuration files. Entries become flags inserted ahead of
//! the command-line flags, so anything given on the command line wins.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::Path;

use clap::{ArgMatches, Command};

/// Global options that take a value and may precede the subcommand.
const GLOBAL_VALUED: [&str; 2] = ["--config", "--out"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Blank lines and lines starting with `#` are skipped; keys accept `_` or `-`.
pub fn parse(text: &str) -> Result<Vec<Entry>, String> {
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        if !seen.insert(key.clone()) {
            return Err(format!("line {}: duplicate key `{key}`", i + 1));
        }
        entries.push(Entry { line: i + 1, key, value: v.trim().to_string() });
    }
    Ok(entries)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Index of the subcommand token in `args`.
fn subcommand_position(args: &[OsString], cmd: &Command) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if GLOBAL_VALUED.contains(&s.as_ref()) {
            i += 2;
            continue;
        }
        if cmd.find_subcommand(s.as_ref()).is_some() {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

/// Splices the config file named by `--config` into `args`. Keys must name a
/// flag of the chosen subcommand, a flag of some other subcommand (ignored,
/// so one file can serve several commands) or `out`.
pub fn expand_args(args: Vec<OsString>, cmd: &Command) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {}: {e}", Path::new(&path).display()))?;
    let entries = parse(&text).map_err(|e| format!("{}: {e}", Path::new(&path).display()))?;
    let Some(pos) = subcommand_position(&args, cmd) else { return Ok(args) };
    let sub = cmd.find_subcommand(args[pos].to_string_lossy().as_ref()).expect("located above");
    let mut global = Vec::new();
    let mut local = Vec::new();
    for e in entries {
        if e.key == "out" {
            global.push(OsString::from(format!("--out={}", e.value)));
            continue;
        }
        if e.key == "config" {
            return Err(format!("line {}: config files cannot include other config files", e.line));
        }
        match sub.get_arguments().find(|a| a.get_long() == Some(e.key.as_str())) {
            Some(arg) if arg.get_action().takes_values() => {
                // One token, so values such as `-0.1` are not read as flags.
                local.push(OsString::from(format!("--{}={}", e.key, e.value)));
            }
            Some(_) => match parse_bool(&e.value) {
                Some(true) => local.push(OsString::from(format!("--{}", e.key))),
                Some(false) => {}
                None => return Err(format!("line {}: `{}` expects true or false, got `{}`", e.line, e.key, e.value)),
            },
            None => {
                let elsewhere = cmd
                    .get_subcommands()
                    .any(|s| s.get_arguments().any(|a| a.get_long() == Some(e.key.as_str())));
                if !elsewhere {
                    return Err(format!("line {}: unknown key `{}`", e.line, e.key));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(args.len() + global.len() + local.len());
    out.push(args[0].clone());
    out.extend(global);
    out.extend_from_slice(&args[1..=pos]);
    out.extend(local);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

/// Effective subcommand settings as `key = value` lines, in declaration
/// order. The output is itself a valid config file.
pub fn echo(sub: &Command, matches: &ArgMatches) -> String {
    let mut s = String::new();
    for arg in sub.get_arguments() {
        let (Some(long), id) = (arg.get_long(), arg.get_id().as_str()) else { continue };
        if arg.is_global_set() || long == "help" || long == "config" || long == "out" {
            continue;
        }
        let Ok(Some(values)) = matches.try_get_raw(id) else { continue };
        let values: Vec<String> = values.map(|v| v.to_string_lossy().into_owned()).collect();
        s.push_str(&format!("{long} = {}\n", values.join(",")));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmd() -> Command {
        Command::new("t")
            .args_override_self(true)
            .arg(clap::Arg::new("out").long("out").global(true))
            .arg(clap::Arg::new("config").long("config").global(true))
            .subcommand(
                Command::new("a")
                    .args_override_self(true)
                    .arg(clap::Arg::new("seed").long("seed"))
                    .arg(clap::Arg::new("fast").long("fast").action(clap::ArgAction::SetTrue)),
            )
            .subcommand(Command::new("b").arg(clap::Arg::new("only-b").long("only-b")))
    }

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_normalizes_keys() {
        let e = parse("# c\n\nmin_experts = 3\n schema = a=b,c=d \n").unwrap();
        assert_eq!(e[0].key, "min-experts");
        assert_eq!(e[1].value, "a=b,c=d");
        assert!(parse("x = 1\nx = 2").unwrap_err().contains("duplicate"));
        assert!(parse("novalue").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        std::fs::write(&path, "seed = -4\nfast = true\nonly-b = 1\nout = x\n").unwrap();
        let p = path.to_str().unwrap();
        let args = expand_args(os(&["t", "--config", p, "a", "--seed", "9"]), &cmd()).unwrap();
        let m = cmd().try_get_matches_from(args).unwrap();
        let (_, sm) = m.subcommand().unwrap();
        assert_eq!(sm.get_one::<String>("seed").unwrap(), "9");
        let args = expand_args(os(&["t", "--config", p, "a"]), &cmd()).unwrap();
        let m = cmd().try_get_matches_from(args).unwrap();
        assert_eq!(m.subcommand().unwrap().1.get_one::<String>("seed").unwrap(), "-4");
        assert!(sm.get_flag("fast"));
        assert_eq!(m.get_one::<String>("out").unwrap(), "x");
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(expand_args(os(&["t", "--config", p, "a"]), &cmd()).unwrap_err().contains("unknown key"));
    }
}
