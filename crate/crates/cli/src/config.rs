//! Flat `key = value` configuration files.
//!
//! Keys are long option names without the leading dashes. A value from the
//! file is used only when the option was not given on the command line.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value", n + 1));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", n + 1));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

pub fn read(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    parse(&text)
}

/// Appends `--key=value` for every configured option the command line left
/// unset. Keys that belong only to other subcommands are skipped.
pub fn merge(
    cli: &Command,
    matches: &ArgMatches,
    mut args: Vec<OsString>,
    entries: &[(String, String)],
) -> Result<Vec<OsString>, clap::Error> {
    let (sub_name, sub_matches) = matches
        .subcommand()
        .expect("a subcommand is required by the parser");
    let sub = cli
        .find_subcommand(sub_name)
        .expect("matched subcommand exists");

    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let global = cli
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()));
        let local = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()));
        let (arg, source) = match (global, local) {
            (Some(a), _) => (a, matches.value_source(a.get_id().as_str())),
            (None, Some(a)) => (a, sub_matches.value_source(a.get_id().as_str())),
            (None, None) => {
                let elsewhere = cli.get_subcommands().any(|s| {
                    s.get_arguments()
                        .any(|a| a.get_long() == Some(key.as_str()))
                });
                if elsewhere {
                    continue;
                }
                return Err(cli.clone().error(
                    clap::error::ErrorKind::UnknownArgument,
                    format!("unknown configuration key '{key}'"),
                ));
            }
        };
        if source == Some(ValueSource::CommandLine) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "1" | "yes" => args.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                _ => {
                    return Err(cli.clone().error(
                        clap::error::ErrorKind::InvalidValue,
                        format!("configuration key '{key}' expects true or false"),
                    ))
                }
            }
        } else {
            args.push(format!("--{key}={value}").into());
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let entries = parse("# run\nlambda = 4.5\nn_modes=32 # trailing\n\n").unwrap();
        assert_eq!(
            entries,
            [
                ("lambda".to_string(), "4.5".to_string()),
                ("n-modes".to_string(), "32".to_string())
            ]
        );
        assert!(parse("lambda 4.5").is_err());
    }
}
