//! `key = value` config files. Each entry becomes `--key value` appended
//! after the command-line arguments, so file values win over flags.

use std::fs;
use std::path::Path;

use anyhow::Context;

use crate::UsageError;

pub fn read_pairs(path: &Path) -> anyhow::Result<Vec<(String, String)>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse_pairs(&text)
}

pub fn parse_pairs(text: &str) -> anyhow::Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("config line {}: expected key = value", no + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(UsageError(format!("config line {}: invalid key", no + 1)).into());
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

/// Finds `--config PATH` or `--config=PATH` in raw arguments.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_comments() {
        let p = parse_pairs("# grid\nsnr = 10:16:1\n\nn_list=50,100\n").unwrap();
        assert_eq!(
            p,
            [
                ("snr".into(), "10:16:1".into()),
                ("n-list".into(), "50,100".into())
            ]
        );
        assert!(parse_pairs("novalue").is_err());
    }

    #[test]
    fn finds_config_flag() {
        let args: Vec<String> = ["ccdm", "sweep", "--config=a.cfg", "dos"]
            .map(String::from)
            .to_vec();
        assert_eq!(config_path(&args).as_deref(), Some("a.cfg"));
        let args: Vec<String> = ["ccdm", "--config", "b.cfg"].map(String::from).to_vec();
        assert_eq!(config_path(&args).as_deref(), Some("b.cfg"));
    }
}
