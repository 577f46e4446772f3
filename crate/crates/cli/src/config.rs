//! `--config FILE`: `key = value` lines appended as `--key value` flags.
//! Flags given on the command line take precedence.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut out = args.clone();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected 'key = value'", path.display(), lineno + 1))?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim().trim_matches('"');
        if key.is_empty() {
            return Err(format!("{}:{}: empty key", path.display(), lineno + 1));
        }
        if key == "config" {
            return Err(format!(
                "{}:{}: config files cannot nest",
                path.display(),
                lineno + 1
            ));
        }
        let flag = format!("--{key}");
        if given(&args, &flag) {
            continue;
        }
        match value {
            "true" => out.push(flag.into()),
            "false" => {}
            _ => {
                out.push(flag.into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<std::path::PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(|p| Path::new(p).to_path_buf());
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn given(args: &[OsString], flag: &str) -> bool {
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&format!("{flag}="))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn command_line_wins() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(
            &cfg,
            "# sweep\nfamily = net\nseed = 3\nno-time = true\nd=4\n",
        )
        .unwrap();
        let args = os(&[
            "qmc",
            "points",
            "--seed",
            "9",
            "--config",
            cfg.to_str().unwrap(),
        ]);
        let given = args.len();
        let out = expand_config(args).unwrap();
        let tail: Vec<String> = out[given..]
            .iter()
            .map(|s| s.to_string_lossy().into_owned())
            .collect();
        assert_eq!(tail, ["--family", "net", "--no-time", "--d", "4"]);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.cfg");
        fs::write(&cfg, "family net\n").unwrap();
        assert!(expand_config(os(&[
            "qmc",
            "points",
            &format!("--config={}", cfg.display())
        ]))
        .is_err());
        assert!(expand_config(os(&["qmc", "points", "--config", "/nonexistent.cfg"])).is_err());
    }
}
