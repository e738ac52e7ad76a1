//! `--config FILE`: `key=value` lines that act as default flags.

use std::ffi::OsString;

const SUBCOMMANDS: [&str; 12] = [
    "parse-check",
    "minmod",
    "minmod-iterate",
    "disc-seq",
    "surround-check",
    "spl-check",
    "orbit",
    "fixed-points",
    "render",
    "components",
    "sw-probe",
    "scenario",
];

/// Splices config entries into `argv` right after the subcommand name,
/// skipping keys the command line already sets. `true`/`false` values
/// toggle switches.
pub(super) fn apply(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let strs: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut path = None;
    for (k, a) in strs.iter().enumerate() {
        if a == "--config" {
            path = strs.get(k + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("reading config {path}: {e}"))?;
    let entries = parse(&text)?;

    let Some(sub) = strs
        .iter()
        .skip(1)
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .map(|p| p + 1)
    else {
        return Ok(argv);
    };
    let given = |key: &str| {
        let flag = format!("--{key}");
        let eq = format!("{flag}=");
        strs.iter().any(|a| *a == flag || a.starts_with(&eq))
    };
    let mut inserted: Vec<OsString> = Vec::new();
    for (key, value) in &entries {
        if key == "config" || given(key) {
            continue;
        }
        match value.as_str() {
            "true" => inserted.push(format!("--{key}").into()),
            "false" => {}
            v => {
                inserted.push(format!("--{key}").into());
                inserted.push(v.into());
            }
        }
    }
    let mut out = argv;
    out.splice(sub + 1..sub + 1, inserted);
    Ok(out)
}

fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut entries = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", n + 1));
        }
        entries.push((k, v.trim().to_string()));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn flags_win_over_config() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.cfg");
        std::fs::write(
            &p,
            "# defaults\nn_max = 7\nblow-up=1e10\nr=3\nquiet=false\n",
        )
        .unwrap();
        let argv = os(&[
            "iplus",
            "--config",
            p.to_str().unwrap(),
            "minmod-iterate",
            "--f",
            "z^2",
            "--r",
            "2",
        ]);
        let out: Vec<String> = apply(argv)
            .unwrap()
            .iter()
            .map(|s| s.to_string_lossy().into_owned())
            .collect();
        assert_eq!(&out[4..9], &["--n-max", "7", "--blow-up", "1e10", "--f"]);
        assert_eq!(out.iter().filter(|a| *a == "--r").count(), 1);
        assert!(!out.iter().any(|a| a == "--quiet"));
    }

    #[test]
    fn malformed_config() {
        assert!(parse("justakey\n").is_err());
        assert!(parse("=3\n").is_err());
    }
}
