//! `key = value` configuration with `[section]` headers.
//!
//! Keys before the first header are global (`output_dir`, `jobs`). Each
//! scenario command reads the section named after it. Overrides given as
//! `key=value` or `section.key=value` are applied after the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use illposed_core::experiments::{Scenario, ScenarioConfig};
use illposed_core::BesovIndex;

pub const GLOBAL_KEYS: [&str; 2] = ["output_dir", "jobs"];
pub const SCENARIO_KEYS: [&str; 6] = ["s", "p", "n", "points", "box_half_width", "j_max"];
pub const SECTIONS: [&str; 5] = ["lemmas", "cascade", "burgers-gap", "euler-gap", "time-zero"];

/// Where a setting came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    File { path: String, line: usize },
    Override,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File { path, line } => write!(f, "{path}:{line}"),
            Origin::Override => f.write_str("--set"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}: {message}")]
    Syntax { origin: Origin, message: String },

    #[error("{origin}: unknown section [{section}]; did you mean [{suggestion}]?")]
    UnknownSection { origin: Origin, section: String, suggestion: String },

    #[error("{origin}: unknown key `{key}`{scope}; did you mean `{suggestion}`?")]
    UnknownKey { origin: Origin, key: String, scope: String, suggestion: String },

    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { origin: Origin, key: String, value: String, reason: String },

    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("invalid scenario settings: {0}")]
    Scenario(#[from] illposed_core::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub origin: Origin,
}

/// Parsed and key-checked settings, in order of appearance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub global: Vec<Entry>,
    pub sections: BTreeMap<String, Vec<Entry>>,
}

fn nearest<'a>(word: &str, candidates: &[&'a str]) -> &'a str {
    candidates.iter().min_by_key(|c| strsim::levenshtein(word, c)).copied().expect("candidate lists are non-empty")
}

fn check_key(key: &str, section: Option<&str>, origin: &Origin) -> Result<(), ConfigError> {
    let (valid, scope): (&[&str], String) = match section {
        None => (&GLOBAL_KEYS, " at top level".into()),
        Some(s) => (&SCENARIO_KEYS, format!(" in [{s}]")),
    };
    if valid.contains(&key) {
        return Ok(());
    }
    Err(ConfigError::UnknownKey {
        origin: origin.clone(),
        key: key.into(),
        scope,
        suggestion: nearest(key, valid).into(),
    })
}

fn check_section(section: &str, origin: &Origin) -> Result<(), ConfigError> {
    if SECTIONS.contains(&section) {
        return Ok(());
    }
    Err(ConfigError::UnknownSection {
        origin: origin.clone(),
        section: section.into(),
        suggestion: nearest(section, &SECTIONS).into(),
    })
}

impl ConfigFile {
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        let mut out = Self::default();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let origin = Origin::File { path: path.into(), line: i + 1 };
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                    origin: origin.clone(),
                    message: format!("unterminated section header `{line}`"),
                })?;
                let name = name.trim();
                check_section(name, &origin)?;
                out.sections.entry(name.into()).or_default();
                section = Some(name.into());
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                origin: origin.clone(),
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax { origin, message: "empty key".into() });
            }
            check_key(key, section.as_deref(), &origin)?;
            let entry = Entry { key: key.into(), value: value.into(), origin };
            match &section {
                None => out.global.push(entry),
                Some(s) => out.sections.get_mut(s).expect("created at header").push(entry),
            }
        }
        Ok(out)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let display = path.display().to_string();
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: display.clone(), source })?;
        Self::parse(&text, &display)
    }

    /// Adds one `--set` override. A bare key goes to the global block when it is
    /// a global key and to `section` otherwise.
    pub fn push_override(&mut self, spec: &str, section: &str) -> Result<(), ConfigError> {
        let origin = Origin::Override;
        let (key, value) = spec.split_once('=').ok_or_else(|| ConfigError::Syntax {
            origin: origin.clone(),
            message: format!("expected key=value, found `{spec}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let (target, key) = match key.split_once('.') {
            Some((s, k)) => {
                check_section(s, &origin)?;
                (Some(s), k)
            }
            None if GLOBAL_KEYS.contains(&key) => (None, key),
            None => (Some(section), key),
        };
        check_key(key, target, &origin)?;
        let entry = Entry { key: key.into(), value: value.into(), origin };
        match target {
            None => self.global.push(entry),
            Some(s) => self.sections.entry(s.into()).or_default().push(entry),
        }
        Ok(())
    }

    fn last_global(&self, key: &str) -> Option<&Entry> {
        self.global.iter().rev().find(|e| e.key == key)
    }

    pub fn output_dir(&self) -> Option<PathBuf> {
        self.last_global("output_dir").map(|e| PathBuf::from(&e.value))
    }

    pub fn jobs(&self) -> Result<Option<usize>, ConfigError> {
        self.last_global("jobs").map(|e| parse_value::<usize>(e).and_then(|j| positive(e, j))).transpose()
    }

    /// Scenario defaults with the entries of `section` applied in order.
    pub fn scenario(&self, scenario: Scenario, section: &str) -> Result<ScenarioConfig, ConfigError> {
        let mut cfg = ScenarioConfig::defaults(scenario);
        let (mut s, mut p) = (cfg.index.s, cfg.index.p);
        for e in self.sections.get(section).into_iter().flatten() {
            match e.key.as_str() {
                "s" => s = parse_value(e)?,
                "p" => p = parse_value(e)?,
                "n" => cfg.n_list = parse_shells(&e.value).map_err(|reason| invalid(e, reason))?,
                "points" => cfg.points_per_axis = parse_value(e)?,
                "box_half_width" => cfg.box_half_width = parse_value(e)?,
                "j_max" => cfg.j_max = parse_value(e)?,
                other => unreachable!("key `{other}` passed the key check"),
            }
        }
        cfg.index = BesovIndex::new(s, p)?;
        Ok(cfg)
    }
}

fn invalid(e: &Entry, reason: String) -> ConfigError {
    ConfigError::InvalidValue { origin: e.origin.clone(), key: e.key.clone(), value: e.value.clone(), reason }
}

fn parse_value<T: std::str::FromStr>(e: &Entry) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    e.value.parse().map_err(|err: T::Err| invalid(e, err.to_string()))
}

fn positive(e: &Entry, v: usize) -> Result<usize, ConfigError> {
    if v == 0 {
        Err(invalid(e, "must be at least 1".into()))
    } else {
        Ok(v)
    }
}

/// Parses `a..b` (inclusive), `a..=b`, a comma list, or a single shell.
pub fn parse_shells(text: &str) -> Result<Vec<u32>, String> {
    let text = text.trim();
    let num = |s: &str| s.trim().parse::<u32>().map_err(|e| format!("`{}`: {e}", s.trim()));
    if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(num).collect()
}
