//! Flat `key = value` configuration with one `[section]` per experiment.
//!
//! ```text
//! seed = 7
//!
//! [reflection-exponents]
//! n_paths = 20000
//! horizon = 1e4
//! ```
//!
//! Keys before the first section are global. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use heis_coupling::HeisPoint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}` in [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: unknown experiment [{section}]")]
    UnknownSection { line: usize, section: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("{}field `{field}`: {msg}", .line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Field { line: Option<usize>, field: String, msg: String },
    #[error("unknown experiment `{0}` (see --list)")]
    UnknownExperiment(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: BTreeMap<String, Entry>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub global: Section,
    pub sections: Vec<Section>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ConfigFile::default();
        let mut current: Option<Section> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::Syntax { line, msg: "unterminated section header".into() })?
                    .trim();
                if name.is_empty() {
                    return Err(ConfigError::Syntax { line, msg: "empty section name".into() });
                }
                if cfg.sections.iter().chain(current.as_ref()).any(|s| s.name == name) {
                    return Err(ConfigError::Syntax { line, msg: format!("section [{name}] repeated") });
                }
                cfg.sections.extend(current.take());
                current = Some(Section { name: name.to_string(), line, entries: BTreeMap::new() });
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{body}`") })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(ConfigError::Syntax { line, msg: format!("bad key `{key}`") });
            }
            let target = current.as_mut().unwrap_or(&mut cfg.global);
            if target.entries.contains_key(key) {
                return Err(ConfigError::Duplicate { line, key: key.to_string() });
            }
            target.entries.insert(key.to_string(), Entry { value: value.to_string(), line });
        }
        cfg.sections.extend(current);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

/// Keys accepted before the first section.
pub const GLOBAL_KEYS: &[&str] = &["seed", "out", "threads"];

/// Parameters of one experiment: declared keys with their defaults,
/// overridden by config entries.
#[derive(Debug, Clone)]
pub struct Params {
    section: String,
    values: BTreeMap<&'static str, (String, Option<usize>)>,
}

impl Params {
    pub fn defaults(section: &str, schema: &[(&'static str, &str)]) -> Self {
        Self {
            section: section.to_string(),
            values: schema.iter().map(|(k, v)| (*k, (v.to_string(), None))).collect(),
        }
    }

    /// Defaults overridden by `section`; keys outside the schema are rejected.
    pub fn from_section(section: &Section, schema: &[(&'static str, &str)]) -> Result<Self, ConfigError> {
        let mut p = Self::defaults(&section.name, schema);
        for (key, entry) in &section.entries {
            p.set_at(key, &entry.value, Some(entry.line))?;
        }
        Ok(p)
    }

    pub fn section(&self) -> &str {
        &self.section
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.set_at(key, value, None)
    }

    fn set_at(&mut self, key: &str, value: &str, line: Option<usize>) -> Result<(), ConfigError> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = (value.to_string(), line);
                Ok(())
            }
            None => Err(ConfigError::UnknownKey {
                line: line.unwrap_or(0),
                section: self.section.clone(),
                key: key.to_string(),
            }),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = (&'static str, &str)> {
        self.values.iter().map(|(k, (v, _))| (*k, v.as_str()))
    }

    fn raw(&self, key: &str) -> (&str, Option<usize>) {
        let (v, l) = self.values.get(key).unwrap_or_else(|| panic!("undeclared key `{key}`"));
        (v.as_str(), *l)
    }

    fn err(&self, key: &str, msg: String) -> ConfigError {
        ConfigError::Field { line: self.raw(key).1, field: format!("{}.{key}", self.section), msg }
    }

    pub fn str(&self, key: &str) -> &str {
        self.raw(key).0
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.str(key);
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| self.err(key, format!("expected a finite number, got `{v}`")))
    }

    pub fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let x = self.f64(key)?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(self.err(key, format!("must be positive, got {x}")))
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        let v = self.str(key);
        let n: f64 = v.parse().map_err(|_| self.err(key, format!("expected an integer, got `{v}`")))?;
        if n.fract() != 0.0 || n < 0.0 || n > 1e15 {
            return Err(self.err(key, format!("expected a nonnegative integer, got `{v}`")));
        }
        Ok(n as usize)
    }

    pub fn count(&self, key: &str) -> Result<usize, ConfigError> {
        match self.usize(key)? {
            0 => Err(self.err(key, "must be at least 1".into())),
            n => Ok(n),
        }
    }

    pub fn u64(&self, key: &str) -> Result<u64, ConfigError> {
        let v = self.str(key);
        v.parse().map_err(|_| self.err(key, format!("expected an unsigned integer, got `{v}`")))
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let v = self.str(key);
        let out: Result<Vec<f64>, _> = v.split(',').map(|s| s.trim().parse::<f64>()).collect();
        match out {
            Ok(xs) if !xs.is_empty() && xs.iter().all(|x| x.is_finite()) => Ok(xs),
            _ => Err(self.err(key, format!("expected a comma-separated list of numbers, got `{v}`"))),
        }
    }

    pub fn positive_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let xs = self.f64_list(key)?;
        if xs.iter().all(|&x| x > 0.0) {
            Ok(xs)
        } else {
            Err(self.err(key, "all entries must be positive".into()))
        }
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.str(key).split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    }

    /// A point `x₁, y₁, …, xₙ, yₙ, z`.
    pub fn point(&self, key: &str) -> Result<HeisPoint, ConfigError> {
        let xs = self.f64_list(key)?;
        if xs.len() < 3 || xs.len() % 2 == 0 {
            return Err(self.err(key, format!("a point needs 2n+1 coordinates, got {}", xs.len())));
        }
        let z = xs[xs.len() - 1];
        HeisPoint::new(xs[..xs.len() - 1].to_vec(), z).map_err(|e| self.err(key, e.to_string()))
    }

    pub fn choice<'a>(&self, key: &str, allowed: &[&'a str]) -> Result<&'a str, ConfigError> {
        let v = self.str(key);
        allowed
            .iter()
            .find(|a| **a == v)
            .copied()
            .ok_or_else(|| self.err(key, format!("expected one of {allowed:?}, got `{v}`")))
    }

    /// A validation failure attributed to `key`.
    pub fn invalid(&self, key: &str, msg: impl Into<String>) -> ConfigError {
        self.err(key, msg.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: &[(&str, &str)] = &[("dt", "0.01"), ("n_paths", "10"), ("a", "0,0,0"), ("strategy", "reflection")];

    #[test]
    fn parses_sections_and_globals() {
        let cfg = ConfigFile::parse("seed = 3 # global\n\n[x]\ndt=1e-3\n[y]\n n_paths = 5 \n").unwrap();
        assert_eq!(cfg.global.entries["seed"].value, "3");
        assert_eq!(cfg.sections.len(), 2);
        assert_eq!(cfg.section("x").unwrap().entries["dt"].line, 4);
        assert_eq!(cfg.section("y").unwrap().entries["n_paths"].value, "5");
    }

    #[test]
    fn syntax_errors_name_the_line() {
        assert_eq!(
            ConfigFile::parse("[x]\nnonsense\n").unwrap_err(),
            ConfigError::Syntax { line: 2, msg: "expected `key = value`, got `nonsense`".into() }
        );
        assert!(matches!(ConfigFile::parse("[x\n"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(ConfigFile::parse("a=1\na=2\n"), Err(ConfigError::Duplicate { line: 2, .. })));
        assert!(matches!(ConfigFile::parse("[x]\n[x]\n"), Err(ConfigError::Syntax { line: 2, .. })));
    }

    #[test]
    fn unknown_keys_and_bad_values() {
        let cfg = ConfigFile::parse("[x]\ndt = -1\nn_paths = 2.5\na = 1,2\nstrategy = sideways\n").unwrap();
        let p = Params::from_section(cfg.section("x").unwrap(), SCHEMA).unwrap();
        let e = p.positive("dt").unwrap_err();
        assert_eq!(e.to_string(), "line 2: field `x.dt`: must be positive, got -1");
        assert!(matches!(p.count("n_paths"), Err(ConfigError::Field { line: Some(3), .. })));
        assert!(matches!(p.point("a"), Err(ConfigError::Field { line: Some(4), .. })));
        assert!(p.choice("strategy", &["reflection"]).is_err());
        let cfg = ConfigFile::parse("[x]\nbogus = 1\n").unwrap();
        assert_eq!(
            Params::from_section(cfg.section("x").unwrap(), SCHEMA).unwrap_err(),
            ConfigError::UnknownKey { line: 2, section: "x".into(), key: "bogus".into() }
        );
    }

    #[test]
    fn defaults_apply() {
        let p = Params::defaults("x", SCHEMA);
        assert_eq!(p.f64("dt").unwrap(), 0.01);
        assert_eq!(p.count("n_paths").unwrap(), 10);
        assert_eq!(p.point("a").unwrap(), HeisPoint::h1(0.0, 0.0, 0.0));
        assert_eq!(p.usize("n_paths").unwrap(), 10);
        let mut p = p;
        p.set("n_paths", "1e4").unwrap();
        assert_eq!(p.count("n_paths").unwrap(), 10_000);
        assert!(p.set("nope", "1").is_err());
    }
}
