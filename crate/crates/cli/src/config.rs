//! Flat `key = value` configuration files and flag/file merging.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Parsed configuration file. Keys are normalized to `snake_case`, so
/// `n-paths` and `n_paths` are the same key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got {raw:?}", no + 1)))?;
            let key = normalize(key);
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", no + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key {key:?}", no + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Resolves settings for one command: a flag wins over the file.
pub struct Settings {
    file: ConfigFile,
}

impl Settings {
    /// Rejects file keys the command does not know.
    pub fn new(file: Option<ConfigFile>, known: &[&str]) -> Result<Self, CliError> {
        let file = file.unwrap_or_default();
        if let Some(bad) = file.keys().find(|k| !known.contains(k)) {
            return Err(CliError::Config(format!("unknown key {bad:?}; expected one of {}", known.join(", "))));
        }
        Ok(Self { file })
    }

    pub fn get<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| CliError::Config(format!("{key} = {raw:?}: {e}"))),
        }
    }

    pub fn get_or<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get(key, flag)?.unwrap_or(default))
    }

    pub fn require<T>(&self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key, flag)?.ok_or_else(|| CliError::Config(format!("missing required setting {key:?}")))
    }
}

/// Comma- or whitespace-separated numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items: Vec<f64> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(Self(items))
    }
}

/// Comma- or whitespace-separated counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CountList(pub Vec<usize>);

impl FromStr for CountList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items: Vec<usize> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(Self(items))
    }
}

/// `n T`: `n` equal steps on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    pub steps: usize,
    pub horizon: f64,
}

impl FromStr for Uniform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        let [n, t] = parts.as_slice() else {
            return Err(format!("expected \"n T\", got {s:?}"));
        };
        Ok(Self {
            steps: n.parse().map_err(|e| format!("{n:?}: {e}"))?,
            horizon: t.parse().map_err(|e| format!("{t:?}: {e}"))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_normalizes_keys() {
        let f = ConfigFile::parse("# header\nseed = 42\nn-paths=10 # trailing\n\ntimes = 1, 2, 3\n").unwrap();
        let s = Settings::new(Some(f), &["seed", "n_paths", "times"]).unwrap();
        assert_eq!(s.get::<u64>("seed", None).unwrap(), Some(42));
        assert_eq!(s.get::<u64>("seed", Some(7)).unwrap(), Some(7));
        assert_eq!(s.require::<usize>("n_paths", None).unwrap(), 10);
        assert_eq!(s.get::<FloatList>("times", None).unwrap(), Some(FloatList(vec![1.0, 2.0, 3.0])));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(ConfigFile::parse("seed 42").is_err());
        assert!(ConfigFile::parse("seed = 1\nseed = 2").is_err());
        assert!(ConfigFile::parse("= 3").is_err());
        let f = ConfigFile::parse("sede = 1").unwrap();
        assert!(Settings::new(Some(f), &["seed"]).is_err());
        let f = ConfigFile::parse("seed = x").unwrap();
        assert!(Settings::new(Some(f), &["seed"]).unwrap().get::<u64>("seed", None).is_err());
    }

    #[test]
    fn uniform_spec() {
        assert_eq!("100 1.0".parse::<Uniform>().unwrap(), Uniform { steps: 100, horizon: 1.0 });
        assert_eq!("10,2".parse::<Uniform>().unwrap(), Uniform { steps: 10, horizon: 2.0 });
        assert!("10".parse::<Uniform>().is_err());
    }
}
