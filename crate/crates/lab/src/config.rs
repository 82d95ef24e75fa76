//! Plain-text run configuration.
//!
//! ```text
//! # comment
//! [section]
//! key = value          # trailing comments allowed
//! list = 1, 2.5, 10
//! ```
//!
//! Keys before the first section header belong to the section `run`.
//! Section and key names are lower-case `[a-z0-9_]`. Each key may appear
//! once per section. Keys that no command reads are reported as warnings.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use crate::error::{LabError, LabResult};

#[derive(Debug, Default)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
    read: RefCell<BTreeSet<(String, String)>>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

impl Config {
    pub fn parse(text: &str) -> LabResult<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::from("run");
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let err = |msg: &str| LabError::Syntax { line: i + 1, msg: msg.to_string() };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| err("unterminated section header"))?.trim();
                if !valid_name(name) {
                    return Err(err("section names use [a-z0-9_]"));
                }
                current = name.to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
            let (k, v) = (k.trim(), v.trim());
            if !valid_name(k) {
                return Err(err("keys use [a-z0-9_]"));
            }
            if v.is_empty() {
                return Err(err("empty value"));
            }
            if sections.entry(current.clone()).or_default().insert(k.to_string(), v.to_string()).is_some() {
                return Err(err(&format!("duplicate key {current}.{k}")));
            }
        }
        Ok(Config { sections, read: RefCell::new(BTreeSet::new()) })
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Read { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Sorted, comment-free rendering. Parsing it gives the same config.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (name, keys) in &self.sections {
            out.push_str(&format!("[{name}]\n"));
            for (k, v) in keys {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        out
    }

    fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.read.borrow_mut().insert((section.to_string(), key.to_string()));
        self.sections.get(section).and_then(|s| s.get(key)).map(String::as_str)
    }

    pub fn has(&self, section: &str, key: &str) -> bool {
        self.sections.get(section).is_some_and(|s| s.contains_key(key))
    }

    pub fn get<T: FromStr>(&self, section: &str, key: &str, default: T) -> LabResult<T> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| LabError::Usage(format!("{section}.{key}: cannot parse {v:?}"))),
        }
    }

    pub fn require<T: FromStr>(&self, section: &str, key: &str) -> LabResult<T> {
        let v = self.raw(section, key).ok_or_else(|| LabError::Usage(format!("missing {section}.{key}")))?;
        v.parse().map_err(|_| LabError::Usage(format!("{section}.{key}: cannot parse {v:?}")))
    }

    pub fn list<T: FromStr>(&self, section: &str, key: &str, default: &[T]) -> LabResult<Vec<T>>
    where
        T: Clone,
    {
        match self.raw(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    let s = s.trim();
                    s.parse().map_err(|_| LabError::Usage(format!("{section}.{key}: cannot parse {s:?}")))
                })
                .collect(),
        }
    }

    /// Keys present in the file that nothing has read.
    pub fn unused(&self) -> Vec<String> {
        let read = self.read.borrow();
        self.sections
            .iter()
            .flat_map(|(s, keys)| keys.keys().map(move |k| (s.clone(), k.clone())))
            .filter(|p| !read.contains(p))
            .map(|(s, k)| format!("unknown key {s}.{k}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_lists_and_comments() {
        let c = Config::parse("seed = 3\n[velocity]\nn = 16 # nodes\n\n[profile]\ntimes = 0, 1.5, 10\n").unwrap();
        assert_eq!(c.get::<u64>("run", "seed", 0).unwrap(), 3);
        assert_eq!(c.get::<usize>("velocity", "n", 0).unwrap(), 16);
        assert_eq!(c.list::<f64>("profile", "times", &[]).unwrap(), vec![0.0, 1.5, 10.0]);
        assert_eq!(c.get("velocity", "bound_widths", 8.0).unwrap(), 8.0);
        assert!(c.unused().is_empty());
    }

    #[test]
    fn canonical_round_trip() {
        let c = Config::parse("[b]\ny = 2\nx = 1\n[a]\nz = q\n").unwrap();
        let text = c.canonical();
        assert_eq!(text, "[a]\nz = q\n[b]\nx = 1\ny = 2\n");
        assert_eq!(Config::parse(&text).unwrap().canonical(), text);
    }

    #[test]
    fn rejects_bad_lines() {
        for bad in ["[open\n", "novalue\n", "k =\n", "[s]\nk = 1\nk = 2\n", "Key = 1\n"] {
            assert!(matches!(Config::parse(bad), Err(LabError::Syntax { .. })), "{bad:?}");
        }
    }

    #[test]
    fn reports_unused_keys() {
        let c = Config::parse("[velocity]\nn = 8\ntypo = 1\n").unwrap();
        let _ = c.get("velocity", "n", 0usize);
        assert_eq!(c.unused(), vec!["unknown key velocity.typo".to_string()]);
    }
}
