//! Flat `key = value` configuration text.
//!
//! One entry per line; blank lines and lines starting with `#` are skipped.
//! Keys are ASCII letters, digits, `_`, `-` and `.`; values run to the end of
//! the line with surrounding whitespace removed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Parsed entries with the line each came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|(l, _)| *l)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, (_, v))| (k.as_str(), v.as_str()))
    }

    /// Parses `key` with `FromStr`, reporting failures against its line.
    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => {
                v.parse().map(Some).map_err(|e| Error::Parse { line: *line, msg: format!("`{key}`: {e}") })
            }
        }
    }
}

fn valid_key(k: &str) -> bool {
    !k.is_empty() && k.bytes().all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'.'))
}

pub fn parse_key_values(text: &str) -> Result<KeyValues> {
    let mut out = KeyValues::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let Some((k, v)) = s.split_once('=') else {
            return Err(Error::Parse { line, msg: "expected `key = value`".into() });
        };
        let (k, v) = (k.trim(), v.trim());
        if !valid_key(k) {
            return Err(Error::Parse { line, msg: format!("invalid key `{k}`") });
        }
        if v.is_empty() {
            return Err(Error::Parse { line, msg: format!("empty value for `{k}`") });
        }
        if let Some((first, _)) = out.entries.get(k) {
            return Err(Error::Parse { line, msg: format!("duplicate key `{k}` (first on line {first})") });
        }
        out.entries.insert(k.to_string(), (line, v.to_string()));
    }
    Ok(out)
}
