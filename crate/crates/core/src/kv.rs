//! Order-insensitive `key = value` text files shared by presentation and
//! profile schemas. `#` starts a comment; repeated keys keep every value.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct KvFile {
    entries: BTreeMap<String, Vec<(usize, String)>>,
}

impl KvFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, found `{line}`"),
            })?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "empty key".into(),
                });
            }
            entries
                .entry(k.to_string())
                .or_default()
                .push((i + 1, v.trim().to_string()));
        }
        Ok(Self { entries })
    }

    /// Single-valued key. Repeats are an error.
    pub fn get(&self, key: &str) -> Result<Option<(usize, &str)>> {
        match self.entries.get(key).map(Vec::as_slice) {
            None | Some([]) => Ok(None),
            Some([(line, v)]) => Ok(Some((*line, v.as_str()))),
            Some([_, (line, _), ..]) => Err(Error::Parse {
                line: *line,
                msg: format!("key `{key}` given more than once"),
            }),
        }
    }

    pub fn require(&self, key: &str) -> Result<(usize, &str)> {
        self.get(key)?.ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing required key `{key}`"),
        })
    }

    pub fn all(&self, key: &str) -> &[(usize, String)] {
        self.entries.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// First line number mentioning `key`, for diagnostics.
    pub fn line_of(&self, key: &str) -> usize {
        self.all(key).first().map(|(l, _)| *l).unwrap_or(0)
    }
}

pub fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
