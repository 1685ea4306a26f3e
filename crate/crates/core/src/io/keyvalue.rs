//! Line-based `key = value` documents with `[section]` headers.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    used: bool,
}

/// Parsed document; keys are addressed as `section.key`.
#[derive(Debug, Clone)]
pub struct Document {
    path: PathBuf,
    entries: BTreeMap<String, Entry>,
    sections: Vec<(String, usize)>,
}

impl Document {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut entries = BTreeMap::new();
        let mut sections = Vec::new();
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(line, format!("unterminated section header `{content}`")))?
                    .trim();
                if name.is_empty() {
                    return Err(err(line, "empty section name".into()));
                }
                if sections.iter().any(|(s, _)| s == name) {
                    return Err(err(line, format!("section [{name}] appears twice")));
                }
                sections.push((name.to_string(), line));
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected `key = value`, found `{content}`")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(err(line, "missing key before `=`".into()));
            }
            let sec = section
                .as_deref()
                .ok_or_else(|| err(line, format!("key `{key}` outside of any section")))?;
            let full = format!("{sec}.{key}");
            if entries.contains_key(&full) {
                return Err(err(line, format!("duplicate key `{full}`")));
            }
            entries.insert(
                full,
                Entry {
                    value: value.trim().to_string(),
                    line,
                    used: false,
                },
            );
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
            sections,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.sections.iter().any(|(s, _)| s == name)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn error(&self, line: usize, msg: String) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            msg,
        }
    }

    /// Raw value and line of a key, marking it consumed.
    pub fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.get_mut(key).map(|e| {
            e.used = true;
            (e.value.clone(), e.line)
        })
    }

    pub fn take_parsed<T>(&mut self, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => parse(&v)
                .map(Some)
                .ok_or_else(|| self.error(line, format!("`{key}`: expected {what}, found `{v}`"))),
        }
    }

    pub fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take_parsed(key, "a number", |s| s.parse::<f64>().ok().filter(|v| !v.is_nan()))
    }

    pub fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.take_parsed(key, "a non-negative integer", |s| s.parse().ok())
    }

    pub fn take_u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.take_parsed(key, "a non-negative integer", |s| s.parse().ok())
    }

    pub fn take_f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take_parsed(key, "a comma-separated list of numbers", |s| {
            if s.trim().is_empty() {
                return Some(Vec::new());
            }
            s.split(',').map(|x| x.trim().parse::<f64>().ok()).collect()
        })
    }

    /// Fails on the first key that no caller consumed.
    pub fn reject_unused(&self, ignored_sections: &[&str]) -> Result<()> {
        let mut unused: Vec<(&String, &Entry)> = self
            .entries
            .iter()
            .filter(|(k, e)| {
                !e.used && !ignored_sections.iter().any(|s| k.split('.').next() == Some(s))
            })
            .collect();
        unused.sort_by_key(|(_, e)| e.line);
        if let Some((k, e)) = unused.first() {
            return Err(self.error(e.line, format!("unknown key `{k}`")));
        }
        Ok(())
    }

    pub fn reject_sections(&self, allowed: &[&str]) -> Result<()> {
        for (name, line) in &self.sections {
            if !allowed.contains(&name.as_str()) {
                return Err(self.error(*line, format!("unknown section [{name}]")));
            }
        }
        Ok(())
    }
}

/// Accumulates a document section by section.
#[derive(Debug, Default, Clone)]
pub struct Writer {
    out: String,
}

impl Writer {
    pub fn section(&mut self, name: &str) -> &mut Self {
        if !self.out.is_empty() {
            self.out.push('\n');
        }
        self.out.push_str(&format!("[{name}]\n"));
        self
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.out.push_str(&format!("{key} = {value}\n"));
        self
    }

    pub fn list(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let joined: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
        self.kv(key, joined.join(", "))
    }

    pub fn finish(self) -> String {
        self.out
    }
}
