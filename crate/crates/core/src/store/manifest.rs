//! Plain-text key-value manifests, one per store.
//!
//! One `key = value` pair per line; `#` starts a comment. Keys are written
//! in sorted order so manifests are byte-stable.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new() -> Self {
        Manifest::default()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn set_list(&mut self, key: &str, values: &[u64]) {
        let s = values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        self.entries.insert(key.to_string(), s);
    }

    pub fn get(&self, path: &Path, key: &str) -> Result<&str> {
        self.entries
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::format(path, format!("manifest is missing key `{key}`")))
    }

    pub fn get_u64(&self, path: &Path, key: &str) -> Result<u64> {
        self.get(path, key)?
            .parse()
            .map_err(|_| Error::format(path, format!("manifest key `{key}` is not an integer")))
    }

    pub fn get_list(&self, path: &Path, key: &str, n: usize) -> Result<Vec<u64>> {
        let vals: Vec<u64> = self
            .get(path, key)?
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::format(path, format!("manifest key `{key}` is not a list")))?;
        if vals.len() != n {
            return Err(Error::format(
                path,
                format!("manifest key `{key}` must hold {n} values"),
            ));
        }
        Ok(vals)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::format(path, format!("line {}: expected `key = value`", lineno + 1))
            })?;
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Manifest { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let dir = std::env::temp_dir().join(format!("segtopo-manifest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("manifest.txt");
        let mut m = Manifest::new();
        m.set("format", "segtopo-grid");
        m.set("version", 1);
        m.set_list("volume-shape", &[3, 3, 2]);
        m.save(&p).unwrap();
        let back = Manifest::load(&p).unwrap();
        assert_eq!(back.get(&p, "format").unwrap(), "segtopo-grid");
        assert_eq!(back.get_u64(&p, "version").unwrap(), 1);
        assert_eq!(back.get_list(&p, "volume-shape", 3).unwrap(), vec![3, 3, 2]);
        assert!(back.get(&p, "missing").is_err());
    }
}
