//! Optional key=value config files. Flags always win; whatever the file
//! supplies fills unset flags only, and keys the active subcommand does not
//! understand are rejected.

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigFile {
    map: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile { map: BTreeMap::new() }
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "config file {} line {}: expected key=value, got {raw:?}",
                    path.display(),
                    lineno + 1
                ));
            };
            let key = key.trim().to_string();
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(format!(
                    "config file {} line {}: duplicate key {key}",
                    path.display(),
                    lineno + 1
                ));
            }
        }
        Ok(ConfigFile { map })
    }

    fn take_parsed<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>, String> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("config key {key}: expected {what}, got {raw:?}")),
        }
    }

    /// For value types whose FromStr error already explains itself.
    pub fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.map.remove(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("config key {key}: {e}")),
        }
    }

    pub fn take_f64(&mut self, key: &str) -> Result<Option<f64>, String> {
        self.take_parsed(key, "a number")
    }

    pub fn take_usize(&mut self, key: &str) -> Result<Option<usize>, String> {
        self.take_parsed(key, "a nonnegative integer")
    }

    pub fn take_bool(&mut self, key: &str) -> Result<Option<bool>, String> {
        self.take_parsed(key, "true or false")
    }

    pub fn take_string(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    pub fn take_list(&mut self, key: &str) -> Result<Option<Vec<f64>>, String> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| format!("config key {key}: expected comma-separated numbers, got {raw:?}"))
                })
                .collect::<Result<Vec<f64>, String>>()
                .map(Some),
        }
    }

    /// Everything must have been consumed by now.
    pub fn finish(self) -> Result<(), String> {
        if self.map.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.map.keys().map(String::as_str).collect();
            Err(format!("unknown config keys for this command: {}", keys.join(", ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_values_and_rejects_leftovers() {
        let f = write_temp("# comment\nT=1000\nY-rule=sqrt(T)\nT-list=1,2,3\n");
        let mut cf = ConfigFile::load(f.path()).unwrap();
        assert_eq!(cf.take_f64("T").unwrap(), Some(1000.0));
        assert_eq!(cf.take_string("Y-rule").unwrap(), "sqrt(T)");
        assert_eq!(cf.take_list("T-list").unwrap().unwrap(), vec![1.0, 2.0, 3.0]);
        cf.finish().unwrap();
    }

    #[test]
    fn unknown_key_is_fatal() {
        let f = write_temp("bogus=1\n");
        let cf = ConfigFile::load(f.path()).unwrap();
        let err = cf.finish().unwrap_err();
        assert!(err.contains("bogus"));
    }

    #[test]
    fn malformed_lines_and_values_error_out() {
        let f = write_temp("just a line\n");
        assert!(ConfigFile::load(f.path()).unwrap_err().contains("line 1"));
        let f = write_temp("T=ten\n");
        let mut cf = ConfigFile::load(f.path()).unwrap();
        assert!(cf.take_f64("T").unwrap_err().contains("expected a number"));
        let f = write_temp("T=1\nT=2\n");
        assert!(ConfigFile::load(f.path()).unwrap_err().contains("duplicate"));
    }
}
