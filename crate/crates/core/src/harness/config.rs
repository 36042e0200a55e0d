use std::fs;
use std::path::{Path, PathBuf};

use super::HarnessError;

/// Parameters shared by every command. Unset fields fall back to
/// per-command defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub r: Option<f64>,
    pub eps: Option<f64>,
    pub n: Option<usize>,
    pub res: Option<usize>,
    pub k: usize,
    pub budget: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { r: None, eps: None, n: None, res: None, k: 3, budget: 1, seed: 0, out: None, tol: None }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value.parse().map_err(|_| HarnessError::Config(format!("cannot parse {key} = {value:?}")))
}

impl RunConfig {
    /// Sets one field from its flag name (without dashes).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        match key {
            "r" => self.r = Some(parse(key, value)?),
            "eps" => self.eps = Some(parse(key, value)?),
            "n" => self.n = Some(parse(key, value)?),
            "res" => self.res = Some(parse(key, value)?),
            "k" => self.k = parse(key, value)?,
            "budget" => self.budget = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "tol" => self.tol = Some(parse(key, value)?),
            _ => return Err(HarnessError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_str(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = Self::default();
        cfg.merge_str(text)?;
        Ok(cfg)
    }

    pub fn merge_str(&mut self, text: &str) -> Result<(), HarnessError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(key.trim().trim_start_matches("--"), value.trim())?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse_str(&text)
    }

    /// Checks that tolerances are positive and that the output location can
    /// be written: an existing directory, or a file whose parent exists.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(HarnessError::Config(format!("tol must be positive, got {t}")));
            }
        }
        if let Some(out) = &self.out {
            let dir = if out.is_dir() {
                out.as_path()
            } else {
                out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."))
            };
            let meta = fs::metadata(dir).map_err(|e| HarnessError::io(dir, e))?;
            if !meta.is_dir() || meta.permissions().readonly() {
                return Err(HarnessError::Config(format!("{} is not a writable directory", dir.display())));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values_and_comments() {
        let cfg = RunConfig::parse_str("# cone run\nr = 0.25\nk=2\n\nbudget = 0  # no refinement\n--seed = 9\n").unwrap();
        assert_eq!(cfg.r, Some(0.25));
        assert_eq!(cfg.k, 2);
        assert_eq!(cfg.budget, 0);
        assert_eq!(cfg.seed, 9);
        assert!(RunConfig::parse_str("bogus = 1").is_err());
        assert!(RunConfig::parse_str("k = two").is_err());
        assert!(RunConfig::parse_str("just text").is_err());
    }

    #[test]
    fn later_values_override() {
        let mut cfg = RunConfig::parse_str("k = 2\nr = 0.1").unwrap();
        cfg.set("k", "4").unwrap();
        assert_eq!((cfg.k, cfg.r), (4, Some(0.1)));
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig { tol: Some(0.0), ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        cfg.tol = Some(1e-3);
        cfg.out = Some(PathBuf::from("/definitely/missing/dir/out.json"));
        assert!(cfg.validate().is_err());
        let dir = tempfile::tempdir().unwrap();
        cfg.out = Some(dir.path().join("out.json"));
        assert!(cfg.validate().is_ok());
    }
}
