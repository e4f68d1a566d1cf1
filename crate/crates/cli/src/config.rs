//! `key=value` config file and cache-path resolution.

use std::path::{Path, PathBuf};

use gw_blowup::Space;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct FileConfig {
    pub space: Option<Space>,
    pub n: Option<u32>,
    pub cache_path: Option<PathBuf>,
    pub format: Option<String>,
    pub verbosity: Option<u8>,
}

impl FileConfig {
    /// Blank lines and `#` comments are skipped; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = FileConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |what: &str| format!("config line {}: bad {what} `{v}`", i + 1);
            match k {
                "space" => cfg.space = Some(v.parse().map_err(|_| bad("space"))?),
                "n" => cfg.n = Some(v.parse().map_err(|_| bad("n"))?),
                "cache_path" => cfg.cache_path = Some(PathBuf::from(v)),
                "format" => cfg.format = Some(v.to_string()),
                "verbosity" => cfg.verbosity = Some(v.parse().map_err(|_| bad("verbosity"))?),
                other => return Err(format!("config line {}: unknown key `{other}`", i + 1)),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }
}

/// Flag, then `GW_CACHE`, then the config file; no cache otherwise.
pub fn resolve_cache(flag: Option<&Path>, env: Option<&str>, cfg: &FileConfig) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from)).or_else(|| cfg.cache_path.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = FileConfig::parse("# defaults\nspace = plain\nn=3\n\ncache_path=/tmp/c.jsonl\nformat=csv\n").unwrap();
        assert_eq!(cfg.space, Some(Space::Plain));
        assert_eq!(cfg.n, Some(3));
        assert_eq!(cfg.cache_path, Some(PathBuf::from("/tmp/c.jsonl")));
        assert_eq!(cfg.format.as_deref(), Some("csv"));
        assert!(FileConfig::parse("colour=red").is_err());
        assert!(FileConfig::parse("n=two").is_err());
        assert!(FileConfig::parse("just words").is_err());
    }

    #[test]
    fn cache_precedence() {
        let cfg = FileConfig { cache_path: Some("cfg".into()), ..Default::default() };
        assert_eq!(resolve_cache(Some(Path::new("flag")), Some("env"), &cfg), Some("flag".into()));
        assert_eq!(resolve_cache(None, Some("env"), &cfg), Some("env".into()));
        assert_eq!(resolve_cache(None, None, &cfg), Some("cfg".into()));
        assert_eq!(resolve_cache(None, Some(""), &FileConfig::default()), None);
    }
}
