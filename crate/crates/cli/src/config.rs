//! Certification config files: flat TOML, unknown keys rejected.

use std::path::Path;

use congr_core::certify::CertConfig;
use congr_core::error::Error;

use crate::{Failure, Res};

const SEC9: &str = include_str!("../presets/sec9.toml");

pub fn parse_config(text: &str) -> Res<CertConfig> {
    let cfg: CertConfig = toml::from_str(text).map_err(|e| Failure::Usage(format!("config: {}", e.message())))?;
    validate(&cfg)?;
    Ok(cfg)
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Res<CertConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn preset(name: &str) -> Res<CertConfig> {
    match name {
        "sec9" => parse_config(SEC9),
        _ => Err(Failure::Usage(format!("unknown preset {name:?}; available: sec9"))),
    }
}

/// Schema violations are usage errors; unsupported fields are computation errors.
pub fn validate(cfg: &CertConfig) -> Res<()> {
    match cfg.validate() {
        Ok(()) => Ok(()),
        Err(Error::ConfigInvalid(list)) => {
            Err(Failure::Usage(format!("invalid configuration:\n  {}", list.join("\n  "))))
        }
        Err(e) => Err(Failure::Compute(e)),
    }
}
