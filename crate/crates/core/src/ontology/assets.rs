use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cq::{parse_manifest, CqCase};
use crate::graph::Graph;
use crate::ontology::NameResolver;
use crate::prefix::PrefixMap;
use crate::rules::{parse_rules, Rule, RuleError};
use crate::turtle::{parse_turtle, ParseDiagnostic};

/// Overrides the directory the bundled assets are read from.
pub const ASSET_DIR_ENV: &str = "APPLE_ASSET_DIR";

pub const TAXONOMY_FILE: &str = "apple-taxonomy.ttl";
pub const SCENARIO_FILE: &str = "bioethics-scenario.ttl";
pub const RULES_FILE: &str = "moral-verdicts.rules";
pub const MANIFEST_FILE: &str = "cq-manifest.json";

#[derive(Debug, Error)]
pub enum AssetError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{diagnostic}")]
    Turtle { file: String, diagnostic: ParseDiagnostic },
    #[error("{file}: {source}")]
    Rules {
        file: String,
        #[source]
        source: RuleError,
    },
    #[error("{file}: {message}")]
    Manifest { file: String, message: String },
}

/// Raw asset file contents, before parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssetTexts {
    pub taxonomy: String,
    pub scenario: String,
    pub rules: String,
    pub cq_manifest: String,
}

impl AssetTexts {
    /// The copies compiled into the library.
    pub fn bundled() -> AssetTexts {
        AssetTexts {
            taxonomy: include_str!("../../assets/apple-taxonomy.ttl").to_string(),
            scenario: include_str!("../../assets/bioethics-scenario.ttl").to_string(),
            rules: include_str!("../../assets/moral-verdicts.rules").to_string(),
            cq_manifest: include_str!("../../assets/cq-manifest.json").to_string(),
        }
    }

    /// Reads the four asset files from `dir`.
    pub fn from_dir(dir: &Path) -> Result<AssetTexts, AssetError> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name)).map_err(|source| AssetError::Io {
                file: dir.join(name).display().to_string(),
                source,
            })
        };
        Ok(AssetTexts {
            taxonomy: read(TAXONOMY_FILE)?,
            scenario: read(SCENARIO_FILE)?,
            rules: read(RULES_FILE)?,
            cq_manifest: read(MANIFEST_FILE)?,
        })
    }

    /// `$APPLE_ASSET_DIR` when set, the compiled-in copies otherwise.
    pub fn locate() -> Result<AssetTexts, AssetError> {
        match asset_dir() {
            Some(dir) => AssetTexts::from_dir(&dir),
            None => Ok(AssetTexts::bundled()),
        }
    }

    pub fn load(&self) -> Result<AppleAssets, AssetError> {
        let prefixes = PrefixMap::apple_default();
        let turtle = |file: &str, text: &str| {
            parse_turtle(text, &prefixes)
                .map(|d| d.graph)
                .map_err(|diagnostic| AssetError::Turtle {
                    file: file.to_string(),
                    diagnostic,
                })
        };
        let taxonomy = turtle(TAXONOMY_FILE, &self.taxonomy)?;
        let scenario = turtle(SCENARIO_FILE, &self.scenario)?;
        let rules = parse_rules(&self.rules, &NameResolver::default()).map_err(|source| AssetError::Rules {
            file: RULES_FILE.to_string(),
            source,
        })?;
        let cq_manifest = parse_manifest(&self.cq_manifest).map_err(|message| AssetError::Manifest {
            file: MANIFEST_FILE.to_string(),
            message,
        })?;
        Ok(AppleAssets {
            taxonomy,
            scenario,
            rules,
            cq_manifest,
        })
    }
}

fn asset_dir() -> Option<PathBuf> {
    std::env::var_os(ASSET_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// The parsed taxonomy, bioethics scenario, verdict rules and CQ suite.
#[derive(Debug, Clone)]
pub struct AppleAssets {
    pub taxonomy: Graph,
    pub scenario: Graph,
    pub rules: Vec<Rule>,
    pub cq_manifest: Vec<CqCase>,
}

/// Parses the compiled-in assets.
pub fn load_assets() -> Result<AppleAssets, AssetError> {
    AssetTexts::bundled().load()
}
