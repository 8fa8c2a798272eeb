//! `Project.toml` and `Manifest.toml` files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use semver::Version;
use serde::{Deserialize, Serialize};

use super::error::{io_error, EnvError, Result};
use crate::mrdi::ObjectId;

pub const PROJECT_FILE: &str = "Project.toml";
pub const MANIFEST_FILE: &str = "Manifest.toml";
pub const MANIFEST_FORMAT: &str = "1.0";

/// Declared direct dependencies of a project or registry package.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectFile {
    pub name: String,
    pub uuid: ObjectId,
    pub version: Version,
    /// Version bounds by dependency name; a missing entry admits any version.
    #[serde(default)]
    pub compat: BTreeMap<String, String>,
    #[serde(default)]
    pub deps: BTreeMap<String, ObjectId>,
}

/// One pinned package.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencySpec {
    pub name: String,
    pub uuid: ObjectId,
    pub version: Version,
    pub tree_hash: Option<String>,
}

/// The full pinned closure of a project's dependencies, sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ManifestFile {
    pub deps: Vec<DependencySpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    tree_hash: Option<String>,
    uuid: ObjectId,
    version: Version,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    manifest_format: String,
    #[serde(default)]
    deps: BTreeMap<String, RawEntry>,
}

fn parse_error(path: &Path, message: impl Into<String>) -> EnvError {
    EnvError::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_error(path))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_error(path))
}

impl ProjectFile {
    pub fn new(name: impl Into<String>, uuid: ObjectId, version: Version) -> ProjectFile {
        ProjectFile {
            name: name.into(),
            uuid,
            version,
            compat: BTreeMap::new(),
            deps: BTreeMap::new(),
        }
    }

    /// Parses TOML text; `path` is only used in error messages.
    pub fn parse(text: &str, path: &Path) -> Result<ProjectFile> {
        let project: ProjectFile =
            toml::from_str(text).map_err(|e| parse_error(path, e.message()))?;
        if project.name.is_empty() {
            return Err(parse_error(path, "project name is empty"));
        }
        if let Some(name) = project.compat.keys().find(|n| !project.deps.contains_key(*n)) {
            return Err(parse_error(path, format!("compat entry for undeclared dependency '{name}'")));
        }
        Ok(project)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<ProjectFile> {
        let path = path.as_ref();
        ProjectFile::parse(&read_text(path)?, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("project files serialize")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_text(path.as_ref(), &self.to_toml())
    }
}

impl ManifestFile {
    pub fn new(mut deps: Vec<DependencySpec>) -> ManifestFile {
        deps.sort_by(|a, b| a.name.cmp(&b.name));
        ManifestFile { deps }
    }

    pub fn get(&self, name: &str) -> Option<&DependencySpec> {
        self.deps.iter().find(|d| d.name == name)
    }

    pub fn parse(text: &str, path: &Path) -> Result<ManifestFile> {
        let raw: RawManifest = toml::from_str(text).map_err(|e| parse_error(path, e.message()))?;
        if raw.manifest_format != MANIFEST_FORMAT {
            return Err(parse_error(
                path,
                format!("unsupported manifest_format '{}'", raw.manifest_format),
            ));
        }
        let deps = raw
            .deps
            .into_iter()
            .map(|(name, e)| DependencySpec {
                name,
                uuid: e.uuid,
                version: e.version,
                tree_hash: e.tree_hash,
            })
            .collect();
        Ok(ManifestFile::new(deps))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<ManifestFile> {
        let path = path.as_ref();
        ManifestFile::parse(&read_text(path)?, path)
    }

    pub fn to_toml(&self) -> String {
        let raw = RawManifest {
            manifest_format: MANIFEST_FORMAT.into(),
            deps: self
                .deps
                .iter()
                .map(|d| {
                    let entry = RawEntry {
                        tree_hash: d.tree_hash.clone(),
                        uuid: d.uuid,
                        version: d.version.clone(),
                    };
                    (d.name.clone(), entry)
                })
                .collect(),
        };
        toml::to_string(&raw).expect("manifests serialize")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_text(path.as_ref(), &self.to_toml())
    }
}
