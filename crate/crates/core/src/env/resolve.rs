//! Local package registry, manifest resolution and verification.
//!
//! A registry is a directory laid out as `<root>/<name>/<version>/` where
//! each version folder holds the package's `Project.toml` and payload.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use semver::{Version, VersionReq};
use serde::Serialize;

use super::error::{io_error, EnvError, Result};
use super::project::{DependencySpec, ManifestFile, ProjectFile, PROJECT_FILE};
use super::tree_hash::tree_hash;
use crate::mrdi::ObjectId;

/// Environment variable naming the default registry directory.
pub const REGISTRY_ENV: &str = "MATHREPRO_REGISTRY";

pub fn registry_from_env() -> Option<PathBuf> {
    std::env::var_os(REGISTRY_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

#[derive(Debug, Clone)]
pub struct Registry {
    root: PathBuf,
}

impl Registry {
    pub fn new(root: impl Into<PathBuf>) -> Registry {
        Registry { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn package_dir(&self, name: &str, version: &Version) -> PathBuf {
        self.root.join(name).join(version.to_string())
    }

    /// Versions present for `name`, ascending. An absent package has none.
    pub fn versions(&self, name: &str) -> Result<Vec<Version>> {
        let dir = self.root.join(name);
        if !dir.is_dir() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for entry in fs::read_dir(&dir).map_err(io_error(&dir))? {
            let entry = entry.map_err(io_error(&dir))?;
            if !entry.file_type().map_err(io_error(entry.path()))?.is_dir() {
                continue;
            }
            let name = entry.file_name();
            let text = name.to_string_lossy();
            let version = Version::parse(&text).map_err(|e| EnvError::Parse {
                path: entry.path(),
                message: format!("version folder name: {e}"),
            })?;
            out.push(version);
        }
        out.sort();
        Ok(out)
    }

    pub fn project(&self, name: &str, version: &Version) -> Result<ProjectFile> {
        let path = self.package_dir(name, version).join(PROJECT_FILE);
        let project = ProjectFile::read(&path)?;
        if project.name != name || &project.version != version {
            return Err(EnvError::Parse {
                path,
                message: format!(
                    "declares {} {} but sits in the folder for {name} {version}",
                    project.name, project.version
                ),
            });
        }
        Ok(project)
    }
}

/// Accepts `≥` and `≤` as spellings of `>=` and `<=`.
pub fn parse_bound(package: &str, bound: &str) -> Result<VersionReq> {
    let normalized = bound.replace('≥', ">=").replace('≤', "<=");
    VersionReq::parse(&normalized).map_err(|e| EnvError::InvalidBound {
        package: package.into(),
        bound: bound.into(),
        message: e.to_string(),
    })
}

struct Requirement {
    source: String,
    bound: String,
    req: VersionReq,
    uuid: ObjectId,
}

impl Requirement {
    fn describe(&self) -> String {
        format!("{} requires {}", self.source, self.bound)
    }
}

fn requirements_of(
    project: &ProjectFile,
    source: String,
    out: &mut BTreeMap<String, Vec<Requirement>>,
) -> Result<()> {
    for (name, uuid) in &project.deps {
        let bound = project.compat.get(name).map_or("*", String::as_str);
        out.entry(name.clone()).or_default().push(Requirement {
            source: source.clone(),
            bound: bound.into(),
            req: parse_bound(name, bound)?,
            uuid: *uuid,
        });
    }
    Ok(())
}

fn unresolvable(name: &str, reqs: &[Requirement], reason: impl Into<String>) -> EnvError {
    EnvError::UnresolvableDependency {
        package: name.into(),
        bounds: reqs.iter().map(Requirement::describe).collect(),
        reason: reason.into(),
    }
}

/// Pins the transitive dependencies of `project` to the highest registry
/// versions that satisfy every bound placed on them by the project and the
/// packages selected so far. Selection is repeated until it stops changing.
/// There is no backtracking: a package with no admissible version is an
/// error.
pub fn write_manifest(project: &ProjectFile, registry: &Registry) -> Result<ManifestFile> {
    let mut selected: BTreeMap<String, ProjectFile> = BTreeMap::new();
    let mut cache: BTreeMap<(String, Version), ProjectFile> = BTreeMap::new();
    let mut rounds = 0usize;
    loop {
        let mut reqs = BTreeMap::new();
        requirements_of(project, format!("{} {}", project.name, project.version), &mut reqs)?;
        for p in selected.values() {
            requirements_of(p, format!("{} {}", p.name, p.version), &mut reqs)?;
        }

        let mut next = BTreeMap::new();
        for (name, rs) in &reqs {
            let versions = registry.versions(name)?;
            if versions.is_empty() {
                return Err(unresolvable(name, rs, "not found in registry"));
            }
            let best = versions
                .iter()
                .rev()
                .find(|v| rs.iter().all(|r| r.req.matches(v)))
                .ok_or_else(|| unresolvable(name, rs, "no registry version satisfies all bounds"))?;
            let key = (name.clone(), best.clone());
            if !cache.contains_key(&key) {
                cache.insert(key.clone(), registry.project(name, best)?);
            }
            let chosen = cache[&key].clone();
            if let Some(r) = rs.iter().find(|r| r.uuid != chosen.uuid) {
                return Err(unresolvable(
                    name,
                    rs,
                    format!("{} expects uuid {} but the registry has {}", r.source, r.uuid, chosen.uuid),
                ));
            }
            next.insert(name.clone(), chosen);
        }

        if next == selected {
            break;
        }
        rounds += 1;
        if rounds > cache.len() + 16 {
            let name = next.keys().next().cloned().unwrap_or_default();
            return Err(unresolvable(&name, &reqs[&name], "selection does not settle"));
        }
        selected = next;
    }

    let mut deps = Vec::with_capacity(selected.len());
    for p in selected.values() {
        deps.push(DependencySpec {
            name: p.name.clone(),
            uuid: p.uuid,
            version: p.version.clone(),
            tree_hash: Some(tree_hash(registry.package_dir(&p.name, &p.version))?),
        });
    }
    Ok(ManifestFile::new(deps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiscrepancyKind {
    Missing,
    VersionChanged,
    ContentChanged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub package: String,
    pub detail: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}: {}", self.kind, self.package, self.detail)
    }
}

/// Compares each pinned entry against the registry; one discrepancy at most
/// per entry.
pub fn verify_manifest(manifest: &ManifestFile, registry: &Registry) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for dep in &manifest.deps {
        let found = |kind, detail: String| Discrepancy {
            kind,
            package: dep.name.clone(),
            detail,
        };
        let dir = registry.package_dir(&dep.name, &dep.version);
        if !dir.is_dir() {
            out.push(found(
                DiscrepancyKind::Missing,
                format!("{} is not a directory", dir.display()),
            ));
            continue;
        }
        let project_path = dir.join(PROJECT_FILE);
        match ProjectFile::read(&project_path) {
            Ok(p) if p.version != dep.version || p.uuid != dep.uuid => {
                out.push(found(
                    DiscrepancyKind::VersionChanged,
                    format!(
                        "pinned {} ({}), folder declares {} ({})",
                        dep.version, dep.uuid, p.version, p.uuid
                    ),
                ));
                continue;
            }
            Ok(_) => {}
            Err(e) => {
                out.push(found(DiscrepancyKind::ContentChanged, e.to_string()));
                continue;
            }
        }
        let Some(expected) = &dep.tree_hash else {
            continue;
        };
        match tree_hash(&dir) {
            Ok(actual) if &actual == expected => {}
            Ok(actual) => out.push(found(
                DiscrepancyKind::ContentChanged,
                format!("tree hash {actual}, pinned {expected}"),
            )),
            Err(e) => out.push(found(DiscrepancyKind::ContentChanged, e.to_string())),
        }
    }
    out
}
