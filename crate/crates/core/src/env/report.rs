//! Tool, operating system, CPU and dependency report.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Serialize, Serializer};

use super::project::{DependencySpec, ManifestFile};

pub const UNKNOWN: &str = "unknown";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verbosity {
    Brief,
    Full,
}

/// A probed value, or `"unknown"` when it could not be determined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Probed<T> {
    Known(T),
    Unknown,
}

impl<T> Probed<T> {
    pub fn known(&self) -> Option<&T> {
        match self {
            Probed::Known(v) => Some(v),
            Probed::Unknown => None,
        }
    }
}

impl<T> From<Option<T>> for Probed<T> {
    fn from(v: Option<T>) -> Self {
        v.map_or(Probed::Unknown, Probed::Known)
    }
}

impl<T: Serialize> Serialize for Probed<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Probed::Known(v) => v.serialize(s),
            Probed::Unknown => s.serialize_str(UNKNOWN),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Probed<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probed::Known(v) => v.fmt(f),
            Probed::Unknown => f.write_str(UNKNOWN),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OsInfo {
    pub kernel_name: Probed<String>,
    pub kernel_version: Probed<String>,
    pub architecture: Probed<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CpuInfo {
    pub model: Probed<String>,
    pub logical_cores: Probed<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyEntry {
    pub name: String,
    pub uuid: String,
    pub version: String,
    pub tree_hash: Option<String>,
}

impl From<&DependencySpec> for DependencyEntry {
    fn from(d: &DependencySpec) -> Self {
        DependencyEntry {
            name: d.name.clone(),
            uuid: d.uuid.to_string(),
            version: d.version.to_string(),
            tree_hash: d.tree_hash.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvironmentReport {
    pub tool_version: String,
    pub build_id: Probed<String>,
    pub os: OsInfo,
    pub cpu: CpuInfo,
    /// Absent in brief reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub memory_total: Option<Probed<u64>>,
    pub dependencies: Vec<DependencyEntry>,
    /// UTC, RFC 3339 with second precision.
    pub timestamp: String,
}

impl EnvironmentReport {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        serde_json::to_string_pretty(&value).expect("values serialize")
    }
}

impl fmt::Display for EnvironmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mathrepro version {}", self.tool_version)?;
        writeln!(f, "Build: {}", self.build_id)?;
        writeln!(f, "Timestamp: {}", self.timestamp)?;
        writeln!(f, "Platform:")?;
        writeln!(
            f,
            "  OS: {} {} ({})",
            self.os.kernel_name, self.os.kernel_version, self.os.architecture
        )?;
        writeln!(f, "  CPU: {} × {}", self.cpu.logical_cores, self.cpu.model)?;
        if let Some(mem) = &self.memory_total {
            match mem {
                Probed::Known(b) => writeln!(f, "  Memory: {:.3} GiB", *b as f64 / (1u64 << 30) as f64)?,
                Probed::Unknown => writeln!(f, "  Memory: {UNKNOWN}")?,
            }
            writeln!(f, "Dependencies:")?;
            if self.dependencies.is_empty() {
                writeln!(f, "  (no active manifest)")?;
            }
            for d in &self.dependencies {
                let hash = d.tree_hash.as_deref().unwrap_or("-");
                writeln!(f, "  {} v{} {} {}", d.name, d.version, d.uuid, hash)?;
            }
        }
        Ok(())
    }
}

/// Reads system facts from files under `root`, normally `/`.
#[derive(Debug, Clone)]
pub struct Probe {
    root: PathBuf,
}

impl Default for Probe {
    fn default() -> Self {
        Probe::at("/")
    }
}

impl Probe {
    pub fn at(root: impl Into<PathBuf>) -> Probe {
        Probe { root: root.into() }
    }

    fn read(&self, rel: &str) -> Option<String> {
        fs::read_to_string(self.root.join(rel)).ok()
    }

    fn first_line(&self, rel: &str) -> Option<String> {
        let text = self.read(rel)?;
        let line = text.lines().next()?.trim();
        (!line.is_empty()).then(|| line.to_string())
    }

    pub fn os(&self) -> OsInfo {
        OsInfo {
            kernel_name: self.first_line("proc/sys/kernel/ostype").into(),
            kernel_version: self.first_line("proc/sys/kernel/osrelease").into(),
            architecture: Some(std::env::consts::ARCH.to_string())
                .filter(|a| !a.is_empty())
                .into(),
        }
    }

    pub fn cpu(&self) -> CpuInfo {
        let model = self.read("proc/cpuinfo").and_then(|text| {
            text.lines().find_map(|line| {
                let (key, value) = line.split_once(':')?;
                let key = key.trim();
                let value = value.trim();
                (matches!(key, "model name" | "Model" | "cpu model" | "Processor") && !value.is_empty())
                    .then(|| value.to_string())
            })
        });
        CpuInfo {
            model: model.into(),
            logical_cores: std::thread::available_parallelism().ok().map(|n| n.get()).into(),
        }
    }

    pub fn memory_total(&self) -> Probed<u64> {
        self.read("proc/meminfo")
            .and_then(|text| {
                text.lines().find_map(|line| {
                    let rest = line.strip_prefix("MemTotal:")?;
                    let mut parts = rest.split_whitespace();
                    let n: u64 = parts.next()?.parse().ok()?;
                    match parts.next() {
                        Some("kB") => n.checked_mul(1024),
                        None => Some(n),
                        _ => None,
                    }
                })
            })
            .into()
    }
}

pub fn build_id() -> Probed<String> {
    option_env!("MATHREPRO_BUILD_ID")
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .into()
}

/// Report for this machine. Full reports list the manifest's pinned
/// dependencies when one is active.
pub fn collect_versioninfo(verbosity: Verbosity, manifest: Option<&ManifestFile>) -> EnvironmentReport {
    collect_with(&Probe::default(), verbosity, manifest)
}

pub fn collect_with(probe: &Probe, verbosity: Verbosity, manifest: Option<&ManifestFile>) -> EnvironmentReport {
    let full = verbosity == Verbosity::Full;
    let dependencies = match (full, manifest) {
        (true, Some(m)) => m.deps.iter().map(DependencyEntry::from).collect(),
        _ => Vec::new(),
    };
    EnvironmentReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        build_id: build_id(),
        os: probe.os(),
        cpu: probe.cpu(),
        memory_total: full.then(|| probe.memory_total()),
        dependencies,
        timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
    }
}

/// The manifest in `dir`, if there is a readable one.
pub fn active_manifest(dir: &Path) -> Option<ManifestFile> {
    ManifestFile::read(dir.join(super::project::MANIFEST_FILE)).ok()
}
