//! Environment capture: machine reports, directory tree hashes and pinned
//! project/manifest files over a local package registry.

mod error;
mod project;
mod report;
mod resolve;
mod tree_hash;

pub use error::{EnvError, Result};
pub use project::{DependencySpec, ManifestFile, ProjectFile, MANIFEST_FILE, MANIFEST_FORMAT, PROJECT_FILE};
pub use report::{
    active_manifest, build_id, collect_versioninfo, collect_with, CpuInfo, DependencyEntry,
    EnvironmentReport, OsInfo, Probe, Probed, Verbosity, UNKNOWN,
};
pub use resolve::{
    parse_bound, registry_from_env, verify_manifest, write_manifest, Discrepancy, DiscrepancyKind,
    Registry, REGISTRY_ENV,
};
pub use tree_hash::{blob_hash, tree_hash};
