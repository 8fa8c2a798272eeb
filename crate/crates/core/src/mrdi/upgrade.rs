//! Format upgrades as chains of single-step document rewrites.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use super::document::{KEY_DATA, KEY_FORMAT, KEY_TYPE};
use super::error::{MrdiError, Result};
use super::registry::TYPE_POLYNOMIAL;
use super::validate::validate;
use super::{TypeRegistry, CURRENT_FORMAT_VERSION};

type Transform = dyn Fn(&Value) -> Result<Value, String> + Send + Sync;

/// Rewrites a document from `from_version` to `from_version + 1`. The
/// transform must be pure; the chain driver stamps the new `_format`.
#[derive(Clone)]
pub struct UpgradeScript {
    pub from_version: u64,
    pub description: String,
    transform: Arc<Transform>,
}

impl UpgradeScript {
    pub fn new<F>(from_version: u64, description: impl Into<String>, transform: F) -> UpgradeScript
    where
        F: Fn(&Value) -> Result<Value, String> + Send + Sync + 'static,
    {
        UpgradeScript {
            from_version,
            description: description.into(),
            transform: Arc::new(transform),
        }
    }

    pub fn to_version(&self) -> u64 {
        self.from_version + 1
    }

    pub fn apply(&self, doc: &Value) -> Result<Value, String> {
        (self.transform)(doc)
    }
}

impl fmt::Debug for UpgradeScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UpgradeScript({} -> {}: {})", self.from_version, self.to_version(), self.description)
    }
}

#[derive(Debug, Clone)]
pub struct UpgradeRegistry {
    scripts: BTreeMap<u64, UpgradeScript>,
}

impl Default for UpgradeRegistry {
    fn default() -> Self {
        UpgradeRegistry::standard()
    }
}

pub(crate) fn format_of(doc: &Value) -> Result<u64> {
    doc.get(KEY_FORMAT)
        .and_then(Value::as_u64)
        .filter(|&v| v >= 1)
        .ok_or_else(|| MrdiError::malformed("/_format", "expected a positive integer"))
}

fn type_name(doc: &Value) -> Option<&str> {
    match doc.get(KEY_TYPE)? {
        Value::String(s) => Some(s),
        Value::Object(m) => m.get("name")?.as_str(),
        _ => None,
    }
}

/// Version 1 stored polynomial terms under `data.polynomial`.
fn rename_polynomial_terms(doc: &Value) -> Result<Value, String> {
    let mut out = doc.clone();
    if type_name(doc) != Some(TYPE_POLYNOMIAL) {
        return Ok(out);
    }
    let data = out
        .get_mut(KEY_DATA)
        .and_then(Value::as_object_mut)
        .ok_or("polynomial data is not an object")?;
    let terms = data
        .remove("polynomial")
        .ok_or("polynomial data lacks the 'polynomial' key")?;
    data.insert("terms".into(), terms);
    Ok(out)
}

impl UpgradeRegistry {
    pub fn empty() -> UpgradeRegistry {
        UpgradeRegistry {
            scripts: BTreeMap::new(),
        }
    }

    /// The scripts shipped with this version of the format.
    pub fn standard() -> UpgradeRegistry {
        let mut reg = UpgradeRegistry::empty();
        reg.register(UpgradeScript::new(
            1,
            "rename polynomial payload key 'polynomial' to 'terms'",
            rename_polynomial_terms,
        ));
        reg
    }

    /// Adds a script, replacing any previous script for the same step.
    pub fn register(&mut self, script: UpgradeScript) {
        self.scripts.insert(script.from_version, script);
    }

    pub fn scripts(&self) -> impl Iterator<Item = &UpgradeScript> {
        self.scripts.values()
    }

    /// Applies the chain of scripts from the document's version to `target`.
    /// The input is never modified; an up-to-date document comes back equal.
    pub fn upgrade(&self, doc: &Value, target: u64) -> Result<Value> {
        let from = format_of(doc)?;
        if from > target {
            return Err(MrdiError::VersionTooNew {
                found: from,
                current: target,
            });
        }
        if let Some(missing) = (from..target).find(|v| !self.scripts.contains_key(v)) {
            return Err(MrdiError::MissingUpgradePath {
                from,
                to: target,
                missing,
            });
        }
        let mut current = doc.clone();
        for version in from..target {
            let script = &self.scripts[&version];
            let mut next = script
                .apply(&current)
                .map_err(|reason| MrdiError::InvalidUpgrade {
                    version: version + 1,
                    reason,
                })?;
            let obj = next.as_object_mut().ok_or_else(|| MrdiError::InvalidUpgrade {
                version: version + 1,
                reason: "script did not return an object".into(),
            })?;
            obj.insert(KEY_FORMAT.into(), Value::from(version + 1));
            current = next;
        }
        if target == CURRENT_FORMAT_VERSION && from != target {
            let violations = validate(&current, &TypeRegistry::standard());
            if let Some(v) = violations.first() {
                return Err(MrdiError::InvalidUpgrade {
                    version: target,
                    reason: v.to_string(),
                });
            }
        }
        Ok(current)
    }
}
