use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use uuid::Uuid;

/// Content-derived object identifier: the first 128 bits of the SHA-256 of
/// an object's canonical bytes, with UUIDv8 version and variant bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(Uuid);

impl ObjectId {
    pub fn from_content(bytes: &[u8]) -> ObjectId {
        let digest = Sha256::digest(bytes);
        let mut buf = [0u8; 16];
        buf.copy_from_slice(&digest[..16]);
        ObjectId(Uuid::new_v8(buf))
    }

    /// Parses the canonical lowercase hyphenated form only.
    pub fn parse(s: &str) -> Option<ObjectId> {
        if s.len() != 36 || s.bytes().any(|b| b.is_ascii_uppercase()) {
            return None;
        }
        Uuid::try_parse(s).ok().map(ObjectId)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.hyphenated())
    }
}

impl serde::Serialize for ObjectId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ObjectId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for ObjectId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ObjectId::parse(s).ok_or_else(|| format!("'{s}' is not a lowercase hyphenated UUID"))
    }
}
