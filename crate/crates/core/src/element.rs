use std::fmt;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Canonical finite encoding of a group element.
///
/// Every group fixes one encoding per element, so code equality is element
/// equality and the derived hash is a stable fingerprint.
pub type Code = SmallVec<[i32; 8]>;

/// Identifier of the group that owns an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
pub struct GroupTag(pub u64);

impl GroupTag {
    /// FNV-1a of the construction record, so rebuilding a spec yields the same tag.
    pub fn from_description(description: &str) -> Self {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in description.bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
        GroupTag(hash)
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// An element together with the tag of its ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub tag: GroupTag,
    pub code: Code,
}

impl Element {
    pub fn new(tag: GroupTag, code: Code) -> Self {
        Element { tag, code }
    }

    pub fn code(&self) -> &[i32] {
        &self.code
    }
}
