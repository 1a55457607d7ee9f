//! Outcome of a decidable property check.

use serde::{Deserialize, Serialize};

/// Result of checking a property that either holds or fails with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Check<V> {
        match self {
            Check::Holds => Check::Holds,
            Check::Fails(w) => Check::Fails(f(w)),
        }
    }
}

impl<W> From<Option<W>> for Check<W> {
    fn from(witness: Option<W>) -> Self {
        match witness {
            None => Check::Holds,
            Some(w) => Check::Fails(w),
        }
    }
}
