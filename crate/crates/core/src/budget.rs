use crate::error::{Error, Result};

/// Caps on exhaustive enumeration.
///
/// Each heavy operation estimates its work (incidence tests, codewords,
/// containment tests, ...) up front and refuses to start when the estimate
/// exceeds `max_work`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_work: u64,
    pub max_group_order: u64,
}

impl Budget {
    pub const DEFAULT_WORK: u64 = 1 << 36;
    pub const DEFAULT_GROUP_ORDER: u64 = 1_000_000;

    pub const fn new(max_work: u64) -> Self {
        Budget {
            max_work,
            max_group_order: Self::DEFAULT_GROUP_ORDER,
        }
    }

    pub const fn unlimited() -> Self {
        Budget {
            max_work: u64::MAX,
            max_group_order: u64::MAX,
        }
    }

    pub fn check(&self, what: &'static str, needed: u64) -> Result<()> {
        if needed > self.max_work {
            Err(Error::Budget {
                what,
                needed,
                cap: self.max_work,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_WORK)
    }
}
