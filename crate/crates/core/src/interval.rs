use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Inclusive integer interval `⟦lo, hi⟧`, never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntegerInterval {
    lo: i64,
    hi: i64,
}

impl IntegerInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn singleton(n: i64) -> Self {
        Self { lo: n, hi: n }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn contains_interval(&self, other: &IntegerInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &IntegerInterval) -> IntegerInterval {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &IntegerInterval) -> Option<IntegerInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Index of `n` in `0..len`, if inside.
    pub fn index_of(&self, n: i64) -> Option<usize> {
        self.contains(n).then(|| (n - self.lo) as usize)
    }
}

impl std::fmt::Display for IntegerInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl std::str::FromStr for IntegerInterval {
    type Err = crate::Error;

    /// Parses `M:N`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| crate::Error::Parse(format!("expected M:N, got '{s}'")))?;
        let lo = a.trim().parse().map_err(|_| crate::Error::Parse(format!("bad bound '{a}'")))?;
        let hi = b.trim().parse().map_err(|_| crate::Error::Parse(format!("bad bound '{b}'")))?;
        IntegerInterval::new(lo, hi)
    }
}
