//! Sampling parameters and sort configuration.

use std::fmt;

/// Dual-pivot sampling parameter `t = (t1, t2, t3)`.
///
/// From a sorted sample of `k = t1 + t2 + t3 + 2` elements the two pivots are
/// the `(t1+1)`-st and `(t1+t2+2)`-nd smallest, so that `t1`, `t2` and `t3`
/// sample elements fall below, between and above them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SamplingParam {
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
}

impl SamplingParam {
    pub const fn new(t1: usize, t2: usize, t3: usize) -> Self {
        SamplingParam { t1, t2, t3 }
    }

    /// Sample size `k = t1 + t2 + t3 + 2`.
    pub const fn k(&self) -> usize {
        self.t1 + self.t2 + self.t3 + 2
    }

    pub const fn as_array(&self) -> [usize; 3] {
        [self.t1, self.t2, self.t3]
    }

    /// The `t2 <-> t3` mirror, which has the same scanned-element cost.
    pub const fn mirror(&self) -> Self {
        SamplingParam::new(self.t1, self.t3, self.t2)
    }
}

impl fmt::Display for SamplingParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.t1, self.t2, self.t3)
    }
}

/// Single-pivot sampling parameter `t = (t1, t2)`.
///
/// The pivot is the `(t1+1)`-st smallest of a sample of `k = t1 + t2 + 1`
/// elements, so `t1` sample elements fall below it and `t2` above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CqsSamplingParam {
    pub t1: usize,
    pub t2: usize,
}

impl CqsSamplingParam {
    pub const fn new(t1: usize, t2: usize) -> Self {
        CqsSamplingParam { t1, t2 }
    }

    /// Sample size `k = t1 + t2 + 1`.
    pub const fn k(&self) -> usize {
        self.t1 + self.t2 + 1
    }

    pub const fn as_array(&self) -> [usize; 2] {
        [self.t1, self.t2]
    }
}

impl fmt::Display for CqsSamplingParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t1, self.t2)
    }
}

/// Which kind of call is running: the topmost one or a recursive call on a
/// left/middle/right subarray. Determines which part of the subrange is
/// already sorted and may be skipped when sorting the sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallType {
    Root,
    Left,
    Middle,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    /// `w >= k - 1` is required so that every partitioned range holds at
    /// least `k` elements; smaller thresholds are rejected outright.
    ThresholdTooSmall { w: usize, k: usize },
    /// The insertion sort threshold must be positive.
    ThresholdZero,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::ThresholdTooSmall { w, k } => write!(
                f,
                "insertion sort threshold w = {w} violates w >= k - 1 = {} for sample size k = {k}",
                k - 1
            ),
            ConfigError::ThresholdZero => write!(f, "insertion sort threshold must be >= 1"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Validated configuration for [`crate::sorters::sort_yqs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SortConfig {
    sampling: SamplingParam,
    is_threshold: usize,
}

impl SortConfig {
    /// Requires `is_threshold >= 1` and `is_threshold >= k - 1`.
    pub fn new(sampling: SamplingParam, is_threshold: usize) -> Result<Self, ConfigError> {
        if is_threshold == 0 {
            return Err(ConfigError::ThresholdZero);
        }
        if is_threshold < sampling.k() - 1 {
            return Err(ConfigError::ThresholdTooSmall {
                w: is_threshold,
                k: sampling.k(),
            });
        }
        Ok(SortConfig {
            sampling,
            is_threshold,
        })
    }

    pub fn sampling(&self) -> SamplingParam {
        self.sampling
    }

    pub fn is_threshold(&self) -> usize {
        self.is_threshold
    }
}

/// Validated configuration for [`crate::sorters::sort_cqs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CqsSortConfig {
    sampling: CqsSamplingParam,
    is_threshold: usize,
}

impl CqsSortConfig {
    pub fn new(sampling: CqsSamplingParam, is_threshold: usize) -> Result<Self, ConfigError> {
        if is_threshold == 0 {
            return Err(ConfigError::ThresholdZero);
        }
        if is_threshold + 1 < sampling.k() {
            return Err(ConfigError::ThresholdTooSmall {
                w: is_threshold,
                k: sampling.k(),
            });
        }
        Ok(CqsSortConfig {
            sampling,
            is_threshold,
        })
    }

    pub fn sampling(&self) -> CqsSamplingParam {
        self.sampling
    }

    pub fn is_threshold(&self) -> usize {
        self.is_threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_sizes() {
        assert_eq!(SamplingParam::new(0, 0, 0).k(), 2);
        assert_eq!(SamplingParam::new(1, 1, 1).k(), 5);
        assert_eq!(SamplingParam::new(3, 2, 4).k(), 11);
        assert_eq!(CqsSamplingParam::new(0, 0).k(), 1);
        assert_eq!(CqsSamplingParam::new(2, 2).k(), 5);
    }

    #[test]
    fn threshold_validation() {
        assert!(SortConfig::new(SamplingParam::new(1, 1, 1), 4).is_ok());
        assert_eq!(
            SortConfig::new(SamplingParam::new(1, 1, 1), 3),
            Err(ConfigError::ThresholdTooSmall { w: 3, k: 5 })
        );
        assert_eq!(
            SortConfig::new(SamplingParam::new(0, 0, 0), 0),
            Err(ConfigError::ThresholdZero)
        );
        assert!(CqsSortConfig::new(CqsSamplingParam::new(0, 0), 1).is_ok());
        assert!(CqsSortConfig::new(CqsSamplingParam::new(1, 1), 2).is_ok());
        assert!(CqsSortConfig::new(CqsSamplingParam::new(1, 1), 1).is_err());
    }
}
