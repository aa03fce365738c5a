//! Instrumented sorting algorithms.
//!
//! [`sort_yqs`] is dual-pivot quicksort with Yaroslavskiy's partitioning and
//! generalized pivot sampling: the sample occupies the `t1 + t2 + 1` leftmost
//! and `t3 + 1` rightmost positions of the current subrange, only the
//! ordinary elements between the sample halves are partitioned, and the
//! sampled-out middle elements and pivots are swapped to their final
//! partitions afterwards. Recursive calls know which part of their subrange
//! arrives pre-sorted (the relocated sample pieces) and skip it when sorting
//! the next sample.
//!
//! [`sort_cqs`] is the single-pivot counterpart with the same sampling
//! mechanics: `t1 + 1` sample elements on the left, `t2` on the right, a
//! crossing-pointer partition in which every scanned element costs exactly
//! one comparison.
//!
//! Both assume pairwise distinct keys.

mod insertion;
mod partition;

pub use insertion::Direction;

use crate::metering::{CostEvent, Meter, PartitionTallies, Phase};
use crate::params::{CallType, CqsSortConfig, SamplingParam, SortConfig};
use insertion::{gap_insertion, insertion_left, insertion_right};
use partition::{partition_classic, partition_yaroslavskiy};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortError {
    InvalidRange {
        left: usize,
        right: usize,
        len: usize,
    },
    PivotsOutOfOrder,
    SkipOutOfRange {
        s: usize,
        len: usize,
    },
    RangeTooShort {
        len: usize,
        k: usize,
    },
}

impl fmt::Display for SortError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortError::InvalidRange { left, right, len } => {
                write!(
                    f,
                    "invalid range [{left}, {right}] for array of length {len}"
                )
            }
            SortError::PivotsOutOfOrder => write!(f, "pivots must satisfy P <= Q"),
            SortError::SkipOutOfRange { s, len } => {
                write!(f, "skip length s = {s} out of range for {len} elements")
            }
            SortError::RangeTooShort { len, k } => {
                write!(
                    f,
                    "range of {len} elements cannot hold a sample of size {k}"
                )
            }
        }
    }
}

impl std::error::Error for SortError {}

/// Result of [`partition_dual_full`]: the two region boundaries plus the
/// per-class access tallies of the partitioning loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualPartition {
    pub ip: isize,
    pub iq: isize,
    pub tallies: PartitionTallies,
}

/// Dual-pivot partition of `a[left..=right]` by pivot values `p <= q` that
/// must not occur in the range. On return, `a[j] < p` for `left <= j <= ip`,
/// `p <= a[j] <= q` for `ip < j < iq`, and `a[j] >= q` for `iq <= j <= right`.
pub fn partition_dual<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: usize,
    right: usize,
    p: K,
    q: K,
    meter: &mut M,
) -> Result<(isize, isize), SortError> {
    partition_dual_full(a, left, right, p, q, meter).map(|r| (r.ip, r.iq))
}

/// [`partition_dual`] that also returns the access tallies.
pub fn partition_dual_full<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: usize,
    right: usize,
    p: K,
    q: K,
    meter: &mut M,
) -> Result<DualPartition, SortError> {
    if left > right || right >= a.len() {
        return Err(SortError::InvalidRange {
            left,
            right,
            len: a.len(),
        });
    }
    if p > q {
        return Err(SortError::PivotsOutOfOrder);
    }
    let (ip, iq, tallies) = partition_yaroslavskiy(a, left as isize, right as isize, p, q, meter);
    Ok(DualPartition { ip, iq, tallies })
}

/// Insertion sort of `a[left..=right]` skipping the first `s` outer
/// iterations; the `s` leftmost (`FromLeft`) or rightmost (`FromRight`)
/// elements must already be sorted.
pub fn insertion_sort_directional<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: usize,
    right: usize,
    s: usize,
    direction: Direction,
    meter: &mut M,
) -> Result<(), SortError> {
    if left > right || right >= a.len() {
        return Err(SortError::InvalidRange {
            left,
            right,
            len: a.len(),
        });
    }
    let len = right - left + 1;
    if s == 0 || s > len {
        return Err(SortError::SkipOutOfRange { s, len });
    }
    match direction {
        Direction::FromLeft => insertion_left(a, left as isize, right as isize, s as isize, meter),
        Direction::FromRight => {
            insertion_right(a, left as isize, right as isize, s as isize, meter)
        }
    }
    Ok(())
}

/// Sorts the `k` sample elements of `a[left..=right]`, which occupy the
/// `t1 + t2 + 1` leftmost and `t3 + 1` rightmost positions, leaving the gap
/// between them untouched. The `s` leftmost (`FromLeft`) respectively `s`
/// rightmost (`FromRight`) sample elements must already be sorted.
pub fn sample_sort_directional<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: usize,
    right: usize,
    s: usize,
    direction: Direction,
    sampling: &SamplingParam,
    meter: &mut M,
) -> Result<(), SortError> {
    if left > right || right >= a.len() {
        return Err(SortError::InvalidRange {
            left,
            right,
            len: a.len(),
        });
    }
    let len = right - left + 1;
    let k = sampling.k();
    if len < k {
        return Err(SortError::RangeTooShort { len, k });
    }
    let left_part = sampling.t1 + sampling.t2 + 1;
    let bound = match direction {
        Direction::FromLeft => left_part,
        Direction::FromRight => sampling.t3 + 1,
    };
    if s == 0 || s > bound {
        return Err(SortError::SkipOutOfRange { s, len: bound });
    }
    gap_insertion(
        a,
        left as isize,
        len as isize,
        k as isize,
        left_part as isize,
        s as isize,
        direction,
        meter,
    );
    Ok(())
}

/// Dual-pivot quicksort with generalized pivot sampling. Sorts `a`
/// ascending; every comparison, swap, write and scanning-index access is
/// reported to `meter`.
pub fn sort_yqs<K: Ord + Copy, M: Meter>(a: &mut [K], config: &SortConfig, meter: &mut M) {
    if a.len() > 1 {
        yqs_rec(a, 0, a.len() as isize - 1, CallType::Root, config, meter);
    }
}

fn skip_for(ty: CallType, t1: isize, t2: isize, t3: isize) -> isize {
    match ty {
        CallType::Root => 1,
        CallType::Left => t1.max(1),
        CallType::Middle => t2.max(1),
        CallType::Right => t3.max(1),
    }
}

fn yqs_rec<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: isize,
    right: isize,
    ty: CallType,
    config: &SortConfig,
    meter: &mut M,
) {
    let n = right - left + 1;
    if n <= 1 {
        return;
    }
    let t = config.sampling();
    let (t1, t2, t3) = (t.t1 as isize, t.t2 as isize, t.t3 as isize);
    let k = t.k() as isize;
    let s = skip_for(ty, t1, t2, t3);

    if n <= config.is_threshold() as isize {
        meter.set_phase(Phase::InsertionSort);
        match ty {
            CallType::Right => insertion_right(a, left, right, s, meter),
            _ => insertion_left(a, left, right, s, meter),
        }
        return;
    }

    // n > w >= k-1, so the range holds at least k elements.
    meter.set_phase(Phase::SampleSort);
    let dir = match ty {
        CallType::Right => Direction::FromRight,
        _ => Direction::FromLeft,
    };
    gap_insertion(a, left, n, k, t1 + t2 + 1, s, dir, meter);

    let p = a[(left + t1) as usize];
    meter.touch((left + t1) as usize);
    let q = a[(right - t3) as usize];
    meter.touch((right - t3) as usize);
    let part_left = left + t1 + t2 + 1;
    let part_right = right - t3 - 1;

    meter.set_phase(Phase::Partition);
    meter.begin_partition(n as usize, k as usize);
    let (ip, iq, tallies) = if part_left <= part_right {
        partition_yaroslavskiy(a, part_left, part_right, p, q, meter)
    } else {
        (part_left - 1, part_right + 1, PartitionTallies::default())
    };
    meter.finalize_partition(&tallies);

    // Swap the sampled-out middle part of the sample and the pivots to
    // their final places; downward order copes with overlapping regions.
    meter.set_phase(Phase::SampleSort);
    let mut j = t2;
    loop {
        swap_elements(a, (left + t1 + j) as usize, (ip - t2 + j) as usize, meter);
        if j == 0 {
            break;
        }
        j -= 1;
    }
    swap_elements(a, iq as usize, (part_right + 1) as usize, meter);

    yqs_rec(a, left, ip - t2 - 1, CallType::Left, config, meter);
    yqs_rec(a, ip - t2 + 1, iq - 1, CallType::Middle, config, meter);
    yqs_rec(a, iq + 1, right, CallType::Right, config, meter);
}

/// Classic single-pivot quicksort with pivot sampling. Sorts `a` ascending.
pub fn sort_cqs<K: Ord + Copy, M: Meter>(a: &mut [K], config: &CqsSortConfig, meter: &mut M) {
    if a.len() > 1 {
        cqs_rec(a, 0, a.len() as isize - 1, CallType::Root, config, meter);
    }
}

fn cqs_rec<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: isize,
    right: isize,
    ty: CallType,
    config: &CqsSortConfig,
    meter: &mut M,
) {
    let n = right - left + 1;
    if n <= 1 {
        return;
    }
    let t = config.sampling();
    let (t1, t2) = (t.t1 as isize, t.t2 as isize);
    let k = t.k() as isize;
    let s = match ty {
        CallType::Root => 1,
        CallType::Left => t1.max(1),
        _ => t2.max(1),
    };

    if n <= config.is_threshold() as isize {
        meter.set_phase(Phase::InsertionSort);
        match ty {
            CallType::Right => insertion_right(a, left, right, s, meter),
            _ => insertion_left(a, left, right, s, meter),
        }
        return;
    }

    meter.set_phase(Phase::SampleSort);
    let dir = match ty {
        CallType::Right => Direction::FromRight,
        _ => Direction::FromLeft,
    };
    gap_insertion(a, left, n, k, t1 + 1, s, dir, meter);

    let p = a[(left + t1) as usize];
    meter.touch((left + t1) as usize);
    let part_left = left + t1 + 1;
    let part_right = right - t2;

    meter.set_phase(Phase::Partition);
    meter.begin_partition(n as usize, k as usize);
    let (split, tallies) = if part_left <= part_right {
        partition_classic(a, part_left, part_right, p, meter)
    } else {
        (part_left, Default::default())
    };
    meter.finalize_partition_cqs(&tallies);

    // Pivot to its final place, between the small and large regions.
    meter.set_phase(Phase::SampleSort);
    swap_elements(a, (left + t1) as usize, (split - 1) as usize, meter);

    cqs_rec(a, left, split - 2, CallType::Left, config, meter);
    cqs_rec(a, split, right, CallType::Right, config, meter);
}

#[inline]
fn swap_elements<K: Ord + Copy, M: Meter>(a: &mut [K], x: usize, y: usize, meter: &mut M) {
    meter.emit(CostEvent::Swap);
    meter.touch(x);
    meter.touch(y);
    a.swap(x, y);
}
