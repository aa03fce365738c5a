//! Directional insertion sorts.
//!
//! Both variants skip the first `s` outer-loop iterations: "from the left"
//! assumes the `s` leftmost elements are already sorted, "from the right"
//! the `s` rightmost. The gap-crossing variant sorts the `k` sample elements
//! that sit at the two ends of a range, addressing them through logical
//! indices and adding the gap width whenever a logical index crosses into
//! the right part.
//!
//! Scanned elements measure the distance covered by the two loop indices:
//! the outer index visits every element it reads, the inner index accrues
//! one element per position it moves onto (the probe it stops at adds no
//! distance). Every actual array access, including stopping probes and
//! writes, is still forwarded to the cache model through `touch`.

use crate::metering::{CostEvent, Meter, ScanRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FromLeft,
    FromRight,
}

pub(crate) fn insertion_left<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: isize,
    right: isize,
    s: isize,
    meter: &mut M,
) {
    if meter.checking() {
        let end = right.min(left + s - 1);
        for i in left..end {
            assert!(
                a[i as usize] <= a[(i + 1) as usize],
                "claimed sorted prefix of length {s} is not sorted"
            );
        }
    }
    let mut i = left + s;
    while i <= right {
        let v = a[i as usize];
        meter.emit(CostEvent::Scan(ScanRole::Seq, i as usize));
        meter.touch(i as usize);
        let mut j = i - 1;
        while j >= left {
            let ju = j as usize;
            meter.emit(CostEvent::Compare);
            meter.touch(ju);
            if v < a[ju] {
                meter.emit(CostEvent::Scan(ScanRole::Seq, ju));
                a[ju + 1] = a[ju];
                meter.emit(CostEvent::Write);
                meter.touch(ju + 1);
                j -= 1;
            } else {
                break;
            }
        }
        a[(j + 1) as usize] = v;
        meter.emit(CostEvent::Write);
        meter.touch((j + 1) as usize);
        i += 1;
    }
}

pub(crate) fn insertion_right<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: isize,
    right: isize,
    s: isize,
    meter: &mut M,
) {
    if meter.checking() {
        let start = left.max(right - s + 1);
        for i in start..right {
            assert!(
                a[i as usize] <= a[(i + 1) as usize],
                "claimed sorted suffix of length {s} is not sorted"
            );
        }
    }
    let mut i = right - s;
    while i >= left {
        let v = a[i as usize];
        meter.emit(CostEvent::Scan(ScanRole::Seq, i as usize));
        meter.touch(i as usize);
        let mut j = i + 1;
        while j <= right {
            let ju = j as usize;
            meter.emit(CostEvent::Compare);
            meter.touch(ju);
            if v > a[ju] {
                meter.emit(CostEvent::Scan(ScanRole::Seq, ju));
                a[ju - 1] = a[ju];
                meter.emit(CostEvent::Write);
                meter.touch(ju - 1);
                j += 1;
            } else {
                break;
            }
        }
        a[(j - 1) as usize] = v;
        meter.emit(CostEvent::Write);
        meter.touch((j - 1) as usize);
        i -= 1;
    }
}

#[allow(clippy::too_many_arguments)]
/// Insertion sort over the `k` sample elements of `a[left..left+n]`, which
/// occupy the `left_part` leftmost and `k - left_part` rightmost positions.
/// Logical index `li` addresses physical `left + li`, plus the gap width
/// `n - k` once `li` crosses into the right part.
pub(crate) fn gap_insertion<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: isize,
    n: isize,
    k: isize,
    left_part: isize,
    s: isize,
    direction: Direction,
    meter: &mut M,
) {
    let gap = n - k;
    let phys =
        |li: isize| -> usize { (left + li + if li >= left_part { gap } else { 0 }) as usize };

    if meter.checking() {
        match direction {
            Direction::FromLeft => {
                assert!(
                    s <= left_part,
                    "sorted prefix must lie inside the left sample part"
                );
                for li in 0..s - 1 {
                    assert!(
                        a[phys(li)] <= a[phys(li + 1)],
                        "claimed sample prefix is not sorted"
                    );
                }
            }
            Direction::FromRight => {
                assert!(
                    s <= (k - left_part).max(1),
                    "sorted suffix must lie inside the right sample part"
                );
                for li in (k - s).max(0)..k - 1 {
                    assert!(
                        a[phys(li)] <= a[phys(li + 1)],
                        "claimed sample suffix is not sorted"
                    );
                }
            }
        }
    }

    match direction {
        Direction::FromLeft => {
            let mut i = s;
            while i < k {
                let pi = phys(i);
                let v = a[pi];
                meter.emit(CostEvent::Scan(ScanRole::Seq, pi));
                meter.touch(pi);
                let mut j = i - 1;
                while j >= 0 {
                    let pj = phys(j);
                    meter.emit(CostEvent::Compare);
                    meter.touch(pj);
                    if v < a[pj] {
                        meter.emit(CostEvent::Scan(ScanRole::Seq, pj));
                        let pj1 = phys(j + 1);
                        a[pj1] = a[pj];
                        meter.emit(CostEvent::Write);
                        meter.touch(pj1);
                        j -= 1;
                    } else {
                        break;
                    }
                }
                let pj1 = phys(j + 1);
                a[pj1] = v;
                meter.emit(CostEvent::Write);
                meter.touch(pj1);
                i += 1;
            }
        }
        Direction::FromRight => {
            let mut i = k - 1 - s;
            while i >= 0 {
                let pi = phys(i);
                let v = a[pi];
                meter.emit(CostEvent::Scan(ScanRole::Seq, pi));
                meter.touch(pi);
                let mut j = i + 1;
                while j < k {
                    let pj = phys(j);
                    meter.emit(CostEvent::Compare);
                    meter.touch(pj);
                    if v > a[pj] {
                        meter.emit(CostEvent::Scan(ScanRole::Seq, pj));
                        let pj1 = phys(j - 1);
                        a[pj1] = a[pj];
                        meter.emit(CostEvent::Write);
                        meter.touch(pj1);
                        j += 1;
                    } else {
                        break;
                    }
                }
                let pj1 = phys(j - 1);
                a[pj1] = v;
                meter.emit(CostEvent::Write);
                meter.touch(pj1);
                i -= 1;
            }
        }
    }
}
