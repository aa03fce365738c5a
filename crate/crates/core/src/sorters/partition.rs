//! Partitioning loops.

use crate::metering::{CostEvent, CqsPartitionTallies, Meter, PartitionTallies, ScanRole};

/// Yaroslavskiy's dual-pivot partitioning loop on `a[left..=right]`.
///
/// Rearranges the range so that with return value `(ip, iq)` all elements in
/// `[left, ip]` are `< p`, those in `(ip, iq)` lie between the pivots, and
/// those in `[iq, right]` are `>= q`. Assumes `left <= right`, `p <= q`, and
/// that neither pivot value occurs in the range.
///
/// Index `k` scans rightward classifying against `p` first; `g` scans
/// leftward classifying against `q` first; `l` trails `k` and receives the
/// small elements. Every comparison, swap and first access of a position
/// through one of the three indices is reported to the meter; the returned
/// tallies record the element class seen at each scanned position plus the
/// crossing indicator (`k` overshoots `g` by 2 exactly when the indices met
/// on a large element).
pub(crate) fn partition_yaroslavskiy<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    left: isize,
    right: isize,
    p: K,
    q: K,
    meter: &mut M,
) -> (isize, isize, PartitionTallies) {
    let mut t = PartitionTallies::default();
    let trace_branches = meter.checking();
    let mut l = left;
    let mut g = right;
    let mut k = left;
    while k <= g {
        let ku = k as usize;
        meter.emit(CostEvent::Scan(ScanRole::K, ku));
        meter.touch(ku);
        meter.emit(CostEvent::Compare);
        if a[ku] < p {
            t.s_at_k += 1;
            if trace_branches {
                meter.emit(CostEvent::Branch("small_swap"));
            }
            meter.emit(CostEvent::Swap);
            meter.emit(CostEvent::Scan(ScanRole::L, l as usize));
            meter.touch(ku);
            meter.touch(l as usize);
            a.swap(ku, l as usize);
            l += 1;
        } else {
            meter.emit(CostEvent::Compare);
            if a[ku] >= q {
                t.l_at_k += 1;
                let mut stopped_on_large = false;
                loop {
                    let gu = g as usize;
                    meter.emit(CostEvent::Scan(ScanRole::G, gu));
                    meter.touch(gu);
                    meter.emit(CostEvent::Compare);
                    if a[gu] > q {
                        t.l_at_g += 1;
                        if k < g {
                            g -= 1;
                            continue;
                        }
                        stopped_on_large = true;
                    }
                    break;
                }
                let gu = g as usize;
                meter.emit(CostEvent::Compare);
                meter.touch(gu);
                if a[gu] >= p {
                    if !stopped_on_large {
                        t.m_at_g += 1;
                    }
                    if trace_branches {
                        meter.emit(CostEvent::Branch("pair_swap"));
                    }
                    meter.emit(CostEvent::Swap);
                    meter.touch(ku);
                    meter.touch(gu);
                    a.swap(ku, gu);
                } else {
                    t.s_at_g += 1;
                    if trace_branches {
                        meter.emit(CostEvent::Branch("pair_swap_small"));
                    }
                    meter.emit(CostEvent::Swap);
                    meter.touch(ku);
                    meter.touch(gu);
                    a.swap(ku, gu);
                    meter.emit(CostEvent::Swap);
                    meter.emit(CostEvent::Scan(ScanRole::L, l as usize));
                    meter.touch(ku);
                    meter.touch(l as usize);
                    a.swap(ku, l as usize);
                    l += 1;
                }
                g -= 1;
            } else {
                t.m_at_k += 1;
            }
        }
        k += 1;
    }
    t.delta = k - g == 2;
    (l - 1, g + 1, t)
}

/// Single-pivot crossing-pointer partition of `a[lo..=hi]` against `p`.
///
/// Returns the first index of the `> p` region. Every scanned element costs
/// exactly one comparison, so per-partition comparisons and scanned elements
/// coincide. The two indices touch a common position only when they meet on
/// an element larger than the pivot; the tallies record that overshoot.
pub(crate) fn partition_classic<K: Ord + Copy, M: Meter>(
    a: &mut [K],
    lo: isize,
    hi: isize,
    p: K,
    meter: &mut M,
) -> (isize, CqsPartitionTallies) {
    let mut t = CqsPartitionTallies::default();
    let mut i = lo;
    let mut j = hi;
    while i <= j {
        let iu = i as usize;
        meter.emit(CostEvent::Scan(ScanRole::CqsScan, iu));
        meter.touch(iu);
        meter.emit(CostEvent::Compare);
        if a[iu] < p {
            t.small += 1;
            i += 1;
            continue;
        }
        t.large += 1;
        let mut met = false;
        loop {
            let ju = j as usize;
            meter.emit(CostEvent::Scan(ScanRole::CqsScan, ju));
            meter.touch(ju);
            meter.emit(CostEvent::Compare);
            if a[ju] > p {
                if i < j {
                    t.large += 1;
                    j -= 1;
                    continue;
                }
                met = true;
            } else {
                t.small += 1;
            }
            break;
        }
        if met {
            t.overshoot = true;
            break;
        }
        meter.emit(CostEvent::Swap);
        meter.touch(iu);
        meter.touch(j as usize);
        a.swap(iu, j as usize);
        i += 1;
        j -= 1;
    }
    (i, t)
}
