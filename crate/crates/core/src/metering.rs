//! Event sink and per-partition statistics.
//!
//! Sorters push [`CostEvent`]s into a [`Meter`]; they never pull. The
//! [`NullMeter`] turns every hook into a no-op so uninstrumented runs carry
//! no overhead. The [`TallyMeter`] aggregates events into per-phase counters,
//! derives [`PartitionStats`] for every partitioning step, accumulates the
//! bytecode-model units, and optionally drives an idealized LRU cache from
//! the raw array traffic.

use crate::cachesim::{CacheConfig, CacheState};
use std::fmt;

/// Which part of the algorithm an event belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Partition = 0,
    InsertionSort = 1,
    SampleSort = 2,
}

pub const PHASES: [Phase; 3] = [Phase::Partition, Phase::InsertionSort, Phase::SampleSort];

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Partition => "partition",
            Phase::InsertionSort => "insertionsort",
            Phase::SampleSort => "samplesort",
        }
    }
}

/// Which scanning index performed an array access.
///
/// `K`, `G` and `L` are the three indices of the dual-pivot partitioning
/// loop, `CqsScan` covers both crossing indices of the single-pivot
/// partition, and `Seq` is the sequential traffic of the insertion sorts
/// (plain and gap-crossing).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanRole {
    K,
    G,
    L,
    CqsScan,
    Seq,
}

/// One instrumentation event. Scan events are emitted exactly at array
/// accesses through a scanning index, one per position newly attained by
/// that index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostEvent {
    Compare,
    Swap,
    Write,
    Scan(ScanRole, usize),
    Branch(&'static str),
}

/// Per-class access tallies of one dual-pivot partitioning step, as observed
/// by the partitioning loop itself. Element classes are relative to the two
/// pivots: small (< P), medium (between) and large (> Q); `s_at_k` counts
/// small elements reached through index `k`, and so on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PartitionTallies {
    pub s_at_k: u64,
    pub m_at_k: u64,
    pub l_at_k: u64,
    pub s_at_g: u64,
    pub m_at_g: u64,
    pub l_at_g: u64,
    /// True when indices `k` and `g` met on a large element, in which case
    /// `k` overshoots `g` by 2 instead of 1 at loop exit.
    pub delta: bool,
}

/// Per-class access tallies of one single-pivot partitioning step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CqsPartitionTallies {
    pub small: u64,
    pub large: u64,
    /// True when the crossing indices met on a large element and that
    /// position was accessed through both of them.
    pub overshoot: bool,
}

/// Observables of one dual-pivot partitioning step.
///
/// `n_prime` is the length of the enclosing subrange including the sample;
/// the partition loop itself only touches the `n_prime - k` ordinary
/// elements. `size_k`/`size_g`/`size_l` are the sizes of the position sets
/// attained by the three scanning indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PartitionStats {
    pub n_prime: u64,
    pub k: u64,
    pub i1: u64,
    pub i2: u64,
    pub i3: u64,
    pub delta: bool,
    pub l_at_k: u64,
    pub s_at_g: u64,
    pub s_at_kprime: u64,
    pub size_k: u64,
    pub size_g: u64,
    pub size_l: u64,
}

/// Weights of the bytecode-count model applied to per-partition observables.
///
/// The estimate is
/// `w_n * n' + w_i1 * I1 + w_i2 * I2 + w_x * (l@K - delta) + w_y * s@K' + w_const`.
/// The defaults `(10, 13, 5, 11, 1, 0)` reproduce the expected number of
/// bytecode instructions executed by the partitioning loop; the constant
/// per-step overhead is not pinned down by the model, so `w_const`
/// defaults to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BytecodeWeights {
    pub w_n: i64,
    pub w_i1: i64,
    pub w_i2: i64,
    pub w_x: i64,
    pub w_y: i64,
    pub w_const: i64,
}

impl Default for BytecodeWeights {
    fn default() -> Self {
        BytecodeWeights {
            w_n: 10,
            w_i1: 13,
            w_i2: 5,
            w_x: 11,
            w_y: 1,
            w_const: 0,
        }
    }
}

/// Weighted bytecode-model units for one partitioning step.
pub fn bytecode_estimate(stats: &PartitionStats, weights: &BytecodeWeights) -> u64 {
    let w = weights;
    let x = stats.l_at_k - u64::from(stats.delta);
    let sum = w.w_n as i128 * stats.n_prime as i128
        + w.w_i1 as i128 * stats.i1 as i128
        + w.w_i2 as i128 * stats.i2 as i128
        + w.w_x as i128 * x as i128
        + w.w_y as i128 * stats.s_at_kprime as i128
        + w.w_const as i128;
    assert!(sum >= 0, "bytecode estimate must be non-negative");
    sum as u64
}

/// Raw counters of one phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub comparisons: u64,
    pub swaps: u64,
    pub writes: u64,
    pub scanned: u64,
    pub bytecode: u64,
    pub cache_misses: u64,
}

impl PhaseCounts {
    fn add(&mut self, other: &PhaseCounts) {
        self.comparisons += other.comparisons;
        self.swaps += other.swaps;
        self.writes += other.writes;
        self.scanned += other.scanned;
        self.bytecode += other.bytecode;
        self.cache_misses += other.cache_misses;
    }
}

/// Counters of the very first partitioning step of a run (the root call's),
/// kept separately because the exact-expectation oracles are stated for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstPartition {
    pub comparisons: u64,
    pub swaps: u64,
    pub scanned: u64,
    pub bytecode: u64,
    pub stats: PartitionStats,
}

/// Everything one instrumented run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialCounts {
    pub phases: [PhaseCounts; 3],
    pub partitions: u64,
    pub first_partition: Option<FirstPartition>,
    pub branches: Vec<(&'static str, u64)>,
}

impl TrialCounts {
    pub fn total(&self) -> PhaseCounts {
        let mut t = PhaseCounts::default();
        for p in &self.phases {
            t.add(p);
        }
        t
    }

    pub fn phase(&self, phase: Phase) -> &PhaseCounts {
        &self.phases[phase as usize]
    }
}

/// Event sink. All hooks default to no-ops.
pub trait Meter {
    #[inline(always)]
    fn emit(&mut self, _event: CostEvent) {}

    /// Raw array traffic: called once per actual element access (reads and
    /// writes alike). Only the cache model consumes it.
    #[inline(always)]
    fn touch(&mut self, _index: usize) {}

    #[inline(always)]
    fn set_phase(&mut self, _phase: Phase) {}

    #[inline(always)]
    fn begin_partition(&mut self, _n_prime: usize, _k: usize) {}

    fn finalize_partition(&mut self, _tallies: &PartitionTallies) -> Option<PartitionStats> {
        None
    }

    fn finalize_partition_cqs(&mut self, _tallies: &CqsPartitionTallies) {}

    /// When true, sorters and the meter run their internal invariant checks
    /// (sorted-prefix preconditions, per-partition counter identities).
    #[inline(always)]
    fn checking(&self) -> bool {
        false
    }
}

/// Swallows every event; uninstrumented runs compile down to the bare
/// algorithm.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullMeter;

impl Meter for NullMeter {}

#[derive(Debug, Clone, Copy, Default)]
struct PartitionScratch {
    active: bool,
    n_prime: u64,
    k: u64,
    comparisons: u64,
    swaps: u64,
    scans_k: u64,
    scans_g: u64,
    scans_l: u64,
    scans_other: u64,
}

/// The standard aggregating meter.
#[derive(Debug, Clone)]
pub struct TallyMeter {
    phase: Phase,
    phases: [PhaseCounts; 3],
    weights: BytecodeWeights,
    cache: Option<CacheState>,
    checking: bool,
    scratch: PartitionScratch,
    partitions: u64,
    first_partition: Option<FirstPartition>,
    branches: Vec<(&'static str, u64)>,
}

impl Default for TallyMeter {
    fn default() -> Self {
        Self::new()
    }
}

impl TallyMeter {
    pub fn new() -> Self {
        TallyMeter {
            phase: Phase::Partition,
            phases: [PhaseCounts::default(); 3],
            weights: BytecodeWeights::default(),
            cache: None,
            checking: false,
            scratch: PartitionScratch::default(),
            partitions: 0,
            first_partition: None,
            branches: Vec::new(),
        }
    }

    /// Enable per-partition counter-identity checks; violations panic, which
    /// signals corrupt instrumentation.
    pub fn with_checking(mut self, on: bool) -> Self {
        self.checking = on;
        self
    }

    pub fn with_cache(mut self, config: CacheConfig) -> Self {
        self.cache = Some(CacheState::new(config));
        self
    }

    pub fn with_weights(mut self, weights: BytecodeWeights) -> Self {
        self.weights = weights;
        self
    }

    pub fn cache(&self) -> Option<&CacheState> {
        self.cache.as_ref()
    }

    pub fn branch_count(&self, label: &str) -> u64 {
        self.branches
            .iter()
            .find(|(l, _)| *l == label)
            .map_or(0, |(_, c)| *c)
    }

    pub fn counts(&self) -> TrialCounts {
        TrialCounts {
            phases: self.phases,
            partitions: self.partitions,
            first_partition: self.first_partition,
            branches: self.branches.clone(),
        }
    }

    fn cur(&mut self) -> &mut PhaseCounts {
        &mut self.phases[self.phase as usize]
    }
}

impl Meter for TallyMeter {
    #[inline]
    fn emit(&mut self, event: CostEvent) {
        let in_partition = self.phase == Phase::Partition && self.scratch.active;
        match event {
            CostEvent::Compare => {
                self.cur().comparisons += 1;
                if in_partition {
                    self.scratch.comparisons += 1;
                }
            }
            CostEvent::Swap => {
                self.cur().swaps += 1;
                if in_partition {
                    self.scratch.swaps += 1;
                }
            }
            CostEvent::Write => {
                self.cur().writes += 1;
            }
            CostEvent::Scan(role, _index) => {
                self.cur().scanned += 1;
                if in_partition {
                    match role {
                        ScanRole::K => self.scratch.scans_k += 1,
                        ScanRole::G => self.scratch.scans_g += 1,
                        ScanRole::L => self.scratch.scans_l += 1,
                        ScanRole::CqsScan | ScanRole::Seq => self.scratch.scans_other += 1,
                    }
                }
            }
            CostEvent::Branch(label) => match self.branches.iter_mut().find(|(l, _)| *l == label) {
                Some((_, c)) => *c += 1,
                None => self.branches.push((label, 1)),
            },
        }
    }

    #[inline]
    fn touch(&mut self, index: usize) {
        if let Some(cache) = &mut self.cache {
            if cache.access(index).is_miss() {
                self.phases[self.phase as usize].cache_misses += 1;
            }
        }
    }

    #[inline]
    fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    #[inline]
    fn begin_partition(&mut self, n_prime: usize, k: usize) {
        self.scratch = PartitionScratch {
            active: true,
            n_prime: n_prime as u64,
            k: k as u64,
            ..PartitionScratch::default()
        };
    }

    fn finalize_partition(&mut self, t: &PartitionTallies) -> Option<PartitionStats> {
        let sc = self.scratch;
        assert!(sc.active, "finalize_partition without begin_partition");
        self.scratch.active = false;

        let delta = u64::from(t.delta);
        let i1 = t.s_at_k + t.s_at_g;
        let i2 = t.m_at_k + t.m_at_g;
        let i3 = t.l_at_k - delta + t.l_at_g;
        let stats = PartitionStats {
            n_prime: sc.n_prime,
            k: sc.k,
            i1,
            i2,
            i3,
            delta: t.delta,
            l_at_k: t.l_at_k,
            s_at_g: t.s_at_g,
            // All small elements in K's range sit in its first I1+I2
            // positions; the delta position, when present, is large.
            s_at_kprime: t.s_at_k,
            size_k: sc.scans_k,
            size_g: sc.scans_g,
            size_l: sc.scans_l,
        };

        if self.checking {
            check_identities(&sc, &stats);
        }

        let bytecode = bytecode_estimate(&stats, &self.weights);
        self.phases[Phase::Partition as usize].bytecode += bytecode;
        self.partitions += 1;
        if self.first_partition.is_none() {
            self.first_partition = Some(FirstPartition {
                comparisons: sc.comparisons,
                swaps: sc.swaps,
                scanned: sc.scans_k + sc.scans_g + sc.scans_l,
                bytecode,
                stats,
            });
        }
        Some(stats)
    }

    fn finalize_partition_cqs(&mut self, t: &CqsPartitionTallies) {
        let sc = self.scratch;
        assert!(sc.active, "finalize_partition_cqs without begin_partition");
        self.scratch.active = false;

        if self.checking {
            // One comparison per scanned element: comparisons and scans
            // coincide per partitioning step.
            assert_eq!(
                sc.comparisons, sc.scans_other,
                "corrupt instrumentation: cqs comparisons != scanned"
            );
            assert_eq!(
                t.small + t.large,
                sc.n_prime - sc.k,
                "corrupt instrumentation: cqs class counts != ordinary elements"
            );
            assert_eq!(
                sc.scans_other,
                sc.n_prime - sc.k + u64::from(t.overshoot),
                "corrupt instrumentation: cqs scans != (n'-k) + overshoot"
            );
        }

        let bytecode = 6 * sc.comparisons + 18 * sc.swaps;
        self.phases[Phase::Partition as usize].bytecode += bytecode;
        self.partitions += 1;
        if self.first_partition.is_none() {
            self.first_partition = Some(FirstPartition {
                comparisons: sc.comparisons,
                swaps: sc.swaps,
                scanned: sc.scans_other,
                bytecode,
                stats: PartitionStats {
                    n_prime: sc.n_prime,
                    k: sc.k,
                    i1: t.small,
                    i3: t.large,
                    delta: t.overshoot,
                    ..PartitionStats::default()
                },
            });
        }
    }

    #[inline]
    fn checking(&self) -> bool {
        self.checking
    }
}

/// Per-partition counter identities relating raw event counts to the
/// classification tallies. A failure means the instrumentation (or the
/// partitioning loop) is corrupt.
fn check_identities(sc: &PartitionScratch, st: &PartitionStats) {
    let delta = u64::from(st.delta);
    let ncl = st.i1 + st.i2 + st.i3;
    assert_eq!(
        ncl,
        sc.n_prime - sc.k,
        "corrupt instrumentation: classified {ncl} of {} ordinary elements",
        sc.n_prime - sc.k
    );
    assert_eq!(
        sc.scans_k,
        st.i1 + st.i2 + delta,
        "corrupt instrumentation: |K|"
    );
    assert_eq!(sc.scans_g, st.i3, "corrupt instrumentation: |G|");
    assert_eq!(sc.scans_l, st.i1, "corrupt instrumentation: |L|");
    assert_eq!(
        sc.scans_other, 0,
        "corrupt instrumentation: foreign scans in partition"
    );
    assert_eq!(
        sc.comparisons,
        sc.scans_k + sc.scans_g + st.i2 + st.l_at_k + st.s_at_g + delta,
        "corrupt instrumentation: comparison identity"
    );
    assert_eq!(
        sc.swaps,
        st.i1 + st.l_at_k,
        "corrupt instrumentation: swap identity"
    );
    assert_eq!(
        sc.scans_k + sc.scans_g + sc.scans_l,
        (sc.n_prime - sc.k) + st.i1 + delta,
        "corrupt instrumentation: scanned-element identity"
    );
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeterError {
    EmptyReportList,
}

impl fmt::Display for MeterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeterError::EmptyReportList => write!(f, "cannot merge an empty list of reports"),
        }
    }
}

impl std::error::Error for MeterError {}

/// Mean, standard error and per-phase breakdown of one counter over a set of
/// identically-configured trials.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Aggregate {
    pub total: u128,
    pub mean: f64,
    pub stderr: f64,
    /// Mean per phase, indexed like [`PHASES`]. Sums to `mean`.
    pub phase_means: [f64; 3],
}

/// Aggregated counters over a set of trials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostReport {
    pub trials: u64,
    pub comparisons: Aggregate,
    pub swaps: Aggregate,
    pub writes: Aggregate,
    pub scanned: Aggregate,
    pub bytecode: Aggregate,
    pub cache_misses: Option<Aggregate>,
}

fn aggregate(trials: &[TrialCounts], pick: impl Fn(&PhaseCounts) -> u64) -> Aggregate {
    let n = trials.len() as f64;
    let mut total: u128 = 0;
    let mut phase_totals = [0u128; 3];
    for t in trials {
        for (i, p) in t.phases.iter().enumerate() {
            total += pick(p) as u128;
            phase_totals[i] += pick(p) as u128;
        }
    }
    let mean = total as f64 / n;
    let mut var = 0.0;
    if trials.len() > 1 {
        for t in trials {
            let x = t.phases.iter().map(|p| pick(p) as f64).sum::<f64>();
            var += (x - mean) * (x - mean);
        }
        var /= n - 1.0;
    }
    Aggregate {
        total,
        mean,
        stderr: (var / n).sqrt(),
        phase_means: [
            phase_totals[0] as f64 / n,
            phase_totals[1] as f64 / n,
            phase_totals[2] as f64 / n,
        ],
    }
}

/// Merge per-trial counts into one report: arithmetic means and standard
/// errors (sample standard deviation over sqrt of the trial count).
pub fn merge_reports(trials: &[TrialCounts]) -> Result<CostReport, MeterError> {
    if trials.is_empty() {
        return Err(MeterError::EmptyReportList);
    }
    let has_cache = trials.iter().any(|t| t.total().cache_misses > 0);
    Ok(CostReport {
        trials: trials.len() as u64,
        comparisons: aggregate(trials, |p| p.comparisons),
        swaps: aggregate(trials, |p| p.swaps),
        writes: aggregate(trials, |p| p.writes),
        scanned: aggregate(trials, |p| p.scanned),
        bytecode: aggregate(trials, |p| p.bytecode),
        cache_misses: has_cache.then(|| aggregate(trials, |p| p.cache_misses)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emit_counts_events() {
        let mut m = TallyMeter::new();
        m.set_phase(Phase::Partition);
        m.emit(CostEvent::Compare);
        m.emit(CostEvent::Compare);
        m.emit(CostEvent::Compare);
        m.emit(CostEvent::Scan(ScanRole::K, 0));
        m.emit(CostEvent::Scan(ScanRole::G, 5));
        m.emit(CostEvent::Scan(ScanRole::L, 0));
        m.emit(CostEvent::Branch("line4_swap"));
        m.emit(CostEvent::Branch("line4_swap"));
        let c = m.counts();
        assert_eq!(c.total().comparisons, 3);
        assert_eq!(c.total().scanned, 3);
        assert_eq!(m.branch_count("line4_swap"), 2);
        assert_eq!(m.branch_count("other"), 0);
    }

    #[test]
    fn trivial_stats_identity() {
        // 7 ordinary elements, 2 small / 3 medium / 2 large, meeting element
        // not large: I = (2,3,2), delta = 0, |K| = 5, |G| = 2, |L| = 2.
        let mut m = TallyMeter::new();
        m.set_phase(Phase::Partition);
        m.begin_partition(9, 2);
        for i in 0..5 {
            m.emit(CostEvent::Scan(ScanRole::K, i));
        }
        for i in 0..2 {
            m.emit(CostEvent::Scan(ScanRole::G, 8 - i));
        }
        for i in 0..2 {
            m.emit(CostEvent::Scan(ScanRole::L, i));
        }
        let tallies = PartitionTallies {
            s_at_k: 1,
            m_at_k: 3,
            l_at_k: 1,
            s_at_g: 1,
            m_at_g: 0,
            l_at_g: 1,
            delta: false,
        };
        let st = m.finalize_partition(&tallies).unwrap();
        assert_eq!((st.i1, st.i2, st.i3), (2, 3, 2));
        assert!(!st.delta);
        assert_eq!((st.size_k, st.size_g, st.size_l), (5, 2, 2));
    }

    #[test]
    fn degenerate_partition_is_all_zero() {
        let mut m = TallyMeter::new().with_checking(true);
        m.set_phase(Phase::Partition);
        m.begin_partition(5, 5);
        let st = m.finalize_partition(&PartitionTallies::default()).unwrap();
        assert_eq!((st.i1, st.i2, st.i3), (0, 0, 0));
        assert!(!st.delta);
        assert_eq!(st.n_prime, 5);
    }

    #[test]
    fn bytecode_estimate_examples() {
        let w = BytecodeWeights::default();
        let st = PartitionStats {
            n_prime: 10,
            i1: 2,
            i2: 3,
            l_at_k: 1,
            delta: false,
            s_at_kprime: 0,
            ..PartitionStats::default()
        };
        assert_eq!(bytecode_estimate(&st, &w), 100 + 26 + 15 + 11);
        let zero = PartitionStats::default();
        assert_eq!(bytecode_estimate(&zero, &w), 0);
        let w_const = BytecodeWeights {
            w_const: 7,
            ..BytecodeWeights::default()
        };
        assert_eq!(bytecode_estimate(&zero, &w_const), 7);
    }

    fn trial_with(comparisons: u64) -> TrialCounts {
        TrialCounts {
            phases: [
                PhaseCounts {
                    comparisons,
                    ..PhaseCounts::default()
                },
                PhaseCounts::default(),
                PhaseCounts::default(),
            ],
            partitions: 1,
            first_partition: None,
            branches: Vec::new(),
        }
    }

    #[test]
    fn merge_mean_and_stderr() {
        let r = merge_reports(&[trial_with(10), trial_with(14)]).unwrap();
        assert_eq!(r.comparisons.mean, 12.0);
        assert_eq!(r.comparisons.stderr, 2.0);
        assert_eq!(r.comparisons.total, 24);

        let single = merge_reports(&[trial_with(10)]).unwrap();
        assert_eq!(single.comparisons.mean, 10.0);
        assert_eq!(single.comparisons.stderr, 0.0);

        assert_eq!(merge_reports(&[]), Err(MeterError::EmptyReportList));
    }

    #[test]
    fn phase_means_sum_to_mean() {
        let mut t = trial_with(5);
        t.phases[1].comparisons = 3;
        t.phases[2].comparisons = 2;
        let r = merge_reports(&[t]).unwrap();
        assert_eq!(
            r.comparisons.phase_means.iter().sum::<f64>(),
            r.comparisons.mean
        );
    }
}
