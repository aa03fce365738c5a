//! Experiment orchestration for the quicksort laboratory: seeded benchmark
//! runs, the exhaustive-permutation oracle, validation tables comparing
//! empirical counts against the closed-form asymptotics, and the CQS/YQS
//! comparison table.

pub mod rng;

use num_traits::Zero;
use qslab_core::cachesim::CacheConfig;
use qslab_core::metering::{merge_reports, CostReport, TallyMeter, TrialCounts, PHASES};
use qslab_core::sorters::{sort_cqs, sort_yqs};
use qslab_core::theory::{cqs_coefficients, yqs_coefficients, CoeffSet};
use qslab_core::tuner::{Measure, MEASURES};
use qslab_core::{CqsSamplingParam, CqsSortConfig, Rational, SamplingParam, SortConfig};
use serde_json::json;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError(pub String);

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid experiment spec: {}", self.0)
    }
}

impl std::error::Error for SpecError {}

/// Which sorter to run, with its validated configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoConfig {
    Yqs(SortConfig),
    Cqs(CqsSortConfig),
}

impl AlgoConfig {
    pub fn name(&self) -> &'static str {
        match self {
            AlgoConfig::Yqs(_) => "yqs",
            AlgoConfig::Cqs(_) => "cqs",
        }
    }

    pub fn is_threshold(&self) -> usize {
        match self {
            AlgoConfig::Yqs(c) => c.is_threshold(),
            AlgoConfig::Cqs(c) => c.is_threshold(),
        }
    }

    /// Leading-term coefficient set of this configuration.
    pub fn coefficients(&self) -> CoeffSet<f64> {
        match self {
            AlgoConfig::Yqs(c) => yqs_coefficients(&c.sampling()),
            AlgoConfig::Cqs(c) => cqs_coefficients(&c.sampling()),
        }
    }
}

/// One experiment: a sweep of input sizes, each run `trials` times on seeded
/// random permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub algo: AlgoConfig,
    pub ns: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub cache: Option<CacheConfig>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.ns.is_empty() {
            return Err(SpecError("n sweep must not be empty".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 1) {
            return Err(SpecError(format!("input size n = {n} violates n >= 1")));
        }
        if self.trials < 1 {
            return Err(SpecError("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Run one seeded trial and return its raw counters.
pub fn run_trial(algo: &AlgoConfig, n: u64, seed: u64, cache: Option<CacheConfig>) -> TrialCounts {
    let mut a = rng::random_permutation(n as usize, seed);
    // Checking mode asserts the per-partition counter identities and the
    // sorted-prefix handoffs; it never changes any reported counter.
    let mut meter = TallyMeter::new().with_checking(cfg!(debug_assertions));
    if let Some(c) = cache {
        meter = meter.with_cache(c);
    }
    match algo {
        AlgoConfig::Yqs(cfg) => sort_yqs(&mut a, cfg, &mut meter),
        AlgoConfig::Cqs(cfg) => sort_cqs(&mut a, cfg, &mut meter),
    }
    assert!(a.windows(2).all(|w| w[0] < w[1]), "output not sorted");
    meter.counts()
}

/// Run the experiment: per input size, `trials` seeded trials aggregated
/// into one report. Trial `i` uses seed `trial_seed(spec.seed, n, i)`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<(u64, CostReport)>, SpecError> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.ns.len());
    for &n in &spec.ns {
        let counts: Vec<TrialCounts> = (0..spec.trials)
            .map(|i| run_trial(&spec.algo, n, rng::trial_seed(spec.seed, n, i), spec.cache))
            .collect();
        let report = merge_reports(&counts).expect("at least one trial");
        out.push((n, report));
    }
    Ok(out)
}

/// Exact means of one counter family over all `n!` permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMeans {
    pub comparisons: Rational,
    pub swaps: Rational,
    pub writes: Rational,
    pub scanned: Rational,
    pub bytecode: Rational,
}

/// Exact per-measure means over all `n!` input permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub n: u64,
    pub permutations: u64,
    /// Means of the grand totals.
    pub totals: OracleMeans,
    /// Means of the partition-phase counters.
    pub partition_phase: OracleMeans,
    /// Means of the first partitioning step's counters; `None` when the
    /// threshold stops recursion before any partitioning.
    pub first_partition: Option<OracleMeans>,
}

/// Brute-force oracle: runs the instrumented sorter on every permutation of
/// `0..n` (hence `n <= 9`) and averages every counter exactly.
pub fn exact_average_oracle(algo: &AlgoConfig, n: u64) -> Result<OracleReport, SpecError> {
    if n > 9 {
        return Err(SpecError(format!(
            "exhaustive oracle needs n <= 9 (factorial enumeration), got n = {n}"
        )));
    }
    if n < 1 {
        return Err(SpecError("oracle needs n >= 1".into()));
    }
    let mut permutations = 0u64;
    let mut tot = [0u128; 5];
    let mut part = [0u128; 5];
    let mut first = [0u128; 3];
    let mut first_bc = 0u128;
    let mut saw_partition = true;
    rng::for_each_permutation(n as usize, |p| {
        let mut a = p.to_vec();
        let mut meter = TallyMeter::new().with_checking(true);
        match algo {
            AlgoConfig::Yqs(cfg) => sort_yqs(&mut a, cfg, &mut meter),
            AlgoConfig::Cqs(cfg) => sort_cqs(&mut a, cfg, &mut meter),
        }
        debug_assert!(a.windows(2).all(|w| w[0] < w[1]));
        let c = meter.counts();
        let t = c.total();
        for (acc, v) in
            tot.iter_mut()
                .zip([t.comparisons, t.swaps, t.writes, t.scanned, t.bytecode])
        {
            *acc += v as u128;
        }
        let pp = c.phase(qslab_core::metering::Phase::Partition);
        for (acc, v) in
            part.iter_mut()
                .zip([pp.comparisons, pp.swaps, pp.writes, pp.scanned, pp.bytecode])
        {
            *acc += v as u128;
        }
        match c.first_partition {
            Some(fp) => {
                first[0] += fp.comparisons as u128;
                first[1] += fp.swaps as u128;
                first[2] += fp.scanned as u128;
                first_bc += fp.bytecode as u128;
            }
            None => saw_partition = false,
        }
        permutations += 1;
    });
    let denom = Rational::from_integer(permutations.into());
    let mean = |x: u128| Rational::from_integer(x.into()) / denom.clone();
    let means = |xs: &[u128; 5]| OracleMeans {
        comparisons: mean(xs[0]),
        swaps: mean(xs[1]),
        writes: mean(xs[2]),
        scanned: mean(xs[3]),
        bytecode: mean(xs[4]),
    };
    Ok(OracleReport {
        n,
        permutations,
        totals: means(&tot),
        partition_phase: means(&part),
        first_partition: saw_partition.then(|| OracleMeans {
            comparisons: mean(first[0]),
            swaps: mean(first[1]),
            writes: Rational::zero(),
            scanned: mean(first[2]),
            bytecode: mean(first_bc),
        }),
    })
}

/// One row of the validation table: empirical mean of one measure in one
/// phase, against the leading-term asymptotic ratio `a/H` and its truncated
/// version (both normalized by `n ln n`).
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub n: u64,
    pub measure: &'static str,
    pub phase: &'static str,
    pub mean: f64,
    pub stderr: f64,
    pub asymptotic: f64,
    pub truncated: f64,
}

fn ratio_for(coeffs: &CoeffSet<f64>, measure: Measure) -> f64 {
    match measure {
        Measure::Comparisons => coeffs.q_c,
        Measure::Swaps => coeffs.q_s,
        Measure::Bytecodes => coeffs.q_bc,
        Measure::Scanned => coeffs.q_se,
    }
}

fn measure_column(measure: Measure) -> &'static str {
    match measure {
        Measure::Comparisons => "comparisons",
        Measure::Swaps => "swaps",
        Measure::Bytecodes => "bytecode",
        Measure::Scanned => "scanned",
    }
}

/// Normalized truncated asymptotic `ratio * ln(n/c) / ln(n)`.
fn truncated_ratio(ratio: f64, n: u64, c: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    ratio * (1.0 - (c as f64).ln() / (n as f64).ln())
}

/// Run the experiment and tabulate empirical means against theory. Rows are
/// emitted per measure (the four analytic ones, plus cache misses when a
/// cache is configured) and per phase (`total`, then the three phases).
pub fn validate(spec: &ExperimentSpec) -> Result<Vec<ValidationRow>, SpecError> {
    let reports = run_experiment(spec)?;
    let coeffs = spec.algo.coefficients();
    let w = spec.algo.is_threshold() as u64;
    let mut rows = Vec::new();
    for (n, report) in &reports {
        let n = *n;
        for m in MEASURES {
            let agg = match m {
                Measure::Comparisons => &report.comparisons,
                Measure::Swaps => &report.swaps,
                Measure::Bytecodes => &report.bytecode,
                Measure::Scanned => &report.scanned,
            };
            let ratio = ratio_for(&coeffs, m);
            let truncated = truncated_ratio(ratio, n, w);
            rows.push(ValidationRow {
                n,
                measure: measure_column(m),
                phase: "total",
                mean: agg.mean,
                stderr: agg.stderr,
                asymptotic: ratio,
                truncated,
            });
            for (i, ph) in PHASES.iter().enumerate() {
                rows.push(ValidationRow {
                    n,
                    measure: measure_column(m),
                    phase: ph.name(),
                    mean: agg.phase_means[i],
                    stderr: f64::NAN,
                    asymptotic: ratio,
                    truncated,
                });
            }
        }
        if let (Some(cache), Some(agg)) = (&spec.cache, &report.cache_misses) {
            let b = cache.block_elements() as f64;
            let ratio = coeffs.q_se / b;
            let truncated = truncated_ratio(ratio, n, cache.capacity_elements() as u64);
            rows.push(ValidationRow {
                n,
                measure: "cache_misses",
                phase: "total",
                mean: agg.mean,
                stderr: agg.stderr,
                asymptotic: ratio,
                truncated,
            });
            for (i, ph) in PHASES.iter().enumerate() {
                rows.push(ValidationRow {
                    n,
                    measure: "cache_misses",
                    phase: ph.name(),
                    mean: agg.phase_means[i],
                    stderr: f64::NAN,
                    asymptotic: ratio,
                    truncated,
                });
            }
        }
    }
    Ok(rows)
}

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

/// CSV emission: header `n,measure,phase,mean,stderr,asymptotic,truncated`,
/// UTF-8, `\n` line endings, `.` decimal separator. Bit-identical for
/// identical specs.
pub fn rows_to_csv(rows: &[ValidationRow]) -> String {
    let mut out = String::from("n,measure,phase,mean,stderr,asymptotic,truncated\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.measure,
            r.phase,
            fmt_f64(r.mean),
            fmt_f64(r.stderr),
            fmt_f64(r.asymptotic),
            fmt_f64(r.truncated),
        ));
    }
    out
}

/// One row of the CQS-versus-YQS table: leading-term coefficient ratios of
/// both algorithms at symmetric sampling parameters of equal sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    /// `None` for the no-sampling row (CQS `t = (0,0)`, YQS `t = (0,0,0)`).
    pub k: Option<usize>,
    pub measure: &'static str,
    pub cqs: f64,
    pub yqs: f64,
    /// False when `k` admits no symmetric choice for both algorithms
    /// (requires `k = 5 mod 6`); such rows carry NaN values.
    pub representable: bool,
}

/// Comparison table for the given sample sizes, preceded by the no-sampling
/// row.
pub fn compare_algorithms(ks: &[usize]) -> Vec<CompareRow> {
    let mut rows = Vec::new();
    let cqs0 = cqs_coefficients::<f64>(&CqsSamplingParam::new(0, 0));
    let yqs0 = yqs_coefficients::<f64>(&SamplingParam::new(0, 0, 0));
    for m in MEASURES {
        rows.push(CompareRow {
            k: None,
            measure: measure_column(m),
            cqs: ratio_for(&cqs0, m),
            yqs: ratio_for(&yqs0, m),
            representable: true,
        });
    }
    for &k in ks {
        if k < 5 || k % 6 != 5 {
            for m in MEASURES {
                rows.push(CompareRow {
                    k: Some(k),
                    measure: measure_column(m),
                    cqs: f64::NAN,
                    yqs: f64::NAN,
                    representable: false,
                });
            }
            continue;
        }
        let tc = CqsSamplingParam::new((k - 1) / 2, (k - 1) / 2);
        let ty = SamplingParam::new((k - 2) / 3, (k - 2) / 3, (k - 2) / 3);
        let cc = cqs_coefficients::<f64>(&tc);
        let cy = yqs_coefficients::<f64>(&ty);
        for m in MEASURES {
            rows.push(CompareRow {
                k: Some(k),
                measure: measure_column(m),
                cqs: ratio_for(&cc, m),
                yqs: ratio_for(&cy, m),
                representable: true,
            });
        }
    }
    rows
}

/// JSON form of an aggregated cost report.
pub fn report_to_json(n: u64, report: &CostReport) -> serde_json::Value {
    let agg = |a: &qslab_core::metering::Aggregate| {
        json!({
            "total": a.total.to_string(),
            "mean": a.mean,
            "stderr": a.stderr,
            "by_phase": {
                "partition": a.phase_means[0],
                "insertionsort": a.phase_means[1],
                "samplesort": a.phase_means[2],
            },
        })
    };
    let mut doc = json!({
        "n": n,
        "trials": report.trials,
        "comparisons": agg(&report.comparisons),
        "swaps": agg(&report.swaps),
        "writes": agg(&report.writes),
        "scanned": agg(&report.scanned),
        "bytecode": agg(&report.bytecode),
    });
    if let Some(cm) = &report.cache_misses {
        doc["cache_misses"] = agg(cm);
    }
    doc
}

/// The `analyze` JSON document for a dual-pivot sampling parameter.
pub fn analyze_json_yqs(t: &SamplingParam) -> serde_json::Value {
    let c = yqs_coefficients::<f64>(t);
    json!({
        "t": [t.t1, t.t2, t.t3],
        "k": t.k(),
        "H": c.h,
        "a_C": c.a_c,
        "a_S": c.a_s,
        "a_BC": c.a_bc,
        "a_SE": c.a_se,
        "ratio_C": c.q_c,
        "ratio_S": c.q_s,
        "ratio_BC": c.q_bc,
        "ratio_SE": c.q_se,
    })
}

/// The `analyze` JSON document for a single-pivot sampling parameter.
pub fn analyze_json_cqs(t: &CqsSamplingParam) -> serde_json::Value {
    let c = cqs_coefficients::<f64>(t);
    json!({
        "t": [t.t1, t.t2],
        "k": t.k(),
        "H": c.h,
        "a_C": c.a_c,
        "a_S": c.a_s,
        "a_BC": c.a_bc,
        "a_SE": c.a_se,
        "ratio_C": c.q_c,
        "ratio_S": c.q_s,
        "ratio_BC": c.q_bc,
        "ratio_SE": c.q_se,
    })
}

/// Parses an input-size argument: a plain integer or `2^k`.
pub fn parse_size(s: &str) -> Result<u64, String> {
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.trim().parse().map_err(|_| format!("bad size '{s}'"))?;
        let exp: u32 = exp.trim().parse().map_err(|_| format!("bad size '{s}'"))?;
        base.checked_pow(exp)
            .ok_or_else(|| format!("size '{s}' overflows"))
    } else {
        s.trim().parse().map_err(|_| format!("bad size '{s}'"))
    }
}

/// Powers-of-two sweep from `n_min` doubling up to `n_max` (inclusive).
pub fn size_sweep(n_min: u64, n_max: u64) -> Vec<u64> {
    let mut ns = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        ns.push(n);
        if n > u64::MAX / 2 {
            break;
        }
        n *= 2;
    }
    ns
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yqs_spec(n: u64, trials: u64) -> ExperimentSpec {
        ExperimentSpec {
            algo: AlgoConfig::Yqs(SortConfig::new(SamplingParam::new(1, 1, 1), 7).unwrap()),
            ns: vec![n],
            trials,
            seed: 42,
            cache: None,
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let spec = yqs_spec(500, 5);
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a, b);
        let rows_a = validate(&spec).unwrap();
        let rows_b = validate(&spec).unwrap();
        assert_eq!(rows_to_csv(&rows_a), rows_to_csv(&rows_b));
    }

    #[test]
    fn spec_validation_messages() {
        let mut spec = yqs_spec(10, 0);
        assert!(run_experiment(&spec)
            .unwrap_err()
            .to_string()
            .contains("trials"));
        spec.trials = 1;
        spec.ns = vec![];
        assert!(run_experiment(&spec)
            .unwrap_err()
            .to_string()
            .contains("sweep"));
        spec.ns = vec![0];
        assert!(run_experiment(&spec)
            .unwrap_err()
            .to_string()
            .contains("n >= 1"));
    }

    #[test]
    fn breakdown_sums_to_total() {
        let rows = validate(&yqs_spec(300, 3)).unwrap();
        for n_measure in ["comparisons", "swaps", "scanned", "bytecode"] {
            let total: f64 = rows
                .iter()
                .find(|r| r.measure == n_measure && r.phase == "total")
                .unwrap()
                .mean;
            let parts: f64 = rows
                .iter()
                .filter(|r| r.measure == n_measure && r.phase != "total")
                .map(|r| r.mean)
                .sum();
            assert!(
                (total - parts).abs() < 1e-9,
                "{n_measure}: {total} vs {parts}"
            );
        }
    }

    #[test]
    fn truncated_column_relation() {
        // at any n, truncated = ratio * (1 - ln w / ln n)
        let spec = yqs_spec(1024, 1);
        let rows = validate(&spec).unwrap();
        let r = rows
            .iter()
            .find(|r| r.measure == "scanned" && r.phase == "total")
            .unwrap();
        let expect = r.asymptotic * (1.0 - 7f64.ln() / 1024f64.ln());
        assert!((r.truncated - expect).abs() < 1e-12);
    }

    #[test]
    fn oracle_small_n_matches_spec_examples() {
        let cfg = AlgoConfig::Yqs(SortConfig::new(SamplingParam::new(0, 0, 0), 2).unwrap());
        let r = exact_average_oracle(&cfg, 3).unwrap();
        assert_eq!(r.permutations, 6);
        let fp = r.first_partition.unwrap();
        assert_eq!(fp.comparisons, Rational::new(7.into(), 3.into()));
        assert_eq!(fp.scanned, Rational::new(5.into(), 3.into()));
        assert_eq!(fp.swaps, Rational::new(2.into(), 3.into()));
        assert_eq!(fp.bytecode, Rational::new(109.into(), 3.into()));
    }

    #[test]
    fn oracle_rejects_large_n() {
        let cfg = AlgoConfig::Yqs(SortConfig::new(SamplingParam::new(0, 0, 0), 2).unwrap());
        assert!(exact_average_oracle(&cfg, 10).is_err());
    }

    #[test]
    fn oracle_all_sampled() {
        // n = k: no ordinary elements, zero partition events
        let cfg = AlgoConfig::Yqs(SortConfig::new(SamplingParam::new(0, 0, 0), 1).unwrap());
        let r = exact_average_oracle(&cfg, 2).unwrap();
        let fp = r.first_partition.unwrap();
        assert_eq!(fp.comparisons, Rational::zero());
        assert_eq!(fp.scanned, Rational::zero());
    }

    #[test]
    fn cqs_scans_equal_comparisons() {
        let cfg = AlgoConfig::Cqs(CqsSortConfig::new(CqsSamplingParam::new(0, 0), 1).unwrap());
        let spec = ExperimentSpec {
            algo: cfg,
            ns: vec![1000],
            trials: 3,
            seed: 9,
            cache: None,
        };
        let reports = run_experiment(&spec).unwrap();
        let r = &reports[0].1;
        assert_eq!(r.comparisons.phase_means[0], r.scanned.phase_means[0]);
        // w = 1: insertion sort contributes nothing, totals coincide too
        assert_eq!(r.comparisons.mean, r.scanned.mean);
    }

    #[test]
    fn compare_table_contents() {
        let rows = compare_algorithms(&[5, 6]);
        let no_sampling: Vec<_> = rows.iter().filter(|r| r.k.is_none()).collect();
        assert_eq!(no_sampling.len(), 4);
        assert_eq!(no_sampling[0].cqs, 2.0);
        assert!((no_sampling[0].yqs - 1.9).abs() < 1e-12);
        let k5: Vec<_> = rows.iter().filter(|r| r.k == Some(5)).collect();
        assert!((k5[0].cqs - 1.6216).abs() < 5e-5);
        assert!((k5[0].yqs - 1.7043).abs() < 5e-5);
        assert!(rows
            .iter()
            .filter(|r| r.k == Some(6))
            .all(|r| !r.representable));
    }

    #[test]
    fn analyze_json_keys() {
        let v = analyze_json_yqs(&SamplingParam::new(1, 1, 1));
        for key in [
            "t", "k", "H", "a_C", "a_S", "a_BC", "a_SE", "ratio_C", "ratio_S", "ratio_BC",
            "ratio_SE",
        ] {
            assert!(v.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(v["k"], 5);
        assert!((v["ratio_C"].as_f64().unwrap() - 680.0 / 399.0).abs() < 1e-12);
        let c = analyze_json_cqs(&CqsSamplingParam::new(1, 1));
        assert!((c["ratio_C"].as_f64().unwrap() - 12.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn size_parsing() {
        assert_eq!(parse_size("1024").unwrap(), 1024);
        assert_eq!(parse_size("2^16").unwrap(), 65536);
        assert!(parse_size("x").is_err());
        assert_eq!(size_sweep(32, 128), vec![32, 64, 128]);
        assert_eq!(size_sweep(100, 500), vec![100, 200, 400]);
    }
}
