//! Optimal sampling parameters.
//!
//! For a fixed sample size `k` the discrete simplex `t1 + t2 + t3 = k - 2`
//! is enumerated exhaustively in exact rational arithmetic, so reported
//! optima and ties are exact. In the continuous limit the objective
//! `a*(tau) / H(tau)` is minimized by a coarse simplex grid followed by
//! coordinate refinement with halving steps.

use crate::params::SamplingParam;
use crate::scalar::frac;
use crate::theory::{continuous_coefficients, harmonic, harmonic_table, Tau, TheoryError};
use crate::Rational;
use num_traits::{One, ToPrimitive};
use std::fmt;

/// The four cost measures the analysis covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Comparisons,
    Swaps,
    Bytecodes,
    Scanned,
}

pub const MEASURES: [Measure; 4] = [
    Measure::Comparisons,
    Measure::Swaps,
    Measure::Bytecodes,
    Measure::Scanned,
];

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Comparisons => "comparisons",
            Measure::Swaps => "swaps",
            Measure::Bytecodes => "bytecodes",
            Measure::Scanned => "scanned",
        }
    }

    pub fn parse(s: &str) -> Option<Measure> {
        match s {
            "comparisons" => Some(Measure::Comparisons),
            "swaps" => Some(Measure::Swaps),
            "bytecodes" => Some(Measure::Bytecodes),
            "scanned" => Some(Measure::Scanned),
            _ => None,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact optimum over all sampling parameters with sample size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOptimum {
    pub k: usize,
    pub measure: Measure,
    /// Lexicographically smallest optimal parameter.
    pub best: SamplingParam,
    /// Exact optimal objective value `a_X / H`.
    pub value: Rational,
    pub value_f64: f64,
    /// Every parameter attaining the optimum exactly, sorted
    /// lexicographically.
    pub all_optima: Vec<SamplingParam>,
}

/// Exhaustive search over the discrete simplex `t1 + t2 + t3 = k - 2`.
///
/// The entropy of every candidate reuses one precomputed table of harmonic
/// differences; searching all four measures at k = 100 stays well under a
/// second.
pub fn optimal_t(k: usize, measure: Measure) -> Result<DiscreteOptimum, TheoryError> {
    if k < 2 {
        return Err(TheoryError::Domain("sample size k must be at least 2"));
    }
    let ku = k as u64;
    let h = harmonic_table::<Rational>(ku + 1);
    // weighted_diff[t_r] = (t_r + 1) (H_{k+1} - H_{t_r+1})
    let weighted_diff: Vec<Rational> = (0..=ku - 2)
        .map(|tr| frac::<Rational>(tr + 1, 1) * (h[k + 1].clone() - h[tr as usize + 1].clone()))
        .collect();
    let weighted_diff_f64: Vec<f64> = weighted_diff
        .iter()
        .map(|d| d.to_f64().expect("finite"))
        .collect();
    let k1 = frac::<Rational>(1, ku + 1);

    // Cheap f64 screen first; candidates within the screen margin of the
    // incumbent are compared exactly, so reported optima and ties stay
    // exact. The ratios are well-conditioned (a few f64 operations each),
    // so 1e-6 is far above any rounding error.
    const SCREEN: f64 = 1e-6;
    let mut best: Option<Rational> = None;
    let mut best_f64 = f64::INFINITY;
    let mut optima: Vec<SamplingParam> = Vec::new();
    for t1 in 0..=k - 2 {
        for t2 in 0..=k - 2 - t1 {
            let t3 = k - 2 - t1 - t2;
            let t = SamplingParam::new(t1, t2, t3);
            let entropy_f64 =
                (weighted_diff_f64[t1] + weighted_diff_f64[t2] + weighted_diff_f64[t3])
                    / (ku + 1) as f64;
            let q_f64 = coefficient_f64(&t, measure) / entropy_f64;
            if q_f64 > best_f64 + SCREEN {
                continue;
            }
            let entropy = (&weighted_diff[t1] + &weighted_diff[t2] + &weighted_diff[t3]) * &k1;
            let q = coefficient(&t, measure) / entropy;
            match &best {
                Some(b) if q > *b => {}
                Some(b) if q == *b => optima.push(t),
                _ => {
                    best_f64 = q.to_f64().expect("finite ratio");
                    best = Some(q);
                    optima.clear();
                    optima.push(t);
                }
            }
        }
    }
    let value = best.expect("non-empty simplex");
    optima.sort();
    Ok(DiscreteOptimum {
        k,
        measure,
        best: optima[0],
        value_f64: value.to_f64().expect("finite ratio"),
        value,
        all_optima: optima,
    })
}

fn coefficient_f64(t: &SamplingParam, measure: Measure) -> f64 {
    let (t1, t2, t3) = (t.t1 as f64, t.t2 as f64, t.t3 as f64);
    let k = t.k() as f64;
    let d2 = (k + 1.0) * (k + 2.0);
    match measure {
        Measure::Comparisons => {
            1.0 + (t2 + 1.0) / (k + 1.0) + (2.0 * t1 + t2 + 3.0) * (t3 + 1.0) / d2
        }
        Measure::Swaps => (t1 + 1.0) / (k + 1.0) + (t1 + t2 + 2.0) * (t3 + 1.0) / d2,
        Measure::Bytecodes => {
            10.0 + 13.0 * (t1 + 1.0) / (k + 1.0)
                + 5.0 * (t2 + 1.0) / (k + 1.0)
                + 11.0 * (t1 + t2 + 2.0) * (t3 + 1.0) / d2
                + (t1 + 1.0) * (t1 + t2 + 3.0) / d2
        }
        Measure::Scanned => 1.0 + (t1 + 1.0) / (k + 1.0),
    }
}

/// Leading coefficient `a_X(t)` of one measure, exactly.
fn coefficient(t: &SamplingParam, measure: Measure) -> Rational {
    let (t1, t2, t3) = (t.t1 as u64, t.t2 as u64, t.t3 as u64);
    let k = t.k() as u64;
    match measure {
        Measure::Comparisons => {
            Rational::one()
                + frac::<Rational>(t2 + 1, k + 1)
                + frac::<Rational>((2 * t1 + t2 + 3) * (t3 + 1), (k + 1) * (k + 2))
        }
        Measure::Swaps => {
            frac::<Rational>(t1 + 1, k + 1)
                + frac::<Rational>((t1 + t2 + 2) * (t3 + 1), (k + 1) * (k + 2))
        }
        Measure::Bytecodes => {
            frac::<Rational>(10, 1)
                + frac::<Rational>(13 * (t1 + 1), k + 1)
                + frac::<Rational>(5 * (t2 + 1), k + 1)
                + frac::<Rational>(11 * (t1 + t2 + 2) * (t3 + 1), (k + 1) * (k + 2))
                + frac::<Rational>((t1 + 1) * (t1 + t2 + 3), (k + 1) * (k + 2))
        }
        Measure::Scanned => Rational::one() + frac::<Rational>(t1 + 1, k + 1),
    }
}

/// Closed form of the optimal swap objective for sample size `k`:
/// `q_S* = 2 k (k+1) / ((2 k H_k - 1) (k+2))`, attained at `t = (0, k-2, 0)`.
pub fn swap_optimum_value(k: usize) -> Result<Rational, TheoryError> {
    if k < 2 {
        return Err(TheoryError::Domain("sample size k must be at least 2"));
    }
    let k = k as u64;
    let numer: Rational = frac(2 * k * (k + 1), k + 2);
    let denom = frac::<Rational>(2 * k, 1) * harmonic::<Rational>(k) - Rational::one();
    Ok(numer / denom)
}

/// Continuous optimum of one measure over the open simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousOptimum {
    pub measure: Measure,
    pub tau: [f64; 3],
    /// Minimal objective `a* / H`; for swaps the infimum 0 of the
    /// coefficient itself, attained on the boundary.
    pub value: f64,
    pub all_optima: Vec<[f64; 3]>,
    /// Set when the optimum lies on the simplex boundary (swaps), where the
    /// entropy vanishes and the ratio is not defined.
    pub boundary: bool,
}

fn continuous_objective(tau: [f64; 3], measure: Measure) -> f64 {
    let Ok(t) = Tau::new(tau) else {
        return f64::INFINITY;
    };
    let c = continuous_coefficients(&t);
    match measure {
        Measure::Comparisons => c.q_c,
        Measure::Swaps => c.q_s,
        Measure::Bytecodes => c.q_bc,
        Measure::Scanned => c.q_se,
    }
}

/// Numerical minimization over the continuous simplex: 1/200 grid, then
/// coordinate refinement halving the step until it drops below `tol`.
///
/// For swaps the minimum is not attained inside the open simplex: the swap
/// coefficient drops to zero toward `(0, 1, 0)` and `(0, 0, 1)`, so these
/// boundary optima are reported directly.
pub fn optimal_tau(measure: Measure, tol: f64) -> Result<ContinuousOptimum, TheoryError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(TheoryError::Domain("tolerance must be positive"));
    }
    if measure == Measure::Swaps {
        return Ok(ContinuousOptimum {
            measure,
            tau: [0.0, 0.0, 1.0],
            value: 0.0,
            all_optima: vec![[0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
            boundary: true,
        });
    }

    const GRID: usize = 200;
    let mut best = f64::INFINITY;
    let mut best_tau = [1.0 / 3.0; 3];
    for i in 0..=GRID {
        for j in 0..=GRID - i {
            let tau = [
                i as f64 / GRID as f64,
                j as f64 / GRID as f64,
                (GRID - i - j) as f64 / GRID as f64,
            ];
            let v = continuous_objective(tau, measure);
            if v < best {
                best = v;
                best_tau = tau;
            }
        }
    }

    const DIRS: [[f64; 3]; 6] = [
        [1.0, -1.0, 0.0],
        [1.0, 0.0, -1.0],
        [0.0, 1.0, -1.0],
        [-1.0, 1.0, 0.0],
        [-1.0, 0.0, 1.0],
        [0.0, -1.0, 1.0],
    ];
    let mut h = 1.0 / GRID as f64;
    while h > tol {
        let mut improved = false;
        for d in DIRS {
            let mut cand = [0.0; 3];
            for i in 0..3 {
                cand[i] = (best_tau[i] + h * d[i]).max(0.0);
            }
            let sum: f64 = cand.iter().sum();
            for c in &mut cand {
                *c /= sum;
            }
            let v = continuous_objective(cand, measure);
            if v < best {
                best = v;
                best_tau = cand;
                improved = true;
            }
        }
        if !improved {
            h /= 2.0;
        }
    }

    Ok(ContinuousOptimum {
        measure,
        tau: best_tau,
        value: best,
        all_optima: vec![best_tau],
        boundary: false,
    })
}

/// The scanned-elements rule of thumb `t1 = floor(q^2 (k-2))`,
/// `t2 = ceil(q (k-2))`, `t3 = k - 2 - t1 - t2` with `q = sqrt(2) - 1`,
/// together with whether it (or its `t2 <-> t3` mirror) is exactly optimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScansHeuristic {
    pub t: SamplingParam,
    pub matches_optimum: bool,
    pub mirror_matches_optimum: bool,
}

pub fn scans_rule_of_thumb(k: usize) -> Result<ScansHeuristic, TheoryError> {
    if k < 2 {
        return Err(TheoryError::Domain("sample size k must be at least 2"));
    }
    let q = std::f64::consts::SQRT_2 - 1.0;
    let m = (k - 2) as f64;
    let t1 = (q * q * m).floor() as usize;
    let t2 = (q * m).ceil() as usize;
    let t = SamplingParam::new(t1, t2, k - 2 - t1 - t2);
    let opt = optimal_t(k, Measure::Scanned)?;
    Ok(ScansHeuristic {
        t,
        matches_optimum: opt.all_optima.contains(&t),
        mirror_matches_optimum: opt.all_optima.contains(&t.mirror()),
    })
}
