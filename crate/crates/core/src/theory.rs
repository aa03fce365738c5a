//! Closed-form cost analysis.
//!
//! Leading-term coefficients and discrete entropy for both sorters,
//! exact per-partition expectations, subproblem-size distributions, and the
//! Beta/Dirichlet/multinomial identities they are built from. Everything
//! with a closed form is generic over [`Scalar`], so the exact-rational and
//! floating-point paths share one implementation; floating conversion
//! happens only at the boundary.

use crate::metering::BytecodeWeights;
use crate::params::{CqsSamplingParam, SamplingParam};
use crate::scalar::{binomial, frac, num, rising, Scalar};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryError {
    Domain(&'static str),
}

impl fmt::Display for TheoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryError::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl std::error::Error for TheoryError {}

/// `n`-th harmonic number, `H_0 = 0`.
pub fn harmonic<T: Scalar>(n: u64) -> T {
    let mut h = T::zero();
    for i in 1..=n {
        h = h + frac(1, i);
    }
    h
}

/// `H_0 ..= H_n` in one pass.
pub fn harmonic_table<T: Scalar>(n: u64) -> Vec<T> {
    let mut table = Vec::with_capacity(n as usize + 1);
    let mut h = T::zero();
    table.push(h.clone());
    for i in 1..=n {
        h = h + frac(1, i);
        table.push(h.clone());
    }
    table
}

/// Discrete entropy `H(t) = sum_r (t_r+1)/(k+1) * (H_{k+1} - H_{t_r+1})` of a
/// dual-pivot sampling parameter.
pub fn discrete_entropy<T: Scalar>(t: &SamplingParam) -> T {
    let k = t.k() as u64;
    let h = harmonic_table::<T>(k + 1);
    discrete_entropy_with(&t.as_array().map(|x| x as u64), k, &h)
}

/// Same, for the two-part single-pivot parameter.
pub fn cqs_discrete_entropy<T: Scalar>(t: &CqsSamplingParam) -> T {
    let k = t.k() as u64;
    let h = harmonic_table::<T>(k + 1);
    discrete_entropy_with(&t.as_array().map(|x| x as u64), k, &h)
}

fn discrete_entropy_with<T: Scalar>(t: &[u64], k: u64, h: &[T]) -> T {
    let mut e = T::zero();
    for &tr in t {
        let w: T = frac(tr + 1, k + 1);
        e = e + w * (h[(k + 1) as usize].clone() - h[(tr + 1) as usize].clone());
    }
    e
}

/// Leading-term coefficients of one sampling parameter: total cost for
/// measure `X` is asymptotically `(a_X / H) * n ln n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSet<T> {
    pub h: T,
    pub a_c: T,
    pub a_s: T,
    pub a_bc: T,
    pub a_se: T,
    pub q_c: T,
    pub q_s: T,
    pub q_bc: T,
    pub q_se: T,
}

/// Coefficients of dual-pivot quicksort with sampling parameter `t`.
pub fn yqs_coefficients<T: Scalar>(t: &SamplingParam) -> CoeffSet<T> {
    let (t1, t2, t3) = (t.t1 as u64, t.t2 as u64, t.t3 as u64);
    let k = t.k() as u64;
    let h = discrete_entropy::<T>(t);
    let a_c = T::one()
        + frac::<T>(t2 + 1, k + 1)
        + frac::<T>((2 * t1 + t2 + 3) * (t3 + 1), (k + 1) * (k + 2));
    let a_s = frac::<T>(t1 + 1, k + 1) + frac::<T>((t1 + t2 + 2) * (t3 + 1), (k + 1) * (k + 2));
    let a_se = T::one() + frac::<T>(t1 + 1, k + 1);
    let a_bc = num::<T>(10)
        + frac::<T>(13 * (t1 + 1), k + 1)
        + frac::<T>(5 * (t2 + 1), k + 1)
        + frac::<T>(11 * (t1 + t2 + 2) * (t3 + 1), (k + 1) * (k + 2))
        + frac::<T>((t1 + 1) * (t1 + t2 + 3), (k + 1) * (k + 2));
    CoeffSet {
        q_c: a_c.clone() / h.clone(),
        q_s: a_s.clone() / h.clone(),
        q_bc: a_bc.clone() / h.clone(),
        q_se: a_se.clone() / h.clone(),
        h,
        a_c,
        a_s,
        a_bc,
        a_se,
    }
}

/// Coefficients of classic quicksort with sampling parameter `t`. Scanned
/// elements and comparisons coincide, hence `a_C = a_SE = 1`; the bytecode
/// model is `6 a_C + 18 a_S`.
pub fn cqs_coefficients<T: Scalar>(t: &CqsSamplingParam) -> CoeffSet<T> {
    let (t1, t2) = (t.t1 as u64, t.t2 as u64);
    let k = t.k() as u64;
    let h = cqs_discrete_entropy::<T>(t);
    let a_c = T::one();
    let a_s = frac::<T>((t1 + 1) * (t2 + 1), (k + 1) * (k + 2));
    let a_bc = num::<T>(6) * a_c.clone() + num::<T>(18) * a_s.clone();
    let a_se = T::one();
    CoeffSet {
        q_c: a_c.clone() / h.clone(),
        q_s: a_s.clone() / h.clone(),
        q_bc: a_bc.clone() / h.clone(),
        q_se: a_se.clone() / h.clone(),
        h,
        a_c,
        a_s,
        a_bc,
        a_se,
    }
}

/// `ratio * n * ln(n)`, or `ratio * n * ln(n / truncation)` when the
/// recursion tree is truncated at subproblem size `truncation`.
pub fn leading_term(ratio: f64, n: f64, truncation: Option<f64>) -> Result<f64, TheoryError> {
    match truncation {
        None => Ok(ratio * n * n.ln()),
        Some(c) => {
            if !(1.0..).contains(&c) || n <= c {
                return Err(TheoryError::Domain("requires n > truncation >= 1"));
            }
            Ok(ratio * n * (n / c).ln())
        }
    }
}

/// Exact expectations of the observables of the first partitioning step of a
/// subrange of `n >= k` elements.
///
/// At `n = k` there are no ordinary elements and the partitioning loop never
/// runs, so every observable is 0 (the generic formulas below assume at
/// least one ordinary element).
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionExpectation<T> {
    /// `E[I_j] = (t_j+1)/(k+1) * (n-k)`.
    pub e_i: [T; 3],
    /// `E[delta] = (t3+1)/(k+1)`.
    pub e_delta: T,
    /// `E[HypG(I1+I2, I3, n-k)] = (t1+t2+2)(t3+1)/((k+1)(k+2)) * (n-k-1)`:
    /// the expected number of pair swaps.
    pub e_pair_swaps: T,
    /// `E[HypG(I3, I1, n-k)] = (t1+1)(t3+1)/((k+1)(k+2)) * (n-k-1)`:
    /// the expected number of small elements in `g`'s range.
    pub e_small_at_g: T,
    /// `E[s@K'] = (t1+1)(t1+t2+3)/((k+1)(k+2)) * (n-k-1) + (t1+1)/(k+1)`:
    /// the expected number of small elements among the first `I1+I2`
    /// positions of `k`'s range.
    pub e_small_at_kprime: T,
    pub e_comparisons: T,
    pub e_swaps: T,
    pub e_scanned: T,
    pub e_bytecode: T,
}

pub fn partition_expectations<T: Scalar>(
    t: &SamplingParam,
    n: u64,
) -> Result<PartitionExpectation<T>, TheoryError> {
    partition_expectations_weighted(t, n, &BytecodeWeights::default())
}

pub fn partition_expectations_weighted<T: Scalar>(
    t: &SamplingParam,
    n: u64,
    weights: &BytecodeWeights,
) -> Result<PartitionExpectation<T>, TheoryError> {
    let (t1, t2, t3) = (t.t1 as u64, t.t2 as u64, t.t3 as u64);
    let k = t.k() as u64;
    if n < k {
        return Err(TheoryError::Domain("partition expectations need n >= k"));
    }
    let zero = T::zero();
    let (e_i, e_delta, e_pair_swaps, e_small_at_g, e_small_at_kprime);
    if n == k {
        e_i = [zero.clone(), zero.clone(), zero.clone()];
        e_delta = zero.clone();
        e_pair_swaps = zero.clone();
        e_small_at_g = zero.clone();
        e_small_at_kprime = zero.clone();
    } else {
        let ordinary = n - k;
        let hyp_len = num::<T>(ordinary - 1);
        e_i = [t1, t2, t3].map(|tr| frac::<T>(tr + 1, k + 1) * num::<T>(ordinary));
        e_delta = frac(t3 + 1, k + 1);
        e_pair_swaps = frac::<T>((t1 + t2 + 2) * (t3 + 1), (k + 1) * (k + 2)) * hyp_len.clone();
        e_small_at_g = frac::<T>((t1 + 1) * (t3 + 1), (k + 1) * (k + 2)) * hyp_len.clone();
        e_small_at_kprime =
            frac::<T>((t1 + 1) * (t1 + t2 + 3), (k + 1) * (k + 2)) * hyp_len + frac(t1 + 1, k + 1);
    }
    let ord = num::<T>(n - k);
    let e_comparisons = ord.clone()
        + e_i[1].clone()
        + e_pair_swaps.clone()
        + e_small_at_g.clone()
        + num::<T>(3) * e_delta.clone();
    let e_swaps = e_i[0].clone() + e_pair_swaps.clone() + e_delta.clone();
    let e_scanned = ord + e_i[0].clone() + e_delta.clone();
    let w = |x: i64| -> T {
        if x >= 0 {
            num(x as u64)
        } else {
            T::zero() - num((-x) as u64)
        }
    };
    let e_bytecode = w(weights.w_n) * num::<T>(n)
        + w(weights.w_i1) * e_i[0].clone()
        + w(weights.w_i2) * e_i[1].clone()
        + w(weights.w_x) * e_pair_swaps.clone()
        + w(weights.w_y) * e_small_at_kprime.clone()
        + w(weights.w_const);
    Ok(PartitionExpectation {
        e_i,
        e_delta,
        e_pair_swaps,
        e_small_at_g,
        e_small_at_kprime,
        e_comparisons,
        e_swaps,
        e_scanned,
        e_bytecode,
    })
}

/// Distribution of the size `J_r` of the `r`-th subproblem (`r` in `1..=3`)
/// after the first partitioning step of `n >= k` elements:
/// `P(J_r = j)` for `j = t_r ..= n-k+t_r`, as a dense vector starting at
/// `j = t_r`. Sums to one exactly in rational arithmetic.
pub fn subproblem_pmf<T: Scalar>(
    r: usize,
    n: u64,
    t: &SamplingParam,
) -> Result<Vec<T>, TheoryError> {
    if !(1..=3).contains(&r) {
        return Err(TheoryError::Domain("subproblem index r must be 1, 2 or 3"));
    }
    let k = t.k() as u64;
    if n < k {
        return Err(TheoryError::Domain("subproblem pmf needs n >= k"));
    }
    let tr = t.as_array()[r - 1] as u64;
    let ord = n - k;
    let denom = rising::<T>(num(k + 1), ord);
    let mut pmf = Vec::with_capacity(ord as usize + 1);
    for i in 0..=ord {
        let p =
            binomial::<T>(ord, i) * rising::<T>(num(tr + 1), i) * rising::<T>(num(k - tr), ord - i)
                / denom.clone();
        pmf.push(p);
    }
    Ok(pmf)
}

/// `d`-dimensional Beta function with positive integer arguments, exactly:
/// `B(a) = prod Gamma(a_i) / Gamma(sum a_i)`.
pub fn beta_exact<T: Scalar>(alphas: &[u64]) -> Result<T, TheoryError> {
    if alphas.is_empty() || alphas.contains(&0) {
        return Err(TheoryError::Domain(
            "beta function needs positive arguments",
        ));
    }
    // B(a) = prod (a_i - 1)! / (A - 1)!
    let total: u64 = alphas.iter().sum();
    let mut numer = T::one();
    for &a in alphas {
        numer = numer * factorial::<T>(a - 1);
    }
    Ok(numer / factorial::<T>(total - 1))
}

fn factorial<T: Scalar>(n: u64) -> T {
    let mut acc = T::one();
    for i in 2..=n {
        acc = acc * num::<T>(i);
    }
    acc
}

/// `d`-dimensional Beta function for positive real arguments. Integer
/// arguments below 171 use exact factorials; everything else goes through
/// the log-Gamma function.
pub fn beta(alphas: &[f64]) -> Result<f64, TheoryError> {
    if alphas.is_empty() || alphas.iter().any(|&a| !a.is_finite() || a <= 0.0) {
        return Err(TheoryError::Domain(
            "beta function needs positive arguments",
        ));
    }
    let all_small_ints = alphas
        .iter()
        .all(|&a| a.fract() == 0.0 && a < 171.0 && alphas.iter().sum::<f64>() < 171.0);
    if all_small_ints {
        return beta_exact::<f64>(&alphas.iter().map(|&a| a as u64).collect::<Vec<_>>());
    }
    let total: f64 = alphas.iter().sum();
    let ln_b = alphas.iter().map(|&a| ln_gamma(a)).sum::<f64>() - ln_gamma(total);
    Ok(ln_b.exp())
}

/// Log-Gamma via the Lanczos approximation (g = 7, 9 coefficients), accurate
/// to ~1e-13 for positive arguments.
pub fn ln_gamma(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Two-dimensional Beta integral with a logarithmic factor,
/// `B_ln(a1, a2) = -Integral x^(a1-1) (1-x)^(a2-1) ln x dx`
/// `= B(a1, a2) (H_{a1+a2-1} - H_{a1-1})`, for integer `a1, a2 >= 1`.
pub fn beta_ln_exact<T: Scalar>(a1: u64, a2: u64) -> Result<T, TheoryError> {
    if a1 == 0 || a2 == 0 {
        return Err(TheoryError::Domain("beta_ln needs a1, a2 >= 1"));
    }
    let b = beta_exact::<T>(&[a1, a2])?;
    Ok(b * (harmonic::<T>(a1 + a2 - 1) - harmonic::<T>(a1 - 1)))
}

/// Mixed moments of a Dirichlet vector:
/// `E[prod X_i^(m_i)] = prod rising(alpha_i, m_i) / rising(A, M)`.
pub fn dirichlet_mixed_moment<T: Scalar>(alphas: &[T], ms: &[u64]) -> Result<T, TheoryError> {
    if alphas.len() != ms.len() || alphas.is_empty() {
        return Err(TheoryError::Domain("dimension mismatch"));
    }
    if alphas
        .iter()
        .any(|a| a.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater))
    {
        return Err(TheoryError::Domain("dirichlet parameters must be positive"));
    }
    let mut numer = T::one();
    for (a, &m) in alphas.iter().zip(ms) {
        numer = numer * rising(a.clone(), m);
    }
    let mut total = T::zero();
    for a in alphas {
        total = total + a.clone();
    }
    let m_sum: u64 = ms.iter().sum();
    Ok(numer / rising(total, m_sum))
}

/// Mixed factorial moments of a multinomial vector:
/// `E[prod falling(X_i, m_i)] = falling(n, M) * prod p_i^(m_i)`.
pub fn multinomial_factorial_moment<T: Scalar>(
    n: u64,
    ps: &[T],
    ms: &[u64],
) -> Result<T, TheoryError> {
    if ps.len() != ms.len() || ps.is_empty() {
        return Err(TheoryError::Domain("dimension mismatch"));
    }
    let mut total = T::zero();
    for p in ps {
        total = total + p.clone();
    }
    let eps: T = T::from_f64(1e-9).unwrap_or_else(T::zero);
    if total.clone() - T::one() > eps || T::one() - total > eps {
        return Err(TheoryError::Domain("probabilities must sum to 1"));
    }
    let mut acc = crate::scalar::falling(num::<T>(n), ms.iter().sum());
    for (p, &m) in ps.iter().zip(ms) {
        for _ in 0..m {
            acc = acc * p.clone();
        }
    }
    Ok(acc)
}

/// The recursion's shape function
/// `w(z) = sum_r z^(t_r) (1-z)^(k-t_r-1) / B(t_r+1, k-t_r)`:
/// the sum of the three subproblem-relative-size densities.
pub fn shape_function(z: f64, t: &SamplingParam) -> f64 {
    let k = t.k() as u64;
    let mut w = 0.0;
    for tr in t.as_array() {
        let tr = tr as u64;
        let b = beta_exact::<f64>(&[tr + 1, k - tr]).expect("valid parameters");
        w += z.powi(tr as i32) * (1.0 - z).powi((k - tr - 1) as i32) / b;
    }
    w
}

/// The two moments of the shape function that drive the recursion solution:
/// `first_moment = Integral z w(z) dz` must be exactly 1, and
/// `log_moment = -Integral z ln(z) w(z) dz` must equal the discrete entropy.
/// Both reduce to closed Beta/Beta_ln forms, so no quadrature is involved.
#[derive(Debug, Clone, PartialEq)]
pub struct CmtCheck<T> {
    pub first_moment: T,
    pub log_moment: T,
}

pub fn cmt_verify<T: Scalar>(t: &SamplingParam) -> CmtCheck<T> {
    let k = t.k() as u64;
    let mut first = T::zero();
    let mut log = T::zero();
    for tr in t.as_array() {
        let tr = tr as u64;
        let b = beta_exact::<T>(&[tr + 1, k - tr]).expect("valid parameters");
        first = first + beta_exact::<T>(&[tr + 2, k - tr]).expect("valid parameters") / b.clone();
        log = log + beta_ln_exact::<T>(tr + 2, k - tr).expect("valid parameters") / b;
    }
    CmtCheck {
        first_moment: first,
        log_moment: log,
    }
}

/// Convenience form of [`cmt_verify`]: true when both moments sit within
/// `tol` of their targets (1 and the discrete entropy).
pub fn cmt_verify_within(t: &SamplingParam, tol: f64) -> bool {
    let c = cmt_verify::<f64>(t);
    (c.first_moment - 1.0).abs() <= tol && (c.log_moment - discrete_entropy::<f64>(t)).abs() <= tol
}

/// A point of the open probability simplex (continuous limit of `t/k`).
/// Components may be zero; the sum must be 1 within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau([f64; 3]);

impl Tau {
    pub fn new(tau: [f64; 3]) -> Result<Self, TheoryError> {
        if tau.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(TheoryError::Domain("tau components must lie in [0, 1]"));
        }
        if (tau.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(TheoryError::Domain("tau must sum to 1"));
        }
        Ok(Tau(tau))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

/// Shannon entropy `-sum tau_r ln tau_r` with the `0 ln 0 = 0` convention.
pub fn continuous_entropy(tau: &Tau) -> f64 {
    tau.0
        .iter()
        .map(|&x| if x > 0.0 { -x * x.ln() } else { 0.0 })
        .sum()
}

/// Limits of the leading-term coefficients as the sample grows with fixed
/// ratios `tau`. Ratios `q_*` are `a_* / H(tau)` and infinite on the
/// boundary where the entropy vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousCoeffs {
    pub h: f64,
    pub a_c: f64,
    pub a_s: f64,
    pub a_bc: f64,
    pub a_se: f64,
    pub q_c: f64,
    pub q_s: f64,
    pub q_bc: f64,
    pub q_se: f64,
}

pub fn continuous_coefficients(tau: &Tau) -> ContinuousCoeffs {
    let [t1, t2, t3] = tau.0;
    let h = continuous_entropy(tau);
    let a_c = 1.0 + t2 + (2.0 * t1 + t2) * t3;
    let a_s = t1 + (t1 + t2) * t3;
    let a_bc = 10.0 + 13.0 * t1 + 5.0 * t2 + (t1 + t2) * (t1 + 11.0 * t3);
    let a_se = 1.0 + t1;
    let ratio = |a: f64| if h > 0.0 { a / h } else { f64::INFINITY };
    ContinuousCoeffs {
        h,
        a_c,
        a_s,
        a_bc,
        a_se,
        q_c: ratio(a_c),
        q_s: ratio(a_s),
        q_bc: ratio(a_bc),
        q_se: ratio(a_se),
    }
}

/// Fit of the running-time mix `Q = (1-mu) * BC + mu * SE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuFit {
    pub mu: f64,
    /// Set when the exact solution fell outside `[0, 1]` and was clamped.
    pub clamped: bool,
    /// Set when any `mu` solves the equation; `mu` is then 0 by convention.
    pub underdetermined: bool,
}

/// Solves `((1-mu) bc_a + mu se_a) / ((1-mu) bc_b + mu se_b) = target_ratio`
/// for `mu`.
pub fn fit_mu(
    bc_a: f64,
    se_a: f64,
    bc_b: f64,
    se_b: f64,
    target_ratio: f64,
) -> Result<MuFit, TheoryError> {
    if [bc_a, se_a, bc_b, se_b]
        .iter()
        .any(|&x| !x.is_finite() || x <= 0.0)
    {
        return Err(TheoryError::Domain("cost pairs must be positive"));
    }
    if !target_ratio.is_finite() || target_ratio <= 0.0 {
        return Err(TheoryError::Domain("target ratio must be positive"));
    }
    let numer = target_ratio * bc_b - bc_a;
    let denom = (se_a - bc_a) - target_ratio * (se_b - bc_b);
    if denom == 0.0 {
        if numer == 0.0 {
            return Ok(MuFit {
                mu: 0.0,
                clamped: false,
                underdetermined: true,
            });
        }
        return Err(TheoryError::Domain("no solution: degenerate coefficients"));
    }
    let mu = numer / denom;
    let clamped = !(0.0..=1.0).contains(&mu);
    Ok(MuFit {
        mu: mu.clamp(0.0, 1.0),
        clamped,
        underdetermined: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::{One, ToPrimitive, Zero};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic::<Rational>(0), Rational::zero());
        assert_eq!(harmonic::<Rational>(1), Rational::one());
        assert_eq!(harmonic::<Rational>(6), rat(49, 20));
        let table = harmonic_table::<Rational>(6);
        assert_eq!(table[6], rat(49, 20));
        assert_eq!(table[0], Rational::zero());
    }

    #[test]
    fn entropy_values() {
        let t0 = SamplingParam::new(0, 0, 0);
        assert_eq!(discrete_entropy::<Rational>(&t0), rat(5, 6));
        let t1 = SamplingParam::new(1, 1, 1);
        assert_eq!(discrete_entropy::<Rational>(&t1), rat(19, 20));
        // symmetric in the components
        assert_eq!(
            discrete_entropy::<Rational>(&SamplingParam::new(0, 1, 2)),
            discrete_entropy::<Rational>(&SamplingParam::new(2, 1, 0))
        );
    }

    #[test]
    fn yqs_coefficient_ratios() {
        let c = yqs_coefficients::<Rational>(&SamplingParam::new(0, 0, 0));
        assert_eq!(c.q_c, rat(19, 10));
        assert_eq!(c.q_s, rat(3, 5));
        assert_eq!(c.q_bc, rat(217, 10));
        assert_eq!(c.q_se, rat(8, 5));

        let c = yqs_coefficients::<Rational>(&SamplingParam::new(1, 1, 1));
        assert_eq!(c.q_c, rat(680, 399));
        assert!((c.q_c.to_f64().unwrap() - 1.70426).abs() < 5e-6);
        assert_eq!(c.q_se, rat(80, 57));

        let c = yqs_coefficients::<f64>(&SamplingParam::new(0, 1, 2));
        assert!((c.q_se - 1.34615).abs() < 5e-6);
        assert!((c.q_bc - 18.7912).abs() < 5e-5);
    }

    #[test]
    fn cqs_coefficient_ratios() {
        let c = cqs_coefficients::<Rational>(&CqsSamplingParam::new(0, 0));
        assert_eq!(c.q_c, rat(2, 1));
        assert_eq!(c.q_s, rat(1, 3));
        assert_eq!(c.q_bc, rat(18, 1));
        assert_eq!(c.q_se, rat(2, 1));

        let c = cqs_coefficients::<f64>(&CqsSamplingParam::new(2, 2));
        assert!((c.q_c - 1.6216).abs() < 5e-5);

        let c = cqs_coefficients::<Rational>(&CqsSamplingParam::new(1, 1));
        assert_eq!(c.q_c, rat(12, 7));
    }

    #[test]
    fn leading_term_forms() {
        let e = std::f64::consts::E;
        assert!((leading_term(1.6, e, None).unwrap() - 1.6 * e).abs() < 1e-12);
        let n = 1000.0;
        assert!((leading_term(2.0, n, Some(n / e)).unwrap() - 2.0 * n).abs() < 1e-9);
        assert!(leading_term(1.0, 10.0, Some(10.0)).is_err());
        assert!(leading_term(1.0, 10.0, Some(0.5)).is_err());
    }

    #[test]
    fn partition_expectation_values() {
        let t0 = SamplingParam::new(0, 0, 0);
        let e = partition_expectations::<Rational>(&t0, 3).unwrap();
        assert_eq!(e.e_comparisons, rat(7, 3));
        assert_eq!(e.e_scanned, rat(5, 3));
        assert_eq!(e.e_swaps, rat(2, 3));
        // 10*3 + 13/3 + 5/3 + 11*0 + E[s@K'] with E[s@K'] = 1/3
        assert_eq!(e.e_bytecode, rat(109, 3));

        let t = SamplingParam::new(1, 1, 1);
        let e = partition_expectations::<Rational>(&t, 20).unwrap();
        assert_eq!(e.e_i[0], rat(5, 1));

        let t = SamplingParam::new(0, 0, 4);
        let e = partition_expectations::<Rational>(&t, 100).unwrap();
        assert_eq!(e.e_delta, rat(5, 7));

        // degenerate n = k
        let e = partition_expectations::<Rational>(&t0, 2).unwrap();
        assert_eq!(e.e_comparisons, Rational::zero());
        assert_eq!(e.e_scanned, Rational::zero());
        assert_eq!(e.e_bytecode, rat(20, 1)); // w_n * n'

        assert!(partition_expectations::<Rational>(&t, 3).is_err());
    }

    #[test]
    fn subproblem_pmf_values() {
        let t0 = SamplingParam::new(0, 0, 0);
        let pmf = subproblem_pmf::<Rational>(1, 4, &t0).unwrap();
        assert_eq!(pmf, vec![rat(1, 2), rat(1, 3), rat(1, 6)]);

        // normalization for a skewed parameter
        let t = SamplingParam::new(2, 0, 1);
        for r in 1..=3 {
            let pmf = subproblem_pmf::<Rational>(r, 12, &t).unwrap();
            let sum: Rational = pmf.iter().cloned().fold(Rational::zero(), |a, b| a + b);
            assert_eq!(sum, Rational::one());
        }

        // n = k: point mass at j = t_r
        let t = SamplingParam::new(1, 1, 1);
        let pmf = subproblem_pmf::<Rational>(2, 5, &t).unwrap();
        assert_eq!(pmf, vec![Rational::one()]);

        assert!(subproblem_pmf::<Rational>(0, 10, &t0).is_err());
        assert!(subproblem_pmf::<Rational>(4, 10, &t0).is_err());
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta_exact::<Rational>(&[1, 1]).unwrap(), Rational::one());
        assert_eq!(beta_exact::<Rational>(&[2, 3]).unwrap(), rat(1, 12));
        assert_eq!(beta_exact::<Rational>(&[1, 1, 1]).unwrap(), rat(1, 2));
        assert!(beta_exact::<Rational>(&[0, 1]).is_err());

        assert!((beta(&[2.0, 3.0]).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        assert!((beta(&[0.5, 0.5]).unwrap() - std::f64::consts::PI).abs() < 1e-10);
        assert!(beta(&[-1.0, 2.0]).is_err());
    }

    #[test]
    fn ln_gamma_accuracy() {
        assert!((ln_gamma(1.0)).abs() < 1e-12);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-12);
    }

    #[test]
    fn beta_ln_values() {
        assert_eq!(beta_ln_exact::<Rational>(1, 1).unwrap(), Rational::one());
        assert_eq!(beta_ln_exact::<Rational>(1, 2).unwrap(), rat(3, 4));
        assert_eq!(beta_ln_exact::<Rational>(2, 1).unwrap(), rat(1, 4));
        assert!(beta_ln_exact::<Rational>(0, 1).is_err());
    }

    /// Adaptive Simpson quadrature of -x^(a1-1) (1-x)^(a2-1) ln x, the
    /// independent route for beta_ln.
    fn beta_ln_quadrature(a1: u64, a2: u64) -> f64 {
        fn f(x: f64, a1: f64, a2: f64) -> f64 {
            -x.powf(a1 - 1.0) * (1.0 - x).powf(a2 - 1.0) * x.ln()
        }
        fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
            (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        }
        #[allow(clippy::too_many_arguments)]
        fn adapt(
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            eps: f64,
            depth: u32,
            a1: f64,
            a2: f64,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm, a1, a2);
            let frm = f(rm, a1, a2);
            let left = simpson(a, m, fa, flm, fm);
            let right = simpson(m, b, fm, frm, fb);
            if depth == 0 || (left + right - whole).abs() < 15.0 * eps {
                left + right + (left + right - whole) / 15.0
            } else {
                adapt(a, m, fa, flm, fm, left, eps / 2.0, depth - 1, a1, a2)
                    + adapt(m, b, fm, frm, fb, right, eps / 2.0, depth - 1, a1, a2)
            }
        }
        let (a1, a2) = (a1 as f64, a2 as f64);
        // x ln x -> 0 at 0; start a hair inside to dodge the singular endpoint.
        let (a, b) = (1e-12, 1.0 - 1e-12);
        let m = 0.5 * (a + b);
        adapt(
            a,
            b,
            f(a, a1, a2),
            f(m, a1, a2),
            f(b, a1, a2),
            simpson(a, b, f(a, a1, a2), f(m, a1, a2), f(b, a1, a2)),
            1e-13,
            48,
            a1,
            a2,
        )
    }

    #[test]
    fn beta_ln_matches_quadrature() {
        for (a1, a2) in [(1, 1), (1, 2), (2, 1), (2, 3), (3, 4), (5, 2)] {
            let exact = beta_ln_exact::<f64>(a1, a2).unwrap();
            let quad = beta_ln_quadrature(a1, a2);
            assert!(
                (exact - quad).abs() < 1e-10,
                "beta_ln({a1},{a2}): closed form {exact} vs quadrature {quad}"
            );
        }
    }

    #[test]
    fn dirichlet_moments() {
        let one = Rational::one;
        assert_eq!(
            dirichlet_mixed_moment::<Rational>(&[one(), one()], &[1, 0]).unwrap(),
            rat(1, 2)
        );
        assert_eq!(
            dirichlet_mixed_moment::<Rational>(&[one(), one(), one()], &[1, 1, 1]).unwrap(),
            rat(1, 60)
        );
        assert_eq!(
            dirichlet_mixed_moment::<Rational>(&[rat(2, 1), one()], &[2, 0]).unwrap(),
            rat(1, 2)
        );
        assert!(dirichlet_mixed_moment::<Rational>(&[one()], &[1, 2]).is_err());
    }

    #[test]
    fn multinomial_moments() {
        assert_eq!(
            multinomial_factorial_moment::<Rational>(3, &[rat(1, 2), rat(1, 2)], &[1, 1]).unwrap(),
            rat(3, 2)
        );
        assert_eq!(
            multinomial_factorial_moment::<Rational>(5, &[rat(1, 3), rat(2, 3)], &[0, 0]).unwrap(),
            Rational::one()
        );
        assert_eq!(
            multinomial_factorial_moment::<Rational>(2, &[rat(1, 3), rat(2, 3)], &[2, 0]).unwrap(),
            rat(2, 9)
        );
        assert!(
            multinomial_factorial_moment::<Rational>(2, &[rat(1, 3), rat(1, 3)], &[1, 0]).is_err()
        );
    }

    #[test]
    fn shape_function_examples() {
        let t0 = SamplingParam::new(0, 0, 0);
        // w(z) = 6 (1-z) for t = 0
        for z in [0.0, 0.25, 0.5, 0.9] {
            assert!((shape_function(z, &t0) - 6.0 * (1.0 - z)).abs() < 1e-12);
        }
        // non-negative, integrates to 3 (sum of three densities): spot-check
        // by midpoint rule
        let t = SamplingParam::new(2, 0, 3);
        let m = 20_000;
        let integral: f64 = (0..m)
            .map(|i| shape_function((i as f64 + 0.5) / m as f64, &t) / m as f64)
            .sum();
        assert!((integral - 3.0).abs() < 1e-6);
        for i in 0..=100 {
            assert!(shape_function(i as f64 / 100.0, &t) >= 0.0);
        }
    }

    #[test]
    fn cmt_moments_are_exact() {
        let t0 = SamplingParam::new(0, 0, 0);
        let c = cmt_verify::<Rational>(&t0);
        assert_eq!(c.first_moment, Rational::one());
        assert_eq!(c.log_moment, rat(5, 6));

        let t = SamplingParam::new(1, 1, 1);
        let c = cmt_verify::<Rational>(&t);
        assert_eq!(c.first_moment, Rational::one());
        assert_eq!(c.log_moment, rat(19, 20));
        assert_eq!(c.log_moment, discrete_entropy::<Rational>(&t));

        assert!(cmt_verify_within(&SamplingParam::new(3, 0, 2), 1e-12));
    }

    #[test]
    fn continuous_limits() {
        let third = Tau::new([1.0 / 3.0; 3]).unwrap();
        assert!((continuous_entropy(&third) - 3f64.ln()).abs() < 1e-12);

        let c = continuous_coefficients(&Tau::new([0.428846, 0.268774, 0.302380]).unwrap());
        assert!((c.q_c - 1.4931).abs() < 1e-4);

        let boundary = Tau::new([0.0, 1.0, 0.0]).unwrap();
        let c = continuous_coefficients(&boundary);
        assert_eq!(c.a_s, 0.0);
        assert_eq!(continuous_entropy(&boundary), 0.0);

        assert!(Tau::new([0.5, 0.6, -0.1]).is_err());
        assert!(Tau::new([0.5, 0.4, 0.2]).is_err());
    }

    #[test]
    fn mu_fit() {
        let fit = fit_mu(18.0, 2.0, 21.7, 1.6, 1.1).unwrap();
        assert!(!fit.clamped && !fit.underdetermined);
        assert!((fit.mu - 0.9607).abs() < 1e-4);

        let degenerate = fit_mu(5.0, 5.0, 5.0, 5.0, 1.0).unwrap();
        assert!(degenerate.underdetermined);
        assert_eq!(degenerate.mu, 0.0);

        assert!(fit_mu(5.0, 5.0, 5.0, 5.0, 2.0).is_err());
        assert!(fit_mu(-1.0, 2.0, 3.0, 4.0, 1.0).is_err());
    }

    #[test]
    fn mu_fit_with_n_dependent_costs() {
        // exact no-sampling scan expressions plus leading-term bytecodes,
        // solved at n = 10^6 for a 10% running-time ratio
        let n = 1e6f64;
        let l = n * n.ln();
        let se_cqs = 2.0 * l - 2.3045 * n;
        let se_yqs = 1.6 * l - 2.2425 * n;
        let bc_cqs = 18.0 * l;
        let bc_yqs = 21.7 * l;
        let fit = fit_mu(bc_cqs, se_cqs, bc_yqs, se_yqs, 1.1).unwrap();
        assert!(
            (0.93..=0.96).contains(&fit.mu),
            "mu = {} outside [0.93, 0.96]",
            fit.mu
        );
    }

    #[test]
    fn entropy_converges_to_ln3_monotonically() {
        // t = (lambda, lambda, lambda): |H - ln 3| decreasing for lambda >= 1
        let ln3 = 3f64.ln();
        let mut prev = f64::INFINITY;
        for lambda in 1..=200 {
            let t = SamplingParam::new(lambda, lambda, lambda);
            let gap = (discrete_entropy::<f64>(&t) - ln3).abs();
            assert!(gap < prev, "entropy gap not decreasing at lambda={lambda}");
            prev = gap;
        }
        assert!(prev < 5e-3);
    }
}
