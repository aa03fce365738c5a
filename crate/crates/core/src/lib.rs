//! A laboratory for dual-pivot quicksort with generalized pivot sampling.
//!
//! The crate has five parts:
//!
//! - [`sorters`] — instrumented implementations of Yaroslavskiy's dual-pivot
//!   quicksort with generalized pivot sampling (YQS) and a classic
//!   single-pivot quicksort with sampling (CQS),
//! - [`metering`] — the event sink that turns sorter runs into cost counters
//!   (comparisons, swaps, writes, scanned elements, a bytecode model) with a
//!   per-phase breakdown,
//! - [`cachesim`] — an idealized fully-associative LRU cache fed from the
//!   sorter's array traffic,
//! - [`theory`] — closed-form expectations: discrete entropy, leading-term
//!   coefficients, per-partition expectations, Beta/Dirichlet/multinomial
//!   identities,
//! - [`tuner`] — optimal sampling parameters, both for fixed sample size
//!   (exact enumeration) and in the continuous limit.
//!
//! Analytic code is generic over the scalar type through [`scalar::Scalar`]:
//! the same formulas run in exact rational arithmetic ([`Rational`]) for
//! oracle tests and in `f64` for reporting.

pub mod cachesim;
pub mod metering;
pub mod params;
pub mod scalar;
pub mod sorters;
pub mod theory;
pub mod tuner;

/// Exact rational scalar used wherever results must be bit-for-bit exact.
pub type Rational = num_rational::BigRational;

pub use params::{
    CallType, ConfigError, CqsSamplingParam, CqsSortConfig, SamplingParam, SortConfig,
};
