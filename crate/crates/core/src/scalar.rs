//! Scalar abstraction for the analysis formulas.
//!
//! Everything in [`crate::theory`] that has a closed form is written once,
//! generically, and instantiated both with [`crate::Rational`] (exact) and
//! with `f64` (reporting, optimization).

use num_traits::{FromPrimitive, Num};

pub trait Scalar: Num + FromPrimitive + Clone + PartialOrd {}

impl<T> Scalar for T where T: Num + FromPrimitive + Clone + PartialOrd {}

/// Shorthand for converting a small non-negative integer into `T`.
#[inline]
pub fn num<T: Scalar>(x: u64) -> T {
    T::from_u64(x).expect("integer not representable in scalar type")
}

/// `a / b` for integers, in `T`.
#[inline]
pub fn frac<T: Scalar>(a: u64, b: u64) -> T {
    num::<T>(a) / num::<T>(b)
}

/// Rising factorial `base * (base+1) * ... * (base+m-1)` with `T` base.
pub fn rising<T: Scalar>(base: T, m: u64) -> T {
    let mut acc = T::one();
    let mut f = base;
    for _ in 0..m {
        acc = acc * f.clone();
        f = f + T::one();
    }
    acc
}

/// Falling factorial `base * (base-1) * ... * (base-m+1)` with `T` base.
pub fn falling<T: Scalar>(base: T, m: u64) -> T {
    let mut acc = T::one();
    let mut f = base;
    for _ in 0..m {
        acc = acc * f.clone();
        f = f - T::one();
    }
    acc
}

/// Binomial coefficient `C(n, r)` computed multiplicatively in `T`.
pub fn binomial<T: Scalar>(n: u64, r: u64) -> T {
    if r > n {
        return T::zero();
    }
    let r = r.min(n - r);
    let mut acc = T::one();
    for i in 1..=r {
        acc = acc * num::<T>(n - r + i) / num::<T>(i);
    }
    acc
}
