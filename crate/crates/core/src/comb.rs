//! Factorials, binomials and multinomials over `BigInt`.
//!
//! The convention throughout the crate: a binomial or multinomial with a
//! negative or out-of-range lower index is 0. Every recursion in the genus-0
//! and genus-1 modules is transcribed against that convention.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rat::Rat;

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// `m! / (u! v! (m-u-v)!)`, zero when any slot is negative.
pub fn multinom3(m: i64, u: i64, v: i64) -> BigInt {
    if u < 0 || v < 0 || u + v > m || m < 0 {
        return BigInt::zero();
    }
    binom(m, u) * binom(m - u, v)
}

pub fn binom_rat(n: i64, k: i64) -> Rat {
    Rat::from_bigint(binom(n, k))
}

pub fn multinom3_rat(m: i64, u: i64, v: i64) -> Rat {
    Rat::from_bigint(multinom3(m, u, v))
}

pub fn factorial_rat(n: u64) -> Rat {
    Rat::from_bigint(factorial(n))
}
