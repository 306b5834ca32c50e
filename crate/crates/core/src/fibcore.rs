//! Fibonacci numbers with the indexing `f_0 = f_1 = 1`, the classical
//! identities between them, and the golden ratio to arbitrary precision.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// Memoized Fibonacci numbers, grown on demand.
///
/// Readers take a shared lock; extension takes the write lock once and
/// fills every missing index up to the request.
#[derive(Debug)]
pub struct FibCache {
    values: RwLock<Vec<BigInt>>,
}

impl Default for FibCache {
    fn default() -> Self {
        Self::new()
    }
}

impl FibCache {
    pub fn new() -> Self {
        Self {
            values: RwLock::new(vec![BigInt::one(), BigInt::one()]),
        }
    }

    pub fn get(&self, n: usize) -> BigInt {
        {
            let values = self.values.read().expect("fib cache poisoned");
            if let Some(v) = values.get(n) {
                return v.clone();
            }
        }
        self.warm(n);
        self.values.read().expect("fib cache poisoned")[n].clone()
    }

    /// Extends the cache so that indices `0..=n` are present.
    pub fn warm(&self, n: usize) {
        let mut values = self.values.write().expect("fib cache poisoned");
        while values.len() <= n {
            let len = values.len();
            let next = &values[len - 1] + &values[len - 2];
            values.push(next);
        }
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("fib cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Process-wide cache used by every free function in the crate.
pub fn shared() -> &'static FibCache {
    static CACHE: OnceLock<FibCache> = OnceLock::new();
    CACHE.get_or_init(FibCache::new)
}

pub fn fib(n: usize) -> BigInt {
    shared().get(n)
}

pub(crate) fn fib_q(n: usize) -> Rational {
    rational::from_big(fib(n))
}

/// `f_{n+1} / f_n`.
pub fn fib_ratio(n: usize) -> Rational {
    Rational::new(fib(n + 1), fib(n))
}

/// `f_{n-1} f_{n+1} - f_n^2`, which equals `(-1)^{n+1}`.
///
/// Panics when `n == 0`.
pub fn cassini(n: usize) -> BigInt {
    assert!(n >= 1, "cassini is defined for n >= 1");
    fib(n - 1) * fib(n + 1) - fib(n) * fib(n)
}

/// `f_{n-1}^2 + f_n f_{n-1} - f_n^2`, which also equals `(-1)^{n+1}`.
///
/// Panics when `n == 0`.
pub fn cassini_variant(n: usize) -> BigInt {
    assert!(n >= 1, "cassini_variant is defined for n >= 1");
    let prev = fib(n - 1);
    let cur = fib(n);
    &prev * &prev + &cur * &prev - &cur * &cur
}

/// `(-1)^{n+1}` as an integer.
pub fn alternating_sign(n: usize) -> BigInt {
    if n % 2 == 1 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `sum_{k=0}^n f_k` by direct summation; equals `f_{n+2} - 1`.
pub fn fib_prefix_sum(n: usize) -> BigInt {
    let cache = shared();
    cache.warm(n + 2);
    let sum = (0..=n).fold(BigInt::zero(), |acc, k| acc + cache.get(k));
    debug_assert_eq!(sum, cache.get(n + 2) - 1);
    sum
}

/// Exact partial sum `sum_{k=0}^n 1/f_k`.
pub fn reciprocal_fib_partial(n: usize) -> Rational {
    (0..=n).fold(Rational::zero(), |acc, k| {
        acc + Rational::new(BigInt::one(), fib(k))
    })
}

/// The golden ratio `(1 + sqrt 5) / 2`, produced on demand from integer
/// square roots.
#[derive(Debug, Clone, Copy, Default)]
pub struct GoldenRatio;

impl GoldenRatio {
    /// Rational lower bound within `2^-bits` of phi:
    /// `(2^b + isqrt(5 * 4^b)) / 2^{b+1}`.
    pub fn to_rational(bits: u32) -> Rational {
        let scale = BigInt::one() << bits;
        let root = (BigInt::from(5) * &scale * &scale).sqrt();
        Rational::new(&scale + root, scale << 1)
    }

    /// `floor(phi * 10^digits)`, from `isqrt(5 * 10^{2 digits})`.
    pub fn scaled_decimal(digits: u32) -> BigInt {
        let scale = num_traits::pow(BigInt::from(10), digits as usize);
        let root = (BigInt::from(5) * &scale * &scale).sqrt();
        (scale + root) / 2
    }

    /// Float approximation accurate to `min(bits, 52)` bits.
    pub fn approx(precision_bits: u32) -> f64 {
        rational::to_f64(&Self::to_rational(precision_bits.max(1)))
    }
}
