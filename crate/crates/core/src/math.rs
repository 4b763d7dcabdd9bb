//! Base-2 logarithm helpers with exact integer rounding.
//!
//! Floors and ceilings of `log2` decide query counts, so they are computed by
//! comparing against exact powers of two rather than trusting the rounding of
//! `libm::log2` near integers.

/// `log2(x)`.
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// `2^k` for integer `k`, exact over the normal range.
pub fn pow2(k: i32) -> f64 {
    libm::ldexp(1.0, k)
}

/// `⌊log2 x⌋` for `x > 0`.
pub fn floor_log2(x: f64) -> i32 {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut k = libm::floor(libm::log2(x)) as i32;
    while pow2(k) > x {
        k -= 1;
    }
    while pow2(k + 1) <= x {
        k += 1;
    }
    k
}

/// `⌈log2 x⌉` for `x > 0`.
pub fn ceil_log2(x: f64) -> i32 {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut k = libm::ceil(libm::log2(x)) as i32;
    while pow2(k) < x {
        k += 1;
    }
    while k > i32::MIN && pow2(k - 1) >= x {
        k -= 1;
    }
    k
}

/// Smallest `k ≥ 0` with `width · 2^{-k} ≤ target`.
///
/// Multiplying by a power of two is exact, so the count only depends on the
/// two inputs, never on how an interval of that width was reached.
pub fn halvings_to(width: f64, target: f64) -> u32 {
    let mut k = 0u32;
    while width * pow2(-(k as i32)) > target {
        k += 1;
    }
    k
}

/// `log2(e)`.
pub const LOG2_E: f64 = core::f64::consts::LOG2_E;
