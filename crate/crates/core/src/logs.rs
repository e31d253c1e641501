//! Clamped integer logarithms. Every log factor used by the drawers is
//! evaluated as `max(1, ceil(log2 x))` so tiny inputs stay well defined.

/// `ceil(log2 x)` for `x >= 1` (0 for `x == 1`).
pub fn ceil_log2(x: usize) -> u32 {
    assert!(x >= 1);
    usize::BITS - (x - 1).leading_zeros()
}

/// `max(1, ceil(log2 x))`.
pub fn clog(x: usize) -> usize {
    ceil_log2(x.max(1)).max(1) as usize
}

/// j-fold clamped logarithm; `iter_log(n, 0) == n`.
pub fn iter_log(n: usize, j: usize) -> usize {
    (0..j).fold(n, |x, _| clog(x))
}

/// Number of log applications needed to bring `n` down to at most 1.
pub fn log_star(n: usize) -> usize {
    let mut x = n as f64;
    let mut k = 0;
    while x > 1.0 {
        x = x.log2();
        k += 1;
    }
    k
}

/// Floating log2 clamped below at 1, used by bound formulas.
pub fn flog(x: f64) -> f64 {
    x.log2().max(1.0)
}

/// Integer square root (floor).
pub fn isqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}
