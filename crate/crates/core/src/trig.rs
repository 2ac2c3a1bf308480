//! sin and cos of rational angles `k*pi/m`, reduced by integer arithmetic.
//!
//! The index `k` is reduced mod `2m` and folded into the first quadrant
//! before any floating-point evaluation, so angles never lose precision for
//! large index products, exact zeros come out as exact zeros, and the
//! symmetries used elsewhere hold exactly as evaluated (bitwise away from
//! zeros, where only the sign of zero may differ):
//!
//! * `cos_pi_ratio(m - j, m) == -cos_pi_ratio(j, m)`
//! * `sin_pi_ratio((m - u) * j, m) == (-1)^(j+1) * sin_pi_ratio(u * j, m)`

use std::f64::consts::PI;

/// `sin(k * pi / m)` for `k >= 0`, `m >= 1`.
pub fn sin_pi_ratio(k: u128, m: u64) -> f64 {
    debug_assert!(m >= 1);
    let two_m = 2 * m as u128;
    let mut k = (k % two_m) as u64;
    let mut sign = 1.0;
    if k >= m {
        k -= m;
        sign = -1.0;
    }
    if 2 * k > m {
        k = m - k;
    }
    if k == 0 {
        return sign * 0.0;
    }
    if 2 * k == m {
        return sign * 1.0;
    }
    sign * (k as f64 * PI / m as f64).sin()
}

/// `cos(k * pi / m)` for `k >= 0`, `m >= 1`.
pub fn cos_pi_ratio(k: u128, m: u64) -> f64 {
    debug_assert!(m >= 1);
    let two_m = 2 * m as u128;
    let mut k = (k % two_m) as u64;
    if k > m {
        k = 2 * m - k;
    }
    let mut sign = 1.0;
    if 2 * k > m {
        k = m - k;
        sign = -1.0;
    }
    if k == 0 {
        return sign;
    }
    if 2 * k == m {
        return 0.0;
    }
    sign * (k as f64 * PI / m as f64).cos()
}
