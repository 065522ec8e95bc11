//! Hoeffding tail and the sample budget it implies.
//!
//! Overlaps `⟨ψ|R|ψ⟩` lie in `[0, 1]` with Haar mean `2^(m−n)` for a rank-`2^m`
//! projector. The one-sided Hoeffding bound for the sample mean falling to
//! `2^(m−n−1)`, i.e. a deviation `t = 2^(m−n−1)`, is `exp(−2·N·t²)`. With
//! `N = d·2^(2(n−m)+1)` the exponent is exactly `d`.
//!
//! Tail probabilities are natural-exponential (`exp(−d)`); every other quantity
//! in the crate is base 2.

use crate::{QelError, Result};

/// Overlap every returned witness must reach, `2^(m−n−1)`.
pub fn overlap_threshold(n: u32, m: u32) -> f64 {
    (m as f64 - n as f64 - 1.0).exp2()
}

/// `exp(−2·N·t²)` with `t = 2^(m−n−1)`. Decreasing in `N`.
pub fn hoeffding_tail(samples: u64, n: u32, m: u32) -> f64 {
    let t = overlap_threshold(n, m);
    (-2.0 * samples as f64 * t * t).exp()
}

fn check_nm(n: u32, m: u32) -> Result<()> {
    if m >= n {
        return Err(QelError::arg(format!("need m < n, got m = {m}, n = {n}")));
    }
    Ok(())
}

/// `N = d·2^(2(n−m)+1)` without any sample cap.
pub fn sample_budget_for(n: u32, m: u32, d: u64) -> Result<u64> {
    check_nm(n, m)?;
    if d == 0 {
        return Err(QelError::arg("confidence parameter d must be >= 1"));
    }
    let shift = 2 * (n - m) + 1;
    if shift >= 64 {
        return Err(QelError::Resource(format!("sample budget 2^{shift}·{d} overflows")));
    }
    d.checked_mul(1u64 << shift)
        .ok_or_else(|| QelError::Resource(format!("sample budget {d}·2^{shift} overflows")))
}
