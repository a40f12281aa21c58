use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::numeric::log_plus;

/// Both sides of `sum_{k>=1} (a_k - a_{k-1}) / sqrt(a_k) <= 2 (sqrt(a_t) - sqrt(a_0))`
/// for a nondecreasing nonnegative sequence. Terms with `a_k = a_{k-1}` contribute zero.
pub fn lemma_seq_check(a: &[f64]) -> Result<(f64, f64)> {
    let (Some(&first), Some(&last)) = (a.first(), a.last()) else {
        return Err(Error::Domain("sequence must be nonempty".into()));
    };
    if a.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::Domain("sequence must be finite and nonnegative".into()));
    }
    if a.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("sequence must be nondecreasing".into()));
    }
    let lhs = a
        .windows(2)
        .map(|w| if w[1] == w[0] { 0.0 } else { (w[1] - w[0]) / w[1].sqrt() })
        .sum();
    let rhs = 2.0 * (last.sqrt() - first.sqrt());
    Ok((lhs, rhs))
}

/// Both sides of `max_{1<=t<=T} sum_{i<t} s_i / s_t >= (T / log_+(s_T / s_0) - 1) / e`
/// for a positive nondecreasing sequence `s_0, ..., s_T`.
pub fn lemma_log_ratio_check(s: &[f64]) -> Result<(f64, f64)> {
    if s.len() < 2 {
        return Err(Error::Domain("sequence needs at least s_0 and s_1".into()));
    }
    if s.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::Domain("sequence must be finite and positive".into()));
    }
    if s.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("sequence must be nondecreasing".into()));
    }
    let t_max = s.len() - 1;
    let mut partial = 0.0;
    let mut lhs = f64::NEG_INFINITY;
    for t in 1..=t_max {
        partial += s[t - 1];
        lhs = lhs.max(partial / s[t]);
    }
    let rhs = (t_max as f64 / log_plus(s[t_max] / s[0])? - 1.0) / E;
    Ok((lhs, rhs))
}
