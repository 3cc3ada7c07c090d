//! Jackson-type (p,q)-integral on `[0, 1]` and the (p,q)-Beta function.
//!
//! ```text
//! ∫_0^1 f(t) d_{p,q}t = (p - q) Σ_{j>=0} (q^j / p^{j+1}) f(q^j / p^{j+1})
//! ```
//!
//! The nodes `t_j = r^j / p` (`r = q/p`) start at `1/p`, so for `p < 1` the
//! integrand must be evaluable slightly beyond 1. The weights after node `j`
//! sum to exactly `r^{j+1}`.

use crate::error::{Error, Result};
use crate::math::{exp, powi};
use crate::pq_core::PQParams;
use crate::sum::CompensatedSum;
use alloc::format;

/// Node cap for [`jackson_integral`].
pub const DEFAULT_MAX_NODES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub terms_used: usize,
    /// Heuristic bound on the discarded tail, below the requested tolerance.
    pub tail_bound: f64,
}

/// Sum the Jackson series until `2 · r^{j+1} · max|f|` over the last three
/// nodes drops below `tol`.
pub fn jackson_integral<F>(f: F, params: PQParams, tol: f64) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    jackson_integral_capped(f, params, tol, DEFAULT_MAX_NODES)
}

pub fn jackson_integral_capped<F>(
    f: F,
    params: PQParams,
    tol: f64,
    max_nodes: usize,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let (p, q) = (params.p(), params.q());
    let r = params.ratio();
    let mut sum = CompensatedSum::new();
    let mut recent = [0.0f64; 3];
    let mut tail_bound = f64::INFINITY;
    for j in 0..max_nodes {
        let node = powi(r, j as i64) / p;
        let value = f(node);
        if !value.is_finite() {
            return Err(Error::Domain(format!(
                "integrand is not finite at node t = {node}"
            )));
        }
        sum.add(node * value);
        recent[j % 3] = value.abs();
        if j >= 2 {
            let sup = recent.iter().copied().fold(0.0, f64::max);
            tail_bound = 2.0 * powi(r, j as i64 + 1) * sup;
            if tail_bound < tol {
                return Ok(IntegralResult {
                    value: (p - q) * sum.value(),
                    terms_used: j + 1,
                    tail_bound,
                });
            }
        }
    }
    Err(Error::NotConverged {
        terms: max_nodes,
        tail_bound,
        tol,
    })
}

/// `β_{p,q}(t, s)` from its factorial closed form, evaluated in log space:
///
/// ```text
/// p^{((s+t-1)(s+t-2) - (t-1)(t-2))/2 - t + 1} · [t-1]! [s-1]! / [s+t-1]!
/// ```
pub fn pq_beta_closed(t: u32, s: u32, params: PQParams) -> Result<f64> {
    check_beta_args(t, s)?;
    let (t64, s64) = (i64::from(t), i64::from(s));
    let exponent = ((s64 + t64 - 1) * (s64 + t64 - 2) - (t64 - 1) * (t64 - 2)) / 2 - t64 + 1;
    let ln_value = exponent as f64 * params.ln_p()
        + params.ln_factorial(u64::from(t - 1))
        + params.ln_factorial(u64::from(s - 1))
        - params.ln_factorial(u64::from(s + t - 1));
    Ok(exp(ln_value))
}

/// `β_{p,q}(t, s) = ∫_0^1 x^{t-1} (1 - qx)^{s-1}_{p,q} d_{p,q}x` by Jackson sum.
pub fn pq_beta_integral(t: u32, s: u32, params: PQParams, tol: f64) -> Result<IntegralResult> {
    check_beta_args(t, s)?;
    let q = params.q();
    jackson_integral(
        |x| powi(x, i64::from(t) - 1) * params.one_minus(q * x, s - 1),
        params,
        tol,
    )
}

fn check_beta_args(t: u32, s: u32) -> Result<()> {
    if t == 0 || s == 0 {
        return Err(Error::Domain(format!(
            "beta arguments must be positive integers, got ({t}, {s})"
        )));
    }
    Ok(())
}
