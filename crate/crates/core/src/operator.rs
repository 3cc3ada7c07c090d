//! The (p,q)-MKZ Durrmeyer operator, its moments and the moment-bound checks.
//!
//! Polynomials go through the closed-form kernel moments: for `f = Σ c_s t^s`
//! the inner integrals are exact and only the `k`-series is truncated. Other
//! functions are integrated per `k` with the Jackson sum.

use crate::error::{Error, Result};
use crate::function::{Function1D, Polynomial};
use crate::math::{exp, ln, powi};
use crate::mkz::{mkz_weights, EndpointRule, OperatorConfig};
use crate::pq_core::PQParams;
use crate::pq_integral::jackson_integral;
use crate::sum::CompensatedSum;
use alloc::format;
use alloc::vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Number of `k`-terms summed (`K + 1`); 0 at the endpoint `x = 1`.
    pub k_used: usize,
    /// Bound on the dropped `k`-tail: weight deficit times a bound on the inner
    /// integrals.
    pub tail_bound: f64,
    /// Absolute tolerance of each inner integral; 0 on the closed-form path.
    pub per_term_integral_tol: f64,
}

impl EvalResult {
    fn endpoint(value: f64) -> Self {
        Self {
            value,
            k_used: 0,
            tail_bound: 0.0,
            per_term_integral_tol: 0.0,
        }
    }
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "operator needs 0 <= x <= 1, got {x}"
        )));
    }
    Ok(())
}

fn endpoint_value(f: &Function1D, config: &OperatorConfig) -> f64 {
    match config.endpoint {
        EndpointRule::Interpolate => f.eval(1.0),
        EndpointRule::LiteralOne => 1.0,
    }
}

/// `M(f; x)`. Polynomials take the closed-form path, anything else is
/// integrated numerically.
pub fn apply(
    f: &Function1D,
    x: f64,
    params: PQParams,
    config: &OperatorConfig,
) -> Result<EvalResult> {
    match f.as_polynomial() {
        Some(poly) => apply_polynomial(poly, x, params, config),
        None => apply_quadrature(f, x, params, config),
    }
}

/// `M(e_s; x)` with `e_s(t) = t^s`.
pub fn apply_monomial(
    s: u32,
    x: f64,
    params: PQParams,
    config: &OperatorConfig,
) -> Result<EvalResult> {
    apply_polynomial(&Polynomial::monomial(s as usize), x, params, config)
}

pub fn apply_polynomial(
    poly: &Polynomial,
    x: f64,
    params: PQParams,
    config: &OperatorConfig,
) -> Result<EvalResult> {
    config.validate()?;
    check_unit(x)?;
    if x == 1.0 {
        let value = match config.endpoint {
            EndpointRule::Interpolate => poly.eval(1.0),
            EndpointRule::LiteralOne => 1.0,
        };
        return Ok(EvalResult::endpoint(value));
    }
    let slice = mkz_weights(x, params, config)?;
    let n = u64::from(config.n);
    let coeffs = poly.coeffs();
    let inv_p = 1.0 / params.p();
    let mut total = CompensatedSum::new();
    for (k, &w) in slice.weights().iter().enumerate() {
        let k = k as u64;
        // running p^{-s} Π_{i<=s} [k+i]_r/[n+k+1+i]_r
        let mut factor = 1.0;
        let mut inner = coeffs[0];
        for (s, &c) in coeffs.iter().enumerate().skip(1) {
            let s = s as u64;
            factor *= inv_p * params.ratio_integer(k + s) / params.ratio_integer(n + k + 1 + s);
            inner += c * factor;
        }
        total.add(w * inner);
    }
    let integral_bound: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(s, c)| c.abs() * powi(inv_p, s as i64))
        .sum();
    Ok(EvalResult {
        value: total.value(),
        k_used: slice.weights().len(),
        tail_bound: slice.deficit() * integral_bound,
        per_term_integral_tol: 0.0,
    })
}

/// `M(f; x)` with every inner integral computed as a Jackson sum, whatever `f` is.
pub fn apply_quadrature(
    f: &Function1D,
    x: f64,
    params: PQParams,
    config: &OperatorConfig,
) -> Result<EvalResult> {
    config.validate()?;
    check_unit(x)?;
    if x == 1.0 {
        return Ok(EvalResult::endpoint(endpoint_value(f, config)));
    }
    let slice = mkz_weights(x, params, config)?;
    let n = config.n;
    let n64 = u64::from(n);
    let ln_p = params.ln_p();
    let q = params.q();
    let ln_front = params.ln_integer(n64 + 1)
        - n64 as f64 * ln_p
        - (n64 * n64.saturating_sub(1) / 2) as f64 * ln_p;
    let mut ln_binom = 0.0;
    let mut total = CompensatedSum::new();
    for (k, &w) in slice.weights().iter().enumerate() {
        let k64 = k as u64;
        if k > 0 {
            // [n+k+1, k] / [n+k, k-1] = [n+k+1]/[k]
            ln_binom += ln(params.integer_ratio(n64 + k64 + 1, k64));
        }
        if w == 0.0 {
            continue;
        }
        // [n+1]/p^n (pq)^{-k} b_{n,k}(qt), which integrates to 1
        let ln_scale = ln_front + ln_binom - (k64 * n64) as f64 * ln_p;
        let integrand =
            |t: f64| exp(ln_scale + k as f64 * ln(t)) * params.one_minus(q * t, n) * f.eval(t);
        let inner = jackson_integral(integrand, params, config.integral_tol)?;
        total.add(w * inner.value);
    }
    Ok(EvalResult {
        value: total.value(),
        k_used: slice.weights().len(),
        tail_bound: slice.deficit() * sup_abs_on_nodes_range(f, params),
        per_term_integral_tol: config.integral_tol,
    })
}

fn sup_abs_on_nodes_range(f: &Function1D, params: PQParams) -> f64 {
    const SAMPLES: usize = 1025;
    let hi = 1.0 / params.p();
    (0..SAMPLES)
        .map(|i| f.eval(hi * i as f64 / (SAMPLES - 1) as f64).abs())
        .fold(0.0, f64::max)
}

/// `M((t - x)^i; x)` for `i ∈ {1, 2}`.
pub fn central_moment(i: u32, x: f64, params: PQParams, config: &OperatorConfig) -> Result<f64> {
    let poly = match i {
        1 => Polynomial::new(vec![-x, 1.0]),
        2 => Polynomial::new(vec![x * x, -2.0 * x, 1.0]),
        _ => {
            return Err(Error::Domain(format!(
                "central moments are defined for i in {{1, 2}}, got {i}"
            )))
        }
    };
    Ok(apply_polynomial(&poly, x, params, config)?.value)
}

/// A computed moment against its stated bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub x: f64,
    pub actual: f64,
    /// `-inf` when no lower bound is stated.
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

impl BoundsReport {
    /// Slack `1e-9 · (1 + |upper|)` on both sides.
    pub fn new(x: f64, actual: f64, lower: f64, upper: f64) -> Self {
        let scale = if upper.is_finite() {
            upper.abs()
        } else {
            actual.abs()
        };
        let slack = 1e-9 * (1.0 + scale);
        let holds = actual.is_finite() && lower - slack <= actual && actual <= upper + slack;
        Self {
            x,
            actual,
            lower,
            upper,
            holds,
        }
    }
}

struct BoundTerms {
    x: f64,
    p: f64,
    q: f64,
    n_int: f64,
    n1_int: f64,
    a: f64,
    a1: f64,
}

impl BoundTerms {
    fn new(n: u32, x: f64, params: PQParams) -> Self {
        let (p, q) = (params.p(), params.q());
        let n64 = i64::from(n);
        Self {
            x,
            p,
            q,
            n_int: params.integer(n),
            n1_int: params.integer(n.saturating_sub(1)),
            a: powi(p, n64) - powi(q, n64) * x,
            a1: powi(p, n64 - 1) - powi(q, n64 - 1) * x,
        }
    }

    fn e1_lower(&self) -> f64 {
        let q = self.q;
        self.x / (q * q) * (1.0 - (q + 1.0) / self.n_int)
    }

    fn shift(&self) -> f64 {
        self.a / (self.q * self.q * self.n_int)
    }

    fn e1_upper(&self) -> f64 {
        self.x / self.q + self.shift()
    }

    /// The two terms of the e2 and ψ2 bounds that do not involve `x²`.
    fn second_order_terms(&self) -> f64 {
        let (p, q) = (self.p, self.q);
        (p + q) * (p + q) / powi(q, 5) * self.a / self.n_int * self.x
            + p * (p + q) / powi(q, 6) * self.a * self.a1 / (self.n_int * self.n1_int)
    }

    fn e2_upper(&self) -> f64 {
        self.x * self.x / (self.q * self.q) + self.second_order_terms()
    }

    fn psi1_upper(&self) -> f64 {
        self.shift() + (1.0 / self.q - 1.0) * self.x
    }

    fn psi2_upper(&self) -> f64 {
        let q = self.q;
        self.x * self.x * (1.0 - 1.0 / (q * q) + 2.0 * (q + 1.0) / (q * q * self.n_int))
            + self.second_order_terms()
    }
}

/// `M(e_i; x)` for `i ∈ {0, 1, 2}` against the moment estimates
///
/// ```text
/// M(e0) = 1
/// x/q² (1 - (q+1)/[n]) <= M(e1) <= x/q + (p^n - q^n x)/(q² [n])
/// M(e2) <= x²/q² + (p+q)²/q⁵ (p^n - q^n x)/[n] x
///          + p(p+q)/q⁶ (p^n - q^n x)(p^{n-1} - q^{n-1} x)/([n][n-1])
/// ```
///
/// No lower bound is stated for `M(e2)`. For `n = 1` the `e2` bound is `+inf`.
pub fn theorem1_bounds(
    i: u32,
    x: f64,
    params: PQParams,
    config: &OperatorConfig,
) -> Result<BoundsReport> {
    if i > 2 {
        return Err(Error::Domain(format!(
            "moment index must be 0, 1 or 2, got {i}"
        )));
    }
    let actual = apply_monomial(i, x, params, config)?.value;
    let t = BoundTerms::new(config.n, x, params);
    let (lower, upper) = match i {
        0 => (1.0, 1.0),
        1 => (t.e1_lower(), t.e1_upper()),
        _ => (f64::NEG_INFINITY, t.e2_upper()),
    };
    Ok(BoundsReport::new(x, actual, lower, upper))
}

/// Central moments `M(ψ_i; x)`, `ψ_i = (t - x)^i`, against their upper bounds
///
/// ```text
/// M(ψ1) <= (p^n - q^n x)/(q² [n]) + (1/q - 1) x
/// M(ψ2) <= x² (1 - 1/q² + 2(q+1)/(q² [n])) + (same two terms as the e2 bound)
/// ```
pub fn corollary1_bounds(
    i: u32,
    x: f64,
    params: PQParams,
    config: &OperatorConfig,
) -> Result<BoundsReport> {
    let actual = central_moment(i, x, params, config)?;
    let t = BoundTerms::new(config.n, x, params);
    let upper = if i == 1 {
        t.psi1_upper()
    } else {
        t.psi2_upper()
    };
    Ok(BoundsReport::new(x, actual, f64::NEG_INFINITY, upper))
}
