//! MKZ basis weights, the Durrmeyer kernel and the identities built on them.
//!
//! ```text
//! m_{n,k}(x)  = p^{-(kn + n(n+1)/2)}   [n+k, k]   x^k    (1 - x)^{n+1}
//! b_{n,k}(qt) = p^{-(k(n-1) + n(n-1)/2)} [n+k+1, k] (qt)^k (1 - qt)^n
//! ```
//!
//! (brackets are (p,q)-binomials, powers of `(1 - ·)` are (p,q)-power products).
//! The weights form a partition of unity on `[0, 1)`.

use crate::error::{Error, Result};
use crate::math::{exp, ln, powi};
use crate::pq_core::PQParams;
use crate::sum::CompensatedSum;
use alloc::format;
use alloc::vec::Vec;

/// What the operator returns at `x = 1`, where the series does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointRule {
    /// `M(f; 1) = f(1)`, the value uniform convergence to `f` forces.
    #[default]
    Interpolate,
    /// `M(f; 1) = 1` for every `f`, as literally written in the definition.
    LiteralOne,
}

/// Operator degree plus the truncation policy for the `k`-series.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorConfig {
    pub n: u32,
    /// Stop once the accumulated weight mass reaches `1 - tail_tol`.
    pub tail_tol: f64,
    /// Hard cap on the number of weights.
    pub max_terms: usize,
    /// Sum exactly `k = 0..=K` instead of using the mass criterion.
    pub fixed_last_index: Option<usize>,
    /// Absolute tolerance of each inner Jackson integral (non-polynomial `f`).
    pub integral_tol: f64,
    pub endpoint: EndpointRule,
}

impl OperatorConfig {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_TERMS: usize = 10_000;
    pub const DEFAULT_INTEGRAL_TOL: f64 = 1e-13;

    pub fn new(n: u32) -> Self {
        Self {
            n,
            tail_tol: Self::DEFAULT_TAIL_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
            fixed_last_index: None,
            integral_tol: Self::DEFAULT_INTEGRAL_TOL,
            endpoint: EndpointRule::Interpolate,
        }
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_fixed_last_index(mut self, k: usize) -> Self {
        self.fixed_last_index = Some(k);
        self
    }

    pub fn with_integral_tol(mut self, tol: f64) -> Self {
        self.integral_tol = tol;
        self
    }

    pub fn with_endpoint(mut self, endpoint: EndpointRule) -> Self {
        self.endpoint = endpoint;
        self
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig(
                "operator degree n must be >= 1".into(),
            ));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tail_tol must lie in (0, 1), got {}",
                self.tail_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidConfig("max_terms must be >= 1".into()));
        }
        if !(self.integral_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "integral_tol must be > 0, got {}",
                self.integral_tol
            )));
        }
        Ok(())
    }
}

/// The weights `m_{n,0}(x), …, m_{n,K}(x)` and their compensated sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSlice {
    weights: Vec<f64>,
    mass: f64,
}

impl WeightSlice {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `K`, the last index included.
    pub fn last_index(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `max(0, 1 - mass)`: the weight left out of the truncated sum.
    pub fn deficit(&self) -> f64 {
        (1.0 - self.mass).max(0.0)
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "basis weights need 0 <= x < 1, got {x}"
        )));
    }
    Ok(())
}

/// `m_{n,0}(x) = (1 - x)^{n+1}_{p,q} / p^{n(n+1)/2} = Π_{j=0}^{n} (1 - r^j x)`.
fn first_weight(n: u32, x: f64, params: PQParams) -> f64 {
    let r = params.ratio();
    (0..=n).map(|j| 1.0 - powi(r, i64::from(j)) * x).product()
}

/// `m_{n,k+1}(x) / m_{n,k}(x) = x [n+k+1]/[k+1] p^{-n}`; the `p^n` cancels
/// against the quotient of (p,q)-integers.
#[inline]
fn weight_ratio(n: u32, k: u64, x: f64, params: PQParams) -> f64 {
    x * params.ratio_integer(u64::from(n) + k + 1) / params.ratio_integer(k + 1)
}

/// A single basis weight `m_{n,k}(x)`, by running the ratio recurrence up to `k`.
pub fn mkz_weight(n: u32, k: u32, x: f64, params: PQParams) -> Result<f64> {
    check_x(x)?;
    let mut w = first_weight(n, x, params);
    for i in 0..u64::from(k) {
        if w == 0.0 {
            break;
        }
        w *= weight_ratio(n, i, x, params);
    }
    Ok(w)
}

/// Weights `m_{n,0}(x), m_{n,1}(x), …` until the mass reaches `1 - tail_tol`
/// (or exactly up to the fixed last index, when configured).
pub fn mkz_weights(x: f64, params: PQParams, config: &OperatorConfig) -> Result<WeightSlice> {
    config.validate()?;
    check_x(x)?;
    let n = config.n;
    let mut weights = Vec::new();
    let mut mass = CompensatedSum::new();
    let mut w = first_weight(n, x, params);
    let mut k: u64 = 0;
    loop {
        weights.push(w);
        mass.add(w);
        match config.fixed_last_index {
            Some(last) if weights.len() > last => break,
            Some(_) => {}
            None => {
                if 1.0 - mass.value() <= config.tail_tol {
                    break;
                }
                if weights.len() >= config.max_terms {
                    return Err(Error::Truncation {
                        n,
                        x,
                        max_terms: config.max_terms,
                        deficit: 1.0 - mass.value(),
                    });
                }
            }
        }
        w *= weight_ratio(n, k, x, params);
        k += 1;
    }
    Ok(WeightSlice {
        weights,
        mass: mass.value(),
    })
}

/// The Durrmeyer kernel `b_{n,k}(qt)`, evaluated literally (binomial in log space).
pub fn kernel_value(n: u32, k: u32, t: f64, params: PQParams) -> f64 {
    let (n64, k64) = (i64::from(n), i64::from(k));
    let qt = params.q() * t;
    let tail = params.one_minus(qt, n);
    if qt == 0.0 && k > 0 {
        return 0.0;
    }
    let ln_binom = params
        .ln_binomial(u64::from(n + k + 1), u64::from(k))
        .expect("k <= n + k + 1");
    let prefactor = (k64 * (n64 - 1) + n64 * (n64 - 1) / 2) as f64 * params.ln_p();
    let ln_power = if k == 0 { 0.0 } else { k as f64 * ln(qt.abs()) };
    let sign = if qt < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * exp(ln_binom - prefactor + ln_power) * tail
}

/// Closed form of `∫_0^1 b_{n,k}(qt) t^s d_{p,q}t`:
///
/// ```text
/// [n+k+1]! [k+s]! / ([k]! [n+k+s+1]!) · (pq)^k / [n+1] · p^{n(s+1)}
/// ```
pub fn kernel_monomial_integral(n: u32, k: u32, s: u32, params: PQParams) -> f64 {
    let (n, k, s) = (u64::from(n), u64::from(k), u64::from(s));
    let ln_value = params.ln_factorial(n + k + 1) + params.ln_factorial(k + s)
        - params.ln_factorial(k)
        - params.ln_factorial(n + k + s + 1)
        + k as f64 * ln(params.p() * params.q())
        - params.ln_integer(n + 1)
        + (n * (s + 1)) as f64 * params.ln_p();
    exp(ln_value)
}

/// `[n+1]/p^n · (pq)^{-k} · ∫_0^1 b_{n,k}(qt) t^s d_{p,q}t`, the factor each
/// weight `m_{n,k}(x)` is multiplied by when the operator acts on `t^s`.
///
/// Algebraically `p^{ns} Π_{i=1}^{s} [k+i]/[n+k+1+i]`, evaluated as
/// `p^{-s} Π [k+i]_r/[n+k+1+i]_r` so no factorials are formed.
pub fn scaled_kernel_moment(n: u32, k: u64, s: u32, params: PQParams) -> f64 {
    let n = u64::from(n);
    let mut acc = 1.0;
    for i in 1..=u64::from(s) {
        acc *= params.ratio_integer(k + i) / params.ratio_integer(n + k + 1 + i);
    }
    acc * powi(params.p(), -i64::from(s))
}

fn check_lemma2_args(n: u32, r: u32) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::Domain(format!(
            "summation identity needs n > r >= 1, got n={n}, r={r}"
        )));
    }
    Ok(())
}

/// Truncated left side of the summation identity
///
/// ```text
/// Σ_k [n+k, k] x^k (1-x)^{n+1} p^{(r-n)k} / [n+k]^{(r)}
/// ```
///
/// with `[m]^{(r)} = [m][m-1]…[m-r+1]`. Truncation follows `config` (`n` is
/// taken from it).
pub fn lemma2_lhs(r: u32, x: f64, params: PQParams, config: &OperatorConfig) -> Result<f64> {
    let n = config.n;
    check_lemma2_args(n, r)?;
    let slice = mkz_weights(x, params, config)?;
    let n64 = u64::from(n);
    let base = (n64 * (n64 + 1) / 2) as f64 * params.ln_p();
    let mut sum = CompensatedSum::new();
    for (k, &w) in slice.weights().iter().enumerate() {
        let k = k as u64;
        let ln_factor = base + (u64::from(r) * k) as f64 * params.ln_p()
            - params.ln_falling(n64 + k, u64::from(r))?;
        sum.add(w * exp(ln_factor));
    }
    Ok(sum.value())
}

/// Closed right side: `Π_{j<r} (p^{n-j} - q^{n-j} x) / [n]^{(r)} · p^{(n-r)(n-r+1)/2}`.
pub fn lemma2_rhs(n: u32, r: u32, x: f64, params: PQParams) -> Result<f64> {
    check_lemma2_args(n, r)?;
    check_x(x)?;
    let (p, q) = (params.p(), params.q());
    let numerator: f64 = (0..r)
        .map(|j| {
            let e = i64::from(n - j);
            powi(p, e) - powi(q, e) * x
        })
        .product();
    let m = u64::from(n - r);
    let ln_rest =
        (m * (m + 1) / 2) as f64 * params.ln_p() - params.ln_falling(u64::from(n), u64::from(r))?;
    Ok(numerator * exp(ln_rest))
}

/// Whether `1/[n+k+r] <= 1/(q^r [n+k])` holds at this point.
pub fn lemma3_check(n: u32, k: u32, r: u32, params: PQParams) -> bool {
    let lhs = 1.0 / params.integer(n + k + r);
    let rhs = 1.0 / (powi(params.q(), i64::from(r)) * params.integer(n + k));
    lhs <= rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pq_integral::jackson_integral;

    fn pq(p: f64, q: f64) -> PQParams {
        PQParams::new(p, q).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn weights_at_zero() {
        let params = pq(0.9, 0.8);
        for n in 1..8 {
            assert!(rel(mkz_weight(n, 0, 0.0, params).unwrap(), 1.0) < 1e-15);
            for k in 1..5 {
                assert_eq!(mkz_weight(n, k, 0.0, params).unwrap(), 0.0);
            }
        }
        let slice = mkz_weights(0.0, params, &OperatorConfig::new(5)).unwrap();
        assert_eq!(slice.last_index(), 0);
        assert_eq!(slice.mass(), 1.0);
    }

    #[test]
    fn weights_sum_to_one() {
        let slice = mkz_weights(0.5, pq(0.9, 0.8), &OperatorConfig::new(5)).unwrap();
        assert!(slice.mass() >= 1.0 - 1e-12 && slice.mass() <= 1.0 + 1e-12);
        let slice = mkz_weights(0.5, pq(0.95, 0.9), &OperatorConfig::new(25)).unwrap();
        assert!(slice.mass() >= 1.0 - 1e-12);
        assert!(slice.weights().iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn truncation_failure_near_one() {
        let config = OperatorConfig::new(25).with_max_terms(50);
        let err = mkz_weights(0.999, pq(0.95, 0.9), &config).unwrap_err();
        assert!(matches!(
            err,
            Error::Truncation {
                n: 25,
                max_terms: 50,
                ..
            }
        ));
    }

    #[test]
    fn fixed_last_index_is_respected() {
        let config = OperatorConfig::new(25).with_fixed_last_index(150);
        let slice = mkz_weights(0.9, pq(0.95, 0.9), &config).unwrap();
        assert_eq!(slice.last_index(), 150);
        assert!(slice.deficit() > 0.0);
    }

    #[test]
    fn x_outside_unit_interval_rejected() {
        let params = pq(0.9, 0.8);
        assert!(mkz_weight(3, 0, 1.0, params).is_err());
        assert!(mkz_weight(3, 0, -0.1, params).is_err());
        assert!(mkz_weights(1.0, params, &OperatorConfig::new(3)).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(OperatorConfig::new(0).validate().is_err());
        assert!(OperatorConfig::new(3)
            .with_tail_tol(0.0)
            .validate()
            .is_err());
        assert!(OperatorConfig::new(3).with_max_terms(0).validate().is_err());
        assert!(OperatorConfig::new(3).validate().is_ok());
    }

    #[test]
    fn kernel_at_zero() {
        for (p, q) in [(1.0, 0.9), (0.9, 0.8)] {
            let params = pq(p, q);
            for n in 1..8 {
                assert!(rel(kernel_value(n, 0, 0.0, params), 1.0) < 1e-14);
                assert_eq!(kernel_value(n, 3, 0.0, params), 0.0);
            }
        }
    }

    #[test]
    fn kernel_matches_linear_space_product() {
        let params = pq(0.9, 0.8);
        let (n, k, t) = (3u32, 1u32, 0.5);
        let direct = params.binomial(n + k + 1, k).unwrap()
            * (params.q() * t)
            * params.one_minus(params.q() * t, n)
            / powi(0.9, i64::from(k * (n - 1) + n * (n - 1) / 2));
        assert!(rel(kernel_value(n, k, t, params), direct) < 1e-13);
    }

    #[test]
    fn kernel_integral_examples() {
        let params = pq(0.9, 0.8);
        for n in 1..6u32 {
            let expected = powi(0.9, i64::from(n)) / params.integer(n + 1);
            assert!(rel(kernel_monomial_integral(n, 0, 0, params), expected) < 1e-13);
        }
        let closed = kernel_monomial_integral(4, 2, 1, params);
        let numeric =
            jackson_integral(|t| kernel_value(4, 2, t, params) * t, params, 1e-17).unwrap();
        assert!(rel(numeric.value, closed) < 1e-8);
    }

    #[test]
    fn scaled_moment_matches_log_space_composition() {
        for params in [pq(1.0, 0.9), pq(0.95, 0.9), pq(0.9, 0.5)] {
            for n in [1u32, 5, 25] {
                for k in [0u32, 1, 7, 60] {
                    for s in 0..=5 {
                        let composed = exp(params.ln_integer(u64::from(n) + 1)
                            - f64::from(n) * params.ln_p()
                            - f64::from(k) * ln(params.p() * params.q()))
                            * kernel_monomial_integral(n, k, s, params);
                        let fast = scaled_kernel_moment(n, u64::from(k), s, params);
                        assert!(rel(fast, composed) < 1e-11, "n={n} k={k} s={s}");
                    }
                    assert_eq!(scaled_kernel_moment(n, u64::from(k), 0, params), 1.0);
                }
            }
        }
    }

    #[test]
    fn reciprocal_sum_examples() {
        let params = pq(0.9, 0.8);
        let config = OperatorConfig::new(5);
        let lhs = lemma2_lhs(1, 0.0, params, &config).unwrap();
        let rhs = lemma2_rhs(5, 1, 0.0, params).unwrap();
        let expected = powi(0.9, 5) * powi(0.9, 10) / params.integer(5);
        assert!(rel(rhs, expected) < 1e-13);
        assert!(rel(lhs, rhs) < 1e-13);

        let lhs = lemma2_lhs(1, 0.5, params, &config).unwrap();
        let rhs = lemma2_rhs(5, 1, 0.5, params).unwrap();
        assert!(rel(lhs, rhs) < 1e-6);

        let params = pq(0.95, 0.9);
        let config = OperatorConfig::new(8);
        let lhs = lemma2_lhs(2, 0.3, params, &config).unwrap();
        let rhs = lemma2_rhs(8, 2, 0.3, params).unwrap();
        assert!(rel(lhs, rhs) < 1e-6);
    }

    #[test]
    fn reciprocal_sum_domain() {
        let params = pq(0.9, 0.8);
        assert!(lemma2_rhs(3, 3, 0.2, params).is_err());
        assert!(lemma2_rhs(3, 0, 0.2, params).is_err());
        assert!(lemma2_lhs(5, 0.2, params, &OperatorConfig::new(5)).is_err());
    }

    #[test]
    fn reciprocal_inequality_examples() {
        assert!(lemma3_check(3, 2, 0, pq(0.9, 0.8)));
        assert!(lemma3_check(3, 2, 1, pq(0.9, 0.8)));
        assert!(lemma3_check(1, 0, 5, pq(0.95, 0.5)));
    }
}
