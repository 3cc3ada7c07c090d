//! (p,q)-combinatorics.
//!
//! Every quantity here is built from the (p,q)-integer
//! `[n]_{p,q} = (p^n - q^n) / (p - q)`. Internally it is evaluated as
//! `p^(n-1) · [n]_r` with `r = q/p` and `[n]_r = (1 - r^n) / (1 - r)`, which is
//! the same number but does not collapse to `0/0` once `p^n` and `q^n`
//! underflow, and keeps full relative accuracy when `p` and `q` are close.
//!
//! Products (factorials, binomials, falling factorials) come in a linear-space
//! form that reports [`Error::Overflow`] and an `ln_` form that never overflows.

use crate::error::{Error, Result};
use crate::math::{expm1, ln, powi};
use alloc::format;

/// The pair `(p, q)` with `0 < q < p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PQParams {
    p: f64,
    q: f64,
    ln_p: f64,
    ln_r: f64,
}

impl PQParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        // Written so that NaN fails every comparison.
        if !(q > 0.0 && q < p && p <= 1.0) {
            return Err(Error::InvalidParams { p, q });
        }
        Ok(Self {
            p,
            q,
            ln_p: ln(p),
            ln_r: ln(q / p),
        })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q / p`, the base of the equivalent one-parameter calculus.
    #[inline]
    pub fn ratio(&self) -> f64 {
        self.q / self.p
    }

    #[inline]
    pub(crate) fn ln_p(&self) -> f64 {
        self.ln_p
    }

    /// `[m]_r = (1 - r^m)/(1 - r)` for `r = q/p`.
    #[inline]
    pub(crate) fn ratio_integer(&self, m: u64) -> f64 {
        if m == 0 {
            return 0.0;
        }
        expm1(m as f64 * self.ln_r) / expm1(self.ln_r)
    }

    /// `[n]_{p,q}`.
    pub fn integer(&self, n: u32) -> f64 {
        if n == 0 {
            return 0.0;
        }
        powi(self.p, i64::from(n) - 1) * self.ratio_integer(u64::from(n))
    }

    /// `ln [n]_{p,q}`; `-inf` for `n = 0`.
    pub fn ln_integer(&self, n: u64) -> f64 {
        if n == 0 {
            return f64::NEG_INFINITY;
        }
        (n - 1) as f64 * self.ln_p + ln(self.ratio_integer(n))
    }

    /// `[a]_{p,q} / [b]_{p,q}` for `a, b >= 1`, free of underflow.
    #[inline]
    pub(crate) fn integer_ratio(&self, a: u64, b: u64) -> f64 {
        let shift = a as f64 - b as f64;
        crate::math::exp(shift * self.ln_p) * self.ratio_integer(a) / self.ratio_integer(b)
    }

    /// `[n]_{p,q}! = [1][2]…[n]`, with `[0]! = 1`.
    pub fn factorial(&self, n: u32) -> Result<f64> {
        let mut acc = 1.0;
        for i in 1..=n {
            acc *= self.integer(i);
        }
        finite(acc, "(p,q)-factorial")
    }

    pub fn ln_factorial(&self, n: u64) -> f64 {
        (1..=n).map(|i| self.ln_integer(i)).sum()
    }

    /// The (p,q)-binomial coefficient `[n]! / ([k]! [n-k]!)`.
    pub fn binomial(&self, n: u32, k: u32) -> Result<f64> {
        check_le(k, n, "binomial needs k <= n")?;
        let k = k.min(n - k);
        let mut acc = 1.0;
        for i in 1..=k {
            acc *= self.integer_ratio(u64::from(n - k + i), u64::from(i));
        }
        finite(acc, "(p,q)-binomial")
    }

    pub fn ln_binomial(&self, n: u64, k: u64) -> Result<f64> {
        if k > n {
            return Err(Error::Domain(format!(
                "binomial needs k <= n, got n={n}, k={k}"
            )));
        }
        let k = k.min(n - k);
        Ok((1..=k)
            .map(|i| self.ln_integer(n - k + i) - self.ln_integer(i))
            .sum())
    }

    /// Falling factorial `[n][n-1]…[n-r+1]`; `r = 0` gives 1.
    pub fn falling(&self, n: u32, r: u32) -> Result<f64> {
        check_le(r, n, "falling factorial needs r <= n")?;
        let mut acc = 1.0;
        for j in 0..r {
            acc *= self.integer(n - j);
        }
        finite(acc, "(p,q)-falling factorial")
    }

    pub fn ln_falling(&self, n: u64, r: u64) -> Result<f64> {
        if r > n {
            return Err(Error::Domain(format!(
                "falling factorial needs r <= n, got n={n}, r={r}"
            )));
        }
        Ok((0..r).map(|j| self.ln_integer(n - j)).sum())
    }

    /// `(x + y)^n_{p,q} = Π_{j=0}^{n-1} (p^j x + q^j y)`.
    pub fn power_product(&self, x: f64, y: f64, n: u32) -> f64 {
        (0..n)
            .map(|j| powi(self.p, i64::from(j)) * x + powi(self.q, i64::from(j)) * y)
            .product()
    }

    /// `(1 - x)^m_{p,q} = Π_{j=0}^{m-1} (p^j - q^j x)`.
    pub fn one_minus(&self, x: f64, m: u32) -> f64 {
        self.power_product(1.0, -x, m)
    }
}

fn finite(value: f64, what: &'static str) -> Result<f64> {
    // subnormal results have lost relative precision, so they count as out of range too
    if value.is_normal() {
        Ok(value)
    } else {
        Err(Error::Overflow(what))
    }
}

fn check_le(small: u32, big: u32, msg: &str) -> Result<()> {
    if small > big {
        Err(Error::Domain(format!("{msg}, got {small} > {big}")))
    } else {
        Ok(())
    }
}
