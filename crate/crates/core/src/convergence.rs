//! Parameter sequences, moduli of continuity, the pointwise error-bound
//! quantities and natural-density tools for statistical convergence.

use crate::error::{Error, Result};
use crate::function::Function1D;
use crate::grid::UniformGrid;
use crate::math::{exp, powi, sqrt};
use crate::mkz::OperatorConfig;
use crate::operator::{apply, central_moment};
use crate::pq_core::PQParams;
use alloc::format;
use alloc::vec::Vec;

/// `n ↦ (p_n, q_n) = (1 - 1/(c_p n), 1 - 1/(c_q n))`, with
/// `p_n^n → a = e^{-1/c_p}` and `q_n^n → b = e^{-1/c_q}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeqScheme {
    c_p: f64,
    c_q: f64,
}

impl SeqScheme {
    /// Requires `c_p > c_q > 1`: `c_p > c_q` gives `q_n < p_n`, and `c_q > 1`
    /// keeps `q_1 > 0`.
    pub fn remark1(c_p: f64, c_q: f64) -> Result<Self> {
        if !(c_p > c_q && c_q > 1.0 && c_p.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "scheme needs c_p > c_q > 1, got c_p={c_p}, c_q={c_q}"
            )));
        }
        Ok(Self { c_p, c_q })
    }

    pub fn c_p(&self) -> f64 {
        self.c_p
    }

    pub fn c_q(&self) -> f64 {
        self.c_q
    }

    pub fn p_n(&self, n: u64) -> f64 {
        1.0 - 1.0 / (self.c_p * n as f64)
    }

    pub fn q_n(&self, n: u64) -> f64 {
        1.0 - 1.0 / (self.c_q * n as f64)
    }

    pub fn params(&self, n: u32) -> Result<PQParams> {
        if n == 0 {
            return Err(Error::Domain("scheme is indexed from n = 1".into()));
        }
        PQParams::new(self.p_n(u64::from(n)), self.q_n(u64::from(n)))
    }

    /// `lim p_n^n`.
    pub fn a(&self) -> f64 {
        exp(-1.0 / self.c_p)
    }

    /// `lim q_n^n`.
    pub fn b(&self) -> f64 {
        exp(-1.0 / self.c_q)
    }
}

impl Default for SeqScheme {
    /// `c_p = 3`, `c_q = 2`.
    fn default() -> Self {
        Self { c_p: 3.0, c_q: 2.0 }
    }
}

/// Resolution of the grid suprema behind [`modulus`] and [`modulus2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulusGrid {
    pub x_points: usize,
    pub h_points: usize,
}

impl Default for ModulusGrid {
    fn default() -> Self {
        Self {
            x_points: 2001,
            h_points: 512,
        }
    }
}

fn sup_over_steps<F>(f: F, h_max: f64, order: u32, grid: ModulusGrid) -> f64
where
    F: Fn(f64) -> f64,
{
    if !(h_max > 0.0) {
        return 0.0;
    }
    let x_points = grid.x_points.max(2);
    let h_points = grid.h_points.max(1);
    let mut best: f64 = 0.0;
    for j in 1..=h_points {
        let h = h_max * j as f64 / h_points as f64;
        let span = 1.0 - f64::from(order) * h;
        for i in 0..x_points {
            let x = span * i as f64 / (x_points - 1) as f64;
            let diff = match order {
                1 => f(x + h) - f(x),
                _ => f(x + 2.0 * h) - 2.0 * f(x + h) + f(x),
            };
            best = best.max(diff.abs());
        }
    }
    best
}

/// Grid approximation of `ω(f, δ) = sup_{0<h<=δ} sup_{x, x+h ∈ [0,1]} |f(x+h) - f(x)|`.
/// Steps `h = δ j/H` and points `x` uniform on `[0, 1-h]`; a lower bound on the
/// true supremum.
pub fn modulus<F>(f: F, delta: f64, grid: ModulusGrid) -> f64
where
    F: Fn(f64) -> f64,
{
    sup_over_steps(f, delta.min(1.0), 1, grid)
}

/// Grid approximation of `ω₂(f, δ) = sup_{0<h<=δ} sup |f(x+2h) - 2f(x+h) + f(x)|`
/// over `x, x+2h ∈ [0, 1]`.
pub fn modulus2<F>(f: F, delta: f64, grid: ModulusGrid) -> f64
where
    F: Fn(f64) -> f64,
{
    sup_over_steps(f, delta.min(0.5), 2, grid)
}

/// `x/q + (p^n - q^n x)/(q² [n]) - x`: how far the shifted operator moves its
/// first moment away from `x`.
pub fn shift_displacement(n: u32, x: f64, params: PQParams) -> f64 {
    let (p, q) = (params.p(), params.q());
    let n64 = i64::from(n);
    x / q + (powi(p, n64) - powi(q, n64) * x) / (q * q * params.integer(n)) - x
}

/// `α_n(x)` under the scheme's `(p_n, q_n)`.
pub fn alpha_n(n: u32, x: f64, scheme: &SeqScheme) -> Result<f64> {
    Ok(shift_displacement(n, x, scheme.params(n)?))
}

/// Which reading of `δ_n(x)` to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaForm {
    /// `sqrt(M((t-x)²; x) + α_n(x)²)`, as used in the error estimate's derivation.
    #[default]
    Proof,
    /// `sqrt(M((t-x)²; x) + M(t-x; x))`, the unsquared first moment
    /// (clamped at 0 under the root).
    Statement,
}

/// `δ_n(x)` with `n = config.n`, proof form.
pub fn delta_n(x: f64, scheme: &SeqScheme, config: &OperatorConfig) -> Result<f64> {
    delta_n_with(DeltaForm::Proof, x, scheme, config)
}

pub fn delta_n_with(
    form: DeltaForm,
    x: f64,
    scheme: &SeqScheme,
    config: &OperatorConfig,
) -> Result<f64> {
    let params = scheme.params(config.n)?;
    let second = central_moment(2, x, params, config)?;
    let extra = match form {
        DeltaForm::Proof => {
            let alpha = shift_displacement(config.n, x, params);
            alpha * alpha
        }
        DeltaForm::Statement => central_moment(1, x, params, config)?,
    };
    Ok(sqrt((second + extra).max(0.0)))
}

/// `lhs <= rhs + slack` for one point, where the slack is the evaluation's
/// truncation bound plus `1e-12 (1 + |f(x)|)` of rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Smallest `C` for which the inequality holds at this point
    /// (`+inf` if `ω₂` vanishes but `lhs > ω(f, α)`).
    pub min_constant: f64,
}

/// `|M(f; x) - f(x)| <= C ω₂(f, δ_n(x)) + ω(f, α_n(x))` at one point, `n = config.n`.
pub fn error_bound_check(
    f: &Function1D,
    x: f64,
    scheme: &SeqScheme,
    config: &OperatorConfig,
    c: f64,
    grid: ModulusGrid,
) -> Result<ErrorBoundCheck> {
    if !(c > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "constant C must be > 0, got {c}"
        )));
    }
    let params = scheme.params(config.n)?;
    let (lhs, slack) = pointwise_error(f, x, params, config)?;
    let alpha = shift_displacement(config.n, x, params);
    let delta = delta_n(x, scheme, config)?;
    let w2 = modulus2(|t| f.eval(t), delta, grid);
    let w1 = modulus(|t| f.eval(t), alpha.abs(), grid);
    let rhs = c * w2 + w1;
    let min_constant = if lhs <= w1 {
        0.0
    } else if w2 > 0.0 {
        (lhs - w1) / w2
    } else {
        f64::INFINITY
    };
    Ok(ErrorBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + slack,
        min_constant,
    })
}

/// `|M(f; x) - f(x)|` and the slack that absorbs its truncation and rounding.
fn pointwise_error(
    f: &Function1D,
    x: f64,
    params: PQParams,
    config: &OperatorConfig,
) -> Result<(f64, f64)> {
    let eval = apply(f, x, params, config)?;
    let fx = f.eval(x);
    Ok((
        (eval.value - fx).abs(),
        eval.tail_bound + 1e-12 * (1.0 + fx.abs()),
    ))
}

/// `lhs <= rhs + slack`, slack as in [`ErrorBoundCheck`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Slack applied to the grid approximation of `ω` in [`theorem53_check`].
pub const THEOREM53_SLACK: f64 = 1.05;

/// `|M(f; x) - f(x)| <= 2 ω(f, sqrt(M((t-x)²; x)))`, with the right side
/// inflated by [`THEOREM53_SLACK`].
pub fn theorem53_check(
    f: &Function1D,
    x: f64,
    scheme: &SeqScheme,
    config: &OperatorConfig,
    grid: ModulusGrid,
) -> Result<InequalityCheck> {
    let params = scheme.params(config.n)?;
    let (lhs, slack) = pointwise_error(f, x, params, config)?;
    let second = central_moment(2, x, params, config)?.max(0.0);
    let rhs = 2.0 * modulus(|t| f.eval(t), sqrt(second), grid) * THEOREM53_SLACK;
    Ok(InequalityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + slack,
    })
}

/// `max_x |M(f; x) - f(x)|` over a grid inside `[0, 0.99]`, `n = config.n`.
pub fn sup_error(
    f: &Function1D,
    scheme: &SeqScheme,
    config: &OperatorConfig,
    grid: &UniformGrid,
) -> Result<f64> {
    if grid.lo() < 0.0 || grid.hi() > 0.99 + 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "sup-error grid must lie in [0, 0.99], got [{}, {}]",
            grid.lo(),
            grid.hi()
        )));
    }
    let params = scheme.params(config.n)?;
    let mut worst: f64 = 0.0;
    for x in grid.iter() {
        let err = (apply(f, x, params, config)?.value - f.eval(x)).abs();
        worst = worst.max(err);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub n_max: u64,
    pub violator_count: u64,
    /// `violator_count / n_max`.
    pub density: f64,
    /// `(N_i, count_i / N_i)` at `N_i = 1, 10, 100, …` and `n_max`.
    pub profile: Vec<(u64, f64)>,
}

/// `(1/N) Σ_{j<=N} χ_S(j)` with a profile at decades.
pub fn natural_density<P>(mut indicator: P, n_max: u64) -> Result<DensityReport>
where
    P: FnMut(u64) -> bool,
{
    if n_max == 0 {
        return Err(Error::Domain("natural density needs N >= 1".into()));
    }
    let mut count = 0u64;
    let mut profile = Vec::new();
    let mut next_checkpoint = 1u64;
    for j in 1..=n_max {
        if indicator(j) {
            count += 1;
        }
        if j == next_checkpoint || j == n_max {
            profile.push((j, count as f64 / j as f64));
            if j == next_checkpoint {
                next_checkpoint = next_checkpoint.saturating_mul(10);
            }
        }
    }
    Ok(DensityReport {
        n_max,
        violator_count: count,
        density: count as f64 / n_max as f64,
        profile,
    })
}

/// Density of `{n <= N : |x_n - L| >= ε}`.
pub fn st_convergence_check<S>(seq: S, limit: f64, eps: f64, n_max: u64) -> Result<DensityReport>
where
    S: Fn(u64) -> f64,
{
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be > 0, got {eps}")));
    }
    natural_density(|n| (seq(n) - limit).abs() >= eps, n_max)
}
