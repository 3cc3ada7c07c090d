#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is the NaN-rejecting form of the argument checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical toolkit for the (p,q)-Meyer-König-Zeller Durrmeyer operators.
//!
//! For `0 < q < p <= 1` the operator acts on a function `f` on `[0, 1]` as
//!
//! ```text
//! M(f; x) = [n+1]/p^n · Σ_k m_{n,k}(x) · (pq)^{-k} · ∫_0^1 b_{n,k}(qt) f(t) d_{p,q}t
//! ```
//!
//! where `m_{n,k}` are the (p,q)-MKZ basis weights and `b_{n,k}` the Durrmeyer
//! kernel. The crate is organised bottom-up:
//!
//! * [`pq_core`]: (p,q)-integers, factorials, binomials, falling factorials and
//!   the twisted power product, each with a log-space companion.
//! * [`pq_integral`]: the Jackson-type (p,q)-integral on `[0, 1]` and the
//!   (p,q)-Beta function (closed form and numerical sum).
//! * [`mkz`]: basis weights, kernel, kernel-monomial integrals and the two
//!   summation identities the moment estimates rest on.
//! * [`operator`]: evaluation of the operator, moments, central moments and the
//!   moment-bound checkers.
//! * [`convergence`]: parameter sequences, moduli of continuity, error-bound
//!   quantities and natural-density tools.
//!
//! The crate is `no_std` (it needs `alloc`); disable the default `std` feature
//! to build it that way.
//!
//! ```
//! use pqmkz::{apply_monomial, OperatorConfig, PQParams};
//!
//! let params = PQParams::new(0.95, 0.9).unwrap();
//! let config = OperatorConfig::new(10);
//! let e0 = apply_monomial(0, 0.5, params, &config).unwrap();
//! assert!((e0.value - 1.0).abs() < 1e-9);
//! ```

extern crate alloc;

mod error;
mod math;
mod sum;

pub mod convergence;
pub mod function;
pub mod grid;
pub mod mkz;
pub mod operator;
pub mod pq_core;
pub mod pq_integral;

pub use convergence::{
    alpha_n, delta_n, delta_n_with, error_bound_check, modulus, modulus2, natural_density,
    shift_displacement, st_convergence_check, sup_error, theorem53_check, DeltaForm, DensityReport,
    ErrorBoundCheck, InequalityCheck, ModulusGrid, SeqScheme,
};
pub use error::{Error, Result};
pub use function::{Function1D, Polynomial};
pub use grid::UniformGrid;
pub use mkz::{
    kernel_monomial_integral, kernel_value, lemma2_lhs, lemma2_rhs, lemma3_check, mkz_weight,
    mkz_weights, scaled_kernel_moment, EndpointRule, OperatorConfig, WeightSlice,
};
pub use operator::{
    apply, apply_monomial, apply_polynomial, apply_quadrature, central_moment, corollary1_bounds,
    theorem1_bounds, BoundsReport, EvalResult,
};
pub use pq_core::PQParams;
pub use pq_integral::{jackson_integral, pq_beta_closed, pq_beta_integral, IntegralResult};
