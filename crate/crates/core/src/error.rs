use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `0 < q < p <= 1` violated.
    InvalidParams {
        p: f64,
        q: f64,
    },
    /// An argument outside the operation's domain.
    Domain(String),
    /// A linear-space quantity left the normal range of `f64`; use the log-space variant.
    Overflow(&'static str),
    /// The basis weights did not reach the requested mass within `max_terms`.
    Truncation {
        n: u32,
        x: f64,
        max_terms: usize,
        deficit: f64,
    },
    /// A Jackson sum hit its node cap before the tail bound fell below `tol`.
    NotConverged {
        terms: usize,
        tail_bound: f64,
        tol: f64,
    },
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams { p, q } => {
                write!(f, "invalid (p,q) = ({p}, {q}): need 0 < q < p <= 1")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Overflow(what) => write!(f, "{what} leaves the normal f64 range; use the log-space variant"),
            Error::Truncation {
                n,
                x,
                max_terms,
                deficit,
            } => write!(
                f,
                "basis weights for n={n}, x={x} still miss mass {deficit:e} after {max_terms} terms"
            ),
            Error::NotConverged {
                terms,
                tail_bound,
                tol,
            } => write!(
                f,
                "Jackson sum not converged after {terms} nodes (tail bound {tail_bound:e} > {tol:e})"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
