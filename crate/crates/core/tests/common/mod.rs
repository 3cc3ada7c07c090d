#![allow(dead_code)]

pub mod brute;

use pqmkz::PQParams;

/// The four (p,q) pairs the identity checks sweep.
pub const TEST_PARAMS: [(f64, f64); 4] = [(1.0, 0.9), (0.95, 0.9), (0.9, 0.8), (0.9, 0.5)];

pub fn params(p: f64, q: f64) -> PQParams {
    PQParams::new(p, q).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
