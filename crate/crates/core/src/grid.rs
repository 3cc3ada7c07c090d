use crate::error::{Error, Result};
use alloc::format;

/// `points` equally spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    lo: f64,
    hi: f64,
    points: usize,
}

impl UniformGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "grid needs finite lo <= hi and at least one point, got {lo}:{hi}:{points}"
            )));
        }
        if points == 1 && lo != hi {
            return Err(Error::InvalidConfig(format!(
                "single-point grid needs lo == hi, got {lo}:{hi}"
            )));
        }
        Ok(Self { lo, hi, points })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        if self.points == 1 {
            return self.lo;
        }
        if i + 1 == self.points {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.point(i))
    }
}
