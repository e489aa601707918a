//! Closed real intervals with just enough arithmetic to enclose the range of a
//! generalized polynomial over a box.
//!
//! Endpoints are computed in ordinary floating point (no directed rounding);
//! callers that need a safe lower bound widen the result with [`Interval::widen`].

use std::ops::{Add, Mul};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Smallest absolute value over the interval (the mignitude).
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(self.lo * c, self.hi * c)
    }

    /// Outward widening by `abs + rel * mag`.
    pub fn widen(self, abs: f64, rel: f64) -> Self {
        let pad = abs + rel * self.mag();
        Self {
            lo: self.lo - pad,
            hi: self.hi + pad,
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        Interval {
            lo: c.iter().cloned().fold(f64::INFINITY, f64::min),
            hi: c.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_handles_signs() {
        let a = Interval::new(-1.0, 2.0);
        let b = Interval::new(-3.0, 0.5);
        assert_eq!(a * b, Interval::new(-6.0, 3.0));
        assert_eq!((a + b).lo, -4.0);
    }

    #[test]
    fn mignitude() {
        assert_eq!(Interval::new(-1.0, 2.0).mig(), 0.0);
        assert_eq!(Interval::new(-3.0, -0.5).mig(), 0.5);
    }
}
