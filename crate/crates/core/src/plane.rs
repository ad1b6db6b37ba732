//! Points of the upper half-plane model of the hyperbolic plane.

use crate::error::{Error, Result};

/// Absolute tolerance for every floating-point comparison in the plane model.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    x: f64,
    y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Result<PlanePoint> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(PlanePoint { x, y })
        } else {
            Err(Error::InvalidArgument(format!(
                "({x}, {y}) is not in the upper half-plane"
            )))
        }
    }

    /// The point `i`.
    pub fn base() -> PlanePoint {
        PlanePoint { x: 0.0, y: 1.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Hyperbolic distance.
    ///
    /// `arccosh(1 + |z-w|²/(2 Im z Im w))` evaluated as
    /// `2 asinh(|z-w| / (2 sqrt(Im z Im w)))`, which stays accurate for
    /// nearby points and cannot overflow for far ones.
    pub fn distance(&self, other: &PlanePoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let chord = dx.hypot(dy);
        if chord == 0.0 {
            return 0.0;
        }
        let s = chord / (2.0 * self.y.sqrt() * other.y.sqrt());
        2.0 * s.asinh()
    }

    /// Maps to the Poincaré disk via `w = (z - i)/(z + i)`.
    pub fn to_disk(&self) -> (f64, f64) {
        // (x + i(y-1)) / (x + i(y+1))
        let den = self.x * self.x + (self.y + 1.0) * (self.y + 1.0);
        let re = (self.x * self.x + (self.y - 1.0) * (self.y + 1.0)) / den;
        let im = -2.0 * self.x / den;
        (re, im)
    }

    /// Inverse of [`PlanePoint::to_disk`]: `z = i(1 + w)/(1 - w)`.
    pub fn from_disk(u: f64, v: f64) -> Result<PlanePoint> {
        let den = (1.0 - u) * (1.0 - u) + v * v;
        let x = -2.0 * v / den;
        let y = (1.0 - u * u - v * v) / den;
        PlanePoint::new(x, y)
    }

    /// The point at hyperbolic distance `radius` from `i` in direction `angle`.
    pub fn from_polar(radius: f64, angle: f64) -> Result<PlanePoint> {
        let t = (radius / 2.0).tanh();
        let v = t * angle.sin();
        // 1 - |w|² computed without cancellation.
        let rest = 1.0 / (radius / 2.0).cosh().powi(2);
        // 1 - u = (1 - t) + 2t sin²(angle/2), both terms free of cancellation.
        let one_minus_t = 2.0 / (radius.exp() + 1.0);
        let half = (angle / 2.0).sin();
        let one_minus_u = one_minus_t + 2.0 * t * half * half;
        let den = one_minus_u * one_minus_u + v * v;
        PlanePoint::new(-2.0 * v / den, rest / den)
    }
}
