//! Unit-determinant real 2×2 matrices acting on the upper half-plane.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::plane::{PlanePoint, EPS_GEOM};

/// Allowed drift of `ad - bc` from 1 after renormalization.
pub const EPS_DET: f64 = 1e-9;
/// Drift beyond which a float product is rejected instead of renormalized.
pub const DET_DRIFT_LIMIT: f64 = 1e-6;

/// A Möbius transformation `z ↦ (az + b)/(cz + d)` with `ad - bc = 1`.
///
/// Integer matrices carry their exact entries alongside the floats, so traces
/// and products stay exact until the entries overflow `i128`.
#[derive(Debug, Clone, Copy)]
pub struct Moebius {
    m: [f64; 4],
    exact: Option<[i128; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryKind {
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl fmt::Display for IsometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsometryKind::Elliptic => "elliptic",
            IsometryKind::Parabolic => "parabolic",
            IsometryKind::Loxodromic => "loxodromic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: IsometryKind,
    pub translation_length: f64,
}

fn exact_to_f64(e: [i128; 4]) -> [f64; 4] {
    e.map(|x| x as f64)
}

impl Moebius {
    pub fn identity() -> Moebius {
        Moebius {
            m: [1.0, 0.0, 0.0, 1.0],
            exact: Some([1, 0, 0, 1]),
        }
    }

    pub fn from_integers(a: i128, b: i128, c: i128, d: i128) -> Result<Moebius> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc));
        if det != Some(1) {
            return Err(Error::InvalidArgument(format!(
                "integer matrix [[{a},{b}],[{c},{d}]] does not have determinant 1"
            )));
        }
        Ok(Moebius {
            m: exact_to_f64([a, b, c, d]),
            exact: Some([a, b, c, d]),
        })
    }

    /// Builds from real entries. Integer-valued input keeps exact entries;
    /// otherwise the determinant must be within `DET_DRIFT_LIMIT` of 1 and is
    /// renormalized.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Moebius> {
        let all_integral = [a, b, c, d]
            .iter()
            .all(|x| x.is_finite() && x.fract() == 0.0 && x.abs() < 1e15);
        if all_integral {
            return Moebius::from_integers(a as i128, b as i128, c as i128, d as i128);
        }
        Moebius::normalized([a, b, c, d])
    }

    fn normalized(m: [f64; 4]) -> Result<Moebius> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NumericDegradation(
                "non-finite matrix entry".to_string(),
            ));
        }
        let det = m[0] * m[3] - m[1] * m[2];
        if (det - 1.0).abs() > DET_DRIFT_LIMIT {
            return Err(Error::NumericDegradation(format!(
                "determinant {det} drifted beyond {DET_DRIFT_LIMIT}"
            )));
        }
        let s = det.sqrt();
        Ok(Moebius {
            m: m.map(|x| x / s),
            exact: None,
        })
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn exact_entries(&self) -> Option<[i128; 4]> {
        self.exact
    }

    pub fn determinant(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    pub fn exact_trace(&self) -> Option<i128> {
        self.exact.and_then(|e| e[0].checked_add(e[3]))
    }

    pub fn mul(&self, other: &Moebius) -> Result<Moebius> {
        if let (Some(x), Some(y)) = (self.exact, other.exact) {
            let prod = (|| {
                let f = |p: i128, q: i128, r: i128, s: i128| {
                    p.checked_mul(q)?.checked_add(r.checked_mul(s)?)
                };
                Some([
                    f(x[0], y[0], x[1], y[2])?,
                    f(x[0], y[1], x[1], y[3])?,
                    f(x[2], y[0], x[3], y[2])?,
                    f(x[2], y[1], x[3], y[3])?,
                ])
            })();
            if let Some(e) = prod {
                return Ok(Moebius {
                    m: exact_to_f64(e),
                    exact: Some(e),
                });
            }
        }
        let (x, y) = (self.m, other.m);
        Moebius::normalized([
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        ])
    }

    pub fn inverse(&self) -> Moebius {
        let [a, b, c, d] = self.m;
        Moebius {
            m: [d, -b, -c, a],
            exact: self.exact.map(|[a, b, c, d]| [d, -b, -c, a]),
        }
    }

    pub fn pow(&self, exponent: i64) -> Result<Moebius> {
        let base = if exponent < 0 { self.inverse() } else { *self };
        let mut acc = Moebius::identity();
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        match self.exact {
            Some(e) => e == [1, 0, 0, 1] || e == [-1, 0, 0, -1],
            None => {
                let [a, b, c, d] = self.m;
                b.abs() <= EPS_GEOM
                    && c.abs() <= EPS_GEOM
                    && (a - d).abs() <= EPS_GEOM
                    && (a.abs() - 1.0).abs() <= EPS_GEOM
            }
        }
    }

    /// `d(i, g·i)`, from `cosh d = 1 + ((a-d)² + (b+c)²)/2`.
    pub fn displacement(&self) -> f64 {
        let exact = self
            .exact
            .and_then(|[a, b, c, d]| Some((a.checked_sub(d)? as f64, b.checked_add(c)? as f64)));
        let (p, q) = exact.unwrap_or_else(|| {
            let [a, b, c, d] = self.m;
            (a - d, b + c)
        });
        2.0 * (p.hypot(q) / 2.0).asinh()
    }

    /// Exact integer key of the orbit point `g·i = ((ac + bd) + i)/(c² + d²)`.
    pub fn orbit_key(&self) -> Option<(i128, i128)> {
        let [a, b, c, d] = self.exact?;
        let x = a.checked_mul(c)?.checked_add(b.checked_mul(d)?)?;
        let n = c.checked_mul(c)?.checked_add(d.checked_mul(d)?)?;
        Some((x, n))
    }

    /// `z ↦ (az + b)/(cz + d)` on the upper half-plane.
    pub fn apply(&self, p: PlanePoint) -> Result<PlanePoint> {
        let [a, b, c, d] = self.m;
        let (x, y) = (p.x(), p.y());
        // |cz + d|²
        let den = (c * x + d) * (c * x + d) + (c * y) * (c * y);
        let nx = ((a * x + b) * (c * x + d) + a * c * y * y) / den;
        let ny = y / den;
        PlanePoint::new(nx, ny).map_err(|_| {
            Error::NumericDegradation(format!("image of ({x}, {y}) left the half-plane"))
        })
    }

    pub fn classify(&self) -> Result<Classification> {
        let kind = match self.exact_trace() {
            Some(t) => match t.abs().cmp(&2) {
                std::cmp::Ordering::Greater => IsometryKind::Loxodromic,
                std::cmp::Ordering::Equal => IsometryKind::Parabolic,
                std::cmp::Ordering::Less => IsometryKind::Elliptic,
            },
            None => {
                let t = self.trace().abs();
                if t > 2.0 + EPS_GEOM {
                    IsometryKind::Loxodromic
                } else if t < 2.0 - EPS_GEOM {
                    IsometryKind::Elliptic
                } else {
                    return Err(Error::IndeterminateClassification { trace: t });
                }
            }
        };
        let translation_length = match kind {
            IsometryKind::Loxodromic => 2.0 * (self.trace().abs() / 2.0).acosh(),
            _ => 0.0,
        };
        Ok(Classification {
            kind,
            translation_length,
        })
    }

    fn key(&self) -> MatrixKey {
        // ±M are the same isometry: fix the sign of the first nonzero entry.
        match self.exact {
            Some(e) => {
                let neg = e.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
                MatrixKey::Exact(if neg { e.map(|x| -x) } else { e })
            }
            None => {
                let q = self.m.map(|x| (x * 1e9).round() as i64);
                let neg = q.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
                MatrixKey::Approx(if neg { q.map(|x| -x) } else { q })
            }
        }
    }
}

#[derive(PartialEq, Eq, Hash)]
enum MatrixKey {
    Exact([i128; 4]),
    Approx([i64; 4]),
}

/// Equality as isometries, up to sign: exact for integer matrices and on a
/// 1e-9 grid otherwise. An exact and a float matrix never compare equal.
impl PartialEq for Moebius {
    fn eq(&self, other: &Moebius) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Moebius {}

impl Hash for Moebius {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some([a, b, c, d]) => write!(f, "{a} {b} {c} {d}"),
            None => {
                let [a, b, c, d] = self.m;
                write!(f, "{a} {b} {c} {d}")
            }
        }
    }
}
