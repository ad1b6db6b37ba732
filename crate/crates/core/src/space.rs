//! Groups acting on model hyperbolic spaces: `F_r` on its Cayley tree and
//! unit-determinant matrices on the upper half-plane.

use std::fmt;

use crate::error::{Error, Result};
use crate::moebius::Moebius;
use crate::plane::PlanePoint;
use crate::word::FreeWord;

/// An isometry of one of the model spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Word(FreeWord),
    Matrix(Moebius),
}

impl GroupElement {
    fn variant(&self) -> &'static str {
        match self {
            GroupElement::Word(_) => "free-group word",
            GroupElement::Matrix(_) => "matrix",
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        Ok(out)
    }

    /// In-place right multiplication `self ← self · other`.
    pub fn mul_assign(&mut self, other: &GroupElement) -> Result<()> {
        match (&mut *self, other) {
            (GroupElement::Word(w), GroupElement::Word(v)) => w.append(v),
            (GroupElement::Matrix(m), GroupElement::Matrix(n)) => {
                *m = m.mul(n)?;
                Ok(())
            }
            (s, o) => Err(Error::VariantMismatch {
                left: s.variant(),
                right: o.variant(),
            }),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Word(w) => GroupElement::Word(w.inverse()),
            GroupElement::Matrix(m) => GroupElement::Matrix(m.inverse()),
        }
    }

    pub fn pow(&self, exponent: i64) -> Result<GroupElement> {
        Ok(match self {
            GroupElement::Word(w) => GroupElement::Word(w.pow(exponent)),
            GroupElement::Matrix(m) => GroupElement::Matrix(m.pow(exponent)?),
        })
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Word(w) => w.is_identity(),
            GroupElement::Matrix(m) => m.is_identity(),
        }
    }

    pub fn as_word(&self) -> Option<&FreeWord> {
        match self {
            GroupElement::Word(w) => Some(w),
            GroupElement::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Moebius> {
        match self {
            GroupElement::Matrix(m) => Some(m),
            GroupElement::Word(_) => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Word(w) => w.fmt(f),
            GroupElement::Matrix(m) => m.fmt(f),
        }
    }
}

impl From<FreeWord> for GroupElement {
    fn from(w: FreeWord) -> GroupElement {
        GroupElement::Word(w)
    }
}

impl From<Moebius> for GroupElement {
    fn from(m: Moebius) -> GroupElement {
        GroupElement::Matrix(m)
    }
}

/// A point of a model space: a Cayley-tree vertex or a half-plane point.
#[derive(Debug, Clone, PartialEq)]
pub enum SpacePoint {
    Vertex(FreeWord),
    Plane(PlanePoint),
}

impl SpacePoint {
    fn variant(&self) -> &'static str {
        match self {
            SpacePoint::Vertex(_) => "tree vertex",
            SpacePoint::Plane(_) => "plane point",
        }
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacePoint::Vertex(w) => w.fmt(f),
            SpacePoint::Plane(p) => write!(f, "({}, {})", p.x(), p.y()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// Cayley tree of the free group of the given rank.
    Tree { rank: u8 },
    /// Upper half-plane with basepoint `i`.
    Plane,
}

/// A pointed hyperbolic space with a group action and a hyperbolicity constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpace {
    kind: SpaceKind,
    delta: f64,
}

impl ModelSpace {
    pub fn tree(rank: usize) -> Result<ModelSpace> {
        let e = FreeWord::reduce(rank, [])?;
        Ok(ModelSpace {
            kind: SpaceKind::Tree { rank: e.rank() },
            delta: 0.0,
        })
    }

    pub fn plane(delta: f64) -> Result<ModelSpace> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta must be a finite nonnegative number, got {delta}"
            )));
        }
        Ok(ModelSpace {
            kind: SpaceKind::Plane,
            delta,
        })
    }

    /// Same space with a different hyperbolicity constant.
    pub fn with_delta(self, delta: f64) -> Result<ModelSpace> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta must be a finite nonnegative number, got {delta}"
            )));
        }
        Ok(ModelSpace { delta, ..self })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Whether distances are exact integers (tree) rather than floats.
    pub fn is_exact(&self) -> bool {
        matches!(self.kind, SpaceKind::Tree { .. })
    }

    pub fn rank(&self) -> Option<u8> {
        match self.kind {
            SpaceKind::Tree { rank } => Some(rank),
            SpaceKind::Plane => None,
        }
    }

    pub fn basepoint(&self) -> SpacePoint {
        match self.kind {
            SpaceKind::Tree { rank } => SpacePoint::Vertex(FreeWord::identity(rank)),
            SpaceKind::Plane => SpacePoint::Plane(PlanePoint::base()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            SpaceKind::Tree { rank } => GroupElement::Word(FreeWord::identity(rank)),
            SpaceKind::Plane => GroupElement::Matrix(Moebius::identity()),
        }
    }

    fn check_point(&self, p: &SpacePoint) -> Result<()> {
        match (self.kind, p) {
            (SpaceKind::Tree { rank }, SpacePoint::Vertex(w)) if w.rank() == rank => Ok(()),
            (SpaceKind::Plane, SpacePoint::Plane(_)) => Ok(()),
            _ => Err(Error::VariantMismatch {
                left: self.label(),
                right: p.variant(),
            }),
        }
    }

    pub fn check_element(&self, g: &GroupElement) -> Result<()> {
        match (self.kind, g) {
            (SpaceKind::Tree { rank }, GroupElement::Word(w)) if w.rank() == rank => Ok(()),
            (SpaceKind::Plane, GroupElement::Matrix(_)) => Ok(()),
            _ => Err(Error::VariantMismatch {
                left: self.label(),
                right: g.variant(),
            }),
        }
    }

    fn label(&self) -> &'static str {
        match self.kind {
            SpaceKind::Tree { .. } => "tree",
            SpaceKind::Plane => "plane",
        }
    }

    pub fn distance(&self, p: &SpacePoint, q: &SpacePoint) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(match (p, q) {
            (SpacePoint::Vertex(u), SpacePoint::Vertex(v)) => u.tree_distance(v) as f64,
            (SpacePoint::Plane(z), SpacePoint::Plane(w)) => z.distance(w),
            _ => unreachable!("variants checked above"),
        })
    }

    /// `(p·q)_base = ½(d(base,p) + d(base,q) − d(p,q))`.
    pub fn gromov_product(&self, p: &SpacePoint, q: &SpacePoint, base: &SpacePoint) -> Result<f64> {
        let dp = self.distance(base, p)?;
        let dq = self.distance(base, q)?;
        let pq = self.distance(p, q)?;
        Ok(0.5 * (dp + dq - pq))
    }

    pub fn apply(&self, g: &GroupElement, p: &SpacePoint) -> Result<SpacePoint> {
        self.check_element(g)?;
        self.check_point(p)?;
        match (g, p) {
            (GroupElement::Word(w), SpacePoint::Vertex(v)) => Ok(SpacePoint::Vertex(w.mul(v)?)),
            (GroupElement::Matrix(m), SpacePoint::Plane(z)) => Ok(SpacePoint::Plane(m.apply(*z)?)),
            _ => unreachable!("variants checked above"),
        }
    }

    /// The orbit point `g·x₀`.
    pub fn orbit_point(&self, g: &GroupElement) -> Result<SpacePoint> {
        self.apply(g, &self.basepoint())
    }

    /// `d(x₀, g·x₀)`, read off the element itself rather than its orbit point.
    pub fn displacement(&self, g: &GroupElement) -> Result<f64> {
        self.check_element(g)?;
        Ok(match g {
            GroupElement::Word(w) => w.len() as f64,
            GroupElement::Matrix(m) => m.displacement(),
        })
    }

    /// `d(g·x₀, h·x₀) = d(x₀, g⁻¹h·x₀)`. Orbit points far from `x₀` crowd
    /// the boundary of the half-plane, so this is far more accurate than
    /// [`ModelSpace::distance`] on the orbit points.
    pub fn element_distance(&self, g: &GroupElement, h: &GroupElement) -> Result<f64> {
        if g == h {
            self.check_element(g)?;
            return Ok(0.0);
        }
        self.displacement(&g.inverse().mul(h)?)
    }

    /// `(g·x₀ · h·x₀)_{b·x₀}` computed with [`ModelSpace::element_distance`].
    pub fn element_gromov_product(
        &self,
        g: &GroupElement,
        h: &GroupElement,
        b: &GroupElement,
    ) -> Result<f64> {
        let dg = self.element_distance(b, g)?;
        let dh = self.element_distance(b, h)?;
        let gh = self.element_distance(g, h)?;
        Ok(0.5 * (dg + dh - gh))
    }

    /// Parses one element: a word for the tree, `a b c d` for the plane.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        match self.kind {
            SpaceKind::Tree { rank } => Ok(GroupElement::Word(FreeWord::parse(text, rank as usize)?)),
            SpaceKind::Plane => {
                let nums = text
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>().map_err(|e| Error::Parse {
                            line: 0,
                            message: format!("bad matrix entry {t:?}: {e}"),
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if nums.len() != 4 {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("expected 4 matrix entries, found {}", nums.len()),
                    });
                }
                Ok(GroupElement::Matrix(Moebius::new(nums[0], nums[1], nums[2], nums[3])?))
            }
        }
    }

    /// Parses a generator file: one element per line, `#` starts a comment line.
    pub fn parse_generators(&self, text: &str) -> Result<Vec<GroupElement>> {
        content_lines(text)
            .map(|(line, body)| self.parse_element(body).map_err(|e| at_line(e, line)))
            .collect()
    }
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Tree { rank } => write!(f, "tree(rank={rank})"),
            SpaceKind::Plane => write!(f, "plane"),
        }
    }
}

/// Nonblank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => Error::Parse {
            line,
            message: other.to_string(),
        },
    }
}
