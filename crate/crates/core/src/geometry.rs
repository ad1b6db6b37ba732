//! Gromov products, shadows, four-point hyperbolicity and the pointwise
//! lemmas used by the certifier.
//!
//! Every function works over any [`ModelSpace`]. Tree computations are exact:
//! distances are integers and Gromov products integers, both represented
//! exactly in `f64`. Plane computations use [`EPS_GEOM`]; an inequality that
//! could favour a certificate is only accepted when it holds by more than the
//! tolerance.

use rand::Rng;

use crate::error::{Error, Result};
use crate::plane::{PlanePoint, EPS_GEOM};
use crate::space::{GroupElement, ModelSpace, SpacePoint};
use crate::word::{FreeWord, Letter};

/// `lhs ≥ rhs`; on the plane a tie within `EPS_GEOM` counts as a failure.
pub fn clears(space: &ModelSpace, lhs: f64, rhs: f64) -> bool {
    if space.is_exact() {
        lhs >= rhs
    } else {
        lhs - rhs > EPS_GEOM
    }
}

/// `lhs ≤ rhs`; on the plane a tie within `EPS_GEOM` counts as satisfied.
pub fn within(space: &ModelSpace, lhs: f64, rhs: f64) -> bool {
    if space.is_exact() {
        lhs <= rhs
    } else {
        lhs <= rhs + EPS_GEOM
    }
}

pub fn gromov_product(
    space: &ModelSpace,
    p: &SpacePoint,
    q: &SpacePoint,
    base: &SpacePoint,
) -> Result<f64> {
    space.gromov_product(p, q, base)
}

/// `min{(a·b)_d, (b·c)_d} − (a·c)_d`: the least δ for which this one
/// instance of the four-point condition holds.
pub fn four_point_defect(
    space: &ModelSpace,
    a: &SpacePoint,
    b: &SpacePoint,
    c: &SpacePoint,
    d: &SpacePoint,
) -> Result<f64> {
    let ab = space.gromov_product(a, b, d)?;
    let bc = space.gromov_product(b, c, d)?;
    let ac = space.gromov_product(a, c, d)?;
    Ok(ab.min(bc) - ac)
}

/// Largest defect over the three pairings of `a, b, c` based at `d`.
pub fn quadruple_defect(
    space: &ModelSpace,
    a: &SpacePoint,
    b: &SpacePoint,
    c: &SpacePoint,
    d: &SpacePoint,
) -> Result<f64> {
    let ab = space.gromov_product(a, b, d)?;
    let bc = space.gromov_product(b, c, d)?;
    let ac = space.gromov_product(a, c, d)?;
    Ok((ab.min(bc) - ac).max(ab.min(ac) - bc).max(ac.min(bc) - ab))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    /// Largest observed defect, clipped below at 0. A lower bound for δ.
    pub delta_hat: f64,
    pub quadruples_sampled: usize,
    pub safety_factor: f64,
    /// `delta_hat × safety_factor`.
    pub delta_used: f64,
}

/// Samples quadruples from `sampler` and records the largest four-point defect.
pub fn estimate_delta<F>(
    space: &ModelSpace,
    mut sampler: F,
    num_quadruples: usize,
    safety_factor: f64,
) -> Result<DeltaEstimate>
where
    F: FnMut() -> Result<SpacePoint>,
{
    if num_quadruples == 0 {
        return Err(Error::InvalidArgument("num_quadruples must be at least 1".into()));
    }
    if !(safety_factor >= 1.0 && safety_factor.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "safety factor must be >= 1, got {safety_factor}"
        )));
    }
    let mut delta_hat = 0.0f64;
    for _ in 0..num_quadruples {
        let a = sampler()?;
        let b = sampler()?;
        let c = sampler()?;
        let d = sampler()?;
        delta_hat = delta_hat.max(quadruple_defect(space, &a, &b, &c, &d)?);
    }
    Ok(DeltaEstimate {
        delta_hat,
        quadruples_sampled: num_quadruples,
        safety_factor,
        delta_used: delta_hat * safety_factor,
    })
}

/// Random points for δ estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointSampler {
    /// Reduced words with length uniform in `0..=max_len`.
    TreeWords { max_len: usize },
    /// Points of the plane at distance uniform in `[0, radius]` from `i`,
    /// in a uniformly random direction.
    PlaneBall { radius: f64 },
}

impl PointSampler {
    pub fn sample<R: Rng + ?Sized>(&self, space: &ModelSpace, rng: &mut R) -> Result<SpacePoint> {
        match (*self, space.rank()) {
            (PointSampler::TreeWords { max_len }, Some(rank)) => {
                let len = rng.gen_range(0..=max_len);
                Ok(SpacePoint::Vertex(random_reduced_word(rank, len, rng)))
            }
            (PointSampler::PlaneBall { radius }, None) => {
                let r = rng.gen::<f64>() * radius;
                let angle = rng.gen::<f64>() * std::f64::consts::TAU;
                Ok(SpacePoint::Plane(PlanePoint::from_polar(r, angle)?))
            }
            _ => Err(Error::VariantMismatch {
                left: "point sampler",
                right: "space",
            }),
        }
    }
}

/// A uniformly random reduced word of exactly `len` letters.
pub fn random_reduced_word<R: Rng + ?Sized>(rank: u8, len: usize, rng: &mut R) -> FreeWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    let choices = 2 * rank as usize;
    for _ in 0..len {
        loop {
            let k = rng.gen_range(0..choices);
            let l = Letter::new((k / 2) as u8 + 1, k % 2 == 1);
            if letters.last() != Some(&l.inverse()) {
                letters.push(l);
                break;
            }
        }
    }
    FreeWord::reduce(rank as usize, letters).expect("letters within rank")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainCheck {
    pub holds: bool,
    /// Interior index `i` of the first failing inequality.
    pub first_violation: Option<usize>,
}

/// Checks `min{d(p_{i-1},p_i), d(p_i,p_{i+1})} ≥ 2(p_{i-1}·p_{i+1})_{p_i} + 18δ + 1`
/// at every interior index. When it holds, `d(p_0, p_n) ≥ n`.
pub fn check_chain_inequality(
    space: &ModelSpace,
    points: &[SpacePoint],
    delta: f64,
) -> Result<ChainCheck> {
    chain_with(space, points.len(), delta, |i, j| space.distance(&points[i], &points[j]))
}

/// [`check_chain_inequality`] for the orbit chain `g_0 x₀, g_1 x₀, …`, with
/// distances taken from the elements.
pub fn check_orbit_chain(
    space: &ModelSpace,
    elements: &[GroupElement],
    delta: f64,
) -> Result<ChainCheck> {
    chain_with(space, elements.len(), delta, |i, j| {
        space.element_distance(&elements[i], &elements[j])
    })
}

fn chain_with<F>(space: &ModelSpace, len: usize, delta: f64, dist: F) -> Result<ChainCheck>
where
    F: Fn(usize, usize) -> Result<f64>,
{
    if len < 2 {
        return Err(Error::InvalidArgument("a chain needs at least 2 points".into()));
    }
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
    }
    for i in 1..len - 1 {
        let before = dist(i - 1, i)?;
        let after = dist(i, i + 1)?;
        let product = 0.5 * (before + after - dist(i - 1, i + 1)?);
        if !clears(space, before.min(after), 2.0 * product + 18.0 * delta + 1.0) {
            return Ok(ChainCheck {
                holds: false,
                first_violation: Some(i),
            });
        }
    }
    Ok(ChainCheck {
        holds: true,
        first_violation: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FellowTravel {
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
}

/// If `(a·b) ≥ A`, `(c·d) ≥ A`, `(a·c) ≤ A − 3δ` and `(a·c) < A` (all based at `base`),
/// then `|(b·d) − (a·c)| ≤ 2δ` in a δ-hyperbolic space. Both sides are reported.
#[allow(clippy::too_many_arguments)]
pub fn fellow_travel_check(
    space: &ModelSpace,
    a: &SpacePoint,
    b: &SpacePoint,
    c: &SpacePoint,
    d: &SpacePoint,
    base: &SpacePoint,
    delta: f64,
    threshold: f64,
) -> Result<FellowTravel> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
    }
    let ab = space.gromov_product(a, b, base)?;
    let cd = space.gromov_product(c, d, base)?;
    let ac = space.gromov_product(a, c, base)?;
    let bd = space.gromov_product(b, d, base)?;
    // At δ = 0 the bound on (a·c) must be strict: a = c = x₀, b = d ≠ x₀,
    // A = 0 meets the non-strict form and breaks the conclusion.
    let hypotheses_hold = clears(space, ab, threshold)
        && clears(space, cd, threshold)
        && clears(space, threshold - 3.0 * delta, ac)
        && ac < threshold;
    let conclusion_holds =
        within(space, bd - 2.0 * delta, ac) && within(space, ac, bd + 2.0 * delta);
    Ok(FellowTravel {
        hypotheses_hold,
        conclusion_holds,
    })
}

/// The shadow `S_base(center, R) = {y : (center·y)_base ≥ d(base, center) − R}`,
/// empty when `R < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowSpec {
    pub base: SpacePoint,
    pub center: SpacePoint,
    pub radius_offset: f64,
}

impl ShadowSpec {
    /// `d(base, center) − R`.
    pub fn distance_parameter(&self, space: &ModelSpace) -> Result<f64> {
        Ok(space.distance(&self.base, &self.center)? - self.radius_offset)
    }

    /// The shadow `S_center(base, d(base,center) − R + C)`, which contains
    /// every point outside `self`. With the definitions used here `C = 0`
    /// already suffices, since
    /// `(center·y)_base + (base·y)_center = d(base, center)`.
    pub fn complement_cover(&self, space: &ModelSpace, constant: f64) -> Result<ShadowSpec> {
        Ok(ShadowSpec {
            base: self.center.clone(),
            center: self.base.clone(),
            radius_offset: self.distance_parameter(space)? + constant,
        })
    }
}

pub fn in_shadow(space: &ModelSpace, y: &SpacePoint, shadow: &ShadowSpec) -> Result<bool> {
    if shadow.radius_offset < 0.0 {
        // Still validate variants.
        space.distance(&shadow.base, y)?;
        return Ok(false);
    }
    let product = space.gromov_product(&shadow.center, y, &shadow.base)?;
    let parameter = shadow.distance_parameter(space)?;
    Ok(if space.is_exact() {
        product >= parameter
    } else {
        product + EPS_GEOM >= parameter
    })
}
