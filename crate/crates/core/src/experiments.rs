//! Monte Carlo estimates for subgroups generated by independent random walks:
//! certification probability, Gromov-product tails and shadow decay.
//!
//! Every trial draws its randomness from a seed derived from the master seed
//! and the trial coordinates, so outputs are identical for any worker count.

use std::io::Write;

use crate::certify::{criterion_check, Outcome};
use crate::error::{Error, Result};
use crate::geometry::{in_shadow, within, ShadowSpec};
use crate::parallel::par_map;
use crate::space::{GroupElement, ModelSpace, SpacePoint};
use crate::walk::{child_seed, sample_generator_tuple, walk_endpoint_seeded, GeneratorTuple, Measure};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub space: ModelSpace,
    pub measure: Measure,
    /// Number of independent walks per trial.
    pub k: usize,
    /// Strictly increasing walk lengths.
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n_grid.is_empty() {
            return Err(Error::InvalidArgument("n grid is empty".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::InvalidArgument("walk lengths must be at least 1".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "n grid must be strictly increasing, got {:?}",
                self.n_grid
            )));
        }
        self.space.check_element(&self.measure.identity())
    }

    /// Seed of trial `trial` at walk length `n`.
    pub fn trial_seed(&self, n: usize, trial: usize) -> u64 {
        child_seed(child_seed(self.master_seed, n as u64), trial as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub p_hat: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailCase {
    /// `(w x₀ · u x₀)`
    PlusPlus,
    /// `(w x₀ · u⁻¹ x₀)`
    PlusMinus,
    /// `(w⁻¹ x₀ · u x₀)`
    MinusPlus,
    /// `(w⁻¹ x₀ · u⁻¹ x₀)`
    MinusMinus,
    /// `(w x₀ · w⁻¹ x₀)`
    SelfInverse,
}

impl TailCase {
    pub const ALL: [TailCase; 5] = [
        TailCase::PlusPlus,
        TailCase::PlusMinus,
        TailCase::MinusPlus,
        TailCase::MinusMinus,
        TailCase::SelfInverse,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TailCase::PlusPlus => "pp",
            TailCase::PlusMinus => "pm",
            TailCase::MinusPlus => "mp",
            TailCase::MinusMinus => "mm",
            TailCase::SelfInverse => "self_inverse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub n: usize,
    pub case: TailCase,
    pub trials: usize,
    pub successes: usize,
    pub p_hat: f64,
    pub stderr: f64,
}

/// `f_hat(r)`: the largest estimated `μ_n`-mass among the sampled shadows with
/// distance parameter `r`. This is a lower bound for the supremum over all
/// shadows, never an estimate of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub r: f64,
    pub shadows: usize,
    pub samples: usize,
    pub f_hat: f64,
}

fn binomial(successes: usize, trials: usize) -> (f64, f64) {
    let p = successes as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

/// One trial of [`probability_curve`], reconstructible from its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub n: usize,
    pub index: usize,
    pub seed: u64,
    pub tuple: GeneratorTuple,
    /// `None` when some walk returned to the identity, which fails outright.
    pub outcome: Option<Outcome>,
}

impl Trial {
    pub fn is_success(&self) -> bool {
        self.outcome.as_ref().is_some_and(Outcome::is_certified)
    }
}

pub fn run_trial(cfg: &ExperimentConfig, n: usize, index: usize) -> Result<Trial> {
    let seed = cfg.trial_seed(n, index);
    let tuple = sample_generator_tuple(&cfg.measure, n, cfg.k, seed)?;
    let outcome = if tuple.elements.iter().any(GroupElement::is_identity) {
        None
    } else {
        Some(criterion_check(&tuple.elements, &cfg.space, cfg.space.delta())?)
    };
    Ok(Trial {
        n,
        index,
        seed,
        tuple,
        outcome,
    })
}

/// Fraction of trials at each `n` whose `k` walk positions are certified at
/// the space's δ.
pub fn probability_curve(cfg: &ExperimentConfig) -> Result<Vec<CurveRow>> {
    cfg.validate()?;
    cfg.n_grid
        .iter()
        .map(|&n| {
            let results = par_map(cfg.trials, |t| run_trial(cfg, n, t).map(|tr| tr.is_success()));
            let mut successes = 0;
            for r in results {
                successes += usize::from(r?);
            }
            let (p_hat, stderr) = binomial(successes, cfg.trials);
            Ok(CurveRow {
                n,
                trials: cfg.trials,
                successes,
                p_hat,
                stderr,
            })
        })
        .collect()
}

/// `l(n) = max(1, min(⌊√n⌋, ⌊L n / 4⌋))`.
pub fn default_l_schedule(n: usize, l_hat: f64) -> Result<usize> {
    if !(l_hat > 0.0 && l_hat.is_finite()) {
        return Err(Error::InvalidArgument(format!("drift estimate must be > 0, got {l_hat}")));
    }
    let root = (n as f64).sqrt().floor() as usize;
    let linear = (l_hat * n as f64 / 4.0).floor() as usize;
    Ok(root.min(linear).max(1))
}

/// Per `n`, the probability that each signed Gromov product of two independent
/// walks (and of a walk with its own inverse) is at most `l(n)`.
pub fn gromov_tail_stats<F>(cfg: &ExperimentConfig, l_schedule: F) -> Result<Vec<TailRow>>
where
    F: Fn(usize) -> usize,
{
    cfg.validate()?;
    let space = &cfg.space;
    let base = space.basepoint();
    let mut rows = Vec::with_capacity(cfg.n_grid.len() * TailCase::ALL.len());
    for &n in &cfg.n_grid {
        let bound = l_schedule(n) as f64;
        let hits = par_map(cfg.trials, |t| -> Result<[bool; 5]> {
            let seed = cfg.trial_seed(n, t);
            let w = walk_endpoint_seeded(&cfg.measure, n, child_seed(seed, 0))?;
            let u = walk_endpoint_seeded(&cfg.measure, n, child_seed(seed, 1))?;
            let wp = space.orbit_point(&w)?;
            let wm = space.orbit_point(&w.inverse())?;
            let up = space.orbit_point(&u)?;
            let um = space.orbit_point(&u.inverse())?;
            let pairs: [(&SpacePoint, &SpacePoint); 5] =
                [(&wp, &up), (&wp, &um), (&wm, &up), (&wm, &um), (&wp, &wm)];
            let mut out = [false; 5];
            for (slot, (p, q)) in out.iter_mut().zip(pairs) {
                *slot = within(space, space.gromov_product(p, q, &base)?, bound);
            }
            Ok(out)
        });
        let mut counts = [0usize; 5];
        for h in hits {
            for (c, hit) in counts.iter_mut().zip(h?) {
                *c += usize::from(hit);
            }
        }
        for (case, successes) in TailCase::ALL.into_iter().zip(counts) {
            let (p_hat, stderr) = binomial(successes, cfg.trials);
            rows.push(TailRow {
                n,
                case,
                trials: cfg.trials,
                successes,
                p_hat,
                stderr,
            });
        }
    }
    Ok(rows)
}

/// Estimates `max_S μ_n(S)` over `shadows` sampled shadows with distance
/// parameter `r`, for each `r` in `r_grid`.
///
/// Shadow `s` is `S_{x₀}(g x₀, d(x₀, g x₀) − r)` with `g` an independent
/// `μ_n` walk, and its mass is the hit rate of `samples` further walks. The
/// same centers and samples serve every `r`, so the curve is nonincreasing.
pub fn shadow_decay_curve(
    cfg: &ExperimentConfig,
    n: usize,
    r_grid: &[f64],
    shadows: usize,
    samples: usize,
) -> Result<Vec<DecayRow>> {
    if n == 0 || shadows == 0 || samples == 0 {
        return Err(Error::InvalidArgument("n, shadows and samples must be at least 1".into()));
    }
    if r_grid.is_empty() || r_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidArgument("r grid must be nonempty and positive".into()));
    }
    if r_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("r grid must be strictly increasing".into()));
    }
    let space = &cfg.space;
    space.check_element(&cfg.measure.identity())?;
    let base = space.basepoint();
    let masses = par_map(shadows, |s| -> Result<Vec<f64>> {
        let seed = child_seed(child_seed(cfg.master_seed, n as u64), s as u64);
        let g = walk_endpoint_seeded(&cfg.measure, n, child_seed(seed, 0))?;
        let center = space.orbit_point(&g)?;
        let d = space.distance(&base, &center)?;
        let specs: Vec<ShadowSpec> = r_grid
            .iter()
            .map(|r| ShadowSpec {
                base: base.clone(),
                center: center.clone(),
                radius_offset: d - r,
            })
            .collect();
        let mut hits = vec![0usize; r_grid.len()];
        for j in 0..samples {
            let y = space.orbit_point(&walk_endpoint_seeded(
                &cfg.measure,
                n,
                child_seed(seed, j as u64 + 1),
            )?)?;
            for (h, spec) in hits.iter_mut().zip(&specs) {
                *h += usize::from(in_shadow(space, &y, spec)?);
            }
        }
        Ok(hits.iter().map(|&h| h as f64 / samples as f64).collect())
    });
    let mut f_hat = vec![0.0f64; r_grid.len()];
    for m in masses {
        for (f, x) in f_hat.iter_mut().zip(m?) {
            *f = f.max(x);
        }
    }
    Ok(r_grid
        .iter()
        .zip(f_hat)
        .map(|(&r, f_hat)| DecayRow {
            r,
            shadows,
            samples,
            f_hat,
        })
        .collect())
}

/// Whether `p_hat` never drops by more than `z` pooled standard errors between
/// consecutive grid points.
pub fn nondecreasing_within(rows: &[CurveRow], z: f64) -> bool {
    rows.windows(2).all(|w| {
        let pooled = (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        w[1].p_hat >= w[0].p_hat - z * pooled
    })
}

pub const CURVE_HEADER: &str = "n,trials,successes,p_hat,stderr";
pub const TAIL_HEADER: &str = "n,case,trials,successes,p_hat,stderr";
pub const DECAY_HEADER: &str = "r,shadows,samples,f_hat";

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.n, r.trials, r.successes, r.p_hat, r.stderr)?;
    }
    Ok(())
}

pub fn write_tail_csv<W: Write>(rows: &[TailRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TAIL_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.case.label(),
            r.trials,
            r.successes,
            r.p_hat,
            r.stderr
        )?;
    }
    Ok(())
}

pub fn write_decay_csv<W: Write>(rows: &[DecayRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{DECAY_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.r, r.shadows, r.samples, r.f_hat)?;
    }
    Ok(())
}
