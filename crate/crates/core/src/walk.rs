//! Finite-support measures and the random walks they drive.

use std::collections::{HashMap, HashSet};

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::moebius::Moebius;
use crate::parallel::par_map;
use crate::space::{at_line, content_lines, GroupElement, ModelSpace};
use crate::word::{FreeWord, Letter};

/// Tolerance on the total mass of a measure.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Largest `|support|^n` that [`exact_distribution`] will enumerate.
pub const CONVOLUTION_BUDGET: f64 = 1e7;

/// Derives an independent child seed; a SplitMix64 finalizer over the pair.
pub fn child_seed(master: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(master.wrapping_add(mix(index.wrapping_add(0x9e37_79b9_7f4a_7c15))))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A probability measure with finite support on one group.
#[derive(Debug, Clone)]
pub struct Measure {
    entries: Vec<(GroupElement, f64)>,
    index: WeightedIndex<f64>,
}

impl Measure {
    pub fn new(entries: Vec<(GroupElement, f64)>) -> Result<Measure> {
        let first = entries
            .first()
            .ok_or_else(|| Error::InvalidMeasure("empty support".into()))?
            .0
            .clone();
        let mut seen = HashSet::new();
        let mut total = 0.0;
        for (g, p) in &entries {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(Error::InvalidMeasure(format!(
                    "probability {p} of {g} is not in (0, 1]"
                )));
            }
            // Same group as the first element.
            first.mul(g).map_err(|_| {
                Error::InvalidMeasure(format!("{g} is not in the same group as {first}"))
            })?;
            if !seen.insert(g.clone()) {
                return Err(Error::InvalidMeasure(format!("duplicate element {g}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("total mass {total} is not 1")));
        }
        let index = WeightedIndex::new(entries.iter().map(|(_, p)| *p))
            .map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Ok(Measure { entries, index })
    }

    /// Mass `1/(2r)` on each generator of `F_r` and each inverse.
    pub fn uniform_symmetric(rank: usize) -> Result<Measure> {
        let w = FreeWord::reduce(rank, [])?;
        let p = 1.0 / (2 * rank) as f64;
        let entries = (1..=w.rank())
            .flat_map(|g| [false, true].map(|inv| Letter::new(g, inv)))
            .map(|l| {
                let word = FreeWord::reduce(rank, [l]).expect("letter within rank");
                (GroupElement::Word(word), p)
            })
            .collect();
        Measure::new(entries)
    }

    /// Uniform on the given elements and their inverses.
    pub fn uniform_on_symmetrized(gens: &[GroupElement]) -> Result<Measure> {
        let mut support: Vec<GroupElement> = Vec::new();
        for g in gens {
            for h in [g.clone(), g.inverse()] {
                if !support.contains(&h) {
                    support.push(h);
                }
            }
        }
        let p = 1.0 / support.len() as f64;
        Measure::new(support.into_iter().map(|g| (g, p)).collect())
    }

    /// Parses lines of `<element> <probability>`, `#` comments allowed.
    pub fn parse(text: &str, space: &ModelSpace) -> Result<Measure> {
        let mut entries = Vec::new();
        for (line, body) in content_lines(text) {
            let (element, prob) = body.rsplit_once(char::is_whitespace).ok_or_else(|| {
                Error::Parse {
                    line,
                    message: "expected '<element> <probability>'".into(),
                }
            })?;
            let p: f64 = prob.trim().parse().map_err(|e| Error::Parse {
                line,
                message: format!("bad probability {prob:?}: {e}"),
            })?;
            let g = space.parse_element(element).map_err(|e| at_line(e, line))?;
            entries.push((g, p));
        }
        Measure::new(entries)
    }

    pub fn entries(&self) -> &[(GroupElement, f64)] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Fewer than two support points can never be nonelementary.
    pub fn is_degenerate(&self) -> bool {
        self.entries.len() < 2
    }

    pub fn identity(&self) -> GroupElement {
        match &self.entries[0].0 {
            GroupElement::Word(w) => GroupElement::Word(FreeWord::identity(w.rank())),
            GroupElement::Matrix(_) => GroupElement::Matrix(Moebius::identity()),
        }
    }

    /// `μ̌(g) = μ(g⁻¹)`.
    pub fn reflected(&self) -> Measure {
        let entries = self
            .entries
            .iter()
            .map(|(g, p)| (g.inverse(), *p))
            .collect();
        Measure::new(entries).expect("inversion preserves validity")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &GroupElement {
        &self.entries[self.index.sample(rng)].0
    }

    pub fn mass(&self, g: &GroupElement) -> f64 {
        self.entries
            .iter()
            .find(|(h, _)| h == g)
            .map_or(0.0, |(_, p)| *p)
    }
}

/// Increments `g_1..g_n` and positions `w_i = g_1⋯g_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub increments: Vec<GroupElement>,
    pub positions: Vec<GroupElement>,
    pub seed: u64,
    identity: GroupElement,
}

impl SamplePath {
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// `w_n`, the identity for an empty path.
    pub fn endpoint(&self) -> &GroupElement {
        self.positions.last().unwrap_or(&self.identity)
    }
}

pub fn sample_path(mu: &Measure, n: usize, seed: u64) -> Result<SamplePath> {
    let mut rng = rng_from_seed(seed);
    let mut increments = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    let mut w = mu.identity();
    for _ in 0..n {
        let g = mu.sample(&mut rng).clone();
        w.mul_assign(&g)?;
        increments.push(g);
        positions.push(w.clone());
    }
    Ok(SamplePath {
        increments,
        positions,
        seed,
        identity: mu.identity(),
    })
}

/// `w_n` alone, without storing the path. Same stream as [`sample_path`].
pub fn walk_endpoint<R: Rng + ?Sized>(mu: &Measure, n: usize, rng: &mut R) -> Result<GroupElement> {
    let mut w = mu.identity();
    for _ in 0..n {
        w.mul_assign(mu.sample(rng))?;
    }
    Ok(w)
}

pub fn walk_endpoint_seeded(mu: &Measure, n: usize, seed: u64) -> Result<GroupElement> {
    walk_endpoint(mu, n, &mut rng_from_seed(seed))
}

/// The step-`n` positions of `k` independent walks.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorTuple {
    pub n: usize,
    pub elements: Vec<GroupElement>,
    pub seeds: Vec<u64>,
}

pub fn sample_generator_tuple(mu: &Measure, n: usize, k: usize, master_seed: u64) -> Result<GeneratorTuple> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("k and n must both be at least 1".into()));
    }
    let seeds: Vec<u64> = (0..k as u64).map(|i| child_seed(master_seed, i)).collect();
    let elements = seeds
        .iter()
        .map(|&s| walk_endpoint_seeded(mu, n, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratorTuple { n, elements, seeds })
}

/// The law of `w_n` as a table.
pub type Distribution = HashMap<GroupElement, f64>;

/// `μ_n`, the `n`-fold convolution of `μ`, by enumeration.
pub fn exact_distribution(mu: &Measure, n: usize) -> Result<Distribution> {
    let needed = (mu.support_size() as f64).powi(n as i32);
    if needed > CONVOLUTION_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: CONVOLUTION_BUDGET,
        });
    }
    let mut dist: Distribution = HashMap::new();
    dist.insert(mu.identity(), 1.0);
    for _ in 0..n {
        let mut next: Distribution = HashMap::with_capacity(dist.len() * mu.support_size());
        for (x, px) in &dist {
            for (g, pg) in mu.entries() {
                *next.entry(x.mul(g)?).or_insert(0.0) += px * pg;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// Checks that `w_n⁻¹` is distributed as `(μ̌)_n` pointwise within 1e-9.
pub fn inverse_step_distribution_check(mu: &Measure, n: usize) -> Result<bool> {
    let forward = exact_distribution(mu, n)?;
    let reflected = exact_distribution(&mu.reflected(), n)?;
    let inverted: Distribution = forward.iter().map(|(g, p)| (g.inverse(), *p)).collect();
    let keys: HashSet<&GroupElement> = inverted.keys().chain(reflected.keys()).collect();
    Ok(keys.into_iter().all(|g| {
        let a = inverted.get(g).copied().unwrap_or(0.0);
        let b = reflected.get(g).copied().unwrap_or(0.0);
        (a - b).abs() <= 1e-9
    }))
}

/// Total variation distance between two tables.
pub fn total_variation(p: &Distribution, q: &Distribution) -> f64 {
    let keys: HashSet<&GroupElement> = p.keys().chain(q.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|g| (p.get(g).copied().unwrap_or(0.0) - q.get(g).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    /// Mean of `d(x₀, w_n x₀)/n` over trials.
    pub l_hat: f64,
    pub stderr: f64,
    pub n: usize,
    pub trials: usize,
}

/// Estimates the drift `L` from `trials` independent walks of length `n`.
pub fn estimate_drift(
    mu: &Measure,
    space: &ModelSpace,
    n: usize,
    trials: usize,
    master_seed: u64,
) -> Result<DriftEstimate> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidArgument("n and trials must both be at least 1".into()));
    }
    space.check_element(&mu.identity())?;
    let rates = par_map(trials, |t| -> Result<f64> {
        let w = walk_endpoint_seeded(mu, n, child_seed(master_seed, t as u64))?;
        Ok(space.displacement(&w)? / n as f64)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_and_stderr(&rates);
    Ok(DriftEstimate {
        l_hat: mean,
        stderr,
        n,
        trials,
    })
}

pub(crate) fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}
