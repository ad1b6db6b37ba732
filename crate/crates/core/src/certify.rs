//! The Gromov-product ping-pong criterion.
//!
//! For isometries `g_1..g_k` and basepoint `x₀`, if
//!
//! ```text
//! d(x₀, g_i x₀) ≥ 2 (s x₀ · t x₀)_{x₀} + 18δ + 1
//! ```
//!
//! for every `i` and every pair of distinct signed generators `s ≠ t` in
//! `{g_1^{±1}, …, g_k^{±1}}`, then every reduced word `s_1⋯s_m` gives a chain
//! `x₀, s_1 x₀, s_1 s_2 x₀, …` satisfying the chain inequality, so
//! `m ≤ d(x₀, s_1⋯s_m x₀)`. The subgroup is therefore free on the `g_i`, the
//! orbit map is a quasi-isometric embedding with constants `(1, 0)` below and
//! `(M, 0)` above, and every nontrivial element is loxodromic.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{check_orbit_chain, clears};
use crate::plane::EPS_GEOM;
use crate::space::{GroupElement, ModelSpace, SpacePoint};
use crate::word::{reduced_words_of_length, FreeWord, Letter};

/// On the plane a certificate needs `margin > EPS_MARGIN`.
pub const EPS_MARGIN: f64 = 1e-6;
/// Largest number of words [`verify_certificate_bruteforce`] will enumerate.
pub const BRUTEFORCE_BUDGET: f64 = 1e6;

/// `g_i` or `g_i⁻¹`, with `generator` counted from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub generator: usize,
    pub inverse: bool,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.generator + 1)
        } else {
            write!(f, "g{}", self.generator + 1)
        }
    }
}

fn symbols(k: usize) -> Vec<Symbol> {
    (0..k)
        .flat_map(|generator| {
            [false, true].map(|inverse| Symbol { generator, inverse })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conclusions {
    pub free_of_rank_k: bool,
    pub undistorted: bool,
    pub qi_embedding: bool,
    pub purely_loxodromic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub space: ModelSpace,
    pub generators: Vec<GroupElement>,
    pub delta_used: f64,
    /// `min_i d(x₀, g_i x₀)`.
    pub min_displacement: f64,
    /// Largest Gromov product over pairs of distinct signed generators.
    pub max_product: f64,
    pub margin: f64,
    /// Multiplicative constant of `|g|_Γ ≤ c · d(x₀, g x₀)`; always 1.
    pub lower_bound_constant: f64,
    /// `M = max_i d(x₀, g_i x₀)`, so `d(x₀, g x₀) ≤ M |g|_Γ`.
    pub lipschitz_constant: f64,
    pub conclusions: Conclusions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Generator whose displacement is too small, counted from 0.
    pub generator: usize,
    pub pair: (Symbol, Symbol),
    pub displacement: f64,
    pub product: f64,
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureReport {
    pub space: ModelSpace,
    pub generators: Vec<GroupElement>,
    pub delta_used: f64,
    pub min_displacement: f64,
    pub max_product: f64,
    pub margin: f64,
    pub violations: Vec<Violation>,
    /// Only the tuple itself (power 1) is ever tested; no powers are tried.
    pub power_tested: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Certified(Certificate),
    Failed(FailureReport),
}

impl Outcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::Failed(_) => None,
        }
    }

    pub fn margin(&self) -> f64 {
        match self {
            Outcome::Certified(c) => c.margin,
            Outcome::Failed(f) => f.margin,
        }
    }
}

struct Measurements {
    displacements: Vec<f64>,
    /// `(s, t, (s x₀ · t x₀)_{x₀})` for every unordered pair of distinct symbols.
    products: Vec<(Symbol, Symbol, f64)>,
}

fn measure(gens: &[GroupElement], space: &ModelSpace) -> Result<Measurements> {
    let e = space.identity();
    let syms = symbols(gens.len());
    let elements: Vec<GroupElement> = syms
        .iter()
        .map(|s| {
            let g = &gens[s.generator];
            if s.inverse {
                g.inverse()
            } else {
                g.clone()
            }
        })
        .collect();
    let displacements = gens
        .iter()
        .map(|g| space.displacement(g))
        .collect::<Result<Vec<f64>>>()?;
    let mut products = Vec::with_capacity(syms.len() * syms.len() / 2);
    for a in 0..syms.len() {
        for b in a + 1..syms.len() {
            let p = space.element_gromov_product(&elements[a], &elements[b], &e)?;
            products.push((syms[a], syms[b], p));
        }
    }
    Ok(Measurements {
        displacements,
        products,
    })
}

fn certifies(space: &ModelSpace, margin: f64) -> bool {
    if space.is_exact() {
        margin >= 0.0
    } else {
        margin > EPS_MARGIN
    }
}

/// Evaluates the criterion at `delta` and returns a certificate or a report of
/// every violated inequality. A failure does not show that the orbit map is
/// not a quasi-isometric embedding.
pub fn criterion_check(gens: &[GroupElement], space: &ModelSpace, delta: f64) -> Result<Outcome> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("need at least one generator".into()));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
    }
    for (i, g) in gens.iter().enumerate() {
        space.check_element(g)?;
        if g.is_identity() {
            return Err(Error::InvalidArgument(format!("generator {} is the identity", i + 1)));
        }
    }
    let m = measure(gens, space)?;
    let min_displacement = m.displacements.iter().copied().fold(f64::INFINITY, f64::min);
    let lipschitz = m.displacements.iter().copied().fold(0.0, f64::max);
    let max_product = m.products.iter().map(|p| p.2).fold(0.0, f64::max);
    let additive = 18.0 * delta + 1.0;
    let margin = min_displacement - (2.0 * max_product + additive);

    if certifies(space, margin) {
        return Ok(Outcome::Certified(Certificate {
            space: *space,
            generators: gens.to_vec(),
            delta_used: delta,
            min_displacement,
            max_product,
            margin,
            lower_bound_constant: 1.0,
            lipschitz_constant: lipschitz,
            conclusions: Conclusions {
                free_of_rank_k: true,
                undistorted: true,
                qi_embedding: true,
                purely_loxodromic: true,
            },
        }));
    }

    let mut violations = Vec::new();
    for (i, &disp) in m.displacements.iter().enumerate() {
        for &(s, t, product) in &m.products {
            let required = 2.0 * product + additive;
            if !certifies(space, disp - required) {
                violations.push(Violation {
                    generator: i,
                    pair: (s, t),
                    displacement: disp,
                    product,
                    required,
                });
            }
        }
    }
    Ok(Outcome::Failed(FailureReport {
        space: *space,
        generators: gens.to_vec(),
        delta_used: delta,
        min_displacement,
        max_product,
        margin,
        violations,
        power_tested: 1,
    }))
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.12}")
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status = certified")?;
        writeln!(f, "space = {}", self.space)?;
        writeln!(f, "delta_used = {}", fmt_num(self.delta_used))?;
        writeln!(f, "k = {}", self.generators.len())?;
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(f, "generator.{} = {}", i + 1, g)?;
        }
        writeln!(f, "min_displacement = {}", fmt_num(self.min_displacement))?;
        writeln!(f, "max_product = {}", fmt_num(self.max_product))?;
        writeln!(f, "threshold = {}", fmt_num(2.0 * self.max_product + 18.0 * self.delta_used + 1.0))?;
        writeln!(f, "margin = {}", fmt_num(self.margin))?;
        writeln!(f, "lower_bound = |g|_Gamma <= {} * d(x0, g x0)", fmt_num(self.lower_bound_constant))?;
        writeln!(f, "lipschitz_constant = {}", fmt_num(self.lipschitz_constant))?;
        writeln!(f, "free_of_rank_k = {}", self.conclusions.free_of_rank_k)?;
        writeln!(f, "undistorted = {}", self.conclusions.undistorted)?;
        writeln!(f, "qi_embedding = {}", self.conclusions.qi_embedding)?;
        writeln!(f, "purely_loxodromic = {}", self.conclusions.purely_loxodromic)?;
        writeln!(f, "note = sound relative to delta_used = {}", fmt_num(self.delta_used))
    }
}

impl fmt::Display for FailureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status = failed")?;
        writeln!(f, "space = {}", self.space)?;
        writeln!(f, "delta_used = {}", fmt_num(self.delta_used))?;
        writeln!(f, "k = {}", self.generators.len())?;
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(f, "generator.{} = {}", i + 1, g)?;
        }
        writeln!(f, "min_displacement = {}", fmt_num(self.min_displacement))?;
        writeln!(f, "max_product = {}", fmt_num(self.max_product))?;
        writeln!(f, "margin = {}", fmt_num(self.margin))?;
        writeln!(f, "violations = {}", self.violations.len())?;
        for (n, v) in self.violations.iter().enumerate() {
            writeln!(
                f,
                "violation.{} = i=g{} pair=({}, {}) displacement={} product={} required={}",
                n + 1,
                v.generator + 1,
                v.pair.0,
                v.pair.1,
                fmt_num(v.displacement),
                fmt_num(v.product),
                fmt_num(v.required)
            )?;
        }
        writeln!(f, "power_tested = {}", self.power_tested)?;
        writeln!(f, "note = failure does not prove the orbit map is not a quasi-isometric embedding")
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Certified(c) => c.fmt(f),
            Outcome::Failed(r) => r.fmt(f),
        }
    }
}

/// Substitutes the generators into a word over `k` abstract letters.
pub fn evaluate(word: &FreeWord, gens: &[GroupElement], space: &ModelSpace) -> Result<GroupElement> {
    let mut acc = space.identity();
    for l in word.letters() {
        let g = gens
            .get(l.generator() as usize - 1)
            .ok_or(Error::GeneratorOutOfRange {
                index: l.generator() as usize,
                rank: gens.len() as u8,
            })?;
        if l.is_inverse() {
            acc.mul_assign(&g.inverse())?;
        } else {
            acc.mul_assign(g)?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceReport {
    pub max_len: usize,
    /// Nontrivial reduced words checked.
    pub words_checked: usize,
    /// Orbit points compared for distinctness, including `x₀`.
    pub distinct_points: usize,
    /// Smallest `d(x₀, g x₀)/|g|_Γ` seen.
    pub min_ratio: f64,
    /// Largest `d(x₀, g x₀)/|g|_Γ` seen.
    pub max_ratio: f64,
}

fn word_count(k: usize, max_len: usize) -> f64 {
    let s = (2 * k) as f64;
    (1..=max_len).map(|m| s * (s - 1.0).powi(m as i32 - 1)).sum()
}

/// Enumerates every reduced word of length `1..=max_len` in the signed
/// generators and checks `m ≤ d(x₀, g x₀) ≤ M m`, the chain inequality along
/// the word's orbit chain, and that all orbit points (with `x₀`) are distinct.
pub fn verify_certificate_bruteforce(
    gens: &[GroupElement],
    space: &ModelSpace,
    cert: &Certificate,
    max_len: usize,
) -> Result<BruteForceReport> {
    if max_len == 0 {
        return Err(Error::InvalidArgument("max_len must be at least 1".into()));
    }
    let needed = word_count(gens.len(), max_len);
    if needed > BRUTEFORCE_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: BRUTEFORCE_BUDGET,
        });
    }
    let tol = if space.is_exact() { 0.0 } else { EPS_GEOM };
    let signed: Vec<(Letter, GroupElement)> = (1..=gens.len() as u8)
        .flat_map(|g| {
            let e = &gens[g as usize - 1];
            [(Letter::new(g, false), e.clone()), (Letter::new(g, true), e.inverse())]
        })
        .collect();

    let mut report = BruteForceReport {
        max_len,
        words_checked: 0,
        distinct_points: 0,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
    };
    let mut elements = vec![space.identity()];

    struct Frame {
        last: Option<Letter>,
        chain: Vec<GroupElement>,
        word: String,
    }
    let mut stack = vec![Frame {
        last: None,
        chain: vec![space.identity()],
        word: String::new(),
    }];
    while let Some(frame) = stack.pop() {
        let m = frame.chain.len();
        if m > max_len {
            continue;
        }
        let current = frame.chain.last().expect("chain starts at the identity");
        for (letter, g) in signed.iter().rev() {
            if frame.last == Some(letter.inverse()) {
                continue;
            }
            let element = current.mul(g)?;
            let d = space.displacement(&element)?;
            let mut word = frame.word.clone();
            word.push(letter.to_char());
            let len = m as f64;
            if len > d + tol {
                return Err(Error::CertificateRefuted(format!(
                    "word {word}: length {m} exceeds displacement {d}"
                )));
            }
            if d > cert.lipschitz_constant * len + tol {
                return Err(Error::CertificateRefuted(format!(
                    "word {word}: displacement {d} exceeds {} * {m}",
                    cert.lipschitz_constant
                )));
            }
            let mut chain = frame.chain.clone();
            chain.push(element.clone());
            let check = check_orbit_chain(space, &chain, cert.delta_used)?;
            if !check.holds {
                return Err(Error::CertificateRefuted(format!(
                    "word {word}: chain inequality fails at index {:?}",
                    check.first_violation
                )));
            }
            report.words_checked += 1;
            report.min_ratio = report.min_ratio.min(d / len);
            report.max_ratio = report.max_ratio.max(d / len);
            elements.push(element);
            stack.push(Frame {
                last: Some(*letter),
                chain,
                word,
            });
        }
    }
    report.distinct_points = elements.len();
    if let Some((i, j)) = first_coincidence(space, &elements)? {
        return Err(Error::CertificateRefuted(format!(
            "orbit points of {} and {} coincide",
            elements[i], elements[j]
        )));
    }
    Ok(report)
}

/// Two elements whose orbit points coincide, if any.
fn first_coincidence(space: &ModelSpace, elements: &[GroupElement]) -> Result<Option<(usize, usize)>> {
    #[derive(PartialEq, Eq, Hash)]
    enum Key {
        Word(FreeWord),
        Point(i128, i128),
    }
    let keys: Option<Vec<Key>> = elements
        .iter()
        .map(|g| match g {
            GroupElement::Word(w) => Some(Key::Word(w.clone())),
            GroupElement::Matrix(m) => m.orbit_key().map(|(x, n)| Key::Point(x, n)),
        })
        .collect();
    if let Some(keys) = keys {
        let mut seen = HashMap::new();
        for (i, k) in keys.into_iter().enumerate() {
            if let Some(&j) = seen.get(&k) {
                return Ok(Some((j, i)));
            }
            seen.insert(k, i);
        }
        return Ok(None);
    }
    // Float matrices: sweep by real part, confirm with element distances.
    // Points within EPS_GEOM of each other have |Δx| ≤ sqrt(y y') EPS_GEOM (1 + o(1)).
    let coords = elements
        .iter()
        .map(|g| match space.orbit_point(g)? {
            SpacePoint::Plane(z) => Ok((z.x(), z.y())),
            SpacePoint::Vertex(_) => Ok((0.0, 1.0)),
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&a, &b| coords[a].0.total_cmp(&coords[b].0));
    let max_y = coords.iter().map(|c| c.1).fold(0.0, f64::max);
    let window = 2.0 * max_y * EPS_GEOM + 1e-12;
    for (n, &a) in order.iter().enumerate() {
        for &b in &order[n + 1..] {
            if coords[b].0 - coords[a].0 > window {
                break;
            }
            if space.element_distance(&elements[a], &elements[b])? <= EPS_GEOM {
                return Ok(Some((a.min(b), a.max(b))));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoxodromicReport {
    pub words_checked: usize,
    /// Smallest `|trace|` among the words, for matrix generators.
    pub min_abs_trace: Option<f64>,
    /// Words that failed either the displacement-growth or the trace test.
    pub failures: Vec<String>,
}

/// For every nontrivial reduced word `u` of length `≤ max_len` in the
/// generators, with cyclically reduced length `ℓ`, checks
/// `d(x₀, u^n x₀) ≥ n ℓ` for `n ≤ max_power`. For integer matrices it also
/// checks `|trace(u)| > 2` exactly.
pub fn loxodromic_witness(
    gens: &[GroupElement],
    space: &ModelSpace,
    max_len: usize,
    max_power: u32,
) -> Result<LoxodromicReport> {
    let k = gens.len();
    if k == 0 || k > crate::word::MAX_RANK as usize {
        return Err(Error::InvalidArgument(format!("unsupported generator count {k}")));
    }
    let tol = if space.is_exact() { 0.0 } else { EPS_GEOM };
    let mut report = LoxodromicReport {
        words_checked: 0,
        min_abs_trace: None,
        failures: Vec::new(),
    };
    for len in 1..=max_len {
        for u in reduced_words_of_length(k as u8, len) {
            let ell = u.cyclically_reduce().len() as f64;
            let g = evaluate(&u, gens, space)?;
            let mut power = space.identity();
            for n in 1..=max_power {
                power.mul_assign(&g)?;
                let d = space.displacement(&power)?;
                if d + tol < n as f64 * ell {
                    report
                        .failures
                        .push(format!("{u}^{n}: displacement {d} < {}", n as f64 * ell));
                }
            }
            if let GroupElement::Matrix(m) = &g {
                let abs_trace = match m.exact_trace() {
                    Some(t) => {
                        if t.abs() <= 2 {
                            report.failures.push(format!("{u}: exact trace {t}"));
                        }
                        t.unsigned_abs() as f64
                    }
                    None => {
                        let t = m.trace().abs();
                        if !clears(space, t, 2.0) {
                            report.failures.push(format!("{u}: trace {t}"));
                        }
                        t
                    }
                };
                report.min_abs_trace = Some(report.min_abs_trace.map_or(abs_trace, |x| x.min(abs_trace)));
            }
            report.words_checked += 1;
        }
    }
    Ok(report)
}

/// Distinct symbols paired with themselves never appear; kept for tests and reports.
pub fn pair_count(k: usize) -> usize {
    let s = 2 * k;
    s * (s - 1) / 2
}

/// Orbit points `x₀` and `u x₀` for all reduced words `u` of length `≤ max_len`,
/// used for pictures.
pub fn orbit_points(gens: &[GroupElement], space: &ModelSpace, max_len: usize) -> Result<Vec<(FreeWord, SpacePoint)>> {
    let k = gens.len() as u8;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for len in 0..=max_len {
        for u in reduced_words_of_length(k, len) {
            if seen.insert(u.clone()) {
                let g = evaluate(&u, gens, space)?;
                out.push((u, space.orbit_point(&g)?));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::Moebius;

    fn tree(rank: usize) -> ModelSpace {
        ModelSpace::tree(rank).unwrap()
    }

    fn gens(rank: usize, ws: &[&str]) -> Vec<GroupElement> {
        ws.iter()
            .map(|s| GroupElement::Word(FreeWord::parse(s, rank).unwrap()))
            .collect()
    }

    #[test]
    fn powers_of_basis_are_certified() {
        let out = criterion_check(&gens(2, &["aaaaa", "bbbbb"]), &tree(2), 0.0).unwrap();
        let c = out.certificate().expect("certified");
        assert_eq!(c.margin, 4.0);
        assert_eq!(c.max_product, 0.0);
        assert_eq!(c.min_displacement, 5.0);
        assert_eq!(c.lipschitz_constant, 5.0);
        assert!(c.conclusions.free_of_rank_k && c.conclusions.purely_loxodromic);
    }

    #[test]
    fn shared_prefix_fails() {
        let out = criterion_check(&gens(2, &["aab", "aaB"]), &tree(2), 0.0).unwrap();
        let Outcome::Failed(r) = out else { panic!("should fail") };
        assert_eq!(r.max_product, 2.0);
        assert_eq!(r.min_displacement, 3.0);
        assert_eq!(r.margin, -2.0);
        let v = r
            .violations
            .iter()
            .find(|v| v.product == 2.0)
            .expect("the shared-prefix pair is reported");
        assert_eq!(v.pair.0, Symbol { generator: 0, inverse: false });
        assert_eq!(v.pair.1, Symbol { generator: 1, inverse: false });
        assert_eq!(v.required, 5.0);
        // Both generators fail against that pair.
        assert_eq!(r.violations.len(), 2);
        assert_eq!(r.power_tested, 1);
    }

    #[test]
    fn ab_ba_is_certified() {
        let out = criterion_check(&gens(2, &["ab", "ba"]), &tree(2), 0.0).unwrap();
        let c = out.certificate().expect("certified");
        assert_eq!(c.max_product, 0.0);
        assert_eq!(c.margin, 1.0);
    }

    #[test]
    fn argument_errors() {
        let t = tree(2);
        assert!(criterion_check(&gens(2, &["a", "1"]), &t, 0.0).is_err());
        assert!(criterion_check(&gens(2, &["a"]), &t, -1.0).is_err());
        assert!(criterion_check(&[], &t, 0.0).is_err());
        assert!(criterion_check(&gens(3, &["c"]), &t, 0.0).is_err());
    }

    #[test]
    fn self_inverse_pair_is_included() {
        // a b A: (g·g⁻¹) = (abA · aBA) = 1, so 3 ≥ 2·1 + 1 is needed.
        let out = criterion_check(&gens(2, &["abA"]), &tree(2), 0.0).unwrap();
        assert_eq!(out.margin(), 0.0);
        assert_eq!(pair_count(1), 1);
        assert_eq!(pair_count(2), 6);
    }

    #[test]
    fn bruteforce_on_basis_powers() {
        let g = gens(2, &["aaaaa", "bbbbb"]);
        let t = tree(2);
        let out = criterion_check(&g, &t, 0.0).unwrap();
        let cert = out.certificate().unwrap();
        let r = verify_certificate_bruteforce(&g, &t, cert, 3).unwrap();
        assert_eq!(r.words_checked, 52);
        assert_eq!(r.distinct_points, 53);
        assert_eq!(r.min_ratio, 5.0);
        assert_eq!(r.max_ratio, 5.0);

        let r1 = verify_certificate_bruteforce(&g, &t, cert, 1).unwrap();
        assert_eq!(r1.words_checked, 4);
        assert_eq!(r1.min_ratio, cert.min_displacement);
    }

    #[test]
    fn bruteforce_refutes_forged_certificate() {
        let g = gens(2, &["aab", "aaB"]);
        let t = tree(2);
        let forged = Certificate {
            space: t,
            generators: g.clone(),
            delta_used: 0.0,
            min_displacement: 3.0,
            max_product: 0.0,
            margin: 2.0,
            lower_bound_constant: 1.0,
            lipschitz_constant: 3.0,
            conclusions: Conclusions {
                free_of_rank_k: true,
                undistorted: true,
                qi_embedding: true,
                purely_loxodromic: true,
            },
        };
        assert!(matches!(
            verify_certificate_bruteforce(&g, &t, &forged, 2),
            Err(Error::CertificateRefuted(_))
        ));
    }

    #[test]
    fn bruteforce_budget() {
        let g = gens(3, &["aaaaa", "bbbbb", "ccccc"]);
        let t = tree(3);
        let cert = criterion_check(&g, &t, 0.0).unwrap().certificate().unwrap().clone();
        assert!(matches!(
            verify_certificate_bruteforce(&g, &t, &cert, 9),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(verify_certificate_bruteforce(&g, &t, &cert, 0).is_err());
    }

    #[test]
    fn loxodromic_witness_on_tree() {
        let g = gens(2, &["aaaaa", "bbbbb"]);
        let r = loxodromic_witness(&g, &tree(2), 3, 5).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert_eq!(r.words_checked, 4 + 12 + 36);
        assert_eq!(r.min_abs_trace, None);
    }

    #[test]
    fn parabolic_generator_fails_trace_test() {
        let p = ModelSpace::plane(0.0).unwrap();
        let a = GroupElement::Matrix(Moebius::from_integers(1, 2, 0, 1).unwrap());
        let r = loxodromic_witness(&[a], &p, 1, 1).unwrap();
        assert_eq!(r.min_abs_trace, Some(2.0));
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn report_text_is_key_value() {
        let out = criterion_check(&gens(2, &["aaaaa", "bbbbb"]), &tree(2), 0.0).unwrap();
        let text = out.to_string();
        assert!(text.lines().all(|l| l.contains(" = ")));
        assert!(text.contains("margin = 4\n"));
        assert!(text.contains("delta_used = 0\n"));
        let fail = criterion_check(&gens(2, &["aab", "aaB"]), &tree(2), 0.0).unwrap();
        let text = fail.to_string();
        assert!(text.contains("status = failed"));
        assert!(text.contains("pair=(g1, g2)"));
    }

    #[test]
    fn evaluate_substitutes() {
        let g = gens(2, &["ab", "ba"]);
        let t = tree(2);
        let u = FreeWord::parse("aB", 2).unwrap();
        assert_eq!(evaluate(&u, &g, &t).unwrap(), gens(2, &["abAB"])[0]);
    }

    #[test]
    fn orbit_point_listing() {
        let g = gens(2, &["aa", "bb"]);
        let pts = orbit_points(&g, &tree(2), 2).unwrap();
        assert_eq!(pts.len(), 1 + 4 + 12);
    }
}
