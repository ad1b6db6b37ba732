//! Worked examples checked against values computed independently of the
//! library: closed-form plane distances, hand enumeration of products, and
//! the birth-death drift formula.

use std::collections::HashMap;

use hypwalk::certify::{
    criterion_check, loxodromic_witness, verify_certificate_bruteforce, Outcome,
};
use hypwalk::geometry::{check_chain_inequality, estimate_delta, PointSampler};
use hypwalk::moebius::{IsometryKind, Moebius};
use hypwalk::plane::PlanePoint;
use hypwalk::walk::{
    estimate_drift, exact_distribution, rng_from_seed, sample_generator_tuple, total_variation,
    Measure,
};
use hypwalk::word::FreeWord;
use hypwalk::{GroupElement, ModelSpace, SpacePoint};

fn word(s: &str) -> GroupElement {
    GroupElement::Word(FreeWord::parse(s, 2).unwrap())
}

fn vertex(s: &str) -> SpacePoint {
    SpacePoint::Vertex(FreeWord::parse(s, 2).unwrap())
}

fn pt(x: f64, y: f64) -> SpacePoint {
    SpacePoint::Plane(PlanePoint::new(x, y).unwrap())
}

#[test]
fn plane_products_follow_the_log_formula() {
    let plane = ModelSpace::plane(0.0).unwrap();
    let g = plane.gromov_product(&pt(0.0, 2.0), &pt(0.0, 2.0), &pt(0.0, 1.0)).unwrap();
    assert!((g - 2f64.ln()).abs() < 1e-6);
    let d = plane.distance(&pt(0.0, 1.0), &pt(0.0, 4.0)).unwrap();
    assert!((d - 1.3862943611198906).abs() < 1e-6);
}

#[test]
fn tree_distance_of_sign_flip() {
    let tree = ModelSpace::tree(2).unwrap();
    // (ab)⁻¹(aB) = B A a B = BB
    assert_eq!(tree.distance(&vertex("ab"), &vertex("aB")).unwrap(), 2.0);
    assert_eq!(tree.gromov_product(&vertex("ab"), &vertex("aB"), &vertex("1")).unwrap(), 1.0);
}

#[test]
fn long_alternating_chain() {
    let tree = ModelSpace::tree(2).unwrap();
    let chain: Vec<SpacePoint> = ["1", "ab", "abab", "ababab"].iter().map(|s| vertex(s)).collect();
    assert!(check_chain_inequality(&tree, &chain, 0.0).unwrap().holds);
    assert_eq!(tree.distance(&chain[0], &chain[3]).unwrap(), 6.0);
}

#[test]
fn hyperbolic_translation_length() {
    let m = Moebius::from_integers(2, 1, 1, 1).unwrap();
    let c = m.classify().unwrap();
    assert_eq!(c.kind, IsometryKind::Loxodromic);
    assert!((c.translation_length - 1.9248473002384139).abs() < 1e-9);
    // d(x₀, gⁿ x₀)/n → ℓ; the offset is bounded so the slope over n ∈ [25, 50] matches.
    let mut z = PlanePoint::base();
    let mut d = Vec::new();
    for _ in 0..50 {
        z = m.apply(z).unwrap();
        d.push(PlanePoint::base().distance(&z));
    }
    let slope = (d[49] - d[24]) / 25.0;
    assert!((slope - c.translation_length).abs() < 1e-6);
}

#[test]
fn two_step_law_of_uniform_walk() {
    let mu = Measure::uniform_symmetric(2).unwrap();
    let law = exact_distribution(&mu, 2).unwrap();
    // 16 equally likely products; 4 of them cancel.
    let mut hand: HashMap<String, f64> = HashMap::new();
    for x in ["a", "A", "b", "B"] {
        for y in ["a", "A", "b", "B"] {
            let w = FreeWord::parse(&format!("{x}{y}"), 2).unwrap();
            *hand.entry(w.to_string()).or_insert(0.0) += 1.0 / 16.0;
        }
    }
    assert_eq!(law.len(), hand.len());
    for (g, p) in &law {
        assert!((hand[&g.to_string()] - p).abs() < 1e-15);
    }
    assert!((law[&word("1")] - 0.25).abs() < 1e-15);
    assert!((law[&word("aa")] - 1.0 / 16.0).abs() < 1e-15);
}

#[test]
fn asymmetric_reflected_law_by_hand() {
    let mu = Measure::new(vec![(word("a"), 0.7), (word("b"), 0.3)]).unwrap();
    let inverted: HashMap<GroupElement, f64> = exact_distribution(&mu, 2)
        .unwrap()
        .into_iter()
        .map(|(g, p)| (g.inverse(), p))
        .collect();
    let reflected = exact_distribution(&mu.reflected(), 2).unwrap();
    assert!(total_variation(&inverted, &reflected) < 1e-15);
    assert!((reflected[&word("AA")] - 0.49).abs() < 1e-15);
    assert!((reflected[&word("AB")] - 0.21).abs() < 1e-15);
    assert!((reflected[&word("BA")] - 0.21).abs() < 1e-15);
    assert!((reflected[&word("BB")] - 0.09).abs() < 1e-15);
}

#[test]
fn first_step_frequencies() {
    let mu = Measure::uniform_symmetric(2).unwrap();
    let mut rng = rng_from_seed(11);
    let mut counts: HashMap<String, usize> = HashMap::new();
    for _ in 0..100_000 {
        *counts.entry(mu.sample(&mut rng).to_string()).or_insert(0) += 1;
    }
    for l in ["a", "A", "b", "B"] {
        let f = counts[l] as f64 / 1e5;
        assert!((f - 0.25).abs() <= 0.005, "{l}: {f}");
    }
}

#[test]
fn joint_first_steps_of_two_walks_are_uniform() {
    let mu = Measure::uniform_symmetric(2).unwrap();
    let mut counts: HashMap<(String, String), f64> = HashMap::new();
    let draws = 100_000;
    for s in 0..draws {
        let t = sample_generator_tuple(&mu, 1, 2, s).unwrap();
        let key = (t.elements[0].to_string(), t.elements[1].to_string());
        *counts.entry(key).or_insert(0.0) += 1.0 / draws as f64;
    }
    assert_eq!(counts.len(), 16);
    let tv: f64 = counts.values().map(|p| (p - 1.0 / 16.0).abs()).sum::<f64>() / 2.0;
    assert!(tv <= 0.01, "TV {tv}");
}

#[test]
fn drift_matches_birth_death_formula() {
    for rank in [2usize, 3] {
        let oracle = (2.0 * rank as f64 - 2.0) / (2.0 * rank as f64);
        let est = estimate_drift(
            &Measure::uniform_symmetric(rank).unwrap(),
            &ModelSpace::tree(rank).unwrap(),
            10_000,
            200,
            rank as u64,
        )
        .unwrap();
        assert!((est.l_hat - oracle).abs() <= 0.02, "rank {rank}: {}", est.l_hat);
        assert!(est.l_hat - 3.0 * est.stderr > 0.0);
    }
    let point = Measure::new(vec![(word("a"), 1.0)]).unwrap();
    let est = estimate_drift(&point, &ModelSpace::tree(2).unwrap(), 37, 5, 0).unwrap();
    assert_eq!(est.l_hat, 1.0);
}

#[test]
fn certifier_examples() {
    let tree = ModelSpace::tree(2).unwrap();
    let out = criterion_check(&[word("aaaaa"), word("bbbbb")], &tree, 0.0).unwrap();
    assert!(out.is_certified());
    assert_eq!(out.margin(), 4.0);

    let out = criterion_check(&[word("aab"), word("aaB")], &tree, 0.0).unwrap();
    let Outcome::Failed(report) = out else { panic!("expected failure") };
    assert!(report.violations.iter().all(|v| v.product == 2.0 && v.required == 5.0));
    assert_eq!(report.min_displacement, 3.0);

    let out = criterion_check(&[word("ab"), word("ba")], &tree, 0.0).unwrap();
    assert!(out.is_certified());
    assert_eq!(out.margin(), 1.0);
}

#[test]
fn bruteforce_counts() {
    let tree = ModelSpace::tree(2).unwrap();
    let gens = [word("aaaaa"), word("bbbbb")];
    let out = criterion_check(&gens, &tree, 0.0).unwrap();
    let cert = out.certificate().unwrap();
    let r = verify_certificate_bruteforce(&gens, &tree, cert, 3).unwrap();
    assert_eq!(r.words_checked, 4 + 12 + 36);
    assert_eq!(r.distinct_points, 53);
    assert!(r.min_ratio >= 1.0 && r.max_ratio <= 5.0);

    let r = verify_certificate_bruteforce(&gens, &tree, cert, 1).unwrap();
    assert_eq!(r.words_checked, 4);
    assert_eq!((r.min_ratio, r.max_ratio), (5.0, 5.0));
}

fn mat_pow(m: [i128; 4], p: u32) -> [i128; 4] {
    let mut acc = [1, 0, 0, 1];
    for _ in 0..p {
        acc = [
            acc[0] * m[0] + acc[1] * m[2],
            acc[0] * m[1] + acc[1] * m[3],
            acc[2] * m[0] + acc[3] * m[2],
            acc[2] * m[1] + acc[3] * m[3],
        ];
    }
    acc
}

/// Loxodromic plane benchmark: twelfth powers of [[2,1],[1,1]] and of its
/// mirror image [[2,-1],[-1,1]] have disjoint axes and certify at the sampled δ.
#[test]
fn loxodromic_pair_certifies_on_the_plane() {
    let plane0 = ModelSpace::plane(0.0).unwrap();
    let mut rng = rng_from_seed(5);
    let sampler = PointSampler::PlaneBall { radius: 20.0 };
    let est = estimate_delta(&plane0, || sampler.sample(&plane0, &mut rng), 20_000, 1.5).unwrap();
    let space = plane0.with_delta(est.delta_used).unwrap();
    let gens: Vec<GroupElement> = [[2, 1, 1, 1], [2, -1, -1, 1]]
        .iter()
        .map(|&m| {
            let [a, b, c, d] = mat_pow(m, 12);
            GroupElement::Matrix(Moebius::from_integers(a, b, c, d).unwrap())
        })
        .collect();
    let out = criterion_check(&gens, &space, space.delta()).unwrap();
    let cert = out.certificate().expect("certified");
    assert!(cert.margin > 1.0);
    let r = verify_certificate_bruteforce(&gens, &space, cert, 3).unwrap();
    assert_eq!(r.distinct_points, 1 + 4 + 12 + 36);
    let lox = loxodromic_witness(&gens, &space, 3, 2).unwrap();
    assert!(lox.failures.is_empty(), "{:?}", lox.failures);
    assert_eq!(lox.words_checked, 52);
    assert!(lox.min_abs_trace.unwrap() > 2.0);
}

/// The parabolic generators never certify once δ exceeds (2 ln 2 − 1)/18:
/// both displacement and the worst product grow like 2 ln m and ln m.
#[test]
fn parabolic_pair_margin_limit() {
    let limit = |delta: f64| 2.0 * 2f64.ln() - 18.0 * delta - 1.0;
    let a = Moebius::from_integers(1, 2, 0, 1).unwrap();
    let b = Moebius::from_integers(1, 0, 2, 1).unwrap();
    for delta in [0.0, 0.5] {
        let space = ModelSpace::plane(delta).unwrap();
        let m = 2000;
        let gens = [
            GroupElement::Matrix(a.pow(m).unwrap()),
            GroupElement::Matrix(b.pow(m).unwrap()),
        ];
        let out = criterion_check(&gens, &space, delta).unwrap();
        assert!((out.margin() - limit(delta)).abs() < 1e-3, "{}", out.margin());
    }
}
