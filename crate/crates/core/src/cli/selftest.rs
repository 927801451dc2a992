use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::commands::certified_dictionary;
use crate::coverings::{
    axis_cover, basis_cover, dictionary_cover_banach, dictionary_cover_l2, etf_cover, iterate_cover,
    simplex_cover_shrunk, simplex_cover_unit, BallCovering,
};
use crate::error::Result;
use crate::frames::etf_of_dimension;
use crate::hadamard::{sylvester, verify_hadamard};
use crate::spaces::{sample_ball, sample_sphere, split_seed, LpSpace, SmoothnessMajorant};
use crate::verify::{
    adversarial_search, certify_sampling, heavy_coordinate, linf_vertex_check, simplex_dichotomy, uncovered_witness,
};

const SAMPLES: usize = 2000;
const RESTARTS: usize = 10;
const STEPS: usize = 100;

#[derive(Clone, Debug, Serialize)]
pub struct SelftestCase {
    pub name: String,
    pub passed: bool,
    /// Smallest margin observed, where the case measures one.
    pub worst_margin: Option<f64>,
}

fn case(name: impl Into<String>, passed: bool, worst_margin: Option<f64>) -> SelftestCase {
    SelftestCase { name: name.into(), passed, worst_margin }
}

fn coverage_case(name: String, cov: &BallCovering<f64>, adversarial: bool, seed: u64) -> Result<SelftestCase> {
    let report = certify_sampling(cov, SAMPLES, SAMPLES, seed)?;
    let mut passed = report.passed;
    let mut worst = report.worst_margin;
    if adversarial {
        let adv = adversarial_search(cov, RESTARTS, STEPS, seed)?;
        passed &= adv.passed;
        worst = worst.min(adv.margin);
    }
    Ok(case(name, passed, Some(worst)))
}

fn cases(seed: u64) -> Result<Vec<SelftestCase>> {
    let mut out = Vec::new();

    let hadamard_ok = (0..=10).all(|k| sylvester(k).is_ok_and(|h| verify_hadamard(&h.to_rows())));
    out.push(case("hadamard sylvester k <= 10", hadamard_ok, None));

    for d in [1usize, 3, 7, 15, 31, 63] {
        let dev = etf_of_dimension::<f64>(d)?.gram_deviation();
        out.push(case(format!("etf gram d={d}"), dev <= 1e-12, Some(-dev)));
    }

    for d in [1usize, 2, 4, 8] {
        let (cov, _) = simplex_cover_unit::<f64>(d)?;
        let mut c = coverage_case(format!("simplex d={d}"), &cov, false, seed)?;
        let space = LpSpace::<f64>::euclidean(d)?;
        let mut points = sample_ball(&space, SAMPLES, split_seed(seed, 10))?;
        points.extend(sample_sphere(&space, SAMPLES, split_seed(seed, 11))?);
        for y in &points {
            c.passed &= simplex_dichotomy(d, y)?;
        }
        out.push(c);
    }
    for d in [2usize, 4, 8] {
        let (cov, _) = simplex_cover_shrunk::<f64>(d)?;
        out.push(coverage_case(format!("simplex-shrunk d={d}"), &cov, true, seed)?);
    }
    for d in [1usize, 3, 7] {
        let (cov, _) = etf_cover::<f64>(d)?;
        out.push(coverage_case(format!("etf cover d={d}"), &cov, true, seed)?);
    }
    for d in [1usize, 4, 16] {
        let (cov, _) = axis_cover::<f64>(d)?;
        out.push(coverage_case(format!("axis d={d}"), &cov, true, seed)?);
    }
    let (axis2, _) = axis_cover::<f64>(2)?;
    out.push(coverage_case("axis d=2 iterated twice".into(), &iterate_cover(&axis2, 2)?, true, seed)?);

    let l4 = LpSpace::<f64>::new(4, 4.0)?;
    let omega4 = SmoothnessMajorant::for_space(&l4)?;
    out.push(coverage_case("basis l4 d=4".into(), &basis_cover(&l4, 1.0, &omega4)?, true, seed)?);

    let l2 = LpSpace::<f64>::euclidean(4)?;
    let dict = certified_dictionary(&l2, 0.5, SAMPLES, seed)?;
    out.push(coverage_case("dict-l2 d=4 mu=0.5".into(), &dictionary_cover_l2(&dict, 0.5)?, true, seed)?);

    let dict = certified_dictionary(&l4, 0.5, SAMPLES, seed)?;
    out.push(coverage_case(
        "dict-banach l4 d=4 mu=0.5".into(),
        &dictionary_cover_banach(&dict, 0.5, &omega4)?,
        true,
        seed,
    )?);

    for p in [1.5, 2.0, 3.0] {
        let space = LpSpace::<f64>::new(3, p)?;
        let mut worst = f64::INFINITY;
        for t in 0..20u64 {
            let centers = sample_ball(&space, 3, split_seed(seed, 100 + t))?;
            let z = uncovered_witness(&space, &centers)?;
            for c in &centers {
                worst = worst.min(space.distance(&z, c)? - 1.0);
            }
        }
        out.push(case(format!("witness p={p} d=3"), worst >= -1e-9, Some(worst)));
    }

    for d in [1usize, 2, 3, 6] {
        let r = linf_vertex_check(d, SAMPLES, 100, seed)?;
        out.push(case(format!("linf vertices d={d}"), r.passed, Some(r.worst_margin)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, 12));
    let mut selector_ok = true;
    for _ in 0..1000 {
        let n = rng.random_range(2..=50);
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        let y: Vec<f64> = raw.iter().map(|v| v - mean).collect();
        let k = heavy_coordinate(&y)?;
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        selector_ok &= y[k] >= norm / (2.0 * (n - 1) as f64);
    }
    out.push(case("selector on 1000 zero-sum vectors", selector_ok, None));
    Ok(out)
}

pub(crate) fn run_selftest(seed: u64) -> Result<(Value, bool)> {
    let cases = cases(seed)?;
    let passed = cases.iter().all(|c| c.passed);
    Ok((json!({ "seed": seed, "passed": passed, "cases": cases }), passed))
}

/// Selftest report as pretty JSON; identical seeds give identical bytes.
pub fn selftest_report(seed: u64) -> Result<String> {
    Ok(serde_json::to_string_pretty(&run_selftest(seed)?.0)?)
}
