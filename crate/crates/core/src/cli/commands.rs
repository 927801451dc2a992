use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::{BoundsCommand, BuildArgs, Cli, Command, Construction, CoverCommand, DictCommand, Outcome};
use crate::bounds::{covering_bound_table, parse_grid, write_csv, BoundConstants};
use crate::coverings::{
    axis_cover, basis_cover, dictionary_cover_banach, dictionary_cover_l2, etf_cover, iterate_cover,
    simplex_cover_shrunk, simplex_cover_unit, BallCovering, CoverMargin,
};
use crate::dictionaries::{
    coherence, coherence_matrix, greedy_maximal_dictionary, maximal_dictionary, CompletionBudget, Dictionary,
    DEFAULT_SATURATION_TRIALS,
};
use crate::error::{Error, Result};
use crate::frames::{etf_from_hadamard, verify_frame_identities};
use crate::hadamard::{normalize_first_row, HadamardMatrix};
use crate::spaces::{sample_ball, LpSpace, SmoothnessMajorant};
use crate::verify::{adversarial_search, certify_maximality, certify_sampling, uncovered_witness};

/// Rank tolerance relative to the largest singular value.
const RANK_TOLERANCE: f64 = 1e-10;

pub(crate) fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Hadamard { order, out } => hadamard(*order, out.as_deref(), seed),
        Command::Etf { order, out } => etf(*order, out.as_deref(), seed),
        Command::Dict(DictCommand::Greedy { d, p, mu, saturation, complete, out }) => {
            dict_greedy(*d, *p, *mu, *saturation, *complete, out.as_deref(), seed)
        }
        Command::Dict(DictCommand::Coherence { input }) => dict_coherence(input, seed),
        Command::Cover(CoverCommand::Build(args)) => cover_build(args, seed),
        Command::Cover(CoverCommand::Verify { input, samples, adversarial, steps }) => {
            cover_verify(input, *samples, *adversarial, *steps, seed)
        }
        Command::Witness { d, p, centers, out } => witness(*d, *p, centers, out.as_deref(), seed),
        Command::Bounds(BoundsCommand::Table { d, p, delta_grid, csv, c1, c2, c }) => {
            let defaults = BoundConstants::default();
            let constants = if c1.is_some() || c2.is_some() || c.is_some() {
                BoundConstants::new(c1.unwrap_or(defaults.c1), c2.unwrap_or(defaults.c2), c.unwrap_or(defaults.c_generic))?
            } else {
                defaults
            };
            bounds_table(*d, *p, delta_grid, csv.as_deref(), &constants, seed)
        }
        Command::Selftest { out } => {
            let (report, passed) = super::selftest::run_selftest(seed)?;
            if let Some(path) = out {
                write_json(path, &report)?;
            }
            let failed: Vec<&str> = report["cases"]
                .as_array()
                .map(|cases| {
                    cases
                        .iter()
                        .filter(|c| c["passed"] != Value::Bool(true))
                        .filter_map(|c| c["name"].as_str())
                        .collect()
                })
                .unwrap_or_default();
            let total = report["cases"].as_array().map_or(0, Vec::len);
            let summary = if failed.is_empty() {
                format!("selftest: {total} cases passed (seed {seed})")
            } else {
                format!("selftest: {} of {total} cases failed: {}", failed.len(), failed.join(", "))
            };
            Ok(Outcome { report, summary, passed })
        }
    }
}

pub(crate) fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_json(path: &Path) -> Result<Value> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

fn with_seed<S: Serialize>(body: &S, seed: u64) -> Result<Value> {
    let mut v = serde_json::to_value(body)?;
    match v.as_object_mut() {
        Some(map) => {
            map.insert("seed".into(), json!(seed));
            Ok(v)
        }
        None => Ok(json!({ "value": v, "seed": seed })),
    }
}

fn hadamard(order: usize, out: Option<&Path>, seed: u64) -> Result<Outcome> {
    let h = HadamardMatrix::of_order(order)?;
    let verified = h.is_valid();
    let report = json!({ "order": order, "rows": h.to_rows(), "verified": verified, "seed": seed });
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(Outcome {
        summary: format!("Hadamard matrix of order {order}: verified = {verified}"),
        report,
        passed: verified,
    })
}

/// Frame identities are checked on this many random points.
const ETF_CHECK_POINTS: usize = 100;

fn etf(order: usize, out: Option<&Path>, seed: u64) -> Result<Outcome> {
    let h = normalize_first_row(&HadamardMatrix::of_order(order)?);
    let frame = etf_from_hadamard::<f64>(&h)?;
    let gram_deviation = frame.gram_deviation();
    let space = LpSpace::euclidean(frame.dim())?;
    let mut residual: f64 = 0.0;
    for x in sample_ball(&space, ETF_CHECK_POINTS, seed)? {
        residual = residual.max(verify_frame_identities(&frame, &x)?.max());
    }
    let verified = gram_deviation <= 1e-12 && residual <= 1e-10;
    let report = json!({
        "order": order,
        "dim": frame.dim(),
        "vectors": frame.vectors(),
        "gram_deviation": gram_deviation,
        "max_identity_residual": residual,
        "verified": verified,
        "seed": seed,
    });
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(Outcome {
        summary: format!(
            "ETF in dimension {} ({} vectors): Gram deviation {gram_deviation:.3e}, identity residual {residual:.3e}, verified = {verified}",
            frame.dim(),
            order
        ),
        report,
        passed: verified,
    })
}

fn dict_greedy(
    d: usize,
    p: f64,
    mu: f64,
    saturation: usize,
    complete: bool,
    out: Option<&Path>,
    seed: u64,
) -> Result<Outcome> {
    let space = LpSpace::new(d, p)?;
    let (dict, completion) = if complete {
        let c = maximal_dictionary(&space, mu, seed, saturation, &CompletionBudget::default())?;
        let summary = json!({
            "admitted": c.admitted,
            "swaps": c.swaps,
            "descents": c.descents,
            "stuck": c.stuck,
            "complete": c.complete,
        });
        (c.dictionary, Some(summary))
    } else {
        (greedy_maximal_dictionary(&space, mu, seed, saturation)?, None)
    };
    let m = if dict.len() >= 2 { Some(coherence(&dict)?) } else { None };
    let mut report = with_seed(&dict, seed)?;
    report["mu"] = json!(mu);
    report["size"] = json!(dict.len());
    report["coherence"] = json!(m);
    if let Some(c) = completion {
        report["completion"] = c;
    }
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(Outcome {
        summary: format!(
            "greedy dictionary: {} vectors in l_{p}^{d}, coherence {} (threshold {mu})",
            dict.len(),
            m.map_or("n/a".to_string(), |m| format!("{m:.6}"))
        ),
        report,
        passed: true,
    })
}

fn dict_coherence(input: &Path, seed: u64) -> Result<Outcome> {
    let dict: Dictionary<f64> = serde_json::from_value(read_json(input)?)?;
    let m = coherence(&dict)?;
    let matrix = coherence_matrix(&dict)?;
    let rank = matrix.numeric_rank(RANK_TOLERANCE);
    let report = json!({
        "size": dict.len(),
        "coherence": m,
        "rank": rank,
        "max_diagonal_deviation": matrix.max_diagonal_deviation(),
        "seed": seed,
    });
    Ok(Outcome {
        summary: format!("{} vectors: coherence {m:.6}, coherence-matrix rank {rank}", dict.len()),
        report,
        passed: true,
    })
}

fn require_euclidean(p: f64, what: &str) -> Result<()> {
    if p == 2.0 {
        Ok(())
    } else {
        Err(Error::UnsupportedExponent(format!("{p} ({what} is Euclidean only)")))
    }
}

fn require_mu(mu: Option<f64>) -> Result<f64> {
    mu.ok_or_else(|| Error::InvalidParameter("--mu is required for dictionary constructions".into()))
}

/// Greedy dictionary, completed, then certified maximal by sampling.
pub(crate) fn certified_dictionary(
    space: &LpSpace<f64>,
    mu: f64,
    samples: usize,
    seed: u64,
) -> Result<Dictionary<f64>> {
    let done = maximal_dictionary(space, mu, seed, DEFAULT_SATURATION_TRIALS, &CompletionBudget::default())?;
    let report = certify_maximality(&done.dictionary, mu, samples, seed)?;
    if !report.passed {
        return Err(Error::Construction(format!(
            "maximality not certified after {} augmentations",
            report.augmentations
        )));
    }
    Ok(report.dictionary)
}

/// Builds a named construction; the proof margin is returned when one exists.
pub(crate) fn build_covering(
    args: &BuildArgs,
    seed: u64,
) -> Result<(BallCovering<f64>, Option<CoverMargin<f64>>)> {
    let d = args.d;
    let (cov, margin) = match args.construction {
        Construction::Simplex => {
            require_euclidean(args.p, "simplex")?;
            let (c, m) = simplex_cover_unit(d)?;
            (c, Some(m))
        }
        Construction::SimplexShrunk => {
            require_euclidean(args.p, "simplex-shrunk")?;
            let (c, m) = simplex_cover_shrunk(d)?;
            (c, Some(m))
        }
        Construction::Etf => {
            require_euclidean(args.p, "etf")?;
            let (c, m) = etf_cover(d)?;
            (c, Some(m))
        }
        Construction::Axis => {
            require_euclidean(args.p, "axis")?;
            let (c, m) = axis_cover(d)?;
            (c, Some(m))
        }
        Construction::DictL2 => {
            require_euclidean(args.p, "dict-l2")?;
            let mu = require_mu(args.mu)?;
            let dict = certified_dictionary(&LpSpace::euclidean(d)?, mu, args.maximality_samples, seed)?;
            (dictionary_cover_l2(&dict, mu)?, None)
        }
        Construction::DictBanach => {
            let mu = require_mu(args.mu)?;
            let space = LpSpace::new(d, args.p)?;
            let majorant = SmoothnessMajorant::for_space(&space)?;
            let dict = certified_dictionary(&space, mu, args.maximality_samples, seed)?;
            (dictionary_cover_banach(&dict, mu, &majorant)?, None)
        }
        Construction::Basis => {
            let space = LpSpace::new(d, args.p)?;
            let majorant = SmoothnessMajorant::for_space(&space)?;
            (basis_cover(&space, args.k, &majorant)?, None)
        }
    };
    match args.iterate {
        Some(m) if m > 1 => Ok((iterate_cover(&cov, m)?, None)),
        Some(0) => Err(Error::InvalidParameter("--iterate must be at least 1".into())),
        _ => Ok((cov, margin)),
    }
}

fn cover_build(args: &BuildArgs, seed: u64) -> Result<Outcome> {
    let (cov, margin) = build_covering(args, seed)?;
    let mut artifact = with_seed(&cov, seed)?;
    if let Some(m) = margin {
        artifact["margin"] = serde_json::to_value(m)?;
    }
    write_json(&args.out, &artifact)?;
    let report = json!({
        "out": args.out.display().to_string(),
        "centers": cov.len(),
        "radius": cov.radius(),
        "closed": cov.is_closed(),
        "provenance": cov.provenance(),
        "seed": seed,
    });
    Ok(Outcome {
        summary: format!(
            "{}: {} {} balls of radius {} written to {}",
            cov.provenance(),
            cov.len(),
            if cov.is_closed() { "closed" } else { "open" },
            cov.radius(),
            args.out.display()
        ),
        report,
        passed: true,
    })
}

/// Sampling certification, plus adversarial search when `restarts > 0`.
pub(crate) fn verify_covering(
    cov: &BallCovering<f64>,
    samples: usize,
    restarts: usize,
    steps: usize,
    seed: u64,
) -> Result<(Value, bool)> {
    if samples == 0 {
        return Err(Error::InvalidParameter("--samples must be positive".into()));
    }
    let n_ball = samples / 2;
    let report = certify_sampling(cov, n_ball, samples - n_ball, seed)?;
    let mut passed = report.passed;
    let adversarial = if restarts > 0 {
        let adv = adversarial_search(cov, restarts, steps, seed)?;
        passed &= adv.passed;
        Some(adv)
    } else {
        None
    };
    Ok((json!({ "report": report, "adversarial": adversarial, "passed": passed, "seed": seed }), passed))
}

fn cover_verify(input: &Path, samples: usize, restarts: usize, steps: usize, seed: u64) -> Result<Outcome> {
    let cov: BallCovering<f64> = serde_json::from_value(read_json(input)?)?;
    let (report, passed) = verify_covering(&cov, samples, restarts, steps, seed)?;
    let worst = report["report"]["worst_margin"].as_f64().unwrap_or(f64::NAN);
    Ok(Outcome {
        summary: format!(
            "{}: {} samples, worst margin {worst:.3e}{}: {}",
            cov.provenance(),
            samples,
            report["adversarial"]["margin"]
                .as_f64()
                .map_or(String::new(), |m| format!(", adversarial margin {m:.3e}")),
            if passed { "PASS" } else { "FAIL" }
        ),
        report,
        passed,
    })
}

fn witness(d: usize, p: f64, centers: &Path, out: Option<&Path>, seed: u64) -> Result<Outcome> {
    let raw = read_json(centers)?;
    let list = raw.get("centers").cloned().unwrap_or(raw);
    let centers: Vec<Vec<f64>> = serde_json::from_value(list)?;
    let space = LpSpace::new(d, p)?;
    let z = uncovered_witness(&space, &centers)?;
    let min_distance = centers
        .iter()
        .map(|c| space.distance(&z, c))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let report = json!({ "witness": z, "norm": space.norm(&z)?, "min_distance": min_distance, "seed": seed });
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(Outcome {
        summary: format!("witness {z:?} at distance {min_distance:.12} from the nearest center"),
        report,
        passed: true,
    })
}

fn bounds_table(
    d: usize,
    p: f64,
    grid: &str,
    csv: Option<&Path>,
    constants: &BoundConstants,
    seed: u64,
) -> Result<Outcome> {
    let space = LpSpace::new(d, p)?;
    let rows = covering_bound_table(&space, &parse_grid(grid)?, constants)?;
    if let Some(path) = csv {
        write_csv(&rows, BufWriter::new(File::create(path)?))?;
    }
    let mut summary = format!(
        "constants C1={} C2={} C={}{}\n{:>12} {:>12} {:>12} {:>12} {:>12} {:>12}  regime",
        constants.c1,
        constants.c2,
        constants.c_generic,
        if constants.calibrated { "" } else { " (uncalibrated)" },
        "delta",
        "mu",
        "log_lower",
        "log_vol_up",
        "log_regime",
        "log_iter"
    );
    for r in &rows {
        summary.push_str(&format!(
            "\n{:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e}  {}",
            r.delta,
            r.mu,
            r.log_lower,
            r.log_volumetric_upper,
            r.log_regime_upper,
            r.log_iterated,
            serde_json::to_value(r.regime_flag)?.as_str().unwrap_or("")
        ));
    }
    let report = json!({ "constants": constants, "rows": rows, "seed": seed });
    Ok(Outcome { report, summary, passed: true })
}
