//! The `verify-bound` pipeline: construct the numbers, generate the word,
//! certify a separated subset for each `l`, box-count the orbit, and report.

use ablab::certify::MAX_REFINEMENTS;
use ablab::dimension::{boxcount_csv, SeparationRecord};
use ablab::dioph::{find_witnesses, WitnessRecord};
use ablab::orbit::{balance_classify, orbit_csv, orbit_points, Classification};
use ablab::wire::{DecInt, DecRat};
use ablab::{
    box_count, embed_threshold, extract_separated_subset, gen_omega, theorem_bound,
    upper_box_dim_estimate, BoxCountSample, CircleArc, Error, Rational, SeparationParams,
};
use anyhow::anyhow;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{exit_code, CliError, EXIT_OK, EXIT_PRECISION, EXIT_SEPARATION};
use crate::output::{sha256_hex, to_json, Outputs, Timings, TOOL};

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub l: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_l: Option<DecInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_l_prime: Option<DecInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_lower_bound: Option<DecRat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_datapoint_approx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaSummary {
    pub n: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub alpha_count: usize,
    pub c_estimate: Option<DecRat>,
    pub longest_run: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxRow {
    pub r: DecRat,
    pub count: u64,
    pub ratio_approx: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub points: usize,
    /// Width bound actually used (after any refinement).
    pub precision: DecRat,
    pub box_counts: Vec<BoxRow>,
    pub box_dim_estimate_approx: Option<f64>,
    /// `k` in `N(F,r) <= count <= k N(F,r)`, worst case over the scales.
    pub bracket_factor: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub status: String,
    pub exit_code: u8,
    pub failure_stage: Option<String>,
    pub verified: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub config_sha256: String,
    pub tau1: DecRat,
    pub tau2: DecRat,
    pub epsilon: DecRat,
    pub theorem_bound: DecRat,
    pub theorem_bound_approx: f64,
    pub embed_threshold: DecRat,
    pub c: DecRat,
    pub c_source: &'static str,
    pub omega: OmegaSummary,
    pub levels: Vec<LevelReport>,
    pub max_dim_datapoint_approx: Option<f64>,
    pub orbit: Option<OrbitSummary>,
    pub outcome: Outcome,
}

#[derive(Serialize)]
struct WitnessFile {
    approximations: Vec<WitnessRecord>,
    separations: Vec<SeparationRecord>,
}

pub struct PipelineRun {
    pub report: Report,
    pub outputs: Outputs,
    pub timings: Timings,
}

/// Orbit enclosures fine enough that no point straddles a grid arc at any
/// scale; the precision is divided by 2^16 until that holds.
fn orbit_box_counts(
    alpha: &ablab::CfNumber,
    beta: &ablab::CfNumber,
    omega: &ablab::OmegaWord,
    precision: &Rational,
    scales: &[Rational],
) -> Result<(Vec<ablab::orbit::OrbitPoint>, Vec<BoxCountSample>, Rational), Error> {
    let step = Rational::from_integer((1u64 << 16).into());
    let mut p = precision.clone();
    for _ in 0..MAX_REFINEMENTS {
        let points = orbit_points(alpha, beta, omega, &p)?;
        let arcs: Vec<CircleArc<Rational>> = points.iter().map(|x| x.value.clone()).collect();
        let counts: Result<Vec<_>, _> = scales.iter().map(|r| box_count(&arcs, r)).collect();
        match counts {
            Ok(c) => return Ok((points, c, p)),
            Err(Error::AmbiguousMembership { .. }) => p /= &step,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionExhausted(
        "orbit box counts undecided".into(),
    ))
}

fn level_status(e: &Error) -> &'static str {
    match e {
        Error::WindowEmpty { .. } => "WINDOW_EMPTY",
        Error::SeparationFailed { .. } => "SEPARATION_FAILED",
        Error::WordTooShort { .. } => "WORD_TOO_SHORT",
        Error::PrecisionExhausted(_) | Error::DepthExceeded { .. } => "PRECISION_EXHAUSTED",
        _ => "ERROR",
    }
}

/// Failures the argument allows below its "l sufficiently large" threshold.
fn is_sanctioned(e: &Error) -> bool {
    matches!(
        e,
        Error::WindowEmpty { .. } | Error::SeparationFailed { .. }
    )
}

pub fn verify_bound(cfg: &RunConfig) -> Result<PipelineRun, CliError> {
    let mut timings = Timings::default();
    let depth_cap = cfg.depth_cap.expect("resolved config");
    let config_sha256 = sha256_hex(&serde_json::to_vec(cfg).expect("serializable"));

    let (alpha, beta) = timings.time("construct", || {
        (cfg.alpha.build(depth_cap), cfg.beta.build(depth_cap))
    });

    let omega = timings
        .time("omega", || {
            gen_omega(&cfg.omega.strategy, cfg.omega.n, cfg.omega.seed)
        })
        .map_err(|e| CliError::core("omega", e))?;
    let burn_in = cfg.omega.burn_in.expect("resolved config");
    let balance = balance_classify(&omega, burn_in).map_err(|e| CliError::core("omega", e))?;
    let c_estimate =
        match &balance.classification {
            Classification::Comparable(c) => c.clone(),
            Classification::Unbalanced => return Err(CliError::config(
                "omega",
                anyhow!(
                    "word is unbalanced past burn-in {burn_in}: no comparability constant C exists"
                ),
            )),
        };
    let (c, c_source) = match &cfg.c {
        Some(c) if c.0 < c_estimate => {
            return Err(CliError::config(
                "omega",
                anyhow!("c = {} is below the word's C estimate {c_estimate}", c.0),
            ))
        }
        Some(c) => (c.0.clone(), "config"),
        None => (balance.default_c().expect("comparable"), "balance_default"),
    };

    let bound_params = cfg.bound_params();
    let bound = theorem_bound(&bound_params).map_err(|e| CliError::core("config", e))?;
    let embed = embed_threshold(&bound_params).map_err(|e| CliError::core("config", e))?;

    let [l_lo, l_hi] = cfg.l_range;
    let approximations = timings.time("witnesses", || {
        (1..=l_hi)
            .rev()
            .find_map(|count| find_witnesses(&beta, &cfg.tau2.0, count).ok())
            .unwrap_or_default()
    });

    let mut levels = Vec::new();
    let mut separations = Vec::new();
    let mut failure: Option<(u8, String)> = None;
    let mut warnings = Vec::new();
    timings.time("separation", || {
        for l in l_lo..=l_hi {
            let params = SeparationParams {
                tau1: cfg.tau1.0.clone(),
                tau2: cfg.tau2.0.clone(),
                epsilon: cfg.epsilon.0.clone(),
                l,
                c: c.clone(),
                pick: cfg.window_pick,
            };
            match extract_separated_subset(&alpha, &beta, &omega, &params) {
                Ok(w) => {
                    levels.push(LevelReport {
                        l,
                        status: if w.is_verified() {
                            "VERIFIED"
                        } else {
                            "UNVERIFIED"
                        }
                        .into(),
                        q_l: Some(DecInt(w.q_l.clone())),
                        q_l_prime: Some(DecInt(w.q_l_prime.clone())),
                        members: Some(w.members.len()),
                        gap_lower_bound: w.gap_lower_bound.clone().map(DecRat),
                        dim_datapoint_approx: Some(w.dim_datapoint_approx),
                        error: None,
                    });
                    separations.push(w.record());
                }
                Err(e) => {
                    if is_sanctioned(&e) {
                        warnings.push(format!("l = {l}: {e}"));
                    } else if failure.is_none() {
                        failure = Some((exit_code(&e), format!("separation:l={l}")));
                    }
                    levels.push(LevelReport {
                        l,
                        status: level_status(&e).into(),
                        q_l: None,
                        q_l_prime: None,
                        members: None,
                        gap_lower_bound: None,
                        dim_datapoint_approx: None,
                        error: Some(e.to_string()),
                    });
                }
            }
        }
    });

    let scales: Vec<Rational> = cfg.scales.iter().map(|r| r.0.clone()).collect();
    let mut outputs = Outputs::default();
    let orbit = match timings.time("orbit", || {
        orbit_box_counts(&alpha, &beta, &omega, &cfg.precision.0, &scales)
    }) {
        Ok((points, samples, precision)) => {
            outputs.add("orbit.csv", orbit_csv(&points));
            outputs.add("boxcount.csv", boxcount_csv(&samples));
            let estimate = upper_box_dim_estimate(&samples).ok().map(|e| e.estimate);
            Some(OrbitSummary {
                points: points.len(),
                precision: DecRat(precision),
                box_counts: samples
                    .iter()
                    .map(|s| BoxRow {
                        r: DecRat(s.r.clone()),
                        count: s.count,
                        ratio_approx: s.ratio_approx(),
                    })
                    .collect(),
                box_dim_estimate_approx: estimate,
                bracket_factor: samples
                    .iter()
                    .map(|s| s.bracket_factor())
                    .max()
                    .unwrap_or(2),
            })
        }
        Err(e) => {
            if failure.is_none() {
                failure = Some((exit_code(&e).max(EXIT_PRECISION), "orbit".into()));
            }
            warnings.push(format!("orbit: {e}"));
            None
        }
    };

    let verified = levels.iter().filter(|l| l.status == "VERIFIED").count();
    if failure.is_none() && verified == 0 {
        failure = Some((EXIT_SEPARATION, "separation".into()));
    }
    let (exit, failure_stage) = match failure {
        Some((code, stage)) => (code, Some(stage)),
        None => (EXIT_OK, None),
    };
    let max_dim = levels
        .iter()
        .filter(|l| l.status == "VERIFIED")
        .filter_map(|l| l.dim_datapoint_approx)
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));

    let report = Report {
        tool: TOOL,
        config_sha256,
        tau1: cfg.tau1.clone(),
        tau2: cfg.tau2.clone(),
        epsilon: cfg.epsilon.clone(),
        theorem_bound_approx: ablab::scalar::approx(&bound),
        theorem_bound: DecRat(bound),
        embed_threshold: DecRat(embed),
        c: DecRat(c),
        c_source,
        omega: OmegaSummary {
            n: omega.len(),
            seed: cfg.omega.seed,
            burn_in,
            alpha_count: omega.alpha_count(omega.len()),
            c_estimate: balance.c_estimate.clone().map(DecRat),
            longest_run: balance.longest_run,
        },
        levels,
        max_dim_datapoint_approx: max_dim,
        orbit,
        outcome: Outcome {
            status: if exit == EXIT_OK { "ok" } else { "failed" }.into(),
            exit_code: exit,
            failure_stage,
            verified,
            warnings,
        },
    };
    outputs.add("report.json", to_json(&report));
    outputs.add(
        "witnesses.json",
        to_json(&WitnessFile {
            approximations: approximations.iter().map(|w| w.record()).collect(),
            separations,
        }),
    );
    Ok(PipelineRun {
        report,
        outputs,
        timings,
    })
}
