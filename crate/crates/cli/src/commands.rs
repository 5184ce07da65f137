//! The smaller subcommands: construct, witness, bound, boxdim.

use std::path::Path;

use ablab::certify::convergent_error_bounds;
use ablab::dimension::boxcount_csv;
use ablab::dioph::{find_convergent_in_window, find_witnesses, WitnessRecord};
use ablab::scalar::{ln_int, parse_rational};
use ablab::wire::{DecInt, DecRat};
use ablab::{
    box_count, embed_threshold, theorem_bound, upper_box_dim_estimate, BoundParams, BoxCountSample,
    CircleArc, Error, Rational, Tau,
};
use anyhow::{anyhow, Context};
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::config::NumberSpec;
use crate::error::CliError;
use crate::output::Outputs;

#[derive(Clone, Debug, Serialize)]
pub struct ConvergentRow {
    pub n: usize,
    pub a: DecInt,
    pub p: DecInt,
    pub q: DecInt,
    /// `1/(q_n (q_{n+1} + q_n))`, a strict lower bound on `|x - p_n/q_n|`.
    pub error_lower: DecRat,
    /// `1/(q_n q_{n+1})`, a strict upper bound.
    pub error_upper: DecRat,
    /// Exponent `e` with `|x - p/q| = q^-e` lies in `(exponent_lo, exponent_hi)`.
    pub exponent_lo_approx: Option<f64>,
    pub exponent_hi_approx: Option<f64>,
    /// Both bounds re-checked against a certified enclosure of x.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub number: ablab::CfNumber,
    pub convergents: Vec<ConvergentRow>,
}

/// The number and its convergent table for `n = 1..=rows`.
pub fn construct(
    spec: &NumberSpec,
    rows: usize,
    depth_cap: usize,
) -> Result<Construction, CliError> {
    let x = spec.build(depth_cap);
    let mut table = Vec::with_capacity(rows);
    for n in 1..=rows {
        let bounds = convergent_error_bounds(&x, n).map_err(|e| CliError::core("construct", e))?;
        let c = x
            .convergent(n)
            .map_err(|e| CliError::core("construct", e))?;
        let next = x
            .convergent(n + 1)
            .map_err(|e| CliError::core("construct", e))?;
        let a = x.quotient(n).map_err(|e| CliError::core("construct", e))?;
        let upper = Rational::new(BigInt::one(), &c.q * &next.q);
        let lower = Rational::new(BigInt::one(), &c.q * (&next.q + &c.q));
        let (lo, hi) = if c.q > BigInt::one() {
            let ln_q: f64 = ln_int(&c.q);
            (
                Some(ln_int::<f64>(&(&c.q * &next.q)) / ln_q),
                Some(ln_int::<f64>(&(&c.q * (&next.q + &c.q))) / ln_q),
            )
        } else {
            (None, None)
        };
        table.push(ConvergentRow {
            n,
            a: DecInt(a),
            p: DecInt(c.p),
            q: DecInt(c.q),
            error_lower: DecRat(lower),
            error_upper: DecRat(upper),
            exponent_lo_approx: lo,
            exponent_hi_approx: hi,
            certified: bounds.lower_strict && bounds.upper_strict,
        });
    }
    Ok(Construction {
        number: x,
        convergents: table,
    })
}

pub fn convergents_csv(rows: &[ConvergentRow]) -> String {
    let mut out = String::from(
        "n,a,p,q,error_lower,error_upper,exponent_lo_approx,exponent_hi_approx,certified\n",
    );
    let fmt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.6}"));
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.a.0,
            r.p.0,
            r.q.0,
            r.error_lower.0,
            r.error_upper.0,
            fmt(r.exponent_lo_approx),
            fmt(r.exponent_hi_approx),
            r.certified
        ));
    }
    out
}

pub fn witnesses(
    spec: &NumberSpec,
    tau2: &Rational,
    count: usize,
    depth_cap: usize,
) -> Result<Vec<WitnessRecord>, CliError> {
    let x = spec.build(depth_cap);
    let found = find_witnesses(&x, tau2, count).map_err(|e| CliError::core("witness", e))?;
    Ok(found.iter().map(|w| w.record()).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowHit {
    pub n: usize,
    pub p: DecInt,
    pub q: DecInt,
}

pub fn window(
    spec: &NumberSpec,
    q: &BigInt,
    tau1: &Rational,
    epsilon: &Rational,
    depth_cap: usize,
) -> Result<WindowHit, CliError> {
    let x = spec.build(depth_cap);
    let c = find_convergent_in_window(&x, q, tau1, epsilon)
        .map_err(|e| CliError::core("witness", e))?;
    Ok(WindowHit {
        n: c.n,
        p: DecInt(c.p),
        q: DecInt(c.q),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub tau1: DecRat,
    pub tau2: Tau,
    pub admissible: bool,
    pub theorem_bound: DecRat,
    pub embed_threshold: DecRat,
    pub theorem_bound_approx: f64,
    pub embed_threshold_approx: f64,
}

pub fn bound(tau1: &Rational, tau2: &Tau) -> Result<BoundReport, CliError> {
    let params =
        BoundParams::new(tau1.clone(), tau2.clone()).map_err(|e| CliError::core("bound", e))?;
    let tb = theorem_bound(&params).map_err(|e| CliError::core("bound", e))?;
    let et = embed_threshold(&params).map_err(|e| CliError::core("bound", e))?;
    Ok(BoundReport {
        tau1: DecRat(tau1.clone()),
        tau2: tau2.clone(),
        admissible: params.is_admissible(),
        theorem_bound_approx: ablab::scalar::approx(&tb),
        embed_threshold_approx: ablab::scalar::approx(&et),
        theorem_bound: DecRat(tb),
        embed_threshold: DecRat(et),
    })
}

/// Reads points from CSV. Accepted shapes: columns `lo,hi` (e.g. an exported
/// orbit), a column `x`, or a single headerless column of rationals. Rows
/// in messages are data rows counted from 1.
pub fn read_points(path: &Path) -> Result<Vec<CircleArc<Rational>>, CliError> {
    let bad = |e: anyhow::Error| CliError::config("points", e);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(bad)?;
    let rows: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .context("malformed CSV")
        .map_err(bad)?;
    let Some(first) = rows.first() else {
        return Err(bad(anyhow!("{} has no points", path.display())));
    };
    let has_header = first.iter().any(|f| parse_rational(f).is_err());
    let (lo_col, hi_col, body) = if has_header {
        let find = |name: &str| first.iter().position(|f| f == name);
        match (find("lo"), find("hi"), find("x")) {
            (Some(lo), Some(hi), _) => (lo, hi, &rows[1..]),
            (_, _, Some(x)) => (x, x, &rows[1..]),
            _ => return Err(bad(anyhow!("header needs columns lo,hi or x"))),
        }
    } else {
        (0, 0, &rows[..])
    };
    if body.is_empty() {
        return Err(bad(anyhow!("{} has no points", path.display())));
    }
    body.iter()
        .enumerate()
        .map(|(i, rec)| {
            let row = i + 1;
            let field = |c: usize| {
                rec.get(c)
                    .ok_or_else(|| anyhow!("row {row}: missing column {c}"))
                    .and_then(|f| parse_rational(f).map_err(|e| anyhow!("row {row}: {e}")))
            };
            let lo = field(lo_col)?;
            let hi = field(hi_col)?;
            CircleArc::new(lo, hi).map_err(|e| anyhow!("row {row}: {e}"))
        })
        .collect::<anyhow::Result<Vec<_>>>()
        .map_err(bad)
}

pub struct BoxDim {
    pub samples: Vec<BoxCountSample>,
    /// `None` with fewer than two scales.
    pub estimate: Option<f64>,
}

pub fn boxdim(points: &[CircleArc<Rational>], scales: &[Rational]) -> Result<BoxDim, CliError> {
    let samples = scales
        .iter()
        .map(|r| box_count(points, r))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| match e {
            // points are 0-based; data rows are numbered from 1
            Error::AmbiguousMembership { index } => {
                CliError::core("boxdim", Error::AmbiguousMembership { index: index + 1 })
            }
            other => CliError::core("boxdim", other),
        })?;
    let estimate = if samples.len() >= 2 {
        Some(
            upper_box_dim_estimate(&samples)
                .map_err(|e| CliError::core("boxdim", e))?
                .estimate,
        )
    } else {
        None
    };
    Ok(BoxDim { samples, estimate })
}

pub fn boxdim_outputs(result: &BoxDim) -> Outputs {
    let mut out = Outputs::default();
    out.add("boxcount.csv", boxcount_csv(&result.samples));
    out
}

pub fn parse_scales(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::core("config", e))
        .and_then(|v| {
            if v.is_empty() {
                Err(CliError::config("config", anyhow!("no scales given")))
            } else {
                Ok(v)
            }
        })
}
