//! Numbers of prescribed Diophantine type, and the two witness searches the
//! separation argument needs: good rational approximations of beta, and a
//! convergent denominator of alpha inside a power window.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cf::{CfNumber, GrowthRule};
use crate::error::{Error, Result};
use crate::scalar::{floor_pow, ge_pow, ln_int, parse_rational};
use crate::wire::{ints, unwrap_ints, DecInt, DecRat};
use crate::Convergent;

/// An exponent in `[2, ∞) ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tau {
    Finite(BigRational),
    Infinite,
}

impl Tau {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Tau::Finite(t) => Some(t),
            Tau::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Tau::Infinite)
    }
}

impl FromStr for Tau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Tau::Infinite),
            other => parse_rational(other).map(Tau::Finite),
        }
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Finite(t) => write!(f, "{t}"),
            Tau::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Tau {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tau {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            R(DecRat),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::R(r) => Ok(Tau::Finite(r.0)),
        }
    }
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

/// Target exact order plus the first few partial quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophantineSpec {
    tau: Tau,
    seed: Vec<BigInt>,
}

impl DiophantineSpec {
    pub fn new(tau: Tau, seed: Vec<BigInt>) -> Result<Self> {
        if let Tau::Finite(t) = &tau {
            if *t < two() {
                return Err(Error::InvalidArgument(format!("tau must be >= 2, got {t}")));
            }
        }
        if seed.is_empty() {
            return Err(Error::InvalidArgument("seed must be nonempty".into()));
        }
        if let Some(bad) = seed.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "seed quotients must be >= 1, got {bad}"
            )));
        }
        Ok(DiophantineSpec { tau, seed })
    }

    pub fn finite(tau: BigRational, seed: Vec<BigInt>) -> Result<Self> {
        Self::new(Tau::Finite(tau), seed)
    }

    pub fn liouville(seed: Vec<BigInt>) -> Result<Self> {
        Self::new(Tau::Infinite, seed)
    }

    pub fn tau(&self) -> &Tau {
        &self.tau
    }

    pub fn seed(&self) -> &[BigInt] {
        &self.seed
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    tau: Tau,
    seed: Vec<DecInt>,
}

impl Serialize for DiophantineSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr {
            tau: self.tau.clone(),
            seed: ints(&self.seed),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiophantineSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SpecRepr::deserialize(d)?;
        DiophantineSpec::new(r.tau, unwrap_ints(r.seed)).map_err(serde::de::Error::custom)
    }
}

/// The number with quotients `seed` followed by `a_{n+1} = ceil(q_n^(tau-2))`
/// (finite tau) or `a_{n+1} = q_n^n` (Liouville).
///
/// Along the convergents `q_{n+1} ≈ a_{n+1} q_n ≈ q_n^(tau-1)`, so the
/// approximation error `≍ 1/(q_n q_{n+1})` sits at `q_n^(-tau)` from both sides.
pub fn make_number(spec: &DiophantineSpec) -> CfNumber {
    let seed = spec.seed.clone();
    let rule = match &spec.tau {
        Tau::Finite(tau) => GrowthRule::ExactOrder {
            tau: tau.clone(),
            seed,
        },
        Tau::Infinite => GrowthRule::Liouville { seed },
    };
    CfNumber::generated(rule).expect("spec was validated")
}

/// Lower estimate of the exact order from the first `depth` quotients:
/// `max(2, max_{1 <= m < depth, q_m > 1} 2 + ln a_{m+1} / ln q_m)`.
///
/// The logarithms are transcendental; the result is a display-grade `f64`
/// computed from exact integers.
pub fn exact_order_estimate(x: &CfNumber, depth: usize) -> Result<f64> {
    if depth < 2 {
        return Err(Error::InvalidArgument("depth must be >= 2".into()));
    }
    let quotients = x.quotients(depth)?;
    let convergents = x.convergents(depth)?;
    let mut best = 2.0f64;
    for m in 1..depth {
        let q_m = &convergents[m].q;
        if q_m.is_one() {
            continue;
        }
        let est = 2.0 + ln_int::<f64>(&quotients[m]) / ln_int::<f64>(q_m);
        best = best.max(est);
    }
    Ok(best)
}

/// `q_{n+1} <= 2 a_{n+1} q_n`, checked exactly.
pub fn growth_bound_holds(x: &CfNumber, n: usize) -> Result<bool> {
    let q_n = x.convergent(n)?.q;
    let q_next = x.convergent(n + 1)?.q;
    let a_next = x.quotient(n + 1)?;
    Ok(q_next <= a_next * q_n * 2)
}

/// A reduced fraction `p/q` with `|beta - p/q| <= q^(-tau2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximationWitness {
    /// 1-based position in the witness sequence.
    pub l: usize,
    /// Convergent index the witness came from.
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
    /// `1/(q_n q_{n+1})`, a strict upper bound on `|beta - p/q|`.
    pub error_bound: BigRational,
}

#[derive(Serialize, Deserialize)]
pub struct WitnessRecord {
    pub l: String,
    pub p: DecInt,
    pub q: DecInt,
    pub error_bound: DecRat,
}

impl ApproximationWitness {
    pub fn record(&self) -> WitnessRecord {
        WitnessRecord {
            l: self.l.to_string(),
            p: DecInt(self.p.clone()),
            q: DecInt(self.q.clone()),
            error_bound: DecRat(self.error_bound.clone()),
        }
    }
}

/// The first `count` convergents `p_n/q_n` of beta (with `q_n >= 2`) certified
/// by `q_{n+1} >= q_n^(tau2 - 1)`, i.e. `1/(q_n q_{n+1}) <= q_n^(-tau2)`.
///
/// The denominator 1 is skipped: it approximates every number in (0, 1) to
/// within 1 and certifies nothing.
pub fn find_witnesses(
    beta: &CfNumber,
    tau2: &BigRational,
    count: usize,
) -> Result<Vec<ApproximationWitness>> {
    if *tau2 < two() {
        return Err(Error::InvalidArgument(format!(
            "tau2 must be >= 2, got {tau2}"
        )));
    }
    let exp = tau2 - BigRational::one();
    let mut out: Vec<ApproximationWitness> = Vec::with_capacity(count);
    let mut n = 1;
    while out.len() < count {
        let step = beta
            .convergent(n)
            .and_then(|c| beta.convergent(n + 1).map(|next| (c, next)));
        let (c, next) = step.map_err(|e| match e {
            Error::DepthExceeded { available, .. } => Error::exhausted(format!(
                "found {} of {count} witnesses with tau2 = {tau2} within {available} quotients",
                out.len()
            )),
            other => other,
        })?;
        let fresh = out.last().is_none_or(|w| w.q < c.q);
        if c.q > BigInt::one() && fresh && ge_pow(&next.q, &c.q, &exp) {
            out.push(ApproximationWitness {
                l: out.len() + 1,
                n,
                error_bound: BigRational::new(BigInt::one(), &c.q * &next.q),
                p: c.p,
                q: c.q,
            });
        }
        n += 1;
    }
    Ok(out)
}

/// The smallest convergent denominator of alpha in `[q, q^(tau1 + epsilon - 1)]`.
/// The upper end is rounded down to an integer, so the window is never widened.
pub fn find_convergent_in_window(
    alpha: &CfNumber,
    q: &BigInt,
    tau1: &BigRational,
    epsilon: &BigRational,
) -> Result<Convergent> {
    if q < &BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("q must be >= 2, got {q}")));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if *tau1 < two() {
        return Err(Error::InvalidArgument(format!(
            "tau1 must be >= 2, got {tau1}"
        )));
    }
    let hi = floor_pow(q, &(tau1 + epsilon - BigRational::one()));
    let mut n = 0;
    loop {
        let c = alpha.convergent(n)?;
        if &c.q >= q {
            if c.q <= hi {
                return Ok(c);
            }
            return Err(Error::WindowEmpty { lo: q.clone(), hi });
        }
        n += 1;
    }
}
