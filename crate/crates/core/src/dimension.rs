//! Box counting on the circle, the separated-subset certificate, and the two
//! dimension bound calculators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{eval, MAX_REFINEMENTS};
use crate::cf::CfNumber;
use crate::dioph::{find_witnesses, Tau};
use crate::error::{Error, Result};
use crate::interval::CircleArc;
use crate::orbit::{combine, combine_signed, k_sequence, OmegaWord};
use crate::scalar::{ceil_pow, floor_pow, ln_int, ln_rat, rat_from_int};
use crate::wire::{DecInt, DecRat};
use crate::{CertifiedValue, Rational};

/// Grid count of a finite point set at radius `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxCountSample {
    pub r: BigRational,
    /// Occupied grid arcs.
    pub count: u64,
    /// Number of grid arcs `m = ceil(1/(2r))`.
    pub arcs: BigInt,
}

impl BoxCountSample {
    /// `ln(count) / (-ln r)`, display grade.
    pub fn ratio_approx(&self) -> f64 {
        if self.count <= 1 {
            return 0.0;
        }
        (self.count as f64).ln() / -ln_rat::<f64>(&self.r)
    }

    /// `k` in `N(F,r) <= count <= k N(F,r)`: 2 when the grid arcs have length
    /// exactly `2r`, 3 otherwise.
    pub fn bracket_factor(&self) -> u32 {
        let inv = (BigRational::from_integer(2.into()) * &self.r).recip();
        if inv.is_integer() {
            2
        } else {
            3
        }
    }
}

/// Grid arcs `[i/m, (i+1)/m)` with `m = ceil(1/(2r))`; counts the arcs that
/// contain a point. A point interval with its ends in different arcs raises
/// `AmbiguousMembership` so the caller can refine.
pub fn box_count(points: &[CircleArc<BigRational>], r: &BigRational) -> Result<BoxCountSample> {
    if !r.is_positive() || r >= &BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "radius must lie in (0, 1), got {r}"
        )));
    }
    let max_width = r / BigRational::from_integer(10.into());
    let m = (BigRational::from_integer(2.into()) * r)
        .recip()
        .ceil()
        .to_integer();
    let mr = rat_from_int(&m);
    let mut occupied = BTreeSet::new();
    for (index, p) in points.iter().enumerate() {
        if p.width() > max_width {
            return Err(Error::InvalidArgument(format!(
                "point {index} has width {} > r/10 = {max_width}",
                p.width()
            )));
        }
        let lo = (p.lo() * &mr).floor().to_integer();
        let hi = (p.hi() * &mr).floor().to_integer().mod_floor(&m);
        if lo != hi {
            return Err(Error::AmbiguousMembership { index });
        }
        occupied.insert(lo);
    }
    Ok(BoxCountSample {
        r: r.clone(),
        count: occupied.len() as u64,
        arcs: m,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimEstimate {
    /// Max of the ratio column.
    pub estimate: f64,
    /// `(r, count, ratio)` per sample, in input order.
    pub table: Vec<(BigRational, u64, f64)>,
}

/// Finite-scale surrogate of the upper box dimension: the max over samples of
/// `ln N(F,r) / (-ln r)`.
pub fn upper_box_dim_estimate(samples: &[BoxCountSample]) -> Result<BoxDimEstimate> {
    let radii: BTreeSet<_> = samples.iter().map(|s| &s.r).collect();
    if samples.len() < 2 || radii.len() != samples.len() {
        return Err(Error::InvalidArgument(
            "need at least two samples with distinct radii".into(),
        ));
    }
    if let Some(s) = samples.iter().find(|s| s.count == 0) {
        return Err(Error::DegenerateSample(format!("count 0 at r = {}", s.r)));
    }
    let table: Vec<_> = samples
        .iter()
        .map(|s| (s.r.clone(), s.count, s.ratio_approx()))
        .collect();
    let estimate = table.iter().map(|t| t.2).fold(f64::NEG_INFINITY, f64::max);
    Ok(BoxDimEstimate { estimate, table })
}

/// CSV `r,count,ratio_approx` for a box-count table.
pub fn boxcount_csv(samples: &[BoxCountSample]) -> String {
    let mut out = String::from("r,count,ratio_approx\n");
    for s in samples {
        writeln!(out, "{},{},{:.6}", s.r, s.count, s.ratio_approx()).unwrap();
    }
    out
}

/// Which convergent denominator of alpha to take when the `q_l'` window holds
/// more than one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowPick {
    Smallest,
    #[default]
    Largest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationParams {
    pub tau1: BigRational,
    pub tau2: BigRational,
    pub epsilon: BigRational,
    /// 1-based witness index.
    pub l: usize,
    /// Comparability constant of the word.
    pub c: BigRational,
    pub pick: WindowPick,
}

/// Certificate that one residue class of orbit points is well separated.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationWitness {
    pub l: usize,
    pub q_l: BigInt,
    pub p_l: BigInt,
    /// Integer bounds of the `q_l'` window, rounded inward.
    pub window: (BigInt, BigInt),
    pub q_l_prime: BigInt,
    pub epsilon: BigRational,
    pub c: BigRational,
    /// `|ω|_{α,q_l'}`.
    pub j_count: usize,
    pub p_prime: u64,
    /// `(j, k_j)` with `k_j ≡ p' (mod q_l)`.
    pub members: Vec<(u64, u64)>,
    /// `1/(4 q_l')`.
    pub gap_threshold: BigRational,
    /// Certified lower bound on every pairwise circle distance; `None` with a
    /// single member.
    pub gap_lower_bound: Option<BigRational>,
    /// Width at which alpha and beta were enclosed in the last refinement round.
    pub cert_width: BigRational,
    /// `‖α(j - j')‖ >= 1/(2 q_l')` for every member pair.
    pub alpha_bound_holds: bool,
    /// `‖β(k_j - k_j')‖ <= q_l' / q_l^τ₂` for every member pair.
    pub beta_bound_holds: bool,
    /// `#members · C · q_l >= q_l'`.
    pub pigeonhole_holds: bool,
    /// `1/(10 q_l')`.
    pub ball_radius: BigRational,
    pub member_box_count: BoxCountSample,
    /// `member_box_count >= #members / 2`.
    pub box_count_consistent: bool,
    /// `ln #members / ln(10 q_l')`.
    pub dim_datapoint_approx: f64,
}

impl SeparationWitness {
    /// Every gap was certified `>= 1/(4 q_l')`; failures never produce a witness.
    pub fn is_verified(&self) -> bool {
        self.gap_lower_bound
            .as_ref()
            .is_none_or(|g| g >= &self.gap_threshold)
    }

    pub fn record(&self) -> SeparationRecord {
        SeparationRecord {
            l: self.l,
            status: if self.is_verified() {
                "VERIFIED"
            } else {
                "UNVERIFIED"
            }
            .into(),
            q_l: DecInt(self.q_l.clone()),
            p_l: DecInt(self.p_l.clone()),
            window: [DecInt(self.window.0.clone()), DecInt(self.window.1.clone())],
            q_l_prime: DecInt(self.q_l_prime.clone()),
            epsilon: DecRat(self.epsilon.clone()),
            c: DecRat(self.c.clone()),
            j_count: self.j_count,
            p_prime: self.p_prime,
            member_count: self.members.len(),
            members: self.members.clone(),
            gap_threshold: DecRat(self.gap_threshold.clone()),
            gap_lower_bound: self.gap_lower_bound.clone().map(DecRat),
            cert_width: DecRat(self.cert_width.clone()),
            alpha_bound_holds: self.alpha_bound_holds,
            beta_bound_holds: self.beta_bound_holds,
            pigeonhole_holds: self.pigeonhole_holds,
            ball_radius: DecRat(self.ball_radius.clone()),
            member_box_count: self.member_box_count.count,
            box_count_consistent: self.box_count_consistent,
            dim_datapoint_approx: self.dim_datapoint_approx,
        }
    }
}

/// JSON form of a [`SeparationWitness`]; exact values are strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationRecord {
    pub l: usize,
    pub status: String,
    pub q_l: DecInt,
    pub p_l: DecInt,
    pub window: [DecInt; 2],
    pub q_l_prime: DecInt,
    pub epsilon: DecRat,
    pub c: DecRat,
    pub j_count: usize,
    pub p_prime: u64,
    pub member_count: usize,
    pub members: Vec<(u64, u64)>,
    pub gap_threshold: DecRat,
    pub gap_lower_bound: Option<DecRat>,
    pub cert_width: DecRat,
    pub alpha_bound_holds: bool,
    pub beta_bound_holds: bool,
    pub pigeonhole_holds: bool,
    pub ball_radius: DecRat,
    pub member_box_count: u64,
    pub box_count_consistent: bool,
    pub dim_datapoint_approx: f64,
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

fn check_admissible(tau1: &BigRational, tau2: &BigRational) -> Result<()> {
    if tau1 * two() >= tau2 + two() {
        return Err(Error::InadmissibleParams {
            tau1: tau1.to_string(),
            tau2: tau2.to_string(),
        });
    }
    Ok(())
}

/// Exponents of the `q_l'` window `[q_l^lo, q_l^hi]`.
pub fn window_exponents(
    tau1: &BigRational,
    tau2: &BigRational,
    epsilon: &BigRational,
) -> (BigRational, BigRational) {
    let top = tau2 - epsilon * two();
    let lo = &top / (two() * (tau1 + epsilon - BigRational::one()));
    let hi = top / two();
    (lo, hi)
}

/// Per-pair outcome of one refinement round.
enum PairCheck {
    Undecided,
    Decided {
        gap_lo: BigRational,
        gap_hi: BigRational,
        alpha_ok: bool,
        beta_ok: bool,
    },
}

struct PairContext<'a> {
    threshold: &'a BigRational,
    alpha_threshold: &'a BigRational,
    q_prime: &'a BigInt,
    q_l: &'a BigInt,
    tau2: &'a BigRational,
}

impl PairContext<'_> {
    /// `x <= q' / q_l^τ₂`, i.e. `x^den · q_l^num <= q'^den`; `None` if the
    /// interval straddles the bound.
    fn beta_le(&self, iv: &CertifiedValue) -> Option<bool> {
        let num = self.tau2.numer().to_usize().expect("tau2 numerator");
        let den = self.tau2.denom().to_usize().expect("tau2 denominator");
        let rhs = rat_from_int(&num_traits::pow(self.q_prime.clone(), den));
        let scale = rat_from_int(&num_traits::pow(self.q_l.clone(), num));
        let lhs = |x: &BigRational| num_traits::pow(x.clone(), den) * &scale;
        if lhs(iv.hi()) <= rhs {
            Some(true)
        } else if lhs(iv.lo()) > rhs {
            Some(false)
        } else {
            None
        }
    }

    fn check(&self, a: &CertifiedValue, b: &CertifiedValue, dj: i64, dk: i64) -> PairCheck {
        let gap = match combine_signed(a, b, dj, dk).fold_distance() {
            Ok(g) => g,
            Err(_) => return PairCheck::Undecided,
        };
        if !gap.certainly_ge(self.threshold) && !gap.certainly_lt(self.threshold) {
            return PairCheck::Undecided;
        }
        let alpha_part = match combine_signed(a, b, dj, 0).fold_distance() {
            Ok(v) => v,
            Err(_) => return PairCheck::Undecided,
        };
        let alpha_ok = if alpha_part.certainly_ge(self.alpha_threshold) {
            true
        } else if alpha_part.certainly_lt(self.alpha_threshold) {
            false
        } else {
            return PairCheck::Undecided;
        };
        let beta_part = match combine_signed(a, b, 0, dk).fold_distance() {
            Ok(v) => v,
            Err(_) => return PairCheck::Undecided,
        };
        let beta_ok = match self.beta_le(&beta_part) {
            Some(v) => v,
            None => return PairCheck::Undecided,
        };
        PairCheck::Decided {
            gap_lo: gap.lo().clone(),
            gap_hi: gap.hi().clone(),
            alpha_ok,
            beta_ok,
        }
    }
}

struct PairSummary {
    gap_lower_bound: Option<BigRational>,
    alpha_ok: bool,
    beta_ok: bool,
    width: BigRational,
}

/// Decides every pair at widths `w0, w0/2^16, ...`, re-enclosing alpha and
/// beta once per round. Fails on the first (in index order) pair whose gap is
/// certainly below the threshold.
fn certify_pairs(
    alpha: &CfNumber,
    beta: &CfNumber,
    members: &[(u64, u64)],
    ctx: &PairContext<'_>,
    l: usize,
    w0: BigRational,
) -> Result<PairSummary> {
    let pairs: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|i| (i + 1..members.len()).map(move |i2| (i, i2)))
        .collect();
    let mut pending = pairs;
    let mut w = w0;
    let step = BigRational::from_integer(BigInt::from(1u64 << 16));
    let mut min_gap: Option<BigRational> = None;
    let mut alpha_ok = true;
    let mut beta_ok = true;
    for _ in 0..MAX_REFINEMENTS {
        let a = eval(alpha, &w)?;
        let b = eval(beta, &w)?;
        let results: Vec<PairCheck> = pending
            .par_iter()
            .map(|&(i, i2)| {
                let (j, k) = members[i];
                let (j2, k2) = members[i2];
                ctx.check(&a, &b, j2 as i64 - j as i64, k2 as i64 - k as i64)
            })
            .collect();
        let mut next = Vec::new();
        for (&(i, i2), r) in pending.iter().zip(results) {
            match r {
                PairCheck::Undecided => next.push((i, i2)),
                PairCheck::Decided {
                    gap_lo,
                    gap_hi,
                    alpha_ok: ao,
                    beta_ok: bo,
                } => {
                    if gap_hi < *ctx.threshold {
                        return Err(Error::SeparationFailed {
                            l,
                            j: members[i].0,
                            j_prime: members[i2].0,
                            threshold: Box::new(ctx.threshold.clone()),
                            upper: Box::new(gap_hi),
                        });
                    }
                    alpha_ok &= ao;
                    beta_ok &= bo;
                    if min_gap.as_ref().is_none_or(|g| &gap_lo < g) {
                        min_gap = Some(gap_lo);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(PairSummary {
                gap_lower_bound: min_gap,
                alpha_ok,
                beta_ok,
                width: w,
            });
        }
        pending = next;
        w /= &step;
    }
    Err(Error::exhausted(format!(
        "{} member pairs undecided after {MAX_REFINEMENTS} refinements",
        pending.len()
    )))
}

/// Member arcs `jα + k_jβ mod 1` narrow enough to grid at `r`, refined until
/// no arc straddles a grid boundary.
fn member_box_count(
    alpha: &CfNumber,
    beta: &CfNumber,
    members: &[(u64, u64)],
    r: &BigRational,
    max_n: &BigInt,
) -> Result<BoxCountSample> {
    let step = BigRational::from_integer(BigInt::from(1u64 << 16));
    // width of a member <= (j + k_j) w <= max_n w <= r / 10
    let mut w = r / (rat_from_int(max_n) * BigRational::from_integer(10.into()));
    for _ in 0..MAX_REFINEMENTS {
        let a = eval(alpha, &w)?;
        let b = eval(beta, &w)?;
        let arcs: Vec<_> = members
            .iter()
            .map(|&(j, k)| combine(&a, &b, j, k).mod_one())
            .collect();
        match box_count(&arcs, r) {
            Err(Error::AmbiguousMembership { .. }) => w /= &step,
            other => return other,
        }
    }
    Err(Error::exhausted("member box count undecided"))
}

/// The separated residue class for witness `l`: pick `q_l'` in the window,
/// bucket `j <= |ω|_{α,q_l'}` by `k_j mod q_l`, and certify the largest
/// bucket's pairwise gaps against `1/(4 q_l')`.
pub fn extract_separated_subset(
    alpha: &CfNumber,
    beta: &CfNumber,
    omega: &OmegaWord,
    params: &SeparationParams,
) -> Result<SeparationWitness> {
    let SeparationParams {
        tau1,
        tau2,
        epsilon,
        l,
        c,
        pick,
    } = params;
    let l = *l;
    if l == 0 {
        return Err(Error::InvalidArgument("l is 1-based".into()));
    }
    if !epsilon.is_positive() || epsilon * two() >= *tau2 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, tau2/2), got {epsilon}"
        )));
    }
    if !c.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "C must be positive, got {c}"
        )));
    }
    check_admissible(tau1, tau2)?;

    let witness = find_witnesses(beta, tau2, l)?
        .pop()
        .expect("l >= 1 witnesses");
    let q_l = witness.q.clone();

    let (lo_exp, hi_exp) = window_exponents(tau1, tau2, epsilon);
    let lo = ceil_pow(&q_l, &lo_exp);
    let hi = floor_pow(&q_l, &hi_exp);
    let in_window = alpha
        .convergents_in_range(&lo, &hi)
        .map_err(|e| e.into_exhausted("q_l' window"))?;
    let chosen = match pick {
        WindowPick::Smallest => in_window.first(),
        WindowPick::Largest => in_window.last(),
    };
    let q_prime = chosen
        .ok_or_else(|| Error::WindowEmpty {
            lo: lo.clone(),
            hi: hi.clone(),
        })?
        .q
        .clone();

    let q_prime_usize = q_prime
        .to_usize()
        .filter(|&q| q <= omega.len())
        .ok_or_else(|| Error::WordTooShort {
            needed: q_prime.clone(),
            len: omega.len(),
        })?;
    let j_count = omega.alpha_count(q_prime_usize);
    if j_count == 0 {
        return Err(Error::NotEnoughAlphas {
            requested: 1,
            available: 0,
        });
    }
    let ks = k_sequence(omega, j_count)?;

    let residue = |k: u64| -> u64 {
        (BigInt::from(k).mod_floor(&q_l))
            .to_u64()
            .expect("residue below k")
    };
    let mut buckets: BTreeMap<u64, usize> = BTreeMap::new();
    for &k in &ks {
        *buckets.entry(residue(k)).or_default() += 1;
    }
    // max count, smallest residue on ties (BTreeMap iterates in order)
    let (p_prime, _) = buckets.iter().fold(
        (0u64, 0usize),
        |best, (&p, &n)| if n > best.1 { (p, n) } else { best },
    );
    let members: Vec<(u64, u64)> = ks
        .iter()
        .enumerate()
        .filter(|(_, &k)| residue(k) == p_prime)
        .map(|(i, &k)| (i as u64 + 1, k))
        .collect();

    let qpr = rat_from_int(&q_prime);
    let threshold = (BigRational::from_integer(4.into()) * &qpr).recip();
    let alpha_threshold = (two() * &qpr).recip();
    let ctx = PairContext {
        threshold: &threshold,
        alpha_threshold: &alpha_threshold,
        q_prime: &q_prime,
        q_l: &q_l,
        tau2,
    };
    // pair differences are below q' in both coordinates, so the gap interval
    // has width <= 2 q' w0 = 1/(32 q')
    let w0 = (BigRational::from_integer(64.into()) * &qpr * &qpr).recip();
    let summary = certify_pairs(alpha, beta, &members, &ctx, l, w0)?;

    let n_members = members.len();
    let pigeonhole_holds =
        BigRational::from_integer(BigInt::from(n_members)) * c * rat_from_int(&q_l) >= qpr;
    let ball_radius = (BigRational::from_integer(10.into()) * &qpr).recip();
    let max_n = members
        .iter()
        .map(|&(j, k)| j + k)
        .max()
        .unwrap_or(1)
        .max(1);
    let boxes = member_box_count(alpha, beta, &members, &ball_radius, &BigInt::from(max_n))?;
    let box_count_consistent = 2 * boxes.count >= n_members as u64;
    let dim_datapoint_approx = (n_members as f64).ln() / ln_int::<f64>(&(&q_prime * 10));

    Ok(SeparationWitness {
        l,
        q_l,
        p_l: witness.p,
        window: (lo, hi),
        q_l_prime: q_prime,
        epsilon: epsilon.clone(),
        c: c.clone(),
        j_count,
        p_prime,
        members,
        gap_threshold: threshold,
        gap_lower_bound: summary.gap_lower_bound,
        cert_width: summary.width,
        alpha_bound_holds: summary.alpha_ok,
        beta_bound_holds: summary.beta_ok,
        pigeonhole_holds,
        ball_radius,
        member_box_count: boxes,
        box_count_consistent,
        dim_datapoint_approx,
    })
}

/// Minimum certified pairwise circle distance of the members with alpha and
/// beta enclosed at `width` (refined further only where a fold is ambiguous).
/// `None` with fewer than two members.
pub fn recheck_gaps(
    alpha: &CfNumber,
    beta: &CfNumber,
    members: &[(u64, u64)],
    width: &BigRational,
) -> Result<Option<BigRational>> {
    let step = BigRational::from_integer(BigInt::from(1u64 << 16));
    let mut pending: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|i| (i + 1..members.len()).map(move |i2| (i, i2)))
        .collect();
    let mut w = width.clone();
    let mut min_gap: Option<BigRational> = None;
    for _ in 0..MAX_REFINEMENTS {
        if pending.is_empty() {
            return Ok(min_gap);
        }
        let a = eval(alpha, &w)?;
        let b = eval(beta, &w)?;
        let gaps: Vec<Option<BigRational>> = pending
            .par_iter()
            .map(|&(i, i2)| {
                let dj = members[i2].0 as i64 - members[i].0 as i64;
                let dk = members[i2].1 as i64 - members[i].1 as i64;
                combine_signed(&a, &b, dj, dk)
                    .fold_distance()
                    .ok()
                    .map(|g| g.lo().clone())
            })
            .collect();
        let mut next = Vec::new();
        for (pair, g) in pending.iter().zip(gaps) {
            match g {
                Some(g) => {
                    if min_gap.as_ref().is_none_or(|m| &g < m) {
                        min_gap = Some(g);
                    }
                }
                None => next.push(*pair),
            }
        }
        pending = next;
        w /= &step;
    }
    Err(Error::exhausted("gap recheck undecided"))
}

/// `(τ₁, τ₂)` for the dimension bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub tau1: BigRational,
    pub tau2: Tau,
}

impl BoundParams {
    pub fn new(tau1: BigRational, tau2: Tau) -> Result<Self> {
        if tau1 < two() {
            return Err(Error::InvalidArgument(format!(
                "tau1 must be >= 2, got {tau1}"
            )));
        }
        if let Tau::Finite(t) = &tau2 {
            if *t < two() {
                return Err(Error::InvalidArgument(format!(
                    "tau2 must be >= 2, got {t}"
                )));
            }
        }
        Ok(BoundParams { tau1, tau2 })
    }

    /// `2 τ₁ < τ₂ + 2`; always true for infinite τ₂.
    pub fn is_admissible(&self) -> bool {
        match &self.tau2 {
            Tau::Finite(t) => check_admissible(&self.tau1, t).is_ok(),
            Tau::Infinite => true,
        }
    }
}

/// `1 - 2(τ₁ - 1)/τ₂`, and 1 for infinite τ₂.
pub fn theorem_bound(params: &BoundParams) -> Result<Rational> {
    match &params.tau2 {
        Tau::Infinite => Ok(BigRational::one()),
        Tau::Finite(t) => {
            check_admissible(&params.tau1, t)?;
            Ok(BigRational::one() - two() * (&params.tau1 - BigRational::one()) / t)
        }
    }
}

/// Half of [`theorem_bound`].
pub fn embed_threshold(params: &BoundParams) -> Result<Rational> {
    Ok(theorem_bound(params)? / two())
}

/// Zero-width helper for tests and callers holding exact points.
pub fn exact_points(xs: &[BigRational]) -> Vec<CircleArc<BigRational>> {
    xs.iter().map(|x| CircleArc::point(x.clone())).collect()
}

impl Default for SeparationParams {
    fn default() -> Self {
        SeparationParams {
            tau1: two(),
            tau2: BigRational::from_integer(6.into()),
            epsilon: BigRational::new(1.into(), 4.into()),
            l: 1,
            c: two(),
            pick: WindowPick::Largest,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dioph::{make_number, DiophantineSpec};
    use crate::orbit::{gen_omega, Strategy};
    use crate::scalar::{int, rat};

    fn tau6() -> CfNumber {
        make_number(&DiophantineSpec::finite(rat(6, 1), vec![int(2)]).unwrap())
    }

    fn params(l: usize, pick: WindowPick) -> SeparationParams {
        SeparationParams {
            l,
            pick,
            ..SeparationParams::default()
        }
    }

    #[test]
    fn box_count_examples() {
        let s = box_count(&exact_points(&[rat(0, 1), rat(1, 2)]), &rat(1, 8)).unwrap();
        assert_eq!((s.count, s.arcs.clone()), (2, int(4)));
        assert_eq!(s.bracket_factor(), 2);
        let grid: Vec<_> = (0..100).map(|i| rat(i, 100)).collect();
        let s = box_count(&exact_points(&grid), &rat(1, 8)).unwrap();
        assert_eq!(s.count, 4);
        let s = box_count(&exact_points(&grid), &rat(1, 64)).unwrap();
        assert_eq!(s.count, 32);
        assert_eq!(
            box_count(&exact_points(&grid), &rat(1, 3))
                .unwrap()
                .bracket_factor(),
            3
        );
    }

    #[test]
    fn box_count_membership() {
        // straddles 1/4 at r = 1/8
        let p = CircleArc::new(rat(24, 100), rat(26, 100)).unwrap();
        assert_eq!(box_count(&[p], &rat(1, 2)).map(|s| s.count), Ok(1),);
        let p = CircleArc::new(rat(249, 1000), rat(251, 1000)).unwrap();
        assert_eq!(
            box_count(&[p], &rat(1, 8)),
            Err(Error::AmbiguousMembership { index: 0 })
        );
        // wrapped across 0 also straddles
        let p = CircleArc::new(rat(999, 1000), rat(1001, 1000)).unwrap();
        assert!(matches!(
            box_count(&[p], &rat(1, 8)),
            Err(Error::AmbiguousMembership { .. })
        ));
        let wide = CircleArc::new(rat(0, 1), rat(1, 10)).unwrap();
        assert!(matches!(
            box_count(&[wide], &rat(1, 8)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn dim_estimate_examples() {
        let s = |r: BigRational, count| BoxCountSample {
            r,
            count,
            arcs: int(1),
        };
        let e = upper_box_dim_estimate(&[s(rat(1, 4), 2), s(rat(1, 16), 4)]).unwrap();
        assert!((e.estimate - 0.5).abs() < 1e-12);
        let e = upper_box_dim_estimate(&[s(rat(1, 4), 1), s(rat(1, 16), 1)]).unwrap();
        assert_eq!(e.estimate, 0.0);
        let e = upper_box_dim_estimate(&[s(rat(1, 8), 4), s(rat(1, 64), 32)]).unwrap();
        assert!((e.estimate - 5.0 / 6.0).abs() < 1e-12);
        assert!(matches!(
            upper_box_dim_estimate(&[s(rat(1, 8), 0), s(rat(1, 64), 32)]),
            Err(Error::DegenerateSample(_))
        ));
        assert!(upper_box_dim_estimate(&[s(rat(1, 8), 4)]).is_err());
        assert!(upper_box_dim_estimate(&[s(rat(1, 8), 4), s(rat(1, 8), 4)]).is_err());
    }

    #[test]
    fn window_exponents_l1() {
        let (lo, hi) = window_exponents(&rat(2, 1), &rat(6, 1), &rat(1, 4));
        assert_eq!((lo, hi), (rat(11, 5), rat(11, 4)));
    }

    #[test]
    fn separation_l1() {
        let omega = gen_omega(&Strategy::Alternating, 64, 0).unwrap();
        let w = extract_separated_subset(
            &CfNumber::golden(),
            &tau6(),
            &omega,
            &params(1, WindowPick::Largest),
        )
        .unwrap();
        assert_eq!(w.q_l, int(2));
        assert_eq!(w.window, (int(5), int(6)));
        assert_eq!(w.q_l_prime, int(5));
        assert_eq!(w.j_count, 3);
        assert_eq!(w.p_prime, 0);
        assert_eq!(w.members, vec![(1, 0), (3, 2)]);
        assert!(w.is_verified());
        assert!(w.pigeonhole_holds && w.alpha_bound_holds && w.beta_bound_holds);
        assert!(w.box_count_consistent);
        assert_eq!(w.ball_radius, rat(1, 50));
        assert_eq!(w.record().status, "VERIFIED");
    }

    #[test]
    fn separation_l2_largest_pick() {
        let omega = gen_omega(&Strategy::Alternating, 12_000, 0).unwrap();
        let w = extract_separated_subset(
            &CfNumber::golden(),
            &tau6(),
            &omega,
            &params(2, WindowPick::Largest),
        )
        .unwrap();
        assert_eq!(w.q_l, int(33));
        assert_eq!(w.window, (int(2192), int(14993)));
        assert_eq!(w.q_l_prime, int(10946));
        assert_eq!(w.j_count, 5473);
        assert_eq!(w.members.len(), 166);
        assert!(w.is_verified());
        assert!(w.pigeonhole_holds && w.alpha_bound_holds && w.beta_bound_holds);
        assert!(w.dim_datapoint_approx > 0.44 && w.dim_datapoint_approx < 0.441);
        let finer = recheck_gaps(
            &CfNumber::golden(),
            &tau6(),
            &w.members,
            &(&w.cert_width / rat(4, 1)),
        )
        .unwrap()
        .unwrap();
        assert!(finer >= w.gap_threshold);
    }

    #[test]
    fn separation_errors() {
        let omega = gen_omega(&Strategy::Alternating, 4, 0).unwrap();
        let r = extract_separated_subset(
            &CfNumber::golden(),
            &tau6(),
            &omega,
            &params(1, WindowPick::Smallest),
        );
        assert_eq!(
            r.unwrap_err(),
            Error::WordTooShort {
                needed: int(5),
                len: 4
            }
        );

        // alpha = [0; 100, 1, 1, ...] has q = 1, 100, 101, 201, ... so [5, 6] is empty
        let mut a = vec![int(100)];
        a.extend(vec![int(1); 40]);
        let alpha = CfNumber::literal(a).unwrap();
        let omega = gen_omega(&Strategy::Alternating, 64, 0).unwrap();
        let r = extract_separated_subset(&alpha, &tau6(), &omega, &params(1, WindowPick::Largest));
        assert_eq!(
            r.unwrap_err(),
            Error::WindowEmpty {
                lo: int(5),
                hi: int(6)
            }
        );

        let bad = SeparationParams {
            tau1: rat(4, 1),
            ..params(1, WindowPick::Largest)
        };
        assert!(matches!(
            extract_separated_subset(&CfNumber::golden(), &tau6(), &omega, &bad),
            Err(Error::InadmissibleParams { .. })
        ));
    }

    #[test]
    fn bound_examples() {
        let p = |t1: i64, t2: Tau| BoundParams::new(rat(t1, 1), t2).unwrap();
        let fin = |t: i64| Tau::Finite(rat(t, 1));
        assert_eq!(theorem_bound(&p(2, fin(4))).unwrap(), rat(1, 2));
        assert_eq!(theorem_bound(&p(2, Tau::Infinite)).unwrap(), rat(1, 1));
        assert!(matches!(
            theorem_bound(&p(3, fin(4))),
            Err(Error::InadmissibleParams { .. })
        ));
        assert_eq!(embed_threshold(&p(2, fin(4))).unwrap(), rat(1, 4));
        assert_eq!(embed_threshold(&p(2, Tau::Infinite)).unwrap(), rat(1, 2));
        assert_eq!(embed_threshold(&p(2, fin(8))).unwrap(), rat(3, 8));
        assert_eq!(theorem_bound(&p(2, fin(6))).unwrap(), rat(2, 3));
        assert!(!p(3, fin(4)).is_admissible());
        assert!(BoundParams::new(rat(3, 2), fin(4)).is_err());
    }
}
