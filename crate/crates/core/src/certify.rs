//! Certified evaluation of continued fractions: enclosing intervals, distances
//! to the nearest integer, and the best-approximation check.
//!
//! Every comparison here is decided on exact rational intervals. When an
//! interval is too wide to decide, the caller's width is shrunk and the
//! computation repeated; the only way out without an answer is running into the
//! number's depth cap, which is reported as `PrecisionExhausted`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::cf::{finite_value, CfNumber};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::cmp_cross;
use crate::CertifiedValue;
use crate::Convergent;

/// Upper bound on refinement rounds in [`refine_until`].
pub const MAX_REFINEMENTS: usize = 256;

/// Width shrink factor between refinement rounds.
const REFINE_STEP: u64 = 1 << 16;

/// An interval of width at most `target_width` containing `x`.
///
/// Deepens `n` until `1/(q_n q_{n+1}) <= target_width` and returns the hull of
/// `p_n/q_n` and `p_{n+1}/q_{n+1}`, which brackets `x` and lies inside
/// `p_n/q_n ± 1/(q_n q_{n+1})`. A literal that runs out evaluates to its exact
/// rational value.
pub fn eval(x: &CfNumber, target_width: &BigRational) -> Result<CertifiedValue> {
    if !target_width.is_positive() {
        return Err(Error::InvalidArgument(
            "target width must be positive".into(),
        ));
    }
    Ok(
        match bracket(x, target_width.numer(), target_width.denom())? {
            (a, None) => Interval::point(finite_value(&a)),
            (a, Some(b)) => Interval::spanning(finite_value(&a), finite_value(&b)),
        },
    )
}

/// Convergents `p_n/q_n`, `p_{n+1}/q_{n+1}` for the first `n` with
/// `1/(q_n q_{n+1}) <= num/den`, or the exact value of an exhausted literal.
fn bracket(x: &CfNumber, num: &BigInt, den: &BigInt) -> Result<(Convergent, Option<Convergent>)> {
    let literal_len = x.literal_len();
    let n = x
        .find_index(|n, q, q_next| literal_len == Some(n + 1) || num * q * q_next >= *den)
        .map_err(|e| e.into_exhausted("eval"))?;
    let next = x.convergent(n + 1)?;
    if literal_len == Some(n + 1) {
        return Ok((next, None));
    }
    Ok((x.convergent(n)?, Some(next)))
}

/// Certified `‖q x‖`, the distance from `q x` to the nearest integer, at width
/// at most `target_width`.
///
/// Same result as folding `q * eval(x, target_width / q)`, computed on the
/// convergents' integers to avoid big gcds.
pub fn nearest_int_dist(
    x: &CfNumber,
    q: &BigInt,
    target_width: &BigRational,
) -> Result<CertifiedValue> {
    if q < &BigInt::one() {
        return Err(Error::InvalidArgument(format!("q must be >= 1, got {q}")));
    }
    if !target_width.is_positive() {
        return Err(Error::InvalidArgument(
            "target width must be positive".into(),
        ));
    }
    let dist = |c: &Convergent| {
        let r = (q * &c.p).mod_floor(&c.q);
        let s = &c.q - &r;
        BigRational::new(r.min(s), c.q.clone())
    };
    let (a, b) = match bracket(x, target_width.numer(), &(target_width.denom() * q))? {
        (a, None) => return Ok(Interval::point(dist(&a))),
        (a, Some(b)) => (a, b),
    };
    let (lo, hi) = if &a.p * &b.q <= &b.p * &a.q {
        (a, b)
    } else {
        (b, a)
    };
    // the first fold point above q*lo is f/2 with f = floor(2 q lo) + 1
    let two_q = q * 2;
    let f: BigInt = Integer::div_floor(&(&two_q * &lo.p), &lo.q) + 1;
    if f * &hi.q < two_q * &hi.p {
        return Err(Error::AmbiguousFold);
    }
    Ok(Interval::spanning(dist(&lo), dist(&hi)))
}

/// Runs `probe` at `start`, `start / 2^16`, ... until it yields a value.
/// `AmbiguousFold` counts as "undecided"; other errors propagate.
pub fn refine_until<T>(
    start: &BigRational,
    mut probe: impl FnMut(&BigRational) -> Result<Option<T>>,
) -> Result<T> {
    let step = BigRational::from_integer(REFINE_STEP.into());
    let mut w = start.clone();
    for _ in 0..MAX_REFINEMENTS {
        match probe(&w) {
            Ok(Some(v)) => return Ok(v),
            Ok(None) | Err(Error::AmbiguousFold) => {}
            Err(e) => return Err(e),
        }
        w /= &step;
    }
    Err(Error::exhausted(format!(
        "undecided after {MAX_REFINEMENTS} refinements"
    )))
}

/// Like [`nearest_int_dist`] but retries at smaller widths when the interval
/// straddles a fold point.
pub fn nearest_int_dist_decided(
    x: &CfNumber,
    q: &BigInt,
    target_width: &BigRational,
) -> Result<CertifiedValue> {
    refine_until(target_width, |w| nearest_int_dist(x, q, w).map(Some))
}

/// Checks `‖q x‖ >= ‖q_n x‖` where `n` is maximal with `q_n <= q < q_{n+1}`.
/// For an honest continued fraction this is always true.
pub fn best_approx_verify(x: &CfNumber, q: &BigInt) -> Result<bool> {
    if q < &BigInt::one() {
        return Err(Error::InvalidArgument(format!("q must be >= 1, got {q}")));
    }
    let n = x
        .bracketing_index(q)
        .map_err(|e| e.into_exhausted("best_approx_verify"))?;
    let q_n = x.convergent(n)?.q;
    if &q_n == q {
        return Ok(true);
    }
    let start = BigRational::new(BigInt::one(), q * q * 16);
    refine_until(&start, |w| {
        let here = nearest_int_dist(x, q, w)?;
        let best = nearest_int_dist(x, &q_n, w)?;
        if cmp_cross(here.lo(), best.hi()).is_ge() {
            Ok(Some(true))
        } else if cmp_cross(here.hi(), best.lo()).is_lt() {
            Ok(Some(false))
        } else {
            Ok(None)
        }
    })
    .map_err(|e| e.into_exhausted("best_approx_verify"))
}

/// Outcome of checking the convergent error bounds at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentBounds {
    pub n: usize,
    /// `1/(q_n (q_{n+1} + q_n)) < |x - p_n/q_n|`
    pub lower_strict: bool,
    /// `|x - p_n/q_n| < 1/(q_n q_{n+1})`
    pub upper_strict: bool,
    /// `|x - p_n/q_n| <= 1/(a_{n+1} q_n^2)`
    pub sharper: bool,
}

/// Certifies the two-sided error bound and the `1/(a_{n+1} q_n^2)` bound at
/// index `n >= 1`.
pub fn convergent_error_bounds(x: &CfNumber, n: usize) -> Result<ConvergentBounds> {
    if n == 0 {
        return Err(Error::InvalidArgument("bounds start at n = 1".into()));
    }
    let c = x.convergent(n)?;
    let next = x.convergent(n + 1)?;
    let a_next = x.quotient(n + 1)?;
    let value = finite_value(&c);
    let lower = BigRational::new(BigInt::one(), &c.q * (&next.q + &c.q));
    let upper = BigRational::new(BigInt::one(), &c.q * &next.q);
    let sharper = BigRational::new(BigInt::one(), &a_next * &c.q * &c.q);

    let start = &upper * &upper / BigRational::from_integer(16.into());
    let mut lower_ok = None;
    let mut upper_ok = None;
    let mut sharper_ok = None;
    refine_until(&start, |w| {
        let d = eval(x, w)?.shift(&-value.clone());
        let d = if !d.lo().is_negative() {
            d
        } else if !d.hi().is_positive() {
            -d
        } else {
            return Ok(None);
        };
        if lower_ok.is_none() {
            if d.lo() > &lower {
                lower_ok = Some(true);
            } else if d.hi() <= &lower {
                lower_ok = Some(false);
            }
        }
        if upper_ok.is_none() {
            if d.hi() < &upper {
                upper_ok = Some(true);
            } else if d.lo() >= &upper {
                upper_ok = Some(false);
            }
        }
        if sharper_ok.is_none() {
            if d.hi() <= &sharper {
                sharper_ok = Some(true);
            } else if d.lo() > &sharper {
                sharper_ok = Some(false);
            }
        }
        Ok(match (lower_ok, upper_ok, sharper_ok) {
            (Some(l), Some(u), Some(s)) => Some((l, u, s)),
            _ => None,
        })
    })
    .map(|(lower_strict, upper_strict, sharper)| ConvergentBounds {
        n,
        lower_strict,
        upper_strict,
        sharper,
    })
    .map_err(|e| e.into_exhausted("convergent_error_bounds"))
}

/// `p_n q_{n-1} - p_{n-1} q_n` for `n >= 1` (equals `(-1)^(n-1)`).
pub fn determinant(x: &CfNumber, n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidArgument("determinant starts at n = 1".into()));
    }
    let c = x.convergent(n)?;
    let prev = x.convergent(n - 1)?;
    Ok(&c.p * &prev.q - &prev.p * &c.q)
}
