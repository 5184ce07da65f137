//! Continued-fraction numbers in (0, 1) with lazily materialized partial
//! quotients and convergents.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::convergent::next_term;
use crate::error::{Error, Result};
use crate::scalar::{ceil_pow, parse_rational};
use crate::wire::{ints, unwrap_ints, DecInt};
use crate::Convergent;

/// Default maximum number of partial quotients materialized per number.
pub const DEFAULT_DEPTH_CAP: usize = 64;

/// Generated quotients above this many bits are refused.
pub const MAX_QUOTIENT_BITS: u64 = 1 << 22;

/// Rules that extend a seed of partial quotients indefinitely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthRule {
    /// `a_{n+1} = max(1, ceil(q_n^(tau - 2)))`: exact order `tau`.
    ExactOrder { tau: BigRational, seed: Vec<BigInt> },
    /// `a_{n+1} = q_n^n`: a Liouville number.
    Liouville { seed: Vec<BigInt> },
}

impl GrowthRule {
    pub fn seed(&self) -> &[BigInt] {
        match self {
            GrowthRule::ExactOrder { seed, .. } | GrowthRule::Liouville { seed } => seed,
        }
    }

    /// Quotient `a_{n+1}` given `q_n`.
    fn next_quotient(&self, n: usize, q_n: &BigInt) -> Result<BigInt> {
        match self {
            GrowthRule::ExactOrder { tau, .. } => {
                let exp = tau - BigRational::from_integer(2.into());
                let est_bits = BigRational::from_integer(q_n.bits().into()) * &exp;
                if est_bits.ceil().to_integer() > BigInt::from(MAX_QUOTIENT_BITS) {
                    return Err(Error::exhausted(format!(
                        "exact-order quotient a_{} exceeds {MAX_QUOTIENT_BITS} bits",
                        n + 1
                    )));
                }
                Ok(ceil_pow(q_n, &exp).max(BigInt::one()))
            }
            GrowthRule::Liouville { .. } => {
                if q_n.bits().saturating_mul(n as u64) > MAX_QUOTIENT_BITS {
                    return Err(Error::exhausted(format!(
                        "Liouville quotient a_{} exceeds {MAX_QUOTIENT_BITS} bits",
                        n + 1
                    )));
                }
                Ok(num_traits::pow(q_n.clone(), n))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfKind {
    /// Finitely many known quotients; the number is the rational they spell.
    Literal(Vec<BigInt>),
    /// `pre` followed by `per` repeated forever.
    Periodic {
        pre: Vec<BigInt>,
        per: Vec<BigInt>,
    },
    Generated(GrowthRule),
}

#[derive(Debug)]
struct Expansion {
    /// `a[i]` is `a_{i+1}`.
    a: Vec<BigInt>,
    /// `p[n]`, `q[n]` for `n >= 0`.
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl Expansion {
    fn new() -> Self {
        Expansion {
            a: Vec::new(),
            p: vec![BigInt::zero()],
            q: vec![BigInt::one()],
        }
    }

    fn push(&mut self, a: BigInt) {
        let n = self.a.len() + 1;
        let (p2, q2) = if n == 1 {
            (BigInt::one(), BigInt::zero())
        } else {
            (self.p[n - 2].clone(), self.q[n - 2].clone())
        };
        let p = next_term(&a, &self.p[n - 1], &p2);
        let q = next_term(&a, &self.q[n - 1], &q2);
        self.a.push(a);
        self.p.push(p);
        self.q.push(q);
    }
}

/// An irrational in (0, 1) given by its partial quotients `a_1, a_2, ...`.
///
/// Clones share one append-only cache of materialized quotients, guarded by a
/// mutex, so a number can be handed to several threads.
#[derive(Clone)]
pub struct CfNumber {
    kind: Arc<CfKind>,
    depth_cap: usize,
    cache: Arc<Mutex<Expansion>>,
}

fn check_quotients(v: &[BigInt], what: &str) -> Result<()> {
    if let Some(bad) = v.iter().find(|a| !a.is_positive()) {
        return Err(Error::InvalidArgument(format!(
            "{what}: partial quotients must be >= 1, got {bad}"
        )));
    }
    Ok(())
}

impl CfNumber {
    fn from_kind(kind: CfKind) -> Self {
        CfNumber {
            kind: Arc::new(kind),
            depth_cap: DEFAULT_DEPTH_CAP,
            cache: Arc::new(Mutex::new(Expansion::new())),
        }
    }

    pub fn literal(a: Vec<BigInt>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument(
                "literal needs at least one quotient".into(),
            ));
        }
        check_quotients(&a, "literal")?;
        Ok(Self::from_kind(CfKind::Literal(a)))
    }

    pub fn literal_u64(a: &[u64]) -> Result<Self> {
        Self::literal(a.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn periodic(pre: Vec<BigInt>, per: Vec<BigInt>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::InvalidArgument(
                "periodic part must be nonempty".into(),
            ));
        }
        check_quotients(&pre, "preperiod")?;
        check_quotients(&per, "period")?;
        Ok(Self::from_kind(CfKind::Periodic { pre, per }))
    }

    /// `[0; 1, 1, 1, ...] = (sqrt(5) - 1) / 2`.
    pub fn golden() -> Self {
        Self::from_kind(CfKind::Periodic {
            pre: Vec::new(),
            per: vec![BigInt::one()],
        })
    }

    pub fn generated(rule: GrowthRule) -> Result<Self> {
        if rule.seed().is_empty() {
            return Err(Error::InvalidArgument("seed must be nonempty".into()));
        }
        check_quotients(rule.seed(), "seed")?;
        if let GrowthRule::ExactOrder { tau, .. } = &rule {
            if *tau < BigRational::from_integer(2.into()) {
                return Err(Error::InvalidArgument(format!(
                    "tau must be >= 2, got {tau}"
                )));
            }
        }
        Ok(Self::from_kind(CfKind::Generated(rule)))
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap.max(1);
        self
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn kind(&self) -> &CfKind {
        &self.kind
    }

    /// Number of quotients that can ever be produced.
    pub fn available(&self) -> usize {
        match &*self.kind {
            CfKind::Literal(a) => a.len().min(self.depth_cap),
            _ => self.depth_cap,
        }
    }

    /// `Some(L)` for a literal of length `L`.
    pub fn literal_len(&self) -> Option<usize> {
        match &*self.kind {
            CfKind::Literal(a) => Some(a.len()),
            _ => None,
        }
    }

    /// Materializes quotients through `a_n` and hands the cache to `f`.
    fn with_expansion<R>(&self, n: usize, f: impl FnOnce(&Expansion) -> R) -> Result<R> {
        let available = self.available();
        if n > available {
            return Err(Error::DepthExceeded {
                requested: available + 1,
                available,
            });
        }
        let mut exp = self.cache.lock().expect("cf cache poisoned");
        while exp.a.len() < n {
            let m = exp.a.len() + 1;
            let a = match &*self.kind {
                CfKind::Literal(a) => a[m - 1].clone(),
                CfKind::Periodic { pre, per } => {
                    if m <= pre.len() {
                        pre[m - 1].clone()
                    } else {
                        per[(m - 1 - pre.len()) % per.len()].clone()
                    }
                }
                CfKind::Generated(rule) => {
                    let seed = rule.seed();
                    if m <= seed.len() {
                        seed[m - 1].clone()
                    } else {
                        rule.next_quotient(m - 1, &exp.q[m - 1])?
                    }
                }
            };
            exp.push(a);
        }
        Ok(f(&exp))
    }

    /// Partial quotient `a_n`, `n >= 1`.
    pub fn quotient(&self, n: usize) -> Result<BigInt> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "quotients are indexed from 1".into(),
            ));
        }
        self.with_expansion(n, |e| e.a[n - 1].clone())
    }

    pub fn quotients(&self, n: usize) -> Result<Vec<BigInt>> {
        self.with_expansion(n, |e| e.a[..n].to_vec())
    }

    pub fn convergent(&self, n: usize) -> Result<Convergent> {
        self.with_expansion(n, |e| Convergent {
            n,
            p: e.p[n].clone(),
            q: e.q[n].clone(),
        })
    }

    /// Convergents with indices `0..=n`.
    pub fn convergents(&self, n: usize) -> Result<Vec<Convergent>> {
        self.with_expansion(n, |e| {
            (0..=n)
                .map(|i| Convergent {
                    n: i,
                    p: e.p[i].clone(),
                    q: e.q[i].clone(),
                })
                .collect()
        })
    }

    /// The convergent denominators `q_n` lying in `[lo, hi]`, in increasing
    /// order. Fails with `DepthExceeded` if the expansion runs out before a
    /// denominator exceeds `hi`.
    pub fn convergents_in_range(&self, lo: &BigInt, hi: &BigInt) -> Result<Vec<Convergent>> {
        let mut out = Vec::new();
        let mut n = 0;
        loop {
            let c = self.convergent(n)?;
            if &c.q > hi {
                return Ok(out);
            }
            // q_0 = q_1 when a_1 = 1; keep the first occurrence only.
            if &c.q >= lo && out.last().is_none_or(|prev: &Convergent| prev.q != c.q) {
                out.push(c);
            }
            n += 1;
        }
    }

    /// Index `n` with `q_n <= q < q_{n+1}` (maximal such `n`).
    pub fn bracketing_index(&self, q: &BigInt) -> Result<usize> {
        self.find_index(|_, _, next| next > q)
    }

    /// The first `n >= 0` with `pred(n, q_n, q_{n+1})`, materializing
    /// quotients as needed.
    pub fn find_index(&self, pred: impl Fn(usize, &BigInt, &BigInt) -> bool) -> Result<usize> {
        let mut n = 0;
        loop {
            if self.with_expansion(n + 1, |e| pred(n, &e.q[n], &e.q[n + 1]))? {
                return Ok(n);
            }
            n += 1;
        }
    }
}

impl PartialEq for CfNumber {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Debug for CfNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.kind {
            CfKind::Literal(a) => write!(f, "CfNumber::Literal({a:?})"),
            CfKind::Periodic { pre, per } => write!(f, "CfNumber::Periodic({pre:?}, ({per:?})*)"),
            CfKind::Generated(rule) => write!(f, "CfNumber::Generated({rule:?})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RuleName {
    ExactOrder,
    Liouville,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<String>,
    seed: Vec<DecInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum CfRepr {
    Literal { a: Vec<DecInt> },
    Periodic { pre: Vec<DecInt>, per: Vec<DecInt> },
    Generated { rule: RuleName, params: RuleParams },
}

impl CfRepr {
    fn of(x: &CfNumber) -> Self {
        match x.kind() {
            CfKind::Literal(a) => CfRepr::Literal { a: ints(a) },
            CfKind::Periodic { pre, per } => CfRepr::Periodic {
                pre: ints(pre),
                per: ints(per),
            },
            CfKind::Generated(GrowthRule::ExactOrder { tau, seed }) => CfRepr::Generated {
                rule: RuleName::ExactOrder,
                params: RuleParams {
                    tau: Some(tau.to_string()),
                    seed: ints(seed),
                },
            },
            CfKind::Generated(GrowthRule::Liouville { seed }) => CfRepr::Generated {
                rule: RuleName::Liouville,
                params: RuleParams {
                    tau: Some("inf".into()),
                    seed: ints(seed),
                },
            },
        }
    }

    fn build(self) -> Result<CfNumber> {
        match self {
            CfRepr::Literal { a } => CfNumber::literal(unwrap_ints(a)),
            CfRepr::Periodic { pre, per } => CfNumber::periodic(unwrap_ints(pre), unwrap_ints(per)),
            CfRepr::Generated { rule, params } => {
                let seed = unwrap_ints(params.seed);
                match rule {
                    RuleName::Liouville => CfNumber::generated(GrowthRule::Liouville { seed }),
                    RuleName::ExactOrder => {
                        let tau = params.tau.ok_or_else(|| {
                            Error::Parse("exact_order rule needs params.tau".into())
                        })?;
                        let tau = parse_rational(&tau)?;
                        CfNumber::generated(GrowthRule::ExactOrder { tau, seed })
                    }
                }
            }
        }
    }
}

impl Serialize for CfNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CfRepr::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CfNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        CfRepr::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

/// Exact value of a finite continued fraction `[0; a_1, ..., a_n]`.
pub fn finite_value(c: &Convergent) -> BigRational {
    // p_n, q_n are coprime with q_n > 0, so no reduction is needed
    BigRational::new_raw(c.p.clone(), c.q.clone())
}
