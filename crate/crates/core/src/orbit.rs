//! Choice words over {A, B}, the orbits they drive on the circle, and the
//! combinatorics of the separation argument (prefix counts, `k_j`, balance).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::eval;
use crate::cf::CfNumber;
use crate::error::{Error, Result};
use crate::interval::CircleArc;
use crate::scalar::rat_from_int;
use crate::wire::DecRat;
use crate::CertifiedValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Step by alpha.
    A,
    /// Step by beta.
    B,
}

impl Letter {
    fn from_char(c: char) -> Option<Letter> {
        match c {
            'A' | 'a' => Some(Letter::A),
            'B' | 'b' => Some(Letter::B),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }
}

/// How a word is generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum Strategy {
    /// ABAB...
    Alternating,
    /// The pattern repeated, e.g. `"ABB"`.
    Periodic { pattern: String },
    /// Independent letters with `P(A) = p`, drawn from a seeded ChaCha8 stream.
    Bernoulli { p: DecRat },
    /// An explicit word, run-length encoded (`"1A2B"`) or plain (`"ABB"`).
    Literal { rle: String },
}

/// A finite word `ω_1 ... ω_N` with its prefix counts `|ω|_{α,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWord {
    letters: Vec<Letter>,
    /// `alpha_prefix[n] = |ω|_{α,n}` for `0 <= n <= N`.
    alpha_prefix: Vec<usize>,
    strategy: Strategy,
    seed: u64,
}

fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    let mut count = String::new();
    for c in s.chars().filter(|c| !c.is_whitespace()) {
        if c.is_ascii_digit() {
            count.push(c);
            continue;
        }
        let letter = Letter::from_char(c)
            .ok_or_else(|| Error::InvalidPattern(format!("unexpected character {c:?}")))?;
        let reps: usize = if count.is_empty() {
            1
        } else {
            count
                .parse()
                .map_err(|_| Error::InvalidPattern(format!("bad run length {count:?}")))?
        };
        if reps == 0 {
            return Err(Error::InvalidPattern("run length 0".into()));
        }
        out.extend(std::iter::repeat_n(letter, reps));
        count.clear();
    }
    if !count.is_empty() {
        return Err(Error::InvalidPattern(
            "trailing run length without a letter".into(),
        ));
    }
    if out.is_empty() {
        return Err(Error::InvalidPattern("empty pattern".into()));
    }
    Ok(out)
}

fn probability(p: &BigRational) -> Result<(u64, u64)> {
    let bad = || {
        Error::InvalidPattern(format!(
            "Bernoulli p must be a rational in [0, 1] with u64 parts, got {p}"
        ))
    };
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(bad());
    }
    let num = p.numer().to_u64().ok_or_else(bad)?;
    let den = p.denom().to_u64().ok_or_else(bad)?;
    Ok((num, den))
}

/// Deterministic in `(strategy, n, seed)`; the seed only matters for Bernoulli.
pub fn gen_omega(strategy: &Strategy, n: usize, seed: u64) -> Result<OmegaWord> {
    if n == 0 {
        return Err(Error::InvalidArgument("word length must be >= 1".into()));
    }
    let letters: Vec<Letter> = match strategy {
        Strategy::Alternating => (0..n)
            .map(|i| if i % 2 == 0 { Letter::A } else { Letter::B })
            .collect(),
        Strategy::Periodic { pattern } => {
            let pat = parse_letters(pattern)?;
            pat.iter().copied().cycle().take(n).collect()
        }
        Strategy::Bernoulli { p } => {
            let (num, den) = probability(&p.0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    if rng.gen_range(0..den) < num {
                        Letter::A
                    } else {
                        Letter::B
                    }
                })
                .collect()
        }
        Strategy::Literal { rle } => {
            let word = parse_letters(rle)?;
            if word.len() < n {
                return Err(Error::InvalidPattern(format!(
                    "literal word has {} letters, {n} requested",
                    word.len()
                )));
            }
            word[..n].to_vec()
        }
    };
    Ok(OmegaWord::from_letters(letters, strategy.clone(), seed))
}

impl OmegaWord {
    fn from_letters(letters: Vec<Letter>, strategy: Strategy, seed: u64) -> Self {
        let mut alpha_prefix = Vec::with_capacity(letters.len() + 1);
        alpha_prefix.push(0);
        let mut acc = 0;
        for l in &letters {
            if *l == Letter::A {
                acc += 1;
            }
            alpha_prefix.push(acc);
        }
        OmegaWord {
            letters,
            alpha_prefix,
            strategy,
            seed,
        }
    }

    /// A word given literally, e.g. `"ABBA"` or `"1A2B1A"`.
    pub fn parse(s: &str) -> Result<Self> {
        let letters = parse_letters(s)?;
        let rle = encode_rle(&letters);
        Ok(Self::from_letters(letters, Strategy::Literal { rle }, 0))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `|ω|_{α,n}` for `0 <= n <= N`.
    pub fn alpha_count(&self, n: usize) -> usize {
        self.alpha_prefix[n]
    }

    /// `|ω|_{β,n} = n - |ω|_{α,n}`.
    pub fn beta_count(&self, n: usize) -> usize {
        n - self.alpha_prefix[n]
    }

    /// `|ω|_{α,1}, ..., |ω|_{α,N}`.
    pub fn prefix_alpha_counts(&self) -> &[usize] {
        &self.alpha_prefix[1..]
    }

    pub fn to_rle(&self) -> String {
        encode_rle(&self.letters)
    }

    pub fn to_plain(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }

    pub fn record(&self) -> OmegaRecord {
        OmegaRecord {
            strategy: self.strategy.clone(),
            n: self.len(),
            seed: self.seed,
            word: self.to_rle(),
        }
    }
}

fn encode_rle(letters: &[Letter]) -> String {
    let mut out = String::new();
    let mut iter = letters.iter().peekable();
    while let Some(&l) = iter.next() {
        let mut run = 1;
        while iter.peek() == Some(&&l) {
            iter.next();
            run += 1;
        }
        write!(out, "{run}{}", l.as_char()).unwrap();
    }
    out
}

/// JSON form of a word: the run-length encoding plus how it was made.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRecord {
    #[serde(flatten)]
    pub strategy: Strategy,
    pub n: usize,
    pub seed: u64,
    /// The word itself, run-length encoded.
    pub word: String,
}

impl OmegaRecord {
    pub fn to_word(&self) -> Result<OmegaWord> {
        let letters = parse_letters(&self.word)?;
        if letters.len() != self.n {
            return Err(Error::InvalidPattern(format!(
                "rle has {} letters, record says {}",
                letters.len(),
                self.n
            )));
        }
        Ok(OmegaWord::from_letters(
            letters,
            self.strategy.clone(),
            self.seed,
        ))
    }
}

/// `k_1, ..., k_J`: `k_j` is the number of B's before the `j`-th A, i.e. the
/// least `k` with `|ω|_{α, j+k} = j`.
pub fn k_sequence(omega: &OmegaWord, count: usize) -> Result<Vec<u64>> {
    let available = omega.alpha_count(omega.len());
    if count > available {
        return Err(Error::NotEnoughAlphas {
            requested: count,
            available,
        });
    }
    Ok(omega
        .letters
        .iter()
        .enumerate()
        .filter(|(_, l)| **l == Letter::A)
        .take(count)
        .enumerate()
        .map(|(j0, (pos0, _))| (pos0 - j0) as u64)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Both counts stay within a factor `C` of each other past burn-in.
    Comparable(BigRational),
    /// Some prefix past burn-in has no A's or no B's.
    Unbalanced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    /// Smallest `C` with `|ω|_β / C <= |ω|_α <= C |ω|_β` on every prefix past
    /// burn-in; `None` means unbounded.
    pub c_estimate: Option<BigRational>,
    pub longest_run: usize,
    pub burn_in: usize,
    pub classification: Classification,
}

impl BalanceReport {
    /// `ceil(C_estimate) + 1`, the default comparability constant.
    pub fn default_c(&self) -> Option<BigRational> {
        self.c_estimate
            .as_ref()
            .map(|c| c.ceil() + BigRational::one())
    }
}

/// Measures how far the A and B counts drift apart past `burn_in`.
pub fn balance_classify(omega: &OmegaWord, burn_in: usize) -> Result<BalanceReport> {
    let n = omega.len();
    if burn_in >= n {
        return Err(Error::InvalidArgument(format!(
            "burn-in {burn_in} must be below the word length {n}"
        )));
    }
    let mut longest_run = 0;
    let mut run = 0;
    for (i, l) in omega.letters.iter().enumerate() {
        run = if i > 0 && omega.letters[i - 1] == *l {
            run + 1
        } else {
            1
        };
        longest_run = longest_run.max(run);
    }

    // best ratio as (num, den), compared by cross-multiplication
    let mut best: Option<(u128, u128)> = Some((1, 1));
    for m in burn_in + 1..=n {
        let a = omega.alpha_count(m) as u128;
        let b = (m as u128) - a;
        if a == 0 || b == 0 {
            best = None;
            break;
        }
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if let Some((bn, bd)) = best {
            if hi * bd > bn * lo {
                best = Some((hi, lo));
            }
        }
    }
    let c_estimate = best.map(|(num, den)| BigRational::new(BigInt::from(num), BigInt::from(den)));
    let classification = match &c_estimate {
        Some(c) => Classification::Comparable(c.clone()),
        None => Classification::Unbalanced,
    };
    Ok(BalanceReport {
        c_estimate,
        longest_run,
        burn_in,
        classification,
    })
}

/// `x_n = j α + k β mod 1` with `j = |ω|_{α,n}`, `k = |ω|_{β,n}`; `x_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub n: usize,
    pub j: u64,
    pub k: u64,
    pub value: CircleArc<BigRational>,
}

/// Enclosure of `j α + k β` from enclosures of α and β (not reduced mod 1).
pub fn combine(alpha: &CertifiedValue, beta: &CertifiedValue, j: u64, k: u64) -> CertifiedValue {
    let ja = alpha.scale(&rat_from_int(&BigInt::from(j)));
    let kb = beta.scale(&rat_from_int(&BigInt::from(k)));
    ja + kb
}

/// Signed variant of [`combine`] for differences of orbit points.
pub fn combine_signed(
    alpha: &CertifiedValue,
    beta: &CertifiedValue,
    dj: i64,
    dk: i64,
) -> CertifiedValue {
    let ja = alpha.scale(&rat_from_int(&BigInt::from(dj)));
    let kb = beta.scale(&rat_from_int(&BigInt::from(dk)));
    ja + kb
}

/// Certified orbit points `x_0, ..., x_N`, each of width at most `precision`.
/// α and β are enclosed once at width `precision / (2N)`, so `x_n`'s width is
/// at most `n · precision / (2N)`.
pub fn orbit_points(
    alpha: &CfNumber,
    beta: &CfNumber,
    omega: &OmegaWord,
    precision: &BigRational,
) -> Result<Vec<OrbitPoint>> {
    if precision <= &BigRational::zero() {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let n = omega.len();
    let w = precision / BigRational::from_integer(BigInt::from(2 * n.max(1)));
    let a = eval(alpha, &w)?;
    let b = eval(beta, &w)?;
    Ok((0..=n)
        .into_par_iter()
        .map(|m| {
            let j = omega.alpha_count(m) as u64;
            let k = omega.beta_count(m) as u64;
            OrbitPoint {
                n: m,
                j,
                k,
                value: combine(&a, &b, j, k).mod_one(),
            }
        })
        .collect())
}

/// CSV export `n,j,k,lo,hi` with exact rationals written as `num/den`. A
/// wrapped point has `hi >= 1`.
pub fn orbit_csv(points: &[OrbitPoint]) -> String {
    let mut out = String::from("n,j,k,lo,hi\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.n,
            p.j,
            p.k,
            p.value.lo(),
            p.value.hi()
        )
        .unwrap();
    }
    out
}
