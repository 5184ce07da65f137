//! Scalar plumbing: the exact field trait behind the interval types, integer
//! powers with rational exponents, and display-grade logarithms of big integers.

use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exactly represented ordered field. Everything certified is computed in
/// one of these; rounding never happens.
pub trait ExactField: Clone + Ord + Debug + Signed {
    /// Largest integer `<= self`, as a field element.
    fn floor_val(&self) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// `self * k`.
    fn times(&self, k: &Self) -> Self {
        self.clone() * k.clone()
    }

    /// Distance to the nearest integer.
    fn dist_to_int(&self) -> Self {
        let frac = self.clone() - self.floor_val();
        let up = Self::one() - frac.clone();
        frac.min(up)
    }
}

impl<T> ExactField for Ratio<T>
where
    T: Clone + Integer + Signed + FromPrimitive + Debug,
{
    fn floor_val(&self) -> Self {
        self.floor()
    }

    fn times(&self, k: &Self) -> Self {
        // cancelling the cross gcds of two reduced fractions leaves the
        // product reduced, so skip the second reduction `Mul` performs
        let g1 = self.numer().gcd(k.denom());
        let g2 = k.numer().gcd(self.denom());
        let n = (self.numer().clone() / g1.clone()) * (k.numer().clone() / g2.clone());
        let d = (self.denom().clone() / g2) * (k.denom().clone() / g1);
        Ratio::new_raw(n, d)
    }

    fn dist_to_int(&self) -> Self {
        // for reduced n/d, r = n mod d stays coprime to d
        let d = self.denom();
        let r = self.numer().mod_floor(d);
        let s = d.clone() - r.clone();
        Ratio::new_raw(r.min(s), d.clone())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(
            T::from_i64(num).expect("numerator fits"),
            T::from_i64(den).expect("denominator fits"),
        )
    }
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Orders two rationals by cross-multiplying, which beats the division-based
/// `Ord` on large denominators.
pub fn cmp_cross(a: &BigRational, b: &BigRational) -> std::cmp::Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn rat_from_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Parses `"n"`, `"n/d"` or a plain decimal such as `"2.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{whole_digits}{frac}").parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = BigRational::new(digits, den);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// `ceil(base^(num/den))` for `base >= 1`, `num >= 0`, `den >= 1`.
pub fn ceil_pow(base: &BigInt, exp: &BigRational) -> BigInt {
    let (power, den) = raise(base, exp);
    let root = power.nth_root(den);
    if num_traits::pow(root.clone(), den as usize) < power {
        root + 1
    } else {
        root
    }
}

/// `floor(base^(num/den))` for `base >= 1`, `num >= 0`, `den >= 1`.
pub fn floor_pow(base: &BigInt, exp: &BigRational) -> BigInt {
    let (power, den) = raise(base, exp);
    power.nth_root(den)
}

fn raise(base: &BigInt, exp: &BigRational) -> (BigInt, u32) {
    assert!(base.is_positive(), "base must be positive");
    assert!(!exp.is_negative(), "exponent must be nonnegative");
    let num = exp
        .numer()
        .to_usize()
        .expect("exponent numerator too large");
    let den = exp
        .denom()
        .to_u32()
        .expect("exponent denominator too large");
    (num_traits::pow(base.clone(), num), den)
}

/// Exact test of `lhs >= base^exp` with a rational exponent, by raising both
/// sides to the exponent's denominator.
pub fn ge_pow(lhs: &BigInt, base: &BigInt, exp: &BigRational) -> bool {
    let (power, den) = raise(base, exp);
    num_traits::pow(lhs.clone(), den as usize) >= power
}

/// Natural log of a positive big integer, accurate to f64 precision even far
/// outside the f64 range.
pub fn ln_int<F: Float + FromPrimitive>(x: &BigInt) -> F {
    assert_eq!(x.sign(), Sign::Plus, "log of a nonpositive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return F::from_f64(x.to_f64().expect("finite")).unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    let ln2 = F::from_f64(std::f64::consts::LN_2).unwrap();
    F::from_f64(top.to_f64().unwrap()).unwrap().ln() + F::from_u64(shift).unwrap() * ln2
}

/// Natural log of a positive rational.
pub fn ln_rat<F: Float + FromPrimitive>(x: &BigRational) -> F {
    ln_int::<F>(x.numer()) - ln_int::<F>(x.denom())
}

/// Display rendering used in "approx" columns.
pub fn approx(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rat::<f64>(&x.abs()).exp()
}
