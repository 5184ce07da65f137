//! Closed intervals over an exact field, and arcs on the circle R/Z.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::ExactField;

/// A closed interval `[lo, hi]` with exact endpoints. All arithmetic is exact,
/// so every enclosure produced here is sound.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: ExactField> Interval<T> {
    /// # Panics
    /// If `lo > hi`.
    pub fn new(lo: T, hi: T) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval { lo, hi }
    }

    /// The hull of two values in either order.
    pub fn spanning(a: T, b: T) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: T) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) * T::half()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        (lo <= hi).then(|| Interval::new(lo.clone(), hi.clone()))
    }

    /// Multiplies by an exact scalar of either sign.
    pub fn scale(&self, k: &T) -> Self {
        Interval::spanning(self.lo.times(k), self.hi.times(k))
    }

    pub fn shift(&self, by: &T) -> Self {
        Interval::new(self.lo.clone() + by.clone(), self.hi.clone() + by.clone())
    }

    /// Certain ordering: every point of `self` is `>= t`.
    pub fn certainly_ge(&self, t: &T) -> bool {
        &self.lo >= t
    }

    /// Certain ordering: every point of `self` is `< t`.
    pub fn certainly_lt(&self, t: &T) -> bool {
        &self.hi < t
    }

    /// Image of the interval under `x ↦ ‖x‖`, the distance to the nearest
    /// integer. Fails with [`Error::AmbiguousFold`] if an integer or
    /// half-integer lies strictly inside; a degenerate interval never fails.
    pub fn fold_distance(&self) -> Result<Self> {
        if self.lo < self.hi {
            // the first fold point above lo is floor(2 lo + 1) / 2
            let two = T::one() + T::one();
            let next_fold_2 = self.lo.times(&two).floor_val() + T::one();
            if next_fold_2 < self.hi.times(&two) {
                return Err(Error::AmbiguousFold);
            }
        }
        Ok(Interval::spanning(
            self.lo.dist_to_int(),
            self.hi.dist_to_int(),
        ))
    }

    /// Reduction modulo one. The result keeps the interval's width and is
    /// represented as an arc starting in `[0, 1)`.
    pub fn mod_one(&self) -> CircleArc<T> {
        let k = self.lo.floor_val();
        CircleArc {
            lo: self.lo.clone() - k.clone(),
            hi: self.hi.clone() - k,
        }
    }
}

impl<T: ExactField> Add for Interval<T> {
    type Output = Interval<T>;
    fn add(self, rhs: Self) -> Self {
        Interval::new(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl<'a, T: ExactField> Add<&'a Interval<T>> for &'a Interval<T> {
    type Output = Interval<T>;
    fn add(self, rhs: &Interval<T>) -> Interval<T> {
        Interval::new(
            self.lo.clone() + rhs.lo.clone(),
            self.hi.clone() + rhs.hi.clone(),
        )
    }
}

impl<T: ExactField> Sub for Interval<T> {
    type Output = Interval<T>;
    fn sub(self, rhs: Self) -> Self {
        Interval::new(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl<'a, T: ExactField> Sub<&'a Interval<T>> for &'a Interval<T> {
    type Output = Interval<T>;
    fn sub(self, rhs: &Interval<T>) -> Interval<T> {
        Interval::new(
            self.lo.clone() - rhs.hi.clone(),
            self.hi.clone() - rhs.lo.clone(),
        )
    }
}

impl<T: ExactField> Neg for Interval<T> {
    type Output = Interval<T>;
    fn neg(self) -> Self {
        Interval::new(-self.hi, -self.lo)
    }
}

impl<T: fmt::Display> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<T: fmt::Debug> fmt::Debug for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// An arc of R/Z written as `[lo, hi]` with `0 <= lo < 1` and `hi - lo < 1`.
/// When `hi >= 1` the arc wraps through 0 and is the union of the two pieces
/// `[lo, 1)` and `[0, hi - 1]`; it is never widened to the whole circle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircleArc<T> {
    lo: T,
    hi: T,
}

impl<T: ExactField> CircleArc<T> {
    pub fn from_interval(iv: &Interval<T>) -> Self {
        iv.mod_one()
    }

    /// Builds an arc from explicit endpoints, reducing `lo` into `[0, 1)`.
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo > hi || hi.clone() - lo.clone() >= T::one() {
            return Err(Error::InvalidArgument(format!(
                "arc endpoints must satisfy lo <= hi < lo + 1, got [{lo:?}, {hi:?}]"
            )));
        }
        Ok(Interval::new(lo, hi).mod_one())
    }

    pub fn point(x: T) -> Self {
        Interval::point(x).mod_one()
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    /// Upper endpoint of the lifted arc; may be `>= 1` for a wrapped arc.
    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn is_wrapped(&self) -> bool {
        self.hi >= T::one()
    }

    /// The lifted interval `[lo, hi]`.
    pub fn lifted(&self) -> Interval<T> {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    /// The arc as one or two intervals inside `[0, 1]`.
    pub fn pieces(&self) -> (Interval<T>, Option<Interval<T>>) {
        if self.is_wrapped() {
            (
                Interval::new(self.lo.clone(), T::one()),
                Some(Interval::new(T::zero(), self.hi.clone() - T::one())),
            )
        } else {
            (self.lifted(), None)
        }
    }

    /// Certified circle distance `‖a - b‖` between the points of two arcs.
    pub fn distance(&self, other: &Self) -> Result<Interval<T>> {
        (&self.lifted() - &other.lifted()).fold_distance()
    }
}

impl<T: fmt::Display> fmt::Debug for CircleArc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arc[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::{BigRational, Ratio};

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval<BigRational> {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn arithmetic_is_outward() {
        let a = iv((1, 3), (1, 2));
        let b = iv((-1, 4), (1, 4));
        assert_eq!(&a + &b, iv((1, 12), (3, 4)));
        assert_eq!(&a - &b, iv((1, 12), (3, 4)));
        assert_eq!(a.scale(&rat(-3, 1)), iv((-3, 2), (-1, 1)));
        assert_eq!(-a.clone(), iv((-1, 2), (-1, 3)));
        assert_eq!(a.width(), rat(1, 6));
        assert_eq!(a.midpoint(), rat(5, 12));
    }

    #[test]
    fn intersections() {
        let a = iv((0, 1), (1, 2));
        let b = iv((1, 3), (1, 1));
        assert_eq!(a.intersect(&b), Some(iv((1, 3), (1, 2))));
        assert_eq!(a.intersect(&iv((2, 3), (1, 1))), None);
        assert!(iv((1, 3), (2, 5)).is_subset_of(&a));
    }

    #[test]
    fn fold_distance_cases() {
        // monotone piece
        assert_eq!(
            iv((21, 10), (22, 10)).fold_distance().unwrap(),
            iv((1, 10), (2, 10))
        );
        // decreasing piece
        assert_eq!(
            iv((37, 10), (38, 10)).fold_distance().unwrap(),
            iv((2, 10), (3, 10))
        );
        // integer strictly inside
        assert_eq!(
            iv((19, 10), (21, 10)).fold_distance(),
            Err(Error::AmbiguousFold)
        );
        // half-integer strictly inside
        assert_eq!(
            iv((4, 10), (6, 10)).fold_distance(),
            Err(Error::AmbiguousFold)
        );
        // fold at an endpoint is fine
        assert_eq!(
            iv((4, 10), (5, 10)).fold_distance().unwrap(),
            iv((4, 10), (1, 2))
        );
        assert_eq!(
            iv((1, 1), (11, 10)).fold_distance().unwrap(),
            iv((0, 1), (1, 10))
        );
        // points are always decidable
        assert_eq!(
            Interval::point(rat(1, 1)).fold_distance().unwrap(),
            Interval::point(rat(0, 1))
        );
        assert_eq!(
            Interval::point(rat(-5, 2)).fold_distance().unwrap(),
            Interval::point(rat(1, 2))
        );
        // negative arguments
        assert_eq!(
            iv((-22, 10), (-21, 10)).fold_distance().unwrap(),
            iv((1, 10), (2, 10))
        );
    }

    #[test]
    fn mod_one_and_wrapping() {
        let arc = iv((29, 10), (31, 10)).mod_one();
        assert!(arc.is_wrapped());
        assert_eq!(arc.lo(), &rat(9, 10));
        let (head, tail) = arc.pieces();
        assert_eq!(head, iv((9, 10), (1, 1)));
        assert_eq!(tail, Some(iv((0, 1), (1, 10))));

        let plain = iv((-3, 10), (-2, 10)).mod_one();
        assert!(!plain.is_wrapped());
        assert_eq!(plain.lifted(), iv((7, 10), (8, 10)));
    }

    #[test]
    fn circle_distance_across_zero() {
        let a = CircleArc::point(rat(1, 100));
        let b = CircleArc::point(rat(99, 100));
        assert_eq!(a.distance(&b).unwrap(), Interval::point(rat(2, 100)));
    }

    #[test]
    fn works_over_fixed_width_ratios() {
        let a: Interval<Ratio<i64>> = Interval::new(Ratio::new(7, 3), Ratio::new(5, 2));
        let d = a.fold_distance().unwrap();
        assert_eq!(d, Interval::new(Ratio::new(1, 3), Ratio::new(1, 2)));
        let c = a.mod_one();
        assert_eq!(c.lo(), &Ratio::new(1, 3));
    }
}
