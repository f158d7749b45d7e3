//! Exact arithmetic in `Q(t)` with `t^2 = q`.
//!
//! A value is `rational + surd * t`. The radicand travels with the value so
//! that mixing two different `q` is caught instead of silently producing
//! garbage; pure rationals carry radicand 0 and combine with anything.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use crate::error::{HallError, Result};

/// Exact rational scalars usable as the components of a [`Surd`].
pub trait Rational: Clone + Num + Signed + FromPrimitive + Eq + Hash + fmt::Display + fmt::Debug {}

impl<T> Rational for T where T: Clone + Num + Signed + FromPrimitive + Eq + Hash + fmt::Display + fmt::Debug {}

#[derive(Clone, Debug)]
pub struct Surd<R> {
    rational: R,
    surd: R,
    radicand: u32,
}

fn int_sqrt(n: u32) -> Option<u32> {
    let r = (n as f64).sqrt().round() as u32;
    (r * r == n).then_some(r)
}

fn scalar<R: Rational>(n: i64) -> R {
    R::from_i64(n).expect("integer fits the scalar type")
}

impl<R: Rational> Surd<R> {
    /// `a + b*t` with `t^2 = q`, canonicalized when `q` is a perfect square.
    pub fn new(a: R, b: R, q: u32) -> Self {
        assert!(q > 0 || b.is_zero(), "a nonzero t-component needs a radicand");
        let mut s = Surd { rational: a, surd: b, radicand: q };
        s.canonicalize();
        s
    }

    pub fn from_rational(a: R) -> Self {
        Surd { rational: a, surd: R::zero(), radicand: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(scalar(n))
    }

    /// `n / d` as a pure rational.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(scalar::<R>(n) / scalar::<R>(d))
    }

    /// The generator `t`.
    pub fn t(q: u32) -> Self {
        Self::new(R::zero(), R::one(), q)
    }

    /// `t^k` for any integer `k`; `t^-1 = t / q`.
    pub fn tpow(q: u32, k: i64) -> Self {
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let qq: R = scalar(q as i64);
        let mut p = R::one();
        for _ in 0..half.unsigned_abs() {
            p = p * qq.clone();
        }
        if half < 0 {
            p = R::one() / p;
        }
        if odd {
            Self::new(R::zero(), p, q)
        } else {
            Self::from_rational(p)
        }
    }

    pub fn rational_part(&self) -> &R {
        &self.rational
    }

    pub fn surd_part(&self) -> &R {
        &self.surd
    }

    /// The bound `q`, or 0 for a pure rational.
    pub fn radicand(&self) -> u32 {
        if self.surd.is_zero() {
            0
        } else {
            self.radicand
        }
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.surd.is_zero() {
            self.radicand = 0;
            return;
        }
        if let Some(r) = int_sqrt(self.radicand) {
            let b = std::mem::replace(&mut self.surd, R::zero());
            self.rational = self.rational.clone() + b * scalar(r as i64);
            self.radicand = 0;
        }
    }

    fn joint_radicand(&self, other: &Self) -> u32 {
        match (self.radicand(), other.radicand()) {
            (0, r) | (r, 0) => r,
            (r, s) => {
                assert_eq!(r, s, "mixing t with t^2 = {r} and t^2 = {s}");
                r
            }
        }
    }

    /// `a^2 - q b^2`, nonzero for nonzero values since `q` is not a square here.
    fn norm(&self) -> R {
        let q: R = scalar(self.radicand() as i64);
        self.rational.clone() * self.rational.clone() - q * self.surd.clone() * self.surd.clone()
    }

    pub fn conjugate(&self) -> Self {
        Surd { rational: self.rational.clone(), surd: -self.surd.clone(), radicand: self.radicand }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(HallError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        let mut out = Surd { rational: c.rational / n.clone(), surd: c.surd / n, radicand: self.radicand };
        out.canonicalize();
        Ok(out)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.checked_inv()?)
    }

    /// Parse the `a + b*t` rendering back, with `t^2 = q`.
    pub fn parse(s: &str, q: u32) -> Result<Self>
    where
        R: std::str::FromStr,
    {
        let bad = || HallError::Parse(format!("coefficient '{s}'"));
        let (a, b) = s.split_once(" + ").ok_or_else(bad)?;
        let b = b.strip_suffix("*t").ok_or_else(bad)?;
        let a: R = a.trim().parse().map_err(|_| bad())?;
        let b: R = b.trim().parse().map_err(|_| bad())?;
        if !b.is_zero() && q == 0 {
            return Err(bad());
        }
        Ok(Self::new(a, b, q))
    }
}

impl<R: Rational> PartialEq for Surd<R> {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational && self.surd == other.surd && self.radicand() == other.radicand()
    }
}

impl<R: Rational> Eq for Surd<R> {}

impl<R: Rational> Hash for Surd<R> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rational.hash(state);
        self.surd.hash(state);
    }
}

impl<R: Rational> fmt::Display for Surd<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*t", self.rational, self.surd)
    }
}

impl<R: Rational> Zero for Surd<R> {
    fn zero() -> Self {
        Self::from_rational(R::zero())
    }

    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }
}

impl<R: Rational> One for Surd<R> {
    fn one() -> Self {
        Self::from_rational(R::one())
    }
}

impl<R: Rational> Add for Surd<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let q = self.joint_radicand(&rhs);
        let mut s = Surd { rational: self.rational + rhs.rational, surd: self.surd + rhs.surd, radicand: q };
        s.canonicalize();
        s
    }
}

impl<'a, R: Rational> Add<&'a Surd<R>> for &'a Surd<R> {
    type Output = Surd<R>;
    fn add(self, rhs: Self) -> Surd<R> {
        self.clone() + rhs.clone()
    }
}

impl<R: Rational> Sub for Surd<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'a, R: Rational> Sub<&'a Surd<R>> for &'a Surd<R> {
    type Output = Surd<R>;
    fn sub(self, rhs: Self) -> Surd<R> {
        self.clone() - rhs.clone()
    }
}

impl<R: Rational> Neg for Surd<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Surd { rational: -self.rational, surd: -self.surd, radicand: self.radicand }
    }
}

impl<R: Rational> Mul for Surd<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let q = self.joint_radicand(&rhs);
        let qq: R = scalar(q as i64);
        let rational = self.rational.clone() * rhs.rational.clone() + qq * self.surd.clone() * rhs.surd.clone();
        let surd = self.rational * rhs.surd + self.surd * rhs.rational;
        let mut s = Surd { rational, surd, radicand: q };
        s.canonicalize();
        s
    }
}

impl<'a, R: Rational> Mul<&'a Surd<R>> for &'a Surd<R> {
    type Output = Surd<R>;
    fn mul(self, rhs: Self) -> Surd<R> {
        self.clone() * rhs.clone()
    }
}

/// Panics on division by zero; see [`Surd::checked_div`].
impl<R: Rational> Div for Surd<R> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by zero")
    }
}

impl<R: Rational> AddAssign for Surd<R> {
    fn add_assign(&mut self, rhs: Self) {
        *self = std::mem::replace(self, Self::zero()) + rhs;
    }
}

impl<R: Rational> SubAssign for Surd<R> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = std::mem::replace(self, Self::zero()) - rhs;
    }
}

impl<R: Rational> MulAssign for Surd<R> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = std::mem::replace(self, Self::zero()) * rhs;
    }
}

impl<R: Rational> Sum for Surd<R> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<R: Rational> Product for Surd<R> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}
