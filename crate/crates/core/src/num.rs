//! Exact arithmetic in real quadratic fields Q(sqrt(D)).
//!
//! Flat-surface coordinates are stored as `a + b*sqrt(D)` with rational
//! `a`, `b` and a fixed squarefree `D` per surface. Sign tests, and hence
//! saddle-connection detection, are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum NumError {
    #[error("cannot mix quadratic irrationals over sqrt({0}) and sqrt({1})")]
    MixedField(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

/// An element a + b*sqrt(d) of Q(sqrt(d)). `d == 1` (or `b == 0`) means the
/// element is rational; mixing two genuinely different radicands is an error
/// surfaced at surface-construction time, so the arithmetic ops panic on it.
#[derive(Clone, PartialEq, Eq)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        let mut q = Quad { a, b, d };
        q.normalize();
        q
    }

    pub fn from_rational(a: BigRational) -> Self {
        Quad { a, b: BigRational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// sqrt(d) itself.
    pub fn sqrt_d(d: u64) -> Self {
        Quad { a: BigRational::zero(), b: BigRational::one(), d }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.d = 1;
        } else if self.d == 0 {
            self.b = BigRational::zero();
            self.d = 1;
        }
    }

    fn join_field(&self, other: &Quad) -> u64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => 1,
            (true, false) => other.d,
            (false, true) => self.d,
            (false, false) => {
                if self.d != other.d {
                    panic!("mixed quadratic fields: sqrt({}) vs sqrt({})", self.d, other.d);
                }
                self.d
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign: -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // a and b have opposite signs; compare a^2 with b^2 d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Quad {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Quad {
        if self.is_zero() {
            panic!("division by zero in Q(sqrt(d))");
        }
        // 1/(a + b sqrt d) = (a - b sqrt d)/(a^2 - b^2 d)
        let d = BigRational::from_integer(BigInt::from(self.d));
        let denom = &self.a * &self.a - &self.b * &self.b * d;
        if denom.is_zero() {
            // can only happen if d were a perfect square slipped in as irrational
            panic!("degenerate quadratic element (radicand is a perfect square?)");
        }
        Quad::new(&self.a / &denom, -(&self.b / &denom), self.d)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Parse "p/q" or "p".
    pub fn parse_rational(s: &str) -> Result<BigRational, NumError> {
        let s = s.trim();
        let mk = |t: &str| BigInt::from_str(t).map_err(|_| NumError::BadRational(s.to_string()));
        if let Some((p, q)) = s.split_once('/') {
            let num = mk(p.trim())?;
            let den = mk(q.trim())?;
            if den.is_zero() {
                return Err(NumError::BadRational(s.to_string()));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(mk(s)?))
        }
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", rat_to_string(&self.a))
        } else {
            write!(f, "{}+{}*sqrt({})", rat_to_string(&self.a), rat_to_string(&self.b), self.d)
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &Quad {
    type Output = Quad;
    fn add(self, rhs: &Quad) -> Quad {
        let d = self.join_field(rhs);
        Quad::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub for &Quad {
    type Output = Quad;
    fn sub(self, rhs: &Quad) -> Quad {
        let d = self.join_field(rhs);
        Quad::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul for &Quad {
    type Output = Quad;
    fn mul(self, rhs: &Quad) -> Quad {
        let d = self.join_field(rhs);
        let dr = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Quad::new(a, b, d)
    }
}

impl Div for &Quad {
    type Output = Quad;
    fn div(self, rhs: &Quad) -> Quad {
        self * &rhs.recip()
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(-self.a, -self.b, self.d)
    }
}

impl Neg for &Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(-self.a.clone(), -self.b.clone(), self.d)
    }
}

macro_rules! owned_binops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Quad {
            type Output = Quad;
            fn $m(self, rhs: Quad) -> Quad { $tr::$m(&self, &rhs) }
        }
        impl $tr<&Quad> for Quad {
            type Output = Quad;
            fn $m(self, rhs: &Quad) -> Quad { $tr::$m(&self, rhs) }
        }
        impl $tr<Quad> for &Quad {
            type Output = Quad;
            fn $m(self, rhs: Quad) -> Quad { $tr::$m(self, &rhs) }
        }
    )*};
}
owned_binops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

/// Serde form: a plain rational is the string "p/q"; a quadratic irrational
/// is {"a": "p/q", "b": "p/q", "D": d}.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum QuadRepr {
    Rational(String),
    Irrational { a: String, b: String, #[serde(rename = "D")] d: u64 },
}

impl Serialize for Quad {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let repr = if self.b.is_zero() {
            QuadRepr::Rational(rat_to_string(&self.a))
        } else {
            QuadRepr::Irrational {
                a: rat_to_string(&self.a),
                b: rat_to_string(&self.b),
                d: self.d,
            }
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Quad {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = QuadRepr::deserialize(de)?;
        match repr {
            QuadRepr::Rational(s) => Quad::parse_rational(&s)
                .map(Quad::from_rational)
                .map_err(D::Error::custom),
            QuadRepr::Irrational { a, b, d } => {
                let a = Quad::parse_rational(&a).map_err(D::Error::custom)?;
                let b = Quad::parse_rational(&b).map_err(D::Error::custom)?;
                Ok(Quad::new(a, b, d))
            }
        }
    }
}

/// A point of the plane with Q(sqrt(d)) coordinates.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QPt {
    pub x: Quad,
    pub y: Quad,
}

impl QPt {
    pub fn new(x: Quad, y: Quad) -> Self {
        QPt { x, y }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// 2D cross product of exact vectors.
pub fn cross(ax: &Quad, ay: &Quad, bx: &Quad, by: &Quad) -> Quad {
    &(ax * by) - &(ay * bx)
}

/// 2D dot product of exact vectors.
pub fn dot(ax: &Quad, ay: &Quad, bx: &Quad, by: &Quad) -> Quad {
    &(ax * bx) + &(ay * by)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> Quad {
        // (1 + sqrt 5)/2
        Quad::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            5,
        )
    }

    #[test]
    fn golden_ratio_identity() {
        let p = phi();
        // phi^2 = phi + 1, exactly
        assert_eq!(&p * &p, &p + &Quad::one());
    }

    #[test]
    fn exact_sign_near_cancellation() {
        // 161/72 is a convergent of sqrt(5): 161/72 - sqrt(5) > 0 but tiny
        let near = Quad::new(
            BigRational::new(BigInt::from(161), BigInt::from(72)),
            BigRational::from_integer(BigInt::from(-1)),
            5,
        );
        assert_eq!(near.signum(), 1);
        let nearer = Quad::new(
            BigRational::new(BigInt::from(682), BigInt::from(305)),
            BigRational::from_integer(BigInt::from(-1)),
            5,
        );
        assert_eq!(nearer.signum(), -1);
    }

    #[test]
    fn reciprocal_round_trip() {
        let p = phi();
        assert_eq!(&p * &p.recip(), Quad::one());
        // 1/phi = phi - 1
        assert_eq!(p.recip(), &p - &Quad::one());
    }

    #[test]
    fn serde_round_trip() {
        let p = phi();
        let s = serde_json::to_string(&p).unwrap();
        let back: Quad = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
        let r: Quad = serde_json::from_str("\"-3/7\"").unwrap();
        assert_eq!(r, Quad::ratio(-3, 7));
    }
}
