//! Scalars over the Gaussian rationals ℚ(i), plus the formal scaled scalars
//! `c + d·s` with `s` transcendental.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

pub type Gq = GaussianRational;

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(Rational::from_int(n), Rational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(Rational::new(n, d), Rational::zero())
    }

    pub fn real(r: Rational) -> Self {
        Self::new(r, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True iff this is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero");
        Self::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }
}

impl<'a> Add<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn add(self, rhs: &'a Gq) -> Gq {
        Gq::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn sub(self, rhs: &'a Gq) -> Gq {
        Gq::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn mul(self, rhs: &'a Gq) -> Gq {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gq::real(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Gq::new(re, im)
    }
}

impl<'a> Div<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn div(self, rhs: &'a Gq) -> Gq {
        if rhs.im.is_zero() {
            return Gq::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        self * &rhs.inv()
    }
}

macro_rules! forward_owned_gq {
    ($tr:ident, $m:ident) => {
        impl $tr<Gq> for Gq {
            type Output = Gq;
            fn $m(self, rhs: Gq) -> Gq {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Gq> for Gq {
            type Output = Gq;
            fn $m(self, rhs: &'a Gq) -> Gq {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned_gq!(Add, add);
forward_owned_gq!(Sub, sub);
forward_owned_gq!(Mul, mul);
forward_owned_gq!(Div, div);

impl AddAssign<&Gq> for Gq {
    fn add_assign(&mut self, rhs: &Gq) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Gq> for Gq {
    fn sub_assign(&mut self, rhs: &Gq) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq::new(-self.re, -self.im)
    }
}

impl<'a> Neg for &'a Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq::new(-&self.re, -&self.im)
    }
}

impl From<i64> for Gq {
    fn from(n: i64) -> Self {
        Gq::from_int(n)
    }
}

impl From<Rational> for Gq {
    fn from(r: Rational) -> Self {
        Gq::real(r)
    }
}

impl fmt::Display for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                if self.im.signum() < 0 {
                    write!(f, "{}-{}*i", self.re, self.im.abs())
                } else {
                    write!(f, "{}+{}*i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed scalar literal {0:?}")]
pub struct ParseScalarError(pub String);

/// Parses the imaginary term of a literal: `i`, `-i`, `b*i`, `bi`.
fn parse_imag_term(t: &str) -> Option<Rational> {
    let body = t.strip_suffix('i')?;
    let body = body.strip_suffix('*').unwrap_or(body).trim();
    match body {
        "" | "+" => Some(Rational::one()),
        "-" => Some(-Rational::one()),
        _ => body.parse().ok(),
    }
}

impl FromStr for Gq {
    type Err = ParseScalarError;

    /// Literal grammar: `p`, `p/q`, `p/q*i`, `a+b*i`, `a-b*i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if !t.ends_with('i') {
            return t.parse::<Rational>().map(Gq::real).map_err(|_| err());
        }
        // Split at the last sign that is not the leading one.
        let split = t
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re: Rational = t[..k].parse().map_err(|_| err())?;
                let im = parse_imag_term(&t[k..]).ok_or_else(err)?;
                Ok(Gq::new(re, im))
            }
            None => {
                let im = parse_imag_term(&t).ok_or_else(err)?;
                Ok(Gq::new(Rational::zero(), im))
            }
        }
    }
}

impl Serialize for Gq {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Gq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `const_part + scale_part·s` where `s` is a formal transcendental.
///
/// Because `s` is transcendental over the algebraic closure of ℚ(i), such a
/// value vanishes exactly when both parts vanish.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ScaledScalar {
    pub const_part: Gq,
    pub scale_part: Gq,
}

impl ScaledScalar {
    pub fn new(const_part: Gq, scale_part: Gq) -> Self {
        Self {
            const_part,
            scale_part,
        }
    }

    pub fn constant(c: Gq) -> Self {
        Self::new(c, Gq::zero())
    }

    pub fn scaled(d: Gq) -> Self {
        Self::new(Gq::zero(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.const_part.is_zero() && self.scale_part.is_zero()
    }

    pub fn is_pure_scale(&self) -> bool {
        self.const_part.is_zero()
    }
}

impl<'a> Add<&'a ScaledScalar> for &'a ScaledScalar {
    type Output = ScaledScalar;
    fn add(self, rhs: &'a ScaledScalar) -> ScaledScalar {
        ScaledScalar::new(
            &self.const_part + &rhs.const_part,
            &self.scale_part + &rhs.scale_part,
        )
    }
}

impl<'a> Sub<&'a ScaledScalar> for &'a ScaledScalar {
    type Output = ScaledScalar;
    fn sub(self, rhs: &'a ScaledScalar) -> ScaledScalar {
        ScaledScalar::new(
            &self.const_part - &rhs.const_part,
            &self.scale_part - &rhs.scale_part,
        )
    }
}

impl ScaledScalar {
    /// Multiplication by a constant; products of two `s`-terms leave the
    /// linear span and are never needed.
    pub fn mul_const(&self, c: &Gq) -> ScaledScalar {
        ScaledScalar::new(&self.const_part * c, &self.scale_part * c)
    }
}

impl fmt::Display for ScaledScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.const_part.is_zero(), self.scale_part.is_zero()) {
            (_, true) => write!(f, "{}", self.const_part),
            (true, false) => write!(f, "({})*s", self.scale_part),
            (false, false) => write!(f, "{}+({})*s", self.const_part, self.scale_part),
        }
    }
}

impl fmt::Debug for ScaledScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ScaledScalar {
    type Err = ParseScalarError;

    /// Accepts a plain literal, `(d)*s`, or `c+(d)*s`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix(")*s") else {
            return t.parse().map(ScaledScalar::constant);
        };
        let open = body.rfind('(').ok_or_else(err)?;
        let scale: Gq = body[open + 1..].parse()?;
        let head = &body[..open];
        let constant = match head {
            "" => Gq::zero(),
            _ => head.strip_suffix('+').ok_or_else(err)?.parse()?,
        };
        Ok(ScaledScalar::new(constant, scale))
    }
}

impl Serialize for ScaledScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
