//! Exact scalars: rationals and elements `a + b*sqrt(d)` of a real quadratic field.
//!
//! Every computation works inside one field. A `Scalar` whose surd part is zero
//! is an ordinary rational and combines freely with elements of any `Q(sqrt d)`;
//! combining two irrational elements with different radicands is a logic error
//! and panics (mixed radicands are rejected earlier, when files are parsed).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// The scalar field of one problem instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Domain {
    #[default]
    Rational,
    /// `Q(sqrt d)` for a square-free `d >= 2`.
    Quadratic(u32),
}

impl Domain {
    pub fn radicand(self) -> Option<u32> {
        match self {
            Domain::Rational => None,
            Domain::Quadratic(d) => Some(d),
        }
    }

    /// Smallest domain containing both.
    pub fn join(self, other: Domain) -> Result<Domain, Error> {
        match (self, other) {
            (Domain::Rational, o) | (o, Domain::Rational) => Ok(o),
            (Domain::Quadratic(a), Domain::Quadratic(b)) if a == b => Ok(self),
            (Domain::Quadratic(a), Domain::Quadratic(b)) => Err(Error::MixedRadicands(a, b)),
        }
    }

    pub fn contains(self, x: &Scalar) -> bool {
        x.surd.is_zero() || self.radicand() == Some(x.radicand)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => write!(f, "Q"),
            Domain::Quadratic(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" {
            return Ok(Domain::Rational);
        }
        let inner = t
            .strip_prefix("Q(sqrt")
            .and_then(|r| r.strip_suffix(')'))
            .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
            .ok_or_else(|| Error::parse(format!("bad domain `{s}`")))?;
        let d: u32 = inner
            .parse()
            .map_err(|_| Error::parse(format!("bad radicand in `{s}`")))?;
        if !is_square_free(d) || d < 2 {
            return Err(Error::parse(format!("radicand {d} is not a square-free integer >= 2")));
        }
        Ok(Domain::Quadratic(d))
    }
}

pub fn is_square_free(d: u32) -> bool {
    if d == 0 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= d as u64 {
        if (d as u64).is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// An exact element `rat + surd * sqrt(radicand)`. Serialized as its display string.
#[derive(Clone, Debug)]
pub struct Scalar {
    rat: BigRational,
    surd: BigRational,
    // 0 whenever `surd` is zero
    radicand: u32,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p / q`; panics on `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { rat: r, surd: BigRational::zero(), radicand: 0 }
    }

    /// `a + b*sqrt(d)`. Panics unless `d` is square-free and at least 2.
    pub fn quadratic(a: BigRational, b: BigRational, d: u32) -> Self {
        assert!(d >= 2 && is_square_free(d), "radicand {d} must be square-free and >= 2");
        let radicand = if b.is_zero() { 0 } else { d };
        Scalar { rat: a, surd: b, radicand }
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: u32) -> Self {
        Self::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    /// Radicand of an irrational element, `None` for rationals.
    pub fn radicand(&self) -> Option<u32> {
        (!self.surd.is_zero()).then_some(self.radicand)
    }

    pub fn domain(&self) -> Domain {
        match self.radicand() {
            None => Domain::Rational,
            Some(d) => Domain::Quadratic(d),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.surd.is_zero()
    }

    /// Exact sign.
    ///
    /// For `a + b*sqrt(d)` with `a` and `b` of opposite signs the larger of
    /// `a^2` and `b^2 d` wins; they are never equal because `sqrt(d)` is
    /// irrational.
    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.surd);
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            (x, y) => {
                let a2 = &self.rat * &self.rat;
                let b2d = &self.surd * &self.surd * BigRational::from_integer(BigInt::from(self.radicand));
                if a2 > b2d {
                    x
                } else {
                    y
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_nonneg(&self) -> bool {
        self.signum() != Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Scalar {
        Scalar { rat: self.rat.clone(), surd: -&self.surd, radicand: self.radicand }
    }

    /// Field norm `a^2 - b^2 d`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat
            - &self.surd * &self.surd * BigRational::from_integer(BigInt::from(self.radicand))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.surd.is_zero() {
            return Some(Self::from_rational(self.rat.recip()));
        }
        let n = self.norm();
        Some(Scalar {
            rat: &self.rat / &n,
            surd: -&self.surd / &n,
            radicand: self.radicand,
        })
    }

    pub fn to_f64(&self) -> f64 {
        let a = ratio_to_f64(&self.rat);
        if self.surd.is_zero() {
            return a;
        }
        a + ratio_to_f64(&self.surd) * (self.radicand as f64).sqrt()
    }

    /// Exact binary value of a finite float.
    pub fn from_f64_exact(x: f64) -> Option<Scalar> {
        BigRational::from_float(x).map(Scalar::from_rational)
    }

    /// Best rational approximation with denominator at most `max_den`,
    /// by continued fractions.
    pub fn approximate_f64(x: f64, max_den: u64) -> Option<Scalar> {
        rationalize(x, max_den).map(Scalar::from_rational)
    }

    fn with_parts(rat: BigRational, surd: BigRational, radicand: u32) -> Self {
        let radicand = if surd.is_zero() { 0 } else { radicand };
        Scalar { rat, surd, radicand }
    }
}

fn sign_of(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // huge numerator/denominator: shift both down
    let bits = r.numer().bits().max(r.denom().bits());
    let shift = bits.saturating_sub(900);
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

fn rationalize(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    // convergents h/k
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let cap = BigInt::from(max_den);
    for _ in 0..64 {
        let a = v.floor();
        let ai = BigInt::from(a as u64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > cap {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
        if !v.is_finite() || v > 1e18 {
            break;
        }
    }
    if k1.is_zero() {
        return Some(BigRational::zero());
    }
    let r = BigRational::new(h1, k1);
    Some(if neg { -r } else { r })
}

fn merge_radicand(x: &Scalar, y: &Scalar) -> u32 {
    match (x.surd.is_zero(), y.surd.is_zero()) {
        (true, _) => y.radicand,
        (_, true) => x.radicand,
        _ => {
            assert_eq!(x.radicand, y.radicand, "mixed radicands in one computation");
            x.radicand
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.rat == other.rat
            && self.surd == other.surd
            && (self.surd.is_zero() || self.radicand == other.radicand)
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rat.hash(state);
        self.surd.hash(state);
        self.radicand.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.surd.is_zero() && other.surd.is_zero() {
            return self.rat.cmp(&other.rat);
        }
        (self - other).signum()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -&self.rat, surd: -&self.surd, radicand: self.radicand }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'b> Add<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'b Scalar) -> Scalar {
        let d = merge_radicand(self, rhs);
        Scalar::with_parts(&self.rat + &rhs.rat, &self.surd + &rhs.surd, d)
    }
}

impl<'b> Sub<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'b Scalar) -> Scalar {
        let d = merge_radicand(self, rhs);
        Scalar::with_parts(&self.rat - &rhs.rat, &self.surd - &rhs.surd, d)
    }
}

impl<'b> Mul<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        if self.surd.is_zero() && rhs.surd.is_zero() {
            return Scalar::from_rational(&self.rat * &rhs.rat);
        }
        let d = merge_radicand(self, rhs);
        let dd = BigRational::from_integer(BigInt::from(d));
        let rat = &self.rat * &rhs.rat + &self.surd * &rhs.surd * dd;
        let surd = &self.rat * &rhs.surd + &self.surd * &rhs.rat;
        Scalar::with_parts(rat, surd, d)
    }
}

impl<'b> Div<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero scalar");
        self * &inv
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
        impl $atr<Scalar> for Scalar {
            fn $am(&mut self, rhs: Scalar) {
                *self = (&*self).$m(&rhs);
            }
        }
        impl<'b> $atr<&'b Scalar> for Scalar {
            fn $am(&mut self, rhs: &'b Scalar) {
                *self = (&*self).$m(rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical whitespace-free text: `p`, `p/q`, `a+b*sqrt(d)`, `sqrt(d)`, `-sqrt(d)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", fmt_rational(&self.rat));
        }
        let d = self.radicand;
        let surd = if self.surd.is_one() {
            format!("sqrt({d})")
        } else if (-&self.surd).is_one() {
            format!("-sqrt({d})")
        } else {
            format!("{}*sqrt({d})", fmt_rational(&self.surd))
        };
        if self.rat.is_zero() {
            write!(f, "{surd}")
        } else if self.surd.is_positive() {
            write!(f, "{}+{surd}", fmt_rational(&self.rat))
        } else {
            write!(f, "{}{surd}", fmt_rational(&self.rat))
        }
    }
}

fn parse_rational(t: &str) -> Result<BigRational, Error> {
    let bad = || Error::parse(format!("bad rational `{t}`"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Accepts any signed sum of terms `p`, `p/q`, `sqrt(d)`, `c*sqrt(d)`,
/// `sqrt(d)/q`, e.g. `2-sqrt(3)` or `-1/2+3/4*sqrt(3)`.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::parse("empty scalar"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = t.as_bytes();
        let mut depth = 0i32;
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if i > start && depth == 0 && bytes[i - 1] != b'*' && bytes[i - 1] != b'/' => {
                    terms.push(&t[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&t[start..]);

        let mut rat = BigRational::zero();
        let mut surd = BigRational::zero();
        let mut radicand: Option<u32> = None;
        for term in terms {
            let (neg, body) = match term.as_bytes()[0] {
                b'-' => (true, &term[1..]),
                b'+' => (false, &term[1..]),
                _ => (false, term),
            };
            if let Some(pos) = body.find("sqrt(") {
                let close = body[pos..]
                    .find(')')
                    .map(|c| c + pos)
                    .ok_or_else(|| Error::parse(format!("unclosed sqrt in `{s}`")))?;
                let d: u32 = body[pos + 5..close]
                    .parse()
                    .map_err(|_| Error::parse(format!("bad radicand in `{s}`")))?;
                if d < 2 || !is_square_free(d) {
                    return Err(Error::parse(format!("radicand {d} is not square-free >= 2")));
                }
                if let Some(prev) = radicand {
                    if prev != d {
                        return Err(Error::MixedRadicands(prev, d));
                    }
                }
                radicand = Some(d);
                let before = &body[..pos];
                let after = &body[close + 1..];
                let mut coeff = if before.is_empty() {
                    BigRational::one()
                } else {
                    let b = before
                        .strip_suffix('*')
                        .ok_or_else(|| Error::parse(format!("bad term `{term}`")))?;
                    parse_rational(b)?
                };
                if !after.is_empty() {
                    let q = after
                        .strip_prefix('/')
                        .ok_or_else(|| Error::parse(format!("bad term `{term}`")))?;
                    coeff /= parse_rational(q)?;
                }
                surd += if neg { -coeff } else { coeff };
            } else {
                let r = parse_rational(body)?;
                rat += if neg { -r } else { r };
            }
        }
        Ok(Scalar::with_parts(rat, surd, radicand.unwrap_or(0)))
    }
}

/// Reduced integer numerator/denominator of a rational scalar.
pub fn rational_parts(x: &Scalar) -> Option<(BigInt, BigInt)> {
    x.is_rational().then(|| {
        let r = x.rational_part();
        let g = r.numer().gcd(r.denom());
        (r.numer() / &g, r.denom() / &g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["0", "3", "-7/2", "sqrt(3)", "-sqrt(3)", "2-sqrt(3)", "1/2+3/4*sqrt(3)", "-2*sqrt(3)"] {
            let x = q(s);
            assert_eq!(x.to_string(), s, "canonical form of {s}");
            assert_eq!(q(&x.to_string()), x);
        }
        assert_eq!(q("sqrt(3)/2-1/2"), q("-1/2+1/2*sqrt(3)"));
        assert_eq!(q("4/6"), Scalar::ratio(2, 3));
        assert_eq!(q("-2*sqrt(3)+4").to_string(), "4-2*sqrt(3)");
    }

    #[test]
    fn rejects_bad_input() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("sqrt(4)".parse::<Scalar>().is_err());
        assert!(matches!("sqrt(2)+sqrt(3)".parse::<Scalar>(), Err(Error::MixedRadicands(2, 3))));
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn sign_rule() {
        assert!(q("2-sqrt(3)").is_positive());
        assert!(q("sqrt(3)-2").is_negative());
        assert!(q("-1+sqrt(2)").is_positive());
        assert!(q("3-2*sqrt(2)").is_positive());
        assert!(q("-3/2+sqrt(2)").is_negative());
        assert_eq!(q("0").signum(), Ordering::Equal);
    }

    #[test]
    fn inverse_and_domain() {
        let x = q("2-sqrt(3)");
        assert_eq!(x.inverse().unwrap(), q("2+sqrt(3)"));
        assert_eq!(&x * &x.inverse().unwrap(), Scalar::one());
        assert_eq!(x.domain(), Domain::Quadratic(3));
        assert_eq!("Q(sqrt 3)".parse::<Domain>().unwrap(), Domain::Quadratic(3));
        assert_eq!("Q".parse::<Domain>().unwrap(), Domain::Rational);
        assert!("Q(sqrt 8)".parse::<Domain>().is_err());
        assert!(Domain::Quadratic(2).join(Domain::Quadratic(3)).is_err());
    }

    #[test]
    fn rationalize_by_continued_fractions() {
        assert_eq!(Scalar::approximate_f64(0.5000000001, 1_000_000).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(Scalar::approximate_f64(-1.0 / 3.0, 1000).unwrap(), Scalar::ratio(-1, 3));
        assert_eq!(Scalar::approximate_f64(2.0, 10).unwrap(), Scalar::int(2));
        let pi = Scalar::approximate_f64(std::f64::consts::PI, 1000).unwrap();
        assert_eq!(pi, Scalar::ratio(355, 113));
    }
}

macro_rules! serde_via_str {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_str!(Scalar);
serde_via_str!(Domain);
