//! Exact rationals, exact plane vectors and float helpers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Q = BigRational;
pub type C64 = Complex64;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    match x.to_f64() {
        Some(v) => v,
        None => {
            // Huge numerators/denominators: scale through the exponent.
            let n = x.numer().to_f64().unwrap_or(f64::NAN);
            let d = x.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Parses `p/q`, integers and plain decimals (with optional exponent) exactly.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", ip, fp);
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(n);
    if scale >= 0 {
        v *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -v } else { v })
}

/// Exact rational rendering: integer or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// The exact rational value of a finite float.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).unwrap_or_else(Q::zero)
}

/// Shortest decimal that round-trips to the same float.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{:?}", x)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVec {
    pub re: Q,
    pub im: Q,
}

impl QVec {
    pub fn new(re: Q, im: Q) -> Self {
        QVec { re, im }
    }
    pub fn zero() -> Self {
        QVec { re: Q::zero(), im: Q::zero() }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn add(&self, o: &QVec) -> QVec {
        QVec::new(&self.re + &o.re, &self.im + &o.im)
    }
    pub fn sub(&self, o: &QVec) -> QVec {
        QVec::new(&self.re - &o.re, &self.im - &o.im)
    }
    pub fn neg(&self) -> QVec {
        QVec::new(-&self.re, -&self.im)
    }
    pub fn scale(&self, k: &Q) -> QVec {
        QVec::new(&self.re * k, &self.im * k)
    }
    pub fn scale_i(&self, k: i64) -> QVec {
        self.scale(&q(k))
    }
    /// Complex product.
    pub fn mul(&self, o: &QVec) -> QVec {
        QVec::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    pub fn conj(&self) -> QVec {
        QVec::new(self.re.clone(), -&self.im)
    }
    /// Exact value of a float pair.
    pub fn from_c64(z: C64) -> QVec {
        QVec::new(q_from_f64(z.re), q_from_f64(z.im))
    }
    /// Multiplication by i.
    pub fn rot90(&self) -> QVec {
        QVec::new(-&self.im, self.re.clone())
    }
    pub fn cross(&self, o: &QVec) -> Q {
        &self.re * &o.im - &self.im * &o.re
    }
    pub fn dot(&self, o: &QVec) -> Q {
        &self.re * &o.re + &self.im * &o.im
    }
    pub fn norm2(&self) -> Q {
        self.dot(self)
    }
    pub fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
    pub fn sign_normalized(&self) -> QVec {
        if self.re.is_negative() || (self.re.is_zero() && self.im.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", fmt_q(&self.re), fmt_q(&self.im))
    }
}

pub fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

pub fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Counterclockwise angle from `a` to `b`, in [0, 2π).
pub fn ccw_angle(a: C64, b: C64) -> f64 {
    let t = cross(a, b).atan2(dot(a, b));
    if t < 0.0 {
        t + std::f64::consts::TAU
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_q("0.125").unwrap(), q_frac(1, 8));
        assert_eq!(parse_q("-3/6").unwrap(), q_frac(-1, 2));
        assert_eq!(parse_q("1e-2").unwrap(), q_frac(1, 100));
        assert_eq!(parse_q("-.5").unwrap(), q_frac(-1, 2));
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("abc").is_none());
    }

    #[test]
    fn float_rendering_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-17, 12345.678] {
            let s = fmt_f64(x);
            assert_eq!(q_to_f64(&parse_q(&s).unwrap()), x);
        }
    }

    #[test]
    fn ccw_angle_range() {
        let a = C64::new(1.0, 0.0);
        assert!((ccw_angle(a, C64::new(0.0, 1.0)) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((ccw_angle(a, C64::new(0.0, -1.0)) - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    }
}
