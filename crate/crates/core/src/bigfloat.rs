//! Fixed-point decimal arithmetic of arbitrary precision on top of
//! `num-bigint`: value = mantissa · 10^(−scale). Every operation rounds to
//! the wider of the two operand scales (round half away from zero), so a
//! computation carried at scale n keeps ~n correct decimal digits. Used by
//! the numeric integrator and the cube-root residuals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFixed {
    mantissa: BigInt,
    scale: u32,
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u8).pow(e)
}

/// Nearest integer to n/d, ties away from zero. d must be positive.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let (q, r) = n.div_rem(d);
    if (&r.abs() * 2u8) >= d.abs() {
        if n.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

impl BigFixed {
    pub fn from_int(n: i64) -> Self {
        Self { mantissa: BigInt::from(n), scale: 0 }
    }

    /// Exact rational rounded to `scale` decimal digits.
    pub fn from_rational(x: &BigRational, scale: u32) -> Self {
        let scaled = x.numer() * pow10(scale);
        Self { mantissa: div_round(&scaled, x.denom()), scale }
    }

    /// 10^(−digits), the usual tolerance literal.
    pub fn pow10_neg(digits: u32) -> Self {
        Self { mantissa: BigInt::one(), scale: digits }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Exact rescale when widening; rounded when narrowing.
    pub fn with_scale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Self {
                mantissa: &self.mantissa * pow10(scale - self.scale),
                scale,
            },
            Ordering::Less => Self {
                mantissa: div_round(&self.mantissa, &pow10(self.scale - scale)),
                scale,
            },
        }
    }

    fn common(a: &Self, b: &Self) -> (BigInt, BigInt, u32) {
        let scale = a.scale.max(b.scale);
        (a.with_scale(scale).mantissa, b.with_scale(scale).mantissa, scale)
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), scale: self.scale }
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Cube root at the operand's scale; requires a nonnegative value.
    pub fn cbrt(&self) -> Self {
        assert!(!self.mantissa.is_negative(), "cbrt of a negative value");
        if self.mantissa.is_zero() {
            return self.clone();
        }
        // (m·10^{2s})^{1/3} / 10^s = value^{1/3}
        let target = &self.mantissa * pow10(2 * self.scale);
        let root = icbrt_round(&target);
        Self { mantissa: root, scale: self.scale }
    }

    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return Self { mantissa: BigInt::one(), scale: 0 }.with_scale(self.scale);
        }
        let mut acc = self.clone();
        for _ in 1..e.unsigned_abs() {
            acc = acc * self.clone();
        }
        if e < 0 {
            let one = Self { mantissa: pow10(self.scale), scale: self.scale };
            one / acc
        } else {
            acc
        }
    }

    pub fn to_decimal_string(&self) -> String {
        let neg = self.mantissa.is_negative();
        let digits = self.mantissa.abs().to_string();
        let s = self.scale as usize;
        let padded = if digits.len() <= s {
            format!("{}{}", "0".repeat(s + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - s);
        let body = if s == 0 {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac_part}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Floor cube root by Newton iteration, then rounded to the nearest integer
/// cube. Input must be nonnegative.
fn icbrt_round(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let bits = n.bits();
    let mut x = BigInt::one() << (bits / 3 + 1);
    loop {
        // x' = (2x + n/x²)/3
        let x2 = &x * &x;
        let next: BigInt = (2u8 * &x + n / &x2) / 3u8;
        if next >= x {
            break;
        }
        x = next;
    }
    // x is now the floor root or one above; settle exactly, then round.
    while &x * &x * &x > *n {
        x -= 1;
    }
    while (&x + 1u8) * (&x + 1u8) * (&x + 1u8) <= *n {
        x += 1;
    }
    let low = &x * &x * &x;
    let high = (&x + 1u8) * (&x + 1u8) * (&x + 1u8);
    if n - low > high - n {
        x + 1u8
    } else {
        x
    }
}

impl Add for BigFixed {
    type Output = BigFixed;

    fn add(self, rhs: BigFixed) -> BigFixed {
        let (a, b, scale) = BigFixed::common(&self, &rhs);
        BigFixed { mantissa: a + b, scale }
    }
}

impl Sub for BigFixed {
    type Output = BigFixed;

    fn sub(self, rhs: BigFixed) -> BigFixed {
        let (a, b, scale) = BigFixed::common(&self, &rhs);
        BigFixed { mantissa: a - b, scale }
    }
}

impl Neg for BigFixed {
    type Output = BigFixed;

    fn neg(self) -> BigFixed {
        BigFixed { mantissa: -self.mantissa, scale: self.scale }
    }
}

impl Mul for BigFixed {
    type Output = BigFixed;

    fn mul(self, rhs: BigFixed) -> BigFixed {
        let scale = self.scale.max(rhs.scale);
        let drop = self.scale.min(rhs.scale);
        let product = &self.mantissa * &rhs.mantissa;
        let mantissa =
            if drop == 0 { product } else { div_round(&product, &pow10(drop)) };
        BigFixed { mantissa, scale }
    }
}

impl Div for BigFixed {
    type Output = BigFixed;

    fn div(self, rhs: BigFixed) -> BigFixed {
        assert!(!rhs.mantissa.is_zero(), "division by zero");
        let scale = self.scale.max(rhs.scale);
        // (m₁/10^{s₁}) / (m₂/10^{s₂}) = m₁·10^{s+s₂−s₁} / m₂ at scale s.
        let shifted = &self.mantissa * pow10(scale + rhs.scale - self.scale);
        let (num, den) = if rhs.mantissa.is_negative() {
            (-shifted, -rhs.mantissa.clone())
        } else {
            (shifted, rhs.mantissa.clone())
        };
        BigFixed { mantissa: div_round(&num, &den), scale }
    }
}

impl Zero for BigFixed {
    fn zero() -> Self {
        BigFixed { mantissa: BigInt::zero(), scale: 0 }
    }

    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for BigFixed {
    fn one() -> Self {
        BigFixed { mantissa: BigInt::one(), scale: 0 }
    }
}

impl PartialOrd for BigFixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b, _) = BigFixed::common(self, other);
        Some(a.cmp(&b))
    }
}

impl fmt::Display for BigFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn fx(n: i64, d: i64, scale: u32) -> BigFixed {
        BigFixed::from_rational(&rat(n, d), scale)
    }

    #[test]
    fn conversion_and_display() {
        let x = fx(1, 3, 10);
        assert_eq!(x.to_decimal_string(), "0.3333333333");
        let y = fx(-7, 2, 4);
        assert_eq!(y.to_decimal_string(), "-3.5000");
        assert_eq!(BigFixed::pow10_neg(3).to_decimal_string(), "0.001");
    }

    #[test]
    fn arithmetic_round_trips_at_scale() {
        let a = fx(2, 7, 40);
        let b = fx(5, 3, 40);
        let sum = a.clone() + b.clone();
        let expect = BigFixed::from_rational(&(rat(2, 7) + rat(5, 3)), 40);
        assert_eq!(sum, expect);

        let prod = a.clone() * b.clone();
        let expect = BigFixed::from_rational(&(rat(2, 7) * rat(5, 3)), 40);
        let err = (prod - expect).abs();
        assert!(err <= BigFixed::pow10_neg(40));

        let quot = a / b;
        let expect = BigFixed::from_rational(&(rat(2, 7) / rat(5, 3)), 40);
        let err = (quot - expect).abs();
        assert!(err <= BigFixed::pow10_neg(40));
    }

    #[test]
    fn cube_root_of_a_perfect_cube_is_exact() {
        let x = fx(27, 8, 50);
        let r = x.cbrt();
        let expect = fx(3, 2, 50);
        assert_eq!(r, expect);
    }

    #[test]
    fn cube_root_accuracy() {
        let x = fx(2, 1, 60);
        let r = x.cbrt();
        let cubed = r.clone() * r.clone() * r;
        let err = (cubed - fx(2, 1, 60)).abs();
        assert!(err <= BigFixed::pow10_neg(58), "err = {}", err.to_decimal_string());
    }

    #[test]
    fn powi_with_negative_exponent() {
        let x = fx(2, 1, 30);
        let inv2 = x.powi(-1);
        let err = (inv2 - fx(1, 2, 30)).abs();
        assert!(err <= BigFixed::pow10_neg(29));
    }

    #[test]
    fn ordering_across_scales() {
        let a = fx(1, 2, 10);
        let b = fx(1, 2, 30);
        assert_eq!(a.partial_cmp(&b), Some(Ordering::Equal));
        assert!(fx(1, 3, 20) < fx(1, 2, 10));
    }
}
