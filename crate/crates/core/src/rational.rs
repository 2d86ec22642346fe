//! Helpers for exact rational scalars: canonical string form and seeded
//! random sampling with bounded numerators/denominators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Canonical `"num/den"` form, always reduced with a positive denominator.
pub fn rat_to_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rat_from_string(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Config(format!("cannot parse rational `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Config(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Uniform rational with numerator in `[-magnitude, magnitude]` and
/// denominator in `[1, magnitude]`; `magnitude = 0` yields zero.
pub fn random_rational<R: Rng>(rng: &mut R, magnitude: u32) -> BigRational {
    if magnitude == 0 {
        return BigRational::zero();
    }
    let m = i64::from(magnitude);
    let n = rng.gen_range(-m..=m);
    let d = rng.gen_range(1..=m);
    rat(n, d)
}

/// As [`random_rational`] but never zero; used for torus parameters.
pub fn random_nonzero_rational<R: Rng>(rng: &mut R, magnitude: u32) -> BigRational {
    if magnitude == 0 {
        return BigRational::one();
    }
    loop {
        let x = random_rational(rng, magnitude);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Integer power with negative exponents allowed (exact).
pub fn rat_powi(x: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let mut acc = BigRational::one();
    let base = if e > 0 { x.clone() } else { x.recip() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

pub fn rat_abs(x: &BigRational) -> BigRational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn string_round_trip_is_canonical() {
        let x = rat(-6, 4);
        let s = rat_to_string(&x);
        assert_eq!(s, "-3/2");
        assert_eq!(rat_from_string(&s).unwrap(), x);
        assert_eq!(rat_to_string(&rat(0, 5)), "0/1");
        assert_eq!(rat_from_string("7").unwrap(), rat_int(7));
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let x = random_rational(&mut a, 4);
            assert_eq!(x, random_rational(&mut b, 4));
            assert!(x.numer().abs() <= BigInt::from(4));
            assert!(x.denom() <= &BigInt::from(4));
        }
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let x = rat(2, 3);
        assert_eq!(rat_powi(&x, -2), rat(9, 4));
        assert_eq!(rat_powi(&x, 0), rat_int(1));
        assert_eq!(rat_powi(&x, 3), rat(8, 27));
    }
}
