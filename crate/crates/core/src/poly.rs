//! Dense univariate and bivariate polynomials with exact rational
//! coefficients. Degrees stay small (bounded by nilpotency indices), so no
//! sparse machinery is needed.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::rational::{rat_from_string, rat_to_string};

/// Polynomial in one variable, coefficient of degree k at index k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly1 {
    coeffs: Vec<BigRational>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        Self { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.coeffs[0]
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn from_strings(strings: &[String]) -> Result<Self> {
        let coeffs = strings.iter().map(|s| rat_from_string(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_to_string).collect()
    }
}

/// Polynomial in (x, y): `coeffs[i][j]` multiplies xⁱyʲ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    coeffs: Vec<Vec<BigRational>>,
}

impl Poly2 {
    fn normalized(mut coeffs: Vec<Vec<BigRational>>) -> Self {
        let width = coeffs.iter().map(Vec::len).max().unwrap_or(0).max(1);
        for row in &mut coeffs {
            row.resize(width, BigRational::zero());
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|r| r.iter().all(Zero::is_zero)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(vec![BigRational::zero()]);
        }
        let mut width = coeffs.iter().map(Vec::len).max().unwrap_or(1);
        while width > 1 && coeffs.iter().all(|r| r[width - 1].is_zero()) {
            width -= 1;
        }
        for row in &mut coeffs {
            row.truncate(width);
        }
        Self { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    /// The monomial c·xⁱyʲ.
    pub fn monomial(i: usize, j: usize, c: BigRational) -> Self {
        let mut coeffs = vec![vec![BigRational::zero(); j + 1]; i + 1];
        coeffs[i][j] = c;
        Self::normalized(coeffs)
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn deg_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_y(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for row in self.coeffs.iter().rev() {
            let mut row_acc = BigRational::zero();
            for c in row.iter().rev() {
                row_acc = row_acc * y + c;
            }
            acc = acc * x + row_acc;
        }
        acc
    }

    pub fn diff_x(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(BigRational::zero());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, row)| {
                let k = BigRational::from_integer(i.into());
                row.iter().map(|c| c * &k).collect()
            })
            .collect();
        Self::normalized(coeffs)
    }

    pub fn diff_y(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                if row.len() == 1 {
                    vec![BigRational::zero()]
                } else {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, c)| c * BigRational::from_integer(j.into()))
                        .collect()
                }
            })
            .collect();
        Self::normalized(coeffs)
    }

    pub fn to_coeff_table(&self) -> Vec<Vec<String>> {
        self.coeffs.iter().map(|row| row.iter().map(rat_to_string).collect()).collect()
    }
}

impl Zero for Poly2 {
    fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

impl One for Poly2 {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for Poly2 {
    type Output = Poly2;

    fn add(self, rhs: Poly2) -> Poly2 {
        let rows = self.coeffs.len().max(rhs.coeffs.len());
        let cols = self.coeffs[0].len().max(rhs.coeffs[0].len());
        let mut out = vec![vec![BigRational::zero(); cols]; rows];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i][j] += c;
            }
        }
        for (i, row) in rhs.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i][j] += c;
            }
        }
        Poly2::normalized(out)
    }
}

impl Sub for Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: Poly2) -> Poly2 {
        self + (-rhs)
    }
}

impl Neg for Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        Poly2 {
            coeffs: self
                .coeffs
                .into_iter()
                .map(|row| row.into_iter().map(|c| -c).collect())
                .collect(),
        }
    }
}

impl Mul for Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: Poly2) -> Poly2 {
        if self.is_zero() || rhs.is_zero() {
            return Poly2::zero();
        }
        let rows = self.coeffs.len() + rhs.coeffs.len() - 1;
        let cols = self.coeffs[0].len() + rhs.coeffs[0].len() - 1;
        let mut out = vec![vec![BigRational::zero(); cols]; rows];
        for (i1, r1) in self.coeffs.iter().enumerate() {
            for (j1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (i2, r2) in rhs.coeffs.iter().enumerate() {
                    for (j2, c2) in r2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        out[i1 + i2][j1 + j2] += c1 * c2;
                    }
                }
            }
        }
        Poly2::normalized(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn poly1_eval_and_trim() {
        let p = Poly1::new(vec![rat_int(1), rat_int(2), rat_int(0)]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.eval(&rat(1, 2)), rat_int(2));
        assert!(Poly1::constant(rat_int(3)).is_constant());
    }

    #[test]
    fn poly2_arithmetic_and_derivatives() {
        // f = 1 + x·y
        let f = Poly2::constant(rat_int(1)) + Poly2::monomial(1, 1, rat_int(1));
        assert_eq!(f.eval(&rat_int(2), &rat_int(3)), rat_int(7));
        assert_eq!(f.diff_x(), Poly2::monomial(0, 1, rat_int(1)));
        assert_eq!(f.diff_y(), Poly2::monomial(1, 0, rat_int(1)));

        let g = f.clone() * f.clone();
        // (1+xy)² = 1 + 2xy + x²y²
        assert_eq!(g.coeff(1, 1), rat_int(2));
        assert_eq!(g.coeff(2, 2), rat_int(1));
        assert_eq!(g.eval(&rat(1, 2), &rat(2, 3)), rat(16, 9));
    }

    #[test]
    fn product_rule_holds() {
        let f = Poly2::monomial(2, 1, rat(1, 3)) + Poly2::constant(rat_int(5));
        let g = Poly2::monomial(1, 2, rat_int(2)) + Poly2::monomial(0, 1, rat(-1, 2));
        let lhs = (f.clone() * g.clone()).diff_x();
        let rhs = f.clone().diff_x() * g.clone() + f * g.diff_x();
        assert_eq!(lhs, rhs);
    }
}
