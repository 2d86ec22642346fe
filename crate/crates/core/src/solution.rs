//! General solutions through the composite element K = M⁺(y)·M⁻(x).
//!
//! Exact mode: constant coefficients make M± terminating nilpotent
//! exponentials, so K is a matrix of bivariate polynomials and every
//! derivative is computed by insertion (K_x = K·L⁻, K_y = L⁺·K) — PDE
//! verification becomes polynomial identity testing. Numeric mode
//! integrates the two linear one-variable systems with a classical
//! fourth-order one-step method in fixed-point arithmetic of the requested
//! decimal precision.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::bigfloat::BigFixed;
use crate::error::{Error, Result};
use crate::lax::{grade_zero_matrix, CoefficientSet, LaxRealization, SystemId};
use crate::matrix::{Mat, Scalar};
use crate::poly::Poly2;
use crate::rational::rat_to_string;
use crate::rep::{FundPair, Representation};

/// K, its insertion derivatives, and the L± values at one sample point,
/// realized in both raw fundamentals over a scalar type.
#[derive(Debug, Clone)]
pub struct PointData<T> {
    pub k: [Mat<T>; 2],
    pub kx: [Mat<T>; 2],
    pub ky: [Mat<T>; 2],
    pub kxy: [Mat<T>; 2],
}

impl<T: Scalar> PointData<T> {
    fn fund(&self, j: u8) -> usize {
        usize::from(j) - 1
    }

    pub fn k_of(&self, j: u8) -> &Mat<T> {
        &self.k[self.fund(j)]
    }

    /// ⟨j| bra · M · ket |j⟩ with M one of the four point matrices,
    /// selected by (dx, dy) ∈ {0,1}².
    pub fn me(
        &self,
        rep: &Representation,
        j: u8,
        dx: bool,
        dy: bool,
        bra: &[u8],
        ket: &[u8],
        lift: &impl Fn(&BigRational) -> T,
    ) -> T {
        let m = match (dx, dy) {
            (false, false) => &self.k[self.fund(j)],
            (true, false) => &self.kx[self.fund(j)],
            (false, true) => &self.ky[self.fund(j)],
            (true, true) => &self.kxy[self.fund(j)],
        };
        let row = rep.bra_row(bra);
        let col = rep.ket_col(ket);
        let mut acc = T::zero();
        for (r, rv) in row.iter().enumerate() {
            if rv.is_zero() {
                continue;
            }
            for (c, cv) in col.iter().enumerate() {
                if cv.is_zero() {
                    continue;
                }
                let w = rv * cv;
                acc = acc + lift(&w) * m[(r, c)].clone();
            }
        }
        acc
    }
}

struct ExactFund {
    lplus: Mat<BigRational>,
    lminus: Mat<BigRational>,
    k: Mat<Poly2>,
}

/// Exact solution: K as bivariate polynomial matrices in both fundamentals.
pub struct ExactSolution {
    pub system: SystemId,
    pub coeffs: CoefficientSet,
    pub pair: FundPair,
    funds: [ExactFund; 2],
}

fn exp_poly(l: &Mat<BigRational>, var_is_y: bool) -> Result<Mat<Poly2>> {
    let n = l.rows();
    let mono = |k: usize, c: BigRational| {
        if var_is_y {
            Poly2::monomial(0, k, c)
        } else {
            Poly2::monomial(k, 0, c)
        }
    };
    let mut sum = Mat::<Poly2>::identity(n);
    let mut power = Mat::<BigRational>::identity(n);
    let mut factorial = BigRational::one();
    for k in 1..=n + 1 {
        power = power.mul(l);
        if power.is_zero() {
            return Ok(sum);
        }
        if k > n {
            return Err(Error::NotNilpotent);
        }
        factorial *= BigRational::from_integer(k.into());
        let coeff = factorial.recip();
        let term = power.map(|e| mono(k, e * &coeff));
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// Builds K = exp(yL⁺)·exp(xL⁻) per fundamental and asserts the defining
/// derivative identities as polynomial identities.
pub fn solve_exact(system: SystemId, coeffs: &CoefficientSet) -> Result<ExactSolution> {
    if !coeffs.azero.is_empty() || !coeffs.bzero.is_empty() {
        return Err(Error::NonzeroGradeZero);
    }
    if !coeffs.is_exact_mode() {
        return Err(Error::NonConstantCoefficients);
    }
    let pair = FundPair::build(system.algebra())?;
    let build = |j: u8| -> Result<ExactFund> {
        let rep = pair.raw(j);
        let real = LaxRealization::new(system, rep)?;
        let lplus = real.lplus(coeffs, None)?;
        let lminus = real.lminus(coeffs, None)?;
        let mplus = exp_poly(&lplus, true)?;
        let mminus = exp_poly(&lminus, false)?;
        let k = mplus.mul(&mminus);

        // K_x = K·L⁻ and K_y = L⁺·K, exactly as polynomials.
        let kx = k.map(Poly2::diff_x);
        let klm = k.mul(&lminus.map(|e| Poly2::constant(e.clone())));
        if kx != klm {
            return Err(Error::InternalInconsistency("K_x != K L- as polynomials".into()));
        }
        let ky = k.map(Poly2::diff_y);
        let lpk = lplus.map(|e| Poly2::constant(e.clone())).mul(&k);
        if ky != lpk {
            return Err(Error::InternalInconsistency("K_y != L+ K as polynomials".into()));
        }
        Ok(ExactFund { lplus, lminus, k })
    };
    let funds = [build(1)?, build(2)?];
    drop(build);
    Ok(ExactSolution { system, coeffs: coeffs.clone(), pair, funds })
}

impl ExactSolution {
    pub fn rep(&self, j: u8) -> &Representation {
        self.pair.raw(j)
    }

    pub fn k_poly(&self, j: u8) -> &Mat<Poly2> {
        &self.funds[usize::from(j) - 1].k
    }

    pub fn lplus(&self, j: u8) -> &Mat<BigRational> {
        &self.funds[usize::from(j) - 1].lplus
    }

    pub fn lminus(&self, j: u8) -> &Mat<BigRational> {
        &self.funds[usize::from(j) - 1].lminus
    }

    /// Evaluates K and its insertion derivatives at a rational point.
    pub fn point_data(&self, x: &BigRational, y: &BigRational) -> PointData<BigRational> {
        let eval = |j: usize| {
            let f = &self.funds[j];
            let k = f.k.map(|p| p.eval(x, y));
            let kx = k.mul(&f.lminus);
            let ky = f.lplus.mul(&k);
            let kxy = f.lplus.mul(&k).mul(&f.lminus);
            (k, kx, ky, kxy)
        };
        let (k1, kx1, ky1, kxy1) = eval(0);
        let (k2, kx2, ky2, kxy2) = eval(1);
        PointData {
            k: [k1, k2],
            kx: [kx1, kx2],
            ky: [ky1, ky2],
            kxy: [kxy1, kxy2],
        }
    }

    /// The same point data lifted into fixed-point arithmetic.
    pub fn point_data_fixed(
        &self,
        x: &BigRational,
        y: &BigRational,
        scale: u32,
    ) -> PointData<BigFixed> {
        let pd = self.point_data(x, y);
        let conv = |m: &Mat<BigRational>| m.map(|e| BigFixed::from_rational(e, scale));
        PointData {
            k: [conv(&pd.k[0]), conv(&pd.k[1])],
            kx: [conv(&pd.kx[0]), conv(&pd.kx[1])],
            ky: [conv(&pd.ky[0]), conv(&pd.ky[1])],
            kxy: [conv(&pd.kxy[0]), conv(&pd.kxy[1])],
        }
    }

    /// u as a 2×2 field of bivariate polynomials.
    pub fn u_poly(&self) -> Mat<Poly2> {
        let j = self.system.u_fundamental();
        let rep = self.rep(j);
        let k = self.k_poly(j);
        let r = self.system.red_root();
        let kets: [Vec<u8>; 2] = [vec![], vec![r]];
        let mut u = Mat::<Poly2>::zeros(2, 2);
        for (a, ket_a) in kets.iter().enumerate() {
            let bra: Vec<u8> = ket_a.iter().rev().copied().collect();
            let row = rep.bra_row(&bra);
            for (b, ket_b) in kets.iter().enumerate() {
                let col = rep.ket_col(ket_b);
                let mut acc = Poly2::zero();
                for (rr, rv) in row.iter().enumerate() {
                    if rv.is_zero() {
                        continue;
                    }
                    for (cc, cv) in col.iter().enumerate() {
                        if cv.is_zero() {
                            continue;
                        }
                        acc = acc + k[(rr, cc)].clone() * Poly2::constant(rv * cv);
                    }
                }
                u[(a, b)] = acc;
            }
        }
        u
    }

    /// ⟨j|K|j⟩ as a polynomial.
    pub fn highest_poly(&self, j: u8) -> Poly2 {
        self.k_poly(j)[(0, 0)].clone()
    }

    pub fn dump_json(&self) -> serde_json::Value {
        let u = self.u_poly();
        json!({
            "mode": "exact",
            "system": self.system.label(),
            "coefficients": self.coeffs.to_json(),
            "u_polynomials": [
                [u[(0,0)].to_coeff_table(), u[(0,1)].to_coeff_table()],
                [u[(1,0)].to_coeff_table(), u[(1,1)].to_coeff_table()],
            ],
            "highest": {
                "fund1": self.highest_poly(1).to_coeff_table(),
                "fund2": self.highest_poly(2).to_coeff_table(),
            },
        })
    }
}

/// Residual of the mixed-derivative identity for a black index i:
/// (ln⟨i|K|i⟩)_xy·⟨i|K|i⟩² − det₂[[⟨i|K|i⟩, ⟨i|KL⁻|i⟩], [⟨i|L⁺K|i⟩, ⟨i|L⁺KL⁻|i⟩]]
/// as a bivariate polynomial; identically zero when the identity holds.
pub fn mixed_derivative_check(sol: &ExactSolution, i: u8) -> Result<Poly2> {
    let grading = sol.system.grading();
    if !grading.is_black(i) {
        return Err(Error::Config(format!("index {i} is not a black root of {}", sol.system)));
    }
    let f = sol.highest_poly(i);
    let fx = f.diff_x();
    let fy = f.diff_y();
    let fxy = fx.diff_y();

    let fund = usize::from(i) - 1;
    let lp = &sol.funds[fund].lplus;
    let lm = &sol.funds[fund].lminus;
    let k = &sol.funds[fund].k;
    let as_poly = |m: &Mat<BigRational>| m.map(|e| Poly2::constant(e.clone()));
    let g1 = k.mul(&as_poly(lm))[(0, 0)].clone();
    let g2 = as_poly(lp).mul(k)[(0, 0)].clone();
    let g3 = as_poly(lp).mul(k).mul(&as_poly(lm))[(0, 0)].clone();

    if fx != g1 || fy != g2 {
        return Err(Error::InternalInconsistency(
            "first derivatives disagree with insertions".into(),
        ));
    }
    Ok(fxy.clone() * f.clone() - fx * fy - (g3 * f - g2 * g1))
}

// ---------------------------------------------------------------------------
// Numeric mode.

/// M± on axis grids in fixed-point arithmetic, both fundamentals.
pub struct NumericSolution {
    pub system: SystemId,
    pub coeffs: CoefficientSet,
    pub pair: FundPair,
    pub steps: usize,
    pub step: BigRational,
    pub precision: u32,
    scale: u32,
    reals: [LaxRealization; 2],
    mplus: [Vec<Mat<BigFixed>>; 2],
    mminus: [Vec<Mat<BigFixed>>; 2],
}

fn lift_mat(m: &Mat<BigRational>, scale: u32) -> Mat<BigFixed> {
    m.map(|e| BigFixed::from_rational(e, scale))
}

/// Integrates M⁺_y = (B⁰+L⁺)M⁺ and M⁻_x = M⁻(A⁰+L⁻) from the identity over
/// [0, steps·step] with the classical fourth-order scheme.
pub fn solve_numeric(
    system: SystemId,
    coeffs: &CoefficientSet,
    steps: usize,
    step: &BigRational,
    precision: u32,
) -> Result<NumericSolution> {
    if precision < 30 {
        return Err(Error::Config("precision must be at least 30 digits".into()));
    }
    if step <= &BigRational::zero() {
        return Err(Error::Config("step must be positive".into()));
    }
    let scale = precision + 15;
    let pair = FundPair::build(system.algebra())?;
    let reals =
        [LaxRealization::new(system, pair.raw(1))?, LaxRealization::new(system, pair.raw(2))?];

    let h = BigFixed::from_rational(step, scale);
    let half = BigFixed::from_rational(&BigRational::new(1.into(), 2.into()), scale);
    let sixth = BigFixed::from_rational(&BigRational::new(1.into(), 6.into()), scale);
    let two = BigFixed::from_int(2);

    let mut mplus: [Vec<Mat<BigFixed>>; 2] = [Vec::new(), Vec::new()];
    let mut mminus: [Vec<Mat<BigFixed>>; 2] = [Vec::new(), Vec::new()];

    for jdx in 0..2 {
        let j = (jdx + 1) as u8;
        let rep = pair.raw(j);
        let real = &reals[jdx];

        // Right-hand operator at a parameter value, in fixed point.
        let minus_op = |x: &BigRational| -> Result<Mat<BigFixed>> {
            let l = real.lminus(coeffs, Some(x))?;
            let a0 = grade_zero_matrix(rep, system, &coeffs.azero, x)?;
            Ok(lift_mat(&l.add(&a0), scale))
        };
        let plus_op = |y: &BigRational| -> Result<Mat<BigFixed>> {
            let l = real.lplus(coeffs, Some(y))?;
            let b0 = grade_zero_matrix(rep, system, &coeffs.bzero, y)?;
            Ok(lift_mat(&l.add(&b0), scale))
        };

        // M⁻: right multiplication by the operator.
        let mut m = Mat::<BigFixed>::identity(rep.dim);
        mminus[jdx].push(m.clone());
        for k in 0..steps {
            let x0 = step * BigRational::from_integer(k.into());
            let xm = &x0 + step / BigRational::from_integer(2.into());
            let x1 = &x0 + step;
            let a0 = minus_op(&x0)?;
            let am = minus_op(&xm)?;
            let a1 = minus_op(&x1)?;
            let k1 = m.mul(&a0);
            let k2 = m.add(&k1.scale(&(h.clone() * half.clone()))).mul(&am);
            let k3 = m.add(&k2.scale(&(h.clone() * half.clone()))).mul(&am);
            let k4 = m.add(&k3.scale(&h)).mul(&a1);
            let incr = k1
                .add(&k2.scale(&two))
                .add(&k3.scale(&two))
                .add(&k4)
                .scale(&(h.clone() * sixth.clone()));
            m = m.add(&incr);
            mminus[jdx].push(m.clone());
        }

        // M⁺: left multiplication.
        let mut m = Mat::<BigFixed>::identity(rep.dim);
        mplus[jdx].push(m.clone());
        for k in 0..steps {
            let y0 = step * BigRational::from_integer(k.into());
            let ym = &y0 + step / BigRational::from_integer(2.into());
            let y1 = &y0 + step;
            let b0 = plus_op(&y0)?;
            let bm = plus_op(&ym)?;
            let b1 = plus_op(&y1)?;
            let k1 = b0.mul(&m);
            let k2 = bm.mul(&m.add(&k1.scale(&(h.clone() * half.clone()))));
            let k3 = bm.mul(&m.add(&k2.scale(&(h.clone() * half.clone()))));
            let k4 = b1.mul(&m.add(&k3.scale(&h)));
            let incr = k1
                .add(&k2.scale(&two))
                .add(&k3.scale(&two))
                .add(&k4)
                .scale(&(h.clone() * sixth.clone()));
            m = m.add(&incr);
            mplus[jdx].push(m.clone());
        }
    }

    Ok(NumericSolution {
        system,
        coeffs: coeffs.clone(),
        pair,
        steps,
        step: step.clone(),
        precision,
        scale,
        reals,
        mplus,
        mminus,
    })
}

impl NumericSolution {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn grid_x(&self, i: usize) -> BigRational {
        &self.step * BigRational::from_integer(i.into())
    }

    pub fn grid_y(&self, j: usize) -> BigRational {
        &self.step * BigRational::from_integer(j.into())
    }

    /// K at a grid node: the product M⁺(y_j)·M⁻(x_i); no 2-D integration.
    pub fn k_at(&self, fund: u8, i: usize, j: usize) -> Mat<BigFixed> {
        let f = usize::from(fund) - 1;
        self.mplus[f][j].mul(&self.mminus[f][i])
    }

    /// Point data at a grid node, derivatives by insertion of the exact
    /// operator values at the node coordinates.
    pub fn point_data(&self, i: usize, j: usize) -> Result<PointData<BigFixed>> {
        let x = self.grid_x(i);
        let y = self.grid_y(j);
        let mut k = Vec::new();
        let mut kx = Vec::new();
        let mut ky = Vec::new();
        let mut kxy = Vec::new();
        for fdx in 0..2 {
            let fund = (fdx + 1) as u8;
            let rep = self.pair.raw(fund);
            let real = &self.reals[fdx];
            let a = lift_mat(
                &real
                    .lminus(&self.coeffs, Some(&x))?
                    .add(&grade_zero_matrix(rep, self.system, &self.coeffs.azero, &x)?),
                self.scale,
            );
            let b = lift_mat(
                &real
                    .lplus(&self.coeffs, Some(&y))?
                    .add(&grade_zero_matrix(rep, self.system, &self.coeffs.bzero, &y)?),
                self.scale,
            );
            let km = self.k_at(fund, i, j);
            kx.push(km.mul(&a));
            ky.push(b.mul(&km));
            kxy.push(b.mul(&km).mul(&a));
            k.push(km);
        }
        Ok(PointData {
            k: [k.remove(0), k.remove(0)],
            kx: [kx.remove(0), kx.remove(0)],
            ky: [ky.remove(0), ky.remove(0)],
            kxy: [kxy.remove(0), kxy.remove(0)],
        })
    }

    pub fn dump_json(&self, sample_stride: usize) -> serde_json::Value {
        let stride = sample_stride.max(1);
        let mut samples = Vec::new();
        let fund = self.system.u_fundamental();
        for i in (0..=self.steps).step_by(stride) {
            for j in (0..=self.steps).step_by(stride) {
                let k = self.k_at(fund, i, j);
                samples.push(json!({
                    "x": rat_to_string(&self.grid_x(i)),
                    "y": rat_to_string(&self.grid_y(j)),
                    "k00": k[(0, 0)].to_decimal_string(),
                }));
            }
        }
        json!({
            "mode": "numeric",
            "system": self.system.label(),
            "precision": self.precision,
            "step": rat_to_string(&self.step),
            "steps": self.steps,
            "coefficients": self.coeffs.to_json(),
            "samples": samples,
        })
    }
}

/// Largest entrywise deviation between the numeric K and the exact K at
/// every grid node, in fixed point.
pub fn numeric_vs_exact_defect(num: &NumericSolution, exact: &ExactSolution) -> BigFixed {
    let mut worst = BigFixed::zero();
    for fund in [1u8, 2] {
        for i in 0..=num.steps {
            for j in 0..=num.steps {
                let kn = num.k_at(fund, i, j);
                let x = num.grid_x(i);
                let y = num.grid_y(j);
                let ke = exact.k_poly(fund).map(|p| p.eval(&x, &y));
                for r in 0..kn.rows() {
                    for c in 0..kn.cols() {
                        let d = (kn[(r, c)].clone()
                            - BigFixed::from_rational(&ke[(r, c)], num.scale))
                        .abs();
                        if d > worst {
                            worst = d;
                        }
                    }
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn zero_coefficients_give_the_identity_solution() {
        let coeffs = CoefficientSet::zero(SystemId::A2_10);
        let sol = solve_exact(SystemId::A2_10, &coeffs).unwrap();
        for j in [1u8, 2] {
            assert_eq!(*sol.k_poly(j), Mat::<Poly2>::identity(3));
        }
        let u = sol.u_poly();
        assert_eq!(u, Mat::<Poly2>::identity(2));
    }

    #[test]
    fn a2_single_coefficient_solution_has_the_expected_highest_element() {
        // c₁ = c̄₁ = 1, others 0: K = exp(yX⁺₁)exp(xX⁻₁), ⟨1|K|1⟩ = 1 + xy.
        let mut coeffs = CoefficientSet::zero(SystemId::A2_10);
        coeffs.set("c1", crate::poly::Poly1::constant(rat_int(1))).unwrap();
        coeffs.set("cb1", crate::poly::Poly1::constant(rat_int(1))).unwrap();
        let sol = solve_exact(SystemId::A2_10, &coeffs).unwrap();
        let h1 = sol.highest_poly(1);
        let expect = Poly2::constant(rat_int(1)) + Poly2::monomial(1, 1, rat_int(1));
        assert_eq!(h1, expect);
        // In the second fundamental the u-matrix row ⟨2|K|2⟩ stays 1 at
        // first order in the lowering direction.
        let u = sol.u_poly();
        assert_eq!(u[(0, 0)], Poly2::constant(rat_int(1)));
    }

    #[test]
    fn g2_exact_solution_is_polynomial_of_bounded_degree() {
        let coeffs = CoefficientSet::constants(
            SystemId::G2_01,
            &[
                ("d1", rat_int(1)),
                ("d2", rat_int(1)),
                ("d3", rat_int(1)),
                ("d4", rat_int(1)),
                ("dsq", rat_int(1)),
                ("db1", rat_int(1)),
                ("db2", rat_int(1)),
                ("db3", rat_int(1)),
                ("db4", rat_int(1)),
                ("dbsq", rat_int(1)),
            ],
        )
        .unwrap();
        let sol = solve_exact(SystemId::G2_01, &coeffs).unwrap();
        let k = sol.k_poly(1);
        for r in 0..7 {
            for c in 0..7 {
                assert!(k[(r, c)].deg_x() <= 7 && k[(r, c)].deg_y() <= 7);
            }
        }
    }

    #[test]
    fn nonconstant_or_graded_coefficients_are_rejected_in_exact_mode() {
        let mut coeffs = CoefficientSet::zero(SystemId::A2_10);
        coeffs
            .set("c1", crate::poly::Poly1::new(vec![rat_int(0), rat_int(1)]))
            .unwrap();
        assert!(matches!(
            solve_exact(SystemId::A2_10, &coeffs),
            Err(Error::NonConstantCoefficients)
        ));

        let mut coeffs = CoefficientSet::zero(SystemId::A2_10);
        coeffs
            .azero
            .insert("h1".into(), crate::poly::Poly1::constant(rat(1, 2)));
        assert!(matches!(solve_exact(SystemId::A2_10, &coeffs), Err(Error::NonzeroGradeZero)));
    }

    #[test]
    fn mixed_derivative_residual_is_the_zero_polynomial() {
        for (system, seed) in [
            (SystemId::A2_10, 3u64),
            (SystemId::B2_10, 4),
            (SystemId::B2_01, 5),
        ] {
            let coeffs = CoefficientSet::random_constants(system, seed, 3);
            let sol = solve_exact(system, &coeffs).unwrap();
            for i in 1u8..=2 {
                if !system.grading().is_black(i) {
                    continue;
                }
                let residual = mixed_derivative_check(&sol, i).unwrap();
                assert!(residual.is_zero(), "{system} index {i}");
            }
        }
    }

    #[test]
    fn red_index_is_rejected_by_the_mixed_derivative_check() {
        let coeffs = CoefficientSet::zero(SystemId::A2_10);
        let sol = solve_exact(SystemId::A2_10, &coeffs).unwrap();
        assert!(mixed_derivative_check(&sol, 2).is_err());
    }

    #[test]
    fn numeric_matches_exact_for_constant_coefficients() {
        // The 3-dim representation makes the fourth-order step exact, so
        // the defect is pure roundoff.
        let coeffs = CoefficientSet::random_constants(SystemId::A2_10, 11, 2);
        let exact = solve_exact(SystemId::A2_10, &coeffs).unwrap();
        let num = solve_numeric(SystemId::A2_10, &coeffs, 32, &rat(1, 32), 30).unwrap();
        let defect = numeric_vs_exact_defect(&num, &exact);
        assert!(defect <= BigFixed::pow10_neg(28), "defect {}", defect.to_decimal_string());
    }

    #[test]
    fn grade_zero_part_feeds_the_first_logarithmic_derivative() {
        // A⁰ = (1/2)h₁: ⟨1|K·A⁰|1⟩/⟨1|K|1⟩ must equal 1/2 at the origin
        // and the red components must annihilate |1⟩.
        let mut coeffs = CoefficientSet::random_constants(SystemId::A2_10, 21, 2);
        coeffs.azero.insert("h1".into(), crate::poly::Poly1::constant(rat(1, 2)));
        coeffs.azero.insert("Xp2".into(), crate::poly::Poly1::constant(rat(7, 3)));
        let num = solve_numeric(SystemId::A2_10, &coeffs, 4, &rat(1, 8), 30).unwrap();
        let pd = num.point_data(2, 3).unwrap();
        let rep = num.pair.raw(1);
        let lift = |r: &BigRational| BigFixed::from_rational(r, num.scale());
        // K_x = K(A⁰+L⁻); subtract the pure L⁻ insertion to isolate K·A⁰.
        let real = LaxRealization::new(SystemId::A2_10, rep).unwrap();
        let x = num.grid_x(2);
        let lm = lift_mat(&real.lminus(&coeffs, Some(&x)).unwrap(), num.scale());
        let ka0 = pd.kx[0].sub(&pd.k[0].mul(&lm));
        // ⟨1|K A⁰|1⟩ = (1/2)·⟨1|K h₁|1⟩ = (1/2)⟨1|K|1⟩: the X⁺₂ part drops.
        let lhs = ka0[(0, 0)].clone();
        let rhs = lift(&rat(1, 2)) * pd.k[0][(0, 0)].clone();
        let err = (lhs - rhs).abs();
        assert!(err <= BigFixed::pow10_neg(25), "err {}", err.to_decimal_string());
    }
}
