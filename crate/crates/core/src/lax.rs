//! The graded operators L± for each (algebra, grading) case, coefficient
//! management, hermitian conjugation, and gauge transformations.
//!
//! Each system's L⁺ is entered term by term exactly as the multi-commutator
//! sums prescribe (including the 1/2, 1/6, 1/3 factors); L⁻ is generated by
//! hermitian conjugation. A grade-decomposition assertion guards every
//! realization.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{cartan_matrix, grading_coeffs, AlgebraId, GradingSpec};
use crate::error::{Error, Result};
use crate::formal::{comm, gen, hermitian_conjugate, swap_bar, GenExpr, LaxTerm};
use crate::matrix::{det, inverse, Mat};
use crate::poly::{Poly1, Poly2};
use crate::rational::{random_rational, rat, rat_int};
use crate::rep::{grading_matrix, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SystemId {
    A2_10,
    B2_10,
    B2_01,
    G2_01,
    G2_10,
}

impl SystemId {
    pub const ALL: [SystemId; 5] =
        [SystemId::A2_10, SystemId::B2_10, SystemId::B2_01, SystemId::G2_01, SystemId::G2_10];

    pub fn algebra(self) -> AlgebraId {
        match self {
            SystemId::A2_10 => AlgebraId::A2,
            SystemId::B2_10 | SystemId::B2_01 => AlgebraId::B2,
            SystemId::G2_01 | SystemId::G2_10 => AlgebraId::G2,
        }
    }

    pub fn grading_c(self) -> [u8; 2] {
        match self {
            SystemId::A2_10 | SystemId::B2_10 | SystemId::G2_10 => [1, 0],
            SystemId::B2_01 | SystemId::G2_01 => [0, 1],
        }
    }

    pub fn grading(self) -> GradingSpec {
        grading_coeffs(&cartan_matrix(self.algebra()), self.grading_c())
    }

    /// The red simple root (grade 0); its A₁ provides the u-matrix block.
    pub fn red_root(self) -> u8 {
        if self.grading_c() == [1, 0] {
            2
        } else {
            1
        }
    }

    /// Raw fundamental carrying the u-matrix basis {|j⟩, X⁻ⱼ|j⟩}.
    pub fn u_fundamental(self) -> u8 {
        self.red_root()
    }

    /// Grades expected in L⁺ (mirrored negatively in L⁻).
    pub fn expected_grades(self) -> &'static [i64] {
        match self {
            SystemId::A2_10 | SystemId::B2_01 => &[1],
            SystemId::B2_10 | SystemId::G2_01 => &[1, 2],
            SystemId::G2_10 => &[1, 2, 3],
        }
    }

    pub fn coefficient_names(self) -> &'static [&'static str] {
        match self {
            SystemId::A2_10 => &["c1", "c2", "cb1", "cb2"],
            SystemId::B2_10 => &["c1", "c2", "csq", "cb1", "cb2", "cbsq"],
            SystemId::B2_01 => &["d1", "d2", "d3", "db1", "db2", "db3"],
            SystemId::G2_01 => {
                &["d1", "d2", "d3", "d4", "dsq", "db1", "db2", "db3", "db4", "dbsq"]
            }
            SystemId::G2_10 => {
                &["c1", "c2", "csq", "c31", "c32", "cb1", "cb2", "cbsq", "cb31", "cb32"]
            }
        }
    }

    /// Barred names multiply L⁺ terms and depend on y.
    pub fn is_barred(name: &str) -> bool {
        name.as_bytes().get(1) == Some(&b'b')
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A2-10" => Ok(SystemId::A2_10),
            "B2-10" => Ok(SystemId::B2_10),
            "B2-01" => Ok(SystemId::B2_01),
            "G2-01" => Ok(SystemId::G2_01),
            "G2-10" => Ok(SystemId::G2_10),
            other => Err(Error::Config(format!("unknown system `{other}`"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SystemId::A2_10 => "A2-10",
            SystemId::B2_10 => "B2-10",
            SystemId::B2_01 => "B2-01",
            SystemId::G2_01 => "G2-01",
            SystemId::G2_10 => "G2-10",
        }
    }
}

impl std::fmt::Display for SystemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// L⁺ as a formal sum; the printed term tables.
pub fn lax_plus_terms(system: SystemId) -> Vec<LaxTerm> {
    let one = rat_int(1);
    match system {
        SystemId::A2_10 => vec![
            LaxTerm::new("cb1", one.clone(), gen(1)),
            LaxTerm::new("cb2", one, comm(gen(2), gen(1))),
        ],
        SystemId::B2_10 => vec![
            LaxTerm::new("cb1", one.clone(), gen(1)),
            LaxTerm::new("cb2", one.clone(), comm(gen(2), gen(1))),
            LaxTerm::new("cbsq", one, comm(comm(gen(2), gen(1)), gen(1))),
        ],
        SystemId::B2_01 => vec![
            LaxTerm::new("db1", one.clone(), gen(2)),
            LaxTerm::new("db2", one, comm(gen(1), gen(2))),
            LaxTerm::new("db3", rat(1, 2), comm(gen(1), comm(gen(1), gen(2)))),
        ],
        SystemId::G2_01 => vec![
            LaxTerm::new("db1", one.clone(), gen(2)),
            LaxTerm::new("db2", one, comm(gen(1), gen(2))),
            LaxTerm::new("db3", rat(1, 2), comm(gen(1), comm(gen(1), gen(2)))),
            LaxTerm::new("db4", rat(1, 6), comm(gen(1), comm(gen(1), comm(gen(1), gen(2))))),
            LaxTerm::new(
                "dbsq",
                rat(1, 3),
                comm(gen(2), comm(gen(1), comm(gen(1), comm(gen(1), gen(2))))),
            ),
        ],
        SystemId::G2_10 => vec![
            LaxTerm::new("cb1", one.clone(), gen(1)),
            LaxTerm::new("cb2", one.clone(), comm(gen(1), gen(2))),
            LaxTerm::new("cbsq", one.clone(), comm(gen(1), comm(gen(1), gen(2)))),
            LaxTerm::new("cb31", one.clone(), comm(gen(1), comm(gen(1), comm(gen(1), gen(2))))),
            LaxTerm::new(
                "cb32",
                one,
                comm(gen(2), comm(gen(1), comm(gen(1), comm(gen(1), gen(2))))),
            ),
        ],
    }
}

/// L⁻ by hermitian conjugation of the L⁺ table.
pub fn lax_minus_terms(system: SystemId) -> Vec<LaxTerm> {
    hermitian_conjugate(&lax_plus_terms(system))
}

/// Named scalar coefficient functions (barred: functions of y; unbarred: of
/// x) plus optional grade-zero parts.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub system: SystemId,
    values: BTreeMap<String, Poly1>,
    /// A⁰(x): generator name ("h1", "h2", "Xp<r>", "Xm<r>") → polynomial.
    pub azero: BTreeMap<String, Poly1>,
    /// B⁰(y): same shape.
    pub bzero: BTreeMap<String, Poly1>,
}

impl CoefficientSet {
    pub fn new(system: SystemId, values: BTreeMap<String, Poly1>) -> Result<Self> {
        let set = Self { system, values, azero: BTreeMap::new(), bzero: BTreeMap::new() };
        set.validate()?;
        Ok(set)
    }

    fn validate(&self) -> Result<()> {
        let names = self.system.coefficient_names();
        for key in self.values.keys() {
            if !names.contains(&key.as_str()) {
                return Err(Error::UnknownCoefficient(key.clone()));
            }
        }
        for name in names {
            if !self.values.contains_key(*name) {
                return Err(Error::MissingCoefficient((*name).into()));
            }
        }
        let red = self.system.red_root();
        let allowed =
            ["h1".to_string(), "h2".to_string(), format!("Xp{red}"), format!("Xm{red}")];
        for key in self.azero.keys().chain(self.bzero.keys()) {
            if !allowed.contains(key) {
                return Err(Error::Config(format!(
                    "grade-zero generator `{key}` is not h1, h2 or the red root"
                )));
            }
        }
        Ok(())
    }

    pub fn constants(system: SystemId, pairs: &[(&str, BigRational)]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (name, v) in pairs {
            values.insert((*name).to_string(), Poly1::constant(v.clone()));
        }
        Self::new(system, values)
    }

    /// All coefficients zero.
    pub fn zero(system: SystemId) -> Self {
        let values = system
            .coefficient_names()
            .iter()
            .map(|n| (n.to_string(), Poly1::constant(BigRational::zero())))
            .collect();
        Self { system, values, azero: BTreeMap::new(), bzero: BTreeMap::new() }
    }

    /// Random constant coefficients, deterministic in the seed.
    pub fn random_constants(system: SystemId, seed: u64, magnitude: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0ef);
        let values = system
            .coefficient_names()
            .iter()
            .map(|n| (n.to_string(), Poly1::constant(random_rational(&mut rng, magnitude))))
            .collect();
        Self { system, values, azero: BTreeMap::new(), bzero: BTreeMap::new() }
    }

    pub fn get(&self, name: &str) -> Result<&Poly1> {
        self.values.get(name).ok_or_else(|| Error::MissingCoefficient(name.into()))
    }

    pub fn set(&mut self, name: &str, p: Poly1) -> Result<()> {
        if !self.system.coefficient_names().contains(&name) {
            return Err(Error::UnknownCoefficient(name.into()));
        }
        self.values.insert(name.into(), p);
        Ok(())
    }

    pub fn eval(&self, name: &str, t: &BigRational) -> Result<BigRational> {
        Ok(self.get(name)?.eval(t))
    }

    /// Constant value of a coefficient; exact mode precondition.
    pub fn constant_value(&self, name: &str) -> Result<BigRational> {
        let p = self.get(name)?;
        if !p.is_constant() {
            return Err(Error::NonConstantCoefficients);
        }
        Ok(p.constant_term().clone())
    }

    pub fn is_exact_mode(&self) -> bool {
        self.values.values().all(Poly1::is_constant)
            && self.azero.is_empty()
            && self.bzero.is_empty()
    }

    /// Swaps barred and unbarred entries; pairs with hermitian conjugation.
    pub fn bar_swapped(&self) -> Self {
        let values =
            self.values.iter().map(|(k, v)| (swap_bar(k), v.clone())).collect();
        Self {
            system: self.system,
            values,
            azero: self.bzero.clone(),
            bzero: self.azero.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffFile {
    system: String,
    coeffs: BTreeMap<String, Vec<String>>,
    #[serde(rename = "Azero", default, skip_serializing_if = "BTreeMap::is_empty")]
    azero: BTreeMap<String, Vec<String>>,
    #[serde(rename = "Bzero", default, skip_serializing_if = "BTreeMap::is_empty")]
    bzero: BTreeMap<String, Vec<String>>,
}

impl CoefficientSet {
    pub fn from_json(v: &Value) -> Result<Self> {
        let file: CoeffFile = serde_json::from_value(v.clone())?;
        let system = SystemId::parse(&file.system)?;
        let mut values = BTreeMap::new();
        for (k, strings) in &file.coeffs {
            values.insert(k.clone(), Poly1::from_strings(strings)?);
        }
        let mut set = Self::new(system, values)?;
        for (k, strings) in &file.azero {
            set.azero.insert(k.clone(), Poly1::from_strings(strings)?);
        }
        for (k, strings) in &file.bzero {
            set.bzero.insert(k.clone(), Poly1::from_strings(strings)?);
        }
        set.validate()?;
        Ok(set)
    }

    pub fn to_json(&self) -> Value {
        let file = CoeffFile {
            system: self.system.label().into(),
            coeffs: self.values.iter().map(|(k, v)| (k.clone(), v.to_strings())).collect(),
            azero: self.azero.iter().map(|(k, v)| (k.clone(), v.to_strings())).collect(),
            bzero: self.bzero.iter().map(|(k, v)| (k.clone(), v.to_strings())).collect(),
        };
        serde_json::to_value(file).expect("coefficient serialization cannot fail")
    }
}

/// The L± term matrices in one representation, grade-checked.
#[derive(Debug, Clone)]
pub struct LaxRealization {
    pub system: SystemId,
    pub plus: Vec<(String, Mat<BigRational>)>,
    pub minus: Vec<(String, Mat<BigRational>)>,
}

impl LaxRealization {
    pub fn new(system: SystemId, rep: &Representation) -> Result<Self> {
        if rep.algebra != system.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let grading = system.grading();
        let h = grading_matrix(rep, &grading)?;
        let eval_terms = |terms: &[LaxTerm], sign: i64| -> Result<Vec<(String, Mat<BigRational>)>> {
            terms
                .iter()
                .map(|t| {
                    let m = t.expr.eval(rep).scale(&t.factor);
                    let grade = term_grade(&t.expr, &grading);
                    if !system.expected_grades().contains(&(sign * grade)) {
                        return Err(Error::GradeViolation(format!(
                            "term {} has grade {grade}",
                            t.coeff
                        )));
                    }
                    if h.commutator(&m) != m.scale(&rat_int(grade)) {
                        return Err(Error::GradeViolation(format!(
                            "term {} is not homogeneous of grade {grade}",
                            t.coeff
                        )));
                    }
                    Ok((t.coeff.clone(), m))
                })
                .collect()
        };
        Ok(Self {
            system,
            plus: eval_terms(&lax_plus_terms(system), 1)?,
            minus: eval_terms(&lax_minus_terms(system), -1)?,
        })
    }

    fn assemble(
        terms: &[(String, Mat<BigRational>)],
        coeffs: &CoefficientSet,
        at: Option<&BigRational>,
    ) -> Result<Mat<BigRational>> {
        let dim = terms[0].1.rows();
        let mut acc = Mat::<BigRational>::zeros(dim, dim);
        for (name, m) in terms {
            let c = match at {
                Some(t) => coeffs.eval(name, t)?,
                None => coeffs.constant_value(name)?,
            };
            if !c.is_zero() {
                acc = acc.add(&m.scale(&c));
            }
        }
        Ok(acc)
    }

    /// L⁺ with barred coefficients evaluated at y (constants when `None`).
    pub fn lplus(&self, coeffs: &CoefficientSet, y: Option<&BigRational>) -> Result<Mat<BigRational>> {
        Self::assemble(&self.plus, coeffs, y)
    }

    /// L⁻ with unbarred coefficients evaluated at x (constants when `None`).
    pub fn lminus(&self, coeffs: &CoefficientSet, x: Option<&BigRational>) -> Result<Mat<BigRational>> {
        Self::assemble(&self.minus, coeffs, x)
    }
}

/// Net grade of a bracket word under a grading (sum of letter grades).
fn term_grade(expr: &GenExpr, grading: &GradingSpec) -> i64 {
    match expr {
        GenExpr::Gen(g) => {
            let i = g.unsigned_abs();
            let c = grading.grade_of_root(i);
            if *g > 0 {
                c
            } else {
                -c
            }
        }
        GenExpr::Comm(a, b) => term_grade(a, grading) + term_grade(b, grading),
    }
}

/// Grade-zero part Σ coeff·generator as a matrix at a parameter value.
pub fn grade_zero_matrix(
    rep: &Representation,
    system: SystemId,
    part: &BTreeMap<String, Poly1>,
    t: &BigRational,
) -> Result<Mat<BigRational>> {
    let red = system.red_root();
    let mut acc = Mat::<BigRational>::zeros(rep.dim, rep.dim);
    for (name, poly) in part {
        let m = match name.as_str() {
            "h1" => rep.h(1),
            "h2" => rep.h(2),
            n if *n == format!("Xp{red}") => rep.xp(red),
            n if *n == format!("Xm{red}") => rep.xm(red),
            other => return Err(Error::Config(format!("invalid grade-zero generator `{other}`"))),
        };
        let c = poly.eval(t);
        if !c.is_zero() {
            acc = acc.add(&m.scale(&c));
        }
    }
    Ok(acc)
}

/// Built L± matrices for one representation at one evaluation point (or
/// with constant coefficients when no point is given).
#[derive(Debug, Clone)]
pub struct LaxData {
    pub system: SystemId,
    pub lplus: Mat<BigRational>,
    pub lminus: Mat<BigRational>,
    pub azero: Mat<BigRational>,
    pub bzero: Mat<BigRational>,
}

pub fn build_lax(
    system: SystemId,
    coeffs: &CoefficientSet,
    rep: &Representation,
    at: Option<(&BigRational, &BigRational)>,
) -> Result<LaxData> {
    if coeffs.system != system {
        return Err(Error::Config("coefficient set belongs to a different system".into()));
    }
    let real = LaxRealization::new(system, rep)?;
    let (x, y) = match at {
        Some((x, y)) => (Some(x), Some(y)),
        None => (None, None),
    };
    let zero_at = BigRational::zero();
    Ok(LaxData {
        system,
        lplus: real.lplus(coeffs, y)?,
        lminus: real.lminus(coeffs, x)?,
        azero: grade_zero_matrix(rep, system, &coeffs.azero, x.unwrap_or(&zero_at))?,
        bzero: grade_zero_matrix(rep, system, &coeffs.bzero, y.unwrap_or(&zero_at))?,
    })
}

// ---------------------------------------------------------------------------
// Gauge transformations.

/// ḡ(y)·u·g(x) on a 2×2 field of bivariate polynomials; ḡ depends on y
/// only, g on x only, both invertible.
pub fn gauge_transform(
    u: &Mat<Poly2>,
    gbar: &Mat<Poly2>,
    g: &Mat<Poly2>,
) -> Result<Mat<Poly2>> {
    for m in [gbar, g] {
        let d = m[(0, 0)].clone() * m[(1, 1)].clone() - m[(0, 1)].clone() * m[(1, 0)].clone();
        if d.is_zero() {
            return Err(Error::SingularGauge);
        }
    }
    Ok(gbar.mul(u).mul(g))
}

/// Constant gauge element of the red-root A₁ subgroup:
/// exp(a·X⁻ᵣ)·t^{h}·exp(b·X⁺ᵣ) pushed through a representation.
#[derive(Debug, Clone)]
pub struct RedGauge {
    pub lower: BigRational,
    pub torus: (BigRational, BigRational),
    pub upper: BigRational,
}

impl RedGauge {
    pub fn realize(&self, rep: &Representation, red: u8) -> Result<Mat<BigRational>> {
        if self.torus.0.is_zero() || self.torus.1.is_zero() {
            return Err(Error::SingularGauge);
        }
        let lower = crate::group::exp_nilpotent_matrix(&rep.xm(red).scale(&self.lower))?;
        let torus = crate::group::torus_element(rep, &self.torus.0, &self.torus.1)?.matrix;
        let upper = crate::group::exp_nilpotent_matrix(&rep.xp(red).scale(&self.upper))?;
        Ok(lower.mul(&torus).mul(&upper))
    }
}

/// Conjugates constant coefficients by red-group elements: L⁻ → g₀⁻¹L⁻g₀
/// and L⁺ → ḡ₀L⁺ḡ₀⁻¹, re-expressed in the same term basis.
pub fn conjugate_coefficients(
    system: SystemId,
    coeffs: &CoefficientSet,
    rep: &Representation,
    g0: &RedGauge,
    g0bar: &RedGauge,
) -> Result<CoefficientSet> {
    if !coeffs.is_exact_mode() {
        return Err(Error::NonConstantCoefficients);
    }
    let red = system.red_root();
    let real = LaxRealization::new(system, rep)?;
    let g = g0.realize(rep, red)?;
    let ginv = inverse(&g).map_err(|_| Error::SingularGauge)?;
    let gb = g0bar.realize(rep, red)?;
    let gbinv = inverse(&gb).map_err(|_| Error::SingularGauge)?;

    let lminus = real.lminus(coeffs, None)?;
    let new_minus = ginv.mul(&lminus).mul(&g);
    let lplus = real.lplus(coeffs, None)?;
    let new_plus = gb.mul(&lplus).mul(&gbinv);

    let minus_coeffs = express_in_terms(&real.minus, &new_minus)?;
    let plus_coeffs = express_in_terms(&real.plus, &new_plus)?;

    let mut values = BTreeMap::new();
    for (name, v) in minus_coeffs.into_iter().chain(plus_coeffs) {
        values.insert(name, Poly1::constant(v));
    }
    CoefficientSet::new(system, values)
}

/// Solves Σ cᵢ·Mᵢ = T exactly for the coefficients (normal equations over
/// the rationals; the term matrices are linearly independent).
fn express_in_terms(
    terms: &[(String, Mat<BigRational>)],
    target: &Mat<BigRational>,
) -> Result<Vec<(String, BigRational)>> {
    let n = terms.len();
    let dot = |a: &Mat<BigRational>, b: &Mat<BigRational>| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                acc += &a[(i, j)] * &b[(i, j)];
            }
        }
        acc
    };
    let mut gram = Mat::<BigRational>::zeros(n, n);
    let mut rhs = Vec::with_capacity(n);
    for (i, (_, mi)) in terms.iter().enumerate() {
        for (j, (_, mj)) in terms.iter().enumerate() {
            gram[(i, j)] = dot(mi, mj);
        }
        rhs.push(dot(mi, target));
    }
    let coeffs = crate::matrix::solve(&gram, &rhs)
        .map_err(|_| Error::InternalInconsistency("dependent lax term matrices".into()))?;
    // Confirm the expansion is exact, not least-squares.
    let mut recon = Mat::<BigRational>::zeros(target.rows(), target.cols());
    for ((_, m), c) in terms.iter().zip(&coeffs) {
        recon = recon.add(&m.scale(c));
    }
    if recon != *target {
        return Err(Error::InternalInconsistency(
            "conjugated operator left the term span".into(),
        ));
    }
    Ok(terms.iter().map(|(n, _)| n.clone()).zip(coeffs).collect())
}

/// Finds a constant red gauge making c³₂ = c̄³₂ = 0 (the spinor components
/// are affine in the unipotent parameters, so one exact solve suffices).
pub fn gauge_to_kill_c32(
    coeffs: &CoefficientSet,
    rep: &Representation,
) -> Result<(CoefficientSet, RedGauge, RedGauge)> {
    if coeffs.system != SystemId::G2_10 {
        return Err(Error::Config("c32 gauge applies to G2-10 only".into()));
    }
    let unit = RedGauge {
        lower: BigRational::zero(),
        torus: (rat_int(1), rat_int(1)),
        upper: BigRational::zero(),
    };
    // ad(X⁻ᵣ) maps the c³₁ root vector onto the c³₂ one, so c³₂ is affine
    // in the lower unipotent parameter with generically nonzero slope.
    let gauge_with = |a: &BigRational| RedGauge {
        lower: a.clone(),
        torus: (rat_int(1), rat_int(1)),
        upper: BigRational::zero(),
    };
    let c32_after = |a: &BigRational| -> Result<BigRational> {
        let g = gauge_with(a);
        let new = conjugate_coefficients(SystemId::G2_10, coeffs, rep, &g, &unit)?;
        new.constant_value("c32")
    };
    let at0 = c32_after(&BigRational::zero())?;
    let at1 = c32_after(&rat_int(1))?;
    let slope = &at1 - &at0;
    if slope.is_zero() {
        return Err(Error::SingularGauge);
    }
    let a = -&at0 / &slope;
    let g0 = gauge_with(&a);

    // Mirrored on the barred side: ad(X⁺ᵣ) feeds c̄³₁ into c̄³₂.
    let bar_gauge_with = |b: &BigRational| RedGauge {
        lower: BigRational::zero(),
        torus: (rat_int(1), rat_int(1)),
        upper: b.clone(),
    };
    let cb32_after = |b: &BigRational| -> Result<BigRational> {
        let g = bar_gauge_with(b);
        let new = conjugate_coefficients(SystemId::G2_10, coeffs, rep, &unit, &g)?;
        new.constant_value("cb32")
    };
    let at0 = cb32_after(&BigRational::zero())?;
    let at1 = cb32_after(&rat_int(1))?;
    let slope = &at1 - &at0;
    if slope.is_zero() {
        return Err(Error::SingularGauge);
    }
    let b = -&at0 / &slope;
    let g0bar = bar_gauge_with(&b);

    let new = conjugate_coefficients(SystemId::G2_10, coeffs, rep, &g0, &g0bar)?;
    Ok((new, g0, g0bar))
}

/// Determinant of a constant 2×2 rational gauge.
pub fn det2(m: &Mat<BigRational>) -> BigRational {
    det(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::build_raw;

    #[test]
    fn coefficient_sets_validate_names() {
        let err = CoefficientSet::constants(
            SystemId::A2_10,
            &[("c1", rat_int(1)), ("c2", rat_int(0)), ("cb1", rat_int(1)), ("nope", rat_int(2))],
        );
        assert!(matches!(err, Err(Error::UnknownCoefficient(_))));
        let err = CoefficientSet::constants(SystemId::A2_10, &[("c1", rat_int(1))]);
        assert!(matches!(err, Err(Error::MissingCoefficient(_))));
    }

    #[test]
    fn coefficient_json_round_trip() {
        let set = CoefficientSet::random_constants(SystemId::B2_10, 5, 4);
        let v = set.to_json();
        let back = CoefficientSet::from_json(&v).unwrap();
        assert_eq!(back.to_json(), v);
    }

    #[test]
    fn single_term_lax_is_the_scaled_generator() {
        let rep = build_raw(AlgebraId::A2, 2).unwrap();
        let mut set = CoefficientSet::zero(SystemId::A2_10);
        set.set("cb1", Poly1::constant(rat(3, 2))).unwrap();
        let data = build_lax(SystemId::A2_10, &set, &rep, None).unwrap();
        assert_eq!(data.lplus, rep.xp(1).scale(&rat(3, 2)));
        assert!(data.lminus.is_zero());
    }

    #[test]
    fn grade_decomposition_holds_for_every_system() {
        for system in SystemId::ALL {
            let alg = system.algebra();
            for j in [1u8, 2] {
                let rep = build_raw(alg, j).unwrap();
                let real = LaxRealization::new(system, &rep).unwrap();
                let grading = system.grading();
                let h = grading_matrix(&rep, &grading).unwrap();
                let mut seen = std::collections::BTreeSet::new();
                for (name, m) in real.plus.iter() {
                    let terms = lax_plus_terms(system);
                    let term =
                        terms.iter().find(|t| &t.coeff == name).expect("term present");
                    let grade = term_grade(&term.expr, &grading);
                    seen.insert(grade);
                    if !m.is_zero() {
                        assert_eq!(h.commutator(m), m.scale(&rat_int(grade)), "{system} {name}");
                    }
                }
                assert_eq!(
                    seen.into_iter().collect::<Vec<_>>(),
                    system.expected_grades().to_vec(),
                    "{system} grade coverage"
                );
            }
        }
    }

    #[test]
    fn printed_minus_tables_match_hermitian_conjugation() {
        // L⁻ written out in the text for A2-10 and B2-10 equals the con-
        // jugated table in every representation.
        let rep = build_raw(AlgebraId::B2, 2).unwrap();
        let minus = lax_minus_terms(SystemId::B2_10);
        let explicit = vec![
            LaxTerm::new("c1", rat_int(1), gen(-1)),
            LaxTerm::new("c2", rat_int(1), comm(gen(-1), gen(-2))),
            LaxTerm::new("csq", rat_int(1), comm(gen(-1), comm(gen(-1), gen(-2)))),
        ];
        for (a, b) in minus.iter().zip(&explicit) {
            assert_eq!(a.coeff, b.coeff);
            assert_eq!(a.expr.eval(&rep), b.expr.eval(&rep), "{}", a.coeff);
        }
    }

    #[test]
    fn hermitian_conjugation_flips_grades() {
        let rep = build_raw(AlgebraId::G2, 1).unwrap();
        let grading = SystemId::G2_01.grading();
        for (plus, minus) in lax_plus_terms(SystemId::G2_01)
            .iter()
            .zip(&lax_minus_terms(SystemId::G2_01))
        {
            assert_eq!(
                term_grade(&plus.expr, &grading),
                -term_grade(&minus.expr, &grading)
            );
            assert_eq!(swap_bar(&plus.coeff), minus.coeff);
            let _ = (plus.expr.eval(&rep), minus.expr.eval(&rep));
        }
    }

    #[test]
    fn gauge_transform_identity_is_a_no_op_and_singular_is_rejected() {
        use num_traits::One;
        let u = Mat::from_rows(vec![
            vec![Poly2::one(), Poly2::monomial(1, 1, rat_int(2))],
            vec![Poly2::zero(), Poly2::one()],
        ]);
        let id = Mat::<Poly2>::identity(2);
        assert_eq!(gauge_transform(&u, &id, &id).unwrap(), u);
        let sing = Mat::from_rows(vec![
            vec![Poly2::one(), Poly2::one()],
            vec![Poly2::one(), Poly2::one()],
        ]);
        assert!(matches!(gauge_transform(&u, &sing, &id), Err(Error::SingularGauge)));
    }

    #[test]
    fn conjugation_keeps_operators_in_the_term_span() {
        let rep = build_raw(AlgebraId::G2, 2).unwrap();
        let coeffs = CoefficientSet::random_constants(SystemId::G2_10, 31, 3);
        let g0 = RedGauge { lower: rat(1, 2), torus: (rat_int(2), rat_int(1)), upper: rat(-1, 3) };
        let g0bar = RedGauge { lower: rat(2, 5), torus: (rat_int(1), rat(1, 2)), upper: rat(1, 4) };
        let new = conjugate_coefficients(SystemId::G2_10, &coeffs, &rep, &g0, &g0bar).unwrap();
        assert!(new.is_exact_mode());
    }

    #[test]
    fn c32_killing_gauge_exists_generically() {
        let rep = build_raw(AlgebraId::G2, 2).unwrap();
        let coeffs = (8..)
            .map(|s| CoefficientSet::random_constants(SystemId::G2_10, s, 3))
            .find(|c| {
                !c.constant_value("c32").unwrap().is_zero()
                    && !c.constant_value("c31").unwrap().is_zero()
            })
            .unwrap();
        let (new, _, _) = gauge_to_kill_c32(&coeffs, &rep).unwrap();
        assert!(new.constant_value("c32").unwrap().is_zero());
        assert!(new.constant_value("cb32").unwrap().is_zero());
    }
}
