//! Exact group elements in a representation: nilpotent exponentials,
//! torus elements, Gauss-factored random elements, and the matrix
//! elements ⟨bra|G|ket⟩ everything downstream consumes.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{det, Mat};
use crate::rational::{random_nonzero_rational, random_rational, rat_int, rat_powi};
use crate::rep::{FundPair, Representation};

#[derive(Debug, Clone)]
pub struct GroupElement<'a> {
    pub rep: &'a Representation,
    pub matrix: Mat<BigRational>,
}

impl<'a> GroupElement<'a> {
    pub fn identity(rep: &'a Representation) -> Self {
        Self { rep, matrix: Mat::identity(rep.dim) }
    }

    pub fn new(rep: &'a Representation, matrix: Mat<BigRational>) -> Result<Self> {
        if det(&matrix).is_zero() {
            return Err(Error::InternalInconsistency(
                "group element matrix must be invertible".into(),
            ));
        }
        Ok(Self { rep, matrix })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { rep: self.rep, matrix: self.matrix.mul(&other.matrix) }
    }
}

/// exp(M) as the terminating series Σ Mᵏ/k!, exact for nilpotent M.
pub fn exp_nilpotent_matrix(m: &Mat<BigRational>) -> Result<Mat<BigRational>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut sum = Mat::<BigRational>::identity(n);
    let mut term = Mat::<BigRational>::identity(n);
    let mut k: u64 = 0;
    loop {
        term = term.mul(m);
        k += 1;
        if term.is_zero() {
            return Ok(sum);
        }
        if k as usize > n {
            return Err(Error::NotNilpotent);
        }
        let factorial_inv = BigRational::new(1.into(), (1..=k).product::<u64>().into());
        sum = sum.add(&term.scale(&factorial_inv));
    }
}

/// exp of a nilpotent element given as a matrix, wrapped as a group element.
pub fn exp_nilpotent<'a>(rep: &'a Representation, m: &Mat<BigRational>) -> Result<GroupElement<'a>> {
    Ok(GroupElement { rep, matrix: exp_nilpotent_matrix(m)? })
}

/// Diagonal torus element with entry t₁^{w₁}·t₂^{w₂} on a basis vector of
/// weight (w₁, w₂); the exact stand-in for exponentials of the Cartan.
pub fn torus_element<'a>(
    rep: &'a Representation,
    t1: &BigRational,
    t2: &BigRational,
) -> Result<GroupElement<'a>> {
    if t1.is_zero() || t2.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let mut m = Mat::<BigRational>::zeros(rep.dim, rep.dim);
    for (k, b) in rep.basis.iter().enumerate() {
        m[(k, k)] = rat_powi(t1, b.weight[0]) * rat_powi(t2, b.weight[1]);
    }
    Ok(GroupElement { rep, matrix: m })
}

/// Reduced-word letter pattern for the unipotent factors: alternating
/// simple-root indices, as many letters as there are positive roots.
fn gauss_word(p: i64) -> Vec<u8> {
    let positive_roots = match p {
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!("p is 1, 2 or 3"),
    };
    (0..positive_roots).map(|k| if k % 2 == 0 { 1 } else { 2 }).collect()
}

/// Abstract Gauss factorization N⁻·T·N⁺: the parameters determine the same
/// group element in every representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussParams {
    pub lower: Vec<(u8, BigRational)>,
    pub torus: (BigRational, BigRational),
    pub upper: Vec<(u8, BigRational)>,
}

impl GaussParams {
    pub fn identity(p: i64) -> Self {
        let word = gauss_word(p);
        Self {
            lower: word.iter().map(|&i| (i, BigRational::zero())).collect(),
            torus: (BigRational::one(), BigRational::one()),
            upper: word.into_iter().map(|i| (i, BigRational::zero())).collect(),
        }
    }

    /// Deterministic in the seed; numerators bounded by `magnitude`.
    pub fn random(p: i64, seed: u64, magnitude: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word = gauss_word(p);
        let lower = word.iter().map(|&i| (i, random_rational(&mut rng, magnitude))).collect();
        let torus = (
            random_nonzero_rational(&mut rng, magnitude),
            random_nonzero_rational(&mut rng, magnitude),
        );
        let upper = word.iter().map(|&i| (i, random_rational(&mut rng, magnitude))).collect();
        Self { lower, torus, upper }
    }

    /// Pushes the same abstract factorization through a representation.
    pub fn realize<'a>(&self, rep: &'a Representation) -> Result<GroupElement<'a>> {
        let mut m = Mat::<BigRational>::identity(rep.dim);
        for (i, a) in &self.lower {
            m = m.mul(&exp_nilpotent_matrix(&rep.xm(*i).scale(a))?);
        }
        m = m.mul(&torus_element(rep, &self.torus.0, &self.torus.1)?.matrix);
        for (i, b) in &self.upper {
            m = m.mul(&exp_nilpotent_matrix(&rep.xp(*i).scale(b))?);
        }
        Ok(GroupElement { rep, matrix: m })
    }
}

/// Random Gauss-factored element in one representation.
pub fn gauss_factor_random<'a>(
    rep: &'a Representation,
    seed: u64,
    magnitude: u32,
) -> Result<GroupElement<'a>> {
    GaussParams::random(rep.algebra.p(), seed, magnitude).realize(rep)
}

/// The same abstract group element realized in both raw fundamentals.
pub struct GroupPair<'a> {
    pub pair: &'a FundPair,
    pub g: [Mat<BigRational>; 2],
}

impl<'a> GroupPair<'a> {
    pub fn identity(pair: &'a FundPair) -> Self {
        Self {
            pair,
            g: [Mat::identity(pair.raw(1).dim), Mat::identity(pair.raw(2).dim)],
        }
    }

    pub fn realize(pair: &'a FundPair, params: &GaussParams) -> Result<Self> {
        Ok(Self {
            pair,
            g: [params.realize(pair.raw(1))?.matrix, params.realize(pair.raw(2))?.matrix],
        })
    }

    pub fn from_matrices(pair: &'a FundPair, g1: Mat<BigRational>, g2: Mat<BigRational>) -> Self {
        Self { pair, g: [g1, g2] }
    }

    pub fn rep(&self, j: u8) -> &Representation {
        self.pair.raw(j)
    }

    pub fn matrix(&self, j: u8) -> &Mat<BigRational> {
        &self.g[usize::from(j) - 1]
    }

    /// ⟨j| X⁺_{bra…} G X⁻_{ket…} |j⟩ in the raw fundamental j.
    pub fn matrix_element(&self, j: u8, bra: &[u8], ket: &[u8]) -> BigRational {
        matrix_element_in(self.rep(j), self.matrix(j), bra, ket)
    }

    /// ⟨j|G|j⟩, the highest matrix element.
    pub fn highest(&self, j: u8) -> BigRational {
        self.matrix(j)[(0, 0)].clone()
    }
}

/// ⟨j| X⁺_{bra₁}X⁺_{bra₂}… · G · …X⁻_{ket₂}X⁻_{ket₁} |j⟩ — bra and ket words
/// in written order. Errors when a word annihilates the highest vector.
pub fn matrix_element(g: &GroupElement<'_>, bra: &[u8], ket: &[u8]) -> Result<BigRational> {
    let rep = g.rep;
    if !bra.is_empty() && rep.bra_row(bra).iter().all(Zero::is_zero) {
        return Err(Error::InvalidWord(format!("bra word {bra:?} annihilates the highest vector")));
    }
    if !ket.is_empty() && rep.ket_col(ket).iter().all(Zero::is_zero) {
        return Err(Error::InvalidWord(format!("ket word {ket:?} annihilates the highest vector")));
    }
    Ok(matrix_element_in(rep, &g.matrix, bra, ket))
}

pub fn matrix_element_in(
    rep: &Representation,
    g: &Mat<BigRational>,
    bra: &[u8],
    ket: &[u8],
) -> BigRational {
    let row = rep.bra_row(bra);
    let col = rep.ket_col(ket);
    let mut acc = BigRational::zero();
    for (r, rv) in row.iter().enumerate() {
        if rv.is_zero() {
            continue;
        }
        for (c, cv) in col.iter().enumerate() {
            if cv.is_zero() {
                continue;
            }
            acc += rv * &g[(r, c)] * cv;
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Regular action: M·G (left) or G·M (right) — the derivative surrogate.
pub fn act_regular<'a>(
    g: &GroupElement<'a>,
    generator: &Mat<BigRational>,
    side: Side,
) -> GroupElement<'a> {
    let matrix = match side {
        Side::Left => generator.mul(&g.matrix),
        Side::Right => g.matrix.mul(generator),
    };
    GroupElement { rep: g.rep, matrix }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraId;
    use crate::rational::rat;
    use crate::rep::build_raw;

    #[test]
    fn exp_zero_is_identity() {
        let rep = build_raw(AlgebraId::A2, 1).unwrap();
        let z = Mat::zeros(rep.dim, rep.dim);
        assert_eq!(exp_nilpotent_matrix(&z).unwrap(), Mat::identity(rep.dim));
    }

    #[test]
    fn exp_of_single_lowering_in_a2_is_unipotent_with_one_parameter() {
        let rep = build_raw(AlgebraId::A2, 1).unwrap();
        let t = rat(5, 7);
        // (X⁻₁)² = 0 here, so exp is I + t·X⁻₁.
        assert!(rep.xm(1).pow(2).is_zero());
        let e = exp_nilpotent_matrix(&rep.xm(1).scale(&t)).unwrap();
        assert_eq!(e, Mat::identity(3).add(&rep.xm(1).scale(&t)));
    }

    #[test]
    fn exp_series_terminates_within_dimension_for_g2() {
        let rep = build_raw(AlgebraId::G2, 1).unwrap();
        let e = exp_nilpotent_matrix(rep.xm(1)).unwrap();
        assert!(!e.is_zero());
        let full = rep.xm(1).add(rep.xm(2));
        exp_nilpotent_matrix(&full).unwrap();
    }

    #[test]
    fn exp_of_negative_is_exact_inverse() {
        let rep = build_raw(AlgebraId::G2, 1).unwrap();
        let m = rep.xm(1).scale(&rat(2, 3)).add(&rep.xm(2).scale(&rat(-1, 4)));
        let e = exp_nilpotent_matrix(&m).unwrap();
        let einv = exp_nilpotent_matrix(&m.neg()).unwrap();
        assert_eq!(e.mul(&einv), Mat::identity(rep.dim));
    }

    #[test]
    fn non_nilpotent_input_is_rejected() {
        let rep = build_raw(AlgebraId::A2, 1).unwrap();
        assert!(matches!(exp_nilpotent_matrix(rep.h(1)), Err(Error::NotNilpotent)));
    }

    #[test]
    fn torus_with_unit_parameters_is_identity() {
        let rep = build_raw(AlgebraId::B2, 2).unwrap();
        let t = torus_element(&rep, &rat_int(1), &rat_int(1)).unwrap();
        assert_eq!(t.matrix, Mat::identity(rep.dim));
        assert!(matches!(
            torus_element(&rep, &rat_int(0), &rat_int(1)),
            Err(Error::ZeroParameter)
        ));
    }

    #[test]
    fn a2_torus_diagonal_follows_the_weights() {
        let rep = build_raw(AlgebraId::A2, 2).unwrap();
        let (t1, t2) = (rat(2, 1), rat(3, 1));
        let t = torus_element(&rep, &t1, &t2).unwrap();
        // weights (0,1), (1,−1), (−1,0)
        assert_eq!(t.matrix[(0, 0)], rat(3, 1));
        assert_eq!(t.matrix[(1, 1)], rat(2, 3));
        assert_eq!(t.matrix[(2, 2)], rat(1, 2));
    }

    #[test]
    fn torus_conjugation_scales_generators_by_weight_monomials() {
        for alg in AlgebraId::ALL {
            let rep = build_raw(alg, 2).unwrap();
            let cartan = rep.cartan();
            let (t1, t2) = (rat(2, 3), rat(-5, 4));
            let t = torus_element(&rep, &t1, &t2).unwrap();
            let tinv = torus_element(&rep, &t1.recip(), &t2.recip()).unwrap();
            for i in 1u8..=2 {
                let row = cartan.row(i);
                let factor = rat_powi(&t1, row[0]) * rat_powi(&t2, row[1]);
                let conj = t.matrix.mul(rep.xp(i)).mul(&tinv.matrix);
                assert_eq!(conj, rep.xp(i).scale(&factor));
            }
        }
    }

    #[test]
    fn torus_elements_commute() {
        let rep = build_raw(AlgebraId::G2, 1).unwrap();
        let a = torus_element(&rep, &rat(2, 1), &rat(1, 3)).unwrap();
        let b = torus_element(&rep, &rat(-1, 2), &rat(7, 5)).unwrap();
        assert_eq!(a.matrix.mul(&b.matrix), b.matrix.mul(&a.matrix));
    }

    #[test]
    fn gauss_sampling_is_deterministic_and_invertible() {
        for alg in AlgebraId::ALL {
            let rep = build_raw(alg, 1).unwrap();
            let a = gauss_factor_random(&rep, 42, 3).unwrap();
            let b = gauss_factor_random(&rep, 42, 3).unwrap();
            assert_eq!(a.matrix, b.matrix);
            assert!(!det(&a.matrix).is_zero());
            let c = gauss_factor_random(&rep, 43, 3).unwrap();
            assert_ne!(a.matrix, c.matrix);
        }
    }

    #[test]
    fn magnitude_zero_gauss_element_is_identity() {
        let rep = build_raw(AlgebraId::B2, 1).unwrap();
        let g = gauss_factor_random(&rep, 7, 0).unwrap();
        assert_eq!(g.matrix, Mat::identity(rep.dim));
    }

    #[test]
    fn matrix_elements_at_identity() {
        let rep = build_raw(AlgebraId::A2, 1).unwrap();
        let id = GroupElement::identity(&rep);
        assert_eq!(matrix_element(&id, &[], &[]).unwrap(), rat_int(1));
        // ⟨j|X⁺ⱼ · 1 · X⁻ⱼ|j⟩ = ⟨j|hⱼ|j⟩ = 1.
        assert_eq!(matrix_element(&id, &[1], &[1]).unwrap(), rat_int(1));
        // A word that kills the highest vector is flagged.
        assert!(matches!(matrix_element(&id, &[], &[2]), Err(Error::InvalidWord(_))));
    }

    #[test]
    fn insertion_by_unipotent_factor_reads_off_the_parameter() {
        let rep = build_raw(AlgebraId::A2, 1).unwrap();
        let a = rat(9, 4);
        let g = exp_nilpotent(&rep, &rep.xm(1).scale(&a)).unwrap();
        // ⟨1|X⁺₁ exp(aX⁻₁)|1⟩ = a.
        assert_eq!(matrix_element(&g, &[1], &[]).unwrap(), a);
    }

    #[test]
    fn act_regular_matches_word_insertion() {
        let rep = build_raw(AlgebraId::B2, 2).unwrap();
        let g = gauss_factor_random(&rep, 5, 3).unwrap();
        let left = act_regular(&g, rep.xp(2), Side::Left);
        assert_eq!(
            matrix_element(&left, &[], &[]).unwrap(),
            matrix_element(&g, &[2], &[]).unwrap()
        );
        let right = act_regular(&g, rep.xm(2), Side::Right);
        assert_eq!(
            matrix_element(&right, &[], &[]).unwrap(),
            matrix_element(&g, &[], &[2]).unwrap()
        );
        let zero = act_regular(&g, &Mat::zeros(rep.dim, rep.dim), Side::Left);
        assert!(zero.matrix.is_zero());
    }

    #[test]
    fn inserting_identity_factors_changes_nothing() {
        let pair = FundPair::build(AlgebraId::B2).unwrap();
        let params = GaussParams::random(2, 11, 3);
        let g = GroupPair::realize(&pair, &params).unwrap();
        for j in [1u8, 2] {
            let gm = g.matrix(j);
            let with_id = gm.mul(&Mat::identity(gm.rows()));
            assert_eq!(&with_id, gm);
        }
    }
}
