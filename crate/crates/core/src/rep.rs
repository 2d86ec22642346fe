//! Fundamental representations built from the lowering orbit of the
//! highest vector, entirely in exact rational arithmetic.
//!
//! The basis consists of lowering words X⁻ᵢ₁X⁻ᵢ₂…|j⟩ ordered by word
//! length, then lexicographically. Linear dependence is decided exactly
//! through the contravariant pairing evaluated by [`crate::vev`], and the
//! generator matrices are solved from the same pairing, so every relation
//! holds exactly. The basis is declared orthonormal (⟨a|b⟩ = δ_ab with
//! bras the dual rows); the word norms are absorbed into the X⁻ entries.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{cartan_matrix, AlgebraId, CartanMatrix, GradingSpec};
use crate::error::{Error, Result};
use crate::matrix::{rank, solve, Mat};
use crate::rational::{rat_from_string, rat_int, rat_to_string};
use crate::vev::VevCtx;

/// A lowering word together with the weight of the vector it denotes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightWord {
    /// Simple-root indices, leftmost letter applied last: [i₁, i₂, …]
    /// denotes X⁻ᵢ₁X⁻ᵢ₂…|j⟩.
    pub word: Vec<u8>,
    /// (h₁, h₂) eigenvalues.
    pub weight: [i64; 2],
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub algebra: AlgebraId,
    /// User-facing fundamental label (B₂ swaps labels relative to raw).
    pub fundamental: u8,
    /// Raw highest-weight index j: hᵢ|j⟩ = δᵢⱼ|j⟩.
    raw_j: u8,
    pub dim: usize,
    pub basis: Vec<WeightWord>,
    h: [Mat<BigRational>; 2],
    xp: [Mat<BigRational>; 2],
    xm: [Mat<BigRational>; 2],
}

/// Classical dimensions keyed by the user-facing fundamental label.
pub fn classical_dims(algebra: AlgebraId) -> (usize, usize) {
    match algebra {
        AlgebraId::A2 => (3, 3),
        AlgebraId::B2 => (5, 4),
        AlgebraId::C2 => (4, 5),
        AlgebraId::G2 => (7, 14),
    }
}

fn raw_dim(algebra: AlgebraId, raw_j: u8) -> usize {
    let (d1, d2) = classical_dims(algebra);
    let (r1, r2) = if algebra.swaps_fundamental_labels() { (d2, d1) } else { (d1, d2) };
    if raw_j == 1 {
        r1
    } else {
        r2
    }
}

impl Representation {
    pub fn raw_weight_index(&self) -> u8 {
        self.raw_j
    }

    pub fn h(&self, i: u8) -> &Mat<BigRational> {
        &self.h[usize::from(i) - 1]
    }

    pub fn xp(&self, i: u8) -> &Mat<BigRational> {
        &self.xp[usize::from(i) - 1]
    }

    pub fn xm(&self, i: u8) -> &Mat<BigRational> {
        &self.xm[usize::from(i) - 1]
    }

    /// Generator matrix by signed letter: +i ↦ X⁺ᵢ, −i ↦ X⁻ᵢ.
    pub fn gen(&self, letter: i8) -> &Mat<BigRational> {
        if letter > 0 {
            self.xp(letter.unsigned_abs())
        } else {
            self.xm(letter.unsigned_abs())
        }
    }

    pub fn cartan(&self) -> CartanMatrix {
        cartan_matrix(self.algebra)
    }

    /// Row vector of the bra word ⟨j|X⁺ᵢ₁X⁺ᵢ₂… (letters in written order).
    pub fn bra_row(&self, word: &[u8]) -> Vec<BigRational> {
        let mut row = vec![BigRational::zero(); self.dim];
        row[0] = rat_int(1);
        for &i in word {
            let m = self.xp(i);
            let mut next = vec![BigRational::zero(); self.dim];
            for (k, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for (c, entry) in next.iter_mut().enumerate() {
                    *entry += v * &m[(k, c)];
                }
            }
            row = next;
        }
        row
    }

    /// Column vector of the ket word X⁻ᵢ₁X⁻ᵢ₂…|j⟩ (rightmost applied first).
    pub fn ket_col(&self, word: &[u8]) -> Vec<BigRational> {
        let mut col = vec![BigRational::zero(); self.dim];
        col[0] = rat_int(1);
        for &i in word.iter().rev() {
            let m = self.xm(i);
            let mut next = vec![BigRational::zero(); self.dim];
            for (k, v) in col.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for (r, entry) in next.iter_mut().enumerate() {
                    *entry += &m[(r, k)] * v;
                }
            }
            col = next;
        }
        col
    }
}

fn bra_letters(word: &[u8]) -> Vec<i8> {
    word.iter().rev().map(|&i| i as i8).collect()
}

fn ket_letters(word: &[u8]) -> Vec<i8> {
    word.iter().map(|&i| -(i as i8)).collect()
}

/// Contravariant pairing ⟨word_a, word_b⟩ of two lowering-word vectors.
fn pairing(ctx: &mut VevCtx, a: &[u8], b: &[u8]) -> BigRational {
    let mut w = bra_letters(a);
    w.extend(ket_letters(b));
    ctx.vev(&w)
}

/// Pairing ⟨word_a, X⁺ᵢ · word_b⟩.
fn pairing_after_raise(ctx: &mut VevCtx, a: &[u8], i: u8, b: &[u8]) -> BigRational {
    let mut w = bra_letters(a);
    w.push(i as i8);
    w.extend(ket_letters(b));
    ctx.vev(&w)
}

fn word_weight(cartan: &CartanMatrix, raw_j: u8, word: &[u8]) -> [i64; 2] {
    let mut w = [0i64, 0];
    w[usize::from(raw_j) - 1] = 1;
    for &i in word {
        let row = cartan.row(i);
        w[0] -= row[0];
        w[1] -= row[1];
    }
    w
}

/// Builds the representation with raw highest weight e_j for the algebra's
/// p value; `fundamental` is only recorded for display purposes.
fn build_raw_labeled(algebra: AlgebraId, raw_j: u8, fundamental: u8) -> Result<Representation> {
    let cartan = cartan_matrix(algebra);
    let bound = raw_dim(algebra, raw_j);
    let mut ctx = VevCtx::new(cartan.clone(), raw_j);

    let mut basis: Vec<WeightWord> = vec![WeightWord {
        word: vec![],
        weight: word_weight(&cartan, raw_j, &[]),
    }];
    let mut frontier: Vec<Vec<u8>> = vec![vec![]];

    while !frontier.is_empty() {
        let mut candidates: Vec<Vec<u8>> = Vec::new();
        for w in &frontier {
            for i in 1u8..=2 {
                let mut c = Vec::with_capacity(w.len() + 1);
                c.push(i);
                c.extend_from_slice(w);
                candidates.push(c);
            }
        }
        candidates.sort();
        candidates.dedup();

        let mut accepted: Vec<Vec<u8>> = Vec::new();
        for cand in candidates {
            let weight = word_weight(&cartan, raw_j, &cand);
            let same_weight: Vec<&WeightWord> =
                basis.iter().filter(|b| b.weight == weight).collect();
            let k = same_weight.len();
            let mut gram = Mat::<BigRational>::zeros(k + 1, k + 1);
            for (r, br) in same_weight.iter().enumerate() {
                for (c, bc) in same_weight.iter().enumerate() {
                    gram[(r, c)] = pairing(&mut ctx, &br.word, &bc.word);
                }
                gram[(r, k)] = pairing(&mut ctx, &br.word, &cand);
                gram[(k, r)] = gram[(r, k)].clone();
            }
            gram[(k, k)] = pairing(&mut ctx, &cand, &cand);
            if rank(&gram) == k + 1 {
                basis.push(WeightWord { word: cand.clone(), weight });
                accepted.push(cand);
                if basis.len() > bound {
                    return Err(Error::InternalInconsistency(format!(
                        "orbit of {algebra} raw weight {raw_j} exceeded the dimension bound {bound}"
                    )));
                }
            }
        }
        frontier = accepted;
    }

    let dim = basis.len();
    if dim != bound {
        return Err(Error::InternalInconsistency(format!(
            "orbit of {algebra} raw weight {raw_j} closed at dimension {dim}, expected {bound}"
        )));
    }

    // h matrices: diagonal on the weights.
    let mut h1 = Mat::<BigRational>::zeros(dim, dim);
    let mut h2 = Mat::<BigRational>::zeros(dim, dim);
    for (k, b) in basis.iter().enumerate() {
        h1[(k, k)] = rat_int(b.weight[0]);
        h2[(k, k)] = rat_int(b.weight[1]);
    }

    // Generator columns are solved from the pairing against the basis
    // vectors in the target weight space.
    let expand = |ctx: &mut VevCtx,
                  weight: [i64; 2],
                  inner: &dyn Fn(&mut VevCtx, &[u8]) -> BigRational|
     -> Result<Vec<(usize, BigRational)>> {
        let idx: Vec<usize> =
            (0..dim).filter(|&r| basis[r].weight == weight).collect();
        if idx.is_empty() {
            return Ok(vec![]);
        }
        let k = idx.len();
        let mut gram = Mat::<BigRational>::zeros(k, k);
        for (r, &ir) in idx.iter().enumerate() {
            for (c, &ic) in idx.iter().enumerate() {
                gram[(r, c)] = pairing(ctx, &basis[ir].word, &basis[ic].word);
            }
        }
        let rhs: Vec<BigRational> = idx.iter().map(|&ir| inner(ctx, &basis[ir].word)).collect();
        let coeffs = solve(&gram, &rhs)?;
        Ok(idx.into_iter().zip(coeffs).collect())
    };

    let mut xm = [Mat::<BigRational>::zeros(dim, dim), Mat::<BigRational>::zeros(dim, dim)];
    let mut xp = [Mat::<BigRational>::zeros(dim, dim), Mat::<BigRational>::zeros(dim, dim)];
    for i in 1u8..=2 {
        let row = cartan.row(i);
        for k in 0..dim {
            let wk = &basis[k];
            // X⁻ᵢ · (word_k): the candidate word [i] ++ word_k.
            let mut lowered = vec![i];
            lowered.extend_from_slice(&wk.word);
            let target = [wk.weight[0] - row[0], wk.weight[1] - row[1]];
            for (r, coeff) in
                expand(&mut ctx, target, &|ctx, b| pairing(ctx, b, &lowered))?
            {
                xm[usize::from(i) - 1][(r, k)] = coeff;
            }
            // X⁺ᵢ · (word_k).
            let target = [wk.weight[0] + row[0], wk.weight[1] + row[1]];
            let word_k = wk.word.clone();
            for (r, coeff) in
                expand(&mut ctx, target, &|ctx, b| pairing_after_raise(ctx, b, i, &word_k))?
            {
                xp[usize::from(i) - 1][(r, k)] = coeff;
            }
        }
    }

    Ok(Representation { algebra, fundamental, raw_j, dim, basis, h: [h1, h2], xp, xm })
}

/// Builds a fundamental representation by its user-facing label.
pub fn build_fundamental(algebra: AlgebraId, fundamental: u8) -> Result<Representation> {
    if fundamental != 1 && fundamental != 2 {
        return Err(Error::Config(format!("fundamental must be 1 or 2, got {fundamental}")));
    }
    let raw_j = algebra.raw_weight_index(fundamental);
    build_raw_labeled(algebra, raw_j, fundamental)
}

/// Builds the representation with raw highest weight e_j (hᵢ|j⟩ = δᵢⱼ|j⟩),
/// the indexing every matrix-element formula uses.
pub fn build_raw(algebra: AlgebraId, raw_j: u8) -> Result<Representation> {
    if raw_j != 1 && raw_j != 2 {
        return Err(Error::Config(format!("raw weight index must be 1 or 2, got {raw_j}")));
    }
    let fundamental = algebra.raw_weight_index(raw_j); // the swap is involutive
    build_raw_labeled(algebra, raw_j, fundamental)
}

/// Both raw fundamentals of one algebra; the unit identities relate them.
#[derive(Debug, Clone)]
pub struct FundPair {
    pub algebra: AlgebraId,
    rep: [Representation; 2],
}

impl FundPair {
    pub fn build(algebra: AlgebraId) -> Result<Self> {
        Ok(Self { algebra, rep: [build_raw(algebra, 1)?, build_raw(algebra, 2)?] })
    }

    /// Representation with raw highest weight e_j.
    pub fn raw(&self, j: u8) -> &Representation {
        &self.rep[usize::from(j) - 1]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub algebra: String,
    pub fundamental: u8,
    pub dim: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.ok).map(|c| c.name.as_str())
    }
}

/// Asserts every defining relation exactly, in rational arithmetic.
pub fn verify_relations(rep: &Representation) -> RelationReport {
    let p = rat_int(rep.algebra.p());
    let two = rat_int(2);
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool| checks.push(RelationCheck { name: name.into(), ok });

    push("[h1,h2]=0", rep.h(1).commutator(rep.h(2)).is_zero());
    push("[X+1,X-1]=h1", rep.xp(1).commutator(rep.xm(1)) == *rep.h(1));
    push("[X+2,X-2]=h2", rep.xp(2).commutator(rep.xm(2)) == *rep.h(2));
    push("[X+1,X-2]=0", rep.xp(1).commutator(rep.xm(2)).is_zero());
    push("[X+2,X-1]=0", rep.xp(2).commutator(rep.xm(1)).is_zero());
    push("[h1,X+1]=2X+1", rep.h(1).commutator(rep.xp(1)) == rep.xp(1).scale(&two));
    push("[h1,X-1]=-2X-1", rep.h(1).commutator(rep.xm(1)) == rep.xm(1).scale(&-two.clone()));
    push("[h2,X+2]=2X+2", rep.h(2).commutator(rep.xp(2)) == rep.xp(2).scale(&two));
    push("[h2,X-2]=-2X-2", rep.h(2).commutator(rep.xm(2)) == rep.xm(2).scale(&-two.clone()));
    push("[h1,X+2]=-pX+2", rep.h(1).commutator(rep.xp(2)) == rep.xp(2).scale(&-p.clone()));
    push("[h1,X-2]=pX-2", rep.h(1).commutator(rep.xm(2)) == rep.xm(2).scale(&p));
    push("[h2,X+1]=-X+1", rep.h(2).commutator(rep.xp(1)) == rep.xp(1).neg());
    push("[h2,X-1]=X-1", rep.h(2).commutator(rep.xm(1)) == *rep.xm(1));

    // Highest-vector conditions: X⁺ᵢ|j⟩ = 0 (column 0), hᵢ|j⟩ = δᵢⱼ|j⟩.
    let col_zero =
        |m: &Mat<BigRational>| (0..rep.dim).all(|r| m[(r, 0)].is_zero());
    push("X+i|j>=0", col_zero(rep.xp(1)) && col_zero(rep.xp(2)));
    let j = usize::from(rep.raw_j) - 1;
    let hw_ok = (0..2).all(|i| {
        let expect = if i == j { rat_int(1) } else { rat_int(0) };
        rep.h[i][(0, 0)] == expect
    });
    push("hi|j>=delta|j>", hw_ok);

    RelationReport {
        algebra: rep.algebra.to_string(),
        fundamental: rep.fundamental,
        dim: rep.dim,
        checks,
    }
}

/// H = Σ (K⁻¹c)ᵢ hᵢ as a diagonal matrix in the representation.
pub fn grading_matrix(rep: &Representation, grading: &GradingSpec) -> Result<Mat<BigRational>> {
    if rep.algebra != grading.algebra {
        return Err(Error::AlgebraMismatch);
    }
    Ok(rep.h(1).scale(&grading.coeffs[0]).add(&rep.h(2).scale(&grading.coeffs[1])))
}

// ---------------------------------------------------------------------------
// Persistence: exact JSON round-trip with rationals as "num/den" strings.

#[derive(Serialize, Deserialize)]
struct RepFile {
    algebra: String,
    fundamental: u8,
    dim: usize,
    basis: Vec<WeightWord>,
    h1: Vec<Vec<String>>,
    h2: Vec<Vec<String>>,
    #[serde(rename = "Xp1")]
    xp1: Vec<Vec<String>>,
    #[serde(rename = "Xp2")]
    xp2: Vec<Vec<String>>,
    #[serde(rename = "Xm1")]
    xm1: Vec<Vec<String>>,
    #[serde(rename = "Xm2")]
    xm2: Vec<Vec<String>>,
}

fn mat_to_strings(m: &Mat<BigRational>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| rat_to_string(&m[(i, j)])).collect()).collect()
}

fn mat_from_strings(rows: &[Vec<String>]) -> Result<Mat<BigRational>> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| rat_from_string(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_rows(parsed))
}

impl Representation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RepFile {
            algebra: self.algebra.to_string(),
            fundamental: self.fundamental,
            dim: self.dim,
            basis: self.basis.clone(),
            h1: mat_to_strings(self.h(1)),
            h2: mat_to_strings(self.h(2)),
            xp1: mat_to_strings(self.xp(1)),
            xp2: mat_to_strings(self.xp(2)),
            xm1: mat_to_strings(self.xm(1)),
            xm2: mat_to_strings(self.xm(2)),
        })
        .expect("representation serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let file: RepFile = serde_json::from_value(v.clone())?;
        let algebra = AlgebraId::parse(&file.algebra)?;
        let raw_j = algebra.raw_weight_index(file.fundamental);
        let rep = Representation {
            algebra,
            fundamental: file.fundamental,
            raw_j,
            dim: file.dim,
            basis: file.basis,
            h: [mat_from_strings(&file.h1)?, mat_from_strings(&file.h2)?],
            xp: [mat_from_strings(&file.xp1)?, mat_from_strings(&file.xp2)?],
            xm: [mat_from_strings(&file.xm1)?, mat_from_strings(&file.xm2)?],
        };
        if rep.basis.len() != rep.dim {
            return Err(Error::Config("basis length disagrees with dim".into()));
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grading_coeffs;
    use crate::rational::rat;

    #[test]
    fn dimensions_match_the_classical_values() {
        for (alg, f, d) in [
            (AlgebraId::A2, 1, 3),
            (AlgebraId::A2, 2, 3),
            (AlgebraId::B2, 1, 5),
            (AlgebraId::B2, 2, 4),
            (AlgebraId::C2, 1, 4),
            (AlgebraId::C2, 2, 5),
            (AlgebraId::G2, 1, 7),
            (AlgebraId::G2, 2, 14),
        ] {
            let rep = build_fundamental(alg, f).unwrap();
            assert_eq!(rep.dim, d, "{alg} fundamental {f}");
        }
    }

    #[test]
    fn a2_second_fundamental_basis_words() {
        let rep = build_fundamental(AlgebraId::A2, 2).unwrap();
        let words: Vec<Vec<u8>> = rep.basis.iter().map(|b| b.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![2], vec![1, 2]]);
        let weights: Vec<[i64; 2]> = rep.basis.iter().map(|b| b.weight).collect();
        assert_eq!(weights, vec![[0, 1], [1, -1], [-1, 0]]);
    }

    #[test]
    fn b2_first_fundamental_is_the_five_dimensional_orbit() {
        let rep = build_fundamental(AlgebraId::B2, 1).unwrap();
        assert_eq!(rep.raw_weight_index(), 2);
        let words: Vec<Vec<u8>> = rep.basis.iter().map(|b| b.word.clone()).collect();
        assert_eq!(
            words,
            vec![vec![], vec![2], vec![1, 2], vec![1, 1, 2], vec![2, 1, 1, 2]]
        );
    }

    #[test]
    fn c2_first_fundamental_basis_words() {
        let rep = build_fundamental(AlgebraId::C2, 1).unwrap();
        let words: Vec<Vec<u8>> = rep.basis.iter().map(|b| b.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![1], vec![2, 1], vec![1, 2, 1]]);
    }

    #[test]
    fn g2_seven_dimensional_basis_words() {
        let rep = build_fundamental(AlgebraId::G2, 1).unwrap();
        let words: Vec<Vec<u8>> = rep.basis.iter().map(|b| b.word.clone()).collect();
        assert_eq!(
            words,
            vec![
                vec![],
                vec![1],
                vec![2, 1],
                vec![1, 2, 1],
                vec![1, 1, 2, 1],
                vec![2, 1, 1, 2, 1],
                vec![1, 2, 1, 1, 2, 1],
            ]
        );
    }

    #[test]
    fn all_relations_hold_exactly() {
        for alg in AlgebraId::ALL {
            for f in [1u8, 2] {
                let rep = build_fundamental(alg, f).unwrap();
                let report = verify_relations(&rep);
                assert!(report.pass(), "{alg} fund {f}: {:?}", report.first_failure());
            }
        }
    }

    #[test]
    fn corrupted_rep_fails_named_relations() {
        let mut rep = build_fundamental(AlgebraId::A2, 1).unwrap();
        rep.xm[0] = Mat::zeros(rep.dim, rep.dim);
        let report = verify_relations(&rep);
        assert_eq!(report.first_failure(), Some("[X+1,X-1]=h1"));

        // A2 matrices relabeled as G2 violate the p-dependent relation.
        let mut fake = build_fundamental(AlgebraId::A2, 1).unwrap();
        fake.algebra = AlgebraId::G2;
        let report = verify_relations(&fake);
        assert!(!report.pass());
        assert!(report.checks.iter().any(|c| c.name == "[h1,X+2]=-pX+2" && !c.ok));
    }

    #[test]
    fn raising_is_strictly_upper_and_lowering_strictly_lower() {
        for alg in AlgebraId::ALL {
            let rep = build_raw(alg, 2).unwrap();
            for i in 1u8..=2 {
                for r in 0..rep.dim {
                    for c in 0..rep.dim {
                        if r >= c {
                            assert!(rep.xp(i)[(r, c)].is_zero());
                        }
                        if r <= c {
                            assert!(rep.xm(i)[(r, c)].is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generators_are_nilpotent_and_h_traceless() {
        for alg in AlgebraId::ALL {
            for j in [1u8, 2] {
                let rep = build_raw(alg, j).unwrap();
                for i in 1u8..=2 {
                    assert!(rep.xp(i).pow(rep.dim).is_zero());
                    assert!(rep.xm(i).pow(rep.dim).is_zero());
                    let trace = (0..rep.dim)
                        .map(|k| rep.h(i)[(k, k)].clone())
                        .fold(BigRational::zero(), |a, b| a + b);
                    assert!(trace.is_zero());
                }
            }
        }
    }

    #[test]
    fn weight_additivity_under_lowering() {
        let rep = build_raw(AlgebraId::G2, 1).unwrap();
        let cartan = rep.cartan();
        for i in 1u8..=2 {
            let row = cartan.row(i);
            for c in 0..rep.dim {
                for r in 0..rep.dim {
                    if rep.xm(i)[(r, c)].is_zero() {
                        continue;
                    }
                    let wc = rep.basis[c].weight;
                    let wr = rep.basis[r].weight;
                    assert_eq!([wc[0] - row[0], wc[1] - row[1]], wr);
                }
            }
        }
    }

    #[test]
    fn grading_matrix_scales_generators_by_their_grade() {
        for alg in AlgebraId::ALL {
            let cartan = cartan_matrix(alg);
            for c in [[1u8, 0], [0, 1], [1, 1], [0, 0]] {
                let grading = grading_coeffs(&cartan, c);
                for j in [1u8, 2] {
                    let rep = build_raw(alg, j).unwrap();
                    let h = grading_matrix(&rep, &grading).unwrap();
                    for i in 1u8..=2 {
                        let g = rat_int(grading.grade_of_root(i));
                        assert_eq!(h.commutator(rep.xp(i)), rep.xp(i).scale(&g));
                        assert_eq!(h.commutator(rep.xm(i)), rep.xm(i).scale(&-g));
                    }
                }
            }
        }
    }

    #[test]
    fn a2_grading_10_annihilates_root_two() {
        let cartan = cartan_matrix(AlgebraId::A2);
        let grading = grading_coeffs(&cartan, [1, 0]);
        let rep = build_raw(AlgebraId::A2, 1).unwrap();
        let h = grading_matrix(&rep, &grading).unwrap();
        assert_eq!(h.commutator(rep.xp(1)), *rep.xp(1));
        assert!(h.commutator(rep.xp(2)).is_zero());
    }

    #[test]
    fn b2_grading_10_operator_is_h1_plus_h2() {
        let cartan = cartan_matrix(AlgebraId::B2);
        let grading = grading_coeffs(&cartan, [1, 0]);
        let rep = build_raw(AlgebraId::B2, 1).unwrap();
        let h = grading_matrix(&rep, &grading).unwrap();
        assert_eq!(h, rep.h(1).add(rep.h(2)));
    }

    #[test]
    fn grading_mismatch_is_rejected() {
        let cartan = cartan_matrix(AlgebraId::B2);
        let grading = grading_coeffs(&cartan, [1, 0]);
        let rep = build_raw(AlgebraId::G2, 1).unwrap();
        assert!(matches!(grading_matrix(&rep, &grading), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let rep = build_fundamental(AlgebraId::C2, 1).unwrap();
        let v = rep.to_json();
        let back = Representation::from_json(&v).unwrap();
        assert_eq!(v, back.to_json());
        assert_eq!(rep.basis, back.basis);
        for i in 1u8..=2 {
            assert_eq!(rep.xp(i), back.xp(i));
            assert_eq!(rep.xm(i), back.xm(i));
            assert_eq!(rep.h(i), back.h(i));
        }
    }

    #[test]
    fn shapovalov_norms_show_up_in_lowering_entries() {
        // The 5-dim rep's X⁻₁ picks up the norm 2 of X⁻₁X⁻₂|2⟩ when the
        // basis is declared orthonormal.
        let rep = build_raw(AlgebraId::B2, 2).unwrap();
        let col = rep.ket_col(&[1, 2]);
        let braxp = rep.bra_row(&[2, 1]);
        let dot = braxp
            .iter()
            .zip(&col)
            .map(|(a, b)| a * b)
            .fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(dot, rat(2, 1));
    }
}
