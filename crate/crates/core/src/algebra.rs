//! Cartan data and gradings for the four rank-2 algebras.
//!
//! Conventions: the Cartan matrix is fixed as K₁₁ = K₂₂ = 2, K₁₂ = −1,
//! K₂₁ = −p with p = 1, 2, 3 for A₂, B₂/C₂, G₂, so that the commutation
//! relations read [hᵢ, X±ⱼ] = ±K_{j,i} X±ⱼ. B₂ and C₂ share p = 2 and
//! differ only in which fundamental representation is called "first".

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{inverse, Mat};
use crate::rational::rat_int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraId {
    A2,
    B2,
    C2,
    G2,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 4] = [AlgebraId::A2, AlgebraId::B2, AlgebraId::C2, AlgebraId::G2];

    /// The off-diagonal parameter: K₂₁ = −p.
    pub fn p(self) -> i64 {
        match self {
            AlgebraId::A2 => 1,
            AlgebraId::B2 | AlgebraId::C2 => 2,
            AlgebraId::G2 => 3,
        }
    }

    /// B₂ names its fundamentals in the opposite order to the raw highest
    /// weights of the shared p = 2 algebra.
    pub fn swaps_fundamental_labels(self) -> bool {
        matches!(self, AlgebraId::B2)
    }

    /// Maps a user-facing fundamental label to the raw highest-weight index
    /// j (hᵢ|j⟩ = δᵢⱼ|j⟩) actually used in all matrix-element formulas.
    pub fn raw_weight_index(self, fundamental: u8) -> u8 {
        assert!(fundamental == 1 || fundamental == 2);
        if self.swaps_fundamental_labels() {
            3 - fundamental
        } else {
            fundamental
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A2" => Ok(AlgebraId::A2),
            "B2" => Ok(AlgebraId::B2),
            "C2" => Ok(AlgebraId::C2),
            "G2" => Ok(AlgebraId::G2),
            other => Err(Error::Config(format!("unknown algebra `{other}`"))),
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraId::A2 => "A2",
            AlgebraId::B2 => "B2",
            AlgebraId::C2 => "C2",
            AlgebraId::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// 2×2 Cartan matrix together with its exact inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanMatrix {
    pub algebra: AlgebraId,
    entries: [[i64; 2]; 2],
    inverse: Mat<BigRational>,
}

impl CartanMatrix {
    /// Entry K_{ij}; indices are 1-based to match the generator labels.
    pub fn entry(&self, i: u8, j: u8) -> i64 {
        self.entries[usize::from(i) - 1][usize::from(j) - 1]
    }

    /// Row K_{i,·} — the weight shift of a lowering by simple root i.
    pub fn row(&self, i: u8) -> [i64; 2] {
        self.entries[usize::from(i) - 1]
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.entries
    }

    pub fn inverse(&self) -> &Mat<BigRational> {
        &self.inverse
    }

    pub fn as_mat(&self) -> Mat<BigRational> {
        Mat::from_rows(
            self.entries.iter().map(|r| r.iter().map(|&e| rat_int(e)).collect()).collect(),
        )
    }
}

/// Cartan matrix for the given algebra: [[2, −1], [−p, 2]] and its inverse.
pub fn cartan_matrix(algebra: AlgebraId) -> CartanMatrix {
    let p = algebra.p();
    let entries = [[2, -1], [-p, 2]];
    let m = Mat::from_rows(vec![
        vec![rat_int(2), rat_int(-1)],
        vec![rat_int(-p), rat_int(2)],
    ]);
    let inv = inverse(&m).expect("rank-2 Cartan matrices are invertible (det = 4 - p > 0)");
    CartanMatrix { algebra, entries, inverse: inv }
}

/// A choice of 0/1 grades on the two simple roots, with the coefficients
/// K⁻¹c of the grading operator H = Σ (K⁻¹c)ᵢ hᵢ.
#[derive(Debug, Clone, PartialEq)]
pub struct GradingSpec {
    pub algebra: AlgebraId,
    pub c: [u8; 2],
    pub coeffs: [BigRational; 2],
}

impl GradingSpec {
    /// Grade carried by simple root i (0 or 1).
    pub fn grade_of_root(&self, i: u8) -> i64 {
        i64::from(self.c[usize::from(i) - 1])
    }

    /// Black roots carry grade 1.
    pub fn is_black(&self, i: u8) -> bool {
        self.c[usize::from(i) - 1] == 1
    }

    /// Red roots carry grade 0 and span the nonabelian zero-grade subalgebra.
    pub fn red_roots(&self) -> Vec<u8> {
        (1u8..=2).filter(|&i| !self.is_black(i)).collect()
    }
}

/// Solves K·coeffs = c exactly. Accepts any 0/1 column.
pub fn grading_coeffs(cartan: &CartanMatrix, c: [u8; 2]) -> GradingSpec {
    assert!(c.iter().all(|&x| x <= 1), "grades must be 0 or 1");
    let inv = cartan.inverse();
    let col = [rat_int(i64::from(c[0])), rat_int(i64::from(c[1]))];
    let coeffs = [
        &inv[(0, 0)] * &col[0] + &inv[(0, 1)] * &col[1],
        &inv[(1, 0)] * &col[0] + &inv[(1, 1)] * &col[1],
    ];
    GradingSpec { algebra: cartan.algebra, c, coeffs }
}
