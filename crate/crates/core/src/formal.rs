//! Formal sums of nested commutator words in the root generators.
//!
//! The graded operators are specified literally as bracketed expressions
//! like [X⁺₂,[X⁺₁,[X⁺₁,X⁺₂]]]; the nesting is preserved exactly, and no
//! basis renormalization of composite root vectors is applied, because the
//! derived systems' numerical factors depend on these conventions.

use num_rational::BigRational;

use crate::matrix::Mat;
use crate::rep::Representation;

/// A nested commutator expression over the generators X±ᵢ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenExpr {
    /// +i ↦ X⁺ᵢ, −i ↦ X⁻ᵢ.
    Gen(i8),
    Comm(Box<GenExpr>, Box<GenExpr>),
}

pub fn gen(letter: i8) -> GenExpr {
    assert!(matches!(letter, -2 | -1 | 1 | 2));
    GenExpr::Gen(letter)
}

pub fn comm(a: GenExpr, b: GenExpr) -> GenExpr {
    GenExpr::Comm(Box::new(a), Box::new(b))
}

impl GenExpr {
    /// Transpose: (X±ᵢ)ᵀ = X∓ᵢ, and [A,B]ᵀ = [Bᵀ,Aᵀ].
    pub fn transpose(&self) -> GenExpr {
        match self {
            GenExpr::Gen(g) => GenExpr::Gen(-g),
            GenExpr::Comm(a, b) => comm(b.transpose(), a.transpose()),
        }
    }

    pub fn eval(&self, rep: &Representation) -> Mat<BigRational> {
        match self {
            GenExpr::Gen(g) => rep.gen(*g).clone(),
            GenExpr::Comm(a, b) => a.eval(rep).commutator(&b.eval(rep)),
        }
    }
}

/// One term of a graded operator: named scalar coefficient × numeric factor
/// × bracket word.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxTerm {
    pub coeff: String,
    pub factor: BigRational,
    pub expr: GenExpr,
}

impl LaxTerm {
    pub fn new(coeff: &str, factor: BigRational, expr: GenExpr) -> Self {
        Self { coeff: coeff.into(), factor, expr }
    }
}

/// Swaps a coefficient name with its barred partner: c1 ↔ cb1, dsq ↔ dbsq.
pub fn swap_bar(name: &str) -> String {
    let mut chars: Vec<char> = name.chars().collect();
    if chars.len() >= 2 && chars[1] == 'b' {
        chars.remove(1);
    } else {
        chars.insert(1, 'b');
    }
    chars.into_iter().collect()
}

/// "Hermitian conjugation": transpose every bracket word and swap each
/// coefficient with its barred partner. An involution on formal sums.
pub fn hermitian_conjugate(terms: &[LaxTerm]) -> Vec<LaxTerm> {
    terms
        .iter()
        .map(|t| LaxTerm {
            coeff: swap_bar(&t.coeff),
            factor: t.factor.clone(),
            expr: t.expr.transpose(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraId;
    use crate::rational::rat_int;
    use crate::rep::build_raw;
    use num_traits::Zero;

    #[test]
    fn transpose_is_an_involution_and_reverses_commutators() {
        let e = comm(gen(2), comm(gen(1), gen(2)));
        assert_eq!(e.transpose().transpose(), e);
        assert_eq!(comm(gen(2), gen(1)).transpose(), comm(gen(-1), gen(-2)));
    }

    #[test]
    fn bar_swap_round_trips() {
        for name in ["c1", "cb1", "csq", "cbsq", "d4", "db4", "dsq", "dbsq", "c31", "cb32"] {
            assert_eq!(swap_bar(&swap_bar(name)), name);
        }
        assert_eq!(swap_bar("c2"), "cb2");
        assert_eq!(swap_bar("dbsq"), "dsq");
    }

    #[test]
    fn hermitian_conjugation_is_an_involution() {
        let sum = vec![
            LaxTerm::new("cb1", rat_int(1), gen(1)),
            LaxTerm::new("cb2", rat_int(1), comm(gen(2), gen(1))),
        ];
        let conj = hermitian_conjugate(&sum);
        assert_eq!(conj[0], LaxTerm::new("c1", rat_int(1), gen(-1)));
        assert_eq!(conj[1], LaxTerm::new("c2", rat_int(1), comm(gen(-1), gen(-2))));
        assert_eq!(hermitian_conjugate(&conj), sum);
    }

    #[test]
    fn evaluated_transpose_keeps_triangularity_mirrored() {
        let rep = build_raw(AlgebraId::A2, 1).unwrap();
        let e = comm(gen(2), gen(1));
        let m = e.eval(&rep);
        let mt = e.transpose().eval(&rep);
        assert!(!m.is_zero());
        assert!(!mt.is_zero());
        // Raising word is strictly upper triangular, its transpose strictly lower.
        for r in 0..rep.dim {
            for c in 0..rep.dim {
                if r >= c {
                    assert!(m[(r, c)].is_zero());
                }
                if r <= c {
                    assert!(mt[(r, c)].is_zero());
                }
            }
        }
    }
}
