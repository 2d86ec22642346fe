//! Symbolic functions of a group element built from matrix-element atoms,
//! with the left/right regular actions as derivations.
//!
//! An atom is ⟨j| X⁺_{bra…} K X⁻_{ket…} |j⟩. The derivation (X⁺_q)ₗ appends
//! q to the bra word (the insertion lands next to K); (X⁻_q)ᵣ prepends q to
//! the ket word. Arbitrary expressions are differentiated structurally and
//! evaluated exactly on a concrete group element realized in both
//! fundamentals.

use std::rc::Rc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::GroupPair;
use crate::rational::{rat_int, rat_powi};

/// ⟨j| X⁺_{bra₁}… K …X⁻_{ket₁} |j⟩ with words in written order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub fund: u8,
    pub bra: Vec<u8>,
    pub ket: Vec<u8>,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Const(BigRational),
    Atom(Atom),
    Add(Rc<Expr>, Rc<Expr>),
    Mul(Rc<Expr>, Rc<Expr>),
    Div(Rc<Expr>, Rc<Expr>),
    /// Integer power, negative exponents allowed.
    Pow(Rc<Expr>, i64),
}

pub fn atom(fund: u8, bra: &[u8], ket: &[u8]) -> Expr {
    Expr::Atom(Atom { fund, bra: bra.to_vec(), ket: ket.to_vec() })
}

/// ⟨j|K|j⟩.
pub fn highest(fund: u8) -> Expr {
    atom(fund, &[], &[])
}

pub fn constant(c: BigRational) -> Expr {
    Expr::Const(c)
}

pub fn int(n: i64) -> Expr {
    Expr::Const(rat_int(n))
}

impl Expr {
    pub fn add(&self, other: &Expr) -> Expr {
        Expr::Add(Rc::new(self.clone()), Rc::new(other.clone()))
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        int(-1).mul(self)
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        Expr::Mul(Rc::new(self.clone()), Rc::new(other.clone()))
    }

    pub fn div(&self, other: &Expr) -> Expr {
        Expr::Div(Rc::new(self.clone()), Rc::new(other.clone()))
    }

    pub fn pow(&self, e: i64) -> Expr {
        Expr::Pow(Rc::new(self.clone()), e)
    }

    pub fn scale(&self, c: BigRational) -> Expr {
        constant(c).mul(self)
    }
}

/// First-order derivation on functions of the group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deriv {
    /// (X⁺_q)ₗ — left regular action by a raising generator.
    RaiseLeft(u8),
    /// (X⁻_q)ᵣ — right regular action by a lowering generator.
    LowerRight(u8),
}

impl Deriv {
    fn apply_atom(self, a: &Atom) -> Atom {
        let mut out = a.clone();
        match self {
            Deriv::RaiseLeft(q) => out.bra.push(q),
            Deriv::LowerRight(q) => out.ket.insert(0, q),
        }
        out
    }
}

/// Structural derivative of an expression under one derivation.
pub fn derive(expr: &Expr, d: Deriv) -> Expr {
    match expr {
        Expr::Const(_) => int(0),
        Expr::Atom(a) => Expr::Atom(d.apply_atom(a)),
        Expr::Add(x, y) => derive(x, d).add(&derive(y, d)),
        Expr::Mul(x, y) => derive(x, d).mul(y).add(&x.mul(&derive(y, d))),
        Expr::Div(x, y) => {
            let num = derive(x, d).mul(y).sub(&x.mul(&derive(y, d)));
            num.div(&y.mul(y))
        }
        Expr::Pow(x, e) => {
            if *e == 0 {
                int(0)
            } else {
                int(*e).mul(&x.pow(e - 1)).mul(&derive(x, d))
            }
        }
    }
}

/// Iterated left action X⁺_{w₁}(X⁺_{w₂}(…F)): rightmost letter acts first.
pub fn apply_raising_word(expr: &Expr, word: &[u8]) -> Expr {
    word.iter().rev().fold(expr.clone(), |e, &q| derive(&e, Deriv::RaiseLeft(q)))
}

/// Inserts the enveloping-algebra monomial X⁺_{w₁}…X⁺_{wₙ} directly left of
/// K: ⟨u|W K|v⟩. Letters compose left to right.
pub fn insert_left_word(expr: &Expr, word: &[u8]) -> Expr {
    word.iter().fold(expr.clone(), |e, &q| derive(&e, Deriv::RaiseLeft(q)))
}

/// Inserts the monomial X⁻_{w₁}…X⁻_{wₙ} directly right of K: ⟨u|K W|v⟩.
/// Letters compose right to left.
pub fn insert_right_word(expr: &Expr, word: &[u8]) -> Expr {
    word.iter().rev().fold(expr.clone(), |e, &q| derive(&e, Deriv::LowerRight(q)))
}

/// Inserts a sum Σ cᵢ·Wᵢ of raising monomials left of K.
pub fn insert_left_sum(expr: &Expr, terms: &[(BigRational, Vec<u8>)]) -> Expr {
    terms
        .iter()
        .map(|(c, w)| insert_left_word(expr, w).scale(c.clone()))
        .reduce(|a, b| a.add(&b))
        .unwrap_or_else(|| int(0))
}

/// Inserts a sum Σ cᵢ·Wᵢ of lowering monomials right of K.
pub fn insert_right_sum(expr: &Expr, terms: &[(BigRational, Vec<u8>)]) -> Expr {
    terms
        .iter()
        .map(|(c, w)| insert_right_word(expr, w).scale(c.clone()))
        .reduce(|a, b| a.add(&b))
        .unwrap_or_else(|| int(0))
}

/// Exact evaluation on a concrete group element.
pub fn eval(expr: &Expr, g: &GroupPair<'_>) -> Result<BigRational> {
    match expr {
        Expr::Const(c) => Ok(c.clone()),
        Expr::Atom(a) => Ok(g.matrix_element(a.fund, &a.bra, &a.ket)),
        Expr::Add(x, y) => Ok(eval(x, g)? + eval(y, g)?),
        Expr::Mul(x, y) => Ok(eval(x, g)? * eval(y, g)?),
        Expr::Div(x, y) => {
            let den = eval(y, g)?;
            if den.is_zero() {
                return Err(Error::SingularDenominator);
            }
            Ok(eval(x, g)? / den)
        }
        Expr::Pow(x, e) => {
            let base = eval(x, g)?;
            if *e < 0 && base.is_zero() {
                return Err(Error::SingularDenominator);
            }
            Ok(rat_powi(&base, *e))
        }
    }
}

// --- Named field expressions -------------------------------------------------

/// Unbarred α-word: ⟨j|K X⁻_{w₁}…X⁻_{wₙ}|j⟩ / ⟨j|K|j⟩ with j the last letter.
pub fn alpha(word: &[u8]) -> Expr {
    let j = *word.last().expect("alpha word must be nonempty");
    atom(j, &[], word).div(&highest(j))
}

/// Barred α-word: ⟨j|X⁺_{w₁}…X⁺_{wₙ} K|j⟩ / ⟨j|K|j⟩ with j the first letter.
pub fn alpha_bar(word: &[u8]) -> Expr {
    let j = word[0];
    atom(j, word, &[]).div(&highest(j))
}

/// θ_j = Π_i ⟨i|K|i⟩^{−K_{ji}} with integer exponents from the Cartan matrix.
pub fn theta(cartan: &crate::algebra::CartanMatrix, j: u8) -> Expr {
    let e1 = -cartan.entry(j, 1);
    let e2 = -cartan.entry(j, 2);
    highest(1).pow(e1).mul(&highest(2).pow(e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cartan_matrix, AlgebraId};
    use crate::group::{GaussParams, GroupPair};
    use crate::rational::rat;
    use crate::rep::FundPair;

    #[test]
    fn atoms_evaluate_to_matrix_elements() {
        let pair = FundPair::build(AlgebraId::A2).unwrap();
        let params = GaussParams::random(1, 3, 3);
        let g = GroupPair::realize(&pair, &params).unwrap();
        let e = atom(1, &[1], &[1]);
        assert_eq!(eval(&e, &g).unwrap(), g.matrix_element(1, &[1], &[1]));
    }

    #[test]
    fn derivation_of_an_atom_inserts_next_to_k() {
        let a = atom(1, &[1], &[2]);
        let d = derive(&a, Deriv::RaiseLeft(2));
        match d {
            Expr::Atom(at) => {
                assert_eq!(at.bra, vec![1, 2]);
                assert_eq!(at.ket, vec![2]);
            }
            _ => panic!("expected atom"),
        }
        let d = derive(&a, Deriv::LowerRight(1));
        match d {
            Expr::Atom(at) => assert_eq!(at.ket, vec![1, 2]),
            _ => panic!("expected atom"),
        }
    }

    #[test]
    fn leibniz_rule_on_products() {
        // D(f²) = 2 f Df for f = ⟨1|K|1⟩ under any derivation, checked by value.
        let pair = FundPair::build(AlgebraId::B2).unwrap();
        let g = GroupPair::realize(&pair, &GaussParams::random(2, 8, 3)).unwrap();
        let f = highest(1);
        let fsq = f.mul(&f);
        let d = Deriv::LowerRight(1);
        let lhs = eval(&derive(&fsq, d), &g).unwrap();
        let rhs = rat(2, 1) * eval(&f, &g).unwrap() * eval(&derive(&f, d), &g).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_rule_matches_direct_expansion() {
        let pair = FundPair::build(AlgebraId::A2).unwrap();
        let g = GroupPair::realize(&pair, &GaussParams::random(1, 21, 3)).unwrap();
        let a = alpha(&[1]);
        let d = Deriv::RaiseLeft(1);
        let lhs = eval(&derive(&a, d), &g).unwrap();
        let n = atom(1, &[], &[1]);
        let h = highest(1);
        let rhs = (eval(&derive(&n, d), &g).unwrap() * eval(&h, &g).unwrap()
            - eval(&n, &g).unwrap() * eval(&derive(&h, d), &g).unwrap())
            / (eval(&h, &g).unwrap() * eval(&h, &g).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn word_insertions_compose_in_the_documented_order() {
        let a = highest(1);
        let l = insert_left_word(&a, &[1, 2]);
        match l {
            Expr::Atom(at) => assert_eq!(at.bra, vec![1, 2]),
            _ => panic!(),
        }
        let r = insert_right_word(&a, &[1, 2]);
        match r {
            Expr::Atom(at) => assert_eq!(at.ket, vec![1, 2]),
            _ => panic!(),
        }
    }

    #[test]
    fn theta_exponents_follow_the_cartan_rows() {
        let cartan = cartan_matrix(AlgebraId::G2);
        let pair = FundPair::build(AlgebraId::G2).unwrap();
        let g = GroupPair::realize(&pair, &GaussParams::random(3, 4, 2)).unwrap();
        let t1 = eval(&theta(&cartan, 1), &g).unwrap();
        let h1 = g.highest(1);
        let h2 = g.highest(2);
        assert_eq!(t1, &h2 / (&h1 * &h1));
        let t2 = eval(&theta(&cartan, 2), &g).unwrap();
        assert_eq!(t2, &h1 * &h1 * &h1 / (&h2 * &h2));
    }

    #[test]
    fn division_by_a_vanishing_element_is_flagged() {
        let pair = FundPair::build(AlgebraId::A2).unwrap();
        let g = GroupPair::identity(&pair);
        // ⟨1|X⁺₁K|1⟩ = 0 at the identity.
        let bad = highest(1).div(&atom(1, &[1], &[]));
        assert!(matches!(eval(&bad, &g), Err(Error::SingularDenominator)));
    }
}
