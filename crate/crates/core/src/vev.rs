//! Vacuum expectation values of generator words on a highest vector,
//! computed purely from the commutation relations.
//!
//! A word is a sequence of letters `+1, +2, -1, -2` standing for the
//! generators X⁺₁, X⁺₂, X⁻₁, X⁻₂ applied to the highest vector |j⟩ in
//! written order (the rightmost letter acts first). `vev` returns
//! ⟨j| word |j⟩ with ⟨j|j⟩ = 1. This is the ground truth the matrix
//! construction in [`crate::rep`] is solved against, and it never sees
//! those matrices.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::CartanMatrix;
use crate::rational::rat_int;

pub struct VevCtx {
    cartan: CartanMatrix,
    j: u8,
    memo: HashMap<Vec<i8>, BigRational>,
}

impl VevCtx {
    pub fn new(cartan: CartanMatrix, j: u8) -> Self {
        assert!(j == 1 || j == 2);
        Self { cartan, j, memo: HashMap::new() }
    }

    /// Weight of `tail` applied to |j⟩, as (h₁, h₂) eigenvalues.
    fn tail_weight(&self, tail: &[i8]) -> [i64; 2] {
        let mut w = [0i64, 0];
        w[usize::from(self.j) - 1] = 1;
        for &g in tail {
            let row = self.cartan.row(g.unsigned_abs());
            if g > 0 {
                w[0] += row[0];
                w[1] += row[1];
            } else {
                w[0] -= row[0];
                w[1] -= row[1];
            }
        }
        w
    }

    pub fn vev(&mut self, word: &[i8]) -> BigRational {
        if word.is_empty() {
            return BigRational::one();
        }
        if let Some(v) = self.memo.get(word) {
            return v.clone();
        }
        let value = self.reduce(word);
        self.memo.insert(word.to_vec(), value.clone());
        value
    }

    fn reduce(&mut self, word: &[i8]) -> BigRational {
        // Leftmost raising letter directly followed by a lowering letter:
        // X⁺ᵢ X⁻ₘ = X⁻ₘ X⁺ᵢ + δᵢₘ hᵢ.
        for k in 0..word.len() - 1 {
            let (a, b) = (word[k], word[k + 1]);
            if a > 0 && b < 0 {
                let mut swapped = word.to_vec();
                swapped.swap(k, k + 1);
                let mut total = self.vev(&swapped);
                if a == -b {
                    let mut shortened = word.to_vec();
                    shortened.drain(k..k + 2);
                    let eig = self.tail_weight(&word[k + 2..])[usize::from(a.unsigned_abs()) - 1];
                    if eig != 0 {
                        total += rat_int(eig) * self.vev(&shortened);
                    }
                }
                return total;
            }
        }
        // No inversion left: every raising letter (if any) reaches |j⟩ and
        // kills it; a pure lowering word has zero overlap with ⟨j|.
        BigRational::zero()
    }
}
