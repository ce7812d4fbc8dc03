//! Finite-dimensional coordinate spaces of forms, and the closed subspace
//! of a truncated graded piece.
//!
//! A [`FormSpace`] fixes an ordered basis of all `(index word, monomial)`
//! pairs of a given form degree with coefficient degree at most a bound, so
//! forms become exact rational vectors and subspace arithmetic applies.

use std::collections::BTreeMap;

use crate::exterior::{ext_d, PolyForm, Terms, TermKey};
use crate::linalg::Subspace;
use crate::mono::{monomials_of_degree, Mono};
use crate::rat::Rat;
use num_traits::Zero;

/// Ordered coordinate basis for forms of one degree, coefficient degree
/// bounded.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub dim: usize,
    pub degree: usize,
    pub max_coeff_deg: u32,
    pub basis: Vec<TermKey>,
    pub index: BTreeMap<TermKey, usize>,
}

/// All strictly increasing index words of length `k` over `0..dim`.
pub fn index_words(dim: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(k);
    fn rec(dim: usize, k: usize, start: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim as u8 {
            cur.push(i);
            rec(dim, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(dim, k, 0, &mut cur, &mut out);
    out
}

impl FormSpace {
    pub fn new(dim: usize, degree: usize, max_coeff_deg: u32) -> Self {
        let mut basis = Vec::new();
        for idx in index_words(dim, degree) {
            for d in 0..=max_coeff_deg {
                for mono in monomials_of_degree(dim, d) {
                    basis.push(TermKey {
                        idx: idx.clone(),
                        mono,
                    });
                }
            }
        }
        basis.sort();
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        FormSpace {
            dim,
            degree,
            max_coeff_deg,
            basis,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of a form; `None` when a term falls outside this space.
    pub fn to_vec(&self, f: &PolyForm) -> Option<Vec<Rat>> {
        if f.degree() != self.degree && !f.is_zero() {
            return None;
        }
        let mut v = vec![Rat::zero(); self.len()];
        for (k, c) in &f.0.map {
            let i = self.index.get(k)?;
            v[*i] = c.clone();
        }
        Some(v)
    }

    pub fn from_vec(&self, v: &[Rat]) -> PolyForm {
        let mut t = Terms::zero(self.dim, self.degree);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let k = &self.basis[i];
                t.add_term(k.idx.clone(), k.mono.clone(), c.clone());
            }
        }
        PolyForm(t)
    }

    /// The closed forms inside this space as a subspace.
    ///
    /// For degree >= 1 every closed polynomial form on the patch is exact,
    /// so the subspace is spanned by exterior derivatives of one degree
    /// lower; for degree 0 it is the constants.
    pub fn closed_subspace(&self) -> Subspace {
        if self.degree == 0 {
            let one = TermKey {
                idx: vec![],
                mono: Mono::one(self.dim),
            };
            let mut row = vec![Rat::zero(); self.len()];
            if let Some(&i) = self.index.get(&one) {
                row[i] = Rat::from_integer(1.into());
                return Subspace::from_spanning(self.len(), vec![row]);
            }
            return Subspace::from_spanning(self.len(), vec![]);
        }
        let lower = FormSpace::new(self.dim, self.degree - 1, self.max_coeff_deg + 1);
        let mut spanning = Vec::new();
        for key in &lower.basis {
            let mut t = Terms::zero(self.dim, self.degree - 1);
            t.add_term(key.idx.clone(), key.mono.clone(), Rat::from_integer(1.into()));
            let d = ext_d(&PolyForm(t));
            if d.is_zero() {
                continue;
            }
            if let Some(v) = self.to_vec(&d) {
                spanning.push(v);
            }
        }
        Subspace::from_spanning(self.len(), spanning)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono::binomial;

    #[test]
    fn basis_counts() {
        // 1-forms on R^3 with coeff degree <= 1: 3 words x (1 + 3) monos
        let s = FormSpace::new(3, 1, 1);
        assert_eq!(s.len(), 12);
        let s2 = FormSpace::new(4, 2, 0);
        assert_eq!(s2.len(), binomial(4, 2) as usize);
    }

    #[test]
    fn closed_one_forms_on_r3() {
        // coeff degree <= 1: closed = d(quadratics + linears) = 3 + 6 dims
        let s = FormSpace::new(3, 1, 1);
        let c = s.closed_subspace();
        assert_eq!(c.dim(), 9);
        // y dz + z dy is closed, y dz is not
        let y_dz = crate::exterior::wedge(
            &PolyForm::coord(3, 1),
            &PolyForm::d_coord(3, 2),
        )
        .unwrap();
        let z_dy = crate::exterior::wedge(
            &PolyForm::coord(3, 2),
            &PolyForm::d_coord(3, 1),
        )
        .unwrap();
        let sym = y_dz.add(&z_dy);
        assert!(c.contains(&s.to_vec(&sym).unwrap()));
        assert!(!c.contains(&s.to_vec(&y_dz).unwrap()));
    }

    #[test]
    fn closed_zero_forms_are_constants() {
        let s = FormSpace::new(2, 0, 2);
        let c = s.closed_subspace();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&s.to_vec(&PolyForm::one(2)).unwrap()));
        assert!(!c.contains(&s.to_vec(&PolyForm::coord(2, 0)).unwrap()));
    }
}
