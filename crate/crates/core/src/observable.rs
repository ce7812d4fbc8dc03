//! The observable algebra: exterior words over Hamiltonian pairs, their
//! form-valued multivector fields, and the Leibniz bracket.
//!
//! A word commutes past another letter with the sign `(-1)^{pq}` on form
//! degrees, so odd-degree letters anticommute (and square to zero) while
//! even-degree letters commute freely. Every letter carries its full
//! Hamiltonian pair, so brackets never need global state; fresh letters
//! produced by a bracket are solved on demand.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{contract, ext_d, wedge, PolyForm};
use crate::model::Model;
use crate::mstruct::{hamiltonian_pair_from_form, HamiltonianPair};
use crate::rat::{sign_pow, Rat};

pub type Letter = Arc<HamiltonianPair>;

/// A normalized wedge word: letters sorted, odd letters occurring at most
/// once.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(vec![])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total form degree of the realized word.
    pub fn form_degree(&self) -> usize {
        self.0.iter().map(|l| l.form.degree()).sum()
    }

    /// Total bracket grading: sum of `n - 1 - p_i`.
    pub fn g_degree(&self, n: usize) -> usize {
        self.0.iter().map(|l| n - 1 - l.form.degree()).sum()
    }

    /// Wedge of the letter forms in stored order.
    pub fn realize(&self, dim: usize) -> PolyForm {
        let mut acc = PolyForm::one(dim);
        for l in &self.0 {
            acc = wedge(&acc, &l.form).expect("letters share the ambient dimension");
        }
        acc
    }
}

/// Sorts letters with the graded-commutativity sign; `None` when an odd
/// letter repeats.
pub fn normalize_word(mut letters: Vec<Letter>) -> Option<(Rat, Word)> {
    let mut sign = Rat::one();
    for i in 1..letters.len() {
        let mut j = i;
        while j > 0 && letters[j - 1].cmp(&letters[j]) == Ordering::Greater {
            let p = letters[j - 1].form.degree();
            let q = letters[j].form.degree();
            sign *= sign_pow(p * q);
            letters.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in letters.windows(2) {
        if w[0] == w[1] && w[0].form.degree() % 2 == 1 {
            return None;
        }
    }
    Some((sign, Word(letters)))
}

/// Element of the exterior algebra over Hamiltonian pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable {
    pub dim: usize,
    pub n: usize,
    pub terms: BTreeMap<Word, Rat>,
}

impl Observable {
    pub fn zero(dim: usize, n: usize) -> Self {
        Observable {
            dim,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The algebra unit (empty word).
    pub fn unit(dim: usize, n: usize) -> Self {
        let mut o = Self::zero(dim, n);
        o.terms.insert(Word::empty(), Rat::one());
        o
    }

    pub fn from_pair(dim: usize, n: usize, pair: Letter) -> Self {
        let mut o = Self::zero(dim, n);
        o.terms.insert(Word(vec![pair]), Rat::one());
        o
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, letters: Vec<Letter>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let Some((sign, word)) = normalize_word(letters) else {
            return;
        };
        let v = self.terms.entry(word).or_insert_with(Rat::zero);
        *v += c * sign;
        if v.is_zero() {
            // re-borrow to remove; BTreeMap entry API cannot remove here
            let dead: Vec<Word> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(w, _)| w.clone())
                .collect();
            for w in dead {
                self.terms.remove(&w);
            }
        }
    }

    pub fn add(&self, other: &Observable) -> Observable {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.0.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Observable {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Observable) -> Observable {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Observable {
        if c.is_zero() {
            return Observable::zero(self.dim, self.n);
        }
        Observable {
            dim: self.dim,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &Observable) -> Observable {
        let mut out = Observable::zero(self.dim, self.n);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut letters = wa.0.clone();
                letters.extend(wb.0.iter().cloned());
                out.add_term(letters, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Realization as a sum of forms, one per total form degree.
    pub fn realize(&self) -> GradedForm {
        let mut out = GradedForm::zero(self.dim);
        for (w, c) in &self.terms {
            out.add_form(&w.realize(self.dim).scale(c));
        }
        out
    }

    /// Splits into sub-observables of uniform total form degree.
    pub fn form_components(&self) -> BTreeMap<usize, Observable> {
        let mut out: BTreeMap<usize, Observable> = BTreeMap::new();
        for (w, c) in &self.terms {
            let e = out
                .entry(w.form_degree())
                .or_insert_with(|| Observable::zero(self.dim, self.n));
            e.terms.insert(w.clone(), c.clone());
        }
        out
    }

    /// The g-grading when every term shares it.
    pub fn uniform_g_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.g_degree(self.n));
        let g = it.next()?;
        it.all(|x| x == g).then_some(g)
    }

    /// Total form degree when every term shares it.
    pub fn uniform_form_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.form_degree());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }
}

/// A finite sum of forms of distinct degrees.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedForm {
    pub dim: usize,
    pub parts: BTreeMap<usize, PolyForm>,
}

impl GradedForm {
    pub fn zero(dim: usize) -> Self {
        GradedForm {
            dim,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_form(f: PolyForm) -> Self {
        let mut g = GradedForm::zero(f.dim());
        g.add_form(&f);
        g
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_form(&mut self, f: &PolyForm) {
        if f.is_zero() {
            return;
        }
        match self.parts.get_mut(&f.degree()) {
            Some(p) => {
                *p = p.add(f);
                if p.is_zero() {
                    self.parts.remove(&f.degree());
                }
            }
            None => {
                self.parts.insert(f.degree(), f.clone());
            }
        }
    }

    pub fn add(&self, other: &GradedForm) -> GradedForm {
        let mut out = self.clone();
        for p in other.parts.values() {
            out.add_form(p);
        }
        out
    }

    pub fn neg(&self) -> GradedForm {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &GradedForm) -> GradedForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> GradedForm {
        if c.is_zero() {
            return GradedForm::zero(self.dim);
        }
        GradedForm {
            dim: self.dim,
            parts: self
                .parts
                .iter()
                .map(|(d, p)| (*d, p.scale(c)))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &GradedForm) -> GradedForm {
        let mut out = GradedForm::zero(self.dim);
        for a in self.parts.values() {
            for b in other.parts.values() {
                out.add_form(&wedge(a, b).expect("same ambient dimension"));
            }
        }
        out
    }

    pub fn ext_d(&self) -> GradedForm {
        let mut out = GradedForm::zero(self.dim);
        for p in self.parts.values() {
            out.add_form(&ext_d(p));
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.parts.is_empty() {
            return "0".into();
        }
        self.parts
            .values()
            .map(|p| p.render(names))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A form-valued multivector field: a sum of terms `coefficient * (prefix
/// form) ∧ (multivector)`; contraction against a form acts through the
/// multivector only: `(G ∧ X) ⌐ a := G ∧ (ι_X a)`.
#[derive(Clone, Debug)]
pub struct FormMv {
    pub dim: usize,
    pub terms: Vec<(Rat, PolyForm, crate::exterior::PolyMultivector)>,
}

impl FormMv {
    pub fn zero(dim: usize) -> Self {
        FormMv { dim, terms: vec![] }
    }

    pub fn contract_form(&self, a: &PolyForm) -> GradedForm {
        let mut out = GradedForm::zero(self.dim);
        for (c, prefix, x) in &self.terms {
            if x.degree() > a.degree() {
                continue;
            }
            let hooked = contract(x, a).expect("degree checked");
            out.add_form(&wedge(prefix, &hooked).expect("same dimension").scale(c));
        }
        out
    }

    pub fn contract(&self, a: &GradedForm) -> GradedForm {
        let mut out = GradedForm::zero(self.dim);
        for part in a.parts.values() {
            out = out.add(&self.contract_form(part));
        }
        out
    }
}

/// The form-valued multivector of one word, built by the two-term
/// recursion on the leading letter; satisfies
/// `X̌_w ⌐ omega = ext_d(realize(w))` exactly.
fn word_form_mv(dim: usize, word: &Word) -> FormMv {
    let k = word.len();
    let mut out = FormMv::zero(dim);
    let degrees: Vec<usize> = word.0.iter().map(|l| l.form.degree()).collect();
    for i in 0..k {
        let before: usize = degrees[..i].iter().sum();
        let after: usize = degrees[i + 1..].iter().sum();
        let sign = sign_pow(before) * sign_pow((degrees[i] + 1) * after);
        let mut prefix = PolyForm::one(dim);
        for (j, l) in word.0.iter().enumerate() {
            if j != i {
                prefix = wedge(&prefix, &l.form).expect("same dimension");
            }
        }
        out.terms.push((sign, prefix, word.0[i].field.clone()));
    }
    out
}

/// The form-valued multivector of an observable, with the structural
/// equation `X̌ ⌐ omega = ext_d(realization)` verified per word.
pub fn form_mv(model: &Model, obs: &Observable) -> Result<FormMv> {
    let dim = obs.dim;
    let mut out = FormMv::zero(dim);
    for (w, c) in &obs.terms {
        let mv = word_form_mv(dim, w);
        let lhs = mv.contract_form(&model.data.omega);
        let rhs = GradedForm::from_form(ext_d(&w.realize(dim)));
        if lhs.sub(&rhs).is_zero() {
            for (s, prefix, x) in mv.terms {
                out.terms.push((s * c.clone(), prefix, x));
            }
        } else {
            return Err(Error::BadGenerator(
                "structural equation fails for a word; a letter is not a valid pair".into(),
            ));
        }
    }
    Ok(out)
}

/// Leibniz bracket with the right operand given by its realization:
/// `{a, b} = (-1)^{n-r} X̌_a ⌐ ext_d(b)` summed over the uniform-degree
/// components of `a`.
pub fn leibniz_bracket_form(model: &Model, a: &Observable, b: &GradedForm) -> Result<GradedForm> {
    let mut out = GradedForm::zero(a.dim);
    let db = b.ext_d();
    for (r, comp) in a.form_components() {
        let mv = form_mv(model, &comp)?;
        out = out.add(&mv.contract(&db).scale(&sign_pow(model.n() - r)));
    }
    Ok(out)
}

/// Leibniz bracket re-expressed in the observable algebra: each term of
/// the result is a word of the left operand with one letter replaced by
/// the solved pair of its contraction against `ext_d` of the right
/// operand. The right operand must be homogeneous in form degree.
pub fn leibniz_bracket(model: &Model, a: &Observable, b: &Observable) -> Result<Observable> {
    let dim = a.dim;
    let n = model.n();
    let b_real = b.realize();
    if b_real.parts.len() > 1 {
        return Err(Error::BadGenerator(
            "right bracket operand mixes form degrees".into(),
        ));
    }
    let mut out = Observable::zero(dim, n);
    let Some(db) = b_real.parts.values().next().map(ext_d) else {
        return Ok(out); // bracket with zero
    };
    for (w, c) in &a.terms {
        // structural side check for the word
        let mv = word_form_mv(dim, w);
        let lhs = mv.contract_form(&model.data.omega);
        let rhs = GradedForm::from_form(ext_d(&w.realize(dim)));
        if !lhs.sub(&rhs).is_zero() {
            return Err(Error::BadGenerator(
                "structural equation fails for a word; a letter is not a valid pair".into(),
            ));
        }
        let prefactor = sign_pow(n - w.form_degree());
        let degrees: Vec<usize> = w.0.iter().map(|l| l.form.degree()).collect();
        for i in 0..w.len() {
            let before: usize = degrees[..i].iter().sum();
            let after: usize = degrees[i + 1..].iter().sum();
            let sign = sign_pow(before) * sign_pow((degrees[i] + 1) * after);
            let x = &w.0[i].field;
            if x.degree() > db.degree() {
                continue;
            }
            let hooked = contract(x, &db).expect("degree checked");
            if hooked.is_zero() {
                continue;
            }
            if hooked.degree() > n.saturating_sub(1) {
                return Err(Error::BadGenerator(format!(
                    "bracket letter of degree {} is outside the Hamiltonian range",
                    hooked.degree()
                )));
            }
            let pair = hamiltonian_pair_from_form(model, &hooked).map_err(|e| {
                Error::BadGenerator(format!("bracket letter is not Hamiltonian: {e}"))
            })?;
            let mut letters: Vec<Letter> =
                w.0.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, l)| l.clone())
                    .collect();
            letters.push(Arc::new(pair));
            out.add_term(letters, c.clone() * prefactor.clone() * sign);
        }
    }
    Ok(out)
}

/// Builds a single-letter pair from a rational combination of pool
/// letters of one form degree (pairs combine linearly).
pub fn combo_pair(model: &Model, parts: &[(usize, Rat)]) -> Result<HamiltonianPair> {
    if parts.is_empty() {
        return Err(Error::BadGenerator("empty combination".into()));
    }
    let deg = model.pool[parts[0].0].form_degree;
    let mut form = PolyForm::zero(model.dim(), deg);
    let mut field = crate::exterior::PolyMultivector::zero(model.dim(), model.n() - deg);
    for (j, c) in parts {
        let l = &model.pool[*j];
        if l.form_degree != deg {
            return Err(Error::BadGenerator(
                "combination mixes form degrees".into(),
            ));
        }
        form = form.add(&l.pair.form.scale(c));
        field = field.add(&l.pair.field.scale(c));
    }
    Ok(HamiltonianPair {
        form,
        field,
        solved_from_form: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_models;
    use crate::mstruct::bracket;
    use crate::rat::int;

    fn letter(model: &Model, name: &str) -> Letter {
        let l = model
            .pool
            .iter()
            .find(|l| l.name == name)
            .unwrap_or_else(|| panic!("no pool letter {name}"));
        l.pair.clone()
    }

    #[test]
    fn single_generator_bracket_matches_pair_bracket() {
        let model = test_models::symplectic_r2();
        let q = letter(&model, "q");
        let p = letter(&model, "p");
        let oq = Observable::from_pair(2, 1, q.clone());
        let op = Observable::from_pair(2, 1, p.clone());
        let via_words = leibniz_bracket_form(&model, &oq, &op.realize()).unwrap();
        let via_pairs = GradedForm::from_form(bracket(&model, &q, &p));
        assert_eq!(via_words, via_pairs);

        // and the observable-valued route realizes to the same value
        let obs = leibniz_bracket(&model, &oq, &op).unwrap();
        assert_eq!(obs.realize(), via_pairs);
    }

    #[test]
    fn odd_letters_anticommute_and_square_to_zero() {
        let model = test_models::volume_r3(2);
        let d1 = letter(&model, "d1");
        let d2 = letter(&model, "d2");
        let o1 = Observable::from_pair(3, 2, d1.clone());
        let o2 = Observable::from_pair(3, 2, d2);
        assert!(o1.wedge(&o1).is_zero());
        let ab = o1.wedge(&o2);
        let ba = o2.wedge(&o1);
        assert_eq!(ab, ba.neg());
        // realization agrees with the form wedge
        let direct = wedge(&o1.realize().parts[&1], &o2.realize().parts[&1]).unwrap();
        assert_eq!(ab.realize().parts[&2], direct);
    }

    #[test]
    fn structural_equation_for_sampled_products() {
        // X̌_{F∧G} ⌐ omega = d(F∧G) on mixed-degree pairs
        let model = test_models::volume_r3(2);
        let x = letter(&model, "x");
        let d1 = letter(&model, "d1");
        let w = Observable::from_pair(3, 2, x).wedge(&Observable::from_pair(3, 2, d1));
        let mv = form_mv(&model, &w).unwrap();
        let lhs = mv.contract_form(&model.data.omega);
        let rhs = w.realize().ext_d();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_noncommutative_on_words() {
        // {x∧d1, y} = 0 but {y, x∧d1} != 0
        let model = test_models::volume_r3(2);
        let x = Observable::from_pair(3, 2, letter(&model, "x"));
        let y = Observable::from_pair(3, 2, letter(&model, "y"));
        let d1 = Observable::from_pair(3, 2, letter(&model, "d1"));
        let a = x.wedge(&d1);
        let left = leibniz_bracket_form(&model, &a, &y.realize()).unwrap();
        let right = leibniz_bracket_form(&model, &y, &a.realize()).unwrap();
        assert!(left.is_zero());
        assert!(!right.is_zero());
    }

    #[test]
    fn unit_annihilates_brackets() {
        let model = test_models::symplectic_r2();
        let one = Observable::unit(2, 1);
        let p = Observable::from_pair(2, 1, letter(&model, "p"));
        assert!(leibniz_bracket_form(&model, &one, &p.realize())
            .unwrap()
            .is_zero());
        assert!(leibniz_bracket(&model, &p, &one).unwrap().is_zero());
    }

    #[test]
    fn combo_pairs_are_valid() {
        let model = test_models::symplectic_r4();
        let pair = combo_pair(&model, &[(0, int(2)), (2, int(-3))]).unwrap();
        assert!(crate::mstruct::pair_invariant_holds(&model, &pair));
    }
}
