//! Exterior calculus with exact rational polynomial coefficients on a single
//! coordinate patch of dimension `N`.
//!
//! [`PolyForm`] is a differential k-form, [`PolyMultivector`] a k-vector
//! field; both are sparse sums of `coefficient * monomial * basis-word`
//! terms over strictly increasing index tuples. All operations are pure and
//! exact; values are immutable once built.
//!
//! Canonical text rendering (used by reports and golden files):
//!
//! ```text
//! form        := "0" | term (" + " term | " - " term)*
//! term        := scalar ["*" monomial] [" " basis]
//! scalar      := integer | integer "/" integer      (leading term may carry "-")
//! monomial    := var ["^" power] ("*" var ["^" power])*
//! basis       := "d" var ("^d" var)*                 (forms)
//!              | "@" var ("^@" var)*                 (multivector fields)
//! ```
//!
//! Terms are listed with index tuples ascending, then monomials in
//! graded-lex order. A degree-0 value has no basis part.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mono::{d_mono, Mono};
use crate::rat::{render_rat, sign_pow, Rat};

/// Basis word: strictly increasing tuple of coordinate indices.
pub type IdxTuple = Vec<u8>;

/// Term key: `(basis word, monomial)`, ordered for canonical rendering.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermKey {
    pub idx: IdxTuple,
    pub mono: Mono,
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.idx
            .cmp(&other.idx)
            .then_with(|| self.mono.cmp(&other.mono))
    }
}

/// Shared sparse container behind forms and multivectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Terms {
    pub dim: usize,
    pub degree: usize,
    pub map: BTreeMap<TermKey, Rat>,
}

impl Terms {
    pub fn zero(dim: usize, degree: usize) -> Self {
        // degree > dim is allowed and names the zero space
        Terms {
            dim,
            degree,
            map: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    /// Adds `c * mono * basis(idx)`; the tuple must be strictly increasing.
    pub fn add_term(&mut self, idx: IdxTuple, mono: Mono, c: Rat) {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(idx.len(), self.degree);
        debug_assert_eq!(mono.0.len(), self.dim);
        if c.is_zero() {
            return;
        }
        let key = TermKey { idx, mono };
        let entry = self.map.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds an arbitrary (possibly unsorted, possibly repeating) index word
    /// with the sign of the sorting permutation.
    pub fn add_word(&mut self, word: &[u8], mono: Mono, c: Rat) {
        if let Some((sign, sorted)) = sort_word(word) {
            self.add_term(sorted, mono, c * sign);
        }
    }

    pub fn add_assign(&mut self, other: &Terms) {
        debug_assert_eq!(self.dim, other.dim);
        debug_assert_eq!(self.degree, other.degree);
        for (k, v) in &other.map {
            self.add_term(k.idx.clone(), k.mono.clone(), v.clone());
        }
    }

    pub fn scale(&self, c: &Rat) -> Terms {
        if c.is_zero() {
            return Terms::zero(self.dim, self.degree);
        }
        Terms {
            dim: self.dim,
            degree: self.degree,
            map: self
                .map
                .iter()
                .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> Terms {
        self.scale(&-Rat::one())
    }

    /// Wedge of the underlying alternating tensors.
    pub fn wedge(&self, other: &Terms) -> Result<Terms> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let degree = self.degree + other.degree;
        let mut out = Terms::zero(self.dim, degree);
        if degree > self.dim {
            return Ok(out);
        }
        for (ka, ca) in &self.map {
            for (kb, cb) in &other.map {
                if let Some((sign, idx)) = merge_words(&ka.idx, &kb.idx) {
                    out.add_term(idx, ka.mono.mul(&kb.mono), ca.clone() * cb.clone() * sign);
                }
            }
        }
        Ok(out)
    }

    /// Maximum total degree among coefficient monomials (`None` when zero).
    pub fn coeff_degree(&self) -> Option<u32> {
        self.map.keys().map(|k| k.mono.degree()).max()
    }

    /// True when every monomial has the same total degree.
    pub fn is_coeff_homogeneous(&self) -> bool {
        let mut degs = self.map.keys().map(|k| k.mono.degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    /// The sub-sum whose coefficient monomials have total degree `d`.
    pub fn coeff_component(&self, d: u32) -> Terms {
        Terms {
            dim: self.dim,
            degree: self.degree,
            map: self
                .map
                .iter()
                .filter(|(k, _)| k.mono.degree() == d)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn render(&self, names: &[String], basis_prefix: &str) -> String {
        if self.map.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.map.iter().enumerate() {
            let neg = crate::rat::is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut piece = String::new();
            let coeff_is_one = mag.is_one();
            if !coeff_is_one || (k.mono.is_one() && k.idx.is_empty()) {
                piece.push_str(&render_rat(&mag));
            }
            if !k.mono.is_one() {
                if !piece.is_empty() {
                    piece.push('*');
                }
                piece.push_str(&k.mono.render(names));
            }
            if !k.idx.is_empty() {
                let basis: Vec<String> = k
                    .idx
                    .iter()
                    .map(|&i| format!("{basis_prefix}{}", names[i as usize]))
                    .collect();
                if !piece.is_empty() {
                    piece.push(' ');
                }
                piece.push_str(&basis.join("^"));
            }
            out.push_str(&piece);
        }
        out
    }
}

/// Sorts a basis word, returning the permutation sign, or `None` when an
/// index repeats.
pub fn sort_word(word: &[u8]) -> Option<(Rat, IdxTuple)> {
    let mut w = word.to_vec();
    let mut swaps = 0usize;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((sign_pow(swaps), w))
}

/// Merges two strictly increasing words; `None` on a common index.
pub fn merge_words(a: &[u8], b: &[u8]) -> Option<(Rat, IdxTuple)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut swaps = 0usize;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                // b[j] jumps over the remaining a-entries
                swaps += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((sign_pow(swaps), out))
}

/// Differential form with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyForm(pub Terms);

/// Multivector field with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyMultivector(pub Terms);

impl PolyForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PolyForm(Terms::zero(dim, degree))
    }

    /// The constant function 1 as a 0-form.
    pub fn one(dim: usize) -> Self {
        let mut t = Terms::zero(dim, 0);
        t.add_term(vec![], Mono::one(dim), Rat::one());
        PolyForm(t)
    }

    /// The coordinate function `x_i` as a 0-form.
    pub fn coord(dim: usize, i: usize) -> Self {
        let mut t = Terms::zero(dim, 0);
        t.add_term(vec![], Mono::var(dim, i), Rat::one());
        PolyForm(t)
    }

    /// The constant 1-form `dx_i`.
    pub fn d_coord(dim: usize, i: usize) -> Self {
        let mut t = Terms::zero(dim, 1);
        t.add_term(vec![i as u8], Mono::one(dim), Rat::one());
        PolyForm(t)
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, c: &Rat) -> PolyForm {
        PolyForm(self.0.scale(c))
    }

    pub fn neg(&self) -> PolyForm {
        PolyForm(self.0.neg())
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        let mut t = self.0.clone();
        t.add_assign(&other.0);
        PolyForm(t)
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn render(&self, names: &[String]) -> String {
        self.0.render(names, "d")
    }

    /// Evaluates the form at `point` against `degree` constant vectors.
    pub fn eval(&self, point: &[Rat], vectors: &[Vec<Rat>]) -> Rat {
        assert_eq!(vectors.len(), self.degree());
        let mut acc = Rat::zero();
        for (k, c) in &self.0.map {
            let det = alt_det(&k.idx, vectors);
            acc += c.clone() * k.mono.eval(point) * det;
        }
        acc
    }
}

impl PolyMultivector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PolyMultivector(Terms::zero(dim, degree))
    }

    /// The constant coordinate vector field `@x_i`.
    pub fn coord_vector(dim: usize, i: usize) -> Self {
        let mut t = Terms::zero(dim, 1);
        t.add_term(vec![i as u8], Mono::one(dim), Rat::one());
        PolyMultivector(t)
    }

    /// Basis multivector `@x_{i1} ^ ... ^ @x_{ik}` for an increasing tuple.
    pub fn basis(dim: usize, idx: &[u8]) -> Self {
        let mut t = Terms::zero(dim, idx.len());
        t.add_term(idx.to_vec(), Mono::one(dim), Rat::one());
        PolyMultivector(t)
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, c: &Rat) -> PolyMultivector {
        PolyMultivector(self.0.scale(c))
    }

    pub fn neg(&self) -> PolyMultivector {
        PolyMultivector(self.0.neg())
    }

    pub fn add(&self, other: &PolyMultivector) -> PolyMultivector {
        let mut t = self.0.clone();
        t.add_assign(&other.0);
        PolyMultivector(t)
    }

    pub fn sub(&self, other: &PolyMultivector) -> PolyMultivector {
        self.add(&other.neg())
    }

    pub fn render(&self, names: &[String]) -> String {
        self.0.render(names, "@")
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.0.dim).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl fmt::Display for PolyMultivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.0.dim).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Determinant of the submatrix of `vectors` picked by the index tuple.
fn alt_det(idx: &[u8], vectors: &[Vec<Rat>]) -> Rat {
    let k = idx.len();
    if k == 0 {
        return Rat::one();
    }
    // Laplace expansion over permutations; k is tiny here.
    let mut perm: Vec<usize> = (0..k).collect();
    let mut acc = Rat::zero();
    permute(&mut perm, 0, &mut |p, sign| {
        let mut prod = Rat::one();
        for (row, &col) in p.iter().enumerate() {
            prod *= vectors[row][idx[col] as usize].clone();
        }
        acc += prod * sign_pow(sign);
    });
    acc
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn rec(perm: &mut Vec<usize>, k: usize, swaps: usize, f: &mut impl FnMut(&[usize], usize)) {
        if k == perm.len() {
            f(perm, swaps);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(perm, k + 1, swaps + usize::from(i != k), f);
            perm.swap(k, i);
        }
    }
    rec(perm, k, 0, f);
}

/// Exterior product of two forms.
///
/// Bilinear, graded-commutative: `wedge(a, b) = (-1)^{|a||b|} wedge(b, a)`.
pub fn wedge(a: &PolyForm, b: &PolyForm) -> Result<PolyForm> {
    Ok(PolyForm(a.0.wedge(&b.0)?))
}

/// Exterior product of two multivector fields.
pub fn mv_wedge(a: &PolyMultivector, b: &PolyMultivector) -> Result<PolyMultivector> {
    Ok(PolyMultivector(a.0.wedge(&b.0)?))
}

/// Exterior derivative.
pub fn ext_d(a: &PolyForm) -> PolyForm {
    let dim = a.dim();
    let mut out = Terms::zero(dim, a.degree() + 1);
    for (k, c) in &a.0.map {
        for j in 0..dim {
            if let Some((dc, m)) = d_mono(&k.mono, j) {
                // dx_j wedged in front of the basis word
                if k.idx.contains(&(j as u8)) {
                    continue;
                }
                let pos = k.idx.iter().filter(|&&i| (i as usize) < j).count();
                let mut idx = k.idx.clone();
                idx.insert(pos, j as u8);
                out.add_term(idx, m, c.clone() * dc * sign_pow(pos));
            }
        }
    }
    PolyForm(out)
}

/// Interior product of a single coefficient-times-basis vector into a form.
fn hook_basis_vector(j: u8, a: &Terms) -> Terms {
    let mut out = Terms::zero(a.dim, a.degree - 1);
    for (k, c) in &a.map {
        if let Some(pos) = k.idx.iter().position(|&i| i == j) {
            let mut idx = k.idx.clone();
            idx.remove(pos);
            out.add_term(idx, k.mono.clone(), c.clone() * sign_pow(pos));
        }
    }
    out
}

/// Interior product (hook) `X ⌐ a`.
///
/// For a decomposable `X = X_1 ∧ ... ∧ X_k` this is the iterated
/// single-vector contraction applied innermost first:
/// `ι_X = ι_{X_k} ∘ ... ∘ ι_{X_1}`.
pub fn contract(x: &PolyMultivector, a: &PolyForm) -> Result<PolyForm> {
    if x.dim() != a.dim() {
        return Err(Error::DimensionMismatch(x.dim(), a.dim()));
    }
    if x.degree() > a.degree() {
        return Err(Error::ContractionDegree {
            multivector: x.degree(),
            form: a.degree(),
        });
    }
    let dim = a.dim();
    let mut out = Terms::zero(dim, a.degree() - x.degree());
    for (kx, cx) in &x.0.map {
        // apply the basis vectors of kx.idx left to right
        let mut cur = a.0.clone();
        for &j in &kx.idx {
            cur = hook_basis_vector(j, &cur);
            if cur.is_zero() {
                break;
            }
        }
        if cur.is_zero() {
            continue;
        }
        for (k, c) in &cur.map {
            out.add_term(
                k.idx.clone(),
                k.mono.mul(&kx.mono),
                c.clone() * cx.clone(),
            );
        }
    }
    Ok(PolyForm(out))
}

/// Lie derivative of a form along a vector field, by the Cartan formula
/// `ℒ_X = d ∘ ι_X + ι_X ∘ d`.
pub fn lie_derivative(x: &PolyMultivector, a: &PolyForm) -> Result<PolyForm> {
    if x.degree() != 1 {
        return Err(Error::NotAVectorField(x.degree()));
    }
    let d_ix = if a.degree() >= 1 {
        ext_d(&contract(x, a)?)
    } else {
        PolyForm::zero(a.dim(), 1)
    };
    let ix_d = contract(x, &ext_d(a))?;
    Ok(d_ix.add(&ix_d))
}

/// Lie bracket of two vector fields.
pub fn vf_bracket(x: &PolyMultivector, y: &PolyMultivector) -> Result<PolyMultivector> {
    if x.degree() != 1 || y.degree() != 1 {
        return Err(Error::NotAVectorField(x.degree().max(y.degree())));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let dim = x.dim();
    let mut out = Terms::zero(dim, 1);
    // [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i
    for (kx, cx) in &x.0.map {
        let j = kx.idx[0] as usize;
        for (ky, cy) in &y.0.map {
            if let Some((dc, m)) = d_mono(&ky.mono, j) {
                out.add_term(
                    ky.idx.clone(),
                    m.mul(&kx.mono),
                    cx.clone() * cy.clone() * dc,
                );
            }
        }
    }
    for (ky, cy) in &y.0.map {
        let j = ky.idx[0] as usize;
        for (kx, cx) in &x.0.map {
            if let Some((dc, m)) = d_mono(&kx.mono, j) {
                out.add_term(
                    kx.idx.clone(),
                    m.mul(&ky.mono),
                    -(cx.clone() * cy.clone() * dc),
                );
            }
        }
    }
    Ok(PolyMultivector(out))
}

/// Canonical primitive of a closed form via the radial homotopy operator.
///
/// On a term of form degree `k >= 1` and coefficient degree `m` the operator
/// is `ι_E / (k + m)` where `E = Σ x_i @x_i` is the Euler field; for closed
/// input `a` it returns `b` with `ext_d(b) = a`, deterministically.
pub fn poincare_primitive(a: &PolyForm) -> Result<PolyForm> {
    if a.degree() < 1 {
        return Err(Error::NotClosed("degree-0 input has no primitive".into()));
    }
    if !ext_d(a).is_zero() {
        return Err(Error::NotClosed(format!(
            "input of degree {} is not closed",
            a.degree()
        )));
    }
    let dim = a.dim();
    let k = a.degree() as u32;
    let mut out = Terms::zero(dim, a.degree() - 1);
    for (key, c) in &a.0.map {
        let m = key.mono.degree();
        let denom = Rat::from_integer((k + m).into());
        for (t, &i) in key.idx.iter().enumerate() {
            let mut idx = key.idx.clone();
            idx.remove(t);
            out.add_term(
                idx,
                key.mono.mul_var(i as usize),
                c.clone() * sign_pow(t) / denom.clone(),
            );
        }
    }
    Ok(PolyForm(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn names3() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn wedge_antisymmetry_on_generators() {
        let dx = PolyForm::d_coord(3, 0);
        let dy = PolyForm::d_coord(3, 1);
        assert!(wedge(&dx, &dx).unwrap().is_zero());
        let xy = wedge(&dx, &dy).unwrap();
        let yx = wedge(&dy, &dx).unwrap();
        assert_eq!(xy, yx.neg());
    }

    #[test]
    fn wedge_coordinate_expansion() {
        // (x dy) ^ (y dz) = x*y dy^dz
        let x_dy = wedge(&PolyForm::coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        let y_dz = wedge(&PolyForm::coord(3, 1), &PolyForm::d_coord(3, 2)).unwrap();
        let w = wedge(&x_dy, &y_dz).unwrap();
        assert_eq!(w.render(&names3()), "x*y dy^dz");
    }

    #[test]
    fn ext_d_examples() {
        // d(x dy) = dx^dy
        let x_dy = wedge(&PolyForm::coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        assert_eq!(ext_d(&x_dy).render(&names3()), "dx^dy");
        // d((y dz - z dy)/2) = dy^dz
        let mut t = Terms::zero(3, 1);
        t.add_term(vec![2], Mono::var(3, 1), rat(1, 2));
        t.add_term(vec![1], Mono::var(3, 2), rat(-1, 2));
        let f = PolyForm(t);
        assert_eq!(ext_d(&f).render(&names3()), "dy^dz");
        // d(d(anything)) = 0
        let mut seed = Terms::zero(3, 1);
        seed.add_term(vec![0], Mono(vec![2, 1, 0]), int(3));
        seed.add_term(vec![2], Mono(vec![0, 0, 3]), rat(-2, 5));
        let a = PolyForm(seed);
        assert!(ext_d(&ext_d(&a)).is_zero());
    }

    #[test]
    fn contraction_examples() {
        let vol = wedge(
            &wedge(&PolyForm::d_coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap(),
            &PolyForm::d_coord(3, 2),
        )
        .unwrap();
        let dx_dy = wedge(&PolyForm::d_coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        let px = PolyMultivector::coord_vector(3, 0);
        let pz = PolyMultivector::coord_vector(3, 2);
        // @x -| (dx^dy) = dy
        assert_eq!(contract(&px, &dx_dy).unwrap().render(&names3()), "dy");
        // @x -| (dz^dx) = -dz  (dz^dx stored as -dx^dz)
        let dz_dx = wedge(&PolyForm::d_coord(3, 2), &PolyForm::d_coord(3, 0)).unwrap();
        assert_eq!(contract(&px, &dz_dx).unwrap().render(&names3()), "-dz");
        // @z -| (dx^dy^dz) = dx^dy
        assert_eq!(contract(&pz, &vol).unwrap().render(&names3()), "dx^dy");
    }

    #[test]
    fn contraction_composition_convention() {
        // ι_{X∧Y} a = ι_Y (ι_X a) for vectors X, Y
        let vol = wedge(
            &wedge(&PolyForm::d_coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap(),
            &PolyForm::d_coord(3, 2),
        )
        .unwrap();
        let x = PolyMultivector::coord_vector(3, 0);
        let y = PolyMultivector::coord_vector(3, 1);
        let xy = mv_wedge(&x, &y).unwrap();
        let lhs = contract(&xy, &vol).unwrap();
        let rhs = contract(&y, &contract(&x, &vol).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.render(&names3()), "dz");
    }

    #[test]
    fn contraction_degree_error() {
        let dx = PolyForm::d_coord(3, 0);
        let xy = mv_wedge(
            &PolyMultivector::coord_vector(3, 0),
            &PolyMultivector::coord_vector(3, 1),
        )
        .unwrap();
        assert!(matches!(
            contract(&xy, &dx),
            Err(Error::ContractionDegree { .. })
        ));
    }

    #[test]
    fn lie_derivative_examples() {
        let dx_dy = wedge(&PolyForm::d_coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        let px = PolyMultivector::coord_vector(3, 0);
        // constant field on constant form
        assert!(lie_derivative(&px, &dx_dy).unwrap().is_zero());
        // L_[@x](x dy) = dy
        let x_dy = wedge(&PolyForm::coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        assert_eq!(
            lie_derivative(&px, &x_dy).unwrap().render(&names3()),
            "dy"
        );
        // X = x @y on dx^dy: d(ι_X Ω) = d(-x dx) = 0, ι_X dΩ = 0
        let mut t = Terms::zero(3, 1);
        t.add_term(vec![1], Mono::var(3, 0), int(1));
        let x_dy_field = PolyMultivector(t);
        assert!(lie_derivative(&x_dy_field, &dx_dy).unwrap().is_zero());
    }

    #[test]
    fn radial_primitive_examples() {
        let names = names3();
        let dy_dz = wedge(&PolyForm::d_coord(3, 1), &PolyForm::d_coord(3, 2)).unwrap();
        let p = poincare_primitive(&dy_dz).unwrap();
        assert_eq!(p.render(&names), "-1/2*z dy + 1/2*y dz");
        assert_eq!(ext_d(&p), dy_dz);

        let dx = PolyForm::d_coord(3, 0);
        assert_eq!(poincare_primitive(&dx).unwrap().render(&names), "x");

        let dx_dy = wedge(&PolyForm::d_coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        assert_eq!(
            poincare_primitive(&dx_dy).unwrap().render(&names),
            "-1/2*y dx + 1/2*x dy"
        );

        // not closed
        let x_dy = wedge(&PolyForm::coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        assert!(matches!(
            poincare_primitive(&x_dy),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn vf_bracket_example() {
        // [2y @x, @y] = -2 @x
        let mut t = Terms::zero(3, 1);
        t.add_term(vec![0], Mono::var(3, 1), int(2));
        let a = PolyMultivector(t);
        let b = PolyMultivector::coord_vector(3, 1);
        let br = vf_bracket(&a, &b).unwrap();
        assert_eq!(br, PolyMultivector::coord_vector(3, 0).scale(&int(-2)));
    }

    #[test]
    fn eval_matches_determinant() {
        // (dx^dy)(e1, e2) = 1, (dx^dy)(e2, e1) = -1
        let dx_dy = wedge(&PolyForm::d_coord(3, 0), &PolyForm::d_coord(3, 1)).unwrap();
        let origin = vec![int(0), int(0), int(0)];
        let e1 = vec![int(1), int(0), int(0)];
        let e2 = vec![int(0), int(1), int(0)];
        assert_eq!(dx_dy.eval(&origin, &[e1.clone(), e2.clone()]), int(1));
        assert_eq!(dx_dy.eval(&origin, &[e2, e1]), int(-1));
    }
}
