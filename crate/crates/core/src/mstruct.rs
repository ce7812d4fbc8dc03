//! Multisymplectic structure: validation of the defining form, the
//! correspondence between Hamiltonian forms and multivector fields, and the
//! graded bracket of Hamiltonian forms.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{
    contract, ext_d, poincare_primitive, vf_bracket, IdxTuple, PolyForm, PolyMultivector, Terms,
};
use crate::linalg::{solve, MatQ, Solve};
use crate::model::{Model, ModelData};
use crate::mono::{monomials_of_degree, Mono};
use crate::rat::{int, sign_pow, Rat};
use crate::report::{Check, Report};
use crate::spaces::index_words;

/// A Hamiltonian form together with its multivector field:
/// `contract(field, omega) = ext_d(form)` exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HamiltonianPair {
    pub form: PolyForm,
    pub field: PolyMultivector,
    /// True when the field was solved from the form, false when the form
    /// was integrated from the field.
    pub solved_from_form: bool,
}

impl HamiltonianPair {
    pub fn form_degree(&self) -> usize {
        self.form.degree()
    }

    /// Bracket grading `n - 1 - |form|`.
    pub fn g_degree(&self, n: usize) -> usize {
        n - 1 - self.form.degree()
    }
}

/// Exact solver for `contract(X, omega) = target` with `X` of a fixed
/// multivector degree.
///
/// For a constant-coefficient `omega` the map acts monomial by monomial, so
/// one small constant matrix is row-reduced once per multivector degree and
/// reused for every monomial block. Non-constant `omega` falls back to one
/// combined system over coefficient degrees up to the target's (solutions
/// needing higher internal degree than the target are not searched).
#[derive(Debug)]
pub struct ContractionSolver {
    pub dim: usize,
    pub n: usize,
    pub omega: PolyForm,
    constant: bool,
    /// For constant omega: per multivector degree `k`, the reusable table.
    tables: Vec<SolveTable>,
}

#[derive(Debug)]
struct SolveTable {
    cols: Vec<IdxTuple>,
    rows: Vec<IdxTuple>,
    row_index: BTreeMap<IdxTuple, usize>,
    /// RREF of `[A | I]`.
    rref: MatQ,
    pivots: Vec<usize>,
}

impl ContractionSolver {
    pub fn new(dim: usize, n: usize, omega: &PolyForm) -> Self {
        let constant = omega.0.map.keys().all(|k| k.mono.is_one());
        let mut tables = Vec::new();
        if constant {
            for k in 0..=n {
                tables.push(Self::build_table(dim, n, omega, k + 1));
            }
        }
        ContractionSolver {
            dim,
            n,
            omega: omega.clone(),
            constant,
            tables,
        }
    }

    fn build_table(dim: usize, n: usize, omega: &PolyForm, k: usize) -> SolveTable {
        let cols = index_words(dim, k);
        let rows = index_words(dim, n + 1 - k);
        let row_index: BTreeMap<IdxTuple, usize> = rows
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let nrows = rows.len();
        let ncols = cols.len();
        let mut m = MatQ::zeros(nrows, ncols + nrows);
        for (c, word) in cols.iter().enumerate() {
            let x = PolyMultivector::basis(dim, word);
            let img = contract(&x, omega).expect("degree bounds hold by construction");
            for (key, v) in &img.0.map {
                let r = row_index[&key.idx];
                *m.at_mut(r, c) += v.clone();
            }
        }
        for r in 0..nrows {
            m.set(r, ncols + r, Rat::one());
        }
        let pivots = m.rref();
        SolveTable {
            cols,
            rows,
            row_index,
            rref: m,
            pivots,
        }
    }

    /// Solves `contract(X, omega) = target` for `X` of degree `k`;
    /// canonical solution (free variables zero), or `NotHamiltonian`.
    pub fn solve_multivector(&self, k: usize, target: &PolyForm) -> Result<PolyMultivector> {
        assert!(k >= 1 && k <= self.n + 1);
        if target.is_zero() {
            return Ok(PolyMultivector::zero(self.dim, k));
        }
        if target.degree() != self.n + 1 - k {
            return Err(Error::NotHamiltonian(format!(
                "target degree {} incompatible with multivector degree {}",
                target.degree(),
                k
            )));
        }
        if self.constant {
            self.solve_constant(k, target)
        } else {
            self.solve_general(k, target)
        }
    }

    fn solve_constant(&self, k: usize, target: &PolyForm) -> Result<PolyMultivector> {
        let table = &self.tables[k - 1];
        let ncols = table.cols.len();
        let nrows = table.rows.len();
        // group target terms by monomial
        let mut blocks: BTreeMap<Mono, Vec<Rat>> = BTreeMap::new();
        for (key, c) in &target.0.map {
            let b = blocks
                .entry(key.mono.clone())
                .or_insert_with(|| vec![Rat::zero(); nrows]);
            let Some(&r) = table.row_index.get(&key.idx) else {
                return Err(Error::NotHamiltonian("unexpected basis word".into()));
            };
            b[r] = c.clone();
        }
        let mut out = Terms::zero(self.dim, k);
        for (mono, b) in blocks {
            // x_c = T_row . b at pivot columns; zero rows demand T_row . b = 0
            for (r, &p) in table.pivots.iter().enumerate() {
                let dot: Rat = (0..nrows)
                    .map(|j| table.rref.at(r, ncols + j).clone() * b[j].clone())
                    .sum();
                if p < ncols {
                    if !dot.is_zero() {
                        out.add_term(table.cols[p].clone(), mono.clone(), dot);
                    }
                } else if !dot.is_zero() {
                    return Err(Error::NotHamiltonian(format!(
                        "target outside the image of the contraction pairing (monomial {mono})"
                    )));
                }
            }
        }
        Ok(PolyMultivector(out))
    }

    fn solve_general(&self, k: usize, target: &PolyForm) -> Result<PolyMultivector> {
        let bound = target.0.coeff_degree().unwrap_or(0);
        let mut unknowns: Vec<(IdxTuple, Mono)> = Vec::new();
        for word in index_words(self.dim, k) {
            for d in 0..=bound {
                for m in monomials_of_degree(self.dim, d) {
                    unknowns.push((word.clone(), m));
                }
            }
        }
        // collect row keys from all images plus the target
        let images: Vec<PolyForm> = unknowns
            .iter()
            .map(|(w, m)| {
                let mut t = Terms::zero(self.dim, k);
                t.add_term(w.clone(), m.clone(), Rat::one());
                contract(&PolyMultivector(t), &self.omega).expect("degree bounds hold")
            })
            .collect();
        let mut row_keys: BTreeMap<crate::exterior::TermKey, usize> = BTreeMap::new();
        for img in images.iter() {
            for key in img.0.map.keys() {
                let next = row_keys.len();
                row_keys.entry(key.clone()).or_insert(next);
            }
        }
        for key in target.0.map.keys() {
            let next = row_keys.len();
            row_keys.entry(key.clone()).or_insert(next);
        }
        let nrows = row_keys.len();
        let mut a = MatQ::zeros(nrows, unknowns.len());
        for (c, img) in images.iter().enumerate() {
            for (key, v) in &img.0.map {
                a.set(row_keys[key], c, v.clone());
            }
        }
        let mut b = vec![Rat::zero(); nrows];
        for (key, v) in &target.0.map {
            b[row_keys[key]] = v.clone();
        }
        match solve(&a, &b) {
            Solve::Inconsistent => Err(Error::NotHamiltonian(
                "target outside the image of the contraction pairing".into(),
            )),
            Solve::Solution(x) => {
                let mut t = Terms::zero(self.dim, k);
                for (i, c) in x.into_iter().enumerate() {
                    if !c.is_zero() {
                        let (w, m) = &unknowns[i];
                        t.add_term(w.clone(), m.clone(), c);
                    }
                }
                Ok(PolyMultivector(t))
            }
        }
    }
}

/// Solves the multivector field of a Hamiltonian `p`-form (`0 <= p <= n-1`).
pub fn hamiltonian_pair_from_form(model: &Model, f: &PolyForm) -> Result<HamiltonianPair> {
    pair_from_form(&model.solver, f)
}

pub(crate) fn pair_from_form(solver: &ContractionSolver, f: &PolyForm) -> Result<HamiltonianPair> {
    let p = f.degree();
    if p > solver.n.saturating_sub(1) && !f.is_zero() {
        return Err(Error::NotHamiltonian(format!(
            "form degree {p} out of Hamiltonian range 0..={}",
            solver.n - 1
        )));
    }
    let k = solver.n - p;
    let field = solver.solve_multivector(k, &ext_d(f))?;
    Ok(HamiltonianPair {
        form: f.clone(),
        field,
        solved_from_form: true,
    })
}

/// Integrates the Hamiltonian form of a locally Hamiltonian multivector
/// field via the radial primitive; `NotClosed` when the contraction of the
/// field into the defining form is not closed.
pub fn hamiltonian_form_from_multivector(
    model: &Model,
    x: &PolyMultivector,
) -> Result<HamiltonianPair> {
    let k = x.degree();
    if k < 1 || k > model.data.n {
        return Err(Error::NotHamiltonian(format!(
            "multivector degree {k} out of range 1..={}",
            model.data.n
        )));
    }
    let rhs = contract(x, &model.data.omega)?;
    if !ext_d(&rhs).is_zero() {
        return Err(Error::NotClosed(
            "contraction into the structure form is not closed".into(),
        ));
    }
    let form = if rhs.is_zero() {
        PolyForm::zero(model.data.dim, model.data.n - k)
    } else {
        poincare_primitive(&rhs)?
    };
    Ok(HamiltonianPair {
        form,
        field: x.clone(),
        solved_from_form: false,
    })
}

/// Graded bracket of two Hamiltonian pairs:
/// `{F, G} = (-1)^{n-p} contract(X_F, ext_d(G))` for `p = |F|`.
///
/// When the contraction over-saturates (`n - p` exceeds `|G| + 1`) the
/// bracket is the zero 0-form.
pub fn bracket(model: &Model, a: &HamiltonianPair, b: &HamiltonianPair) -> PolyForm {
    bracket_with_n(model.data.n, a, b)
}

pub(crate) fn bracket_with_n(n: usize, a: &HamiltonianPair, b: &HamiltonianPair) -> PolyForm {
    let p = a.form.degree();
    let db = ext_d(&b.form);
    if a.field.degree() > db.degree() {
        return PolyForm::zero(a.form.dim(), 0);
    }
    let hook = contract(&a.field, &db).expect("degrees checked");
    hook.scale(&sign_pow(n - p))
}

/// Validates the defining structure: closedness, 1-nondegeneracy, and the
/// potential when present. Failures are reported, not thrown.
pub fn check_multisymplectic(data: &ModelData) -> Report {
    let mut report = Report::new();
    let names = &data.coords;

    report.push(Check::verdict(
        "omega_degree",
        data.omega.degree() == data.n + 1,
        format!(
            "degree {} but n+1 = {}",
            data.omega.degree(),
            data.n + 1
        ),
    ));

    let d_omega = ext_d(&data.omega);
    report.push(Check::verdict(
        "omega_closed",
        d_omega.is_zero(),
        format!("d(omega) = {}", d_omega.render(names)),
    ));

    report.merge(nondegeneracy_check(data));

    if let Some(theta) = &data.theta {
        let diff = ext_d(theta).neg().sub(&data.omega);
        report.push(Check::verdict(
            "potential_consistency",
            diff.is_zero(),
            format!("-d(theta) - omega = {}", diff.render(names)),
        ));
    }
    report
}

/// The pairing `v -> contract(v, omega)` as a matrix with polynomial
/// entries; trivial kernel certifies 1-nondegeneracy.
fn nondegeneracy_check(data: &ModelData) -> Report {
    let mut report = Report::new();
    let dim = data.dim;
    let n = data.n;
    let rows_basis = index_words(dim, n);
    let row_index: BTreeMap<&IdxTuple, usize> = rows_basis
        .iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    // entries[i][r]: polynomial coefficient of basis word r in ι_{e_i}Ω
    let mut entries: Vec<Vec<PolyForm>> = Vec::with_capacity(dim);
    let constant = data.omega.0.map.keys().all(|k| k.mono.is_one());
    for i in 0..dim {
        let img = contract(&PolyMultivector::coord_vector(dim, i), &data.omega)
            .expect("degree bounds hold");
        let mut row = vec![PolyForm::zero(dim, 0); rows_basis.len()];
        for (key, c) in &img.0.map {
            let r = row_index[&key.idx];
            let mut t = Terms::zero(dim, 0);
            t.add_term(vec![], key.mono.clone(), c.clone());
            row[r] = row[r].add(&PolyForm(t));
        }
        entries.push(row);
    }

    if constant {
        let m = MatQ::from_rows(
            entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| {
                            p.0.map
                                .values()
                                .next()
                                .cloned()
                                .unwrap_or_else(Rat::zero)
                        })
                        .collect()
                })
                .collect(),
        );
        // kernel of the transpose-free pairing: v rows, so kernel of M^T?
        // Rows are the images; a kernel vector of the PAIRING is a vector v
        // with sum v_i * row_i = 0, i.e. a left kernel vector.
        let mut mt = MatQ::zeros(m.cols, m.rows);
        for r in 0..m.rows {
            for c in 0..m.cols {
                mt.set(c, r, m.at(r, c).clone());
            }
        }
        let kernel = mt.kernel_basis();
        if kernel.is_empty() {
            report.push(Check::pass("omega_nondegenerate").with("certificate", "exact"));
        } else {
            let witness = render_constant_field(&kernel[0], &data.coords);
            report.push(Check::fail(
                "omega_nondegenerate",
                format!("kernel contains {witness}"),
            ));
        }
        return report;
    }

    // Polynomial coefficients: generic rank over the function field by
    // fraction-free elimination, plus a probe-point certificate.
    let generic_rank = symbolic_rank(entries.clone());
    if generic_rank < dim {
        // look for a constant kernel field as a witness
        let witness = constant_kernel_witness(data, &entries).unwrap_or_else(|| {
            format!("generic rank {generic_rank} < {dim} over the function field")
        });
        report.push(Check::fail("omega_nondegenerate", witness));
    } else {
        report.push(
            Check::warn(
                "omega_nondegenerate",
                "certified generically (function-field rank) and at probe points; \
                 pointwise nondegeneracy everywhere is not certified",
            )
            .with("generic_rank", generic_rank),
        );
    }
    report
}

fn render_constant_field(v: &[Rat], names: &[String]) -> String {
    let dim = names.len();
    let mut t = Terms::zero(dim, 1);
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            t.add_term(vec![i as u8], Mono::one(dim), c.clone());
        }
    }
    PolyMultivector(t).render(names)
}

fn constant_kernel_witness(data: &ModelData, entries: &[Vec<PolyForm>]) -> Option<String> {
    // intersect pointwise kernels over a deterministic probe set
    let dim = data.dim;
    let probes = probe_points(dim);
    let mut stacked: Vec<Vec<Rat>> = Vec::new();
    for p in &probes {
        for c in 0..entries[0].len() {
            stacked.push(
                (0..dim)
                    .map(|i| {
                        entries[i][c]
                            .0
                            .map
                            .iter()
                            .map(|(k, v)| v.clone() * k.mono.eval(p))
                            .sum()
                    })
                    .collect(),
            );
        }
    }
    let m = MatQ::from_rows(stacked);
    let kernel = m.kernel_basis();
    kernel
        .first()
        .map(|v| format!("kernel contains {}", render_constant_field(v, &data.coords)))
}

/// Deterministic rational probe points used by nondegeneracy certificates.
pub fn probe_points(dim: usize) -> Vec<Vec<Rat>> {
    let mut out = vec![vec![Rat::zero(); dim]];
    out.push((1..=dim as i64).map(int).collect());
    out.push(
        (1..=dim as i64)
            .map(|i| Rat::new(1.into(), (i + 1).into()))
            .collect(),
    );
    out.push(
        (0..dim as i64)
            .map(|i| if i % 2 == 0 { int(-1) } else { int(2) })
            .collect(),
    );
    out
}

/// Rank of a matrix of polynomial entries over the rational function field,
/// by fraction-free Gaussian elimination.
fn symbolic_rank(mut m: Vec<Vec<PolyForm>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, row);
        let pivot = m[row][col].clone();
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..cols {
                // row_r := row_r * pivot - row_row * f   (stays polynomial)
                let a = crate::exterior::wedge(&m[r][c], &pivot).expect("same ambient dim");
                let b = crate::exterior::wedge(&m[row][c], &f).expect("same ambient dim");
                m[r][c] = a.sub(&b);
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// Verifies `contract(field, omega) - ext_d(form) = 0` for a pair.
pub fn pair_invariant_holds(model: &Model, pair: &HamiltonianPair) -> bool {
    let lhs = match contract(&pair.field, &model.data.omega) {
        Ok(f) => f,
        Err(_) => return false,
    };
    lhs.sub(&ext_d(&pair.form)).is_zero()
}

/// The field-compatibility identity for `(n-1)`-form pairs under this
/// bracket sign convention: `contract([X_F, X_G], omega) + d{F,G} = 0`,
/// i.e. `X_{{F,G}} = -[X_F, X_G]`.
pub fn field_compatibility_defect(
    model: &Model,
    a: &HamiltonianPair,
    b: &HamiltonianPair,
) -> Result<PolyForm> {
    let lie = vf_bracket(&a.field, &b.field)?;
    let lhs = contract(&lie, &model.data.omega)?;
    let rhs = ext_d(&bracket(model, a, b));
    Ok(lhs.add(&rhs))
}

/// Cyclic triple identity for `(n-1)`-forms: the cyclic sum of nested
/// brackets equals `d` of the full threefold contraction.
pub fn cyclic_triple_defect(
    model: &Model,
    f: &HamiltonianPair,
    g: &HamiltonianPair,
    h: &HamiltonianPair,
) -> Result<PolyForm> {
    let mut lhs = PolyForm::zero(model.data.dim, f.form.degree());
    for (x, y, z) in [(f, g, h), (g, h, f), (h, f, g)] {
        let inner = bracket(model, x, y);
        let inner_pair = hamiltonian_pair_from_form(model, &inner)?;
        lhs = lhs.add(&bracket(model, &inner_pair, z));
    }
    let rhs = ext_d(&contract(
        &f.field,
        &contract(&g.field, &contract(&h.field, &model.data.omega)?)?,
    )?);
    Ok(lhs.sub(&rhs))
}

/// Report wrapper asserting a defect form vanishes.
pub fn defect_check(name: &str, defect: &PolyForm, names: &[String]) -> Check {
    Check::verdict(
        name,
        defect.is_zero(),
        format!("defect = {}", defect.render(names)),
    )
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_models;

    #[test]
    fn symplectic_plane_is_valid() {
        let data = test_models::symplectic_r2_data();
        let report = check_multisymplectic(&data);
        assert!(report.all_passed(), "{}", report.render_table());
    }

    #[test]
    fn volume_form_is_valid() {
        let data = test_models::volume_r3_data(2);
        let report = check_multisymplectic(&data);
        assert!(report.all_passed(), "{}", report.render_table());
    }

    #[test]
    fn degenerate_two_form_fails_with_witness() {
        let mut data = test_models::volume_r3_data(1);
        // replace omega by dx^dy on R^3 with n = 1
        data.n = 1;
        data.omega = crate::exterior::wedge(
            &PolyForm::d_coord(3, 0),
            &PolyForm::d_coord(3, 1),
        )
        .unwrap();
        let report = check_multisymplectic(&data);
        assert!(!report.all_passed());
        let failed = report.failed();
        assert_eq!(failed[0].name, "omega_nondegenerate");
        assert!(failed[0].witness.as_ref().unwrap().contains("@z"));
    }

    #[test]
    fn pair_solving_on_symplectic_plane() {
        let model = test_models::symplectic_r2();
        // F = q  ->  X = -@p
        let q = PolyForm::coord(2, 0);
        let pair = hamiltonian_pair_from_form(&model, &q).unwrap();
        assert_eq!(
            pair.field,
            PolyMultivector::coord_vector(2, 1).neg()
        );
        assert!(pair_invariant_holds(&model, &pair));
    }

    #[test]
    fn pair_solving_on_volume_r3() {
        let model = test_models::volume_r3(1);
        // F = y dz -> X = @x
        let f = crate::exterior::wedge(&PolyForm::coord(3, 1), &PolyForm::d_coord(3, 2)).unwrap();
        let pair = hamiltonian_pair_from_form(&model, &f).unwrap();
        assert_eq!(pair.field, PolyMultivector::coord_vector(3, 0));
    }

    #[test]
    fn non_hamiltonian_witness_on_dw2() {
        let model = test_models::dw2();
        // F = p0 dp1: d F = dp0^dp1 is outside the image of the pairing
        let f = crate::exterior::wedge(&PolyForm::coord(5, 3), &PolyForm::d_coord(5, 4)).unwrap();
        assert!(matches!(
            hamiltonian_pair_from_form(&model, &f),
            Err(Error::NotHamiltonian(_))
        ));
    }

    #[test]
    fn form_from_multivector() {
        let model = test_models::volume_r3(1);
        let x = PolyMultivector::coord_vector(3, 0);
        let pair = hamiltonian_form_from_multivector(&model, &x).unwrap();
        let names = &model.data.coords;
        assert_eq!(pair.form.render(names), "-1/2*z dy + 1/2*y dz");

        let r2 = test_models::symplectic_r2();
        let pq = hamiltonian_form_from_multivector(&r2, &PolyMultivector::coord_vector(2, 0))
            .unwrap();
        assert_eq!(pq.form.render(&r2.data.coords), "p");

        // q @q is not locally Hamiltonian: d(q dp) != 0
        let mut t = Terms::zero(2, 1);
        t.add_term(vec![0], Mono::var(2, 0), Rat::one());
        assert!(matches!(
            hamiltonian_form_from_multivector(&r2, &PolyMultivector(t)),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn bracket_examples() {
        let r2 = test_models::symplectic_r2();
        let q = hamiltonian_pair_from_form(&r2, &PolyForm::coord(2, 0)).unwrap();
        let p = hamiltonian_pair_from_form(&r2, &PolyForm::coord(2, 1)).unwrap();
        assert_eq!(bracket(&r2, &q, &p), PolyForm::one(2));

        // volume translations: {delta(@x), delta(@y)} = dz
        let r3 = test_models::volume_r3(2);
        let dx_pair = hamiltonian_form_from_multivector(&r3, &PolyMultivector::coord_vector(3, 0))
            .unwrap();
        let dy_pair = hamiltonian_form_from_multivector(&r3, &PolyMultivector::coord_vector(3, 1))
            .unwrap();
        assert_eq!(
            bracket(&r3, &dx_pair, &dy_pair),
            PolyForm::d_coord(3, 2)
        );
    }

    #[test]
    fn field_compatibility_sign() {
        // nonconstant witness: F = y^2 dz, G = z dx on the volume model
        let model = test_models::volume_r3(1);
        let y2 = crate::exterior::wedge(&PolyForm::coord(3, 1), &PolyForm::coord(3, 1)).unwrap();
        let f = crate::exterior::wedge(&y2, &PolyForm::d_coord(3, 2)).unwrap();
        let g = crate::exterior::wedge(&PolyForm::coord(3, 2), &PolyForm::d_coord(3, 0)).unwrap();
        let fp = hamiltonian_pair_from_form(&model, &f).unwrap();
        let gp = hamiltonian_pair_from_form(&model, &g).unwrap();
        let defect = field_compatibility_defect(&model, &fp, &gp).unwrap();
        assert!(defect.is_zero(), "defect = {}", defect);
    }
}
