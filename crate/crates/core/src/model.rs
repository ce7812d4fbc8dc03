//! Model files, their parser, and the fully derived computation model.
//!
//! A model file is plain sectioned text fixing the coordinate patch, the
//! structure form, an optional potential, the Lie algebra with its action
//! fields, a pool of Hamiltonian form generators, truncation bounds and a
//! sampler seed. `Model::build` validates everything and precomputes the
//! Noether currents, generator pairs, and the letter-level bracket tables
//! that drive the formal complexes.
//!
//! Term syntax (whitespace separated): `coeff [monomial] basis` where
//! `basis` is `1` for a scalar, `dx^dy...` for a form word, or `@x^@y...`
//! for a multivector word, e.g. `-1/2 z dy` or `1 @q1`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{contract, poincare_primitive, PolyForm, PolyMultivector, Terms};
use crate::linalg::{solve, MatQ, Solve};
use crate::mono::Mono;
use crate::mstruct::{self, ContractionSolver, HamiltonianPair};
use crate::rat::{parse_rat, Rat};
use crate::spaces::FormSpace;

/// Structure constants `C^a_{bc}` of a finite-dimensional Lie algebra,
/// stored dense over the basis labels.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    pub dim: usize,
    pub labels: Vec<String>,
    c: Vec<Rat>,
}

impl LieAlgebraSpec {
    pub fn new(dim: usize, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), dim);
        LieAlgebraSpec {
            dim,
            labels,
            c: vec![Rat::zero(); dim * dim * dim],
        }
    }

    pub fn abelian(dim: usize) -> Self {
        let labels = (1..=dim).map(|i| format!("xi{i}")).collect();
        Self::new(dim, labels)
    }

    pub fn c(&self, a: usize, b: usize, cc: usize) -> &Rat {
        &self.c[(a * self.dim + b) * self.dim + cc]
    }

    pub fn set_c(&mut self, a: usize, b: usize, cc: usize, v: Rat) {
        self.c[(a * self.dim + b) * self.dim + cc] = v;
    }

    /// Coefficients of `[xi_b, xi_c]` over the basis: index `a` holds
    /// `C^a_{bc}`.
    pub fn bracket_coeffs(&self, b: usize, cc: usize) -> Vec<Rat> {
        (0..self.dim).map(|a| self.c(a, b, cc).clone()).collect()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Parsed content of a model file.
#[derive(Clone, Debug)]
pub struct ModelData {
    pub name: String,
    pub dim: usize,
    /// The structure form has degree `n + 1`.
    pub n: usize,
    pub coords: Vec<String>,
    pub omega: PolyForm,
    pub theta: Option<PolyForm>,
    pub lie: LieAlgebraSpec,
    /// One polynomial vector field per Lie algebra basis element.
    pub action: Vec<PolyMultivector>,
    pub generators: Vec<(String, PolyForm)>,
    pub d_max: u32,
    pub l_max: usize,
    pub seed: u64,
}

/// One generator of the observable pool: a named Hamiltonian pair with its
/// gradings.
#[derive(Clone, Debug)]
pub struct PoolLetter {
    pub name: String,
    pub pair: Arc<HamiltonianPair>,
    pub form_degree: usize,
    pub coeff_degree: u32,
}

/// A class re-expressed over the pool: `scalar * 1 + sum coeffs_j * G_j`
/// modulo closed forms.
#[derive(Clone, Debug, Default)]
pub struct LetterCombo {
    pub scalar: Rat,
    pub coeffs: Vec<(usize, Rat)>,
}

impl LetterCombo {
    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.coeffs.is_empty()
    }
}

/// Fully validated and derived model.
#[derive(Debug)]
pub struct Model {
    pub data: ModelData,
    pub solver: ContractionSolver,
    /// Noether currents, one per Lie algebra basis element, fixed by the
    /// radial primitive.
    pub currents: Vec<PolyForm>,
    pub current_pairs: Vec<Arc<HamiltonianPair>>,
    pub pool: Vec<PoolLetter>,
    /// Each current expressed over the pool modulo closed forms.
    pub delta_expr: Vec<LetterCombo>,
    /// Common coefficient degree of the nonzero currents (0 when none).
    pub delta_cdeg: u32,
    /// Set when some current class vanishes or the classes are dependent;
    /// higher Koszul homology is then not expected to vanish.
    pub delta_degenerate: bool,
    /// `table[j][a]` = bracket of pool letter `j` with current `a`,
    /// re-expressed over the pool modulo closed forms.
    pub bracket_table: Vec<Vec<LetterCombo>>,
    /// `w_table[a][b]` = coefficients over the basis of the fibre bracket
    /// of generators `a`, `b` of the current distribution (the geometric
    /// orientation `-C^d_{ab}`, matching the realized `d{delta_a, delta_b}`).
    pub w_table: Vec<Vec<Vec<(usize, Rat)>>>,
}

impl Model {
    pub fn names(&self) -> &[String] {
        &self.data.coords
    }

    pub fn dim(&self) -> usize {
        self.data.dim
    }

    pub fn n(&self) -> usize {
        self.data.n
    }

    /// Realizes a pool combo as a concrete form of the given degree.
    pub fn combo_form(&self, degree: usize, combo: &LetterCombo) -> PolyForm {
        let mut acc = if degree == 0 {
            PolyForm::one(self.dim()).scale(&combo.scalar)
        } else {
            PolyForm::zero(self.dim(), degree)
        };
        for (j, c) in &combo.coeffs {
            acc = acc.add(&self.pool[*j].pair.form.scale(c));
        }
        acc
    }

    /// Expresses a form as `scalar + sum c_j G_j` modulo closed forms,
    /// using only pool letters of the same form degree. Fails when the
    /// class lies outside the pool span.
    pub fn express_in_pool(&self, f: &PolyForm) -> Result<LetterCombo> {
        express_over_letters(self.dim(), &self.pool, f)
    }

    pub fn build(data: ModelData) -> Result<Model> {
        // structure checks first; abort with the failing check name
        let report = mstruct::check_multisymplectic(&data);
        if let Some(c) = report.failed().first() {
            return Err(Error::Validation {
                check: c.name.clone(),
                msg: c.witness.clone().unwrap_or_default(),
            });
        }
        let report = crate::action::check_lie_algebra(&data.lie);
        if let Some(c) = report.failed().first() {
            return Err(Error::Validation {
                check: c.name.clone(),
                msg: c.witness.clone().unwrap_or_default(),
            });
        }
        let report = crate::action::check_action_data(&data);
        if let Some(c) = report.failed().first() {
            return Err(Error::Validation {
                check: c.name.clone(),
                msg: c.witness.clone().unwrap_or_default(),
            });
        }

        let solver = ContractionSolver::new(data.dim, data.n, &data.omega);

        // Noether currents via the radial primitive
        let mut currents = Vec::new();
        let mut current_pairs = Vec::new();
        for (a, xi) in data.action.iter().enumerate() {
            let rhs = contract(xi, &data.omega)?;
            let delta = if rhs.is_zero() {
                PolyForm::zero(data.dim, data.n - 1)
            } else {
                poincare_primitive(&rhs).map_err(|_| Error::Validation {
                    check: "noether_current".into(),
                    msg: format!(
                        "contraction of action field `{}` is not closed",
                        data.lie.labels[a]
                    ),
                })?
            };
            current_pairs.push(Arc::new(HamiltonianPair {
                form: delta.clone(),
                field: xi.clone(),
                solved_from_form: false,
            }));
            currents.push(delta);
        }

        // generator pool
        let mut pool = Vec::new();
        for (name, form) in &data.generators {
            if form.is_zero() {
                return Err(Error::Validation {
                    check: "generator_nonzero".into(),
                    msg: format!("generator `{name}` is zero"),
                });
            }
            if form.degree() > data.n.saturating_sub(1) {
                return Err(Error::Validation {
                    check: "generator_degree".into(),
                    msg: format!(
                        "generator `{name}` has degree {} > n-1 = {}",
                        form.degree(),
                        data.n - 1
                    ),
                });
            }
            if !form.0.is_coeff_homogeneous() {
                return Err(Error::Validation {
                    check: "generator_homogeneous".into(),
                    msg: format!("generator `{name}` mixes coefficient degrees"),
                });
            }
            let pair = mstruct::pair_from_form(&solver, form).map_err(|e| Error::Validation {
                check: "generator_hamiltonian".into(),
                msg: format!("generator `{name}`: {e}"),
            })?;
            pool.push(PoolLetter {
                name: name.clone(),
                pair: Arc::new(pair),
                form_degree: form.degree(),
                coeff_degree: form.0.coeff_degree().unwrap_or(0),
            });
        }

        // letter classes must be independent modulo closed forms
        check_letter_independence(data.dim, &pool)?;

        // currents expressed over the pool
        let mut delta_expr = Vec::new();
        for (a, delta) in currents.iter().enumerate() {
            if !delta.0.is_coeff_homogeneous() {
                return Err(Error::Validation {
                    check: "current_homogeneous".into(),
                    msg: format!(
                        "current of `{}` mixes coefficient degrees",
                        data.lie.labels[a]
                    ),
                });
            }
            let combo =
                express_over_letters(data.dim, &pool, delta).map_err(|_| Error::Validation {
                    check: "current_in_pool".into(),
                    msg: format!(
                        "current of `{}` is not in the generator pool span modulo closed forms",
                        data.lie.labels[a]
                    ),
                })?;
            delta_expr.push(combo);
        }

        // uniform coefficient degree of the currents
        let mut delta_cdeg = 0u32;
        let mut degenerate = false;
        let mut seen: Option<u32> = None;
        for delta in &currents {
            match delta.0.coeff_degree() {
                None => degenerate = true,
                Some(d) => match seen {
                    None => seen = Some(d),
                    Some(s) if s == d => {}
                    Some(s) => {
                        return Err(Error::Validation {
                            check: "current_degrees_uniform".into(),
                            msg: format!("currents mix coefficient degrees {s} and {d}"),
                        })
                    }
                },
            }
        }
        if let Some(s) = seen {
            delta_cdeg = s;
        }
        // dependent current classes also flag degeneracy
        if !degenerate && !currents.is_empty() {
            let nonzero: Vec<&PolyForm> = currents.iter().filter(|d| !d.is_zero()).collect();
            if !nonzero.is_empty() {
                let deg = nonzero[0].degree();
                let max_d = nonzero
                    .iter()
                    .filter_map(|f| f.0.coeff_degree())
                    .max()
                    .unwrap_or(0);
                let space = FormSpace::new(data.dim, deg, max_d);
                let closed = space.closed_subspace();
                let rows: Vec<Vec<Rat>> = nonzero
                    .iter()
                    .map(|f| closed.reduce(&space.to_vec(f).expect("current fits its space")))
                    .collect();
                if MatQ::from_rows(rows).rank() < nonzero.len() {
                    degenerate = true;
                }
            }
        }

        // fibre bracket table of the current distribution: the geometric
        // orientation -C^d_{ab}, matching d{delta_a, delta_b} exactly
        let g = data.lie.dim;
        let mut w_table = vec![vec![Vec::new(); g]; g];
        for a in 0..g {
            for b in 0..g {
                let mut entry = Vec::new();
                for d in 0..g {
                    let c = -data.lie.c(d, a, b).clone();
                    if !c.is_zero() {
                        entry.push((d, c));
                    }
                }
                w_table[a][b] = entry;
            }
        }

        let mut model = Model {
            data,
            solver,
            currents,
            current_pairs,
            pool,
            delta_expr,
            delta_cdeg,
            delta_degenerate: degenerate,
            bracket_table: vec![],
            w_table,
        };

        // letter-level bracket table with the currents
        let mut table = Vec::new();
        for letter in &model.pool {
            let mut row = Vec::new();
            for (a, _) in model.currents.iter().enumerate() {
                let b = mstruct::bracket_with_n(
                    model.data.n,
                    &letter.pair,
                    &model.current_pairs[a],
                );
                let combo = express_over_letters(model.data.dim, &model.pool, &b).map_err(|_| {
                    Error::Validation {
                        check: "pool_bracket_closure".into(),
                        msg: format!(
                            "bracket of generator `{}` with current `{}` leaves the pool span",
                            letter.name, model.data.lie.labels[a]
                        ),
                    }
                })?;
                row.push(combo);
            }
            table.push(row);
        }
        model.bracket_table = table;
        Ok(model)
    }
}

fn check_letter_independence(dim: usize, pool: &[PoolLetter]) -> Result<()> {
    let mut by_degree: BTreeMap<usize, Vec<&PoolLetter>> = BTreeMap::new();
    for l in pool {
        by_degree.entry(l.form_degree).or_default().push(l);
    }
    for (deg, letters) in by_degree {
        let max_d = letters.iter().map(|l| l.coeff_degree).max().unwrap_or(0);
        let space = FormSpace::new(dim, deg, max_d);
        let closed = space.closed_subspace();
        let rows: Vec<Vec<Rat>> = letters
            .iter()
            .map(|l| {
                closed.reduce(
                    &space
                        .to_vec(&l.pair.form)
                        .expect("letter fits its form space"),
                )
            })
            .collect();
        if MatQ::from_rows(rows).rank() < letters.len() {
            return Err(Error::Validation {
                check: "generator_classes_independent".into(),
                msg: format!("degree-{deg} generator classes are dependent modulo closed forms"),
            });
        }
    }
    Ok(())
}

fn express_over_letters(dim: usize, pool: &[PoolLetter], f: &PolyForm) -> Result<LetterCombo> {
    if f.is_zero() {
        return Ok(LetterCombo::default());
    }
    let p = f.degree();
    let letters: Vec<(usize, &PoolLetter)> = pool
        .iter()
        .enumerate()
        .filter(|(_, l)| l.form_degree == p)
        .collect();
    let max_d = letters
        .iter()
        .map(|(_, l)| l.coeff_degree)
        .chain(f.0.coeff_degree())
        .max()
        .unwrap_or(0);
    let space = FormSpace::new(dim, p, max_d);
    let closed = space.closed_subspace();
    let fv = closed.reduce(&space.to_vec(f).ok_or_else(|| {
        Error::BadGenerator("form does not fit the truncated ambient space".into())
    })?);
    let cols: Vec<Vec<Rat>> = letters
        .iter()
        .map(|(_, l)| closed.reduce(&space.to_vec(&l.pair.form).expect("letter fits")))
        .collect();
    let mut a = MatQ::zeros(space.len(), cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            a.set(r, c, v.clone());
        }
    }
    let coeffs = match solve(&a, &fv) {
        Solve::Inconsistent => {
            return Err(Error::BadGenerator(
                "class is outside the generator pool span".into(),
            ))
        }
        Solve::Solution(x) => x,
    };
    let mut combo = LetterCombo::default();
    for (k, c) in coeffs.into_iter().enumerate() {
        if !c.is_zero() {
            combo.coeffs.push((letters[k].0, c));
        }
    }
    if p == 0 {
        // constant part of f minus the constant parts of the chosen letters
        let unit = Mono::one(dim);
        let const_of = |g: &PolyForm| -> Rat {
            g.0.map
                .iter()
                .find(|(k, _)| k.idx.is_empty() && k.mono == unit)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rat::zero)
        };
        let mut s = const_of(f);
        for (j, c) in &combo.coeffs {
            s -= c.clone() * const_of(&pool[*j].pair.form);
        }
        combo.scalar = s;
    }
    Ok(combo)
}

// ---------------------------------------------------------------------------
// model file parsing
// ---------------------------------------------------------------------------

/// Loads, validates and derives a model from a file path.
pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("model")
        .to_string();
    let data = parse_model(&name, &text)?;
    Model::build(data)
}

/// Parses model file text; `name` is echoed into reports.
pub fn parse_model(name: &str, text: &str) -> Result<ModelData> {
    Parser::new(name, text).parse()
}

struct Parser<'a> {
    name: &'a str,
    lines: Vec<(usize, &'a str)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Space,
    Omega,
    Theta,
    LieAlgebra,
    Action,
    Generators,
    Truncation,
    Seed,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Tokens with their 1-based starting column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

impl<'a> Parser<'a> {
    fn new(name: &'a str, text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                let body = match l.find('#') {
                    Some(p) => &l[..p],
                    None => l,
                };
                (i + 1, body)
            })
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        Parser { name, lines }
    }

    fn parse(self) -> Result<ModelData> {
        let mut section = Section::None;
        let mut n: Option<usize> = None;
        let mut coords: Vec<String> = Vec::new();
        let mut omega_terms: Vec<(usize, Vec<(usize, String)>)> = Vec::new();
        let mut theta_terms: Vec<(usize, Vec<(usize, String)>)> = Vec::new();
        let mut lie_dim: Option<usize> = None;
        let mut lie_labels: Vec<String> = Vec::new();
        let mut c_entries: Vec<(usize, String, String, String, Rat)> = Vec::new();
        let mut action_lines: Vec<(usize, String, Vec<(usize, String)>)> = Vec::new();
        let mut gen_lines: Vec<(usize, String, Vec<(usize, String)>)> = Vec::new();
        let mut d_max: u32 = 4;
        let mut l_max: usize = 3;
        let mut seed: u64 = 1;
        let mut saw_theta = false;

        for (line_no, raw) in &self.lines {
            let line_no = *line_no;
            let trimmed = raw.trim();
            if trimmed.starts_with('[') {
                section = match trimmed {
                    "[space]" => Section::Space,
                    "[omega]" => Section::Omega,
                    "[theta]" => {
                        saw_theta = true;
                        Section::Theta
                    }
                    "[liealgebra]" => Section::LieAlgebra,
                    "[action]" => Section::Action,
                    "[generators]" => Section::Generators,
                    "[truncation]" => Section::Truncation,
                    "[seed]" => Section::Seed,
                    other => return Err(err(line_no, 1, format!("unknown section {other}"))),
                };
                continue;
            }
            let toks: Vec<(usize, String)> = tokens(raw)
                .into_iter()
                .map(|(c, t)| (c, t.to_string()))
                .collect();
            match section {
                Section::None => return Err(err(line_no, 1, "content before any section")),
                Section::Space => {
                    let (key, rest) = split_assign(line_no, &toks)?;
                    match key.as_str() {
                        "n" => n = Some(parse_usize(line_no, &rest)?),
                        "coords" => {
                            coords = rest.iter().map(|(_, t)| t.clone()).collect();
                            for (col, t) in &rest {
                                validate_coord_name(line_no, *col, t)?;
                            }
                        }
                        other => {
                            return Err(err(line_no, toks[0].0, format!("unknown key `{other}`")))
                        }
                    }
                }
                Section::Omega => omega_terms.push((line_no, toks)),
                Section::Theta => theta_terms.push((line_no, toks)),
                Section::LieAlgebra => {
                    if toks.first().map(|(_, t)| t.as_str()) == Some("c") {
                        // c A B C = rat
                        if toks.len() != 6 || toks[4].1 != "=" {
                            return Err(err(
                                line_no,
                                toks[0].0,
                                "expected `c A B C = value`",
                            ));
                        }
                        let v = parse_rat(&toks[5].1)
                            .map_err(|_| err(line_no, toks[5].0, "bad rational"))?;
                        c_entries.push((
                            line_no,
                            toks[1].1.clone(),
                            toks[2].1.clone(),
                            toks[3].1.clone(),
                            v,
                        ));
                    } else {
                        let (key, rest) = split_assign(line_no, &toks)?;
                        match key.as_str() {
                            "dim" => lie_dim = Some(parse_usize(line_no, &rest)?),
                            "labels" => {
                                lie_labels = rest.iter().map(|(_, t)| t.clone()).collect()
                            }
                            other => {
                                return Err(err(
                                    line_no,
                                    toks[0].0,
                                    format!("unknown key `{other}`"),
                                ))
                            }
                        }
                    }
                }
                Section::Action => {
                    if toks.len() < 2 {
                        return Err(err(line_no, 1, "expected `label term`"));
                    }
                    action_lines.push((line_no, toks[0].1.clone(), toks[1..].to_vec()));
                }
                Section::Generators => {
                    if toks.len() < 2 {
                        return Err(err(line_no, 1, "expected `name term`"));
                    }
                    gen_lines.push((line_no, toks[0].1.clone(), toks[1..].to_vec()));
                }
                Section::Truncation => {
                    let (key, rest) = split_assign(line_no, &toks)?;
                    match key.as_str() {
                        "dmax" => d_max = parse_usize(line_no, &rest)? as u32,
                        "lmax" => l_max = parse_usize(line_no, &rest)?,
                        other => {
                            return Err(err(line_no, toks[0].0, format!("unknown key `{other}`")))
                        }
                    }
                }
                Section::Seed => {
                    let (key, rest) = split_assign(line_no, &toks)?;
                    match key.as_str() {
                        "seed" => seed = parse_usize(line_no, &rest)? as u64,
                        other => {
                            return Err(err(line_no, toks[0].0, format!("unknown key `{other}`")))
                        }
                    }
                }
            }
        }

        let n = n.ok_or_else(|| err(1, 1, "missing `n` in [space]"))?;
        if coords.is_empty() {
            return Err(err(1, 1, "missing `coords` in [space]"));
        }
        let dim = coords.len();
        if n + 1 > dim {
            return Err(err(1, 1, format!("n+1 = {} exceeds dimension {dim}", n + 1)));
        }

        let omega = accumulate_form(dim, n + 1, &coords, &omega_terms, "omega")?;
        let theta = if saw_theta {
            Some(accumulate_form(dim, n, &coords, &theta_terms, "theta")?)
        } else {
            None
        };

        let g = lie_dim.unwrap_or(0);
        if lie_labels.is_empty() {
            lie_labels = (1..=g).map(|i| format!("xi{i}")).collect();
        }
        if lie_labels.len() != g {
            return Err(err(1, 1, format!("expected {g} labels, got {}", lie_labels.len())));
        }
        let mut lie = LieAlgebraSpec::new(g, lie_labels);
        for (line_no, la, lb, lc, v) in c_entries {
            let a = lie
                .label_index(&la)
                .ok_or_else(|| err(line_no, 1, format!("unknown label `{la}`")))?;
            let b = lie
                .label_index(&lb)
                .ok_or_else(|| err(line_no, 1, format!("unknown label `{lb}`")))?;
            let cc = lie
                .label_index(&lc)
                .ok_or_else(|| err(line_no, 1, format!("unknown label `{lc}`")))?;
            lie.set_c(a, b, cc, v);
        }

        // action fields grouped by label, in label order
        let mut action_map: BTreeMap<usize, Terms> = BTreeMap::new();
        for (line_no, label, term) in &action_lines {
            let a = lie
                .label_index(label)
                .ok_or_else(|| err(*line_no, 1, format!("unknown action label `{label}`")))?;
            let (coeff, mono, basis) = parse_term(*line_no, &coords, term)?;
            let Basis::Mv(word) = basis else {
                return Err(err(*line_no, term[0].0, "action terms must be @-fields"));
            };
            if word.len() != 1 {
                return Err(err(*line_no, term[0].0, "action fields must have degree 1"));
            }
            action_map
                .entry(a)
                .or_insert_with(|| Terms::zero(dim, 1))
                .add_word(&word, mono, coeff);
        }
        let mut action = Vec::new();
        for a in 0..g {
            let t = action_map
                .remove(&a)
                .ok_or_else(|| err(1, 1, format!("missing action field for `{}`", lie.labels[a])))?;
            action.push(PolyMultivector(t));
        }

        // generators grouped by first-seen name order
        let mut gen_order: Vec<String> = Vec::new();
        let mut gen_map: BTreeMap<String, (usize, Terms)> = BTreeMap::new();
        for (line_no, gname, term) in &gen_lines {
            let (coeff, mono, basis) = parse_term(*line_no, &coords, term)?;
            let word = match basis {
                Basis::Scalar => vec![],
                Basis::Form(w) => w,
                Basis::Mv(_) => {
                    return Err(err(*line_no, term[0].0, "generators must be forms"))
                }
            };
            if !gen_map.contains_key(gname) {
                gen_order.push(gname.clone());
                gen_map.insert(gname.clone(), (*line_no, Terms::zero(dim, word.len())));
            }
            let entry = gen_map.get_mut(gname).unwrap();
            if entry.1.degree != word.len() {
                return Err(err(
                    *line_no,
                    term[0].0,
                    format!("generator `{gname}` mixes form degrees"),
                ));
            }
            entry.1.add_word(&word, mono, coeff);
        }
        let generators = gen_order
            .into_iter()
            .map(|name| {
                let (_, t) = gen_map.remove(&name).unwrap();
                (name, PolyForm(t))
            })
            .collect();

        Ok(ModelData {
            name: self.name.to_string(),
            dim,
            n,
            coords,
            omega,
            theta,
            lie,
            action,
            generators,
            d_max,
            l_max,
            seed,
        })
    }
}

fn split_assign(
    line: usize,
    toks: &[(usize, String)],
) -> Result<(String, Vec<(usize, String)>)> {
    if toks.len() < 3 || toks[1].1 != "=" {
        return Err(err(line, toks.first().map_or(1, |t| t.0), "expected `key = value`"));
    }
    Ok((toks[0].1.clone(), toks[2..].to_vec()))
}

fn parse_usize(line: usize, rest: &[(usize, String)]) -> Result<usize> {
    if rest.len() != 1 {
        return Err(err(line, rest.first().map_or(1, |t| t.0), "expected one integer"));
    }
    rest[0]
        .1
        .parse()
        .map_err(|_| err(line, rest[0].0, "expected an integer"))
}

fn validate_coord_name(line: usize, col: usize, name: &str) -> Result<()> {
    if name == "1"
        || name.starts_with('d')
        || name.starts_with('@')
        || name.chars().next().is_some_and(|c| c.is_ascii_digit())
        || name.chars().any(|c| "^*/=:#[]".contains(c))
    {
        return Err(err(
            line,
            col,
            format!("invalid coordinate name `{name}` (must not start with d/@/digit or contain ^*/=:#)"),
        ));
    }
    Ok(())
}

enum Basis {
    Scalar,
    Form(Vec<u8>),
    Mv(Vec<u8>),
}

fn parse_term(
    line: usize,
    coords: &[String],
    toks: &[(usize, String)],
) -> Result<(Rat, Mono, Basis)> {
    if toks.is_empty() || toks.len() > 3 {
        return Err(err(
            line,
            toks.first().map_or(1, |t| t.0),
            "expected `coeff [monomial] basis`",
        ));
    }
    let coeff = parse_rat(&toks[0].1).map_err(|_| err(line, toks[0].0, "bad coefficient"))?;
    if toks.len() == 1 {
        return Err(err(line, toks[0].0, "missing basis token (use `1` for scalars)"));
    }
    let basis_tok = &toks[toks.len() - 1];
    let mono = if toks.len() == 3 {
        parse_mono(line, toks[1].0, &toks[1].1, coords)?
    } else {
        Mono::one(coords.len())
    };
    let basis = parse_basis(line, basis_tok.0, &basis_tok.1, coords)?;
    Ok((coeff, mono, basis))
}

fn coord_index(line: usize, col: usize, name: &str, coords: &[String]) -> Result<u8> {
    coords
        .iter()
        .position(|c| c == name)
        .map(|i| i as u8)
        .ok_or_else(|| err(line, col, format!("unknown coordinate `{name}`")))
}

fn parse_mono(line: usize, col: usize, tok: &str, coords: &[String]) -> Result<Mono> {
    let mut m = Mono::one(coords.len());
    for factor in tok.split('*') {
        let (name, pow) = match factor.split_once('^') {
            Some((n, p)) => (
                n,
                p.parse::<u32>()
                    .map_err(|_| err(line, col, format!("bad power in `{factor}`")))?,
            ),
            None => (factor, 1),
        };
        let i = coord_index(line, col, name, coords)? as usize;
        m.0[i] += pow;
    }
    Ok(m)
}

fn parse_basis(line: usize, col: usize, tok: &str, coords: &[String]) -> Result<Basis> {
    if tok == "1" {
        return Ok(Basis::Scalar);
    }
    let parts: Vec<&str> = tok.split('^').collect();
    if parts.iter().all(|p| p.starts_with('d')) {
        let word = parts
            .iter()
            .map(|p| coord_index(line, col, &p[1..], coords))
            .collect::<Result<Vec<u8>>>()?;
        return Ok(Basis::Form(word));
    }
    if parts.iter().all(|p| p.starts_with('@')) {
        let word = parts
            .iter()
            .map(|p| coord_index(line, col, &p[1..], coords))
            .collect::<Result<Vec<u8>>>()?;
        return Ok(Basis::Mv(word));
    }
    Err(err(line, col, format!("bad basis token `{tok}`")))
}

fn accumulate_form(
    dim: usize,
    expected_degree: usize,
    coords: &[String],
    lines: &[(usize, Vec<(usize, String)>)],
    what: &str,
) -> Result<PolyForm> {
    let mut t = Terms::zero(dim, expected_degree);
    for (line_no, toks) in lines {
        let (coeff, mono, basis) = parse_term(*line_no, coords, toks)?;
        let word = match basis {
            Basis::Scalar => vec![],
            Basis::Form(w) => w,
            Basis::Mv(_) => return Err(err(*line_no, toks[0].0, "expected a form term")),
        };
        if word.len() != expected_degree {
            return Err(err(
                *line_no,
                toks[0].0,
                format!(
                    "{what} term has degree {} but expected {expected_degree}",
                    word.len()
                ),
            ));
        }
        t.add_word(&word, mono, coeff);
    }
    Ok(PolyForm(t))
}

/// Bundled models, loaded from the repository `models/` directory; used by
/// tests and benchmarks.
pub mod test_models {
    use super::*;

    pub const SYMPLECTIC_R2: &str = include_str!("../../../models/symplectic_r2.model");
    pub const SYMPLECTIC_R4: &str = include_str!("../../../models/symplectic_r4.model");
    pub const VOLUME_R3: &str = include_str!("../../../models/volume_r3.model");
    pub const VOLUME_R3_SO3: &str = include_str!("../../../models/volume_r3_so3.model");
    pub const DW2: &str = include_str!("../../../models/dw2.model");

    pub fn symplectic_r2_data() -> ModelData {
        parse_model("symplectic_r2", SYMPLECTIC_R2).expect("bundled model parses")
    }

    pub fn symplectic_r2() -> Model {
        Model::build(symplectic_r2_data()).expect("bundled model builds")
    }

    pub fn symplectic_r4_data() -> ModelData {
        parse_model("symplectic_r4", SYMPLECTIC_R4).expect("bundled model parses")
    }

    pub fn symplectic_r4() -> Model {
        Model::build(symplectic_r4_data()).expect("bundled model builds")
    }

    /// The bundled two-translation volume model, restricted to the first
    /// `k` translations (1..=2), or the bundled file as-is for `k = 2`.
    pub fn volume_r3_data(k: usize) -> ModelData {
        let mut data = parse_model("volume_r3", VOLUME_R3).expect("bundled model parses");
        assert!(k >= 1 && k <= 2);
        if k == 1 {
            data.lie = LieAlgebraSpec::new(1, vec!["tx".into()]);
            data.action.truncate(1);
            data.generators.retain(|(n, _)| n != "d2");
        }
        data
    }

    pub fn volume_r3(k: usize) -> Model {
        Model::build(volume_r3_data(k)).expect("bundled model builds")
    }

    pub fn volume_r3_so3_data() -> ModelData {
        parse_model("volume_r3_so3", VOLUME_R3_SO3).expect("bundled model parses")
    }

    pub fn volume_r3_so3() -> Model {
        Model::build(volume_r3_so3_data()).expect("bundled model builds")
    }

    pub fn dw2_data() -> ModelData {
        parse_model("dw2", DW2).expect("bundled model parses")
    }

    pub fn dw2() -> Model {
        Model::build(dw2_data()).expect("bundled model builds")
    }

    pub fn all() -> Vec<Model> {
        vec![
            symplectic_r2(),
            symplectic_r4(),
            volume_r3(2),
            volume_r3_so3(),
            dw2(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_models_parse_and_build() {
        for model in test_models::all() {
            assert!(model.dim() >= 2);
            // every current pair satisfies the structural equation
            for pair in &model.current_pairs {
                assert!(mstruct::pair_invariant_holds(&model, pair));
            }
        }
    }

    #[test]
    fn parse_error_carries_location() {
        let text = "[space]\nn = 1\ncoords = q p\n[omega]\n1 dq^dwut\n";
        match parse_model("bad", text) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 5);
                assert!(col >= 3);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_closed_omega_aborts_with_check_name() {
        let text = "[space]\nn = 1\ncoords = q p r\n[omega]\n1 p dq^dr\n";
        let data = parse_model("bad", text).unwrap();
        match Model::build(data) {
            Err(Error::Validation { check, .. }) => assert_eq!(check, "omega_closed"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn currents_match_hand_values() {
        let model = test_models::symplectic_r4();
        assert_eq!(model.currents[0].render(model.names()), "p1");
        assert_eq!(model.delta_expr[0].coeffs.len(), 1);

        let r3 = test_models::volume_r3(2);
        assert_eq!(
            r3.currents[0].render(r3.names()),
            "-1/2*z dy + 1/2*y dz"
        );
        assert_eq!(
            r3.currents[1].render(r3.names()),
            "1/2*z dx - 1/2*x dz"
        );
    }

    #[test]
    fn bracket_table_on_volume_model() {
        // {x, d1} = 1 (scalar), {y, d1} = 0, {y, d2} = 1
        let model = test_models::volume_r3(2);
        let idx_of = |name: &str| model.pool.iter().position(|l| l.name == name).unwrap();
        let x = idx_of("x");
        let y = idx_of("y");
        let t_x = &model.bracket_table[x][0];
        assert_eq!(t_x.scalar, crate::rat::int(1));
        assert!(t_x.coeffs.is_empty());
        assert!(model.bracket_table[y][0].is_zero());
        assert_eq!(model.bracket_table[y][1].scalar, crate::rat::int(1));
    }

    #[test]
    fn so3_table_closes_with_geometric_orientation() {
        let model = test_models::volume_r3_so3();
        let idx_of = |name: &str| model.pool.iter().position(|l| l.name == name).unwrap();
        // {g1, delta_2} = -g3 modulo closed forms
        let combo = &model.bracket_table[idx_of("g1")][1];
        assert_eq!(combo.coeffs.len(), 1);
        assert_eq!(combo.coeffs[0].0, idx_of("g3"));
        assert_eq!(combo.coeffs[0].1, crate::rat::int(-1));
        // coordinate letters transform by the action fields: {y, delta_1} = z
        let combo = &model.bracket_table[idx_of("y")][0];
        assert_eq!(combo.coeffs, vec![(idx_of("z"), crate::rat::int(1))]);
    }
}
