//! Lie algebra actions: structure-constant validation, invariance of the
//! structure form, covariant Noether currents, and the cocycle obstruction
//! of the current map.

use num_traits::Zero;

use crate::error::Result;
use crate::exterior::{contract, ext_d, lie_derivative, poincare_primitive, vf_bracket, PolyForm};
use crate::model::{LieAlgebraSpec, Model, ModelData};
use crate::mstruct::bracket;
use crate::rat::Rat;
use crate::report::{Check, Report};

/// Verifies antisymmetry and the Jacobi identity of the structure
/// constants, exactly.
pub fn check_lie_algebra(lie: &LieAlgebraSpec) -> Report {
    let mut report = Report::new();
    let g = lie.dim;

    let mut antisym_witness = None;
    'anti: for a in 0..g {
        for b in 0..g {
            for c in 0..g {
                let s: Rat = lie.c(a, b, c).clone() + lie.c(a, c, b).clone();
                if !s.is_zero() {
                    antisym_witness = Some(format!(
                        "C^{}_{{{},{}}} + C^{}_{{{},{}}} = {}",
                        lie.labels[a],
                        lie.labels[b],
                        lie.labels[c],
                        lie.labels[a],
                        lie.labels[c],
                        lie.labels[b],
                        crate::rat::render_rat(&s)
                    ));
                    break 'anti;
                }
            }
        }
    }
    report.push(match antisym_witness {
        None => Check::pass("structure_constants_antisymmetric"),
        Some(w) => Check::fail("structure_constants_antisymmetric", w),
    });

    // Jacobi: sum over cyclic (a,b,f) of C^d_{ab} C^e_{df} = 0
    let mut jacobi_witness = None;
    'jac: for a in 0..g {
        for b in 0..g {
            for f in 0..g {
                for e in 0..g {
                    let mut s = Rat::zero();
                    for d in 0..g {
                        s += lie.c(d, a, b).clone() * lie.c(e, d, f).clone()
                            + lie.c(d, b, f).clone() * lie.c(e, d, a).clone()
                            + lie.c(d, f, a).clone() * lie.c(e, d, b).clone();
                    }
                    if !s.is_zero() {
                        jacobi_witness = Some(format!(
                            "cyclic contraction on ({}, {}, {}) -> {} is {}",
                            lie.labels[a],
                            lie.labels[b],
                            lie.labels[f],
                            lie.labels[e],
                            crate::rat::render_rat(&s)
                        ));
                        break 'jac;
                    }
                }
            }
        }
    }
    report.push(match jacobi_witness {
        None => Check::pass("structure_constants_jacobi"),
        Some(w) => Check::fail("structure_constants_jacobi", w),
    });
    report
}

/// Action checks that need only the parsed data: invariance of the
/// structure form under every action field, and the field-level
/// homomorphism `[xi_a, xi_b] = C^d_{ab} xi_d`.
pub fn check_action_data(data: &ModelData) -> Report {
    let mut report = Report::new();
    let names = &data.coords;
    for (a, xi) in data.action.iter().enumerate() {
        let l = lie_derivative(xi, &data.omega).expect("action fields have degree 1");
        report.push(Check::verdict(
            format!("action_invariance_{}", data.lie.labels[a]),
            l.is_zero(),
            format!("Lie derivative of omega = {}", l.render(names)),
        ));
    }
    for a in 0..data.lie.dim {
        for b in (a + 1)..data.lie.dim {
            let lie_ab = vf_bracket(&data.action[a], &data.action[b])
                .expect("action fields have degree 1");
            let mut expected = crate::exterior::PolyMultivector::zero(data.dim, 1);
            for (d, coeff) in data.lie.bracket_coeffs(a, b).iter().enumerate() {
                if !coeff.is_zero() {
                    expected = expected.add(&data.action[d].scale(coeff));
                }
            }
            let defect = lie_ab.sub(&expected);
            report.push(Check::verdict(
                format!(
                    "action_homomorphism_{}_{}",
                    data.lie.labels[a], data.lie.labels[b]
                ),
                defect.is_zero(),
                format!("[xi_a, xi_b] - C^d_ab xi_d = {}", defect.render(names)),
            ));
        }
    }
    report
}

/// Full action report on a built model: the data-level checks plus the
/// current-map compatibility modulo closed forms.
///
/// Under this bracket sign convention the current map reverses brackets:
/// `{delta_a, delta_b} = -C^d_{ab} delta_d` modulo closed forms; the check
/// verifies exactly that orientation.
pub fn check_action(model: &Model) -> Report {
    let mut report = check_action_data(&model.data);
    let names = model.names();
    let g = model.data.lie.dim;
    for a in 0..g {
        for b in (a + 1)..g {
            let br = bracket(model, &model.current_pairs[a], &model.current_pairs[b]);
            let mut expected = PolyForm::zero(model.dim(), br.degree().max(model.n() - 1));
            for (d, coeff) in model.data.lie.bracket_coeffs(a, b).iter().enumerate() {
                if !coeff.is_zero() {
                    expected = expected.add(&model.currents[d].scale(&-coeff.clone()));
                }
            }
            let defect = br.sub(&expected);
            let closed = ext_d(&defect).is_zero();
            report.push(
                Check::verdict(
                    format!(
                        "current_antihomomorphism_{}_{}",
                        model.data.lie.labels[a], model.data.lie.labels[b]
                    ),
                    closed,
                    format!(
                        "{{delta_a, delta_b}} + C^d_ab delta_d = {} is not closed",
                        defect.render(names)
                    ),
                )
                .with("convention", "{delta_a,delta_b} = -C^d_ab delta_d mod closed"),
            );
        }
    }
    report
}

/// The Noether current of one action field: the radial primitive of its
/// contraction into the structure form. Deterministic; `NotClosed` when
/// the field is not locally Hamiltonian.
pub fn noether_current(model: &Model, a: usize) -> Result<PolyForm> {
    let rhs = contract(&model.data.action[a], &model.data.omega)?;
    if rhs.is_zero() {
        return Ok(PolyForm::zero(model.dim(), model.n() - 1));
    }
    poincare_primitive(&rhs)
}

/// Classification of a cocycle value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleClass {
    Zero,
    /// Exact, with its radial primitive.
    Exact(PolyForm),
    /// Closed but not exact (constants in degree 0).
    ClosedNonExact,
}

/// The obstruction 2-cocycle of the current map on basis elements
/// `(xi_a, xi_b)`: the defect of the bracket compatibility that holds
/// under this sign convention,
/// `c(a, b) = {delta_a, delta_b} + C^d_{ab} delta_d`.
///
/// The value is always closed; on the coordinate patch a closed form of
/// degree >= 1 is exact and the canonical primitive is returned. A nonzero
/// class signals that the current map lifts only to a central extension,
/// which is reported, not constructed.
pub fn cocycle(model: &Model, a: usize, b: usize) -> (PolyForm, CocycleClass) {
    let br = bracket(model, &model.current_pairs[a], &model.current_pairs[b]);
    let mut value = br;
    for (d, coeff) in model.data.lie.bracket_coeffs(a, b).iter().enumerate() {
        if !coeff.is_zero() {
            value = value.add(&model.currents[d].scale(coeff));
        }
    }
    let class = if value.is_zero() {
        CocycleClass::Zero
    } else if value.degree() == 0 {
        // closed 0-forms are the constants; exact 0-forms are zero
        let nonconst = value
            .0
            .map
            .keys()
            .any(|k| !k.mono.is_one());
        if nonconst {
            // not closed would contradict the bracket identity; classify by
            // exactness of the honest value
            match poincare_primitive_of_closed(&value) {
                Some(p) => CocycleClass::Exact(p),
                None => CocycleClass::ClosedNonExact,
            }
        } else {
            CocycleClass::ClosedNonExact
        }
    } else {
        match poincare_primitive_of_closed(&value) {
            Some(p) => CocycleClass::Exact(p),
            None => CocycleClass::ClosedNonExact,
        }
    };
    (value, class)
}

fn poincare_primitive_of_closed(f: &PolyForm) -> Option<PolyForm> {
    if f.degree() == 0 {
        return None;
    }
    poincare_primitive(f).ok()
}

/// Cocycle report over all basis pairs: values, classifications, and the
/// closedness invariant.
pub fn check_cocycles(model: &Model) -> Report {
    let mut report = Report::new();
    let names = model.names();
    let g = model.data.lie.dim;
    for a in 0..g {
        for b in 0..g {
            let (value, class) = cocycle(model, a, b);
            let d = ext_d(&value);
            let mut check = Check::verdict(
                format!(
                    "cocycle_closed_{}_{}",
                    model.data.lie.labels[a], model.data.lie.labels[b]
                ),
                d.is_zero(),
                format!("d(cocycle) = {}", d.render(names)),
            )
            .with("value", value.render(names));
            match class {
                CocycleClass::Zero => check = check.with("class", "zero"),
                CocycleClass::Exact(p) => {
                    check = check
                        .with("class", "exact")
                        .with("primitive", p.render(names));
                }
                CocycleClass::ClosedNonExact => {
                    check = check.with("class", "closed_non_exact").with(
                        "note",
                        "nonvanishing obstruction: the current map lifts to a homomorphism \
                         only on a central extension (not constructed)",
                    );
                }
            }
            report.push(check);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_models;
    use crate::model::LieAlgebraSpec;
    use crate::rat::int;

    #[test]
    fn abelian_algebra_passes() {
        let lie = LieAlgebraSpec::abelian(2);
        assert!(check_lie_algebra(&lie).all_passed());
    }

    #[test]
    fn so3_epsilon_table_passes() {
        let model = test_models::volume_r3_so3();
        assert!(check_lie_algebra(&model.data.lie).all_passed());
    }

    #[test]
    fn broken_antisymmetry_fails() {
        let mut lie = LieAlgebraSpec::abelian(3);
        lie.set_c(0, 1, 2, int(1));
        lie.set_c(0, 2, 1, int(1));
        let report = check_lie_algebra(&lie);
        assert!(!report.all_passed());
        assert_eq!(
            report.failed()[0].name,
            "structure_constants_antisymmetric"
        );
    }

    #[test]
    fn noether_currents_match_hand_values() {
        let r3 = test_models::volume_r3(1);
        assert_eq!(
            noether_current(&r3, 0).unwrap().render(r3.names()),
            "-1/2*z dy + 1/2*y dz"
        );

        let r4 = test_models::symplectic_r4();
        assert_eq!(noether_current(&r4, 0).unwrap().render(r4.names()), "p1");

        let dw = test_models::dw2();
        assert_eq!(
            noether_current(&dw, 0).unwrap().render(dw.names()),
            "-1/2*p1 dx0 + 1/2*p0 dx1 - 1/2*x1 dp0 + 1/2*x0 dp1"
        );
    }

    #[test]
    fn non_invariant_field_fails_action_check() {
        // x @x scales the volume form
        let mut data = test_models::volume_r3_data(1);
        let mut t = crate::exterior::Terms::zero(3, 1);
        t.add_term(vec![0], crate::mono::Mono::var(3, 0), int(1));
        data.action[0] = crate::exterior::PolyMultivector(t);
        let report = check_action_data(&data);
        assert!(!report.all_passed());
        assert!(report.failed()[0].name.starts_with("action_invariance"));
    }

    #[test]
    fn translation_cocycle_on_volume_model() {
        let model = test_models::volume_r3(2);
        let (value, class) = cocycle(&model, 0, 1);
        assert_eq!(value.render(model.names()), "dz");
        match class {
            CocycleClass::Exact(p) => assert_eq!(p.render(model.names()), "z"),
            other => panic!("expected exact, got {other:?}"),
        }
        // antisymmetry of the cocycle
        let (value_ba, _) = cocycle(&model, 1, 0);
        assert_eq!(value_ba, value.neg());
        // diagonal vanishes
        let (diag, class) = cocycle(&model, 0, 0);
        assert!(diag.is_zero());
        assert_eq!(class, CocycleClass::Zero);
    }

    #[test]
    fn rotation_cocycle_vanishes_on_plane() {
        let model = test_models::symplectic_r2();
        let (value, class) = cocycle(&model, 0, 0);
        assert!(value.is_zero());
        assert_eq!(class, CocycleClass::Zero);
    }

    #[test]
    fn so3_current_map_antihomomorphism_holds() {
        let model = test_models::volume_r3_so3();
        let report = check_action(&model);
        assert!(report.all_passed(), "{}", report.render_table());
        // and the cocycles are closed
        assert!(check_cocycles(&model).all_passed());
    }
}
