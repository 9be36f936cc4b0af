use lpsas_core::exact::{q, qf, Rational};
use lpsas_core::fixture::{audit_printed_example, discrepancies, example_manifold, printed};
use lpsas_core::frame::{basis_vector, curvature, koszul_levi_civita};
use lpsas_core::paracontact::{
    audit_closed_forms, general_connection, parameter_grid, ConnectionParams, Preset,
};
use lpsas_core::report::{CheckKind, Status};
use lpsas_core::soliton::{eta_einstein_decompose, soliton_solve, BarredData, EinsteinClass};
use lpsas_core::spec_file::{emit_paper_example, load_spec_str, parse_spec, to_json, SpecError};

fn e(i: usize) -> Vec<Rational> {
    basis_vector(4, i)
}

#[test]
fn presets_parse_and_map_to_parameters() {
    let svk: Preset = "schouten-van-kampen".parse().unwrap();
    assert_eq!(svk.params(), ConnectionParams::new(q(1), q(0)));
    assert_eq!(Preset::QuarterSymmetric.params(), ConnectionParams::new(q(0), q(-1)));
    assert!("levi-civita".parse::<Preset>().is_err());
}

#[test]
fn schouten_van_kampen_derivatives_along_the_frame() {
    let (m, p) = example_manifold();
    let lc = koszul_levi_civita(&m).unwrap();
    let svk = general_connection(&m, &p, &lc, &Preset::SchoutenVanKampen.params());
    let scaled = |i: usize, s: i64| e(i).iter().map(|x| x * q(s)).collect::<Vec<_>>();
    for i in 0..3 {
        assert_eq!(lc.nabla(&e(i), &e(3)), scaled(i, -1));
        assert_eq!(svk.nabla(&e(i), &e(3)), scaled(i, -2));
        assert_eq!(svk.nabla(&e(3), &e(i)), scaled(i, 0));
    }
}

#[test]
fn levi_civita_ricci_is_eta_einstein() {
    let (m, p) = example_manifold();
    let lc = koszul_levi_civita(&m).unwrap();
    let curv = curvature(&m, &lc).unwrap();
    let d = eta_einstein_decompose(&m, &p, &curv.ricci);
    assert!(d.residual_norm_zero);
    // S(ξ, ξ) = (n - 1) η(ξ)
    assert_eq!(curv.ricci.get(&[3, 3]), &q(-3));
    assert!(matches!(d.class, EinsteinClass::Einstein | EinsteinClass::EtaEinstein));
    assert_eq!(curv.scalar, q(12));
}

#[test]
fn closed_forms_agree_on_a_grid_with_fractional_points() {
    let (m, p) = example_manifold();
    let grid = parameter_grid(7, true);
    assert!(grid.contains(&ConnectionParams::new(qf(1, 2), qf(-1, 2))));
    let report = audit_closed_forms(&m, &p, &grid).unwrap();
    for check in report.checks.iter().filter(|c| c.name.ends_with("closed form vs direct")) {
        assert_eq!(check.status, Status::Pass, "{}", check.name);
    }
    assert!(report.is_consistent());
}

#[test]
fn printed_example_discrepancies_are_reference_only() {
    for params in [ConnectionParams::zero(), Preset::Zamkovoy.params(), ConnectionParams::new(q(-1), q(2))] {
        let report = audit_printed_example(&params).unwrap();
        assert!(report.is_consistent());
        assert!(report.failures().all(|c| c.kind == CheckKind::Reference));
        let found = discrepancies(&report);
        assert!(found.contains(&"levi-civita: printed vs koszul"));
        assert!(!found.contains(&"levi-civita: printed vs koszul, column e4"));
        assert!(!found.contains(&"curvature R(e1,e4)e1 coefficient of e4: printed vs direct"));
    }
}

#[test]
fn printed_lie_derivative_sign_only_agrees_at_a_minus_one() {
    let (m, p) = example_manifold();
    for (a, agrees) in [(q(-1), true), (q(0), false), (q(2), false)] {
        let params = ConnectionParams::new(a, q(3));
        let data = BarredData::compute(&m, &p, &params).unwrap();
        assert_eq!(data.lie(&m, p.xi()) == printed::lie_xi(&m, &p, &params), agrees);
    }
}

#[test]
fn admissible_xi_solitons_exist_at_the_origin() {
    let (m, p) = example_manifold();
    let sol = soliton_solve(&m, &p, &ConnectionParams::zero(), p.xi()).unwrap();
    assert_eq!(sol.dimension(), 3);
    assert!(sol.residual_check);
    assert!(sol.admissible_exists);
}

#[test]
fn paper_example_file_round_trips() {
    let text = to_json(&emit_paper_example());
    let (m, p) = load_spec_str(&text).unwrap();
    let (m0, p0) = example_manifold();
    assert_eq!(m.structure(), m0.structure());
    assert_eq!(p, p0);
}

const ANTISYMMETRY: &str = r#"{
  "dim": 2,
  "metric": [["1", "0"], ["0", "1"]],
  "brackets": [{"i": 1, "j": 2, "k": 1, "value": "1"}, {"i": 2, "j": 1, "k": 1, "value": "1"}],
  "phi": [["0", "0"], ["0", "0"]],
  "xi": ["1", "0"]
}"#;

#[test]
fn inconsistent_brackets_name_the_invariant_and_witness() {
    let err = load_spec_str(ANTISYMMETRY).unwrap_err();
    assert!(!err.is_parse());
    let msg = err.to_string();
    assert!(msg.contains("antisymmetric"), "{msg}");
    assert!(msg.contains("(1,2,1)") || msg.contains("(1,1,2)"), "{msg}");
}

#[test]
fn singular_metric_is_rejected() {
    let text = ANTISYMMETRY
        .replace(r#"["0", "1"]]"#, r#"["0", "0"]]"#)
        .replace(r#", {"i": 2, "j": 1, "k": 1, "value": "1"}"#, "");
    let msg = load_spec_str(&text).unwrap_err().to_string();
    assert!(msg.contains("rank"), "{msg}");
}

#[test]
fn field_errors_are_located() {
    let text = ANTISYMMETRY.replace(r#""i": 2, "j": 1, "k": 1"#, r#""i": 2, "j": 1, "k": 3"#);
    let msg = load_spec_str(&text).unwrap_err().to_string();
    assert!(msg.contains("brackets[1].k"), "{msg}");
    match parse_spec("{\"dim\": 2, \"metric\": 7}").unwrap_err() {
        SpecError::Parse { field, line, .. } => {
            assert_eq!(field, "metric");
            assert_eq!(line, 1);
        }
        other => panic!("{other}"),
    }
    assert!(parse_spec("{\"dim\": 2, \"colour\": 1}").unwrap_err().is_parse());
}
