use ree_core::*;

const TOL: f64 = 5e-3;

fn cfg() -> OptimizerConfig {
    OptimizerConfig::default().with_restarts(4)
}

#[test]
fn ghz_is_one_ghz() {
    let ghz = named_state::<f64>(&NamedState::ghz(std::f64::consts::FRAC_1_SQRT_2)).unwrap();
    let m = mregs_decompose(&ghz, &cfg()).unwrap();
    assert!((m.g - 1.0).abs() < TOL, "{m:?}");
    for s in [m.s_ab, m.s_ac, m.s_bc] {
        assert!(s.abs() < TOL);
    }
    assert!(m.residual < TOL);
    assert!((m.predicted_e3 - 1.0).abs() < TOL);
    assert_eq!(m.approximation, "single-copy");
    let avg = predicted_e3_average_form(&ghz, &cfg()).unwrap();
    assert!((avg - 1.0).abs() < TOL);
    assert!((avg - m.predicted_e3).abs() <= m.residual + 1e-9);
}

#[test]
fn embedded_epr_is_one_singlet() {
    let psi = make_named_state::<f64>(&NamedState::Epr, PartyStructure::qubits(3).unwrap()).unwrap();
    let m = mregs_decompose(&psi, &cfg()).unwrap();
    assert!(m.g.abs() < TOL && (m.s_ab - 1.0).abs() < TOL, "{m:?}");
    assert!(m.s_ac.abs() < TOL && m.s_bc.abs() < TOL);
    assert!(m.residual < TOL);
    assert!((m.predicted_e3 - 1.0).abs() < TOL);
    let e3 = relative_entropy_of_entanglement(&psi.to_density(), &cfg()).unwrap().value;
    assert!((m.predicted_e3 - e3).abs() < TOL);
    let avg = predicted_e3_average_form(&psi, &cfg()).unwrap();
    assert!((avg - m.predicted_e3).abs() <= m.residual + 1e-9);
}

#[test]
fn w_state_row() {
    let w = named_state::<f64>(&NamedState::W).unwrap();
    let m = mregs_decompose(&w, &cfg()).unwrap();
    let s = 3f64.log2() - 2.0 / 3.0;
    for pair in [m.s_ab, m.s_ac, m.s_bc] {
        assert!((pair - 0.251629).abs() < 1e-4, "{m:?}");
    }
    assert!((m.g - (s - 2.0 * 0.251629)).abs() < 1e-3);
    assert!((m.predicted_e3 - (2.0 * 3f64.log2() - 2.0)).abs() < TOL);
    assert!(m.residual < 1e-4);
    let json = m.to_json();
    assert_eq!(json["approximation"], "single-copy");
    assert!(json.get("residual").is_some());
}

#[test]
fn average_form_matches_corollary_lower_bound() {
    let psi = haar_random_pure::<f64>(&PartyStructure::qubits(3).unwrap(), 91);
    let avg = predicted_e3_average_form(&psi, &cfg()).unwrap();
    let (lower, _) = corollary_bounds(&psi, &cfg()).unwrap();
    assert!((avg - lower).abs() < 1e-9, "{avg} vs {lower}");
    let m = mregs_decompose(&psi, &cfg()).unwrap();
    assert!((avg - m.predicted_e3).abs() <= m.residual + 1e-9);
    // Reconstruction of each single-party entropy up to the residual.
    let rho = psi.to_density();
    let s: Vec<f64> = (0..3).map(|p| von_neumann_entropy(&rho.partial_trace(&[p]).unwrap())).collect();
    assert!((s[0] - (m.g + m.s_ab + m.s_ac)).abs() <= m.residual + 1e-12);
    assert!((s[1] - (m.g + m.s_ab + m.s_bc)).abs() <= m.residual + 1e-12);
    assert!((s[2] - (m.g + m.s_ac + m.s_bc)).abs() <= m.residual + 1e-12);
}

#[test]
fn rejects_other_party_counts() {
    let epr = named_state::<f64>(&NamedState::Epr).unwrap();
    assert!(mregs_decompose(&epr, &cfg()).is_err());
    assert!(predicted_e3_average_form(&epr, &cfg()).is_err());
}
