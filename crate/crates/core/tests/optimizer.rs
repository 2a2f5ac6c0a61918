use nalgebra::Complex;
use ree_core::rng::{derive_seed, haar_unitary, random_mixed_state, rng_from_seed};
use ree_core::*;

fn quick() -> OptimizerConfig {
    OptimizerConfig::default().with_restarts(2)
}

fn ree(sigma: &State, cfg: &OptimizerConfig) -> Ree {
    relative_entropy_of_entanglement(sigma, cfg).unwrap()
}

fn ket(bits: &[usize]) -> Pure {
    PureState::basis(PartyStructure::qubits(bits.len()).unwrap(), bits).unwrap()
}

#[test]
fn product_states_have_zero_ree() {
    let s = PartyStructure::qubits(3).unwrap();
    let mut rng = rng_from_seed(5);
    let factors: Vec<_> = (0..3).map(|_| ree_core::rng::haar_vector::<f64, _>(2, &mut rng)).collect();
    let psi = PureState::product(&factors).unwrap();
    assert_eq!(psi.structure(), &s);
    let r = ree(&psi.to_density(), &OptimizerConfig::default());
    assert!(r.value.abs() < 1e-6, "{}", r.value);
}

#[test]
fn epr_matches_oracle() {
    let psi = named_state::<f64>(&NamedState::Epr).unwrap();
    let oracle = pure_state_ree_oracle(&psi, &[0]).unwrap();
    assert!((oracle - 1.0).abs() < 1e-12);
    let r = ree(&psi.to_density(), &OptimizerConfig::default());
    assert!((r.value - oracle).abs() < 1e-3, "{}", r.value);
    assert!(r.gap_estimate >= 0.0);
}

#[test]
fn ghz_reaches_explicit_candidate() {
    let sigma = named_state::<f64>(&NamedState::ghz(std::f64::consts::FRAC_1_SQRT_2)).unwrap().to_density();
    let zero = ket(&[0]).amplitudes().clone();
    let one = ket(&[1]).amplitudes().clone();
    let candidate = SeparableEnsemble::new(
        PartyStructure::qubits(3).unwrap(),
        vec![
            ProductTerm { weight: 0.5, factors: vec![zero; 3] },
            ProductTerm { weight: 0.5, factors: vec![one; 3] },
        ],
    )
    .unwrap();
    let bound = quantum_relative_entropy(&sigma, &candidate.to_state()).unwrap();
    assert!((bound - 1.0).abs() < 1e-12);
    let r = ree(&sigma, &OptimizerConfig::default());
    assert!((r.value - 1.0).abs() < 1e-3, "{}", r.value);
    assert!(r.value > bound - 1e-6);
}

#[test]
fn w_state() {
    let sigma = named_state::<f64>(&NamedState::W).unwrap().to_density();
    let r = ree(&sigma, &OptimizerConfig::default());
    let expected = 2.0 * 3f64.log2() - 2.0;
    assert!((r.value - expected).abs() < 5e-3, "{}", r.value);
}

#[test]
fn pure_oracle_cases() {
    for a in [0.1, 0.3, 0.6, 0.9] {
        let psi = named_state::<f64>(&NamedState::ghz(a)).unwrap();
        let v = pure_state_ree_oracle(&psi, &[0]).unwrap();
        assert!((v - binary_entropy(a * a)).abs() < 1e-12);
    }
    assert!(pure_state_ree_oracle(&ket(&[0, 1, 1]), &[0, 2]).unwrap().abs() < 1e-12);
    let epr = named_state::<f64>(&NamedState::Epr).unwrap();
    assert!(pure_state_ree_oracle(&epr, &[0, 1]).is_err());
    assert!(pure_state_ree_oracle(&epr, &[]).is_err());
}

#[test]
fn rejects_bad_input() {
    let single = QuantumState::<f64>::maximally_mixed(PartyStructure::new(vec![4]).unwrap());
    assert!(relative_entropy_of_entanglement(&single, &OptimizerConfig::default()).is_err());
    let sigma = named_state::<f64>(&NamedState::Epr).unwrap().to_density();
    for cfg in [
        OptimizerConfig { restarts: 0, ..Default::default() },
        OptimizerConfig { ensemble_size: Some(0), ..Default::default() },
        OptimizerConfig { value_tolerance: 0.0, ..Default::default() },
        OptimizerConfig { support_floor: 0.0, ..Default::default() },
    ] {
        assert!(relative_entropy_of_entanglement(&sigma, &cfg).is_err());
    }
}

#[test]
fn value_matches_closest_state() {
    let mut rng = rng_from_seed(11);
    let s = PartyStructure::qubits(3).unwrap();
    let sigma = random_mixed_state::<f64, _>(&s, &mut rng).unwrap();
    for sigma in [sigma, named_state::<f64>(&NamedState::W).unwrap().to_density()] {
        let r = ree(&sigma, &quick());
        let direct = quantum_relative_entropy(&sigma, &r.closest_state()).unwrap();
        assert!((r.value - direct).abs() < 1e-8, "{} vs {direct}", r.value);
        // The closest ensemble must itself be a valid separable ensemble.
        SeparableEnsemble::new(s.clone(), r.closest.terms().to_vec()).unwrap();
    }
}

#[test]
fn deterministic_and_monotone_in_restarts() {
    let psi = haar_random_pure::<f64>(&PartyStructure::qubits(3).unwrap(), 3);
    let sigma = psi.to_density();
    let a = ree(&sigma, &quick());
    let b = ree(&sigma, &quick());
    assert_eq!(a, b);
    let more = ree(&sigma, &OptimizerConfig::default().with_restarts(4));
    assert!(more.value <= a.value);
    assert!(more.restarts_agreeing >= 1);
}

#[test]
fn upper_bound_soundness() {
    let s = PartyStructure::qubits(3).unwrap();
    for i in 0..4 {
        let sigma = haar_random_pure::<f64>(&s, derive_seed(21, i)).to_density();
        let r = ree(&sigma, &quick());
        let mut rng = rng_from_seed(derive_seed(22, i));
        for k in [1, 4, 16, 40] {
            let rho = SeparableEnsemble::<f64>::random(&s, k, &mut rng).unwrap().to_state();
            let bound = quantum_relative_entropy(&sigma, &rho).unwrap();
            assert!(r.value <= bound + 1e-6);
        }
        let mm = QuantumState::maximally_mixed(s.clone());
        assert!(r.value <= quantum_relative_entropy(&sigma, &mm).unwrap() + 1e-6);
    }
}

#[test]
fn two_qubit_pure_states_match_oracle() {
    let s = PartyStructure::qubits(2).unwrap();
    for i in 0..50 {
        let psi = haar_random_pure::<f64>(&s, derive_seed(31, i));
        let oracle = pure_state_ree_oracle(&psi, &[0]).unwrap();
        let r = ree(&psi.to_density(), &quick());
        assert!((r.value - oracle).abs() < 5e-3, "sample {i}: {} vs {oracle}", r.value);
    }
}

#[test]
fn separable_mixtures_are_detected() {
    for i in 0..50 {
        let s = if i % 2 == 0 {
            PartyStructure::qubits(2).unwrap()
        } else {
            PartyStructure::new(vec![2, 2, 2]).unwrap()
        };
        let mut rng = rng_from_seed(derive_seed(41, i));
        let k = 1 + (i as usize % 9);
        let rho = SeparableEnsemble::<f64>::random(&s, k, &mut rng).unwrap().to_state();
        let r = ree(&rho, &quick());
        assert!(r.value < 5e-3, "sample {i}: {}", r.value);
    }
}

#[test]
fn invariant_under_relabeling_and_local_unitaries() {
    let s = PartyStructure::qubits(3).unwrap();
    let sigma = haar_random_pure::<f64>(&s, 51).to_density();
    let base = ree(&sigma, &quick()).value;
    for perm in [[1, 0, 2], [2, 0, 1], [2, 1, 0]] {
        let v = ree(&sigma.permute_parties(&perm).unwrap(), &quick()).value;
        assert!((v - base).abs() < 5e-3, "{perm:?}: {v} vs {base}");
    }
    let mut rng = rng_from_seed(52);
    for _ in 0..2 {
        let us: Vec<_> = (0..3).map(|_| haar_unitary::<f64, _>(2, &mut rng)).collect();
        let v = ree(&sigma.apply_local_unitaries(&us).unwrap(), &quick()).value;
        assert!((v - base).abs() < 5e-3, "{v} vs {base}");
    }
}

#[test]
fn qubit_qutrit_mixed_state() {
    // Isotropic-like mixture of a 2x3 maximally entangled state with noise;
    // the REE can only drop when noise is added.
    let s = PartyStructure::new(vec![2, 3]).unwrap();
    let mut amps = nalgebra::DVector::from_element(6, Complex::new(0.0, 0.0));
    amps[0] = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[4] = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let psi = PureState::new(s.clone(), amps).unwrap();
    let pure = ree(&psi.to_density(), &quick()).value;
    assert!((pure - 1.0).abs() < 1e-3);
    let noisy = psi.to_density().matrix() * Complex::new(0.8, 0.0)
        + QuantumState::<f64>::maximally_mixed(s.clone()).matrix() * Complex::new(0.2, 0.0);
    let noisy = QuantumState::new(s, noisy).unwrap();
    let v = ree(&noisy, &quick()).value;
    assert!(v > 0.0 && v < pure);
}

#[test]
fn single_precision() {
    let sigma = named_state::<f32>(&NamedState::Epr).unwrap().to_density();
    let cfg = OptimizerConfig { support_floor: 1e-6, value_tolerance: 1e-5, ..quick() };
    let r = relative_entropy_of_entanglement(&sigma, &cfg).unwrap();
    assert!((r.value - 1.0).abs() < 1e-2, "{}", r.value);
}
