mod common;

use schatten_core::gate::Gate;
use schatten_core::linalg::{circuit_matrix, exact_schatten2, haar_random_unitary};
use schatten_core::similarity::{fidelity_survey, unitary_similarity_bound};
use schatten_core::Circuit;

fn perturbed(u: &Circuit, angle: f64) -> Circuit {
    let mut v = u.clone();
    for q in 0..u.num_qubits() {
        v.push(Gate::Ry(angle), &[q]).unwrap();
    }
    v
}

#[test]
fn close_unitaries_are_similar_on_most_states() {
    let n = 4;
    let u1 = Circuit::new(n)
        .with(Gate::unitary(&haar_random_unitary(n, 3).unwrap()).unwrap(), &(0..n).collect::<Vec<_>>())
        .unwrap();
    for angle in [0.01, 0.05, 0.1, 0.2] {
        let u2 = perturbed(&u1, angle);
        let d = exact_schatten2(&(circuit_matrix(&u1).unwrap() - circuit_matrix(&u2).unwrap()));
        let survey = fidelity_survey(&u1, &u2, 500, 1).unwrap();
        let eps = (1.0 + 8f64.sqrt()) * d;
        assert!(survey.fraction_at_least(eps) >= 0.8);
        assert!(survey.mean() >= 1.0 - d * d - 3.0 * survey.std_error());
        // the bound at δ = 0.2 inverts the ε above
        assert!((unitary_similarity_bound(eps, 0.2).unwrap() - d).abs() <= 1e-12);
    }
}

#[test]
fn survey_is_deterministic() {
    let u = Circuit::new(2).with(Gate::H, &[0]).unwrap();
    let v = perturbed(&u, 0.3);
    assert_eq!(fidelity_survey(&u, &v, 100, 4).unwrap(), fidelity_survey(&u, &v, 100, 4).unwrap());
}
