mod common;

use common::{mcz_oracle, random_qudit, random_state, random_trigger_set, random_unitary, rng};
use proptest::prelude::*;
use qompress_core::mcz::{bsm, build_o, correction_unitary, u_mcz, xi, BsmLabel};
use qompress_core::optics::{
    evolve_two_photon, route_through_smr, ModeUnitary, PhotonConfig, TwoPhotonState,
};
use qompress_core::probability::{ratio, to_f64};
use qompress_core::qstate::{fidelity_up_to_phase, gram_schmidt_complement, tensor};
use qompress_core::schemes::{
    run_state_dependent, run_state_independent, state_independent_resource, success_probability,
};
use qompress_core::{mcz, BsmModel, Execution, PureState, SchemeKind, TriggerSet, Unitary};

fn dim() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(4), Just(8)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn apply_preserves_norm(seed in any::<u64>(), d1 in 2usize..5, d2 in 2usize..5, on_first in any::<bool>()) {
        let mut r = rng(seed);
        let s = random_state(&mut r, &[d1, d2]);
        let (target, d) = if on_first { (0, d1) } else { (1, d2) };
        let u = Unitary::new(random_unitary(&mut r, d)).unwrap().on([target]);
        let out = u.apply(&s).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_photon_evolution_preserves_norm(seed in any::<u64>(), port in 1usize..4) {
        let mut r = rng(seed);
        let u = ModeUnitary::new(port, random_unitary(&mut r, 2 * port)).unwrap();
        let a = random_qudit(&mut r, port);
        let b = random_qudit(&mut r, port);
        let input = TwoPhotonState::from_ports(&a, &b).unwrap();
        let out = evolve_two_photon(&u, &input).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn disjoint_embeddings_commute_with_tensor(seed in any::<u64>(), d1 in 2usize..5, d2 in 2usize..5) {
        let mut r = rng(seed);
        let a = random_qudit(&mut r, d1);
        let b = random_qudit(&mut r, d2);
        let u = Unitary::new(random_unitary(&mut r, d1)).unwrap();
        let left = u.clone().on([0]).apply(&tensor(&a, &b)).unwrap();
        let right = tensor(&u.apply(&a).unwrap(), &b);
        for (x, y) in left.amps().iter().zip(right.amps()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn gram_schmidt_completes_a_basis(seed in any::<u64>(), dim in 2usize..7, fixed in 1usize..4) {
        let mut r = rng(seed);
        let fixed = fixed.min(dim);
        let u = random_unitary(&mut r, dim);
        let vectors: Vec<PureState> = (0..fixed)
            .map(|i| PureState::new(vec![dim], u.entries()[i * dim..(i + 1) * dim].to_vec()).unwrap())
            .collect();
        let rest = gram_schmidt_complement(&vectors, dim).unwrap();
        prop_assert_eq!(rest.len(), dim - fixed);
        let all: Vec<&PureState> = vectors.iter().chain(&rest).collect();
        for (i, x) in all.iter().enumerate() {
            for (j, y) in all.iter().enumerate() {
                let g = x.inner(y).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g.re - expected).abs() < 1e-10 && g.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_router_probability_is_half(seed in any::<u64>(), d in dim()) {
        let mut r = rng(seed);
        let c = random_trigger_set(&mut r, d);
        let psi = random_qudit(&mut r, d);
        let ancilla = mcz::ancilla_state(&psi, &c).unwrap();
        let routed = route_through_smr(&psi, &ancilla, &c).unwrap();
        prop_assert!((routed.probability - 0.5).abs() < 1e-10);
    }

    #[test]
    fn bsm_probabilities_sum_to_one(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let s = random_state(&mut r, &[d, 2, 2]);
        for model in [BsmModel::Ideal, BsmModel::LinearOptics] {
            let total: f64 = bsm(&s, model).unwrap().iter().map(|o| o.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn o_is_unitary_and_maps_support(seed in any::<u64>(), k in 1usize..7) {
        let mut r = rng(seed);
        let raw = random_qudit(&mut r, k);
        let mut amps = raw.amps().to_vec();
        amps.push(0.0.into());
        let xi = PureState::new(vec![k + 1], amps).unwrap();
        let o = build_o(&xi, k).unwrap();
        prop_assert!(o.matrix().unitarity_defect() < 1e-12);
        let zero = o.apply(&PureState::basis(vec![k + 1], &[k]).unwrap()).unwrap();
        prop_assert!((zero.amps()[0].re - 1.0).abs() < 1e-12);
        let one = o.apply(&xi).unwrap();
        prop_assert!((one.amps()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_dependent_matches_oracle(seed in any::<u64>(), d1 in dim(), d2 in dim()) {
        let mut r = rng(seed);
        let c1 = random_trigger_set(&mut r, d1);
        let c2 = random_trigger_set(&mut r, d2);
        let psi1 = random_qudit(&mut r, d1);
        let psi2 = random_qudit(&mut r, d2);
        let target = mcz_oracle(&tensor(&psi1, &psi2), &c1, &c2);
        let result = run_state_dependent(&psi1, &psi2, &c1, &c2, BsmModel::Ideal).unwrap();
        prop_assert_eq!(result.branches.len(), 4);
        for b in &result.branches {
            prop_assert!(fidelity_up_to_phase(&b.output, &target).unwrap() >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn state_independent_accepts_entangled_inputs(seed in any::<u64>(), d1 in dim(), d2 in dim()) {
        let mut r = rng(seed);
        let c1 = random_trigger_set(&mut r, d1);
        let c2 = random_trigger_set(&mut r, d2);
        let psi = random_state(&mut r, &[d1, d2]);
        let target = mcz_oracle(&psi, &c1, &c2);
        let result = qompress_core::schemes::run_state_independent_joint(
            &psi, &c1, &c2, BsmModel::LinearOptics, Execution::Logical,
        ).unwrap();
        for b in &result.branches {
            prop_assert!(fidelity_up_to_phase(&b.output, &target).unwrap() >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn resource_after_o_tilde_matches_entangled_form(seed in any::<u64>(), d in dim()) {
        let mut r = rng(seed);
        let c = random_trigger_set(&mut r, d);
        let psi = random_qudit(&mut r, d);
        let (out, _) = state_independent_resource(&psi, &c, Execution::Logical, BsmModel::LinearOptics).unwrap();
        let expected = mcz::expected_resource(&psi, &c).unwrap();
        for (x, y) in out.amps().iter().zip(expected.amps()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn branch_probabilities_fill_the_budget(seed in any::<u64>(), d1 in dim(), d2 in dim()) {
        let mut r = rng(seed);
        let c1 = random_trigger_set(&mut r, d1);
        let c2 = random_trigger_set(&mut r, d2);
        let psi1 = random_qudit(&mut r, d1);
        let psi2 = random_qudit(&mut r, d2);
        let result = run_state_dependent(&psi1, &psi2, &c1, &c2, BsmModel::Ideal).unwrap();
        let total: f64 = result.branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - result.postselection.value).abs() < 1e-12);
        for b in &result.branches {
            prop_assert!((b.probability - 1.0 / 16.0).abs() < 1e-12);
        }
    }

    /// The projector correction and the `I - 2|ξ⟩⟨ξ|` correction agree on the
    /// actual collapsed branch states.
    #[test]
    fn projector_and_xi_corrections_agree_on_branches(seed in any::<u64>(), d1 in dim(), d2 in dim()) {
        let mut r = rng(seed);
        let c1 = random_trigger_set(&mut r, d1);
        let c2 = random_trigger_set(&mut r, d2);
        let psi1 = random_qudit(&mut r, d1);
        let psi2 = random_qudit(&mut r, d2);
        let (r1, _) = qompress_core::schemes::state_dependent_resource(&psi1, &c1).unwrap();
        let (r2, _) = qompress_core::schemes::state_dependent_resource(&psi2, &c2).unwrap();
        let joint = tensor(&r1, &r2).permute(&[0, 2, 1, 3]).unwrap();
        let joint = qompress_core::qstate::hadamard().on([3]).apply(&joint).unwrap();

        let xi_form = |psi: &PureState, c: &TriggerSet| -> Unitary {
            // |ξ⟩ embedded in qudit space: β_m / √P on trigger levels
            let x = xi(psi, c).unwrap();
            let d = c.dim();
            let mut v = vec![qompress_core::Complex64::new(0.0, 0.0); d];
            for (i, &m) in c.indices().iter().enumerate() {
                v[m] = x.state.amps()[i];
            }
            let mut m = qompress_core::Matrix::identity(d);
            for row in 0..d {
                for col in 0..d {
                    m.set(row, col, m.get(row, col) - v[row] * v[col].conj() * 2.0);
                }
            }
            Unitary::new(m).unwrap()
        };
        let u1 = xi_form(&psi1, &c1);
        let u2 = xi_form(&psi2, &c2);
        for outcome in bsm(&joint, BsmModel::Ideal).unwrap() {
            let BsmLabel::Bell(bell) = outcome.label else { continue };
            let state = outcome.state.unwrap();
            let (first, second) = bell.corrections();
            let mut projector = state.clone();
            let mut reference = state.clone();
            if first {
                projector = correction_unitary(&c1).on([0]).apply(&projector).unwrap();
                reference = u1.clone().on([0]).apply(&reference).unwrap();
            }
            if second {
                projector = correction_unitary(&c2).on([1]).apply(&projector).unwrap();
                reference = u2.clone().on([1]).apply(&reference).unwrap();
            }
            prop_assert!(fidelity_up_to_phase(&projector, &reference).unwrap() >= 1.0 - 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optical_and_logical_internal_gates_agree(seed in any::<u64>(), d1 in prop_oneof![Just(2usize), Just(4)], d2 in prop_oneof![Just(2usize), Just(4)]) {
        let mut r = rng(seed);
        let c1 = random_trigger_set(&mut r, d1);
        let c2 = random_trigger_set(&mut r, d2);
        let psi1 = random_qudit(&mut r, d1);
        let psi2 = random_qudit(&mut r, d2);
        let logical = run_state_independent(&psi1, &psi2, &c1, &c2, BsmModel::LinearOptics, Execution::Logical).unwrap();
        let optical = run_state_independent(&psi1, &psi2, &c1, &c2, BsmModel::LinearOptics, Execution::Optical).unwrap();
        prop_assert_eq!(&logical.success_probability.exact, &optical.success_probability.exact);
        prop_assert!(optical.success_probability.is_consistent());
        let f = fidelity_up_to_phase(logical.output().unwrap(), optical.output().unwrap()).unwrap();
        prop_assert!(f >= 1.0 - 1e-10);
    }
}

#[test]
fn success_probability_is_input_independent() {
    let mut r = rng(7);
    let c1 = TriggerSet::new(8, [1, 4, 6]).unwrap();
    let c2 = TriggerSet::new(4, [0, 3]).unwrap();
    let mut exact = Vec::new();
    for _ in 0..100 {
        let psi1 = random_qudit(&mut r, 8);
        let psi2 = random_qudit(&mut r, 4);
        let dep = run_state_dependent(&psi1, &psi2, &c1, &c2, BsmModel::LinearOptics).unwrap();
        let ind = run_state_independent(
            &psi1,
            &psi2,
            &c1,
            &c2,
            BsmModel::LinearOptics,
            Execution::Logical,
        )
        .unwrap();
        exact.push((dep.success_probability.exact, ind.success_probability.exact));
    }
    assert!(exact.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(exact[0].0, ratio(1, 8));
    assert_eq!(
        exact[0].1,
        success_probability(SchemeKind::StateIndependent, 3, 2, BsmModel::LinearOptics)
    );
}

#[test]
fn u_mcz_structure_exhaustive() {
    for d1 in 2..=8 {
        for d2 in 2..=8 {
            for m1 in 1..(1u32 << d1) - 1 {
                let c1 = TriggerSet::new(d1, (0..d1).filter(|i| m1 >> i & 1 == 1)).unwrap();
                // one representative second set per size keeps this fast
                for k2 in 1..d2 {
                    let c2 = TriggerSet::new(d2, 0..k2).unwrap();
                    let u = u_mcz(&c1, &c2);
                    let m = u.matrix();
                    assert!(m.is_diagonal(0.0) && m.is_hermitian(0.0));
                    assert!(m.unitarity_defect() < 1e-15);
                    assert!(
                        (m * m).max_deviation(&qompress_core::Matrix::identity(d1 * d2)) == 0.0
                    );
                    let negative = m.diagonal().iter().filter(|z| z.re < 0.0).count();
                    assert_eq!(negative, c1.len() * c2.len());
                }
            }
        }
    }
}

#[test]
fn mesh_matches_case_table_exhaustively() {
    use qompress_core::optics::{build_smr_mesh, smr_abstract};
    for d in 2..=8 {
        for mask in 1..(1u32 << d) - 1 {
            let c = TriggerSet::new(d, (0..d).filter(|i| mask >> i & 1 == 1)).unwrap();
            let mesh = build_smr_mesh(d, c.indices()).unwrap();
            for x in 0..d {
                for y in 0..d {
                    let input = PhotonConfig::new(d, x, d + y).unwrap();
                    let out =
                        evolve_two_photon(&mesh, &TwoPhotonState::from_config(input)).unwrap();
                    let expected = smr_abstract(x, y, &c).unwrap();
                    let amp = out.amplitude(expected);
                    assert!(
                        (amp.re - 1.0).abs() < 1e-12 && amp.im.abs() < 1e-12,
                        "{c} {x} {y}"
                    );
                    assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn two_routers_give_a_quarter() {
    let mut r = rng(11);
    for _ in 0..50 {
        let c1 = random_trigger_set(&mut r, 8);
        let c2 = random_trigger_set(&mut r, 4);
        let psi1 = random_qudit(&mut r, 8);
        let psi2 = random_qudit(&mut r, 4);
        let result = run_state_dependent(&psi1, &psi2, &c1, &c2, BsmModel::LinearOptics).unwrap();
        assert!((result.postselection.value - 0.25).abs() < 1e-10);
        assert!((to_f64(&result.success_probability.exact) - 0.125).abs() == 0.0);
    }
}
